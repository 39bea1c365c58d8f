#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Data-parallel primitives backing the grid and pair-sweep kernels.
// Every parallel routine has a serial twin with identical result bytes:
// sums are blocked with a fixed block size and the block partials are
// reduced in index order, so thread count never changes the rounding.

namespace divfree::par {

inline constexpr std::size_t kSumBlock = 1024;

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void for_each_serial(std::size_t n, F&& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
void for_each(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < (long long)n; ++i) body(std::size_t(i));
#else
    for_each_serial(n, body);
#endif
}

template <class F>
double blocked_sum_serial(std::size_t n, F&& term) {
    std::size_t nb = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        double s = 0.0;
        std::size_t hi = std::min(n, (b + 1) * kSumBlock);
        for (std::size_t i = b * kSumBlock; i < hi; ++i) s += term(i);
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <class F>
double blocked_sum(std::size_t n, F&& term) {
    std::size_t nb = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partial(nb, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < (long long)nb; ++b) {
        double s = 0.0;
        std::size_t hi = std::min(n, std::size_t(b + 1) * kSumBlock);
        for (std::size_t i = std::size_t(b) * kSumBlock; i < hi; ++i) s += term(i);
        partial[b] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <class F>
double max_serial(std::size_t n, F&& term) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = term(i);
        if (t > m) m = t;
    }
    return m;
}

// max is order-independent, so a plain reduction is already deterministic
template <class F>
double max(std::size_t n, F&& term) {
    double m = 0.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : m)
#endif
    for (long long i = 0; i < (long long)n; ++i) {
        double t = term(std::size_t(i));
        if (t > m) m = t;
    }
    return m;
}

}  // namespace divfree::par
