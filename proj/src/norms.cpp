#include "divfree/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "divfree/parallel.hpp"

namespace divfree {

namespace {

SeminormReport holder_sweep(const std::vector<Vec2>& pts, const std::vector<double>& val,
                            double gamma, const SweepOptions& opts) {
    SeminormReport rep;
    std::vector<std::size_t> sel(pts.size());
    for (std::size_t i = 0; i < sel.size(); ++i) sel[i] = i;
    if (pts.size() > opts.exact_threshold) {
        std::mt19937_64 rng(opts.seed);
        std::shuffle(sel.begin(), sel.end(), rng);
        sel.resize(opts.subsample);
        std::sort(sel.begin(), sel.end());
        rep.exact = false;
    }
    const std::size_t n = sel.size();
    rep.value = par::max(n, [&](std::size_t a) {
        double best = 0.0;
        std::size_t x = sel[a];
        for (std::size_t b = a + 1; b < n; ++b) {
            std::size_t y = sel[b];
            double r = dist(pts[x], pts[y]);
            if (r == 0.0) continue;
            best = std::max(best, std::fabs(val[x] - val[y]) / std::pow(r, gamma));
        }
        return best;
    });
    return rep;
}

}  // namespace

SeminormReport holder_seminorm(const std::vector<Vec2>& points, const std::vector<double>& values,
                               double gamma, const SweepOptions& opts) {
    if (points.size() < 2) throw std::invalid_argument("holder_seminorm: need >= 2 points");
    if (!(gamma > 0.0 && gamma <= 1.0))
        throw std::invalid_argument("holder_seminorm: gamma must lie in (0,1]");
    return holder_sweep(points, values, gamma, opts);
}

SeminormReport holder_seminorm(const ScalarField& f, const std::vector<std::uint8_t>& region,
                               double gamma, const SweepOptions& opts) {
    std::vector<Vec2> pts;
    std::vector<double> val;
    const Grid& g = f.grid;
    for (std::size_t q = 0; q < g.size(); ++q) {
        if (!region[q]) continue;
        pts.push_back(g.node(int(q % g.nx), int(q / g.nx)));
        val.push_back(f.v[q]);
    }
    return holder_seminorm(pts, val, gamma, opts);
}

std::vector<std::uint8_t> full_region(const Grid& g) {
    return std::vector<std::uint8_t>(g.size(), 1);
}

double lp_norm(const ScalarField& f, double p, const std::vector<std::uint8_t>& region) {
    if (p <= 1.0) throw std::invalid_argument("lp_norm: p must be > 1");
    double cell = f.grid.h * f.grid.h;
    double s = par::blocked_sum(f.v.size(), [&](std::size_t q) {
        return region[q] ? std::pow(std::fabs(f.v[q]), p) * cell : 0.0;
    });
    return std::pow(s, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) { return lp_norm(f, p, full_region(f.grid)); }

namespace {

int radius_for_order(int m) { return m <= 2 ? (m == 0 ? 0 : 1) : 2; }

std::vector<std::uint8_t> eroded_or_throw(const Grid& g, const std::vector<std::uint8_t>& region,
                                          int m, const char* who) {
    auto r = erode_margin(g, region, radius_for_order(m));
    for (auto b : r)
        if (b) return r;
    throw std::invalid_argument(std::string(who) + ": region too thin for the stencil");
}

}  // namespace

double wmp_norm(const ScalarField& f, int m, double p, const std::vector<std::uint8_t>& region) {
    if (p <= 1.0) throw std::invalid_argument("wmp_norm: p must be > 1");
    auto inner = eroded_or_throw(f.grid, region, m, "wmp_norm");
    double total = 0.0;
    for (MultiIndex j : multi_indices(m)) {
        ScalarField dj = fd_derivative(f, j);
        double nj = lp_norm(dj, p, inner);
        total += std::pow(nj, p);
    }
    return std::pow(total, 1.0 / p);
}

double wmp_norm(const ScalarField& f, int m, double p) {
    return wmp_norm(f, m, p, full_region(f.grid));
}

double cm_norm(const ScalarField& f, int m, const std::vector<std::uint8_t>& region) {
    auto inner = eroded_or_throw(f.grid, region, m, "cm_norm");
    double best = 0.0;
    for (MultiIndex j : multi_indices(m)) {
        ScalarField dj = fd_derivative(f, j);
        best = std::max(best, par::max(dj.v.size(), [&](std::size_t q) {
                            return inner[q] ? std::fabs(dj.v[q]) : 0.0;
                        }));
    }
    return best;
}

double cm_norm(const ScalarField& f, int m) { return cm_norm(f, m, full_region(f.grid)); }

double cmgamma_norm(const ScalarField& f, int m, double gamma,
                    const std::vector<std::uint8_t>& region, const SweepOptions& opts) {
    double base = cm_norm(f, m, region);
    if (gamma <= 0.0) return base;
    auto inner = eroded_or_throw(f.grid, region, m, "cmgamma_norm");
    double semi = 0.0;
    for (MultiIndex j : multi_indices(m)) {
        if (j.order() != m) continue;
        ScalarField dj = fd_derivative(f, j);
        semi = std::max(semi, holder_seminorm(dj, inner, gamma, opts).value);
    }
    return base + semi;
}

double grad_m_lp(const ScalarField& f, int m, double p, const std::vector<std::uint8_t>& region) {
    auto inner = eroded_or_throw(f.grid, region, m, "grad_m_lp");
    double total = 0.0;
    for (MultiIndex j : multi_indices(m)) {
        if (j.order() != m) continue;
        ScalarField dj = fd_derivative(f, j);
        total += std::pow(lp_norm(dj, p, inner), p);
    }
    return std::pow(total, 1.0 / p);
}

double grad_m_lp(const ScalarField& f, int m, double p) {
    return grad_m_lp(f, m, p, full_region(f.grid));
}

}  // namespace divfree
