#include "divfree/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace divfree {

namespace {

// measure of (union of intervals) intersected with (-inf, t]
double measure_below(const std::vector<Interval>& iv, double t) {
    double s = 0.0;
    for (const Interval& I : iv) {
        if (t <= I.lo) break;
        s += std::min(t, I.hi) - I.lo;
    }
    return s;
}

}  // namespace

double CompressionMap::operator()(double t) const {
    return measure_below(intervals, t) - measure_below(intervals, 0.0);
}

CompressionMap compression_map(std::vector<Interval> intervals) {
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const Interval& I : intervals)
        if (!(I.hi > I.lo)) throw std::invalid_argument("compression_map: empty interval");
    for (std::size_t i = 0; i + 1 < intervals.size(); ++i)
        if (intervals[i].hi >= intervals[i + 1].lo)
            throw std::invalid_argument("compression_map: intervals overlap or share closure");
    CompressionMap eta;
    eta.intervals = std::move(intervals);
    for (const Interval& I : eta.intervals) eta.total_length += I.length();
    double base = measure_below(eta.intervals, 0.0);
    for (const Interval& I : eta.intervals) {
        // on I: eta(t) = measure_below(t) - base = (t - I.lo) + below_I - base
        double below = measure_below(eta.intervals, I.lo);
        eta.offsets.push_back(I.lo - below + base);
    }
    return eta;
}

std::vector<Interval> image_cover(const std::vector<double>& values, double eps,
                                  double budget_fraction) {
    if (values.empty()) throw std::invalid_argument("image_cover: no sampled values");
    if (!(eps > 0.0)) throw std::invalid_argument("image_cover: budget must be positive");
    std::vector<double> v = values;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());

    struct Cluster {
        double lo, hi;
    };
    std::vector<Cluster> cl;
    // collapse numerically identical values up front
    double resolution = 1e-12 * std::max(1.0, std::fabs(v.back() - v.front()));
    for (double t : v) {
        if (!cl.empty() && t - cl.back().hi <= resolution)
            cl.back().hi = t;
        else
            cl.push_back({t, t});
    }

    auto spans = [&]() {
        double s = 0.0;
        for (const Cluster& c : cl) s += c.hi - c.lo;
        return s;
    };
    if (spans() >= eps)
        throw std::runtime_error("image_cover: budget " + std::to_string(eps) +
                                 " below the minimal achievable total length " +
                                 std::to_string(spans()));

    // greedy merge: absorb the smallest gap while it stays below the fraction
    // of the remaining budget
    while (cl.size() > 1) {
        double remaining = eps - spans();
        std::size_t arg = 0;
        double gmin = std::numeric_limits<double>::max();
        for (std::size_t i = 0; i + 1 < cl.size(); ++i) {
            double gp = cl[i + 1].lo - cl[i].hi;
            if (gp < gmin) {
                gmin = gp;
                arg = i;
            }
        }
        if (gmin >= budget_fraction * remaining) break;
        cl[arg].hi = cl[arg + 1].hi;
        cl.erase(cl.begin() + arg + 1);
    }

    double remaining = eps - spans();
    if (remaining <= 0.0)
        throw std::runtime_error("image_cover: budget exhausted, minimal achievable length " +
                                 std::to_string(spans()));
    double pad = remaining / (4.0 * double(cl.size()));
    for (std::size_t i = 0; i + 1 < cl.size(); ++i)
        pad = std::min(pad, 0.25 * (cl[i + 1].lo - cl[i].hi));

    std::vector<Interval> out;
    for (const Cluster& c : cl) out.push_back({c.lo - pad, c.hi + pad});
    return out;
}

std::vector<Interval> image_cover(const ScalarField& psi, const CompactSet& K, double eps,
                                  double budget_fraction) {
    if (!(psi.grid == K.grid)) throw std::invalid_argument("image_cover: psi/K grid mismatch");
    std::vector<double> vals;
    vals.reserve(K.nodes.size());
    for (std::size_t q : K.nodes) vals.push_back(psi.v[q]);
    return image_cover(vals, eps, budget_fraction);
}

Jet compress_jet(const Jet& jet, const CompressionMap& eta) {
    if (!jet.zero_higher())
        throw std::invalid_argument("compress_jet: jet has nonzero higher entries");
    Jet out = jet;
    for (double& t : out.values[0]) t = eta(t);
    return out;
}

}  // namespace divfree
