#pragma once

#include <vector>

#include "divfree/geometry.hpp"
#include "divfree/jets.hpp"

namespace divfree {

/// Monotone compression eta(t) = integral over [0,t] of the indicator of the
/// interval union: piecewise linear, slope 1 inside the intervals, flat outside.
/// 1-Lipschitz with ||eta||_inf <= total_length, and eta(t) = t - c_i on I_i.
struct CompressionMap {
    std::vector<Interval> intervals;  // sorted, disjoint closures
    std::vector<double> offsets;      // c_i per interval
    double total_length = 0.0;

    double operator()(double t) const;
    std::size_t size() const { return intervals.size(); }
};

CompressionMap compression_map(std::vector<Interval> intervals);

/// Step (S3) value cover: sorted disjoint open intervals containing every
/// sampled value, total length < eps. Clusters are merged greedily while the
/// smallest gap is below budget_fraction of the remaining budget; each cluster
/// is padded by min(remaining/(4N), gap/4).
std::vector<Interval> image_cover(const std::vector<double>& values, double eps,
                                  double budget_fraction = 0.25);
/// Convenience: cover of psi(K) sampled on the K nodes.
std::vector<Interval> image_cover(const ScalarField& psi, const CompactSet& K, double eps,
                                  double budget_fraction = 0.25);

/// eta composed with the zeroth entry; higher entries must vanish already.
Jet compress_jet(const Jet& jet, const CompressionMap& eta);

}  // namespace divfree
