#pragma once

#include <cmath>

namespace divfree {

// C-infinity transition 0 -> 1 on [0, 1]
inline double smoothstep_exp(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

/// Even plateau profile: 1 on |t| <= core, 0 on |t| >= outer, smooth between.
inline double plateau(double t, double core, double outer) {
    double u = std::fabs(t);
    if (u <= core) return 1.0;
    if (u >= outer) return 0.0;
    return smoothstep_exp((outer - u) / (outer - core));
}

/// Radial mollifier profile exp(-1/(1-r^2)) normalized to value 1 at r=0,
/// supported on r < 1. Discrete kernels normalize the sampled weights.
inline double mollifier_profile(double r) {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r) + 1.0);
}

}  // namespace divfree
