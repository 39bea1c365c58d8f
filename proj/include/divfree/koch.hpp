#pragma once

#include <vector>

#include "divfree/geometry.hpp"

namespace divfree {

/// Koch-type curve from the four-segment generator: segments of length a with
/// turn angles +alpha, -2*alpha, +alpha, scaled so the endpoints are distance 1
/// apart. a = 1/4 gives alpha = 0 (the straight segment); a -> 1/2 gives
/// alpha -> pi/2. The limit curve is bi-Holder with exponent theta = |log_4 a|.
struct KochCurve {
    double a = 0.25;
    int order = 0;
    double alpha = 0.0;         // turn angle at the outer vertices
    double theta = 1.0;         // Holder exponent in (1/2, 1]
    std::vector<Vec2> vertices; // 4^order + 1 points, endpoints (0,0) and (1,0)

    double seg_len() const;               // a^order
    Vec2 point(double t) const;           // constant-speed parametrization on [0,1]
    double nearest_parameter(Vec2 p) const;
    Polyline polyline(double width = 0.0) const;
};

/// Builds the order-k curve. alpha is solved by bisection (tolerance 1e-12)
/// from the constraint that four chained length-a segments span distance 1.
/// Throws unless a lies in [1/4, 1/2).
KochCurve koch_curve(double a, int order);

}  // namespace divfree
