#include "divfree/koch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace divfree {

double KochCurve::seg_len() const { return std::pow(a, order); }

Vec2 KochCurve::point(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    std::size_t nseg = vertices.size() - 1;
    double s = t * double(nseg);
    std::size_t k = std::min(nseg - 1, std::size_t(s));
    double frac = s - double(k);
    return vertices[k] + frac * (vertices[k + 1] - vertices[k]);
}

double KochCurve::nearest_parameter(Vec2 p) const {
    std::size_t nseg = vertices.size() - 1;
    double best = std::numeric_limits<double>::max();
    double bestt = 0.0;
    for (std::size_t k = 0; k < nseg; ++k) {
        Vec2 a0 = vertices[k], b0 = vertices[k + 1];
        Vec2 ab = b0 - a0;
        double len2 = dot(ab, ab);
        double u = len2 > 0 ? std::clamp(dot(p - a0, ab) / len2, 0.0, 1.0) : 0.0;
        double d = dist(p, a0 + u * ab);
        if (d < best) {
            best = d;
            bestt = (double(k) + u) / double(nseg);
        }
    }
    return bestt;
}

Polyline KochCurve::polyline(double width) const { return Polyline{vertices, width}; }

KochCurve koch_curve(double a, int order) {
    if (!(a >= 0.25 && a < 0.5))
        throw std::invalid_argument("koch_curve: segment ratio must lie in [1/4, 1/2)");
    if (order < 0) throw std::invalid_argument("koch_curve: order must be >= 0");

    KochCurve c;
    c.a = a;
    c.order = order;
    c.theta = std::fabs(std::log(a) / std::log(4.0));

    // endpoint-distance-1 constraint: a*(2 + 2*cos(alpha)) = 1
    double lo = 0.0, hi = std::acos(-1.0) / 2;
    auto span = [&](double al) { return a * (2.0 + 2.0 * std::cos(al)); };
    if (span(lo) <= 1.0) {
        c.alpha = 0.0;  // a == 1/4 up to rounding
    } else {
        while (hi - lo > 1e-12) {
            double mid = 0.5 * (lo + hi);
            (span(mid) > 1.0 ? lo : hi) = mid;
        }
        c.alpha = 0.5 * (lo + hi);
    }

    // direction rewrite d -> [d, d+alpha, d-alpha, d], then integrate
    std::vector<double> dirs{0.0};
    for (int k = 0; k < order; ++k) {
        std::vector<double> next;
        next.reserve(dirs.size() * 4);
        for (double d : dirs) {
            next.push_back(d);
            next.push_back(d + c.alpha);
            next.push_back(d - c.alpha);
            next.push_back(d);
        }
        dirs.swap(next);
    }
    double step = c.seg_len();
    c.vertices.clear();
    c.vertices.reserve(dirs.size() + 1);
    Vec2 p{0.0, 0.0};
    c.vertices.push_back(p);
    for (double d : dirs) {
        p = p + step * Vec2{std::cos(d), std::sin(d)};
        c.vertices.push_back(p);
    }
    return c;
}

}  // namespace divfree
