#include <doctest.h>

#include <cmath>
#include <random>

#include "divfree/koch.hpp"

using namespace divfree;

TEST_CASE("a = 1/4 degenerates to the straight unit segment") {
    KochCurve c = koch_curve(0.25, 3);
    CHECK(c.alpha == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(c.theta == doctest::Approx(1.0));
    for (const Vec2& v : c.vertices) CHECK(std::fabs(v.y) <= 1e-12);
    CHECK(c.vertices.back().x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("segment ratio outside [1/4, 1/2) is rejected") {
    CHECK_THROWS_AS(koch_curve(0.2, 2), std::invalid_argument);
    CHECK_THROWS_AS(koch_curve(0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(koch_curve(0.3, -1), std::invalid_argument);
}

TEST_CASE("generator invariants: segment count, spacing, endpoints") {
    for (double a : {0.3, 0.35, 0.45}) {
        for (int k : {1, 3, 5}) {
            KochCurve c = koch_curve(a, k);
            CHECK(c.vertices.size() == std::size_t(std::pow(4, k)) + 1);
            double step = c.seg_len();
            for (std::size_t i = 0; i + 1 < c.vertices.size(); i += 7)
                CHECK(dist(c.vertices[i], c.vertices[i + 1]) ==
                      doctest::Approx(step).epsilon(1e-9));
            CHECK(dist(c.vertices.front(), c.vertices.back()) ==
                  doctest::Approx(1.0).epsilon(1e-9));
            // classic Koch check: a = 1/3 would give turn angle 60 degrees
        }
    }
    KochCurve classic = koch_curve(1.0 / 3.0, 1);
    CHECK(classic.alpha == doctest::Approx(M_PI / 3).epsilon(1e-9));
}

TEST_CASE("bi-Holder band over random parameter pairs, stable across orders") {
    const double a = 0.3;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    auto band = [&](const KochCurve& c) {
        double lo = 1e300, hi = 0.0;
        for (int t = 0; t < 10000; ++t) {
            double s = uni(rng), u = uni(rng);
            if (std::fabs(s - u) < 1e-9) continue;
            double ratio = dist(c.point(s), c.point(u)) / std::pow(std::fabs(s - u), c.theta);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        return std::pair{lo, hi};
    };

    KochCurve c4 = koch_curve(a, 4);
    auto [lo4, hi4] = band(c4);
    CHECK(lo4 > 0.0);
    CHECK(std::isfinite(hi4));
    CHECK(hi4 / lo4 < 50.0);  // finite C with C^2 = hi/lo

    KochCurve c5 = koch_curve(a, 5);
    auto [lo5, hi5] = band(c5);
    // lower bound stays away from zero and moves by < 2x when the order grows
    CHECK(lo5 > 0.0);
    CHECK(lo4 / lo5 < 2.0);
    CHECK(lo5 / lo4 < 2.0);
    CHECK(hi5 / hi4 < 2.0);

    // Cauchy behavior in the theta-Holder metric: sup |g_k - g_{k+1}| / step^theta bounded
    double sup_diff = 0.0;
    for (int t = 0; t <= 2000; ++t) {
        double s = t / 2000.0;
        sup_diff = std::max(sup_diff, dist(c4.point(s), c5.point(s)));
    }
    // successive curves differ by at most the generator deviation at scale a^4
    CHECK(sup_diff <= 2.0 * std::pow(a, 4));
}

TEST_CASE("nearest_parameter inverts the curve map on vertices") {
    KochCurve c = koch_curve(0.35, 3);
    for (std::size_t i = 0; i < c.vertices.size(); i += 5) {
        double t = c.nearest_parameter(c.vertices[i]);
        CHECK(dist(c.point(t), c.vertices[i]) <= 1e-12);
    }
}
