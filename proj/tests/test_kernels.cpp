#include <doctest.h>

#include <random>

#include "divfree/geometry.hpp"
#include "divfree/parallel.hpp"

using namespace divfree;

TEST_CASE("blocked sums are bitwise identical, serial vs parallel") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> data(100003);
    for (double& v : data) v = uni(rng) * std::exp(8 * uni(rng));
    double s1 = par::blocked_sum_serial(data.size(), [&](std::size_t i) { return data[i]; });
    double s2 = par::blocked_sum(data.size(), [&](std::size_t i) { return data[i]; });
    CHECK(s1 == s2);
    double m1 = par::max_serial(data.size(), [&](std::size_t i) { return data[i]; });
    double m2 = par::max(data.size(), [&](std::size_t i) { return data[i]; });
    CHECK(m1 == m2);
}

TEST_CASE("distance transform parallel kernel equals the serial reference bitwise") {
    Grid g = square_grid(0.0, 0.0, 2.0, 257);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    std::vector<std::uint8_t> m(g.size(), 0);
    for (int t = 0; t < 300; ++t) m[pick(rng)] = 1;
    DistanceField a = distance_transform(g, m, true);
    DistanceField b = distance_transform(g, m, false);
    CHECK(a.dist.v == b.dist.v);
    CHECK(a.site == b.site);
}

TEST_CASE("repeated parallel runs are deterministic") {
    Grid g = square_grid(0.0, 0.0, 2.0, 129);
    CompactSet K = make_compact_set({Disk{{0.1, -0.2}, 0.18}}, g);
    DistanceField first = distance_field(K);
    for (int t = 0; t < 3; ++t) {
        DistanceField again = distance_field(K);
        CHECK(first.dist.v == again.dist.v);
    }
}
