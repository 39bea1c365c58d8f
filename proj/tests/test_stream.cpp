#include <doctest.h>

#include <cmath>
#include <random>

#include "divfree/smooth.hpp"
#include "divfree/stream.hpp"

using namespace divfree;

namespace {

// compactly supported bump potential
ScalarField bump_potential(const Grid& g) {
    ScalarField psi(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
        Vec2 p = g.node(int(q % g.nx), int(q / g.nx));
        psi.v[q] = std::exp(-8.0 * dot(p, p)) * plateau(norm(p), 0.25, 0.45);
    }
    return psi;
}

}  // namespace

TEST_CASE("perp gradient of constants and linear fields") {
    Grid g = square_grid(0.0, 0.0, 1.0, 65);
    ScalarField c(g, 5.0);
    VectorField2 uc = perp_gradient(c);
    for (double v : uc.u1) CHECK(v == 0.0);
    for (double v : uc.u2) CHECK(v == 0.0);

    ScalarField lin(g);
    for (std::size_t q = 0; q < g.size(); ++q)
        lin.v[q] = g.node(int(q % g.nx), int(q / g.nx)).x;
    VectorField2 ul = perp_gradient(lin);  // (d2, -d1) psi = (0, -1)
    for (double v : ul.u1) CHECK(std::fabs(v) <= 1e-12);
    for (double v : ul.u2) CHECK(v == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("discrete divergence of a rotated gradient is bitwise zero") {
    Grid g = square_grid(0.0, 0.0, 1.0, 257);  // h = 2^-8
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ScalarField psi(g);
    for (std::size_t q = 0; q < g.size(); ++q) {
        Vec2 p = g.node(int(q % g.nx), int(q / g.nx));
        psi.v[q] = std::sin(9 * p.x) * std::cos(7 * p.y) + 0.3 * gauss(rng);
    }
    VectorField2 u = perp_gradient(psi);
    CHECK(max_abs_divergence(u) == 0.0);
}

TEST_CASE("divergence of non-solenoidal analytic fields") {
    Grid g = square_grid(0.0, 0.0, 1.0, 129);
    VectorField2 ux = sample_mac(
        g, [](Vec2 p) { return p.x; }, [](Vec2) { return 0.0; });
    ScalarField d = divergence(ux);
    for (double v : d.v) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    VectorField2 swap = sample_mac(
        g, [](Vec2 p) { return p.y; }, [](Vec2 p) { return p.x; });
    CHECK(max_abs_divergence(swap) <= 1e-12);
}

TEST_CASE("stream potential: zero field, bump round-trip, divergence rejection") {
    Grid g = square_grid(0.0, 0.0, 2.0, 257);
    VectorField2 zero(g);
    ScalarField psi0 = stream_potential(zero);
    for (double v : psi0.v) CHECK(v == 0.0);

    ScalarField psi = bump_potential(g);
    VectorField2 u = perp_gradient(psi);
    ScalarField rec = stream_potential(u);
    // recovered potential matches the bump up to an additive constant, O(h^2)
    double shift = rec.v[0] - psi.v[0];
    double worst = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q)
        worst = std::max(worst, std::fabs(rec.v[q] - psi.v[q] - shift));
    CHECK(worst <= g.h * g.h);
    // c0 normalization: the far corner sits at zero
    CHECK(std::fabs(rec.v[0]) <= 1e-12);

    VectorField2 bad = sample_mac(
        g, [](Vec2 p) { return p.x; }, [](Vec2) { return 0.0; });
    CHECK_THROWS_WITH_AS(stream_potential(bad), doctest::Contains("not divergence-free"),
                         std::invalid_argument);
}

TEST_CASE("path independence: column-first integration agrees") {
    Grid g = square_grid(0.0, 0.0, 2.0, 129);
    ScalarField psi = bump_potential(g);
    VectorField2 u = perp_gradient(psi);
    ScalarField rec = stream_potential(u);

    // oracle: integrate along the base column first, then across the rows
    ScalarField alt(g);
    int i0 = g.near_i(0.0), j0 = g.near_j(0.0);
    for (int j = j0 + 1; j < g.ny; ++j)
        alt.at(i0, j) = alt.at(i0, j - 1) + g.h * u.u1[u.i1(i0, j - 1)];
    for (int j = j0 - 1; j >= 0; --j) alt.at(i0, j) = alt.at(i0, j + 1) - g.h * u.u1[u.i1(i0, j)];
    for (int j = 0; j < g.ny; ++j) {
        for (int i = i0 + 1; i < g.nx; ++i)
            alt.at(i, j) = alt.at(i - 1, j) - g.h * u.u2[u.i2(i - 1, j)];
        for (int i = i0 - 1; i >= 0; --i)
            alt.at(i, j) = alt.at(i + 1, j) + g.h * u.u2[u.i2(i, j)];
    }
    double shift = rec.v[g.idx(i0, j0)] - alt.v[g.idx(i0, j0)];
    double worst = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q)
        worst = std::max(worst, std::fabs(rec.v[q] - alt.v[q] - shift));
    CHECK(worst <= g.h * g.h);
}

TEST_CASE("mac component fields carry the staggered lattices") {
    Grid g = square_grid(0.0, 0.0, 1.0, 33);
    VectorField2 u = sample_mac(
        g, [](Vec2 p) { return p.y; }, [](Vec2 p) { return p.x; });
    ScalarField c1 = component_field(u, 1);
    CHECK(c1.grid.ny == g.ny - 1);
    CHECK(c1.grid.y0 == doctest::Approx(g.y0 + g.h / 2));
    ScalarField c2 = component_field(u, 2);
    CHECK(c2.grid.nx == g.nx - 1);
    CHECK(cm_norm_mac(u, 0) == doctest::Approx(0.5).epsilon(0.05));
}
