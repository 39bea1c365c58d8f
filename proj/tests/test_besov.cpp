#include <doctest.h>

#include <cmath>
#include <random>

#include "divfree/besov.hpp"
#include "divfree/koch.hpp"

using namespace divfree;

namespace {

CompactSet two_disks(const Grid& g) {
    return make_compact_set({Disk{{-0.4, 0.0}, 0.12}, Disk{{0.4, 0.0}, 0.12}}, g);
}

// witness with f_nu = f and minimal measured a_nu (shared with the scenarios)
BesovSequence witness(const Jet& f, const RegularMeasure& mu, double beta, double p, double q,
                      int levels) {
    BesovSequence seq;
    seq.beta = beta;
    seq.p = p;
    seq.q = q;
    seq.k = besov_target_order(beta);
    seq.jb = besov_level_order(beta);
    Jet level = Jet::zero(seq.jb, f.points);
    level.values[0] = f.values[0];
    seq.jets.assign(levels, level);
    seq.a.assign(levels, 1.0);
    ConditionReport probe = besov_conditions(f, seq, mu);
    std::vector<double> need(levels, 0.0);
    for (const ConditionEntry& e : probe.entries)
        need[e.nu] = std::max(need[e.nu], e.lhs / std::max(e.rhs, 1e-300));
    for (int nu = 0; nu < levels; ++nu) seq.a[nu] = std::max(need[nu] * 1.0000001, 1e-14);
    return seq;
}

}  // namespace

TEST_CASE("segment measure: interior ball ratios sit in [1, 2]") {
    Grid g = square_grid(0.5, 0.0, 2.0, 129);
    CompactSet K = make_compact_set({Polyline{{{0.0, 0.0}, {1.0, 0.0}}, 0.0}}, g);
    RegularMeasure mu = sample_measure(K, 1.0, 400);
    CHECK(mu.total() == doctest::Approx(1.0).epsilon(1e-6));
    // exact arc-length oracle at interior probes
    for (double x : {0.3, 0.5, 0.7}) {
        for (double r : {0.05, 0.1, 0.2}) {
            double ball = 0.0;
            for (std::size_t i = 0; i < mu.points.size(); ++i)
                if (dist(mu.points[i], {x, 0.0}) < r) ball += mu.w[i];
            double exact = std::min(x + r, 1.0) - std::max(x - r, 0.0);
            CHECK(ball == doctest::Approx(exact).epsilon(0.02));
            CHECK(ball / r >= 1.0 - 0.05);
            CHECK(ball / r <= 2.0 + 0.05);
        }
    }
    CHECK_FALSE(mu.regular_warning);
}

TEST_CASE("single point at d = 0 is one unit atom") {
    Grid g = square_grid(0.0, 0.0, 1.0, 65);
    CompactSet K = make_compact_set({Polyline{{{0.1, 0.1}}, 0.0}}, g);
    RegularMeasure mu = sample_measure(K, 0.0, 10);
    REQUIRE(mu.points.size() == 1);
    CHECK(mu.w[0] == 1.0);
}

TEST_CASE("koch measure carries a positive regularity band at d = 1/theta") {
    KochCurve kc = koch_curve(0.35, 4);
    Grid g = square_grid(0.5, 0.2, 2.0, 257);
    CompactSet K = make_compact_set({kc.polyline()}, g);
    RegularMeasure mu = sample_measure(K, 1.0 / kc.theta, 600);
    CHECK(mu.reg_c > 0.0);
    CHECK(mu.reg_C < 1e3 * mu.reg_c);
    CHECK(mu.total() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("besov conditions: zero data, separation kills c), scaled a flags") {
    Grid g = square_grid(0.0, 0.0, 2.0, 129);
    CompactSet K = two_disks(g);
    RegularMeasure mu = sample_measure(K, 1.0, 300);
    double beta = 2.0 - 1.0 / 3.0, p = 3.0;

    Jet zero = Jet::zero(besov_target_order(beta), mu.points);
    BesovSequence zs = witness(zero, mu, beta, p, p, 6);
    std::fill(zs.a.begin(), zs.a.end(), 0.0);
    ConditionReport zr = besov_conditions(zero, zs, mu);
    CHECK(zr.valid);
    for (const ConditionEntry& e : zr.entries) CHECK(e.ratio == 0.0);
    CHECK(zr.dyadic_exponent == doctest::Approx(1.0));

    // two-valued f: near-diagonal c) integrals vanish once 2^-nu < separation
    Jet f = Jet::zero(besov_target_order(beta), mu.points);
    for (std::size_t s = 0; s < mu.points.size(); ++s)
        f.values[0][s] = mu.points[s].x < 0 ? 0.0 : 1.0;
    BesovSequence seq = witness(f, mu, beta, p, p, 6);
    ConditionReport rep = besov_conditions(f, seq, mu);
    CHECK(rep.valid);
    double separation = 0.8 - 0.24;  // gap between the disk boundaries
    for (const ConditionEntry& e : rep.entries) {
        if (e.cond != 'c') continue;
        if (std::pow(2.0, -e.nu) < separation) CHECK(e.lhs == 0.0);
    }

    // halving some a_nu flags exactly the touched levels
    BesovSequence badseq = seq;
    badseq.a[0] *= 0.5;
    ConditionReport bad = besov_conditions(f, badseq, mu);
    CHECK_FALSE(bad.valid);
    bool flagged_zero = false;
    for (const ConditionEntry& e : bad.entries)
        if (e.ratio > 1.0 + 1e-9) {
            CHECK(e.nu == 0);
            flagged_zero = true;
        }
    CHECK(flagged_zero);
}

TEST_CASE("zero-derivative reduction: idempotent data, cleanup, Hardy bound") {
    Grid g = square_grid(0.0, 0.0, 2.0, 129);
    CompactSet K = two_disks(g);
    RegularMeasure mu = sample_measure(K, 1.0, 250);
    double beta = 1.5, p = 3.0;
    Jet f = Jet::zero(besov_target_order(beta), mu.points);
    for (std::size_t s = 0; s < mu.points.size(); ++s)
        f.values[0][s] = mu.points[s].x < 0 ? 0.0 : 0.5;

    BesovSequence seq = witness(f, mu, beta, p, p, 7);
    // inject nonzero level derivatives; the target still has zero higher entries
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-0.01, 0.01);
    for (Jet& jn : seq.jets)
        for (std::size_t mi = 1; mi < jn.values.size(); ++mi)
            for (double& v : jn.values[mi]) v = uni(rng);
    // re-fit a to make the dirty witness admissible
    ConditionReport probe = besov_conditions(f, seq, mu);
    for (const ConditionEntry& e : probe.entries)
        seq.a[e.nu] = std::max(seq.a[e.nu], e.lhs / std::max(e.rhs / seq.a[e.nu], 1e-300) * 1.001);

    ReduceResult red = zero_derivative_reduce(f, seq, mu);
    for (const Jet& jn : red.seq.jets) CHECK(jn.zero_higher());
    ConditionReport after = besov_conditions(f, red.seq, mu);
    CHECK(after.valid);
    CHECK(red.hardy_ratio >= 1.0);
    CHECK(std::isfinite(red.hardy_ratio));

    // geometric a_nu stays l^q-summable with a bounded ratio
    BesovSequence geo = witness(f, mu, beta, p, p, 7);
    for (std::size_t nu = 0; nu < geo.a.size(); ++nu)
        geo.a[nu] = std::max(geo.a[nu], std::pow(2.0, -double(nu)));
    ReduceResult redg = zero_derivative_reduce(f, geo, mu);
    double s_old = 0.0, s_new = 0.0;
    for (std::size_t nu = 0; nu < geo.a.size(); ++nu) {
        s_old += std::pow(geo.a[nu], p);
        s_new += std::pow(redg.seq.a[nu], p);
    }
    CHECK(redg.hardy_ratio == doctest::Approx(s_new / s_old));
    CHECK(redg.hardy_ratio < 1e4);

    // nonzero target higher derivatives are rejected
    Jet badf = f;
    badf.values[1][0] = 1.0;
    CHECK_THROWS_AS(zero_derivative_reduce(badf, seq, mu), std::invalid_argument);
}

TEST_CASE("besov compression: closed-form scalars, dominance, monotone bound") {
    Grid g = square_grid(0.0, 0.0, 2.0, 129);
    CompactSet K = two_disks(g);
    RegularMeasure mu = sample_measure(K, 1.0, 250);
    double beta = 2.0 - 1.0 / 3.0, p = 3.0;
    Jet f = Jet::zero(besov_target_order(beta), mu.points);
    for (std::size_t s = 0; s < mu.points.size(); ++s)
        f.values[0][s] = mu.points[s].x < 0 ? 0.0 : 1.0;
    BesovSequence seq = witness(f, mu, beta, p, p, 6);

    // eps = 0: empty interval family compresses everything to zero
    CompressResult z = besov_compress(f, seq, compression_map({}), mu);
    for (double v : z.f_eps.values[0]) CHECK(v == 0.0);
    CHECK(z.norm_bound <= 1e-12);

    double prev = 1e300;
    for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
        auto iv = image_cover(f.values[0], eps);
        CompressionMap eta = compression_map(iv);
        CompressResult cr = besov_compress(f, seq, eta, mu);
        // pointwise dominance and the sup bound, exactly
        for (std::size_t nu = 0; nu < seq.levels(); ++nu) {
            for (std::size_t a = 0; a < mu.points.size(); a += 7)
                for (std::size_t b = a + 1; b < mu.points.size(); b += 11) {
                    double lhs = std::fabs(cr.seq_eps.jets[nu].values[0][a] -
                                           cr.seq_eps.jets[nu].values[0][b]);
                    double rhs = std::fabs(seq.jets[nu].values[0][a] - seq.jets[nu].values[0][b]);
                    CHECK(lhs <= rhs + 1e-15);
                }
            for (double v : cr.seq_eps.jets[nu].values[0])
                CHECK(std::fabs(v) <= cr.epsilon + 1e-15);
        }
        // the compressed witness passes the conditions
        CHECK(besov_conditions(cr.f_eps, cr.seq_eps, mu).valid);
        CHECK(cr.norm_bound <= prev + 1e-15);
        prev = cr.norm_bound;
    }

    // per-level cap min(a_nu, C 2^{2nu} eps) is monotone in eps
    for (std::size_t nu = 1; nu < seq.levels(); ++nu) {
        double big = std::min(seq.a[nu], std::pow(2.0, 2.0 * nu) * 0.5);
        double small = std::min(seq.a[nu], std::pow(2.0, 2.0 * nu) * 0.25);
        CHECK(small <= big);
    }

    // unreduced sequences are rejected
    BesovSequence dirty = seq;
    dirty.jets[0].values[1][0] = 1.0;
    CHECK_THROWS_AS(besov_compress(f, dirty, compression_map({}), mu), std::invalid_argument);
}
