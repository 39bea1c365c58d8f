#pragma once

#include <string>
#include <vector>

#include "divfree/compression.hpp"
#include "divfree/geometry.hpp"
#include "divfree/jets.hpp"

namespace divfree {

/// Discrete d-regular measure on K: weighted samples approximating H^d|_K,
/// with the measured two-sided ball-count regularity band.
struct RegularMeasure {
    std::vector<Vec2> points;
    std::vector<double> w;
    double d = 1.0;
    double reg_c = 0.0, reg_C = 0.0;  // measured band c r^d <= mu(B_r) <= C r^d
    bool regular_warning = false;     // C/c above 1e3

    double total() const;
    double lp_norm(const std::vector<double>& values, double p) const;
};

/// Samples a measure from K's primitives: polylines get mass (segment length)^d
/// per segment spread uniformly (the parameter pushforward for Koch curves at
/// d = 1/theta), disks get their boundary circle at d = 1, d = 0 gets one atom
/// per primitive. Ball-count constants are probed and reported.
RegularMeasure sample_measure(const CompactSet& K, double d, int n_points);

/// Approximating-sequence witness of membership in B^{p,q}_beta(K):
/// per-level jets f_nu (order [beta]) and scalars a_nu.
struct BesovSequence {
    double beta = 1.0, p = 2.0, q = 2.0;
    int k = 0;   // target order, k < beta <= k+1
    int jb = 0;  // [beta], the level-jet order
    std::vector<Jet> jets;
    std::vector<double> a;

    std::size_t levels() const { return jets.size(); }
};

int besov_target_order(double beta);  // ceil(beta) - 1
int besov_level_order(double beta);   // integer part [beta]

/// nu_max truncation at the discretization scale: largest nu with 2^-nu >= 4h.
int besov_nu_max(double h);

struct ConditionEntry {
    int nu = 0;
    char cond = 'a';
    int j1 = 0, j2 = 0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct ConditionReport {
    std::vector<ConditionEntry> entries;
    bool valid = true;       // all ratios <= 1 + 1e-9
    double worst_ratio = 0.0;
    double dyadic_exponent = 0.0;  // the 2^{e nu} factor used in c)
};

/// Checks conditions a)-d) level by level and reports every LHS/RHS ratio.
/// The dyadic factor in c) defaults to the d-regular normalization 2^{d nu}
/// (pass exponent >= 0 to override, e.g. 2 for the verbatim definition).
ConditionReport besov_conditions(const Jet& f, const BesovSequence& seq, const RegularMeasure& mu,
                                 double exponent = -1.0);

struct ReduceResult {
    BesovSequence seq;
    double hardy_ratio = 0.0;  // sum(a~^q) / sum(a^q)
    double constant_used = 0.0;
};

/// Zero-derivative reduction: drops the higher level-jet entries, keeping
/// a~_nu = a_nu + C sum_{1<=|l|<=beta} 2^{-nu|l|} * 2 * sum_{i<=nu} a_i, which
/// stays summable by Hardy's inequality. Target must have zero higher entries.
ReduceResult zero_derivative_reduce(const Jet& target, const BesovSequence& seq,
                                    const RegularMeasure& mu);

struct CompressResult {
    Jet f_eps;
    BesovSequence seq_eps;
    double epsilon = 0.0;  // effective budget (total interval length)
    double norm_bound = 0.0;  // (sum a_{eps,nu}^q)^(1/q)
};

/// Monotone compression in the Besov scale: composes every level with eta and
/// rescales the witness sequence by the closed-form a_{eps,nu}. Requires a
/// reduced sequence and a zero-higher target.
CompressResult besov_compress(const Jet& f, const BesovSequence& seq, const CompressionMap& eta,
                              const RegularMeasure& mu);

void dump_measure_csv(const RegularMeasure& mu, const std::string& path);

}  // namespace divfree
