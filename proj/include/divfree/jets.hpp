#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divfree/geometry.hpp"
#include "divfree/whitney.hpp"

namespace divfree {

struct MultiIndex {
    int j1 = 0, j2 = 0;
    int order() const { return j1 + j2; }
};

/// Canonical enumeration of multi-indices with |j| <= m: blocks of equal order,
/// j2 ascending inside a block. Index of (j1,j2) is o(o+1)/2 + j2, o = j1+j2.
std::vector<MultiIndex> multi_indices(int m);
inline int multi_index_count(int m) { return (m + 1) * (m + 2) / 2; }
inline int multi_index_pos(int j1, int j2) {
    int o = j1 + j2;
    return o * (o + 1) / 2 + j2;
}
double factorial_mi(MultiIndex j);
double pow_mi(Vec2 v, MultiIndex j);

/// Order-m jet on a sample set: candidate derivative values f^(j) per sample,
/// one array per canonical multi-index.
struct Jet {
    int order = 0;
    std::vector<Vec2> points;
    std::vector<std::vector<double>> values;  // [multi index][sample]

    static Jet zero(int m, std::vector<Vec2> pts);
    std::size_t n_samples() const { return points.size(); }
    double value(int mi, std::size_t s) const { return values[mi][s]; }
    /// true when every entry with |j| >= 1 vanishes
    bool zero_higher() const;
};

/// P^(m)_y f(x): Taylor expansion of the jet centered at sample y.
double taylor_poly(const Jet& jet, std::size_t y, int m, Vec2 x);
/// D^theta P^(m)_y f(x)
double taylor_poly_derivative(const Jet& jet, std::size_t y, int m, MultiIndex theta, Vec2 x);
/// Whitney remainder R_j f(x,y) between two samples.
double remainder(const Jet& jet, MultiIndex j, std::size_t x, std::size_t y);

struct SweepOptions {
    std::size_t exact_threshold = 20000;  // exact O(N^2) below this sample count
    std::size_t subsample = 4000;         // points kept by the stratified fallback
    std::uint64_t seed = 1234;
};

struct JetNormReport {
    double sup_norm = 0.0;
    double remainder_ratio = 0.0;
    double jet_norm = 0.0;
    bool exact = true;  // false when the stratified fallback ran
};

/// C^{m,gamma} jet norm: sup over samples and pairs of
/// max(|f^(j)|, |R_j|/|x-y|^{m+gamma-|j|}).
JetNormReport jet_norm(const Jet& jet, int m, double gamma, const SweepOptions& opts = {});

struct ExtensionField {
    ScalarField F;
    std::vector<std::uint8_t> resolved;  // node covered by K or an accepted cube
};

/// Whitney extension E^(m): f^(0) on the K samples, sum_k phi_k P^(m)_{y_k}
/// elsewhere. Jet samples must be exactly K's samples.
ExtensionField whitney_extend(const Jet& jet, const WhitneyDecomposition& dec, int m,
                              const Grid& grid, const CompactSet& K);

/// Sobolev-flavoured extension E^(m-1) for jets with vanishing higher entries
/// (rejects anything else). Off K it reduces to sum_k phi_k f^(0)(y_k).
ExtensionField whitney_extend_sobolev(const Jet& jet, const WhitneyDecomposition& dec, int m,
                                      const Grid& grid, const CompactSet& K);

/// Shvartsman maximal function at one point: exact sup over sample pairs of
/// |P^(m-1)_y f(x) - P^(m-1)_z f(x)| / (|x-y|^m + |x-z|^m).
double shvartsman_maximal(const Jet& jet, int m, Vec2 x);

struct MaximalField {
    ScalarField M;
    std::string mode;  // "component", "root-search", "root-search-subsampled"
};

/// Field-wide maximal function. Component-wise-constant jets with zero higher
/// entries (the pipeline case) use an exact closed form through per-component
/// distance transforms; general jets use a convex root search per node that
/// converges to the pair-sweep value.
MaximalField shvartsman_field(const Jet& jet, int m, const Grid& grid,
                              const std::vector<int>* labels = nullptr,
                              const SweepOptions& opts = {});

/// Finite-difference restriction: f^(j) = D^j F at the K samples, second-order
/// central stencils only. Throws when a stencil leaves the grid.
Jet restrict_field(const ScalarField& F, const CompactSet& K, int m);

/// Derivative survey of the extension itself, probed per cube with steps tied
/// to the cube side (side/64), so the partition transition layers are resolved
/// no matter how coarse the host grid is. Returns the sup over |j| <= m and
/// the cube-quadrature L^p norm of the order-m block.
struct ExtensionDerivativeReport {
    double sup_cm = 0.0;     // max_{|j|<=m} sup |D^j E|
    double gradm_lp = 0.0;   // (sum_cubes side^2 mean |D^m E|^p)^(1/p)
    std::size_t probed_cubes = 0;
};
ExtensionDerivativeReport extension_derivative_probe(const Jet& jet,
                                                     const WhitneyDecomposition& dec, int m,
                                                     int poly_order, double p);

/// D^j F on the grid by central differences; valid where the stencil fits.
ScalarField fd_derivative(const ScalarField& F, MultiIndex j);
/// nodes at least `margin` nodes away from the boundary and inside `base`
std::vector<std::uint8_t> erode_margin(const Grid& g, const std::vector<std::uint8_t>& base,
                                       int margin);

/// Probe of the difference-quotient estimates behind the Sobolev extension
/// bound: |tau_h H^(l) - H^(l)|/h against M^(|l|+1) at random off-K points,
/// steps h = side/10 of the hosting cube.
struct QuotientProbeReport {
    double max_ratio = 0.0;
    int probes = 0;
};
QuotientProbeReport difference_quotient_probe(const Jet& jet, const WhitneyDecomposition& dec,
                                              int m, int n_probes, std::uint64_t seed);

void dump_jet_csv(const Jet& jet, const std::string& path);

}  // namespace divfree
