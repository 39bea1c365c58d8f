#pragma once

#include <optional>
#include <string>
#include <vector>

#include "divfree/besov.hpp"
#include "divfree/compression.hpp"
#include "divfree/cutoff.hpp"
#include "divfree/geometry.hpp"
#include "divfree/jets.hpp"
#include "divfree/koch.hpp"
#include "divfree/stream.hpp"
#include "divfree/whitney.hpp"

namespace divfree {

struct Schedule {
    double start = 0.5;
    double factor = 0.5;
    int count = 6;

    double at(int t) const;
    std::vector<double> values() const;
};

struct ApproximantRow {
    double eps = 0.0;      // value-cover budget of the stage
    double cutoff = 0.0;   // truncation width
    double err_c1 = 0.0;
    double err_wmp = 0.0;
    double max_div = 0.0;
    double support_gap = 0.0;  // conservative lower bound on dist(supp u, K)
    double delta_eps = 0.0;    // jet-norm diagnostic of the compressed jet
};

struct StageReport {
    double eps = 0.0;
    int n_intervals = 0;
    double cover_length = 0.0;
    double delta_jet = 0.0;       // ||compressed jet||_{C^{m,gamma}_jet}
    double delta_sobolev = 0.0;   // ||M^(m) f_eps||_p
    double g_jet_residual = 0.0;  // max restricted-jet entry of g_eps on K
    std::vector<ApproximantRow> rows;
};

struct PipelineOptions {
    double p = 3.0;            // Sobolev diagnostic exponent
    int whitney_cap = 0;       // 0: derive from the grid spacing
    double jet_tolerance = 1e-7;
};

struct PipelineReport {
    int m = 2;
    double gamma = 0.0;
    std::vector<StageReport> stages;
    std::vector<ApproximantRow> diagonal;
    std::string maximal_mode;
};

/// The full approximation pipeline: potential, restriction, value cover,
/// compression, Whitney extension, auxiliary constants, truncation, and the
/// rotated gradient of the result, reported per (eps, cutoff) pair.
/// Stage failures rethrow with an [S*] tag.
PipelineReport approximate_divfree(const VectorField2& u, const CompactSet& K,
                                   const Schedule& eps_schedule, const Schedule& cutoff_schedule,
                                   int m, double gamma, const PipelineOptions& opts = {});

struct SingleApproximant {
    VectorField2 u;
    ApproximantRow row;
};

/// One (eps, cutoff) pass of the pipeline, returning the approximant field
/// itself (the gluing fixtures consume these).
SingleApproximant single_approximant(const VectorField2& u, const CompactSet& K, double eps,
                                     double cutoff, int m, double gamma,
                                     const PipelineOptions& opts = {});

struct GlueResult {
    VectorField2 v;
    double err_c1 = 0.0;
    double err_inputs = 0.0;   // ||u - u1|| + ||u - u2||
    double c_chi = 0.0;        // a-priori constant from the cutoff norms
    double max_div = 0.0;
    double support_gap = 0.0;  // against K1 union K2
};

/// Potential-level gluing v = perp_grad(chi phi1 + (1-chi) phi2). chi must be
/// identically 1 on the K1 samples and 0 on the K2 samples with its gradient
/// clear of both.
GlueResult glue_approximations(const VectorField2& u, const VectorField2& u1,
                               const VectorField2& u2, const CompactSet& K1, const CompactSet& K2,
                               const ScalarField& chi);

struct CandidateCertificate {
    std::string name;
    bool potential_constant = false;
    double potential_spread = 0.0;   // max - min of the candidate potential on K
    double gap = 0.0;                // min over constants of sup_K |F - c|
    double velocity_lower_bound = 0.0;
};

struct SharpnessReport {
    double gamma = 0.0;
    double theta = 0.0;
    double holder_constant = 0.0;  // measured |f(x)-f(y)| / |x-y|^{1+gamma} sup
    double jet_norm = 0.0;         // C^{1,gamma} jet norm of the curve jet
    double target_range = 0.0;     // range of the target potential on K
    std::vector<CandidateCertificate> candidates;
    bool all_certified = false;    // every candidate gap >= floor
};

/// Sharpness harness for the Koch counterexample: the target field is the
/// rotated gradient of the Whitney extension of (inverse parameter map, zero
/// gradient). Each candidate gets a certified potential gap and the
/// line-integral lower bound on its C^0 distance to the target.
SharpnessReport sharpness_certificate(double gamma, const std::vector<VectorField2>& candidates,
                                      const std::vector<std::string>& names, const KochCurve& koch,
                                      const CompactSet& K, const Grid& grid, double gap_floor);

/// Conservative lower bound on dist(supp u, K): min over nonzero staggered
/// entries of the node distance field minus h/2.
double support_gap(const VectorField2& u, const DistanceField& dist_K);

}  // namespace divfree
