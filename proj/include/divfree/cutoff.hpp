#pragma once

#include <vector>

#include "divfree/geometry.hpp"
#include "divfree/jets.hpp"

namespace divfree {

/// Mollified set indicator: 1 where dist(x, mask) <= mid - w, 0 where
/// dist >= mid + w, in between the convolution of the dist<mid indicator with
/// a radial bump of radius w sampled on the grid.
ScalarField mollified_indicator(const ScalarField& dist_to_set, double mid, double w);

/// rho_eps of the explicit cutoff construction: the K_{eps/2} indicator
/// mollified at radius eps/10, so rho = 1 on K_{eps/4} and rho = 0 off K_eps.
/// Requires eps >= 8h for the mollifier to be resolvable.
ScalarField smooth_cutoff(const CompactSet& K, double eps);
ScalarField smooth_cutoff(const ScalarField& dist_to_K, double eps);

struct HedbergEstimates {
    double eps = 0.0;
    double gamma = 0.0;
    double omega_eps = 0.0;   // |grad^m F|_{C^0,gamma}(K_eps)  (sup for gamma = 0)
    double omega_2eps = 0.0;
    // indexed by |theta| = 0..m
    std::vector<double> sup_dF;      // (i)  ||D^theta F||_{C0(K_eps)}
    std::vector<double> holder_dF;   // (ii) |D^theta F|_{C0,gamma(K_eps)}
    std::vector<double> sup_drho;    // (iii) ||D^r rho||_{C0(K_eps)}, r = |j|-|theta|
    std::vector<double> holder_drho; // (iv)  |D^r rho|_{C0,gamma(K_eps)}
};

struct TruncationResult {
    ScalarField F;  // F * (1 - rho_eps), supported off K_{eps/4}
    HedbergEstimates est;
};

/// Hedberg-style truncation F(1 - rho_eps) with the four proof estimates
/// measured. Preconditions: the restricted jet of F vanishes to order m on K;
/// for gamma > 0 the Holder seminorm of grad^m F must decay towards K
/// (probed at eps, eps/2, eps/4).
TruncationResult hedberg_truncate(const ScalarField& F, const CompactSet& K, double eps, int m,
                                  double gamma, const SweepOptions& opts = {});

/// Smooth h equal to constants[i] on a (gap/4)-neighborhood of K inside
/// covers[i]; its gradient stays clear of K_{gap/4}. Covers must be pairwise
/// separated; the transition lives in the separating gap.
ScalarField auxiliary_function(const std::vector<CompactSet>& covers,
                               const std::vector<double>& constants, const CompactSet& K,
                               const Grid& grid);

}  // namespace divfree
