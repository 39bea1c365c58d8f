#pragma once

#include <cstdint>
#include <vector>

#include "divfree/grid.hpp"
#include "divfree/jets.hpp"

namespace divfree {

struct SeminormReport {
    double value = 0.0;
    bool exact = true;
};

/// Holder seminorm sup |f(x)-f(y)| / |x-y|^gamma over a sample set.
/// Exact pair sweep up to the threshold, stratified subsample (flagged) above.
SeminormReport holder_seminorm(const std::vector<Vec2>& points, const std::vector<double>& values,
                               double gamma, const SweepOptions& opts = {});

/// Same over the region nodes of a field.
SeminormReport holder_seminorm(const ScalarField& f, const std::vector<std::uint8_t>& region,
                               double gamma, const SweepOptions& opts = {});

std::vector<std::uint8_t> full_region(const Grid& g);

/// Midpoint-rule L^p norm over region nodes: (sum |f|^p h^2)^(1/p).
double lp_norm(const ScalarField& f, double p, const std::vector<std::uint8_t>& region);
double lp_norm(const ScalarField& f, double p);

/// Discrete Sobolev norm (sum_{|j|<=m} ||D^j f||_p^p)^(1/p), central stencils,
/// evaluated on the region eroded by the stencil radius. Throws when nothing
/// of the region survives the erosion.
double wmp_norm(const ScalarField& f, int m, double p, const std::vector<std::uint8_t>& region);
double wmp_norm(const ScalarField& f, int m, double p);

/// max_{|j|<=m} sup |D^j f| over the eroded region.
double cm_norm(const ScalarField& f, int m, const std::vector<std::uint8_t>& region);
double cm_norm(const ScalarField& f, int m);

/// C^{m,gamma} norm: cm_norm plus the Holder seminorms of the order-m derivatives.
double cmgamma_norm(const ScalarField& f, int m, double gamma,
                    const std::vector<std::uint8_t>& region, const SweepOptions& opts = {});

/// L^p norm of the order-m derivative block alone: (sum_{|j|=m} ||D^j f||_p^p)^(1/p).
double grad_m_lp(const ScalarField& f, int m, double p, const std::vector<std::uint8_t>& region);
double grad_m_lp(const ScalarField& f, int m, double p);

}  // namespace divfree
