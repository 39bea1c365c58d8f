#pragma once

#include <functional>

#include "divfree/grid.hpp"

namespace divfree {

/// Rotated gradient (d2 psi, -d1 psi) on the staggered lattice. The potential
/// is dyadically quantized first, so with a power-of-two spacing every stored
/// edge difference is exact and the discrete divergence of the result is
/// identically zero, not merely small.
VectorField2 perp_gradient(const ScalarField& psi);

/// Staggered divergence at cell centers, the algebraic adjoint of perp_gradient:
/// div(i+1/2,j+1/2) = (u1(i+1,j)-u1(i,j) + u2(i,j+1)-u2(i,j)) / h.
ScalarField divergence(const VectorField2& u);

double max_abs_divergence(const VectorField2& u);

/// Stream potential: path integral of the field along the base row then up the
/// columns, normalized so the grid corner farthest from supp u sits at zero.
/// Rejects fields whose discrete divergence exceeds 1e-9.
ScalarField stream_potential(const VectorField2& u);

/// Samples analytic component functions at the staggered positions.
VectorField2 sample_mac(const Grid& g, const std::function<double(Vec2)>& f1,
                        const std::function<double(Vec2)>& f2);

// component views as node-grid scalar fields on their own staggered lattices
ScalarField component_field(const VectorField2& u, int comp);

VectorField2 subtract(const VectorField2& a, const VectorField2& b);
VectorField2 add(const VectorField2& a, const VectorField2& b);

/// sup over both components of |u| plus sup of all first central differences:
/// the discrete C^1 distance used by the pipeline reports (pass m=0 for C^0).
double cm_norm_mac(const VectorField2& u, int m);

/// Discrete W^{m,p} norm of a staggered field, component-wise.
double wmp_norm_mac(const VectorField2& u, int m, double p);

}  // namespace divfree
