#include "divfree/stream.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "divfree/norms.hpp"
#include "divfree/parallel.hpp"

namespace divfree {

VectorField2 perp_gradient(const ScalarField& psi_in) {
    ScalarField psi = psi_in;
    quantize_dyadic(psi);
    const Grid& g = psi.grid;
    VectorField2 u(g);
    const double h = g.h;
    par::for_each(u.u1.size(), [&](std::size_t q) {
        int i = int(q % g.nx), j = int(q / g.nx);
        u.u1[q] = (psi.at(i, j + 1) - psi.at(i, j)) / h;
    });
    par::for_each(u.u2.size(), [&](std::size_t q) {
        int i = int(q % (g.nx - 1)), j = int(q / (g.nx - 1));
        u.u2[q] = -(psi.at(i + 1, j) - psi.at(i, j)) / h;
    });
    return u;
}

ScalarField divergence(const VectorField2& u) {
    const Grid& g = u.grid;
    Grid cg(g.x0 + g.h / 2, g.y0 + g.h / 2, g.h, g.nx - 1, g.ny - 1);
    ScalarField div(cg);
    par::for_each(div.v.size(), [&](std::size_t q) {
        int i = int(q % cg.nx), j = int(q / cg.nx);
        double s = (u.u1[u.i1(i + 1, j)] - u.u1[u.i1(i, j)]) +
                   (u.u2[u.i2(i, j + 1)] - u.u2[u.i2(i, j)]);
        div.v[q] = s / g.h;
    });
    return div;
}

double max_abs_divergence(const VectorField2& u) {
    ScalarField d = divergence(u);
    return par::max(d.v.size(), [&](std::size_t q) { return std::fabs(d.v[q]); });
}

ScalarField stream_potential(const VectorField2& u) {
    double dv = max_abs_divergence(u);
    if (dv > 1e-9)
        throw std::invalid_argument("stream_potential: field is not divergence-free, max|div| = " +
                                    std::to_string(dv));
    const Grid& g = u.grid;
    ScalarField psi(g);
    // base node: nearest to the coordinate origin
    int i0 = g.near_i(0.0), j0 = g.near_j(0.0);
    psi.at(i0, j0) = 0.0;
    for (int i = i0 + 1; i < g.nx; ++i)
        psi.at(i, j0) = psi.at(i - 1, j0) - g.h * u.u2[u.i2(i - 1, j0)];
    for (int i = i0 - 1; i >= 0; --i) psi.at(i, j0) = psi.at(i + 1, j0) + g.h * u.u2[u.i2(i, j0)];
    par::for_each(std::size_t(g.nx), [&](std::size_t ii) {
        int i = int(ii);
        for (int j = j0 + 1; j < g.ny; ++j)
            psi.at(i, j) = psi.at(i, j - 1) + g.h * u.u1[u.i1(i, j - 1)];
        for (int j = j0 - 1; j >= 0; --j)
            psi.at(i, j) = psi.at(i, j + 1) - g.h * u.u1[u.i1(i, j)];
    });

    // c0: value at the grid corner farthest from supp u
    double lox = g.x_max(), hix = g.x0, loy = g.y_max(), hiy = g.y0;
    bool any = false;
    for (std::size_t q = 0; q < u.u1.size(); ++q) {
        if (u.u1[q] != 0.0) {
            Vec2 p = u.pos1(int(q % g.nx), int(q / g.nx));
            lox = std::min(lox, p.x);
            hix = std::max(hix, p.x);
            loy = std::min(loy, p.y);
            hiy = std::max(hiy, p.y);
            any = true;
        }
    }
    for (std::size_t q = 0; q < u.u2.size(); ++q) {
        if (u.u2[q] != 0.0) {
            Vec2 p = u.pos2(int(q % (g.nx - 1)), int(q / (g.nx - 1)));
            lox = std::min(lox, p.x);
            hix = std::max(hix, p.x);
            loy = std::min(loy, p.y);
            hiy = std::max(hiy, p.y);
            any = true;
        }
    }
    double c0 = 0.0;
    if (any) {
        Vec2 mid{(lox + hix) / 2, (loy + hiy) / 2};
        Vec2 corners[4] = {
            {g.x0, g.y0}, {g.x_max(), g.y0}, {g.x0, g.y_max()}, {g.x_max(), g.y_max()}};
        double best = -1.0;
        Vec2 far = corners[0];
        for (Vec2 c : corners)
            if (dist(c, mid) > best) {
                best = dist(c, mid);
                far = c;
            }
        c0 = psi.at(g.near_i(far.x), g.near_j(far.y));
    }
    if (c0 != 0.0)
        for (double& v : psi.v) v -= c0;
    return psi;
}

VectorField2 sample_mac(const Grid& g, const std::function<double(Vec2)>& f1,
                        const std::function<double(Vec2)>& f2) {
    VectorField2 u(g);
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) u.u1[u.i1(i, j)] = f1(u.pos1(i, j));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) u.u2[u.i2(i, j)] = f2(u.pos2(i, j));
    return u;
}

ScalarField component_field(const VectorField2& u, int comp) {
    const Grid& g = u.grid;
    if (comp == 1) {
        ScalarField f(Grid(g.x0, g.y0 + g.h / 2, g.h, g.nx, g.ny - 1));
        f.v = u.u1;
        return f;
    }
    ScalarField f(Grid(g.x0 + g.h / 2, g.y0, g.h, g.nx - 1, g.ny));
    f.v = u.u2;
    return f;
}

VectorField2 subtract(const VectorField2& a, const VectorField2& b) {
    VectorField2 r = a;
    for (std::size_t q = 0; q < r.u1.size(); ++q) r.u1[q] -= b.u1[q];
    for (std::size_t q = 0; q < r.u2.size(); ++q) r.u2[q] -= b.u2[q];
    return r;
}

VectorField2 add(const VectorField2& a, const VectorField2& b) {
    VectorField2 r = a;
    for (std::size_t q = 0; q < r.u1.size(); ++q) r.u1[q] += b.u1[q];
    for (std::size_t q = 0; q < r.u2.size(); ++q) r.u2[q] += b.u2[q];
    return r;
}

double cm_norm_mac(const VectorField2& u, int m) {
    double best = 0.0;
    for (int comp = 1; comp <= 2; ++comp) {
        ScalarField f = component_field(u, comp);
        best = std::max(best, cm_norm(f, m));
    }
    return best;
}

double wmp_norm_mac(const VectorField2& u, int m, double p) {
    double total = 0.0;
    for (int comp = 1; comp <= 2; ++comp) {
        ScalarField f = component_field(u, comp);
        total += std::pow(wmp_norm(f, m, p), p);
    }
    return std::pow(total, 1.0 / p);
}

}  // namespace divfree
