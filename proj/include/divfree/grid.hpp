#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace divfree {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// Uniform node grid: node (i,j) sits at (x0 + i*h, y0 + j*h).
struct Grid {
    double x0 = 0.0, y0 = 0.0;
    double h = 0.0;
    int nx = 0, ny = 0;

    Grid() = default;
    Grid(double x0_, double y0_, double h_, int nx_, int ny_)
        : x0(x0_), y0(y0_), h(h_), nx(nx_), ny(ny_) {
        if (h <= 0.0) throw std::invalid_argument("grid: spacing must be > 0");
        if (nx < 2 || ny < 2) throw std::invalid_argument("grid: need >= 2 nodes per axis");
    }

    std::size_t size() const { return std::size_t(nx) * std::size_t(ny); }
    std::size_t idx(int i, int j) const { return std::size_t(j) * nx + i; }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
    Vec2 node(int i, int j) const { return {x(i), y(j)}; }
    double x_max() const { return x(nx - 1); }
    double y_max() const { return y(ny - 1); }

    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x_max() && p.y >= y0 && p.y <= y_max();
    }
    // nearest node indices, clamped to the grid
    int near_i(double px) const {
        int i = int(std::lround((px - x0) / h));
        return i < 0 ? 0 : (i >= nx ? nx - 1 : i);
    }
    int near_j(double py) const {
        int j = int(std::lround((py - y0) / h));
        return j < 0 ? 0 : (j >= ny ? ny - 1 : j);
    }

    bool operator==(const Grid& o) const {
        return x0 == o.x0 && y0 == o.y0 && h == o.h && nx == o.nx && ny == o.ny;
    }
};

/// Builds the square [c-s/2, c+s/2]^2 grid with n nodes per axis.
/// Spans that are powers of two with n a power of two give a power-of-two h,
/// which keeps the staggered difference stencils exact in floating point.
inline Grid square_grid(double cx, double cy, double span, int n) {
    double h = span / (n - 1);
    return Grid(cx - span / 2, cy - span / 2, h, n, n);
}

struct ScalarField {
    Grid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

    double& at(int i, int j) { return v[grid.idx(i, j)]; }
    double at(int i, int j) const { return v[grid.idx(i, j)]; }
};

/// Staggered (MAC) vector field on the cells of a node grid:
///   u1 lives at (x_i, y_j + h/2), sized nx x (ny-1)   -- first component
///   u2 lives at (x_i + h/2, y_j), sized (nx-1) x ny   -- second component
/// The discrete divergence of such a field lives at cell centers and is the
/// exact algebraic adjoint of perp_gradient (see stream.hpp).
struct VectorField2 {
    Grid grid;
    std::vector<double> u1, u2;

    VectorField2() = default;
    explicit VectorField2(const Grid& g)
        : grid(g),
          u1(std::size_t(g.nx) * (g.ny - 1), 0.0),
          u2(std::size_t(g.nx - 1) * g.ny, 0.0) {}

    std::size_t i1(int i, int j) const { return std::size_t(j) * grid.nx + i; }        // j in [0,ny-2]
    std::size_t i2(int i, int j) const { return std::size_t(j) * (grid.nx - 1) + i; }  // i in [0,nx-2]
    Vec2 pos1(int i, int j) const { return {grid.x(i), grid.y(j) + grid.h / 2}; }
    Vec2 pos2(int i, int j) const { return {grid.x(i) + grid.h / 2, grid.y(j)}; }
};

/// Rounds every value to an integer multiple of a power-of-two quantum chosen
/// from the field scale (~2^-44 relative). Differences of quantized values are
/// then exact in double arithmetic, which the staggered stencil identities rely on.
void quantize_dyadic(std::vector<double>& v, int bits = 44);
inline void quantize_dyadic(ScalarField& f, int bits = 44) { quantize_dyadic(f.v, bits); }

/// P2 (plain) PGM of a scalar field, rescaled to 0..255.
void write_pgm(const ScalarField& f, const std::string& path);
/// Plain-text 0/1 matrix of a node mask.
void write_mask_txt(const Grid& g, const std::vector<std::uint8_t>& mask, const std::string& path);

}  // namespace divfree
