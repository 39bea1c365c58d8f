#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "divfree/grid.hpp"

namespace divfree {

struct Disk {
    Vec2 c;
    double r = 0.0;
};

struct Polyline {
    std::vector<Vec2> pts;
    double width = 0.0;  // rasterization half-width; 0 means one-cell band
};

using Shape = std::variant<Disk, Polyline>;

double point_shape_distance(Vec2 p, const Shape& s);
/// Exact distance from an axis-aligned box [lo, hi] to a shape (0 if they meet).
double box_shape_distance(Vec2 lo, Vec2 hi, const Shape& s);
double segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Compact K subset of the plane: a node mask on a grid, the analytic primitives it was
/// rasterized from (kept for exact distance queries), and 4-connectivity
/// component labels over the masked nodes.
struct CompactSet {
    Grid grid;
    std::vector<std::uint8_t> mask;  // 1 per masked node
    std::vector<Shape> primitives;
    std::vector<int> component;  // label per node, -1 off the mask
    int n_components = 0;
    bool empty = true;
    double diam = 0.0;

    std::vector<std::size_t> nodes;   // flat indices of masked nodes (the K samples)
    std::vector<Vec2> points;         // their coordinates, same order
    std::vector<int> node_component;  // label per sample

    // analytic when primitives exist (grid-independent), sample bounds otherwise
    Vec2 bbox_lo, bbox_hi;

    Vec2 sample(std::size_t s) const { return points[s]; }
    std::size_t n_samples() const { return nodes.size(); }
};

/// Rasterizes the union of the primitives: a node belongs iff its center lies in
/// the closed shape. Components are labeled by 4-connectivity.
/// Throws if a primitive sticks out of the grid interior, naming it.
CompactSet make_compact_set(const std::vector<Shape>& primitives, const Grid& grid);

/// Builds a compact set from an explicit mask (no primitives).
CompactSet compact_set_from_mask(const Grid& grid, const std::vector<std::uint8_t>& mask);

/// Exact Euclidean distance transform of the mask: at every node, the distance
/// to the nearest masked node and that node's flat index.
struct DistanceField {
    ScalarField dist;
    std::vector<std::size_t> site;  // flat index of the nearest masked node
};

DistanceField distance_field(const CompactSet& K);
DistanceField distance_field_serial(const CompactSet& K);
/// EDT of an arbitrary mask on a grid (used for per-component fields).
DistanceField distance_transform(const Grid& grid, const std::vector<std::uint8_t>& mask,
                                 bool parallel = true);

/// Open delta-neighborhood on the grid: mask of K plus every node with dist < delta.
CompactSet neighborhood(const CompactSet& K, double delta);

/// Distance from K to an axis-aligned box, exact via primitives when present,
/// otherwise an exact scan over the masked nodes.
double set_box_distance(const CompactSet& K, Vec2 lo, Vec2 hi);

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double t) const { return t > lo && t < hi; }
};

/// Preimage cover of step (S3): for each interval, the nodes of a neighborhood of K
/// whose psi-value falls inside it. The returned sets are pairwise separated by
/// at least 2h on the grid and their union covers K; each is contained in the
/// eps-neighborhood of K. Throws if some K-sample value lies in no interval.
std::vector<CompactSet> separated_preimage_cover(const ScalarField& psi, const CompactSet& K,
                                                 const std::vector<Interval>& intervals,
                                                 double eps);

}  // namespace divfree
