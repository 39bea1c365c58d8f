#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "divfree/geometry.hpp"

namespace divfree {

/// Closed dyadic cube: side = root_side * 2^-level, lower corner at
/// root_origin + (ix, iy) * side. Coordinates stay exact dyadic doubles as
/// long as root_side is a power of two.
struct Cube {
    int level = 0;
    std::int64_t ix = 0, iy = 0;
    double side = 0.0;
    Vec2 lo, hi, center;
    double dist_K = 0.0;  // exact distance to K used during construction
    int nearest = -1;     // y_k: index into the K sample list
};

/// Whitney covering of K^c within a root box, built by quadtree refinement:
/// split while dist(Q,K) < sqrt(2)*side, accept when the distance lands in
/// [sqrt(2), 4*sqrt(2)] * side. Cubes hitting the depth cap stay "unresolved"
/// and are excluded from every coverage claim.
struct WhitneyDecomposition {
    Vec2 root_origin;
    double root_side = 0.0;
    int cap_level = 0;

    std::vector<Cube> cubes;
    std::vector<Cube> unresolved;
    std::vector<std::vector<int>> neighbor;  // N(k), touching cubes

    std::vector<Vec2> sites;      // K sample coordinates (targets of y_k)
    std::vector<int> site_component;

    // per-level hash (ix,iy) -> cube index
    std::vector<std::unordered_map<std::uint64_t, int>> level_map;

    double side_at(int level) const;
    /// Index of the accepted cube containing p, or -1 (unresolved region / outside).
    int locate(Vec2 p) const;
    std::size_t size() const { return cubes.size(); }
};

WhitneyDecomposition whitney_decompose(const CompactSet& K, Vec2 box_lo, Vec2 box_hi,
                                       int cap_level);

/// Standard covering for a K hosted on a grid of spacing h: box = analytic
/// bbox(K) inflated by margin (grid-independent root lattice), depth cap at
/// the first level with side below 2h.
WhitneyDecomposition decompose_for(const CompactSet& K, double h, double margin = 1.1);

/// N(k) of one cube (bounds-checked view into the decomposition).
const std::vector<int>& neighbors(const WhitneyDecomposition& dec, int k);

/// Smooth partition of unity subordinate to the cubes: per-cube tensor plateau
/// bumps (1 on the cube, 0 outside the dilate) normalized by their local sum.
/// supp phi_k lies in the (9/8)-dilate of Q_k, so it meets only touching cubes.
class PartitionOfUnity {
  public:
    explicit PartitionOfUnity(const WhitneyDecomposition& dec, double dilate = 9.0 / 8.0);

    struct Eval {
        bool covered = false;
        int home = -1;                               // containing cube
        std::vector<std::pair<int, double>> terms;   // (cube index, phi_k(x))
    };
    Eval eval(Vec2 x) const;

    /// Honest single-bump value: b_k(x) before normalization.
    double bump(int k, Vec2 x) const;
    /// phi_k(x) with the denominator assembled from x's own candidate set.
    double phi(int k, Vec2 x) const;
    /// Central finite-difference derivative D^(d1,d2) phi_k at x.
    double phi_derivative(int k, Vec2 x, int d1, int d2, double step) const;

    /// Measured sup |D^l phi_k| * side^|l| over probe points, per |l| <= max_order.
    std::vector<double> measured_derivative_constants(int max_order) const;

    const WhitneyDecomposition& dec() const { return *dec_; }
    double dilate() const { return dilate_; }

  private:
    const WhitneyDecomposition* dec_;
    double dilate_;
};

void dump_decomposition_csv(const WhitneyDecomposition& dec, const std::string& path);

}  // namespace divfree
