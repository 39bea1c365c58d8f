#include "divfree/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stack>
#include <stdexcept>

#include "divfree/parallel.hpp"
#include "divfree/smooth.hpp"

namespace divfree {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

std::uint64_t key_of(std::int64_t ix, std::int64_t iy) {
    return (std::uint64_t(std::uint32_t(ix)) << 32) | std::uint64_t(std::uint32_t(iy));
}

// Morton interleave of the lower corner at the cap level, for stable ordering
std::uint64_t morton(std::uint32_t x, std::uint32_t y) {
    auto split = [](std::uint64_t v) {
        v &= 0xffffffffull;
        v = (v | (v << 16)) & 0x0000ffff0000ffffull;
        v = (v | (v << 8)) & 0x00ff00ff00ff00ffull;
        v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0full;
        v = (v | (v << 2)) & 0x3333333333333333ull;
        v = (v | (v << 1)) & 0x5555555555555555ull;
        return v;
    };
    return split(x) | (split(y) << 1);
}

}  // namespace

double WhitneyDecomposition::side_at(int level) const {
    return std::ldexp(root_side, -level);
}

int WhitneyDecomposition::locate(Vec2 p) const {
    if (p.x < root_origin.x || p.y < root_origin.y || p.x > root_origin.x + root_side ||
        p.y > root_origin.y + root_side)
        return -1;
    for (int l = cap_level; l >= 0; --l) {
        if (level_map[l].empty()) continue;
        double s = side_at(l);
        auto clampi = [&](double t) {
            std::int64_t i = std::int64_t(std::floor(t));
            std::int64_t hi = (std::int64_t(1) << l) - 1;
            return std::clamp<std::int64_t>(i, 0, hi);
        };
        std::int64_t ix = clampi((p.x - root_origin.x) / s);
        std::int64_t iy = clampi((p.y - root_origin.y) / s);
        auto it = level_map[l].find(key_of(ix, iy));
        if (it != level_map[l].end()) return it->second;
    }
    return -1;
}

WhitneyDecomposition whitney_decompose(const CompactSet& K, Vec2 box_lo, Vec2 box_hi,
                                       int cap_level) {
    if (K.empty) throw std::invalid_argument("whitney_decompose: K is empty");

    // the box must hold all of K; the cover is box-local
    Vec2 klo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 khi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Vec2& p : K.points) {
        klo.x = std::min(klo.x, p.x);
        klo.y = std::min(klo.y, p.y);
        khi.x = std::max(khi.x, p.x);
        khi.y = std::max(khi.y, p.y);
    }
    if (box_lo.x > klo.x || box_lo.y > klo.y || box_hi.x < khi.x || box_hi.y < khi.y)
        throw std::invalid_argument(
            "whitney_decompose: box too small, needs at least [" + std::to_string(klo.x) + "," +
            std::to_string(khi.x) + "] x [" + std::to_string(klo.y) + "," +
            std::to_string(khi.y) + "]");
    if (cap_level < 1 || cap_level > 30)
        throw std::invalid_argument("whitney_decompose: cap_level out of range");

    WhitneyDecomposition dec;
    // square root cell, side a power of two times the max extent for exact dyadics
    double extent = std::max(box_hi.x - box_lo.x, box_hi.y - box_lo.y);
    dec.root_side = std::ldexp(1.0, int(std::ceil(std::log2(extent))));
    dec.root_origin = {0.5 * (box_lo.x + box_hi.x) - dec.root_side / 2,
                       0.5 * (box_lo.y + box_hi.y) - dec.root_side / 2};
    dec.cap_level = cap_level;
    dec.sites = K.points;
    dec.site_component = K.node_component;

    struct Node {
        int level;
        std::int64_t ix, iy;
    };
    std::stack<Node> work;
    work.push({0, 0, 0});
    while (!work.empty()) {
        Node n = work.top();
        work.pop();
        double s = dec.side_at(n.level);
        Vec2 lo{dec.root_origin.x + n.ix * s, dec.root_origin.y + n.iy * s};
        Vec2 hi{lo.x + s, lo.y + s};
        double d = set_box_distance(K, lo, hi);
        if (d >= kSqrt2 * s) {
            Cube c;
            c.level = n.level;
            c.ix = n.ix;
            c.iy = n.iy;
            c.side = s;
            c.lo = lo;
            c.hi = hi;
            c.center = {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
            c.dist_K = d;
            dec.cubes.push_back(c);
        } else if (n.level == cap_level) {
            Cube c;
            c.level = n.level;
            c.ix = n.ix;
            c.iy = n.iy;
            c.side = s;
            c.lo = lo;
            c.hi = hi;
            c.center = {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
            c.dist_K = d;
            dec.unresolved.push_back(c);
        } else {
            for (int t = 0; t < 4; ++t)
                work.push({n.level + 1, 2 * n.ix + (t & 1), 2 * n.iy + (t >> 1)});
        }
    }

    auto morton_key = [&](const Cube& c) {
        int sh = cap_level - c.level;
        return std::make_pair(morton(std::uint32_t(c.ix << sh), std::uint32_t(c.iy << sh)),
                              c.level);
    };
    std::sort(dec.cubes.begin(), dec.cubes.end(),
              [&](const Cube& a, const Cube& b) { return morton_key(a) < morton_key(b); });
    std::sort(dec.unresolved.begin(), dec.unresolved.end(),
              [&](const Cube& a, const Cube& b) { return morton_key(a) < morton_key(b); });

    dec.level_map.assign(cap_level + 1, {});
    for (std::size_t k = 0; k < dec.cubes.size(); ++k)
        dec.level_map[dec.cubes[k].level][key_of(dec.cubes[k].ix, dec.cubes[k].iy)] = int(k);

    // neighbors: for each cube, scan candidate indices at every coarser-or-equal
    // level; touching is an exact integer test at the cap-level lattice
    dec.neighbor.assign(dec.cubes.size(), {});
    for (std::size_t k = 0; k < dec.cubes.size(); ++k) {
        const Cube& c = dec.cubes[k];
        for (int l = 0; l <= c.level; ++l) {
            if (dec.level_map[l].empty()) continue;
            int sh = c.level - l;
            std::int64_t lo_i = (c.ix >> sh) - 1, hi_i = ((c.ix + 1) >> sh) + 1;
            std::int64_t lo_j = (c.iy >> sh) - 1, hi_j = ((c.iy + 1) >> sh) + 1;
            for (std::int64_t i2 = lo_i; i2 <= hi_i; ++i2) {
                for (std::int64_t j2 = lo_j; j2 <= hi_j; ++j2) {
                    auto it = dec.level_map[l].find(key_of(i2, j2));
                    if (it == dec.level_map[l].end()) continue;
                    int k2 = it->second;
                    if (k2 == int(k)) continue;
                    const Cube& o = dec.cubes[k2];
                    int shc = cap_level - c.level, sho = cap_level - o.level;
                    std::int64_t alo = c.ix << shc, ahi = (c.ix + 1) << shc;
                    std::int64_t blo = o.ix << sho, bhi = (o.ix + 1) << sho;
                    if (ahi < blo || bhi < alo) continue;
                    alo = c.iy << shc;
                    ahi = (c.iy + 1) << shc;
                    blo = o.iy << sho;
                    bhi = (o.iy + 1) << sho;
                    if (ahi < blo || bhi < alo) continue;
                    if (l < c.level || (l == c.level && k2 != int(k))) {
                        dec.neighbor[k].push_back(k2);
                        if (l < c.level) dec.neighbor[k2].push_back(int(k));
                    }
                }
            }
        }
    }
    for (auto& nb : dec.neighbor) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }

    // y_k: exact nearest K sample per cube. With primitives present the owning
    // component is fixed through the analytic distances first, so near-equidistant
    // cubes do not flip components when the sampling grid changes.
    std::vector<int> prim_component;
    if (!K.primitives.empty()) {
        for (const Shape& s : K.primitives) {
            Vec2 rep = std::holds_alternative<Disk>(s) ? std::get<Disk>(s).c
                                                       : std::get<Polyline>(s).pts.front();
            int best = -1;
            double bd = std::numeric_limits<double>::max();
            for (std::size_t q = 0; q < K.n_samples(); ++q) {
                double d = dist(K.points[q], rep);
                if (d < bd) {
                    bd = d;
                    best = K.node_component[q];
                }
            }
            prim_component.push_back(best);
        }
    }
    par::for_each(dec.cubes.size(), [&](std::size_t k) {
        Cube& c = dec.cubes[k];
        int want_comp = -1;
        if (!prim_component.empty()) {
            double bd = std::numeric_limits<double>::max();
            for (std::size_t p = 0; p < K.primitives.size(); ++p) {
                double d = box_shape_distance(c.lo, c.hi, K.primitives[p]);
                if (d < bd) {
                    bd = d;
                    want_comp = prim_component[p];
                }
            }
        }
        double best = std::numeric_limits<double>::max();
        int arg = -1;
        for (std::size_t s = 0; s < dec.sites.size(); ++s) {
            if (want_comp >= 0 && dec.site_component[s] != want_comp) continue;
            const Vec2& p = dec.sites[s];
            double dx = std::max({c.lo.x - p.x, 0.0, p.x - c.hi.x});
            double dy = std::max({c.lo.y - p.y, 0.0, p.y - c.hi.y});
            double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                arg = int(s);
            }
        }
        c.nearest = arg;
    });

    return dec;
}

WhitneyDecomposition decompose_for(const CompactSet& K, double h, double margin) {
    Vec2 blo{K.bbox_lo.x - margin, K.bbox_lo.y - margin};
    Vec2 bhi{K.bbox_hi.x + margin, K.bbox_hi.y + margin};
    double extent = std::max(bhi.x - blo.x, bhi.y - blo.y);
    double root = std::ldexp(1.0, int(std::ceil(std::log2(extent))));
    int cap = 1;
    while (std::ldexp(root, -cap) >= 2 * h && cap < 24) ++cap;
    return whitney_decompose(K, blo, bhi, cap);
}

const std::vector<int>& neighbors(const WhitneyDecomposition& dec, int k) {
    if (k < 0 || std::size_t(k) >= dec.cubes.size())
        throw std::out_of_range("neighbors: invalid cube index");
    return dec.neighbor[k];
}

PartitionOfUnity::PartitionOfUnity(const WhitneyDecomposition& dec, double dilate)
    : dec_(&dec), dilate_(dilate) {}

double PartitionOfUnity::bump(int k, Vec2 x) const {
    const Cube& c = dec_->cubes[k];
    double core = 0.5;                 // the closed cube itself
    double outer = 0.5 * dilate_;      // 9/16 of the side by default
    double tx = (x.x - c.center.x) / c.side;
    double ty = (x.y - c.center.y) / c.side;
    return plateau(tx, core, outer) * plateau(ty, core, outer);
}

PartitionOfUnity::Eval PartitionOfUnity::eval(Vec2 x) const {
    Eval e;
    int home = dec_->locate(x);
    if (home < 0) return e;
    e.home = home;
    double denom = 0.0;
    auto consider = [&](int k) {
        double b = bump(k, x);
        if (b > 0.0) {
            e.terms.push_back({k, b});
            denom += b;
        }
    };
    consider(home);
    for (int k : dec_->neighbor[home]) consider(k);
    // x lies in the closed home cube, so denom >= 1
    for (auto& t : e.terms) t.second /= denom;
    e.covered = true;
    return e;
}

double PartitionOfUnity::phi(int k, Vec2 x) const {
    double bk = bump(k, x);
    if (bk == 0.0) return 0.0;
    Eval e = eval(x);
    if (!e.covered) return 0.0;
    for (auto& t : e.terms)
        if (t.first == k) return t.second;
    return 0.0;  // bump reaches x but x's candidate set misses k: locality violation
}

double PartitionOfUnity::phi_derivative(int k, Vec2 x, int d1, int d2, double step) const {
    if (d1 + d2 == 0) return phi(k, x);
    if (d1 > 0)
        return (phi_derivative(k, {x.x + step, x.y}, d1 - 1, d2, step) -
                phi_derivative(k, {x.x - step, x.y}, d1 - 1, d2, step)) /
               (2 * step);
    return (phi_derivative(k, {x.x, x.y + step}, d1, d2 - 1, step) -
            phi_derivative(k, {x.x, x.y - step}, d1, d2 - 1, step)) /
           (2 * step);
}

std::vector<double> PartitionOfUnity::measured_derivative_constants(int max_order) const {
    std::vector<double> c(max_order + 1, 0.0);
    const auto& cubes = dec_->cubes;
    std::size_t stride = std::max<std::size_t>(1, cubes.size() / 64);
    for (std::size_t k = 0; k < cubes.size(); k += stride) {
        const Cube& q = cubes[k];
        double step = q.side / 64;
        for (int a = -2; a <= 2; ++a) {
            for (int b = -2; b <= 2; ++b) {
                Vec2 x{q.center.x + a * 0.26 * q.side, q.center.y + b * 0.26 * q.side};
                for (int o = 0; o <= max_order; ++o) {
                    for (int d1 = 0; d1 <= o; ++d1) {
                        double v = std::fabs(phi_derivative(int(k), x, d1, o - d1, step));
                        c[o] = std::max(c[o], v * std::pow(q.side, o));
                    }
                }
            }
        }
    }
    return c;
}

void dump_decomposition_csv(const WhitneyDecomposition& dec, const std::string& path) {
    std::ofstream out(path);
    out << "k,center_x,center_y,side,level,y_k_x,y_k_y,n_neighbors\n";
    char buf[256];
    for (std::size_t k = 0; k < dec.cubes.size(); ++k) {
        const Cube& c = dec.cubes[k];
        Vec2 yk = c.nearest >= 0 ? dec.sites[c.nearest] : Vec2{0, 0};
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%d,%.12g,%.12g,%zu\n", k,
                      c.center.x, c.center.y, c.side, c.level, yk.x, yk.y,
                      dec.neighbor[k].size());
        out << buf;
    }
}

}  // namespace divfree
