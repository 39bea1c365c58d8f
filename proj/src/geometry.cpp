#include "divfree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>

#include "divfree/parallel.hpp"

namespace divfree {

void quantize_dyadic(std::vector<double>& v, int bits) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0.0) return;
    int e = 0;
    std::frexp(m, &e);  // m < 2^e
    double q = std::ldexp(1.0, e - bits);
    for (double& x : v) x = std::round(x / q) * q;
}

void write_pgm(const ScalarField& f, const std::string& path) {
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (double x : f.v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi <= lo) hi = lo + 1.0;
    std::ofstream out(path);
    out << "P2\n" << f.grid.nx << " " << f.grid.ny << "\n255\n";
    for (int j = f.grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < f.grid.nx; ++i) {
            int g = int(std::lround(255.0 * (f.at(i, j) - lo) / (hi - lo)));
            out << g << (i + 1 == f.grid.nx ? '\n' : ' ');
        }
    }
}

void write_mask_txt(const Grid& g, const std::vector<std::uint8_t>& mask, const std::string& path) {
    std::ofstream out(path);
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i)
            out << int(mask[g.idx(i, j)]) << (i + 1 == g.nx ? '\n' : ' ');
    }
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

double point_shape_distance(Vec2 p, const Shape& s) {
    if (const Disk* d = std::get_if<Disk>(&s)) return std::max(0.0, dist(p, d->c) - d->r);
    const Polyline& pl = std::get<Polyline>(s);
    double best = std::numeric_limits<double>::max();
    if (pl.pts.size() == 1) best = dist(p, pl.pts[0]);
    for (std::size_t i = 0; i + 1 < pl.pts.size(); ++i)
        best = std::min(best, segment_distance(p, pl.pts[i], pl.pts[i + 1]));
    return std::max(0.0, best - pl.width);
}

static double point_box_distance(Vec2 p, Vec2 lo, Vec2 hi) {
    double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
}

// distance between two segments; 0 when they cross
static double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    };
    double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
        return 0.0;
    return std::min({segment_distance(a, c, d), segment_distance(b, c, d),
                     segment_distance(c, a, b), segment_distance(d, a, b)});
}

static double segment_box_distance(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi) {
    auto inside = [&](Vec2 p) { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; };
    if (inside(a) || inside(b)) return 0.0;
    Vec2 c0 = lo, c1 = {hi.x, lo.y}, c2 = hi, c3 = {lo.x, hi.y};
    return std::min({segment_segment_distance(a, b, c0, c1), segment_segment_distance(a, b, c1, c2),
                     segment_segment_distance(a, b, c2, c3), segment_segment_distance(a, b, c3, c0)});
}

double box_shape_distance(Vec2 lo, Vec2 hi, const Shape& s) {
    if (const Disk* d = std::get_if<Disk>(&s))
        return std::max(0.0, point_box_distance(d->c, lo, hi) - d->r);
    const Polyline& pl = std::get<Polyline>(s);
    double best = std::numeric_limits<double>::max();
    if (pl.pts.size() == 1) best = point_box_distance(pl.pts[0], lo, hi);
    for (std::size_t i = 0; i + 1 < pl.pts.size(); ++i)
        best = std::min(best, segment_box_distance(pl.pts[i], pl.pts[i + 1], lo, hi));
    return std::max(0.0, best - pl.width);
}

static void label_components(CompactSet& K) {
    const Grid& g = K.grid;
    K.component.assign(g.size(), -1);
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start : K.nodes) {
        if (K.component[start] >= 0) continue;
        stack.push_back(start);
        K.component[start] = next;
        while (!stack.empty()) {
            std::size_t q = stack.back();
            stack.pop_back();
            int i = int(q % g.nx), j = int(q / g.nx);
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int t = 0; t < 4; ++t) {
                int ii = i + di[t], jj = j + dj[t];
                if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;
                std::size_t qq = g.idx(ii, jj);
                if (K.mask[qq] && K.component[qq] < 0) {
                    K.component[qq] = next;
                    stack.push_back(qq);
                }
            }
        }
        ++next;
    }
    K.n_components = next;
    K.node_component.resize(K.nodes.size());
    for (std::size_t s = 0; s < K.nodes.size(); ++s) K.node_component[s] = K.component[K.nodes[s]];
}

static void compute_bbox(CompactSet& K) {
    K.bbox_lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    K.bbox_hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    auto grow = [&](Vec2 lo, Vec2 hi) {
        K.bbox_lo.x = std::min(K.bbox_lo.x, lo.x);
        K.bbox_lo.y = std::min(K.bbox_lo.y, lo.y);
        K.bbox_hi.x = std::max(K.bbox_hi.x, hi.x);
        K.bbox_hi.y = std::max(K.bbox_hi.y, hi.y);
    };
    if (!K.primitives.empty()) {
        for (const Shape& s : K.primitives) {
            if (const Disk* d = std::get_if<Disk>(&s)) {
                grow({d->c.x - d->r, d->c.y - d->r}, {d->c.x + d->r, d->c.y + d->r});
            } else {
                const Polyline& pl = std::get<Polyline>(s);
                for (Vec2 q : pl.pts)
                    grow({q.x - pl.width, q.y - pl.width}, {q.x + pl.width, q.y + pl.width});
            }
        }
        return;
    }
    for (const Vec2& p : K.points) grow(p, p);
}

static void finalize_samples(CompactSet& K) {
    const Grid& g = K.grid;
    K.nodes.clear();
    K.points.clear();
    for (std::size_t q = 0; q < g.size(); ++q) {
        if (K.mask[q]) {
            K.nodes.push_back(q);
            K.points.push_back(g.node(int(q % g.nx), int(q / g.nx)));
        }
    }
    K.empty = K.nodes.empty();
    compute_bbox(K);
    label_components(K);
    // diameter via hull of the samples
    K.diam = 0.0;
    if (K.nodes.size() >= 2) {
        std::vector<Vec2> pts = K.points;
        std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        });
        auto cross = [](Vec2 o, Vec2 a, Vec2 b) {
            return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
        };
        std::vector<Vec2> hull(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
            hull[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
            hull[k++] = pts[i];
        }
        hull.resize(k > 1 ? k - 1 : k);
        for (std::size_t i = 0; i < hull.size(); ++i)
            for (std::size_t j = i + 1; j < hull.size(); ++j)
                K.diam = std::max(K.diam, dist(hull[i], hull[j]));
    }
}

CompactSet make_compact_set(const std::vector<Shape>& primitives, const Grid& grid) {
    CompactSet K;
    K.grid = grid;
    K.mask.assign(grid.size(), 0);
    K.primitives = primitives;

    for (std::size_t p = 0; p < primitives.size(); ++p) {
        // recorded contract: the rasterization must stay strictly inside the grid
        Vec2 lo, hi;
        if (const Disk* d = std::get_if<Disk>(&primitives[p])) {
            lo = {d->c.x - d->r, d->c.y - d->r};
            hi = {d->c.x + d->r, d->c.y + d->r};
        } else {
            const Polyline& pl = std::get<Polyline>(primitives[p]);
            lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
            hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
            for (Vec2 q : pl.pts) {
                lo.x = std::min(lo.x, q.x - pl.width);
                lo.y = std::min(lo.y, q.y - pl.width);
                hi.x = std::max(hi.x, q.x + pl.width);
                hi.y = std::max(hi.y, q.y + pl.width);
            }
        }
        if (lo.x <= grid.x0 || lo.y <= grid.y0 || hi.x >= grid.x_max() || hi.y >= grid.y_max())
            throw std::invalid_argument("make_compact_set: primitive " + std::to_string(p) +
                                        " is not inside the grid interior");
    }

    const double h = grid.h;
    par::for_each(grid.size(), [&](std::size_t q) {
        int i = int(q % grid.nx), j = int(q / grid.nx);
        Vec2 p = grid.node(i, j);
        for (const Shape& s : primitives) {
            // node center in the closed shape; zero-width polylines take the
            // one-cell band around the curve so the mask stays 4-connected
            double d = point_shape_distance(p, s);
            double tol = 0.0;
            if (const Polyline* pl = std::get_if<Polyline>(&s))
                if (pl->width == 0.0) tol = 0.71 * h;
            if (d <= tol) {
                K.mask[q] = 1;
                break;
            }
        }
    });

    finalize_samples(K);
    return K;
}

CompactSet compact_set_from_mask(const Grid& grid, const std::vector<std::uint8_t>& mask) {
    CompactSet K;
    K.grid = grid;
    K.mask = mask;
    finalize_samples(K);
    return K;
}

// ---------------------------------------------------------------------------
// Exact Euclidean distance transform (two-pass, squared-distance envelopes)
// ---------------------------------------------------------------------------

namespace {

// 1D squared distance transform with site tracking.
// f[i] = squared vertical offset of the best site in column i (or INF),
// site_row[i] = its row. Output d2 and winning column per position.
void edt_row(const std::vector<double>& f, std::vector<double>& d2, std::vector<int>& argc) {
    const int n = int(f.size());
    const double INF = std::numeric_limits<double>::max();
    std::vector<int> v(n);
    std::vector<double> z(n + 1);
    int k = 0;
    int first = -1;
    for (int q = 0; q < n; ++q)
        if (f[q] < INF) {
            first = q;
            break;
        }
    if (first < 0) {
        std::fill(d2.begin(), d2.end(), INF);
        std::fill(argc.begin(), argc.end(), -1);
        return;
    }
    v[0] = first;
    z[0] = -INF;
    z[1] = INF;
    for (int q = first + 1; q < n; ++q) {
        if (f[q] >= INF) continue;
        double s = 0.0;
        while (true) {
            int p = v[k];
            s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = INF;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        int p = v[k];
        d2[q] = double(q - p) * (q - p) + f[p];
        argc[q] = p;
    }
}

}  // namespace

DistanceField distance_transform(const Grid& grid, const std::vector<std::uint8_t>& mask,
                                 bool parallel) {
    const int nx = grid.nx, ny = grid.ny;
    const double INF = std::numeric_limits<double>::max();
    // pass 1: per column, squared row-offset to nearest masked node + its row
    std::vector<double> g1(grid.size(), INF);
    std::vector<int> row1(grid.size(), -1);
    auto column = [&](std::size_t ii) {
        int i = int(ii);
        int last = -1;
        for (int j = 0; j < ny; ++j) {
            if (mask[grid.idx(i, j)]) last = j;
            if (last >= 0) {
                g1[grid.idx(i, j)] = double(j - last) * (j - last);
                row1[grid.idx(i, j)] = last;
            }
        }
        last = -1;
        for (int j = ny - 1; j >= 0; --j) {
            if (mask[grid.idx(i, j)]) last = j;
            if (last >= 0 && double(last - j) * (last - j) < g1[grid.idx(i, j)]) {
                g1[grid.idx(i, j)] = double(last - j) * (last - j);
                row1[grid.idx(i, j)] = last;
            }
        }
    };
    // pass 2: per row, lower envelope across columns
    DistanceField out;
    out.dist = ScalarField(grid);
    out.site.assign(grid.size(), std::size_t(-1));
    auto rowpass = [&](std::size_t jj) {
        int j = int(jj);
        std::vector<double> f(nx), d2(nx);
        std::vector<int> argc(nx);
        for (int i = 0; i < nx; ++i) f[i] = g1[grid.idx(i, j)];
        edt_row(f, d2, argc);
        for (int i = 0; i < nx; ++i) {
            if (argc[i] < 0) continue;
            out.dist.at(i, j) = grid.h * std::sqrt(d2[i]);
            out.site[grid.idx(i, j)] = grid.idx(argc[i], row1[grid.idx(argc[i], j)]);
        }
    };
    if (parallel) {
        par::for_each(std::size_t(nx), column);
        par::for_each(std::size_t(ny), rowpass);
    } else {
        par::for_each_serial(std::size_t(nx), column);
        par::for_each_serial(std::size_t(ny), rowpass);
    }
    return out;
}

DistanceField distance_field(const CompactSet& K) {
    if (K.empty) throw std::invalid_argument("distance_field: distance to empty set undefined");
    return distance_transform(K.grid, K.mask, true);
}

DistanceField distance_field_serial(const CompactSet& K) {
    if (K.empty) throw std::invalid_argument("distance_field: distance to empty set undefined");
    return distance_transform(K.grid, K.mask, false);
}

CompactSet neighborhood(const CompactSet& K, double delta) {
    if (delta < 0) throw std::invalid_argument("neighborhood: delta must be >= 0");
    DistanceField df = distance_field(K);
    std::vector<std::uint8_t> m(K.grid.size(), 0);
    for (std::size_t q = 0; q < K.grid.size(); ++q)
        m[q] = (K.mask[q] || df.dist.v[q] < delta) ? 1 : 0;
    CompactSet out = compact_set_from_mask(K.grid, m);
    out.primitives = K.primitives;
    return out;
}

double set_box_distance(const CompactSet& K, Vec2 lo, Vec2 hi) {
    if (!K.primitives.empty()) {
        double best = std::numeric_limits<double>::max();
        for (const Shape& s : K.primitives) best = std::min(best, box_shape_distance(lo, hi, s));
        return best;
    }
    if (K.empty) throw std::invalid_argument("set_box_distance: empty set");
    const auto& pts = K.points;
    double best = std::numeric_limits<double>::max();
    for (const Vec2& p : pts) best = std::min(best, point_box_distance(p, lo, hi));
    return best;
}

std::vector<CompactSet> separated_preimage_cover(const ScalarField& psi, const CompactSet& K,
                                                 const std::vector<Interval>& intervals,
                                                 double eps) {
    // intervals must be pairwise disjoint with disjoint closures
    std::vector<Interval> iv = intervals;
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i + 1 < iv.size(); ++i)
        if (iv[i].hi >= iv[i + 1].lo)
            throw std::invalid_argument("separated_preimage_cover: intervals overlap or touch");
    if (!(psi.grid == K.grid))
        throw std::invalid_argument("separated_preimage_cover: psi/K grid mismatch");

    auto interval_of = [&](double t) -> int {
        for (std::size_t i = 0; i < iv.size(); ++i)
            if (iv[i].contains(t)) return int(i);
        return -1;
    };
    for (std::size_t s = 0; s < K.n_samples(); ++s) {
        double t = psi.v[K.nodes[s]];
        if (interval_of(t) < 0)
            throw std::runtime_error("separated_preimage_cover: K-sample value " +
                                     std::to_string(t) + " lies in no interval");
    }

    DistanceField df = distance_field(K);
    const Grid& g = K.grid;
    const double h = g.h;

    double delta = eps;
    for (int attempt = 0; attempt < 40; ++attempt) {
        std::vector<std::vector<std::uint8_t>> masks(iv.size(),
                                                     std::vector<std::uint8_t>(g.size(), 0));
        for (std::size_t q = 0; q < g.size(); ++q) {
            if (!(K.mask[q] || df.dist.v[q] < delta)) continue;
            int w = interval_of(psi.v[q]);
            if (w >= 0) masks[w][q] = 1;
        }
        // every K node must have made it into its mask
        bool covered = true;
        for (std::size_t s = 0; s < K.n_samples() && covered; ++s) {
            std::size_t q = K.nodes[s];
            bool any = false;
            for (auto& m : masks) any = any || m[q];
            covered = any;
        }
        // pairwise gap >= 2h: no node of one mask within <2h of another.
        bool separated = true;
        for (std::size_t a = 0; a < masks.size() && separated; ++a) {
            for (std::size_t b = a + 1; b < masks.size() && separated; ++b) {
                DistanceField da = distance_transform(g, masks[a]);
                for (std::size_t q = 0; q < g.size() && separated; ++q)
                    if (masks[b][q] && da.dist.v[q] < 2 * h - 1e-12 * h) separated = false;
            }
        }
        if (covered && separated) {
            std::vector<CompactSet> out;
            for (auto& m : masks) out.push_back(compact_set_from_mask(g, m));
            return out;
        }
        delta *= 0.5;
        if (delta < 2 * h)
            throw std::runtime_error(
                "separated_preimage_cover: cannot separate preimages at grid resolution");
    }
    throw std::runtime_error("separated_preimage_cover: separation failed");
}

}  // namespace divfree
