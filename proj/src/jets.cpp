#include "divfree/jets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "divfree/parallel.hpp"

namespace divfree {

std::vector<MultiIndex> multi_indices(int m) {
    std::vector<MultiIndex> out;
    for (int o = 0; o <= m; ++o)
        for (int j2 = 0; j2 <= o; ++j2) out.push_back({o - j2, j2});
    return out;
}

double factorial_mi(MultiIndex j) {
    auto f = [](int n) {
        double r = 1;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };
    return f(j.j1) * f(j.j2);
}

double pow_mi(Vec2 v, MultiIndex j) {
    double r = 1.0;
    for (int i = 0; i < j.j1; ++i) r *= v.x;
    for (int i = 0; i < j.j2; ++i) r *= v.y;
    return r;
}

Jet Jet::zero(int m, std::vector<Vec2> pts) {
    Jet j;
    j.order = m;
    j.points = std::move(pts);
    j.values.assign(multi_index_count(m), std::vector<double>(j.points.size(), 0.0));
    return j;
}

bool Jet::zero_higher() const {
    auto mis = multi_indices(order);
    for (std::size_t mi = 0; mi < mis.size(); ++mi) {
        if (mis[mi].order() == 0) continue;
        for (double v : values[mi])
            if (v != 0.0) return false;
    }
    return true;
}

double taylor_poly(const Jet& jet, std::size_t y, int m, Vec2 x) {
    if (m > jet.order) throw std::invalid_argument("taylor_poly: m exceeds jet order");
    Vec2 d = x - jet.points[y];
    double sum = 0.0;
    auto mis = multi_indices(m);
    for (std::size_t mi = 0; mi < mis.size(); ++mi)
        sum += jet.values[mi][y] * pow_mi(d, mis[mi]) / factorial_mi(mis[mi]);
    return sum;
}

double taylor_poly_derivative(const Jet& jet, std::size_t y, int m, MultiIndex theta, Vec2 x) {
    // D^theta of sum f^(j)(y) (x-y)^j / j! = sum over j >= theta of
    // f^(j)(y) (x-y)^(j-theta) / (j-theta)!
    if (m > jet.order) throw std::invalid_argument("taylor_poly_derivative: m exceeds jet order");
    Vec2 d = x - jet.points[y];
    double sum = 0.0;
    auto mis = multi_indices(m);
    for (std::size_t mi = 0; mi < mis.size(); ++mi) {
        MultiIndex j = mis[mi];
        if (j.j1 < theta.j1 || j.j2 < theta.j2) continue;
        MultiIndex r{j.j1 - theta.j1, j.j2 - theta.j2};
        sum += jet.values[mi][y] * pow_mi(d, r) / factorial_mi(r);
    }
    return sum;
}

double remainder(const Jet& jet, MultiIndex j, std::size_t x, std::size_t y) {
    if (j.order() > jet.order) throw std::invalid_argument("remainder: invalid multi-index");
    // R_j f(x,y) = f^(j)(x) - sum_{|j+l| <= m} f^(j+l)(y) (x-y)^l / l!
    Vec2 d = jet.points[x] - jet.points[y];
    double sum = 0.0;
    int m = jet.order;
    for (int l1 = 0; l1 + j.j1 <= m; ++l1) {
        for (int l2 = 0; l1 + l2 + j.order() <= m; ++l2) {
            MultiIndex l{l1, l2};
            MultiIndex jl{j.j1 + l1, j.j2 + l2};
            sum += jet.values[multi_index_pos(jl.j1, jl.j2)][y] * pow_mi(d, l) / factorial_mi(l);
        }
    }
    return jet.values[multi_index_pos(j.j1, j.j2)][x] - sum;
}

namespace {

// stratified pair subsample: points in Morton-ish order, pairs at dyadic index
// offsets hit every distance decade
std::vector<std::size_t> stratified_subset(std::size_t n, std::size_t keep, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (n <= keep) return idx;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

JetNormReport jet_norm(const Jet& jet, int m, double gamma, const SweepOptions& opts) {
    if (jet.n_samples() < 1) throw std::invalid_argument("jet_norm: no samples");
    if (m > jet.order) throw std::invalid_argument("jet_norm: m exceeds jet order");
    JetNormReport rep;
    auto mis = multi_indices(m);

    rep.sup_norm = par::max(jet.n_samples(), [&](std::size_t s) {
        double v = 0.0;
        for (std::size_t mi = 0; mi < mis.size(); ++mi)
            v = std::max(v, std::fabs(jet.values[mi][s]));
        return v;
    });

    std::vector<std::size_t> sel;
    if (jet.n_samples() > opts.exact_threshold) {
        sel = stratified_subset(jet.n_samples(), opts.subsample, opts.seed);
        rep.exact = false;
    } else {
        sel.resize(jet.n_samples());
        for (std::size_t i = 0; i < sel.size(); ++i) sel[i] = i;
    }

    const std::size_t ns = sel.size();
    if (jet.zero_higher()) {
        // R_j vanishes identically for |j| >= 1 and R_0(x,y) = f(x) - f(y)
        const std::vector<double>& f0 = jet.values[0];
        rep.remainder_ratio = par::max(ns, [&](std::size_t a) {
            double best = 0.0;
            std::size_t x = sel[a];
            for (std::size_t b = a + 1; b < ns; ++b) {
                std::size_t y = sel[b];
                double r = dist(jet.points[x], jet.points[y]);
                if (r == 0.0) continue;
                best = std::max(best, std::fabs(f0[x] - f0[y]) / std::pow(r, m + gamma));
            }
            return best;
        });
    } else {
        rep.remainder_ratio = par::max(ns, [&](std::size_t a) {
            double best = 0.0;
            std::size_t x = sel[a];
            for (std::size_t b = 0; b < ns; ++b) {
                std::size_t y = sel[b];
                if (x == y) continue;
                double r = dist(jet.points[x], jet.points[y]);
                if (r == 0.0) continue;
                for (std::size_t mi = 0; mi < mis.size(); ++mi) {
                    double R = remainder(jet, mis[mi], x, y);
                    double den = std::pow(r, m + gamma - mis[mi].order());
                    best = std::max(best, std::fabs(R) / den);
                }
            }
            return best;
        });
    }
    rep.jet_norm = std::max(rep.sup_norm, rep.remainder_ratio);
    return rep;
}

namespace {

ExtensionField extend_impl(const Jet& jet, const WhitneyDecomposition& dec, int poly_order,
                           const Grid& grid, const CompactSet& K) {
    if (jet.n_samples() != K.n_samples())
        throw std::invalid_argument("whitney_extend: jet samples do not match K");
    if (!jet.points.empty() && K.n_samples() > 0) {
        Vec2 a = jet.points[0], b = K.points[0];
        if (dist(a, b) > 1e-12)
            throw std::invalid_argument("whitney_extend: jet samples do not match K");
    }

    PartitionOfUnity pou(dec);
    DistanceField df = distance_transform(grid, K.mask);

    // sample index per masked node
    std::vector<std::size_t> sample_of(grid.size(), std::size_t(-1));
    for (std::size_t s = 0; s < K.nodes.size(); ++s) sample_of[K.nodes[s]] = s;

    ExtensionField out;
    out.F = ScalarField(grid);
    out.resolved.assign(grid.size(), 0);

    par::for_each(grid.size(), [&](std::size_t q) {
        int i = int(q % grid.nx), j = int(q / grid.nx);
        Vec2 x = grid.node(i, j);
        if (K.mask[q]) {
            out.F.v[q] = jet.values[0][sample_of[q]];
            out.resolved[q] = 1;
            return;
        }
        auto ev = pou.eval(x);
        if (!ev.covered) {
            // unresolved ring near K: plug with the nearest sample value, flagged
            std::size_t site = df.site[q];
            out.F.v[q] = site != std::size_t(-1) ? jet.values[0][sample_of[site]] : 0.0;
            out.resolved[q] = 0;
            return;
        }
        double sum = 0.0;
        for (auto& [k, phi] : ev.terms) {
            std::size_t yk = std::size_t(dec.cubes[k].nearest);
            sum += phi * taylor_poly(jet, yk, poly_order, x);
        }
        out.F.v[q] = sum;
        out.resolved[q] = 1;
    });
    return out;
}

}  // namespace

ExtensionField whitney_extend(const Jet& jet, const WhitneyDecomposition& dec, int m,
                              const Grid& grid, const CompactSet& K) {
    if (m > jet.order) throw std::invalid_argument("whitney_extend: jet order too small");
    return extend_impl(jet, dec, m, grid, K);
}

ExtensionField whitney_extend_sobolev(const Jet& jet, const WhitneyDecomposition& dec, int m,
                                      const Grid& grid, const CompactSet& K) {
    if (!jet.zero_higher())
        throw std::invalid_argument(
            "whitney_extend_sobolev: hypothesis f^(j) = 0 for |j| >= 1 violated");
    return extend_impl(jet, dec, std::max(0, m - 1), grid, K);
}

double shvartsman_maximal(const Jet& jet, int m, Vec2 x) {
    const std::size_t n = jet.n_samples();
    if (n < 2) throw std::invalid_argument("shvartsman_maximal: need >= 2 samples");
    int p = m - 1;
    std::vector<double> G(n), A(n);
    for (std::size_t s = 0; s < n; ++s) {
        G[s] = taylor_poly(jet, s, p, x);
        A[s] = std::pow(dist(x, jet.points[s]), m);
    }
    double best = 0.0;
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = y + 1; z < n; ++z) {
            double den = A[y] + A[z];
            if (den == 0.0) continue;
            best = std::max(best, std::fabs(G[y] - G[z]) / den);
        }
    return best;
}

namespace {

// sup over pairs of (G(y)-G(z))/(A(y)+A(z)) as the root of the convex,
// decreasing function c -> max(G - cA) + max(-G - cA)
double pair_ratio_root(const std::vector<double>& G, const std::vector<double>& A) {
    auto phi = [&](double c) {
        double m1 = -std::numeric_limits<double>::max();
        double m2 = -std::numeric_limits<double>::max();
        for (std::size_t i = 0; i < G.size(); ++i) {
            m1 = std::max(m1, G[i] - c * A[i]);
            m2 = std::max(m2, -G[i] - c * A[i]);
        }
        return m1 + m2;
    };
    if (phi(0.0) <= 0.0) return 0.0;
    double hi = 1.0;
    while (phi(hi) > 0.0 && hi < 1e100) hi *= 4.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (phi(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

MaximalField shvartsman_field(const Jet& jet, int m, const Grid& grid,
                              const std::vector<int>* labels, const SweepOptions& opts) {
    const std::size_t n = jet.n_samples();
    if (n < 2) throw std::invalid_argument("shvartsman_field: need >= 2 samples");
    MaximalField out;
    out.M = ScalarField(grid);

    // component-wise-constant fast path
    if (labels && jet.zero_higher() && labels->size() == n) {
        int L = 0;
        for (int l : *labels) L = std::max(L, l + 1);
        std::vector<double> cval(L, std::numeric_limits<double>::quiet_NaN());
        bool constant = true;
        double scale = 0.0;
        for (std::size_t s = 0; s < n && constant; ++s) {
            double v = jet.values[0][s];
            scale = std::max(scale, std::fabs(v));
            int l = (*labels)[s];
            if (std::isnan(cval[l]))
                cval[l] = v;
            else if (std::fabs(cval[l] - v) > 1e-13 * std::max(1.0, scale))
                constant = false;
        }
        if (constant && L >= 1) {
            std::vector<ScalarField> dists;
            for (int l = 0; l < L; ++l) {
                std::vector<std::uint8_t> mask(grid.size(), 0);
                bool any = false;
                for (std::size_t s = 0; s < n; ++s) {
                    if ((*labels)[s] != l) continue;
                    // samples are grid nodes by construction of the restriction
                    int i = grid.near_i(jet.points[s].x), j = grid.near_j(jet.points[s].y);
                    mask[grid.idx(i, j)] = 1;
                    any = true;
                }
                if (!any) {
                    constant = false;
                    break;
                }
                dists.push_back(distance_transform(grid, mask).dist);
            }
            if (constant) {
                par::for_each(grid.size(), [&](std::size_t q) {
                    double best = 0.0;
                    for (int a = 0; a < L; ++a)
                        for (int b = a + 1; b < L; ++b) {
                            double num = std::fabs(cval[a] - cval[b]);
                            if (num == 0.0) continue;
                            double den =
                                std::pow(dists[a].v[q], m) + std::pow(dists[b].v[q], m);
                            if (den > 0.0) best = std::max(best, num / den);
                        }
                    out.M.v[q] = best;
                });
                out.mode = "component";
                return out;
            }
        }
    }

    std::vector<std::size_t> sel;
    if (n > opts.exact_threshold) {
        sel = stratified_subset(n, opts.subsample, opts.seed);
        out.mode = "root-search-subsampled";
    } else {
        sel.resize(n);
        for (std::size_t i = 0; i < n; ++i) sel[i] = i;
        out.mode = "root-search";
    }
    int p = m - 1;
    par::for_each(grid.size(), [&](std::size_t q) {
        Vec2 x = grid.node(int(q % grid.nx), int(q / grid.nx));
        std::vector<double> G(sel.size()), A(sel.size());
        for (std::size_t i = 0; i < sel.size(); ++i) {
            G[i] = taylor_poly(jet, sel[i], p, x);
            A[i] = std::pow(dist(x, jet.points[sel[i]]), m);
        }
        out.M.v[q] = pair_ratio_root(G, A);
    });
    return out;
}

namespace {

// second-order central stencil for the r-th 1D derivative
const std::vector<std::pair<int, double>>& stencil_1d(int r) {
    static const std::vector<std::vector<std::pair<int, double>>> tab = {
        {{0, 1.0}},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    };
    if (r < 0 || r >= int(tab.size()))
        throw std::invalid_argument("finite differences support derivative order <= 4");
    return tab[r];
}

int stencil_radius(int r) { return r <= 2 ? (r == 0 ? 0 : 1) : 2; }

}  // namespace

ScalarField fd_derivative(const ScalarField& F, MultiIndex j) {
    const Grid& g = F.grid;
    ScalarField out(g);
    const auto& sx = stencil_1d(j.j1);
    const auto& sy = stencil_1d(j.j2);
    double scale = std::pow(g.h, -j.order());
    int rx = stencil_radius(j.j1), ry = stencil_radius(j.j2);
    par::for_each(g.size(), [&](std::size_t q) {
        int i = int(q % g.nx), jj = int(q / g.nx);
        if (i < rx || i >= g.nx - rx || jj < ry || jj >= g.ny - ry) return;
        double sum = 0.0;
        for (auto& [ox, wx] : sx) {
            double row = 0.0;
            for (auto& [oy, wy] : sy) row += wy * F.at(i + ox, jj + oy);
            sum += wx * row;
        }
        out.v[q] = sum * scale;
    });
    return out;
}

std::vector<std::uint8_t> erode_margin(const Grid& g, const std::vector<std::uint8_t>& base,
                                       int margin) {
    std::vector<std::uint8_t> out(g.size(), 0);
    par::for_each(g.size(), [&](std::size_t q) {
        int i = int(q % g.nx), j = int(q / g.nx);
        if (i < margin || i >= g.nx - margin || j < margin || j >= g.ny - margin) return;
        for (int a = -margin; a <= margin; ++a)
            for (int b = -margin; b <= margin; ++b)
                if (!base[g.idx(i + a, j + b)]) return;
        out[q] = 1;
    });
    return out;
}

Jet restrict_field(const ScalarField& F, const CompactSet& K, int m) {
    if (!(F.grid == K.grid)) throw std::invalid_argument("restrict_field: grid mismatch");
    const Grid& g = F.grid;
    Jet jet = Jet::zero(m, K.points);
    auto mis = multi_indices(m);
    int rad = 0;
    for (auto j : mis) rad = std::max({rad, stencil_radius(j.j1), stencil_radius(j.j2)});
    for (std::size_t s = 0; s < K.nodes.size(); ++s) {
        std::size_t q = K.nodes[s];
        int i = int(q % g.nx), jj = int(q / g.nx);
        if (i < rad || i >= g.nx - rad || jj < rad || jj >= g.ny - rad)
            throw std::runtime_error("restrict_field: stencil leaves grid at a K sample");
    }
    for (std::size_t mi = 0; mi < mis.size(); ++mi) {
        const auto& sx = stencil_1d(mis[mi].j1);
        const auto& sy = stencil_1d(mis[mi].j2);
        double scale = std::pow(g.h, -mis[mi].order());
        par::for_each(K.nodes.size(), [&](std::size_t s) {
            std::size_t q = K.nodes[s];
            int i = int(q % g.nx), jj = int(q / g.nx);
            double sum = 0.0;
            for (auto& [ox, wx] : sx) {
                double row = 0.0;
                for (auto& [oy, wy] : sy) row += wy * F.at(i + ox, jj + oy);
                sum += wx * row;
            }
            jet.values[mi][s] = sum * scale;
        });
    }
    return jet;
}

ExtensionDerivativeReport extension_derivative_probe(const Jet& jet,
                                                     const WhitneyDecomposition& dec, int m,
                                                     int poly_order, double p) {
    PartitionOfUnity pou(dec);
    auto E = [&](Vec2 x) {
        auto ev = pou.eval(x);
        if (!ev.covered) return 0.0;
        double sum = 0.0;
        for (auto& [k, phi] : ev.terms)
            sum += phi * taylor_poly(jet, std::size_t(dec.cubes[k].nearest), poly_order, x);
        return sum;
    };
    // cubes whose whole candidate neighborhood carries one constant jet
    // contribute nothing to any derivative; skip them when that is provable
    const bool zero_higher = jet.zero_higher();
    auto varies = [&](std::size_t k) {
        if (!zero_higher) return true;
        double v0 = jet.values[0][dec.cubes[k].nearest];
        for (int k2 : dec.neighbor[k]) {
            if (jet.values[0][dec.cubes[k2].nearest] != v0) return true;
            for (int k3 : dec.neighbor[k2])
                if (jet.values[0][dec.cubes[k3].nearest] != v0) return true;
        }
        return false;
    };

    ExtensionDerivativeReport rep;
    auto mis = multi_indices(m);
    const int grid_pts = 4;
    std::vector<double> sup_per_cube(dec.cubes.size(), 0.0);
    std::vector<double> lp_per_cube(dec.cubes.size(), 0.0);
    std::vector<std::uint8_t> used(dec.cubes.size(), 0);
    par::for_each(dec.cubes.size(), [&](std::size_t k) {
        if (!varies(k)) return;
        used[k] = 1;
        const Cube& c = dec.cubes[k];
        double step = c.side / 64;
        double sup = 0.0, acc = 0.0;
        for (int a = 0; a < grid_pts; ++a) {
            for (int b = 0; b < grid_pts; ++b) {
                Vec2 x{c.lo.x + (a + 0.5) * c.side / grid_pts,
                       c.lo.y + (b + 0.5) * c.side / grid_pts};
                // local 5x5 stamp of E drives every stencil up to order 2
                double st[5][5];
                for (int i = -2; i <= 2; ++i)
                    for (int j = -2; j <= 2; ++j)
                        st[i + 2][j + 2] = E({x.x + i * step, x.y + j * step});
                double gm = 0.0;
                for (MultiIndex mi : mis) {
                    const auto& sx = stencil_1d(mi.j1);
                    const auto& sy = stencil_1d(mi.j2);
                    double v = 0.0;
                    for (auto& [ox, wx] : sx) {
                        double row = 0.0;
                        for (auto& [oy, wy] : sy) row += wy * st[ox + 2][oy + 2];
                        v += wx * row;
                    }
                    v *= std::pow(step, -mi.order());
                    sup = std::max(sup, std::fabs(v));
                    if (mi.order() == m) gm += v * v;
                }
                acc += std::pow(gm, p / 2.0);
            }
        }
        sup_per_cube[k] = sup;
        lp_per_cube[k] = acc / double(grid_pts * grid_pts) * c.side * c.side;
    });
    double total = 0.0;
    for (std::size_t k = 0; k < dec.cubes.size(); ++k) {
        rep.sup_cm = std::max(rep.sup_cm, sup_per_cube[k]);
        total += lp_per_cube[k];
        rep.probed_cubes += used[k];
    }
    // sup of the jet itself on K (the C^0 part carried by the samples)
    for (std::size_t mi = 0; mi < jet.values.size(); ++mi)
        for (double v : jet.values[mi]) rep.sup_cm = std::max(rep.sup_cm, std::fabs(v));
    rep.gradm_lp = std::pow(total, 1.0 / p);
    return rep;
}

QuotientProbeReport difference_quotient_probe(const Jet& jet, const WhitneyDecomposition& dec,
                                              int m, int n_probes, std::uint64_t seed) {
    QuotientProbeReport rep;
    if (dec.cubes.empty()) return rep;
    PartitionOfUnity pou(dec);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, dec.cubes.size() - 1);
    std::uniform_real_distribution<double> in_cube(-0.45, 0.45);

    auto H = [&](MultiIndex l, Vec2 x) {
        // for zero-higher jets H^(l) = D^l of the extension away from K
        auto ev = pou.eval(x);
        if (!ev.covered) return 0.0;
        double sum = 0.0;
        for (auto& [k, phi] : ev.terms) {
            (void)phi;
            std::size_t yk = std::size_t(dec.cubes[k].nearest);
            double dphi = pou.phi_derivative(k, x, l.j1, l.j2, dec.cubes[k].side / 200);
            sum += dphi * jet.values[0][yk];
        }
        return sum;
    };

    for (int t = 0; t < n_probes; ++t) {
        const Cube& q = dec.cubes[pick(rng)];
        Vec2 x{q.center.x + in_cube(rng) * q.side, q.center.y + in_cube(rng) * q.side};
        double h = q.side / 10;  // Case-4 threshold of the four-case estimate
        for (int axis = 0; axis < 2; ++axis) {
            Vec2 xh = axis == 0 ? Vec2{x.x + h, x.y} : Vec2{x.x, x.y + h};
            for (int lo = 0; lo <= m - 1; ++lo) {
                MultiIndex l{lo, 0};
                double quot = std::fabs(H(l, xh) - H(l, x)) / h;
                double Mx = shvartsman_maximal(jet, std::min(jet.order + 1, lo + 1), x);
                if (Mx > 0) rep.max_ratio = std::max(rep.max_ratio, quot / Mx);
                ++rep.probes;
            }
        }
    }
    return rep;
}

void dump_jet_csv(const Jet& jet, const std::string& path) {
    std::ofstream out(path);
    out << "x,y,j1,j2,value\n";
    auto mis = multi_indices(jet.order);
    char buf[192];
    for (std::size_t s = 0; s < jet.n_samples(); ++s) {
        for (std::size_t mi = 0; mi < mis.size(); ++mi) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%d,%.17g\n", jet.points[s].x,
                          jet.points[s].y, mis[mi].j1, mis[mi].j2, jet.values[mi][s]);
            out << buf;
        }
    }
}

}  // namespace divfree
