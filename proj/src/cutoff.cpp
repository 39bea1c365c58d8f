#include "divfree/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "divfree/norms.hpp"
#include "divfree/parallel.hpp"
#include "divfree/smooth.hpp"

namespace divfree {

ScalarField mollified_indicator(const ScalarField& dist_to_set, double mid, double w) {
    const Grid& g = dist_to_set.grid;
    // sampled radial bump, normalized to unit discrete mass
    int r = int(std::floor(w / g.h));
    std::vector<std::pair<std::pair<int, int>, double>> kernel;
    double mass = 0.0;
    for (int a = -r; a <= r; ++a) {
        for (int b = -r; b <= r; ++b) {
            double rr = g.h * std::hypot(double(a), double(b)) / w;
            double wgt = mollifier_profile(rr);
            if (wgt > 0.0) {
                kernel.push_back({{a, b}, wgt});
                mass += wgt;
            }
        }
    }
    for (auto& k : kernel) k.second /= mass;

    ScalarField rho(g);
    par::for_each(g.size(), [&](std::size_t q) {
        double d = dist_to_set.v[q];
        if (d <= mid - w) {
            rho.v[q] = 1.0;
            return;
        }
        if (d >= mid + w) return;
        int i = int(q % g.nx), j = int(q / g.nx);
        double s = 0.0;
        for (auto& [off, wgt] : kernel) {
            int ii = i + off.first, jj = j + off.second;
            if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;  // outside: indicator 0
            if (dist_to_set.at(ii, jj) < mid) s += wgt;
        }
        rho.v[q] = s;
    });
    return rho;
}

ScalarField smooth_cutoff(const ScalarField& dist_to_K, double eps) {
    if (eps < 8 * dist_to_K.grid.h)
        throw std::invalid_argument("smooth_cutoff: eps below 8h, mollifier unresolvable");
    return mollified_indicator(dist_to_K, eps / 2, eps / 10);
}

ScalarField smooth_cutoff(const CompactSet& K, double eps) {
    DistanceField df = distance_field(K);
    return smooth_cutoff(df.dist, eps);
}

namespace {

std::vector<std::uint8_t> band_region(const ScalarField& dist, double a, double b) {
    std::vector<std::uint8_t> r(dist.v.size(), 0);
    for (std::size_t q = 0; q < dist.v.size(); ++q)
        if (dist.v[q] >= a && dist.v[q] < b) r[q] = 1;
    return r;
}

double sup_on(const ScalarField& f, const std::vector<std::uint8_t>& region) {
    return par::max(f.v.size(), [&](std::size_t q) { return region[q] ? std::fabs(f.v[q]) : 0.0; });
}

}  // namespace

TruncationResult hedberg_truncate(const ScalarField& F, const CompactSet& K, double eps, int m,
                                  double gamma, const SweepOptions& opts) {
    if (!(F.grid == K.grid)) throw std::invalid_argument("hedberg_truncate: grid mismatch");
    const Grid& g = F.grid;

    // jet of F must vanish to order m on K; the finite-difference jet of an
    // analytically vanishing F carries O(h |grad^{m+1} F|) residue at the mask
    // boundary, so the gate scales with the mesh
    Jet jf = restrict_field(F, K, m);
    double scale = par::max(F.v.size(), [&](std::size_t q) { return std::fabs(F.v[q]); });
    double worst = 0.0;
    for (auto& arr : jf.values)
        for (double v : arr) worst = std::max(worst, std::fabs(v));
    if (worst > std::max(1e-8, 4.0 * g.h) * std::max(1.0, scale))
        throw std::invalid_argument(
            "hedberg_truncate: restricted jet of F does not vanish to order m on K (max entry " +
            std::to_string(worst) + ")");

    DistanceField df = distance_field(K);

    // gamma > 0: the Holder seminorm of grad^m F must decay towards K
    if (gamma > 0.0) {
        std::vector<double> probes;
        for (double e : {eps, eps / 2, eps / 4}) {
            if (e < 8 * g.h) continue;
            double semi = 0.0;
            auto region = erode_margin(g, band_region(df.dist, 0.0, e), 2);
            std::size_t cnt = 0;
            for (auto b : region) cnt += b;
            if (cnt < 2) continue;
            for (MultiIndex j : multi_indices(m)) {
                if (j.order() != m) continue;
                ScalarField dj = fd_derivative(F, j);
                semi = std::max(semi, holder_seminorm(dj, region, gamma, opts).value);
            }
            probes.push_back(semi);
        }
        if (probes.size() >= 2) {
            double s_max = *std::max_element(probes.begin(), probes.end());
            double s_min = probes.back();
            if (s_min > 0.75 * s_max + 1e-12 * std::max(1.0, scale))
                throw std::invalid_argument(
                    "hedberg_truncate: |grad^m F|_{C^0,gamma}(K_eps) does not vanish towards K");
        }
    }

    ScalarField rho = smooth_cutoff(df.dist, eps);

    TruncationResult out;
    out.F = F;
    for (std::size_t q = 0; q < out.F.v.size(); ++q) out.F.v[q] *= (1.0 - rho.v[q]);

    // the four proof estimates, measured on K_eps
    HedbergEstimates& est = out.est;
    est.eps = eps;
    est.gamma = gamma;
    auto keps = erode_margin(g, band_region(df.dist, 0.0, eps), 2);
    auto k2eps = erode_margin(g, band_region(df.dist, 0.0, 2 * eps), 2);
    est.sup_dF.assign(m + 1, 0.0);
    est.holder_dF.assign(m + 1, 0.0);
    est.sup_drho.assign(m + 1, 0.0);
    est.holder_drho.assign(m + 1, 0.0);
    double om1 = 0.0, om2 = 0.0;
    for (MultiIndex j : multi_indices(m)) {
        ScalarField dF = fd_derivative(F, j);
        ScalarField dR = fd_derivative(rho, j);
        int o = j.order();
        est.sup_dF[o] = std::max(est.sup_dF[o], sup_on(dF, keps));
        est.sup_drho[o] = std::max(est.sup_drho[o], sup_on(dR, keps));
        if (gamma > 0.0) {
            est.holder_dF[o] = std::max(est.holder_dF[o], holder_seminorm(dF, keps, gamma, opts).value);
            est.holder_drho[o] =
                std::max(est.holder_drho[o], holder_seminorm(dR, keps, gamma, opts).value);
        }
        if (o == m) {
            if (gamma > 0.0) {
                om1 = std::max(om1, holder_seminorm(dF, keps, gamma, opts).value);
                om2 = std::max(om2, holder_seminorm(dF, k2eps, gamma, opts).value);
            } else {
                om1 = std::max(om1, sup_on(dF, keps));
                om2 = std::max(om2, sup_on(dF, k2eps));
            }
        }
    }
    est.omega_eps = om1;
    est.omega_2eps = om2;
    return out;
}

ScalarField auxiliary_function(const std::vector<CompactSet>& covers,
                               const std::vector<double>& constants, const CompactSet& K,
                               const Grid& grid) {
    if (covers.size() != constants.size())
        throw std::invalid_argument("auxiliary_function: covers/constants size mismatch");
    if (covers.empty()) throw std::invalid_argument("auxiliary_function: no covers");
    for (const CompactSet& U : covers)
        if (!(U.grid == grid)) throw std::invalid_argument("auxiliary_function: grid mismatch");

    // every K sample must lie in exactly one cover
    for (std::size_t q : K.nodes) {
        int hits = 0;
        for (const CompactSet& U : covers) hits += U.mask[q] ? 1 : 0;
        if (hits != 1)
            throw std::invalid_argument("auxiliary_function: K not partitioned by the covers");
    }
    // the covers themselves must be set-disjoint with a positive grid gap
    for (std::size_t a = 0; a < covers.size(); ++a)
        for (std::size_t b = a + 1; b < covers.size(); ++b)
            for (std::size_t q : covers[b].nodes)
                if (covers[a].mask[q])
                    throw std::invalid_argument("auxiliary_function: covers touch");

    // constancy is only needed near the K-part of each cover; preimage covers
    // legitimately reach towards foreign components where psi matches their
    // interval, so the plateaus grow from S_i = K cap U_i
    std::vector<DistanceField> dfs;
    std::vector<std::vector<std::size_t>> part_nodes(covers.size());
    for (std::size_t i = 0; i < covers.size(); ++i) {
        std::vector<std::uint8_t> part(grid.size(), 0);
        bool any = false;
        for (std::size_t q : K.nodes)
            if (covers[i].mask[q]) {
                part[q] = 1;
                part_nodes[i].push_back(q);
                any = true;
            }
        if (!any) throw std::invalid_argument("auxiliary_function: a cover misses K entirely");
        dfs.push_back(distance_transform(grid, part));
    }

    double gap = std::numeric_limits<double>::max();
    for (std::size_t a = 0; a < covers.size(); ++a)
        for (std::size_t b = 0; b < covers.size(); ++b) {
            if (a == b) continue;
            for (std::size_t q : part_nodes[b]) gap = std::min(gap, dfs[a].dist.v[q]);
        }
    double span = std::min(grid.x_max() - grid.x0, grid.y_max() - grid.y0);
    gap = std::min(gap, 0.25 * span);
    if (gap < 10 * grid.h)
        throw std::invalid_argument("auxiliary_function: covers closer than the resolvable gap");

    // plateau = 1 on (S_i)_{gap/4}, 0 outside (S_i)_{0.45 gap}
    double w = 0.1 * gap;
    double mid = 0.35 * gap;
    ScalarField h(grid);
    for (std::size_t i = 0; i < covers.size(); ++i) {
        if (constants[i] == 0.0) continue;
        ScalarField cut = mollified_indicator(dfs[i].dist, mid, w);
        for (std::size_t q = 0; q < h.v.size(); ++q) h.v[q] += constants[i] * cut.v[q];
    }
    return h;
}

}  // namespace divfree
