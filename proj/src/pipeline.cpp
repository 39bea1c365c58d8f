#include "divfree/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "divfree/norms.hpp"
#include "divfree/parallel.hpp"

namespace divfree {

double Schedule::at(int t) const { return start * std::pow(factor, t); }

std::vector<double> Schedule::values() const {
    std::vector<double> v;
    for (int t = 0; t < count; ++t) v.push_back(at(t));
    return v;
}

double support_gap(const VectorField2& u, const DistanceField& dist_K) {
    const Grid& g = u.grid;
    double gap = std::numeric_limits<double>::max();
    bool any = false;
    for (std::size_t q = 0; q < u.u1.size(); ++q) {
        if (u.u1[q] == 0.0) continue;
        any = true;
        int i = int(q % g.nx), j = int(q / g.nx);
        gap = std::min(gap, std::min(dist_K.dist.at(i, j), dist_K.dist.at(i, j + 1)));
    }
    for (std::size_t q = 0; q < u.u2.size(); ++q) {
        if (u.u2[q] == 0.0) continue;
        any = true;
        int i = int(q % (g.nx - 1)), j = int(q / (g.nx - 1));
        gap = std::min(gap, std::min(dist_K.dist.at(i, j), dist_K.dist.at(i + 1, j)));
    }
    if (!any) return std::numeric_limits<double>::max();
    return std::max(0.0, gap - g.h / 2);
}

namespace {

[[noreturn]] void stage_fail(const char* tag, const std::exception& e) {
    throw std::runtime_error(std::string("[") + tag + "] " + e.what());
}

struct PipelineContext {
    ScalarField psi;
    Jet jet;
    WhitneyDecomposition dec;
    DistanceField dK;
};

PipelineContext build_context(const VectorField2& u, const CompactSet& K, int m,
                              const PipelineOptions& opts) {
    PipelineContext ctx;
    const Grid& grid = K.grid;

    // (S1) potential
    try {
        ctx.psi = stream_potential(u);
    } catch (const std::exception& e) {
        stage_fail("S1", e);
    }

    // (S2) restriction: the jet of the potential must vanish to order m on K
    try {
        ctx.jet = restrict_field(ctx.psi, K, m);
        double scale = std::max(1.0, cm_norm(ctx.psi, 0));
        auto mis = multi_indices(m);
        for (std::size_t mi = 0; mi < mis.size(); ++mi) {
            if (mis[mi].order() == 0) continue;
            for (double v : ctx.jet.values[mi])
                if (std::fabs(v) > opts.jet_tolerance * scale)
                    throw std::runtime_error(
                        "restricted jet of the potential does not vanish to order " +
                        std::to_string(m) + " on K (entry " + std::to_string(v) + ")");
            std::fill(ctx.jet.values[mi].begin(), ctx.jet.values[mi].end(), 0.0);
        }
    } catch (const std::exception& e) {
        stage_fail("S2", e);
    }

    // Whitney structure for K, shared by every stage
    try {
        if (opts.whitney_cap > 0) {
            Vec2 blo{K.bbox_lo.x - 1.05, K.bbox_lo.y - 1.05};
            Vec2 bhi{K.bbox_hi.x + 1.05, K.bbox_hi.y + 1.05};
            ctx.dec = whitney_decompose(K, blo, bhi, opts.whitney_cap);
        } else {
            ctx.dec = decompose_for(K, grid.h, 1.05);
        }
    } catch (const std::exception& e) {
        stage_fail("S6", e);
    }

    ctx.dK = distance_field(K);
    return ctx;
}

struct StagePieces {
    StageReport report;
    ScalarField h_eps;
    ScalarField g_eps;
};

StagePieces build_stage(const PipelineContext& ctx, const CompactSet& K, double eps, int m,
                        double gamma, const PipelineOptions& opts, std::string* maximal_mode) {
    const Grid& grid = K.grid;
    StagePieces sp;
    sp.report.eps = eps;

    // (S3) value cover and separated preimages
    std::vector<Interval> intervals;
    std::vector<CompactSet> covers;
    try {
        intervals = image_cover(ctx.psi, K, eps);
        covers = separated_preimage_cover(ctx.psi, K, intervals, eps);
    } catch (const std::exception& e) {
        stage_fail("S3", e);
    }
    sp.report.n_intervals = int(intervals.size());
    for (const Interval& iv : intervals) sp.report.cover_length += iv.length();

    // (S4) compression
    CompressionMap eta;
    Jet jet_eps;
    try {
        eta = compression_map(intervals);
        jet_eps = compress_jet(ctx.jet, eta);
    } catch (const std::exception& e) {
        stage_fail("S4", e);
    }

    // (S5) compressed-jet diagnostics
    try {
        sp.report.delta_jet = jet_norm(jet_eps, m, gamma).jet_norm;
        MaximalField mf = shvartsman_field(jet_eps, m, grid, &K.node_component);
        if (maximal_mode) *maximal_mode = mf.mode;
        sp.report.delta_sobolev = lp_norm(mf.M, opts.p);
    } catch (const std::exception& e) {
        stage_fail("S5", e);
    }

    // (S6) extension of the compressed jet
    ScalarField phi_eps;
    try {
        phi_eps = whitney_extend(jet_eps, ctx.dec, m, grid, K).F;
    } catch (const std::exception& e) {
        stage_fail("S6", e);
    }

    // (S7) auxiliary constants: F - F_eps = c_i on K cap U_i
    try {
        std::vector<double> consts;
        for (std::size_t i = 0; i < covers.size(); ++i) consts.push_back(eta.offsets[i]);
        sp.h_eps = auxiliary_function(covers, consts, K, grid);
        sp.g_eps = ctx.psi;
        for (std::size_t q = 0; q < sp.g_eps.v.size(); ++q)
            sp.g_eps.v[q] -= phi_eps.v[q] + sp.h_eps.v[q];
        Jet gj = restrict_field(sp.g_eps, K, m);
        for (auto& arr : gj.values)
            for (double v : arr)
                sp.report.g_jet_residual = std::max(sp.report.g_jet_residual, std::fabs(v));
        if (sp.report.g_jet_residual > 1e-9)
            throw std::runtime_error("g_eps does not vanish to order " + std::to_string(m) +
                                     " on K (residual " + std::to_string(sp.report.g_jet_residual) +
                                     ")");
    } catch (const std::exception& e) {
        stage_fail("S7", e);
    }
    return sp;
}

ApproximantRow build_approximant(const PipelineContext& ctx, const CompactSet& K,
                                 const StagePieces& sp, const VectorField2& u, double w, int m,
                                 double gamma, const PipelineOptions& opts, VectorField2* out) {
    try {
        TruncationResult tr = hedberg_truncate(sp.g_eps, K, w, m, gamma);
        ScalarField total = tr.F;
        for (std::size_t q = 0; q < total.v.size(); ++q) total.v[q] += sp.h_eps.v[q];
        VectorField2 ue = perp_gradient(total);

        ApproximantRow row;
        row.eps = sp.report.eps;
        row.cutoff = w;
        VectorField2 diff = subtract(ue, u);
        row.err_c1 = cm_norm_mac(diff, 1);
        row.err_wmp = wmp_norm_mac(diff, std::max(1, m - 1), opts.p);
        row.max_div = max_abs_divergence(ue);
        row.support_gap = support_gap(ue, ctx.dK);
        row.delta_eps = sp.report.delta_jet;
        if (out) *out = std::move(ue);
        return row;
    } catch (const std::exception& e) {
        stage_fail("S8", e);
    }
}

}  // namespace

PipelineReport approximate_divfree(const VectorField2& u, const CompactSet& K,
                                   const Schedule& eps_schedule, const Schedule& cutoff_schedule,
                                   int m, double gamma, const PipelineOptions& opts) {
    PipelineReport rep;
    rep.m = m;
    rep.gamma = gamma;
    PipelineContext ctx = build_context(u, K, m, opts);
    auto cutoffs = cutoff_schedule.values();

    for (double eps : eps_schedule.values()) {
        StagePieces sp = build_stage(ctx, K, eps, m, gamma, opts, &rep.maximal_mode);
        for (double w : cutoffs)
            sp.report.rows.push_back(
                build_approximant(ctx, K, sp, u, w, m, gamma, opts, nullptr));
        rep.stages.push_back(std::move(sp.report));
    }

    // diagonal sequence: stage t with cutoff t
    for (std::size_t t = 0; t < rep.stages.size(); ++t) {
        const auto& rows = rep.stages[t].rows;
        if (t < rows.size())
            rep.diagonal.push_back(rows[t]);
        else if (!rows.empty())
            rep.diagonal.push_back(rows.back());
    }
    return rep;
}

SingleApproximant single_approximant(const VectorField2& u, const CompactSet& K, double eps,
                                     double cutoff, int m, double gamma,
                                     const PipelineOptions& opts) {
    PipelineContext ctx = build_context(u, K, m, opts);
    StagePieces sp = build_stage(ctx, K, eps, m, gamma, opts, nullptr);
    SingleApproximant out;
    out.row = build_approximant(ctx, K, sp, u, cutoff, m, gamma, opts, &out.u);
    return out;
}

GlueResult glue_approximations(const VectorField2& u, const VectorField2& u1,
                               const VectorField2& u2, const CompactSet& K1, const CompactSet& K2,
                               const ScalarField& chi) {
    const Grid& g = chi.grid;
    for (std::size_t q : K1.nodes)
        if (std::fabs(chi.v[q] - 1.0) > 1e-12)
            throw std::invalid_argument("glue: chi is not identically 1 on K1");
    for (std::size_t q : K2.nodes)
        if (std::fabs(chi.v[q]) > 1e-12)
            throw std::invalid_argument("glue: chi is not identically 0 on K2");
    // the transition must stay clear of both sets
    ScalarField dchix = fd_derivative(chi, {1, 0});
    ScalarField dchiy = fd_derivative(chi, {0, 1});
    DistanceField d1 = distance_field(K1);
    DistanceField d2 = distance_field(K2);
    double guard = 4 * g.h;
    for (std::size_t q = 0; q < g.size(); ++q) {
        if ((dchix.v[q] != 0.0 || dchiy.v[q] != 0.0) &&
            (d1.dist.v[q] < guard || d2.dist.v[q] < guard))
            throw std::invalid_argument("glue: grad chi reaches into a K neighborhood");
    }

    ScalarField phi1 = stream_potential(u1);
    ScalarField phi2 = stream_potential(u2);
    ScalarField psi(g);
    for (std::size_t q = 0; q < g.size(); ++q)
        psi.v[q] = chi.v[q] * phi1.v[q] + (1.0 - chi.v[q]) * phi2.v[q];

    GlueResult out;
    out.v = perp_gradient(psi);
    VectorField2 dv = subtract(out.v, u);
    out.err_c1 = cm_norm_mac(dv, 1);
    out.err_inputs = cm_norm_mac(subtract(u1, u), 1) + cm_norm_mac(subtract(u2, u), 1);
    out.max_div = max_abs_divergence(out.v);

    // a-priori constant from the chi norms and the potential path length
    double L = (g.x_max() - g.x0) + (g.y_max() - g.y0);
    double grad_chi = std::max(cm_norm(dchix, 0), cm_norm(dchiy, 0));
    double hess_chi = 0.0;
    for (MultiIndex j : {MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{0, 2}}) {
        ScalarField djj = fd_derivative(chi, j);
        hess_chi = std::max(hess_chi, cm_norm(djj, 0));
    }
    out.c_chi = 1.0 + 2.0 * grad_chi * (1.0 + L) + hess_chi * L;

    std::vector<std::uint8_t> both(g.size(), 0);
    for (std::size_t q = 0; q < g.size(); ++q) both[q] = K1.mask[q] || K2.mask[q];
    CompactSet Kall = compact_set_from_mask(g, both);
    DistanceField dall = distance_field(Kall);
    out.support_gap = support_gap(out.v, dall);
    return out;
}

SharpnessReport sharpness_certificate(double gamma, const std::vector<VectorField2>& candidates,
                                      const std::vector<std::string>& names, const KochCurve& koch,
                                      const CompactSet& K, const Grid& grid, double gap_floor) {
    SharpnessReport rep;
    rep.gamma = gamma;
    rep.theta = koch.theta;

    // jet: inverse parameter map on K, zero gradient entries
    Jet jet = Jet::zero(1, K.points);
    for (std::size_t s = 0; s < K.n_samples(); ++s)
        jet.values[0][s] = koch.nearest_parameter(K.points[s]);

    // Holder band |f(x)-f(y)| <= C |x-y|^{1+gamma} on sampled pairs
    {
        std::vector<std::size_t> sel(K.n_samples());
        for (std::size_t i = 0; i < sel.size(); ++i) sel[i] = i;
        double best = par::max(sel.size(), [&](std::size_t a) {
            double loc = 0.0;
            for (std::size_t b = a + 1; b < sel.size(); ++b) {
                double r = dist(K.points[a], K.points[b]);
                if (r <= 0) continue;
                loc = std::max(loc, std::fabs(jet.values[0][a] - jet.values[0][b]) /
                                        std::pow(r, 1.0 + gamma));
            }
            return loc;
        });
        rep.holder_constant = best;
    }
    rep.jet_norm = jet_norm(jet, 1, gamma).jet_norm;

    // target potential: Whitney extension of the jet
    Vec2 lo{K.points[0]}, hi{K.points[0]};
    for (const Vec2& p : K.points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    WhitneyDecomposition dec = decompose_for(K, grid.h);
    ScalarField F = whitney_extend(jet, dec, 1, grid, K).F;
    VectorField2 u = perp_gradient(F);
    ScalarField Ft = stream_potential(u);

    double fmin = std::numeric_limits<double>::max(), fmax = std::numeric_limits<double>::lowest();
    for (std::size_t q : K.nodes) {
        fmin = std::min(fmin, Ft.v[q]);
        fmax = std::max(fmax, Ft.v[q]);
    }
    rep.target_range = fmax - fmin;

    DistanceField dK = distance_field(K);
    // farthest K sample from the potential base point drives the line-integral bound
    Vec2 base{Ft.grid.x(Ft.grid.near_i(0.0)), Ft.grid.y(Ft.grid.near_j(0.0))};
    double Lpath = 0.0;
    for (const Vec2& pz : K.points) Lpath = std::max(Lpath, std::fabs(pz.x - base.x) + std::fabs(pz.y - base.y));

    rep.all_certified = true;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        CandidateCertificate cert;
        cert.name = c < names.size() ? names[c] : ("candidate-" + std::to_string(c));
        double sg = support_gap(candidates[c], dK);
        if (sg <= 0.0)
            throw std::invalid_argument("sharpness_certificate: candidate " + cert.name +
                                        " touches the curve neighborhood");
        ScalarField phic = stream_potential(candidates[c]);
        double cmin = std::numeric_limits<double>::max(), cmax = std::numeric_limits<double>::lowest();
        for (std::size_t q : K.nodes) {
            cmin = std::min(cmin, phic.v[q]);
            cmax = std::max(cmax, phic.v[q]);
        }
        cert.potential_spread = cmax - cmin;
        cert.potential_constant = cert.potential_spread <= 1e-6 * std::max(1.0, rep.target_range);
        // candidate potential is constant on K, so no constant can track F there
        cert.gap = 0.5 * rep.target_range;
        cert.velocity_lower_bound = cert.gap / std::max(Lpath, 1e-12);
        rep.all_certified = rep.all_certified && cert.potential_constant && cert.gap >= gap_floor;
        rep.candidates.push_back(cert);
    }
    return rep;
}

}  // namespace divfree
