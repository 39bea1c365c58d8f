#include "divfree/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include "divfree/norms.hpp"
#include "divfree/smooth.hpp"

namespace divfree {

using nlohmann::json;

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "whitney-demo",     "c1-pipeline",       "cmgamma-pipeline", "sobolev-diagnostics",
        "besov-compression", "koch-sharpness",   "glue-demo"};
    return names;
}

Grid grid_from_config(const json& cfg) {
    double cx = 0.0, cy = 0.0, span = 2.0;
    int n = 513;
    if (cfg.contains("grid")) {
        const json& g = cfg["grid"];
        if (g.contains("center")) {
            cx = g["center"][0].get<double>();
            cy = g["center"][1].get<double>();
        }
        if (g.contains("span")) span = g["span"].get<double>();
        if (g.contains("n")) n = g["n"].get<int>();
    }
    if (span <= 0.0 || n < 2) throw std::invalid_argument("config: grid.span/n invalid");
    return square_grid(cx, cy, span, n);
}

std::vector<Shape> shapes_from_config(const json& cfg) {
    std::vector<Shape> shapes;
    if (cfg.contains("disks")) {
        for (const json& d : cfg["disks"]) {
            Disk dk;
            dk.c = {d["c"][0].get<double>(), d["c"][1].get<double>()};
            dk.r = d["r"].get<double>();
            shapes.push_back(dk);
        }
    }
    if (cfg.contains("koch")) {
        const json& kj = cfg["koch"];
        double a = kj.value("a", 0.3);
        int order = kj.value("order", 4);
        KochCurve kc = koch_curve(a, order);
        Vec2 origin{0.0, 0.0};
        double scale = kj.value("scale", 1.0);
        if (kj.contains("origin"))
            origin = {kj["origin"][0].get<double>(), kj["origin"][1].get<double>()};
        Polyline pl;
        pl.width = kj.value("width", 0.0);
        for (Vec2 v : kc.vertices) pl.pts.push_back(origin + scale * v);
        shapes.push_back(pl);
    }
    return shapes;
}

Schedule schedule_from_config(const json& cfg, const char* key, Schedule fallback) {
    if (!cfg.contains(key)) return fallback;
    const json& s = cfg[key];
    Schedule out;
    out.start = s.value("start", fallback.start);
    out.factor = s.value("factor", fallback.factor);
    out.count = s.value("count", fallback.count);
    if (out.start <= 0 || out.factor <= 0 || out.factor >= 1 || out.count < 1)
        throw std::invalid_argument(std::string("config: bad schedule ") + key);
    return out;
}

DiskFixture disk_fixture(const Grid& grid, const std::vector<Disk>& disks,
                         const std::vector<double>& constants, double inner_pad,
                         double outer_pad) {
    if (disks.size() != constants.size())
        throw std::invalid_argument("disk_fixture: disks/constants mismatch");
    DiskFixture fx;
    fx.grid = grid;
    fx.constants = constants;
    std::vector<Shape> shapes(disks.begin(), disks.end());
    fx.K = make_compact_set(shapes, grid);
    fx.psi = ScalarField(grid);
    for (std::size_t q = 0; q < grid.size(); ++q) {
        Vec2 x = grid.node(int(q % grid.nx), int(q / grid.nx));
        double v = 0.0;
        for (std::size_t i = 0; i < disks.size(); ++i) {
            double d = std::max(0.0, dist(x, disks[i].c) - disks[i].r);
            v += constants[i] * plateau(d, inner_pad, outer_pad);
        }
        fx.psi.v[q] = v;
    }
    fx.u = perp_gradient(fx.psi);
    return fx;
}

std::vector<Disk> random_disks(std::uint64_t seed, int max_disks, double rmin, double rmax,
                               double center_box, double min_gap) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count_d(1, max_disks);
    std::uniform_real_distribution<double> pos(-center_box, center_box);
    std::uniform_real_distribution<double> rad(rmin, rmax);
    int want = count_d(rng);
    std::vector<Disk> disks;
    for (int tries = 0; tries < 4000 && int(disks.size()) < want; ++tries) {
        Disk d{{pos(rng), pos(rng)}, rad(rng)};
        bool ok = true;
        for (const Disk& o : disks)
            if (dist(d.c, o.c) < d.r + o.r + min_gap) ok = false;
        if (ok) disks.push_back(d);
    }
    return disks;
}

namespace {

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

void write_convergence_csv(const PipelineReport& rep, const std::string& path) {
    std::ofstream out(path);
    out << "eps,k,err_C1,err_Wmp,max_div,support_gap,delta_eps\n";
    char buf[256];
    for (const StageReport& st : rep.stages) {
        for (std::size_t k = 0; k < st.rows.size(); ++k) {
            const ApproximantRow& r = st.rows[k];
            std::snprintf(buf, sizeof buf, "%.12g,%zu,%.12g,%.12g,%.3g,%.12g,%.12g\n", r.eps, k,
                          r.err_c1, r.err_wmp, r.max_div, r.support_gap, r.delta_eps);
            out << buf;
        }
    }
}

json row_json(const ApproximantRow& r) {
    return json{{"eps", r.eps},         {"cutoff", r.cutoff},
                {"err_C1", r.err_c1},   {"err_Wmp", r.err_wmp},
                {"max_div", r.max_div}, {"support_gap", r.support_gap},
                {"delta_eps", r.delta_eps}};
}

json pipeline_json(const PipelineReport& rep) {
    json stages = json::array();
    for (const StageReport& st : rep.stages) {
        json rows = json::array();
        for (const ApproximantRow& r : st.rows) rows.push_back(row_json(r));
        stages.push_back(json{{"eps", st.eps},
                              {"n_intervals", st.n_intervals},
                              {"cover_length", st.cover_length},
                              {"delta_jet", st.delta_jet},
                              {"delta_sobolev", st.delta_sobolev},
                              {"g_jet_residual", st.g_jet_residual},
                              {"rows", rows}});
    }
    json diag = json::array();
    for (const ApproximantRow& r : rep.diagonal) diag.push_back(row_json(r));
    return json{{"m", rep.m},
                {"gamma", rep.gamma},
                {"maximal_mode", rep.maximal_mode},
                {"stages", stages},
                {"diagonal", diag}};
}

// fixture pieces shared by the pipeline scenarios
struct PipelineSetup {
    Grid grid;
    DiskFixture fx;
    Schedule eps_schedule, cutoff_schedule;
    int m = 2;
    double gamma = 0.0;
};

PipelineSetup pipeline_setup(const json& cfg) {
    PipelineSetup ps;
    ps.grid = grid_from_config(cfg);
    std::vector<Disk> disks;
    std::vector<double> constants;
    if (cfg.contains("disks")) {
        for (const json& d : cfg["disks"]) {
            disks.push_back(Disk{{d["c"][0].get<double>(), d["c"][1].get<double>()},
                                 d["r"].get<double>()});
            constants.push_back(d.value("value", 0.0));
        }
    } else {
        disks = {Disk{{-0.35, 0.0}, 0.10}, Disk{{0.35, 0.0}, 0.10}};
        constants = {0.0, 1.0};
    }
    // the truncation widths below stay under 4*inner_pad, where the potential
    // is exactly constant around K, so no live part of u is ever cut away
    double inner = cfg.value("inner_pad", 0.08), outer = cfg.value("outer_pad", 0.2);
    ps.fx = disk_fixture(ps.grid, disks, constants, inner, outer);
    ps.eps_schedule = schedule_from_config(cfg, "eps_schedule", Schedule{0.5, 0.5, 6});
    ps.cutoff_schedule = schedule_from_config(cfg, "cutoff_schedule", Schedule{0.3, 0.65, 6});
    ps.m = cfg.value("m", 2);
    ps.gamma = cfg.value("gamma", 0.0);
    return ps;
}

int run_pipeline_scenario(const Scenario& sc, bool with_gamma) {
    json cfg = sc.config;
    if (with_gamma && cfg.value("gamma", 0.25) <= 0.0)
        throw std::invalid_argument("cmgamma-pipeline: gamma must be > 0");
    if (with_gamma && !cfg.contains("gamma")) cfg["gamma"] = 0.25;
    PipelineSetup ps = pipeline_setup(cfg);
    PipelineOptions opts;
    opts.p = cfg.value("p", 3.0);
    PipelineReport rep = approximate_divfree(ps.fx.u, ps.fx.K, ps.eps_schedule,
                                             ps.cutoff_schedule, ps.m, ps.gamma, opts);

    std::vector<std::string> problems;
    double h = ps.grid.h;
    for (const StageReport& st : rep.stages) {
        for (const ApproximantRow& r : st.rows) {
            if (r.max_div > 1e-12) problems.push_back("max|div| above 1e-12");
            if (!(r.support_gap > 0.0)) problems.push_back("non-positive support gap");
            if (r.support_gap < r.cutoff / 4 - h) problems.push_back("support gap below eps/4 - h");
        }
    }
    for (std::size_t t = 1; t < rep.diagonal.size(); ++t)
        if (!(rep.diagonal[t].err_c1 < rep.diagonal[t - 1].err_c1))
            problems.push_back("diagonal err_C1 not strictly decreasing at stage " +
                               std::to_string(t));
    double target_ratio = cfg.value("target_ratio", 0.1);
    if (!rep.diagonal.empty() &&
        !(rep.diagonal.back().err_c1 <= target_ratio * rep.diagonal.front().err_c1))
        problems.push_back("diagonal err_C1 final/initial above target ratio");

    ensure_dir(sc.out_dir);
    write_convergence_csv(rep, sc.out_dir + "/convergence.csv");
    json out{{"scenario", sc.name},
             {"seed", sc.seed},
             {"config", cfg},
             {"pipeline", pipeline_json(rep)},
             {"problems", problems},
             {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    if (cfg.value("rasters", false)) {
        write_pgm(ps.fx.psi, sc.out_dir + "/potential.pgm");
        write_mask_txt(ps.grid, ps.fx.K.mask, sc.out_dir + "/mask.txt");
    }
    return problems.empty() ? 0 : 1;
}

int run_whitney_demo(const Scenario& sc) {
    const json& cfg = sc.config;
    Grid grid = grid_from_config(cfg);
    std::vector<Shape> shapes = shapes_from_config(cfg);
    if (shapes.empty()) shapes = {Disk{{-0.25, 0.0}, 0.15}, Disk{{0.3, 0.1}, 0.12}};
    CompactSet K = make_compact_set(shapes, grid);

    Vec2 lo{1e9, 1e9}, hi{-1e9, -1e9};
    for (const Vec2& p : K.points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    int cap = cfg.value("cap_level", 0);
    WhitneyDecomposition dec =
        cap > 0 ? whitney_decompose(K, {lo.x - 1.1, lo.y - 1.1}, {hi.x + 1.1, hi.y + 1.1}, cap)
                : decompose_for(K, grid.h);

    const double s2 = std::sqrt(2.0);
    double min_ratio = 1e300, max_ratio = 0.0;
    for (const Cube& c : dec.cubes) {
        min_ratio = std::min(min_ratio, c.dist_K / c.side);
        max_ratio = std::max(max_ratio, c.dist_K / c.side);
    }
    std::size_t max_nb = 0;
    double side_lo = 4.0, side_hi = 0.25;
    for (std::size_t k = 0; k < dec.cubes.size(); ++k) {
        max_nb = std::max(max_nb, dec.neighbor[k].size());
        for (int k2 : dec.neighbor[k]) {
            double r = dec.cubes[k].side / dec.cubes[k2].side;
            side_lo = std::min(side_lo, r);
            side_hi = std::max(side_hi, r);
        }
    }
    PartitionOfUnity pou(dec);
    double sum_dev = 0.0;
    std::size_t covered = 0;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        if (K.mask[q]) continue;
        auto ev = pou.eval(grid.node(int(q % grid.nx), int(q / grid.nx)));
        if (!ev.covered) continue;
        ++covered;
        double s = 0.0;
        for (auto& t : ev.terms) s += t.second;
        sum_dev = std::max(sum_dev, std::fabs(s - 1.0));
    }
    auto cons = pou.measured_derivative_constants(2);

    std::vector<std::string> problems;
    if (min_ratio < s2 - 1e-12) problems.push_back("dist/side below sqrt(2)");
    if (max_ratio > 4 * s2 + 1e-12) problems.push_back("dist/side above 4 sqrt(2)");
    if (side_lo < 0.25 - 1e-12 || side_hi > 4 + 1e-12)
        problems.push_back("touching side ratio outside [1/4, 4]");
    if (max_nb > 144) problems.push_back("neighbor count above 144");
    if (sum_dev > 1e-10) problems.push_back("partition sum deviates above 1e-10");

    ensure_dir(sc.out_dir);
    dump_decomposition_csv(dec, sc.out_dir + "/decomposition.csv");
    json out{{"scenario", sc.name},
             {"seed", sc.seed},
             {"config", cfg},
             {"results",
              {{"n_cubes", dec.cubes.size()},
               {"n_unresolved", dec.unresolved.size()},
               {"dist_over_side_min", min_ratio},
               {"dist_over_side_max", max_ratio},
               {"touch_ratio_min", side_lo},
               {"touch_ratio_max", side_hi},
               {"max_neighbors", max_nb},
               {"partition_sum_dev", sum_dev},
               {"covered_nodes", covered},
               {"phi_derivative_constants", cons}}},
             {"problems", problems},
             {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    if (cfg.value("rasters", false)) {
        DistanceField df = distance_field(K);
        write_pgm(df.dist, sc.out_dir + "/distance.pgm");
        write_mask_txt(grid, K.mask, sc.out_dir + "/mask.txt");
    }
    return problems.empty() ? 0 : 1;
}

int run_sobolev_diagnostics(const Scenario& sc) {
    const json& cfg = sc.config;
    int n_seeds = cfg.value("n_seeds", 6);
    std::vector<int> resolutions = cfg.value("resolutions", std::vector<int>{257, 513});
    std::vector<double> ps = cfg.value("p", std::vector<double>{3.0, 4.0});
    int m = cfg.value("m", 2);

    json runs = json::array();
    std::vector<std::string> problems;
    // ratio drift across resolutions, per p
    std::vector<double> restr_lo(ps.size(), 1e300), restr_hi(ps.size(), 0.0);
    std::vector<double> ext_lo(ps.size(), 1e300), ext_hi(ps.size(), 0.0);

    for (int s = 0; s < n_seeds; ++s) {
        auto disks = random_disks(sc.seed + 1000 * s, 3, 0.08, 0.16, 0.5, 0.28);
        std::mt19937_64 rng(sc.seed + 1000 * s + 7);
        std::uniform_real_distribution<double> val(-1.0, 1.0);
        std::vector<double> constants;
        for (std::size_t i = 0; i < disks.size(); ++i) constants.push_back(val(rng));

        for (int res : resolutions) {
            Grid grid = square_grid(0.0, 0.0, 2.0, res);
            DiskFixture fx = disk_fixture(grid, disks, constants, 0.03, 0.10);
            Jet jet = restrict_field(fx.psi, fx.K, m - 1);
            for (std::size_t mi = 1; mi < jet.values.size(); ++mi)
                std::fill(jet.values[mi].begin(), jet.values[mi].end(), 0.0);

            MaximalField mf = shvartsman_field(jet, m, grid, &fx.K.node_component);
            WhitneyDecomposition dec = decompose_for(fx.K, grid.h);
            ExtensionField ext = whitney_extend_sobolev(jet, dec, m, grid, fx.K);

            for (std::size_t pi = 0; pi < ps.size(); ++pi) {
                double p = ps[pi];
                double mnorm = lp_norm(mf.M, p);
                double fnorm = grad_m_lp(fx.psi, m, p);
                double enorm = grad_m_lp(ext.F, m, p, ext.resolved);
                double c_restr = mnorm / std::max(fnorm, 1e-300);
                double c_ext = enorm / std::max(mnorm, 1e-300);
                restr_lo[pi] = std::min(restr_lo[pi], c_restr);
                restr_hi[pi] = std::max(restr_hi[pi], c_restr);
                ext_lo[pi] = std::min(ext_lo[pi], c_ext);
                ext_hi[pi] = std::max(ext_hi[pi], c_ext);
                runs.push_back(json{{"seed", s},
                                    {"n", res},
                                    {"p", p},
                                    {"maximal_mode", mf.mode},
                                    {"norm_M", mnorm},
                                    {"norm_gradm_F", fnorm},
                                    {"norm_gradm_E", enorm},
                                    {"restriction_ratio", c_restr},
                                    {"extension_ratio", c_ext}});
            }
        }
    }
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        if (restr_hi[pi] / std::max(restr_lo[pi], 1e-300) > 2.0)
            problems.push_back("restriction constant drifts above 2x at p index " +
                               std::to_string(pi));
        if (ext_hi[pi] / std::max(ext_lo[pi], 1e-300) > 2.0)
            problems.push_back("extension constant drifts above 2x at p index " +
                               std::to_string(pi));
    }

    ensure_dir(sc.out_dir);
    json out{{"scenario", sc.name}, {"seed", sc.seed},       {"config", cfg},
             {"runs", runs},        {"problems", problems},  {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    return problems.empty() ? 0 : 1;
}

// canonical witness sequence: f_nu = f with minimal measured a_nu
BesovSequence canonical_sequence(const Jet& f, const RegularMeasure& mu, double beta, double p,
                                 double q, int levels) {
    BesovSequence seq;
    seq.beta = beta;
    seq.p = p;
    seq.q = q;
    seq.k = besov_target_order(beta);
    seq.jb = besov_level_order(beta);
    Jet level = Jet::zero(seq.jb, f.points);
    level.values[0] = f.values[0];
    seq.jets.assign(levels, level);
    seq.a.assign(levels, 1.0);
    ConditionReport probe = besov_conditions(f, seq, mu);
    std::vector<double> need(levels, 0.0);
    for (const ConditionEntry& e : probe.entries)
        need[e.nu] = std::max(need[e.nu], e.lhs / std::max(e.rhs, 1e-300));
    for (int nu = 0; nu < levels; ++nu) seq.a[nu] = std::max(need[nu] * 1.0000001, 1e-14);
    return seq;
}

int run_besov_compression(const Scenario& sc) {
    const json& cfg = sc.config;
    Grid grid = grid_from_config(cfg);
    std::vector<Shape> shapes = shapes_from_config(cfg);
    std::vector<double> constants = cfg.value("values", std::vector<double>{0.0, 1.0});
    if (shapes.empty()) {
        shapes = {Disk{{-0.24, 0.0}, 0.10}, Disk{{0.24, 0.0}, 0.10}};
    }
    CompactSet K = make_compact_set(shapes, grid);
    double d = cfg.value("d", 1.0);
    double p = cfg.value("p", 3.0);
    double q = cfg.value("q", p);
    double beta = cfg.value("beta", 2.0 - (2.0 - d) / p);
    int n_points = cfg.value("n_points", 480);
    int levels = std::min(besov_nu_max(grid.h) + 1, cfg.value("levels", 9));

    RegularMeasure mu = sample_measure(K, d, n_points);
    Jet f = Jet::zero(besov_target_order(beta), mu.points);
    // component-wise values transported from the nearest primitive
    for (std::size_t s = 0; s < mu.points.size(); ++s) {
        double best = 1e300;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < shapes.size(); ++i) {
            double dd = point_shape_distance(mu.points[s], shapes[i]);
            if (dd < best) {
                best = dd;
                arg = i;
            }
        }
        f.values[0][s] = arg < constants.size() ? constants[arg] : 0.0;
    }

    BesovSequence seq = canonical_sequence(f, mu, beta, p, q, levels);
    ReduceResult red = zero_derivative_reduce(f, seq, mu);

    Schedule eps_sched = schedule_from_config(cfg, "eps_schedule", Schedule{0.5, 0.5, 7});
    json stages = json::array();
    std::vector<std::string> problems;
    double first = -1.0, prev = -1.0, last = 0.0;
    for (double eps : eps_sched.values()) {
        auto intervals = image_cover(f.values[0], eps);
        CompressionMap eta = compression_map(intervals);
        CompressResult cr = besov_compress(f, red.seq, eta, mu);
        ConditionReport check = besov_conditions(cr.f_eps, cr.seq_eps, mu);
        if (!check.valid)
            problems.push_back("compressed sequence fails conditions at eps " +
                               std::to_string(eps));
        double norm = cr.norm_bound;
        if (first < 0) first = norm;
        if (prev >= 0 && norm > prev * (1 + 1e-12))
            problems.push_back("besov bound not non-increasing at eps " + std::to_string(eps));
        prev = norm;
        last = norm;
        stages.push_back(json{{"eps", eps},
                              {"effective_eps", cr.epsilon},
                              {"norm_bound", norm},
                              {"worst_ratio", check.worst_ratio},
                              {"valid", check.valid}});
    }
    double ratio_target = cfg.value("target_ratio", 0.05);
    if (!(last <= ratio_target * first))
        problems.push_back("besov bound final/initial above target");

    ensure_dir(sc.out_dir);
    dump_measure_csv(mu, sc.out_dir + "/measure.csv");
    json out{{"scenario", sc.name},
             {"seed", sc.seed},
             {"config", cfg},
             {"results",
              {{"d", d},
               {"beta", beta},
               {"p", p},
               {"q", q},
               {"levels", levels},
               {"reg_c", mu.reg_c},
               {"reg_C", mu.reg_C},
               {"regular_warning", mu.regular_warning},
               {"hardy_ratio", red.hardy_ratio},
               {"stages", stages}}},
             {"problems", problems},
             {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    return problems.empty() ? 0 : 1;
}

int run_koch_sharpness(const Scenario& sc) {
    const json& cfg = sc.config;
    double a;
    double gamma;
    if (cfg.contains("gamma") && !cfg.contains("koch")) {
        gamma = cfg["gamma"].get<double>();
        a = std::pow(4.0, -1.0 / (1.0 + gamma));
    } else {
        a = cfg.contains("koch") ? cfg["koch"].value("a", 0.35) : 0.35;
        gamma = 1.0 / std::fabs(std::log(a) / std::log(4.0)) - 1.0;
    }
    int order = cfg.contains("koch") ? cfg["koch"].value("order", 5) : 5;
    int n = cfg.contains("grid") && cfg["grid"].contains("n") ? cfg["grid"]["n"].get<int>() : 1025;

    KochCurve koch = koch_curve(a, order);
    Grid grid = square_grid(0.5, 0.2, 2.0, n);
    CompactSet K = make_compact_set({koch.polyline()}, grid);

    // target field
    Jet jet = Jet::zero(1, K.points);
    for (std::size_t s = 0; s < K.n_samples(); ++s)
        jet.values[0][s] = koch.nearest_parameter(K.points[s]);
    WhitneyDecomposition dec = decompose_for(K, grid.h);
    ScalarField F = whitney_extend(jet, dec, 1, grid, K).F;
    VectorField2 u = perp_gradient(F);

    std::vector<VectorField2> candidates;
    std::vector<std::string> names;
    candidates.push_back(VectorField2(grid));
    names.push_back("zero-field");
    std::vector<double> widths = cfg.value("truncation_widths", std::vector<double>{0.2, 0.1, 0.05});
    for (double w : widths) {
        ScalarField rho = smooth_cutoff(K, w);
        ScalarField trunc = F;
        for (std::size_t qq = 0; qq < trunc.v.size(); ++qq) trunc.v[qq] *= (1.0 - rho.v[qq]);
        candidates.push_back(perp_gradient(trunc));
        names.push_back("truncation-w" + std::to_string(w));
    }

    double floor_gap = cfg.value("gap_floor", 0.4);
    SharpnessReport rep = sharpness_certificate(gamma, candidates, names, koch, K, grid, floor_gap);

    std::vector<std::string> problems;
    if (!rep.all_certified) problems.push_back("a candidate escaped the certified gap floor");

    ensure_dir(sc.out_dir);
    json cands = json::array();
    for (const CandidateCertificate& c : rep.candidates)
        cands.push_back(json{{"name", c.name},
                             {"potential_constant", c.potential_constant},
                             {"potential_spread", c.potential_spread},
                             {"gap", c.gap},
                             {"velocity_lower_bound", c.velocity_lower_bound}});
    json out{{"scenario", sc.name},
             {"seed", sc.seed},
             {"config", cfg},
             {"results",
              {{"a", a},
               {"order", order},
               {"gamma", rep.gamma},
               {"theta", rep.theta},
               {"holder_constant", rep.holder_constant},
               {"jet_norm", rep.jet_norm},
               {"target_range", rep.target_range},
               {"gap_floor", floor_gap},
               {"candidates", cands}}},
             {"problems", problems},
             {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    return problems.empty() ? 0 : 1;
}

int run_glue_demo(const Scenario& sc) {
    const json& cfg = sc.config;
    Grid grid = cfg.contains("grid") ? grid_from_config(cfg) : square_grid(0.0, 0.0, 2.0, 513);
    std::vector<Disk> disks{{{-0.55, 0.0}, 0.12}, {{0.0, 0.35}, 0.12}, {{0.55, 0.0}, 0.12}};
    std::vector<double> constants{0.0, 1.0, 2.0};
    DiskFixture fx = disk_fixture(grid, disks, constants, 0.03, 0.10);

    // group A: disks 0 and 1, group B: disk 2
    CompactSet KA = make_compact_set({disks[0], disks[1]}, grid);
    CompactSet KB = make_compact_set({disks[2]}, grid);

    double eps = cfg.value("eps", 0.05);
    double w = cfg.value("cutoff", 0.12);
    SingleApproximant a1 = single_approximant(fx.u, KA, eps, w, 2, 0.0);
    SingleApproximant a2 = single_approximant(fx.u, KB, eps, w, 2, 0.0);

    // chi: 1 near group A, 0 near group B
    DistanceField dA = distance_field(KA);
    ScalarField chi = mollified_indicator(dA.dist, 0.22, 0.06);
    GlueResult gl = glue_approximations(fx.u, a1.u, a2.u, KA, KB, chi);

    std::vector<std::string> problems;
    if (gl.max_div > 1e-12) problems.push_back("glued field divergence above 1e-12");
    if (!(gl.support_gap > 0.0)) problems.push_back("glued field touches a component");
    if (!(gl.err_c1 <= gl.c_chi * gl.err_inputs))
        problems.push_back("glued error above C(chi) * input errors");

    ensure_dir(sc.out_dir);
    json out{{"scenario", sc.name},
             {"seed", sc.seed},
             {"config", cfg},
             {"results",
              {{"err_C1", gl.err_c1},
               {"err_inputs", gl.err_inputs},
               {"C_chi", gl.c_chi},
               {"max_div", gl.max_div},
               {"support_gap", gl.support_gap},
               {"input_rows", json::array({row_json(a1.row), row_json(a2.row)})}}},
             {"problems", problems},
             {"pass", problems.empty()}};
    write_json(out, sc.out_dir + "/report.json");
    return problems.empty() ? 0 : 1;
}

}  // namespace

int run_scenario(const Scenario& sc) {
    if (sc.name == "whitney-demo") return run_whitney_demo(sc);
    if (sc.name == "c1-pipeline") return run_pipeline_scenario(sc, false);
    if (sc.name == "cmgamma-pipeline") return run_pipeline_scenario(sc, true);
    if (sc.name == "sobolev-diagnostics") return run_sobolev_diagnostics(sc);
    if (sc.name == "besov-compression") return run_besov_compression(sc);
    if (sc.name == "koch-sharpness") return run_koch_sharpness(sc);
    if (sc.name == "glue-demo") return run_glue_demo(sc);
    throw std::invalid_argument("unknown scenario: " + sc.name);
}

std::vector<std::string> validate_scenario(const Scenario& sc) {
    std::vector<std::string> problems;
    const json& cfg = sc.config;
    Grid grid = grid_from_config(cfg);
    double h = grid.h;

    auto check_schedule = [&](const char* key, Schedule fb) {
        Schedule s = schedule_from_config(cfg, key, fb);
        double smallest = s.at(s.count - 1);
        if (std::string(key) == "cutoff_schedule" && smallest < 8 * h)
            problems.push_back(std::string(key) + ": smallest value " + std::to_string(smallest) +
                               " below 8h = " + std::to_string(8 * h));
        return s;
    };
    check_schedule("eps_schedule", Schedule{0.5, 0.5, 6});
    check_schedule("cutoff_schedule", Schedule{0.45, 0.6, 6});

    if (cfg.contains("levels")) {
        int lv = cfg["levels"].get<int>();
        int nu_cap = besov_nu_max(h);
        if (lv - 1 > nu_cap)
            problems.push_back("levels: nu_max " + std::to_string(lv - 1) +
                               " too deep for h (needs 2^-nu >= 4h, cap " +
                               std::to_string(nu_cap) + ")");
    }
    int m = cfg.value("m", 2);
    if (m > 4) problems.push_back("m: derivative order above the stencil table (<= 4)");
    if (grid.nx < 2 * m + 5) problems.push_back("grid: too few nodes for order-m stencils");
    return problems;
}

}  // namespace divfree
