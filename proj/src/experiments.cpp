#include "perc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace perc {

namespace {

double half_width(const WilsonInterval& ci) { return (ci.hi - ci.lo) / 2.0; }

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::uint64_t salt(std::uint64_t seed, const char* tag) {
    std::uint64_t h = seed;
    for (const char* p = tag; *p; ++p) h = rng::mix(h ^ std::uint64_t(*p));
    return h;
}

bool trend_non_increasing(const std::vector<ExperimentRow>& rows, double k) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i + 1].estimate >
            rows[i].estimate + k * (half_width(rows[i].ci) + half_width(rows[i + 1].ci)))
            return false;
    return true;
}

bool trend_non_decreasing(const std::vector<ExperimentRow>& rows, double k) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i + 1].estimate <
            rows[i].estimate - k * (half_width(rows[i].ci) + half_width(rows[i + 1].ci)))
            return false;
    return true;
}

ExperimentResult base_result(const ExperimentContext& ctx, const std::string& id) {
    ExperimentResult r;
    r.id = id;
    r.lattice = ctx.cfg.lattice;
    r.model = ctx.cfg.model;
    std::ostringstream p;
    if (ctx.cfg.model == "hardcore") p << "lambda=" << fmt(ctx.cfg.lambda);
    else if (ctx.cfg.model == "staggered")
        p << "beta=" << fmt(ctx.cfg.beta) << " h=" << fmt(ctx.cfg.h);
    else p << "beta=" << fmt(ctx.cfg.beta);
    r.params = p.str();
    r.seed = ctx.cfg.seed;
    r.mode = ctx.cfg.mode.label();
    return r;
}

}  // namespace

const ThetaEstimate& ExperimentContext::theta_estimate() {
    if (!theta) {
        theta = std::make_shared<ThetaEstimate>(
            perc::estimate_theta(spin_model, *lattice, cfg.theta_L, cfg.theta_samples,
                                 salt(cfg.seed, "theta"), cfg.threads, SampleMode::exact()));
    }
    return *theta;
}

ExperimentContext make_context(const RunConfig& cfg) {
    std::int64_t max_L = cfg.theta_L;
    for (auto L : cfg.L_list) max_L = std::max(max_L, L);
    max_L = std::max(max_L, cfg.semicircuit_radius);

    LatticeSpec spec = LatticeSpec::preset(cfg.lattice);
    auto graph = std::make_shared<LatticeGraph>(make_lattice(spec, max_L + 6));

    SpinModel model;
    if (cfg.model == "ferro") {
        if (cfg.beta <= 0 && !cfg.force)
            throw Error("beta must be positive for experiment presets (set force for controls)");
        model = preset_ferro(cfg.beta, true);
    } else if (cfg.model == "staggered") {
        model = preset_staggered(*graph, cfg.beta, cfg.h);
    } else if (cfg.model == "hardcore") {
        model = preset_hardcore(cfg.lambda, true, graph.get());
    } else {
        throw Error("unknown model preset: " + cfg.model);
    }
    auto h1 = validate_H1(model);
    if (!h1.pass) throw Error("model fails attractivity (H1): " + h1.witness);
    auto h2 = validate_H2(model, *graph);
    if (!h2.pass)
        throw Error("model fails flip-reflection invariance (H2) on lattice '" + cfg.lattice +
                    "': " + h2.witness + " (staggered and hard-core need square_shifted)");

    ExperimentContext ctx{cfg, graph, std::move(model), HeatbathTables(), 1, nullptr};
    ctx.tables = HeatbathTables(ctx.spin_model, *graph);
    ctx.shift = (cfg.lattice == "square" && cfg.model == "ferro") ? 1 : 2;
    return ctx;
}

namespace {

std::vector<Configuration> context_batch(ExperimentContext& ctx, const Window& w,
                                         const BoundaryCondition& bc, std::size_t n,
                                         const char* tag, const SampleMode& mode) {
    auto batch = sample_batch(ctx.spin_model, ctx.tables, ctx.graph(), w, bc, n, mode,
                              salt(ctx.cfg.seed, tag), ctx.cfg.threads);
    if (ctx.cfg.model == "hardcore") {
        for (const auto& c : batch)
            if (!admissible(ctx.spin_model, c))
                throw Error("hard-core admissibility violated in a sampled configuration");
    }
    return batch;
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentResult exp_plus_sea(ExperimentContext& ctx) {
    auto r = base_result(ctx, "plus_sea");
    r.notes = "macroscopic proxy: minus-star cluster joining the core box to the window rim "
              "under all-plus boundary; complementary surrounding plus circuit checked on "
              "every sample";
    Rect core = Rect::box(ctx.cfg.core_radius);
    for (std::int64_t L : ctx.cfg.L_list) {
        Window w = Window::rect(ctx.graph(), Rect::box(L));
        auto batch = context_batch(ctx, w, BoundaryCondition::plus(), ctx.cfg.samples,
                                   "plus_sea", ctx.cfg.mode);
        std::size_t hits = 0, circuits = 0;
        for (const auto& c : batch) {
            bool crossing = rim_anchored_crossing(c, -1, core, Rect::box(L));
            bool circuit =
                find_surrounding_circuit(c, 1, Adjacency::plain, core, Rect::box(L)).has_value();
            if (crossing == circuit)
                throw Error("plus_sea: crossing and surrounding circuit are not complementary");
            hits += crossing;
            circuits += circuit;
        }
        ExperimentRow row;
        row.L = L;
        row.n = batch.size();
        row.metric = "minus_star_crossing";
        row.estimate = double(hits) / double(batch.size());
        row.ci = wilson_interval(double(hits), double(batch.size()));
        row.bound = ctx.cfg.plus_sea_ceiling;
        row.bound_formula = "ceiling";
        r.rows.push_back(row);

        ExperimentRow extra = row;
        extra.metric = "plus_circuit";
        extra.estimate = double(circuits) / double(batch.size());
        extra.ci = wilson_interval(double(circuits), double(batch.size()));
        extra.bound = std::nan("");
        extra.bound_formula = "complement";
        extra.verdict = "info";
        r.rows.push_back(extra);
    }
    std::vector<ExperimentRow> crossing_rows;
    for (const auto& row : r.rows)
        if (row.metric == "minus_star_crossing") crossing_rows.push_back(row);
    bool ceiling_ok = crossing_rows.back().estimate <= ctx.cfg.plus_sea_ceiling;
    bool trend_ok = trend_non_increasing(crossing_rows, ctx.cfg.k_sigma);
    r.verdict = ceiling_ok && trend_ok ? "pass" : "fail";
    for (auto& row : r.rows)
        if (row.verdict.empty()) row.verdict = r.verdict;
    return r;
}

ExperimentResult exp_no_coexistence(ExperimentContext& ctx) {
    auto r = base_result(ctx, "no_coexistence");
    r.notes = "frequency of simultaneous rim-anchored plus-star and minus-star clusters from "
              "the core box";
    Rect core = Rect::box(ctx.cfg.core_radius);
    for (std::int64_t L : ctx.cfg.L_list) {
        Window w = Window::rect(ctx.graph(), Rect::box(L));
        auto batch = context_batch(ctx, w, BoundaryCondition::plus(), ctx.cfg.samples,
                                   "no_coexistence", ctx.cfg.mode);
        std::size_t hits = 0;
        for (const auto& c : batch)
            hits += rim_anchored_crossing(c, 1, core, Rect::box(L)) &&
                    rim_anchored_crossing(c, -1, core, Rect::box(L));
        ExperimentRow row;
        row.L = L;
        row.n = batch.size();
        row.metric = "coexistence";
        row.estimate = double(hits) / double(batch.size());
        row.ci = wilson_interval(double(hits), double(batch.size()));
        row.bound = ctx.cfg.coexist_ceiling;
        row.bound_formula = "ceiling";
        r.rows.push_back(row);
    }
    bool ceiling_ok = r.rows.back().estimate <= ctx.cfg.coexist_ceiling;
    r.verdict = ceiling_ok && trend_non_increasing(r.rows, ctx.cfg.k_sigma) ? "pass" : "fail";
    for (auto& row : r.rows) row.verdict = r.verdict;
    return r;
}

ExperimentResult exp_butterflies(ExperimentContext& ctx) {
    auto r = base_result(ctx, "butterflies");
    r.notes = "wings anchored at the boundary line and the far window edge (line-touching "
              "proxy); both orientations tested at level 0";
    for (std::int64_t L : ctx.cfg.L_list) {
        Window w = Window::rect(ctx.graph(), Rect::box(L));
        auto batch = context_batch(ctx, w, BoundaryCondition::plus(), ctx.cfg.samples,
                                   "butterflies", ctx.cfg.mode);
        std::size_t any_hits = 0, both_hits = 0;
        for (const auto& c : batch) {
            bool h_plus = butterfly_proxy(c, Orientation::horizontal, 1, 0);
            bool v_plus = butterfly_proxy(c, Orientation::vertical, 1, 0);
            bool any = h_plus || v_plus || butterfly_proxy(c, Orientation::horizontal, -1, 0) ||
                       butterfly_proxy(c, Orientation::vertical, -1, 0);
            any_hits += any;
            both_hits += h_plus && v_plus;
        }
        ExperimentRow row;
        row.L = L;
        row.n = batch.size();
        row.metric = "butterfly_any";
        row.estimate = double(any_hits) / double(batch.size());
        row.ci = wilson_interval(double(any_hits), double(batch.size()));
        row.bound = ctx.cfg.butterfly_floor_any;
        row.bound_formula = "floor";
        r.rows.push_back(row);
        ExperimentRow both = row;
        both.metric = "butterfly_orthogonal_plus";
        both.estimate = double(both_hits) / double(batch.size());
        both.ci = wilson_interval(double(both_hits), double(batch.size()));
        both.bound = ctx.cfg.butterfly_floor_both;
        r.rows.push_back(both);
    }
    std::vector<ExperimentRow> any_rows, both_rows;
    for (const auto& row : r.rows)
        (row.metric == "butterfly_any" ? any_rows : both_rows).push_back(row);
    bool ok = any_rows.back().estimate >= ctx.cfg.butterfly_floor_any &&
              both_rows.back().estimate >= ctx.cfg.butterfly_floor_both &&
              trend_non_decreasing(any_rows, ctx.cfg.k_sigma) &&
              trend_non_decreasing(both_rows, ctx.cfg.k_sigma);
    r.verdict = ok ? "pass" : "fail";
    for (auto& row : r.rows) row.verdict = r.verdict;
    return r;
}

ExperimentResult exp_point_to_semicircuit(ExperimentContext& ctx) {
    auto r = base_result(ctx, "point_to_semicircuit");
    std::int64_t radius = ctx.cfg.semicircuit_radius;
    if (radius < 1) throw Error("semicircuit radius too small to form a semicircuit");
    r.notes = "boundary arc at distance " + std::to_string(radius) +
              " in the upper half-plane, plus on the arc and minus on the rest of the ring; "
              "event: the line site is star-connected to the arc inside the interior";

    Window w = Window::rect(ctx.graph(), Rect::box(radius - 1));
    BoundaryCondition bc = make_dobrushin_bc(ctx.graph(), Side::up, 0);
    auto batch = context_batch(ctx, w, bc, ctx.cfg.semicircuit_samples, "semicircuit",
                               SampleMode::exact());

    // the line site nearest the origin
    auto hp = half_plane(ctx.graph(), Side::up, 0);
    SiteId x = -1;
    Frac best(-1);
    for (SiteId s : w.interior_sites) {
        if (!hp.on_line[s]) continue;
        Frac d = ctx.graph().sites[s].x * ctx.graph().sites[s].x +
                 ctx.graph().sites[s].y * ctx.graph().sites[s].y;
        if (best.sign() < 0 || d < best) {
            best = d;
            x = s;
        }
    }
    if (x < 0) throw Error("no boundary-line site inside the semicircuit window");

    std::size_t hits = 0;
    for (const auto& c : batch) {
        if (c.spins[x] <= 0) continue;
        // star cluster of x within the interior, touching the plus arc
        std::vector<char> seen(ctx.graph().n_sites(), 0);
        std::queue<SiteId> q;
        q.push(x);
        seen[x] = 1;
        bool reached = false;
        while (!q.empty() && !reached) {
            SiteId u = q.front();
            q.pop();
            for (SiteId v : ctx.graph().adj_star[u]) {
                if (w.ring[v] && c.spins[v] > 0) { reached = true; break; }
                if (w.interior[v] && !seen[v] && c.spins[v] > 0) {
                    seen[v] = 1;
                    q.push(v);
                }
            }
        }
        hits += reached;
    }
    const ThetaEstimate& th = ctx.theta_estimate();
    ExperimentRow row;
    row.L = radius;
    row.n = batch.size();
    row.metric = "point_to_arc";
    row.estimate = double(hits) / double(batch.size());
    row.ci = wilson_interval(double(hits), double(batch.size()));
    row.bound = th.theta / 2.0;
    row.bound_formula = "theta_hat/2 (theta_hat=" + fmt(th.theta) + ")";
    double slack = ctx.cfg.k_sigma * (half_width(row.ci) + half_width(th.ci) / 2.0);
    r.verdict = row.estimate >= row.bound - slack ? "pass" : "fail";
    row.verdict = r.verdict;
    r.rows.push_back(row);
    r.mode = "exact";
    return r;
}

ExperimentResult exp_duplicated_circuit(ExperimentContext& ctx) {
    auto r = base_result(ctx, "duplicated_circuit");
    r.notes = "two independent layers, second sampled on the window translated by " +
              std::to_string(ctx.shift) + " and pulled back; counts a star circuit of "
              "pointwise-dominated sites around the core box";
    Rect core = Rect::box(ctx.cfg.dup_core_radius);
    BoundaryCondition bc = make_dobrushin_bc(ctx.graph(), Side::up, 0);
    const ThetaEstimate& th = ctx.theta_estimate();
    double quarter = th.theta / 4.0;
    double bound = quarter * quarter * quarter * quarter;
    for (std::int64_t L : ctx.cfg.L_list) {
        Window wa = Window::rect(ctx.graph(), Rect::box(L));
        Window wb = Window::rect(ctx.graph(), Rect::box(L).shifted(-ctx.shift, 0));
        auto layer_a = context_batch(ctx, wa, bc, ctx.cfg.samples, "dup_a", ctx.cfg.mode);
        auto layer_b = context_batch(ctx, wb, bc, ctx.cfg.samples, "dup_b", ctx.cfg.mode);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < layer_a.size(); ++i) {
            Configuration hat = shift_configuration(layer_b[i], wa, ctx.shift, 0);
            hits += leq_star_analysis(layer_a[i], hat, core, Rect::box(L)).has_value();
        }
        ExperimentRow row;
        row.L = L;
        row.n = layer_a.size();
        row.metric = "leq_star_circuit";
        row.estimate = double(hits) / double(layer_a.size());
        row.ci = wilson_interval(double(hits), double(layer_a.size()));
        row.bound = bound;
        row.bound_formula = "(theta_hat/4)^4 (theta_hat=" + fmt(th.theta) + ")";
        r.rows.push_back(row);
    }
    double dbound = 4.0 * quarter * quarter * quarter * (half_width(th.ci) / 4.0);
    double slack = ctx.cfg.k_sigma * (half_width(r.rows.back().ci) + dbound);
    bool ok = r.rows.back().estimate >= bound - slack &&
              trend_non_decreasing(r.rows, ctx.cfg.k_sigma);
    r.verdict = ok ? "pass" : "fail";
    for (auto& row : r.rows) row.verdict = r.verdict;
    return r;
}

ExperimentResult exp_interface_fluctuation(ExperimentContext& ctx) {
    auto r = base_result(ctx, "interface_fluctuation");
    BoundaryCondition bc = make_dobrushin_bc(ctx.graph(), Side::up, 0);
    double delta1 = min_conditional(ctx.spin_model, ctx.graph());
    double dstep_bound = delta1 * delta1 * delta1 * delta1;
    std::size_t ambiguous_total = 0;
    std::size_t dstep_num = 0, dstep_den = 0;
    for (std::int64_t L : ctx.cfg.L_list) {
        Window wa = Window::rect(ctx.graph(), Rect::box(L));
        Window wb = Window::rect(ctx.graph(), Rect::box(L).shifted(-ctx.shift, 0));
        auto layer_a = context_batch(ctx, wa, bc, ctx.cfg.samples, "iface_a", ctx.cfg.mode);
        auto layer_b = context_batch(ctx, wb, bc, ctx.cfg.samples, "iface_b", ctx.cfg.mode);
        std::size_t hits = 0, used = 0, ambiguous = 0;
        for (std::size_t i = 0; i < layer_a.size(); ++i) {
            Configuration hat = shift_configuration(layer_b[i], wa, ctx.shift, 0);
            auto oa = open_interface(layer_a[i]);
            auto ob = open_interface(hat);
            if (!oa.contour || !ob.contour) {
                ++ambiguous;
                continue;
            }
            ++used;
            hits += count_crossings(*oa.contour, *ob.contour) >= 1;
            // single-row shift step, pooled over the mid band
            auto pa = interface_profile(layer_a[i], 1, L / 2);
            auto pb = interface_profile(hat, 1, L / 2);
            for (std::int64_t n = 1; n + 1 <= L / 2; ++n) {
                auto a1 = pa.at(n + 1), b1 = pb.at(n + 1);
                if (!a1 || !b1) continue;
                Frac d1 = *a1 - *b1 + Frac(ctx.shift);
                if (!(d1 == Frac(0))) continue;
                auto a0 = pa.at(n), b0 = pb.at(n);
                if (!a0 || !b0) continue;
                ++dstep_den;
                Frac d0 = *a0 - *b0 + Frac(ctx.shift);
                dstep_num += d0 >= Frac(1);
            }
        }
        ambiguous_total += ambiguous;
        ExperimentRow row;
        row.L = L;
        row.n = used;
        row.metric = "interface_crossing";
        row.estimate = used ? double(hits) / double(used) : 0.0;
        row.ci = wilson_interval(double(hits), double(used));
        row.bound = ctx.cfg.crossing_floor;
        row.bound_formula = "floor";
        r.rows.push_back(row);
    }
    ExperimentRow dstep;
    dstep.L = ctx.cfg.L_list.back();
    dstep.n = dstep_den;
    dstep.metric = "d_step_conditional";
    dstep.estimate = dstep_den ? double(dstep_num) / double(dstep_den) : 0.0;
    dstep.ci = wilson_interval(double(dstep_num), double(std::max<std::size_t>(dstep_den, 1)));
    dstep.bound = dstep_bound;
    dstep.bound_formula = "min_conditional^4 (delta=" + fmt(delta1) + ")";
    r.rows.push_back(dstep);

    std::vector<ExperimentRow> cross_rows(r.rows.begin(), r.rows.end() - 1);
    bool cross_ok = cross_rows.back().estimate >= ctx.cfg.crossing_floor &&
                    trend_non_decreasing(cross_rows, ctx.cfg.k_sigma);
    // with no conditioning events the shift-step inequality holds vacuously
    bool dstep_vacuous = dstep_den == 0;
    bool dstep_ok = dstep_vacuous || dstep.estimate >= dstep_bound;
    r.verdict = cross_ok && dstep_ok ? "pass" : "fail";
    for (auto& row : r.rows) row.verdict = r.verdict;
    if (dstep_vacuous) r.rows.back().verdict = "inconclusive";
    r.notes = "ambiguous-interface pairs excluded: " + std::to_string(ambiguous_total) +
              "; single-row shift step pooled over rows 1.." +
              std::to_string(ctx.cfg.L_list.back() / 2) + " (shift-step mechanism of the "
              "translated half-plane argument)";
    return r;
}

ExperimentResult exp_shift_invariance(ExperimentContext& ctx) {
    auto r = base_result(ctx, "shift_invariance");
    std::int64_t wpat = ctx.cfg.pattern_w;
    r.notes = "total-variation distance between the law of the " + std::to_string(wpat) + "x" +
              std::to_string(wpat) + " pattern at the center and its horizontal translate by " +
              std::to_string(ctx.shift) + "; also exercises the flip-reflection energy identity "
              "indirectly through the translated ensembles";
    BoundaryCondition bc = ctx.cfg.shift_control_plus
                               ? BoundaryCondition::plus()
                               : make_dobrushin_bc(ctx.graph(), Side::up, 0);
    // half-open w x w boxes at the center and shifted horizontally
    auto in_box = [&](const Point& p, std::int64_t x0) {
        return Frac(x0) <= p.x && p.x < Frac(x0 + wpat) && Frac(0) <= p.y && p.y < Frac(wpat);
    };
    std::vector<SiteId> sites_a, sites_b;
    for (SiteId s = 0; s < SiteId(ctx.graph().n_sites()); ++s) {
        if (in_box(ctx.graph().sites[s], 0)) sites_a.push_back(s);
        if (in_box(ctx.graph().sites[s], ctx.shift)) sites_b.push_back(s);
    }
    if (sites_a.size() != sites_b.size() || sites_a.empty() || sites_a.size() > 16)
        throw Error("pattern boxes must contain the same small number of sites");

    std::size_t n_pat = std::size_t(1) << sites_a.size();
    double max_slack = 0;
    for (std::int64_t L : ctx.cfg.L_list) {
        Window w = Window::rect(ctx.graph(), Rect::box(L));
        auto batch = context_batch(ctx, w, bc, ctx.cfg.samples, "shiftinv", ctx.cfg.mode);
        std::vector<std::size_t> count_a(n_pat, 0), count_b(n_pat, 0);
        for (const auto& c : batch) {
            std::size_t bits_a = 0, bits_b = 0;
            for (std::size_t i = 0; i < sites_a.size(); ++i) {
                if (c.spins[sites_a[i]] > 0) bits_a |= std::size_t(1) << i;
                if (c.spins[sites_b[i]] > 0) bits_b |= std::size_t(1) << i;
            }
            ++count_a[bits_a];
            ++count_b[bits_b];
        }
        double tv = 0;
        std::size_t observed = 0;
        for (std::size_t i = 0; i < n_pat; ++i) {
            tv += std::fabs(double(count_a[i]) - double(count_b[i]));
            observed += count_a[i] > 0 || count_b[i] > 0;
        }
        tv /= 2.0 * double(batch.size());
        ExperimentRow row;
        row.L = L;
        row.n = batch.size();
        row.metric = "pattern_tv";
        row.estimate = tv;
        row.ci = {tv, tv};  // reported as a point; slack handled below
        row.bound = std::nan("");
        row.bound_formula = "trend";
        r.rows.push_back(row);
        max_slack = std::max(max_slack,
                             std::sqrt(double(observed) / double(batch.size())));
    }
    bool ok;
    if (ctx.cfg.shift_control_plus) {
        ok = true;
        for (const auto& row : r.rows) ok = ok && row.estimate <= ctx.cfg.control_tv_ceiling;
    } else {
        ok = r.rows.back().estimate <=
             r.rows.front().estimate + ctx.cfg.k_sigma * max_slack / 2.0;
    }
    r.verdict = ok ? "pass" : "fail";
    for (auto& row : r.rows) row.verdict = r.verdict;
    return r;
}

// ---------------------------------------------------------------------------

const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> registry = {
        {"plus_sea", "no macroscopic opposite-sign star cluster in the plus phase; each box "
                     "acquires a surrounding plus circuit"},
        {"point_to_semicircuit", "a boundary-line site connects to an all-plus arc with "
                                 "probability at least theta/2"},
        {"butterflies", "same-sign wings anchored at the boundary line in both half-windows, "
                        "horizontal and vertical orientations"},
        {"no_coexistence", "plus-star and minus-star clusters do not both span from the core "
                           "box to the rim"},
        {"duplicated_circuit", "pointwise-dominated star circuits around boxes in the "
                               "two-layer system, bound (theta/4)^4"},
        {"interface_fluctuation", "open interfaces of a translated pair meet; single-row "
                                  "shift step at rate min_conditional^4"},
        {"shift_invariance", "pattern distribution is insensitive to a horizontal translation "
                             "as the window grows"},
    };
    return registry;
}

ExperimentResult run_experiment(ExperimentContext& ctx, const std::string& id) {
    if (id == "plus_sea") return exp_plus_sea(ctx);
    if (id == "point_to_semicircuit") return exp_point_to_semicircuit(ctx);
    if (id == "butterflies") return exp_butterflies(ctx);
    if (id == "no_coexistence") return exp_no_coexistence(ctx);
    if (id == "duplicated_circuit") return exp_duplicated_circuit(ctx);
    if (id == "interface_fluctuation") return exp_interface_fluctuation(ctx);
    if (id == "shift_invariance") return exp_shift_invariance(ctx);
    std::string valid;
    for (const auto& info : experiment_registry()) valid += " " + info.id;
    throw Error("unknown experiment id '" + id + "'; valid ids:" + valid);
}

std::vector<ExperimentResult> run_suite(const RunConfig& cfg,
                                        const std::vector<std::string>& names) {
    ExperimentContext ctx = make_context(cfg);
    std::vector<std::string> selected = names;
    if (selected.empty())
        for (const auto& info : experiment_registry()) selected.push_back(info.id);
    std::vector<ExperimentResult> out;
    for (const auto& name : selected) out.push_back(run_experiment(ctx, name));
    return out;
}

}  // namespace perc
