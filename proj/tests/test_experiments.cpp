#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "perc/experiments.hpp"

using namespace perc;

namespace {

RunConfig small_ferro(double beta) {
    RunConfig cfg;
    cfg.model = "ferro";
    cfg.beta = beta;
    cfg.L_list = {8, 12};
    cfg.samples = 100;
    cfg.mode = SampleMode::sweeps(400);
    cfg.threads = 4;
    cfg.seed = 11;
    cfg.theta_L = 6;
    cfg.theta_samples = 300;
    cfg.semicircuit_radius = 6;
    cfg.semicircuit_samples = 200;
    return cfg;
}

}  // namespace

TEST_CASE("context construction and model validation") {
    CHECK_NOTHROW(make_context(small_ferro(0.6)));

    RunConfig bad = small_ferro(0.6);
    bad.model = "staggered";
    bad.h = 0.1;
    CHECK_THROWS_AS(make_context(bad), Error);  // square: reflections keep parity
    bad.lattice = "square_shifted";
    CHECK_NOTHROW(make_context(bad));

    RunConfig hc = small_ferro(0.6);
    hc.model = "hardcore";
    hc.lambda = 4.0;
    hc.lattice = "square_shifted";
    auto ctx = make_context(hc);
    CHECK(ctx.shift == 2);
    CHECK(validate_H1(ctx.spin_model).pass);

    RunConfig neg = small_ferro(0.6);
    neg.beta = 0.0;
    CHECK_THROWS_AS(make_context(neg), Error);
    neg.force = true;
    CHECK_NOTHROW(make_context(neg));

    RunConfig unknown = small_ferro(0.6);
    unknown.model = "xy";
    CHECK_THROWS_AS(make_context(unknown), Error);
}

TEST_CASE("rim-anchored crossing detector: checkerboard coexistence sanity") {
    auto g = make_lattice(LatticeSpec::preset("square"), 12);
    Window w = Window::rect(g, Rect::box(10));
    Configuration c(g, w, 1);
    apply_bc(c, BoundaryCondition::plus());
    for (SiteId s : w.interior_sites) {
        auto p = g.sites[s];
        c.spins[s] = (p.x.num + p.y.num) % 2 == 0 ? 1 : -1;
    }
    Rect core = Rect::box(4), search = Rect::box(10);
    CHECK(rim_anchored_crossing(c, 1, core, search));
    CHECK(rim_anchored_crossing(c, -1, core, search));
    // all-plus has no minus crossing
    Configuration p(g, w, 1);
    CHECK(!rim_anchored_crossing(p, -1, core, search));
    CHECK(rim_anchored_crossing(p, 1, core, search));
}

TEST_CASE("plus_sea: supercritical pass, infinite-temperature control fails") {
    auto ctx = make_context(small_ferro(0.6));
    auto r = exp_plus_sea(ctx);
    CHECK(r.verdict == "pass");
    REQUIRE(r.rows.size() == 4);  // crossing + circuit rows per L
    CHECK(r.rows[0].metric == "minus_star_crossing");
    // complementarity was hard-asserted inside; circuit freq = 1 - crossing freq
    CHECK(r.rows[1].estimate == doctest::Approx(1.0 - r.rows[0].estimate));

    RunConfig control = small_ferro(0.6);
    control.beta = 0.0;
    control.force = true;
    auto cctx = make_context(control);
    auto rc = exp_plus_sea(cctx);
    CHECK(rc.verdict == "fail");
    REQUIRE(rc.rows.size() == 4);
    CHECK(rc.rows[2].metric == "minus_star_crossing");
    CHECK(rc.rows[2].estimate > 0.5);

    RunConfig cold = small_ferro(8.0);
    cold.samples = 40;
    auto coldctx = make_context(cold);
    auto rcold = exp_plus_sea(coldctx);
    CHECK(rcold.verdict == "pass");
    for (const auto& row : rcold.rows)
        if (row.metric == "minus_star_crossing") CHECK(row.estimate == 0.0);
}

TEST_CASE("no_coexistence passes in the plus phase") {
    auto ctx = make_context(small_ferro(0.6));
    auto r = exp_no_coexistence(ctx);
    CHECK(r.verdict == "pass");
    CHECK(r.rows.back().estimate <= 0.05);
}

TEST_CASE("butterflies: low-temperature baseline and ground-state control") {
    RunConfig cfg = small_ferro(0.8);
    cfg.L_list = {12, 24};
    cfg.samples = 200;
    auto ctx = make_context(cfg);
    auto r = exp_butterflies(ctx);
    CHECK(r.verdict == "pass");
    for (const auto& row : r.rows) {
        if (row.metric == "butterfly_any" && row.L == 24) CHECK(row.estimate >= 0.99);
        if (row.metric == "butterfly_orthogonal_plus" && row.L == 24) CHECK(row.estimate >= 0.95);
    }
}

TEST_CASE("point_to_semicircuit: radius one reduces to the closed-form conditional") {
    RunConfig cfg = small_ferro(0.6);
    cfg.semicircuit_radius = 1;
    cfg.semicircuit_samples = 3000;
    auto ctx = make_context(cfg);
    auto r = exp_point_to_semicircuit(ctx);
    REQUIRE(r.rows.size() == 1);
    double expect = 1.0 / (1.0 + std::exp(-4 * 0.6));
    double se = std::sqrt(expect * (1 - expect) / 3000.0);
    CHECK(std::fabs(r.rows[0].estimate - expect) < 4 * se);
}

TEST_CASE("point_to_semicircuit: theta/2 bound holds at beta 0.6 and low temperature") {
    RunConfig cfg = small_ferro(0.6);
    cfg.semicircuit_samples = 300;
    auto ctx = make_context(cfg);
    auto r = exp_point_to_semicircuit(ctx);
    CHECK(r.verdict == "pass");
    CHECK(r.rows[0].bound > 0.0);

    RunConfig cold = small_ferro(8.0);
    cold.semicircuit_samples = 100;
    cold.theta_samples = 100;
    auto cctx = make_context(cold);
    auto rc = exp_point_to_semicircuit(cctx);
    CHECK(rc.rows[0].estimate >= 0.99);
}

TEST_CASE("duplicated_circuit: bound holds; opposite orientations kill domination") {
    RunConfig cfg = small_ferro(0.6);
    cfg.L_list = {10, 14};
    cfg.samples = 80;
    auto ctx = make_context(cfg);
    auto r = exp_duplicated_circuit(ctx);
    CHECK(r.verdict == "pass");
    CHECK(r.rows.back().estimate >= r.rows.back().bound);

    // negative control at low temperature with opposing boundary orientations
    auto g = make_lattice(LatticeSpec::preset("square"), 14);
    Window w = Window::rect(g, Rect::box(10));
    auto m = preset_ferro(8.0);
    HeatbathTables tables(m, g);
    auto up = sample_batch(m, tables, g, w, make_dobrushin_bc(g, Side::up, 0), 10,
                           SampleMode::sweeps(200), 3, 2);
    auto down = sample_batch(m, tables, g, w, make_dobrushin_bc(g, Side::down, 0), 10,
                             SampleMode::sweeps(200), 4, 2);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < up.size(); ++i)
        hits += leq_star_analysis(up[i], down[i], Rect::box(2), Rect::box(10)).has_value();
    CHECK(hits == 0);
}

TEST_CASE("interface_fluctuation: crossings and the one-row shift step") {
    RunConfig cfg = small_ferro(0.6);
    cfg.L_list = {10, 14};
    cfg.samples = 60;
    cfg.crossing_floor = 0.5;  // small-window unit run; acceptance uses 0.8 at L=64
    auto ctx = make_context(cfg);
    auto r = exp_interface_fluctuation(ctx);
    CHECK(r.verdict == "pass");
    const auto& dstep = r.rows.back();
    CHECK(dstep.metric == "d_step_conditional");
    CHECK(dstep.n > 0);
    double delta = 1.0 / (1.0 + std::exp(8 * 0.6));
    CHECK(dstep.bound == doctest::Approx(delta * delta * delta * delta));
    CHECK(dstep.estimate >= dstep.bound);
}

TEST_CASE("shift_invariance: trend under dobrushin, near-zero control, 1x1 symmetry") {
    RunConfig cfg = small_ferro(0.6);
    cfg.L_list = {8, 14};
    cfg.samples = 300;
    auto ctx = make_context(cfg);
    auto r = exp_shift_invariance(ctx);
    CHECK(r.verdict == "pass");

    RunConfig control = cfg;
    control.shift_control_plus = true;
    auto cctx = make_context(control);
    auto rc = exp_shift_invariance(cctx);
    CHECK(rc.verdict == "pass");
    for (const auto& row : rc.rows) CHECK(row.estimate <= control.control_tv_ceiling);

    RunConfig w1 = cfg;
    w1.pattern_w = 1;
    w1.L_list = {10};
    w1.samples = 400;
    auto wctx = make_context(w1);
    auto rw = exp_shift_invariance(wctx);
    CHECK(rw.rows[0].estimate < 0.15);
}

TEST_CASE("run_suite: ferro completes with all verdicts recorded, reproducibly") {
    RunConfig cfg = small_ferro(0.6);
    cfg.samples = 60;
    cfg.semicircuit_samples = 120;
    cfg.crossing_floor = 0.4;
    auto results = run_suite(cfg);
    REQUIRE(results.size() == 7);
    for (const auto& r : results) {
        CHECK(!r.verdict.empty());
        CHECK(!r.rows.empty());
    }

    // bit-identical reruns, serial vs threaded
    auto again = run_suite(cfg);
    RunConfig serial = cfg;
    serial.threads = 1;
    auto serial_results = run_suite(serial);
    REQUIRE(again.size() == results.size());
    REQUIRE(serial_results.size() == results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        REQUIRE(again[i].rows.size() == results[i].rows.size());
        REQUIRE(serial_results[i].rows.size() == results[i].rows.size());
        for (std::size_t j = 0; j < results[i].rows.size(); ++j) {
            CHECK(again[i].rows[j].estimate == results[i].rows[j].estimate);
            CHECK(serial_results[i].rows[j].estimate == results[i].rows[j].estimate);
        }
        CHECK(again[i].verdict == results[i].verdict);
        CHECK(serial_results[i].verdict == results[i].verdict);
    }
}

TEST_CASE("run_suite: hard-core at large activity orders like the plus phase") {
    RunConfig cfg;
    cfg.model = "hardcore";
    cfg.lambda = 4.0;
    cfg.lattice = "square_shifted";
    cfg.L_list = {8, 12};
    cfg.samples = 60;
    cfg.mode = SampleMode::sweeps(500);
    cfg.threads = 4;
    cfg.seed = 13;
    cfg.theta_L = 6;
    cfg.theta_samples = 200;
    cfg.semicircuit_radius = 5;
    cfg.semicircuit_samples = 100;
    auto ctx = make_context(cfg);
    auto r = exp_plus_sea(ctx);
    CHECK(r.verdict == "pass");  // ordered regime
}

TEST_CASE("unknown experiment id is rejected with the list of valid ids") {
    RunConfig cfg = small_ferro(0.6);
    try {
        run_suite(cfg, {"bogus"});
        FAIL("expected an error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("plus_sea") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }
}
