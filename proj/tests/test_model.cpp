#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "perc/configuration.hpp"
#include "perc/model.hpp"

using namespace perc;

TEST_CASE("ferro preset tables and critical beta") {
    auto m = preset_ferro(0.6);
    Point o(Frac(0), Frac(0)), e(Frac(1), Frac(0));
    CHECK(m.pair_energy(o, e, 1, 1).value == doctest::Approx(-0.6));
    CHECK(m.pair_energy(o, e, 1, -1).value == doctest::Approx(0.6));
    CHECK(m.site_energy(o, 1) == 0.0);
    CHECK(square_critical_beta() == doctest::Approx(0.44068679).epsilon(1e-7));
    CHECK_THROWS_AS(preset_ferro(-1.0), Error);
    CHECK_NOTHROW(preset_ferro(0.0, true));
}

TEST_CASE("H1: ferro passes, antiferromagnet fails, hard-core flipped passes") {
    CHECK(validate_H1(preset_ferro(0.6)).pass);

    SpinModel anti;
    for (int a : {-1, 1})
        for (int b : {-1, 1}) anti.default_pair.set(a, b, ExtReal(0.5 * a * b));
    auto r = validate_H1(anti);
    CHECK(!r.pass);
    CHECK(!r.witness.empty());

    auto g = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    CHECK(validate_H1(preset_hardcore(2.0, true, &g)).pass);
    // raw hard-core is not attractive
    CHECK(!validate_H1(preset_hardcore(2.0)).pass);

    // two infinities in one difference are ill-formed
    SpinModel bad;
    bad.default_pair.set(1, 1, ExtReal::infinity());
    bad.default_pair.set(-1, 1, ExtReal::infinity());
    CHECK_THROWS_AS(validate_H1(bad), Error);
}

TEST_CASE("H2: ferro passes, homogeneous field fails, staggered passes") {
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    CHECK(validate_H2(preset_ferro(0.6), g).pass);

    SpinModel field = preset_ferro(0.6);
    for (int a : {-1, 1}) field.default_site.set(a, -0.3 * a);
    auto r = validate_H2(field, g);
    CHECK(!r.pass);

    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    CHECK(validate_H2(preset_staggered(gs, 0.6, 0.4), gs).pass);
    CHECK(validate_H1(preset_staggered(gs, 0.6, 0.4)).pass);
    CHECK(validate_H2(preset_hardcore(2.0, true, &gs), gs).pass);
}

TEST_CASE("staggered at h=0 matches ferro; staggered on unswapped parity fails H2") {
    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    auto m = preset_staggered(gs, 0.7, 0.0);
    for (SiteId s = 0; s < SiteId(gs.n_sites()); ++s)
        for (int a : {-1, 1}) CHECK(m.site_energy(gs.sites[s], a) == 0.0);

    // plain square is bipartite but reflections preserve parity
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    auto bad = preset_staggered(g, 0.7, 0.2);
    CHECK(!validate_H2(bad, g).pass);

    auto tri = make_lattice(LatticeSpec::preset("triangular"), 4);
    CHECK_THROWS_AS(preset_staggered(tri, 0.6, 0.1), Error);
}

TEST_CASE("sublattice conjugation: staggered <-> antiferromagnet in a homogeneous field") {
    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    double beta = 0.6, h = 0.25;
    auto anti = conjugate_by_sublattice_flip(preset_staggered(gs, beta, h), gs);
    for (SiteId u = 0; u < SiteId(gs.n_sites()); ++u) {
        for (int a : {-1, 1})
            CHECK(anti.site_energy(gs.sites[u], a) == doctest::Approx(-h * a));
        for (SiteId v : gs.adj_plain[u])
            for (int a : {-1, 1})
                for (int b : {-1, 1})
                    CHECK(anti.pair_energy(gs.sites[u], gs.sites[v], a, b).value ==
                          doctest::Approx(beta * a * b));
    }
}

TEST_CASE("hard-core: tables, double flip, admissibility bijection") {
    auto m = preset_hardcore(0.5);
    Point o(Frac(0), Frac(0)), e(Frac(1), Frac(0));
    CHECK(m.pair_energy(o, e, 1, 1).inf);
    CHECK(!m.pair_energy(o, e, 1, -1).inf);
    CHECK(m.site_energy(o, 1) == doctest::Approx(-std::log(0.5)));
    CHECK_THROWS_AS(preset_hardcore(0.0), Error);

    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    auto flipped = preset_hardcore(0.5, true, &gs);
    auto back = conjugate_by_sublattice_flip(flipped, gs);
    for (SiteId u = 0; u < SiteId(gs.n_sites()); ++u)
        for (SiteId v : gs.adj_plain[u]) {
            for (int a : {-1, 1})
                for (int b : {-1, 1})
                    CHECK(back.pair_energy(gs.sites[u], gs.sites[v], a, b)
                              .close(m.pair_energy(gs.sites[u], gs.sites[v], a, b)));
        }

    // flipped-model exclusion: (eps(x), eps(y)) is the forbidden pair
    for (SiteId u = 0; u < SiteId(gs.n_sites()); ++u)
        for (SiteId v : gs.adj_plain[u]) {
            int ex = gs.parity[u], ey = gs.parity[v];
            CHECK(flipped.pair_energy(gs.sites[u], gs.sites[v], ex, ey).inf);
            CHECK(!flipped.pair_energy(gs.sites[u], gs.sites[v], -ex, ey).inf);
        }

    // bijection: raw-admissible configurations of a 2x2 window map to
    // flipped-admissible ones and back
    Window w = Window::rect(gs, Rect(Frac(0), Frac(2), Frac(0), Frac(2)));
    REQUIRE(w.size() == 4);
    Configuration c(gs, w, -1);
    int n_raw = 0, n_flip = 0;
    for (int bits = 0; bits < 16; ++bits) {
        for (int i = 0; i < 4; ++i) c.spins[w.interior_sites[i]] = (bits >> i & 1) ? 1 : -1;
        // ring spins: empty in raw terms = -1; flipped ring analog is -eps
        for (SiteId r : w.ring_sites) c.spins[r] = -1;
        bool raw_ok = admissible(m, c);
        Configuration cf = sublattice_flip(c);
        bool flip_ok = admissible(flipped, cf);
        CHECK(raw_ok == flip_ok);
        n_raw += raw_ok;
        n_flip += flip_ok;
        Configuration cc = sublattice_flip(cf);
        for (SiteId s : w.interior_sites) CHECK(cc.spins[s] == c.spins[s]);
    }
    CHECK(n_raw == n_flip);
    CHECK(n_raw == 7);  // independent sets of the 2x2 cycle
}

TEST_CASE("sublattice_flip: all-plus becomes the staggered pattern, involution") {
    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 4);
    Window w = Window::rect(gs, Rect(Frac(-3), Frac(3), Frac(-3), Frac(3)));
    Configuration c(gs, w, 1);
    auto f = sublattice_flip(c);
    for (SiteId s : w.interior_sites) CHECK(int(f.spins[s]) == int(gs.parity[s]));
    auto ff = sublattice_flip(f);
    for (SiteId s : w.interior_sites) CHECK(ff.spins[s] == c.spins[s]);
}

TEST_CASE("conditional probabilities: closed forms") {
    auto g = make_lattice(LatticeSpec::preset("square"), 3);
    auto m = preset_ferro(0.6);
    SiteId x = *g.find(Point(Frac(0), Frac(0)));
    std::vector<signed char> spins(g.n_sites(), 1);

    SUBCASE("all four neighbors +1") {
        double p = conditional_plus_probability(m, g, x, spins);
        CHECK(p == doctest::Approx(1.0 / (1.0 + std::exp(-8 * 0.6))).epsilon(1e-12));
    }
    SUBCASE("two +1 and two -1 neighbors: p = 1/2") {
        spins[*g.find(Point(Frac(1), Frac(0)))] = -1;
        spins[*g.find(Point(Frac(-1), Frac(0)))] = -1;
        CHECK(conditional_plus_probability(m, g, x, spins) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("flip covariance") {
        spins[*g.find(Point(Frac(1), Frac(0)))] = -1;
        double p = conditional_plus_probability(m, g, x, spins);
        std::vector<signed char> neg(spins);
        for (auto& s : neg) s = -s;
        double q = conditional_plus_probability(m, g, x, neg);
        CHECK(p == doctest::Approx(1.0 - q).epsilon(1e-12));
    }
    SUBCASE("hard-core raw form") {
        double lam = 2.0;
        auto hc = preset_hardcore(lam);
        std::vector<signed char> empty(g.n_sites(), -1);
        CHECK(conditional_plus_probability(hc, g, x, empty) ==
              doctest::Approx(lam / (1 + lam)).epsilon(1e-12));
        empty[*g.find(Point(Frac(1), Frac(0)))] = 1;
        CHECK(conditional_plus_probability(hc, g, x, empty) == 0.0);
    }
    SUBCASE("gauge invariance: constants added to V or U rows cancel") {
        SpinModel shifted = m;
        for (int a : {-1, 1}) shifted.default_site.set(a, shifted.default_site.at(a) + 3.7);
        for (int a : {-1, 1})
            for (int b : {-1, 1})
                shifted.default_pair.set(a, b, shifted.default_pair.at(a, b) + ExtReal(1.3));
        spins[*g.find(Point(Frac(1), Frac(0)))] = -1;
        double p0 = conditional_plus_probability(m, g, x, spins);
        double p1 = conditional_plus_probability(shifted, g, x, spins);
        CHECK(p0 == doctest::Approx(p1).epsilon(1e-12));
    }
}

TEST_CASE("min_conditional formulas") {
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    double beta = 0.6;
    CHECK(min_conditional(preset_ferro(beta), g) ==
          doctest::Approx(1.0 / (1.0 + std::exp(8 * beta))).epsilon(1e-12));

    auto tri = make_lattice(LatticeSpec::preset("triangular"), 5);
    CHECK(min_conditional(preset_ferro(beta), tri) ==
          doctest::Approx(1.0 / (1.0 + std::exp(12 * beta))).epsilon(1e-12));

    for (double lam : {0.5, 2.0}) {
        CHECK(min_conditional(preset_hardcore(lam), g) ==
              doctest::Approx(std::min(lam, 1.0) / (1 + lam)).epsilon(1e-12));
        auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 4);
        CHECK(min_conditional(preset_hardcore(lam, true, &gs), gs) ==
              doctest::Approx(std::min(lam, 1.0) / (1 + lam)).epsilon(1e-12));
    }
}

TEST_CASE("flip-reflection conjugation preserves the window energy") {
    auto g = make_lattice(LatticeSpec::preset("square_shifted"), 6);
    auto m = preset_staggered(g, 0.6, 0.3);
    REQUIRE(validate_H2(m, g).pass);
    Window w = Window::rect(g, Rect(Frac(-3), Frac(3), Frac(-3), Frac(3)));
    Window wr = Window::rect(g, Rect(Frac(-3), Frac(3), Frac(-3), Frac(3)));  // R-symmetric box

    Configuration c(g, w, 1);
    // a deterministic scrambled configuration
    int k = 0;
    for (SiteId s : w.interior_sites) c.spins[s] = (k++ % 3 == 0) ? -1 : 1;
    for (SiteId s : w.ring_sites) c.spins[s] = (k++ % 2 == 0) ? -1 : 1;

    Symmetry R = Symmetry::reflection_hor(0);
    Configuration cr(g, wr, 1);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        auto img = g.find(R.map_point(g.sites[s]));
        if (img) cr.spins[*img] = static_cast<signed char>(-c.spins[s]);
    }
    ExtReal e1 = window_energy(m, c), e2 = window_energy(m, cr);
    REQUIRE(!e1.inf);
    CHECK(e1.value == doctest::Approx(e2.value).epsilon(1e-9));
}

TEST_CASE("model text round trip") {
    auto gs = make_lattice(LatticeSpec::preset("square_shifted"), 4);
    auto m = preset_hardcore(2.0, true, &gs);
    auto m2 = SpinModel::parse(m.serialize());
    for (SiteId u = 0; u < SiteId(gs.n_sites()); ++u) {
        for (int a : {-1, 1})
            CHECK(m.site_energy(gs.sites[u], a) == doctest::Approx(m2.site_energy(gs.sites[u], a)));
        for (SiteId v : gs.adj_plain[u])
            for (int a : {-1, 1})
                for (int b : {-1, 1})
                    CHECK(m.pair_energy(gs.sites[u], gs.sites[v], a, b)
                              .close(m2.pair_energy(gs.sites[u], gs.sites[v], a, b)));
    }
    CHECK(SpinModel::parse("default_pair inf 0 0 0\n").default_pair.at(1, 1).inf);
    CHECK_THROWS_AS(SpinModel::parse("bogus 1 2\n"), Error);
}

TEST_CASE("grid text serialization round trip") {
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    Window w = Window::rect(g, Rect::box(2));
    Configuration c(g, w, 1);
    c.spins[w.interior_sites[3]] = -1;
    c.spins[w.interior_sites[17]] = -1;
    auto text = to_grid_text(c, "plus");
    Configuration d(g, w, 1);
    from_grid_text(d, text);
    for (SiteId s : w.interior_sites) CHECK(d.spins[s] == c.spins[s]);
    CHECK(text.find("lattice=square") == 0);
}
