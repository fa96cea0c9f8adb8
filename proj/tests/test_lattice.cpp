#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "perc/lattice.hpp"

using namespace perc;

namespace {

bool degree_is(const LatticeGraph& g, SiteId s, std::size_t d) {
    return g.adj_plain[s].size() == d;
}

// sites well inside the window, where neighborhoods are complete
std::vector<SiteId> deep_interior(const LatticeGraph& g, std::int64_t margin) {
    std::vector<SiteId> out;
    Frac lo(-(g.window_radius - margin)), hi(g.window_radius - margin);
    for (SiteId i = 0; i < SiteId(g.n_sites()); ++i) {
        const Point& p = g.sites[i];
        if (lo <= p.x && p.x <= hi && lo <= p.y && p.y <= hi) out.push_back(i);
    }
    return out;
}

}  // namespace

TEST_CASE("frac arithmetic and parsing") {
    CHECK(Frac(1, 3) + Frac(1, 6) == Frac(1, 2));
    CHECK(Frac(-4, 6) == Frac(-2, 3));
    CHECK(Frac(7, 3).floor() == 2);
    CHECK(Frac(-7, 3).floor() == -3);
    CHECK(Frac(5, 2).mod(2) == Frac(1, 2));
    CHECK(Frac(-1, 2).mod(2) == Frac(3, 2));
    CHECK(parse_frac("-2/3") == Frac(-2, 3));
    CHECK(parse_frac("4") == Frac(4));
}

TEST_CASE("square window: 5x5 grid has 25 sites and 40 edges") {
    auto g = make_lattice(LatticeSpec::preset("square"), 2);
    CHECK(g.n_sites() == 25);
    CHECK(g.plain_edge_count() == 40);
    CHECK(g.faces.size() == 16);
    CHECK(g.bipartite);
}

TEST_CASE("square star adjacency equals the euclidean 1-or-sqrt2 rule") {
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    for (SiteId i = 0; i < SiteId(g.n_sites()); ++i) {
        for (SiteId j = 0; j < SiteId(g.n_sites()); ++j) {
            if (i == j) continue;
            Point d = g.sites[i] - g.sites[j];
            Frac d2 = d.x * d.x + d.y * d.y;
            bool within = d2 == Frac(1) || d2 == Frac(2);
            CHECK(g.star_adjacent(i, j) == within);
        }
    }
    // each interior site gains exactly its 4 diagonal neighbors
    for (SiteId s : deep_interior(g, 1)) {
        CHECK(g.adj_plain[s].size() == 4);
        CHECK(g.adj_star[s].size() == 8);
    }
}

TEST_CASE("triangular lattice: interior degree 6 and self-matching") {
    auto g = make_lattice(LatticeSpec::preset("triangular"), 6);
    auto inner = deep_interior(g, 3);
    REQUIRE(!inner.empty());
    for (SiteId s : inner) CHECK(degree_is(g, s, 6));
    // star adjacency equals plain adjacency (faces are triangles)
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        CHECK(g.adj_plain[s] == g.adj_star[s]);
}

TEST_CASE("honeycomb lattice: interior degree 3, hexagonal faces, star cliques") {
    auto g = make_lattice(LatticeSpec::preset("honeycomb"), 6);
    auto inner = deep_interior(g, 3);
    REQUIRE(!inner.empty());
    for (SiteId s : inner) CHECK(degree_is(g, s, 3));
    REQUIRE(!g.faces.empty());
    for (const auto& f : g.faces) CHECK(f.size() == 6);
    // the 6 border sites of each face become pairwise star-adjacent
    const auto& f = g.faces.front();
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            CHECK(g.star_adjacent(f[i], f[j]));
    CHECK(g.bipartite);
}

TEST_CASE("diced and kagome presets satisfy the generic invariants") {
    for (const char* name : {"diced", "kagome"}) {
        auto g = make_lattice(LatticeSpec::preset(name), 6);
        CHECK(g.n_sites() > 0);
        // adjacency symmetric, duplicate-free, star contains plain
        for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
            std::set<SiteId> pl(g.adj_plain[u].begin(), g.adj_plain[u].end());
            CHECK(pl.size() == g.adj_plain[u].size());
            for (SiteId v : g.adj_plain[u]) {
                CHECK(g.plain_adjacent(v, u));
                CHECK(g.star_adjacent(u, v));
            }
            for (SiteId v : g.adj_star[u]) CHECK(g.star_adjacent(v, u));
        }
    }
    // kagome interior degree 4; diced has degrees 3 and 6
    auto kag = make_lattice(LatticeSpec::preset("kagome"), 6);
    for (SiteId s : deep_interior(kag, 3)) CHECK(degree_is(kag, s, 4));
    auto dic = make_lattice(LatticeSpec::preset("diced"), 6);
    std::set<std::size_t> degs;
    for (SiteId s : deep_interior(dic, 3)) degs.insert(dic.adj_plain[s].size());
    CHECK(degs == std::set<std::size_t>{3, 6});
}

TEST_CASE("reflection closure: images of interior edges are edges") {
    for (const char* name : {"square", "triangular", "honeycomb", "diced", "kagome", "square_shifted"}) {
        auto g = make_lattice(LatticeSpec::preset(name), 5);
        std::vector<Symmetry> gens = {Symmetry::reflection_hor(0), Symmetry::reflection_vert(0),
                                      Symmetry::reflection_hor(1), Symmetry::reflection_vert(1)};
        for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
            for (SiteId v : g.adj_plain[u]) {
                if (v < u) continue;
                for (const auto& R : gens) {
                    auto ru = apply_symmetry(g, R, u);
                    auto rv = apply_symmetry(g, R, v);
                    if (ru && rv) CHECK(g.plain_adjacent(*ru, *rv));
                }
            }
        }
    }
}

TEST_CASE("face consistency: every plain edge borders at most two faces, interior exactly two") {
    for (const char* name : {"square", "honeycomb", "triangular"}) {
        auto g = make_lattice(LatticeSpec::preset(name), 5);
        std::map<std::pair<SiteId, SiteId>, int> count;
        for (const auto& f : g.faces)
            for (std::size_t i = 0; i < f.size(); ++i) {
                auto e = std::minmax(f[i], f[(i + 1) % f.size()]);
                count[{e.first, e.second}]++;
            }
        for (const auto& [e, c] : count) {
            (void)e;
            CHECK(c <= 2);
        }
        auto inner = deep_interior(g, 2);
        std::set<SiteId> inner_set(inner.begin(), inner.end());
        for (SiteId u : inner)
            for (SiteId v : g.adj_plain[u]) {
                if (v < u || !inner_set.count(v)) continue;
                CHECK(count[{u, v}] == 2);
            }
    }
}

TEST_CASE("half planes and boundary lines") {
    SUBCASE("square, up, k=0: straight boundary row") {
        auto g = make_lattice(LatticeSpec::preset("square"), 4);
        auto hp = half_plane(g, Side::up, 0);
        for (SiteId s : hp.boundary_line) CHECK(g.sites[s].y == Frac(0));
        int row0 = 0;
        for (SiteId i = 0; i < SiteId(g.n_sites()); ++i)
            if (g.sites[i].y == Frac(0)) ++row0;
        CHECK(int(hp.boundary_line.size()) == row0);
    }
    SUBCASE("boundary line definition holds exactly") {
        for (const char* name : {"square", "triangular", "honeycomb"}) {
            auto g = make_lattice(LatticeSpec::preset(name), 5);
            for (Side side : {Side::up, Side::right}) {
                auto hp = half_plane(g, side, 0);
                for (SiteId i : hp.sites) {
                    bool has_out = false;
                    for (SiteId v : g.adj_plain[i])
                        if (!hp.member[v]) has_out = true;
                    CHECK(bool(hp.on_line[i]) == has_out);
                }
            }
        }
    }
    SUBCASE("triangular right half-plane has a non-straight boundary") {
        auto g = make_lattice(LatticeSpec::preset("triangular"), 6);
        auto hp = half_plane(g, Side::right, 0);
        bool has_axis = false, has_offset = false;
        for (SiteId s : hp.boundary_line) {
            if (g.sites[s].x == Frac(0)) has_axis = true;
            if (g.sites[s].x == Frac(1)) has_offset = true;  // the adjacent points (1, k)
        }
        CHECK(has_axis);
        CHECK(has_offset);
    }
    SUBCASE("honeycomb up half-plane has a straight boundary line") {
        auto g = make_lattice(LatticeSpec::preset("honeycomb"), 6);
        auto hp = half_plane(g, Side::up, 0);
        REQUIRE(!hp.boundary_line.empty());
        Frac y0 = g.sites[hp.boundary_line.front()].y;
        for (SiteId s : hp.boundary_line) CHECK(g.sites[s].y == y0);
    }
    SUBCASE("reflection pairing: Rx = x or Rx ~ x on the boundary line") {
        for (const char* name : {"square", "triangular", "honeycomb", "kagome", "diced"}) {
            auto g = make_lattice(LatticeSpec::preset(name), 5);
            for (Side side : {Side::up, Side::right}) {
                auto hp = half_plane(g, side, 0);
                Symmetry R = (side == Side::up || side == Side::down)
                                 ? Symmetry::reflection_hor(0)
                                 : Symmetry::reflection_vert(0);
                for (SiteId s : hp.boundary_line) {
                    auto rs = apply_symmetry(g, R, s);
                    REQUIRE(rs.has_value());
                    CHECK((*rs == s || g.plain_adjacent(*rs, s)));
                }
            }
        }
    }
    SUBCASE("empty intersection is an error") {
        auto g = make_lattice(LatticeSpec::preset("square"), 3);
        CHECK_THROWS_AS(half_plane(g, Side::up, 10), Error);
    }
}

TEST_CASE("apply_symmetry formulas") {
    auto g = make_lattice(LatticeSpec::preset("square"), 4);
    auto s = g.find(Point(Frac(3), Frac(2)));
    REQUIRE(s);
    auto img = apply_symmetry(g, Symmetry::reflection_hor(0), *s);
    REQUIRE(img);
    CHECK(g.sites[*img] == Point(Frac(3), Frac(-2)));

    // composition of translations
    auto t2 = Symmetry::translation(2, 0).then(Symmetry::translation(2, 0));
    auto o = g.find(Point(Frac(0), Frac(0)));
    auto moved = apply_symmetry(g, t2, *o);
    REQUIRE(moved);
    CHECK(g.sites[*moved] == Point(Frac(4), Frac(0)));

    // out of window
    auto corner = g.find(Point(Frac(4), Frac(4)));
    CHECK(!apply_symmetry(g, Symmetry::translation(2, 0), *corner).has_value());

    // honeycomb: R_{0,vert} maps (1/3,1) to (-1/3,1) and preserves its edge
    auto h = make_lattice(LatticeSpec::preset("honeycomb"), 4);
    auto a = h.find(Point(Frac(1, 3), Frac(1)));
    auto b = h.find(Point(Frac(2, 3), Frac(0)));
    REQUIRE(a);
    REQUIRE(b);
    CHECK(h.plain_adjacent(*a, *b));
    auto ra = apply_symmetry(h, Symmetry::reflection_vert(0), *a);
    auto rb = apply_symmetry(h, Symmetry::reflection_vert(0), *b);
    REQUIRE(ra);
    REQUIRE(rb);
    CHECK(h.sites[*ra] == Point(Frac(-1, 3), Frac(1)));
    CHECK(h.sites[*rb] == Point(Frac(-2, 3), Frac(0)));
    CHECK(h.plain_adjacent(*ra, *rb));
}

TEST_CASE("spec file round trip and rejection of crossing edges") {
    auto sq = LatticeSpec::parse(
        "name sq2\nsite 0 0\nsite 1 0\nsite 0 1\nsite 1 1\n"
        "edge 0 0 1 0\nedge 0 0 0 1\nedge 0 1 1 1\nedge 1 0 1 1\n",
        "f");
    auto g = make_lattice(sq, 2);
    CHECK(g.n_sites() == 25);
    CHECK(sq.name == "sq2");

    // diagonal generators cross each other
    auto bad = LatticeSpec::parse(
        "site 0 0\nsite 1 0\nsite 0 1\nsite 1 1\n"
        "edge 0 0 1 0\nedge 0 0 0 1\nedge 0 1 1 1\nedge 1 0 1 1\n"
        "edge 0 0 1 1\nedge 1 0 0 1\n",
        "bad");
    CHECK_THROWS_AS(build_lattice(bad, 2), Error);
}

TEST_CASE("square_shifted parity: reflections swap the sublattices") {
    auto g = make_lattice(LatticeSpec::preset("square_shifted"), 5);
    REQUIRE(g.bipartite);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        for (const auto& R : {Symmetry::reflection_hor(0), Symmetry::reflection_vert(0),
                              Symmetry::reflection_hor(1), Symmetry::reflection_vert(1)}) {
            auto img = apply_symmetry(g, R, s);
            if (img) CHECK(g.parity[*img] == -g.parity[s]);
        }
        // period-2 translations preserve parity
        auto t = apply_symmetry(g, Symmetry::translation(2, 0), s);
        if (t) CHECK(g.parity[*t] == g.parity[s]);
    }
    // parity anchored independently of window size
    auto g2 = make_lattice(LatticeSpec::preset("square_shifted"), 7);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        auto t = g2.find(g.sites[s]);
        REQUIRE(t);
        CHECK(g.parity[s] == g2.parity[*t]);
    }
}
