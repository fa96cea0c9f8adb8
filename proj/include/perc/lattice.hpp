#ifndef PERC_LATTICE_HPP
#define PERC_LATTICE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "perc/rational.hpp"

namespace perc {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

using SiteId = std::int32_t;

// A lattice is given by its intersection with the unit cell plus a set of
// generator edges; reflecting the generators in all integer horizontal and
// vertical lines produces every edge. The lattice is periodic with period 2.
struct LatticeSpec {
    std::string name;
    std::vector<Point> cell_sites;                   // rational points in [0,1]^2
    std::vector<std::pair<Point, Point>> cell_edges; // generator edges

    static LatticeSpec preset(const std::string& name);
    static std::vector<std::string> preset_names();
    static LatticeSpec load(const std::string& path);
    static LatticeSpec parse(const std::string& text, const std::string& name);
};

enum class Side { up, down, left, right };

inline const char* side_name(Side s) {
    switch (s) {
        case Side::up: return "up";
        case Side::down: return "down";
        case Side::left: return "left";
        case Side::right: return "right";
    }
    return "?";
}

// Is p in the closed half-plane with the given side and level?
inline bool in_half_plane(const Point& p, Side side, std::int64_t k) {
    switch (side) {
        case Side::up: return p.y >= Frac(k);
        case Side::down: return p.y <= Frac(k);
        case Side::right: return p.x >= Frac(k);
        case Side::left: return p.x <= Frac(k);
    }
    return false;
}

// Reflection in the boundary line of the half-plane (x_i = k).
inline Point reflect_in_level(const Point& p, Side side, std::int64_t k) {
    if (side == Side::up || side == Side::down) return Point(p.x, Frac(2 * k) - p.y);
    return Point(Frac(2 * k) - p.x, p.y);
}

struct HalfPlaneRegion {
    Side side = Side::up;
    std::int64_t k = 0;
    std::vector<SiteId> sites;         // all window sites in the half-plane
    std::vector<SiteId> boundary_line; // l = {x in pi : x ~ y for some y not in pi}
    std::vector<char> member;          // per-site membership flag
    std::vector<char> on_line;         // per-site boundary-line flag
};

// Primitive lattice symmetries; a Symmetry is a composition of them.
// Spin flip acts on configurations, not on points.
struct Symmetry {
    enum class Prim : std::uint8_t { reflect_hor, reflect_vert, translate, spin_flip };
    struct Step {
        Prim kind;
        std::int64_t k = 0;  // reflection level
        std::int64_t dx = 0, dy = 0;  // translation, must be in 2Z^2
    };
    std::vector<Step> steps;

    static Symmetry reflection_hor(std::int64_t k) { return {{{Prim::reflect_hor, k, 0, 0}}}; }
    static Symmetry reflection_vert(std::int64_t k) { return {{{Prim::reflect_vert, k, 0, 0}}}; }
    static Symmetry translation(std::int64_t dx, std::int64_t dy);
    static Symmetry spin_flip() { return {{{Prim::spin_flip, 0, 0, 0}}}; }

    Symmetry then(const Symmetry& next) const;
    Point map_point(Point p) const;
    int spin_sign() const;  // -1 if the composition flips spins
};

struct LatticeGraph {
    LatticeSpec spec;
    std::int64_t window_radius = 0;  // sites have both coordinates in [-L, L]

    std::vector<Point> sites;  // row-major by (y, x)
    std::vector<std::vector<SiteId>> adj_plain;
    std::vector<std::vector<SiteId>> adj_star;  // empty until matching_graph()
    std::vector<std::vector<SiteId>> faces;     // interior faces, CCW site cycles

    bool bipartite = false;
    std::vector<signed char> parity;  // +1 even / -1 odd; empty if not bipartite

    std::unordered_map<Point, SiteId, PointHash> index;

    std::size_t n_sites() const { return sites.size(); }
    std::optional<SiteId> find(const Point& p) const {
        auto it = index.find(p);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
    bool has_star() const { return !adj_star.empty(); }

    std::size_t plain_edge_count() const;
    bool plain_adjacent(SiteId a, SiteId b) const;
    bool star_adjacent(SiteId a, SiteId b) const;

    // Orbit keys under the period-2 translation group; used to key
    // interaction tables.
    Point site_key(SiteId s) const;
};

// Materialize the window [-L, L]^2. Fills sites, plain adjacency, faces and
// parity; star adjacency is added by matching_graph. Rejects specs whose
// expansion violates planarity or leaves the interior disconnected.
LatticeGraph build_lattice(const LatticeSpec& spec, std::int64_t L);

// Populate star adjacency: plain neighbors plus pairs of distinct sites on
// the border of a common face.
LatticeGraph& matching_graph(LatticeGraph& g);

// Convenience: build + matching.
LatticeGraph make_lattice(const LatticeSpec& spec, std::int64_t L);

HalfPlaneRegion half_plane(const LatticeGraph& g, Side side, std::int64_t k);

// Image of a site under a symmetry, or nullopt when it leaves the window.
std::optional<SiteId> apply_symmetry(const LatticeGraph& g, const Symmetry& op, SiteId site);

}  // namespace perc

#endif
