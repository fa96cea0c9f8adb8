#include "perc/lattice.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace perc {

// ---------------------------------------------------------------------------
// presets

static LatticeSpec make_spec(std::string name, std::vector<Point> sites,
                             std::vector<std::pair<Point, Point>> edges) {
    LatticeSpec s;
    s.name = std::move(name);
    s.cell_sites = std::move(sites);
    s.cell_edges = std::move(edges);
    return s;
}

static Point pt(std::int64_t xn, std::int64_t xd, std::int64_t yn, std::int64_t yd) {
    return Point(Frac(xn, xd), Frac(yn, yd));
}

LatticeSpec LatticeSpec::preset(const std::string& name) {
    if (name == "square") {
        return make_spec("square",
                         {pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(0, 1, 1, 1), pt(1, 1, 1, 1)},
                         {{pt(0, 1, 0, 1), pt(1, 1, 0, 1)},
                          {pt(0, 1, 0, 1), pt(0, 1, 1, 1)},
                          {pt(0, 1, 1, 1), pt(1, 1, 1, 1)},
                          {pt(1, 1, 0, 1), pt(1, 1, 1, 1)}});
    }
    if (name == "square_shifted") {
        // Z^2 + (1/2, 1/2): reflections in integer lines swap the sublattices
        return make_spec("square_shifted", {pt(1, 2, 1, 2)},
                         {{pt(1, 2, 1, 2), pt(3, 2, 1, 2)},
                          {pt(1, 2, 1, 2), pt(1, 2, 3, 2)},
                          {pt(-1, 2, 1, 2), pt(1, 2, 1, 2)},
                          {pt(1, 2, -1, 2), pt(1, 2, 1, 2)}});
    }
    if (name == "triangular") {
        return make_spec("triangular", {pt(1, 1, 0, 1), pt(0, 1, 1, 1)},
                         {{pt(-1, 1, 0, 1), pt(1, 1, 0, 1)},
                          {pt(1, 1, 0, 1), pt(0, 1, 1, 1)},
                          {pt(0, 1, 1, 1), pt(2, 1, 1, 1)}});
    }
    if (name == "honeycomb") {
        return make_spec("honeycomb", {pt(1, 3, 1, 1), pt(2, 3, 0, 1)},
                         {{pt(-1, 3, 1, 1), pt(1, 3, 1, 1)},
                          {pt(1, 3, 1, 1), pt(2, 3, 0, 1)},
                          {pt(2, 3, 0, 1), pt(4, 3, 0, 1)}});
    }
    if (name == "diced") {
        // triangular vertices plus triangle centroids joined to their corners
        return make_spec("diced",
                         {pt(1, 1, 0, 1), pt(0, 1, 1, 1), pt(0, 1, 1, 3), pt(1, 1, 2, 3)},
                         {{pt(0, 1, 1, 3), pt(1, 1, 0, 1)},
                          {pt(0, 1, 1, 3), pt(-1, 1, 0, 1)},
                          {pt(0, 1, 1, 3), pt(0, 1, 1, 1)},
                          {pt(1, 1, 2, 3), pt(1, 1, 0, 1)},
                          {pt(1, 1, 2, 3), pt(0, 1, 1, 1)},
                          {pt(1, 1, 2, 3), pt(2, 1, 1, 1)}});
    }
    if (name == "kagome") {
        // midpoints of honeycomb edges
        return make_spec("kagome", {pt(1, 2, 1, 2), pt(1, 1, 0, 1), pt(0, 1, 1, 1)},
                         {{pt(1, 2, 1, 2), pt(1, 1, 0, 1)},
                          {pt(1, 2, 1, 2), pt(0, 1, 1, 1)},
                          {pt(1, 2, 1, 2), pt(1, 2, -1, 2)},
                          {pt(1, 2, 1, 2), pt(1, 2, 3, 2)}});
    }
    throw Error("unknown lattice preset: " + name);
}

std::vector<std::string> LatticeSpec::preset_names() {
    return {"square", "triangular", "honeycomb", "diced", "kagome", "square_shifted"};
}

// Text format, one item per line:
//   name <identifier>
//   site <x> <y>
//   edge <x1> <y1> <x2> <y2>
// with rational coordinates written as a/b or plain integers.
LatticeSpec LatticeSpec::parse(const std::string& text, const std::string& fallback_name) {
    LatticeSpec s;
    s.name = fallback_name;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        try {
            if (kw == "name") {
                ls >> s.name;
            } else if (kw == "site") {
                std::string a, b;
                if (!(ls >> a >> b)) throw Error("site needs two coordinates");
                s.cell_sites.emplace_back(parse_frac(a), parse_frac(b));
            } else if (kw == "edge") {
                std::string a, b, c, d;
                if (!(ls >> a >> b >> c >> d)) throw Error("edge needs four coordinates");
                s.cell_edges.push_back({Point(parse_frac(a), parse_frac(b)),
                                        Point(parse_frac(c), parse_frac(d))});
            } else {
                throw Error("unknown keyword '" + kw + "'");
            }
        } catch (const std::exception& e) {
            throw Error("lattice spec line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (s.cell_sites.empty()) throw Error("lattice spec has no sites");
    if (s.cell_edges.empty()) throw Error("lattice spec has no edges");
    return s;
}

LatticeSpec LatticeSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lattice spec file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

// ---------------------------------------------------------------------------
// symmetry

Symmetry Symmetry::translation(std::int64_t dx, std::int64_t dy) {
    if (dx % 2 != 0 || dy % 2 != 0)
        throw Error("lattice translations live in 2Z^2");
    return {{{Prim::translate, 0, dx, dy}}};
}

Symmetry Symmetry::then(const Symmetry& next) const {
    Symmetry out = *this;
    out.steps.insert(out.steps.end(), next.steps.begin(), next.steps.end());
    return out;
}

Point Symmetry::map_point(Point p) const {
    for (const auto& st : steps) {
        switch (st.kind) {
            case Prim::reflect_hor: p = Point(p.x, Frac(2 * st.k) - p.y); break;
            case Prim::reflect_vert: p = Point(Frac(2 * st.k) - p.x, p.y); break;
            case Prim::translate: p = Point(p.x + Frac(st.dx), p.y + Frac(st.dy)); break;
            case Prim::spin_flip: break;
        }
    }
    return p;
}

int Symmetry::spin_sign() const {
    int s = 1;
    for (const auto& st : steps)
        if (st.kind == Prim::spin_flip) s = -s;
    return s;
}

// ---------------------------------------------------------------------------
// build

namespace {

// Group elements x -> (e1*x1 + 2a, e2*x2 + 2b) generated by the reflections.
struct GroupElem {
    int e1, e2;
    std::int64_t a, b;
    Point apply(const Point& p) const {
        return Point(Frac(e1) * p.x + Frac(2 * a), Frac(e2) * p.y + Frac(2 * b));
    }
};

// exact segment intersection test; shared endpoints are allowed
bool on_segment(const Point& p, const Point& a, const Point& b) {
    if (orient(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_conflict(const Point& a, const Point& b, const Point& c, const Point& d) {
    bool share_ac = (a == c), share_ad = (a == d), share_bc = (b == c), share_bd = (b == d);
    int n_shared = int(share_ac) + int(share_ad) + int(share_bc) + int(share_bd);
    if (n_shared >= 2) return true;  // identical or degenerate pair
    if (n_shared == 1) {
        // allowed to touch at the shared endpoint only; a collinear overlap
        // means the free endpoint of one lies on the other segment
        const Point& shared = share_ac || share_ad ? a : b;
        const Point& free1 = share_ac || share_ad ? b : a;
        const Point& free2 = share_ac || share_bc ? d : c;
        (void)shared;
        return on_segment(free1, c, d) || on_segment(free2, a, b);
    }
    int o1 = orient(a, b, c), o2 = orient(a, b, d);
    int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4 && (o1 != 0 || o2 != 0) && (o3 != 0 || o4 != 0)) {
        // proper crossing unless only touching; any touch without a shared
        // endpoint is a violation too, so:
        return true;
    }
    // collinear / endpoint-on-interior cases
    return on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d);
}

// CCW comparator for directions around a site (angle from positive x axis)
bool dir_less(const Point& u, const Point& v) {
    auto half = [](const Point& d) {
        if (d.y.sign() > 0 || (d.y.sign() == 0 && d.x.sign() > 0)) return 0;
        return 1;
    };
    int hu = half(u), hv = half(v);
    if (hu != hv) return hu < hv;
    Frac cross = u.x * v.y - u.y * v.x;
    return cross.sign() > 0;
}

}  // namespace

std::size_t LatticeGraph::plain_edge_count() const {
    std::size_t total = 0;
    for (const auto& n : adj_plain) total += n.size();
    return total / 2;
}

bool LatticeGraph::plain_adjacent(SiteId a, SiteId b) const {
    const auto& n = adj_plain[a];
    return std::find(n.begin(), n.end(), b) != n.end();
}

bool LatticeGraph::star_adjacent(SiteId a, SiteId b) const {
    const auto& n = adj_star[a];
    return std::find(n.begin(), n.end(), b) != n.end();
}

Point LatticeGraph::site_key(SiteId s) const {
    const Point& p = sites[s];
    return Point(p.x.mod(2), p.y.mod(2));
}

LatticeGraph build_lattice(const LatticeSpec& spec, std::int64_t L) {
    if (L < 1) throw Error("window radius must be >= 1");
    if (spec.cell_sites.empty() || spec.cell_edges.empty())
        throw Error("lattice spec is empty");

    LatticeGraph g;
    g.spec = spec;
    g.window_radius = L;

    const Frac lo(-L), hi(L);
    auto inside = [&](const Point& p) {
        return lo <= p.x && p.x <= hi && lo <= p.y && p.y <= hi;
    };

    // sites: orbit of the cell sites under x -> (±x1 + 2a, ±x2 + 2b)
    std::set<Point> site_set;
    for (const auto& cs : spec.cell_sites) {
        for (int e1 : {1, -1}) {
            for (int e2 : {1, -1}) {
                Frac bx = Frac(e1) * cs.x, by = Frac(e2) * cs.y;
                // translations keeping the point inside the window
                std::int64_t a_lo = ((lo - bx) / Frac(2)).floor();
                std::int64_t a_hi = ((hi - bx) / Frac(2)).floor() + 1;
                std::int64_t b_lo = ((lo - by) / Frac(2)).floor();
                std::int64_t b_hi = ((hi - by) / Frac(2)).floor() + 1;
                for (std::int64_t a = a_lo; a <= a_hi; ++a)
                    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
                        Point p(bx + Frac(2 * a), by + Frac(2 * b));
                        if (inside(p)) site_set.insert(p);
                    }
            }
        }
    }
    g.sites.assign(site_set.begin(), site_set.end());  // std::set of Point is (y,x)-ordered
    g.index.reserve(g.sites.size() * 2);
    for (SiteId i = 0; i < SiteId(g.sites.size()); ++i) g.index[g.sites[i]] = i;

    // edges: orbit of the generator edges, kept when both endpoints are sites
    g.adj_plain.assign(g.sites.size(), {});
    std::set<std::pair<SiteId, SiteId>> edge_set;
    for (const auto& [p0, q0] : spec.cell_edges) {
        for (int e1 : {1, -1}) {
            for (int e2 : {1, -1}) {
                Point pb(Frac(e1) * p0.x, Frac(e2) * p0.y);
                Point qb(Frac(e1) * q0.x, Frac(e2) * q0.y);
                std::int64_t a_lo = ((lo - std::max(pb.x, qb.x)) / Frac(2)).floor() - 1;
                std::int64_t a_hi = ((hi - std::min(pb.x, qb.x)) / Frac(2)).floor() + 1;
                std::int64_t b_lo = ((lo - std::max(pb.y, qb.y)) / Frac(2)).floor() - 1;
                std::int64_t b_hi = ((hi - std::min(pb.y, qb.y)) / Frac(2)).floor() + 1;
                for (std::int64_t a = a_lo; a <= a_hi; ++a)
                    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
                        Point p(pb.x + Frac(2 * a), pb.y + Frac(2 * b));
                        Point q(qb.x + Frac(2 * a), qb.y + Frac(2 * b));
                        auto ip = g.find(p), iq = g.find(q);
                        if (!ip || !iq) continue;
                        if (*ip == *iq) throw Error("degenerate generator edge in spec '" + spec.name + "'");
                        auto key = std::minmax(*ip, *iq);
                        edge_set.insert({key.first, key.second});
                    }
            }
        }
    }
    for (auto [a, b] : edge_set) {
        g.adj_plain[a].push_back(b);
        g.adj_plain[b].push_back(a);
    }
    for (auto& n : g.adj_plain) std::sort(n.begin(), n.end());

    // (L4) planarity: bucket edges by unit cell, compare within buckets
    {
        std::vector<std::pair<SiteId, SiteId>> edges(edge_set.begin(), edge_set.end());
        std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const Point& a = g.sites[edges[e].first];
            const Point& b = g.sites[edges[e].second];
            std::int64_t x0 = std::min(a.x, b.x).floor(), x1 = std::max(a.x, b.x).floor();
            std::int64_t y0 = std::min(a.y, b.y).floor(), y1 = std::max(a.y, b.y).floor();
            for (std::int64_t cx = x0; cx <= x1; ++cx)
                for (std::int64_t cy = y0; cy <= y1; ++cy)
                    buckets[{cx, cy}].push_back(e);
        }
        for (const auto& [cell, list] : buckets) {
            (void)cell;
            for (std::size_t i = 0; i < list.size(); ++i)
                for (std::size_t j = i + 1; j < list.size(); ++j) {
                    auto [a1, b1] = edges[list[i]];
                    auto [a2, b2] = edges[list[j]];
                    if (segments_conflict(g.sites[a1], g.sites[b1], g.sites[a2], g.sites[b2]))
                        throw Error("spec '" + spec.name + "' rejected: planarity violation between edge " +
                                    g.sites[a1].str() + "-" + g.sites[b1].str() + " and " +
                                    g.sites[a2].str() + "-" + g.sites[b2].str());
                }
        }
    }

    // (L3) connectivity of the interior, allowing a one-cell margin
    {
        Frac ilo(-(L - 1)), ihi(L - 1);
        std::vector<char> seen(g.sites.size(), 0);
        SiteId start = -1;
        for (SiteId i = 0; i < SiteId(g.sites.size()); ++i) {
            const Point& p = g.sites[i];
            if (ilo <= p.x && p.x <= ihi && ilo <= p.y && p.y <= ihi) { start = i; break; }
        }
        if (start < 0) throw Error("spec '" + spec.name + "' rejected: window contains no interior sites");
        std::queue<SiteId> q;
        q.push(start);
        seen[start] = 1;
        while (!q.empty()) {
            SiteId u = q.front();
            q.pop();
            for (SiteId v : g.adj_plain[u])
                if (!seen[v]) { seen[v] = 1; q.push(v); }
        }
        for (SiteId i = 0; i < SiteId(g.sites.size()); ++i) {
            const Point& p = g.sites[i];
            if (ilo <= p.x && p.x <= ihi && ilo <= p.y && p.y <= ihi && !seen[i])
                throw Error("spec '" + spec.name + "' rejected: disconnected interior at " + g.sites[i].str());
        }
    }

    // faces via the rotation system: next(u->v) = (v->w) with w the neighbor
    // of v immediately before direction (u - v) in CCW order; bounded faces
    // come out CCW with positive signed area
    {
        std::vector<std::vector<SiteId>> rot(g.sites.size());
        for (SiteId v = 0; v < SiteId(g.sites.size()); ++v) {
            rot[v] = g.adj_plain[v];
            std::sort(rot[v].begin(), rot[v].end(), [&](SiteId a, SiteId b) {
                return dir_less(g.sites[a] - g.sites[v], g.sites[b] - g.sites[v]);
            });
        }
        auto rot_prev = [&](SiteId v, SiteId u) {
            const auto& r = rot[v];
            auto it = std::find(r.begin(), r.end(), u);
            return it == r.begin() ? r.back() : *(it - 1);
        };
        std::set<std::pair<SiteId, SiteId>> used;
        for (SiteId u = 0; u < SiteId(g.sites.size()); ++u) {
            for (SiteId v : g.adj_plain[u]) {
                if (used.count({u, v})) continue;
                std::vector<SiteId> cycle;
                SiteId cu = u, cv = v;
                bool ok = true;
                while (true) {
                    if (used.count({cu, cv})) { ok = false; break; }
                    used.insert({cu, cv});
                    cycle.push_back(cu);
                    SiteId w = rot_prev(cv, cu);
                    cu = cv;
                    cv = w;
                    if (cu == u && cv == v) break;
                    if (cycle.size() > 10000) { ok = false; break; }
                }
                if (!ok) continue;
                // signed area (shoelace)
                Frac area2(0);
                for (std::size_t i = 0; i < cycle.size(); ++i) {
                    const Point& a = g.sites[cycle[i]];
                    const Point& b = g.sites[cycle[(i + 1) % cycle.size()]];
                    area2 = area2 + (a.x * b.y - b.x * a.y);
                }
                if (area2.sign() <= 0) continue;  // outer face
                std::set<SiteId> distinct(cycle.begin(), cycle.end());
                if (distinct.size() != cycle.size()) continue;  // clipped rim region
                g.faces.push_back(std::move(cycle));
            }
        }
    }

    // parity: BFS 2-coloring; canonical sign anchored at the site closest to
    // the origin so the labeling does not depend on the window size
    {
        g.parity.assign(g.sites.size(), 0);
        g.bipartite = true;
        for (SiteId s = 0; s < SiteId(g.sites.size()) && g.bipartite; ++s) {
            if (g.parity[s] != 0) continue;
            g.parity[s] = 1;
            std::queue<SiteId> q;
            q.push(s);
            while (!q.empty() && g.bipartite) {
                SiteId u = q.front();
                q.pop();
                for (SiteId v : g.adj_plain[u]) {
                    if (g.parity[v] == 0) {
                        g.parity[v] = -g.parity[u];
                        q.push(v);
                    } else if (g.parity[v] == g.parity[u]) {
                        g.bipartite = false;
                        break;
                    }
                }
            }
        }
        if (g.bipartite) {
            SiteId anchor = 0;
            Frac best(-1);
            for (SiteId i = 0; i < SiteId(g.sites.size()); ++i) {
                Frac d = g.sites[i].x * g.sites[i].x + g.sites[i].y * g.sites[i].y;
                if (best.sign() < 0 || d < best) { best = d; anchor = i; }
            }
            if (g.parity[anchor] < 0)
                for (auto& p : g.parity) p = -p;
        } else {
            g.parity.clear();
        }
    }

    return g;
}

LatticeGraph& matching_graph(LatticeGraph& g) {
    std::vector<std::set<SiteId>> star(g.sites.size());
    for (SiteId u = 0; u < SiteId(g.sites.size()); ++u)
        for (SiteId v : g.adj_plain[u]) star[u].insert(v);
    for (const auto& face : g.faces) {
        for (std::size_t i = 0; i < face.size(); ++i)
            for (std::size_t j = i + 1; j < face.size(); ++j) {
                star[face[i]].insert(face[j]);
                star[face[j]].insert(face[i]);
            }
    }
    g.adj_star.assign(g.sites.size(), {});
    for (SiteId u = 0; u < SiteId(g.sites.size()); ++u)
        g.adj_star[u].assign(star[u].begin(), star[u].end());
    return g;
}

LatticeGraph make_lattice(const LatticeSpec& spec, std::int64_t L) {
    LatticeGraph g = build_lattice(spec, L);
    matching_graph(g);
    return g;
}

HalfPlaneRegion half_plane(const LatticeGraph& g, Side side, std::int64_t k) {
    HalfPlaneRegion r;
    r.side = side;
    r.k = k;
    r.member.assign(g.sites.size(), 0);
    r.on_line.assign(g.sites.size(), 0);
    for (SiteId i = 0; i < SiteId(g.sites.size()); ++i)
        if (in_half_plane(g.sites[i], side, k)) {
            r.member[i] = 1;
            r.sites.push_back(i);
        }
    if (r.sites.empty())
        throw Error("half-plane " + std::string(side_name(side)) + " at level " +
                    std::to_string(k) + " does not intersect the window");
    for (SiteId i : r.sites)
        for (SiteId v : g.adj_plain[i])
            if (!r.member[v]) {
                r.on_line[i] = 1;
                r.boundary_line.push_back(i);
                break;
            }
    return r;
}

std::optional<SiteId> apply_symmetry(const LatticeGraph& g, const Symmetry& op, SiteId site) {
    Point p = op.map_point(g.sites[site]);
    return g.find(p);
}

}  // namespace perc
