#include "perc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <set>
#include <unordered_map>

namespace perc {

namespace {

struct Dsu {
    std::vector<SiteId> parent;
    explicit Dsu(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = SiteId(i);
    }
    SiteId find(SiteId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(SiteId a, SiteId b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

const std::vector<std::vector<SiteId>>& adj_of(const LatticeGraph& g, Adjacency a) {
    if (a == Adjacency::star) {
        if (!g.has_star()) throw Error("star adjacency not populated");
        return g.adj_star;
    }
    return g.adj_plain;
}

}  // namespace

ClusterLabeling label_clusters_region(const LatticeGraph& g, const std::vector<signed char>& spins,
                                      int sign, Adjacency adj, const std::vector<char>& region) {
    const auto& neighbors = adj_of(g, adj);
    ClusterLabeling out;
    out.graph = &g;
    out.sign = sign;
    out.adjacency = adj;
    out.region = region;
    out.label.assign(g.n_sites(), -1);
    Dsu dsu(g.n_sites());
    for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
        if (!region[u] || spins[u] != sign) continue;
        for (SiteId v : neighbors[u])
            if (v < u && region[v] && spins[v] == sign) dsu.unite(u, v);
    }
    // canonical label: smallest member index
    for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
        if (!region[u] || spins[u] != sign) continue;
        SiteId root = dsu.find(u);
        out.label[u] = root;  // roots are minimal by the union rule
        out.sizes[root] += 1;
    }
    return out;
}

ClusterLabeling label_clusters(const Configuration& c, int sign, Adjacency adj) {
    return label_clusters_region(*c.graph, c.spins, sign, adj, c.window->interior);
}

ConnectReport connects(const ClusterLabeling& l, const std::vector<SiteId>& A,
                       const std::vector<SiteId>& B) {
    std::unordered_map<SiteId, char> in_a;
    for (SiteId a : A)
        if (l.label[a] >= 0) in_a[l.label[a]] = 1;
    for (SiteId b : B)
        if (l.label[b] >= 0 && in_a.count(l.label[b])) return {true, l.label[b]};
    return {false, -1};
}

bool cluster_touches_rim(const ClusterLabeling& l, SiteId from) {
    if (l.label[from] < 0) return false;
    SiteId id = l.label[from];
    const auto& neighbors = adj_of(*l.graph, l.adjacency);
    for (SiteId u = 0; u < SiteId(l.graph->n_sites()); ++u) {
        if (l.label[u] != id) continue;
        for (SiteId v : neighbors[u])
            if (!l.region[v]) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// exact even-odd

bool point_enclosed(const std::vector<Point>& cycle, const Point& p) {
    bool inside = false;
    std::size_t n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = cycle[i];
        const Point& b = cycle[(i + 1) % n];
        // on-segment counts as enclosed
        if (orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
            std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y))
            return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            // x coordinate where the edge crosses the horizontal through p
            Frac t_num = p.y - a.y;
            Frac t_den = b.y - a.y;
            Frac xint = a.x + (b.x - a.x) * t_num / t_den;
            if (xint > p.x) inside = !inside;
        }
    }
    return inside;
}

// ---------------------------------------------------------------------------
// contour tracing

namespace {

using EdgePair = std::pair<SiteId, SiteId>;  // ordered (lo, hi)

struct EdgePairHash {
    std::size_t operator()(const EdgePair& e) const {
        return std::hash<std::uint64_t>()((std::uint64_t(std::uint32_t(e.first)) << 32) |
                                          std::uint32_t(e.second));
    }
};

inline EdgePair edge_key(SiteId a, SiteId b) { return a < b ? EdgePair{a, b} : EdgePair{b, a}; }

struct PairingLink {
    int edge_a = -1, edge_b = -1;  // indices into the disagreement-edge list
    int face = -1;
    std::vector<SiteId> arc;  // hug-side sites from the a-edge to the b-edge
};

}  // namespace

std::vector<Contour> trace_contours_raw(const LatticeGraph& g,
                                        const std::vector<signed char>& spins,
                                        const std::vector<char>& site_mask, int hug_sign) {
    // disagreement edges with both endpoints in the mask
    std::vector<EdgePair> edges;
    std::unordered_map<EdgePair, int, EdgePairHash> edge_index;
    for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
        if (!site_mask[u]) continue;
        for (SiteId v : g.adj_plain[u]) {
            if (v < u || !site_mask[v]) continue;
            if (spins[u] == spins[v]) continue;
            edge_index[{u, v}] = int(edges.size());
            edges.push_back({u, v});
        }
    }

    // pair the disagreement edges of every usable face through its hug-sign arcs
    std::vector<std::vector<int>> links_at(edges.size());
    std::vector<PairingLink> links;
    for (std::size_t fi = 0; fi < g.faces.size(); ++fi) {
        const auto& cyc = g.faces[fi];
        std::size_t m = cyc.size();
        bool usable = true;
        for (SiteId s : cyc)
            if (!site_mask[s]) { usable = false; break; }
        if (!usable) continue;
        std::vector<std::size_t> dis;  // positions p with edge (cyc[p], cyc[p+1]) disagreeing
        for (std::size_t p = 0; p < m; ++p)
            if (spins[cyc[p]] != spins[cyc[(p + 1) % m]]) dis.push_back(p);
        if (dis.empty()) continue;
        for (std::size_t k = 0; k < dis.size(); ++k) {
            std::size_t pa = dis[k], pb = dis[(k + 1) % dis.size()];
            // the arc strictly between the two edges: cyc[pa+1 .. pb]
            if (spins[cyc[(pa + 1) % m]] != hug_sign) continue;
            PairingLink link;
            auto ita = edge_index.find(edge_key(cyc[pa], cyc[(pa + 1) % m]));
            auto itb = edge_index.find(edge_key(cyc[pb], cyc[(pb + 1) % m]));
            if (ita == edge_index.end() || itb == edge_index.end()) continue;
            link.edge_a = ita->second;
            link.edge_b = itb->second;
            link.face = int(fi);
            for (std::size_t p = (pa + 1) % m;; p = (p + 1) % m) {
                link.arc.push_back(cyc[p]);
                if (p == pb) break;
            }
            links_at[link.edge_a].push_back(int(links.size()));
            links_at[link.edge_b].push_back(int(links.size()));
            links.push_back(std::move(link));
        }
    }

    // contours = paths/cycles of the edge-link graph
    std::vector<Contour> out;
    std::vector<char> edge_used(edges.size(), 0);
    auto minus_end = [&](int e) { return spins[edges[e].first] < 0 ? edges[e].first : edges[e].second; };
    auto plus_end = [&](int e) { return spins[edges[e].first] > 0 ? edges[e].first : edges[e].second; };
    auto other_edge = [&](int link, int e) {
        return links[link].edge_a == e ? links[link].edge_b : links[link].edge_a;
    };

    auto walk = [&](int start_edge) {
        Contour k;
        // scan one direction; open contours stop at an endpoint, closed ones
        // come back to the start
        int cur = start_edge, from_link = -1;
        bool cycle = false;
        for (;;) {
            int next_link = -1;
            for (int li : links_at[cur])
                if (li != from_link) { next_link = li; break; }
            if (next_link < 0) break;
            from_link = next_link;
            cur = other_edge(next_link, cur);
            if (cur == start_edge) { cycle = true; break; }
        }
        k.closed = cycle;
        int first = cur;
        int prev_link = cycle ? from_link : -1;
        for (;;) {
            edge_used[cur] = 1;
            k.crossed.push_back({minus_end(cur), plus_end(cur)});
            int next_link = -1;
            for (int li : links_at[cur])
                if (li != prev_link) { next_link = li; break; }
            if (next_link < 0) break;  // open end
            const PairingLink& L = links[next_link];
            k.dual_faces.push_back(L.face);
            std::vector<SiteId> arc = L.arc;
            if (L.edge_b == cur) std::reverse(arc.begin(), arc.end());
            auto& hug_face = hug_sign > 0 ? k.plus_face : k.minus_face;
            for (SiteId s : arc)
                if (hug_face.empty() || hug_face.back() != s) hug_face.push_back(s);
            prev_link = next_link;
            cur = other_edge(next_link, cur);
            if (k.closed && cur == first) break;
        }
        // the non-hug face collects the opposite endpoints of the crossings
        auto& other_face = hug_sign > 0 ? k.minus_face : k.plus_face;
        for (const auto& [mi, pl] : k.crossed) {
            SiteId s = hug_sign > 0 ? mi : pl;
            if (other_face.empty() || other_face.back() != s) other_face.push_back(s);
        }
        return k;
    };

    // open contours first (their endpoints fix the traversal), then cycles
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (edge_used[e]) continue;
            bool endpoint = links_at[e].size() < 2;
            if (pass == 0 && !endpoint) continue;
            out.push_back(walk(int(e)));
        }
    }
    return out;
}

std::vector<Contour> trace_contours(const Configuration& c) {
    const LatticeGraph& g = *c.graph;
    std::vector<char> mask(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (c.window->interior[s] || c.window->ring[s]) mask[s] = 1;
    return trace_contours_raw(g, c.spins, mask, +1);
}

std::vector<Point> contour_dual_points(const LatticeGraph& g, const Contour& k) {
    std::vector<Point> out;
    out.reserve(k.dual_faces.size());
    for (int f : k.dual_faces) {
        const auto& cyc = g.faces[f];
        Frac sx(0), sy(0);
        for (SiteId s : cyc) {
            sx = sx + g.sites[s].x;
            sy = sy + g.sites[s].y;
        }
        out.emplace_back(sx / Frac(std::int64_t(cyc.size())), sy / Frac(std::int64_t(cyc.size())));
    }
    return out;
}

std::string sites_csv(const LatticeGraph& g, const std::vector<SiteId>& path) {
    std::string out = "x,y\n";
    char buf[64];
    for (SiteId s : path) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", g.sites[s].x.to_double(),
                      g.sites[s].y.to_double());
        out += buf;
    }
    return out;
}

std::string contour_csv(const LatticeGraph& g, const Contour& k) {
    std::string out = "x,y\n";
    char buf[64];
    for (const Point& p : contour_dual_points(g, k)) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", p.x.to_double(), p.y.to_double());
        out += buf;
    }
    return out;
}

std::size_t count_crossings(const Contour& a, const Contour& b) {
    std::set<int> fa(a.dual_faces.begin(), a.dual_faces.end());
    std::set<int> shared;
    for (int f : b.dual_faces)
        if (fa.count(f)) shared.insert(f);
    return shared.size();
}

// ---------------------------------------------------------------------------
// surrounding circuits

namespace {

struct CircuitSearch {
    std::vector<char> in_search, in_core, annulus;
    std::vector<char> blocked;  // K: opposite-sign region attached to the rim
    bool crossing = false;
};

// grow the opposite-sign region attached to the search rim; crossing means it
// reaches the conjugate neighborhood of the core
CircuitSearch grow_blocked(const LatticeGraph& g, const std::vector<signed char>& spins, int sign,
                           Adjacency conj, const Rect& core, const Rect& search) {
    const auto& cadj = adj_of(g, conj);
    CircuitSearch cs;
    cs.in_search.assign(g.n_sites(), 0);
    cs.in_core.assign(g.n_sites(), 0);
    cs.annulus.assign(g.n_sites(), 0);
    cs.blocked.assign(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        cs.in_search[s] = search.contains(g.sites[s]);
        cs.in_core[s] = core.contains(g.sites[s]);
        cs.annulus[s] = cs.in_search[s] && !cs.in_core[s];
    }
    std::queue<SiteId> q;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!cs.annulus[s] || spins[s] != -sign) continue;
        bool rim = false;
        for (SiteId v : cadj[s])
            if (!cs.in_search[v]) rim = true;
        if (rim) {
            cs.blocked[s] = 1;
            q.push(s);
        }
    }
    while (!q.empty()) {
        SiteId u = q.front();
        q.pop();
        for (SiteId v : cadj[u])
            if (cs.annulus[v] && !cs.blocked[v] && spins[v] == -sign) {
                cs.blocked[v] = 1;
                q.push(v);
            }
    }
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!cs.blocked[s]) continue;
        for (SiteId v : cadj[s])
            if (cs.in_core[v]) cs.crossing = true;
    }
    return cs;
}

// Reduce a cyclic quasipath to a simple cycle that still winds around the
// center: revisits with zero winding are dead pockets and get popped, a
// revisit carrying a full turn is the enclosing loop itself.
std::vector<SiteId> loop_erase_cycle(const LatticeGraph& g, const std::vector<SiteId>& quasi,
                                     const Point& center) {
    auto angle = [&](SiteId s) {
        return std::atan2((g.sites[s].y - center.y).to_double(),
                          (g.sites[s].x - center.x).to_double());
    };
    std::vector<SiteId> stack;
    std::vector<double> cum;
    std::unordered_map<SiteId, std::size_t> pos;
    double wind = 0;
    double prev_angle = quasi.empty() ? 0 : angle(quasi.front());
    for (SiteId x : quasi) {
        double a = angle(x);
        double d = a - prev_angle;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        if (std::fabs(d) > 2.5)
            throw Error("circuit extraction: winding step too coarse near the core");
        wind += d;
        prev_angle = a;
        auto it = pos.find(x);
        if (it != pos.end()) {
            double loop = wind - cum[it->second];
            if (std::fabs(loop) > M_PI) {
                // the sub-loop since the first visit makes the full turn
                std::vector<SiteId> cycle(stack.begin() + std::ptrdiff_t(it->second), stack.end());
                return cycle;
            }
            while (stack.size() > it->second + 1) {
                pos.erase(stack.back());
                stack.pop_back();
                cum.pop_back();
            }
            cum.back() = wind;
        } else {
            pos[x] = stack.size();
            stack.push_back(x);
            cum.push_back(wind);
        }
    }
    return stack;
}

// extract the outermost sign circuit hugging the blocked region, as the face
// quasipath of the single contour around the protected component
std::optional<Circuit> extract_circuit(const LatticeGraph& g, const std::vector<signed char>& spins,
                                       int sign, Adjacency circuit_adj, const CircuitSearch& cs,
                                       const std::vector<SiteId>& anchor_sites, const Rect& search) {
    // protected component: plain-connected free sites around the anchors
    std::vector<char> protected_mask(g.n_sites(), 0);
    std::queue<SiteId> q;
    auto blocked_at = [&](SiteId s) { return bool(cs.blocked[s]); };
    for (SiteId a : anchor_sites)
        if (cs.in_search[a] && !blocked_at(a) && !protected_mask[a]) {
            protected_mask[a] = 1;
            q.push(a);
        }
    if (q.empty()) return std::nullopt;
    while (!q.empty()) {
        SiteId u = q.front();
        q.pop();
        for (SiteId v : g.adj_plain[u])
            if (cs.in_search[v] && !blocked_at(v) && !protected_mask[v]) {
                protected_mask[v] = 1;
                q.push(v);
            }
    }

    // indicator spins: sign on the protected set, -sign elsewhere
    std::vector<signed char> chi(g.n_sites(), static_cast<signed char>(-sign));
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (protected_mask[s]) chi[s] = static_cast<signed char>(sign);

    // mask: search window dilated so the contour can close around it
    std::vector<char> mask(g.n_sites(), 0);
    Rect dilated(search.xlo - Frac(2), search.xhi + Frac(2), search.ylo - Frac(2),
                 search.yhi + Frac(2));
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) mask[s] = dilated.contains(g.sites[s]);

    int hug = circuit_adj == Adjacency::star ? -sign : sign;
    auto contours = trace_contours_raw(g, chi, mask, hug);
    if (contours.size() != 1 || !contours.front().closed)
        throw Error("circuit extraction: protected region has no single closed boundary");
    const Contour& k = contours.front();
    const auto& quasi = sign > 0 ? k.plus_face : k.minus_face;
    Point center((search.xlo + search.xhi) / Frac(2), (search.ylo + search.yhi) / Frac(2));
    // wind about the middle of the anchor set, not the search window
    {
        Frac sx(0), sy(0);
        for (SiteId a : anchor_sites) {
            sx = sx + g.sites[a].x;
            sy = sy + g.sites[a].y;
        }
        center = Point(sx / Frac(std::int64_t(anchor_sites.size())),
                       sy / Frac(std::int64_t(anchor_sites.size())));
    }
    std::vector<SiteId> cyc = loop_erase_cycle(g, quasi, center);
    if (cyc.size() < 3) throw Error("circuit extraction: degenerate witness");

    // validation: sign, adjacency, enclosure
    const auto& cadj2 = adj_of(g, circuit_adj);
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        if (spins[cyc[i]] != sign)
            throw Error("circuit extraction: witness site has the wrong sign at " +
                        g.sites[cyc[i]].str());
        SiteId nxt = cyc[(i + 1) % cyc.size()];
        if (std::find(cadj2[cyc[i]].begin(), cadj2[cyc[i]].end(), nxt) == cadj2[cyc[i]].end())
            throw Error("circuit extraction: witness is not a closed path");
    }
    std::vector<Point> poly;
    poly.reserve(cyc.size());
    for (SiteId s : cyc) poly.push_back(g.sites[s]);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (cs.in_core[s] && !point_enclosed(poly, g.sites[s]))
            throw Error("circuit extraction: witness fails even-odd enclosure at " +
                        g.sites[s].str());
    Circuit out;
    out.sites = std::move(cyc);
    out.sign = sign;
    out.adjacency = circuit_adj;
    return out;
}

}  // namespace

std::optional<Circuit> find_surrounding_circuit(const Configuration& c, int sign,
                                                Adjacency circuit_adj, const Rect& core,
                                                const Rect& search) {
    const LatticeGraph& g = *c.graph;
    if (!(core.xlo >= search.xlo + Frac(1) && core.xhi <= search.xhi - Frac(1) &&
          core.ylo >= search.ylo + Frac(1) && core.yhi <= search.yhi - Frac(1)))
        throw Error("core box must sit strictly inside the search window");
    Frac bound(g.window_radius - 2);
    if (search.xlo < -bound || search.xhi > bound || search.ylo < -bound || search.yhi > bound)
        throw Error("search window must leave a two-cell margin to the materialized lattice");

    Adjacency conj = circuit_adj == Adjacency::star ? Adjacency::plain : Adjacency::star;
    CircuitSearch cs = grow_blocked(g, c.spins, sign, conj, core, search);
    if (cs.crossing) return std::nullopt;

    std::vector<SiteId> anchors;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (cs.in_core[s]) anchors.push_back(s);
    if (anchors.empty()) throw Error("core box contains no sites");
    return extract_circuit(g, c.spins, sign, circuit_adj, cs, anchors, search);
}

// ---------------------------------------------------------------------------
// semicircuits

std::vector<SiteId> semicircuit_interior(const LatticeGraph& g, const std::vector<SiteId>& sigma,
                                         Side side, std::int64_t level) {
    if (sigma.size() < 2) throw Error("semicircuit needs at least two sites");
    auto on_line = [&](SiteId s) {
        if (!in_half_plane(g.sites[s], side, level)) return false;
        for (SiteId v : g.adj_plain[s])
            if (!in_half_plane(g.sites[v], side, level)) return true;
        return false;
    };
    if (!on_line(sigma.front()) || !on_line(sigma.back()))
        throw Error("semicircuit endpoints must lie on the boundary line");

    std::vector<Point> poly;
    for (SiteId s : sigma) poly.push_back(g.sites[s]);
    for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) {
        Point q = reflect_in_level(g.sites[*it], side, level);
        if (q != poly.back() && !(poly.size() > 1 && q == poly.front())) poly.push_back(q);
    }
    std::set<Point> curve(poly.begin(), poly.end());

    Frac xlo = poly[0].x, xhi = xlo, ylo = poly[0].y, yhi = ylo;
    for (const Point& p : poly) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    std::vector<SiteId> out;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        const Point& p = g.sites[s];
        if (p.x < xlo || p.x > xhi || p.y < ylo || p.y > yhi) continue;
        if (curve.count(p)) continue;
        if (point_enclosed(poly, p)) out.push_back(s);
    }
    return out;
}

std::optional<Semicircuit> find_semicircuit(const Configuration& c, int sign, Adjacency adj,
                                            const HalfPlaneRegion& hp, const Rect& core) {
    const LatticeGraph& g = *c.graph;
    Side side = hp.side;
    std::int64_t k = hp.k;
    bool horizontal = side == Side::up || side == Side::down;

    // bounding box of the window interior
    Frac xlo, xhi, ylo, yhi;
    bool first = true;
    for (SiteId s : c.window->interior_sites) {
        const Point& p = g.sites[s];
        if (first) {
            xlo = xhi = p.x;
            ylo = yhi = p.y;
            first = false;
        } else {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
    }
    // symmetric search window about the boundary line
    Rect search;
    if (horizontal) {
        Frac m = side == Side::up ? yhi - Frac(k) : Frac(k) - ylo;
        search = Rect(xlo, xhi, Frac(k) - m, Frac(k) + m);
    } else {
        Frac m = side == Side::right ? xhi - Frac(k) : Frac(k) - xlo;
        search = Rect(Frac(k) - m, Frac(k) + m, ylo, yhi);
    }
    Frac bound(g.window_radius - 2);
    if (search.xlo < -bound || search.xhi > bound || search.ylo < -bound || search.yhi > bound)
        throw Error("semicircuit search window exceeds the materialized margin");

    Adjacency conj = adj == Adjacency::star ? Adjacency::plain : Adjacency::star;
    const auto& cadj = adj_of(g, conj);

    // masks restricted to the half-plane side of the search window
    std::vector<char> in_pi(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        in_pi[s] = search.contains(g.sites[s]) && in_half_plane(g.sites[s], side, k);

    std::vector<char> in_core_mask(g.n_sites(), 0);
    std::vector<SiteId> core_sites;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (core.contains(g.sites[s])) {
            if (!in_pi[s]) throw Error("core box must lie inside the half-plane");
            in_core_mask[s] = 1;
            core_sites.push_back(s);
        }
    if (core_sites.empty()) throw Error("core box contains no sites");

    // opposite-sign region attached to the far rim of the half-window (not
    // through the boundary line side)
    std::vector<char> blocked(g.n_sites(), 0);
    {
        std::queue<SiteId> q;
        for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
            if (!in_pi[s] || in_core_mask[s] || c.spins[s] != -sign) continue;
            bool rim = false;
            for (SiteId v : cadj[s])
                if (!search.contains(g.sites[v]) && in_half_plane(g.sites[v], side, k)) rim = true;
            if (rim) {
                blocked[s] = 1;
                q.push(s);
            }
        }
        while (!q.empty()) {
            SiteId u = q.front();
            q.pop();
            for (SiteId v : cadj[u])
                if (in_pi[v] && !in_core_mask[v] && !blocked[v] && c.spins[v] == -sign) {
                    blocked[v] = 1;
                    q.push(v);
                }
        }
    }
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!blocked[s]) continue;
        for (SiteId v : cadj[s])
            if (in_core_mask[v]) return std::nullopt;
    }

    // mirror the obstacle and extract the symmetric circuit around core + R(core)
    std::vector<char> blocked_sym(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!blocked[s]) continue;
        blocked_sym[s] = 1;
        auto r = g.find(reflect_in_level(g.sites[s], side, k));
        if (!r) throw Error("semicircuit search: reflection leaves the materialized window");
        blocked_sym[*r] = 1;
    }
    std::vector<SiteId> anchors = core_sites;
    for (SiteId s : core_sites) {
        auto r = g.find(reflect_in_level(g.sites[s], side, k));
        if (r) anchors.push_back(*r);
    }

    CircuitSearch cs;
    cs.in_search.assign(g.n_sites(), 0);
    cs.in_core.assign(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        cs.in_search[s] = search.contains(g.sites[s]);
    for (SiteId a : anchors) cs.in_core[a] = 1;
    cs.blocked = blocked_sym;

    // synthetic spins for validation: the mirrored half uses reflected values
    std::vector<signed char> sym_spins = c.spins;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (in_half_plane(g.sites[s], side, k)) continue;
        auto r = g.find(reflect_in_level(g.sites[s], side, k));
        if (r) sym_spins[s] = c.spins[*r];
    }

    std::optional<Circuit> circ;
    circ = extract_circuit(g, sym_spins, sign, adj, cs, anchors, search);
    if (!circ) return std::nullopt;

    // runs of the symmetric circuit inside the half-plane
    const auto& cyc = circ->sites;
    std::size_t n = cyc.size();
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (!in_half_plane(g.sites[cyc[i]], side, k)) { start = i; break; }
    if (start == n) throw Error("semicircuit extraction: circuit never leaves the half-plane");

    auto on_line = [&](SiteId s) { return s >= 0 && s < SiteId(hp.on_line.size()) && hp.on_line[s]; };
    std::vector<SiteId> run;
    for (std::size_t step = 1; step <= n; ++step) {
        SiteId s = cyc[(start + step) % n];
        if (in_half_plane(g.sites[s], side, k)) {
            run.push_back(s);
            if (step < n) continue;
        }
        if (!run.empty()) {
            if (on_line(run.front()) && on_line(run.back()) && run.size() >= 2) {
                auto interior = semicircuit_interior(g, run, side, k);
                std::vector<char> in_int(g.n_sites(), 0);
                for (SiteId t : interior) in_int[t] = 1;
                bool covers = true;
                for (SiteId t : core_sites)
                    if (!in_int[t]) covers = false;
                if (covers) {
                    const auto& radj = adj_of(g, adj);
                    auto star_adjacent = [&](SiteId a, SiteId b) {
                        return std::find(radj[a].begin(), radj[a].end(), b) != radj[a].end();
                    };
                    // Trim and repair until every site bounds the interior:
                    // sites that bound nothing are dead excursions (drop
                    // them), and a squeezed site between two non-adjacent
                    // neighbors marks a lobe that must be shortcut away.
                    for (int guard = 0;; ++guard) {
                        if (guard > 64)
                            throw Error("semicircuit extraction: repair did not converge");
                        auto cur_int = semicircuit_interior(g, run, side, k);
                        std::vector<char> cur(g.n_sites(), 0);
                        for (SiteId t : cur_int) cur[t] = 1;
                        auto bounds_interior = [&](SiteId s) {
                            for (SiteId v : g.adj_plain[s])
                                if (cur[v]) return true;
                            return false;
                        };
                        bool changed = true;
                        while (changed) {
                            changed = false;
                            while (run.size() > 2 && !bounds_interior(run.front())) {
                                run.erase(run.begin());
                                changed = true;
                            }
                            while (run.size() > 2 && !bounds_interior(run.back())) {
                                run.pop_back();
                                changed = true;
                            }
                            for (std::size_t i = 1; i + 1 < run.size(); ++i) {
                                if (bounds_interior(run[i])) continue;
                                if (star_adjacent(run[i - 1], run[i + 1])) {
                                    run.erase(run.begin() + std::ptrdiff_t(i));
                                    changed = true;
                                    break;
                                }
                            }
                        }
                        std::size_t squeezed = run.size();
                        for (std::size_t i = 1; i + 1 < run.size(); ++i)
                            if (!bounds_interior(run[i])) { squeezed = i; break; }
                        if (squeezed == run.size()) break;
                        // shortcut the tightest adjacent pair bridging the lobe
                        std::size_t best_a = 0, best_b = 0;
                        for (std::size_t a = 0; a < squeezed; ++a)
                            for (std::size_t b = run.size(); b-- > squeezed + 1;) {
                                if (!star_adjacent(run[a], run[b])) continue;
                                if (best_b == 0 || b - a < best_b - best_a) {
                                    best_a = a;
                                    best_b = b;
                                }
                            }
                        if (best_b == 0)
                            throw Error("semicircuit extraction: squeezed site has no bridge");
                        run.erase(run.begin() + std::ptrdiff_t(best_a + 1),
                                  run.begin() + std::ptrdiff_t(best_b));
                    }
                    if (!on_line(run.front()) || !on_line(run.back()))
                        throw Error("semicircuit extraction: repair left the boundary line");
                    // recheck coverage and the boundary identity after repair
                    auto final_int = semicircuit_interior(g, run, side, k);
                    std::vector<char> fin(g.n_sites(), 0);
                    for (SiteId t : final_int) fin[t] = 1;
                    for (SiteId t : core_sites)
                        if (!fin[t]) throw Error("semicircuit repair lost the core");
                    std::set<SiteId> boundary;
                    for (SiteId t : final_int)
                        for (SiteId v : g.adj_plain[t])
                            if (!fin[v] && in_half_plane(g.sites[v], side, k)) boundary.insert(v);
                    if (boundary != std::set<SiteId>(run.begin(), run.end()))
                        throw Error("semicircuit extraction: boundary identity failed");
                    Semicircuit out;
                    out.sites = run;
                    out.sign = sign;
                    out.adjacency = adj;
                    out.side = side;
                    out.level = k;
                    return out;
                }
            }
            run.clear();
        }
    }
    throw Error("semicircuit extraction: no run of the symmetric circuit surrounds the core");
}

// ---------------------------------------------------------------------------
// interfaces

OpenInterface open_interface(const Configuration& c) {
    const LatticeGraph& g = *c.graph;
    auto contours = trace_contours(c);
    // bounding box of the active region
    Frac xlo, xhi;
    bool first = true;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!c.window->interior[s] && !c.window->ring[s]) continue;
        const Point& p = g.sites[s];
        if (first) {
            xlo = xhi = p.x;
            first = false;
        } else {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
        }
    }
    OpenInterface out;
    std::optional<Contour> found;
    for (auto& k : contours) {
        if (k.closed || k.crossed.empty()) continue;
        ++out.open_count;
        auto mid_x = [&](const std::pair<SiteId, SiteId>& e) {
            return (g.sites[e.first].x + g.sites[e.second].x) / Frac(2);
        };
        Frac a = mid_x(k.crossed.front()), b = mid_x(k.crossed.back());
        bool a_left = a <= xlo + Frac(2), a_right = a >= xhi - Frac(2);
        bool b_left = b <= xlo + Frac(2), b_right = b >= xhi - Frac(2);
        if ((a_left && b_right) || (a_right && b_left)) {
            ++out.spanning_count;
            found = std::move(k);
        }
    }
    if (out.spanning_count == 1) out.contour = std::move(found);
    return out;
}

InterfaceProfile interface_profile(const Configuration& c, std::int64_t n_lo, std::int64_t n_hi) {
    const LatticeGraph& g = *c.graph;
    const Window& w = *c.window;
    InterfaceProfile prof;
    prof.n_lo = n_lo;
    prof.n_hi = n_hi;
    prof.a.assign(std::size_t(n_hi - n_lo + 1), std::nullopt);

    // top ring row: boundary sites above the interior
    Frac top_y;
    bool first = true;
    for (SiteId s : w.interior_sites) {
        if (first) { top_y = g.sites[s].y; first = false; }
        top_y = std::max(top_y, g.sites[s].y);
    }
    std::vector<SiteId> seeds;
    for (SiteId s : w.ring_sites)
        if (g.sites[s].y > top_y && c.spins[s] > 0) seeds.push_back(s);

    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        std::vector<char> region(g.n_sites(), 0);
        for (SiteId s : w.interior_sites)
            if (g.sites[s].y >= Frac(n)) region[s] = 1;
        for (SiteId s : seeds) region[s] = 1;
        // top-anchored plus-star cluster
        std::vector<char> seen(g.n_sites(), 0);
        std::queue<SiteId> q;
        for (SiteId s : seeds) {
            seen[s] = 1;
            q.push(s);
        }
        while (!q.empty()) {
            SiteId u = q.front();
            q.pop();
            for (SiteId v : g.adj_star[u])
                if (region[v] && !seen[v] && c.spins[v] > 0) {
                    seen[v] = 1;
                    q.push(v);
                }
        }
        // rightmost abscissa on the boundary line of the half-plane above n
        std::optional<Frac> best;
        for (SiteId s : w.interior_sites) {
            if (!seen[s] || !(g.sites[s].y >= Frac(n))) continue;
            bool on_line = false;
            for (SiteId v : g.adj_plain[s])
                if (g.sites[v].y < Frac(n)) on_line = true;
            if (!on_line) continue;
            if (!best || g.sites[s].x > *best) best = g.sites[s].x;
        }
        prof.a[std::size_t(n - n_lo)] = best;
    }
    return prof;
}

// ---------------------------------------------------------------------------
// duplicated system, butterflies, shifts

bool rim_anchored_crossing(const Configuration& c, int sign, const Rect& core,
                           const Rect& search) {
    const LatticeGraph& g = *c.graph;
    std::vector<char> annulus(g.n_sites(), 0), seen(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        annulus[s] = search.contains(g.sites[s]) && !core.contains(g.sites[s]);
    std::queue<SiteId> q;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        if (!annulus[s] || c.spins[s] != sign) continue;
        for (SiteId v : g.adj_star[s])
            if (core.contains(g.sites[v])) {
                seen[s] = 1;
                q.push(s);
                break;
            }
    }
    while (!q.empty()) {
        SiteId u = q.front();
        q.pop();
        for (SiteId v : g.adj_star[u]) {
            if (!search.contains(g.sites[v])) return true;
            if (annulus[v] && !seen[v] && c.spins[v] == sign) {
                seen[v] = 1;
                q.push(v);
            }
        }
    }
    return false;
}

Configuration leq_indicator(const Configuration& a, const Configuration& b) {
    if (a.graph != b.graph || a.window != b.window)
        throw Error("duplicated-system analysis needs a common window and lattice");
    Configuration xi(*a.graph, *a.window, -1);
    for (std::size_t i = 0; i < xi.spins.size(); ++i)
        xi.spins[i] = a.spins[i] <= b.spins[i] ? 1 : -1;
    return xi;
}

std::optional<Circuit> leq_star_analysis(const Configuration& a, const Configuration& b,
                                         const Rect& core, const Rect& search) {
    Configuration xi = leq_indicator(a, b);
    return find_surrounding_circuit(xi, +1, Adjacency::star, core, search);
}

bool butterfly_proxy(const Configuration& c, Orientation orient, int sign, std::int64_t level) {
    const LatticeGraph& g = *c.graph;
    const Window& w = *c.window;
    // interior bounding box for the far-edge test
    Frac xlo, xhi, ylo, yhi;
    bool first = true;
    for (SiteId s : w.interior_sites) {
        const Point& p = g.sites[s];
        if (first) {
            xlo = xhi = p.x;
            ylo = yhi = p.y;
            first = false;
        } else {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
    }
    Side sides[2] = {orient == Orientation::horizontal ? Side::up : Side::right,
                     orient == Orientation::horizontal ? Side::down : Side::left};
    for (Side side : sides) {
        std::vector<char> region(g.n_sites(), 0);
        for (SiteId s : w.interior_sites)
            if (in_half_plane(g.sites[s], side, level)) region[s] = 1;
        std::vector<SiteId> anchors, far;
        for (SiteId s : w.interior_sites) {
            if (!region[s]) continue;
            for (SiteId v : g.adj_plain[s])
                if (!in_half_plane(g.sites[v], side, level)) {
                    anchors.push_back(s);
                    break;
                }
            for (SiteId v : g.adj_star[s]) {
                if (w.interior[v]) continue;
                const Point& q = g.sites[v];
                bool beyond = side == Side::up ? q.y > yhi
                              : side == Side::down ? q.y < ylo
                              : side == Side::right ? q.x > xhi
                                                    : q.x < xlo;
                if (beyond) {
                    far.push_back(s);
                    break;
                }
            }
        }
        auto labeling = label_clusters_region(g, c.spins, sign, Adjacency::star, region);
        if (!connects(labeling, anchors, far).connected) return false;
    }
    return true;
}

Configuration shift_configuration(const Configuration& src, const Window& target, std::int64_t dx,
                                  std::int64_t dy) {
    const LatticeGraph& g = *src.graph;
    Configuration out(g, target, -1);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        auto from = g.find(Point(g.sites[s].x - Frac(dx), g.sites[s].y - Frac(dy)));
        if (from) out.spins[s] = src.spins[*from];
        else if (target.interior[s] || target.ring[s])
            throw Error("shift_configuration: source does not cover the target window");
    }
    return out;
}

// ---------------------------------------------------------------------------
// theta

WilsonInterval wilson_interval(double successes, double n, double z) {
    if (n <= 0) return {0.0, 1.0};
    double p = successes / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

SiteId nearest_site(const LatticeGraph& g, const Point& p) {
    SiteId best = 0;
    Frac bd(-1);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        Frac d = (g.sites[s].x - p.x) * (g.sites[s].x - p.x) +
                 (g.sites[s].y - p.y) * (g.sites[s].y - p.y);
        if (bd.sign() < 0 || d < bd) {
            bd = d;
            best = s;
        }
    }
    return best;
}

ThetaEstimate estimate_theta(const SpinModel& m, const LatticeGraph& g, std::int64_t L,
                             std::size_t n_samples, std::uint64_t seed, int threads,
                             const SampleMode& mode) {
    if (g.window_radius < L + 2)
        throw Error("estimate_theta: materialized lattice too small for the requested window");
    Window w = Window::rect(g, Rect::box(L));
    HeatbathTables tables(m, g);
    auto batch = sample_batch(m, tables, g, w, BoundaryCondition::plus(), n_samples, mode, seed,
                              threads);
    SiteId origin = nearest_site(g, Point(Frac(0), Frac(0)));
    std::size_t hits = 0;
    for (const auto& c : batch) {
        if (c.spins[origin] <= 0) continue;
        // star cluster of the origin reaching outside the window
        std::vector<char> seen(g.n_sites(), 0);
        std::queue<SiteId> q;
        q.push(origin);
        seen[origin] = 1;
        bool rim = false;
        while (!q.empty() && !rim) {
            SiteId u = q.front();
            q.pop();
            for (SiteId v : g.adj_star[u]) {
                if (!w.interior[v]) { rim = true; break; }
                if (!seen[v] && c.spins[v] > 0) {
                    seen[v] = 1;
                    q.push(v);
                }
            }
        }
        hits += rim;
    }
    ThetaEstimate est;
    est.theta = n_samples ? double(hits) / double(n_samples) : 0.0;
    est.ci = wilson_interval(double(hits), double(n_samples));
    est.L = L;
    est.n_samples = n_samples;
    est.mode = mode.label();
    return est;
}

}  // namespace perc
