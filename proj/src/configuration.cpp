#include "perc/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace perc {

Window Window::rect(const LatticeGraph& g, const Rect& r) {
    std::vector<char> mask(g.n_sites(), 0);
    for (SiteId i = 0; i < SiteId(g.n_sites()); ++i)
        if (r.contains(g.sites[i])) mask[i] = 1;
    return Window::mask(g, mask);
}

Window Window::mask(const LatticeGraph& g, const std::vector<char>& interior_mask) {
    Window w;
    w.interior = interior_mask;
    w.interior.resize(g.n_sites(), 0);
    w.ring.assign(g.n_sites(), 0);
    for (SiteId i = 0; i < SiteId(g.n_sites()); ++i)
        if (w.interior[i]) w.interior_sites.push_back(i);  // site ids are raster ordered
    if (w.interior_sites.empty()) throw Error("window has no interior sites");
    for (SiteId i : w.interior_sites)
        for (SiteId v : g.adj_plain[i])
            if (!w.interior[v] && !w.ring[v]) {
                w.ring[v] = 1;
                w.ring_sites.push_back(v);
            }
    std::sort(w.ring_sites.begin(), w.ring_sites.end());
    return w;
}

Configuration sublattice_flip(const Configuration& c) {
    const LatticeGraph& g = *c.graph;
    if (!g.bipartite) throw Error("sublattice_flip needs a bipartite lattice");
    Configuration out = c;
    for (SiteId i = 0; i < SiteId(g.n_sites()); ++i)
        out.spins[i] = static_cast<signed char>(g.parity[i] * c.spins[i]);
    return out;
}

bool admissible(const SpinModel& m, const Configuration& c) {
    const LatticeGraph& g = *c.graph;
    const Window& w = *c.window;
    auto active = [&](SiteId s) { return w.interior[s] || w.ring[s]; };
    for (SiteId u : w.interior_sites)
        for (SiteId v : g.adj_plain[u]) {
            if (!active(v)) continue;
            if (m.pair_energy(g.sites[u], g.sites[v], c.spins[u], c.spins[v]).inf) return false;
        }
    return true;
}

ExtReal window_energy(const SpinModel& m, const Configuration& c) {
    const LatticeGraph& g = *c.graph;
    const Window& w = *c.window;
    ExtReal e(0.0);
    for (SiteId u : w.interior_sites) {
        e = e + ExtReal(m.site_energy(g.sites[u], c.spins[u]));
        for (SiteId v : g.adj_plain[u]) {
            if (w.interior[v] && v < u) continue;  // count interior edges once
            if (!w.interior[v] && !w.ring[v]) continue;
            e = e + m.pair_energy(g.sites[u], g.sites[v], c.spins[u], c.spins[v]);
        }
    }
    return e;
}

std::string to_grid_text(const Configuration& c, const std::string& bc_label) {
    const LatticeGraph& g = *c.graph;
    std::ostringstream os;
    os << "lattice=" << g.spec.name << " L=" << g.window_radius << " bc=" << bc_label << "\n";
    Frac row = g.sites[c.window->interior_sites.front()].y;
    for (SiteId s : c.window->interior_sites) {
        if (g.sites[s].y != row) {
            os << "\n";
            row = g.sites[s].y;
        }
        os << (c.spins[s] > 0 ? '+' : '-');
    }
    os << "\n";
    return os.str();
}

void from_grid_text(Configuration& c, const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    std::size_t i = 0;
    char ch;
    while (in.get(ch)) {
        if (ch != '+' && ch != '-') continue;
        if (i >= c.window->interior_sites.size()) throw Error("grid text has too many spins");
        c.spins[c.window->interior_sites[i++]] = ch == '+' ? 1 : -1;
    }
    if (i != c.window->interior_sites.size()) throw Error("grid text has too few spins");
}

std::string to_pgm(const Configuration& c, const std::vector<Point>& overlay) {
    const LatticeGraph& g = *c.graph;
    const Window& w = *c.window;
    // bounding box of the window in lattice coordinates
    Frac xlo = g.sites[w.interior_sites.front()].x, xhi = xlo;
    Frac ylo = g.sites[w.interior_sites.front()].y, yhi = ylo;
    for (SiteId s : w.interior_sites) {
        xlo = std::min(xlo, g.sites[s].x);
        xhi = std::max(xhi, g.sites[s].x);
        ylo = std::min(ylo, g.sites[s].y);
        yhi = std::max(yhi, g.sites[s].y);
    }
    // 2x upsampling so dual points land between sites
    auto px = [&](const Frac& v, const Frac& lo) {
        return std::lround(2.0 * (v - lo).to_double());
    };
    long width = px(xhi, xlo) + 1, height = px(yhi, ylo) + 1;
    std::vector<unsigned char> img(std::size_t(width) * height, 64);  // background
    auto paint = [&](const Point& p, unsigned char v) {
        long x = px(p.x, xlo), y = px(p.y, ylo);
        if (x < 0 || x >= width || y < 0 || y >= height) return;
        img[std::size_t(height - 1 - y) * width + x] = v;  // top row = max y
    };
    for (SiteId s : w.interior_sites)
        paint(g.sites[s], c.spins[s] > 0 ? 255 : 0);
    for (const Point& p : overlay) paint(p, 128);

    std::ostringstream os;
    os << "P5\n" << width << " " << height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.data()), std::streamsize(img.size()));
    return os.str();
}

}  // namespace perc
