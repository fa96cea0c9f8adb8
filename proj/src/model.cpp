#include "perc/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace perc {

std::pair<EdgeKey, bool> edge_orbit_key(const Point& x, const Point& y) {
    auto reduce_first = [](const Point& a, const Point& b) {
        Point ra(a.x.mod(2), a.y.mod(2));
        Point shift = ra - a;
        return EdgeKey{ra, b + shift};
    };
    EdgeKey fwd = reduce_first(x, y);
    EdgeKey rev = reduce_first(y, x);
    if (fwd < rev || fwd == rev) return {fwd, false};
    return {rev, true};
}

Point site_orbit_key(const Point& x) { return Point(x.x.mod(2), x.y.mod(2)); }

ExtReal SpinModel::pair_energy(const Point& x, const Point& y, int a, int b) const {
    auto [key, swapped] = edge_orbit_key(x, y);
    if (swapped) std::swap(a, b);
    auto it = pair_overrides.find(key);
    if (it == pair_overrides.end()) {
        if (!use_default) throw Error("model '" + name + "' has no table for edge orbit " + key.str());
        return default_pair.at(a, b);
    }
    return it->second.at(a, b);
}

double SpinModel::site_energy(const Point& x, int a) const {
    auto it = site_overrides.find(site_orbit_key(x));
    if (it == site_overrides.end()) {
        if (!use_default) throw Error("model '" + name + "' has no table for site orbit " + x.str());
        return default_site.at(a);
    }
    return it->second.at(a);
}

int SpinModel::eps(const Point& x) const {
    auto it = eps_by_key.find(site_orbit_key(x));
    if (it == eps_by_key.end()) throw Error("model has no sublattice sign at " + x.str());
    return it->second;
}

// ---------------------------------------------------------------------------
// presets

SpinModel preset_ferro(double beta, bool force) {
    if (beta <= 0 && !force) throw Error("preset_ferro: beta must be positive");
    SpinModel m;
    m.name = "ferro";
    m.beta = beta;
    for (int a : {-1, 1})
        for (int b : {-1, 1}) m.default_pair.set(a, b, ExtReal(-beta * a * b));
    return m;
}

namespace {

// eps as a function of the translation orbit; fails if parity is not
// constant on orbits
std::map<Point, int> eps_table(const LatticeGraph& g) {
    if (!g.bipartite) throw Error("lattice is not bipartite");
    std::map<Point, int> eps;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        Point key = g.site_key(s);
        auto [it, fresh] = eps.insert({key, g.parity[s]});
        if (!fresh && it->second != g.parity[s])
            throw Error("sublattice parity is not constant on translation orbits");
    }
    return eps;
}

// every edge orbit key present in the window
std::set<EdgeKey> edge_keys(const LatticeGraph& g) {
    std::set<EdgeKey> keys;
    for (SiteId u = 0; u < SiteId(g.n_sites()); ++u)
        for (SiteId v : g.adj_plain[u]) {
            if (v < u) continue;
            keys.insert(edge_orbit_key(g.sites[u], g.sites[v]).first);
        }
    return keys;
}

}  // namespace

SpinModel preset_staggered(const LatticeGraph& g, double beta, double h) {
    if (beta <= 0) throw Error("preset_staggered: beta must be positive");
    SpinModel m = preset_ferro(beta);
    m.name = "staggered";
    m.h = h;
    m.eps_by_key = eps_table(g);
    m.has_eps = true;
    for (const auto& [key, e] : m.eps_by_key) {
        SiteTable t;
        for (int a : {-1, 1}) t.set(a, -h * e * a);
        m.site_overrides[key] = t;
    }
    return m;
}

SpinModel preset_hardcore(double lambda, bool flipped, const LatticeGraph* g) {
    if (lambda <= 0) throw Error("preset_hardcore: lambda must be positive");
    SpinModel m;
    m.name = flipped ? "hardcore_flipped" : "hardcore";
    m.lambda = lambda;
    for (int a : {-1, 1})
        for (int b : {-1, 1})
            m.default_pair.set(a, b, (a == 1 && b == 1) ? ExtReal::infinity() : ExtReal(0.0));
    m.default_site.set(1, -std::log(lambda));
    m.default_site.set(-1, 0.0);
    if (!flipped) return m;
    if (!g) throw Error("preset_hardcore: flipped form needs a bipartite lattice");
    return conjugate_by_sublattice_flip(m, *g);
}

SpinModel conjugate_by_sublattice_flip(const SpinModel& m, const LatticeGraph& g) {
    SpinModel out = m;
    out.eps_by_key = eps_table(g);
    out.has_eps = true;
    out.use_default = false;
    out.pair_overrides.clear();
    out.site_overrides.clear();
    auto eps_of = [&](const Point& p) { return out.eps_by_key.at(site_orbit_key(p)); };

    for (const EdgeKey& key : edge_keys(g)) {
        int ex = eps_of(key.p), ey = eps_of(key.q);
        PairTable t;
        for (int a : {-1, 1})
            for (int b : {-1, 1}) t.set(a, b, m.pair_energy(key.p, key.q, ex * a, ey * b));
        out.pair_overrides[key] = t;
    }
    std::set<Point> skeys;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) skeys.insert(g.site_key(s));
    for (const Point& key : skeys) {
        int e = eps_of(key);
        SiteTable t;
        for (int a : {-1, 1}) t.set(a, m.site_energy(key, e * a));
        out.site_overrides[key] = t;
    }
    if (m.name == "hardcore") out.name = "hardcore_flipped";
    else if (m.name == "hardcore_flipped") out.name = "hardcore";
    else out.name = m.name + "_flipped";
    return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

std::string ext_str(const ExtReal& e) {
    if (e.inf) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << e.value;
    return os.str();
}

ExtReal parse_ext(const std::string& s) {
    if (s == "inf") return ExtReal::infinity();
    return ExtReal(std::stod(s));
}

}  // namespace

std::string SpinModel::serialize() const {
    std::ostringstream os;
    os << "name " << name << "\n";
    os.precision(17);
    os << "params " << beta << " " << h << " " << lambda << " " << int(use_default) << "\n";
    auto put_pair = [&](const std::string& head, const PairTable& t) {
        os << head;
        for (int a : {1, -1})
            for (int b : {1, -1}) os << " " << ext_str(t.at(a, b));
        os << "\n";
    };
    auto put_site = [&](const std::string& head, const SiteTable& t) {
        os << head << " " << t.at(1) << " " << t.at(-1) << "\n";
    };
    put_pair("default_pair", default_pair);
    put_site("default_site", default_site);
    for (const auto& [k, t] : pair_overrides)
        put_pair("pair " + k.p.x.str() + " " + k.p.y.str() + " " + k.q.x.str() + " " + k.q.y.str(), t);
    for (const auto& [k, t] : site_overrides)
        put_site("site " + k.x.str() + " " + k.y.str(), t);
    for (const auto& [k, e] : eps_by_key)
        os << "eps " << k.x.str() << " " << k.y.str() << " " << e << "\n";
    return os.str();
}

SpinModel SpinModel::parse(const std::string& text) {
    SpinModel m;
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
                ls >> m.name;
            } else if (kw == "params") {
                int ud = 1;
                ls >> m.beta >> m.h >> m.lambda >> ud;
                m.use_default = ud != 0;
            } else if (kw == "default_pair" || kw == "pair") {
                EdgeKey key;
                if (kw == "pair") {
                    std::string a, b, c, d;
                    if (!(ls >> a >> b >> c >> d)) throw Error("pair needs four coordinates");
                    key = {Point(parse_frac(a), parse_frac(b)), Point(parse_frac(c), parse_frac(d))};
                }
                PairTable t;
                std::string s;
                for (int a : {1, -1})
                    for (int b : {1, -1}) {
                        if (!(ls >> s)) throw Error("pair table needs four entries");
                        t.set(a, b, parse_ext(s));
                    }
                if (kw == "pair") m.pair_overrides[key] = t;
                else m.default_pair = t;
            } else if (kw == "default_site" || kw == "site") {
                Point key;
                if (kw == "site") {
                    std::string a, b;
                    if (!(ls >> a >> b)) throw Error("site needs two coordinates");
                    key = Point(parse_frac(a), parse_frac(b));
                }
                double vp, vm;
                if (!(ls >> vp >> vm)) throw Error("site table needs two finite entries");
                SiteTable t;
                t.set(1, vp);
                t.set(-1, vm);
                if (kw == "site") m.site_overrides[key] = t;
                else m.default_site = t;
            } else if (kw == "eps") {
                std::string a, b;
                int e;
                if (!(ls >> a >> b >> e)) throw Error("eps needs key and sign");
                m.eps_by_key[Point(parse_frac(a), parse_frac(b))] = e;
                m.has_eps = true;
            } else {
                throw Error("unknown keyword '" + kw + "'");
            }
        } catch (const std::exception& e) {
            throw Error("model line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return m;
}

SpinModel SpinModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

// ---------------------------------------------------------------------------
// validation

namespace {

// extended difference U(1,b) - U(-1,b): -1 below all finite values, +1 above
struct ExtDiff {
    int cls;  // -1: -inf, 0: finite, +1: +inf
    double value;
};

ExtDiff ext_diff(const ExtReal& up, const ExtReal& dn, const std::string& where) {
    if (up.inf && dn.inf)
        throw Error("ill-formed infinity pattern in " + where +
                    ": both U(1,b) and U(-1,b) are infinite");
    if (up.inf) return {1, 0.0};
    if (dn.inf) return {-1, 0.0};
    return {0, up.value - dn.value};
}

bool ext_diff_ge(const ExtDiff& a, const ExtDiff& b) {
    if (a.cls != b.cls) return a.cls > b.cls;
    if (a.cls != 0) return true;
    return a.value >= b.value - 1e-12;
}

}  // namespace

ValidationResult validate_H1(const SpinModel& m) {
    auto check = [&](const PairTable& t, const std::string& label) -> ValidationResult {
        ExtDiff d_minus = ext_diff(t.at(1, -1), t.at(-1, -1), label);
        ExtDiff d_plus = ext_diff(t.at(1, 1), t.at(-1, 1), label);
        if (!ext_diff_ge(d_minus, d_plus))
            return {false, label + ": U(1,.)-U(-1,.) increases from b=-1 to b=+1"};
        return {true, ""};
    };
    if (m.use_default) {
        ValidationResult r = check(m.default_pair, "default pair orbit");
        if (!r.pass) return r;
    }
    ValidationResult r{true, ""};
    for (const auto& [k, t] : m.pair_overrides) {
        r = check(t, "edge orbit " + k.str());
        if (!r.pass) return r;
    }
    return {true, ""};
}

ValidationResult validate_H2(const SpinModel& m, const LatticeGraph& g) {
    std::vector<Symmetry> gens = {Symmetry::reflection_hor(0), Symmetry::reflection_vert(0),
                                  Symmetry::reflection_hor(1), Symmetry::reflection_vert(1)};
    const char* names[] = {"R_hor(0)", "R_vert(0)", "R_hor(1)", "R_vert(1)"};
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const Symmetry& R = gens[gi];
        for (SiteId u = 0; u < SiteId(g.n_sites()); ++u) {
            Point ru = R.map_point(g.sites[u]);
            for (int a : {-1, 1}) {
                if (std::fabs(m.site_energy(g.sites[u], a) - m.site_energy(ru, -a)) > 1e-12)
                    return {false, std::string("V at ") + g.sites[u].str() + " under " + names[gi]};
            }
            for (SiteId v : g.adj_plain[u]) {
                if (v < u) continue;
                Point rv = R.map_point(g.sites[v]);
                for (int a : {-1, 1})
                    for (int b : {-1, 1}) {
                        ExtReal lhs = m.pair_energy(g.sites[u], g.sites[v], a, b);
                        ExtReal rhs = m.pair_energy(ru, rv, -a, -b);
                        if (!lhs.close(rhs))
                            return {false, "U on edge " + g.sites[u].str() + "-" + g.sites[v].str() +
                                               " under " + names[gi]};
                    }
            }
        }
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// conditionals

double conditional_plus_probability(const SpinModel& m, const LatticeGraph& g, SiteId x,
                                    const std::vector<signed char>& spins) {
    const Point& px = g.sites[x];
    double expo[2];
    bool zero[2];
    for (int ia = 0; ia < 2; ++ia) {
        int a = ia == 0 ? -1 : 1;
        ExtReal e(m.site_energy(px, a));
        for (SiteId y : g.adj_plain[x])
            e = e + m.pair_energy(px, g.sites[y], a, spins[y]);
        zero[ia] = e.inf;
        expo[ia] = e.inf ? 0.0 : -e.value;
    }
    if (zero[0] && zero[1])
        throw Error("inadmissible context: both spin values have zero weight at " + px.str());
    if (zero[0]) return 1.0;
    if (zero[1]) return 0.0;
    double mx = std::max(expo[0], expo[1]);
    double wm = std::exp(expo[0] - mx), wp = std::exp(expo[1] - mx);
    return wp / (wp + wm);
}

double min_conditional(const SpinModel& m, const LatticeGraph& g) {
    // one representative per site orbit, taken deep enough that the
    // neighborhood is complete
    std::map<Point, SiteId> reps;
    Frac lo(-(g.window_radius - 2)), hi(g.window_radius - 2);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        const Point& p = g.sites[s];
        if (lo <= p.x && p.x <= hi && lo <= p.y && p.y <= hi) {
            auto [it, fresh] = reps.insert({g.site_key(s), s});
            if (!fresh && g.adj_plain[s].size() > g.adj_plain[it->second].size())
                it->second = s;
        }
    }
    if (reps.empty()) throw Error("window too small for min_conditional");

    double best = 1.0;
    std::vector<signed char> spins(g.n_sites(), -1);
    for (const auto& [key, x] : reps) {
        (void)key;
        const auto& nb = g.adj_plain[x];
        std::size_t deg = nb.size();
        for (std::size_t mask = 0; mask < (std::size_t(1) << deg); ++mask) {
            for (std::size_t i = 0; i < deg; ++i)
                spins[nb[i]] = (mask >> i) & 1 ? 1 : -1;
            // the neighbor assignment itself must be extendable: any two
            // plain-adjacent neighbors must not be an excluded pair
            bool admissible = true;
            for (std::size_t i = 0; i < deg && admissible; ++i)
                for (std::size_t j = i + 1; j < deg && admissible; ++j)
                    if (g.plain_adjacent(nb[i], nb[j]) &&
                        m.pair_energy(g.sites[nb[i]], g.sites[nb[j]], spins[nb[i]], spins[nb[j]]).inf)
                        admissible = false;
            if (!admissible) continue;
            double p;
            try {
                p = conditional_plus_probability(m, g, x, spins);
            } catch (const Error&) {
                continue;  // no admissible outcome in this context
            }
            if (p > 0.0) best = std::min(best, p);
            if (p < 1.0) best = std::min(best, 1.0 - p);
        }
        for (SiteId y : nb) spins[y] = -1;
    }
    return best;
}

}  // namespace perc
