#ifndef PERC_MODEL_HPP
#define PERC_MODEL_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "perc/lattice.hpp"

namespace perc {

// finite value or +infinity; energies only, never arithmetic on two
// infinities
struct ExtReal {
    double value = 0.0;
    bool inf = false;

    ExtReal() = default;
    ExtReal(double v) : value(v), inf(false) {}
    static ExtReal infinity() { ExtReal e; e.inf = true; return e; }

    friend ExtReal operator+(ExtReal a, ExtReal b) {
        if (a.inf || b.inf) return infinity();
        return ExtReal(a.value + b.value);
    }
    bool close(const ExtReal& o, double tol = 1e-12) const {
        if (inf || o.inf) return inf == o.inf;
        return std::fabs(value - o.value) <= tol;
    }
};

inline int spin_index(int a) { return a > 0 ? 1 : 0; }

struct PairTable {
    ExtReal u[2][2];  // [spin_index(a)][spin_index(b)]
    ExtReal at(int a, int b) const { return u[spin_index(a)][spin_index(b)]; }
    void set(int a, int b, ExtReal e) { u[spin_index(a)][spin_index(b)] = e; }
    PairTable transposed() const {
        PairTable t;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) t.u[i][j] = u[j][i];
        return t;
    }
};

struct SiteTable {
    double v[2] = {0.0, 0.0};
    double at(int a) const { return v[spin_index(a)]; }
    void set(int a, double val) { v[spin_index(a)] = val; }
};

// canonical key of an edge orbit under the period-2 translation group
struct EdgeKey {
    Point p, q;
    friend bool operator<(const EdgeKey& a, const EdgeKey& b) {
        if (a.p != b.p) return a.p < b.p;
        return a.q < b.q;
    }
    friend bool operator==(const EdgeKey& a, const EdgeKey& b) { return a.p == b.p && a.q == b.q; }
    std::string str() const { return p.str() + "-" + q.str(); }
};

// key + whether the canonical orientation swaps the endpoints
std::pair<EdgeKey, bool> edge_orbit_key(const Point& x, const Point& y);
Point site_orbit_key(const Point& x);

// Hamiltonian of pair and site potentials, with tables keyed by position
// modulo the period-2 translations; beta and friends are folded into the
// tables by the presets.
struct SpinModel {
    std::string name = "custom";
    double beta = 0.0, h = 0.0, lambda = 0.0;

    PairTable default_pair;
    SiteTable default_site;
    std::map<EdgeKey, PairTable> pair_overrides;
    std::map<Point, SiteTable> site_overrides;
    // a fully keyed model (every orbit has an override) never falls back to
    // the default tables
    bool use_default = true;

    bool has_eps = false;
    std::map<Point, int> eps_by_key;  // +1 even sublattice, -1 odd

    ExtReal pair_energy(const Point& x, const Point& y, int a, int b) const;
    double site_energy(const Point& x, int a) const;
    int eps(const Point& x) const;

    static SpinModel load(const std::string& path);
    static SpinModel parse(const std::string& text);
    std::string serialize() const;
};

// U_{x,y}(a,b) = -beta*a*b, V = 0. beta <= 0 is rejected unless force is set.
SpinModel preset_ferro(double beta, bool force = false);

// Ferromagnetic pair term with the staggered field V_x(a) = -h*eps(x)*a.
// Requires a bipartite lattice to assign the sublattice signs.
SpinModel preset_staggered(const LatticeGraph& g, double beta, double h);

// Hard-core gas: raw form excludes adjacent (+1,+1) pairs, V_x(+1) = -log(lambda).
// The flipped form conjugates by the sublattice flip and satisfies (H1)/(H2).
SpinModel preset_hardcore(double lambda, bool flipped = false,
                          const LatticeGraph* g = nullptr);

// Conjugate the model by the sublattice spin flip: U'(a,b) = U(eps(x)a, eps(y)b).
// Applying it twice gives back the original model.
SpinModel conjugate_by_sublattice_flip(const SpinModel& m, const LatticeGraph& g);

// critical inverse temperature of the square-lattice ferromagnet
inline double square_critical_beta() { return 0.5 * std::log(1.0 + std::sqrt(2.0)); }

struct ValidationResult {
    bool pass = true;
    std::string witness;
};

// (H1): U(1,.) - U(-1,.) decreasing on {-1,1} for every orbit. A difference
// with two infinities on the same side is rejected as ill-formed.
ValidationResult validate_H1(const SpinModel& m);

// (H2): U_{x,y}(a,b) = U_{Rx,Ry}(-a,-b) and V_x(a) = V_{Rx}(-a) for the
// reflection generators, checked on every edge and site of the window.
ValidationResult validate_H2(const SpinModel& m, const LatticeGraph& g);

// heat-bath conditional: p(+1) at x given the plain-neighbor spins
double conditional_plus_probability(const SpinModel& m, const LatticeGraph& g, SiteId x,
                                    const std::vector<signed char>& spins);

// Worst-case single-site conditional over admissible neighbor assignments:
// min over outcomes with positive weight.
double min_conditional(const SpinModel& m, const LatticeGraph& g);

}  // namespace perc

#endif
