#include "perc/sampler.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace perc {

bool BoundaryCondition::plus_side(const Point& p) const {
    switch (orientation) {
        case Side::up: return p.y >= Frac(level);
        case Side::down: return !(p.y >= Frac(level));
        case Side::right: return p.x >= Frac(level);
        case Side::left: return !(p.x >= Frac(level));
    }
    return false;
}

signed char BoundaryCondition::value_at(const LatticeGraph& g, SiteId s) const {
    switch (kind) {
        case Kind::all_plus: return 1;
        case Kind::all_minus: return -1;
        case Kind::custom: return custom_values[s];
        case Kind::dobrushin: return plus_side(g.sites[s]) ? 1 : -1;
    }
    return -1;
}

std::string BoundaryCondition::label() const {
    switch (kind) {
        case Kind::all_plus: return "plus";
        case Kind::all_minus: return "minus";
        case Kind::custom: return "custom";
        case Kind::dobrushin:
            return std::string("dobrushin_") + side_name(orientation) + "_" + std::to_string(level);
    }
    return "?";
}

BoundaryCondition make_dobrushin_bc(const LatticeGraph& g, Side orientation, std::int64_t k) {
    bool horizontal = orientation == Side::up || orientation == Side::down;
    Frac lo(-g.window_radius), hi(g.window_radius);
    bool intersects = horizontal ? (lo <= Frac(k) && Frac(k) <= hi) : (lo <= Frac(k) && Frac(k) <= hi);
    if (!intersects) throw Error("dobrushin level line misses the window");
    BoundaryCondition bc;
    bc.kind = BoundaryCondition::Kind::dobrushin;
    bc.orientation = orientation;
    bc.level = k;
    return bc;
}

void apply_bc(Configuration& c, const BoundaryCondition& bc) {
    const LatticeGraph& g = *c.graph;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
        if (!c.window->interior[s]) c.spins[s] = bc.value_at(g, s);
}

// ---------------------------------------------------------------------------

HeatbathTables::HeatbathTables(const SpinModel& m, const LatticeGraph& g) : graph(&g) {
    offset.resize(g.n_sites());
    std::size_t total = 0;
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        offset[s] = std::uint32_t(total);
        total += std::size_t(1) << g.adj_plain[s].size();
    }
    probs.assign(total, 0.0);
    std::vector<signed char> spins(g.n_sites(), -1);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        const auto& nb = g.adj_plain[s];
        for (std::uint32_t mask = 0; mask < (1u << nb.size()); ++mask) {
            for (std::size_t i = 0; i < nb.size(); ++i)
                spins[nb[i]] = (mask >> i) & 1 ? 1 : -1;
            double p;
            try {
                p = conditional_plus_probability(m, g, s, spins);
            } catch (const Error&) {
                p = std::nan("");  // inadmissible context, must never be sampled
            }
            probs[offset[s] + mask] = p;
        }
        for (SiteId y : nb) spins[y] = -1;
    }
}

void sweep_once(std::vector<signed char>& spins, const HeatbathTables& tables, const Window& w,
                std::uint64_t seed, std::uint64_t replica, std::int64_t t) {
    const LatticeGraph& g = *tables.graph;
    for (SiteId x : w.interior_sites) {
        double p = tables.prob(x, tables.mask_at(spins, x));
        if (std::isnan(p))
            throw Error("heat-bath update hit an inadmissible context at " + g.sites[x].str());
        double u = rng::uniform(seed, replica, t, std::uint64_t(x));
        spins[x] = u < p ? 1 : -1;
    }
}

void heatbath_sweep(ChainState& s, const HeatbathTables& tables) {
    sweep_once(s.config.spins, tables, *s.config.window, s.seed, s.replica, s.sweep);
    ++s.sweep;
}

// ---------------------------------------------------------------------------

CoupledPair make_coupled(const SpinModel& m, const HeatbathTables& tables, const Window& w,
                         const BoundaryCondition& bc, std::uint64_t seed, std::uint64_t replica) {
    auto h1 = validate_H1(m);
    if (!h1.pass) throw Error("coupled dynamics needs an attractive model: " + h1.witness);
    const LatticeGraph& g = *tables.graph;
    CoupledPair p;
    p.seed = seed;
    p.replica = replica;
    p.lo.assign(g.n_sites(), 0);
    p.hi.assign(g.n_sites(), 0);
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
        signed char ring = bc.value_at(g, s);
        p.lo[s] = w.interior[s] ? -1 : ring;
        p.hi[s] = w.interior[s] ? 1 : ring;
    }
    return p;
}

namespace {

inline void coupled_step(std::vector<signed char>& lo, std::vector<signed char>& hi,
                         const HeatbathTables& tables, const Window& w, std::uint64_t seed,
                         std::uint64_t replica, std::int64_t t) {
    const LatticeGraph& g = *tables.graph;
    for (SiteId x : w.interior_sites) {
        double plo = tables.prob(x, tables.mask_at(lo, x));
        double phi = tables.prob(x, tables.mask_at(hi, x));
        if (std::isnan(plo) || std::isnan(phi))
            throw Error("heat-bath update hit an inadmissible context at " + g.sites[x].str());
        double u = rng::uniform(seed, replica, t, std::uint64_t(x));
        lo[x] = u < plo ? 1 : -1;
        hi[x] = u < phi ? 1 : -1;
        if (lo[x] > hi[x])
            throw Error("monotone coupling violated at site " + g.sites[x].str() +
                        " (this indicates an attractivity bug)");
    }
}

}  // namespace

void coupled_sweep(CoupledPair& p, const HeatbathTables& tables, const Window& w) {
    coupled_step(p.lo, p.hi, tables, w, p.seed, p.replica, p.sweep);
    ++p.sweep;
}

Configuration cftp_sample(const SpinModel& m, const HeatbathTables& tables, const LatticeGraph& g,
                          const Window& w, const BoundaryCondition& bc, std::uint64_t seed,
                          std::uint64_t replica, std::int64_t cap, CftpStats* stats) {
    auto h1 = validate_H1(m);
    if (!h1.pass) throw Error("cftp needs an attractive model: " + h1.witness);

    std::vector<signed char> lo(g.n_sites()), hi(g.n_sites());
    std::vector<signed char> ring(g.n_sites());
    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) ring[s] = bc.value_at(g, s);

    std::int64_t total = 0;
    for (std::int64_t T = 1;; T *= 2) {
        if (T > cap)
            throw Error("cftp did not coalesce within " + std::to_string(cap) +
                        " sweeps (window radius " + std::to_string(g.window_radius) + ", bc " +
                        bc.label() + ")");
        for (SiteId s = 0; s < SiteId(g.n_sites()); ++s) {
            lo[s] = w.interior[s] ? -1 : ring[s];
            hi[s] = w.interior[s] ? 1 : ring[s];
        }
        for (std::int64_t t = -T; t < 0; ++t) {
            coupled_step(lo, hi, tables, w, seed, replica, t);
            ++total;
        }
        bool coalesced = true;
        for (SiteId s : w.interior_sites)
            if (lo[s] != hi[s]) { coalesced = false; break; }
        if (coalesced) {
            if (stats) {
                stats->epoch = T;
                stats->total_sweeps = total;
            }
            Configuration out(g, w, -1);
            out.spins = lo;
            return out;
        }
    }
}

std::string SampleMode::label() const {
    if (kind == Kind::exact) return "exact";
    return "sweeps_" + std::to_string(burnin);
}

std::vector<Configuration> sample_batch(const SpinModel& m, const HeatbathTables& tables,
                                        const LatticeGraph& g, const Window& w,
                                        const BoundaryCondition& bc, std::size_t n_samples,
                                        const SampleMode& mode, std::uint64_t seed, int threads) {
    std::vector<Configuration> out(n_samples);
    if (n_samples == 0) return out;
    if (mode.kind == SampleMode::Kind::exact) {
        auto h1 = validate_H1(m);
        if (!h1.pass) throw Error("cftp needs an attractive model: " + h1.witness);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_samples || failed.load()) break;
            try {
                if (mode.kind == SampleMode::Kind::exact) {
                    out[i] = cftp_sample(m, tables, g, w, bc, seed, i, mode.cap);
                } else {
                    Configuration c(g, w, 1);
                    for (SiteId s = 0; s < SiteId(g.n_sites()); ++s)
                        c.spins[s] = bc.value_at(g, s);
                    for (std::int64_t t = 0; t < mode.burnin; ++t)
                        sweep_once(c.spins, tables, w, seed, i, t);
                    out[i] = std::move(c);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_msg = e.what();
                failed.store(true);
                break;
            }
        }
    };

    int n_threads = std::max(1, threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw Error("sample_batch: " + error_msg);
    return out;
}

}  // namespace perc
