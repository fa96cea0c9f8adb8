#ifndef PERC_SAMPLER_HPP
#define PERC_SAMPLER_HPP

#include <cstdint>
#include <optional>

#include "perc/configuration.hpp"
#include "perc/rng.hpp"

namespace perc {

struct BoundaryCondition {
    enum class Kind { all_plus, all_minus, dobrushin, custom };
    Kind kind = Kind::all_plus;
    // dobrushin: the named side is the +1 side of the split at `level`;
    // up/right take the closed half-plane, down/left its complement, so
    // flipping the orientation negates the configuration exactly
    Side orientation = Side::up;
    std::int64_t level = 0;
    std::vector<signed char> custom_values;  // per materialized site

    static BoundaryCondition plus() { return {Kind::all_plus, Side::up, 0, {}}; }
    static BoundaryCondition minus() { return {Kind::all_minus, Side::up, 0, {}}; }
    static BoundaryCondition custom(std::vector<signed char> values) {
        return {Kind::custom, Side::up, 0, std::move(values)};
    }

    bool plus_side(const Point& p) const;
    signed char value_at(const LatticeGraph& g, SiteId s) const;
    std::string label() const;
};

BoundaryCondition make_dobrushin_bc(const LatticeGraph& g, Side orientation, std::int64_t k);

// fix every non-interior site to its boundary value
void apply_bc(Configuration& c, const BoundaryCondition& bc);

// Precomputed heat-bath conditionals: per site, p(+1) for every assignment
// of the plain neighbors (bit i of the mask = neighbor i is +1). Inadmissible
// contexts hold NaN and trip an error if ever hit.
struct HeatbathTables {
    const LatticeGraph* graph = nullptr;
    std::vector<std::uint32_t> offset;   // per site, into probs
    std::vector<double> probs;
    HeatbathTables() = default;
    HeatbathTables(const SpinModel& m, const LatticeGraph& g);

    std::uint32_t mask_at(const std::vector<signed char>& spins, SiteId x) const {
        std::uint32_t mask = 0;
        const auto& nb = graph->adj_plain[x];
        for (std::size_t i = 0; i < nb.size(); ++i)
            if (spins[nb[i]] > 0) mask |= 1u << i;
        return mask;
    }
    double prob(SiteId x, std::uint32_t mask) const { return probs[offset[x] + mask]; }
};

struct ChainState {
    Configuration config;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::int64_t sweep = 0;  // next time index
};

// one deterministic raster sweep at absolute time t
void sweep_once(std::vector<signed char>& spins, const HeatbathTables& tables, const Window& w,
                std::uint64_t seed, std::uint64_t replica, std::int64_t t);

// spec-level sweep: advances the chain's own clock
void heatbath_sweep(ChainState& s, const HeatbathTables& tables);

struct CoupledPair {
    std::vector<signed char> lo, hi;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::int64_t sweep = 0;
};

// requires a model passing (H1); the same uniform drives both chains
CoupledPair make_coupled(const SpinModel& m, const HeatbathTables& tables, const Window& w,
                         const BoundaryCondition& bc, std::uint64_t seed, std::uint64_t replica);
void coupled_sweep(CoupledPair& p, const HeatbathTables& tables, const Window& w);

struct CftpStats {
    std::int64_t epoch = 0;        // start time of the final doubling
    std::int64_t total_sweeps = 0; // work across all doublings
};

// exact sample from the window Gibbs distribution with the given boundary
// condition, by coupling from the past with doubling start times
Configuration cftp_sample(const SpinModel& m, const HeatbathTables& tables, const LatticeGraph& g,
                          const Window& w, const BoundaryCondition& bc, std::uint64_t seed,
                          std::uint64_t replica, std::int64_t cap = std::int64_t(1) << 20,
                          CftpStats* stats = nullptr);

struct SampleMode {
    enum class Kind { exact, sweeps };
    Kind kind = Kind::exact;
    std::int64_t cap = std::int64_t(1) << 20;  // exact: no-coalescence cap
    std::int64_t burnin = 1000;                // sweeps: budget per sample
    static SampleMode exact(std::int64_t cap = std::int64_t(1) << 20) {
        return {Kind::exact, cap, 0};
    }
    static SampleMode sweeps(std::int64_t burnin) { return {Kind::sweeps, 0, burnin}; }
    std::string label() const;
};

// sample i is a pure function of (seed, i); replicas may run on threads
std::vector<Configuration> sample_batch(const SpinModel& m, const HeatbathTables& tables,
                                        const LatticeGraph& g, const Window& w,
                                        const BoundaryCondition& bc, std::size_t n_samples,
                                        const SampleMode& mode, std::uint64_t seed,
                                        int threads = 1);

}  // namespace perc

#endif
