#ifndef PERC_RNG_HPP
#define PERC_RNG_HPP

#include <cstdint>

namespace perc {

// Counter-based generator: every variate is a pure function of
// (seed, replica, time, site). Coupled chains and exact-sampling replays
// reread the same randomness without storing it, and replicas produce
// identical output no matter how they are scheduled.
namespace rng {

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t replica,
                         std::int64_t time, std::uint64_t site) {
    std::uint64_t h = mix(seed);
    h = mix(h ^ replica);
    h = mix(h ^ static_cast<std::uint64_t>(time));
    h = mix(h ^ site);
    return h;
}

// uniform in [0, 1)
inline double uniform(std::uint64_t seed, std::uint64_t replica,
                      std::int64_t time, std::uint64_t site) {
    return (key(seed, replica, time, site) >> 11) * 0x1.0p-53;
}

}  // namespace rng
}  // namespace perc

#endif
