#ifndef PERC_CONFIGURATION_HPP
#define PERC_CONFIGURATION_HPP

#include <string>
#include <vector>

#include "perc/model.hpp"

namespace perc {

// A sampling window inside a materialized lattice: the interior sites are
// free to update, the ring carries the boundary condition. Interiors may be
// arbitrary masks (semicircuit interiors), rectangles are the common case.
struct Window {
    std::vector<char> interior;          // per-site flag
    std::vector<SiteId> interior_sites;  // raster (y,x) order
    std::vector<char> ring;              // plain neighbors of the interior
    std::vector<SiteId> ring_sites;

    static Window rect(const LatticeGraph& g, const Rect& r);
    static Window mask(const LatticeGraph& g, const std::vector<char>& interior_mask);
    std::size_t size() const { return interior_sites.size(); }
};

struct Configuration {
    const LatticeGraph* graph = nullptr;
    const Window* window = nullptr;
    std::vector<signed char> spins;  // one value per materialized site

    Configuration() = default;
    Configuration(const LatticeGraph& g, const Window& w, signed char fill = -1)
        : graph(&g), window(&w), spins(g.n_sites(), fill) {}
};

// flip the spins on the odd sublattice: w'(x) = eps(x) * w(x)
Configuration sublattice_flip(const Configuration& c);

// no excluded pair on any edge inside interior+ring
bool admissible(const SpinModel& m, const Configuration& c);

// total energy of the window (interior sites and their edges, including
// edges to the ring); used by symmetry checks
ExtReal window_energy(const SpinModel& m, const Configuration& c);

// portable grid text: header with lattice name, window radius and bc label,
// then one signed digit per interior site in raster order
std::string to_grid_text(const Configuration& c, const std::string& bc_label);
void from_grid_text(Configuration& c, const std::string& text);

// P5 image of the window; optional overlay points (dual path) are drawn
// mid-gray on a 2x upsampled canvas
std::string to_pgm(const Configuration& c, const std::vector<Point>& overlay = {});

}  // namespace perc

#endif
