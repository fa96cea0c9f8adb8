#ifndef PERC_GEOMETRY_HPP
#define PERC_GEOMETRY_HPP

#include <map>
#include <optional>

#include "perc/sampler.hpp"

namespace perc {

enum class Adjacency { plain, star };

inline const char* adjacency_name(Adjacency a) { return a == Adjacency::plain ? "plain" : "star"; }

// ---------------------------------------------------------------------------
// clusters

struct ClusterLabeling {
    const LatticeGraph* graph = nullptr;
    int sign = 1;
    Adjacency adjacency = Adjacency::plain;
    std::vector<char> region;
    std::vector<SiteId> label;             // canonical id (smallest member), -1 outside
    std::map<SiteId, std::size_t> sizes;   // canonical id -> cluster size
};

// union-find labeling of sign-s sites inside the window interior
ClusterLabeling label_clusters(const Configuration& c, int sign, Adjacency adj);
// same, over an explicit region mask
ClusterLabeling label_clusters_region(const LatticeGraph& g, const std::vector<signed char>& spins,
                                      int sign, Adjacency adj, const std::vector<char>& region);

struct ConnectReport {
    bool connected = false;
    SiteId witness = -1;  // canonical cluster id
};
ConnectReport connects(const ClusterLabeling& l, const std::vector<SiteId>& A,
                       const std::vector<SiteId>& B);

// does the cluster of `from` leave the region (some member has a neighbor,
// under the labeling's adjacency, outside the region)?
bool cluster_touches_rim(const ClusterLabeling& l, SiteId from);

// ---------------------------------------------------------------------------
// circuits and semicircuits

struct Circuit {
    std::vector<SiteId> sites;  // cyclic order, consecutive adjacent, last ~ first
    int sign = 1;
    Adjacency adjacency = Adjacency::star;
};

struct Semicircuit {
    std::vector<SiteId> sites;  // path order, endpoints on the boundary line
    int sign = 1;
    Adjacency adjacency = Adjacency::star;
    Side side = Side::up;
    std::int64_t level = 0;
};

// exact even-odd test of a point against the polygon through `cycle`
bool point_enclosed(const std::vector<Point>& cycle, const Point& p);

// Outermost sign-s circuit (under circuit_adj) inside `search` surrounding
// `core`; exists iff no opposite-sign path under the conjugate adjacency
// joins the core boundary to the search rim.
std::optional<Circuit> find_surrounding_circuit(const Configuration& c, int sign,
                                                Adjacency circuit_adj, const Rect& core,
                                                const Rect& search);

// Sign-s semicircuit in the half-plane surrounding `core`, endpoints on the
// boundary line; search window is symmetrized about the line internally.
std::optional<Semicircuit> find_semicircuit(const Configuration& c, int sign, Adjacency adj,
                                            const HalfPlaneRegion& hp, const Rect& core);

// The reflection-invariant interior: sites enclosed by the closed curve
// sigma + R(sigma) under even-odd testing.
std::vector<SiteId> semicircuit_interior(const LatticeGraph& g, const std::vector<SiteId>& sigma,
                                         Side side, std::int64_t level);

// ---------------------------------------------------------------------------
// contours

struct Contour {
    bool closed = false;
    std::vector<std::pair<SiteId, SiteId>> crossed;  // disagreement edges in walk order
    std::vector<int> dual_faces;                     // visited face ids in walk order
    std::vector<SiteId> plus_face, minus_face;       // flanking quasipaths
    std::size_t dual_length() const { return crossed.size(); }
};

// Contours of the window configuration (interior plus ring), with the
// convention that at ambiguous faces the minus-star side stays connected.
std::vector<Contour> trace_contours(const Configuration& c);

// low-level tracer on raw spins: hug_sign picks which sign's arcs pair the
// crossings (+1 reproduces the convention above)
std::vector<Contour> trace_contours_raw(const LatticeGraph& g,
                                        const std::vector<signed char>& spins,
                                        const std::vector<char>& site_mask, int hug_sign);

// dual vertices of a contour as plane points (face centroids)
std::vector<Point> contour_dual_points(const LatticeGraph& g, const Contour& k);

// ordered coordinate lists as CSV (x,y per row)
std::string sites_csv(const LatticeGraph& g, const std::vector<SiteId>& path);
std::string contour_csv(const LatticeGraph& g, const Contour& k);

// number of distinct dual vertices visited by both curves
std::size_t count_crossings(const Contour& a, const Contour& b);

// ---------------------------------------------------------------------------
// interfaces

struct OpenInterface {
    std::optional<Contour> contour;  // the unique spanning open contour
    int spanning_count = 0;          // >1 means ambiguous
    int open_count = 0;
};

// the open contour attached to the boundary-condition sign change on the rim
OpenInterface open_interface(const Configuration& c);

struct InterfaceProfile {
    std::int64_t n_lo = 0, n_hi = 0;
    std::vector<std::optional<Frac>> a;  // a[n - n_lo]: rightmost abscissa on
                                         // row n of the top-anchored +* cluster
    std::optional<Frac> at(std::int64_t n) const { return a[std::size_t(n - n_lo)]; }
};

InterfaceProfile interface_profile(const Configuration& c, std::int64_t n_lo, std::int64_t n_hi);

// ---------------------------------------------------------------------------
// duplicated system and butterflies

// Indicator configuration xi(x) = +1 where a(x) <= b(x); the le-star circuit
// question reduces to find_surrounding_circuit on xi.
Configuration leq_indicator(const Configuration& a, const Configuration& b);
std::optional<Circuit> leq_star_analysis(const Configuration& a, const Configuration& b,
                                         const Rect& core, const Rect& search);

enum class Orientation { horizontal, vertical };

// both half-windows of the conjugate pair contain a sign-s star cluster
// joining the boundary line to the far window edge
bool butterfly_proxy(const Configuration& c, Orientation orient, int sign, std::int64_t level);

// sign-s star path joining the core-box neighborhood to the search rim
// inside the annulus; the exact dual of the surrounding-circuit question
bool rim_anchored_crossing(const Configuration& c, int sign, const Rect& core,
                           const Rect& search);

// pull spins from src shifted by (dx, dy): out(x) = src(x - d)
Configuration shift_configuration(const Configuration& src, const Window& target, std::int64_t dx,
                                  std::int64_t dy);

// ---------------------------------------------------------------------------
// theta

struct WilsonInterval {
    double lo = 0, hi = 1;
};
// 99% by default
WilsonInterval wilson_interval(double successes, double n, double z = 2.5758293035489004);

struct ThetaEstimate {
    double theta = 0;
    WilsonInterval ci;
    std::int64_t L = 0;
    std::size_t n_samples = 0;
    std::string mode;
};

// fraction of exact all-plus samples in which the site nearest the origin is
// star-connected to the window rim
ThetaEstimate estimate_theta(const SpinModel& m, const LatticeGraph& g, std::int64_t L,
                             std::size_t n_samples, std::uint64_t seed, int threads = 1,
                             const SampleMode& mode = SampleMode::exact());

SiteId nearest_site(const LatticeGraph& g, const Point& p);

}  // namespace perc

#endif
