#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ztis/dynamics.hpp"
#include "ztis/lattice.hpp"

namespace ztis {

/// Dual vertex (i,j) sits at (i + 1/2, j + 1/2). Its four incident dual
/// edges bisect primal bonds:
///   N: east bond of (i, j+1)    S: east bond of (i, j)
///   E: north bond of (i+1, j)   W: north bond of (i, j)
/// A dual edge is unsatisfied iff its primal bond joins opposite spins, and
/// the corner count at a vertex is
///   (#unsatisfied of {N,S}) * (#unsatisfied of {E,W})  in {0,1,2,4}.
///
/// Bond ids: east bond of site s is 2s, north bond is 2s+1. FREE geometry
/// simply never sets ids of bonds that fall off the lattice edge.
class ContourSet {
public:
    explicit ContourSet(LatticeGeometry geom);

    const LatticeGeometry& geometry() const { return geom_; }

    /// -1 when the bond does not exist (FREE boundary).
    std::int64_t east_bond(std::int32_t x, std::int32_t y) const;
    std::int64_t north_bond(std::int32_t x, std::int32_t y) const;

    bool unsat(std::int64_t bond) const {
        if (bond < 0) return false;
        return (bonds_[std::size_t(bond >> 6)] >> (bond & 63)) & 1u;
    }

    std::int64_t unsat_count() const { return unsat_count_; }
    std::int64_t total_corners() const { return total_corners_; }
    int corner_count_at(std::int32_t i, std::int32_t j) const;

    /// Dual vertices carrying all four incident edges: W*H on the torus,
    /// (W-1)*(H-1) free.
    std::int64_t num_dual_vertices() const;
    std::int64_t vertices_with_corner() const;

    /// Toggles the four bonds of the plaquette centered at site (x,y) and
    /// refreshes the corner field at the four surrounding dual vertices.
    /// This is exactly the contour effect of flipping the spin at (x,y).
    void toggle_plaquette(std::int32_t x, std::int32_t y);

    /// Exact equality of bond set, corner field, and derived counts.
    bool operator==(const ContourSet& other) const;

    friend ContourSet extract_contours(const SpinConfig& config);

private:
    void set_bond(std::int64_t bond);
    void toggle_bond(std::int64_t bond);
    void refresh_corner(std::int32_t i, std::int32_t j);
    bool dual_vertex_valid(std::int32_t i, std::int32_t j) const;
    std::int64_t vertex_index(std::int32_t i, std::int32_t j) const {
        return std::int64_t(j) * geom_.width + i;
    }

    LatticeGeometry geom_;
    std::vector<std::uint64_t> bonds_;
    std::vector<std::uint8_t> corners_;
    std::int64_t unsat_count_ = 0;
    std::int64_t total_corners_ = 0;
};

ContourSet extract_contours(const SpinConfig& config);

/// Inverse of extract_contours up to global flip: rebuilds the configuration
/// whose contour set is the given one and whose site (0,0) carries
/// reference_sign.
SpinConfig reconstruct_config(const ContourSet& contours, int reference_sign);

/// Event-by-event contour maintenance. Holds its own copy of the spins so it
/// can be driven purely by flip events; after any event sequence the held
/// ContourSet equals extract_contours of the held config exactly.
class ContourTracker : public EventSink {
public:
    explicit ContourTracker(const SpinConfig& initial);

    void on_event(const EventRecord& event) override {
        if (event.flipped) apply_flip(event.site);
    }
    void apply_flip(std::int32_t site);

    const ContourSet& contours() const { return set_; }
    const SpinConfig& config() const { return config_; }
    std::int64_t spin_sum() const { return spin_sum_; }

private:
    SpinConfig config_;
    ContourSet set_;
    std::int64_t spin_sum_;
};

/// Square observation window Q_L(center): (2L+1)^2 sites. Its dual-vertex
/// interior Q_L* holds the (2L)^2 dual vertices strictly inside. Wall
/// endpoints land on dual vertices just outside Q_L*, so validity demands a
/// one-site margin: 2L+3 <= min(width, height) on the torus, and the window
/// plus margin inside the boundary for FREE.
struct Window {
    Site center;
    int L = 1;
};

bool window_valid(const LatticeGeometry& geom, const Window& window);

/// Site at center-relative offset (dx, dy), |dx|,|dy| <= L.
Site window_site(const LatticeGeometry& geom, const Window& window, int dx, int dy);

/// Center-relative dual coordinates: (i, j) names the dual vertex at
/// (center.x + i + 1/2, center.y + j + 1/2). Q_L* is i, j in [-L, L-1].
struct DualCoord {
    int i = 0;
    int j = 0;
    friend bool operator==(const DualCoord&, const DualCoord&) = default;
};

struct WallRect {
    int i_min = 0, i_max = 0, j_min = 0, j_max = 0;
    bool intersects(const WallRect& o) const {
        return i_min <= o.i_max && o.i_min <= i_max && j_min <= o.j_max && o.j_min <= j_max;
    }
};

enum class WallKind { FLAT_H, FLAT_V, MONO_NE, MONO_SE, NON_MONOTONIC };
const char* to_string(WallKind kind);

/// Maximal edge-disjoint trace of unsatisfied dual edges. Open walls run
/// between two dual vertices just outside Q_L*; closed walls are loops.
/// direction_changes counts perpendicular turns along the path (cyclically
/// for closed walls); the spanning rectangle is the axis-aligned rectangle
/// on the endpoints (whole-path bounding box for closed walls).
struct DomainWall {
    std::vector<DualCoord> path;
    bool closed = false;
    bool winding = false;
    WallKind kind = WallKind::NON_MONOTONIC;
    int direction_changes = 0;
    WallRect rect{};
};

/// True iff some directed version of the wall uses only {N,E} or only {S,E}
/// moves. Closed walls are never monotonic. Expects unit steps in the path.
bool is_monotonic(const DomainWall& wall);

/// Partitions the in-window unsatisfied edges into walls. At degree-4 dual
/// vertices edges pair straight through (N-S with N-S, E-W with E-W), which
/// keeps a cross decomposed as one flat horizontal plus one flat vertical
/// wall. Paths use center-relative dual coordinates.
std::vector<DomainWall> decompose_walls(const ContourSet& contours, const Window& window);
std::vector<DomainWall> decompose_walls(const SpinConfig& config, const Window& window);

/// Whole-torus decomposition: every trace closes; walls that wrap the torus
/// carry winding = true and keep the kind their moves indicate (a flat wall
/// around the torus stays FLAT_*). Paths use absolute dual coordinates.
std::vector<DomainWall> decompose_walls_torus(const ContourSet& contours);

/// M_L: corners summed over the dual vertices of Q_L*.
int corner_count(const ContourSet& contours, const Window& window);
int corner_count(const SpinConfig& config, const Window& window);

enum class EAbsentReason {
    NON_MONOTONIC_WALL, // A: some wall is non-monotonic (loops included)
    ADJACENT_FLAT_WALLS,// B: two window-spanning flat walls one spacing apart
    OVERLAPPING_SPANS   // C: two monotonic walls with intersecting spanning
                        //    rectangles, the flat-H-plus-flat-V cross excepted
};
const char* to_string(EAbsentReason reason);

/// Tests the sufficient geometric conditions, in order A, B, C. nullopt
/// (not classified) is weaker than "recurrent": it only means none of the
/// implemented conditions fired.
std::optional<EAbsentReason> classify_e_absent(const SpinConfig& config, const Window& window);

/// Not-classified windows must satisfy M_L <= 4(2L+1); classified windows
/// pass vacuously.
bool check_corner_bound(const SpinConfig& config, const Window& window);

int corner_bound_limit(int L);

} // namespace ztis
