#pragma once

// Configuration builders and brute-force oracles shared across the test suite.
// Oracles deliberately avoid the library's incremental data structures: they
// recount from raw spins so they can certify the fast paths.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ztis/contours.hpp"
#include "ztis/lattice.hpp"

namespace ztis::testing {

/// rows[y] is lattice row y; '+' = +1, anything else = -1.
inline SpinConfig config_from_rows(const std::vector<std::string>& rows,
                                   Boundary boundary = Boundary::TORUS) {
    const int height = int(rows.size());
    const int width = int(rows.front().size());
    const LatticeGeometry geom(width, height, boundary);
    SpinConfig config(geom, -1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            config.set_spin(Site{x, y}, rows[std::size_t(y)][std::size_t(x)] == '+' ? +1 : -1);
    return config;
}

inline SpinConfig constant_config(const LatticeGeometry& geom, int sign) {
    return SpinConfig(geom, sign);
}

inline SpinConfig checkerboard(const LatticeGeometry& geom) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, (x + y) % 2 == 0 ? +1 : -1);
    return config;
}

/// One sign per lattice row.
inline SpinConfig rows_signed(const LatticeGeometry& geom, const std::vector<int>& row_signs) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, row_signs[std::size_t(y)]);
    return config;
}

/// Plus rows y0 .. y0 + width - 1 in a minus sea.
inline SpinConfig stripe_h(const LatticeGeometry& geom, int y0, int width) {
    std::vector<int> signs(std::size_t(geom.height), -1);
    for (int k = 0; k < width; ++k) signs[std::size_t(y0 + k)] = +1;
    return rows_signed(geom, signs);
}

/// Four constant quadrants around (cx, cy); the contour is one full
/// horizontal plus one full vertical flat wall crossing at the dual vertex
/// (cx - 1/2, cy - 1/2).
inline SpinConfig quadrants(const LatticeGeometry& geom, int cx, int cy) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, (x >= cx) == (y >= cy) ? +1 : -1);
    return config;
}

/// Single minus site in a plus sea.
inline SpinConfig lone_minus(const LatticeGeometry& geom, Site s) {
    SpinConfig config(geom, +1);
    config.set_spin(s, -1);
    return config;
}

/// Diamond |dx| + |dy| <= k of plus spins centered at (cx, cy) in a minus
/// sea: four maximal monotonic wall segments, one per quadrant.
inline SpinConfig diamond(const LatticeGeometry& geom, int cx, int cy, int k) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            if (std::abs(x - cx) + std::abs(y - cy) <= k) config.set_spin(Site{x, y}, +1);
    return config;
}

/// Diagonal staircase interface: spin +1 iff y >= x + shift. Use FREE
/// boundaries (the torus would need a compensating step at the wrap).
inline SpinConfig staircase(const LatticeGeometry& geom, int shift) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, y >= x + shift ? +1 : -1);
    return config;
}

/// Horizontal interface at height y0 with a single unit step up at x = x0:
/// spin +1 iff y < y0 + (x >= x0). On the torus the compensating step sits
/// at the x-wrap, so keep the window away from column 0.
inline SpinConfig step_wall(const LatticeGeometry& geom, int y0, int x0) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, y < y0 + (x >= x0 ? 1 : 0) ? +1 : -1);
    return config;
}

/// Unsatisfied-bond count by direct neighbor enumeration.
inline std::int64_t unsat_bonds_brute(const SpinConfig& config) {
    const LatticeGeometry& geom = config.geometry();
    std::int64_t twice = 0;
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x) {
            const Site s{x, y};
            for (const Site n : neighbors(geom, s))
                if (config.spin(s) != config.spin(n)) ++twice;
        }
    return twice / 2;
}

/// M_L by direct enumeration of perpendicular unsatisfied-edge pairs at each
/// dual vertex of Q_L*, straight from spin comparisons.
inline int corner_count_brute(const SpinConfig& config, const Window& window) {
    const LatticeGeometry& geom = config.geometry();
    const auto spin = [&](int dx, int dy) { return config.spin(window_site(geom, window, dx, dy)); };
    int total = 0;
    for (int a = -window.L; a <= window.L - 1; ++a)
        for (int b = -window.L; b <= window.L - 1; ++b) {
            const bool north = spin(a, b + 1) != spin(a + 1, b + 1);
            const bool south = spin(a, b) != spin(a + 1, b);
            const bool east = spin(a + 1, b) != spin(a + 1, b + 1);
            const bool west = spin(a, b) != spin(a, b + 1);
            for (const bool ns : {north, south})
                for (const bool ew : {east, west})
                    if (ns && ew) ++total;
        }
    return total;
}

/// P(some corner at a fixed dual vertex) under the symmetric product measure,
/// by exhaustive enumeration of the 2^8 assignments of the 3x3 neighborhood
/// around a site with the site's own spin fixed (+1; the event is invariant
/// under global flip). The dual vertex sits at site + (1/2, 1/2).
inline double corner_probability_enumeration() {
    int hits = 0;
    for (int m = 0; m < 256; ++m) {
        // neighbors in the order E, NE, N, NW, W, SW, S, SE around the site
        const auto bit = [&](int k) { return (m >> k) & 1 ? +1 : -1; };
        const int center = +1, e = bit(0), ne = bit(1), n = bit(2);
        const bool north = n != ne;      // bond (0,1)-(1,1)
        const bool south = center != e;  // bond (0,0)-(1,0)
        const bool east = e != ne;       // bond (1,0)-(1,1)
        const bool west = center != n;   // bond (0,0)-(0,1)
        const int ns = int(north) + int(south), ew = int(east) + int(west);
        if (ns * ew > 0) ++hits;
    }
    return double(hits) / 256.0;
}

} // namespace ztis::testing
