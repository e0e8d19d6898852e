#include "ztis/contours.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ztis {

ContourSet::ContourSet(LatticeGeometry geom) : geom_(geom) {
    const std::int64_t n = geom_.num_sites();
    bonds_.assign(std::size_t((2 * n + 63) / 64), 0);
    corners_.assign(std::size_t(n), 0);
}

std::int64_t ContourSet::east_bond(std::int32_t x, std::int32_t y) const {
    if (geom_.boundary == Boundary::TORUS) {
        x = geom_.wrap_x(x);
        y = geom_.wrap_y(y);
    } else if (x < 0 || y < 0 || x + 1 >= geom_.width || y >= geom_.height) {
        return -1;
    }
    return 2 * (std::int64_t(y) * geom_.width + x);
}

std::int64_t ContourSet::north_bond(std::int32_t x, std::int32_t y) const {
    if (geom_.boundary == Boundary::TORUS) {
        x = geom_.wrap_x(x);
        y = geom_.wrap_y(y);
    } else if (x < 0 || y < 0 || x >= geom_.width || y + 1 >= geom_.height) {
        return -1;
    }
    return 2 * (std::int64_t(y) * geom_.width + x) + 1;
}

bool ContourSet::dual_vertex_valid(std::int32_t i, std::int32_t j) const {
    if (geom_.boundary == Boundary::TORUS)
        return i >= 0 && i < geom_.width && j >= 0 && j < geom_.height;
    return i >= 0 && i + 1 < geom_.width && j >= 0 && j + 1 < geom_.height;
}

int ContourSet::corner_count_at(std::int32_t i, std::int32_t j) const {
    const int ns = int(unsat(east_bond(i, j + 1))) + int(unsat(east_bond(i, j)));
    const int ew = int(unsat(north_bond(i + 1, j))) + int(unsat(north_bond(i, j)));
    return ns * ew;
}

std::int64_t ContourSet::num_dual_vertices() const {
    if (geom_.boundary == Boundary::TORUS) return geom_.num_sites();
    return std::int64_t(geom_.width - 1) * (geom_.height - 1);
}

std::int64_t ContourSet::vertices_with_corner() const {
    std::int64_t n = 0;
    for (std::uint8_t c : corners_)
        if (c != 0) ++n;
    return n;
}

void ContourSet::set_bond(std::int64_t bond) {
    bonds_[std::size_t(bond >> 6)] |= std::uint64_t{1} << (bond & 63);
    ++unsat_count_;
}

void ContourSet::toggle_bond(std::int64_t bond) {
    if (bond < 0) return;
    const std::uint64_t mask = std::uint64_t{1} << (bond & 63);
    std::uint64_t& word = bonds_[std::size_t(bond >> 6)];
    word ^= mask;
    unsat_count_ += (word & mask) ? +1 : -1;
}

void ContourSet::refresh_corner(std::int32_t i, std::int32_t j) {
    if (geom_.boundary == Boundary::TORUS) {
        i = geom_.wrap_x(i);
        j = geom_.wrap_y(j);
    }
    if (!dual_vertex_valid(i, j)) return;
    std::uint8_t& slot = corners_[std::size_t(vertex_index(i, j))];
    const int fresh = corner_count_at(i, j);
    total_corners_ += fresh - int(slot);
    slot = std::uint8_t(fresh);
}

void ContourSet::toggle_plaquette(std::int32_t x, std::int32_t y) {
    toggle_bond(east_bond(x, y));
    toggle_bond(east_bond(x - 1, y));
    toggle_bond(north_bond(x, y));
    toggle_bond(north_bond(x, y - 1));
    refresh_corner(x, y);
    refresh_corner(x - 1, y);
    refresh_corner(x, y - 1);
    refresh_corner(x - 1, y - 1);
}

bool ContourSet::operator==(const ContourSet& other) const {
    return geom_ == other.geom_ && bonds_ == other.bonds_ && corners_ == other.corners_ &&
           unsat_count_ == other.unsat_count_ && total_corners_ == other.total_corners_;
}

ContourSet extract_contours(const SpinConfig& config) {
    const LatticeGeometry& geom = config.geometry();
    ContourSet cs(geom);
    for (std::int32_t y = 0; y < geom.height; ++y) {
        for (std::int32_t x = 0; x < geom.width; ++x) {
            const int s = config.spin(Site{x, y});
            const std::int64_t east = cs.east_bond(x, y);
            if (east >= 0 && s != config.spin(Site{geom.wrap_x(x + 1), y})) cs.set_bond(east);
            const std::int64_t north = cs.north_bond(x, y);
            if (north >= 0 && s != config.spin(Site{x, geom.wrap_y(y + 1)})) cs.set_bond(north);
        }
    }
    for (std::int32_t j = 0; j < geom.height; ++j)
        for (std::int32_t i = 0; i < geom.width; ++i)
            if (cs.dual_vertex_valid(i, j)) {
                const int c = cs.corner_count_at(i, j);
                cs.corners_[std::size_t(cs.vertex_index(i, j))] = std::uint8_t(c);
                cs.total_corners_ += c;
            }
    return cs;
}

SpinConfig reconstruct_config(const ContourSet& contours, int reference_sign) {
    if (reference_sign != 1 && reference_sign != -1)
        throw std::invalid_argument("reference sign must be +1 or -1");
    const LatticeGeometry& geom = contours.geometry();
    SpinConfig config(geom, reference_sign);
    int sign = reference_sign;
    for (std::int32_t x = 0; x + 1 < geom.width; ++x) {
        if (contours.unsat(contours.east_bond(x, 0))) sign = -sign;
        config.set_spin(Site{x + 1, 0}, sign);
    }
    for (std::int32_t x = 0; x < geom.width; ++x) {
        sign = config.spin(Site{x, 0});
        for (std::int32_t y = 0; y + 1 < geom.height; ++y) {
            if (contours.unsat(contours.north_bond(x, y))) sign = -sign;
            config.set_spin(Site{x, y + 1}, sign);
        }
    }
    return config;
}

ContourTracker::ContourTracker(const SpinConfig& initial)
    : config_(initial), set_(extract_contours(initial)) {
    spin_sum_ = 2 * config_.plus_count() - config_.size();
}

void ContourTracker::apply_flip(std::int32_t site) {
    spin_sum_ -= 2 * config_.spin(site);
    config_.flip(site);
    const Site s = config_.geometry().site(site);
    set_.toggle_plaquette(s.x, s.y);
}

bool window_valid(const LatticeGeometry& geom, const Window& window) {
    if (window.L < 1 || !geom.in_bounds(window.center)) return false;
    if (geom.boundary == Boundary::TORUS)
        return 2 * window.L + 3 <= std::min(geom.width, geom.height);
    return window.center.x - window.L >= 1 && window.center.x + window.L <= geom.width - 2 &&
           window.center.y - window.L >= 1 && window.center.y + window.L <= geom.height - 2;
}

Site window_site(const LatticeGeometry& geom, const Window& window, int dx, int dy) {
    if (geom.boundary == Boundary::TORUS)
        return {geom.wrap_x(window.center.x + dx), geom.wrap_y(window.center.y + dy)};
    return {window.center.x + dx, window.center.y + dy};
}

const char* to_string(WallKind kind) {
    switch (kind) {
        case WallKind::FLAT_H: return "FLAT_H";
        case WallKind::FLAT_V: return "FLAT_V";
        case WallKind::MONO_NE: return "MONO_NE";
        case WallKind::MONO_SE: return "MONO_SE";
        default: return "NON_MONOTONIC";
    }
}

const char* to_string(EAbsentReason reason) {
    switch (reason) {
        case EAbsentReason::NON_MONOTONIC_WALL: return "NON_MONOTONIC_WALL";
        case EAbsentReason::ADJACENT_FLAT_WALLS: return "ADJACENT_FLAT_WALLS";
        default: return "OVERLAPPING_SPANS";
    }
}

int corner_bound_limit(int L) { return 4 * (2 * L + 1); }

namespace {

// Directions reuse the lattice order +x, -x, +y, -y = E, W, N, S.
constexpr int kE = 0, kW = 1, kN = 2, kS = 3;
constexpr int opposite(int d) { return d ^ 1; }

constexpr std::array<int, 4> kDx = {1, -1, 0, 0};
constexpr std::array<int, 4> kDy = {0, 0, 1, -1};

/// Classifies a traced path from its recorded moves and fills the wall
/// metadata shared by the window and whole-torus tracers.
void finalize_wall(DomainWall& wall, const std::vector<int>& moves) {
    int changes = 0;
    for (std::size_t m = 1; m < moves.size(); ++m)
        if (moves[m] != moves[m - 1]) ++changes;
    if (wall.closed && moves.size() > 1 && moves.back() != moves.front()) ++changes;
    wall.direction_changes = changes;

    bool has[4] = {false, false, false, false};
    for (int m : moves) has[m] = true;
    if (wall.closed && !wall.winding) {
        wall.kind = WallKind::NON_MONOTONIC;
    } else if ((has[kN] && has[kS]) || (has[kE] && has[kW])) {
        wall.kind = WallKind::NON_MONOTONIC;
    } else if (!has[kN] && !has[kS]) {
        wall.kind = WallKind::FLAT_H;
    } else if (!has[kE] && !has[kW]) {
        wall.kind = WallKind::FLAT_V;
    } else if ((has[kN] && has[kE]) || (has[kS] && has[kW])) {
        wall.kind = WallKind::MONO_NE;
    } else {
        wall.kind = WallKind::MONO_SE;
    }

    if (wall.closed) {
        WallRect r{wall.path[0].i, wall.path[0].i, wall.path[0].j, wall.path[0].j};
        for (const DualCoord& p : wall.path) {
            r.i_min = std::min(r.i_min, p.i);
            r.i_max = std::max(r.i_max, p.i);
            r.j_min = std::min(r.j_min, p.j);
            r.j_max = std::max(r.j_max, p.j);
        }
        wall.rect = r;
    } else {
        const DualCoord& a = wall.path.front();
        const DualCoord& b = wall.path.back();
        wall.rect = {std::min(a.i, b.i), std::max(a.i, b.i), std::min(a.j, b.j),
                     std::max(a.j, b.j)};
    }
}

/// Window-local tracer. Dual vertices live at center-relative (a, b); Q_L*
/// is a, b in [-L, L-1] and every in-window edge has at least one endpoint
/// there. Edge status: 0 satisfied, 1 unsatisfied unused, 2 consumed.
class WindowTracer {
public:
    template <typename UnsatFn>
    WindowTracer(int L, UnsatFn unsat) : L_(L), side_(2 * L) {
        vert_.assign(std::size_t(side_) * (side_ + 1), 0);
        horiz_.assign(std::size_t(side_ + 1) * side_, 0);
        for (int a = -L_; a <= L_ - 1; ++a)
            for (int b = -L_ - 1; b <= L_ - 1; ++b)
                if (unsat(true, a, b)) vert_[vert_index(a, b)] = 1;
        for (int a = -L_ - 1; a <= L_ - 1; ++a)
            for (int b = -L_; b <= L_ - 1; ++b)
                if (unsat(false, a, b)) horiz_[horiz_index(a, b)] = 1;
    }

    std::vector<DomainWall> run() {
        std::vector<DomainWall> walls;
        // Open walls enter through the window boundary: scan edges whose far
        // endpoint lies outside Q_L*.
        for (int a = -L_; a <= L_ - 1; ++a) {
            if (vert_[vert_index(a, -L_ - 1)] == 1)
                walls.push_back(trace_open({a, -L_ - 1}, kN));
            if (vert_[vert_index(a, L_ - 1)] == 1)
                walls.push_back(trace_open({a, L_}, kS));
        }
        for (int b = -L_; b <= L_ - 1; ++b) {
            if (horiz_[horiz_index(-L_ - 1, b)] == 1)
                walls.push_back(trace_open({-L_ - 1, b}, kE));
            if (horiz_[horiz_index(L_ - 1, b)] == 1)
                walls.push_back(trace_open({L_, b}, kW));
        }
        // Remainder: closed loops fully inside Q_L*.
        for (int a = -L_; a <= L_ - 1; ++a)
            for (int b = -L_ - 1; b <= L_ - 1; ++b)
                if (vert_[vert_index(a, b)] == 1) walls.push_back(trace_closed({a, b}, kN));
        for (int a = -L_ - 1; a <= L_ - 1; ++a)
            for (int b = -L_; b <= L_ - 1; ++b)
                if (horiz_[horiz_index(a, b)] == 1) walls.push_back(trace_closed({a, b}, kE));
        return walls;
    }

private:
    std::size_t vert_index(int a, int b) const {
        return std::size_t(a + L_) * (side_ + 1) + (b + L_ + 1);
    }
    std::size_t horiz_index(int a, int b) const {
        return std::size_t(a + L_ + 1) * side_ + (b + L_);
    }

    bool in_qstar(DualCoord v) const {
        return v.i >= -L_ && v.i <= L_ - 1 && v.j >= -L_ && v.j <= L_ - 1;
    }

    /// Status slot of the edge leaving v in direction d, or nullptr when that
    /// edge is not an in-window edge.
    std::uint8_t* edge_slot(DualCoord v, int d) {
        switch (d) {
            case kN:
                if (v.i < -L_ || v.i > L_ - 1 || v.j < -L_ - 1 || v.j > L_ - 1) return nullptr;
                return &vert_[vert_index(v.i, v.j)];
            case kS:
                if (v.i < -L_ || v.i > L_ - 1 || v.j - 1 < -L_ - 1 || v.j - 1 > L_ - 1)
                    return nullptr;
                return &vert_[vert_index(v.i, v.j - 1)];
            case kE:
                if (v.i < -L_ - 1 || v.i > L_ - 1 || v.j < -L_ || v.j > L_ - 1) return nullptr;
                return &horiz_[horiz_index(v.i, v.j)];
            default:
                if (v.i - 1 < -L_ - 1 || v.i - 1 > L_ - 1 || v.j < -L_ || v.j > L_ - 1)
                    return nullptr;
                return &horiz_[horiz_index(v.i - 1, v.j)];
        }
    }

    /// Direction to continue from vertex v after arriving by a move in
    /// direction d_in: straight through at degree 4, the other unsatisfied
    /// edge at degree 2.
    int exit_direction(DualCoord v, int d_in) {
        int degree = 0;
        int other = -1;
        for (int d = 0; d < 4; ++d) {
            const std::uint8_t* e = edge_slot(v, d);
            if (e != nullptr && *e != 0) {
                ++degree;
                if (d != opposite(d_in)) other = d;
            }
        }
        if (degree == 4) return d_in;
        if (degree == 2) return other;
        throw std::logic_error("odd contour degree inside the dual window");
    }

    DomainWall trace_open(DualCoord start, int d) {
        DomainWall wall;
        std::vector<int> moves;
        DualCoord v = start;
        wall.path.push_back(v);
        for (;;) {
            std::uint8_t* e = edge_slot(v, d);
            *e = 2;
            moves.push_back(d);
            v = {v.i + kDx[std::size_t(d)], v.j + kDy[std::size_t(d)]};
            wall.path.push_back(v);
            if (!in_qstar(v)) break;
            d = exit_direction(v, d);
        }
        finalize_wall(wall, moves);
        return wall;
    }

    DomainWall trace_closed(DualCoord start, int d0) {
        DomainWall wall;
        wall.closed = true;
        std::vector<int> moves;
        std::uint8_t* const first = edge_slot(start, d0);
        DualCoord v = start;
        int d = d0;
        wall.path.push_back(v);
        for (;;) {
            std::uint8_t* e = edge_slot(v, d);
            if (e == nullptr || *e != 1) throw std::logic_error("closed-wall trace left its cycle");
            *e = 2;
            moves.push_back(d);
            v = {v.i + kDx[std::size_t(d)], v.j + kDy[std::size_t(d)]};
            d = exit_direction(v, d);
            // The pairing directs back into the starting edge exactly when
            // the cycle is complete (straight-through pairing is a fixed
            // transition system, so walks are uniquely determined).
            if (edge_slot(v, d) == first) break;
            wall.path.push_back(v);
        }
        finalize_wall(wall, moves);
        return wall;
    }

    int L_;
    int side_;
    std::vector<std::uint8_t> vert_;
    std::vector<std::uint8_t> horiz_;
};

std::vector<DomainWall> decompose_impl(const LatticeGeometry& geom, const Window& window,
                                       const ContourSet* contours, const SpinConfig* config) {
    if (!window_valid(geom, window)) throw std::invalid_argument("invalid window");
    const std::int32_t cx = window.center.x, cy = window.center.y;
    auto site_spin = [&](int dx, int dy) {
        return config->spin(window_site(geom, window, dx, dy));
    };
    // Vertical dual edge (a,b)-(a,b+1) bisects the east bond of site
    // (cx+a, cy+b+1); horizontal (a,b)-(a+1,b) bisects the north bond of
    // (cx+a+1, cy+b).
    auto unsat = [&](bool vertical, int a, int b) {
        if (contours != nullptr) {
            std::int64_t bond;
            if (vertical)
                bond = contours->east_bond(geom.wrap_x(cx + a), geom.wrap_y(cy + b + 1));
            else
                bond = contours->north_bond(geom.wrap_x(cx + a + 1), geom.wrap_y(cy + b));
            return contours->unsat(bond);
        }
        if (vertical) return site_spin(a, b + 1) != site_spin(a + 1, b + 1);
        return site_spin(a + 1, b) != site_spin(a + 1, b + 1);
    };
    WindowTracer tracer(window.L, unsat);
    return tracer.run();
}

} // namespace

std::vector<DomainWall> decompose_walls(const ContourSet& contours, const Window& window) {
    return decompose_impl(contours.geometry(), window, &contours, nullptr);
}

std::vector<DomainWall> decompose_walls(const SpinConfig& config, const Window& window) {
    return decompose_impl(config.geometry(), window, nullptr, &config);
}

bool is_monotonic(const DomainWall& wall) {
    if (wall.closed || wall.path.size() < 2) return !wall.closed && wall.path.size() >= 2;
    bool has[4] = {false, false, false, false};
    for (std::size_t k = 1; k < wall.path.size(); ++k) {
        const int di = wall.path[k].i - wall.path[k - 1].i;
        const int dj = wall.path[k].j - wall.path[k - 1].j;
        if (di == 1 && dj == 0)
            has[kE] = true;
        else if (di == -1 && dj == 0)
            has[kW] = true;
        else if (di == 0 && dj == 1)
            has[kN] = true;
        else if (di == 0 && dj == -1)
            has[kS] = true;
        else
            throw std::invalid_argument("wall path must advance by unit steps");
    }
    return !(has[kN] && has[kS]) && !(has[kE] && has[kW]);
}

std::vector<DomainWall> decompose_walls_torus(const ContourSet& contours) {
    const LatticeGeometry& geom = contours.geometry();
    if (geom.boundary != Boundary::TORUS)
        throw std::invalid_argument("whole-lattice decomposition requires TORUS");
    const std::int64_t n = geom.num_sites();
    std::vector<std::uint8_t> used(std::size_t(2 * n), 0);

    auto edge_bond = [&](std::int32_t i, std::int32_t j, int d) {
        switch (d) {
            case kN: return contours.east_bond(i, j + 1);
            case kS: return contours.east_bond(i, j);
            case kE: return contours.north_bond(i + 1, j);
            default: return contours.north_bond(i, j);
        }
    };
    auto exit_direction = [&](std::int32_t i, std::int32_t j, int d_in) {
        int degree = 0, other = -1;
        for (int d = 0; d < 4; ++d) {
            const std::int64_t bond = edge_bond(i, j, d);
            if (contours.unsat(bond)) {
                ++degree;
                if (d != opposite(d_in)) other = d;
            }
        }
        if (degree == 4) return d_in;
        if (degree == 2) return other;
        throw std::logic_error("odd contour degree on the torus");
    };

    std::vector<DomainWall> walls;
    for (std::int32_t j = 0; j < geom.height; ++j) {
        for (std::int32_t i = 0; i < geom.width; ++i) {
            for (int d0 : {kN, kE}) {
                const std::int64_t first = edge_bond(i, j, d0);
                if (!contours.unsat(first) || used[std::size_t(first)]) continue;
                DomainWall wall;
                wall.closed = true;
                std::vector<int> moves;
                std::int32_t vi = i, vj = j;
                std::int64_t disp_x = 0, disp_y = 0;
                int d = d0;
                wall.path.push_back({vi, vj});
                for (;;) {
                    used[std::size_t(edge_bond(vi, vj, d))] = 1;
                    moves.push_back(d);
                    disp_x += kDx[std::size_t(d)];
                    disp_y += kDy[std::size_t(d)];
                    vi = geom.wrap_x(vi + kDx[std::size_t(d)]);
                    vj = geom.wrap_y(vj + kDy[std::size_t(d)]);
                    d = exit_direction(vi, vj, d);
                    const std::int64_t next = edge_bond(vi, vj, d);
                    if (next == first && used[std::size_t(next)]) break;
                    wall.path.push_back({vi, vj});
                }
                wall.winding = disp_x != 0 || disp_y != 0;
                finalize_wall(wall, moves);
                walls.push_back(std::move(wall));
            }
        }
    }
    return walls;
}

int corner_count(const ContourSet& contours, const Window& window) {
    const LatticeGeometry& geom = contours.geometry();
    if (!window_valid(geom, window)) throw std::invalid_argument("invalid window");
    int total = 0;
    for (int a = -window.L; a <= window.L - 1; ++a)
        for (int b = -window.L; b <= window.L - 1; ++b)
            total += contours.corner_count_at(geom.wrap_x(window.center.x + a),
                                              geom.wrap_y(window.center.y + b));
    return total;
}

int corner_count(const SpinConfig& config, const Window& window) {
    const LatticeGeometry& geom = config.geometry();
    if (!window_valid(geom, window)) throw std::invalid_argument("invalid window");
    int total = 0;
    for (int a = -window.L; a <= window.L - 1; ++a) {
        for (int b = -window.L; b <= window.L - 1; ++b) {
            const int s00 = config.spin(window_site(geom, window, a, b));
            const int s10 = config.spin(window_site(geom, window, a + 1, b));
            const int s01 = config.spin(window_site(geom, window, a, b + 1));
            const int s11 = config.spin(window_site(geom, window, a + 1, b + 1));
            const int ns = int(s01 != s11) + int(s00 != s10);
            const int ew = int(s10 != s11) + int(s00 != s01);
            total += ns * ew;
        }
    }
    return total;
}

namespace {

/// Reason B, spin side: a window row (or column) whose sites all disagree
/// with both off-axis neighbours, i.e. a width-1 stripe bounded by two flat
/// in-window walls one spacing apart.
bool has_adjacent_flat_walls(const SpinConfig& config, const Window& window) {
    const LatticeGeometry& geom = config.geometry();
    const int L = window.L;
    for (int dy = -L + 1; dy <= L - 1; ++dy) {
        bool all = true;
        for (int dx = -L; dx <= L && all; ++dx) {
            const int s = config.spin(window_site(geom, window, dx, dy));
            all = s != config.spin(window_site(geom, window, dx, dy - 1)) &&
                  s != config.spin(window_site(geom, window, dx, dy + 1));
        }
        if (all) return true;
    }
    for (int dx = -L + 1; dx <= L - 1; ++dx) {
        bool all = true;
        for (int dy = -L; dy <= L && all; ++dy) {
            const int s = config.spin(window_site(geom, window, dx, dy));
            all = s != config.spin(window_site(geom, window, dx - 1, dy)) &&
                  s != config.spin(window_site(geom, window, dx + 1, dy));
        }
        if (all) return true;
    }
    return false;
}

bool is_cross(const std::vector<DomainWall>& walls) {
    if (walls.size() != 2) return false;
    const WallKind a = walls[0].kind, b = walls[1].kind;
    return (a == WallKind::FLAT_H && b == WallKind::FLAT_V) ||
           (a == WallKind::FLAT_V && b == WallKind::FLAT_H);
}

bool has_overlapping_spans(const std::vector<DomainWall>& walls) {
    if (is_cross(walls)) return false;
    for (std::size_t p = 0; p < walls.size(); ++p) {
        if (walls[p].closed || walls[p].winding) continue;
        for (std::size_t q = p + 1; q < walls.size(); ++q) {
            if (walls[q].closed || walls[q].winding) continue;
            if (walls[p].rect.intersects(walls[q].rect)) return true;
        }
    }
    return false;
}

} // namespace

std::optional<EAbsentReason> classify_e_absent(const SpinConfig& config, const Window& window) {
    const std::vector<DomainWall> walls = decompose_walls(config, window);
    for (const DomainWall& wall : walls)
        if (wall.kind == WallKind::NON_MONOTONIC) return EAbsentReason::NON_MONOTONIC_WALL;
    if (has_adjacent_flat_walls(config, window)) return EAbsentReason::ADJACENT_FLAT_WALLS;
    if (has_overlapping_spans(walls)) return EAbsentReason::OVERLAPPING_SPANS;
    return std::nullopt;
}

bool check_corner_bound(const SpinConfig& config, const Window& window) {
    if (classify_e_absent(config, window).has_value()) return true;
    return corner_count(config, window) <= corner_bound_limit(window.L);
}

} // namespace ztis
