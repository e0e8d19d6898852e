#include "ztis/windows.hpp"

#include <stdexcept>

namespace ztis {

const char* to_string(WindowClass cls) {
    switch (cls) {
        case WindowClass::CONSTANT_PLUS: return "CONSTANT_PLUS";
        case WindowClass::CONSTANT_MINUS: return "CONSTANT_MINUS";
        case WindowClass::STRIPE_H: return "STRIPE_H";
        case WindowClass::STRIPE_V: return "STRIPE_V";
        case WindowClass::SINGLE_STEP_WALL: return "SINGLE_STEP_WALL";
        case WindowClass::PROVEN_E_ABSENT: return "PROVEN_E_ABSENT";
        default: return "OTHER";
    }
}

Window center_window(const LatticeGeometry& geom, int L) {
    return Window{Site{geom.width / 2, geom.height / 2}, L};
}

namespace {

/// Flat-wall offsets when every window row (axis = 0) or column (axis = 1)
/// is constant; nullopt when some line is not constant. Offset j marks a
/// wall between lines j and j+1 (center-relative).
std::optional<std::vector<int>> flat_wall_offsets(const SpinConfig& config, const Window& window,
                                                  int axis) {
    const LatticeGeometry& geom = config.geometry();
    const int L = window.L;
    std::vector<int> line_sign(std::size_t(2 * L + 1));
    for (int u = -L; u <= L; ++u) {
        const int first = config.spin(
            axis == 0 ? window_site(geom, window, -L, u) : window_site(geom, window, u, -L));
        for (int v = -L + 1; v <= L; ++v) {
            const Site s =
                axis == 0 ? window_site(geom, window, v, u) : window_site(geom, window, u, v);
            if (config.spin(s) != first) return std::nullopt;
        }
        line_sign[std::size_t(u + L)] = first;
    }
    std::vector<int> offsets;
    for (int u = -L; u < L; ++u)
        if (line_sign[std::size_t(u + L)] != line_sign[std::size_t(u + L + 1)])
            offsets.push_back(u);
    return offsets;
}

bool separations_ok(const std::vector<int>& offsets) {
    for (std::size_t k = 1; k < offsets.size(); ++k)
        if (offsets[k] - offsets[k - 1] < 2) return false;
    return true;
}

/// A wall that crosses the window parallel to one axis with exactly one
/// perpendicular unit move.
std::optional<DualCoord> single_step_position(const DomainWall& wall, int L) {
    if (wall.closed || wall.winding) return std::nullopt;
    int n_vertical = 0, n_horizontal = 0;
    std::size_t step_at = 0;
    for (std::size_t k = 1; k < wall.path.size(); ++k) {
        if (wall.path[k].i != wall.path[k - 1].i) {
            ++n_horizontal;
        } else {
            ++n_vertical;
            step_at = k;
        }
    }
    const DualCoord a = wall.path.front();
    const DualCoord b = wall.path.back();
    const bool spans_h = (a.i == -L - 1 && b.i == L) || (a.i == L && b.i == -L - 1);
    const bool spans_v = (a.j == -L - 1 && b.j == L) || (a.j == L && b.j == -L - 1);
    if (spans_h && n_vertical == 1) {
        const DualCoord& p = wall.path[step_at - 1];
        const DualCoord& q = wall.path[step_at];
        return DualCoord{p.i, std::min(p.j, q.j)};
    }
    if (spans_v && n_horizontal == 1) {
        for (std::size_t k = 1; k < wall.path.size(); ++k)
            if (wall.path[k].i != wall.path[k - 1].i)
                return DualCoord{std::min(wall.path[k - 1].i, wall.path[k].i),
                                 wall.path[k].j};
    }
    return std::nullopt;
}

} // namespace

WindowReport classify_window(const SpinConfig& config, const Window& window) {
    const LatticeGeometry& geom = config.geometry();
    if (!window_valid(geom, window)) throw std::invalid_argument("invalid window");
    WindowReport report;

    const int L = window.L;
    bool any_plus = false, any_minus = false;
    for (int dy = -L; dy <= L && !(any_plus && any_minus); ++dy)
        for (int dx = -L; dx <= L; ++dx)
            (config.spin(window_site(geom, window, dx, dy)) > 0 ? any_plus : any_minus) = true;
    if (!any_minus) {
        report.cls = WindowClass::CONSTANT_PLUS;
        return report;
    }
    if (!any_plus) {
        report.cls = WindowClass::CONSTANT_MINUS;
        return report;
    }

    if (auto rows = flat_wall_offsets(config, window, 0);
        rows && !rows->empty() && separations_ok(*rows)) {
        report.cls = WindowClass::STRIPE_H;
        report.wall_offsets = std::move(*rows);
        return report;
    }
    if (auto cols = flat_wall_offsets(config, window, 1);
        cols && !cols->empty() && separations_ok(*cols)) {
        report.cls = WindowClass::STRIPE_V;
        report.wall_offsets = std::move(*cols);
        return report;
    }

    const std::vector<DomainWall> walls = decompose_walls(config, window);
    if (walls.size() == 1) {
        if (auto step = single_step_position(walls.front(), L)) {
            report.cls = WindowClass::SINGLE_STEP_WALL;
            report.step_pos = step;
            return report;
        }
    }

    bool non_monotonic = false;
    for (const DomainWall& wall : walls)
        if (wall.kind == WallKind::NON_MONOTONIC) non_monotonic = true;
    std::optional<EAbsentReason> reason;
    if (non_monotonic) {
        reason = EAbsentReason::NON_MONOTONIC_WALL;
    } else {
        reason = classify_e_absent(config, window);
    }
    if (reason) {
        report.cls = WindowClass::PROVEN_E_ABSENT;
        report.reason = reason;
        return report;
    }
    report.cls = WindowClass::OTHER;
    return report;
}

bool is_absorbing_global(const SpinConfig& config) {
    const std::int64_t n = config.geometry().num_sites();
    for (std::int32_t idx = 0; idx < n; ++idx)
        if (flip_rate(config, idx) != 0.0) return false;
    return true;
}

WindowEvents window_probability_events(const SpinConfig& config, const Window& window) {
    const LatticeGeometry& geom = config.geometry();
    if (!window_valid(geom, window)) throw std::invalid_argument("invalid window");
    const int L = window.L;
    WindowEvents ev;
    ev.c_plus = true;
    ev.c_minus = true;
    for (int dx = -L; dx <= L; ++dx) {
        bool col_plus = true, col_minus = true;
        for (int dy = -L; dy <= L; ++dy) {
            const int s = config.spin(window_site(geom, window, dx, dy));
            (s > 0 ? col_minus : col_plus) = false;
        }
        ev.v_plus = ev.v_plus || col_plus;
        ev.v_minus = ev.v_minus || col_minus;
        ev.c_plus = ev.c_plus && col_plus;
        ev.c_minus = ev.c_minus && col_minus;
    }
    for (int dy = -L; dy <= L; ++dy) {
        bool row_plus = true, row_minus = true;
        for (int dx = -L; dx <= L; ++dx) {
            const int s = config.spin(window_site(geom, window, dx, dy));
            (s > 0 ? row_minus : row_plus) = false;
        }
        ev.h_plus = ev.h_plus || row_plus;
        ev.h_minus = ev.h_minus || row_minus;
    }
    const WindowClass cls = classify_window(config, window).cls;
    ev.a_l = cls == WindowClass::CONSTANT_PLUS || cls == WindowClass::CONSTANT_MINUS ||
             cls == WindowClass::STRIPE_H || cls == WindowClass::STRIPE_V;
    return ev;
}

WindowEvents window_probability_events(const SpinConfig& config, int L) {
    return window_probability_events(config, center_window(config.geometry(), L));
}

} // namespace ztis
