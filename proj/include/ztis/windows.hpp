#pragma once

#include <optional>
#include <vector>

#include "ztis/contours.hpp"
#include "ztis/lattice.hpp"

namespace ztis {

/// Window-scale state classes, strongest first. The precedence
/// CONSTANT > STRIPE > SINGLE_STEP_WALL > PROVEN_E_ABSENT > OTHER makes the
/// classes mutually exclusive.
enum class WindowClass {
    CONSTANT_PLUS,
    CONSTANT_MINUS,
    STRIPE_H,
    STRIPE_V,
    SINGLE_STEP_WALL,
    PROVEN_E_ABSENT,
    OTHER,
};
inline constexpr int kNumWindowClasses = 7;
const char* to_string(WindowClass cls);

struct WindowReport {
    WindowClass cls = WindowClass::OTHER;
    /// STRIPE only: center-relative dual rows (STRIPE_H) or columns
    /// (STRIPE_V) of the flat walls; offset j names the wall between window
    /// rows j and j+1.
    std::vector<int> wall_offsets;
    /// SINGLE_STEP_WALL only: center-relative dual coordinate of the step's
    /// off-axis move (its lower/left endpoint).
    std::optional<DualCoord> step_pos;
    /// PROVEN_E_ABSENT only.
    std::optional<EAbsentReason> reason;
};

/// Classifies the window by the precedence rule. STRIPE requires every wall
/// to cross the window flat with pairwise separations >= 2 (a width-1 stripe
/// classifies as PROVEN_E_ABSENT instead); SINGLE_STEP_WALL requires exactly
/// one wall crossing the window, flat except for one unit step.
WindowReport classify_window(const SpinConfig& config, const Window& window);

/// True iff no site can flip: the configuration is constant or a stack of
/// same-orientation flat stripes with widths >= 2.
bool is_absorbing_global(const SpinConfig& config);

/// Indicators of the window events: constancy (C±), agreement with an
/// absorbing state at window scale (A), and monochromatic full vertical /
/// horizontal lines (V±, H±). Constancy implies both line events.
struct WindowEvents {
    bool c_plus = false, c_minus = false;
    bool a_l = false;
    bool v_plus = false, h_plus = false;
    bool v_minus = false, h_minus = false;
};

WindowEvents window_probability_events(const SpinConfig& config, const Window& window);
/// Same, for the window of half-width L centered at the lattice center.
WindowEvents window_probability_events(const SpinConfig& config, int L);

Window center_window(const LatticeGeometry& geom, int L);

} // namespace ztis
