#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "classifier_examples.hpp"
#include "test_helpers.hpp"
#include "ztis/dynamics.hpp"
#include "ztis/lattice.hpp"
#include "ztis/rng.hpp"
#include "ztis/windows.hpp"

using namespace ztis;
using namespace ztis::testing;

namespace {

SpinConfig flipped(const SpinConfig& config) {
    SpinConfig out = config;
    for (std::int32_t s = 0; s < config.size(); ++s)
        out.flip(s);
    return out;
}

SpinConfig evolved_config(const LatticeGeometry& geom, double t, std::uint64_t stream) {
    Rng rng = make_rng({77, stream});
    SimState state(init_random(geom, 0.5, rng), Engine::ACTIVE_SET);
    SiteStats stats(geom.num_sites());
    run_until(state, t, {}, stats, rng);
    return state.config();
}

} // namespace

TEST_CASE("window classifier examples") {
    std::vector<ztis::testing::ExampleResult> examples;
    window_examples(examples);
    for (const auto& ex : examples) {
        INFO(ex.name, ": ", ex.detail);
        CHECK(ex.pass);
    }
}

TEST_CASE("classification sees only the window") {
    // Constant window inside a non-constant lattice.
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    const SpinConfig config = lone_minus(geom, Site{1, 1});
    const Window w{Site{9, 9}, 3};
    CHECK(classify_window(config, w).cls == WindowClass::CONSTANT_PLUS);
    CHECK(classify_window(flipped(config), w).cls == WindowClass::CONSTANT_MINUS);
}

TEST_CASE("width-2 stripe reports center-relative wall offsets") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    const SpinConfig config = stripe_h(geom, 7, 2); // rows 7,8 plus
    const auto report = classify_window(config, Window{Site{8, 8}, 2});
    REQUIRE(report.cls == WindowClass::STRIPE_H);
    // Window rows -2..2 are lattice rows 6..10: signs -,+,+,-,-.
    CHECK(report.wall_offsets == std::vector<int>{-2, 0});
    CHECK_FALSE(report.step_pos.has_value());

    SUBCASE("the transpose classifies as a vertical stripe") {
        SpinConfig vert = constant_config(geom, -1);
        for (std::int32_t x = 7; x <= 8; ++x)
            for (std::int32_t y = 0; y < 16; ++y)
                vert.set_spin(Site{x, y}, +1);
        const auto vr = classify_window(vert, Window{Site{8, 8}, 2});
        REQUIRE(vr.cls == WindowClass::STRIPE_V);
        CHECK(vr.wall_offsets == std::vector<int>{-2, 0});
    }
}

TEST_CASE("one flat wall with a single unit step") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    // Interface height jumps from 8 to 9 at x = 7; the compensating jump at
    // the torus seam is outside the window.
    const SpinConfig config = step_wall(geom, 8, 7);
    const auto report = classify_window(config, Window{Site{8, 8}, 3});
    REQUIRE(report.cls == WindowClass::SINGLE_STEP_WALL);
    REQUIRE(report.step_pos.has_value());
    CHECK(report.step_pos->i == -2);
    CHECK(report.step_pos->j == -1);

    SUBCASE("a window not containing the step sees a stripe-free flat wall") {
        // Window centered at (12, 8) covers x in [9, 15]: wall is flat there,
        // but it is the only wall and it has no step, so the class falls
        // through to STRIPE_H (one flat crossing wall).
        const auto flat = classify_window(config, Window{Site{12, 8}, 3});
        CHECK(flat.cls == WindowClass::STRIPE_H);
        CHECK(flat.wall_offsets.size() == 1);
    }
}

TEST_CASE("checkerboard window is proven e-absent") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    const auto report = classify_window(checkerboard(geom), Window{Site{8, 8}, 2});
    REQUIRE(report.cls == WindowClass::PROVEN_E_ABSENT);
    REQUIRE(report.reason.has_value());
}

TEST_CASE("classification commutes with a global flip") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    for (std::uint64_t stream = 0; stream < 30; ++stream) {
        const SpinConfig config = evolved_config(geom, 2.0, stream);
        const SpinConfig neg = flipped(config);
        const Window w = center_window(geom, 2);
        const auto a = classify_window(config, w);
        const auto b = classify_window(neg, w);
        if (a.cls == WindowClass::CONSTANT_PLUS) {
            CHECK(b.cls == WindowClass::CONSTANT_MINUS);
        } else if (a.cls == WindowClass::CONSTANT_MINUS) {
            CHECK(b.cls == WindowClass::CONSTANT_PLUS);
        } else {
            CHECK(a.cls == b.cls);
            CHECK(a.wall_offsets == b.wall_offsets);
            CHECK(a.step_pos.has_value() == b.step_pos.has_value());
            if (a.step_pos) {
                CHECK(a.step_pos->i == b.step_pos->i);
                CHECK(a.step_pos->j == b.step_pos->j);
            }
        }

        const WindowEvents ea = window_probability_events(config, w);
        const WindowEvents eb = window_probability_events(neg, w);
        CHECK(ea.c_plus == eb.c_minus);
        CHECK(ea.c_minus == eb.c_plus);
        CHECK(ea.v_plus == eb.v_minus);
        CHECK(ea.h_plus == eb.h_minus);
        CHECK(ea.a_l == eb.a_l);
    }
}

TEST_CASE("constancy implies line events; events match the L overload") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    for (std::uint64_t stream = 50; stream < 80; ++stream) {
        const SpinConfig config = evolved_config(geom, 4.0, stream);
        const Window w = center_window(geom, 2);
        const WindowEvents ev = window_probability_events(config, w);
        if (ev.c_plus) {
            CHECK(ev.v_plus);
            CHECK(ev.h_plus);
        }
        if (ev.c_minus) {
            CHECK(ev.v_minus);
            CHECK(ev.h_minus);
        }
        CHECK_FALSE((ev.c_plus && ev.c_minus));

        const WindowEvents by_l = window_probability_events(config, 2);
        CHECK(ev.c_plus == by_l.c_plus);
        CHECK(ev.c_minus == by_l.c_minus);
        CHECK(ev.a_l == by_l.a_l);
        CHECK(ev.v_plus == by_l.v_plus);
        CHECK(ev.h_plus == by_l.h_plus);
        CHECK(ev.v_minus == by_l.v_minus);
        CHECK(ev.h_minus == by_l.h_minus);
    }
}

TEST_CASE("a_l tracks the absorbing-compatible classes") {
    const LatticeGeometry geom{16, 16, Boundary::TORUS};
    for (std::uint64_t stream = 100; stream < 140; ++stream) {
        const SpinConfig config = evolved_config(geom, 8.0, stream);
        const Window w = center_window(geom, 2);
        const WindowClass cls = classify_window(config, w).cls;
        const bool expect = cls == WindowClass::CONSTANT_PLUS ||
                            cls == WindowClass::CONSTANT_MINUS ||
                            cls == WindowClass::STRIPE_H || cls == WindowClass::STRIPE_V;
        CHECK(window_probability_events(config, w).a_l == expect);
    }
}

TEST_CASE("global absorbing predicate agrees with a zero total flip rate") {
    const LatticeGeometry geom{8, 8, Boundary::TORUS};
    auto check_against_engine = [](const SpinConfig& config, bool expect) {
        CHECK(is_absorbing_global(config) == expect);
        SimState state(config, Engine::ACTIVE_SET);
        CHECK((state.total_rate() == 0.0) == expect);
    };

    check_against_engine(constant_config(geom, +1), true);
    check_against_engine(constant_config(geom, -1), true);
    check_against_engine(rows_signed(geom, {+1, +1, +1, -1, -1, -1, -1, -1}), true);
    check_against_engine(stripe_h(geom, 2, 1), false); // width-1 stripe melts
    check_against_engine(lone_minus(geom, Site{4, 4}), false);
    check_against_engine(checkerboard(geom), false);

    SUBCASE("evolved states agree too") {
        const LatticeGeometry big{16, 16, Boundary::TORUS};
        for (std::uint64_t stream = 200; stream < 215; ++stream) {
            const SpinConfig config = evolved_config(big, 16.0, stream);
            SimState state(config, Engine::ACTIVE_SET);
            CHECK(is_absorbing_global(config) == (state.total_rate() == 0.0));
        }
    }
}

TEST_CASE("center window and validity bounds") {
    const LatticeGeometry torus{16, 16, Boundary::TORUS};
    const Window cw = center_window(torus, 3);
    CHECK(cw.center == Site{8, 8});
    CHECK(cw.L == 3);
    CHECK(window_valid(torus, cw));
    CHECK(window_valid(torus, Window{Site{0, 0}, 6}));  // wraps, still valid
    // The terminus ring needs 2L+3 <= min(W, H).
    CHECK_FALSE(window_valid(torus, Window{Site{8, 8}, 7}));
    CHECK_FALSE(window_valid(torus, Window{Site{8, 8}, 0}));

    const LatticeGeometry free{16, 16, Boundary::FREE};
    CHECK(window_valid(free, Window{Site{8, 8}, 6}));
    CHECK_FALSE(window_valid(free, Window{Site{8, 8}, 7}));   // termini would clip
    CHECK_FALSE(window_valid(free, Window{Site{3, 8}, 3}));   // terminus column at x=0
    CHECK(window_valid(free, Window{Site{4, 8}, 3}));

    SUBCASE("window_site wraps on the torus") {
        const Window seam{Site{0, 0}, 2};
        CHECK(window_site(torus, seam, -2, -2) == Site{14, 14});
        CHECK(window_site(torus, seam, 2, 2) == Site{2, 2});
    }
}
