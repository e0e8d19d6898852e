#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <tuple>
#include <vector>

#include "classifier_examples.hpp"
#include "test_helpers.hpp"
#include "ztis/contours.hpp"
#include "ztis/dynamics.hpp"

using namespace ztis;
using namespace ztis::testing;

namespace {

/// In-window unsatisfied dual edges counted straight from spins: vertical
/// edges (a,b)-(a,b+1) and horizontal edges (a,b)-(a+1,b) with at least one
/// endpoint in Q_L*.
std::int64_t window_edges_brute(const SpinConfig& config, const Window& w) {
    const LatticeGeometry& geom = config.geometry();
    const auto spin = [&](int dx, int dy) { return config.spin(window_site(geom, w, dx, dy)); };
    std::int64_t count = 0;
    for (int a = -w.L; a <= w.L - 1; ++a)
        for (int b = -w.L - 1; b <= w.L - 1; ++b)
            if (spin(a, b + 1) != spin(a + 1, b + 1)) ++count; // vertical dual edge
    for (int a = -w.L - 1; a <= w.L - 1; ++a)
        for (int b = -w.L; b <= w.L - 1; ++b)
            if (spin(a + 1, b) != spin(a + 1, b + 1)) ++count; // horizontal dual edge
    return count;
}

/// Canonical undirected edge key between two adjacent dual coords.
std::tuple<int, int, int, int> edge_key(DualCoord u, DualCoord v) {
    if (std::tie(u.i, u.j) > std::tie(v.i, v.j)) std::swap(u, v);
    return {u.i, u.j, v.i, v.j};
}

std::vector<std::tuple<int, int, int, int>> wall_edges(const DomainWall& wall) {
    std::vector<std::tuple<int, int, int, int>> edges;
    for (std::size_t k = 0; k + 1 < wall.path.size(); ++k)
        edges.push_back(edge_key(wall.path[k], wall.path[k + 1]));
    if (wall.closed && wall.path.size() > 1)
        edges.push_back(edge_key(wall.path.back(), wall.path.front()));
    return edges;
}

/// Diagonal plus band lo <= y - x <= hi: two parallel monotonic NE walls
/// whose spanning rectangles overlap.
SpinConfig diagonal_band(const LatticeGeometry& geom, int lo, int hi) {
    SpinConfig config(geom, -1);
    for (int y = 0; y < geom.height; ++y)
        for (int x = 0; x < geom.width; ++x)
            config.set_spin(Site{x, y}, (y - x >= lo && y - x <= hi) ? +1 : -1);
    return config;
}

} // namespace

TEST_CASE("all stated classifier examples hold") {
    for (const ExampleResult& ex : run_classifier_examples()) {
        INFO(ex.name, ": ", ex.detail);
        CHECK(ex.pass);
    }
}

TEST_CASE("extract_contours matches the brute-force bond count") {
    for (const Boundary boundary : {Boundary::TORUS, Boundary::FREE}) {
        const LatticeGeometry geom(12, 10, boundary);
        for (int rep = 0; rep < 20; ++rep) {
            Rng rng = make_rng(RngSpec{300, std::uint64_t(rep)});
            const SpinConfig config = init_random(geom, 0.5, rng);
            const ContourSet cs = extract_contours(config);
            CHECK(cs.unsat_count() == unsat_bonds_brute(config));
            CHECK(cs.unsat_count() == unsatisfied_bond_count(config));
        }
    }
}

TEST_CASE("corner field: per-vertex counts and the degree rules") {
    const LatticeGeometry geom(16, 16, Boundary::TORUS);

    // single plaquette: each surrounding dual vertex has two perpendicular
    // edges, one corner apiece
    const ContourSet lone = extract_contours(lone_minus(geom, Site{8, 8}));
    CHECK(lone.corner_count_at(8, 8) == 1);
    CHECK(lone.corner_count_at(7, 8) == 1);
    CHECK(lone.corner_count_at(8, 7) == 1);
    CHECK(lone.corner_count_at(7, 7) == 1);
    CHECK(lone.total_corners() == 4);

    // cross hub: degree 4 contributes 4 corners
    const ContourSet cross = extract_contours(quadrants(geom, 8, 8));
    CHECK(cross.corner_count_at(7, 7) == 4);

    // random windows agree with the spin-side enumeration oracle
    for (int rep = 0; rep < 20; ++rep) {
        Rng rng = make_rng(RngSpec{301, std::uint64_t(rep)});
        const SpinConfig config = init_random(geom, 0.5, rng);
        const Window w{Site{8, 8}, 3};
        CHECK(corner_count(config, w) == corner_count_brute(config, w));
        CHECK(corner_count(extract_contours(config), w) == corner_count_brute(config, w));
    }
}

TEST_CASE("reconstruct_config inverts extract_contours up to global flip") {
    for (const Boundary boundary : {Boundary::TORUS, Boundary::FREE}) {
        const LatticeGeometry geom(10, 14, boundary);
        Rng rng = make_rng(RngSpec{302, boundary == Boundary::TORUS ? 0u : 1u});
        const SpinConfig config = init_random(geom, 0.5, rng);
        const ContourSet cs = extract_contours(config);

        const SpinConfig same = reconstruct_config(cs, config.spin(Site{0, 0}));
        CHECK(same == config);

        SpinConfig flipped = reconstruct_config(cs, -config.spin(Site{0, 0}));
        for (int y = 0; y < geom.height; ++y)
            for (int x = 0; x < geom.width; ++x)
                CHECK(flipped.spin(Site{x, y}) == -config.spin(Site{x, y}));
    }
}

TEST_CASE("ContourTracker equals from-scratch extraction after every event") {
    const LatticeGeometry geom(16, 16, Boundary::TORUS);
    Rng init_rng = make_rng(RngSpec{303, 0});
    SimState state(init_random(geom, 0.5, init_rng), Engine::ACTIVE_SET);
    ContourTracker tracker(state.config());
    Rng rng = make_rng(RngSpec{303, 1});

    int steps = 0;
    for (int i = 0; i < 20000; ++i) {
        const StepResult step = step_kmc(state, rng);
        if (step.absorbed) break;
        tracker.on_event(step.event);
        REQUIRE(tracker.config() == state.config());
        REQUIRE(tracker.contours() == extract_contours(state.config()));
        ++steps;
    }
    CHECK(steps > 100);
    CHECK(tracker.spin_sum() == 2 * state.config().plus_count() - geom.num_sites());
}

TEST_CASE("decompose_walls is an exact edge partition of the window contour") {
    const LatticeGeometry geom(16, 16, Boundary::TORUS);
    const Window w{Site{8, 8}, 3};
    for (int rep = 0; rep < 40; ++rep) {
        Rng rng = make_rng(RngSpec{304, std::uint64_t(rep)});
        const SpinConfig config = init_random(geom, 0.5, rng);
        const std::vector<DomainWall> walls = decompose_walls(config, w);

        std::set<std::tuple<int, int, int, int>> seen;
        std::int64_t total = 0;
        for (const DomainWall& wall : walls)
            for (const auto& e : wall_edges(wall)) {
                const bool inserted = seen.insert(e).second;
                REQUIRE(inserted); // pairwise edge-disjoint
                ++total;
            }
        REQUIRE(total == window_edges_brute(config, w));
    }
}

TEST_CASE("corner parity: M_L and total direction changes have equal parity") {
    const LatticeGeometry geom(16, 16, Boundary::TORUS);
    const Window w{Site{8, 8}, 3};
    for (int rep = 0; rep < 40; ++rep) {
        Rng rng = make_rng(RngSpec{305, std::uint64_t(rep)});
        const SpinConfig config = init_random(geom, 0.5, rng);
        int turns = 0;
        for (const DomainWall& wall : decompose_walls(config, w)) turns += wall.direction_changes;
        CHECK(corner_count(config, w) % 2 == turns % 2);
    }
}

TEST_CASE("two overlapping monotonic walls fire reason C; the cross does not") {
    const LatticeGeometry geom(16, 16, Boundary::FREE);
    const Window w{Site{8, 8}, 3};
    const SpinConfig band = diagonal_band(geom, -1, 1);

    const std::vector<DomainWall> walls = decompose_walls(band, w);
    REQUIRE(walls.size() == 2);
    for (const DomainWall& wall : walls) {
        CHECK(is_monotonic(wall));
        CHECK(wall.kind == WallKind::MONO_NE);
    }
    CHECK(walls[0].rect.intersects(walls[1].rect));

    const auto reason = classify_e_absent(band, w);
    REQUIRE(reason.has_value());
    CHECK(*reason == EAbsentReason::OVERLAPPING_SPANS);
}

TEST_CASE("diamond quadruple: four monotonic open walls, bound holds") {
    const LatticeGeometry geom(32, 32, Boundary::TORUS);
    const Window w{Site{16, 16}, 5};
    const SpinConfig config = diamond(geom, 16, 16, 7);

    const std::vector<DomainWall> walls = decompose_walls(config, w);
    REQUIRE(walls.size() == 4);
    int ne = 0, se = 0;
    for (const DomainWall& wall : walls) {
        CHECK_FALSE(wall.closed);
        CHECK(is_monotonic(wall));
        if (wall.kind == WallKind::MONO_NE) ++ne;
        if (wall.kind == WallKind::MONO_SE) ++se;
    }
    CHECK(ne == 2);
    CHECK(se == 2);
    CHECK(corner_count(config, w) <= corner_bound_limit(5));
    CHECK(check_corner_bound(config, w));
}

TEST_CASE("torus-wide decomposition: winding stripes and contractible loops") {
    const LatticeGeometry geom(16, 16, Boundary::TORUS);

    const std::vector<DomainWall> stripe_walls =
        decompose_walls_torus(extract_contours(stripe_h(geom, 4, 4)));
    REQUIRE(stripe_walls.size() == 2);
    for (const DomainWall& wall : stripe_walls) {
        CHECK(wall.closed);
        CHECK(wall.winding);
        CHECK(wall.kind == WallKind::FLAT_H); // winding keeps the move-derived kind
        CHECK(wall.path.size() == 16);
    }

    const std::vector<DomainWall> loop_walls =
        decompose_walls_torus(extract_contours(lone_minus(geom, Site{8, 8})));
    REQUIRE(loop_walls.size() == 1);
    CHECK(loop_walls[0].closed);
    CHECK_FALSE(loop_walls[0].winding);
    CHECK(loop_walls[0].kind == WallKind::NON_MONOTONIC);
    CHECK(loop_walls[0].path.size() == 4);
}

TEST_CASE("incremental plaquette toggles track flips on FREE boundaries too") {
    const LatticeGeometry geom(10, 10, Boundary::FREE);
    Rng rng = make_rng(RngSpec{306, 0});
    SpinConfig config = init_random(geom, 0.5, rng);
    ContourSet cs = extract_contours(config);

    Rng site_rng = make_rng(RngSpec{306, 1});
    for (int i = 0; i < 500; ++i) {
        const auto idx = std::int32_t(site_rng.uniform_index(std::uint64_t(geom.num_sites())));
        const Site s = geom.site(idx);
        config.flip(s);
        cs.toggle_plaquette(s.x, s.y);
        REQUIRE(cs == extract_contours(config));
    }
}
