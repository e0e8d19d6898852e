#include "ztis/lattice.hpp"

#include <bit>

namespace ztis {

std::int64_t SpinConfig::plus_count() const {
    std::int64_t n = 0;
    for (std::uint64_t w : bits_) n += std::popcount(w);
    return n;
}

SpinConfig init_random(const LatticeGeometry& geom, double p_plus, Rng& rng) {
    if (!(p_plus >= 0.0 && p_plus <= 1.0))
        throw std::invalid_argument("p_plus must lie in [0, 1]");
    SpinConfig config(geom, -1);
    const std::int64_t n = geom.num_sites();
    for (std::int32_t i = 0; i < n; ++i) {
        if (rng.bernoulli(p_plus)) config.set_spin(i, +1);
    }
    return config;
}

std::vector<Site> neighbors(const LatticeGeometry& geom, Site s) {
    if (!geom.in_bounds(s)) throw std::out_of_range("site outside lattice");
    std::vector<Site> out;
    out.reserve(4);
    const std::int32_t idx = geom.index(s);
    for (int dir = 0; dir < LatticeGeometry::kNumDirs; ++dir) {
        const std::int32_t nb = geom.neighbor_index(idx, dir);
        if (nb >= 0) out.push_back(geom.site(nb));
    }
    return out;
}

int delta_H(const SpinConfig& config, std::int32_t idx) {
    const LatticeGeometry& geom = config.geometry();
    const int s = config.spin(idx);
    int nbr_sum = 0;
    for (int dir = 0; dir < LatticeGeometry::kNumDirs; ++dir) {
        const std::int32_t nb = geom.neighbor_index(idx, dir);
        if (nb >= 0) nbr_sum += config.spin(nb);
    }
    return 2 * s * nbr_sum;
}

int delta_H(const SpinConfig& config, Site s) {
    if (!config.geometry().in_bounds(s)) throw std::out_of_range("site outside lattice");
    return delta_H(config, config.geometry().index(s));
}

double flip_rate(const SpinConfig& config, std::int32_t idx) {
    const int dh = delta_H(config, idx);
    if (dh < 0) return 1.0;
    if (dh == 0) return 0.5;
    return 0.0;
}

double flip_rate(const SpinConfig& config, Site s) {
    if (!config.geometry().in_bounds(s)) throw std::out_of_range("site outside lattice");
    return flip_rate(config, config.geometry().index(s));
}

std::int64_t unsatisfied_bond_count(const SpinConfig& config) {
    const LatticeGeometry& geom = config.geometry();
    const std::int32_t w = geom.width, h = geom.height;
    std::int64_t unsat = 0;
    for (std::int32_t y = 0; y < h; ++y) {
        for (std::int32_t x = 0; x < w; ++x) {
            const std::int32_t idx = y * w + x;
            const int s = config.spin(idx);
            // east bond
            if (geom.boundary == Boundary::TORUS || x + 1 < w) {
                const std::int32_t nb = idx - x + geom.wrap_x(x + 1);
                if (config.spin(nb) != s) ++unsat;
            }
            // north bond
            if (geom.boundary == Boundary::TORUS || y + 1 < h) {
                const std::int32_t nb = geom.wrap_y(y + 1) * w + x;
                if (config.spin(nb) != s) ++unsat;
            }
        }
    }
    return unsat;
}

double wall_density(const SpinConfig& config) {
    return double(unsatisfied_bond_count(config)) / double(config.geometry().num_bonds());
}

} // namespace ztis
