#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ztis/rng.hpp"

namespace ztis {

enum class Boundary { TORUS, FREE };

struct Site {
    std::int32_t x = 0;
    std::int32_t y = 0;
    friend bool operator==(const Site&, const Site&) = default;
};

/// Rectangular lattice geometry. TORUS wraps both axes (every site has 4
/// neighbours); FREE clips at the edges (2-4 neighbours).
struct LatticeGeometry {
    std::int32_t width = 0;
    std::int32_t height = 0;
    Boundary boundary = Boundary::TORUS;

    LatticeGeometry() = default;
    LatticeGeometry(std::int32_t w, std::int32_t h, Boundary b) : width(w), height(h), boundary(b) {
        if (w < 4 || h < 4) throw std::invalid_argument("lattice dimensions must be >= 4");
    }

    std::int64_t num_sites() const { return std::int64_t(width) * height; }

    /// Nearest-neighbour bonds: 2*W*H on the torus, W*(H-1) + (W-1)*H free.
    std::int64_t num_bonds() const {
        if (boundary == Boundary::TORUS) return 2 * num_sites();
        return std::int64_t(width) * (height - 1) + std::int64_t(width - 1) * height;
    }

    bool in_bounds(Site s) const {
        return s.x >= 0 && s.x < width && s.y >= 0 && s.y < height;
    }

    std::int32_t wrap_x(std::int32_t x) const {
        x %= width;
        return x < 0 ? x + width : x;
    }
    std::int32_t wrap_y(std::int32_t y) const {
        y %= height;
        return y < 0 ? y + height : y;
    }

    std::int32_t index(Site s) const { return s.y * width + s.x; }
    Site site(std::int32_t idx) const { return {idx % width, idx / width}; }

    /// Directions are ordered +x, -x, +y, -y.
    static constexpr int kNumDirs = 4;

    /// Neighbour index in the given direction, or -1 when it does not exist
    /// (FREE boundary only).
    std::int32_t neighbor_index(std::int32_t idx, int dir) const {
        std::int32_t x = idx % width, y = idx / width;
        switch (dir) {
            case 0: x += 1; break;
            case 1: x -= 1; break;
            case 2: y += 1; break;
            default: y -= 1; break;
        }
        if (boundary == Boundary::TORUS) {
            x = wrap_x(x);
            y = wrap_y(y);
        } else if (x < 0 || x >= width || y < 0 || y >= height) {
            return -1;
        }
        return y * width + x;
    }

    friend bool operator==(const LatticeGeometry&, const LatticeGeometry&) = default;
};

/// Spin state sigma on a finite lattice. Spins are semantically {-1,+1};
/// storage is a packed bit array (bit set = +1) in row-major site order.
class SpinConfig {
public:
    explicit SpinConfig(const LatticeGeometry& geom, int fill = -1)
        : geom_(geom), bits_((geom.num_sites() + 63) / 64, fill > 0 ? ~std::uint64_t{0} : 0) {
        if (fill > 0) mask_tail();
    }

    const LatticeGeometry& geometry() const { return geom_; }
    std::int64_t size() const { return geom_.num_sites(); }

    bool is_plus(std::int32_t idx) const {
        return (bits_[idx >> 6] >> (idx & 63)) & 1u;
    }
    int spin(std::int32_t idx) const { return is_plus(idx) ? +1 : -1; }
    int spin(Site s) const { return spin(geom_.index(s)); }

    void set_spin(std::int32_t idx, int value) {
        if (value > 0)
            bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63);
        else
            bits_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63));
    }
    void set_spin(Site s, int value) { set_spin(geom_.index(s), value); }

    void flip(std::int32_t idx) { bits_[idx >> 6] ^= std::uint64_t{1} << (idx & 63); }
    void flip(Site s) { flip(geom_.index(s)); }

    std::int64_t plus_count() const;

    /// Mean spin in [-1, 1].
    double magnetization() const {
        return double(2 * plus_count() - size()) / double(size());
    }

    const std::vector<std::uint64_t>& words() const { return bits_; }
    void set_words(std::vector<std::uint64_t> w) {
        bits_ = std::move(w);
        mask_tail();
    }

    friend bool operator==(const SpinConfig&, const SpinConfig&) = default;

private:
    void mask_tail() {
        const int rem = geom_.num_sites() & 63;
        if (rem != 0 && !bits_.empty()) bits_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    LatticeGeometry geom_;
    std::vector<std::uint64_t> bits_;
};

/// Independent Bernoulli(p_plus) spins at every site.
SpinConfig init_random(const LatticeGeometry& geom, double p_plus, Rng& rng);

/// Nearest neighbours of a site, wrapped on the torus, clipped on FREE.
/// Throws std::out_of_range for sites outside the lattice.
std::vector<Site> neighbors(const LatticeGeometry& geom, Site s);

/// Energy change of flipping the spin at the given site:
/// 2 * sum over neighbours y of sigma_site * sigma_y. Always even; in
/// {-8,-4,0,4,8} on the torus.
int delta_H(const SpinConfig& config, Site s);
int delta_H(const SpinConfig& config, std::int32_t idx);

/// Flip rate of the site under zero-temperature dynamics:
/// 1 if the flip lowers energy, 1/2 if it keeps it, 0 if it raises it.
double flip_rate(const SpinConfig& config, Site s);
double flip_rate(const SpinConfig& config, std::int32_t idx);

/// Fraction of nearest-neighbour bonds joining opposite spins.
double wall_density(const SpinConfig& config);

/// Count of bonds joining opposite spins.
std::int64_t unsatisfied_bond_count(const SpinConfig& config);

} // namespace ztis
