#include "ztis/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace ztis {

namespace {

/// Union-find over sites with displacement tracking: off[s] is the position
/// of s minus the position of parent[s] in unrolled (non-wrapped)
/// coordinates. A union that closes a cycle with nonzero displacement
/// mismatch has connected a site to itself around the torus.
struct OffsetUnionFind {
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> rank;
    std::vector<std::int64_t> off_x, off_y;
    std::vector<std::uint8_t> wraps_x, wraps_y;

    explicit OffsetUnionFind(std::int64_t n)
        : parent(std::size_t(n)),
          rank(std::size_t(n), 0),
          off_x(std::size_t(n), 0),
          off_y(std::size_t(n), 0),
          wraps_x(std::size_t(n), 0),
          wraps_y(std::size_t(n), 0) {
        for (std::int64_t i = 0; i < n; ++i) parent[std::size_t(i)] = std::int32_t(i);
    }

    /// Root of a, with off_[a] rewritten relative to the root.
    std::int32_t find(std::int32_t a) {
        if (parent[std::size_t(a)] == a) return a;
        const std::int32_t root = find(parent[std::size_t(a)]);
        off_x[std::size_t(a)] += off_x[std::size_t(parent[std::size_t(a)])];
        off_y[std::size_t(a)] += off_y[std::size_t(parent[std::size_t(a)])];
        parent[std::size_t(a)] = root;
        return root;
    }

    /// Declares pos(b) = pos(a) + (dx, dy).
    void unite(std::int32_t a, std::int32_t b, int dx, int dy) {
        const std::int32_t ra = find(a);
        const std::int32_t rb = find(b);
        if (ra == rb) {
            const std::int64_t mismatch_x = off_x[std::size_t(a)] + dx - off_x[std::size_t(b)];
            const std::int64_t mismatch_y = off_y[std::size_t(a)] + dy - off_y[std::size_t(b)];
            if (mismatch_x != 0) wraps_x[std::size_t(ra)] = 1;
            if (mismatch_y != 0) wraps_y[std::size_t(ra)] = 1;
            return;
        }
        // pos(rb) = pos(b) - off(b) = pos(a) + d - off(b) = pos(ra) + off(a) + d - off(b)
        std::int64_t rx = off_x[std::size_t(a)] + dx - off_x[std::size_t(b)];
        std::int64_t ry = off_y[std::size_t(a)] + dy - off_y[std::size_t(b)];
        std::int32_t top = ra, child = rb;
        if (rank[std::size_t(ra)] < rank[std::size_t(rb)]) {
            top = rb;
            child = ra;
            rx = -rx;
            ry = -ry;
        }
        parent[std::size_t(child)] = top;
        off_x[std::size_t(child)] = rx;
        off_y[std::size_t(child)] = ry;
        wraps_x[std::size_t(top)] |= wraps_x[std::size_t(child)];
        wraps_y[std::size_t(top)] |= wraps_y[std::size_t(child)];
        if (rank[std::size_t(top)] == rank[std::size_t(child)]) ++rank[std::size_t(top)];
    }
};

} // namespace

ClusterMap label_clusters(const SpinConfig& config) {
    const LatticeGeometry& geom = config.geometry();
    const std::int64_t n = geom.num_sites();
    OffsetUnionFind uf(n);

    for (std::int32_t y = 0; y < geom.height; ++y) {
        for (std::int32_t x = 0; x < geom.width; ++x) {
            const std::int32_t idx = y * geom.width + x;
            const int s = config.spin(idx);
            if (geom.boundary == Boundary::TORUS || x + 1 < geom.width) {
                const std::int32_t east = y * geom.width + geom.wrap_x(x + 1);
                if (config.spin(east) == s) uf.unite(idx, east, 1, 0);
            }
            if (geom.boundary == Boundary::TORUS || y + 1 < geom.height) {
                const std::int32_t north = geom.wrap_y(y + 1) * geom.width + x;
                if (config.spin(north) == s) uf.unite(idx, north, 0, 1);
            }
        }
    }

    ClusterMap map;
    map.geom = geom;
    map.label.assign(std::size_t(n), 0);
    map.cluster_of.assign(std::size_t(n), -1);

    std::unordered_map<std::int32_t, std::int32_t> root_to_cluster;
    root_to_cluster.reserve(std::size_t(n) / 4 + 1);
    for (std::int32_t idx = 0; idx < n; ++idx) {
        const std::int32_t root = uf.find(idx);
        auto [it, fresh] = root_to_cluster.try_emplace(root, std::int32_t(map.clusters.size()));
        if (fresh) {
            ClusterInfo info;
            info.label = idx; // first site in scan order = smallest index
            info.sign = config.spin(idx);
            info.wraps_x = uf.wraps_x[std::size_t(root)] != 0;
            info.wraps_y = uf.wraps_y[std::size_t(root)] != 0;
            map.clusters.push_back(std::move(info));
        }
        const std::int32_t c = it->second;
        map.cluster_of[std::size_t(idx)] = c;
        map.label[std::size_t(idx)] = map.clusters[std::size_t(c)].label;
        ++map.clusters[std::size_t(c)].size;
    }

    std::vector<std::int64_t> min_x(map.clusters.size(), 0), max_x(map.clusters.size(), 0);
    std::vector<std::int64_t> min_y(map.clusters.size(), 0), max_y(map.clusters.size(), 0);
    std::vector<std::uint8_t> seen(map.clusters.size(), 0);
    for (std::int32_t idx = 0; idx < n; ++idx) {
        const std::size_t c = std::size_t(map.cluster_of[std::size_t(idx)]);
        uf.find(idx);
        const std::int64_t ux = uf.off_x[std::size_t(idx)];
        const std::int64_t uy = uf.off_y[std::size_t(idx)];
        if (!seen[c]) {
            seen[c] = 1;
            min_x[c] = max_x[c] = ux;
            min_y[c] = max_y[c] = uy;
        } else {
            min_x[c] = std::min(min_x[c], ux);
            max_x[c] = std::max(max_x[c], ux);
            min_y[c] = std::min(min_y[c], uy);
            max_y[c] = std::max(max_y[c], uy);
        }
        const int s = config.spin(idx);
        bool boundary = false;
        for (int d = 0; d < LatticeGeometry::kNumDirs && !boundary; ++d) {
            const std::int32_t nb = geom.neighbor_index(idx, d);
            boundary = nb >= 0 && config.spin(nb) != s;
        }
        if (boundary) map.clusters[c].inner_boundary.push_back(idx);
    }
    for (std::size_t c = 0; c < map.clusters.size(); ++c) {
        map.clusters[c].extent_x = max_x[c] - min_x[c] + 1;
        map.clusters[c].extent_y = max_y[c] - min_y[c] + 1;
        if (geom.boundary == Boundary::FREE) {
            // Crossing semantics: unrolled coordinates are actual
            // coordinates, so a span equal to the lattice size means the
            // cluster touches both opposite edges.
            map.clusters[c].wraps_x = map.clusters[c].extent_x == geom.width;
            map.clusters[c].wraps_y = map.clusters[c].extent_y == geom.height;
        }
    }
    return map;
}

namespace {

double torus_distance(const LatticeGeometry& geom, Site a, Site b) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    if (geom.boundary == Boundary::TORUS) {
        dx = std::min(dx, geom.width - dx);
        dy = std::min(dy, geom.height - dy);
    }
    return std::sqrt(dx * dx + dy * dy);
}

std::optional<double> r_star(const ClusterMap& map, const SpinConfig& config, Site site,
                             bool take_max) {
    const LatticeGeometry& geom = config.geometry();
    if (!geom.in_bounds(site)) throw std::out_of_range("site outside the lattice");
    const ClusterInfo& info = map.cluster_at(site);
    if (info.inner_boundary.empty()) return std::nullopt;
    double best = take_max ? 0.0 : std::numeric_limits<double>::infinity();
    for (const std::int32_t b : info.inner_boundary) {
        const double d = torus_distance(geom, site, geom.site(b));
        best = take_max ? std::max(best, d) : std::min(best, d);
    }
    return best;
}

} // namespace

std::optional<double> r_star_min(const ClusterMap& map, const SpinConfig& config, Site site) {
    return r_star(map, config, site, false);
}

std::optional<double> r_star_max(const ClusterMap& map, const SpinConfig& config, Site site) {
    return r_star(map, config, site, true);
}

WrappingReport wrapping_report(const ClusterMap& map) {
    WrappingReport report;
    report.crossing_semantics = map.geom.boundary == Boundary::FREE;
    for (const ClusterInfo& info : map.clusters) {
        if (!(info.wraps_x || info.wraps_y)) continue;
        report.any_wraps = true;
        (info.sign > 0 ? report.plus_wrapping : report.minus_wrapping) += 1;
    }
    return report;
}

} // namespace ztis
