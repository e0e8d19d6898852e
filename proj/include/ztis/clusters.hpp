#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ztis/lattice.hpp"

namespace ztis {

struct ClusterInfo {
    std::int32_t label = 0; // smallest site index in the cluster
    std::int64_t size = 0;
    int sign = 0;
    bool wraps_x = false; // TORUS: wraps the axis; FREE: spans edge to edge
    bool wraps_y = false;
    /// Sites of the cluster with at least one opposite-sign neighbour.
    std::vector<std::int32_t> inner_boundary;
    /// Extents of the unrolled (offset-tracked) coordinates; meaningful for
    /// non-wrapping clusters, where extent < lattice size.
    std::int64_t extent_x = 0;
    std::int64_t extent_y = 0;
};

struct ClusterMap {
    LatticeGeometry geom;
    std::vector<std::int32_t> label;      // per site: smallest site index in its cluster
    std::vector<std::int32_t> cluster_of; // per site: index into clusters
    std::vector<ClusterInfo> clusters;    // ordered by label

    std::int64_t n_clusters() const { return std::int64_t(clusters.size()); }
    const ClusterInfo& cluster_at(Site s) const {
        return clusters[std::size_t(cluster_of[std::size_t(geom.index(s))])];
    }
};

/// Connected components of constant sign under nearest-neighbour adjacency.
/// Union-find carries per-site displacement offsets, so a union of two sites
/// already connected through an inconsistent displacement detects a cluster
/// wrapping the torus (displacements differ by a multiple of the lattice
/// size).
ClusterMap label_clusters(const SpinConfig& config);

/// Euclidean distance (torus: minimum over wrapped images) from the site to
/// the closest / farthest inner-boundary site of its own cluster. nullopt
/// iff the cluster has no boundary (constant configuration).
std::optional<double> r_star_min(const ClusterMap& map, const SpinConfig& config, Site site);
std::optional<double> r_star_max(const ClusterMap& map, const SpinConfig& config, Site site);

struct WrappingReport {
    bool any_wraps = false;
    int plus_wrapping = 0;
    int minus_wrapping = 0;
    /// FREE geometry reports edge-to-edge crossing instead of wrapping.
    bool crossing_semantics = false;
};

WrappingReport wrapping_report(const ClusterMap& map);

} // namespace ztis
