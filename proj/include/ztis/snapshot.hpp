#pragma once

#include <filesystem>

#include "ztis/lattice.hpp"
#include "ztis/rng.hpp"

namespace ztis {

/// Provenance carried by a snapshot file.
struct SnapshotMeta {
    double time = 0.0;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

struct Snapshot {
    SpinConfig config;
    SnapshotMeta meta;
};

/// Snapshot file format "ZTIS1": one ASCII header line
///   ZTIS1 <width> <height> <TORUS|FREE> <time> <master_seed> <stream_id>\n
/// with the time printed as a shortest-round-trip decimal, followed by the
/// spins as row-major packed bits (LSB first within each byte, bit set = +1,
/// final byte zero-padded). Round-trips are bit-exact.
void save_snapshot(const std::filesystem::path& path, const SpinConfig& config,
                   const SnapshotMeta& meta);

Snapshot load_snapshot(const std::filesystem::path& path);

} // namespace ztis
