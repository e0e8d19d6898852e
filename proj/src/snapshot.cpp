#include "ztis/snapshot.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace ztis {

namespace {

std::string format_time(double t) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), t);
    if (ec != std::errc{}) throw std::runtime_error("failed to format snapshot time");
    return std::string(buf, end);
}

} // namespace

void save_snapshot(const std::filesystem::path& path, const SpinConfig& config,
                   const SnapshotMeta& meta) {
    const LatticeGeometry& geom = config.geometry();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path.string());

    out << "ZTIS1 " << geom.width << ' ' << geom.height << ' '
        << (geom.boundary == Boundary::TORUS ? "TORUS" : "FREE") << ' ' << format_time(meta.time)
        << ' ' << meta.master_seed << ' ' << meta.stream_id << '\n';

    const std::int64_t n = geom.num_sites();
    std::string bytes((n + 7) / 8, '\0');
    for (std::int32_t i = 0; i < n; ++i) {
        if (config.is_plus(i)) bytes[i >> 3] |= char(1u << (i & 7));
    }
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("failed to write snapshot: " + path.string());
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path.string());

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("truncated snapshot header");
    std::istringstream hs(header);
    std::string magic, boundary_tag, time_str;
    std::int32_t width = 0, height = 0;
    std::uint64_t master_seed = 0, stream_id = 0;
    hs >> magic >> width >> height >> boundary_tag >> time_str >> master_seed >> stream_id;
    if (!hs || magic != "ZTIS1") throw std::runtime_error("not a ZTIS1 snapshot: " + path.string());

    Boundary boundary;
    if (boundary_tag == "TORUS")
        boundary = Boundary::TORUS;
    else if (boundary_tag == "FREE")
        boundary = Boundary::FREE;
    else
        throw std::runtime_error("unknown boundary tag in snapshot: " + boundary_tag);

    double time = 0.0;
    auto [ptr, ec] = std::from_chars(time_str.data(), time_str.data() + time_str.size(), time);
    if (ec != std::errc{} || ptr != time_str.data() + time_str.size())
        throw std::runtime_error("bad time field in snapshot header");

    LatticeGeometry geom(width, height, boundary);
    const std::int64_t n = geom.num_sites();
    std::string bytes((n + 7) / 8, '\0');
    in.read(bytes.data(), std::streamsize(bytes.size()));
    if (in.gcount() != std::streamsize(bytes.size()))
        throw std::runtime_error("truncated snapshot payload: " + path.string());

    SpinConfig config(geom, -1);
    for (std::int32_t i = 0; i < n; ++i) {
        if ((bytes[i >> 3] >> (i & 7)) & 1) config.set_spin(i, +1);
    }
    return Snapshot{std::move(config), SnapshotMeta{time, master_seed, stream_id}};
}

} // namespace ztis
