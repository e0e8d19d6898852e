#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ztis/clusters.hpp"
#include "ztis/contours.hpp"
#include "ztis/dynamics.hpp"
#include "ztis/experiments.hpp"
#include "ztis/lattice.hpp"
#include "ztis/rng.hpp"
#include "ztis/snapshot.hpp"
#include "ztis/windows.hpp"

namespace {

using namespace ztis;

Engine parse_engine(const std::string& name) {
    if (name == "naive") return Engine::NAIVE_CLOCKS;
    if (name == "kmc") return Engine::ACTIVE_SET;
    throw CLI::ValidationError("--engine", "expected 'naive' or 'kmc'");
}

Boundary parse_boundary(const std::string& name) {
    if (name == "torus") return Boundary::TORUS;
    if (name == "free") return Boundary::FREE;
    throw CLI::ValidationError("--boundary", "expected 'torus' or 'free'");
}

/// JSONL event log: {"seq":..,"time":..,"site":..,"dH":..,"flipped":..,"coin":..}
class JsonlEventLog : public EventSink {
public:
    JsonlEventLog(const std::string& path, bool flips_only)
        : out_(path, std::ios::binary), flips_only_(flips_only) {
        if (!out_) throw std::runtime_error("cannot open event log: " + path);
    }

    void on_event(const EventRecord& ev) override {
        if (flips_only_ && !ev.flipped) return;
        nlohmann::ordered_json j;
        j["seq"] = ev.seq;
        j["time"] = ev.time;
        j["site"] = ev.site;
        j["dH"] = ev.delta_h;
        j["flipped"] = ev.flipped;
        j["coin"] = ev.coin_used;
        out_ << j.dump() << '\n';
    }

private:
    std::ofstream out_;
    bool flips_only_;
};

struct GeometryOpts {
    int size = 64;
    int width = 0, height = 0; // override size when set
    std::string boundary = "torus";

    LatticeGeometry build() const {
        const int w = width > 0 ? width : size;
        const int h = height > 0 ? height : size;
        return LatticeGeometry(w, h, parse_boundary(boundary));
    }
};

void add_geometry_options(CLI::App* cmd, GeometryOpts& g) {
    cmd->add_option("--size", g.size, "square lattice side");
    cmd->add_option("--width", g.width, "lattice width (overrides --size)");
    cmd->add_option("--height", g.height, "lattice height (overrides --size)");
    cmd->add_option("--boundary", g.boundary, "torus or free");
}

int cmd_run(std::uint64_t seed, std::uint64_t stream, const std::string& engine_name,
            const GeometryOpts& geo, double p_plus, std::vector<double> t_grid,
            const std::string& out_dir, const std::string& event_log_path,
            const std::string& granularity) {
    const LatticeGeometry geom = geo.build();
    if (t_grid.empty()) t_grid.push_back(1.0);

    Rng rng = make_rng(RngSpec{seed, stream});
    SimState state(init_random(geom, p_plus, rng), parse_engine(engine_name));
    SiteStats stats(geom.num_sites());

    std::optional<JsonlEventLog> log;
    if (!event_log_path.empty()) {
        if (granularity != "flips" && granularity != "all")
            throw CLI::ValidationError("--event-granularity", "expected 'flips' or 'all'");
        log.emplace(event_log_path, granularity == "flips");
    }

    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    std::cout << "t,wall_density,magnetization,persistence\n";
    std::vector<Observer> observers;
    std::size_t probe_index = 0;
    for (const double t : t_grid) {
        observers.push_back(Observer{t, [&, t](double, const SimState& s) {
            std::cout << format_double(t) << ',' << format_double(wall_density(s.config()))
                      << ',' << format_double(s.config().magnetization()) << ','
                      << format_double(stats.persistence_fraction()) << '\n';
            if (!out_dir.empty()) {
                char name[64];
                std::snprintf(name, sizeof name, "snap_t%02zu.ztis", probe_index);
                save_snapshot(std::filesystem::path(out_dir) / name, s.config(),
                              SnapshotMeta{t, seed, stream});
            }
            ++probe_index;
        }});
    }

    const RunResult rr =
        run_until(state, t_grid.back(), observers, stats, rng, log ? &*log : nullptr);
    std::cerr << "events: " << rr.events << "  flips: " << rr.flips;
    if (rr.absorbed) std::cerr << "  absorbed at t = " << format_double(rr.absorbed_time);
    std::cerr << '\n';
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
    const EnsembleResult res = run_ensemble(cfg);
    for (const std::string& w : res.warnings) std::cerr << "warning: " << w << '\n';
    if (cfg.out_dir.empty()) {
        std::cout << stats_csv_text(res.stats);
    } else {
        for (const std::string& f : res.files_written) std::cerr << "wrote " << f << '\n';
    }
    if (cfg.do_recurrence) {
        const RecurrenceSummary s = recurrence_summary(res.recurrence);
        std::cerr << "recurrence: " << s.n_replicas << " replicas, " << s.n_absorbed
                  << " absorbed, P(saw both constants) = "
                  << format_double(s.fraction_both_constants) << '\n';
    }
    int n_absorbed = 0;
    for (const ReplicaSeries& r : res.raw) n_absorbed += r.absorbed ? 1 : 0;
    std::cerr << "replicas: " << res.raw.size() << " (" << n_absorbed << " absorbed)\n";
    return 0;
}

int cmd_analyze(const std::vector<std::string>& paths) {
    std::cout << "time,n_clusters,max_cluster,center_cluster,r_star_min,r_star_max,wraps\n";
    for (const std::string& path : paths) {
        const Snapshot snap = load_snapshot(path);
        const LatticeGeometry& geom = snap.config.geometry();
        const ClusterMap cm = label_clusters(snap.config);
        const Site center{geom.width / 2, geom.height / 2};
        std::int64_t max_cluster = 0;
        for (const ClusterInfo& c : cm.clusters) max_cluster = std::max(max_cluster, c.size);
        const auto rmin = r_star_min(cm, snap.config, center);
        const auto rmax = r_star_max(cm, snap.config, center);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::cout << format_double(snap.meta.time) << ',' << cm.n_clusters() << ','
                  << max_cluster << ',' << cm.cluster_at(center).size << ','
                  << format_double(rmin.value_or(nan)) << ','
                  << format_double(rmax.value_or(nan)) << ','
                  << (wrapping_report(cm).any_wraps ? 1 : 0) << '\n';
    }
    return 0;
}

int cmd_classify(const std::string& path, const std::vector<int>& center, int L) {
    const Snapshot snap = load_snapshot(path);
    const LatticeGeometry& geom = snap.config.geometry();
    const Site c = center.size() == 2 ? Site{center[0], center[1]}
                                      : Site{geom.width / 2, geom.height / 2};
    const Window window{c, L};
    if (!window_valid(geom, window)) {
        std::cerr << "window of half-width " << L << " at (" << c.x << "," << c.y
                  << ") does not fit the lattice\n";
        return 1;
    }

    const std::vector<DomainWall> walls = decompose_walls(snap.config, window);
    const auto reason = classify_e_absent(snap.config, window);

    nlohmann::ordered_json j;
    j["M_L"] = corner_count(snap.config, window);
    nlohmann::ordered_json wall_list = nlohmann::ordered_json::array();
    for (const DomainWall& w : walls) {
        nlohmann::ordered_json wj;
        wj["class"] = to_string(w.kind);
        wj["corners"] = w.direction_changes;
        wj["rect"] = {w.rect.i_min, w.rect.i_max, w.rect.j_min, w.rect.j_max};
        wall_list.push_back(std::move(wj));
    }
    j["walls"] = std::move(wall_list);
    if (reason) j["e_absent"] = to_string(*reason);
    else j["e_absent"] = nullptr;
    j["bound_ok"] = check_corner_bound(snap.config, window);
    std::cout << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-temperature Ising ferromagnet: exact dynamics and contour analysis"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "simulate one trajectory, print probes, "
                                              "optionally write snapshots and an event log");
    std::uint64_t run_seed = 1, run_stream = 0;
    std::string run_engine = "kmc";
    GeometryOpts run_geo;
    double run_p_plus = 0.5;
    std::vector<double> run_t_grid;
    std::string run_out, run_event_log, run_granularity = "flips";
    run_cmd->add_option("--seed", run_seed, "master seed");
    run_cmd->add_option("--stream", run_stream, "stream id (replica index)");
    run_cmd->add_option("--engine", run_engine, "naive or kmc");
    add_geometry_options(run_cmd, run_geo);
    run_cmd->add_option("--p-plus", run_p_plus, "initial +1 density");
    run_cmd->add_option("--t-grid", run_t_grid, "probe times")->delimiter(',');
    run_cmd->add_option("--out", run_out, "snapshot output directory");
    run_cmd->add_option("--event-log", run_event_log, "JSONL event log path");
    run_cmd->add_option("--event-granularity", run_granularity, "flips (default) or all");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "run a replicated ensemble and aggregate");
    std::string sweep_config;
    std::uint64_t sweep_seed = 1;
    std::string sweep_engine = "kmc";
    GeometryOpts sweep_geo;
    double sweep_p_plus = 0.5;
    std::vector<double> sweep_t_grid;
    int sweep_replicas = 0, sweep_threads = 0, sweep_offset = -1;
    std::vector<int> sweep_ls;
    std::string sweep_out, sweep_observables;
    bool sweep_snapshots = false;
    sweep_cmd->add_option("--config", sweep_config, "key = value config file");
    sweep_cmd->add_option("--seed", sweep_seed, "master seed");
    sweep_cmd->add_option("--engine", sweep_engine, "naive or kmc");
    add_geometry_options(sweep_cmd, sweep_geo);
    sweep_cmd->add_option("--p-plus", sweep_p_plus, "initial +1 density");
    sweep_cmd->add_option("--t-grid", sweep_t_grid, "probe times")->delimiter(',');
    sweep_cmd->add_option("--replicas", sweep_replicas, "number of replicas");
    sweep_cmd->add_option("--replica-offset", sweep_offset, "first stream id");
    sweep_cmd->add_option("--L", sweep_ls, "window half-widths")->delimiter(',');
    sweep_cmd->add_option("--threads", sweep_threads, "worker threads");
    sweep_cmd->add_option("--observables", sweep_observables,
                          "comma list: walls,corners,windows,clusters,persistence,recurrence");
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_flag("--snapshots", sweep_snapshots, "write per-probe snapshots");

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "recompute cluster statistics "
                                                      "from snapshot files");
    std::vector<std::string> analyze_paths;
    analyze_cmd->add_option("snapshots", analyze_paths, "ZTIS1 snapshot files")
        ->required()
        ->expected(-1);

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "classify one observation window "
                                                        "of a snapshot");
    std::string classify_path;
    std::vector<int> classify_center;
    int classify_l = 2;
    classify_cmd->add_option("snapshot", classify_path, "ZTIS1 snapshot file")->required();
    classify_cmd->add_option("--center", classify_center, "window center x,y "
                                                          "(default: lattice center)")
        ->delimiter(',')
        ->expected(2);
    classify_cmd->add_option("--L", classify_l, "window half-width");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return cmd_run(run_seed, run_stream, run_engine, run_geo, run_p_plus, run_t_grid,
                           run_out, run_event_log, run_granularity);
        if (sweep_cmd->parsed()) {
            ExperimentConfig cfg;
            if (!sweep_config.empty()) cfg = parse_config_file(sweep_config);
            if (sweep_cmd->count("--seed")) cfg.master_seed = sweep_seed;
            if (sweep_cmd->count("--engine")) cfg.engine = parse_engine(sweep_engine);
            if (sweep_cmd->count("--size") || sweep_cmd->count("--width") ||
                sweep_cmd->count("--height") || sweep_cmd->count("--boundary"))
                cfg.geom = sweep_geo.build();
            if (sweep_cmd->count("--p-plus")) cfg.p_plus = sweep_p_plus;
            if (sweep_cmd->count("--t-grid")) cfg.probe_times = sweep_t_grid;
            if (sweep_cmd->count("--replicas")) cfg.n_replicas = sweep_replicas;
            if (sweep_cmd->count("--replica-offset")) cfg.replica_offset = sweep_offset;
            if (sweep_cmd->count("--L")) cfg.window_Ls = sweep_ls;
            if (sweep_cmd->count("--threads")) cfg.n_threads = sweep_threads;
            if (sweep_cmd->count("--observables")) {
                ExperimentConfig parsed =
                    parse_config_text("observables = " + sweep_observables + "\n");
                cfg.do_walls = parsed.do_walls;
                cfg.do_corners = parsed.do_corners;
                cfg.do_windows = parsed.do_windows;
                cfg.do_clusters = parsed.do_clusters;
                cfg.do_persistence = parsed.do_persistence;
                cfg.do_recurrence = parsed.do_recurrence;
            }
            if (sweep_cmd->count("--out")) cfg.out_dir = sweep_out;
            if (sweep_snapshots) cfg.write_snapshots = true;
            return cmd_sweep(cfg);
        }
        if (analyze_cmd->parsed()) return cmd_analyze(analyze_paths);
        if (classify_cmd->parsed()) return cmd_classify(classify_path, classify_center, classify_l);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
