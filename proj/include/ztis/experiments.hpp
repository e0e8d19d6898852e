#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ztis/clusters.hpp"
#include "ztis/contours.hpp"
#include "ztis/dynamics.hpp"
#include "ztis/lattice.hpp"
#include "ztis/windows.hpp"

namespace ztis {

struct ExperimentConfig {
    LatticeGeometry geom{64, 64, Boundary::TORUS};
    double p_plus = 0.5;
    Engine engine = Engine::ACTIVE_SET;
    std::vector<double> probe_times{0.0};
    int n_replicas = 1;
    /// Stream ids run replica_offset .. replica_offset + n_replicas - 1, so
    /// an ensemble can be split across invocations without changing any
    /// replica's trajectory.
    int replica_offset = 0;
    std::vector<int> window_Ls{2};
    std::uint64_t master_seed = 1;
    int n_threads = 1;

    bool do_walls = true;
    bool do_corners = true;
    bool do_windows = true;
    bool do_clusters = true;
    bool do_persistence = true;
    bool do_recurrence = false;

    std::string out_dir;         // empty: no files written
    bool write_snapshots = false;
};

/// Key = value text config ("#" comments). Keys: seed, size | width/height,
/// boundary, engine, p_plus, t_grid, replicas, replica_offset, L, threads,
/// observables, out, snapshots.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Throws on violated invariants; returns human-readable warnings (e.g. the
/// finite-size guidance t <= (min(W,H)/8)^2).
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

struct StatRecord {
    std::string observable;
    double t = 0.0;
    int L = -1; // -1: not window-scoped
    double estimate = 0.0;
    double std_error = 0.0;
    int n = 0;
    int n_excluded = 0;
};

struct RecurrenceLog {
    int replica = 0;
    int L = 0;
    bool absorbed = false;
    double absorbed_time = 0.0;
    double horizon = 0.0;
    WindowClass initial_class = WindowClass::OTHER;
    WindowClass final_class = WindowClass::OTHER;
    std::vector<std::pair<double, WindowClass>> transitions; // starts at t=0
    std::array<std::int64_t, kNumWindowClasses> visits{};
    std::array<double, kNumWindowClasses> occupation{};
};

/// Classifies the center window after every flip that touches it and records
/// the class transitions. Occupation times partition [0, horizon].
class RecurrenceTracker : public EventSink {
public:
    RecurrenceTracker(const SpinConfig& initial, Window window);

    void on_event(const EventRecord& event) override;
    RecurrenceLog finalize(double horizon) const;

private:
    const SpinConfig& config_;
    Window window_;
    WindowClass current_;
    double last_change_ = 0.0;
    std::vector<std::pair<double, WindowClass>> transitions_;
    std::array<std::int64_t, kNumWindowClasses> visits_{};
    std::array<double, kNumWindowClasses> occupation_{};
};

/// Raw per-replica observable series (one value per probe time), kept so
/// split-ensemble pooling and snapshot-recompute checks can be exact.
struct ReplicaSeries {
    int replica = 0;
    bool absorbed = false;
    double absorbed_time = 0.0;
    std::vector<double> wall_density;
    std::vector<double> corner_density;
    std::vector<double> magnetization;
    std::vector<double> persistence;
    std::vector<double> center_cluster_size;
    std::vector<double> r_min, r_max;          // NaN when excluded/undefined
    std::vector<std::uint8_t> radius_excluded; // diameter rule or no boundary
    std::vector<std::uint8_t> any_wrap;
    /// Per probe x per L (probe-major): window-event indicator means over the
    /// non-overlapping window grid, plus window-class fractions.
    std::vector<std::array<double, 7>> window_events;
    std::vector<std::array<double, kNumWindowClasses>> window_class_fractions;
};

struct EnsembleResult {
    ExperimentConfig cfg;
    std::vector<std::string> warnings;
    std::vector<StatRecord> stats;
    std::vector<ReplicaSeries> raw;
    std::vector<RecurrenceLog> recurrence;
    std::vector<std::string> files_written;
};

/// Runs n_replicas independent trajectories (stream id = replica index) on a
/// worker pool, evaluates observables exactly at the probe times, and merges
/// results in replica order, so output is identical for any thread count.
/// With out_dir set, writes stats.csv, recurrence.jsonl (when enabled) and
/// ZTIS1 snapshots (when enabled); an I/O failure aborts after writing a
/// MANIFEST.partial listing the files completed so far.
EnsembleResult run_ensemble(const ExperimentConfig& cfg);

/// Records with the given observable name, in probe order.
std::vector<StatRecord> select_records(const std::vector<StatRecord>& records,
                                       const std::string& observable, int L = -1);

std::vector<StatRecord> estimate_corner_density(const std::vector<StatRecord>& records);
std::vector<StatRecord> estimate_window_probs(const std::vector<StatRecord>& records, int L);

double persistence_fraction(const SiteStats& stats);

struct PowerLawFit {
    bool ok = false;
    std::string message;
    double slope = 0.0;
    double intercept = 0.0; // log-log intercept
    double r_squared = 0.0;
};

/// Least squares on (log t, log y) for strictly positive samples. Refuses
/// fits with fewer than 4 points or spanning less than 1.5 decades in t.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series);
PowerLawFit fit_wall_density_exponent(const std::vector<StatRecord>& records);

struct RecurrenceSummary {
    int n_replicas = 0;
    int n_absorbed = 0;
    std::array<std::int64_t, kNumWindowClasses> total_visits{};
    std::array<double, kNumWindowClasses> total_occupation{};
    std::array<int, kNumWindowClasses> replicas_visiting{};
    std::array<int, kNumWindowClasses> non_absorbed_visiting{};
    double fraction_both_constants = 0.0;      // over all replicas
    double fraction_stripe_or_step = 0.0;
    /// Fraction of non-absorbed replicas visiting the class.
    double non_absorbed_fraction(WindowClass cls) const {
        const int denom = n_replicas - n_absorbed;
        return denom > 0 ? double(non_absorbed_visiting[std::size_t(cls)]) / denom : 0.0;
    }
};

RecurrenceSummary recurrence_summary(const std::vector<RecurrenceLog>& logs);

std::string stats_csv_text(const std::vector<StatRecord>& records);
std::string recurrence_jsonl_text(const std::vector<RecurrenceLog>& logs);

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double value);

/// Centers of non-overlapping valid windows of half-width L, spaced 2L+1,
/// row-major. Empty when no window fits.
std::vector<Site> window_grid(const LatticeGeometry& geom, int L);

} // namespace ztis
