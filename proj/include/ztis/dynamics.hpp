#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "ztis/lattice.hpp"
#include "ztis/rng.hpp"

namespace ztis {

enum class Engine { NAIVE_CLOCKS, ACTIVE_SET };

/// One clock ring (NAIVE_CLOCKS) or one executed flip (ACTIVE_SET).
/// delta_h is evaluated before the flip; coin_used marks tie-breaking
/// coin consumption (NAIVE_CLOCKS only).
struct EventRecord {
    std::uint64_t seq = 0;
    double time = 0.0;
    std::int32_t site = -1;
    int delta_h = 0;
    bool flipped = false;
    bool coin_used = false;
};

/// Per-site flip accounting, accumulated from t = 0.
class SiteStats {
public:
    SiteStats() = default;
    explicit SiteStats(std::int64_t n_sites)
        : flip_count_(n_sites, 0),
          lowering_count_(n_sites, 0),
          last_flip_time_(n_sites, std::numeric_limits<double>::quiet_NaN()) {}

    void record_flip(std::int32_t site, double time, bool energy_lowering) {
        ++flip_count_[site];
        if (energy_lowering) ++lowering_count_[site];
        last_flip_time_[site] = time;
    }

    std::uint32_t flip_count(std::int32_t site) const { return flip_count_[site]; }
    std::uint32_t energy_lowering_flip_count(std::int32_t site) const {
        return lowering_count_[site];
    }
    bool persistent(std::int32_t site) const { return flip_count_[site] == 0; }
    bool has_flipped(std::int32_t site) const { return !std::isnan(last_flip_time_[site]); }
    double last_flip_time(std::int32_t site) const { return last_flip_time_[site]; }

    std::int64_t size() const { return std::int64_t(flip_count_.size()); }

    /// Fraction of sites that have never flipped.
    double persistence_fraction() const {
        std::int64_t persistent_sites = 0;
        for (std::uint32_t c : flip_count_)
            if (c == 0) ++persistent_sites;
        return double(persistent_sites) / double(flip_count_.size());
    }

    std::uint32_t max_energy_lowering_count() const {
        std::uint32_t m = 0;
        for (std::uint32_t c : lowering_count_)
            if (c > m) m = c;
        return m;
    }

private:
    std::vector<std::uint32_t> flip_count_;
    std::vector<std::uint32_t> lowering_count_;
    std::vector<double> last_flip_time_;
};

/// Receives every event applied by run_until (flips and, under NAIVE_CLOCKS,
/// non-flip rings). Used for incremental contour maintenance and event logs.
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void on_event(const EventRecord& event) = 0;
};

class SimState;

/// Callback fired at a fixed simulation time during run_until. The state
/// passed in reflects every event with time <= the observer time.
struct Observer {
    double time = 0.0;
    std::function<void(double, const SimState&)> callback;
};

struct StepResult {
    bool absorbed = false;
    EventRecord event;
};

struct RunResult {
    bool absorbed = false;
    double absorbed_time = 0.0;
    std::uint64_t events = 0;
    std::uint64_t flips = 0;
};

/// Simulation state for one trajectory: spin configuration, continuous time,
/// and (ACTIVE_SET only) the set of flippable sites split into a rate-1 and a
/// rate-1/2 bucket, maintained incrementally event by event.
class SimState {
public:
    SimState(SpinConfig config, Engine engine);

    const SpinConfig& config() const { return config_; }
    double time() const { return time_; }
    Engine engine() const { return engine_; }
    std::uint64_t next_seq() const { return seq_; }

    std::size_t bucket_full_size() const { return bucket_full_.size(); }
    std::size_t bucket_half_size() const { return bucket_half_.size(); }

    /// Total flip rate, |bucket_1| + |bucket_1/2| / 2 (ACTIVE_SET).
    double total_rate() const {
        return double(bucket_full_.size()) + 0.5 * double(bucket_half_.size());
    }

    /// Compares the incremental buckets against a from-scratch rate scan.
    bool buckets_match_scan() const;

    int site_delta_h(std::int32_t idx) const;

    friend StepResult step_naive(SimState& state, Rng& rng);
    friend StepResult step_kmc(SimState& state, Rng& rng);
    friend RunResult run_until(SimState& state, double t_end, std::span<const Observer> observers,
                               SiteStats& stats, Rng& rng, EventSink* sink);

private:
    enum class RateClass : std::uint8_t { NONE, HALF, FULL };

    void rebuild_buckets();
    void apply_flip(std::int32_t site);
    void reclassify(std::int32_t site);
    void bucket_remove(std::int32_t site);
    void bucket_insert(std::int32_t site, RateClass cls);
    double peek_next_event_time(Rng& rng);

    SpinConfig config_;
    double time_ = 0.0;
    Engine engine_;
    std::uint64_t seq_ = 0;

    std::vector<std::array<std::int32_t, 4>> nbr_; // -1 pads missing FREE neighbours

    // ACTIVE_SET bookkeeping: swap-remove arrays plus per-site class/position.
    std::vector<std::int32_t> bucket_full_;
    std::vector<std::int32_t> bucket_half_;
    std::vector<RateClass> rate_class_;
    std::vector<std::int32_t> bucket_pos_;

    // Sampled time of the next event, kept across run_until segments so a
    // trajectory does not depend on how [0, t] is partitioned into calls.
    double pending_event_time_ = -1.0; // < time_ means "not sampled yet"
};

/// One superposed-clock step: advance time by Exp(N), ring a uniform site,
/// flip it with probability 1 / (coin) / 0 for negative / zero / positive
/// energy change.
StepResult step_naive(SimState& state, Rng& rng);

/// One rejection-free step: advance time by Exp(total rate), flip a site
/// drawn proportionally to its rate, update the buckets of the site and its
/// neighbours. Returns absorbed = true (and no time advance) when no site
/// can flip.
StepResult step_kmc(SimState& state, Rng& rng);

/// Applies every event with time <= t_end in order, firing observers at their
/// scheduled times and reporting flips into stats (and, if given, every event
/// into sink). Ends with state.time() == t_end. An absorbed ACTIVE_SET state
/// ends the run early; this is recorded, not an error.
RunResult run_until(SimState& state, double t_end, std::span<const Observer> observers,
                    SiteStats& stats, Rng& rng, EventSink* sink = nullptr);

/// Two-engine cross-check: mean and standard error of wall density,
/// magnetization and |magnetization| at t_probe over n_replicas independent
/// trajectories per engine.
struct ObservableSummary {
    double mean = 0.0;
    double stderr_ = 0.0;
    int n = 0;
};

struct EngineAgreement {
    ObservableSummary wall_density_naive, wall_density_kmc;
    ObservableSummary magnetization_naive, magnetization_kmc;
    ObservableSummary abs_magnetization_naive, abs_magnetization_kmc;

    /// z-scores |mean_a - mean_b| / sqrt(se_a^2 + se_b^2)
    double wall_density_z() const;
    double abs_magnetization_z() const;
};

EngineAgreement engines_agree(const LatticeGeometry& geom, double p_plus, double t_probe,
                              int n_replicas, std::uint64_t master_seed);

} // namespace ztis
