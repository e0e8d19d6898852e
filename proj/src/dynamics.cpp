#include "ztis/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ztis {

SimState::SimState(SpinConfig config, Engine engine)
    : config_(std::move(config)), engine_(engine) {
    const auto& geom = config_.geometry();
    const std::int64_t n = geom.num_sites();
    nbr_.resize(std::size_t(n));
    for (std::int64_t i = 0; i < n; ++i)
        for (int d = 0; d < LatticeGeometry::kNumDirs; ++d)
            nbr_[std::size_t(i)][std::size_t(d)] = geom.neighbor_index(std::int32_t(i), d);
    rate_class_.assign(std::size_t(n), RateClass::NONE);
    bucket_pos_.assign(std::size_t(n), -1);
    rebuild_buckets();
}

int SimState::site_delta_h(std::int32_t idx) const {
    const int s = config_.spin(idx);
    int nbr_sum = 0;
    for (int d = 0; d < LatticeGeometry::kNumDirs; ++d) {
        const std::int32_t j = nbr_[std::size_t(idx)][std::size_t(d)];
        if (j >= 0) nbr_sum += config_.spin(j);
    }
    return 2 * s * nbr_sum;
}

void SimState::rebuild_buckets() {
    bucket_full_.clear();
    bucket_half_.clear();
    const std::int64_t n = config_.geometry().num_sites();
    for (std::int32_t i = 0; i < n; ++i) {
        const int dh = site_delta_h(i);
        RateClass cls = dh < 0 ? RateClass::FULL : dh == 0 ? RateClass::HALF : RateClass::NONE;
        rate_class_[std::size_t(i)] = cls;
        bucket_pos_[std::size_t(i)] = -1;
        if (cls != RateClass::NONE) bucket_insert(i, cls);
    }
}

void SimState::bucket_insert(std::int32_t site, RateClass cls) {
    auto& bucket = cls == RateClass::FULL ? bucket_full_ : bucket_half_;
    bucket_pos_[std::size_t(site)] = std::int32_t(bucket.size());
    bucket.push_back(site);
    rate_class_[std::size_t(site)] = cls;
}

void SimState::bucket_remove(std::int32_t site) {
    auto& bucket =
        rate_class_[std::size_t(site)] == RateClass::FULL ? bucket_full_ : bucket_half_;
    const std::int32_t pos = bucket_pos_[std::size_t(site)];
    const std::int32_t moved = bucket.back();
    bucket[std::size_t(pos)] = moved;
    bucket_pos_[std::size_t(moved)] = pos;
    bucket.pop_back();
    bucket_pos_[std::size_t(site)] = -1;
    rate_class_[std::size_t(site)] = RateClass::NONE;
}

void SimState::reclassify(std::int32_t site) {
    const int dh = site_delta_h(site);
    const RateClass want =
        dh < 0 ? RateClass::FULL : dh == 0 ? RateClass::HALF : RateClass::NONE;
    const RateClass have = rate_class_[std::size_t(site)];
    if (want == have) return;
    if (have != RateClass::NONE) bucket_remove(site);
    if (want != RateClass::NONE) bucket_insert(site, want);
}

void SimState::apply_flip(std::int32_t site) {
    config_.flip(site);
    reclassify(site);
    for (int d = 0; d < LatticeGeometry::kNumDirs; ++d) {
        const std::int32_t j = nbr_[std::size_t(site)][std::size_t(d)];
        if (j >= 0) reclassify(j);
    }
}

bool SimState::buckets_match_scan() const {
    const std::int64_t n = config_.geometry().num_sites();
    std::size_t full_seen = 0, half_seen = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        const int dh = site_delta_h(i);
        const RateClass want =
            dh < 0 ? RateClass::FULL : dh == 0 ? RateClass::HALF : RateClass::NONE;
        if (rate_class_[std::size_t(i)] != want) return false;
        if (want == RateClass::NONE) {
            if (bucket_pos_[std::size_t(i)] != -1) return false;
            continue;
        }
        const auto& bucket = want == RateClass::FULL ? bucket_full_ : bucket_half_;
        const std::int32_t pos = bucket_pos_[std::size_t(i)];
        if (pos < 0 || std::size_t(pos) >= bucket.size()) return false;
        if (bucket[std::size_t(pos)] != i) return false;
        ++(want == RateClass::FULL ? full_seen : half_seen);
    }
    return full_seen == bucket_full_.size() && half_seen == bucket_half_.size();
}

double SimState::peek_next_event_time(Rng& rng) {
    if (pending_event_time_ >= time_) return pending_event_time_;
    double rate;
    if (engine_ == Engine::NAIVE_CLOCKS) {
        rate = double(config_.geometry().num_sites());
    } else {
        rate = total_rate();
        if (rate == 0.0) return std::numeric_limits<double>::infinity();
    }
    pending_event_time_ = time_ + rng.exponential(rate);
    return pending_event_time_;
}

StepResult step_naive(SimState& state, Rng& rng) {
    const double t_next = state.peek_next_event_time(rng);
    state.time_ = t_next;
    state.pending_event_time_ = -1.0;
    const std::int64_t n = state.config_.geometry().num_sites();
    const std::int32_t site = std::int32_t(rng.uniform_index(std::uint64_t(n)));
    const int dh = state.site_delta_h(site);
    EventRecord ev;
    ev.seq = state.seq_++;
    ev.time = state.time_;
    ev.site = site;
    ev.delta_h = dh;
    if (dh < 0) {
        ev.flipped = true;
    } else if (dh == 0) {
        ev.coin_used = true;
        ev.flipped = rng.coin();
    }
    if (ev.flipped) state.apply_flip(site);
    return {false, ev};
}

StepResult step_kmc(SimState& state, Rng& rng) {
    const double t_next = state.peek_next_event_time(rng);
    if (t_next == std::numeric_limits<double>::infinity()) return {true, {}};
    state.time_ = t_next;
    state.pending_event_time_ = -1.0;
    // Integer-exact rate-weighted draw: each rate-1 site owns two tickets,
    // each rate-1/2 site owns one.
    const std::uint64_t n_full = state.bucket_full_.size();
    const std::uint64_t tickets = 2 * n_full + state.bucket_half_.size();
    const std::uint64_t k = rng.uniform_index(tickets);
    const std::int32_t site = k < 2 * n_full ? state.bucket_full_[std::size_t(k / 2)]
                                             : state.bucket_half_[std::size_t(k - 2 * n_full)];
    const int dh = state.site_delta_h(site);
    if (dh > 0) throw std::logic_error("active-set bucket holds a rate-0 site");
    EventRecord ev;
    ev.seq = state.seq_++;
    ev.time = state.time_;
    ev.site = site;
    ev.delta_h = dh;
    ev.flipped = true;
    state.apply_flip(site);
    return {false, ev};
}

RunResult run_until(SimState& state, double t_end, std::span<const Observer> observers,
                    SiteStats& stats, Rng& rng, EventSink* sink) {
    if (t_end < state.time_) throw std::invalid_argument("run_until: t_end is in the past");
    std::vector<const Observer*> pending;
    pending.reserve(observers.size());
    for (const Observer& obs : observers) {
        if (obs.time < state.time_)
            throw std::invalid_argument("run_until: observer time is in the past");
        if (obs.time > t_end) throw std::invalid_argument("run_until: observer time beyond t_end");
        pending.push_back(&obs);
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const Observer* a, const Observer* b) { return a->time < b->time; });

    RunResult result;
    std::size_t next_obs = 0;
    const bool naive = state.engine_ == Engine::NAIVE_CLOCKS;
    for (;;) {
        const double t_next = state.peek_next_event_time(rng);
        if (t_next == std::numeric_limits<double>::infinity() && !result.absorbed) {
            result.absorbed = true;
            result.absorbed_time = state.time_;
        }
        // Fire observers scheduled strictly before the next event; an
        // observer tied with an event sees the event applied first.
        while (next_obs < pending.size() &&
               (pending[next_obs]->time < t_next || t_next > t_end)) {
            state.time_ = pending[next_obs]->time;
            pending[next_obs]->callback(state.time_, state);
            ++next_obs;
        }
        if (t_next > t_end) break;
        EventRecord ev = naive ? step_naive(state, rng).event : step_kmc(state, rng).event;
        ++result.events;
        if (ev.flipped) {
            ++result.flips;
            stats.record_flip(ev.site, ev.time, ev.delta_h < 0);
        }
        if (sink) sink->on_event(ev);
    }
    state.time_ = t_end;
    return result;
}

namespace {

ObservableSummary summarize(const std::vector<double>& xs) {
    ObservableSummary s;
    s.n = int(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / double(xs.size());
    if (xs.size() < 2) return s;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / double(xs.size() - 1)) / std::sqrt(double(xs.size()));
    return s;
}

double z_score(const ObservableSummary& a, const ObservableSummary& b) {
    const double se = std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_);
    if (se == 0.0) return a.mean == b.mean ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(a.mean - b.mean) / se;
}

} // namespace

double EngineAgreement::wall_density_z() const {
    return z_score(wall_density_naive, wall_density_kmc);
}

double EngineAgreement::abs_magnetization_z() const {
    return z_score(abs_magnetization_naive, abs_magnetization_kmc);
}

EngineAgreement engines_agree(const LatticeGeometry& geom, double p_plus, double t_probe,
                              int n_replicas, std::uint64_t master_seed) {
    EngineAgreement out;
    for (int arm = 0; arm < 2; ++arm) {
        const Engine engine = arm == 0 ? Engine::NAIVE_CLOCKS : Engine::ACTIVE_SET;
        std::vector<double> wall, mag, abs_mag;
        wall.reserve(std::size_t(n_replicas));
        for (int rep = 0; rep < n_replicas; ++rep) {
            Rng rng = make_rng({master_seed, std::uint64_t(2 * rep + arm)});
            SimState state(init_random(geom, p_plus, rng), engine);
            SiteStats stats(geom.num_sites());
            run_until(state, t_probe, {}, stats, rng);
            wall.push_back(wall_density(state.config()));
            const double m = state.config().magnetization();
            mag.push_back(m);
            abs_mag.push_back(std::abs(m));
        }
        if (engine == Engine::NAIVE_CLOCKS) {
            out.wall_density_naive = summarize(wall);
            out.magnetization_naive = summarize(mag);
            out.abs_magnetization_naive = summarize(abs_mag);
        } else {
            out.wall_density_kmc = summarize(wall);
            out.magnetization_kmc = summarize(mag);
            out.abs_magnetization_kmc = summarize(abs_mag);
        }
    }
    return out;
}

} // namespace ztis
