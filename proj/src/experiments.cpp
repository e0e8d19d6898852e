#include "ztis/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ztis/snapshot.hpp"

namespace ztis {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string::size_type start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
    throw std::invalid_argument("config key '" + key + "': expected " + want + ", got '" + value +
                                "'");
}

long long parse_int(const std::string& key, const std::string& value) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value, "an integer");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value, "an unsigned integer");
    return x;
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) bad_value(key, value, "a number");
        return x;
    } catch (const std::logic_error&) {
        bad_value(key, value, "a number");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    bad_value(key, value, "a boolean");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    int width = cfg.geom.width;
    int height = cfg.geom.height;
    Boundary boundary = cfg.geom.boundary;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line is not 'key = value': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "seed") {
            cfg.master_seed = parse_u64(key, value);
        } else if (key == "size") {
            width = height = int(parse_int(key, value));
        } else if (key == "width") {
            width = int(parse_int(key, value));
        } else if (key == "height") {
            height = int(parse_int(key, value));
        } else if (key == "boundary") {
            if (value == "torus") boundary = Boundary::TORUS;
            else if (value == "free") boundary = Boundary::FREE;
            else bad_value(key, value, "'torus' or 'free'");
        } else if (key == "engine") {
            if (value == "naive") cfg.engine = Engine::NAIVE_CLOCKS;
            else if (value == "kmc") cfg.engine = Engine::ACTIVE_SET;
            else bad_value(key, value, "'naive' or 'kmc'");
        } else if (key == "p_plus") {
            cfg.p_plus = parse_real(key, value);
        } else if (key == "t_grid") {
            cfg.probe_times.clear();
            for (const std::string& part : split(value, ','))
                cfg.probe_times.push_back(parse_real(key, part));
        } else if (key == "replicas") {
            cfg.n_replicas = int(parse_int(key, value));
        } else if (key == "replica_offset") {
            cfg.replica_offset = int(parse_int(key, value));
        } else if (key == "L") {
            cfg.window_Ls.clear();
            for (const std::string& part : split(value, ','))
                cfg.window_Ls.push_back(int(parse_int(key, part)));
        } else if (key == "threads") {
            cfg.n_threads = int(parse_int(key, value));
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "snapshots") {
            cfg.write_snapshots = parse_bool(key, value);
        } else if (key == "observables") {
            cfg.do_walls = cfg.do_corners = cfg.do_windows = cfg.do_clusters =
                cfg.do_persistence = cfg.do_recurrence = false;
            for (const std::string& name : split(value, ',')) {
                if (name == "walls") cfg.do_walls = true;
                else if (name == "corners") cfg.do_corners = true;
                else if (name == "windows") cfg.do_windows = true;
                else if (name == "clusters") cfg.do_clusters = true;
                else if (name == "persistence") cfg.do_persistence = true;
                else if (name == "recurrence") cfg.do_recurrence = true;
                else bad_value(key, name, "one of walls/corners/windows/clusters/persistence/recurrence");
            }
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    cfg.geom = LatticeGeometry(width, height, boundary);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
    if (cfg.probe_times.empty()) throw std::invalid_argument("probe grid is empty");
    if (cfg.probe_times.front() < 0.0)
        throw std::invalid_argument("probe times must be non-negative");
    for (std::size_t i = 1; i < cfg.probe_times.size(); ++i)
        if (!(cfg.probe_times[i] > cfg.probe_times[i - 1]))
            throw std::invalid_argument("probe times must be strictly increasing");
    if (cfg.n_replicas < 1) throw std::invalid_argument("need at least one replica");
    if (cfg.replica_offset < 0) throw std::invalid_argument("replica_offset must be >= 0");
    if (cfg.n_threads < 1) throw std::invalid_argument("need at least one thread");
    if (!(cfg.p_plus >= 0.0 && cfg.p_plus <= 1.0))
        throw std::invalid_argument("p_plus must lie in [0, 1]");

    const bool needs_windows = cfg.do_windows || cfg.do_recurrence;
    if (needs_windows && cfg.window_Ls.empty())
        throw std::invalid_argument("window observables need at least one half-width L");
    for (const int L : cfg.window_Ls) {
        if (L < 1) throw std::invalid_argument("window half-width must be >= 1");
        if (needs_windows && !window_valid(cfg.geom, center_window(cfg.geom, L)))
            throw std::invalid_argument("window half-width L = " + std::to_string(L) +
                                        " does not fit the lattice with the required margin");
    }

    std::vector<std::string> warnings;
    const double side = double(std::min(cfg.geom.width, cfg.geom.height));
    const double guide = (side / 8.0) * (side / 8.0);
    if (cfg.probe_times.back() > guide)
        warnings.push_back("probe time " + format_double(cfg.probe_times.back()) +
                           " exceeds the finite-size guidance (min(width,height)/8)^2 = " +
                           format_double(guide) +
                           "; late-time statistics may feel the boundary");
    return warnings;
}

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::vector<Site> window_grid(const LatticeGeometry& geom, int L) {
    std::vector<Site> centers;
    const int stride = 2 * L + 1;
    const int margin = geom.boundary == Boundary::FREE ? 1 : 0;
    const int first = L + margin;
    const auto fits = [&](int c, int dim) { return c + L + margin <= dim - 1; };
    for (int cy = first; fits(cy, geom.height); cy += stride)
        for (int cx = first; fits(cx, geom.width); cx += stride)
            if (window_valid(geom, Window{Site{cx, cy}, L})) centers.push_back(Site{cx, cy});
    return centers;
}

RecurrenceTracker::RecurrenceTracker(const SpinConfig& initial, Window window)
    : config_(initial), window_(window), current_(classify_window(initial, window).cls) {
    transitions_.emplace_back(0.0, current_);
    visits_[std::size_t(current_)] = 1;
}

void RecurrenceTracker::on_event(const EventRecord& event) {
    if (!event.flipped) return;
    const LatticeGeometry& geom = config_.geometry();
    const Site s = geom.site(event.site);
    // Nearest-image center offset; flips outside the window cannot change its class.
    const auto near = [](int d, int n) {
        d %= n;
        if (d < 0) d += n;
        if (2 * d > n) d -= n;
        return d;
    };
    int dx = s.x - window_.center.x;
    int dy = s.y - window_.center.y;
    if (geom.boundary == Boundary::TORUS) {
        dx = near(dx, geom.width);
        dy = near(dy, geom.height);
    }
    if (std::abs(dx) > window_.L || std::abs(dy) > window_.L) return;

    const WindowClass cls = classify_window(config_, window_).cls;
    if (cls == current_) return;
    occupation_[std::size_t(current_)] += event.time - last_change_;
    last_change_ = event.time;
    current_ = cls;
    ++visits_[std::size_t(cls)];
    transitions_.emplace_back(event.time, cls);
}

RecurrenceLog RecurrenceTracker::finalize(double horizon) const {
    RecurrenceLog log;
    log.L = window_.L;
    log.horizon = horizon;
    log.initial_class = transitions_.front().second;
    log.final_class = current_;
    log.transitions = transitions_;
    log.visits = visits_;
    log.occupation = occupation_;
    log.occupation[std::size_t(current_)] += horizon - last_change_;
    return log;
}

namespace {

struct ReplicaOutput {
    ReplicaSeries series;
    RecurrenceLog recurrence;
    std::vector<SpinConfig> snapshots; // one per probe when requested
};

ReplicaOutput run_replica(const ExperimentConfig& cfg, int rep) {
    const std::uint64_t stream = std::uint64_t(cfg.replica_offset) + std::uint64_t(rep);
    Rng rng = make_rng(RngSpec{cfg.master_seed, stream});
    SimState state(init_random(cfg.geom, cfg.p_plus, rng), cfg.engine);
    SiteStats stats(cfg.geom.num_sites());

    ReplicaOutput out;
    ReplicaSeries& sr = out.series;
    sr.replica = int(stream);

    std::optional<RecurrenceTracker> tracker;
    if (cfg.do_recurrence)
        tracker.emplace(state.config(), center_window(cfg.geom, cfg.window_Ls.front()));

    std::vector<std::vector<Site>> grids;
    if (cfg.do_windows)
        for (const int L : cfg.window_Ls) grids.push_back(window_grid(cfg.geom, L));

    const Site center{cfg.geom.width / 2, cfg.geom.height / 2};
    const std::int64_t diameter_cut = std::min(cfg.geom.width, cfg.geom.height) / 2;

    const auto measure = [&](double, const SimState& s) {
        const SpinConfig& config = s.config();
        if (cfg.do_walls) sr.wall_density.push_back(wall_density(config));
        if (cfg.do_corners) {
            const ContourSet cs = extract_contours(config);
            sr.corner_density.push_back(double(cs.vertices_with_corner()) /
                                        double(cs.num_dual_vertices()));
        }
        sr.magnetization.push_back(config.magnetization());
        if (cfg.do_persistence) sr.persistence.push_back(stats.persistence_fraction());
        if (cfg.do_clusters) {
            const ClusterMap cm = label_clusters(config);
            sr.center_cluster_size.push_back(double(cm.cluster_at(center).size));
            sr.any_wrap.push_back(wrapping_report(cm).any_wraps ? 1 : 0);
            std::int64_t max_extent = 0;
            for (const ClusterInfo& c : cm.clusters)
                max_extent = std::max({max_extent, c.extent_x, c.extent_y});
            const auto rmin = r_star_min(cm, config, center);
            const bool excluded = max_extent >= diameter_cut || !rmin.has_value();
            sr.radius_excluded.push_back(excluded ? 1 : 0);
            if (excluded) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                sr.r_min.push_back(nan);
                sr.r_max.push_back(nan);
            } else {
                sr.r_min.push_back(*rmin);
                sr.r_max.push_back(*r_star_max(cm, config, center));
            }
        }
        if (cfg.do_windows) {
            for (std::size_t li = 0; li < grids.size(); ++li) {
                std::array<double, 7> ev{};
                std::array<double, std::size_t(kNumWindowClasses)> fr{};
                for (const Site c : grids[li]) {
                    const Window w{c, cfg.window_Ls[li]};
                    const WindowEvents e = window_probability_events(config, w);
                    ev[0] += e.c_plus;
                    ev[1] += e.c_minus;
                    ev[2] += e.a_l;
                    ev[3] += e.v_plus;
                    ev[4] += e.h_plus;
                    ev[5] += e.v_minus;
                    ev[6] += e.h_minus;
                    fr[std::size_t(classify_window(config, w).cls)] += 1.0;
                }
                if (!grids[li].empty()) {
                    const double m = double(grids[li].size());
                    for (double& v : ev) v /= m;
                    for (double& v : fr) v /= m;
                }
                sr.window_events.push_back(ev);
                sr.window_class_fractions.push_back(fr);
            }
        }
        if (cfg.write_snapshots) out.snapshots.push_back(config);
    };

    std::vector<Observer> observers;
    observers.reserve(cfg.probe_times.size());
    for (const double t : cfg.probe_times) observers.push_back(Observer{t, measure});

    const RunResult rr = run_until(state, cfg.probe_times.back(), observers, stats, rng,
                                   tracker ? &*tracker : nullptr);
    sr.absorbed = rr.absorbed;
    sr.absorbed_time = rr.absorbed_time;
    if (tracker) {
        out.recurrence = tracker->finalize(cfg.probe_times.back());
        out.recurrence.replica = int(stream);
        out.recurrence.absorbed = rr.absorbed;
        out.recurrence.absorbed_time = rr.absorbed_time;
    }
    return out;
}

struct MeanSe {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double se = std::numeric_limits<double>::quiet_NaN();
    int n = 0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    const int n = int(xs.size());
    if (n == 0) return {};
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / n;
    if (n == 1) return {mean, 0.0, 1};
    double ss = 0.0;
    for (const double x : xs) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (double(n) - 1.0) / double(n)), n};
}

double median(std::vector<double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::vector<StatRecord> aggregate(const ExperimentConfig& cfg,
                                  const std::vector<ReplicaSeries>& raw) {
    std::vector<StatRecord> recs;
    const std::size_t n_probes = cfg.probe_times.size();
    const std::size_t n_ls = cfg.window_Ls.size();

    const auto emit = [&](const std::string& name, std::size_t k, const std::vector<double>& xs,
                          int L, int excluded) {
        const MeanSe m = mean_se(xs);
        recs.push_back(StatRecord{name, cfg.probe_times[k], L, m.mean, m.se, m.n, excluded});
    };
    const auto emit_series = [&](const std::string& name,
                                 const std::vector<double> ReplicaSeries::* member) {
        for (std::size_t k = 0; k < n_probes; ++k) {
            std::vector<double> xs;
            xs.reserve(raw.size());
            for (const ReplicaSeries& r : raw) xs.push_back((r.*member)[k]);
            emit(name, k, xs, -1, 0);
        }
    };

    if (cfg.do_walls) emit_series("wall_density", &ReplicaSeries::wall_density);
    if (cfg.do_corners) emit_series("corner_density", &ReplicaSeries::corner_density);
    emit_series("magnetization", &ReplicaSeries::magnetization);
    for (std::size_t k = 0; k < n_probes; ++k) {
        std::vector<double> xs;
        xs.reserve(raw.size());
        for (const ReplicaSeries& r : raw) xs.push_back(std::abs(r.magnetization[k]));
        emit("abs_magnetization", k, xs, -1, 0);
    }
    if (cfg.do_persistence) emit_series("persistence", &ReplicaSeries::persistence);

    if (cfg.do_clusters) {
        emit_series("center_cluster_size", &ReplicaSeries::center_cluster_size);
        for (std::size_t k = 0; k < n_probes; ++k) {
            std::vector<double> xs;
            xs.reserve(raw.size());
            for (const ReplicaSeries& r : raw) xs.push_back(r.center_cluster_size[k]);
            const MeanSe m = mean_se(xs);
            recs.push_back(StatRecord{"center_cluster_size_median", cfg.probe_times[k], -1,
                                      median(std::move(xs)), m.se, m.n, 0});
        }
        for (const char* name : {"r_star_min", "r_star_max"}) {
            const bool is_min = std::string(name) == "r_star_min";
            for (std::size_t k = 0; k < n_probes; ++k) {
                std::vector<double> xs;
                int excluded = 0;
                for (const ReplicaSeries& r : raw) {
                    if (r.radius_excluded[k]) {
                        ++excluded;
                        continue;
                    }
                    xs.push_back(is_min ? r.r_min[k] : r.r_max[k]);
                }
                emit(name, k, xs, -1, excluded);
            }
        }
        for (std::size_t k = 0; k < n_probes; ++k) {
            std::vector<double> xs;
            xs.reserve(raw.size());
            for (const ReplicaSeries& r : raw) xs.push_back(double(r.any_wrap[k]));
            emit("wrap_fraction", k, xs, -1, 0);
        }
    }

    if (cfg.do_windows) {
        static constexpr const char* kEventNames[7] = {"P_C_plus",  "P_C_minus", "P_A",
                                                       "P_V_plus",  "P_H_plus",  "P_V_minus",
                                                       "P_H_minus"};
        for (std::size_t li = 0; li < n_ls; ++li) {
            const int L = cfg.window_Ls[li];
            for (int slot = 0; slot < 7; ++slot)
                for (std::size_t k = 0; k < n_probes; ++k) {
                    std::vector<double> xs;
                    xs.reserve(raw.size());
                    for (const ReplicaSeries& r : raw)
                        xs.push_back(r.window_events[k * n_ls + li][std::size_t(slot)]);
                    emit(kEventNames[slot], k, xs, L, 0);
                }
            for (int cls = 0; cls < kNumWindowClasses; ++cls)
                for (std::size_t k = 0; k < n_probes; ++k) {
                    std::vector<double> xs;
                    xs.reserve(raw.size());
                    for (const ReplicaSeries& r : raw)
                        xs.push_back(r.window_class_fractions[k * n_ls + li][std::size_t(cls)]);
                    emit(std::string("f_") + to_string(WindowClass(cls)), k, xs, L, 0);
                }
        }
    }
    return recs;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(text.data(), std::streamsize(text.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_outputs(const ExperimentConfig& cfg, EnsembleResult& result,
                   const std::vector<ReplicaOutput>& outputs) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    try {
        const fs::path stats_path = dir / "stats.csv";
        write_file(stats_path, stats_csv_text(result.stats));
        result.files_written.push_back(stats_path.string());

        if (cfg.do_recurrence) {
            const fs::path rec_path = dir / "recurrence.jsonl";
            write_file(rec_path, recurrence_jsonl_text(result.recurrence));
            result.files_written.push_back(rec_path.string());
        }

        if (cfg.write_snapshots) {
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                const std::uint64_t stream = std::uint64_t(cfg.replica_offset) + i;
                for (std::size_t k = 0; k < outputs[i].snapshots.size(); ++k) {
                    char name[64];
                    std::snprintf(name, sizeof name, "snap_r%05llu_p%02zu.ztis",
                                  static_cast<unsigned long long>(stream), k);
                    const fs::path snap_path = dir / name;
                    save_snapshot(snap_path, outputs[i].snapshots[k],
                                  SnapshotMeta{cfg.probe_times[k], cfg.master_seed, stream});
                    result.files_written.push_back(snap_path.string());
                }
            }
        }
    } catch (const std::exception& e) {
        std::ofstream manifest(dir / "MANIFEST.partial", std::ios::binary);
        for (const std::string& f : result.files_written) manifest << f << '\n';
        manifest << "# aborted: " << e.what() << '\n';
        throw;
    }
}

} // namespace

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
    EnsembleResult result;
    result.cfg = cfg;
    result.warnings = validate_config(cfg);

    const int n = cfg.n_replicas;
    std::vector<ReplicaOutput> outputs(static_cast<std::size_t>(n));
    const int n_threads = std::min(cfg.n_threads, n);
    if (n_threads <= 1) {
        for (int i = 0; i < n; ++i) outputs[std::size_t(i)] = run_replica(cfg, i);
    } else {
        std::atomic<int> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;
        const auto work = [&] {
            for (;;) {
                const int i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                try {
                    outputs[std::size_t(i)] = run_replica(cfg, i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    result.raw.reserve(std::size_t(n));
    for (ReplicaOutput& o : outputs) result.raw.push_back(std::move(o.series));
    if (cfg.do_recurrence) {
        result.recurrence.reserve(std::size_t(n));
        for (ReplicaOutput& o : outputs) result.recurrence.push_back(std::move(o.recurrence));
    }
    result.stats = aggregate(cfg, result.raw);

    if (!cfg.out_dir.empty()) write_outputs(cfg, result, outputs);
    return result;
}

std::vector<StatRecord> select_records(const std::vector<StatRecord>& records,
                                       const std::string& observable, int L) {
    std::vector<StatRecord> out;
    for (const StatRecord& r : records)
        if (r.observable == observable && r.L == L) out.push_back(r);
    return out;
}

std::vector<StatRecord> estimate_corner_density(const std::vector<StatRecord>& records) {
    return select_records(records, "corner_density");
}

std::vector<StatRecord> estimate_window_probs(const std::vector<StatRecord>& records, int L) {
    std::vector<StatRecord> out;
    for (const StatRecord& r : records)
        if (r.L == L && r.observable.rfind("P_", 0) == 0) out.push_back(r);
    return out;
}

double persistence_fraction(const SiteStats& stats) { return stats.persistence_fraction(); }

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& series) {
    PowerLawFit fit;
    std::vector<std::pair<double, double>> pts; // (log t, log y)
    for (const auto& [t, y] : series) {
        if (t <= 0.0) continue; // t = 0 carries no information on a log axis
        if (y <= 0.0) {
            fit.message = "non-positive sample at t = " + format_double(t);
            return fit;
        }
        pts.emplace_back(std::log(t), std::log(y));
    }
    if (pts.size() < 4) {
        fit.message =
            "need at least 4 positive-time points, have " + std::to_string(pts.size());
        return fit;
    }
    double x_min = pts.front().first, x_max = pts.front().first;
    for (const auto& [x, y] : pts) {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
    }
    const double decades = (x_max - x_min) / std::log(10.0);
    if (decades < 1.5) {
        fit.message = "time span covers " + format_double(decades) + " decades, need >= 1.5";
        return fit;
    }

    const double n = double(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
    fit.ok = true;
    return fit;
}

PowerLawFit fit_wall_density_exponent(const std::vector<StatRecord>& records) {
    std::vector<std::pair<double, double>> series;
    for (const StatRecord& r : select_records(records, "wall_density"))
        series.emplace_back(r.t, r.estimate);
    return fit_power_law(series);
}

RecurrenceSummary recurrence_summary(const std::vector<RecurrenceLog>& logs) {
    RecurrenceSummary s;
    s.n_replicas = int(logs.size());
    int both_constants = 0;
    int stripe_or_step = 0;
    for (const RecurrenceLog& log : logs) {
        if (log.absorbed) ++s.n_absorbed;
        for (int c = 0; c < kNumWindowClasses; ++c) {
            s.total_visits[std::size_t(c)] += log.visits[std::size_t(c)];
            s.total_occupation[std::size_t(c)] += log.occupation[std::size_t(c)];
            if (log.visits[std::size_t(c)] > 0) {
                ++s.replicas_visiting[std::size_t(c)];
                if (!log.absorbed) ++s.non_absorbed_visiting[std::size_t(c)];
            }
        }
        const auto visited = [&](WindowClass cls) {
            return log.visits[std::size_t(cls)] > 0;
        };
        if (visited(WindowClass::CONSTANT_PLUS) && visited(WindowClass::CONSTANT_MINUS))
            ++both_constants;
        if (visited(WindowClass::STRIPE_H) || visited(WindowClass::STRIPE_V) ||
            visited(WindowClass::SINGLE_STEP_WALL))
            ++stripe_or_step;
    }
    if (s.n_replicas > 0) {
        s.fraction_both_constants = double(both_constants) / s.n_replicas;
        s.fraction_stripe_or_step = double(stripe_or_step) / s.n_replicas;
    }
    return s;
}

std::string stats_csv_text(const std::vector<StatRecord>& records) {
    std::string out = "observable,t,L,estimate,stderr,n,n_excluded\n";
    for (const StatRecord& r : records) {
        out += r.observable;
        out += ',';
        out += format_double(r.t);
        out += ',';
        if (r.L >= 0) out += std::to_string(r.L);
        out += ',';
        out += format_double(r.estimate);
        out += ',';
        out += format_double(r.std_error);
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.n_excluded);
        out += '\n';
    }
    return out;
}

std::string recurrence_jsonl_text(const std::vector<RecurrenceLog>& logs) {
    std::string out;
    for (const RecurrenceLog& log : logs) {
        nlohmann::ordered_json j;
        j["replica"] = log.replica;
        j["L"] = log.L;
        j["absorbed"] = log.absorbed;
        if (log.absorbed) j["absorbed_time"] = log.absorbed_time;
        else j["absorbed_time"] = nullptr;
        j["horizon"] = log.horizon;
        j["initial_class"] = to_string(log.initial_class);
        j["final_class"] = to_string(log.final_class);
        nlohmann::ordered_json transitions = nlohmann::ordered_json::array();
        for (const auto& [t, cls] : log.transitions)
            transitions.push_back(nlohmann::ordered_json::array({t, to_string(cls)}));
        j["transitions"] = std::move(transitions);
        nlohmann::ordered_json visits, occupation;
        for (int c = 0; c < kNumWindowClasses; ++c) {
            visits[to_string(WindowClass(c))] = log.visits[std::size_t(c)];
            occupation[to_string(WindowClass(c))] = log.occupation[std::size_t(c)];
        }
        j["visits"] = std::move(visits);
        j["occupation"] = std::move(occupation);
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace ztis
