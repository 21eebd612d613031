#include "prefpareto/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "prefpareto/benchmark.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/oracle_user.hpp"
#include "prefpareto/random.hpp"
#include "prefpareto/serialization.hpp"

namespace prefpareto::experiments {

namespace {

// Runs fn(i) for i in [0, n) on a small worker pool; results are written by
// index so the merge order never depends on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

std::vector<std::string> indicator_names(const std::vector<core::IndicatorKind>& kinds) {
    std::vector<std::string> out;
    for (auto k : kinds) out.emplace_back(core::to_string(k));
    return out;
}

constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kPairStream = 2;
constexpr std::uint64_t kOptimizerStream = 3;
constexpr std::uint64_t kCvStream = 4;

constexpr std::size_t kN = std::size(core::kAllIndicators);

const std::vector<core::IndicatorKind> kAll{std::begin(core::kAllIndicators), std::end(core::kAllIndicators)};

json settings_json(const RankerSettings& settings, const std::vector<core::IndicatorKind>& kinds) {
    json j = json::object();
    for (auto k : kinds) j[std::string(core::to_string(k))] = settings.for_indicator(k);
    return j;
}

std::string regs_text(const RankerSettings& settings, const std::vector<core::IndicatorKind>& kinds) {
    std::string out;
    for (auto k : kinds) {
        out += (out.empty() ? "" : ",") + std::string(core::to_string(k)) + ":" + num(settings.for_indicator(k).reg);
    }
    return out;
}

}  // namespace

const rank::TrainConfig& RankerSettings::for_indicator(core::IndicatorKind kind) const {
    const auto it = by_indicator.find(kind);
    return it == by_indicator.end() ? fallback : it->second;
}

std::uint64_t repetition_seed(std::uint64_t base, std::size_t index) { return derive_seed(base, index); }

SampledFronts sample_fronts(std::int64_t profile_id, std::size_t n_fronts, std::uint64_t seed) {
    if (n_fronts < 2) fail(ErrorCode::parameter, "preliminary sampling needs at least two fronts");
    SampledFronts out;
    out.profile_id = profile_id;
    const auto profile = bench::DatasetProfile::generate(profile_id);
    out.trajectory = hpo::random_search(hpo::benchmark_objective(profile, hpo::IndicatorCost{core::IndicatorKind::HV}),
                                        bench::ConfigSpace::lcbench(), static_cast<int>(n_fronts), seed);
    for (const auto& t : out.trajectory.trials) {
        if (!t.front) fail(ErrorCode::numeric, "benchmark evaluation failed during sampling");
        out.fronts.push_back(*t.front);
    }
    return out;
}

// ---------------------------------------------------------------- tau curve

std::vector<double> TauCurveReport::curve(core::IndicatorKind kind) const {
    std::vector<double> out;
    for (std::size_t np : args.n_pairs_list) {
        std::vector<double> taus;
        for (const auto& r : runs) {
            if (r.indicator == kind && r.n_pairs == np) taus.push_back(r.cv.tau_mean);
        }
        out.push_back(mean_of(taus));
    }
    return out;
}

nlohmann::json TauCurveReport::to_json() const {
    json runs_j = json::array();
    for (const auto& r : runs) {
        auto rec = eval::cv_record(r.indicator, r.n_pairs, r.cv);
        rec["profile"] = r.profile_id;
        rec["seed"] = r.seed;
        rec["train_pairs_per_fold"] = r.cv.train_pairs_per_fold;
        runs_j.push_back(std::move(rec));
    }
    json summary = json::array();
    for (auto kind : args.indicators) {
        const auto c = curve(kind);
        for (std::size_t i = 0; i < args.n_pairs_list.size(); ++i) {
            std::vector<double> taus;
            for (const auto& r : runs) {
                if (r.indicator == kind && r.n_pairs == args.n_pairs_list[i]) taus.push_back(r.cv.tau_mean);
            }
            summary.push_back({{"indicator", core::to_string(kind)},
                               {"n_pairs", args.n_pairs_list[i]},
                               {"tau_mean", c[i]},
                               {"tau_std", std_of(taus)}});
        }
    }
    return json{{"command", "tau-curve"},
                {"provenance",
                 {{"seed", args.seed},
                  {"seeds", args.seeds},
                  {"profiles", args.profiles},
                  {"indicators", indicator_names(args.indicators)},
                  {"n_pairs_list", args.n_pairs_list},
                  {"n_fronts", args.n_fronts},
                  {"folds", 5},
                  {"train_config", settings_json(args.train, args.indicators)}}},
                {"runs", std::move(runs_j)},
                {"summary", std::move(summary)}};
}

std::string TauCurveReport::to_csv() const {
    std::ostringstream os;
    os << "# tau-curve seed=" << args.seed << " seeds=" << args.seeds << " n_fronts=" << args.n_fronts
       << " reg=" << regs_text(args.train, args.indicators) << "\n";
    os << "indicator,n_pairs,profile,seed,tau_mean,tau_std\n";
    for (const auto& r : runs) {
        os << core::to_string(r.indicator) << ',' << r.n_pairs << ',' << r.profile_id << ',' << r.seed << ','
           << num(r.cv.tau_mean) << ',' << num(r.cv.tau_std) << '\n';
    }
    return os.str();
}

TauCurveReport run_tau_curve(const TauCurveArgs& args) {
    if (args.seeds == 0 || args.profiles.empty() || args.indicators.empty() || args.n_pairs_list.empty()) {
        fail(ErrorCode::parameter, "tau-curve needs at least one indicator, regime, profile and seed");
    }
    struct Job {
        std::int64_t profile;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (auto p : args.profiles) {
        for (std::size_t s = 0; s < args.seeds; ++s) jobs.push_back({p, s});
    }
    std::vector<std::vector<TauRun>> per_job(jobs.size());
    parallel_for(jobs.size(), args.threads, [&](std::size_t j) {
        const auto seed = repetition_seed(args.seed, jobs[j].rep);
        const auto sample = sample_fronts(jobs[j].profile, args.n_fronts, derive_seed(seed, kSamplingStream));
        for (auto kind : args.indicators) {
            for (std::size_t np : args.n_pairs_list) {
                eval::CvConfig cfg;
                cfg.n_pairs = np;
                cfg.train = args.train.for_indicator(kind);
                cfg.seed = derive_seed(seed, kCvStream);
                per_job[j].push_back({kind, np, jobs[j].profile, seed,
                                      eval::cross_validate_ranker(sample.fronts, kind, cfg)});
            }
        }
    });

    TauCurveReport report;
    report.args = args;
    // indicator-major order, then regime, then job
    for (auto kind : args.indicators) {
        for (std::size_t np : args.n_pairs_list) {
            for (const auto& runs : per_job) {
                for (const auto& r : runs) {
                    if (r.indicator == kind && r.n_pairs == np) report.runs.push_back(r);
                }
            }
        }
    }
    return report;
}

// ------------------------------------------------------------------- matrix

Outcome compare_arms(double pb, double ib, core::IndicatorKind row) {
    const double tol = kMatrixTieTolerance * std::abs(ib);
    const double advantage = core::is_maximized(row) ? pb - ib : ib - pb;
    if (advantage > tol) return Outcome::win;
    if (advantage >= -tol) return Outcome::tie;
    return Outcome::loss;
}

double MatrixCell::relative_gap() const {
    const double diff = std::abs(pb_mean - ib_mean);
    if (ib_mean == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / std::abs(ib_mean);
}

const MatrixCell& MatrixReport::cell(core::IndicatorKind row, core::IndicatorKind col) const {
    for (const auto& c : cells) {
        if (c.row == row && c.col == col) return c;
    }
    fail(ErrorCode::lookup, "matrix cell not present");
}

std::size_t MatrixReport::better_or_equal_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const MatrixCell& c) { return c.pb_better_or_equal(); }));
}

namespace {

std::string_view outcome_name(Outcome o) {
    switch (o) {
        case Outcome::win: return "win";
        case Outcome::tie: return "tie";
        case Outcome::loss: return "loss";
    }
    return "?";
}

}  // namespace

nlohmann::json MatrixReport::to_json() const {
    json cells_j = json::array();
    std::size_t wins = 0, ties = 0, losses = 0;
    for (const auto& c : cells) {
        cells_j.push_back({{"row", core::to_string(c.row)},
                           {"col", core::to_string(c.col)},
                           {"pb_mean", c.pb_mean},
                           {"pb_std", c.pb_std},
                           {"ib_mean", c.ib_mean},
                           {"ib_std", c.ib_std},
                           {"outcome", outcome_name(c.outcome)},
                           {"pb_scores", c.pb_scores},
                           {"ib_scores", c.ib_scores}});
        wins += c.outcome == Outcome::win;
        ties += c.outcome == Outcome::tie;
        losses += c.outcome == Outcome::loss;
    }
    return json{{"command", "matrix"},
                {"provenance",
                 {{"seed", args.seed},
                  {"seeds", args.seeds},
                  {"profiles", args.profiles},
                  {"budget", args.budget},
                  {"n_pairs", args.n_pairs},
                  {"n_fronts", args.n_fronts},
                  {"warm_start", args.warm_start},
                  {"tie_tolerance", kMatrixTieTolerance},
                  {"train_config", settings_json(args.train, kAll)}}},
                {"cells", std::move(cells_j)},
                {"summary",
                 {{"win", wins},
                  {"tie", ties},
                  {"loss", losses},
                  {"better_or_equal", wins + ties},
                  {"cells", cells.size()}}}};
}

std::string MatrixReport::to_csv() const {
    std::ostringstream os;
    os << "# matrix seed=" << args.seed << " seeds=" << args.seeds << " profiles=" << args.profiles.size()
       << " budget=" << args.budget << " n_pairs=" << args.n_pairs << " warm_start=" << args.warm_start
       << " reg=" << regs_text(args.train, kAll) << "\n";
    os << "row,col,pb_mean,pb_std,ib_mean,ib_std,outcome\n";
    for (const auto& c : cells) {
        os << core::to_string(c.row) << ',' << core::to_string(c.col) << ',' << num(c.pb_mean) << ','
           << num(c.pb_std) << ',' << num(c.ib_mean) << ',' << num(c.ib_std) << ',' << outcome_name(c.outcome)
           << '\n';
    }
    return os.str();
}

MatrixReport run_matrix(const MatrixArgs& args) {
    if (args.seeds == 0 || args.profiles.empty()) fail(ErrorCode::parameter, "matrix needs profiles and seeds");
    if (args.budget < 1) fail(ErrorCode::parameter, "budget must be positive");
    const auto space = bench::ConfigSpace::lcbench();

    struct JobResult {
        // pb[r][s]: PB arm trained on row r labels, scored by indicator s.
        // ib[c][s]: IB arm optimizing c, scored by s.
        std::array<std::array<double, kN>, kN> pb{};
        std::array<std::array<double, kN>, kN> ib{};
    };
    struct Job {
        std::int64_t profile;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (auto p : args.profiles) {
        for (std::size_t s = 0; s < args.seeds; ++s) jobs.push_back({p, s});
    }
    std::vector<JobResult> results(jobs.size());

    parallel_for(jobs.size(), args.threads, [&](std::size_t j) {
        const auto seed = repetition_seed(args.seed, jobs[j].rep);
        const auto profile = bench::DatasetProfile::generate(jobs[j].profile);
        const auto sample = sample_fronts(jobs[j].profile, args.n_fronts, derive_seed(seed, kSamplingStream));
        const auto matrices = feat::front_matrices(sample.fronts);
        const auto stats = feat::fit_stats(matrices);
        rank::FeatureMap features;
        for (std::size_t i = 0; i < matrices.size(); ++i) {
            features[static_cast<rank::FrontId>(i)] = feat::encode(matrices[i], stats);
        }
        const auto pairs = oracle::build_pairs(sample.fronts.size(), args.n_pairs, derive_seed(seed, kPairStream));

        hpo::OptimizerConfig opt;
        opt.budget = args.budget;
        opt.n_init = std::min(opt.n_init, args.budget);
        opt.seed = derive_seed(seed, kOptimizerStream);

        auto run_arm = [&](const hpo::CostSpec& spec, std::array<double, kN>& scores) {
            auto arm_opt = opt;
            if (args.warm_start) {
                for (const auto& t : sample.trajectory.trials) {
                    arm_opt.warm_start.push_back({t.config, hpo::cost(spec, *t.front)});
                }
            }
            const auto traj = hpo::optimize(hpo::benchmark_objective(profile, spec), space, arm_opt);
            const auto& front = *traj.incumbent().front;
            for (std::size_t s = 0; s < kN; ++s) scores[s] = core::indicator_value(core::kAllIndicators[s], front);
        };

        for (std::size_t r = 0; r < kN; ++r) {
            const auto prefs = oracle::label_pairs(pairs, sample.fronts, {core::kAllIndicators[r]});
            const auto data = rank::build_svm_dataset(prefs, features);
            auto model =
                rank::train_linear_ranksvm(data, args.train.for_indicator(core::kAllIndicators[r]), stats.fingerprint());
            run_arm(hpo::PreferenceCost{std::move(model), stats, {}}, results[j].pb[r]);
        }
        for (std::size_t c = 0; c < kN; ++c) run_arm(hpo::IndicatorCost{core::kAllIndicators[c]}, results[j].ib[c]);
    });

    MatrixReport report;
    report.args = args;
    for (std::size_t r = 0; r < kN; ++r) {
        for (std::size_t c = 0; c < kN; ++c) {
            MatrixCell cell;
            cell.row = core::kAllIndicators[r];
            cell.col = core::kAllIndicators[c];
            for (const auto& res : results) {
                cell.pb_scores.push_back(res.pb[r][r]);
                cell.ib_scores.push_back(res.ib[c][r]);
            }
            cell.pb_mean = mean_of(cell.pb_scores);
            cell.pb_std = std_of(cell.pb_scores);
            cell.ib_mean = mean_of(cell.ib_scores);
            cell.ib_std = std_of(cell.ib_scores);
            cell.outcome = compare_arms(cell.pb_mean, cell.ib_mean, cell.row);
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

// -------------------------------------------------------------- tune ranker

nlohmann::json TuneReport::to_json() const {
    json cells_j = json::array();
    for (const auto& c : cells) {
        cells_j.push_back({{"indicator", core::to_string(c.indicator)},
                           {"reg", c.reg},
                           {"tau_mean", c.tau_mean},
                           {"taus", c.taus}});
    }
    json selected_j = json::object();
    for (const auto& [kind, reg] : selected) selected_j[std::string(core::to_string(kind))] = json{{"reg", reg}};
    return json{{"command", "tune-ranker"},
                {"provenance",
                 {{"seed", args.seed},
                  {"seeds", args.seeds},
                  {"profiles", args.profiles},
                  {"reg_grid", args.reg_grid},
                  {"n_pairs", args.n_pairs},
                  {"n_fronts", args.n_fronts}}},
                {"cells", std::move(cells_j)},
                {"selected", std::move(selected_j)}};
}

std::string TuneReport::to_csv() const {
    std::ostringstream os;
    os << "# tune-ranker seed=" << args.seed << " seeds=" << args.seeds << " n_pairs=" << args.n_pairs << "\n";
    os << "indicator,reg,tau_mean,selected\n";
    for (const auto& c : cells) {
        bool chosen = false;
        for (const auto& [kind, reg] : selected) chosen = chosen || (kind == c.indicator && reg == c.reg);
        os << core::to_string(c.indicator) << ',' << num(c.reg) << ',' << num(c.tau_mean) << ','
           << (chosen ? 1 : 0) << '\n';
    }
    return os.str();
}

RankerSettings TuneReport::settings(const rank::TrainConfig& base) const {
    RankerSettings out{base, {}};
    for (const auto& [kind, reg] : selected) {
        auto cfg = base;
        cfg.reg = reg;
        out.by_indicator[kind] = cfg;
    }
    return out;
}

RankerSettings ranker_settings_from_tune_json(const json& report, const rank::TrainConfig& base) {
    if (!report.is_object() || report.value("command", "") != "tune-ranker" || !report.contains("selected")) {
        fail(ErrorCode::parameter, "not a tune-ranker report");
    }
    RankerSettings out{base, {}};
    for (const auto& [name, entry] : report.at("selected").items()) {
        auto cfg = base;
        cfg.reg = entry.at("reg").get<double>();
        cfg.validate();
        out.by_indicator[core::parse_indicator(name)] = cfg;
    }
    return out;
}

TuneReport run_tune_ranker(const TuneArgs& args) {
    if (args.reg_grid.empty() || args.profiles.empty() || args.seeds == 0) {
        fail(ErrorCode::parameter, "tune-ranker needs a grid, profiles and seeds");
    }
    for (double reg : args.reg_grid) {
        if (!(reg > 0.0)) fail(ErrorCode::parameter, "regularization values must be positive");
    }
    struct Job {
        std::int64_t profile;
        std::size_t rep;
    };
    std::vector<Job> jobs;
    for (auto p : args.profiles) {
        for (std::size_t s = 0; s < args.seeds; ++s) jobs.push_back({p, s});
    }
    // taus[job][indicator][reg]
    std::vector<std::vector<std::vector<double>>> taus(
        jobs.size(), std::vector<std::vector<double>>(args.indicators.size(), std::vector<double>(args.reg_grid.size())));
    parallel_for(jobs.size(), args.threads, [&](std::size_t j) {
        const auto seed = repetition_seed(args.seed, jobs[j].rep);
        const auto sample = sample_fronts(jobs[j].profile, args.n_fronts, derive_seed(seed, kSamplingStream));
        for (std::size_t k = 0; k < args.indicators.size(); ++k) {
            for (std::size_t g = 0; g < args.reg_grid.size(); ++g) {
                eval::CvConfig cfg;
                cfg.n_pairs = args.n_pairs;
                cfg.train.reg = args.reg_grid[g];
                cfg.seed = derive_seed(seed, kCvStream);
                taus[j][k][g] = eval::cross_validate_ranker(sample.fronts, args.indicators[k], cfg).tau_mean;
            }
        }
    });

    TuneReport report;
    report.args = args;
    for (std::size_t k = 0; k < args.indicators.size(); ++k) {
        std::size_t first_cell = report.cells.size();
        for (std::size_t g = 0; g < args.reg_grid.size(); ++g) {
            TuneCell cell;
            cell.indicator = args.indicators[k];
            cell.reg = args.reg_grid[g];
            for (std::size_t j = 0; j < jobs.size(); ++j) cell.taus.push_back(taus[j][k][g]);
            cell.tau_mean = mean_of(cell.taus);
            report.cells.push_back(std::move(cell));
        }
        const TuneCell* best = nullptr;
        for (std::size_t i = first_cell; i < report.cells.size(); ++i) {
            const auto& c = report.cells[i];
            if (!best || c.tau_mean > best->tau_mean || (c.tau_mean == best->tau_mean && c.reg < best->reg)) best = &c;
        }
        report.selected.emplace_back(args.indicators[k], best->reg);
    }
    return report;
}

void write_report(const std::filesystem::path& prefix, const nlohmann::json& j, const std::string& csv) {
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    auto json_path = prefix;
    json_path += ".json";
    auto csv_path = prefix;
    csv_path += ".csv";
    std::ofstream js(json_path, std::ios::binary);
    std::ofstream cs(csv_path, std::ios::binary);
    if (!js || !cs) fail(ErrorCode::io, "cannot write report files at " + prefix.string());
    js << j.dump(2) << '\n';
    cs << csv;
    if (!js || !cs) fail(ErrorCode::io, "failed writing report files at " + prefix.string());
}

}  // namespace prefpareto::experiments
