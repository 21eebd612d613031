#pragma once

// Batch experiments with simulated users: tau-vs-pairs curves, the PB/IB
// comparison matrix and ranker regularization tuning. Every report is a pure
// function of its arguments so repeated runs produce identical files.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "prefpareto/core_mo.hpp"
#include "prefpareto/hpo_engine.hpp"
#include "prefpareto/ranker.hpp"
#include "prefpareto/ranking_eval.hpp"

namespace prefpareto::experiments {

/// Seed of the i-th repetition derived from a base seed.
std::uint64_t repetition_seed(std::uint64_t base, std::size_t index);

/// Ranker training settings, optionally tuned per indicator.
struct RankerSettings {
    rank::TrainConfig fallback;
    std::map<core::IndicatorKind, rank::TrainConfig> by_indicator;

    const rank::TrainConfig& for_indicator(core::IndicatorKind kind) const;
};

struct SampledFronts {
    std::int64_t profile_id = 0;
    std::vector<core::ParetoFront> fronts;
    hpo::Trajectory trajectory;
};

/// Preliminary random sampling: n_fronts random configurations on a profile.
SampledFronts sample_fronts(std::int64_t profile_id, std::size_t n_fronts, std::uint64_t seed);

// ---------------------------------------------------------------- tau curve

struct TauCurveArgs {
    std::vector<core::IndicatorKind> indicators{std::begin(core::kAllIndicators), std::end(core::kAllIndicators)};
    std::vector<std::size_t> n_pairs_list{28, 56, 84, 112, 140};
    std::vector<std::int64_t> profiles{0, 1, 2};
    std::size_t seeds = 3;
    std::uint64_t seed = 0;
    std::size_t n_fronts = 40;
    RankerSettings train;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct TauRun {
    core::IndicatorKind indicator{};
    std::size_t n_pairs = 0;
    std::int64_t profile_id = 0;
    std::uint64_t seed = 0;
    eval::CvResult cv;
};

struct TauCurveReport {
    TauCurveArgs args;
    std::vector<TauRun> runs;

    /// Mean tau over (profile, seed) per (indicator, n_pairs), in args order.
    std::vector<double> curve(core::IndicatorKind kind) const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

TauCurveReport run_tau_curve(const TauCurveArgs& args);

// ------------------------------------------------------------------- matrix

struct MatrixArgs {
    std::vector<std::int64_t> profiles{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::size_t seeds = 3;
    std::uint64_t seed = 0;
    int budget = 30;
    std::size_t n_pairs = 28;
    std::size_t n_fronts = 40;
    bool warm_start = false;
    RankerSettings train;
    unsigned threads = 0;
};

enum class Outcome { win, tie, loss };

inline constexpr double kMatrixTieTolerance = 0.05;

struct MatrixCell {
    core::IndicatorKind row{};  // indicator the simulated user labels with; scores both arms
    core::IndicatorKind col{};  // indicator the IB arm optimizes
    std::vector<double> pb_scores;
    std::vector<double> ib_scores;
    double pb_mean = 0.0, pb_std = 0.0, ib_mean = 0.0, ib_std = 0.0;
    Outcome outcome = Outcome::tie;

    bool pb_better_or_equal() const { return outcome != Outcome::loss; }
    /// |PB - IB| relative to |IB| (0 when both are 0).
    double relative_gap() const;
};

struct MatrixReport {
    MatrixArgs args;
    std::vector<MatrixCell> cells;  // row-major HV, SP, MS, R2

    const MatrixCell& cell(core::IndicatorKind row, core::IndicatorKind col) const;
    std::size_t better_or_equal_count() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// PB better than IB beyond the tolerance is a win, within it a tie.
Outcome compare_arms(double pb, double ib, core::IndicatorKind row);

MatrixReport run_matrix(const MatrixArgs& args);

// -------------------------------------------------------------- tune ranker

struct TuneArgs {
    std::vector<double> reg_grid{0.01, 0.1, 1.0, 10.0};
    std::vector<std::int64_t> profiles{100, 101, 102};
    std::size_t seeds = 3;
    std::uint64_t seed = 0;
    std::size_t n_pairs = 28;
    std::size_t n_fronts = 40;
    std::vector<core::IndicatorKind> indicators{std::begin(core::kAllIndicators), std::end(core::kAllIndicators)};
    unsigned threads = 0;
};

struct TuneCell {
    core::IndicatorKind indicator{};
    double reg = 0.0;
    double tau_mean = 0.0;
    std::vector<double> taus;  // per (profile, seed)
};

struct TuneReport {
    TuneArgs args;
    std::vector<TuneCell> cells;
    std::vector<std::pair<core::IndicatorKind, double>> selected;  // best reg per indicator

    /// `base` with the selected reg per indicator.
    RankerSettings settings(const rank::TrainConfig& base = {}) const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Argmax of mean CV tau per indicator; ties go to the smallest reg.
TuneReport run_tune_ranker(const TuneArgs& args);

/// Reads the "selected" block of a tune-ranker JSON report.
RankerSettings ranker_settings_from_tune_json(const nlohmann::json& report, const rank::TrainConfig& base = {});

/// Writes `<prefix>.json` and `<prefix>.csv`, creating parent directories.
void write_report(const std::filesystem::path& prefix, const nlohmann::json& j, const std::string& csv);

}  // namespace prefpareto::experiments
