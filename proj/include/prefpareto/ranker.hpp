#pragma once

// Linear RankSVM over front feature differences and the utility it induces.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefpareto/frontfeat.hpp"

namespace prefpareto::rank {

using FrontId = std::int64_t;

enum class PreferenceSource { human, simulated };

std::string_view to_string(PreferenceSource s) noexcept;
PreferenceSource parse_source(std::string_view s);

struct PreferencePair {
    FrontId winner = 0;
    FrontId loser = 0;
    PreferenceSource source = PreferenceSource::simulated;

    friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

struct SvmExample {
    std::vector<double> x;
    int y = 1;  // +1 or -1
};

struct TrainConfig {
    double reg = 1.0;
    int max_epochs = 2000;
    double tol = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct UtilityModel {
    std::vector<double> w;
    TrainConfig train_config;
    std::string stats_ref;

    friend bool operator==(const UtilityModel&, const UtilityModel&) = default;
};

/// Per-epoch trace of a training run.
struct TrainTrace {
    std::vector<double> objective;  // objective of the returned iterate after each epoch
    int epochs = 0;
    double intercept = 0.0;  // only non-zero with fit_intercept
};

using FeatureMap = std::map<FrontId, feat::FeatureVector>;

/// Two mirrored examples per preference: (f_w - f_l, +1) and (f_l - f_w, -1).
std::vector<SvmExample> build_svm_dataset(std::span<const PreferencePair> prefs,
                                          const FeatureMap& features);

/// (reg/2)|w|^2 + mean hinge loss, with an optional intercept term.
double svm_objective(std::span<const SvmExample> data, std::span<const double> w, double reg,
                     double intercept = 0.0);

UtilityModel train_linear_ranksvm(std::span<const SvmExample> data, const TrainConfig& cfg,
                                  std::string stats_ref = {});

/// Same solver, exposing the objective trace. The intercept variant exists to
/// check that the mirrored dataset drives the optimal bias to zero.
UtilityModel train_linear_ranksvm(std::span<const SvmExample> data, const TrainConfig& cfg,
                                  std::string stats_ref, TrainTrace& trace,
                                  bool fit_intercept = false);

double utility(const UtilityModel& model, const feat::FeatureVector& f);

enum class Preference { first, second, tie };

inline constexpr double kTieEpsilon = 1e-12;

Preference predict_pref(const UtilityModel& model, const feat::FeatureVector& f1,
                        const feat::FeatureVector& f2);

}  // namespace prefpareto::rank
