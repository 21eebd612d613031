#pragma once

// Sequential model-based optimization over the configuration space: random
// initial design, random-forest surrogate, expected improvement over a mix of
// random and incumbent-local candidates.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "prefpareto/benchmark.hpp"
#include "prefpareto/core_mo.hpp"
#include "prefpareto/frontfeat.hpp"
#include "prefpareto/random_forest.hpp"
#include "prefpareto/ranker.hpp"

namespace prefpareto::hpo {

struct IndicatorCost {
    core::IndicatorKind kind = core::IndicatorKind::HV;
};

struct PreferenceCost {
    rank::UtilityModel model;
    feat::FeatureStats stats;
    feat::EncodingConfig encoding;
};

using CostSpec = std::variant<IndicatorCost, PreferenceCost>;

/// Minimization-oriented cost of a front: -u(P) for preference costs; -HV,
/// +SP, -MS, +R2 for indicator costs.
double cost(const CostSpec& spec, const core::ParetoFront& front);

struct Evaluation {
    double cost = 0.0;
    core::ParetoFront front;
};

using Objective = std::function<Evaluation(const bench::Configuration&)>;

struct Trial {
    bench::Configuration config;
    double cost = 0.0;
    std::optional<core::ParetoFront> front;  // absent when the evaluation failed
    std::size_t trial_index = 0;
};

struct Trajectory {
    std::vector<Trial> trials;
    std::vector<std::size_t> incumbent_index;  // after each trial

    const Trial& incumbent() const;
};

struct WarmStartPoint {
    bench::Configuration config;
    double cost = 0.0;
};

struct OptimizerConfig {
    int budget = 30;
    int n_init = 8;
    int n_candidates = 1000;
    ForestConfig forest;
    double local_sigma = 0.1;
    std::uint64_t seed = 0;
    /// Extra surrogate training data; not counted against the budget.
    std::vector<WarmStartPoint> warm_start;

    void validate() const;
};

using ProgressCallback = std::function<void(const Trajectory&)>;

std::array<double, bench::kNumHyperparameters> encode_for_surrogate(const bench::Configuration& cfg,
                                                                    const bench::ConfigSpace& space);
bench::Configuration decode_from_surrogate(std::span<const double> unit, const bench::ConfigSpace& space);

/// EI for minimization; zero-variance predictions reduce to max(0, best - mean).
double expected_improvement(double best, const Prediction& p);

Trajectory optimize(const Objective& objective, const bench::ConfigSpace& space,
                    const OptimizerConfig& opt, const ProgressCallback& progress = {});

Trajectory random_search(const Objective& objective, const bench::ConfigSpace& space, int budget,
                         std::uint64_t seed, const ProgressCallback& progress = {});

/// Objective that runs the synthetic learner on `profile`, extracts the front
/// and scores it with `spec`.
Objective benchmark_objective(const bench::DatasetProfile& profile, CostSpec spec);

}  // namespace prefpareto::hpo
