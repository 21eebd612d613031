#include "prefpareto/hpo_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prefpareto/error.hpp"
#include "prefpareto/random.hpp"

namespace prefpareto::hpo {

double cost(const CostSpec& spec, const core::ParetoFront& front) {
    if (const auto* ind = std::get_if<IndicatorCost>(&spec)) {
        const double v = core::indicator_value(ind->kind, front);
        return core::is_maximized(ind->kind) ? -v : v;
    }
    const auto& pref = std::get<PreferenceCost>(spec);
    if (pref.model.stats_ref != pref.stats.fingerprint()) {
        fail(ErrorCode::precondition, "utility model was trained against different feature statistics");
    }
    return -rank::utility(pref.model, feat::encode_front(front, pref.stats, pref.encoding));
}

const Trial& Trajectory::incumbent() const {
    if (trials.empty()) fail(ErrorCode::precondition, "empty trajectory has no incumbent");
    return trials[incumbent_index.back()];
}

void OptimizerConfig::validate() const {
    if (budget < 1) fail(ErrorCode::parameter, "budget must be positive");
    if (n_init < 1 || n_init > budget) fail(ErrorCode::parameter, "n_init must lie in [1, budget]");
    if (n_candidates < 1) fail(ErrorCode::parameter, "n_candidates must be positive");
    if (!(local_sigma > 0.0)) fail(ErrorCode::parameter, "local_sigma must be positive");
}

std::array<double, bench::kNumHyperparameters> encode_for_surrogate(const bench::Configuration& cfg,
                                                                    const bench::ConfigSpace& space) {
    std::array<double, bench::kNumHyperparameters> out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = bench::to_unit(space.params()[i], cfg.values[i]);
    return out;
}

bench::Configuration decode_from_surrogate(std::span<const double> unit, const bench::ConfigSpace& space) {
    if (unit.size() != space.size()) fail(ErrorCode::dimension, "encoded configuration has wrong length");
    bench::Configuration cfg;
    for (std::size_t i = 0; i < unit.size(); ++i) cfg.values[i] = bench::from_unit(space.params()[i], unit[i]);
    return cfg;
}

double expected_improvement(double best, const Prediction& p) {
    const double sigma = std::sqrt(p.variance);
    const double gap = best - p.mean;
    if (sigma < 1e-12) return std::max(0.0, gap);
    const double z = gap / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, gap * cdf + sigma * pdf);
}

namespace {

class Recorder {
public:
    Recorder(const Objective& objective, const ProgressCallback& progress)
        : objective_(objective), progress_(progress) {}

    void evaluate(const bench::Configuration& cfg) {
        Trial t;
        t.config = cfg;
        t.trial_index = traj_.trials.size();
        try {
            auto ev = objective_(cfg);
            if (!std::isfinite(ev.cost)) throw Error(ErrorCode::numeric, "objective returned a non-finite cost");
            t.cost = ev.cost;
            t.front = std::move(ev.front);
        } catch (const std::exception&) {
            t.cost = std::numeric_limits<double>::infinity();
            t.front.reset();
        }
        std::size_t inc = traj_.incumbent_index.empty() ? 0 : traj_.incumbent_index.back();
        if (traj_.trials.empty() || t.cost < traj_.trials[inc].cost) inc = t.trial_index;
        traj_.trials.push_back(std::move(t));
        traj_.incumbent_index.push_back(inc);
        if (progress_) progress_(traj_);
    }

    const Trajectory& trajectory() const noexcept { return traj_; }
    Trajectory take() { return std::move(traj_); }

private:
    const Objective& objective_;
    const ProgressCallback& progress_;
    Trajectory traj_;
};

}  // namespace

Trajectory optimize(const Objective& objective, const bench::ConfigSpace& space, const OptimizerConfig& opt,
                    const ProgressCallback& progress) {
    opt.validate();
    Rng rng(opt.seed);
    Recorder rec(objective, progress);

    for (int i = 0; i < opt.n_init; ++i) rec.evaluate(bench::sample_config(space, rng));

    const std::size_t dim = space.size();
    for (int step = opt.n_init; step < opt.budget; ++step) {
        const auto& trials = rec.trajectory().trials;

        std::vector<std::vector<double>> x;
        std::vector<double> y;
        double worst_finite = -std::numeric_limits<double>::infinity();
        for (const auto& t : trials) {
            if (std::isfinite(t.cost)) worst_finite = std::max(worst_finite, t.cost);
        }
        for (const auto& w : opt.warm_start) {
            if (std::isfinite(w.cost)) worst_finite = std::max(worst_finite, w.cost);
        }
        if (!std::isfinite(worst_finite)) {
            // nothing to model yet
            rec.evaluate(bench::sample_config(space, rng));
            continue;
        }
        auto add = [&](const bench::Configuration& c, double v) {
            const auto enc = encode_for_surrogate(c, space);
            x.emplace_back(enc.begin(), enc.end());
            y.push_back(std::isfinite(v) ? v : worst_finite);
        };
        for (const auto& w : opt.warm_start) add(w.config, w.cost);
        for (const auto& t : trials) add(t.config, t.cost);

        RandomForest forest(opt.forest, derive_seed(opt.seed, static_cast<std::uint64_t>(step)));
        forest.fit(x, y);

        const auto& inc = rec.trajectory().incumbent();
        const auto inc_enc = encode_for_surrogate(inc.config, space);
        const double best = std::isfinite(inc.cost) ? inc.cost : worst_finite;

        std::vector<double> candidate(dim);
        std::vector<double> chosen(dim);
        double best_ei = -1.0;
        const int n_random = opt.n_candidates / 2;
        for (int c = 0; c < opt.n_candidates; ++c) {
            for (std::size_t j = 0; j < dim; ++j) {
                candidate[j] = c < n_random ? rng.uniform()
                                            : std::clamp(inc_enc[j] + opt.local_sigma * rng.normal(), 0.0, 1.0);
            }
            const double ei = expected_improvement(best, forest.predict(candidate));
            if (ei > best_ei) {
                best_ei = ei;
                chosen = candidate;
            }
        }
        rec.evaluate(decode_from_surrogate(chosen, space));
    }
    return rec.take();
}

Trajectory random_search(const Objective& objective, const bench::ConfigSpace& space, int budget,
                         std::uint64_t seed, const ProgressCallback& progress) {
    if (budget < 1) fail(ErrorCode::parameter, "budget must be positive");
    Rng rng(seed);
    Recorder rec(objective, progress);
    for (int i = 0; i < budget; ++i) rec.evaluate(bench::sample_config(space, rng));
    return rec.take();
}

Objective benchmark_objective(const bench::DatasetProfile& profile, CostSpec spec) {
    return [profile, spec = std::move(spec)](const bench::Configuration& cfg) {
        const auto models = bench::run_moml(cfg, profile);
        auto front = core::pareto_filter(models);
        const double c = cost(spec, front);
        return Evaluation{c, std::move(front)};
    };
}

}  // namespace prefpareto::hpo
