#include "prefpareto/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "prefpareto/error.hpp"

namespace prefpareto::rank {

std::string_view to_string(PreferenceSource s) noexcept {
    return s == PreferenceSource::human ? "human" : "simulated";
}

PreferenceSource parse_source(std::string_view s) {
    if (s == "human") return PreferenceSource::human;
    if (s == "simulated") return PreferenceSource::simulated;
    fail(ErrorCode::parameter, "unknown preference source: " + std::string(s));
}

void TrainConfig::validate() const {
    if (!(reg > 0.0) || !std::isfinite(reg)) fail(ErrorCode::parameter, "reg must be positive");
    if (max_epochs < 1) fail(ErrorCode::parameter, "max_epochs must be at least 1");
    if (!(tol > 0.0)) fail(ErrorCode::parameter, "tol must be positive");
}

std::vector<SvmExample> build_svm_dataset(std::span<const PreferencePair> prefs,
                                          const FeatureMap& features) {
    auto lookup = [&](FrontId id) -> const feat::FeatureVector& {
        auto it = features.find(id);
        if (it == features.end()) fail(ErrorCode::lookup, "no feature vector for front " + std::to_string(id));
        return it->second;
    };
    std::vector<SvmExample> out;
    out.reserve(2 * prefs.size());
    for (const auto& p : prefs) {
        if (p.winner == p.loser) fail(ErrorCode::parameter, "preference between a front and itself");
        const auto& fw = lookup(p.winner).values;
        const auto& fl = lookup(p.loser).values;
        if (fw.size() != fl.size()) fail(ErrorCode::dimension, "feature vectors differ in length");
        SvmExample pos{std::vector<double>(fw.size()), +1};
        SvmExample neg{std::vector<double>(fw.size()), -1};
        for (std::size_t i = 0; i < fw.size(); ++i) {
            pos.x[i] = fw[i] - fl[i];
            neg.x[i] = fl[i] - fw[i];
        }
        out.push_back(std::move(pos));
        out.push_back(std::move(neg));
    }
    return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

double svm_objective(std::span<const SvmExample> data, std::span<const double> w, double reg,
                     double intercept) {
    double hinge = 0.0;
    for (const auto& ex : data) {
        hinge += std::max(0.0, 1.0 - ex.y * (dot(w, ex.x) + intercept));
    }
    return 0.5 * reg * dot(w, w) + hinge / static_cast<double>(data.size());
}

UtilityModel train_linear_ranksvm(std::span<const SvmExample> data, const TrainConfig& cfg,
                                  std::string stats_ref) {
    TrainTrace trace;
    return train_linear_ranksvm(data, cfg, std::move(stats_ref), trace, false);
}

UtilityModel train_linear_ranksvm(std::span<const SvmExample> data, const TrainConfig& cfg,
                                  std::string stats_ref, TrainTrace& trace, bool fit_intercept) {
    cfg.validate();
    if (data.empty()) fail(ErrorCode::empty_input, "RankSVM training set is empty");
    const std::size_t d = data.front().x.size();
    for (const auto& ex : data) {
        if (ex.x.size() != d) fail(ErrorCode::dimension, "training examples differ in dimension");
        if (ex.y != 1 && ex.y != -1) fail(ErrorCode::parameter, "labels must be +1 or -1");
        for (double v : ex.x) {
            if (!std::isfinite(v)) fail(ErrorCode::numeric, "non-finite feature in training data");
        }
    }

    const auto n = static_cast<double>(data.size());
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    std::vector<double> grad(d);

    // Subgradient steps are not monotone; keep the best iterate seen so far.
    std::vector<double> best_w = w;
    double best_b = b;
    double best_obj = svm_objective(data, w, cfg.reg, b);
    double prev_obj = best_obj;

    trace = {};
    for (int t = 1; t <= cfg.max_epochs; ++t) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (const auto& ex : data) {
            if (ex.y * (dot(w, ex.x) + b) < 1.0) {
                for (std::size_t i = 0; i < d; ++i) grad[i] -= ex.y * ex.x[i];
                grad_b -= ex.y;
            }
        }
        const double step = 1.0 / (cfg.reg * static_cast<double>(t));
        for (std::size_t i = 0; i < d; ++i) w[i] -= step * (cfg.reg * w[i] + grad[i] / n);
        if (fit_intercept) b -= step * grad_b / n;

        const double obj = svm_objective(data, w, cfg.reg, b);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
            best_b = b;
        }
        trace.objective.push_back(best_obj);
        trace.epochs = t;
        if (std::abs(prev_obj - obj) < cfg.tol) break;
        prev_obj = obj;
    }
    trace.intercept = best_b;
    return UtilityModel{std::move(best_w), cfg, std::move(stats_ref)};
}

double utility(const UtilityModel& model, const feat::FeatureVector& f) {
    if (f.values.size() != model.w.size()) fail(ErrorCode::dimension, "feature length does not match model");
    return dot(model.w, f.values);
}

Preference predict_pref(const UtilityModel& model, const feat::FeatureVector& f1,
                        const feat::FeatureVector& f2) {
    const double u1 = utility(model, f1);
    const double u2 = utility(model, f2);
    if (u1 > u2 + kTieEpsilon) return Preference::first;
    if (u2 > u1 + kTieEpsilon) return Preference::second;
    return Preference::tie;
}

}  // namespace prefpareto::rank
