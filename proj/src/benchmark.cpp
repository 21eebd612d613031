#include "prefpareto/benchmark.hpp"

#include <algorithm>
#include <cmath>

#include "prefpareto/error.hpp"

namespace prefpareto::bench {

ConfigSpace ConfigSpace::lcbench() {
    ConfigSpace s;
    s.params_ = {
        {"batch_size", ParamType::integer, 16, 512, Scale::log},
        {"learning_rate", ParamType::real, 1e-4, 1e-1, Scale::log},
        {"momentum", ParamType::real, 0.1, 0.99, Scale::linear},
        {"weight_decay", ParamType::real, 1e-5, 1e-1, Scale::linear},
        {"num_layers", ParamType::integer, 1, 5, Scale::linear},
        {"max_units", ParamType::integer, 64, 1024, Scale::log},
        {"max_dropout", ParamType::real, 0.0, 1.0, Scale::linear},
    };
    return s;
}

std::size_t ConfigSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) return i;
    }
    fail(ErrorCode::parameter, "unknown hyperparameter: " + std::string(name));
}

void validate(const Configuration& cfg, const ConfigSpace& space) {
    if (space.size() != kNumHyperparameters) fail(ErrorCode::dimension, "configuration space size mismatch");
    for (std::size_t i = 0; i < kNumHyperparameters; ++i) {
        const auto& p = space.params()[i];
        const double v = cfg.values[i];
        if (!std::isfinite(v) || v < p.lower || v > p.upper) {
            fail(ErrorCode::parameter, p.name + " out of range: " + std::to_string(v));
        }
        if (p.type == ParamType::integer && v != std::round(v)) {
            fail(ErrorCode::parameter, p.name + " must be an integer");
        }
    }
}

double to_unit(const ParamSpec& p, double value) {
    if (p.scale == Scale::log) return std::log(value / p.lower) / std::log(p.upper / p.lower);
    return (value - p.lower) / (p.upper - p.lower);
}

double from_unit(const ParamSpec& p, double unit) {
    unit = std::clamp(unit, 0.0, 1.0);
    double v = p.scale == Scale::log ? p.lower * std::exp(unit * std::log(p.upper / p.lower))
                                     : p.lower + unit * (p.upper - p.lower);
    if (p.type == ParamType::integer) v = std::round(v);
    return std::clamp(v, p.lower, p.upper);
}

Configuration sample_config(const ConfigSpace& space, Rng& rng) {
    Configuration cfg;
    for (std::size_t i = 0; i < space.size(); ++i) cfg.values[i] = from_unit(space.params()[i], rng.uniform());
    return cfg;
}

DatasetProfile DatasetProfile::generate(std::int64_t profile_id) {
    DatasetProfile p;
    p.profile_id = profile_id;
    Rng rng(derive_seed(0x5eedULL, static_cast<std::uint64_t>(profile_id)));
    for (std::size_t i = 0; i < p.a.size(); ++i) {
        const std::size_t coef = i + 1;
        if (coef == 4 || coef == 6) {
            p.a[i] = rng.uniform(0.2, 0.8);
        } else if (coef == 11) {
            p.a[i] = rng.uniform(0.0, 0.3);
        } else {
            p.a[i] = rng.uniform(0.5, 2.0);
        }
    }
    return p;
}

EpochGrid EpochGrid::standard() {
    EpochGrid g;
    for (int e = 5; e <= 50; e += 5) g.epochs.push_back(e);
    return g;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kMaxPowerNorm = (1024.0 * 5.0) / 16.0;

}  // namespace

double power_of(const Configuration& cfg) {
    return (cfg[Hp::max_units] * cfg[Hp::num_layers]) / (cfg[Hp::batch_size] * kMaxPowerNorm);
}

double accuracy_at(const Configuration& cfg, const DatasetProfile& profile, int epoch) {
    const auto& a = profile.a;
    const double u = std::log(cfg[Hp::max_units] / 64.0) / std::log(16.0);
    const double l = (cfg[Hp::num_layers] - 1.0) / 4.0;
    const double lr = std::log(cfg[Hp::learning_rate] / 1e-4) / std::log(1000.0);
    const double bs = std::log(cfg[Hp::batch_size] / 16.0) / std::log(32.0);
    const double mom = (cfg[Hp::momentum] - 0.1) / 0.89;
    const double dr = cfg[Hp::max_dropout];
    const double wd = std::log(cfg[Hp::weight_decay] / 1e-5) / std::log(1e4);

    const double capability =
        0.5 + 0.45 * std::tanh(a[0] * u + a[1] * l - a[2] * (lr - a[3]) * (lr - a[3]) -
                               a[4] * (dr - a[5]) * (dr - a[5]) + a[6] * mom - a[7] * wd);
    const double rate = 0.02 + 0.3 * sigmoid(a[8] * lr - a[9] * bs);
    const double e = static_cast<double>(epoch);
    const double acc = capability * (1.0 - std::exp(-rate * e)) - a[10] * dr * std::max(0.0, e - 30.0) / 50.0;
    return std::clamp(acc, 0.01, 0.99);
}

std::vector<core::ModelPoint> run_moml(const Configuration& cfg, const DatasetProfile& profile,
                                       const EpochGrid& grid) {
    const double power = power_of(cfg);
    std::vector<core::ModelPoint> models;
    models.reserve(grid.epochs.size());
    for (std::size_t i = 0; i < grid.epochs.size(); ++i) {
        const int epoch = grid.epochs[i];
        core::ModelPoint m;
        m.id = static_cast<core::ModelId>(i);
        m.losses = {1.0 - accuracy_at(cfg, profile, epoch), static_cast<double>(epoch) * power / 50.0};
        m.meta["epoch"] = epoch;
        models.push_back(std::move(m));
    }
    return models;
}

}  // namespace prefpareto::bench
