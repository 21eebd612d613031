#include "prefpareto/serialization.hpp"

#include <cmath>
#include <limits>

#include "prefpareto/error.hpp"

namespace prefpareto {

json cost_to_json(double cost) { return std::isfinite(cost) ? json(cost) : json(nullptr); }

double cost_from_json(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

namespace core {

void to_json(json& j, const ModelPoint& p) {
    j = json{{"id", p.id}, {"losses", p.losses}};
    if (!p.meta.empty()) j["meta"] = p.meta;
}

void from_json(const json& j, ModelPoint& p) {
    p.id = j.at("id").get<ModelId>();
    p.losses = j.at("losses").get<LossVector>();
    p.meta.clear();
    if (j.contains("meta")) p.meta = j.at("meta").get<std::map<std::string, double>>();
}

void to_json(json& j, const ParetoFront& f) {
    j = json{{"order_key", f.order_key()}, {"points", f.points()}};
}

void from_json(const json& j, ParetoFront& f) {
    f = ParetoFront::from_sorted(j.at("points").get<std::vector<ModelPoint>>(),
                                 j.value("order_key", kEnergyLoss));
}

}  // namespace core

namespace feat {

void to_json(json& j, const FeatureStats& s) {
    j = json{{"mean", s.mean}, {"std", s.std}, {"n_fit", s.n_fit}};
}

void from_json(const json& j, FeatureStats& s) {
    s.mean = j.at("mean").get<std::vector<double>>();
    s.std = j.at("std").get<std::vector<double>>();
    s.n_fit = j.at("n_fit").get<std::size_t>();
    if (s.mean.size() != s.std.size() || s.n_fit < 1) fail(ErrorCode::parameter, "malformed feature statistics");
}

}  // namespace feat

namespace rank {

void to_json(json& j, const TrainConfig& c) {
    j = json{{"reg", c.reg}, {"max_epochs", c.max_epochs}, {"tol", c.tol}, {"seed", c.seed}};
}

void from_json(const json& j, TrainConfig& c) {
    const TrainConfig defaults;
    c.reg = j.value("reg", defaults.reg);
    c.max_epochs = j.value("max_epochs", defaults.max_epochs);
    c.tol = j.value("tol", defaults.tol);
    c.seed = j.value("seed", defaults.seed);
    c.validate();
}

void to_json(json& j, const UtilityModel& m) {
    j = json{{"w", m.w}, {"stats_ref", m.stats_ref}, {"train_config", m.train_config}};
}

void from_json(const json& j, UtilityModel& m) {
    m.w = j.at("w").get<std::vector<double>>();
    m.stats_ref = j.at("stats_ref").get<std::string>();
    m.train_config = j.at("train_config").get<TrainConfig>();
}

void to_json(json& j, const PreferencePair& p) {
    j = json{{"winner", p.winner}, {"loser", p.loser}, {"source", to_string(p.source)}};
}

void from_json(const json& j, PreferencePair& p) {
    p.winner = j.at("winner").get<FrontId>();
    p.loser = j.at("loser").get<FrontId>();
    p.source = parse_source(j.value("source", std::string("human")));
}

}  // namespace rank

namespace bench {

json config_to_json(const Configuration& cfg, const ConfigSpace& space) {
    json j = json::object();
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& p = space.params()[i];
        if (p.type == ParamType::integer) {
            j[p.name] = static_cast<std::int64_t>(cfg.values[i]);
        } else {
            j[p.name] = cfg.values[i];
        }
    }
    return j;
}

Configuration config_from_json(const json& j, const ConfigSpace& space) {
    Configuration cfg;
    for (std::size_t i = 0; i < space.size(); ++i) cfg.values[i] = j.at(space.params()[i].name).get<double>();
    validate(cfg, space);
    return cfg;
}

}  // namespace bench

namespace hpo {

json trajectory_to_json(const Trajectory& t, const bench::ConfigSpace& space) {
    json trials = json::array();
    const std::size_t final_inc = t.trials.empty() ? 0 : t.incumbent_index.back();
    for (std::size_t i = 0; i < t.trials.size(); ++i) {
        const auto& tr = t.trials[i];
        trials.push_back({{"trial_index", tr.trial_index},
                          {"config", bench::config_to_json(tr.config, space)},
                          {"cost", cost_to_json(tr.cost)},
                          {"front", tr.front ? json(tr.front->points()) : json(nullptr)},
                          {"incumbent_index", t.incumbent_index[i]},
                          {"incumbent", i == final_inc}});
    }
    return json{{"trials", std::move(trials)}};
}

Trajectory trajectory_from_json(const json& j, const bench::ConfigSpace& space) {
    Trajectory t;
    for (const auto& tj : j.at("trials")) {
        Trial tr;
        tr.trial_index = tj.at("trial_index").get<std::size_t>();
        tr.config = bench::config_from_json(tj.at("config"), space);
        tr.cost = cost_from_json(tj.at("cost"));
        if (!tj.at("front").is_null()) {
            tr.front = core::ParetoFront::from_sorted(tj.at("front").get<std::vector<core::ModelPoint>>());
        }
        t.incumbent_index.push_back(tj.at("incumbent_index").get<std::size_t>());
        t.trials.push_back(std::move(tr));
    }
    return t;
}

}  // namespace hpo

namespace oracle {

json preference_record(const rank::PreferencePair& p, core::IndicatorKind oracle_kind) {
    return json{{"winner", p.winner},
                {"loser", p.loser},
                {"source", rank::to_string(p.source)},
                {"oracle", core::to_string(oracle_kind)}};
}

}  // namespace oracle

namespace eval {

json cv_record(core::IndicatorKind kind, std::size_t n_pairs, const CvResult& r) {
    return json{{"indicator", core::to_string(kind)},
                {"n_pairs", n_pairs},
                {"tau_mean", r.tau_mean},
                {"tau_std", r.tau_std},
                {"per_fold", r.per_fold}};
}

}  // namespace eval

}  // namespace prefpareto
