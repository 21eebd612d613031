#pragma once

// JSON encodings for the persisted and exchanged types. Non-finite costs are
// written as null and read back as +infinity.

#include "json.hpp"

#include "prefpareto/benchmark.hpp"
#include "prefpareto/core_mo.hpp"
#include "prefpareto/frontfeat.hpp"
#include "prefpareto/hpo_engine.hpp"
#include "prefpareto/oracle_user.hpp"
#include "prefpareto/ranker.hpp"
#include "prefpareto/ranking_eval.hpp"

namespace prefpareto {

using nlohmann::json;

namespace core {
void to_json(json& j, const ModelPoint& p);
void from_json(const json& j, ModelPoint& p);
void to_json(json& j, const ParetoFront& f);
void from_json(const json& j, ParetoFront& f);
}  // namespace core

namespace feat {
void to_json(json& j, const FeatureStats& s);
void from_json(const json& j, FeatureStats& s);
}  // namespace feat

namespace rank {
void to_json(json& j, const TrainConfig& c);
void from_json(const json& j, TrainConfig& c);
/// {"w": [...], "stats_ref": "...", "train_config": {...}}
void to_json(json& j, const UtilityModel& m);
void from_json(const json& j, UtilityModel& m);
void to_json(json& j, const PreferencePair& p);
void from_json(const json& j, PreferencePair& p);
}  // namespace rank

namespace bench {
json config_to_json(const Configuration& cfg, const ConfigSpace& space = ConfigSpace::lcbench());
Configuration config_from_json(const json& j, const ConfigSpace& space = ConfigSpace::lcbench());
}  // namespace bench

namespace hpo {
json trajectory_to_json(const Trajectory& t, const bench::ConfigSpace& space = bench::ConfigSpace::lcbench());
Trajectory trajectory_from_json(const json& j, const bench::ConfigSpace& space = bench::ConfigSpace::lcbench());
}  // namespace hpo

namespace oracle {
/// One JSON-lines record of a simulated preference log.
json preference_record(const rank::PreferencePair& p, core::IndicatorKind oracle_kind);
}  // namespace oracle

namespace eval {
json cv_record(core::IndicatorKind kind, std::size_t n_pairs, const CvResult& r);
}  // namespace eval

json cost_to_json(double cost);
double cost_from_json(const json& j);

}  // namespace prefpareto
