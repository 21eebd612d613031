#include <cmath>

#include "doctest.h"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "prefpareto/serialization.hpp"

using namespace prefpareto;
using nlohmann::json;

TEST_CASE("model and front round trip") {
    core::ModelPoint p{3, {0.25, 0.5}, {{"epoch", 15.0}}};
    CHECK(json(p).get<core::ModelPoint>() == p);
    const auto sample = experiments::sample_fronts(0, 5, 1);
    for (const auto& f : sample.fronts) CHECK(json(f).get<core::ParetoFront>() == f);
    const json bad = {{"points", json::array({{{"id", 0}, {"losses", {0.2, 0.2}}}, {{"id", 1}, {"losses", {0.3, 0.3}}}})}};
    CHECK_THROWS_AS(bad.get<core::ParetoFront>(), Error);
}

TEST_CASE("utility model uses the documented field names") {
    rank::UtilityModel m{{0.1, -0.2}, {}, "stats-0123"};
    m.train_config.reg = 0.1;
    const json j = m;
    CHECK(j.contains("w"));
    CHECK(j.contains("stats_ref"));
    CHECK(j.contains("train_config"));
    CHECK(j.size() == 3);
    CHECK(j.get<rank::UtilityModel>() == m);
}

TEST_CASE("stats, preferences and configurations round trip") {
    feat::FeatureStats s{{0.1, 0.3}, {0.0, 1.5}, 7};
    CHECK(json(s).get<feat::FeatureStats>() == s);
    CHECK(json(s).get<feat::FeatureStats>().fingerprint() == s.fingerprint());

    rank::PreferencePair p{4, 9, rank::PreferenceSource::human};
    CHECK(json(p).get<rank::PreferencePair>() == p);

    const auto rec = oracle::preference_record({1, 2, rank::PreferenceSource::simulated}, core::IndicatorKind::SP);
    CHECK(rec == json{{"winner", 1}, {"loser", 2}, {"source", "simulated"}, {"oracle", "SP"}});

    Rng rng(3);
    const auto c = bench::sample_config(bench::ConfigSpace::lcbench(), rng);
    const json cj = bench::config_to_json(c);
    CHECK(cj.at("num_layers").is_number_integer());
    CHECK(bench::config_from_json(cj) == c);
}

TEST_CASE("trajectory round trip keeps infinite costs") {
    const auto sample = experiments::sample_fronts(1, 6, 2);
    auto t = sample.trajectory;
    t.trials[2].cost = std::numeric_limits<double>::infinity();
    t.trials[2].front.reset();
    const json j = hpo::trajectory_to_json(t);
    CHECK(j.at("trials").at(2).at("cost").is_null());
    int flagged = 0;
    for (const auto& tr : j.at("trials")) flagged += tr.at("incumbent").get<bool>() ? 1 : 0;
    CHECK(flagged == 1);
    const auto back = hpo::trajectory_from_json(j);
    REQUIRE(back.trials.size() == t.trials.size());
    CHECK(std::isinf(back.trials[2].cost));
    CHECK_FALSE(back.trials[2].front.has_value());
    CHECK(back.incumbent_index == t.incumbent_index);
    for (std::size_t i = 0; i < t.trials.size(); ++i) CHECK(back.trials[i].config == t.trials[i].config);
}

TEST_CASE("cv record") {
    eval::CvResult r{0.5, 0.1, {0.4, 0.6}, {28, 28}};
    const auto j = eval::cv_record(core::IndicatorKind::HV, 28, r);
    CHECK(j.at("indicator") == "HV");
    CHECK(j.at("per_fold").size() == 2);
    CHECK(j.contains("tau_mean"));
    CHECK(j.contains("tau_std"));
}
