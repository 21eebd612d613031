#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "prefpareto/oracle_user.hpp"

using namespace prefpareto;
using namespace prefpareto::oracle;

namespace {

core::ParetoFront single(double a, double b, core::ModelId id = 0) {
    return core::ParetoFront::from_sorted({{id, {a, b}, {}}});
}

}  // namespace

TEST_CASE("pair construction") {
    CHECK(build_pairs(8, std::nullopt, 0).size() == 28);
    CHECK(build_pairs(2, std::nullopt, 0) == std::vector<FrontPair>{{0, 1}});
    CHECK(build_pairs(40, std::nullopt, 0).size() == 780);
    const auto a = build_pairs(8, 10, 99);
    CHECK(a.size() == 10);
    CHECK(a == build_pairs(8, 10, 99));
    CHECK(std::is_sorted(a.begin(), a.end()));
    std::set<FrontPair> distinct(a.begin(), a.end());
    CHECK(distinct.size() == 10);
    for (auto [i, j] : a) CHECK(i < j);
    CHECK_THROWS_AS(build_pairs(8, 29, 0), Error);
    CHECK_THROWS_AS(build_pairs(1, std::nullopt, 0), Error);
}

TEST_CASE("labels follow the indicator direction") {
    const std::vector<FrontPair> p{{0, 1}};
    const std::vector<double> hv{0.7, 0.3};
    const auto l = label_pairs_by_value(p, hv, {core::IndicatorKind::HV});
    REQUIRE(l.size() == 1);
    CHECK(l[0].winner == 0);
    CHECK(l[0].source == rank::PreferenceSource::simulated);

    const std::vector<double> sp{0.01, 0.05};
    const auto s = label_pairs_by_value(p, sp, {core::IndicatorKind::SP});
    REQUIRE(s.size() == 1);
    CHECK(s[0].winner == 0);

    const std::vector<core::ParetoFront> twins{single(0.3, 0.3), single(0.3, 0.3, 1)};
    for (auto mode : {TieMode::strict, TieMode::jenks}) {
        CHECK(label_pairs(p, twins, {core::IndicatorKind::HV, mode}).empty());
    }
}

TEST_CASE("flipping the direction flips every label") {
    const auto sample = experiments::sample_fronts(2, 20, 77);
    const auto pairs = build_pairs(20, std::nullopt, 0);
    const auto hv = label_pairs(pairs, sample.fronts, {core::IndicatorKind::HV});
    std::vector<double> negated;
    for (const auto& f : sample.fronts) negated.push_back(-core::indicator_value(core::IndicatorKind::HV, f));
    const auto flipped = label_pairs_by_value(pairs, negated, {core::IndicatorKind::HV});
    REQUIRE(hv.size() == flipped.size());
    for (std::size_t i = 0; i < hv.size(); ++i) {
        CHECK(hv[i].winner == flipped[i].loser);
        CHECK(hv[i].loser == flipped[i].winner);
    }
}

TEST_CASE("oracle relation has no cycles") {
    Rng rng(3);
    std::vector<double> v(15);
    for (auto& x : v) x = std::round(rng.uniform() * 6);
    const auto pairs = build_pairs(v.size(), std::nullopt, 0);
    const auto labels = label_pairs_by_value(pairs, v, {core::IndicatorKind::R2});
    // a strict weak order: winner value strictly below loser value for a minimized indicator
    for (const auto& l : labels) CHECK(v[static_cast<std::size_t>(l.winner)] < v[static_cast<std::size_t>(l.loser)]);
}

TEST_CASE("jenks mode drops pairs within one bucket") {
    std::vector<core::ParetoFront> fronts;
    for (int i = 0; i < 4; ++i) fronts.push_back(single(0.3 + 1e-5 * i, 0.3, i));
    for (int i = 0; i < 4; ++i) fronts.push_back(single(0.7 + 1e-5 * i, 0.3, 4 + i));
    const auto pairs = build_pairs(fronts.size(), std::nullopt, 0);
    const auto strict = label_pairs(pairs, fronts, {core::IndicatorKind::R2, TieMode::strict});
    const auto jenks = label_pairs(pairs, fronts, {core::IndicatorKind::R2, TieMode::jenks});
    CHECK(strict.size() == 28);
    CHECK(jenks.size() == 16);
    for (const auto& l : jenks) CHECK(l.winner < 4);
}
