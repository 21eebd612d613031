#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "prefpareto/ranking_eval.hpp"

using namespace prefpareto;
using namespace prefpareto::eval;

namespace {

TiedRanking strict(std::vector<int> ranks) {
    TiedRanking r;
    for (std::size_t i = 0; i < ranks.size(); ++i) r.items.push_back({static_cast<FrontId>(i), ranks[i]});
    return r;
}

// Front of a single point with the given hypervolume against (1,1).
core::ParetoFront front_with_hv(double hv, core::ModelId id = 0) {
    const double side = std::sqrt(hv);
    return core::ParetoFront::from_sorted({{id, {1.0 - side, 1.0 - side}, {}}});
}

std::vector<int> ranks_of(const TiedRanking& r) {
    std::vector<int> out;
    for (const auto& it : r.items) out.push_back(it.rank);
    return out;
}

}  // namespace

TEST_CASE("fisher-jenks examples") {
    const std::vector<double> v{1, 2, 3, 10, 11, 12};
    const auto two = fisher_jenks(v, 2);
    CHECK(two.break_index == std::vector<std::size_t>{3});
    CHECK(two.assignment == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
    CHECK(two.boundaries == std::vector<double>{3.0});
    CHECK(two.cost == doctest::Approx(4.0));

    const auto one = fisher_jenks(v, 1);
    CHECK(one.gvf == 0.0);
    CHECK(std::all_of(one.assignment.begin(), one.assignment.end(), [](auto a) { return a == 0; }));

    const auto all = fisher_jenks(v, v.size());
    CHECK(all.cost == 0.0);
    CHECK(all.gvf == 1.0);

    CHECK_THROWS_AS(fisher_jenks(v, 0), Error);
    CHECK_THROWS_AS(fisher_jenks(v, 7), Error);
    const std::vector<double> unsorted{2, 1};
    CHECK_THROWS_AS(fisher_jenks(unsorted, 1), Error);
}

TEST_CASE("fisher-jenks equals exhaustive enumeration") {
    Rng rng(13);
    for (int t = 0; t < 120; ++t) {
        const std::size_t n = 1 + rng.below(12);
        std::vector<double> v(n);
        for (auto& x : v) x = t % 2 ? std::round(rng.uniform() * 5) : rng.uniform();
        std::sort(v.begin(), v.end());
        for (std::size_t k = 1; k <= std::min<std::size_t>(4, n); ++k) {
            const auto got = fisher_jenks(v, k);
            const auto expect = oracle_ref::jenks_exhaustive(v, k);
            CHECK(got.cost == expect.cost);
            CHECK(got.break_index == expect.breaks);
        }
    }
}

TEST_CASE("gvf is non-decreasing in k") {
    Rng rng(19);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> v(2 + rng.below(20));
        for (auto& x : v) x = rng.uniform();
        std::sort(v.begin(), v.end());
        const auto curve = gvf_curve(v, v.size());
        for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] >= curve[k - 1] - 1e-12);
        for (double g : curve) CHECK((g >= -1e-12 && g <= 1.0 + 1e-12));
    }
}

TEST_CASE("elbow selection") {
    const std::vector<double> clusters{1, 2, 3, 10, 11, 12};
    CHECK(select_k_elbow(clusters, 6) == 2);

    const std::vector<double> same(7, 0.25);
    CHECK(select_k_elbow(same, 7) == 1);

    std::vector<double> line;
    for (int i = 1; i <= 12; ++i) line.push_back(i);
    const auto detail = select_k_elbow_detail(line, 12);
    CHECK(detail.k >= 1);
    CHECK(detail.k <= 12);
    CHECK(detail.gvf.size() == 12);

    const std::vector<double> pair{0.1, 0.9};
    CHECK(select_k_elbow(pair, 2) == 2);
    CHECK_THROWS_AS(select_k_elbow(std::vector<double>{}, 1), Error);
    CHECK_THROWS_AS(select_k_elbow(clusters, 7), Error);
}

TEST_CASE("tied rankings of fronts") {
    std::vector<core::ParetoFront> same(5, front_with_hv(0.5));
    for (int r : ranks_of(tied_ranking(same, core::IndicatorKind::HV, Direction::maximize))) CHECK(r == 1);

    std::vector<core::ParetoFront> spread;
    for (int i = 0; i < 8; ++i) spread.push_back(front_with_hv(0.1 + 0.11 * i, i));
    const auto r8 = tied_ranking(spread, core::IndicatorKind::HV, Direction::maximize);
    CHECK(ranks_of(r8) == std::vector<int>{8, 7, 6, 5, 4, 3, 2, 1});

    std::vector<core::ParetoFront> two;
    for (int i = 0; i < 4; ++i) two.push_back(front_with_hv(0.3 + 1e-4 * i, i));
    for (int i = 0; i < 4; ++i) two.push_back(front_with_hv(0.6 + 1e-4 * i, 4 + i));
    const auto r2 = tied_ranking(two, core::IndicatorKind::HV, Direction::maximize);
    CHECK(ranks_of(r2) == std::vector<int>{2, 2, 2, 2, 1, 1, 1, 1});
    const auto r2min = tied_ranking(two, core::IndicatorKind::HV, Direction::minimize);
    CHECK(ranks_of(r2min) == std::vector<int>{1, 1, 1, 1, 2, 2, 2, 2});
}

TEST_CASE("affine transforms leave tied rankings unchanged") {
    Rng rng(29);
    for (int t = 0; t < 100; ++t) {
        std::vector<FrontId> ids;
        std::vector<double> v, w;
        const std::size_t n = 2 + rng.below(15);
        for (std::size_t i = 0; i < n; ++i) {
            ids.push_back(static_cast<FrontId>(i));
            v.push_back(std::round(rng.uniform() * 64) / 64);
            w.push_back(4.0 * v.back() + 2.0);
        }
        CHECK(tied_ranking_from_values(ids, v, Direction::maximize) ==
              tied_ranking_from_values(ids, w, Direction::maximize));
    }
}

TEST_CASE("ranking from scores") {
    const std::vector<FrontId> ids{4, 5, 6, 7};
    const std::vector<double> scores{0.2, 0.9, 0.2, -1.0};
    const auto r = ranking_from_scores(ids, scores);
    CHECK(ranks_of(r) == std::vector<int>{2, 1, 2, 3});
    CHECK_NOTHROW(r.validate());
}

TEST_CASE("kendall tau-b") {
    const auto a = strict({1, 2, 3, 4, 5, 6});
    CHECK(kendall_tau_b(a, a) == doctest::Approx(1.0));
    CHECK(kendall_tau_b(a, strict({6, 5, 4, 3, 2, 1})) == doctest::Approx(-1.0));
    const auto tied = strict({1, 2, 2, 3, 4, 5});
    CHECK(std::abs(kendall_tau_b(a, tied) - oracle_ref::tau_b_naive(a, tied)) <= 1e-12);
    CHECK(kendall_tau_b(a, strict({1, 1, 1, 1, 1, 1})) == 0.0);
    CHECK_THROWS_AS(kendall_tau_b(a, strict({1, 2})), Error);
}

TEST_CASE("kendall tau-b matches pair counting") {
    Rng rng(37);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + rng.below(29);
        const auto a = oracle_ref::random_ranking(rng, n, 1 + static_cast<int>(rng.below(n)));
        const auto b = oracle_ref::random_ranking(rng, n, 1 + static_cast<int>(rng.below(n)));
        const double tau = kendall_tau_b(a, b);
        CHECK(std::abs(tau - oracle_ref::tau_b_naive(a, b)) <= 1e-12);
        CHECK(tau == doctest::Approx(kendall_tau_b(b, a)).epsilon(1e-12));
        CHECK((tau >= -1.0 - 1e-12 && tau <= 1.0 + 1e-12));
        bool has_untied = false;
        for (const auto& it : a.items) has_untied = has_untied || it.rank != a.items.front().rank;
        if (has_untied) CHECK(kendall_tau_b(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("cross validation on the synthetic benchmark") {
    const auto sample = experiments::sample_fronts(0, 40, 123);
    REQUIRE(sample.fronts.size() == 40);
    CvConfig cfg;
    cfg.seed = 5;
    for (std::size_t np : {28u, 112u, 140u}) {
        cfg.n_pairs = np;
        const auto cv = cross_validate_ranker(sample.fronts, core::IndicatorKind::HV, cfg);
        CHECK(cv.per_fold.size() == 5);
        CHECK(cv.tau_mean > 0.0);
        for (std::size_t used : cv.train_pairs_per_fold) CHECK(used <= np);
        for (double t : cv.per_fold) CHECK((t >= -1.0 && t <= 1.0));
    }
    cfg.n_pairs = 141;
    CHECK_THROWS_AS(cross_validate_ranker(sample.fronts, core::IndicatorKind::HV, cfg), Error);
    cfg.n_pairs = 0;
    CHECK_THROWS_AS(cross_validate_ranker(sample.fronts, core::IndicatorKind::HV, cfg), Error);
    const std::vector<core::ParetoFront> odd(sample.fronts.begin(), sample.fronts.begin() + 12);
    cfg.n_pairs = 28;
    CHECK_THROWS_AS(cross_validate_ranker(odd, core::IndicatorKind::HV, cfg), Error);
}
