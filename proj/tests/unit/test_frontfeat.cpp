#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/frontfeat.hpp"

using namespace prefpareto;
using namespace prefpareto::feat;
using core::ModelPoint;

namespace {

std::vector<std::vector<double>> rows_of(const LossMatrix& m) {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < m.rows; ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
    return out;
}

std::vector<ModelPoint> models(std::initializer_list<std::pair<double, double>> xs) {
    std::vector<ModelPoint> out;
    core::ModelId id = 0;
    for (auto [a, b] : xs) out.push_back({id++, {a, b}, {}});
    return out;
}

}  // namespace

TEST_CASE("loss matrix replaces dominated rows and pads") {
    EncodingConfig cfg;
    cfg.rows = 4;
    const auto m = build_loss_matrix(models({{0.9, 0.1}, {0.5, 0.4}, {0.6, 0.6}}), cfg);
    CHECK(m.filled == 3);
    CHECK(rows_of(m) == std::vector<std::vector<double>>{{0.9, 0.1}, {0.5, 0.4}, {0.5, 0.4}, {0.5, 0.4}});

    cfg.rows = 3;
    const auto same = build_loss_matrix(models({{0.9, 0.1}, {0.5, 0.4}, {0.2, 0.8}}), cfg);
    CHECK(rows_of(same) == std::vector<std::vector<double>>{{0.9, 0.1}, {0.5, 0.4}, {0.2, 0.8}});

    const auto single = build_loss_matrix(models({{0.4, 0.3}}), cfg);
    CHECK(rows_of(single) == std::vector<std::vector<double>>(3, {0.4, 0.3}));
}

TEST_CASE("loss matrix sorts by energy before the staircase pass") {
    EncodingConfig cfg;
    cfg.rows = 3;
    const auto m = build_loss_matrix(models({{0.2, 0.8}, {0.9, 0.1}, {0.5, 0.4}}), cfg);
    CHECK(rows_of(m) == std::vector<std::vector<double>>{{0.9, 0.1}, {0.5, 0.4}, {0.2, 0.8}});
}

TEST_CASE("loss matrix errors") {
    EncodingConfig cfg;
    cfg.rows = 2;
    CHECK_THROWS_AS(build_loss_matrix(models({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}}), cfg), Error);
    CHECK_THROWS_AS(build_loss_matrix(std::vector<ModelPoint>{}, cfg), Error);
    cfg.rows = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("staircase rows are exactly the non-dominated loss vectors") {
    Rng rng(23);
    EncodingConfig cfg;
    cfg.rows = 8;
    for (int t = 0; t < 500; ++t) {
        const auto ms = oracle_ref::random_models(rng, 1 + rng.below(8), t % 3 == 0 ? 0.25 : 0.0);
        const auto m = build_loss_matrix(ms, cfg);
        const auto rows = rows_of(m);
        std::set<std::vector<double>> distinct(rows.begin(), rows.end());
        std::vector<oracle_ref::Point> all;
        for (const auto& p : ms) all.push_back(p.losses);
        const auto nd = oracle_ref::nondominated_naive(all);
        CHECK(std::vector<std::vector<double>>(distinct.begin(), distinct.end()) == nd);
        for (std::size_t r = m.filled; r < m.rows; ++r) CHECK(rows[r] == rows[m.filled - 1]);
    }
}

TEST_CASE("fit_stats uses population moments") {
    EncodingConfig cfg;
    cfg.rows = 1;
    const std::vector<LossMatrix> ms{build_loss_matrix(models({{0.0, 0.5}}), cfg),
                                     build_loss_matrix(models({{1.0, 0.5}}), cfg)};
    const auto s = fit_stats(ms);
    CHECK(s.mean[0] == doctest::Approx(0.5));
    CHECK(s.std[0] == doctest::Approx(0.5));
    CHECK(s.std[1] == 0.0);
    CHECK(s.n_fit == 2);

    const auto f = encode(ms[1], s);
    CHECK(f.values[0] == doctest::Approx(1.0));
    CHECK(f.values[1] == 0.0);

    const std::vector<LossMatrix> one{ms[0]};
    const auto s1 = fit_stats(one);
    for (double sd : s1.std) CHECK(sd == 0.0);
    for (double v : encode(ms[1], s1).values) CHECK(v == 0.0);

    CHECK_THROWS_AS(fit_stats(std::vector<LossMatrix>{}), Error);
    EncodingConfig other;
    other.rows = 2;
    const std::vector<LossMatrix> mixed{ms[0], build_loss_matrix(models({{0.1, 0.1}}), other)};
    CHECK_THROWS_AS(fit_stats(mixed), Error);
    CHECK_THROWS_AS(encode(mixed[1], s), Error);
}

TEST_CASE("encoding is row-major and standardized") {
    Rng rng(31);
    std::vector<core::ParetoFront> fronts;
    for (int i = 0; i < 12; ++i) fronts.push_back(core::pareto_filter(oracle_ref::random_models(rng, 1 + rng.below(10))));
    const auto mats = front_matrices(fronts);
    const auto stats = fit_stats(mats);
    CHECK(stats.mean.size() == 20);
    for (std::size_t i = 0; i < fronts.size(); ++i) {
        const auto f = encode_front(fronts[i], stats);
        REQUIRE(f.size() == 20);
        for (std::size_t r = 0; r < 10; ++r) {
            for (std::size_t c = 0; c < 2; ++c) {
                const std::size_t pos = r * 2 + c;
                const double expect = stats.std[pos] == 0.0 ? 0.0 : (mats[i].at(r, c) - stats.mean[pos]) / stats.std[pos];
                CHECK(f.values[pos] == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("stats fingerprint identifies the statistics") {
    FeatureStats a{{0.1, 0.2}, {1.0, 0.5}, 3};
    FeatureStats b = a;
    CHECK(a.fingerprint() == b.fingerprint());
    b.mean[1] = 0.2000000001;
    CHECK(a.fingerprint() != b.fingerprint());
}
