#include <fstream>
#include <sstream>

#include "doctest.h"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "session_client.hpp"

using namespace prefpareto;
using namespace prefpareto::experiments;
using core::IndicatorKind;

namespace {

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n' ? 1 : 0;
    return n;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("sampled fronts are deterministic and seed dependent") {
    const auto a = sample_fronts(0, 10, 5), b = sample_fronts(0, 10, 5), c = sample_fronts(0, 10, 6);
    CHECK(a.fronts == b.fronts);
    CHECK(a.fronts.size() == 10);
    CHECK(a.trajectory.trials.size() == 10);
    CHECK_FALSE(a.fronts == c.fronts);
}

TEST_CASE("tau curve covers the full grid") {
    TauCurveArgs args;
    args.indicators = {IndicatorKind::HV, IndicatorKind::R2};
    args.n_pairs_list = {28, 56};
    args.profiles = {0, 1};
    args.seeds = 2;
    args.seed = 3;
    args.threads = 2;
    const auto report = run_tau_curve(args);
    CHECK(report.runs.size() == 2 * 2 * 2 * 2);
    CHECK(report.curve(IndicatorKind::HV).size() == 2);
    for (const auto& r : report.runs) {
        CHECK(r.cv.per_fold.size() == 5);
        CHECK(r.cv.tau_mean >= -1.0);
        CHECK(r.cv.tau_mean <= 1.0);
    }
    // the curve is the mean over profiles and seeds
    double sum = 0.0;
    for (const auto& r : report.runs) sum += (r.indicator == IndicatorKind::R2 && r.n_pairs == 56) ? r.cv.tau_mean : 0.0;
    CHECK(report.curve(IndicatorKind::R2)[1] == doctest::Approx(sum / 4.0));
    CHECK(count_lines(report.to_csv()) == 2 + report.runs.size());

    auto one_thread = args;
    one_thread.threads = 1;
    CHECK(run_tau_curve(one_thread).to_csv() == report.to_csv());
    CHECK(run_tau_curve(one_thread).to_json() == report.to_json());

    auto empty = args;
    empty.seeds = 0;
    CHECK_THROWS_AS(run_tau_curve(empty), Error);
}

TEST_CASE("matrix has sixteen cells and is reproducible") {
    MatrixArgs args;
    args.profiles = {0, 1};
    args.seeds = 1;
    args.budget = 10;
    args.seed = 4;
    args.threads = 2;
    const auto report = run_matrix(args);
    REQUIRE(report.cells.size() == 16);
    for (const auto& c : report.cells) {
        CHECK(c.pb_scores.size() == 2);
        CHECK(c.ib_scores.size() == 2);
        CHECK(c.outcome == compare_arms(c.pb_mean, c.ib_mean, c.row));
    }
    // the PB arm of a row does not depend on the column
    for (auto row : core::kAllIndicators) {
        CHECK(report.cell(row, IndicatorKind::HV).pb_scores == report.cell(row, IndicatorKind::R2).pb_scores);
    }
    CHECK(count_lines(report.to_csv()) == 18);
    auto one_thread = args;
    one_thread.threads = 1;
    CHECK(run_matrix(one_thread).to_csv() == report.to_csv());
}

TEST_CASE("arm comparison respects indicator direction and tolerance") {
    CHECK(compare_arms(0.8, 0.7, IndicatorKind::HV) == Outcome::win);
    CHECK(compare_arms(0.7, 0.8, IndicatorKind::HV) == Outcome::loss);
    CHECK(compare_arms(0.80, 0.81, IndicatorKind::HV) == Outcome::tie);
    CHECK(compare_arms(0.1, 0.2, IndicatorKind::R2) == Outcome::win);
    CHECK(compare_arms(0.2, 0.1, IndicatorKind::SP) == Outcome::loss);
}

TEST_CASE("ranker tuning selects the best mean tau") {
    TuneArgs args;
    args.reg_grid = {0.1, 1.0};
    args.profiles = {100};
    args.seeds = 2;
    args.indicators = {IndicatorKind::HV, IndicatorKind::MS};
    args.threads = 2;
    const auto report = run_tune_ranker(args);
    CHECK(report.cells.size() == 4);
    REQUIRE(report.selected.size() == 2);
    for (const auto& [kind, reg] : report.selected) {
        double best = -2.0, best_reg = 0.0;
        for (const auto& c : report.cells) {
            if (c.indicator != kind) continue;
            CHECK(c.taus.size() == 2);
            if (c.tau_mean > best) best = c.tau_mean, best_reg = c.reg;
        }
        CHECK(reg == best_reg);
    }
}

TEST_CASE("reports are written as json and csv") {
    const auto dir = session_client::fresh_dir("report");
    const auto prefix = dir / "nested" / "out";
    write_report(prefix, nlohmann::json{{"a", 1}}, "x\n");
    CHECK(nlohmann::json::parse(slurp(dir / "nested" / "out.json")) == nlohmann::json{{"a", 1}});
    CHECK(slurp(dir / "nested" / "out.csv") == "x\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("tuned ranker settings") {
    TuneArgs args;
    args.reg_grid = {0.1, 10.0};
    args.profiles = {100};
    args.seeds = 1;
    args.indicators = {IndicatorKind::SP};
    const auto report = run_tune_ranker(args);
    rank::TrainConfig base;
    base.reg = 3.0;
    const auto direct = report.settings(base);
    const auto loaded = ranker_settings_from_tune_json(report.to_json(), base);
    CHECK(loaded.for_indicator(IndicatorKind::SP).reg == direct.for_indicator(IndicatorKind::SP).reg);
    CHECK(loaded.for_indicator(IndicatorKind::SP).reg == report.selected.at(0).second);
    CHECK(loaded.for_indicator(IndicatorKind::HV).reg == 3.0);
    CHECK_THROWS_AS(ranker_settings_from_tune_json(nlohmann::json{{"command", "matrix"}}), Error);

    // a per-indicator override changes only that indicator's curve
    TauCurveArgs tau;
    tau.indicators = {IndicatorKind::HV, IndicatorKind::SP};
    tau.n_pairs_list = {28};
    tau.profiles = {0};
    tau.seeds = 1;
    auto tuned = tau;
    tuned.train.by_indicator[IndicatorKind::SP].reg = 0.01;
    const auto plain = run_tau_curve(tau), over = run_tau_curve(tuned);
    CHECK(plain.curve(IndicatorKind::HV) == over.curve(IndicatorKind::HV));
    CHECK(over.to_csv().find("reg=HV:1,SP:0.01") != std::string::npos);
}
