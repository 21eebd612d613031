// Experiment harness and session server launcher.

#include <csignal>
#include <fstream>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "prefpareto/server.hpp"
#include "prefpareto/session.hpp"

using namespace prefpareto;
using nlohmann::json;

namespace {

constexpr std::int64_t kTuningProfileBase = 100;

int print_error(std::string_view code, const std::string& message) {
    std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
    return 1;
}

std::vector<core::IndicatorKind> parse_indicators(const std::vector<std::string>& names) {
    std::vector<core::IndicatorKind> out;
    for (const auto& n : names) out.push_back(core::parse_indicator(n));
    return out;
}

std::vector<std::int64_t> profile_range(std::int64_t first, std::size_t count) {
    std::vector<std::int64_t> ids(count);
    std::iota(ids.begin(), ids.end(), first);
    return ids;
}

struct Options {
    std::uint64_t seed = 0;
    std::string out;
    unsigned threads = 0;
    double reg = 1.0;
    std::string tuned;  // tune-ranker JSON report

    // tau-curve
    std::vector<std::string> indicators{"HV", "SP", "MS", "R2"};
    std::vector<std::size_t> n_pairs_list{28, 56, 84, 112, 140};
    std::vector<std::int64_t> tau_profiles{0, 1, 2};
    std::size_t seeds = 3;

    // matrix
    std::size_t matrix_profiles = 10;
    int budget = 30;
    std::size_t n_pairs = 28;
    bool warm_start = false;

    // tune-ranker
    std::vector<double> reg_grid{0.01, 0.1, 1.0, 10.0};
    std::size_t tune_profiles = 3;

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir = "sessions";
};

experiments::RankerSettings ranker_settings(const Options& o) {
    rank::TrainConfig base;
    base.reg = o.reg;
    if (o.tuned.empty()) return {base, {}};
    std::ifstream in(o.tuned);
    if (!in) prefpareto::fail(ErrorCode::io, "cannot read " + o.tuned);
    json report;
    try {
        report = json::parse(in);
    } catch (const json::exception& e) {
        prefpareto::fail(ErrorCode::parameter, o.tuned + ": " + e.what());
    }
    return experiments::ranker_settings_from_tune_json(report, base);
}

int run_tau_curve(const Options& o) {
    experiments::TauCurveArgs args;
    args.indicators = parse_indicators(o.indicators);
    args.n_pairs_list = o.n_pairs_list;
    args.profiles = o.tau_profiles;
    args.seeds = o.seeds;
    args.seed = o.seed;
    args.train = ranker_settings(o);
    args.threads = o.threads;
    const auto report = experiments::run_tau_curve(args);
    experiments::write_report(o.out, report.to_json(), report.to_csv());
    for (auto kind : args.indicators) {
        std::cout << core::to_string(kind);
        for (double t : report.curve(kind)) std::cout << ' ' << t;
        std::cout << '\n';
    }
    return 0;
}

int run_matrix(const Options& o) {
    if (o.matrix_profiles == 0 || static_cast<std::int64_t>(o.matrix_profiles) > kTuningProfileBase) {
        prefpareto::fail(ErrorCode::parameter, "--profiles must lie in [1, 100] to stay disjoint from tuning profiles");
    }
    experiments::MatrixArgs args;
    args.profiles = profile_range(0, o.matrix_profiles);
    args.seeds = o.seeds;
    args.seed = o.seed;
    args.budget = o.budget;
    args.n_pairs = o.n_pairs;
    args.warm_start = o.warm_start;
    args.train = ranker_settings(o);
    args.threads = o.threads;
    const auto report = experiments::run_matrix(args);
    experiments::write_report(o.out, report.to_json(), report.to_csv());
    std::cout << "better or equal in " << report.better_or_equal_count() << "/" << report.cells.size()
              << " cells\n";
    return 0;
}

int run_tune(const Options& o) {
    experiments::TuneArgs args;
    args.reg_grid = o.reg_grid;
    args.profiles = profile_range(kTuningProfileBase, o.tune_profiles);
    args.seeds = o.seeds;
    args.seed = o.seed;
    args.threads = o.threads;
    const auto report = experiments::run_tune_ranker(args);
    experiments::write_report(o.out, report.to_json(), report.to_csv());
    for (const auto& [kind, reg] : report.selected) std::cout << core::to_string(kind) << " reg=" << reg << '\n';
    return 0;
}

int run_serve(const Options& o) {
    std::string data_dir = o.data_dir;
    if (const char* env = std::getenv("PREFPARETO_DATA_DIR"); env && *env) data_dir = env;

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    session::SessionManager manager(data_dir);
    session::HttpServer server(manager, o.seed);
    const int port = server.bind(o.host, o.port);
    std::cout << "serving " << manager.data_dir().string() << " on http://" << o.host << ":" << port << std::endl;

    std::thread watcher([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.serve();
    if (watcher.joinable()) {
        pthread_kill(watcher.native_handle(), SIGTERM);
        watcher.join();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Preference-based hyperparameter optimization for multi-objective learners"};
    app.require_subcommand(1);

    auto common = [&o](CLI::App* cmd, bool with_out) {
        cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
        if (with_out) cmd->add_option("--out", o.out, "Output prefix; writes <out>.json and <out>.csv")->required();
        cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    };

    auto* tau = app.add_subcommand("tau-curve", "Cross-validated ranker tau against the number of training pairs");
    common(tau, true);
    tau->add_option("--indicators", o.indicators, "Indicators (HV, SP, MS, R2)")->delimiter(',')->capture_default_str();
    tau->add_option("--n-pairs", o.n_pairs_list, "Pair regimes")->delimiter(',')->capture_default_str();
    tau->add_option("--profiles", o.tau_profiles, "Profile ids")->delimiter(',')->capture_default_str();
    tau->add_option("--seeds", o.seeds, "Repetitions per profile")->capture_default_str();
    tau->add_option("--reg", o.reg, "Ranker regularization")->capture_default_str();
    tau->add_option("--tuned", o.tuned, "tune-ranker JSON report; its selected reg per indicator overrides --reg");

    auto* matrix = app.add_subcommand("matrix", "Preference-based vs indicator-based optimization matrix");
    common(matrix, true);
    matrix->add_option("--profiles", o.matrix_profiles, "Number of profiles (ids 0..n-1)")->capture_default_str();
    matrix->add_option("--seeds", o.seeds, "Repetitions per profile")->capture_default_str();
    matrix->add_option("--budget", o.budget, "Evaluations per optimization run")->capture_default_str();
    matrix->add_option("--n-pairs", o.n_pairs, "Training pairs per simulated user")->capture_default_str();
    matrix->add_option("--reg", o.reg, "Ranker regularization")->capture_default_str();
    matrix->add_option("--tuned", o.tuned, "tune-ranker JSON report; its selected reg per indicator overrides --reg");
    matrix->add_flag("--warm-start", o.warm_start, "Feed the sampled fronts to the surrogate");

    auto* tune = app.add_subcommand("tune-ranker", "Grid search of the ranker regularization on held-out profiles");
    common(tune, true);
    tune->add_option("--reg-grid", o.reg_grid, "Regularization grid")->delimiter(',')->capture_default_str();
    tune->add_option("--profiles", o.tune_profiles, "Number of tuning profiles (ids from 100)")->capture_default_str();
    tune->add_option("--seeds", o.seeds, "Repetitions per profile")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Run the interactive session service");
    serve->add_option("--seed", o.seed, "Seed for sessions created without one")->capture_default_str();
    serve->add_option("--host", o.host, "Bind address")->capture_default_str();
    serve->add_option("--port", o.port, "Port")->capture_default_str();
    serve->add_option("--data-dir", o.data_dir, "Session directory (PREFPARETO_DATA_DIR overrides)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return print_error("parameter", e.what());
    }

    try {
        if (*tau) return run_tau_curve(o);
        if (*matrix) return run_matrix(o);
        if (*tune) return run_tune(o);
        return run_serve(o);
    } catch (const Error& e) {
        return print_error(to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return print_error("internal", e.what());
    }
}
