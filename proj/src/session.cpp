#include "prefpareto/session.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "prefpareto/benchmark.hpp"
#include "prefpareto/error.hpp"
#include "prefpareto/experiments.hpp"
#include "prefpareto/random.hpp"
#include "prefpareto/serialization.hpp"

namespace prefpareto::session {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kPairStream = 2;
constexpr std::uint64_t kOptimizerStream = 3;
constexpr std::uint64_t kPresentationStream = 5;
constexpr std::uint64_t kIdStream = 6;

struct Cancelled {};

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex_id(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json points_of(const core::ParetoFront& f) {
    json pts = json::array();
    for (const auto& p : f.points()) pts.push_back(p.losses);
    return pts;
}

json progress_of(const Session& s) {
    return {{"answered", s.cursor}, {"total", s.pair_queue.size()}};
}

rank::FeatureMap features_of(const Session& s) {
    rank::FeatureMap fm;
    for (std::size_t i = 0; i < s.sampled_fronts.size(); ++i) {
        fm[static_cast<rank::FrontId>(i)] = feat::encode_front(s.sampled_fronts[i], s.stats);
    }
    return fm;
}

void require_phase(const Session& s, std::initializer_list<Phase> allowed, std::string_view action) {
    for (Phase p : allowed) {
        if (s.phase == p) return;
    }
    fail(ErrorCode::conflict,
         std::string(action) + " is not allowed in phase " + std::string(to_string(s.phase)));
}

json status_of(const Session& s) {
    const std::size_t done = s.trajectory ? s.trajectory->trials.size() : 0;
    json inc = nullptr;
    if (done > 0) inc = cost_to_json(s.trajectory->incumbent().cost);
    return {{"phase", to_string(s.phase)},
            {"trials_done", done},
            {"budget", s.budget},
            {"incumbent_cost", inc},
            {"preferences", s.preferences.size()},
            {"progress", progress_of(s)}};
}

}  // namespace

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::sampling: return "sampling";
        case Phase::preferences: return "preferences";
        case Phase::training: return "training";
        case Phase::optimizing: return "optimizing";
        case Phase::done: return "done";
    }
    return "unknown";
}

Phase parse_phase(std::string_view s) {
    for (Phase p : {Phase::sampling, Phase::preferences, Phase::training, Phase::optimizing, Phase::done}) {
        if (to_string(p) == s) return p;
    }
    fail(ErrorCode::parameter, "unknown phase '" + std::string(s) + "'");
}

Choice parse_choice(std::string_view s) {
    if (s == "left") return Choice::left;
    if (s == "right") return Choice::right;
    if (s == "skip") return Choice::skip;
    fail(ErrorCode::parameter, "choice must be left, right or skip");
}

bool Session::swapped(std::size_t pair_id) const {
    Rng rng(derive_seed(derive_seed(seed, kPresentationStream), pair_id));
    return rng.coin();
}

json to_json(const Session& s) {
    json pairs = json::array();
    for (const auto& [a, b] : s.pair_queue) pairs.push_back({a, b});
    return {{"id", s.id},
            {"phase", to_string(s.phase)},
            {"profile_id", s.profile_id},
            {"seed", s.seed},
            {"sampled_fronts", s.sampled_fronts},
            {"stats", s.stats},
            {"stats_ref", s.stats.fingerprint()},
            {"pair_queue", std::move(pairs)},
            {"cursor", s.cursor},
            {"preferences", s.preferences},
            {"model", s.model ? json(*s.model) : json(nullptr)},
            {"cv_tau_estimate", s.cv_tau_estimate ? json(*s.cv_tau_estimate) : json(nullptr)},
            {"budget", s.budget},
            {"trajectory", s.trajectory ? hpo::trajectory_to_json(*s.trajectory) : json(nullptr)},
            {"created_at", s.created_at},
            {"updated_at", s.updated_at}};
}

Session session_from_json(const json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.phase = parse_phase(j.at("phase").get<std::string>());
    s.profile_id = j.at("profile_id").get<std::int64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.sampled_fronts = j.at("sampled_fronts").get<std::vector<core::ParetoFront>>();
    s.stats = j.at("stats").get<feat::FeatureStats>();
    for (const auto& p : j.at("pair_queue")) s.pair_queue.emplace_back(p.at(0).get<rank::FrontId>(), p.at(1).get<rank::FrontId>());
    s.cursor = j.at("cursor").get<std::size_t>();
    s.preferences = j.at("preferences").get<std::vector<rank::PreferencePair>>();
    if (!j.at("model").is_null()) s.model = j.at("model").get<rank::UtilityModel>();
    if (!j.at("cv_tau_estimate").is_null()) s.cv_tau_estimate = j.at("cv_tau_estimate").get<double>();
    s.budget = j.at("budget").get<int>();
    if (!j.at("trajectory").is_null()) s.trajectory = hpo::trajectory_from_json(j.at("trajectory"));
    s.created_at = j.value("created_at", std::string());
    s.updated_at = j.value("updated_at", std::string());
    if (s.cursor > s.pair_queue.size()) fail(ErrorCode::parameter, "session cursor beyond its pair queue");
    return s;
}

std::optional<double> preference_cv_estimate(std::span<const rank::PreferencePair> prefs,
                                             const rank::FeatureMap& features, const rank::TrainConfig& cfg,
                                             std::size_t folds) {
    const std::size_t n = prefs.size();
    if (n < kMinPreferencesForCv) return std::nullopt;
    folds = std::min(folds, n);
    double total = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t lo = f * n / folds;
        const std::size_t hi = (f + 1) * n / folds;
        std::vector<rank::PreferencePair> train;
        for (std::size_t i = 0; i < n; ++i) {
            if (i < lo || i >= hi) train.push_back(prefs[i]);
        }
        const auto model = rank::train_linear_ranksvm(rank::build_svm_dataset(train, features), cfg);
        double agreement = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            switch (rank::predict_pref(model, features.at(prefs[i].winner), features.at(prefs[i].loser))) {
                case rank::Preference::first: agreement += 1.0; break;
                case rank::Preference::second: agreement -= 1.0; break;
                case rank::Preference::tie: break;
            }
        }
        total += agreement / static_cast<double>(hi - lo);
    }
    return total / static_cast<double>(folds);
}

SessionManager::SessionManager(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(data_dir_, ec);
    if (ec) fail(ErrorCode::io, "cannot create data directory " + data_dir_.string() + ": " + ec.message());
    for (const auto& entry : std::filesystem::directory_iterator(data_dir_)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json j;
        try {
            in >> j;
            auto s = std::make_shared<Slot>();
            s->session = session_from_json(j);
            slots_[s->session.id] = s;
        } catch (const std::exception& e) {
            std::cerr << "skipping unreadable session file " << entry.path() << ": " << e.what() << '\n';
        }
    }
    for (auto& [id, s] : slots_) {
        if (s->session.phase == Phase::optimizing) launch(s);
    }
}

SessionManager::~SessionManager() {
    stopping_ = true;
    std::vector<std::thread> jobs;
    {
        std::lock_guard lock(registry_mutex_);
        for (auto& [id, s] : slots_) {
            std::lock_guard slot_lock(s->mutex);
            if (s->job.joinable()) jobs.push_back(std::move(s->job));
        }
    }
    for (auto& t : jobs) t.join();
}

std::filesystem::path SessionManager::path_of(const std::string& id) const { return data_dir_ / (id + ".json"); }

std::shared_ptr<SessionManager::Slot> SessionManager::slot(const std::string& id) {
    std::lock_guard lock(registry_mutex_);
    const auto it = slots_.find(id);
    if (it == slots_.end()) fail(ErrorCode::not_found, "unknown session '" + id + "'");
    return it->second;
}

void SessionManager::persist(Session& s) {
    s.updated_at = now_utc();
    const auto path = path_of(s.id);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << to_json(s).dump(1) << '\n';
        if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::io, "cannot replace " + path.string() + ": " + ec.message());
}

json SessionManager::create(const CreateRequest& req) {
    if (req.profile_id < 0) fail(ErrorCode::parameter, "profile_id must be non-negative");
    if (req.n_fronts < 2) fail(ErrorCode::parameter, "n_fronts must be at least 2");
    if (req.n_fronts > kMaxFronts) fail(ErrorCode::parameter, "n_fronts must not exceed " + std::to_string(kMaxFronts));
    if (req.pair_limit && *req.pair_limit < 1) fail(ErrorCode::parameter, "pair_limit must be positive");

    auto s = std::make_shared<Slot>();
    Session& session = s->session;
    session.profile_id = req.profile_id;
    session.seed = req.seed;
    session.created_at = now_utc();
    session.pair_queue = oracle::build_pairs(req.n_fronts, req.pair_limit, derive_seed(req.seed, kPairStream));

    auto sample = experiments::sample_fronts(req.profile_id, req.n_fronts, derive_seed(req.seed, kSamplingStream));
    session.sampled_fronts = std::move(sample.fronts);
    session.stats = feat::fit_stats(feat::front_matrices(session.sampled_fronts));
    session.phase = Phase::preferences;

    std::uint64_t key = derive_seed(req.seed, kIdStream);
    key = derive_seed(key, static_cast<std::uint64_t>(req.profile_id));
    key = derive_seed(key, req.n_fronts);
    key = derive_seed(key, req.pair_limit ? *req.pair_limit + 1 : 0);

    std::lock_guard lock(registry_mutex_);
    for (std::uint64_t attempt = 0;; ++attempt) {
        session.id = hex_id(derive_seed(key, attempt));
        if (!slots_.contains(session.id) && !std::filesystem::exists(path_of(session.id))) break;
    }
    persist(session);
    slots_[session.id] = s;
    return to_json(session);
}

json SessionManager::get(const std::string& id) {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    return to_json(s->session);
}

json SessionManager::next_pair(const std::string& id) {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    const Session& session = s->session;
    require_phase(session, {Phase::preferences}, "requesting pairs");
    if (session.cursor >= session.pair_queue.size()) return {{"done", true}, {"progress", progress_of(session)}};
    auto [a, b] = session.pair_queue[session.cursor];
    if (session.swapped(session.cursor)) std::swap(a, b);
    return {{"done", false},
            {"pair_id", session.cursor},
            {"left", points_of(session.sampled_fronts.at(static_cast<std::size_t>(a)))},
            {"right", points_of(session.sampled_fronts.at(static_cast<std::size_t>(b)))},
            {"progress", progress_of(session)}};
}

json SessionManager::submit_preference(const std::string& id, std::size_t pair_id, Choice choice) {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    Session& session = s->session;
    require_phase(session, {Phase::preferences}, "submitting preferences");
    if (session.cursor >= session.pair_queue.size() || pair_id != session.cursor) {
        fail(ErrorCode::conflict, "pair " + std::to_string(pair_id) + " is not the pair awaiting an answer");
    }
    auto [left, right] = session.pair_queue[pair_id];
    if (session.swapped(pair_id)) std::swap(left, right);
    bool recorded = false;
    if (choice != Choice::skip) {
        const bool left_wins = choice == Choice::left;
        session.preferences.push_back(rank::PreferencePair{left_wins ? left : right, left_wins ? right : left,
                                                           rank::PreferenceSource::human});
        recorded = true;
    }
    ++session.cursor;
    persist(session);
    return {{"pair_id", pair_id}, {"recorded", recorded}, {"progress", progress_of(session)}};
}

json SessionManager::train(const std::string& id, const std::optional<rank::TrainConfig>& cfg_in) {
    const rank::TrainConfig cfg = cfg_in.value_or(rank::TrainConfig{});
    cfg.validate();
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    Session& session = s->session;
    require_phase(session, {Phase::preferences, Phase::training}, "training");
    if (session.preferences.empty()) fail(ErrorCode::precondition, "no preferences recorded yet");

    const auto features = features_of(session);
    session.model = rank::train_linear_ranksvm(rank::build_svm_dataset(session.preferences, features), cfg,
                                               session.stats.fingerprint());
    session.cv_tau_estimate = preference_cv_estimate(session.preferences, features, cfg);
    session.phase = Phase::training;
    persist(session);

    double norm = 0.0;
    for (double w : session.model->w) norm += w * w;
    return {{"phase", to_string(session.phase)},
            {"cv_tau_estimate", session.cv_tau_estimate ? json(*session.cv_tau_estimate) : json(nullptr)},
            {"cv_available", session.cv_tau_estimate.has_value()},
            {"model_summary",
             {{"dimension", session.model->w.size()},
              {"weight_norm", std::sqrt(norm)},
              {"n_preferences", session.preferences.size()},
              {"train_config", session.model->train_config},
              {"stats_ref", session.model->stats_ref}}}};
}

json SessionManager::start_optimize(const std::string& id, int budget) {
    if (budget < 1) fail(ErrorCode::parameter, "budget must be positive");
    auto s = slot(id);
    {
        std::lock_guard lock(s->mutex);
        Session& session = s->session;
        require_phase(session, {Phase::training}, "starting optimization");
        if (!session.model) fail(ErrorCode::precondition, "no trained model");
        session.budget = budget;
        session.trajectory = hpo::Trajectory{};
        session.phase = Phase::optimizing;
        persist(session);
    }
    launch(s);
    return {{"accepted", true}, {"phase", to_string(Phase::optimizing)}, {"budget", budget}};
}

void SessionManager::launch(const std::shared_ptr<Slot>& s) {
    std::thread previous;
    {
        std::lock_guard lock(s->mutex);
        previous = std::move(s->job);
    }
    if (previous.joinable()) previous.join();
    std::lock_guard lock(s->mutex);
    s->job = std::thread([this, s] { run_job(s); });
}

void SessionManager::run_job(const std::shared_ptr<Slot>& s) {
    hpo::PreferenceCost cost;
    hpo::OptimizerConfig opt;
    std::int64_t profile_id = 0;
    {
        std::lock_guard lock(s->mutex);
        const Session& session = s->session;
        cost.model = *session.model;
        cost.stats = session.stats;
        opt.budget = session.budget;
        opt.n_init = std::min(opt.n_init, session.budget);
        opt.seed = derive_seed(session.seed, kOptimizerStream);
        profile_id = session.profile_id;
    }
    try {
        const auto objective = hpo::benchmark_objective(bench::DatasetProfile::generate(profile_id), cost);
        auto traj = hpo::optimize(objective, bench::ConfigSpace::lcbench(), opt, [&](const hpo::Trajectory& t) {
            if (stopping_) throw Cancelled{};
            std::lock_guard lock(s->mutex);
            s->session.trajectory = t;
            persist(s->session);
        });
        std::lock_guard lock(s->mutex);
        s->session.trajectory = std::move(traj);
        s->session.phase = Phase::done;
        persist(s->session);
    } catch (const Cancelled&) {
        // state stays in the optimizing phase and is resumed on the next start
    } catch (const std::exception& e) {
        std::cerr << "optimization of session " << s->session.id << " failed: " << e.what() << '\n';
    }
}

void SessionManager::wait(const std::string& id) {
    auto s = slot(id);
    std::thread job;
    {
        std::lock_guard lock(s->mutex);
        job = std::move(s->job);
    }
    if (job.joinable()) job.join();
}

json SessionManager::status(const std::string& id) {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    return status_of(s->session);
}

json SessionManager::result(const std::string& id) {
    auto s = slot(id);
    std::lock_guard lock(s->mutex);
    const Session& session = s->session;
    require_phase(session, {Phase::done}, "reading the result");
    const auto& inc = session.trajectory->incumbent();
    return {{"phase", to_string(session.phase)},
            {"incumbent",
             {{"trial_index", inc.trial_index},
              {"config", bench::config_to_json(inc.config)},
              {"cost", cost_to_json(inc.cost)},
              {"utility", std::isfinite(inc.cost) ? json(-inc.cost) : json(nullptr)},
              {"front", inc.front ? json(inc.front->points()) : json(nullptr)}}},
            {"trajectory", hpo::trajectory_to_json(*session.trajectory)}};
}

}  // namespace prefpareto::session
