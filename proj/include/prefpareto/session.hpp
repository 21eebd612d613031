#pragma once

// Interactive sessions: sampling, pairwise labeling, ranker training and a
// background preference-based optimization, persisted as one JSON document
// per session.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "json.hpp"
#include "prefpareto/core_mo.hpp"
#include "prefpareto/frontfeat.hpp"
#include "prefpareto/hpo_engine.hpp"
#include "prefpareto/oracle_user.hpp"
#include "prefpareto/ranker.hpp"

namespace prefpareto::session {

enum class Phase { sampling, preferences, training, optimizing, done };

std::string_view to_string(Phase p) noexcept;
Phase parse_phase(std::string_view s);

enum class Choice { left, right, skip };

Choice parse_choice(std::string_view s);

inline constexpr std::size_t kMinPreferencesForCv = 10;
inline constexpr std::size_t kMaxFronts = 1000;

struct CreateRequest {
    std::int64_t profile_id = 0;
    std::size_t n_fronts = 40;
    std::optional<std::size_t> pair_limit;
    std::uint64_t seed = 0;
};

struct Session {
    std::string id;
    Phase phase = Phase::sampling;
    std::int64_t profile_id = 0;
    std::uint64_t seed = 0;
    std::vector<core::ParetoFront> sampled_fronts;
    feat::FeatureStats stats;
    std::vector<oracle::FrontPair> pair_queue;
    std::size_t cursor = 0;
    std::vector<rank::PreferencePair> preferences;
    std::optional<rank::UtilityModel> model;
    std::optional<double> cv_tau_estimate;
    int budget = 0;
    std::optional<hpo::Trajectory> trajectory;
    std::string created_at;
    std::string updated_at;

    /// Whether the front of pair `pair_id` listed first in the queue is shown on the right.
    bool swapped(std::size_t pair_id) const;
};

nlohmann::json to_json(const Session& s);
Session session_from_json(const nlohmann::json& j);

/// Held-out pairwise agreement (concordant - discordant) / n over contiguous
/// folds of the preference log. Empty below kMinPreferencesForCv.
std::optional<double> preference_cv_estimate(std::span<const rank::PreferencePair> prefs,
                                             const rank::FeatureMap& features, const rank::TrainConfig& cfg,
                                             std::size_t folds = 5);

/// Owns all sessions of a data directory. Mutations of one session are
/// serialized; optimization runs on one background thread per session.
class SessionManager {
public:
    explicit SessionManager(std::filesystem::path data_dir);
    ~SessionManager();

    SessionManager(const SessionManager&) = delete;
    SessionManager& operator=(const SessionManager&) = delete;

    nlohmann::json create(const CreateRequest& req);
    nlohmann::json get(const std::string& id);
    nlohmann::json next_pair(const std::string& id);
    nlohmann::json submit_preference(const std::string& id, std::size_t pair_id, Choice choice);
    nlohmann::json train(const std::string& id, const std::optional<rank::TrainConfig>& cfg);
    nlohmann::json start_optimize(const std::string& id, int budget);
    nlohmann::json status(const std::string& id);
    nlohmann::json result(const std::string& id);

    /// Blocks until the session's optimization job (if any) has finished.
    void wait(const std::string& id);

    const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

private:
    struct Slot {
        std::mutex mutex;
        Session session;
        std::thread job;
    };

    std::shared_ptr<Slot> slot(const std::string& id);
    std::filesystem::path path_of(const std::string& id) const;
    void persist(Session& s);
    void launch(const std::shared_ptr<Slot>& slot);
    void run_job(const std::shared_ptr<Slot>& slot);

    std::filesystem::path data_dir_;
    std::mutex registry_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::atomic<bool> stopping_{false};
};

}  // namespace prefpareto::session
