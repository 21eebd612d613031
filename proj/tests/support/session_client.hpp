#pragma once

// Helpers for driving a session the way a simulated user would.

#include <filesystem>
#include <random>
#include <string>

#include "json.hpp"
#include "prefpareto/core_mo.hpp"

namespace session_client {

inline std::filesystem::path fresh_dir(const std::string& tag) {
    std::random_device rd;
    auto dir = std::filesystem::temp_directory_path() / ("prefpareto-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(dir);
    return dir;
}

inline prefpareto::core::ParetoFront front_from_points(const nlohmann::json& pts) {
    std::vector<prefpareto::core::ModelPoint> models;
    prefpareto::core::ModelId id = 0;
    for (const auto& p : pts) models.push_back({id++, p.get<std::vector<double>>(), {}});
    return prefpareto::core::pareto_filter(models);
}

/// "left", "right" or "skip" for a presented pair, answered by an indicator.
inline std::string answer(const nlohmann::json& presentation, prefpareto::core::IndicatorKind kind) {
    const double l = prefpareto::core::indicator_value(kind, front_from_points(presentation.at("left")));
    const double r = prefpareto::core::indicator_value(kind, front_from_points(presentation.at("right")));
    if (l == r) return "skip";
    const bool left_better = prefpareto::core::is_maximized(kind) ? l > r : l < r;
    return left_better ? "left" : "right";
}

inline nlohmann::json without_timestamps(nlohmann::json doc) {
    doc.erase("created_at");
    doc.erase("updated_at");
    return doc;
}

}  // namespace session_client
