#include "prefpareto/oracle_user.hpp"

#include <algorithm>

#include "prefpareto/error.hpp"
#include "prefpareto/random.hpp"

namespace prefpareto::oracle {

std::vector<FrontPair> build_pairs(std::size_t n_fronts, std::optional<std::size_t> limit,
                                   std::uint64_t seed) {
    if (n_fronts < 2) fail(ErrorCode::parameter, "pairs need at least two fronts");
    std::vector<FrontPair> pairs;
    pairs.reserve(n_fronts * (n_fronts - 1) / 2);
    for (std::size_t i = 0; i < n_fronts; ++i) {
        for (std::size_t j = i + 1; j < n_fronts; ++j) {
            pairs.emplace_back(static_cast<FrontId>(i), static_cast<FrontId>(j));
        }
    }
    if (!limit) return pairs;
    if (*limit > pairs.size()) {
        fail(ErrorCode::parameter, "pair limit " + std::to_string(*limit) + " exceeds the " +
                                       std::to_string(pairs.size()) + " available pairs");
    }
    Rng rng(seed);
    rng.shuffle(std::span<FrontPair>(pairs));
    pairs.resize(*limit);
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<rank::PreferencePair> label_pairs_by_value(std::span<const FrontPair> pairs,
                                                       std::span<const double> values,
                                                       const OracleConfig& cfg) {
    const bool maximize = cfg.direction() == eval::Direction::maximize;

    std::vector<int> bucket_rank;
    if (cfg.tie_mode == TieMode::jenks) {
        std::vector<FrontId> ids(values.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<FrontId>(i);
        const auto ranking = eval::tied_ranking_from_values(ids, values, cfg.direction());
        bucket_rank.resize(values.size());
        for (const auto& item : ranking.items) bucket_rank[static_cast<std::size_t>(item.id)] = item.rank;
    }

    std::vector<rank::PreferencePair> out;
    out.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= values.size() ||
            static_cast<std::size_t>(b) >= values.size()) {
            fail(ErrorCode::lookup, "pair refers to an unknown front");
        }
        const double va = values[static_cast<std::size_t>(a)];
        const double vb = values[static_cast<std::size_t>(b)];
        if (va == vb) continue;
        if (cfg.tie_mode == TieMode::jenks &&
            bucket_rank[static_cast<std::size_t>(a)] == bucket_rank[static_cast<std::size_t>(b)]) {
            continue;
        }
        const bool a_wins = maximize ? va > vb : va < vb;
        out.push_back({a_wins ? a : b, a_wins ? b : a, rank::PreferenceSource::simulated});
    }
    return out;
}

std::vector<rank::PreferencePair> label_pairs(std::span<const FrontPair> pairs,
                                              std::span<const core::ParetoFront> fronts,
                                              const OracleConfig& cfg) {
    std::vector<double> values;
    values.reserve(fronts.size());
    for (const auto& f : fronts) values.push_back(core::indicator_value(cfg.kind, f));
    return label_pairs_by_value(pairs, values, cfg);
}

}  // namespace prefpareto::oracle
