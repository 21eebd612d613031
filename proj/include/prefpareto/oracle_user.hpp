#pragma once

// Simulated user: labels pairs of fronts by comparing a quality indicator.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prefpareto/core_mo.hpp"
#include "prefpareto/ranker.hpp"
#include "prefpareto/ranking_eval.hpp"

namespace prefpareto::oracle {

using rank::FrontId;
using FrontPair = std::pair<FrontId, FrontId>;

enum class TieMode { strict, jenks };

struct OracleConfig {
    core::IndicatorKind kind = core::IndicatorKind::HV;
    TieMode tie_mode = TieMode::strict;

    eval::Direction direction() const { return eval::direction_of(kind); }
};

/// All unordered pairs (i < j) of `n` fronts in lexicographic order, or a
/// seeded uniform subsample of `limit` of them (kept in lexicographic order).
std::vector<FrontPair> build_pairs(std::size_t n_fronts, std::optional<std::size_t> limit,
                                   std::uint64_t seed);

/// Labels each pair by indicator value; pairs the oracle cannot separate are
/// dropped. Front ids index into `fronts`.
std::vector<rank::PreferencePair> label_pairs(std::span<const FrontPair> pairs,
                                              std::span<const core::ParetoFront> fronts,
                                              const OracleConfig& cfg);

/// Same, with indicator values already computed (one per front id).
std::vector<rank::PreferencePair> label_pairs_by_value(std::span<const FrontPair> pairs,
                                                       std::span<const double> values,
                                                       const OracleConfig& cfg);

}  // namespace prefpareto::oracle
