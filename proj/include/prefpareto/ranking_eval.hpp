#pragma once

// Natural-breaks grouping of indicator values, tie-aware rankings, Kendall
// tau-b and the k-fold evaluation protocol for the ranker.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "prefpareto/core_mo.hpp"
#include "prefpareto/ranker.hpp"

namespace prefpareto::eval {

using rank::FrontId;

struct RankedItem {
    FrontId id = 0;
    int rank = 1;

    friend bool operator==(const RankedItem&, const RankedItem&) = default;
};

/// Ranks start at 1; equal ranks are ties; the set of ranks is contiguous.
struct TiedRanking {
    std::vector<RankedItem> items;

    void validate() const;
    friend bool operator==(const TiedRanking&, const TiedRanking&) = default;
};

struct BreaksResult {
    std::size_t k = 0;
    std::vector<double> boundaries;        // upper value of each bucket but the last
    std::vector<std::size_t> break_index;  // first index of buckets 2..k
    std::vector<std::size_t> assignment;   // bucket of each input value
    double cost = 0.0;                     // total within-bucket sum of squares
    double gvf = 0.0;
};

/// Sum of squared deviations from the mean of `values`.
double sum_squared_deviations(std::span<const double> values);

/// Optimal partition of sorted values into k contiguous buckets. Among
/// equal-cost partitions, the one with the lexicographically earliest break
/// positions wins.
BreaksResult fisher_jenks(std::span<const double> sorted_values, std::size_t k);

/// gvf(k) for k = 1..k_max.
std::vector<double> gvf_curve(std::span<const double> sorted_values, std::size_t k_max);

struct ElbowResult {
    std::size_t k = 1;
    std::vector<double> gvf;  // gvf[k-1] for k = 1..
    bool fallback = false;
};

/// Knee of the gvf curve: the k with the largest drop in marginal gain. When
/// the knee does not reach kKneeMinGvf, the smallest k with gvf >= kFlatCurveGvf.
ElbowResult select_k_elbow_detail(std::span<const double> sorted_values, std::size_t k_max);
std::size_t select_k_elbow(std::span<const double> sorted_values, std::size_t k_max);

inline constexpr double kKneeMinGvf = 0.9;
inline constexpr double kFlatCurveGvf = 0.999;

enum class Direction { maximize, minimize };

inline Direction direction_of(core::IndicatorKind kind) {
    return core::is_maximized(kind) ? Direction::maximize : Direction::minimize;
}

/// Groups `values` (one per id) with natural breaks; the best bucket is rank 1.
TiedRanking tied_ranking_from_values(std::span<const FrontId> ids, std::span<const double> values,
                                     Direction direction);

/// Indicator-based ground-truth ranking of `fronts`; ids are the list positions
/// unless `ids` is given.
TiedRanking tied_ranking(std::span<const core::ParetoFront> fronts, core::IndicatorKind kind,
                         Direction direction, std::span<const FrontId> ids = {});

/// Strict-or-tied ranking by descending score (equal scores tie).
TiedRanking ranking_from_scores(std::span<const FrontId> ids, std::span<const double> scores);

/// Tie-corrected Kendall correlation; 0 when either side is all-tied.
double kendall_tau_b(const TiedRanking& a, const TiedRanking& b);

struct CvResult {
    double tau_mean = 0.0;
    double tau_std = 0.0;
    std::vector<double> per_fold;
    std::vector<std::size_t> train_pairs_per_fold;  // labeled pairs after oracle drops
};

struct CvConfig {
    std::size_t folds = 5;
    std::size_t n_pairs = 28;
    rank::TrainConfig train;
    std::uint64_t seed = 0;
};

/// Folds are contiguous slices of `fronts`. Training pairs come from the
/// within-fold pairs of the training folds in rotation order after the test
/// fold, then seeded cross-fold pairs between training fronts.
CvResult cross_validate_ranker(std::span<const core::ParetoFront> fronts, core::IndicatorKind kind,
                               const CvConfig& cfg);

}  // namespace prefpareto::eval
