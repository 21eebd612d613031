#pragma once

// Pareto dominance, front extraction and the four front-quality indicators
// (hypervolume, spacing, maximum spread, R2) on two normalized losses.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prefpareto::core {

/// Number of losses handled throughout: 0 = accuracy loss, 1 = normalized energy.
inline constexpr std::size_t kNumLosses = 2;
inline constexpr std::size_t kAccuracyLoss = 0;
inline constexpr std::size_t kEnergyLoss = 1;

using LossVector = std::vector<double>;
using ModelId = std::int64_t;

struct ModelPoint {
    ModelId id = 0;
    LossVector losses;
    std::map<std::string, double> meta;

    friend bool operator==(const ModelPoint&, const ModelPoint&) = default;
};

/// Checks that `losses` has kNumLosses finite entries in [0, 1].
void validate_losses(std::span<const double> losses);

/// Strict Pareto dominance for minimization: a <= b everywhere and a < b somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Orders points ascending by losses[order_key], then by the other loss, then by id.
bool front_order_less(const ModelPoint& a, const ModelPoint& b, std::size_t order_key);

/// Mutually non-dominated, sorted, non-empty set of model points.
class ParetoFront {
public:
    ParetoFront() = default;

    /// Wraps points that are already a valid front; checks every invariant.
    static ParetoFront from_sorted(std::vector<ModelPoint> points,
                                   std::size_t order_key = kEnergyLoss);

    const std::vector<ModelPoint>& points() const noexcept { return points_; }
    std::size_t order_key() const noexcept { return order_key_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    friend bool operator==(const ParetoFront&, const ParetoFront&) = default;

private:
    std::vector<ModelPoint> points_;
    std::size_t order_key_ = kEnergyLoss;
};

/// Non-dominated subset of `points`. Duplicate loss vectors collapse to the
/// point with the smallest id.
ParetoFront pareto_filter(std::span<const ModelPoint> points,
                          std::size_t order_key = kEnergyLoss);

struct ReferencePoint {
    std::vector<double> values;
};

/// Canonical references on normalized losses.
ReferencePoint nadir_reference();
ReferencePoint ideal_reference();

/// Exact 2-D dominated area between the front and `ref`.
double hypervolume(const ParetoFront& front, const ReferencePoint& ref);

/// Standard deviation (N-1 denominator) of L1 nearest-neighbor distances.
/// Zero for fronts with at most one point.
double spacing(const ParetoFront& front);

/// Euclidean norm of the per-objective extents.
double max_spread(const ParetoFront& front);

/// Smallest Chebyshev distance from any front point to `ideal`.
double r2_indicator(const ParetoFront& front, const ReferencePoint& ideal);

enum class IndicatorKind { HV, SP, MS, R2 };

inline constexpr IndicatorKind kAllIndicators[] = {IndicatorKind::HV, IndicatorKind::SP,
                                                   IndicatorKind::MS, IndicatorKind::R2};

std::string_view to_string(IndicatorKind kind) noexcept;
IndicatorKind parse_indicator(std::string_view name);

/// True for indicators where larger values are better (HV, MS).
bool is_maximized(IndicatorKind kind) noexcept;

struct ProblemReferences {
    ReferencePoint nadir = nadir_reference();
    ReferencePoint ideal = ideal_reference();
};

double indicator_value(IndicatorKind kind, const ParetoFront& front,
                       const ProblemReferences& refs = {});

}  // namespace prefpareto::core
