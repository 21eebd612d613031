#include "prefpareto/core_mo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prefpareto/error.hpp"

namespace prefpareto {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::dimension: return "dimension";
        case ErrorCode::empty_input: return "empty_input";
        case ErrorCode::reference_violation: return "reference_violation";
        case ErrorCode::parameter: return "parameter";
        case ErrorCode::capacity: return "capacity";
        case ErrorCode::lookup: return "lookup";
        case ErrorCode::numeric: return "numeric";
        case ErrorCode::precondition: return "precondition";
        case ErrorCode::conflict: return "conflict";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::io: return "io";
    }
    return "unknown";
}

}  // namespace prefpareto

namespace prefpareto::core {

void validate_losses(std::span<const double> losses) {
    if (losses.size() != kNumLosses) {
        fail(ErrorCode::dimension, "expected " + std::to_string(kNumLosses) + " losses, got " +
                                       std::to_string(losses.size()));
    }
    for (double v : losses) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            fail(ErrorCode::numeric, "loss value outside [0, 1]: " + std::to_string(v));
        }
    }
}

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorCode::dimension, "dominance check on vectors of different length");
    }
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

bool front_order_less(const ModelPoint& a, const ModelPoint& b, std::size_t order_key) {
    const std::size_t other = order_key == 0 ? 1 : 0;
    if (a.losses[order_key] != b.losses[order_key]) return a.losses[order_key] < b.losses[order_key];
    if (a.losses[other] != b.losses[other]) return a.losses[other] < b.losses[other];
    return a.id < b.id;
}

ParetoFront ParetoFront::from_sorted(std::vector<ModelPoint> points, std::size_t order_key) {
    if (points.empty()) fail(ErrorCode::empty_input, "a Pareto front needs at least one point");
    if (order_key >= kNumLosses) fail(ErrorCode::parameter, "order key out of range");
    for (const auto& p : points) validate_losses(p.losses);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !front_order_less(points[i - 1], points[i], order_key)) {
            fail(ErrorCode::parameter, "front points are not in canonical order");
        }
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i != j && dominates(points[i].losses, points[j].losses)) {
                fail(ErrorCode::parameter, "front contains a dominated point");
            }
        }
    }
    ParetoFront front;
    front.points_ = std::move(points);
    front.order_key_ = order_key;
    return front;
}

ParetoFront pareto_filter(std::span<const ModelPoint> points, std::size_t order_key) {
    if (points.empty()) fail(ErrorCode::empty_input, "pareto_filter on an empty model set");
    for (const auto& p : points) validate_losses(p.losses);

    std::vector<ModelPoint> kept;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (i == j) continue;
            if (dominates(points[j].losses, points[i].losses)) keep = false;
            // duplicates: only the smallest id survives
            if (points[j].losses == points[i].losses && points[j].id < points[i].id) keep = false;
        }
        if (keep) kept.push_back(points[i]);
    }
    std::sort(kept.begin(), kept.end(), [order_key](const ModelPoint& a, const ModelPoint& b) {
        return front_order_less(a, b, order_key);
    });
    // equal loss vectors with equal ids would survive twice
    kept.erase(std::unique(kept.begin(), kept.end(),
                           [](const ModelPoint& a, const ModelPoint& b) {
                               return a.losses == b.losses;
                           }),
               kept.end());
    return ParetoFront::from_sorted(std::move(kept), order_key);
}

ReferencePoint nadir_reference() { return {{1.0, 1.0}}; }
ReferencePoint ideal_reference() { return {{0.0, 0.0}}; }

double hypervolume(const ParetoFront& front, const ReferencePoint& ref) {
    if (ref.values.size() != kNumLosses) fail(ErrorCode::dimension, "reference point must be 2-D");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.size());
    for (const auto& p : front.points()) {
        if (p.losses[0] > ref.values[0] || p.losses[1] > ref.values[1]) {
            fail(ErrorCode::reference_violation, "front point exceeds the hypervolume reference");
        }
        pts.emplace_back(p.losses[0], p.losses[1]);
    }
    std::sort(pts.begin(), pts.end());

    // Sweep along loss 0; each point owns the slab up to the next point's loss 0.
    double area = 0.0;
    double best_y = ref.values[1];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        best_y = std::min(best_y, pts[i].second);
        const double next_x = i + 1 < pts.size() ? pts[i + 1].first : ref.values[0];
        area += (next_x - pts[i].first) * (ref.values[1] - best_y);
    }
    return area;
}

double spacing(const ParetoFront& front) {
    const auto& pts = front.points();
    const std::size_t n = pts.size();
    if (n <= 1) return 0.0;

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double d = 0.0;
            for (std::size_t m = 0; m < kNumLosses; ++m) d += std::abs(pts[i].losses[m] - pts[j].losses[m]);
            nearest[i] = std::min(nearest[i], d);
        }
    }
    double mean = 0.0;
    for (double d : nearest) mean += d;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double d : nearest) ss += (mean - d) * (mean - d);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

double max_spread(const ParetoFront& front) {
    double total = 0.0;
    for (std::size_t m = 0; m < kNumLosses; ++m) {
        auto [lo, hi] = std::minmax_element(front.points().begin(), front.points().end(),
                                            [m](const ModelPoint& a, const ModelPoint& b) {
                                                return a.losses[m] < b.losses[m];
                                            });
        const double extent = hi->losses[m] - lo->losses[m];
        total += extent * extent;
    }
    return std::sqrt(total);
}

double r2_indicator(const ParetoFront& front, const ReferencePoint& ideal) {
    if (ideal.values.size() != kNumLosses) fail(ErrorCode::dimension, "ideal point must be 2-D");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : front.points()) {
        double cheb = 0.0;
        for (std::size_t m = 0; m < kNumLosses; ++m) {
            cheb = std::max(cheb, std::abs(p.losses[m] - ideal.values[m]));
        }
        best = std::min(best, cheb);
    }
    return best;
}

std::string_view to_string(IndicatorKind kind) noexcept {
    switch (kind) {
        case IndicatorKind::HV: return "HV";
        case IndicatorKind::SP: return "SP";
        case IndicatorKind::MS: return "MS";
        case IndicatorKind::R2: return "R2";
    }
    return "?";
}

IndicatorKind parse_indicator(std::string_view name) {
    for (auto kind : kAllIndicators) {
        if (to_string(kind) == name) return kind;
    }
    fail(ErrorCode::parameter, "unknown indicator: " + std::string(name));
}

bool is_maximized(IndicatorKind kind) noexcept {
    return kind == IndicatorKind::HV || kind == IndicatorKind::MS;
}

double indicator_value(IndicatorKind kind, const ParetoFront& front, const ProblemReferences& refs) {
    if (front.empty()) fail(ErrorCode::empty_input, "indicator on an empty front");
    switch (kind) {
        case IndicatorKind::HV: return hypervolume(front, refs.nadir);
        case IndicatorKind::SP: return spacing(front);
        case IndicatorKind::MS: return max_spread(front);
        case IndicatorKind::R2: return r2_indicator(front, refs.ideal);
    }
    fail(ErrorCode::parameter, "unknown indicator kind");
}

}  // namespace prefpareto::core
