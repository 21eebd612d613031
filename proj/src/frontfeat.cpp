#include "prefpareto/frontfeat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

#include "prefpareto/error.hpp"

namespace prefpareto::feat {

void EncodingConfig::validate() const {
    if (rows < 1) fail(ErrorCode::parameter, "encoding needs at least one row");
    if (losses != core::kNumLosses) fail(ErrorCode::parameter, "encoding supports exactly two losses");
    if (order_key >= losses) fail(ErrorCode::parameter, "order key out of range");
}

LossMatrix build_loss_matrix(std::span<const core::ModelPoint> models, const EncodingConfig& cfg) {
    cfg.validate();
    if (models.empty()) fail(ErrorCode::empty_input, "cannot encode an empty model set");
    if (models.size() > cfg.rows) {
        fail(ErrorCode::capacity, "model set of size " + std::to_string(models.size()) +
                                      " exceeds encoding capacity " + std::to_string(cfg.rows));
    }
    for (const auto& m : models) core::validate_losses(m.losses);

    std::vector<const core::ModelPoint*> order;
    order.reserve(models.size());
    for (const auto& m : models) order.push_back(&m);
    std::sort(order.begin(), order.end(), [&](const core::ModelPoint* a, const core::ModelPoint* b) {
        return core::front_order_less(*a, *b, cfg.order_key);
    });

    LossMatrix out;
    out.rows = cfg.rows;
    out.cols = cfg.losses;
    out.filled = models.size();
    out.values.reserve(cfg.rows * cfg.losses);

    // Staircase: a row dominated by the running incumbent takes its values.
    std::vector<double> incumbent = order.front()->losses;
    for (const auto* m : order) {
        if (!core::dominates(incumbent, m->losses)) incumbent = m->losses;
        out.values.insert(out.values.end(), incumbent.begin(), incumbent.end());
    }
    for (std::size_t r = models.size(); r < cfg.rows; ++r) {
        out.values.insert(out.values.end(), incumbent.begin(), incumbent.end());
    }
    return out;
}

FeatureStats fit_stats(std::span<const LossMatrix> matrices) {
    if (matrices.empty()) fail(ErrorCode::empty_input, "fit_stats needs at least one matrix");
    const std::size_t d = matrices.front().values.size();
    for (const auto& m : matrices) {
        if (m.values.size() != d || m.rows != matrices.front().rows || m.cols != matrices.front().cols) {
            fail(ErrorCode::dimension, "loss matrices differ in shape");
        }
    }
    const auto n = static_cast<double>(matrices.size());
    FeatureStats stats;
    stats.mean.assign(d, 0.0);
    stats.std.assign(d, 0.0);
    stats.n_fit = matrices.size();
    for (const auto& m : matrices) {
        for (std::size_t i = 0; i < d; ++i) stats.mean[i] += m.values[i];
    }
    for (auto& v : stats.mean) v /= n;
    for (const auto& m : matrices) {
        for (std::size_t i = 0; i < d; ++i) {
            const double dev = m.values[i] - stats.mean[i];
            stats.std[i] += dev * dev;
        }
    }
    for (auto& v : stats.std) v = std::sqrt(v / n);
    return stats;
}

FeatureVector encode(const LossMatrix& matrix, const FeatureStats& stats) {
    if (matrix.values.size() != stats.mean.size() || stats.mean.size() != stats.std.size()) {
        fail(ErrorCode::dimension, "loss matrix does not match feature statistics");
    }
    FeatureVector f;
    f.values.resize(matrix.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = stats.std[i] > 0.0 ? (matrix.values[i] - stats.mean[i]) / stats.std[i] : 0.0;
    }
    return f;
}

FeatureVector encode_front(const core::ParetoFront& front, const FeatureStats& stats,
                           const EncodingConfig& cfg) {
    return encode(build_loss_matrix(front.points(), cfg), stats);
}

std::vector<LossMatrix> front_matrices(std::span<const core::ParetoFront> fronts,
                                       const EncodingConfig& cfg) {
    std::vector<LossMatrix> out;
    out.reserve(fronts.size());
    for (const auto& f : fronts) out.push_back(build_loss_matrix(f.points(), cfg));
    return out;
}

std::string FeatureStats::fingerprint() const {
    // FNV-1a over the raw bytes of every statistic.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ULL;
        }
    };
    for (double v : mean) mix(&v, sizeof v);
    for (double v : std) mix(&v, sizeof v);
    const auto n = static_cast<std::uint64_t>(n_fit);
    mix(&n, sizeof n);
    std::ostringstream os;
    os << "stats-" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace prefpareto::feat
