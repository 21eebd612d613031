#pragma once

// Fixed-width feature encoding of a model set: loss matrix with dominated-row
// replacement and forward imputation, flattened and standardized.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prefpareto/core_mo.hpp"

namespace prefpareto::feat {

struct EncodingConfig {
    std::size_t rows = 10;  // B, capacity in models
    std::size_t losses = core::kNumLosses;
    std::size_t order_key = core::kEnergyLoss;

    std::size_t dimension() const noexcept { return rows * losses; }
    void validate() const;
};

/// B x M losses in row-major order.
struct LossMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t filled = 0;  // rows backed by actual models before padding
    std::vector<double> values;

    double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

struct FeatureVector {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct FeatureStats {
    std::vector<double> mean;
    std::vector<double> std;
    std::size_t n_fit = 0;

    /// Stable content hash used to tie a trained model to the stats it saw.
    std::string fingerprint() const;
    friend bool operator==(const FeatureStats&, const FeatureStats&) = default;
};

LossMatrix build_loss_matrix(std::span<const core::ModelPoint> models,
                             const EncodingConfig& cfg = {});

/// Population mean and standard deviation per flattened position.
FeatureStats fit_stats(std::span<const LossMatrix> matrices);

/// Positions with zero spread encode to 0.
FeatureVector encode(const LossMatrix& matrix, const FeatureStats& stats);

/// build_loss_matrix on the front's points followed by encode.
FeatureVector encode_front(const core::ParetoFront& front, const FeatureStats& stats,
                           const EncodingConfig& cfg = {});

/// Loss matrices for a collection of fronts.
std::vector<LossMatrix> front_matrices(std::span<const core::ParetoFront> fronts,
                                       const EncodingConfig& cfg = {});

}  // namespace prefpareto::feat
