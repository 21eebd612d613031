#include "prefpareto/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prefpareto/error.hpp"
#include "prefpareto/random.hpp"

namespace prefpareto::hpo {

void RandomForest::fit(const std::vector<std::vector<double>>& x, std::span<const double> y) {
    if (x.empty() || x.size() != y.size()) fail(ErrorCode::dimension, "forest training data shape mismatch");
    if (cfg_.trees < 1 || cfg_.min_leaf < 1 || !(cfg_.feature_subsample > 0.0) || cfg_.feature_subsample > 1.0) {
        fail(ErrorCode::parameter, "invalid forest configuration");
    }
    const std::size_t n = x.size();
    const std::size_t d = x.front().size();
    const auto n_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg_.feature_subsample * static_cast<double>(d) - 1e-9)));

    Rng rng(seed_);
    trees_.clear();
    trees_.reserve(static_cast<std::size_t>(cfg_.trees));
    for (int t = 0; t < cfg_.trees; ++t) {
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = rng.below(n);
        std::vector<std::size_t> features(d);
        std::iota(features.begin(), features.end(), 0);
        rng.shuffle(std::span<std::size_t>(features));
        features.resize(n_features);
        std::sort(features.begin(), features.end());

        Tree tree;
        grow(tree, x, y, rows, 0, n, features);
        trees_.push_back(std::move(tree));
    }
}

int RandomForest::grow(Tree& tree, const std::vector<std::vector<double>>& x, std::span<const double> y,
                       std::vector<std::size_t>& rows, std::size_t lo, std::size_t hi,
                       const std::vector<std::size_t>& features) const {
    const int index = static_cast<int>(tree.size());
    tree.emplace_back();

    const std::size_t count = hi - lo;
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += y[rows[i]];
    tree[static_cast<std::size_t>(index)].value = sum / static_cast<double>(count);

    const auto min_leaf = static_cast<std::size_t>(cfg_.min_leaf);
    if (count < 2 * min_leaf) return index;

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_feature = 0;
    double best_threshold = 0.0;
    bool found = false;
    double total_sq = 0.0;
    for (std::size_t i = lo; i < hi; ++i) total_sq += y[rows[i]] * y[rows[i]];

    std::vector<std::size_t> sorted(rows.begin() + static_cast<std::ptrdiff_t>(lo),
                                    rows.begin() + static_cast<std::ptrdiff_t>(hi));
    for (std::size_t f : features) {
        std::stable_sort(sorted.begin(), sorted.end(),
                         [&](std::size_t a, std::size_t b) { return x[a][f] < x[b][f]; });
        double left_sum = 0.0;
        double left_sq = 0.0;
        for (std::size_t i = 0; i + 1 < count; ++i) {
            const double v = y[sorted[i]];
            left_sum += v;
            left_sq += v * v;
            const std::size_t n_left = i + 1;
            const std::size_t n_right = count - n_left;
            if (n_left < min_leaf || n_right < min_leaf) continue;
            if (x[sorted[i]][f] == x[sorted[i + 1]][f]) continue;
            const double right_sum = sum - left_sum;
            const double right_sq = total_sq - left_sq;
            const double sse = (left_sq - left_sum * left_sum / static_cast<double>(n_left)) +
                               (right_sq - right_sum * right_sum / static_cast<double>(n_right));
            if (sse < best_score) {
                best_score = sse;
                best_feature = f;
                best_threshold = 0.5 * (x[sorted[i]][f] + x[sorted[i + 1]][f]);
                found = true;
            }
        }
    }
    if (!found) return index;

    auto middle = std::stable_partition(rows.begin() + static_cast<std::ptrdiff_t>(lo),
                                        rows.begin() + static_cast<std::ptrdiff_t>(hi),
                                        [&](std::size_t r) { return x[r][best_feature] <= best_threshold; });
    const auto mid = static_cast<std::size_t>(middle - rows.begin());
    if (mid == lo || mid == hi) return index;  // midpoint rounded onto a sample
    const int left = grow(tree, x, y, rows, lo, mid, features);
    const int right = grow(tree, x, y, rows, mid, hi, features);
    auto& node = tree[static_cast<std::size_t>(index)];
    node.feature = static_cast<int>(best_feature);
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return index;
}

double RandomForest::predict_tree(const Tree& tree, std::span<const double> x) {
    std::size_t i = 0;
    while (tree[i].feature >= 0) {
        const auto& node = tree[i];
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                 : node.right);
    }
    return tree[i].value;
}

Prediction RandomForest::predict(std::span<const double> x) const {
    if (trees_.empty()) fail(ErrorCode::precondition, "forest used before fit");
    double sum = 0.0;
    double sq = 0.0;
    for (const auto& t : trees_) {
        const double p = predict_tree(t, x);
        sum += p;
        sq += p * p;
    }
    const auto m = static_cast<double>(trees_.size());
    const double mean = sum / m;
    return {mean, std::max(0.0, sq / m - mean * mean)};
}

}  // namespace prefpareto::hpo
