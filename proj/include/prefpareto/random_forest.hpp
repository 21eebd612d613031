#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace prefpareto::hpo {

struct ForestConfig {
    int trees = 10;
    int min_leaf = 3;
    double feature_subsample = 0.8;

    friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
};

/// Bagged regression trees; the spread of per-tree predictions serves as the
/// predictive variance.
class RandomForest {
public:
    RandomForest(ForestConfig cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {}

    void fit(const std::vector<std::vector<double>>& x, std::span<const double> y);
    Prediction predict(std::span<const double> x) const;

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        double value = 0.0;
        int left = -1;
        int right = -1;
    };
    using Tree = std::vector<Node>;

    int grow(Tree& tree, const std::vector<std::vector<double>>& x, std::span<const double> y,
             std::vector<std::size_t>& rows, std::size_t lo, std::size_t hi,
             const std::vector<std::size_t>& features) const;
    static double predict_tree(const Tree& tree, std::span<const double> x);

    ForestConfig cfg_;
    std::uint64_t seed_;
    std::vector<Tree> trees_;
};

}  // namespace prefpareto::hpo
