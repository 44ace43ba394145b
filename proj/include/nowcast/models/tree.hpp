#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nowcast/chaos/embedding.hpp"

namespace nowcast::models {

using chaos::DesignMatrix;

/// Flat binary-tree node. feature < 0 marks a leaf; otherwise rows with
/// x[feature] <= threshold go left.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;        ///< mean target of the training rows reaching the node
    std::size_t samples = 0;

    bool is_leaf() const noexcept { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

class RegressionTree {
public:
    RegressionTree() = default;
    explicit RegressionTree(std::vector<TreeNode> nodes);

    double predict(std::span<const double> features) const;
    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    /// Edges on the longest root-to-leaf path (a stump has depth 1).
    std::size_t depth() const;
    std::size_t leaf_count() const;

    bool operator==(const RegressionTree&) const = default;

private:
    std::vector<TreeNode> nodes_;
};

struct TreeSettings {
    int max_depth = 5;
    int min_instances_per_node = 1;
    std::size_t features_per_split = 0;  ///< 0 = all features
};

/**
 * CART regression tree with exact thresholds (midpoints between adjacent
 * distinct values) and variance-reduction splits, grown on `rows` (which may
 * repeat, as in a bootstrap sample). When features_per_split is below the
 * feature count, each node draws its candidates from `rng`; if none of them
 * admits a split, the remaining features are tried.
 */
RegressionTree grow_exact_tree(const DesignMatrix& matrix, std::span<const double> targets,
                               std::span<const std::size_t> rows, const TreeSettings& settings,
                               std::mt19937_64* rng);

/// Features discretised into at most max_bins quantile bins per column.
struct BinnedFeatures {
    std::size_t rows = 0;
    std::size_t features = 0;
    std::vector<std::vector<double>> thresholds;  ///< per feature, ascending; bin b holds x <= thresholds[b]
    std::vector<std::uint16_t> bins;              ///< row-major bin index

    std::uint16_t bin(std::size_t row, std::size_t feature) const { return bins[row * features + feature]; }
    std::size_t bin_count(std::size_t feature) const { return thresholds[feature].size() + 1; }
};

/// Columns with at most max_bins distinct values keep every distinct value
/// in its own bin; others are cut at the k/max_bins quantiles.
BinnedFeatures bin_features(const DesignMatrix& matrix, int max_bins);

/// Histogram-based tree over all rows of a binned matrix.
RegressionTree grow_binned_tree(const BinnedFeatures& binned, std::span<const double> targets,
                                const TreeSettings& settings);

}  // namespace nowcast::models
