#include "nowcast/models/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nowcast/core/error.hpp"

namespace nowcast::models {
namespace {

void check_tree_params(const Hyperparameters& p) {
    if (p.num_trees < 1) throw std::invalid_argument("ensemble: num_trees must be >= 1");
    if (p.max_depth < 1) throw std::invalid_argument("ensemble: max_depth must be >= 1");
    if (p.min_instances_per_node < 1) throw std::invalid_argument("ensemble: min_instances_per_node must be >= 1");
}

}  // namespace

TrainedModel fit_random_forest(const chaos::DesignMatrix& matrix, const Hyperparameters& params,
                               const ForestOptions& options) {
    check_tree_params(params);
    if (matrix.empty()) throw LengthError("random forest: empty design matrix");

    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.feature_count();
    TreeSettings settings;
    settings.max_depth = params.max_depth;
    settings.min_instances_per_node = params.min_instances_per_node;
    settings.features_per_split = std::max<std::size_t>(1, (p + 2) / 3);

    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    ForestModel forest;
    forest.trees.reserve(static_cast<std::size_t>(params.num_trees));
    std::vector<std::size_t> rows(n);
    for (int t = 0; t < params.num_trees; ++t) {
        if (options.bootstrap) {
            for (auto& r : rows) r = draw(rng);
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        forest.trees.push_back(grow_exact_tree(matrix, matrix.targets(), rows, settings, &rng));
    }

    Hyperparameters stored = params;
    stored.family = Family::random_forest;
    TrainedModel draft(stored, p, forest, 0.0);
    const double mse = mean_squared_error(draft, matrix);
    return TrainedModel(stored, p, std::move(forest), mse);
}

TrainedModel fit_gbt(const chaos::DesignMatrix& matrix, const Hyperparameters& params) {
    check_tree_params(params);
    if (params.max_bins < 2) throw std::invalid_argument("gbt: max_bins must be >= 2");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0)) {
        throw std::invalid_argument("gbt: learning_rate must lie in (0, 1]");
    }
    if (matrix.empty()) throw LengthError("gbt: empty design matrix");

    const std::size_t n = matrix.rows();
    const auto y = matrix.targets();
    const BinnedFeatures binned = bin_features(matrix, params.max_bins);
    TreeSettings settings;
    settings.max_depth = params.max_depth;
    settings.min_instances_per_node = params.min_instances_per_node;

    BoostedModel model;
    model.learning_rate = params.learning_rate;
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    model.base = *lo == *hi ? *lo : std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);

    std::vector<double> fitted(n, model.base);
    std::vector<double> residual(n);
    const auto loss = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (y[i] - fitted[i]) * (y[i] - fitted[i]);
        return s / static_cast<double>(n);
    };
    model.stage_losses.push_back(loss());
    for (int stage = 0; stage < params.num_trees; ++stage) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = y[i] - fitted[i];
        RegressionTree tree = grow_binned_tree(binned, residual, settings);
        for (std::size_t i = 0; i < n; ++i) fitted[i] += model.learning_rate * tree.predict(matrix.features(i));
        model.stages.push_back(std::move(tree));
        model.stage_losses.push_back(loss());
    }

    Hyperparameters stored = params;
    stored.family = Family::gbt;
    const double mse = model.stage_losses.back();
    return TrainedModel(stored, matrix.feature_count(), std::move(model), mse);
}

}  // namespace nowcast::models
