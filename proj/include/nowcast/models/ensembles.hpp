#pragma once

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/models/trained_model.hpp"

namespace nowcast::models {

struct ForestOptions {
    /// Off only in tests: every tree then sees the full matrix once.
    bool bootstrap = true;
};

/**
 * num_trees regression trees, each grown on a bootstrap sample of n rows
 * drawn with replacement, considering ceil(p/3) random features per split.
 * Predictions average the trees. Bit-reproducible for a given seed.
 */
TrainedModel fit_random_forest(const chaos::DesignMatrix& matrix, const Hyperparameters& params,
                               const ForestOptions& options = {});

/**
 * Squared-loss gradient boosting: F0 = mean(y), then num_trees stages, each a
 * histogram tree (features cut into at most max_bins quantile bins) fitted
 * to the current residuals and added with shrinkage learning_rate.
 */
TrainedModel fit_gbt(const chaos::DesignMatrix& matrix, const Hyperparameters& params);

}  // namespace nowcast::models
