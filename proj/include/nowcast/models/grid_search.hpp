#pragma once

#include <cstddef>
#include <span>

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/models/ensembles.hpp"
#include "nowcast/models/hyperparameters.hpp"
#include "nowcast/models/linear.hpp"
#include "nowcast/models/trained_model.hpp"

namespace nowcast::models {

struct FitSettings {
    LinearOptions linear;
    LassoSettings lasso;
    ForestOptions forest;
};

/// Fits params.family on the matrix.
TrainedModel fit(const chaos::DesignMatrix& matrix, const Hyperparameters& params, const FitSettings& settings = {});

inline constexpr double kDefaultSplitFraction = 0.2;

struct GridSearchResult {
    TrainedModel model;        ///< refitted on the full matrix
    double validation_mse;     ///< of the winning candidate on the held-out tail
};

/**
 * Time-ordered holdout search: candidates are fitted on the leading rows and
 * scored on the trailing max(1, floor(rows * split_fraction)) rows, no
 * shuffling. The first candidate with the lowest validation MSE wins (so
 * order candidates simplest-first, as expand_grid does), and is refitted on
 * the whole matrix. Requires at least 10 rows (LengthError).
 */
GridSearchResult grid_search(const chaos::DesignMatrix& matrix, std::span<const Hyperparameters> candidates,
                             const FitSettings& settings = {}, double split_fraction = kDefaultSplitFraction);

}  // namespace nowcast::models
