#include "nowcast/models/grid_search.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::models {

TrainedModel fit(const chaos::DesignMatrix& matrix, const Hyperparameters& params, const FitSettings& settings) {
    switch (params.family) {
    case Family::lasso: return fit_lasso(matrix, params.reg_param, settings.lasso, settings.linear);
    case Family::ridge: return fit_ridge(matrix, params.reg_param, settings.linear);
    case Family::glm: return fit_glm(matrix, params.reg_param, settings.linear);
    case Family::random_forest: return fit_random_forest(matrix, params, settings.forest);
    case Family::gbt: return fit_gbt(matrix, params);
    }
    throw std::invalid_argument("fit: unknown family");
}

GridSearchResult grid_search(const chaos::DesignMatrix& matrix, std::span<const Hyperparameters> candidates,
                             const FitSettings& settings, double split_fraction) {
    if (candidates.empty()) throw std::invalid_argument("grid_search: empty grid");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw std::invalid_argument("grid_search: split_fraction must lie in (0, 1)");
    }
    if (matrix.rows() < 10) {
        throw LengthError(fmt::format("grid_search: need at least 10 rows, have {}", matrix.rows()));
    }
    const std::size_t n = matrix.rows();
    const auto holdout =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * split_fraction)));
    const auto train = matrix.slice(0, n - holdout);
    const auto validate = matrix.slice(n - holdout, n);

    std::size_t best = 0;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double mse = std::numeric_limits<double>::infinity();
        try {
            mse = mean_squared_error(fit(train, candidates[i], settings), validate);
        } catch (const SingularityError&) {
            // unusable candidate
        }
        if (mse < best_mse) {
            best_mse = mse;
            best = i;
        }
    }
    return {fit(matrix, candidates[best], settings), best_mse};
}

}  // namespace nowcast::models
