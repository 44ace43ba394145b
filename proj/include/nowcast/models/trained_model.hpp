#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "nowcast/chaos/embedding.hpp"
#include "nowcast/models/hyperparameters.hpp"
#include "nowcast/models/tree.hpp"

namespace nowcast::models {

/// intercept + coefficients . x, coefficients already in the units of the raw features.
struct LinearModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    bool converged = true;
    int iterations = 0;                  ///< lasso sweeps or IRLS steps
    std::vector<double> objective_trace; ///< lasso objective after each sweep

    double predict(std::span<const double> x) const;
    bool operator==(const LinearModel&) const = default;
};

/// Averages its trees.
struct ForestModel {
    std::vector<RegressionTree> trees;

    double predict(std::span<const double> x) const;
    std::vector<double> tree_predictions(std::span<const double> x) const;
    bool operator==(const ForestModel&) const = default;
};

/// base + learning_rate * sum of stage trees.
struct BoostedModel {
    double base = 0.0;
    double learning_rate = 0.1;
    std::vector<RegressionTree> stages;
    std::vector<double> stage_losses;  ///< training MSE after 0, 1, ..., stages.size() stages

    double predict(std::span<const double> x) const;
    /// Prediction using only the first `count` stages.
    double predict_stages(std::span<const double> x, std::size_t count) const;
    bool operator==(const BoostedModel&) const = default;
};

/// Immutable fitted model of one family.
class TrainedModel {
public:
    using Body = std::variant<LinearModel, ForestModel, BoostedModel>;

    TrainedModel(Hyperparameters params, std::size_t feature_count, Body body, double train_mse);

    Family family() const noexcept { return params_.family; }
    const Hyperparameters& params() const noexcept { return params_; }
    std::size_t feature_count() const noexcept { return feature_count_; }
    double train_mse() const noexcept { return train_mse_; }
    const Body& body() const noexcept { return body_; }
    /// False only for a lasso fit that hit its sweep limit.
    bool converged() const noexcept;

    template <typename T>
    const T* as() const noexcept {
        return std::get_if<T>(&body_);
    }

    /// Throws ShapeError on a feature vector of the wrong length.
    double predict(std::span<const double> features) const;

    bool operator==(const TrainedModel&) const = default;

private:
    Hyperparameters params_;
    std::size_t feature_count_;
    Body body_;
    double train_mse_;
};

/// Mean squared residual of the model over every row of the matrix.
double mean_squared_error(const TrainedModel& model, const chaos::DesignMatrix& matrix);

}  // namespace nowcast::models
