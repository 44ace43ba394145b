#include "nowcast/models/trained_model.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "nowcast/core/error.hpp"

namespace nowcast::models {

double LinearModel::predict(std::span<const double> x) const {
    double s = intercept;
    for (std::size_t j = 0; j < coefficients.size(); ++j) s += coefficients[j] * x[j];
    return s;
}

double ForestModel::predict(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(x);
    return s / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::tree_predictions(std::span<const double> x) const {
    std::vector<double> out;
    out.reserve(trees.size());
    for (const auto& t : trees) out.push_back(t.predict(x));
    return out;
}

double BoostedModel::predict(std::span<const double> x) const { return predict_stages(x, stages.size()); }

double BoostedModel::predict_stages(std::span<const double> x, std::size_t count) const {
    double s = base;
    for (std::size_t i = 0; i < count && i < stages.size(); ++i) s += learning_rate * stages[i].predict(x);
    return s;
}

TrainedModel::TrainedModel(Hyperparameters params, std::size_t feature_count, Body body, double train_mse)
    : params_(params), feature_count_(feature_count), body_(std::move(body)), train_mse_(train_mse) {}

bool TrainedModel::converged() const noexcept {
    const auto* lin = as<LinearModel>();
    return lin == nullptr || lin->converged;
}

double TrainedModel::predict(std::span<const double> features) const {
    if (features.size() != feature_count_) {
        throw ShapeError(fmt::format("{} model expects {} features, got {}", family_key(family()), feature_count_,
                                     features.size()));
    }
    for (double v : features) {
        if (!std::isfinite(v)) throw DomainError("predict: non-finite feature value");
    }
    return std::visit([&](const auto& m) { return m.predict(features); }, body_);
}

double mean_squared_error(const TrainedModel& model, const chaos::DesignMatrix& matrix) {
    if (matrix.empty()) throw LengthError("mean_squared_error: empty matrix");
    double s = 0.0;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const double e = model.predict(matrix.features(r)) - matrix.target(r);
        s += e * e;
    }
    return s / static_cast<double>(matrix.rows());
}

}  // namespace nowcast::models
