#include "nowcast/engine/retrain.hpp"

#include <cmath>
#include <stdexcept>

namespace nowcast::engine {

bool should_retrain(double squared_error, double train_mse, const RetrainPolicy& policy) {
    if (!(train_mse >= 0.0)) throw std::invalid_argument("should_retrain: train_mse must be >= 0");
    if (!(policy.tolerance > 0.0)) throw std::invalid_argument("should_retrain: tolerance must be > 0");
    if (train_mse == 0.0) return squared_error > 0.0;
    switch (policy.mode) {
    case RetrainMode::exceed: return squared_error > (1.0 + policy.tolerance) * train_mse;
    case RetrainMode::symmetric: return std::abs(squared_error - train_mse) > policy.tolerance * train_mse;
    }
    return false;
}

}  // namespace nowcast::engine
