#pragma once

namespace nowcast::engine {

enum class RetrainMode {
    exceed,     ///< squared error above (1 + tolerance) * train_mse
    symmetric,  ///< squared error outside train_mse * (1 +- tolerance)
};

struct RetrainPolicy {
    double tolerance = 0.05;
    RetrainMode mode = RetrainMode::exceed;
};

/// With train_mse == 0 any nonzero error triggers. Throws std::invalid_argument
/// for a negative train_mse or non-positive tolerance.
bool should_retrain(double squared_error, double train_mse, const RetrainPolicy& policy);

}  // namespace nowcast::engine
