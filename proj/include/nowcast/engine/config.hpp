#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nowcast/core/family.hpp"
#include "nowcast/core/time.hpp"
#include "nowcast/engine/calibration.hpp"
#include "nowcast/engine/retrain.hpp"
#include "nowcast/models/grid_search.hpp"

namespace nowcast::engine {

enum class TuningSchedule {
    every_retrain,  ///< grid search whenever a family retrains
    daily,          ///< grid search at calibration; retrains refit the tuned parameters
};

struct EngineConfig {
    std::size_t window = 300;
    Seconds interval{300};
    std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
    RetrainPolicy policy;
    CalibrationConfig calibration;
    std::size_t stride = 1;
    TuningSchedule tuning = TuningSchedule::every_retrain;
    double split_fraction = models::kDefaultSplitFraction;
    std::uint64_t seed = 0;
    SessionHours hours;
    models::FitSettings fit;
    bool parallel = true;  ///< retrain families on separate threads
};

/// Per-family seed derived from the master seed, so adding or removing a
/// family does not change the others' streams.
std::uint64_t family_seed(std::uint64_t master, Family family);

}  // namespace nowcast::engine
