#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nowcast/core/family.hpp"

namespace nowcast::models {

/// Knobs for one fit. Fields that do not apply to `family` are ignored.
struct Hyperparameters {
    Family family = Family::ridge;
    double reg_param = 0.0;            // lasso, ridge, glm
    int max_depth = 5;                 // random_forest, gbt
    int num_trees = 20;                // forest size, or boosting iterations
    int min_instances_per_node = 1;    // random_forest, gbt
    int max_bins = 32;                 // gbt
    double learning_rate = 0.1;        // gbt shrinkage
    std::uint64_t seed = 0;            // random_forest

    bool operator==(const Hyperparameters&) const = default;
};

/// Grid values per knob; empty vectors fall back to the base parameters.
struct Grid {
    Family family = Family::ridge;
    std::vector<double> reg_params;
    std::vector<int> max_depths;
    std::vector<int> num_trees;
    std::vector<int> min_instances;
    std::vector<int> max_bins;
};

inline constexpr int kDefaultGbtIterations = 20;

/// The default tuning grid for a family. GBT iterations are not part of it
/// and stay at kDefaultGbtIterations.
Grid default_grid(Family family);

/**
 * Cartesian product of the grid over `base`, ordered so that earlier
 * candidates are the simpler ones: ascending reg_param, then max_depth, then
 * num_trees, then min_instances_per_node, then max_bins.
 */
std::vector<Hyperparameters> expand_grid(const Grid& grid, const Hyperparameters& base);

/// "reg_param=0.01" / "max_depth=3 num_trees=4 min_instances=1" style summary.
std::string describe(const Hyperparameters& params);

}  // namespace nowcast::models
