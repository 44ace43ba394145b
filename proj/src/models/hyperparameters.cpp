#include "nowcast/models/hyperparameters.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

namespace nowcast::models {
namespace {

const std::vector<double> kRegParams{0.01, 0.02, 0.03, 0.04, 0.05, 0.1, 0.2, 0.3, 0.4};

template <typename T>
std::vector<T> or_base(const std::vector<T>& values, T base) {
    return values.empty() ? std::vector<T>{base} : values;
}

bool is_linear(Family f) { return f == Family::lasso || f == Family::ridge || f == Family::glm; }

}  // namespace

Grid default_grid(Family family) {
    Grid g;
    g.family = family;
    switch (family) {
    case Family::lasso:
    case Family::ridge:
    case Family::glm:
        g.reg_params = kRegParams;
        break;
    case Family::random_forest:
        g.max_depths = {1, 2, 3};
        g.num_trees = {2, 3, 4};
        g.min_instances = {1, 2};
        break;
    case Family::gbt:
        g.max_depths = {1, 2, 3, 4};
        g.max_bins = {4, 8, 16};
        g.min_instances = {1, 2};
        g.num_trees = {kDefaultGbtIterations};
        break;
    }
    return g;
}

std::vector<Hyperparameters> expand_grid(const Grid& grid, const Hyperparameters& base) {
    std::vector<Hyperparameters> out;
    for (double reg : or_base(grid.reg_params, base.reg_param)) {
        for (int depth : or_base(grid.max_depths, base.max_depth)) {
            for (int trees : or_base(grid.num_trees, base.num_trees)) {
                for (int min_inst : or_base(grid.min_instances, base.min_instances_per_node)) {
                    for (int bins : or_base(grid.max_bins, base.max_bins)) {
                        Hyperparameters p = base;
                        p.family = grid.family;
                        p.reg_param = reg;
                        p.max_depth = depth;
                        p.num_trees = trees;
                        p.min_instances_per_node = min_inst;
                        p.max_bins = bins;
                        out.push_back(p);
                    }
                }
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Hyperparameters& a, const Hyperparameters& b) {
        return std::tie(a.reg_param, a.max_depth, a.num_trees, a.min_instances_per_node, a.max_bins) <
               std::tie(b.reg_param, b.max_depth, b.num_trees, b.min_instances_per_node, b.max_bins);
    });
    return out;
}

std::string describe(const Hyperparameters& p) {
    if (is_linear(p.family)) return fmt::format("reg_param={}", p.reg_param);
    if (p.family == Family::random_forest) {
        return fmt::format("max_depth={} num_trees={} min_instances={}", p.max_depth, p.num_trees,
                           p.min_instances_per_node);
    }
    return fmt::format("max_depth={} max_bins={} min_instances={} iterations={} learning_rate={}", p.max_depth,
                       p.max_bins, p.min_instances_per_node, p.num_trees, p.learning_rate);
}

}  // namespace nowcast::models
