#include "nowcast/models/serialize.hpp"

#include "nowcast/core/error.hpp"

namespace nowcast::models {
namespace {

using nlohmann::json;

json tree_to_json(const RegressionTree& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes()) {
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.samples});
    }
    return nodes;
}

RegressionTree tree_from_json(const json& doc) {
    std::vector<TreeNode> nodes;
    for (const auto& row : doc) {
        TreeNode n;
        n.feature = row.at(0).get<int>();
        n.threshold = row.at(1).get<double>();
        n.left = row.at(2).get<int>();
        n.right = row.at(3).get<int>();
        n.value = row.at(4).get<double>();
        n.samples = row.at(5).get<std::size_t>();
        nodes.push_back(n);
    }
    return RegressionTree(std::move(nodes));
}

json trees_to_json(const std::vector<RegressionTree>& trees) {
    json out = json::array();
    for (const auto& t : trees) out.push_back(tree_to_json(t));
    return out;
}

std::vector<RegressionTree> trees_from_json(const json& doc) {
    std::vector<RegressionTree> out;
    for (const auto& t : doc) out.push_back(tree_from_json(t));
    return out;
}

}  // namespace

json to_json(const Hyperparameters& p) {
    json out{{"family", family_key(p.family)}};
    switch (p.family) {
    case Family::lasso:
    case Family::ridge:
    case Family::glm:
        out["reg_param"] = p.reg_param;
        break;
    case Family::random_forest:
        out["max_depth"] = p.max_depth;
        out["num_trees"] = p.num_trees;
        out["min_instances_per_node"] = p.min_instances_per_node;
        out["seed"] = p.seed;
        break;
    case Family::gbt:
        out["max_depth"] = p.max_depth;
        out["num_trees"] = p.num_trees;
        out["min_instances_per_node"] = p.min_instances_per_node;
        out["max_bins"] = p.max_bins;
        out["learning_rate"] = p.learning_rate;
        break;
    }
    return out;
}

json to_json(const TrainedModel& model) {
    json out{{"family", family_key(model.family())},
             {"params", to_json(model.params())},
             {"feature_count", model.feature_count()},
             {"train_mse", model.train_mse()}};
    if (const auto* lin = model.as<LinearModel>()) {
        out["intercept"] = lin->intercept;
        out["coefficients"] = lin->coefficients;
        out["converged"] = lin->converged;
        out["iterations"] = lin->iterations;
    } else if (const auto* forest = model.as<ForestModel>()) {
        out["trees"] = trees_to_json(forest->trees);
    } else if (const auto* boosted = model.as<BoostedModel>()) {
        out["base"] = boosted->base;
        out["learning_rate"] = boosted->learning_rate;
        out["stages"] = trees_to_json(boosted->stages);
        out["stage_losses"] = boosted->stage_losses;
    }
    return out;
}

TrainedModel model_from_json(const json& doc) {
    try {
        Hyperparameters p;
        const auto& params = doc.at("params");
        p.family = parse_family(doc.at("family").get<std::string>());
        p.reg_param = params.value("reg_param", p.reg_param);
        p.max_depth = params.value("max_depth", p.max_depth);
        p.num_trees = params.value("num_trees", p.num_trees);
        p.min_instances_per_node = params.value("min_instances_per_node", p.min_instances_per_node);
        p.max_bins = params.value("max_bins", p.max_bins);
        p.learning_rate = params.value("learning_rate", p.learning_rate);
        p.seed = params.value("seed", p.seed);
        const auto features = doc.at("feature_count").get<std::size_t>();
        const auto mse = doc.at("train_mse").get<double>();

        switch (p.family) {
        case Family::lasso:
        case Family::ridge:
        case Family::glm: {
            LinearModel lm;
            lm.intercept = doc.at("intercept").get<double>();
            lm.coefficients = doc.at("coefficients").get<std::vector<double>>();
            lm.converged = doc.value("converged", true);
            lm.iterations = doc.value("iterations", 0);
            return TrainedModel(p, features, std::move(lm), mse);
        }
        case Family::random_forest: {
            ForestModel f;
            f.trees = trees_from_json(doc.at("trees"));
            return TrainedModel(p, features, std::move(f), mse);
        }
        case Family::gbt: {
            BoostedModel b;
            b.base = doc.at("base").get<double>();
            b.learning_rate = doc.at("learning_rate").get<double>();
            b.stages = trees_from_json(doc.at("stages"));
            b.stage_losses = doc.at("stage_losses").get<std::vector<double>>();
            return TrainedModel(p, features, std::move(b), mse);
        }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("model document: ") + e.what());
    }
    throw ParseError("model document: unknown family");
}

}  // namespace nowcast::models
