#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "nowcast/models/trained_model.hpp"

namespace nowcast::models {

/// Self-describing form: family, the parameters relevant to it, train_mse,
/// and either coefficients or every tree node.
nlohmann::json to_json(const TrainedModel& model);
/// Throws ParseError on a malformed document.
TrainedModel model_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Hyperparameters& params);

}  // namespace nowcast::models
