#pragma once

#include <json.hpp>
#include <string_view>

#include "knotstat/ann.hpp"
#include "knotstat/experiments.hpp"
#include "knotstat/knot_data.hpp"

namespace knotstat {

enum class Command { Validate, Derive, Correlate, Tables, TrainAnn, Evaluate, Distill, Sweep, Scatter };

Command parse_command(std::string_view text);
std::string_view to_string(Command c) noexcept;

/// Runs one command on a dataset. `request` is a flat JSON object of options;
/// unknown keys raise UsageError. The result is the envelope
/// {schema_version, command, config, result} where config holds every
/// resolved option. The thread count is accepted but not echoed, since it
/// never changes results. TrainAnn additionally carries a "model" member.
/// Evaluate goes through evaluate_model instead.
nlohmann::json run_command(Command cmd, const Dataset& ds, const nlohmann::json& request);

/// A trained ANN with the feature layout and target it was fitted for.
struct TrainedModel {
  FeatureLayout layout;
  TargetInvariant target = TargetInvariant::Vol;
  Network network;
};

nlohmann::json to_json(const TrainedModel& m);
/// Accepts either a bare model object or a train-ann envelope.
TrainedModel trained_model_from_json(const nlohmann::json& j);

/// Vectorizes ds with the model's stored layout and reports MSE/MAPE.
/// Records that fall outside the layout are dropped and counted.
nlohmann::json evaluate_model(const TrainedModel& model, const Dataset& ds,
                              const nlohmann::json& request);

}  // namespace knotstat
