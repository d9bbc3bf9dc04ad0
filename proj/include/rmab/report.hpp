#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rmab/harness.hpp"
#include "rmab/theory.hpp"

namespace rmab {

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// policy,t,mean_regret,std_regret,ci95,mean_regret_over_lnt with LF endings.
std::string aggregate_csv(const AggregateResult& result);

nlohmann::json constants_json(const SystemConstants& c);
nlohmann::json bound_json(const BoundReport& report);
nlohmann::json config_json(const LempConfig& config);

// Spec echo, seeds, aggregates and, if given, the bound report.
nlohmann::json experiment_json(const ExperimentSpec& spec, const AggregateResult& result,
                               const std::optional<BoundReport>& bound = std::nullopt);

} // namespace rmab
