#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmab/environment.hpp"

namespace rmab {

// The four evaluation scenarios. One-based global labels 1/2/3 map to
// indices 0/1/2; local states 1/2 map to indices 0/1.
std::vector<ScenarioModel> builtin_scenarios(SwitchMode mode = SwitchMode::StationaryRedraw);

std::optional<ScenarioModel> find_builtin(const std::string& name,
                                          SwitchMode mode = SwitchMode::StationaryRedraw);

std::vector<std::string> builtin_names();

} // namespace rmab
