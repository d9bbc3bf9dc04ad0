#pragma once

#include <filesystem>
#include <string>

#include "rmab/environment.hpp"

namespace rmab {

// JSON layout:
//   { "name": ..., "global": [[...]],
//     "arms": [ [ {"transitions": [[...]], "rewards": [...]}, ...per global state ], ...per arm ],
//     "switch_mode": "stationary-redraw" | "index-carryover" }
// Doubles are written in shortest round-trip form, so load(save(m)) == m.
std::string save_scenario(const ScenarioModel& model);
ScenarioModel load_scenario(const std::string& json_text);

ScenarioModel load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const ScenarioModel& model, const std::filesystem::path& path);

} // namespace rmab
