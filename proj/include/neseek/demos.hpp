#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neseek/sim.hpp"

namespace neseek {

// Six double-integrator agents playing a tracking-form game on a 6-cycle, perfect information.
ScenarioConfig example1_scenario();

// Six turbine-governor-generator agents in an electricity market, imperfect information,
// 500 Hz disturbance.
ScenarioConfig example2_scenario();

// "example1" or "example2"; nullopt for any other name.
std::optional<ScenarioConfig> bundled_scenario(const std::string& name);
std::vector<std::string> bundled_scenario_names();

}  // namespace neseek
