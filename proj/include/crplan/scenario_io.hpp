#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "crplan/scenario.hpp"

namespace crplan {

/// Planner output as exchanged through solution files.
struct Solution {
  std::string scenario_id;
  std::string planner;
  double dt = 0.1;
  std::vector<VehicleState> states;
  std::vector<ControlInput> inputs;
};

/// Parses and validates a scenario document. Throws InputError.
Scenario parse_scenario(std::string_view document);
std::string serialize_scenario(const Scenario& sc);
/// Reads a scenario file; the id defaults to the file stem when the document has none.
Scenario load_scenario(const std::filesystem::path& path);

Solution parse_solution(std::string_view document);
std::string serialize_solution(const Solution& sol);

/// Missing fields keep their defaults.
VehicleParameters parse_vehicle_parameters(std::string_view document);
std::string serialize_vehicle_parameters(const VehicleParameters& p);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace crplan
