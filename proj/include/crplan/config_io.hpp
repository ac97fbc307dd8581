#pragma once

#include <string>
#include <string_view>

#include "crplan/frenet_planner.hpp"
#include "crplan/reach_planner.hpp"

namespace crplan {

/// Vehicle parameters plus the settings of both planners.
struct PlannerConfig {
  VehicleParameters vehicle;
  ReachConfig reach;
  FrenetConfig frenet;
};

/**
 * Reads {"vehicle": {...}, "reach": {...}, "frenet": {...}}. Every block and
 * field is optional; missing ones keep their defaults. Throws InputError on
 * malformed JSON or wrongly typed fields.
 */
PlannerConfig parse_planner_config(std::string_view document);
std::string serialize_planner_config(const PlannerConfig& cfg);

}  // namespace crplan
