#pragma once

#include "dunkl/jump_lift.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/stat_verify.hpp"

#include <json.hpp>

#include <memory>
#include <vector>

namespace dunkl {

/// {dimension, roots, positive, orbits}; doubles print as shortest round-trip decimals.
nlohmann::json root_system_to_json(const RootSystem& system);
RootSystem root_system_from_json(const nlohmann::json& doc);

/// {enumeration, modes, rates}.
nlohmann::json lift_plan_to_json(const LiftPlan& plan);
LiftPlan lift_plan_from_json(std::shared_ptr<const RootSystem> system, const nlohmann::json& doc);

nlohmann::json report_to_json(const Report& report);
nlohmann::json reports_to_json(const std::vector<Report>& reports);

}  // namespace dunkl
