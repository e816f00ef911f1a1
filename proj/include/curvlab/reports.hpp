#pragma once

#include <json.hpp>

#include "curvlab/cones.hpp"
#include "curvlab/hamilton.hpp"
#include "curvlab/rigidity.hpp"

namespace curvlab {

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const MembershipVerdict& v);
nlohmann::json to_json(const TangentConeVerdict& v);
nlohmann::json to_json(const ConditionIIIReport& r);
nlohmann::json to_json(const ConditionIVReport& r);
nlohmann::json to_json(const InvarianceReport& r);
nlohmann::json to_json(const RigidityReport& r);
nlohmann::json to_json(const ConeSpec& c);
/// Times, one tensor per sample, and per-step diagnostics.
nlohmann::json to_json(const TrajectoryRecord& t);

/// Header and one row; `header` false emits just the row.
std::string rigidity_csv(const RigidityReport& r, bool header = true);
/// One row per accepted step: time, norm, scalar, step.
std::string trajectory_csv(const TrajectoryRecord& t);

}  // namespace curvlab
