#include "curvlab/reports.hpp"

#include <cmath>
#include <sstream>

#include "curvlab/tensor_io.hpp"

namespace curvlab {

using nlohmann::json;

namespace {

// JSON has no infinities; unbounded values serialize as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

json to_json(const Witness& w) {
  if (const auto* f = std::get_if<Frame4>(&w)) {
    json cols = json::array();
    for (int a = 0; a < 4; ++a) cols.push_back(vec(f->column(a)));
    return json{{"type", "frame"}, {"columns", std::move(cols)}};
  }
  if (const auto* e = std::get_if<Vector>(&w)) return json{{"type", "eigenvector"}, {"vector", vec(*e)}};
  if (const auto* p = std::get_if<Plane>(&w)) return json{{"type", "plane"}, {"u", vec(p->u)}, {"v", vec(p->v)}};
  return json{{"type", "none"}};
}

json to_json(const MembershipVerdict& v) {
  return json{{"margin", v.margin},
              {"classification", classification_name(v.classification)},
              {"witness", to_json(v.witness)},
              {"budget_exhausted", v.budget_exhausted},
              {"restarts", v.restarts},
              {"restarts_converged", v.restarts_converged}};
}

json to_json(const TangentConeVerdict& v) {
  json active = json::array();
  for (const Witness& w : v.active_set) active.push_back(to_json(w));
  return json{{"contained", v.contained},
              {"base_classification", classification_name(v.base_classification)},
              {"min_directional_value", finite_or_null(v.min_directional_value)},
              {"active_set", std::move(active)}};
}

json to_json(const ConditionIIIReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"sample", f.sample}, {"scalar_ratio", f.scalar_ratio}, {"ricci_ratio", f.ricci_ratio}});
  }
  return json{{"trials", r.samples},
              {"pass", r.pass},
              {"fail", r.fail},
              {"worst", {{"scalar_over_norm", finite_or_null(r.worst_scalar_ratio)},
                         {"ricci_norm_over_norm", finite_or_null(r.worst_ricci_ratio)}}},
              {"witnesses", std::move(failures)}};
}

json to_json(const ConditionIVReport& r) {
  return json{{"trials", 1},
              {"pass", r.pass ? 1 : 0},
              {"fail", r.pass ? 0 : 1},
              {"worst", r.margin},
              {"expected_margin", r.expected_margin},
              {"classification", classification_name(r.classification)},
              {"witnesses", json::array()}};
}

json to_json(const InvarianceReport& r) {
  json witnesses = json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back({{"source", w.source}, {"index", w.index}, {"value", w.value}, {"witness", to_json(w.witness)}});
  }
  return json{{"trials", r.trials},
              {"pass", r.pass},
              {"fail", r.fail},
              {"worst", finite_or_null(r.worst)},
              {"violation_tol", r.violation_tol},
              {"trajectories", {{"count", r.trajectories},
                                {"pass", r.trajectory_pass},
                                {"fail", r.trajectory_fail},
                                {"worst_margin", finite_or_null(r.trajectory_worst_margin)}}},
              {"witnesses", std::move(witnesses)}};
}

json to_json(const RigidityReport& r) {
  return json{{"input_id", r.input_id},
              {"cone", cone_name(r.cone)},
              {"dim", r.dim},
              {"scale_factor", r.scale_factor},
              {"einstein_residual", r.einstein_residual},
              {"kappa_star", r.kappa_star},
              {"kappa_closed_form", r.kappa_closed_form},
              {"classification_at_kappa_star", to_json(r.at_kappa_star)},
              {"eq3_residual", r.eq3_residual},
              {"prop1_residual_symmetric",
               r.prop1_residual_symmetric ? json(*r.prop1_residual_symmetric) : json("not-applicable")},
              {"fixed_point_residual", r.fixed_point_residual},
              {"s_norm", r.s_norm},
              {"verdict", verdict_name(r.verdict)}};
}

json to_json(const ConeSpec& c) {
  return json{{"kind", cone_name(c.kind)},
              {"dim", c.dim},
              {"tol", c.tol},
              {"activation_tol", c.activation_tol},
              {"search", {{"restarts", c.search.restarts},
                          {"max_iters", c.search.max_iters},
                          {"step_tol", c.search.step_tol},
                          {"seed", c.search.seed}}}};
}

json to_json(const TrajectoryRecord& t) {
  json tensors = json::array();
  for (const CurvTensor& r : t.tensors) tensors.push_back(tensor_to_json(r));
  json norms = json::array(), scalars = json::array(), steps = json::array(), times = json::array();
  for (const auto& d : t.diagnostics) {
    times.push_back(d.time);
    norms.push_back(d.norm);
    scalars.push_back(d.scalar);
    steps.push_back(d.step);
  }
  return json{{"times", t.times},
              {"tensors", std::move(tensors)},
              {"status", flow_status_name(t.status)},
              {"rejected_steps", t.rejected_steps},
              {"diagnostics", {{"time", std::move(times)},
                               {"norm", std::move(norms)},
                               {"scalar", std::move(scalars)},
                               {"step", std::move(steps)}}}};
}

std::string rigidity_csv(const RigidityReport& r, bool header) {
  std::ostringstream ss;
  if (header) {
    ss << "input_id,cone,dim,einstein_residual,kappa_star,kappa_closed_form,margin_at_kappa_star,"
          "eq3_residual,prop1_residual_symmetric,fixed_point_residual,s_norm,verdict\n";
  }
  ss << r.input_id << ',' << cone_name(r.cone) << ',' << r.dim << ',' << num(r.einstein_residual) << ','
     << num(r.kappa_star) << ',' << num(r.kappa_closed_form) << ',' << num(r.at_kappa_star.margin) << ','
     << num(r.eq3_residual) << ',' << (r.prop1_residual_symmetric ? num(*r.prop1_residual_symmetric) : "") << ','
     << num(r.fixed_point_residual) << ',' << num(r.s_norm) << ',' << verdict_name(r.verdict) << '\n';
  return ss.str();
}

std::string trajectory_csv(const TrajectoryRecord& t) {
  std::ostringstream ss;
  ss << "time,norm,scalar,step\n";
  for (const auto& d : t.diagnostics) {
    ss << num(d.time) << ',' << num(d.norm) << ',' << num(d.scalar) << ',' << num(d.step) << '\n';
  }
  return ss.str();
}

}  // namespace curvlab
