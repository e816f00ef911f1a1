#include "curvlab/cones.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include "curvlab/hamilton.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"

namespace curvlab {

namespace {

bool search_based(ConeKind kind) { return kind == ConeKind::NIC || kind == ConeKind::NonnegSectional; }

Classification classify(double margin, double tol) {
  if (margin > tol) return Classification::Interior;
  if (margin < -tol) return Classification::Outside;
  return Classification::Boundary;
}

Plane plane_of(const Matrix& frame) { return {frame.col(0), frame.col(1)}; }

Witness witness_from_frame(ConeKind kind, const Matrix& frame) {
  if (kind == ConeKind::NIC) return Frame4(frame);
  return plane_of(frame);
}

MembershipVerdict membership_impl(const ConeSpec& cone, const CurvTensor& r, std::span<const Matrix> warm) {
  validate(cone);
  if (r.dim() != cone.dim) {
    throw CurvError(ErrorCode::DimMismatch, "tensor dimension " + std::to_string(r.dim()) +
                                                " does not match cone dimension " + std::to_string(cone.dim));
  }
  MembershipVerdict v;
  switch (cone.kind) {
    case ConeKind::NIC:
    case ConeKind::NonnegSectional: {
      SearchResult res = cone.kind == ConeKind::NIC ? min_isotropic(r, cone.search, warm)
                                                    : min_sectional(r, cone.search, warm);
      v.margin = res.value;
      v.witness = witness_from_frame(cone.kind, res.frame);
      v.restarts = static_cast<int>(res.runs.size());
      v.restarts_converged = static_cast<int>(
          std::count_if(res.runs.begin(), res.runs.end(), [](const LocalRun& run) { return run.converged; }));
      v.budget_exhausted = !res.all_converged;
      v.local_minima = std::move(res.runs);
      break;
    }
    case ConeKind::NonnegCurvOp: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(curv_operator_matrix(r).matrix());
      v.margin = eig.eigenvalues()[0];
      v.witness = Vector(eig.eigenvectors().col(0));
      break;
    }
    case ConeKind::NonnegScalar:
      v.margin = scalar(r);
      break;
    case ConeKind::NonnegRicci: {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(ricci(r).matrix());
      v.margin = eig.eigenvalues()[0];
      v.witness = Vector(eig.eigenvectors().col(0));
      break;
    }
  }
  v.classification = classify(v.margin, cone.tol);
  return v;
}

std::vector<Matrix> warm_frames(const MembershipVerdict& v) {
  std::vector<Matrix> out;
  if (const auto* f = std::get_if<Frame4>(&v.witness)) out.push_back(f->columns());
  if (const auto* p = std::get_if<Plane>(&v.witness)) {
    Matrix m(p->u.size(), 2);
    m.col(0) = p->u;
    m.col(1) = p->v;
    out.push_back(std::move(m));
  }
  return out;
}

// Active constraints of an eigenvalue cone: min eigenvalue of V's form restricted
// to the near-kernel of S's form.
void eigen_active_set(const Matrix& s_form, const Matrix& v_form, double activation_tol, TangentConeVerdict& out) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s_form);
  std::vector<int> active;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()[i] <= activation_tol) active.push_back(static_cast<int>(i));
  if (active.empty()) return;
  Matrix basis(s_form.rows(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(active[c]);
    out.active_set.emplace_back(Vector(eig.eigenvectors().col(active[c])));
  }
  const Matrix restricted = basis.transpose() * v_form * basis;
  Eigen::SelfAdjointEigenSolver<Matrix> reig(0.5 * (restricted + restricted.transpose()));
  out.min_directional_value = reig.eigenvalues()[0];
}

TangentConeVerdict tangent_from_verdict(const ConeSpec& cone, const MembershipVerdict& base, const CurvTensor& s,
                                        const CurvTensor& v) {
  if (base.classification == Classification::Outside) {
    throw CurvError(ErrorCode::InvalidQuery, "tangent cone queried at a tensor outside the cone");
  }
  TangentConeVerdict out;
  out.base_classification = base.classification;
  if (base.classification == Classification::Interior) {
    out.contained = true;
    return out;
  }
  switch (cone.kind) {
    case ConeKind::NIC:
    case ConeKind::NonnegSectional: {
      // Frames equivalent under the functional's symmetries give identical values on
      // every tensor; probe tensors separate the rest.
      std::array<CurvTensor, 3> probes{
          random_curvature(s.dim(), Rng::derive_seed(cone.search.seed, {stream_tag::kFingerprint, 0})),
          random_curvature(s.dim(), Rng::derive_seed(cone.search.seed, {stream_tag::kFingerprint, 1})),
          random_curvature(s.dim(), Rng::derive_seed(cone.search.seed, {stream_tag::kFingerprint, 2}))};
      std::set<std::array<long long, 3>> seen;
      for (const LocalRun& run : base.local_minima) {
        if (run.value > cone.activation_tol) continue;
        const Witness w = witness_from_frame(cone.kind, run.frame);
        std::array<long long, 3> key{};
        for (std::size_t k = 0; k < probes.size(); ++k) {
          key[k] = std::llround(witness_value(cone.kind, w, probes[k]) * 1e6);
        }
        if (!seen.insert(key).second) continue;
        out.min_directional_value = std::min(out.min_directional_value, witness_value(cone.kind, w, v));
        out.active_set.push_back(w);
      }
      if (out.active_set.empty()) {
        // Boundary by margin but no pooled run below the activation tolerance: use the witness.
        out.active_set.push_back(base.witness);
        out.min_directional_value = witness_value(cone.kind, base.witness, v);
      }
      break;
    }
    case ConeKind::NonnegCurvOp:
      eigen_active_set(curv_operator_matrix(s).matrix(), curv_operator_matrix(v).matrix(), cone.activation_tol, out);
      break;
    case ConeKind::NonnegRicci:
      eigen_active_set(ricci(s).matrix(), ricci(v).matrix(), cone.activation_tol, out);
      break;
    case ConeKind::NonnegScalar:
      out.active_set.emplace_back(std::monostate{});
      out.min_directional_value = scalar(v);
      break;
  }
  out.contained = out.min_directional_value >= -cone.tol;
  return out;
}

std::string squash(const std::string& name) {
  std::string out;
  for (char c : name)
    if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

void validate(const ConeSpec& cone) {
  if (!(cone.tol > 0.0)) throw CurvError(ErrorCode::UsageError, "cone tolerance must be positive");
  if (cone.kind == ConeKind::NIC && cone.dim < 4) throw CurvError(ErrorCode::InvalidDimension, "NIC cone requires n >= 4");
  if (cone.dim < 3) throw CurvError(ErrorCode::InvalidDimension, "cones require n >= 3");
  if (search_based(cone.kind) && (cone.search.restarts < 1 || cone.search.max_iters < 1)) {
    throw CurvError(ErrorCode::UsageError, "search budget must allow at least one restart and iteration");
  }
}

std::string cone_name(ConeKind kind) {
  switch (kind) {
    case ConeKind::NIC: return "NIC";
    case ConeKind::NonnegCurvOp: return "NonnegCurvOp";
    case ConeKind::NonnegScalar: return "NonnegScalar";
    case ConeKind::NonnegRicci: return "NonnegRicci";
    case ConeKind::NonnegSectional: return "NonnegSectional";
  }
  return "unknown";
}

ConeKind parse_cone_kind(const std::string& name) {
  const std::string s = squash(name);
  if (s == "nic") return ConeKind::NIC;
  if (s == "nonnegcurvop" || s == "curvop") return ConeKind::NonnegCurvOp;
  if (s == "nonnegscalar" || s == "scalar") return ConeKind::NonnegScalar;
  if (s == "nonnegricci" || s == "ricci") return ConeKind::NonnegRicci;
  if (s == "nonnegsectional" || s == "sectional") return ConeKind::NonnegSectional;
  throw CurvError(ErrorCode::UsageError, "unknown cone '" + name + "'");
}

double identity_margin(ConeKind kind, int n) {
  switch (kind) {
    case ConeKind::NIC: return 4.0;
    case ConeKind::NonnegCurvOp: return 1.0;
    case ConeKind::NonnegScalar: return static_cast<double>(n) * (n - 1);
    case ConeKind::NonnegRicci: return n - 1.0;
    case ConeKind::NonnegSectional: return 1.0;
  }
  return 0.0;
}

double witness_value(ConeKind kind, const Witness& w, const CurvTensor& r) {
  switch (kind) {
    case ConeKind::NIC: return isotropic_curvature(r, std::get<Frame4>(w));
    case ConeKind::NonnegSectional: {
      const Plane& p = std::get<Plane>(w);
      return multilinear(r, p.u, p.v, p.u, p.v);
    }
    case ConeKind::NonnegCurvOp: {
      const Vector& e = std::get<Vector>(w);
      return e.dot(curv_operator_matrix(r).matrix() * e);
    }
    case ConeKind::NonnegRicci: {
      const Vector& e = std::get<Vector>(w);
      return e.dot(ricci(r).matrix() * e);
    }
    case ConeKind::NonnegScalar: return scalar(r);
  }
  return 0.0;
}

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Interior: return "interior";
    case Classification::Boundary: return "boundary";
    case Classification::Outside: return "outside";
  }
  return "unknown";
}

MembershipVerdict membership(const ConeSpec& cone, const CurvTensor& r) { return membership_impl(cone, r, {}); }

BoundaryPoint project_to_boundary(const ConeSpec& cone, const CurvTensor& r_in, const CurvTensor& d) {
  constexpr double kTMax = 1e6;
  constexpr int kMaxRootSteps = 200;

  const MembershipVerdict start = membership(cone, r_in);
  if (start.classification != Classification::Interior) {
    throw CurvError(ErrorCode::NonInteriorStart, "boundary projection must start in the interior (margin " +
                                                     std::to_string(start.margin) + ")");
  }
  const double dnorm = norm(d);
  if (dnorm == 0.0) throw CurvError(ErrorCode::RayStaysInside, "zero direction");

  BoundaryPoint bp{CurvTensor::zero(r_in.dim()), 0.0, start, 0};
  std::vector<Matrix> warm = warm_frames(start);
  auto evaluate = [&](double t) {
    CurvTensor point = r_in + t * d;
    MembershipVerdict v = membership_impl(cone, point, warm);
    ++bp.evaluations;
    auto next = warm_frames(v);
    if (!next.empty()) warm = std::move(next);
    return std::make_pair(std::move(point), std::move(v));
  };
  auto done = [&](std::pair<CurvTensor, MembershipVerdict>&& ev, double t) {
    bp.tensor = std::move(ev.first);
    bp.verdict = std::move(ev.second);
    bp.t = t;
    return bp;
  };

  double lo = 0.0;
  double hi = 0.0;
  Witness hi_witness;
  double t = std::max(norm(r_in) / dnorm, 1e-12);
  while (true) {
    auto ev = evaluate(t);
    const double m = ev.second.margin;
    if (std::abs(m) <= cone.tol) return done(std::move(ev), t);
    if (m < 0.0) {
      hi = t;
      hi_witness = ev.second.witness;
      break;
    }
    lo = t;
    if (t >= kTMax) throw CurvError(ErrorCode::RayStaysInside, "ray stays inside the cone up to t = 1e6");
    t = std::min(2.0 * t, kTMax);
  }

  bool bisect = false;
  std::pair<CurvTensor, MembershipVerdict> best = evaluate(hi);
  double best_t = hi;
  for (int step = 0; step < kMaxRootSteps; ++step) {
    const double width = hi - lo;
    double cand = 0.5 * (lo + hi);
    if (!bisect) {
      // The active linear functional at hi bounds the concave margin from above,
      // so its root lies inside (lo, hi).
      const double a = witness_value(cone.kind, hi_witness, r_in);
      const double b = witness_value(cone.kind, hi_witness, d);
      if (b < 0.0) {
        const double root = -a / b;
        if (root > lo && root < hi) cand = root;
      }
    }
    auto ev = evaluate(cand);
    const double m = ev.second.margin;
    if (std::abs(m) <= cone.tol) return done(std::move(ev), cand);
    if (std::abs(m) < std::abs(best.second.margin)) {
      best = ev;
      best_t = cand;
    }
    if (m < 0.0) {
      hi = cand;
      hi_witness = ev.second.witness;
    } else {
      lo = cand;
    }
    bisect = (hi - lo) > 0.5 * width;
    if (hi - lo <= 1e-15 * hi) break;
  }
  throw CurvError(ErrorCode::NumericFailure,
                  "boundary root finding stalled with margin " + std::to_string(best.second.margin) + " at t = " +
                      std::to_string(best_t));
}

TangentConeVerdict tangent_cone_contains(const ConeSpec& cone, const CurvTensor& s, const CurvTensor& v) {
  if (v.dim() != s.dim()) throw CurvError(ErrorCode::DimMismatch, "direction dimension differs from base point");
  return tangent_from_verdict(cone, membership(cone, s), s, v);
}

ConditionIIIReport check_condition_iii(const ConeSpec& cone, int samples, std::uint64_t seed) {
  if (cone.kind != ConeKind::NIC && cone.kind != ConeKind::NonnegCurvOp) {
    throw CurvError(ErrorCode::InvalidQuery, "condition (iii) check supports the NIC and NonnegCurvOp cones");
  }
  validate(cone);
  struct Sample {
    double scalar_ratio = 0.0;
    double ricci_ratio = 0.0;
    bool skipped = false;
  };
  std::vector<Sample> results(static_cast<std::size_t>(std::max(samples, 0)));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < samples; ++k) {
    const CurvTensor r = random_in_cone(
        cone, cone.dim, Rng::derive_seed(seed, {stream_tag::kConditionCheck, static_cast<std::uint64_t>(k)}));
    const double nr = norm(r);
    Sample& out = results[static_cast<std::size_t>(k)];
    if (nr == 0.0) {
      out.skipped = true;
      continue;
    }
    out.scalar_ratio = scalar(r) / nr;
    out.ricci_ratio = ricci(r).matrix().norm() / nr;
  }

  ConditionIIIReport rep;
  for (int k = 0; k < samples; ++k) {
    const Sample& s = results[static_cast<std::size_t>(k)];
    if (s.skipped) continue;
    ++rep.samples;
    rep.worst_scalar_ratio = std::min(rep.worst_scalar_ratio, s.scalar_ratio);
    rep.worst_ricci_ratio = std::min(rep.worst_ricci_ratio, s.ricci_ratio);
    if (s.scalar_ratio >= -1e-9 && s.ricci_ratio > 1e-9) {
      ++rep.pass;
    } else {
      ++rep.fail;
      rep.failures.push_back({k, s.scalar_ratio, s.ricci_ratio});
    }
  }
  return rep;
}

ConditionIVReport check_condition_iv(const ConeSpec& cone) {
  const MembershipVerdict v = membership(cone, identity_tensor(cone.dim));
  ConditionIVReport rep;
  rep.margin = v.margin;
  rep.expected_margin = identity_margin(cone.kind, cone.dim);
  rep.classification = v.classification;
  rep.pass = v.classification == Classification::Interior && v.margin >= 1.0 - cone.tol;
  return rep;
}

InvarianceReport invariance_check(const ConeSpec& cone, const InvarianceOptions& opts) {
  validate(cone);
  const int n = cone.dim;
  const double violation_tol = opts.violation_tol > 0.0 ? opts.violation_tol : 10.0 * cone.tol;
  const CurvTensor id = identity_tensor(n);

  struct TrialOutcome {
    double value = std::numeric_limits<double>::infinity();
    Witness witness;
    bool ok = true;
  };
  std::vector<TrialOutcome> trials(static_cast<std::size_t>(std::max(opts.trials, 0)));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < opts.trials; ++k) {
    TrialOutcome& out = trials[static_cast<std::size_t>(k)];
    for (int attempt = 0; attempt < 64; ++attempt) {
      const CurvTensor dir = random_curvature(
          n, Rng::derive_seed(opts.seed, {stream_tag::kInvariance, static_cast<std::uint64_t>(k),
                                          static_cast<std::uint64_t>(attempt)}));
      BoundaryPoint bp{CurvTensor::zero(n), 0.0, {}, 0};
      try {
        bp = project_to_boundary(cone, id, dir);
      } catch (const CurvError& e) {
        if (e.code() == ErrorCode::RayStaysInside) continue;
        throw;
      }
      const TangentConeVerdict tc = tangent_from_verdict(cone, bp.verdict, bp.tensor, q_term(bp.tensor));
      out.value = tc.min_directional_value;
      out.ok = out.value >= -violation_tol;
      if (!tc.active_set.empty()) out.witness = tc.active_set.front();
      break;
    }
  }

  InvarianceReport rep;
  rep.violation_tol = violation_tol;
  for (int k = 0; k < opts.trials; ++k) {
    const TrialOutcome& t = trials[static_cast<std::size_t>(k)];
    ++rep.trials;
    rep.worst = std::min(rep.worst, t.value);
    if (t.ok) {
      ++rep.pass;
    } else {
      ++rep.fail;
      rep.witnesses.push_back({"boundary", k, t.value, t.witness});
    }
  }

  struct TrajectoryOutcome {
    double worst = std::numeric_limits<double>::infinity();
    Witness witness;
  };
  std::vector<TrajectoryOutcome> flows(static_cast<std::size_t>(std::max(opts.trajectories, 0)));
  const int segments = std::max(1, opts.trajectory_samples);

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < opts.trajectories; ++k) {
    TrajectoryOutcome& out = flows[static_cast<std::size_t>(k)];
    CurvTensor r =
        random_in_cone(cone, n, Rng::derive_seed(opts.seed, {stream_tag::kTrajectory, static_cast<std::uint64_t>(k)}));
    FlowOptions fo;
    fo.method = FlowMethod::Rk4Adaptive;
    fo.normalized = true;
    fo.t_end = opts.trajectory_t_end / segments;
    fo.step = std::min(1e-3, fo.t_end);
    fo.sample_every = 1 << 30;
    for (int seg = 0; seg < segments; ++seg) {
      const TrajectoryRecord rec = integrate(r, fo);
      r = rec.tensors.back();
      const MembershipVerdict v = membership(cone, r);
      if (v.margin < out.worst) {
        out.worst = v.margin;
        out.witness = v.witness;
      }
      if (rec.status == FlowStatus::BlowupDetected) break;
    }
  }
  for (int k = 0; k < opts.trajectories; ++k) {
    const TrajectoryOutcome& t = flows[static_cast<std::size_t>(k)];
    ++rep.trajectories;
    rep.trajectory_worst_margin = std::min(rep.trajectory_worst_margin, t.worst);
    if (t.worst >= -violation_tol) {
      ++rep.trajectory_pass;
    } else {
      ++rep.trajectory_fail;
      rep.witnesses.push_back({"trajectory", k, t.worst, t.witness});
    }
  }
  return rep;
}

}  // namespace curvlab
