#include "curvlab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "curvlab/kernels.hpp"
#include "curvlab/reports.hpp"
#include "curvlab/rigidity.hpp"
#include "curvlab/tensor_io.hpp"

#ifndef CURVLAB_VERSION
#define CURVLAB_VERSION "0.0.0"
#endif

namespace curvlab::cli {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

bool needs_tensor(Command c) {
  return c == Command::Membership || c == Command::Flow || c == Command::Rigidity;
}

bool needs_cone(Command c) {
  return c == Command::Membership || c == Command::Invariance || c == Command::ConditionCheck ||
         c == Command::Rigidity;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

struct LoadedInput {
  CurvTensor tensor;
  std::string id;
  std::optional<double> projection_residual;
};

LoadedInput load_input(const ExperimentConfig& c) {
  if (c.input) {
    LoadedTensor lt = parse_tensor(read_text_file(*c.input), c.force);
    return {std::move(lt.tensor), c.input_id.empty() ? *c.input : c.input_id, lt.projection_residual};
  }
  return {make_model(*c.model), c.input_id.empty() ? model_kind_name(c.model->kind) : c.input_id, std::nullopt};
}

json model_echo(const ModelSpec& m) {
  return json{{"kind", model_kind_name(m.kind)}, {"dim", m.dim},           {"c", m.c},
              {"factor_dims", m.factor_dims},    {"curvatures", m.curvatures}, {"seed", m.seed}};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SearchInconsistency:
    case ErrorCode::NumericFailure:
    case ErrorCode::BudgetExhausted:
      return 2;
    default:
      return 1;
  }
}

// Flags registered per subcommand; shared by the CLI and the JSON config path.
struct Bindings {
  std::string cone = "nic";
  std::string input;
  std::string model_text;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool force = false;
  double tol = 1e-9;
  int restarts = 64;
  int max_iters = 500;
  int dim = 4;
  // model
  std::string name;
  double c = 1.0;
  std::string dims;
  std::string curvatures;
  // flow
  double t_end = 1.0;
  double dt = 1e-3;
  std::string method = "rk4_adaptive";
  bool normalized = false;
  int sample_every = 1;
  double blowup_threshold = 1e12;
  double rel_tol = 1e-9;
  // invariance / condition-check
  int samples = 200;
  int trajectories = 0;
  double violation_tol = 0.0;
  std::string which = "iv";
  std::string id;
};

void add_common(CLI::App* app, Bindings& b) {
  app->add_option("--out", b.out, "Output path (default: stdout)");
  app->add_option("--seed", b.seed, "Seed for random models and search restarts");
}

void add_tensor_source(CLI::App* app, Bindings& b) {
  app->add_option("--input", b.input, "Tensor JSON file");
  app->add_option("--model", b.model_text, "Model spec, e.g. product_spheres:2,2:3,3");
  app->add_flag("--force", b.force, "Accept inputs whose Bianchi projection residual exceeds 1e-8");
}

void add_search(CLI::App* app, Bindings& b) {
  app->add_option("--tol", b.tol, "Margin tolerance");
  app->add_option("--restarts", b.restarts, "Frame-search restarts");
  app->add_option("--max-iters", b.max_iters, "Iterations per restart");
}

ConeSpec cone_from(const Bindings& b, int dim) {
  ConeSpec cs;
  cs.kind = parse_cone_kind(b.cone);
  cs.dim = dim;
  cs.tol = b.tol;
  cs.search.restarts = b.restarts;
  cs.search.max_iters = b.max_iters;
  cs.search.seed = b.seed;
  return cs;
}

// Turns a JSON config object into flag tokens placed before the explicit ones.
std::vector<std::string> config_tokens(const json& cfg) {
  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_string()) {
      out.push_back(flag);
      out.push_back(value.get<std::string>());
    } else if (value.is_number_integer() || value.is_number_unsigned()) {
      out.push_back(flag);
      out.push_back(value.dump());
    } else if (value.is_number()) {
      std::ostringstream ss;
      ss.precision(17);
      ss << value.get<double>();
      out.push_back(flag);
      out.push_back(ss.str());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      out.push_back(flag);
      out.push_back(joined);
    } else {
      throw CurvError(ErrorCode::UsageError, "unsupported config value for '" + key + "'");
    }
  }
  return out;
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::Model: return "model";
    case Command::Membership: return "membership";
    case Command::Flow: return "flow";
    case Command::Invariance: return "invariance";
    case Command::ConditionCheck: return "condition-check";
    case Command::Rigidity: return "rigidity";
  }
  return "unknown";
}

void validate(const ExperimentConfig& c) {
  if (needs_tensor(c.command) && (c.input.has_value() == c.model.has_value())) {
    throw CurvError(ErrorCode::UsageError, command_name(c.command) + " needs exactly one of --input or --model");
  }
  if (c.command == Command::Model && !c.model) throw CurvError(ErrorCode::UsageError, "model needs a model spec");
  if (needs_cone(c.command) && !c.cone) throw CurvError(ErrorCode::UsageError, "missing --cone");
  if (c.command == Command::ConditionCheck && c.which != "iii" && c.which != "iv") {
    throw CurvError(ErrorCode::UsageError, "--which must be iii or iv");
  }
  if (c.format == Format::Csv && c.command != Command::Rigidity && c.command != Command::Flow) {
    throw CurvError(ErrorCode::UsageError, "csv output is available for rigidity and flow");
  }
}

ExperimentConfig parse_args(const std::vector<std::string>& raw) {
  if (raw.empty()) throw CurvError(ErrorCode::UsageError, "empty argument list");

  // Pull out --config, expand it, and splice its tokens in front of explicit flags.
  std::vector<std::string> explicit_args;
  std::optional<json> cfg;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i] == "--config") {
      if (i + 1 >= raw.size()) throw CurvError(ErrorCode::UsageError, "--config needs a path");
      const std::string text = read_text_file(raw[++i]);
      try {
        cfg = json::parse(text);
      } catch (const json::parse_error& e) {
        throw CurvError(ErrorCode::ParseError, "config file: " + std::string(e.what()));
      }
      if (!cfg->is_object()) throw CurvError(ErrorCode::UsageError, "config file must hold a JSON object");
    } else if (raw[i].rfind("--config=", 0) == 0) {
      throw CurvError(ErrorCode::UsageError, "use --config <path>");
    } else {
      explicit_args.push_back(raw[i]);
    }
  }
  std::vector<std::string> args{raw[0]};
  std::size_t rest = 0;
  if (!explicit_args.empty() && explicit_args[0].rfind("-", 0) != 0) {
    args.push_back(explicit_args[0]);
    rest = 1;
  } else if (cfg && cfg->contains("command")) {
    args.push_back((*cfg)["command"].get<std::string>());
  }
  if (cfg) {
    auto tokens = config_tokens(*cfg);
    args.insert(args.end(), tokens.begin(), tokens.end());
  }
  args.insert(args.end(), explicit_args.begin() + static_cast<std::ptrdiff_t>(rest), explicit_args.end());

  CLI::App app{"curvlab: algebraic curvature tensor laboratory"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  Bindings b;

  auto* model = app.add_subcommand("model", "Materialize a model tensor as tensor JSON");
  add_common(model, b);
  model->add_option("--name", b.name, "constant|complex_space_form|product_spheres|random|random_einstein");
  model->add_option("--spec", b.model_text, "Compact model spec (alternative to --name)");
  model->add_option("--dim", b.dim, "Dimension n");
  model->add_option("--c", b.c, "Curvature scale");
  model->add_option("--dims", b.dims, "Factor dims for product_spheres, comma separated");
  model->add_option("--curvatures", b.curvatures, "Factor curvatures for product_spheres");

  auto* memb = app.add_subcommand("membership", "Cone membership margin and witness");
  add_common(memb, b);
  add_tensor_source(memb, b);
  add_search(memb, b);
  memb->add_option("--cone", b.cone, "nic|nonneg_curv_op|nonneg_scalar|nonneg_ricci|nonneg_sectional");

  auto* flow = app.add_subcommand("flow", "Integrate dR/dt = Q(R)");
  add_common(flow, b);
  add_tensor_source(flow, b);
  flow->add_option("--t-end", b.t_end, "Final time");
  flow->add_option("--dt", b.dt, "Fixed step / initial adaptive step");
  flow->add_option("--method", b.method, "rk4_fixed|rk4_adaptive");
  flow->add_flag("--normalized", b.normalized, "Hold scalar curvature at its initial value");
  flow->add_option("--sample-every", b.sample_every, "Record every k-th accepted step");
  flow->add_option("--blowup-threshold", b.blowup_threshold, "Stop when the norm exceeds this");
  flow->add_option("--rel-tol", b.rel_tol, "Adaptive relative tolerance");
  flow->add_option("--format", b.format, "json|csv");

  auto* inv = app.add_subcommand("invariance", "Tangent-cone test of Q at sampled boundary points");
  add_common(inv, b);
  add_search(inv, b);
  inv->add_option("--cone", b.cone, "Cone kind");
  inv->add_option("--dim", b.dim, "Dimension n");
  inv->add_option("--samples", b.samples, "Boundary samples");
  inv->add_option("--trajectories", b.trajectories, "Normalized-flow trajectories to follow");
  inv->add_option("--t-end", b.t_end, "Trajectory duration");
  inv->add_option("--violation-tol", b.violation_tol, "Failure threshold (default 10 * tol)");

  auto* cond = app.add_subcommand("condition-check", "Check cone condition (iii) or (iv)");
  add_common(cond, b);
  add_search(cond, b);
  cond->add_option("--cone", b.cone, "Cone kind");
  cond->add_option("--which", b.which, "iii|iv");
  cond->add_option("--dim", b.dim, "Dimension n");
  cond->add_option("--samples", b.samples, "Samples for condition (iii)");

  auto* rig = app.add_subcommand("rigidity", "Pinching constant and identity residuals for an Einstein tensor");
  add_common(rig, b);
  add_tensor_source(rig, b);
  add_search(rig, b);
  rig->add_option("--cone", b.cone, "Cone kind");
  rig->add_option("--format", b.format, "json|csv");
  rig->add_option("--id", b.id, "Input identifier for reports");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw CurvError(ErrorCode::UsageError, app.help());
  } catch (const CLI::ParseError& e) {
    throw CurvError(ErrorCode::UsageError, e.what());
  }

  ExperimentConfig c;
  c.seed = b.seed;
  c.output = b.out;
  c.force = b.force;
  c.input_id = b.id;
  if (b.format == "json") c.format = Format::Json;
  else if (b.format == "csv") c.format = Format::Csv;
  else throw CurvError(ErrorCode::UsageError, "--format must be json or csv");
  if (!b.input.empty()) c.input = b.input;

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "model") {
    c.command = Command::Model;
    if (!b.model_text.empty()) {
      c.model = parse_model_spec(b.model_text, b.seed);
    } else {
      if (b.name.empty()) throw CurvError(ErrorCode::UsageError, "model needs --name or --spec");
      ModelSpec m;
      m.kind = parse_model_kind(b.name);
      m.dim = b.dim;
      m.c = b.c;
      m.seed = b.seed;
      if (m.kind == ModelKind::ProductSpheres) {
        try {
          for (const auto& d : split_csv(b.dims)) m.factor_dims.push_back(std::stoi(d));
          for (const auto& v : split_csv(b.curvatures)) m.curvatures.push_back(std::stod(v));
        } catch (const std::exception&) {
          throw CurvError(ErrorCode::UsageError, "--dims and --curvatures take comma-separated numbers");
        }
        if (sub->count("--dim") == 0) {
          m.dim = 0;
          for (int d : m.factor_dims) m.dim += d;
        }
      }
      c.model = m;
    }
  } else {
    if (!b.model_text.empty()) c.model = parse_model_spec(b.model_text, b.seed);
    if (name == "membership") c.command = Command::Membership;
    else if (name == "flow") c.command = Command::Flow;
    else if (name == "invariance") c.command = Command::Invariance;
    else if (name == "condition-check") c.command = Command::ConditionCheck;
    else c.command = Command::Rigidity;
  }

  if (needs_cone(c.command)) {
    int dim = b.dim;
    if (c.model) dim = c.model->dim;
    c.cone = cone_from(b, dim);  // tensor commands re-sync dim after loading
  }

  c.flow.t_end = b.t_end;
  c.flow.step = b.dt;
  c.flow.method = parse_flow_method(b.method);
  c.flow.normalized = b.normalized;
  c.flow.sample_every = b.sample_every;
  c.flow.blowup_threshold = b.blowup_threshold;
  c.flow.rel_tol = b.rel_tol;
  c.samples = b.samples;
  c.trajectories = b.trajectories;
  c.trajectory_t_end = c.command == Command::Invariance && sub->count("--t-end") ? b.t_end : 0.5;
  c.violation_tol = b.violation_tol;
  c.which = b.which;
  validate(c);
  return c;
}

json config_echo(const ExperimentConfig& c) {
  json j{{"command", command_name(c.command)},
         {"seed", c.seed},
         {"format", c.format == Format::Json ? "json" : "csv"},
         {"force", c.force}};
  if (c.cone) j["cone"] = to_json(*c.cone);
  if (c.model) j["model"] = model_echo(*c.model);
  if (c.input) j["input"] = *c.input;
  switch (c.command) {
    case Command::Flow:
      j["flow"] = {{"method", flow_method_name(c.flow.method)},
                   {"dt", c.flow.step},
                   {"t_end", c.flow.t_end},
                   {"normalized", c.flow.normalized},
                   {"sample_every", c.flow.sample_every},
                   {"blowup_threshold", c.flow.blowup_threshold},
                   {"rel_tol", c.flow.rel_tol}};
      break;
    case Command::Invariance:
      j["samples"] = c.samples;
      j["trajectories"] = c.trajectories;
      j["trajectory_t_end"] = c.trajectory_t_end;
      j["violation_tol"] = c.violation_tol;
      break;
    case Command::ConditionCheck:
      j["which"] = c.which;
      j["samples"] = c.samples;
      break;
    default:
      break;
  }
  return j;
}

RunResult run(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  try {
    validate(config);
    ExperimentConfig c = config;
    json report;
    std::string text;

    switch (c.command) {
      case Command::Model: {
        report = tensor_to_json(make_model(*c.model));
        break;
      }
      case Command::Membership: {
        LoadedInput in = load_input(c);
        c.cone->dim = in.tensor.dim();
        const MembershipVerdict v = membership(*c.cone, in.tensor);
        report = to_json(v);
        report["cone"] = cone_name(c.cone->kind);
        report["dim"] = in.tensor.dim();
        report["input_id"] = in.id;
        if (in.projection_residual) report["projection_residual"] = *in.projection_residual;
        break;
      }
      case Command::Flow: {
        LoadedInput in = load_input(c);
        const TrajectoryRecord rec = integrate(in.tensor, c.flow);
        if (c.format == Format::Csv) text = trajectory_csv(rec);
        report = to_json(rec);
        report["dim"] = in.tensor.dim();
        report["input_id"] = in.id;
        break;
      }
      case Command::Invariance: {
        InvarianceOptions opts;
        opts.trials = c.samples;
        opts.seed = c.seed;
        opts.trajectories = c.trajectories;
        opts.trajectory_t_end = c.trajectory_t_end;
        opts.violation_tol = c.violation_tol;
        const InvarianceReport rep = invariance_check(*c.cone, opts);
        report = to_json(rep);
        report["cone"] = cone_name(c.cone->kind);
        report["dim"] = c.cone->dim;
        if (rep.fail > 0 || rep.trajectory_fail > 0) result.exit_code = 2;
        break;
      }
      case Command::ConditionCheck: {
        if (c.which == "iii") {
          const ConditionIIIReport rep = check_condition_iii(*c.cone, c.samples, c.seed);
          report = to_json(rep);
          if (rep.fail > 0) result.exit_code = 2;
        } else {
          const ConditionIVReport rep = check_condition_iv(*c.cone);
          report = to_json(rep);
          if (!rep.pass) result.exit_code = 2;
        }
        report["cone"] = cone_name(c.cone->kind);
        report["dim"] = c.cone->dim;
        report["which"] = c.which;
        break;
      }
      case Command::Rigidity: {
        LoadedInput in = load_input(c);
        c.cone->dim = in.tensor.dim();
        const RigidityReport rep = rigidity_probe(*c.cone, in.tensor, in.id);
        if (c.format == Format::Csv) text = rigidity_csv(rep);
        report = to_json(rep);
        break;
      }
    }

    report["tool"] = "curvlab";
    report["version"] = CURVLAB_VERSION;
    report["command"] = command_name(c.command);
    report["seed"] = c.seed;
    report["config"] = config_echo(c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report["timestamp"] = {{"generated_at", utc_now()}, {"wall_seconds", wall}};
    result.output = text.empty() ? report.dump(2) + "\n" : text;
  } catch (const CurvError& e) {
    result.exit_code = exit_code_for(e.code());
    result.error = e.what();
  }
  return result;
}

int main_entry(const std::vector<std::string>& args) {
  kernels::configure_threads();
  ExperimentConfig config;
  try {
    config = parse_args(args);
  } catch (const CurvError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  RunResult r = run(config);
  if (!r.error.empty()) {
    std::cerr << r.error << "\n";
    return r.exit_code;
  }
  try {
    if (config.output.empty()) {
      std::cout << r.output;
    } else {
      write_file_atomic(config.output, r.output);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return r.exit_code;
}

}  // namespace curvlab::cli
