#include "flipcli/config.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "flip/csv.hpp"
#include "flip/error.hpp"

namespace flipcli {

using nlohmann::json;

namespace {

template <class T>
void put(json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

template <class T>
void get(const json& j, const char* key, std::optional<T>& value, std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    value = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(std::string("config key '") + key + "' has the wrong type");
  }
}

const std::vector<std::string> kKeys = {
    "mode", "rule",  "rule-file", "init",        "init-file", "seed",       "out",   "graph-out",
    "rtol", "atol",  "method",    "step",        "n",         "t-end",      "steps", "checkpoints",
    "grid", "class", "replicates", "start",      "theta",     "offdiag"};

std::vector<double> parse_numbers(const std::string& list, const std::string& context) {
  std::vector<double> out;
  for (const auto& field : flip::csv::split(list)) {
    try {
      out.push_back(flip::csv::parse_double(field));
    } catch (const flip::ValidationError&) {
      throw flip::ValidationError("malformed number '" + field + "' in " + context);
    }
  }
  return out;
}

bool needs_rule(const std::string& mode) { return mode != "periodic-demo"; }
bool needs_init(const std::string& mode) {
  return mode == "simulate" || mode == "trajectory" || mode == "transference";
}
bool stochastic(const std::string& mode) { return mode == "simulate" || mode == "transference"; }

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) {
  json j = json::object();
  j["mode"] = cfg.mode;
  put(j, "rule", cfg.rule);
  put(j, "rule-file", cfg.rule_file);
  put(j, "init", cfg.init);
  put(j, "init-file", cfg.init_file);
  put(j, "seed", cfg.seed);
  put(j, "out", cfg.out);
  put(j, "graph-out", cfg.graph_out);
  put(j, "rtol", cfg.rtol);
  put(j, "atol", cfg.atol);
  put(j, "method", cfg.method);
  put(j, "step", cfg.step);
  put(j, "n", cfg.n);
  put(j, "t-end", cfg.t_end);
  put(j, "steps", cfg.steps);
  put(j, "checkpoints", cfg.checkpoints);
  put(j, "grid", cfg.grid);
  put(j, "class", cfg.cls);
  put(j, "replicates", cfg.replicates);
  put(j, "start", cfg.start);
  put(j, "theta", cfg.theta);
  put(j, "offdiag", cfg.offdiag);
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text, std::vector<std::string>& errors) {
  ExperimentConfig cfg;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    errors.push_back(std::string("config file is not valid JSON: ") + e.what());
    return cfg;
  }
  if (!j.is_object()) {
    errors.push_back("config file must hold a JSON object");
    return cfg;
  }
  for (const auto& item : j.items())
    if (std::find(kKeys.begin(), kKeys.end(), item.key()) == kKeys.end())
      errors.push_back("unknown config key '" + item.key() + "'");
  std::optional<std::string> mode;
  get(j, "mode", mode, errors);
  if (mode) cfg.mode = *mode;
  get(j, "rule", cfg.rule, errors);
  get(j, "rule-file", cfg.rule_file, errors);
  get(j, "init", cfg.init, errors);
  get(j, "init-file", cfg.init_file, errors);
  get(j, "seed", cfg.seed, errors);
  get(j, "out", cfg.out, errors);
  get(j, "graph-out", cfg.graph_out, errors);
  get(j, "rtol", cfg.rtol, errors);
  get(j, "atol", cfg.atol, errors);
  get(j, "method", cfg.method, errors);
  get(j, "step", cfg.step, errors);
  get(j, "n", cfg.n, errors);
  get(j, "t-end", cfg.t_end, errors);
  get(j, "steps", cfg.steps, errors);
  get(j, "checkpoints", cfg.checkpoints, errors);
  get(j, "grid", cfg.grid, errors);
  get(j, "class", cfg.cls, errors);
  get(j, "replicates", cfg.replicates, errors);
  get(j, "start", cfg.start, errors);
  get(j, "theta", cfg.theta, errors);
  get(j, "offdiag", cfg.offdiag, errors);
  return cfg;
}

ExperimentConfig merge(const ExperimentConfig& base, const ExperimentConfig& flags) {
  ExperimentConfig out = base;
  if (!flags.mode.empty()) out.mode = flags.mode;
  auto over = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  over(out.rule, flags.rule);
  over(out.rule_file, flags.rule_file);
  over(out.init, flags.init);
  over(out.init_file, flags.init_file);
  over(out.seed, flags.seed);
  over(out.out, flags.out);
  over(out.graph_out, flags.graph_out);
  over(out.rtol, flags.rtol);
  over(out.atol, flags.atol);
  over(out.method, flags.method);
  over(out.step, flags.step);
  over(out.n, flags.n);
  over(out.t_end, flags.t_end);
  over(out.steps, flags.steps);
  over(out.checkpoints, flags.checkpoints);
  over(out.grid, flags.grid);
  over(out.cls, flags.cls);
  over(out.replicates, flags.replicates);
  over(out.start, flags.start);
  over(out.theta, flags.theta);
  over(out.offdiag, flags.offdiag);
  return out;
}

flip::StepGraphon parse_init(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw flip::ValidationError("initial graphon '" + spec + "' needs the form NAME:ARGS");
  const std::string family = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1), "initial graphon '" + spec + "'");
  if (family == "const" && args.size() == 1) return flip::constant_graphon(args[0]);
  if (family == "twoblock" && args.size() == 2) return flip::symmetric_two_block(args[0], args[1]);
  if (family == "block2" && args.size() == 4)
    return flip::two_block(args[0], args[1], args[2], args[3]);
  throw flip::ValidationError("unknown initial graphon '" + spec +
                              "' (use const:d, twoblock:x,y or block2:mu,d11,d22,d12)");
}

flip::Rule load_rule(const ExperimentConfig& cfg) {
  if (cfg.rule_file) return flip::read_rule_file(*cfg.rule_file);
  if (cfg.rule) return flip::builtin_rule(*cfg.rule);
  throw flip::ValidationError("no rule given (use --rule or --rule-file)");
}

flip::StepGraphon load_init(const ExperimentConfig& cfg) {
  if (cfg.init_file) return flip::read_graphon_file(*cfg.init_file);
  if (cfg.init) return parse_init(*cfg.init);
  throw flip::ValidationError("no initial graphon given (use --init or --init-file)");
}

flip::IntegratorOptions integrator_options(const ExperimentConfig& cfg) {
  flip::IntegratorOptions opts;
  if (cfg.method) {
    if (*cfg.method == "rk45") {
      opts.method = flip::IntegratorMethod::kRk45Adaptive;
    } else if (*cfg.method == "rk4") {
      opts.method = flip::IntegratorMethod::kRk4Fixed;
    } else {
      throw flip::ValidationError("--method must be rk45 or rk4");
    }
  }
  if (cfg.rtol) opts.rtol = *cfg.rtol;
  if (cfg.atol) opts.atol = *cfg.atol;
  if (cfg.step) opts.step = *cfg.step;
  flip::validate_options(opts);
  return opts;
}

std::vector<std::string> validate(const ExperimentConfig& cfg) {
  std::vector<std::string> errors;
  const std::string& mode = cfg.mode;
  if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end()) {
    errors.push_back(mode.empty() ? "no subcommand given" : "unknown subcommand '" + mode + "'");
    return errors;
  }
  auto check = [&errors](auto&& fn) {
    try {
      fn();
    } catch (const flip::ValidationError& e) {
      errors.push_back(e.what());
    } catch (const flip::RuntimeFault& e) {
      errors.push_back(e.what());
    }
  };

  std::optional<flip::Rule> rule;
  if (needs_rule(mode)) {
    if (cfg.rule && cfg.rule_file) errors.push_back("give only one of --rule and --rule-file");
    else check([&] { rule = load_rule(cfg); });
  }
  if (needs_init(mode)) {
    if (cfg.init && cfg.init_file) errors.push_back("give only one of --init and --init-file");
    else check([&] { load_init(cfg); });
  }
  if (stochastic(mode) && !cfg.seed) errors.push_back("--seed is required for " + mode);
  check([&] { integrator_options(cfg); });
  if (cfg.replicates && *cfg.replicates < 1) errors.push_back("--replicates must be at least 1");
  if (cfg.checkpoints && *cfg.checkpoints < 1) errors.push_back("--checkpoints must be at least 1");
  if (cfg.grid && *cfg.grid < 2) errors.push_back("--grid must be at least 2");
  if (cfg.t_end && !std::isfinite(*cfg.t_end)) errors.push_back("--t-end must be finite");

  if (mode == "simulate" || mode == "transference") {
    if (!cfg.n) {
      errors.push_back("--n is required for " + mode);
    } else {
      if (mode == "transference" && *cfg.n < 100) errors.push_back("--n must be at least 100");
      if (rule && *cfg.n < rule->order())
        errors.push_back("--n must be at least the rule order " + std::to_string(rule->order()));
    }
  }
  if (mode == "simulate") {
    if (cfg.steps.has_value() == cfg.t_end.has_value())
      errors.push_back("simulate needs exactly one of --steps and --t-end");
    if (cfg.steps && *cfg.steps < 0) errors.push_back("--steps must be non-negative");
    if (cfg.t_end && *cfg.t_end < 0) errors.push_back("--t-end must be non-negative");
  }
  if (mode == "trajectory") {
    if (!cfg.t_end) errors.push_back("--t-end is required for trajectory");
    if (cfg.checkpoints && *cfg.checkpoints < 2)
      errors.push_back("trajectory needs --checkpoints >= 2 (the count includes t = 0)");
  }
  if (mode == "transference") {
    if (!cfg.t_end) errors.push_back("--t-end is required for transference");
    else if (!(*cfg.t_end > 0)) errors.push_back("--t-end must be positive");
  }
  if (mode == "velocity-field") {
    if (cfg.cls && *cfg.cls != "two-block-sym" && *cfg.cls != "diag-pair")
      errors.push_back("--class must be two-block-sym or diag-pair");
    if (cfg.offdiag && !(*cfg.offdiag >= 0 && *cfg.offdiag <= 1))
      errors.push_back("--offdiag must lie in [0,1]");
  }
  if (mode == "periodic-demo") {
    if (cfg.t_end && !(*cfg.t_end > 0)) errors.push_back("--t-end must be positive");
    if (cfg.checkpoints && *cfg.checkpoints < 2) errors.push_back("periodic-demo needs --checkpoints >= 2");
    if (cfg.theta && !(*cfg.theta > 0 && *cfg.theta < 1e-4))
      errors.push_back("--theta must lie in (0, 1e-4)");
    if (cfg.start) {
      check([&] {
        if (parse_numbers(*cfg.start, "--start").size() != 2)
          throw flip::ValidationError("--start needs two numbers x,y");
      });
    }
  }
  return errors;
}

}  // namespace flipcli
