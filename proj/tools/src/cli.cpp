#include "flipcli/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "flip/csv.hpp"
#include "flip/error.hpp"
#include "flip/flip_sim.hpp"
#include "flip/planar.hpp"
#include "flip/trajectory.hpp"
#include "flip/velocity.hpp"
#include "flipcli/config.hpp"

namespace flipcli {

namespace {

using flip::csv::format;

// Raw flag storage; only options with count() > 0 reach the config.
struct FlagValues {
  std::string rule, rule_file, init, init_file, out, graph_out, method, cls, start;
  std::string config, write_config;
  std::uint64_t seed = 0;
  double rtol = 0, atol = 0, step = 0, t_end = 0, theta = 0, offdiag = 0;
  int n = 0, checkpoints = 0, grid = 0, replicates = 0;
  std::int64_t steps = 0;
};

struct Bound {
  CLI::Option* option;
  std::function<void(ExperimentConfig&)> apply;
};

class Parser {
 public:
  Parser() : app_("Flip processes on graphs and their graphon trajectories.", "flipgraph") {
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all", "Help for every subcommand");
    auto* sim = sub("simulate", "Run the discrete flip process and record stepped graphons");
    common(sim, true);
    add(sim, "--n", v_.n, "Number of vertices", [](auto& c, auto& v) { c.n = v.n; });
    add(sim, "--steps", v_.steps, "Total number of steps", [](auto& c, auto& v) { c.steps = v.steps; });
    add(sim, "--t-end", v_.t_end, "Rescaled end time (floor(t n^2) steps)",
        [](auto& c, auto& v) { c.t_end = v.t_end; });
    checkpoints(sim, "Number of snapshots after step 0 (default 10)");
    replicates(sim);
    add(sim, "--graph-out", v_.graph_out, "Prefix for final edge-list and part files",
        [](auto& c, auto& v) { c.graph_out = v.graph_out; });

    auto* traj = sub("trajectory", "Integrate the graphon trajectory");
    common(traj, true);
    add(traj, "--t-end", v_.t_end, "End time (negative integrates backward)",
        [](auto& c, auto& v) { c.t_end = v.t_end; });
    checkpoints(traj, "Number of rows including t = 0 (default 11)");

    auto* tr = sub("transference", "Compare simulation and trajectory in cut norm");
    common(tr, true);
    add(tr, "--n", v_.n, "Number of vertices", [](auto& c, auto& v) { c.n = v.n; });
    add(tr, "--t-end", v_.t_end, "Rescaled end time", [](auto& c, auto& v) { c.t_end = v.t_end; });
    checkpoints(tr, "Number of comparison times after t = 0 (default 10)");
    replicates(tr);

    auto* fp = sub("fixed-points", "Constant fixed points of a rule");
    common(fp, false);
    grid(fp, "Scan grid size (default 1001)");

    auto* vf = sub("velocity-field", "Velocity on a two-parameter family of two-block graphons");
    common(vf, false);
    grid(vf, "Grid points per axis (default 21)");
    add(vf, "--class", v_.cls, "two-block-sym (x inside, y across) or diag-pair (x, y diagonal)",
        [](auto& c, auto& v) { c.cls = v.cls; });
    add(vf, "--offdiag", v_.offdiag, "Off-diagonal value for diag-pair (default 0.5)",
        [](auto& c, auto& v) { c.offdiag = v.offdiag; });

    auto* pd = sub("periodic-demo", "Planar field with an attracting circle");
    common(pd, false);
    add(pd, "--t-end", v_.t_end, "End time (default 1e5)", [](auto& c, auto& v) { c.t_end = v.t_end; });
    checkpoints(pd, "Number of rows including t = 0 (default 101)");
    add(pd, "--start", v_.start, "Start point x,y (default 0.25,0.8)",
        [](auto& c, auto& v) { c.start = v.start; });
    add(pd, "--theta", v_.theta, "Field scale in (0, 1e-4) (default 5e-5)",
        [](auto& c, auto& v) { c.theta = v.theta; });
  }

  CLI::App& app() { return app_; }

  ExperimentConfig flags() const {
    ExperimentConfig cfg;
    for (auto* s : app_.get_subcommands()) cfg.mode = s->get_name();
    for (const auto& b : bound_)
      if (b.option->count() > 0) b.apply(cfg);
    return cfg;
  }

  std::optional<std::string> config_path() const {
    for (auto* o : config_opts_)
      if (o->count() > 0) return v_.config;
    return std::nullopt;
  }
  std::optional<std::string> write_config_path() const {
    for (auto* o : write_config_opts_)
      if (o->count() > 0) return v_.write_config;
    return std::nullopt;
  }

 private:
  CLI::App* sub(const std::string& name, const std::string& description) {
    return app_.add_subcommand(name, description);
  }

  template <class T, class Fn>
  CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help, Fn fn) {
    CLI::Option* opt = app->add_option(flag, target, help);
    bound_.push_back({opt, [this, fn](ExperimentConfig& c) { fn(c, v_); }});
    return opt;
  }

  void common(CLI::App* app, bool with_init) {
    add(app, "--rule", v_.rule, "Built-in rule name", [](auto& c, auto& v) { c.rule = v.rule; });
    add(app, "--rule-file", v_.rule_file, "Rule JSON file",
        [](auto& c, auto& v) { c.rule_file = v.rule_file; });
    if (with_init) {
      add(app, "--init", v_.init, "const:d | twoblock:x,y | block2:mu,d11,d22,d12",
          [](auto& c, auto& v) { c.init = v.init; });
      add(app, "--init-file", v_.init_file, "Graphon JSON file",
          [](auto& c, auto& v) { c.init_file = v.init_file; });
    }
    add(app, "--seed", v_.seed, "Seed of all random streams", [](auto& c, auto& v) { c.seed = v.seed; });
    add(app, "--out", v_.out, "Output CSV path (default: standard output)",
        [](auto& c, auto& v) { c.out = v.out; });
    add(app, "--rtol", v_.rtol, "Relative tolerance (default 1e-10)",
        [](auto& c, auto& v) { c.rtol = v.rtol; });
    add(app, "--atol", v_.atol, "Absolute tolerance (default 1e-12)",
        [](auto& c, auto& v) { c.atol = v.atol; });
    add(app, "--method", v_.method, "rk45 (adaptive, default) or rk4 (fixed step)",
        [](auto& c, auto& v) { c.method = v.method; });
    add(app, "--step", v_.step, "Step size for rk4 (default 1e-3)",
        [](auto& c, auto& v) { c.step = v.step; });
    config_opts_.push_back(
        app->add_option("--config", v_.config, "JSON config; flags override its values"));
    write_config_opts_.push_back(
        app->add_option("--write-config", v_.write_config, "Write the effective config as JSON"));
  }

  void checkpoints(CLI::App* app, const std::string& help) {
    add(app, "--checkpoints", v_.checkpoints, help,
        [](auto& c, auto& v) { c.checkpoints = v.checkpoints; });
  }
  void replicates(CLI::App* app) {
    add(app, "--replicates", v_.replicates, "Independent replicate runs (default 1)",
        [](auto& c, auto& v) { c.replicates = v.replicates; });
  }
  void grid(CLI::App* app, const std::string& help) {
    add(app, "--grid", v_.grid, help, [](auto& c, auto& v) { c.grid = v.grid; });
  }

 private:
  CLI::App app_;
  FlagValues v_;
  std::vector<Bound> bound_;
  std::vector<CLI::Option*> config_opts_;
  std::vector<CLI::Option*> write_config_opts_;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw flip::ValidationError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw flip::RuntimeFault("cannot write " + path);
  out << text;
  if (!out) throw flip::RuntimeFault("failed writing " + path);
}

std::vector<double> numbers(const std::string& list) {
  std::vector<double> out;
  for (const auto& f : flip::csv::split(list)) out.push_back(flip::csv::parse_double(f));
  return out;
}

std::string run_simulate(const ExperimentConfig& cfg) {
  const flip::Rule rule = load_rule(cfg);
  const flip::StepGraphon W0 = load_init(cfg);
  const int n = *cfg.n;
  const double n2 = static_cast<double>(n) * n;
  const std::int64_t total =
      cfg.steps ? *cfg.steps : static_cast<std::int64_t>(std::floor(*cfg.t_end * n2));
  const int count = cfg.checkpoints.value_or(10);
  std::vector<std::int64_t> marks;
  for (int c = 1; c <= count; ++c) {
    const std::int64_t s = total * c / count;
    if (s > 0 && (marks.empty() || s > marks.back())) marks.push_back(s);
  }
  const int m = W0.part_count();
  std::ostringstream out;
  out << "replicate,step,t,edge_density";
  out << flip::trajectory_csv_header(m).substr(1) << '\n';
  const int reps = cfg.replicates.value_or(1);
  for (int r = 0; r < reps; ++r) {
    flip::RandomStream graph_rng(*cfg.seed, flip::StreamTag::kGraphSample, r);
    const flip::SimGraph G0 = flip::sample_graph_stratified(n, W0, graph_rng);
    const auto result = flip::run(rule, G0, total, marks, *cfg.seed, r);
    const double pairs = 0.5 * n * (n - 1.0);
    for (const auto& snap : result.snapshots) {
      out << r << ',' << snap.step << ',' << format(snap.step / n2) << ','
          << format(snap.edges / pairs);
      for (double v : flip::pack_upper(snap.stepped)) out << ',' << format(v);
      out << '\n';
    }
    if (cfg.graph_out) {
      std::ostringstream edges, parts;
      result.final_graph.write_edge_list(edges);
      result.final_graph.write_parts(parts);
      const std::string prefix = *cfg.graph_out + "_r" + std::to_string(r);
      write_text(prefix + ".edges", edges.str());
      write_text(prefix + ".parts", parts.str());
    }
  }
  return out.str();
}

std::string run_trajectory(const ExperimentConfig& cfg) {
  const flip::Rule rule = load_rule(cfg);
  const flip::StepGraphon W0 = load_init(cfg);
  const int count = cfg.checkpoints.value_or(11);
  std::vector<double> times;
  for (int c = 0; c < count; ++c) times.push_back(*cfg.t_end * c / (count - 1));
  if (*cfg.t_end == 0.0) times.resize(1);
  const auto traj = flip::integrate(rule, W0, times, integrator_options(cfg));
  std::ostringstream out;
  flip::write_trajectory_csv(out, traj);
  return out.str();
}

std::string run_transference(const ExperimentConfig& cfg) {
  const flip::Rule rule = load_rule(cfg);
  const flip::StepGraphon W0 = load_init(cfg);
  const auto opts = integrator_options(cfg);
  const int reps = cfg.replicates.value_or(1);
  std::ostringstream out;
  for (int r = 0; r < reps; ++r) {
    const auto report = flip::transference_experiment(rule, W0, *cfg.n, *cfg.t_end,
                                                      cfg.checkpoints.value_or(10), *cfg.seed, opts, r);
    std::ostringstream block;
    flip::write_transference_csv(block, report);
    if (reps == 1) {
      out << block.str();
      continue;
    }
    std::istringstream lines(block.str());
    std::string line;
    std::getline(lines, line);
    if (r == 0) out << "replicate," << line << '\n';
    while (std::getline(lines, line)) out << r << ',' << line << '\n';
  }
  return out.str();
}

std::string run_fixed_points(const ExperimentConfig& cfg) {
  const auto roots = flip::constant_fixed_points(load_rule(cfg), cfg.grid.value_or(1001));
  std::ostringstream out;
  for (double r : roots) out << format(r) << '\n';
  return out.str();
}

std::string run_velocity_field(const ExperimentConfig& cfg) {
  const flip::VelocityOperator op(load_rule(cfg));
  const int g = cfg.grid.value_or(21);
  const bool diag_pair = cfg.cls.value_or("two-block-sym") == "diag-pair";
  const double across = cfg.offdiag.value_or(0.5);
  std::ostringstream out;
  out << "x,y,vx,vy\n";
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double x = static_cast<double>(a) / (g - 1), y = static_cast<double>(b) / (g - 1);
      const flip::StepGraphon W =
          diag_pair ? flip::two_block(0.5, x, y, across) : flip::symmetric_two_block(x, y);
      const auto v = op(W);
      const double vx = v.value(0, 0);
      const double vy = diag_pair ? v.value(1, 1) : v.value(0, 1);
      out << format(x) << ',' << format(y) << ',' << format(vx) << ',' << format(vy) << '\n';
    }
  return out.str();
}

std::string run_periodic_demo(const ExperimentConfig& cfg) {
  flip::PlanarParams params;
  if (cfg.theta) params.theta = *cfg.theta;
  flip::Vec2 start{0.25, 0.8};
  if (cfg.start) {
    const auto xy = numbers(*cfg.start);
    start = {xy[0], xy[1]};
  }
  const auto trace = flip::planar_demo(start, cfg.t_end.value_or(1e5), cfg.checkpoints.value_or(101),
                                       params, integrator_options(cfg));
  std::ostringstream out;
  flip::write_planar_csv(out, trace);
  return out.str();
}

std::string dispatch(const ExperimentConfig& cfg) {
  if (cfg.mode == "simulate") return run_simulate(cfg);
  if (cfg.mode == "trajectory") return run_trajectory(cfg);
  if (cfg.mode == "transference") return run_transference(cfg);
  if (cfg.mode == "fixed-points") return run_fixed_points(cfg);
  if (cfg.mode == "velocity-field") return run_velocity_field(cfg);
  return run_periodic_demo(cfg);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser parser;
  CLI::App& app = parser.app();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    std::vector<std::string> errors;
    ExperimentConfig cfg;
    if (const auto path = parser.config_path()) {
      try {
        cfg = config_from_json(read_text(*path), errors);
      } catch (const flip::ValidationError& e) {
        errors.push_back(e.what());
      }
    }
    cfg = merge(cfg, parser.flags());
    for (auto& e : validate(cfg)) errors.push_back(std::move(e));
    if (!errors.empty()) {
      for (const auto& e : errors) err << "error: " << e << '\n';
      err << "Run with --help for usage.\n";
      return kExitValidation;
    }
    if (const auto path = parser.write_config_path()) write_text(*path, config_to_json(cfg));
    const std::string text = dispatch(cfg);
    if (cfg.out) write_text(*cfg.out, text);
    else out << text;
    return kExitOk;
  } catch (const flip::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const flip::RuntimeFault& e) {
    err << "runtime fault: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime fault: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace flipcli
