#include "dmmf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dmmf/bounds.hpp"
#include "dmmf/config.hpp"
#include "dmmf/errors.hpp"
#include "dmmf/format.hpp"
#include "dmmf/ideal_utility.hpp"
#include "dmmf/simulator.hpp"

namespace dmmf {

namespace {

namespace fs = std::filesystem;

fs::path output_path(const RunOptions& opt, const std::string& name) {
  const fs::path p(name);
  return p.is_absolute() ? p : fs::path(opt.out_dir) / p;
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError(path.string() + ": cannot open for writing");
  return f;
}

std::string real_or_nan(double x) { return std::isfinite(x) ? format_real(x) : std::string("nan"); }

double v_star(const MarkovValueModel& model, double beta) {
  const auto pi = stationary_distribution(model);
  return ideal_utility(steady_state_mixture(model, pi), beta).value;
}

void write_ideal_curve(std::ostream& f, const StateLaw& law, const std::vector<double>& grid,
                       std::vector<std::pair<double, double>>& curve) {
  f << "beta,v_star,threshold_or_policy\n";
  for (double b : grid) {
    const auto res = ideal_utility(law, b);
    f << format_real(b) << ',' << format_real(res.value) << ',' << describe(res.policy) << '\n';
    curve.emplace_back(b, res.value);
  }
}

// Concavity over the increasing part of the grid.
void report_concavity(const std::vector<std::pair<double, double>>& curve, std::ostream& out) {
  if (curve.size() < 3) return;
  const auto rep = verify_concavity(curve);
  out << "concavity_worst_violation=" << format_real(std::max(0.0, rep.worst_concavity)) << '\n';
  out << "monotonicity_worst_decrease=" << format_real(std::max(0.0, rep.worst_decrease)) << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const ModelError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const BoundInapplicable& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
}

} // namespace

int cmd_simulate(const std::string& config_path, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto cfg = load_config(config_path);
    if (opt.seed) cfg.master_seed = *opt.seed;
    if (opt.reps) {
      if (*opt.reps < 1) throw ConfigError("--reps must be >= 1");
      cfg.replications = *opt.reps;
    }
    const auto summary_path = output_path(opt, cfg.outputs.summary);
    auto summary_file = open_output(summary_path);
    std::optional<std::ofstream> trace_file;
    if (cfg.outputs.trace) {
      trace_file = open_output(output_path(opt, *cfg.outputs.trace));
      write_trace_header(*trace_file);
    }
    std::optional<std::ofstream> curve_file;
    if (cfg.outputs.curve) curve_file = open_output(output_path(opt, *cfg.outputs.curve));

    TraceCallback on_trace;
    if (trace_file)
      on_trace = [&](std::int64_t rep, const EpisodeTrace& tr) { write_trace_rows(*trace_file, tr, rep); };
    const auto sum = run_replications(cfg.scenario, cfg.replications, cfg.master_seed, opt.jobs, on_trace);

    std::ostringstream s;
    s << "replications=" << sum.replications << '\n';
    s << "horizon=" << sum.horizon << '\n';
    s << "master_seed=" << cfg.master_seed << '\n';
    for (std::size_t i = 0; i < sum.agents.size(); ++i) {
      const auto& a = sum.agents[i];
      const std::string k = "agent." + std::to_string(i) + ".";
      s << k << "strategy=" << strategy_name(cfg.scenario.agents[i].strategy) << '\n';
      s << k << "alpha=" << format_real(cfg.scenario.agents[i].alpha.to_double()) << '\n';
      s << k << "util_mean=" << format_real(a.util_mean) << '\n';
      s << k << "util_se=" << format_real(a.util_se) << '\n';
      s << k << "wins_mean=" << format_real(a.wins_mean) << '\n';
      s << k << "blk_mean=" << format_real(a.blk_mean) << '\n';
      s << k << "requests_mean=" << format_real(a.requests_mean) << '\n';
    }
    s << "invariant_violations=" << sum.invariant_violations << '\n';
    s << "invariant.lemma=" << sum.invariants.lemma << '\n';
    s << "invariant.identity=" << sum.invariants.identity << '\n';
    s << "invariant.conservation=" << sum.invariants.conservation << '\n';
    s << "invariant.window=" << sum.invariants.window << '\n';
    s << "invariant.window_other=" << sum.invariants.window_other << '\n';

    if (!cfg.bounds.kinds.empty()) {
      const std::size_t f = cfg.bounds.focal;
      const auto& agent = cfg.scenario.agents[f];
      const double alpha = agent.alpha.to_double();
      std::optional<double> r;
      if (cfg.scenario.mode == MechanismMode::reusable) r = cfg.scenario.r.to_double();
      s << "bound_focal=" << f << '\n';
      for (const auto kind : cfg.bounds.kinds) {
        const std::string k = "bound_" + bound_kind_name(kind) + "_";
        try {
          const auto params = derive_params(kind, *agent.model, alpha, cfg.bounds.overrides, r);
          const auto rep = evaluate_bound(kind, params);
          const double vs = v_star(*agent.model, rep.v_star_beta);
          const double per_round = rep.coefficient * vs;
          s << k << "params=" << describe(params) << '\n';
          s << k << "coeff=" << format_real(rep.coefficient) << '\n';
          s << k << "side=" << (rep.side == BoundSide::lower_guarantee ? "lower_guarantee" : "upper_impossibility")
            << '\n';
          s << k << "v_star=" << format_real(vs) << '\n';
          s << k << "per_round=" << format_real(per_round) << '\n';
          s << k << "ratio=" << real_or_nan(sum.agents[f].util_mean / per_round) << '\n';
          s << k << "status=" << (rep.vacuous ? "vacuous" : "ok") << '\n';
        } catch (const BoundInapplicable& e) {
          s << k << "status=inapplicable: " << e.what() << '\n';
        }
      }
    }
    summary_file << s.str();
    out << s.str();

    if (curve_file) {
      const auto& model = *cfg.scenario.agents[cfg.bounds.focal < cfg.scenario.agents.size() ? cfg.bounds.focal : 0].model;
      std::vector<double> grid;
      for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
      std::vector<std::pair<double, double>> curve;
      write_ideal_curve(*curve_file, steady_state_mixture(model, stationary_distribution(model)), grid, curve);
    }
    if (sum.invariant_violations > 0) {
      err << "pathwise invariant violated " << sum.invariant_violations << " time(s)\n";
      return static_cast<int>(exit_invariant);
    }
    return static_cast<int>(exit_ok);
  });
}

int cmd_ideal(const std::string& law_spec, const std::string& grid_text, const std::string& out_name,
              const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::string text = law_spec;
    std::error_code ec;
    if (fs::is_regular_file(law_spec, ec)) {
      std::ifstream in(law_spec);
      std::ostringstream all;
      for (std::string line; std::getline(in, line);) {
        const auto hash = line.find('#');
        all << (hash == std::string::npos ? line : line.substr(0, hash)) << ' ';
      }
      text = all.str();
    }
    const StateLaw law = [&] {
      try {
        return parse_state_law(text);
      } catch (const ModelError& e) {
        throw ConfigError(e.what());
      }
    }();
    const auto grid = parse_grid(grid_text);
    for (double b : grid)
      if (!(b >= 0 && b <= 1)) throw ConfigError("grid value " + format_real(b) + " lies outside [0, 1]");
    const auto path = output_path(opt, out_name);
    auto f = open_output(path);
    std::vector<std::pair<double, double>> curve;
    write_ideal_curve(f, law, grid, curve);
    out << "wrote " << curve.size() << " rows to " << path.string() << '\n';
    bool increasing = true;
    for (std::size_t i = 1; i < curve.size(); ++i) increasing &= curve[i].first > curve[i - 1].first;
    if (increasing) report_concavity(curve, out);
    return static_cast<int>(exit_ok);
  });
}

int cmd_bounds(const std::string& params_path, const std::string& out_name, const RunOptions& opt,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(params_path);
    if (!in) throw ConfigError(params_path + ":0: cannot open file");
    const auto spec = parse_bound_table(in, params_path);
    const auto rows = evaluate_bound_table(spec);
    const auto path = output_path(opt, out_name);
    auto f = open_output(path);
    f << "kind,params,coefficient,applicability\n";
    for (const auto& row : rows) {
      f << bound_kind_name(row.kind) << ',' << describe(row.params) << ',';
      if (row.report) f << format_real(row.report->coefficient);
      std::string why = row.applicability;
      for (auto& c : why)
        if (c == ',') c = ';';
      f << ',' << why << '\n';
    }
    out << "wrote " << rows.size() << " rows to " << path.string() << '\n';
    return static_cast<int>(exit_ok);
  });
}

int cmd_dump_config(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << dump_config(load_config(config_path));
    return static_cast<int>(exit_ok);
  });
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Dynamic max-min fair allocation toolkit"};
  app.require_subcommand(1);

  RunOptions opt;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  std::int64_t reps = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  auto* reps_opt = app.add_option("--reps", reps, "Replications (overrides the config)");
  app.add_option("--jobs", opt.jobs, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", opt.out_dir, "Directory for relative output paths");
  for (auto* o : {seed_opt, reps_opt}) o->configurable(false);

  std::string config_path, law_spec, grid, params_path;
  std::string ideal_out = "ideal.csv", bounds_out = "bounds.csv";

  auto* sim = app.add_subcommand("simulate", "Run an experiment file");
  sim->add_option("config", config_path, "Experiment file")->required();
  sim->fallthrough();

  auto* ideal = app.add_subcommand("ideal", "Tabulate the ideal-utility curve of a value law");
  ideal->add_option("spec", law_spec, "Law text (e.g. \"uniform 0 1\") or a file holding it")->required();
  ideal->add_option("--grid", grid, "Beta grid a:step:b or a comma list")->required();
  ideal->add_option("--out", ideal_out, "Output CSV (relative to --out-dir)");
  ideal->fallthrough();

  auto* bounds = app.add_subcommand("bounds", "Tabulate bound coefficients from a parameter file");
  bounds->add_option("params", params_path, "Parameter file")->required();
  bounds->add_option("--out", bounds_out, "Output CSV (relative to --out-dir)");
  bounds->fallthrough();

  auto* dump = app.add_subcommand("dump-config", "Print the canonical form of an experiment file");
  dump->add_option("config", config_path, "Experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? static_cast<int>(exit_ok) : static_cast<int>(exit_config);
  }
  if (seed_opt->count()) opt.seed = seed;
  if (reps_opt->count()) opt.reps = reps;

  if (*sim) return cmd_simulate(config_path, opt, std::cout, std::cerr);
  if (*ideal) return cmd_ideal(law_spec, grid, ideal_out, opt, std::cout, std::cerr);
  if (*bounds) return cmd_bounds(params_path, bounds_out, opt, std::cout, std::cerr);
  return cmd_dump_config(config_path, std::cout, std::cerr);
}

} // namespace dmmf
