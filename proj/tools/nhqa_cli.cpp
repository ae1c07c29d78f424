// Command-line front end: single runs, figure presets, parameter sweeps,
// complexity-scaling studies, and analytic-vs-numeric comparison reports.
// Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 I/O failure.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nhqa/nhqa.hpp"

namespace {

using nhqa::complexd;
using json = nlohmann::ordered_json;

class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  double g = 2.0;
  double delta = 0.0;
  double tau = 100.0;
  int log2_n = 10;
  nhqa::ScheduleKind kind = nhqa::ScheduleKind::Linear;
  nhqa::IntegratorConfig integrator;
  std::string csv_out;  // empty = subcommand default
  bool emit_spectra = true;
};

// Flag values land in optionals so a config file can fill the gaps:
// precedence is flag > config file > NHQA_DEFAULT_TOL (rel_tol only) > default.
struct FlagSet {
  std::optional<std::string> schedule;
  std::optional<double> g, delta, tau;
  std::optional<int> log2_n, samples;
  std::optional<double> rel_tol, abs_tol;
  std::optional<std::string> out;
  std::string config_path;
};

double parse_strict_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument(what + ": cannot parse '" + text + "' as a number");
  return v;
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', pos), csv.size());
    values.push_back(parse_strict_double(csv.substr(pos, comma - pos), "--grid"));
    pos = comma + 1;
  }
  return values;
}

nhqa::ScheduleKind parse_schedule(const std::string& name) {
  if (name == "linear") return nhqa::ScheduleKind::Linear;
  if (name == "nonlinear") return nhqa::ScheduleKind::NonlinearArctan;
  throw std::invalid_argument("--schedule must be linear or nonlinear");
}

const char* schedule_name(nhqa::ScheduleKind kind) {
  return kind == nhqa::ScheduleKind::Linear ? "linear" : "nonlinear";
}

nhqa::Picture parse_picture(const std::string& name) {
  if (name == "bare") return nhqa::Picture::Bare;
  if (name == "phase_factored") return nhqa::Picture::PhaseFactored;
  throw std::invalid_argument("integrator.picture must be bare or phase_factored");
}

const char* picture_name(nhqa::Picture p) {
  return p == nhqa::Picture::Bare ? "bare" : "phase_factored";
}

double env_default_rel_tol() {
  const char* raw = std::getenv("NHQA_DEFAULT_TOL");
  if (raw == nullptr) return nhqa::IntegratorConfig{}.rel_tol;
  const double v = parse_strict_double(raw, "NHQA_DEFAULT_TOL");
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("NHQA_DEFAULT_TOL must be a positive finite number");
  return v;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok) throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
  }
}

// JSON document mirrors RunConfig: params{g,delta,tau,log2_n}, schedule_kind,
// integrator{rel_tol,abs_tol,max_step,output_samples,picture}, outputs{csv},
// emit_spectra.  Unknown keys are rejected.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  json doc = json::parse(in);  // parse_error propagates as usage failure
  require_keys(doc, {"params", "schedule_kind", "integrator", "outputs", "emit_spectra"},
               "top level");
  if (doc.contains("params")) {
    const json& p = doc["params"];
    require_keys(p, {"g", "delta", "tau", "log2_n"}, "params");
    if (p.contains("g")) cfg.g = p["g"].get<double>();
    if (p.contains("delta")) cfg.delta = p["delta"].get<double>();
    if (p.contains("tau")) cfg.tau = p["tau"].get<double>();
    if (p.contains("log2_n")) cfg.log2_n = p["log2_n"].get<int>();
  }
  if (doc.contains("schedule_kind")) cfg.kind = parse_schedule(doc["schedule_kind"].get<std::string>());
  if (doc.contains("integrator")) {
    const json& i = doc["integrator"];
    require_keys(i, {"rel_tol", "abs_tol", "max_step", "output_samples", "picture"}, "integrator");
    if (i.contains("rel_tol")) cfg.integrator.rel_tol = i["rel_tol"].get<double>();
    if (i.contains("abs_tol")) cfg.integrator.abs_tol = i["abs_tol"].get<double>();
    if (i.contains("max_step")) cfg.integrator.max_step = i["max_step"].get<double>();
    if (i.contains("output_samples")) cfg.integrator.output_samples = i["output_samples"].get<int>();
    if (i.contains("picture")) cfg.integrator.picture = parse_picture(i["picture"].get<std::string>());
  }
  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    require_keys(o, {"csv"}, "outputs");
    if (o.contains("csv")) cfg.csv_out = o["csv"].get<std::string>();
  }
  if (doc.contains("emit_spectra")) cfg.emit_spectra = doc["emit_spectra"].get<bool>();
}

RunConfig resolve(const FlagSet& flags, const std::string& default_out) {
  RunConfig cfg;
  cfg.integrator.rel_tol = env_default_rel_tol();
  if (!flags.config_path.empty()) apply_config_file(cfg, flags.config_path);
  if (flags.schedule) cfg.kind = parse_schedule(*flags.schedule);
  if (flags.g) cfg.g = *flags.g;
  if (flags.delta) cfg.delta = *flags.delta;
  if (flags.tau) cfg.tau = *flags.tau;
  if (flags.log2_n) cfg.log2_n = *flags.log2_n;
  if (flags.samples) cfg.integrator.output_samples = *flags.samples;
  if (flags.rel_tol) cfg.integrator.rel_tol = *flags.rel_tol;
  if (flags.abs_tol) cfg.integrator.abs_tol = *flags.abs_tol;
  if (flags.out) cfg.csv_out = *flags.out;
  if (cfg.csv_out.empty()) cfg.csv_out = default_out;
  return cfg;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["params"] = {{"g", cfg.g}, {"delta", cfg.delta}, {"tau", cfg.tau}, {"log2_n", cfg.log2_n}};
  j["schedule_kind"] = schedule_name(cfg.kind);
  j["integrator"] = {{"rel_tol", cfg.integrator.rel_tol},
                     {"abs_tol", cfg.integrator.abs_tol},
                     {"max_step", cfg.integrator.max_step},
                     {"output_samples", cfg.integrator.output_samples},
                     {"picture", picture_name(cfg.integrator.picture)}};
  j["outputs"] = {{"csv", cfg.csv_out}};
  j["emit_spectra"] = cfg.emit_spectra;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw io_error("write failed: " + path);
}

// LZ parameter generalized through the crossing rate: nu = sin^2(alpha) /
// (4 h0 f'|_{f=1/2}); for the linear profile this is exactly sin^2(alpha)/(4 gamma).
complexd effective_nu(const nhqa::AnnealParams& p, const nhqa::Schedule& s) {
  const complexd gamma_eff = p.h0 * nhqa::profile_rate(s, 0.5);
  return p.sin2_alpha / (4.0 * gamma_eff);
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_run(const FlagSet& flags) {
  const RunConfig cfg = resolve(flags, "trajectory.csv");
  const nhqa::AnnealParams p = nhqa::make_params(cfg.g, cfg.delta, cfg.tau, cfg.log2_n);
  const nhqa::Schedule s = nhqa::make_schedule(cfg.kind, p);
  const nhqa::Trajectory tr = nhqa::integrate(p, s, cfg.integrator);

  std::ostringstream csv;
  nhqa::write_trajectory_csv(csv, tr, cfg.emit_spectra);
  write_file(cfg.csv_out, csv.str());

  const auto [t_min, gap] = nhqa::min_gap_scan(p, s, 2001);
  const complexd nu = effective_nu(p, s);

  json out;
  out["command"] = "run";
  out["config"] = config_json(cfg);
  json results;
  results["p_tau"] = tr.final_transition();
  results["p_surv"] = tr.final_survival();
  results["p_marked"] = nhqa::marked_state_probability(p, tr.c0.back(), tr.c1.back());
  results["min_gap"] = gap;
  results["t_min_gap"] = t_min;
  results["nu"] = {{"re", nu.real()}, {"im", nu.imag()}};
  if (cfg.delta == 0.0 && cfg.kind == nhqa::ScheduleKind::Linear)
    results["lz_prediction"] = nhqa::landau_zener_probability(p);
  if (cfg.delta > 0.0) results["nqa_time_estimate"] = nhqa::nqa_time_estimate(p);
  out["results"] = results;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_figure(const std::string& id, const FlagSet& flags) {
  FlagSet pinned = flags;
  pinned.out = flags.out.value_or(id + ".csv");
  RunConfig cfg = resolve(pinned, id + ".csv");
  if (id == "fig1_left") {
    cfg.kind = nhqa::ScheduleKind::Linear;
    cfg.g = 2.0; cfg.delta = 0.0; cfg.tau = 1.5e4; cfg.log2_n = 40;
  } else if (id == "fig1_right") {
    cfg.kind = nhqa::ScheduleKind::Linear;
    cfg.g = 2.0; cfg.delta = 0.0025; cfg.tau = 1.5e4; cfg.log2_n = 40;
  } else if (id == "fig2") {
    cfg.kind = nhqa::ScheduleKind::NonlinearArctan;
    cfg.g = 2.0; cfg.delta = 1e-4; cfg.tau = 5e4; cfg.log2_n = 40;
  } else if (id == "fig3") {
    cfg.kind = nhqa::ScheduleKind::NonlinearArctan;
    cfg.g = 2.0; cfg.delta = 7.5e-5; cfg.tau = 5.5e4; cfg.log2_n = 40;
  } else {
    throw std::invalid_argument("--figure must be one of fig1_left, fig1_right, fig2, fig3");
  }

  const nhqa::AnnealParams p = nhqa::make_params(cfg.g, cfg.delta, cfg.tau, cfg.log2_n);
  const nhqa::Schedule s = nhqa::make_schedule(cfg.kind, p);
  const nhqa::Trajectory tr = nhqa::integrate(p, s, cfg.integrator);

  std::ostringstream csv;
  nhqa::write_trajectory_csv(csv, tr, cfg.emit_spectra);
  write_file(cfg.csv_out, csv.str());

  json out;
  out["command"] = "figure";
  out["figure"] = id;
  out["config"] = config_json(cfg);
  out["results"] = {{"p_tau", tr.final_transition()}, {"p_surv", tr.final_survival()}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const FlagSet& flags, const std::string& axis_name, const std::string& grid_csv,
              int parallelism) {
  const RunConfig cfg = resolve(flags, "sweep.csv");
  if (parallelism < 1) throw std::invalid_argument("--parallel must be >= 1");

  nhqa::SweepRequest req;
  req.g = cfg.g;
  req.delta = cfg.delta;
  req.tau = cfg.tau;
  req.log2_n = cfg.log2_n;
  req.kind = cfg.kind;
  req.config = cfg.integrator;
  req.axis = nhqa::parse_axis(axis_name);
  req.grid = parse_grid(grid_csv);
  req.parallelism = parallelism;

  const std::vector<nhqa::SweepPoint> rows = nhqa::run_sweep(req);
  std::ostringstream csv;
  nhqa::write_sweep_csv(csv, rows);
  write_file(cfg.csv_out, csv.str());

  int failures = 0;
  for (const auto& r : rows) failures += r.error.empty() ? 0 : 1;

  json out;
  out["command"] = "sweep";
  out["config"] = config_json(cfg);
  out["sweep"] = {{"axis", axis_name}, {"grid", req.grid}, {"parallelism", parallelism}};
  out["results"] = {{"rows", rows.size()}, {"failed_rows", failures}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_scaling(const FlagSet& flags, const std::string& grid_csv, double target_p,
                int parallelism) {
  const RunConfig cfg = resolve(flags, "scaling.csv");
  if (parallelism < 1) throw std::invalid_argument("--parallel must be >= 1");
  if (!(target_p > 0.0 && target_p < 1.0))
    throw std::invalid_argument("--target-p must lie in (0, 1)");
  const std::vector<double> raw = parse_grid(grid_csv);
  if (raw.size() < 4)
    throw std::invalid_argument("scaling: --grid needs at least 4 log2n values");
  std::vector<int> grid;
  for (double v : raw) {
    if (v != std::floor(v) || v < 1.0 || v > 62.0)
      throw std::invalid_argument("scaling: log2n grid values must be integers in [1, 62]");
    grid.push_back(static_cast<int>(v));
  }

  const nhqa::ScalingReport rep =
      nhqa::run_scaling(cfg.g, cfg.delta, grid, target_p, cfg.kind, cfg.integrator, parallelism);

  std::ostringstream csv;
  nhqa::write_scaling_csv(csv, rep);
  write_file(cfg.csv_out, csv.str());

  json out;
  out["command"] = "scaling";
  out["config"] = config_json(cfg);
  out["scaling"] = {{"log2n_grid", grid}, {"target_p", target_p}, {"parallelism", parallelism}};
  json points = json::array();
  for (const auto& pt : rep.points)
    points.push_back({{"log2n", pt.log2_n},
                      {"tau_star", pt.tau_star},
                      {"p_at_tau_star", pt.probability},
                      {"error", pt.error}});
  out["points"] = points;
  out["fit"] = {{"x", rep.fit_vs_log ? "ln_n" : "n"},
                {"slope", rep.fit.slope},
                {"intercept", rep.fit.intercept},
                {"r_squared", rep.fit.r_squared}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_compare_analytic(const FlagSet& flags) {
  const RunConfig cfg = resolve(flags, "");
  if (cfg.kind != nhqa::ScheduleKind::Linear)
    throw std::invalid_argument(
        "compare-analytic: nonlinear schedule unsupported (the Weber path covers the linear "
        "coupling only)");

  const nhqa::AnnealParams p = nhqa::make_params(cfg.g, cfg.delta, cfg.tau, cfg.log2_n);
  const nhqa::Schedule s = nhqa::make_schedule(cfg.kind, p);
  const double p_int = nhqa::integrate(p, s, cfg.integrator).final_transition();

  const nhqa::WeberParams wp = nhqa::weber_params(p);
  const double p_weber = nhqa::weber_transition_probability(wp, p);
  const nhqa::AsymptoticRatio ar = nhqa::asymptotic_ratio(wp);
  const double p_asym = ar.transition_probability();

  json comparison;
  comparison["integrator"] = p_int;
  comparison["weber"] = p_weber;
  comparison["asymptotic"] = p_asym;
  comparison["asymptotic_in_regime"] = ar.in_regime;
  if (!ar.in_regime)
    comparison["warning"] = "asymptotic ratio outside its validity regime (|z0| < 5)";
  json dev;
  dev["integrator_vs_weber"] = relative_deviation(p_int, p_weber);
  dev["integrator_vs_asymptotic"] = relative_deviation(p_int, p_asym);
  dev["weber_vs_asymptotic"] = relative_deviation(p_weber, p_asym);
  if (cfg.delta == 0.0) {
    const double p_lz = nhqa::landau_zener_probability(p);
    comparison["landau_zener"] = p_lz;
    dev["integrator_vs_landau_zener"] = relative_deviation(p_int, p_lz);
  }
  comparison["deviations"] = dev;

  json out;
  out["command"] = "compare-analytic";
  out["config"] = config_json(cfg);
  out["comparison"] = comparison;
  std::cout << out.dump(2) << '\n';
  return 0;
}

void add_base_flags(CLI::App* cmd, FlagSet& flags, bool physics = true) {
  if (physics) {
    cmd->add_option("--schedule", flags.schedule, "Coupling profile: linear or nonlinear");
    cmd->add_option("--g", flags.g, "Gain g > 0");
    cmd->add_option("--delta", flags.delta, "Dissipation delta >= 0");
    cmd->add_option("--tau", flags.tau, "Total anneal time");
    cmd->add_option("--log2n", flags.log2_n, "log2 of the search-space size N");
  }
  cmd->add_option("--samples", flags.samples, "Trajectory output samples (>= 2)");
  cmd->add_option("--rel-tol", flags.rel_tol, "Integrator relative tolerance");
  cmd->add_option("--abs-tol", flags.abs_tol, "Integrator absolute tolerance");
  cmd->add_option("--config", flags.config_path, "JSON config file mirroring RunConfig");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian quantum annealing simulator for Grover search"};
  app.require_subcommand(1);

  FlagSet run_flags, fig_flags, sweep_flags, scaling_flags, cmp_flags;
  std::string figure_id, sweep_axis, sweep_grid, scaling_grid;
  double target_p = 0.9;
  int sweep_parallel = 1, scaling_parallel = 1;

  CLI::App* run = app.add_subcommand("run", "Integrate one anneal and write the trajectory CSV");
  add_base_flags(run, run_flags);
  run->add_option("--out", run_flags.out, "Trajectory CSV path (default trajectory.csv)");

  CLI::App* fig = app.add_subcommand("figure", "Reproduce a preset parameter panel");
  fig->add_option("figure,--figure", figure_id, "fig1_left, fig1_right, fig2, or fig3")
      ->required();
  add_base_flags(fig, fig_flags, /*physics=*/false);
  fig->add_option("--out", fig_flags.out, "Trajectory CSV path (default <figure>.csv)");

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter axis over a value grid");
  add_base_flags(sweep, sweep_flags);
  sweep->add_option("--axis", sweep_axis, "Swept parameter: g, delta, tau, or log2n")->required();
  sweep->add_option("--grid", sweep_grid, "Comma-separated axis values")->required();
  sweep->add_option("--parallel", sweep_parallel, "Concurrent integrations");
  sweep->add_option("--out", sweep_flags.out, "Sweep CSV path (default sweep.csv)");

  CLI::App* scaling = app.add_subcommand("scaling", "Fit time-to-target tau* against ln N or N");
  add_base_flags(scaling, scaling_flags);
  scaling->add_option("--grid", scaling_grid, "Comma-separated log2n values (>= 4 of them)")
      ->required();
  scaling->add_option("--target-p", target_p, "Transition probability target in (0, 1)");
  scaling->add_option("--parallel", scaling_parallel, "Concurrent bisection searches");
  scaling->add_option("--out", scaling_flags.out, "Scaling CSV path (default scaling.csv)");

  CLI::App* cmp = app.add_subcommand(
      "compare-analytic", "Cross-check integrator vs Weber, asymptotic, and LZ closed forms");
  add_base_flags(cmp, cmp_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (fig->parsed()) return cmd_figure(figure_id, fig_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_axis, sweep_grid, sweep_parallel);
    if (scaling->parsed()) return cmd_scaling(scaling_flags, scaling_grid, target_p, scaling_parallel);
    if (cmp->parsed()) return cmd_compare_analytic(cmp_flags);
  } catch (const nhqa::numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const io_error& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "usage error: bad config file: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
