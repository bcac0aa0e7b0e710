// spin-anneal: command-line front end.
//
// Exit codes: 0 ok, 2 validation / usage, 3 numerical divergence, 4 I/O.

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "visa/bench.hpp"
#include "visa/config.hpp"
#include "visa/errors.hpp"
#include "visa/graph_gen.hpp"
#include "visa/ising.hpp"
#include "visa/landscape.hpp"
#include "visa/matrix_io.hpp"
#include "visa/solvers.hpp"

using namespace visa;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct GraphFlags {
  std::string family = "mobius";
  int n = 8;
  double J = 0.4;
  double G = 0.0;
  int k = 2;
  std::uint64_t seed = 0;
  std::string graph_path;
};

void add_graph_flags(CLI::App* sub, GraphFlags& g, bool with_file) {
  sub->add_option("--family", g.family, "mobius|jg|sk|3reg")->capture_default_str();
  sub->add_option("--n", g.n, "number of spins")->capture_default_str();
  sub->add_option("--J", g.J, "cross-circle coupling magnitude")->capture_default_str();
  sub->add_option("--G", g.G, "distance-k coupling magnitude (jg)")->capture_default_str();
  sub->add_option("--k", g.k, "J-G distance (jg)")->capture_default_str();
  sub->add_option("--seed", g.seed, "instance / run seed")->capture_default_str();
  if (with_file) sub->add_option("--graph", g.graph_path, "matrix file (overrides family flags)");
}

CouplingMatrix make_graph(const GraphFlags& g) {
  if (!g.graph_path.empty()) return load_matrix(g.graph_path);
  return build_graph(parse_family(g.family), g.n, g.J, g.G, g.k, g.seed);
}

json graph_json(const GraphFlags& g) {
  if (!g.graph_path.empty()) return {{"graph", g.graph_path}};
  return {{"family", g.family}, {"n", g.n}, {"J", g.J}, {"G", g.G}, {"k", g.k}, {"seed", g.seed}};
}

// Solver flags are gathered as text and applied through the config-key parser,
// so flags, config files and --set share one code path.
struct SolverFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_solver_flags(CLI::App* sub, SolverFlags& f) {
  static const std::vector<std::pair<std::string, std::string>> flags = {
      {"steps", "n_steps"}, {"dt", "dt"}, {"eps", "eps"}, {"gamma0", "gamma0"}, {"p0", "p0"}, {"alpha", "alpha"},
      {"p-rate", "p_rate"}, {"delta", "delta"}, {"mass", "mass"}, {"damping", "damping"}, {"beta0", "beta0"},
      {"sigma", "sigma"}, {"horizon", "horizon"}, {"coupling-scale", "coupling_scale"},
      {"normalize-coupling", "normalize_coupling"}, {"init-scale", "init_scale"}, {"visa-init", "visa_init"},
      {"init-minor-scale", "init_minor_scale"}, {"divergence-bound", "divergence_bound"},
      {"amplitude-floor", "amplitude_floor"}, {"clip", "clip"}, {"bfgs-max-iter", "bfgs_max_iter"},
      {"bfgs-restarts", "bfgs_restarts"}};
  for (const auto& [flag, key] : flags) f.options[key] = sub->add_option("--" + flag, f.values[key]);
}

KeyValues given(const SolverFlags& f) {
  KeyValues kv;
  for (const auto& [key, opt] : f.options)
    if (opt->count() > 0) kv[key] = f.values.at(key);
  return kv;
}

// --set visa.alpha=2 style overrides, grouped per solver name.
std::map<std::string, KeyValues> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, KeyValues> out;
  for (const auto& s : sets) {
    const auto dot = s.find('.');
    const auto eq = s.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot)
      throw ValidationError("--set expects <solver>.<key>=<value>, got '" + s + "'");
    out[to_string(parse_solver(s.substr(0, dot)))][s.substr(dot + 1, eq - dot - 1)] = s.substr(eq + 1);
  }
  return out;
}

// Config-file globals fill any option of `sub` the user did not pass.
void apply_globals(CLI::App* sub, const KeyValues& globals) {
  for (const auto& [key, value] : globals) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    CLI::Option* opt = sub->get_option_no_throw("--" + flag);
    if (!opt) throw ValidationError("config key '" + key + "' does not match any option of '" + sub->get_name() + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.precision(17);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

json manifest(const std::string& sub, json inputs, json outputs) {
  return {{"tool", "spin-anneal"}, {"version", kVersion}, {"subcommand", sub}, {"inputs", std::move(inputs)},
          {"outputs", std::move(outputs)}};
}

json config_json(const SolverConfig& c) {
  json j;
  for (const auto& [k, v] : describe(c)) j[k] = v;
  return j;
}

json spins_json(const SpinConfig& s) { return s.values(); }

std::vector<double> grid_from(const std::string& list, double from, double to, double step) {
  if (!list.empty()) {
    std::vector<double> v;
    for (const auto& s : split_list(list)) v.push_back(parse_double("values", s));
    return v;
  }
  return linspace_step(from, to, step);
}

std::vector<double> doubles(const std::string& list, const std::string& key) {
  std::vector<double> v;
  for (const auto& s : split_list(list)) v.push_back(parse_double(key, s));
  return v;
}

SolverConfig solver_config(const std::string& name, const ConfigFile& file, const std::map<std::string, KeyValues>& sets,
                           const SolverConfig& base) {
  SolverConfig c = base;
  const std::string canon = to_string(parse_solver(name));
  if (auto it = file.solvers.find(canon); it != file.solvers.end()) apply_solver_keys(c, it->second);
  if (auto it = sets.find(canon); it != sets.end()) apply_solver_keys(c, it->second);
  return c;
}

std::string label_short(PointLabel l) {
  switch (l) {
    case PointLabel::S0_min: return "S0";
    case PointLabel::S1_min: return "S1";
    default: return to_string(l);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector Ising spin annealer and gain-based solver benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("spin-anneal ") + kVersion);

  int threads = 0;
  if (const char* env = std::getenv("SPIN_ANNEAL_THREADS")) threads = std::atoi(env);
  app.add_option("--threads", threads, "worker threads (default $SPIN_ANNEAL_THREADS, else OpenMP default)");
  std::string config_path;
  app.add_option("--config", config_path, "key = value config file with [solver.<name>] sections");

  // gen
  GraphFlags gen_g;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write a coupling matrix");
  add_graph_flags(gen, gen_g, false);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // solve
  GraphFlags sol_g;
  SolverFlags sol_f;
  std::string sol_solver, sol_out, sol_traj;
  int sol_stride = 10;
  auto* solve = app.add_subcommand("solve", "single solver run");
  add_graph_flags(solve, sol_g, true);
  add_solver_flags(solve, sol_f);
  solve->add_option("--solver", sol_solver, "visa|cim|mrcim|meht|svl|bfgs")->required();
  solve->add_option("--out", sol_out, "result JSON");
  solve->add_option("--traj", sol_traj, "trajectory CSV (t,component,value)");
  solve->add_option("--traj-stride", sol_stride, "steps between trajectory samples")->capture_default_str();

  // sweep
  GraphFlags sw_g;
  std::string sw_param = "J", sw_values, sw_solvers = "visa,cim", sw_out, sw_format = "csv";
  std::string sw_tune_alpha, sw_tune_prate, sw_tune_beta0;
  double sw_from = 0.1, sw_to = 0.6, sw_step = 0.05;
  int sw_runs = 1000, sw_tune_runs = 0;
  std::vector<std::string> sw_sets;
  std::string sw_ref_file;
  auto* sw = app.add_subcommand("sweep", "ground-state probability over a parameter grid");
  add_graph_flags(sw, sw_g, false);
  sw->add_option("--param", sw_param, "J or G")->capture_default_str();
  sw->add_option("--from", sw_from)->capture_default_str();
  sw->add_option("--to", sw_to)->capture_default_str();
  sw->add_option("--step", sw_step)->capture_default_str();
  sw->add_option("--values", sw_values, "explicit comma-separated grid");
  sw->add_option("--solvers", sw_solvers)->capture_default_str();
  sw->add_option("--runs", sw_runs)->capture_default_str();
  sw->add_option("--set", sw_sets, "per-solver override <solver>.<key>=<value>");
  sw->add_option("--tune-runs", sw_tune_runs, "preliminary runs per grid candidate (0 = off)");
  sw->add_option("--tune-alpha", sw_tune_alpha, "alpha candidates");
  sw->add_option("--tune-p-rate", sw_tune_prate, "VISA p_rate candidates");
  sw->add_option("--tune-beta0", sw_tune_beta0, "ME-HT beta0 candidates");
  sw->add_option("--reference-file", sw_ref_file, "lines '<param> <energy>' for n beyond the oracle");
  sw->add_option("--out", sw_out, "output file (default stdout)");
  sw->add_option("--format", sw_format, "csv|json")->capture_default_str();

  // bench
  int b_n = 100, b_instances = 50, b_best_of = 1, b_ref_runs = 4;
  std::uint64_t b_seed = 0;
  std::string b_family = "sk,3reg", b_solvers = "visa,svl,mrcim,cim", b_ref = "best_found", b_ref_file, b_out;
  bool b_no_timing = false;
  std::vector<std::string> b_sets;
  auto* bench = app.add_subcommand("bench", "random-instance benchmark (proximity gap, quality improvement)");
  bench->add_option("--family", b_family, "comma-separated: sk, 3reg")->capture_default_str();
  bench->add_option("--n", b_n)->capture_default_str();
  bench->add_option("--instances", b_instances, "instances per family")->capture_default_str();
  bench->add_option("--solvers", b_solvers)->capture_default_str();
  bench->add_option("--seed", b_seed)->capture_default_str();
  bench->add_option("--reference", b_ref, "oracle|best_found|file")->capture_default_str();
  bench->add_option("--reference-file", b_ref_file);
  bench->add_option("--reference-runs", b_ref_runs, "long-schedule VISA runs feeding best_found")->capture_default_str();
  bench->add_option("--best-of", b_best_of)->capture_default_str();
  bench->add_option("--set", b_sets, "per-solver override <solver>.<key>=<value>");
  bench->add_flag("--no-timing", b_no_timing, "omit wall_time fields");
  bench->add_option("--out", b_out, "report JSON (default stdout)");

  // landscape subcommands share flags
  GraphFlags ls_g;
  double ls_gamma = -0.087, ls_P = 0.32, ls_alpha = 1.0, ls_divisor = 0.0;
  int ls_starts = 5000;
  std::string ls_model = "visa", ls_out, ls_format = "csv";
  auto* crit = app.add_subcommand("critical", "critical points of the VISA or CIM landscape");
  auto* bas = app.add_subcommand("basins", "basins of attraction of the VISA landscape");
  for (auto* s : {crit, bas}) {
    add_graph_flags(s, ls_g, true);
    s->add_option("--gamma", ls_gamma, "uniform gain (CIM: pump p)")->capture_default_str();
    s->add_option("--P", ls_P, "collinearity penalty")->capture_default_str();
    s->add_option("--alpha", ls_alpha, "H1 stiffness (CIM: coupling strength)")->capture_default_str();
    s->add_option("--starts", ls_starts)->capture_default_str();
    s->add_option("--divisor", ls_divisor, "distance normalization (default n)");
    s->add_option("--out", ls_out, "output file (default stdout)");
    s->add_option("--format", ls_format, "csv|json")->capture_default_str();
  }
  crit->add_option("--model", ls_model, "visa|cim")->capture_default_str();

  GraphFlags pm_g;
  double pm_alpha = 1.0, pm_gfrom = -0.5, pm_gto = 0.75, pm_gstep = 0.05, pm_pfrom = 0.0, pm_pto = 1.0, pm_pstep = 0.05;
  int pm_starts = 60;
  std::string pm_out, pm_format = "json";
  auto* pm = app.add_subcommand("phasemap", "global-minimum label over a (gamma, P) grid");
  add_graph_flags(pm, pm_g, true);
  pm->add_option("--alpha", pm_alpha)->capture_default_str();
  pm->add_option("--gamma-from", pm_gfrom)->capture_default_str();
  pm->add_option("--gamma-to", pm_gto)->capture_default_str();
  pm->add_option("--gamma-step", pm_gstep)->capture_default_str();
  pm->add_option("--P-from", pm_pfrom)->capture_default_str();
  pm->add_option("--P-to", pm_pto)->capture_default_str();
  pm->add_option("--P-step", pm_pstep)->capture_default_str();
  pm->add_option("--starts", pm_starts, "random starts per cell")->capture_default_str();
  pm->add_option("--out", pm_out, "output file (default stdout)");
  pm->add_option("--format", pm_format, "json|csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  // Everything numeric goes to stdout unless --out is given.
  auto emit = [](const std::string& path, const std::string& text) {
    if (path.empty()) std::cout << text;
    else write_text(path, text);
  };

  try {
    if (threads > 0) omp_set_num_threads(threads);
    ConfigFile file;
    if (!config_path.empty()) file = load_config(config_path);
    CLI::App* active = app.get_subcommands().front();
    apply_globals(active, file.global);

    if (active == gen) {
      const CouplingMatrix J = make_graph(gen_g);
      std::ostringstream os;
      write_matrix(os, J);
      emit(gen_out, os.str());
      if (!gen_out.empty())
        write_text(gen_out + ".manifest.json",
                   manifest("gen", graph_json(gen_g), {{"matrix", gen_out}}).dump(2) + "\n");
      return 0;
    }

    if (active == solve) {
      const CouplingMatrix J = make_graph(sol_g);
      SolverConfig cfg = solver_config(sol_solver, file, {}, default_config(parse_solver(sol_solver)));
      apply_solver_keys(cfg, given(sol_f));
      cfg.seed = sol_g.seed;
      if (!sol_traj.empty()) cfg.trajectory_stride = sol_stride;
      const RunResult r = run_solver(J, cfg);

      std::cout << "energy " << format_double(r.energy) << "\nspins";
      for (int s : r.spins.values()) std::cout << ' ' << s;
      std::cout << '\n';

      json resolved = config_json(cfg);
      resolved["resolved_alpha"] = resolved_alpha(cfg, J);
      resolved["resolved_horizon"] = resolved_horizon(cfg);
      resolved["resolved_coupling_scale"] = resolved_coupling_scale(cfg, J);
      if (cfg.solver == SolverKind::cim || cfg.solver == SolverKind::mr_cim) resolved["resolved_p0"] = resolved_p0(cfg, J);
      json outputs = json::object();
      if (!sol_out.empty()) outputs["result"] = sol_out;
      if (!sol_traj.empty()) outputs["trajectory"] = sol_traj;
      json res = {{"solver", to_string(r.solver)}, {"energy", r.energy}, {"spins", spins_json(r.spins)},
                  {"model_energy", r.final_model_energy}, {"wall_time", r.wall_time}};
      if (r.axis) res["axis"] = {(*r.axis)(0), (*r.axis)(1), (*r.axis)(2)};
      json inputs = graph_json(sol_g);
      inputs["config"] = resolved;
      const json m = manifest("solve", inputs, outputs);
      if (!sol_out.empty()) write_text(sol_out, json{{"manifest", m}, {"result", res}}.dump(2) + "\n");
      if (!sol_traj.empty()) {
        auto out = open_out(sol_traj);
        out << "t,component,value\n";
        for (const auto& s : r.trajectory)
          for (Eigen::Index c = 0; c < s.state.size(); ++c)
            out << format_double(s.t) << ',' << c << ',' << format_double(s.state(c)) << '\n';
        write_text(sol_traj + ".json", m.dump(2) + "\n");
        // energies per sample, for plotting H(t) and H_I(t)
        auto eo = open_out(sol_traj + ".energy.csv");
        eo << "t,model_energy,ising_energy\n";
        for (const auto& s : r.trajectory)
          eo << format_double(s.t) << ',' << format_double(s.model_energy) << ',' << format_double(s.ising_energy) << '\n';
      }
      return 0;
    }

    if (active == sw) {
      SweepSpec spec;
      spec.family = parse_family(sw_g.family);
      spec.n = sw_g.n;
      spec.J = sw_g.J;
      spec.G = sw_g.G;
      spec.k = sw_g.k;
      spec.param = sw_param;
      spec.values = grid_from(sw_values, sw_from, sw_to, sw_step);
      spec.runs = sw_runs;
      spec.base_seed = sw_g.seed;
      spec.reference_file = sw_ref_file;
      const auto sets = parse_sets(sw_sets);
      for (const auto& name : split_list(sw_solvers))
        spec.solvers.push_back(solver_config(name, file, sets, default_config(parse_solver(name))));
      spec.tuning.runs = sw_tune_runs;
      spec.tuning.alpha = doubles(sw_tune_alpha, "tune-alpha");
      spec.tuning.p_rate = doubles(sw_tune_prate, "tune-p-rate");
      spec.tuning.beta0 = doubles(sw_tune_beta0, "tune-beta0");
      const SweepTable table = sweep(spec);

      std::ostringstream os;
      if (sw_format == "json") {
        json rows = json::array();
        for (const auto& r : table.rows)
          rows.push_back({{"param", r.param}, {"solver", r.solver}, {"p_gs", r.p_gs}, {"runs", r.runs},
                          {"reference_energy", r.reference_energy}});
        json marks = json::array();
        for (const auto& m : table.markers) marks.push_back({{"label", m.label}, {"value", m.value}});
        os << json{{"schema", 1}, {"rows", rows}, {"markers", marks}, {"notes", table.notes}}.dump(2) << '\n';
      } else if (sw_format == "csv") {
        write_sweep_csv(os, table);
      } else {
        throw ValidationError("--format must be csv or json");
      }
      emit(sw_out, os.str());
      if (!sw_out.empty()) {
        json cfgs = json::array();
        for (const auto& c : spec.solvers) cfgs.push_back(config_json(c));
        json inputs = graph_json(sw_g);
        inputs["param"] = sw_param;
        inputs["values"] = spec.values;
        inputs["runs"] = sw_runs;
        inputs["solvers"] = cfgs;
        inputs["tuning"] = {{"runs", sw_tune_runs}, {"alpha", spec.tuning.alpha}, {"p_rate", spec.tuning.p_rate},
                            {"beta0", spec.tuning.beta0}};
        write_text(sw_out + ".manifest.json", manifest("sweep", inputs, {{"table", sw_out}}).dump(2) + "\n");
      }
      return 0;
    }

    if (active == bench) {
      BenchmarkSpec spec;
      spec.families.clear();
      for (const auto& f : split_list(b_family)) spec.families.push_back(parse_family(f));
      spec.n = b_n;
      spec.instances = b_instances;
      spec.base_seed = b_seed;
      spec.reference = parse_reference_mode(b_ref);
      spec.reference_file = b_ref_file;
      spec.best_of = b_best_of;
      spec.reference_runs = b_ref_runs;
      const auto sets = parse_sets(b_sets);
      for (const auto& name : split_list(b_solvers)) {
        const SolverKind kind = parse_solver(name);
        spec.solvers.push_back(solver_config(name, file, sets, benchmark_config(kind, b_n)));
      }
      if (spec.reference == ReferenceMode::best_found) {
        SolverConfig longer = solver_config("visa", file, sets, benchmark_config(SolverKind::visa, b_n));
        longer.n_steps *= 4;
        longer.p_rate /= 4;
        spec.reference_solver = longer;
      }
      const BenchmarkReport rep = random_benchmark(spec);
      json out = json::parse(report_json(rep, !b_no_timing));
      json cfgs = json::array();
      for (const auto& c : spec.solvers) cfgs.push_back(config_json(c));
      out["manifest"] = manifest("bench",
                                 {{"families", b_family}, {"n", b_n}, {"instances", b_instances}, {"seed", b_seed},
                                  {"reference", b_ref}, {"best_of", b_best_of}, {"solvers", cfgs}},
                                 {{"report", b_out}});
      emit(b_out, out.dump(2) + "\n");
      for (const auto& c : spec.solvers) {
        const auto g = rep.mean_gap(to_string(c.solver));
        std::cerr << to_string(c.solver) << " mean proximity gap " << (g ? format_double(*g) : "n/a") << '\n';
      }
      return 0;
    }

    if (active == crit) {
      const CouplingMatrix J = make_graph(ls_g);
      LandscapeParams lp;
      lp.model = ls_model == "cim" ? LandscapeModel::cim : LandscapeModel::visa;
      if (ls_model != "cim" && ls_model != "visa") throw ValidationError("--model must be visa or cim");
      lp.gamma = ls_gamma;
      lp.P = ls_P;
      lp.alpha = ls_alpha;
      lp.distance_divisor = ls_divisor;
      const double amp = std::sqrt(std::max(ls_gamma + J.lambda_max() / ls_alpha, 0.25));
      const auto res = find_critical_points(J, lp, ls_starts, ls_g.seed, reference_starts(J, lp.model, amp));
      const double divisor = ls_divisor > 0 ? ls_divisor : J.n();
      const auto dd = saddle_path_distance(res.points, lp.model, divisor);

      std::ostringstream os;
      if (ls_format == "json") {
        json pts = json::array();
        for (const auto& p : res.points)
          pts.push_back({{"energy", p.energy}, {"distance", p.distance}, {"label", to_string(p.label)},
                         {"hessian_index", p.hessian_index}, {"zero_modes", p.zero_modes}, {"grad_norm", p.grad_norm}});
        os << json{{"schema", 1}, {"points", pts}, {"starts", res.starts}, {"non_converged", res.non_converged},
                   {"rotation_orbits", res.rotation_orbits}, {"saddle_path_distance", dd ? json(*dd) : json(nullptr)}}
                  .dump(2)
           << '\n';
      } else {
        os << "energy,distance,label,hessian_index,zero_modes,grad_norm\n";
        for (const auto& p : res.points)
          os << format_double(p.energy) << ',' << format_double(p.distance) << ',' << to_string(p.label) << ','
             << p.hessian_index << ',' << p.zero_modes << ',' << format_double(p.grad_norm) << '\n';
      }
      emit(ls_out, os.str());
      std::optional<double> e0, e1;
      for (const auto& p : res.points) {
        if (p.label == PointLabel::S0_min && (!e0 || p.energy < *e0)) e0 = p.energy;
        if (p.label == PointLabel::S1_min && (!e1 || p.energy < *e1)) e1 = p.energy;
      }
      std::cerr << res.points.size() << " critical points (" << res.rotation_orbits << " orbits), "
                << res.non_converged << " starts did not converge\n"
                << "lowest S0 minimum " << (e0 ? format_double(*e0) : "none") << ", lowest S1 minimum "
                << (e1 ? format_double(*e1) : "none") << "\nsaddle path distance "
                << (dd ? format_double(*dd) : "undefined") << '\n';
      if (!ls_out.empty()) {
        json inputs = graph_json(ls_g);
        inputs.update({{"model", ls_model}, {"gamma", ls_gamma}, {"P", ls_P}, {"alpha", ls_alpha}, {"starts", ls_starts},
                       {"divisor", divisor}});
        write_text(ls_out + ".manifest.json", manifest("critical", inputs, {{"points", ls_out}}).dump(2) + "\n");
      }
      return 0;
    }

    if (active == bas) {
      const CouplingMatrix J = make_graph(ls_g);
      LandscapeParams lp;
      lp.gamma = ls_gamma;
      lp.P = ls_P;
      lp.alpha = ls_alpha;
      const BasinReport rep = basins(J, lp, ls_starts, ls_g.seed);
      std::ostringstream os;
      auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
      if (ls_format == "json") {
        json pts = json::array();
        for (const auto& s : rep.samples)
          pts.push_back({{"label", label_short(s.label)}, {"energy", s.energy}, {"m_abs", s.magnetization},
                         {"xcorr_abs", num(s.correlation)}});
        os << json{{"schema", 1}, {"samples", pts}, {"failures", rep.failures}}.dump(2) << '\n';
      } else {
        os << "index,label,energy,m_abs,xcorr_abs\n";
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
          const auto& s = rep.samples[i];
          os << i << ',' << label_short(s.label) << ',' << format_double(s.energy) << ','
             << format_double(s.magnetization) << ',' << format_double(s.correlation) << '\n';
        }
      }
      emit(ls_out, os.str());
      std::cerr << "S0 " << format_double(rep.fraction(PointLabel::S0_min)) << ", S1 "
                << format_double(rep.fraction(PointLabel::S1_min)) << ", other "
                << format_double(rep.fraction(PointLabel::other_min)) << ", failures " << rep.failures << '\n';
      if (!ls_out.empty()) {
        json inputs = graph_json(ls_g);
        inputs.update({{"gamma", ls_gamma}, {"P", ls_P}, {"alpha", ls_alpha}, {"starts", ls_starts}});
        write_text(ls_out + ".manifest.json", manifest("basins", inputs, {{"samples", ls_out}}).dump(2) + "\n");
      }
      return 0;
    }

    if (active == pm) {
      const CouplingMatrix J = make_graph(pm_g);
      const auto gammas = linspace_step(pm_gfrom, pm_gto, pm_gstep);
      const auto Ps = linspace_step(pm_pfrom, pm_pto, pm_pstep);
      const PhaseMap map = phase_map(J, gammas, Ps, pm_alpha, pm_starts, pm_g.seed);
      auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
      std::ostringstream os;
      if (pm_format == "json") {
        json labels = json::array(), e0 = json::array(), e1 = json::array();
        for (std::size_t r = 0; r < Ps.size(); ++r) {
          json lr = json::array(), a = json::array(), b = json::array();
          for (std::size_t c = 0; c < gammas.size(); ++c) {
            const auto& cell = map.cells[r * gammas.size() + c];
            lr.push_back(cell.label);
            a.push_back(opt(cell.e_s0));
            b.push_back(opt(cell.e_s1));
          }
          labels.push_back(lr);
          e0.push_back(a);
          e1.push_back(b);
        }
        json bnd = json::array();
        for (const auto& p : map.boundary) bnd.push_back({{"gamma", p.gamma}, {"P", p.P}});
        os << json{{"schema", 1}, {"gammas", gammas}, {"Ps", Ps}, {"labels", labels}, {"e_s0", e0}, {"e_s1", e1},
                   {"boundary", bnd}}
                  .dump(2)
           << '\n';
      } else if (pm_format == "csv") {
        os << "gamma,P,label,e_s0,e_s1,e_min\n";
        auto o = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
        for (const auto& c : map.cells)
          os << format_double(c.gamma) << ',' << format_double(c.P) << ',' << c.label << ',' << o(c.e_s0) << ','
             << o(c.e_s1) << ',' << o(c.e_min) << '\n';
      } else {
        throw ValidationError("--format must be json or csv");
      }
      emit(pm_out, os.str());
      if (!pm_out.empty()) {
        json inputs = graph_json(pm_g);
        inputs.update({{"alpha", pm_alpha}, {"gammas", gammas}, {"Ps", Ps}, {"starts", pm_starts}});
        write_text(pm_out + ".manifest.json", manifest("phasemap", inputs, {{"grid", pm_out}}).dump(2) + "\n");
      }
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
