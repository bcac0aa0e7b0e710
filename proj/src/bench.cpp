#include "visa/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "visa/errors.hpp"
#include "visa/graph_gen.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"

namespace visa {

namespace {

constexpr double kEnergyTol = 1e-9;

struct RunOutcome {
  double energy = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  double wall_time = 0.0;
};

RunOutcome attempt(const CouplingMatrix& J, SolverConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  RunOutcome out;
  try {
    RunResult r = run_solver(J, cfg);
    out.energy = r.energy;
    out.wall_time = r.wall_time;
  } catch (const DivergenceError&) {
    out.diverged = true;
  }
  return out;
}

// Exceptions must not escape an OpenMP region; park the first one and rethrow.
struct ErrorSlot {
  std::string message;
  bool validation = false;
  void capture(const std::exception& e, bool is_validation) {
#pragma omp critical(visa_bench_error)
    if (message.empty()) {
      message = e.what();
      validation = is_validation;
    }
  }
  void rethrow() const {
    if (message.empty()) return;
    if (validation) throw ValidationError(message);
    throw std::runtime_error(message);
  }
};

std::map<std::string, double> read_reference_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference file '" + path + "'");
  std::map<std::string, double> refs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    double e;
    if (!(ls >> key >> e)) throw IoError("malformed reference line: '" + line + "'");
    refs[key] = e;
  }
  return refs;
}

std::vector<SolverConfig> tune_candidates(const SolverConfig& base, const TuneGrid& grid) {
  auto or_current = [](const std::vector<double>& v, double cur) { return v.empty() ? std::vector<double>{cur} : v; };
  const bool is_visa = base.solver == SolverKind::visa;
  const bool is_meht = base.solver == SolverKind::me_ht;
  const double cur_alpha = base.alpha.value_or(std::numeric_limits<double>::quiet_NaN());
  std::vector<SolverConfig> out;
  for (double a : or_current(grid.alpha, cur_alpha))
    for (double pr : is_visa ? or_current(grid.p_rate, base.p_rate) : std::vector<double>{base.p_rate})
      for (double b0 : is_meht ? or_current(grid.beta0, base.beta0) : std::vector<double>{base.beta0}) {
        SolverConfig c = base;
        if (!std::isnan(a)) c.alpha = a;
        c.p_rate = pr;
        c.beta0 = b0;
        out.push_back(c);
      }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::mobius: return "mobius";
    case GraphFamily::jg: return "jg";
    case GraphFamily::sk: return "sk";
    case GraphFamily::three_regular: return "3reg";
  }
  return "?";
}

GraphFamily parse_family(const std::string& name) {
  if (name == "mobius") return GraphFamily::mobius;
  if (name == "jg") return GraphFamily::jg;
  if (name == "sk") return GraphFamily::sk;
  if (name == "3reg" || name == "three_regular") return GraphFamily::three_regular;
  throw ValidationError("unknown graph family '" + name + "' (expected mobius|jg|sk|3reg)");
}

std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t instance, SolverKind solver, std::uint64_t run) {
  return derive_seed({base_seed, instance, static_cast<std::uint64_t>(solver), run});
}

PgsStats ground_state_stats(const CouplingMatrix& J, const SolverConfig& cfg, int runs, double reference_energy,
                            std::uint64_t base_seed, std::uint64_t instance) {
  require(runs >= 1, "runs must be at least 1");
  validate(cfg);
  std::vector<RunOutcome> out(static_cast<std::size_t>(runs));
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 4)
  for (int r = 0; r < runs; ++r) {
    try {
      out[static_cast<std::size_t>(r)] =
          attempt(J, cfg, run_seed(base_seed, instance, cfg.solver, static_cast<std::uint64_t>(r)));
    } catch (const ValidationError& e) {
      err.capture(e, true);
    } catch (const std::exception& e) {
      err.capture(e, false);
    }
  }
  err.rethrow();
  PgsStats s;
  s.runs = runs;
  for (const auto& o : out) {
    if (o.diverged) ++s.diverged;
    else if (std::abs(o.energy - reference_energy) <= kEnergyTol) ++s.successes;
  }
  return s;
}

PgsStats ground_state_stats_serial(const CouplingMatrix& J, const SolverConfig& cfg, int runs,
                                   double reference_energy, std::uint64_t base_seed, std::uint64_t instance) {
  require(runs >= 1, "runs must be at least 1");
  validate(cfg);
  PgsStats s;
  s.runs = runs;
  for (int r = 0; r < runs; ++r) {
    const RunOutcome o = attempt(J, cfg, run_seed(base_seed, instance, cfg.solver, static_cast<std::uint64_t>(r)));
    if (o.diverged) ++s.diverged;
    else if (std::abs(o.energy - reference_energy) <= kEnergyTol) ++s.successes;
  }
  return s;
}

double ground_state_probability(const CouplingMatrix& J, const SolverConfig& cfg, int runs,
                                double reference_energy, std::uint64_t base_seed, std::uint64_t instance) {
  return ground_state_stats(J, cfg, runs, reference_energy, base_seed, instance).p_gs();
}

TuneResult tune(const CouplingMatrix& J, const SolverConfig& base, const TuneGrid& grid, double reference_energy,
                std::uint64_t base_seed, std::uint64_t instance) {
  TuneResult best;
  best.best = base;
  if (grid.runs <= 0) return best;
  const auto cands = tune_candidates(base, grid);
  best.candidates = static_cast<int>(cands.size());
  best.p_gs = -1.0;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const std::uint64_t prelim_seed = derive_seed({base_seed, 0x74756e65u, c});
    const double p = ground_state_probability(J, cands[c], grid.runs, reference_energy, prelim_seed, instance);
    if (p > best.p_gs) {
      best.p_gs = p;
      best.best = cands[c];
    }
  }
  return best;
}

std::vector<double> linspace_step(double from, double to, double step) {
  require(step > 0.0 && to >= from, "grid needs step > 0 and to >= from");
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (long k = 0; k < count; ++k) v.push_back(std::round((from + k * step) * 1e12) / 1e12);
  return v;
}

CouplingMatrix build_graph(GraphFamily family, int n, double J, double G, int k, std::uint64_t seed) {
  switch (family) {
    case GraphFamily::mobius: return mobius_ladder(n, J);
    case GraphFamily::jg: return jg_cyclic(n, J, G, k);
    case GraphFamily::sk: return sk_instance(n, seed);
    case GraphFamily::three_regular: return three_regular_instance(n, seed);
  }
  throw ValidationError("unhandled graph family");
}

std::vector<SweepMarker> sweep_markers(const SweepSpec& spec) {
  std::vector<SweepMarker> m;
  if (spec.family == GraphFamily::mobius && spec.param == "J" && spec.n % 4 == 0) {
    const auto th = mobius_thresholds(spec.n);
    m.push_back({"J_e", th.J_e});
    m.push_back({"J_crit", th.J_crit});
  } else if (spec.family == GraphFamily::jg && spec.n == 8 && (spec.k == 2 || spec.k == 3)) {
    for (const auto& line : jg_boundaries(spec.k)) {
      const std::string kind = line.kind == BoundaryLine::Kind::energy ? "energy" : "eigenvalue";
      // the line a J + b G = c crossed along the swept coordinate
      if (spec.param == "J" && line.a != 0.0) m.push_back({kind + ":" + line.label, (line.c - line.b * spec.G) / line.a});
      if (spec.param == "G" && line.b != 0.0) m.push_back({kind + ":" + line.label, (line.c - line.a * spec.J) / line.b});
    }
  }
  return m;
}

SweepTable sweep(const SweepSpec& spec) {
  require(!spec.values.empty(), "sweep grid is empty");
  require(!spec.solvers.empty(), "sweep needs at least one solver");
  require(spec.runs >= 1, "runs must be at least 1");
  require(spec.param == "J" || spec.param == "G", "swept parameter must be J or G");
  require(spec.family == GraphFamily::mobius || spec.family == GraphFamily::jg,
          "sweeps are defined for the mobius and jg families");
  for (const auto& c : spec.solvers) validate(c);

  std::map<std::string, double> file_refs;
  if (!spec.reference_file.empty()) file_refs = read_reference_file(spec.reference_file);
  else require(spec.n <= kMaxBruteForceSpins, "n exceeds the exhaustive oracle limit; supply a reference file");

  SweepTable table;
  table.markers = sweep_markers(spec);
  for (std::size_t p = 0; p < spec.values.size(); ++p) {
    const double v = spec.values[p];
    const double Jv = spec.param == "J" ? v : spec.J;
    const double Gv = spec.param == "G" ? v : spec.G;
    const CouplingMatrix graph = build_graph(spec.family, spec.n, Jv, Gv, spec.k);
    double ref;
    if (!spec.reference_file.empty()) {
      auto it = file_refs.find(format_double(v));
      if (it == file_refs.end()) throw IoError("reference file has no entry for " + format_double(v));
      ref = it->second;
    } else {
      ref = brute_force_ground(graph).energy;
    }
    for (SolverConfig cfg : spec.solvers) {
      if ((cfg.solver == SolverKind::cim || cfg.solver == SolverKind::mr_cim) && spec.pump_from_J && !cfg.p0)
        cfg.p0 = Jv - 2.0;
      if (spec.tuning.runs > 0) {
        const TuneResult t = tune(graph, cfg, spec.tuning, ref, spec.base_seed, p);
        cfg = t.best;
        std::string note = "tuned,param=" + format_double(v) + ",solver=" + to_string(cfg.solver);
        if (cfg.alpha) note += ",alpha=" + format_double(*cfg.alpha);
        if (cfg.solver == SolverKind::visa) note += ",p_rate=" + format_double(cfg.p_rate);
        if (cfg.solver == SolverKind::me_ht) note += ",beta0=" + format_double(cfg.beta0);
        note += ",prelim_p_gs=" + format_double(t.p_gs);
        table.notes.push_back(note);
      }
      const PgsStats s = ground_state_stats(graph, cfg, spec.runs, ref, spec.base_seed, p);
      table.rows.push_back({v, to_string(cfg.solver), s.p_gs(), s.runs, ref});
    }
  }
  return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  for (const auto& m : table.markers) os << "# marker," << m.label << ',' << format_double(m.value) << '\n';
  for (const auto& n : table.notes) os << "# " << n << '\n';
  os << "param,solver,p_gs,runs,reference_energy\n";
  for (const auto& r : table.rows)
    os << format_double(r.param) << ',' << r.solver << ',' << format_double(r.p_gs) << ',' << r.runs << ','
       << format_double(r.reference_energy) << '\n';
}

ReferenceMode parse_reference_mode(const std::string& name) {
  if (name == "oracle") return ReferenceMode::oracle;
  if (name == "best_found" || name == "best-found") return ReferenceMode::best_found;
  if (name == "file") return ReferenceMode::file;
  throw ValidationError("unknown reference mode '" + name + "' (expected oracle|best_found|file)");
}

std::string to_string(ReferenceMode m) {
  switch (m) {
    case ReferenceMode::oracle: return "oracle";
    case ReferenceMode::best_found: return "best_found";
    case ReferenceMode::file: return "file";
  }
  return "?";
}

std::optional<double> BenchmarkReport::mean_gap(const std::string& solver) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : records)
    if (r.solver == solver && r.proximity_gap) {
      sum += *r.proximity_gap;
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::optional<double> quality_improvement(double O_visa, double O_x) {
  if (O_visa == 0.0) return std::nullopt;
  return (O_visa - O_x) / O_visa;
}

SolverConfig benchmark_config(SolverKind kind, int n) {
  require(n >= 2, "n must be at least 2");
  SolverConfig c = default_config(kind);
  c.normalize_coupling = true;
  if (kind == SolverKind::visa) c.p_rate = 2.0 / (n * resolved_horizon(c));
  return c;
}

BenchmarkReport random_benchmark(const BenchmarkSpec& spec) {
  require(!spec.families.empty(), "benchmark needs at least one graph family");
  require(!spec.solvers.empty(), "benchmark needs at least one solver");
  require(spec.instances >= 1 && spec.best_of >= 1, "instances and best_of must be at least 1");
  require(spec.reference != ReferenceMode::oracle || spec.n <= kMaxBruteForceSpins,
          "oracle reference is limited to n <= " + std::to_string(kMaxBruteForceSpins));
  for (const auto& c : spec.solvers) validate(c);

  struct Instance {
    std::string id;
    std::uint64_t key;
    std::uint64_t seed;
    CouplingMatrix J;
  };
  std::vector<Instance> inst;
  for (GraphFamily f : spec.families)
    for (int i = 0; i < spec.instances; ++i) {
      const std::uint64_t key = derive_seed({static_cast<std::uint64_t>(f), static_cast<std::uint64_t>(i)});
      const std::uint64_t seed = derive_seed({spec.base_seed, key});
      inst.push_back({to_string(f) + "-" + std::to_string(i), key, seed, build_graph(f, spec.n, 0, 0, 0, seed)});
    }

  // Flattened job list: (instance, solver slot, run). Slot == solvers.size() is the reference solver.
  const bool use_ref_solver = spec.reference == ReferenceMode::best_found && spec.reference_solver.has_value();
  const std::size_t slots = spec.solvers.size() + (use_ref_solver ? 1 : 0);
  struct Job {
    std::size_t inst, slot;
    int run;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < inst.size(); ++i)
    for (std::size_t s = 0; s < slots; ++s) {
      const int reps = s < spec.solvers.size() ? spec.best_of : spec.reference_runs;
      for (int r = 0; r < reps; ++r) jobs.push_back({i, s, r});
    }

  std::vector<RunOutcome> out(jobs.size());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const SolverConfig& cfg = job.slot < spec.solvers.size() ? spec.solvers[job.slot] : *spec.reference_solver;
    // slot index joins the key so two configs of the same solver kind get distinct streams
    const std::uint64_t key = derive_seed({inst[job.inst].key, static_cast<std::uint64_t>(job.slot)});
    try {
      out[j] = attempt(inst[job.inst].J, cfg, run_seed(spec.base_seed, key, cfg.solver, static_cast<std::uint64_t>(job.run)));
    } catch (const ValidationError& e) {
      err.capture(e, true);
    } catch (const std::exception& e) {
      err.capture(e, false);
    }
  }
  err.rethrow();

  // best energy per (instance, slot)
  std::vector<std::vector<std::optional<double>>> best(inst.size(), std::vector<std::optional<double>>(slots));
  std::vector<std::vector<double>> wall(inst.size(), std::vector<double>(slots, 0.0));
  std::vector<std::vector<int>> div(inst.size(), std::vector<int>(slots, 0));
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto& o = out[j];
    auto& b = best[jobs[j].inst][jobs[j].slot];
    wall[jobs[j].inst][jobs[j].slot] += o.wall_time;
    if (o.diverged) {
      ++div[jobs[j].inst][jobs[j].slot];
      continue;
    }
    if (!b || o.energy < *b) b = o.energy;
  }

  std::map<std::string, double> file_refs;
  if (spec.reference == ReferenceMode::file) file_refs = read_reference_file(spec.reference_file);

  BenchmarkReport rep;
  rep.n = spec.n;
  rep.reference_mode = to_string(spec.reference);
  for (std::size_t i = 0; i < inst.size(); ++i) {
    double ref = 0.0;
    switch (spec.reference) {
      case ReferenceMode::oracle: ref = brute_force_ground(inst[i].J).energy; break;
      case ReferenceMode::file: {
        auto it = file_refs.find(inst[i].id);
        if (it == file_refs.end()) throw IoError("reference file has no entry for " + inst[i].id);
        ref = it->second;
        break;
      }
      case ReferenceMode::best_found: {
        std::optional<double> lo;
        for (const auto& b : best[i])
          if (b && (!lo || *b < *lo)) lo = b;
        if (!lo) throw DivergenceError("every run diverged on instance " + inst[i].id);
        ref = *lo;
        break;
      }
    }
    for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
      InstanceRecord r;
      r.instance = inst[i].id;
      r.seed = inst[i].seed;
      r.solver = to_string(spec.solvers[s].solver);
      r.best_energy = best[i][s];
      r.reference_energy = ref;
      // objective O = -H_I; the gap is meaningful only for a positive reference objective
      if (r.best_energy && -ref > 0.0) r.proximity_gap = (-*r.best_energy) / (-ref);
      r.diverged = div[i][s];
      r.wall_time = wall[i][s];
      rep.records.push_back(std::move(r));
    }
    // quality improvement of VISA over the best competing solver
    std::optional<std::size_t> visa_slot;
    for (std::size_t s = 0; s < spec.solvers.size(); ++s)
      if (spec.solvers[s].solver == SolverKind::visa && !visa_slot) visa_slot = s;
    if (!visa_slot) continue;
    QualityRecord q;
    q.instance = inst[i].id;
    std::optional<double> best_other;
    for (std::size_t s = 0; s < spec.solvers.size(); ++s) {
      if (s == *visa_slot || !best[i][s]) continue;
      if (!best_other || *best[i][s] < *best_other) {
        best_other = best[i][s];
        q.best_competitor = to_string(spec.solvers[s].solver);
      }
    }
    if (best_other && best[i][*visa_slot]) q.improvement = quality_improvement(-*best[i][*visa_slot], -*best_other);
    rep.quality.push_back(std::move(q));
  }
  return rep;
}

std::string report_json(const BenchmarkReport& report, bool include_timing) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["schema"] = 1;
  j["n"] = report.n;
  j["reference_mode"] = report.reference_mode;
  j["objective"] = "O = -H_I, H_I = -sum_{i<j} J_ij s_i s_j; proximity_gap = O_found / O_reference";
  json recs = json::array();
  for (const auto& r : report.records) {
    json o;
    o["instance"] = r.instance;
    o["seed"] = r.seed;
    o["solver"] = r.solver;
    o["best_energy"] = opt(r.best_energy);
    o["reference_energy"] = r.reference_energy;
    o["proximity_gap"] = opt(r.proximity_gap);
    o["diverged"] = r.diverged;
    if (include_timing) o["wall_time"] = r.wall_time;
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  json qual = json::array();
  for (const auto& q : report.quality)
    qual.push_back({{"instance", q.instance}, {"best_competitor", q.best_competitor}, {"improvement", opt(q.improvement)}});
  j["quality_improvement"] = std::move(qual);
  json means = json::object();
  std::vector<std::string> seen;
  for (const auto& r : report.records)
    if (std::find(seen.begin(), seen.end(), r.solver) == seen.end()) {
      seen.push_back(r.solver);
      means[r.solver] = opt(report.mean_gap(r.solver));
    }
  j["mean_proximity_gap"] = std::move(means);
  return j.dump(2);
}

}  // namespace visa
