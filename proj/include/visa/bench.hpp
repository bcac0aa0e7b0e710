#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "visa/coupling.hpp"
#include "visa/solvers.hpp"

namespace visa {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

enum class GraphFamily { mobius, jg, sk, three_regular };
std::string to_string(GraphFamily f);
GraphFamily parse_family(const std::string& name);

/// seed for run `run` of solver `solver` on instance `instance`; independent of
/// the order in which runs are scheduled.
std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t instance, SolverKind solver, std::uint64_t run);

struct PgsStats {
  int runs = 0;
  int successes = 0;
  int diverged = 0;  // counted as failures
  double p_gs() const { return runs > 0 ? static_cast<double>(successes) / runs : 0.0; }
};

/// Fraction of seeded runs whose Ising energy is within 1e-9 of the reference.
/// Runs are spread over OpenMP threads; the result does not depend on the
/// thread count.
PgsStats ground_state_stats(const CouplingMatrix& J, const SolverConfig& cfg, int runs, double reference_energy,
                            std::uint64_t base_seed, std::uint64_t instance = 0);
double ground_state_probability(const CouplingMatrix& J, const SolverConfig& cfg, int runs,
                                double reference_energy, std::uint64_t base_seed, std::uint64_t instance = 0);

/// Plain loop over runs in order, kept as the reference for the parallel version.
PgsStats ground_state_stats_serial(const CouplingMatrix& J, const SolverConfig& cfg, int runs,
                                   double reference_energy, std::uint64_t base_seed, std::uint64_t instance = 0);

/// Hyperparameter grid for the preliminary runs. Empty lists leave the field alone.
struct TuneGrid {
  std::vector<double> alpha;
  std::vector<double> p_rate;  // VISA only
  std::vector<double> beta0;   // ME-HT only
  int runs = 0;                // 0 disables tuning
};

struct TuneResult {
  SolverConfig best;
  double p_gs = 0.0;
  int candidates = 0;
};

/// Evaluates every grid candidate on `grid.runs` preliminary runs (seeds
/// disjoint from the main runs) and returns the one with the highest p_GS;
/// ties go to the earlier candidate.
TuneResult tune(const CouplingMatrix& J, const SolverConfig& base, const TuneGrid& grid, double reference_energy,
                std::uint64_t base_seed, std::uint64_t instance = 0);

struct SweepSpec {
  GraphFamily family = GraphFamily::mobius;
  int n = 8;
  double J = 0.4;
  double G = 0.0;
  int k = 2;
  std::string param = "J";  // "J" or "G"
  std::vector<double> values;
  std::vector<SolverConfig> solvers;
  int runs = 1000;
  std::uint64_t base_seed = 0;
  TuneGrid tuning;
  /// Lines "<param value> <reference energy>", required when n exceeds the oracle limit.
  std::string reference_file;
  /// CIM / MR-CIM pump starts at p0 = J - 2 unless the config sets p0.
  bool pump_from_J = true;
};

struct SweepRow {
  double param = 0.0;
  std::string solver;
  double p_gs = 0.0;
  int runs = 0;
  double reference_energy = 0.0;
};

struct SweepMarker {
  std::string label;
  double value;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<SweepMarker> markers;
  std::vector<std::string> notes;  // tuned hyperparameters, one line per (point, solver)
};

/// Values from `from` to `to` inclusive in steps of `step` (rounded to the
/// step grid so 0.1 + k*0.05 does not drift).
std::vector<double> linspace_step(double from, double to, double step);

CouplingMatrix build_graph(GraphFamily family, int n, double J, double G, int k, std::uint64_t seed = 0);

/// Analytic thresholds crossed by the sweep line: J_e and J_crit for Mobius
/// sweeps over J, the J-G boundary lines for n = 8 J-G sweeps.
std::vector<SweepMarker> sweep_markers(const SweepSpec& spec);

SweepTable sweep(const SweepSpec& spec);

/// "# marker,<label>,<value>" and "# tuned,..." lines, then "param,solver,p_gs,runs,reference_energy".
void write_sweep_csv(std::ostream& os, const SweepTable& table);

enum class ReferenceMode { oracle, best_found, file };
ReferenceMode parse_reference_mode(const std::string& name);
std::string to_string(ReferenceMode m);

struct BenchmarkSpec {
  std::vector<GraphFamily> families = {GraphFamily::sk};
  int n = 100;
  int instances = 50;  // per family
  std::vector<SolverConfig> solvers;
  std::uint64_t base_seed = 0;
  ReferenceMode reference = ReferenceMode::best_found;
  std::string reference_file;  // lines "<instance id> <reference ising energy>"
  int best_of = 1;
  /// Extra solver whose runs only feed the best-found reference.
  std::optional<SolverConfig> reference_solver;
  int reference_runs = 4;
};

struct InstanceRecord {
  std::string instance;  // "<family>-<index>"
  std::uint64_t seed = 0;
  std::string solver;
  std::optional<double> best_energy;  // empty when every run diverged
  double reference_energy = 0.0;
  std::optional<double> proximity_gap;  // found objective / reference objective
  int diverged = 0;
  double wall_time = 0.0;
};

struct QualityRecord {
  std::string instance;
  std::string best_competitor;
  std::optional<double> improvement;
};

struct BenchmarkReport {
  int n = 0;
  std::string reference_mode;
  std::vector<InstanceRecord> records;
  std::vector<QualityRecord> quality;
  /// Mean proximity gap per solver over instances where it is defined.
  std::optional<double> mean_gap(const std::string& solver) const;
};

/// (O_visa - O_x) / O_visa; nullopt when O_visa is 0.
std::optional<double> quality_improvement(double O_visa, double O_x);

/// Objective convention: O = -H_I (larger is better), so the proximity gap
/// O_found / O_ref is at most 1 against an exact reference.
BenchmarkReport random_benchmark(const BenchmarkSpec& spec);

/// JSON report with "schema": 1. wall_time fields are the only
/// nondeterministic values; include_timing = false leaves them out.
std::string report_json(const BenchmarkReport& report, bool include_timing = true);

/// Configs used by the random benchmarks: coupling normalized by lambda_max,
/// VISA penalty ramped to P(T) = 2/n.
SolverConfig benchmark_config(SolverKind kind, int n);

}  // namespace visa
