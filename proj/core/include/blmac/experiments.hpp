#ifndef BLMAC_EXPERIMENTS_HPP
#define BLMAC_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "blmac/asymptotic.hpp"
#include "blmac/result_table.hpp"
#include "blmac/simulator.hpp"

namespace blmac {

// One point of a Monte Carlo campaign: a fixed network, regime, and cap.
struct TrialPoint {
  NetworkConfig config;
  Scenario scenario = Scenario::partition;
  BLPolicy bl = BLPolicy::none();
};

// Mean and standard error over the trials of one point. A single trial has
// no spread estimate; its stderr is reported as zero.
struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

// Per-point statistics, each aggregated in trial-index order so the result
// is independent of how the trials were scheduled. Vectors are indexed by
// arrival position (size K).
struct TrialStats {
  Aggregate nse;
  std::vector<Aggregate> rate_per_channel;   // mean R over the accessible set
  std::vector<Aggregate> omega;              // |Z_k| / N after the cap
  std::vector<Aggregate> available_fraction; // channels on offer before the cap
};

TrialStats run_trials(const TrialPoint& point, int trials,
                      std::uint64_t master_seed);

// Numerical controls shared by the campaign runners; system parameters
// (noise, power, K) are filled in per sweep point.
struct AsymptoticNumerics {
  double quad_rel_tol = 1e-9;
  double tail_cutoff = 50.0;
  long mc_samples = 200000;
  int quad_depth_limit = 3;
  std::uint64_t mc_seed = 0xB1C0FFEE5EEDULL;

  AsymptoticConfig config(double snr_db, int num_transmitters) const;
};

// Simulated per-arrival rate per channel against its large-system limit, for
// a growing channel count. Columns: N, k, sim_mean, sim_stderr, asymptotic.
struct ConvergenceStudy {
  double snr_db = 20.0;
  int num_transmitters = 2;
  std::vector<int> channel_counts = {5, 10, 15, 20, 25, 30, 40, 50};
  int trials = 200;
  std::uint64_t master_seed = 42;
  AsymptoticNumerics numerics;
};
ResultTable convergence_table(const ConvergenceStudy& study);

// Network spectral efficiency as a function of the cap L, both regimes, for
// several loads at one SNR. Cap value 0 denotes the uncapped baseline.
// Columns: load, scenario, l, statistic, mean, stderr, trials.
struct BlSweepStudy {
  int num_channels = 50;
  double snr_db = 10.0;
  std::vector<double> loads = {0.2, 0.5, 1.0};
  int trials = 200;
  std::uint64_t master_seed = 42;
};
ResultTable bl_sweep_table(const BlSweepStudy& study);

// Empirical best cap of the partition regime versus the analytic rule, per
// load. Columns: load, k, empirical_l, analytic_l, abs_diff, trials.
struct OptimalBlStudy {
  int num_channels = 50;
  double snr_db = 10.0;
  std::vector<double> loads = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int trials = 200;
  std::uint64_t master_seed = 42;
  AsymptoticNumerics numerics;
};
ResultTable optimal_bl_table(const OptimalBlStudy& study);

// Capped-versus-uncapped NSE across load and SNR for one regime. The capped
// value is taken at the empirically best L of a nested sweep; the analytic
// cap is recorded alongside. Columns: snr_db, load, k, scenario, best_l,
// analytic_l, nse_bl, nse_bl_stderr, nse_nobl, nse_nobl_stderr, trials.
struct LoadSweepStudy {
  int num_channels = 50;
  std::vector<double> snr_dbs = {0.0, 10.0, 20.0};
  std::vector<double> loads = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  Scenario scenario = Scenario::partition;
  int trials = 200;
  std::uint64_t master_seed = 42;
  AsymptoticNumerics numerics;
};
ResultTable load_sweep_table(const LoadSweepStudy& study);

// Appends one sweep point's statistics in long form. The table must end in
// columns statistic, mean, stderr, trials preceded by the sweep coordinates
// passed here. Rows appear as nse first, then omega_k, rate_per_channel_k,
// available_k per arrival in order.
void append_point_statistics(ResultTable& table, std::vector<Cell> coordinates,
                             const TrialStats& stats);

// Number of transmitters that a load prescribes for a band of N channels.
int transmitters_for_load(double load, int num_channels);

// Lowercase regime name used in tables, flags, and provenance.
const char* scenario_name(Scenario scenario);

// Stamps the provenance block every campaign table carries: artifact
// version, experiment name, master seed, the flattened configuration with
// its hash, and whether default grids were used.
void stamp_provenance(ResultTable& table, const std::string& experiment,
                      std::uint64_t master_seed, const std::string& config,
                      bool default_grids);

}  // namespace blmac

#endif
