#include "blmac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blmac/version.hpp"

namespace blmac {

namespace {

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.trials = static_cast<int>(values.size());
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return a;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - a.mean;
    ss += d * d;
  }
  const double n = static_cast<double>(values.size());
  a.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return a;
}

std::string hex16(std::uint64_t v) {
  char buf[16];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[v & 0xF];
    v >>= 4;
  }
  return std::string(buf, 16);
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

ScenarioOutcome run_scenario(const GainMatrix& gains, const NetworkConfig& config,
                             Scenario scenario, const BLPolicy& bl) {
  return scenario == Scenario::partition ? run_partition(gains, config, bl)
                                         : run_sharing(gains, config, bl);
}

// Best cap by mean NSE over l = 1..N, ties to the smaller cap. Returns the
// winning cap and its aggregate.
std::pair<int, Aggregate> best_cap(const NetworkConfig& config, Scenario scenario,
                                   int trials, std::uint64_t master_seed) {
  int best_l = 1;
  Aggregate best;
  for (int l = 1; l <= config.num_channels(); ++l) {
    const TrialStats stats =
        run_trials({config, scenario, BLPolicy::capped(l)}, trials, master_seed);
    if (l == 1 || stats.nse.mean > best.mean) {
      best_l = l;
      best = stats.nse;
    }
  }
  return {best_l, best};
}

}  // namespace

const char* scenario_name(Scenario scenario) {
  return scenario == Scenario::partition ? "partition" : "sharing";
}

int transmitters_for_load(double load, int num_channels) {
  if (!(load > 0.0) || !std::isfinite(load))
    throw std::invalid_argument("transmitters_for_load: load must be positive");
  const long k = std::lround(load * static_cast<double>(num_channels));
  return static_cast<int>(std::max(1L, k));
}

AsymptoticConfig AsymptoticNumerics::config(double snr_db,
                                            int num_transmitters) const {
  AsymptoticConfig cfg = AsymptoticConfig::from_snr_db(snr_db, num_transmitters);
  cfg.quad_rel_tol = quad_rel_tol;
  cfg.tail_cutoff = tail_cutoff;
  cfg.mc_samples = mc_samples;
  cfg.quad_depth_limit = quad_depth_limit;
  cfg.mc_seed = mc_seed;
  cfg.validate();
  return cfg;
}

TrialStats run_trials(const TrialPoint& point, int trials,
                      std::uint64_t master_seed) {
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  const int k_count = point.config.num_transmitters();
  std::vector<double> nse_values;
  nse_values.reserve(static_cast<std::size_t>(trials));
  std::vector<std::vector<double>> rate_values(static_cast<std::size_t>(k_count));
  std::vector<std::vector<double>> omega_values(static_cast<std::size_t>(k_count));
  std::vector<std::vector<double>> avail_values(static_cast<std::size_t>(k_count));

  const double n = static_cast<double>(point.config.num_channels());
  for (int trial = 0; trial < trials; ++trial) {
    const GainMatrix gains = sample_gains(
        point.config, {master_seed, static_cast<std::uint64_t>(trial)});
    const ScenarioOutcome outcome =
        run_scenario(gains, point.config, point.scenario, point.bl);
    nse_values.push_back(outcome.nse);
    for (int k = 0; k < k_count; ++k) {
      const TransmitterResult& tr =
          outcome.transmitters[static_cast<std::size_t>(k)];
      rate_values[static_cast<std::size_t>(k)].push_back(tr.rate_per_channel);
      omega_values[static_cast<std::size_t>(k)].push_back(tr.accessible_fraction);
      avail_values[static_cast<std::size_t>(k)].push_back(
          static_cast<double>(tr.available_count) / n);
    }
  }

  TrialStats stats;
  stats.nse = aggregate(nse_values);
  for (int k = 0; k < k_count; ++k) {
    stats.rate_per_channel.push_back(aggregate(rate_values[static_cast<std::size_t>(k)]));
    stats.omega.push_back(aggregate(omega_values[static_cast<std::size_t>(k)]));
    stats.available_fraction.push_back(aggregate(avail_values[static_cast<std::size_t>(k)]));
  }
  return stats;
}

void append_point_statistics(ResultTable& table, std::vector<Cell> coordinates,
                             const TrialStats& stats) {
  const auto add = [&](const std::string& name, const Aggregate& a) {
    std::vector<Cell> row = coordinates;
    row.emplace_back(name);
    row.emplace_back(a.mean);
    row.emplace_back(a.stderr_);
    row.emplace_back(static_cast<std::int64_t>(a.trials));
    table.add_row(std::move(row));
  };
  add("nse", stats.nse);
  for (std::size_t k = 0; k < stats.omega.size(); ++k) {
    const std::string suffix = std::to_string(k + 1);
    add("omega_" + suffix, stats.omega[k]);
    add("rate_per_channel_" + suffix, stats.rate_per_channel[k]);
    add("available_" + suffix, stats.available_fraction[k]);
  }
}

void stamp_provenance(ResultTable& table, const std::string& experiment,
                      std::uint64_t master_seed, const std::string& config,
                      bool default_grids) {
  table.add_provenance("version", kVersion);
  table.add_provenance("experiment", experiment);
  table.add_provenance("seed", std::to_string(master_seed));
  table.add_provenance("config", config);
  table.add_provenance("config_hash", hex16(fnv1a64(config)));
  if (default_grids) table.add_provenance("grids", "reconstructed-default");
}

ResultTable convergence_table(const ConvergenceStudy& study) {
  if (study.channel_counts.empty())
    throw std::invalid_argument("convergence_table: channel count grid is empty");
  if (!std::is_sorted(study.channel_counts.begin(), study.channel_counts.end()))
    throw std::invalid_argument("convergence_table: channel counts must be increasing");
  if (study.trials < 1)
    throw std::invalid_argument("convergence_table: trials must be >= 1");

  const AsymptoticConfig acfg =
      study.numerics.config(study.snr_db, study.num_transmitters);
  const WaterLevelChain chain = solve_beta_chain(acfg);

  ResultTable table({"N", "k", "sim_mean", "sim_stderr", "asymptotic"});
  std::ostringstream config;
  config << "snr_db=" << format_number(study.snr_db)
         << " k=" << study.num_transmitters
         << " n_list=" << join_ints(study.channel_counts)
         << " trials=" << study.trials;
  stamp_provenance(table, "convergence", study.master_seed, config.str(),
                   study.channel_counts == ConvergenceStudy{}.channel_counts);

  for (int n : study.channel_counts) {
    const NetworkConfig cfg = NetworkConfig::from_snr_db(
        study.num_transmitters, n, study.snr_db);
    const TrialStats stats = run_trials({cfg, Scenario::sharing, BLPolicy::none()},
                                        study.trials, study.master_seed);
    for (int k = 1; k <= study.num_transmitters; ++k) {
      const Aggregate& a = stats.rate_per_channel[static_cast<std::size_t>(k - 1)];
      table.add_row({static_cast<std::int64_t>(n), static_cast<std::int64_t>(k),
                     a.mean, a.stderr_,
                     chain.rates[static_cast<std::size_t>(k - 1)]});
    }
  }
  return table;
}

ResultTable bl_sweep_table(const BlSweepStudy& study) {
  if (study.loads.empty())
    throw std::invalid_argument("bl_sweep_table: load grid is empty");
  if (study.trials < 1)
    throw std::invalid_argument("bl_sweep_table: trials must be >= 1");

  ResultTable table({"load", "scenario", "l", "statistic", "mean", "stderr", "trials"});
  std::ostringstream config;
  config << "n=" << study.num_channels << " snr_db=" << format_number(study.snr_db)
         << " loads=" << join_doubles(study.loads) << " trials=" << study.trials;
  stamp_provenance(table, "bl-sweep", study.master_seed, config.str(),
                   study.loads == BlSweepStudy{}.loads);

  for (double load : study.loads) {
    const int k_count = transmitters_for_load(load, study.num_channels);
    const NetworkConfig cfg = NetworkConfig::from_snr_db(
        k_count, study.num_channels, study.snr_db);
    for (Scenario scenario : {Scenario::partition, Scenario::sharing}) {
      // l = 0 is the uncapped baseline; 1..N sweep the cap.
      for (int l = 0; l <= study.num_channels; ++l) {
        const BLPolicy bl = l == 0 ? BLPolicy::none() : BLPolicy::capped(l);
        const TrialStats stats =
            run_trials({cfg, scenario, bl}, study.trials, study.master_seed);
        table.add_row({load, std::string(scenario_name(scenario)),
                       static_cast<std::int64_t>(l), std::string("nse"),
                       stats.nse.mean, stats.nse.stderr_,
                       static_cast<std::int64_t>(stats.nse.trials)});
      }
    }
  }
  return table;
}

ResultTable optimal_bl_table(const OptimalBlStudy& study) {
  if (study.loads.empty())
    throw std::invalid_argument("optimal_bl_table: load grid is empty");
  if (study.trials < 1)
    throw std::invalid_argument("optimal_bl_table: trials must be >= 1");

  ResultTable table({"load", "k", "empirical_l", "analytic_l", "abs_diff", "trials"});
  std::ostringstream config;
  config << "n=" << study.num_channels << " snr_db=" << format_number(study.snr_db)
         << " loads=" << join_doubles(study.loads) << " trials=" << study.trials;
  stamp_provenance(table, "optimal-bl", study.master_seed, config.str(),
                   study.loads == OptimalBlStudy{}.loads);

  for (double load : study.loads) {
    const int k_count = transmitters_for_load(load, study.num_channels);
    const NetworkConfig cfg = NetworkConfig::from_snr_db(
        k_count, study.num_channels, study.snr_db);
    const auto [empirical_l, best] =
        best_cap(cfg, Scenario::partition, study.trials, study.master_seed);
    const PartitionAsymptotics pa =
        partition_asymptotics(study.numerics.config(study.snr_db, k_count));
    const int analytic_l = optimal_bl(k_count, study.num_channels, pa.omega);
    table.add_row({load, static_cast<std::int64_t>(k_count),
                   static_cast<std::int64_t>(empirical_l),
                   static_cast<std::int64_t>(analytic_l),
                   static_cast<std::int64_t>(std::abs(empirical_l - analytic_l)),
                   static_cast<std::int64_t>(best.trials)});
  }
  return table;
}

ResultTable load_sweep_table(const LoadSweepStudy& study) {
  if (study.loads.empty() || study.snr_dbs.empty())
    throw std::invalid_argument("load_sweep_table: grids must be nonempty");
  if (study.trials < 1)
    throw std::invalid_argument("load_sweep_table: trials must be >= 1");

  ResultTable table({"snr_db", "load", "k", "scenario", "best_l", "analytic_l",
                     "nse_bl", "nse_bl_stderr", "nse_nobl", "nse_nobl_stderr",
                     "trials"});
  std::ostringstream config;
  config << "n=" << study.num_channels
         << " snr_db_list=" << join_doubles(study.snr_dbs)
         << " loads=" << join_doubles(study.loads)
         << " scenario=" << scenario_name(study.scenario)
         << " trials=" << study.trials;
  stamp_provenance(table, std::string("load-sweep-") + scenario_name(study.scenario),
                   study.master_seed, config.str(),
                   study.loads == LoadSweepStudy{}.loads &&
                       study.snr_dbs == LoadSweepStudy{}.snr_dbs);

  for (double snr_db : study.snr_dbs) {
    for (double load : study.loads) {
      const int k_count = transmitters_for_load(load, study.num_channels);
      const NetworkConfig cfg =
          NetworkConfig::from_snr_db(k_count, study.num_channels, snr_db);
      const TrialStats baseline = run_trials(
          {cfg, study.scenario, BLPolicy::none()}, study.trials, study.master_seed);
      const auto [best_l, best] =
          best_cap(cfg, study.scenario, study.trials, study.master_seed);
      const PartitionAsymptotics pa =
          partition_asymptotics(study.numerics.config(snr_db, k_count));
      const int analytic_l = optimal_bl(k_count, study.num_channels, pa.omega);
      table.add_row({snr_db, load, static_cast<std::int64_t>(k_count),
                     std::string(scenario_name(study.scenario)),
                     static_cast<std::int64_t>(best_l),
                     static_cast<std::int64_t>(analytic_l), best.mean,
                     best.stderr_, baseline.nse.mean, baseline.nse.stderr_,
                     static_cast<std::int64_t>(study.trials)});
    }
  }
  return table;
}

}  // namespace blmac
