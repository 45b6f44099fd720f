#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "blmac/csv.hpp"
#include "blmac/experiments.hpp"
#include "doctest.h"

using namespace blmac;

namespace {

const NetworkConfig kSmall = NetworkConfig::from_snr_db(3, 10, 10.0);

std::string provenance_value(const ResultTable& table, const std::string& key) {
  for (const auto& [k, v] : table.provenance())
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("a single trial has zero spread") {
  const TrialStats stats = run_trials({kSmall}, 1, 42);
  CHECK(stats.nse.trials == 1);
  CHECK(stats.nse.stderr_ == 0.0);
  CHECK(stats.nse.mean > 0.0);
  CHECK(stats.rate_per_channel.size() == 3);
  CHECK(stats.omega.size() == 3);
  CHECK(stats.available_fraction.size() == 3);
}

TEST_CASE("trial statistics reproduce exactly for a fixed seed") {
  const TrialStats a = run_trials({kSmall}, 50, 7);
  const TrialStats b = run_trials({kSmall}, 50, 7);
  CHECK(a.nse.mean == b.nse.mean);
  CHECK(a.nse.stderr_ == b.nse.stderr_);
  for (int k = 0; k < 3; ++k) {
    CHECK(a.omega[k].mean == b.omega[k].mean);
    CHECK(a.rate_per_channel[k].mean == b.rate_per_channel[k].mean);
  }
  const TrialStats c = run_trials({kSmall}, 50, 8);
  CHECK(a.nse.mean != c.nse.mean);
}

TEST_CASE("standard error shrinks like the square root of the trial count") {
  const TrialStats few = run_trials({kSmall}, 100, 3);
  const TrialStats many = run_trials({kSmall}, 400, 3);
  const double ratio = many.nse.stderr_ / few.nse.stderr_;
  CHECK(ratio > 0.35);
  CHECK(ratio < 0.65);
}

TEST_CASE("a cap of the full band is the uncapped point") {
  // Both points see identical per-trial draws, so the aggregates agree bit
  // for bit, not just statistically.
  const TrialStats none = run_trials({kSmall, Scenario::partition}, 20, 5);
  const TrialStats full =
      run_trials({kSmall, Scenario::partition, BLPolicy::capped(10)}, 20, 5);
  CHECK(none.nse.mean == full.nse.mean);
  CHECK(none.nse.stderr_ == full.nse.stderr_);
}

TEST_CASE("load prescribes the transmitter count") {
  CHECK(transmitters_for_load(0.5, 50) == 25);
  CHECK(transmitters_for_load(0.3, 50) == 15);
  CHECK(transmitters_for_load(1.0, 50) == 50);
  CHECK(transmitters_for_load(0.01, 50) == 1);
  CHECK_THROWS_AS(transmitters_for_load(0.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(transmitters_for_load(-0.5, 50), std::invalid_argument);
}

TEST_CASE("scenario names are the lowercase regime words") {
  CHECK(std::string(scenario_name(Scenario::partition)) == "partition");
  CHECK(std::string(scenario_name(Scenario::sharing)) == "sharing");
}

TEST_CASE("point statistics append in canonical row order") {
  ResultTable table({"l", "statistic", "mean", "stderr", "trials"});
  const TrialStats stats = run_trials({NetworkConfig::from_snr_db(2, 6, 10.0)}, 4, 1);
  append_point_statistics(table, {std::int64_t{3}}, stats);
  const std::size_t col = table.column_index("statistic");
  REQUIRE(table.rows().size() == 7);
  CHECK(std::get<std::string>(table.rows()[0][col]) == "nse");
  CHECK(std::get<std::string>(table.rows()[1][col]) == "omega_1");
  CHECK(std::get<std::string>(table.rows()[2][col]) == "rate_per_channel_1");
  CHECK(std::get<std::string>(table.rows()[3][col]) == "available_1");
  CHECK(std::get<std::string>(table.rows()[4][col]) == "omega_2");
  // Every row repeats the sweep coordinate.
  for (const auto& row : table.rows())
    CHECK(std::get<std::int64_t>(row[table.column_index("l")]) == 3);
}

TEST_CASE("provenance stamps version, seed, and config digest") {
  ResultTable table({"x"});
  stamp_provenance(table, "demo", 42, "k=2 n=6", true);
  CHECK(!provenance_value(table, "version").empty());
  CHECK(provenance_value(table, "experiment") == "demo");
  CHECK(provenance_value(table, "seed") == "42");
  CHECK(provenance_value(table, "config") == "k=2 n=6");
  CHECK(!provenance_value(table, "config_hash").empty());
  CHECK(provenance_value(table, "grids") == "reconstructed-default");

  ResultTable custom({"x"});
  stamp_provenance(custom, "demo", 42, "k=2 n=6", false);
  CHECK(provenance_value(custom, "grids").empty());
}

TEST_CASE("convergence study sweeps the channel grid toward the limit") {
  ConvergenceStudy study;
  study.channel_counts = {5, 10};
  study.trials = 20;
  const ResultTable table = convergence_table(study);
  // One row per (N, arrival) pair.
  REQUIRE(table.rows().size() == 4);
  const std::size_t n_col = table.column_index("N");
  const std::size_t asy_col = table.column_index("asymptotic");
  CHECK(table.number_at(0, n_col) == 5);
  CHECK(table.number_at(2, n_col) == 10);
  // The limit column does not depend on N.
  CHECK(table.number_at(0, asy_col) == doctest::Approx(table.number_at(2, asy_col)));
  CHECK(table.has_column("sim_mean"));
  CHECK(table.has_column("sim_stderr"));

  ConvergenceStudy bad;
  bad.channel_counts = {10, 5};
  CHECK_THROWS_AS(convergence_table(bad), std::invalid_argument);
}

TEST_CASE("cap sweep emits both regimes with an uncapped baseline row") {
  BlSweepStudy study;
  study.num_channels = 6;
  study.loads = {0.5};
  study.trials = 5;
  const ResultTable table = bl_sweep_table(study);
  const std::size_t l_col = table.column_index("l");
  const std::size_t stat_col = table.column_index("statistic");
  const std::size_t mean_col = table.column_index("mean");
  const std::size_t scen_col = table.column_index("scenario");

  double uncapped = -1.0;
  double at_full_cap = -2.0;
  bool saw_sharing = false;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    if (std::get<std::string>(table.rows()[r][stat_col]) != "nse") continue;
    const std::string scen = std::get<std::string>(table.rows()[r][scen_col]);
    saw_sharing = saw_sharing || scen == "sharing";
    if (scen != "partition") continue;
    const double l = table.number_at(r, l_col);
    if (l == 0.0) uncapped = table.number_at(r, mean_col);
    if (l == 6.0) at_full_cap = table.number_at(r, mean_col);
  }
  // Cap 0 encodes the uncapped baseline; a cap of N reproduces it exactly.
  CHECK(uncapped == at_full_cap);
  CHECK(saw_sharing);
}

TEST_CASE("optimal cap study reports the argmax against the analytic rule") {
  OptimalBlStudy study;
  study.num_channels = 8;
  study.loads = {0.5};
  study.trials = 10;
  const ResultTable table = optimal_bl_table(study);
  REQUIRE(table.rows().size() == 1);
  const double emp = table.number_at(0, table.column_index("empirical_l"));
  const double ana = table.number_at(0, table.column_index("analytic_l"));
  const double diff = table.number_at(0, table.column_index("abs_diff"));
  CHECK(diff == doctest::Approx(std::abs(emp - ana)));
  CHECK(emp >= 1.0);
  CHECK(emp <= 8.0);
}

TEST_CASE("load sweep records capped and uncapped values per point") {
  LoadSweepStudy study;
  study.num_channels = 6;
  study.snr_dbs = {10.0};
  study.loads = {0.5};
  study.trials = 5;
  const ResultTable table = load_sweep_table(study);
  REQUIRE(table.rows().size() == 1);
  CHECK(table.number_at(0, table.column_index("k")) == 3);
  CHECK(table.number_at(0, table.column_index("best_l")) >= 1);
  CHECK(table.number_at(0, table.column_index("nse_bl")) >=
        table.number_at(0, table.column_index("nse_nobl")) - 1e-12);
  CHECK(std::get<std::string>(
            table.rows()[0][table.column_index("scenario")]) == "partition");
}

TEST_CASE("campaign tables serialize deterministically") {
  BlSweepStudy study;
  study.num_channels = 5;
  study.loads = {0.4};
  study.trials = 3;
  CHECK(to_csv(bl_sweep_table(study)) == to_csv(bl_sweep_table(study)));
}
