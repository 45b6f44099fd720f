#include <cmath>
#include <stdexcept>
#include <vector>

#include "blmac/asymptotic.hpp"
#include "blmac/errors.hpp"
#include "blmac/quadrature.hpp"
#include "doctest.h"

using namespace blmac;

namespace {

// Fixed-grid Simpson oracle for integrals of f(x) e^{-x} over [a, 50],
// independent of the adaptive machinery under test.
template <class F>
double grid_integral(F&& f, double a, int panels = 400000) {
  const double b = 50.0;
  if (a >= b) return 0.0;
  const double h = (b - a) / panels;
  auto g = [&](double x) { return f(x) * std::exp(-x); };
  double sum = g(a) + g(b);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return sum * h / 3.0;
}

// Spent power at a water level: E[(beta - sigma2/g)^+] for unit-exp g.
double spent_power(double beta, double sigma2) {
  if (beta <= sigma2 / 50.0) return 0.0;
  return grid_integral([&](double g) { return beta - sigma2 / g; }, sigma2 / beta);
}

AsymptoticConfig config_at(double snr_db, int k) {
  AsymptoticConfig cfg = AsymptoticConfig::from_snr_db(snr_db, k);
  return cfg;
}

}  // namespace

TEST_CASE("lone water level satisfies its defining constraint") {
  for (double snr : {0.0, 10.0, 20.0}) {
    const AsymptoticConfig cfg = config_at(snr, 1);
    const double beta = solve_beta_star(cfg.sigma2, cfg.p_max, cfg.quadrature());
    CHECK(spent_power(beta, cfg.sigma2) ==
          doctest::Approx(cfg.p_max).epsilon(1e-8));
  }
}

TEST_CASE("lone water level matches a coarse grid scan") {
  // Independent bracketing: scan levels until the spent power crosses p_max,
  // then bisect on the oracle integral.
  const AsymptoticConfig cfg = config_at(10.0, 1);
  double lo = cfg.sigma2;
  double hi = cfg.sigma2 + cfg.p_max;
  while (spent_power(hi, cfg.sigma2) < cfg.p_max) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (spent_power(mid, cfg.sigma2) < cfg.p_max ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  const double beta = solve_beta_star(cfg.sigma2, cfg.p_max, cfg.quadrature());
  CHECK(beta == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(beta == doctest::Approx(13.0277617233).epsilon(1e-9));
}

TEST_CASE("partition constants are frozen across the SNR range") {
  struct Expected {
    double snr, beta, omega, rate;
  };
  const std::vector<Expected> table = {
      {0.0, 2.53952874884, 0.325493417993, 1.0285389254},
      {10.0, 13.0277617233, 0.0738871249164, 2.97942186533},
      {20.0, 105.082278623, 0.0094712152655, 5.89632600259},
  };
  for (const Expected& e : table) {
    const PartitionAsymptotics pa = partition_asymptotics(config_at(e.snr, 5));
    CHECK(pa.beta_star == doctest::Approx(e.beta).epsilon(1e-9));
    CHECK(pa.omega == doctest::Approx(e.omega).epsilon(1e-9));
    CHECK(pa.rate == doctest::Approx(e.rate).epsilon(1e-9));
    CHECK(pa.nse == doctest::Approx(nse_partition_inf(5, pa.omega, pa.rate)));
  }
}

TEST_CASE("unused fraction is the gain mass below the cutoff") {
  // With sigma2/beta = ln 2 exactly half the gain law lies below the cutoff.
  CHECK(omega_inf(1.0 / 0.6931471805599453, 1.0) == doctest::Approx(0.5));
  CHECK(omega_inf(1e9, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("per-channel rate matches a fixed-grid oracle at the unit level") {
  // rate at beta = sigma2 reduces to the integral of log2(g) e^{-g} on
  // [1, inf), evaluated here on a dense fixed grid.
  const double oracle = grid_integral([](double g) { return std::log2(g); }, 1.0);
  CHECK(rate_inf(1.0, 1.0) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("partition NSE follows the geometric activation series") {
  CHECK(nse_partition_inf(3, 0.5, 2.0) == doctest::Approx(3.5));
  CHECK(nse_partition_inf(1, 0.25, 2.0) == doctest::Approx(2.0));
  // Degenerate ratio: each arrival leaves everything, so activity adds up.
  CHECK(nse_partition_inf(4, 1.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("water-level chain is frozen on the quadrature path") {
  const WaterLevelChain chain = solve_beta_chain(config_at(10.0, 3));
  REQUIRE(chain.levels.size() == 3);
  CHECK(chain.levels[0] == doctest::Approx(13.0277617233).epsilon(1e-8));
  CHECK(chain.levels[1] == doctest::Approx(26.1039276449).epsilon(1e-8));
  CHECK(chain.levels[2] == doctest::Approx(51.8687089077).epsilon(1e-8));
  CHECK(chain.rates[0] == doctest::Approx(2.97942186533).epsilon(1e-8));
  CHECK(chain.rates[1] == doctest::Approx(1.18989650189).epsilon(1e-8));
  CHECK(chain.rates[2] == doctest::Approx(0.539343097302).epsilon(1e-8));
  for (int k = 0; k < 3; ++k) {
    CHECK(chain.method[k] == EvalMethod::quadrature);
    CHECK(chain.level_stderr[k] == 0.0);
    CHECK(chain.rate_stderr[k] == 0.0);
  }
}

TEST_CASE("chain levels rise and rates fall with arrival order") {
  for (double snr : {0.0, 10.0}) {
    const WaterLevelChain chain = solve_beta_chain(config_at(snr, 3));
    for (std::size_t k = 1; k < chain.levels.size(); ++k) {
      CHECK(chain.levels[k] >= chain.levels[k - 1]);
      CHECK(chain.rates[k] <= chain.rates[k - 1]);
    }
  }
}

TEST_CASE("first chain entry coincides with the lone-transmitter constants") {
  const AsymptoticConfig cfg = config_at(10.0, 2);
  const WaterLevelChain chain = solve_beta_chain(cfg);
  CHECK(chain.levels[0] ==
        doctest::Approx(solve_beta_star(cfg.sigma2, cfg.p_max, cfg.quadrature()))
            .epsilon(1e-9));
  CHECK(rate_k_inf(chain, 1, cfg) == doctest::Approx(chain.rates[0]).epsilon(1e-9));
}

TEST_CASE("monte carlo deep levels agree with quadrature") {
  // Force the second entry onto the sampling path and compare it with the
  // quadrature value of the same entry.
  AsymptoticConfig mc_cfg = config_at(10.0, 2);
  mc_cfg.quad_depth_limit = 1;
  mc_cfg.mc_samples = 1000000;
  const WaterLevelChain mc = solve_beta_chain(mc_cfg);
  REQUIRE(mc.method[1] == EvalMethod::monte_carlo);
  CHECK(mc.level_stderr[1] > 0.0);
  CHECK(mc.rate_stderr[1] > 0.0);

  const WaterLevelChain quad = solve_beta_chain(config_at(10.0, 2));
  REQUIRE(quad.method[1] == EvalMethod::quadrature);
  CHECK(std::abs(mc.levels[1] - quad.levels[1]) <= 4.0 * mc.level_stderr[1]);
  CHECK(std::abs(mc.rates[1] - quad.rates[1]) <= 4.0 * mc.rate_stderr[1]);
}

TEST_CASE("monte carlo chains reproduce for a fixed seed") {
  AsymptoticConfig cfg = config_at(10.0, 2);
  cfg.quad_depth_limit = 1;
  cfg.mc_samples = 20000;
  const WaterLevelChain a = solve_beta_chain(cfg);
  const WaterLevelChain b = solve_beta_chain(cfg);
  CHECK(a.levels[1] == b.levels[1]);
  CHECK(a.rates[1] == b.rates[1]);
  cfg.mc_seed = 1234;
  const WaterLevelChain c = solve_beta_chain(cfg);
  CHECK(a.levels[1] != c.levels[1]);
}

TEST_CASE("sharing NSE sums the chain rates") {
  const WaterLevelChain chain = solve_beta_chain(config_at(10.0, 3));
  CHECK(nse_sharing_inf(chain) ==
        doctest::Approx(chain.rates[0] + chain.rates[1] + chain.rates[2]));
}

TEST_CASE("capped partition NSE scales linearly until the band saturates") {
  const BlNse full = nse_partition_bl(5, 50, 10, 3.0);
  CHECK(full.value == doctest::Approx(3.0));
  CHECK(!full.exceeds_partition_capacity);
  const BlNse exact = nse_partition_bl(25, 50, 2, 3.0);
  CHECK(exact.value == doctest::Approx(3.0));
  CHECK(!exact.exceeds_partition_capacity);
  const BlNse over = nse_partition_bl(25, 50, 3, 3.0);
  CHECK(over.value == doctest::Approx(4.5));
  CHECK(over.exceeds_partition_capacity);
  // Linearity in the cap.
  CHECK(nse_partition_bl(5, 50, 4, 3.0).value ==
        doctest::Approx(2.0 * nse_partition_bl(5, 50, 2, 3.0).value));
}

TEST_CASE("the analytic cap rule covers its corner cases") {
  // A lone transmitter should never be capped below the full band.
  CHECK(optimal_bl(1, 50, 0.3) == 50);
  // When arrivals leave nothing behind the rule reduces to an even split.
  CHECK(optimal_bl(5, 50, 1e-15) == 10);
  CHECK(optimal_bl(3, 10, 1e-15) == 4);  // ceil of 10/3
  // Frozen operating points.
  CHECK(optimal_bl(25, 50, 0.0738871249164) == 3);
  CHECK(optimal_bl(25, 50, 0.0738871249164, BlRounding::nearest) == 2);
  CHECK(optimal_bl(15, 50, 0.325493417993) == 5);
  // The result stays inside [1, N].
  CHECK(optimal_bl(50, 50, 1e-15) == 1);
  CHECK(optimal_bl(2, 4, 0.999999999) >= 1);
}

TEST_CASE("starved sampling reports an unusable estimate") {
  // Twelve arrivals confine the deep region to a sliver no tiny sample set
  // can hit; the chain must refuse rather than return noise.
  AsymptoticConfig cfg = config_at(10.0, 12);
  cfg.quad_depth_limit = 3;
  cfg.mc_samples = 4;
  CHECK_THROWS_AS(solve_beta_chain(cfg), MCVarianceTooHigh);
}

TEST_CASE("asymptotic configs validate their numeric fields") {
  AsymptoticConfig cfg = config_at(10.0, 2);
  cfg.sigma2 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = config_at(10.0, 2);
  cfg.mc_samples = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = config_at(10.0, 2);
  cfg.num_transmitters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
