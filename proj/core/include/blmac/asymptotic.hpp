#ifndef BLMAC_ASYMPTOTIC_HPP
#define BLMAC_ASYMPTOTIC_HPP

#include <cstdint>
#include <vector>

#include "blmac/quadrature.hpp"

namespace blmac {

// Controls for the large-system (N -> infinity) calculations. Channel gains
// follow the unit-mean exponential law throughout; noise and power give the
// operating SNR.
struct AsymptoticConfig {
  double sigma2 = 1.0;
  double p_max = 10.0;
  int num_transmitters = 1;

  double quad_rel_tol = 1e-9;
  double tail_cutoff = 50.0;
  long mc_samples = 200000;
  // Water-level chain entries up to this arrival index are evaluated by
  // nested quadrature; deeper entries switch to Monte Carlo.
  int quad_depth_limit = 3;
  std::uint64_t mc_seed = 0xB1C0FFEE5EEDULL;

  static AsymptoticConfig from_snr_db(double snr_db, int num_transmitters);
  QuadratureControl quadrature() const;
  void validate() const;
};

enum class EvalMethod { quadrature, monte_carlo };

// Water levels and per-channel rates of successive arrivals in the sharing
// regime, in arrival order. Stderr entries are zero on the quadrature path;
// on the Monte Carlo path they give one standard error (for levels, the
// estimator error propagated through the constraint slope).
struct WaterLevelChain {
  std::vector<double> levels;
  std::vector<double> rates;
  std::vector<double> level_stderr;
  std::vector<double> rate_stderr;
  std::vector<EvalMethod> method;
};

// Large-system constants of the partition regime for a single arrival.
struct PartitionAsymptotics {
  double beta_star = 0.0;
  double omega = 0.0;  // fraction of channels an arrival leaves unclaimed
  double rate = 0.0;   // per-channel rate of an arrival
  double nse = 0.0;    // K-transmitter network spectral efficiency
};

// Water level of a lone transmitter over infinitely many channels: the root
// in beta of  E[(beta - sigma2/g)^+] = p_max  with g unit-exponential.
// Bracketed by doubling/halving from sigma2 + p_max, then bisected to a
// relative width of 1e-10.
double solve_beta_star(double sigma2, double p_max,
                       const QuadratureControl& ctl = {});

// Per-channel rate at a given water level: E[log2(beta*g/sigma2)] over the
// channels the transmitter actually uses (g > sigma2/beta).
double rate_inf(double beta_star, double sigma2, const QuadratureControl& ctl = {});

// Probability that a channel is left unused, Pr(g < sigma2/beta*). This is
// the per-arrival shrink factor of the leftover band.
double omega_inf(double beta_star, double sigma2);

// Geometric series over K arrivals: (1 - omega^K) / (1 - omega) * rate, with
// the omega -> 1 limit K * rate taken when the ratio degenerates.
double nse_partition_inf(int num_transmitters, double omega, double rate);

// Convenience bundle of the four partition constants.
PartitionAsymptotics partition_asymptotics(const AsymptoticConfig& config);

// Successive water levels in the sharing regime. Arrival k water-fills
// against the fill level beta_{k-1} * g_{k-1} left by its predecessor on the
// channels where all predecessors were active; its own level is the root of
// that constraint in beta. Indices up to quad_depth_limit run on nested
// quadrature; deeper ones on Monte Carlo over a sample set that is fixed
// across all evaluations, which keeps the estimator monotone in beta so
// bisection applies.
//
// Throws NonConvergence or MCVarianceTooHigh when the numerics cannot
// support the requested depth.
WaterLevelChain solve_beta_chain(const AsymptoticConfig& config);

// Per-channel rate of arrival k (1-based) given the solved chain.
double rate_k_inf(const WaterLevelChain& chain, int k, const AsymptoticConfig& config);

// Network spectral efficiency of the sharing regime: every arrival spans the
// whole band, so the NSE is the plain sum of per-channel rates.
double nse_sharing_inf(const WaterLevelChain& chain);

// Partition NSE under a cap of L channels per transmitter: (K*L/N) * rate.
// The flag warns that K*L exceeds N, where the cap stops binding for late
// arrivals and the linear model overcounts.
struct BlNse {
  double value = 0.0;
  bool exceeds_partition_capacity = false;
};
BlNse nse_partition_bl(int num_transmitters, int num_channels, int cap,
                       double rate_per_channel);

enum class BlRounding { ceil, nearest };

// Cap that equates the capped NSE with the uncapped limit:
// (N/K) * (1 - omega^K)/(1 - omega), rounded up by default (nearest is
// exposed for comparison studies) and clamped to [1, N].
int optimal_bl(int num_transmitters, int num_channels, double omega,
               BlRounding rounding = BlRounding::ceil);

}  // namespace blmac

#endif
