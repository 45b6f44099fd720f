#include "blmac/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "blmac/channel.hpp"
#include "blmac/errors.hpp"
#include "blmac/rootfind.hpp"

namespace blmac {

namespace {

constexpr double kRootRelTol = 1e-10;

// Inner integral over the gain of the arrival being placed: power drawn from
// a channel with fill level c when water-filling up to beta,
//   W(c; beta) = int_{c/beta}^inf (beta - c/g) e^{-g} dg.
double placed_power(double c, double beta, const QuadratureControl& ctl) {
  const double lower = c / beta;
  if (lower >= ctl.tail_cutoff) return 0.0;
  return integrate_semi_infinite([&](double g) { return beta - c / g; }, lower, ctl);
}

// Same measure, but collecting rate: int_{c/beta}^inf log2(beta*g/c) e^{-g} dg.
double placed_rate(double c, double beta, const QuadratureControl& ctl) {
  const double lower = c / beta;
  if (lower >= ctl.tail_cutoff) return 0.0;
  return integrate_semi_infinite([&](double g) { return std::log2(beta * g / c); },
                                 lower, ctl);
}

// Tolerance for a quadrature nested `depth_inward` levels below the outermost
// one. Inner levels run tighter so the outer adaptivity never chases inner
// integration noise.
QuadratureControl tightened(QuadratureControl base, int depth_inward) {
  for (int i = 0; i < depth_inward; ++i) base.rel_tol *= 0.03;
  base.rel_tol = std::max(base.rel_tol, 1e-13);
  return base;
}

// Mass of the predecessor gains compatible with a given fill level:
//   A_j(y) = Pr(g_1 >= sigma2/beta_1, beta_i g_i >= beta_{i-1} g_{i-1} for
//               i = 2..j, and beta_j g_j <= y),
// as a function of y. Each marginalization integrates exponentials against
// exponentials, so A_j stays a finite sum of c * exp(-a * y) terms on its
// support y >= sigma2 (fill levels never drop below the noise floor) and the
// chain expectation collapses to a two-level nested quadrature no matter how
// long the chain is. A_0 is the empty-product base case, 1 on y >= sigma2.
struct ExpSum {
  std::vector<double> coeff;
  std::vector<double> rate;
  double threshold = 0.0;

  // The analytic sum, valid on the support y >= threshold; clamped against
  // roundoff where the terms cancel at the support edge. Callers integrating
  // from the edge use this form so the endpoint sees the one-sided limit
  // rather than a spurious step (the base case A_0 is an indicator).
  double on_support(double y) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < coeff.size(); ++i)
      sum += coeff[i] * std::exp(-rate[i] * y);
    return std::max(0.0, sum);
  }

  double operator()(double y) const {
    return y < threshold ? 0.0 : on_support(y);
  }
};

// One marginalization step: A_j(y) = int_0^{y/beta_j} A_{j-1}(beta_j t)
// e^{-t} dt. A term c e^{-a x} of A_{j-1} contributes the constant
// c/(a beta + 1) e^{-(a + 1/beta) thr} and the term -c/(a beta + 1)
// e^{-(a + 1/beta) y}; constants merge into the single rate-zero slot.
ExpSum advance_weight(const ExpSum& prev, double beta) {
  ExpSum next;
  next.threshold = prev.threshold;
  double constant = 0.0;
  for (std::size_t i = 0; i < prev.coeff.size(); ++i) {
    const double scaled = prev.coeff[i] / (prev.rate[i] * beta + 1.0);
    const double new_rate = prev.rate[i] + 1.0 / beta;
    constant += scaled * std::exp(-new_rate * prev.threshold);
    next.coeff.push_back(-scaled);
    next.rate.push_back(new_rate);
  }
  next.coeff.push_back(constant);
  next.rate.push_back(0.0);
  return next;
}

// Weight A_{k-2} seen by arrival k's outer integration variable g_{k-1}.
ExpSum predecessor_weight(const std::vector<double>& levels, int k, double sigma2) {
  ExpSum weight;
  weight.threshold = sigma2;
  weight.coeff.push_back(1.0);
  weight.rate.push_back(0.0);
  for (int j = 1; j <= k - 2; ++j)
    weight = advance_weight(weight, levels[static_cast<std::size_t>(j - 1)]);
  return weight;
}

// E[ 1{chain region} inner(beta_{k-1} g_{k-1}) ] for arrival k: the outer
// adaptive pass runs over g_{k-1} with the marginalized predecessor weight,
// and `inner` supplies the arrival's own (already integrated) factor.
template <typename Inner>
double chain_expectation(const ExpSum& weight, double prev_level, Inner&& inner,
                         const QuadratureControl& ctl) {
  const double lower = weight.threshold / prev_level;
  if (lower >= ctl.tail_cutoff) return 0.0;
  return integrate_semi_infinite(
      [&](double g) {
        const double fill = prev_level * g;
        const double w = weight.on_support(fill);
        return w <= 0.0 ? 0.0 : w * inner(fill);
      },
      lower, ctl);
}

// Unit-exponential draws for the Monte Carlo chain, mc_samples rows of
// num_transmitters gains each. Regenerating from the seed always reproduces
// the same matrix, so every beta evaluation shares one sample set.
std::vector<double> chain_samples(const AsymptoticConfig& cfg) {
  std::mt19937_64 rng(splitmix64(cfg.mc_seed));
  std::vector<double> draws(static_cast<std::size_t>(cfg.mc_samples) *
                            static_cast<std::size_t>(cfg.num_transmitters));
  for (double& g : draws) g = sample_unit_exponential(rng);
  return draws;
}

// Samples of arrival k's fill-level ratio: for every draw inside the chain
// region, the threshold t = beta_{k-1} * g_{k-1} / g_k above which the
// arrival's water level must rise to reach the channel.
std::vector<double> region_thresholds(const std::vector<double>& draws,
                                      const AsymptoticConfig& cfg, int k,
                                      const std::vector<double>& levels) {
  const int cols = cfg.num_transmitters;
  std::vector<double> thresholds;
  thresholds.reserve(static_cast<std::size_t>(cfg.mc_samples));
  for (long i = 0; i < cfg.mc_samples; ++i) {
    const double* row = draws.data() + static_cast<std::size_t>(i) * cols;
    if (row[0] < cfg.sigma2 / levels[0]) continue;
    bool inside = true;
    for (int j = 2; j <= k - 1; ++j) {
      if (row[j - 1] * levels[j - 1] < levels[j - 2] * row[j - 2]) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    thresholds.push_back(levels[k - 2] * row[k - 2] / row[k - 1]);
  }
  return thresholds;
}

struct McLevel {
  double beta = 0.0;
  double stderr_ = 0.0;
};

McLevel mc_solve_level(const std::vector<double>& thresholds,
                       const AsymptoticConfig& cfg, double prev_beta, int k) {
  const double m = static_cast<double>(cfg.mc_samples);
  if (thresholds.empty()) {
    std::ostringstream msg;
    msg << "solve_beta_chain: no Monte Carlo samples reach arrival " << k
        << "; increase mc_samples";
    throw MCVarianceTooHigh(msg.str());
  }
  auto constraint = [&](double beta) {
    double sum = 0.0;
    for (double t : thresholds) sum += std::max(0.0, beta - t);
    return sum / m - cfg.p_max;
  };
  const Bracket bracket = expand_bracket(constraint, prev_beta, prev_beta + cfg.p_max);
  const double beta = bisect_root(constraint, bracket.lo, bracket.hi, kRootRelTol);

  // Estimator spread at the root, mapped into beta units through the
  // constraint slope (the fraction of samples the water reaches).
  double sum = 0.0;
  long active = 0;
  for (double t : thresholds) {
    if (beta > t) {
      sum += beta - t;
      ++active;
    }
  }
  const double mean = sum / m;
  double ss = 0.0;
  for (double t : thresholds) {
    const double y = std::max(0.0, beta - t);
    ss += (y - mean) * (y - mean);
  }
  ss += (m - static_cast<double>(thresholds.size())) * mean * mean;
  const double se = std::sqrt(ss / (m - 1.0) / m);
  const double slope = static_cast<double>(active) / m;
  if (slope <= 0.0)
    throw MCVarianceTooHigh("solve_beta_chain: constraint slope vanished at the root");
  const double level_se = se / slope;
  if (3.0 * level_se > 0.5 * beta) {
    std::ostringstream msg;
    msg << "solve_beta_chain: water level " << k << " has 3-sigma uncertainty "
        << 3.0 * level_se << " against level " << beta << "; increase mc_samples";
    throw MCVarianceTooHigh(msg.str());
  }
  return {beta, level_se};
}

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
};

Estimate mc_rate_level(const std::vector<double>& draws, const AsymptoticConfig& cfg,
                       int k, const std::vector<double>& levels) {
  const int cols = cfg.num_transmitters;
  const double m = static_cast<double>(cfg.mc_samples);
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < cfg.mc_samples; ++i) {
    const double* row = draws.data() + static_cast<std::size_t>(i) * cols;
    double r = 0.0;
    if (row[0] >= cfg.sigma2 / levels[0]) {
      bool inside = true;
      for (int j = 2; j <= k - 1; ++j) {
        if (row[j - 1] * levels[j - 1] < levels[j - 2] * row[j - 2]) {
          inside = false;
          break;
        }
      }
      if (inside) {
        const double num = levels[k - 1] * row[k - 1];
        const double den = levels[k - 2] * row[k - 2];
        r = std::max(0.0, std::log2(num / den));
      }
    }
    sum += r;
    sumsq += r * r;
  }
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m)};
}

Estimate quad_rate_level(const std::vector<double>& levels, int k,
                         const AsymptoticConfig& cfg) {
  const ExpSum weight = predecessor_weight(levels, k, cfg.sigma2);
  const QuadratureControl inner_ctl = tightened(cfg.quadrature(), 1);
  const double value = chain_expectation(
      weight, levels[static_cast<std::size_t>(k - 2)],
      [&](double fill) { return placed_rate(fill, levels[static_cast<std::size_t>(k - 1)], inner_ctl); },
      cfg.quadrature());
  return {value, 0.0};
}

double quad_solve_level(const std::vector<double>& levels, int k,
                        const AsymptoticConfig& cfg) {
  const ExpSum weight = predecessor_weight(levels, k, cfg.sigma2);
  const QuadratureControl inner_ctl = tightened(cfg.quadrature(), 1);
  const double prev = levels[static_cast<std::size_t>(k - 2)];
  auto constraint = [&](double beta) {
    return chain_expectation(
               weight, prev,
               [&](double fill) { return placed_power(fill, beta, inner_ctl); },
               cfg.quadrature()) -
           cfg.p_max;
  };
  const Bracket bracket = expand_bracket(constraint, prev, prev + cfg.p_max + cfg.sigma2);
  return brent_root(constraint, bracket.lo, bracket.hi, kRootRelTol);
}

}  // namespace

AsymptoticConfig AsymptoticConfig::from_snr_db(double snr_db, int num_transmitters) {
  AsymptoticConfig cfg;
  cfg.sigma2 = 1.0;
  cfg.p_max = std::pow(10.0, snr_db / 10.0);
  cfg.num_transmitters = num_transmitters;
  return cfg;
}

QuadratureControl AsymptoticConfig::quadrature() const {
  QuadratureControl ctl;
  ctl.rel_tol = quad_rel_tol;
  ctl.tail_cutoff = tail_cutoff;
  return ctl;
}

void AsymptoticConfig::validate() const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("AsymptoticConfig: sigma2 must be positive");
  if (!(p_max > 0.0) || !std::isfinite(p_max))
    throw std::invalid_argument("AsymptoticConfig: p_max must be positive");
  if (num_transmitters < 1)
    throw std::invalid_argument("AsymptoticConfig: need at least one transmitter");
  if (!(quad_rel_tol > 0.0))
    throw std::invalid_argument("AsymptoticConfig: quadrature tolerance must be positive");
  if (!(tail_cutoff > 0.0) || std::exp(-tail_cutoff) >= quad_rel_tol)
    throw std::invalid_argument(
        "AsymptoticConfig: tail cutoff too small for the requested tolerance");
  if (mc_samples < 2)
    throw std::invalid_argument("AsymptoticConfig: mc_samples must be at least 2");
  if (quad_depth_limit < 1)
    throw std::invalid_argument("AsymptoticConfig: quad_depth_limit must be at least 1");
}

double solve_beta_star(double sigma2, double p_max, const QuadratureControl& ctl) {
  if (!(sigma2 > 0.0) || !(p_max > 0.0))
    throw std::invalid_argument("solve_beta_star: sigma2 and p_max must be positive");
  auto constraint = [&](double beta) {
    return integrate_semi_infinite([&](double g) { return beta - sigma2 / g; },
                                   sigma2 / beta, ctl) -
           p_max;
  };
  const double guess = sigma2 + p_max;
  const Bracket bracket = expand_bracket(constraint, guess, guess);
  return bisect_root(constraint, bracket.lo, bracket.hi, kRootRelTol);
}

double rate_inf(double beta_star, double sigma2, const QuadratureControl& ctl) {
  if (!(beta_star > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("rate_inf: beta and sigma2 must be positive");
  return placed_rate(sigma2, beta_star, ctl);
}

double omega_inf(double beta_star, double sigma2) {
  if (!(beta_star > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("omega_inf: beta and sigma2 must be positive");
  return gain_cdf(sigma2 / beta_star);
}

double nse_partition_inf(int num_transmitters, double omega, double rate) {
  if (num_transmitters < 1)
    throw std::invalid_argument("nse_partition_inf: need at least one transmitter");
  if (!(omega >= 0.0) || !(omega <= 1.0))
    throw std::invalid_argument("nse_partition_inf: omega must lie in [0, 1]");
  if (std::abs(1.0 - omega) < 1e-9) return num_transmitters * rate;
  return (1.0 - std::pow(omega, num_transmitters)) / (1.0 - omega) * rate;
}

PartitionAsymptotics partition_asymptotics(const AsymptoticConfig& config) {
  config.validate();
  PartitionAsymptotics out;
  out.beta_star = solve_beta_star(config.sigma2, config.p_max, config.quadrature());
  out.omega = omega_inf(out.beta_star, config.sigma2);
  out.rate = rate_inf(out.beta_star, config.sigma2, config.quadrature());
  out.nse = nse_partition_inf(config.num_transmitters, out.omega, out.rate);
  return out;
}

WaterLevelChain solve_beta_chain(const AsymptoticConfig& config) {
  config.validate();
  const int total = config.num_transmitters;

  WaterLevelChain chain;
  chain.levels.reserve(total);
  chain.rates.reserve(total);

  chain.levels.push_back(solve_beta_star(config.sigma2, config.p_max, config.quadrature()));
  chain.rates.push_back(rate_inf(chain.levels[0], config.sigma2, config.quadrature()));
  chain.level_stderr.push_back(0.0);
  chain.rate_stderr.push_back(0.0);
  chain.method.push_back(EvalMethod::quadrature);

  std::vector<double> draws;
  for (int k = 2; k <= total; ++k) {
    if (k <= config.quad_depth_limit) {
      chain.levels.push_back(quad_solve_level(chain.levels, k, config));
      const Estimate r = quad_rate_level(chain.levels, k, config);
      chain.rates.push_back(r.value);
      chain.level_stderr.push_back(0.0);
      chain.rate_stderr.push_back(0.0);
      chain.method.push_back(EvalMethod::quadrature);
    } else {
      if (draws.empty()) draws = chain_samples(config);
      const std::vector<double> thresholds =
          region_thresholds(draws, config, k, chain.levels);
      const McLevel level =
          mc_solve_level(thresholds, config, chain.levels[k - 2], k);
      chain.levels.push_back(level.beta);
      const Estimate r = mc_rate_level(draws, config, k, chain.levels);
      chain.rates.push_back(r.value);
      chain.level_stderr.push_back(level.stderr_);
      chain.rate_stderr.push_back(r.stderr_);
      chain.method.push_back(EvalMethod::monte_carlo);
    }
  }
  return chain;
}

double rate_k_inf(const WaterLevelChain& chain, int k, const AsymptoticConfig& config) {
  config.validate();
  if (k < 1 || static_cast<std::size_t>(k) > chain.levels.size())
    throw std::invalid_argument("rate_k_inf: arrival index outside the chain");
  if (k == 1) return rate_inf(chain.levels[0], config.sigma2, config.quadrature());
  if (k <= config.quad_depth_limit)
    return quad_rate_level(chain.levels, k, config).value;
  const std::vector<double> draws = chain_samples(config);
  return mc_rate_level(draws, config, k, chain.levels).value;
}

double nse_sharing_inf(const WaterLevelChain& chain) {
  double sum = 0.0;
  for (double r : chain.rates) sum += r;
  return sum;
}

BlNse nse_partition_bl(int num_transmitters, int num_channels, int cap,
                       double rate_per_channel) {
  if (num_transmitters < 1 || num_channels < 1)
    throw std::invalid_argument("nse_partition_bl: sizes must be positive");
  if (cap < 1 || cap > num_channels)
    throw std::invalid_argument("nse_partition_bl: cap must lie in [1, N]");
  BlNse out;
  out.value = static_cast<double>(num_transmitters) * cap / num_channels * rate_per_channel;
  out.exceeds_partition_capacity =
      static_cast<long>(num_transmitters) * cap > num_channels;
  return out;
}

int optimal_bl(int num_transmitters, int num_channels, double omega,
               BlRounding rounding) {
  if (num_transmitters < 1 || num_channels < 1)
    throw std::invalid_argument("optimal_bl: sizes must be positive");
  if (!(omega >= 0.0) || !(omega <= 1.0))
    throw std::invalid_argument("optimal_bl: omega must lie in [0, 1]");
  const double factor = (std::abs(1.0 - omega) < 1e-9)
                            ? static_cast<double>(num_transmitters)
                            : (1.0 - std::pow(omega, num_transmitters)) / (1.0 - omega);
  const double exact =
      static_cast<double>(num_channels) / num_transmitters * factor;
  long cap = (rounding == BlRounding::ceil)
                 ? static_cast<long>(std::ceil(exact - 1e-12))
                 : std::lround(exact);
  cap = std::clamp(cap, 1L, static_cast<long>(num_channels));
  return static_cast<int>(cap);
}

}  // namespace blmac
