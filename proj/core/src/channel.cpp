#include "blmac/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace blmac {

NetworkConfig::NetworkConfig(int num_transmitters, int num_channels,
                             double noise_variance, double max_power)
    : num_transmitters_(num_transmitters),
      num_channels_(num_channels),
      noise_variance_(noise_variance),
      max_power_(max_power) {
  if (num_transmitters < 1)
    throw std::invalid_argument("NetworkConfig: need at least one transmitter");
  if (num_channels < 1)
    throw std::invalid_argument("NetworkConfig: need at least one channel");
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
    throw std::invalid_argument("NetworkConfig: noise variance must be positive and finite");
  if (!(max_power > 0.0) || !std::isfinite(max_power))
    throw std::invalid_argument("NetworkConfig: power limit must be positive and finite");
}

NetworkConfig NetworkConfig::from_snr_db(int num_transmitters, int num_channels,
                                         double snr_db) {
  return NetworkConfig(num_transmitters, num_channels, 1.0,
                       std::pow(10.0, snr_db / 10.0));
}

double NetworkConfig::snr_db() const {
  return 10.0 * std::log10(max_power_ / noise_variance_);
}

double NetworkConfig::load() const {
  return static_cast<double>(num_transmitters_) / num_channels_;
}

GainMatrix::GainMatrix(int num_transmitters, int num_channels,
                       std::vector<double> entries)
    : num_transmitters_(num_transmitters),
      num_channels_(num_channels),
      entries_(std::move(entries)) {
  if (num_transmitters < 1 || num_channels < 1)
    throw std::invalid_argument("GainMatrix: dimensions must be positive");
  const std::size_t expected =
      static_cast<std::size_t>(num_transmitters) * static_cast<std::size_t>(num_channels);
  if (entries_.size() != expected) {
    std::ostringstream msg;
    msg << "GainMatrix: got " << entries_.size() << " entries, expected " << expected;
    throw std::invalid_argument(msg.str());
  }
  for (double g : entries_) {
    if (!(g >= 0.0) || !std::isfinite(g))
      throw std::invalid_argument("GainMatrix: gains must be nonnegative and finite");
  }
}

std::mt19937_64 derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) + trial_index));
}

double gain_cdf(double x) {
  if (!(x >= 0.0))
    throw std::invalid_argument("gain_cdf: argument must be nonnegative");
  return -std::expm1(-x);
}

double gain_pdf(double x) {
  if (!(x >= 0.0))
    throw std::invalid_argument("gain_pdf: argument must be nonnegative");
  return std::exp(-x);
}

GainMatrix sample_gains(const NetworkConfig& config, const SeedSpec& seed) {
  std::mt19937_64 rng = derive_trial_seed(seed.master_seed, seed.trial_index);
  const std::size_t total = static_cast<std::size_t>(config.num_transmitters()) *
                            static_cast<std::size_t>(config.num_channels());
  std::vector<double> entries(total);
  for (double& g : entries) g = sample_unit_exponential(rng);
  return GainMatrix(config.num_transmitters(), config.num_channels(), std::move(entries));
}

}  // namespace blmac
