#ifndef BLMAC_CHANNEL_HPP
#define BLMAC_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace blmac {

// Static description of the network: K transmitters sharing N parallel
// channels, all limited to the same average power p_max per accessible
// channel, against thermal noise of variance sigma2 on every channel.
// Immutable once constructed; construction validates every field.
class NetworkConfig {
 public:
  NetworkConfig(int num_transmitters, int num_channels, double noise_variance,
                double max_power);

  // Convention used throughout: noise is normalized to 1 and the operating
  // point is stated as SNR, so p_max = 10^(snr_db/10).
  static NetworkConfig from_snr_db(int num_transmitters, int num_channels,
                                   double snr_db);

  int num_transmitters() const { return num_transmitters_; }
  int num_channels() const { return num_channels_; }
  double noise_variance() const { return noise_variance_; }
  double max_power() const { return max_power_; }

  double snr_db() const;
  double load() const;  // K / N

 private:
  int num_transmitters_;
  int num_channels_;
  double noise_variance_;
  double max_power_;
};

// Row-major K x N matrix of channel power gains; g(k, n) is the gain seen by
// transmitter k on channel n. Entries are nonnegative and finite.
class GainMatrix {
 public:
  GainMatrix(int num_transmitters, int num_channels, std::vector<double> entries);

  double operator()(int transmitter, int channel) const {
    return entries_[static_cast<std::size_t>(transmitter) * num_channels_ + channel];
  }
  std::span<const double> row(int transmitter) const {
    return {entries_.data() + static_cast<std::size_t>(transmitter) * num_channels_,
            static_cast<std::size_t>(num_channels_)};
  }

  int num_transmitters() const { return num_transmitters_; }
  int num_channels() const { return num_channels_; }

 private:
  int num_transmitters_;
  int num_channels_;
  std::vector<double> entries_;
};

// Identifies one trial of one experiment. The same pair always reproduces the
// same gain matrix, on any platform.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
};

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Generator state for a trial: mt19937_64 seeded with
// splitmix64(splitmix64(master) + trial). mt19937_64 seeding and output are
// fully pinned by the standard, so streams are identical across platforms.
std::mt19937_64 derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index);

// Uniform draw in [0, 1) built directly from the top 53 bits of the generator
// output. std::uniform_real_distribution is implementation-defined and would
// break bit-for-bit reproducibility.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF sample of the unit-mean exponential gain law.
inline double sample_unit_exponential(std::mt19937_64& rng) {
  return -std::log1p(-uniform_unit(rng));
}

// CDF of the gain law, F(x) = 1 - e^{-x}. Negative arguments are rejected.
double gain_cdf(double x);

// Density of the gain law, e^{-x} for x >= 0.
double gain_pdf(double x);

// Draws the full K x N gain matrix for one trial. Entries are filled
// transmitter-major (k outer, n inner) so the layout is part of the
// reproducibility contract.
GainMatrix sample_gains(const NetworkConfig& config, const SeedSpec& seed);

}  // namespace blmac

#endif
