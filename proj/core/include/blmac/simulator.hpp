#ifndef BLMAC_SIMULATOR_HPP
#define BLMAC_SIMULATOR_HPP

#include <optional>
#include <span>
#include <vector>

#include "blmac/channel.hpp"

namespace blmac {

enum class Scenario { partition, sharing };

// Bandwidth limiting: an optional cap L on how many channels a transmitter
// may consider. Without a cap it takes everything on offer.
struct BLPolicy {
  std::optional<int> cap;

  static BLPolicy none() { return {}; }
  static BLPolicy capped(int limit) { return {limit}; }
  bool active() const { return cap.has_value(); }
};

// Everything recorded about one transmitter in one scenario run. Per-channel
// vectors span all N channels, zero outside the transmitter's support.
struct TransmitterResult {
  int index = 0;                    // arrival position, 0-based
  int available_count = 0;          // channels on offer before the cap
  std::vector<int> accessible;      // Z_k: channels on offer after the cap
  std::vector<int> used;            // L_k: channels actually carrying power
  std::vector<double> power;        // length N
  std::vector<double> sinr;         // length N
  std::vector<double> noise;        // alpha_{k,n}: noise+interference, length N
  double rate = 0.0;                // bits/s over the accessible set
  double rate_per_channel = 0.0;    // rate / |Z_k|, 0 when Z_k is empty
  double accessible_fraction = 0.0; // |Z_k| / N
  double spectral_efficiency = 0.0; // accessible_fraction * rate_per_channel
};

struct ScenarioOutcome {
  Scenario scenario = Scenario::partition;
  std::vector<TransmitterResult> transmitters;
  double nse = 0.0;  // network spectral efficiency, sum of per-transmitter terms
};

// Channels actually claimed must clear this slice of the power limit before
// they block later arrivals; keeps claimed sets stable under round-off.
inline double claim_threshold(double max_power) { return 1e-12 * max_power; }

// Arrivals claim disjoint channel sets: each transmitter water-fills the
// channels left unclaimed by earlier arrivals (top-L of them by gain when a
// cap is active) against thermal noise only, then claims its support.
ScenarioOutcome run_partition(const GainMatrix& gains, const NetworkConfig& config,
                              const BLPolicy& bl = BLPolicy::none());

// All transmitters share the whole band; the receiver decodes later arrivals
// first, so arrival k sees interference only from arrivals 1..k-1. Each
// water-fills against that residual interference (top-L channels by
// gain-to-interference ratio when a cap is active).
ScenarioOutcome run_sharing(const GainMatrix& gains, const NetworkConfig& config,
                            const BLPolicy& bl = BLPolicy::none());

// Top-L channels of `available` by score, ties to the lowest id; all of them
// when no cap. `scores` is indexed by channel id. Result is ascending by id.
std::vector<int> select_subset(std::span<const int> available,
                               std::span<const double> scores, const BLPolicy& bl);

// Post-decoding signal-to-interference-plus-noise ratio p*g/alpha.
double sinr(double power, double gain, double alpha);

// Shannon rate of a set of parallel channels, sum of log2(1 + sinr).
double rate(std::span<const double> sinrs);

// Average rate over an accessible set; zero when the set is empty.
double rate_per_channel(double total_rate, std::size_t accessible_count);

// Sum over transmitters of accessible_fraction * rate_per_channel.
double network_spectral_efficiency(const ScenarioOutcome& outcome);

}  // namespace blmac

#endif
