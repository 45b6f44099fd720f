#include "blmac/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "blmac/errors.hpp"
#include "blmac/waterfill.hpp"

namespace blmac {

namespace {

void check_policy(const BLPolicy& bl, int num_channels) {
  if (!bl.active()) return;
  if (*bl.cap < 1 || *bl.cap > num_channels)
    throw std::invalid_argument("BLPolicy: cap must lie in [1, N]");
}

void check_gains(const GainMatrix& gains, const NetworkConfig& config) {
  if (gains.num_transmitters() != config.num_transmitters() ||
      gains.num_channels() != config.num_channels())
    throw std::invalid_argument("gain matrix does not match the network config");
}

// Water-fills one transmitter over its accessible channels and fills in every
// per-transmitter metric. The budget is the per-channel limit times the size
// of the accessible set, so a transmitter with fewer channels spends
// proportionally less total power.
TransmitterResult place_transmitter(int index, int available_count,
                                    std::vector<int> accessible,
                                    std::span<const double> gain_row,
                                    std::vector<double> noise,
                                    const NetworkConfig& config) {
  const int n = config.num_channels();
  TransmitterResult result;
  result.index = index;
  result.available_count = available_count;
  result.accessible = std::move(accessible);
  result.noise = std::move(noise);
  result.power.assign(n, 0.0);
  result.sinr.assign(n, 0.0);

  if (!result.accessible.empty()) {
    WaterfillProblem problem;
    problem.candidates.reserve(result.accessible.size());
    for (int ch : result.accessible) {
      if (auto nu = effective_noise(result.noise[ch], gain_row[ch]))
        problem.candidates.push_back({ch, *nu});
    }
    problem.budget = config.max_power() * static_cast<double>(result.accessible.size());
    if (!problem.candidates.empty()) {
      const WaterfillSolution sol = water_fill(problem);
      for (std::size_t i = 0; i < sol.channel_ids.size(); ++i) {
        const int ch = sol.channel_ids[i];
        result.power[ch] = sol.powers[i];
        result.sinr[ch] = sinr(sol.powers[i], gain_row[ch], result.noise[ch]);
      }
      result.used = sol.support(claim_threshold(config.max_power()));
    }
  }

  result.rate = rate(result.sinr);
  result.rate_per_channel = rate_per_channel(result.rate, result.accessible.size());
  result.accessible_fraction =
      static_cast<double>(result.accessible.size()) / static_cast<double>(n);
  result.spectral_efficiency = result.accessible_fraction * result.rate_per_channel;
  return result;
}

}  // namespace

ScenarioOutcome run_partition(const GainMatrix& gains, const NetworkConfig& config,
                              const BLPolicy& bl) {
  check_gains(gains, config);
  check_policy(bl, config.num_channels());

  const int n = config.num_channels();
  std::vector<char> claimed(n, 0);

  ScenarioOutcome outcome;
  outcome.scenario = Scenario::partition;
  outcome.transmitters.reserve(config.num_transmitters());

  for (int k = 0; k < config.num_transmitters(); ++k) {
    std::vector<int> available;
    for (int ch = 0; ch < n; ++ch)
      if (!claimed[ch]) available.push_back(ch);

    std::vector<int> accessible = select_subset(available, gains.row(k), bl);
    TransmitterResult result = place_transmitter(
        k, static_cast<int>(available.size()), std::move(accessible), gains.row(k),
        std::vector<double>(n, config.noise_variance()), config);
    for (int ch : result.used) claimed[ch] = 1;
    outcome.transmitters.push_back(std::move(result));
  }
  outcome.nse = network_spectral_efficiency(outcome);
  return outcome;
}

ScenarioOutcome run_sharing(const GainMatrix& gains, const NetworkConfig& config,
                            const BLPolicy& bl) {
  check_gains(gains, config);
  check_policy(bl, config.num_channels());

  const int n = config.num_channels();
  std::vector<double> alpha(n, config.noise_variance());
  std::vector<int> all_channels(n);
  std::iota(all_channels.begin(), all_channels.end(), 0);

  ScenarioOutcome outcome;
  outcome.scenario = Scenario::sharing;
  outcome.transmitters.reserve(config.num_transmitters());

  std::vector<double> scores(n);
  for (int k = 0; k < config.num_transmitters(); ++k) {
    for (int ch = 0; ch < n; ++ch) scores[ch] = gains(k, ch) / alpha[ch];

    std::vector<int> accessible = select_subset(all_channels, scores, bl);
    TransmitterResult result =
        place_transmitter(k, n, std::move(accessible), gains.row(k),
                          std::vector<double>(alpha), config);
    for (int ch = 0; ch < n; ++ch) alpha[ch] += result.power[ch] * gains(k, ch);
    outcome.transmitters.push_back(std::move(result));
  }
  outcome.nse = network_spectral_efficiency(outcome);
  return outcome;
}

std::vector<int> select_subset(std::span<const int> available,
                               std::span<const double> scores, const BLPolicy& bl) {
  std::vector<int> picked(available.begin(), available.end());
  if (bl.active() && static_cast<std::size_t>(*bl.cap) < picked.size()) {
    std::partial_sort(picked.begin(), picked.begin() + *bl.cap, picked.end(),
                      [&](int a, int b) {
                        if (scores[a] != scores[b]) return scores[a] > scores[b];
                        return a < b;
                      });
    picked.resize(*bl.cap);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

double sinr(double power, double gain, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("sinr: noise-plus-interference must be positive");
  if (power < 0.0 || gain < 0.0)
    throw std::invalid_argument("sinr: power and gain must be nonnegative");
  return power * gain / alpha;
}

double rate(std::span<const double> sinrs) {
  double sum = 0.0;
  for (double s : sinrs) sum += std::log2(1.0 + s);
  return sum;
}

double rate_per_channel(double total_rate, std::size_t accessible_count) {
  if (accessible_count == 0) return 0.0;
  return total_rate / static_cast<double>(accessible_count);
}

double network_spectral_efficiency(const ScenarioOutcome& outcome) {
  double sum = 0.0;
  for (const TransmitterResult& t : outcome.transmitters)
    sum += t.spectral_efficiency;
  return sum;
}

}  // namespace blmac
