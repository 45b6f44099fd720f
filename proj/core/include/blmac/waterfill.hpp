#ifndef BLMAC_WATERFILL_HPP
#define BLMAC_WATERFILL_HPP

#include <optional>
#include <vector>

namespace blmac {

// One channel offered to the allocator: its id and the noise-plus-interference
// level divided by the gain, i.e. the height of the channel floor.
struct Candidate {
  int channel_id;
  double effective_noise;
};

struct WaterfillProblem {
  std::vector<Candidate> candidates;
  double budget;  // total power to spread across the candidates
};

// powers[i] belongs to channel_ids[i]; both follow the candidate order of the
// problem, not the sorted order used internally.
struct WaterfillSolution {
  double water_level = 0.0;
  std::vector<int> channel_ids;
  std::vector<double> powers;

  // Channels whose allocation exceeds min_power, ascending by id.
  std::vector<int> support(double min_power = 0.0) const;
  double total_power() const;
};

// Exact water-filling: finds the level beta with sum_i max(0, beta - nu_i)
// equal to the budget and returns the per-channel powers. Candidates are
// ranked by effective noise (ties broken by channel id); the level for each
// prefix size m is (budget + sum of the m smallest nu) / m and the first
// feasible prefix is the support.
//
// Throws EmptyCandidateSet, NonpositiveBudget, or std::invalid_argument for
// malformed candidates (nonpositive noise, duplicate ids).
WaterfillSolution water_fill(const WaterfillProblem& problem);

// Channel floor nu = alpha / gain. A zero-gain channel cannot carry power and
// is excluded (empty optional). alpha must be positive.
std::optional<double> effective_noise(double alpha, double gain);

}  // namespace blmac

#endif
