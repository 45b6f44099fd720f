#include "blmac/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "blmac/errors.hpp"

namespace blmac {

std::vector<int> WaterfillSolution::support(double min_power) const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    if (powers[i] > min_power) ids.push_back(channel_ids[i]);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

double WaterfillSolution::total_power() const {
  return std::accumulate(powers.begin(), powers.end(), 0.0);
}

WaterfillSolution water_fill(const WaterfillProblem& problem) {
  const auto& cand = problem.candidates;
  if (cand.empty()) throw EmptyCandidateSet("water_fill: no candidate channels");
  if (!(problem.budget > 0.0) || !std::isfinite(problem.budget)) {
    std::ostringstream msg;
    msg << "water_fill: budget must be positive, got " << problem.budget;
    throw NonpositiveBudget(msg.str());
  }
  for (const Candidate& c : cand) {
    if (!(c.effective_noise > 0.0) || !std::isfinite(c.effective_noise))
      throw std::invalid_argument("water_fill: effective noise must be positive and finite");
  }

  const std::size_t m_total = cand.size();
  std::vector<std::size_t> order(m_total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cand[a].effective_noise != cand[b].effective_noise)
      return cand[a].effective_noise < cand[b].effective_noise;
    return cand[a].channel_id < cand[b].channel_id;
  });
  for (std::size_t i = 1; i < m_total; ++i) {
    if (cand[order[i - 1]].channel_id == cand[order[i]].channel_id &&
        cand[order[i - 1]].effective_noise == cand[order[i]].effective_noise)
      throw std::invalid_argument("water_fill: duplicate channel id among candidates");
  }
  {
    // Distinctness must hold regardless of noise values, so check ids globally.
    std::vector<int> ids;
    ids.reserve(m_total);
    for (const Candidate& c : cand) ids.push_back(c.channel_id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw std::invalid_argument("water_fill: duplicate channel id among candidates");
  }

  // Scan prefix sizes: the level implied by filling the m lowest floors is
  // (B + sum of those floors) / m; it is the solution once it clears floor m
  // but not floor m+1.
  double beta = 0.0;
  double prefix = 0.0;
  bool found = false;
  for (std::size_t m = 1; m <= m_total; ++m) {
    prefix += cand[order[m - 1]].effective_noise;
    const double level = (problem.budget + prefix) / static_cast<double>(m);
    const bool above_floor = level > cand[order[m - 1]].effective_noise;
    const bool below_next =
        (m == m_total) || level <= cand[order[m]].effective_noise;
    if (above_floor && below_next) {
      beta = level;
      found = true;
      break;
    }
  }
  if (!found) {
    // Unreachable for positive budgets; the full-prefix level always clears
    // the highest floor. Kept as a guard against NaN input slipping through.
    throw NonConvergence("water_fill: no feasible water level");
  }

  WaterfillSolution sol;
  sol.water_level = beta;
  sol.channel_ids.reserve(m_total);
  sol.powers.reserve(m_total);
  for (const Candidate& c : cand) {
    sol.channel_ids.push_back(c.channel_id);
    sol.powers.push_back(std::max(0.0, beta - c.effective_noise));
  }
  return sol;
}

std::optional<double> effective_noise(double alpha, double gain) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("effective_noise: alpha must be positive and finite");
  if (!(gain >= 0.0) || !std::isfinite(gain))
    throw std::invalid_argument("effective_noise: gain must be nonnegative and finite");
  if (gain == 0.0) return std::nullopt;
  return alpha / gain;
}

}  // namespace blmac
