#ifndef BLMAC_QUADRATURE_HPP
#define BLMAC_QUADRATURE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "blmac/errors.hpp"

namespace blmac {

struct QuadratureControl {
  double rel_tol = 1e-9;
  double tail_cutoff = 50.0;  // integration stops here; e^{-50} ~ 2e-22
  int max_depth = 48;
  std::int64_t max_evals = 4'000'000;
};

namespace detail {

struct QuadBudget {
  std::int64_t evals = 0;
  std::int64_t max_evals = 0;
};

template <class G>
double adaptive_simpson(const G& g, QuadBudget& budget, double a, double b,
                        double fa, double fm, double fb, double whole,
                        double eps, double noise_floor, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  budget.evals += 2;
  if (budget.evals > budget.max_evals)
    throw NonConvergence("integrate_semi_infinite: evaluation budget exhausted");
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
  const double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * eps || std::abs(diff) <= noise_floor)
    return left + right + diff / 15.0;
  if (depth >= max_depth)
    throw NonConvergence("integrate_semi_infinite: subdivision depth limit reached");
  return adaptive_simpson(g, budget, a, m, fa, flm, fm, left, 0.5 * eps,
                          noise_floor, depth + 1, max_depth) +
         adaptive_simpson(g, budget, m, b, fm, frm, fb, right, 0.5 * eps,
                          noise_floor, depth + 1, max_depth);
}

}  // namespace detail

// Integral of f(x) e^{-x} over [a, tail_cutoff] by adaptive Simpson
// subdivision; the tail beyond the cutoff is discarded. The integrand must be
// finite on the interval. Relative tolerance is measured against a coarse
// first pass, with a small absolute floor so round-off plateaus terminate.
//
// Throws NonConvergence when the depth or evaluation budget runs out first.
template <class F>
double integrate_semi_infinite(F&& f, double a, const QuadratureControl& ctl = {}) {
  if (!(a >= 0.0))
    throw std::invalid_argument("integrate_semi_infinite: lower limit must be >= 0");
  if (!(ctl.rel_tol > 0.0))
    throw std::invalid_argument("integrate_semi_infinite: tolerance must be positive");
  const double b = ctl.tail_cutoff;
  if (a >= b) return 0.0;

  auto g = [&f](double x) { return f(x) * std::exp(-x); };

  // Coarse composite Simpson over 16 panels seeds the error scale.
  constexpr int kPanels = 16;
  const double h = (b - a) / kPanels;
  double coarse = 0.0;
  double nodes[2 * kPanels + 1];
  for (int i = 0; i <= 2 * kPanels; ++i) nodes[i] = g(a + 0.5 * h * i);
  for (int i = 0; i < kPanels; ++i)
    coarse += h * (nodes[2 * i] + 4.0 * nodes[2 * i + 1] + nodes[2 * i + 2]) / 6.0;

  const double scale = std::max(std::abs(coarse), 1e-300);
  const double eps = ctl.rel_tol * scale;
  const double noise_floor = 1e-16 * scale;

  detail::QuadBudget budget{2 * kPanels + 1, ctl.max_evals};
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double pa = a + h * i;
    const double pb = pa + h;
    const double whole =
        h * (nodes[2 * i] + 4.0 * nodes[2 * i + 1] + nodes[2 * i + 2]) / 6.0;
    total += detail::adaptive_simpson(g, budget, pa, pb, nodes[2 * i],
                                      nodes[2 * i + 1], nodes[2 * i + 2], whole,
                                      eps / kPanels, noise_floor, 0, ctl.max_depth);
  }
  return total;
}

}  // namespace blmac

#endif
