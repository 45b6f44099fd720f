#ifndef BLMAC_ROOTFIND_HPP
#define BLMAC_ROOTFIND_HPP

#include <functional>

namespace blmac {

// Both solvers expect f(lo) <= 0 <= f(hi) and shrink the bracket until
// hi - lo <= rel_tol * |hi|. They throw NonConvergence if the bracket is
// invalid or the iteration allowance runs out.

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol);

// Brent's method; same contract as bisect_root but superlinear on smooth f.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol);

// Grows a bracket for a nondecreasing f around the initial guess: halves lo
// while f(lo) > 0, doubles hi while f(hi) < 0. Returns {lo, hi}.
struct Bracket {
  double lo;
  double hi;
};
Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi);

}  // namespace blmac

#endif
