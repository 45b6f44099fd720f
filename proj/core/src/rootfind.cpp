#include "blmac/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blmac/errors.hpp"

namespace blmac {

namespace {
constexpr int kMaxIterations = 200;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw NonConvergence("bisect_root: endpoints do not bracket a root");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::abs(hi) || mid == lo || mid == hi)
      return mid;
    const double fmid = f(mid);
    if (fmid <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa > 0.0 || fb < 0.0)
    throw NonConvergence("brent_root: endpoints do not bracket a root");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  double c = a, fc = fa;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < kMaxIterations; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * rel_tol * std::abs(b);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, falling back to secant.
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
  }
  throw NonConvergence("brent_root: iteration limit reached");
}

Bracket expand_bracket(const std::function<double(double)>& f, double lo, double hi) {
  if (hi < lo) std::swap(lo, hi);
  int guard = 0;
  while (f(lo) > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > kMaxIterations || lo <= 0.0)
      throw NonConvergence("expand_bracket: no sign change below the guess");
  }
  guard = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > kMaxIterations || !std::isfinite(hi))
      throw NonConvergence("expand_bracket: no sign change above the guess");
  }
  return {lo, hi};
}

}  // namespace blmac
