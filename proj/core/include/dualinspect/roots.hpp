#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "dualinspect/errors.hpp"

namespace dualinspect {

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method (inverse quadratic interpolation / secant safeguarded by
/// bisection) on a bracket [a, b] with f(a), f(b) of opposite sign.
/// Stops once the bracket half-width is below rel_tol * |x| or f hits 0.
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb, double rel_tol,
                      int max_iterations) {
  if ((fa > 0.0 && fb > 0.0) || (fa < 0.0 && fb < 0.0)) {
    throw Error(ErrorKind::Domain, "brent_root: bracket does not straddle a root");
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  RootResult out;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    out.iterations = iter;
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * rel_tol * std::abs(b);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) {
      out.root = b;
      out.value = fb;
      out.converged = true;
      return out;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
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
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  out.root = b;
  out.value = fb;
  return out;
}

}  // namespace dualinspect
