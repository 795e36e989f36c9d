#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "isolab/errors.hpp"

namespace isolab {

// Brent's method on a bracketing interval [a, b] with f(a) f(b) <= 0.
template <typename F>
double brent(F&& f, double a, double b, double fa, double fb, double xtol,
             int max_iter = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    throw Error(errc::no_bracket, "brent: root not bracketed");

  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < (min1 < min2 ? min1 : min2)) {
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
    b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
  }
  return b;
}

template <typename F>
double brent(F&& f, double a, double b, double xtol, int max_iter = 200) {
  return brent(f, a, b, f(a), f(b), xtol, max_iter);
}

// Secant iteration that falls back to Brent once a sign change is seen.
template <typename F>
double secant_bracketed(F&& f, double x0, double x1, double ftol, double xtol,
                        int max_iter = 64) {
  double f0 = f(x0), f1 = f(x1);
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::fabs(f1) <= ftol) return x1;
    if (f0 * f1 < 0.0) return brent(f, x0, x1, f0, f1, xtol);
    if (f1 == f0)
      throw Error(errc::no_bracket, "secant: flat function, no bracket found");
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f(x1);
  }
  if (std::fabs(f1) <= ftol) return x1;
  throw Error(errc::no_bracket, "secant: no sign change within iteration limit");
}

}  // namespace isolab
