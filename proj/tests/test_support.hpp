#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace test_support {

inline double rel_err(double value, double reference) {
  return std::fabs(value - reference) / std::fmax(std::fabs(reference), 1e-300);
}

// Independent quadrature oracle, kept deliberately different from the
// library's Gauss-Legendre path.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 40) {
  const auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  std::function<double(double, double, double, int)> recurse =
      [&](double lo, double hi, double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid);
    const double right = simpson(mid, hi);
    if (d <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return recurse(lo, mid, left, d - 1) + recurse(mid, hi, right, d - 1);
  };
  return recurse(a, b, simpson(a, b), depth);
}

// Exact fraction arithmetic over 128-bit intermediates.
struct Frac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Frac() = default;
  Frac(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::runtime_error("Frac: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Frac from128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::runtime_error("Frac: overflow");
    return Frac((std::int64_t)n, (std::int64_t)d);
  }

  friend Frac operator+(const Frac& x, const Frac& y) {
    return from128((__int128)x.num * y.den + (__int128)y.num * x.den,
                   (__int128)x.den * y.den);
  }
  friend Frac operator-(const Frac& x, const Frac& y) {
    return from128((__int128)x.num * y.den - (__int128)y.num * x.den,
                   (__int128)x.den * y.den);
  }
  friend Frac operator*(const Frac& x, const Frac& y) {
    return from128((__int128)x.num * y.num, (__int128)x.den * y.den);
  }
  friend bool operator==(const Frac& x, const Frac& y) {
    return x.num == y.num && x.den == y.den;
  }
};

// Small deterministic generator for property-style sampling.
struct XorShift {
  std::uint64_t state;
  explicit XorShift(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * double(next() >> 11) / 9007199254740992.0;
  }
};

}  // namespace test_support
