#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace isolab {

// Truncated power series in u, kept to fixed order for the pole-window
// curvature expansions. Order 8 in u = t^2 is far beyond what the window
// width requires.
inline constexpr std::size_t kSeriesTerms = 8;
using USeries = std::array<double, kSeriesTerms>;

inline USeries series_mul(const USeries& a, const USeries& b) {
  USeries r{};
  for (std::size_t i = 0; i < kSeriesTerms; ++i)
    for (std::size_t j = 0; i + j < kSeriesTerms; ++j) r[i + j] += a[i] * b[j];
  return r;
}

// 1/a for series with a[0] != 0.
inline USeries series_recip(const USeries& a) {
  USeries r{};
  r[0] = 1.0 / a[0];
  for (std::size_t n = 1; n < kSeriesTerms; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += a[k] * r[n - k];
    r[n] = -acc / a[0];
  }
  return r;
}

inline double series_eval(const USeries& a, double u) {
  double v = a[kSeriesTerms - 1];
  for (std::size_t i = kSeriesTerms - 1; i-- > 0;) v = v * u + a[i];
  return v;
}

// Radial expansion of the warping function about a pole,
//   f(t) = t (1 + c[1] t^2 + c[2] t^4 + ...),   c[0] = 1,
// together with the curvature quantities it induces. The expansions are
// exact to truncation, which is what makes pole evaluation safe where the
// generic formulas hit 0/0.
struct PoleSeries {
  USeries c{};  // c[k] multiplies t^(2k+1); c[0] = 1 for a smooth pole

  // Curvature of dr^2 + f^2 g_{S^2} as even series in t (arguments u = t^2):
  //   ric_radial     = -2 f''/f
  //   ric_tangential = -f''/f + (1 - f'^2)/f^2
  //   scalar         = ric_radial + 2 ric_tangential
  USeries ric_radial{};
  USeries ric_tangential{};
  USeries scalar{};

  void finalize() {
    USeries p{};  // f/t
    USeries q{};  // f'
    USeries s{};  // f''/t
    for (std::size_t k = 0; k < kSeriesTerms; ++k) {
      p[k] = c[k];
      q[k] = (2.0 * k + 1.0) * c[k];
      if (k + 1 < kSeriesTerms)
        s[k] = (2.0 * k + 3.0) * (2.0 * k + 2.0) * c[k + 1];
    }
    const USeries q2 = series_mul(q, q);
    USeries t{};  // (1 - f'^2)/t^2
    for (std::size_t k = 0; k + 1 < kSeriesTerms; ++k) t[k] = -q2[k + 1];

    const USeries inv_p = series_recip(p);
    const USeries inv_p2 = series_mul(inv_p, inv_p);
    const USeries sp = series_mul(s, inv_p);
    const USeries tp2 = series_mul(t, inv_p2);
    for (std::size_t k = 0; k < kSeriesTerms; ++k) {
      ric_radial[k] = -2.0 * sp[k];
      ric_tangential[k] = -sp[k] + tp2[k];
      scalar[k] = -4.0 * sp[k] + 2.0 * tp2[k];
    }
  }
};

}  // namespace isolab
