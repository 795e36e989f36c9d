#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace isolab {

// Composite 16-point Gauss-Legendre quadrature over equal panels.
//
// The panel layout is an affine function of the endpoints, so for fixed
// panel count the result is a smooth function of the integration limits.
// Smoothness matters: radius-for-volume inversion and the difference
// quotients taken on top of it would otherwise see quadrature jitter.
namespace gl16 {
// positive abscissae / weights of the 16-point rule on [-1, 1]
inline constexpr std::array<double, 8> abscissa = {
    0.09501250983763744018531934, 0.28160355077925891323046050,
    0.45801677765722738634241944, 0.61787624440264374844667176,
    0.75540440835500303389510119, 0.86563120238783174388046789,
    0.94457502307323257607798842, 0.98940093499164993259615417,
};
inline constexpr std::array<double, 8> weight = {
    0.18945061045506849628539672, 0.18260341504492358886676366,
    0.16915651939500253818931208, 0.14959598881657673208150173,
    0.12462897125553387205247628, 0.09515851168249278480992510,
    0.06225352393864789286284384, 0.02715245941175409485178057,
};
}  // namespace gl16

template <typename F>
double integrate_panels(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    const double half = 0.5 * h;
    double acc = 0.0;
    for (std::size_t j = 0; j < gl16::abscissa.size(); ++j) {
      const double dx = half * gl16::abscissa[j];
      acc += gl16::weight[j] * (f(mid - dx) + f(mid + dx));
    }
    total += half * acc;
  }
  return total;
}

// Doubles the panel count until two successive results agree to rel_tol.
// Returns the converged panel count; the caller freezes it so that later
// evaluations stay smooth in the limits.
template <typename F>
int calibrate_panels(F&& f, double a, double b, double rel_tol,
                     int initial = 8, int max_panels = 1024) {
  int n = initial;
  double prev = integrate_panels(f, a, b, n);
  while (n < max_panels) {
    const int n2 = 2 * n;
    const double next = integrate_panels(f, a, b, n2);
    const double scale = std::fmax(std::fabs(next), 1e-300);
    if (std::fabs(next - prev) <= rel_tol * scale) return n2;
    prev = next;
    n = n2;
  }
  return n;
}

}  // namespace isolab
