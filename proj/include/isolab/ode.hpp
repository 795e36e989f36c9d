#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "isolab/errors.hpp"

namespace isolab {

// Embedded Cash-Karp 4(5) step with elementwise error estimate.
template <std::size_t N, typename RHS>
struct CashKarp {
  using State = std::array<double, N>;
  RHS rhs;

  struct Result {
    State y;
    double error;  // max component error scaled by atol + rtol*|y|
  };

  Result step(double t, const State& y, double h, double atol, double rtol) const {
    constexpr double b21 = 1.0 / 5.0;
    constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                     b54 = 35.0 / 27.0;
    constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                     b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                     b65 = 253.0 / 4096.0;
    constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                     c6 = 512.0 / 1771.0;
    constexpr double d1 = c1 - 2825.0 / 27648.0, d3 = c3 - 18575.0 / 48384.0,
                     d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                     d6 = c6 - 1.0 / 4.0;

    State k1 = rhs(t, y), tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * b21 * k1[i];
    State k2 = rhs(t + h / 5.0, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
    State k3 = rhs(t + 3.0 * h / 10.0, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
    State k4 = rhs(t + 3.0 * h / 5.0, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
    State k5 = rhs(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] +
                           b64 * k4[i] + b65 * k5[i]);
    State k6 = rhs(t + 7.0 * h / 8.0, tmp);

    Result out{};
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      out.y[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
      const double ei =
          h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
      const double scale = atol + rtol * std::fmax(std::fabs(y[i]), std::fabs(out.y[i]));
      err = std::fmax(err, std::fabs(ei) / scale);
    }
    out.error = err;
    return out;
  }
};

// Integrates from t0 to t1 with adaptive step control, invoking
// observer(t, y) after every accepted step (and at t0).
template <std::size_t N, typename RHS, typename Observer>
void integrate_adaptive(RHS&& rhs, std::array<double, N>& y, double t0,
                        double t1, double tol, Observer&& observer,
                        long max_steps = 2000000) {
  CashKarp<N, RHS&> stepper{rhs};
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::fmax(1e-10, std::fabs(t1 - t0) / 256.0);
  observer(t, y);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > max_steps)
      throw Error(errc::step_limit, "integrate_adaptive: step limit reached");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    auto r = stepper.step(t, y, h, tol, tol);
    if (r.error <= 1.0) {
      t += h;
      y = r.y;
      observer(t, y);
      const double grow = 0.9 * std::pow(std::fmax(r.error, 1e-10), -0.2);
      h *= std::fmin(5.0, grow);
    } else {
      h *= std::fmax(0.1, 0.9 * std::pow(r.error, -0.25));
      if (std::fabs(h) < 1e-15 * std::fmax(1.0, std::fabs(t)))
        throw Error(errc::stiffness_failure,
                    "integrate_adaptive: step size underflow");
    }
  }
}

}  // namespace isolab
