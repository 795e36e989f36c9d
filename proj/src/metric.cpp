#include "isolab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "isolab/quadrature.hpp"
#include "isolab/rootfind.hpp"

namespace isolab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

WarpingSpec WarpingSpec::round() {
  WarpingSpec s;
  s.kind = Kind::round;
  s.lambda = 1.0;
  return s;
}

WarpingSpec WarpingSpec::scaled(double lambda) {
  WarpingSpec s;
  s.kind = Kind::scaled;
  s.lambda = lambda;
  return s;
}

WarpingSpec WarpingSpec::hemisphere(double lambda) {
  WarpingSpec s;
  s.kind = Kind::hemisphere;
  s.lambda = lambda;
  return s;
}

WarpingSpec WarpingSpec::series(std::vector<double> odd, double length,
                                bool closed) {
  WarpingSpec s;
  s.kind = Kind::series;
  s.odd_coefficients = std::move(odd);
  s.length = length;
  s.series_closed = closed;
  return s;
}

std::string spec_kind_name(WarpingSpec::Kind kind) {
  switch (kind) {
    case WarpingSpec::Kind::round: return "round";
    case WarpingSpec::Kind::scaled: return "scaled";
    case WarpingSpec::Kind::hemisphere: return "hemisphere";
    case WarpingSpec::Kind::series: return "series";
  }
  return "unknown";
}

namespace detail {

class WarpForm {
 public:
  virtual ~WarpForm() = default;
  virtual double value(double r) const = 0;
  virtual FJet jet(double r, Side side) const = 0;
  virtual double length() const = 0;
  virtual bool closed() const = 0;
  virtual double seam() const { return -1.0; }
  virtual PoleSeries north_series() const = 0;
  virtual PoleSeries south_series() const = 0;
  virtual std::string describe() const = 0;
};

// f(r) = sin(lambda r) / lambda on [0, pi/lambda] (closed) or
// [0, pi/(2 lambda)] (hemisphere, boundary at the equator).
class SinForm : public WarpForm {
 public:
  SinForm(double lambda, bool hemisphere, WarpingSpec::Kind kind)
      : lambda_(lambda),
        length_(hemisphere ? kPi / (2.0 * lambda) : kPi / lambda),
        closed_(!hemisphere),
        kind_(kind) {}

  double value(double r) const override { return std::sin(lambda_ * r) / lambda_; }

  FJet jet(double r, Side) const override {
    const double s = std::sin(lambda_ * r);
    const double c = std::cos(lambda_ * r);
    FJet j;
    j.f = s / lambda_;
    j.f1 = c;
    j.f2 = -lambda_ * s;
    j.f3 = -lambda_ * lambda_ * c;
    j.f4 = lambda_ * lambda_ * lambda_ * s;
    return j;
  }

  double length() const override { return length_; }
  bool closed() const override { return closed_; }

  PoleSeries north_series() const override {
    // sin(lambda t)/lambda = t - lambda^2 t^3/3! + lambda^4 t^5/5! - ...
    static constexpr double fact[kSeriesTerms] = {
        1.0, 6.0, 120.0, 5040.0, 362880.0, 39916800.0, 6227020800.0,
        1307674368000.0};
    PoleSeries ps;
    double pow = 1.0;
    for (std::size_t k = 0; k < kSeriesTerms; ++k) {
      ps.c[k] = (k % 2 == 0 ? 1.0 : -1.0) * pow / fact[k];
      pow *= lambda_ * lambda_;
    }
    ps.finalize();
    return ps;
  }

  PoleSeries south_series() const override {
    // sin(pi - x) = sin(x): the south expansion equals the north one.
    return north_series();
  }

  std::string describe() const override {
    if (kind_ == WarpingSpec::Kind::round) return "round";
    return std::string(spec_kind_name(kind_)) + "(lambda=" + fmt_g(lambda_) + ")";
  }

 private:
  double lambda_;
  double length_;
  bool closed_;
  WarpingSpec::Kind kind_;
};

// Odd polynomial f(r) = r + f3 r^3 + f5 r^5 + ...; derivatives term-wise.
class PolyForm : public WarpForm {
 public:
  PolyForm(std::vector<double> odd, double length, bool closed)
      : length_(length), closed_(closed) {
    b_.push_back(1.0);
    for (double c : odd) b_.push_back(c);
  }

  double value(double r) const override {
    const double u = r * r;
    double acc = b_.back();
    for (std::size_t k = b_.size() - 1; k-- > 0;) acc = acc * u + b_[k];
    return acc * r;
  }

  FJet jet(double r, Side) const override {
    FJet j;
    for (std::size_t k = 0; k < b_.size(); ++k) {
      const double n = 2.0 * k + 1.0;
      j.f += b_[k] * safe_pow(r, 2 * (int)k + 1);
      j.f1 += b_[k] * n * safe_pow(r, 2 * (int)k);
      j.f2 += b_[k] * n * (n - 1.0) * safe_pow(r, 2 * (int)k - 1);
      j.f3 += b_[k] * n * (n - 1.0) * (n - 2.0) * safe_pow(r, 2 * (int)k - 2);
      j.f4 += b_[k] * n * (n - 1.0) * (n - 2.0) * (n - 3.0) *
              safe_pow(r, 2 * (int)k - 3);
    }
    return j;
  }

  double length() const override { return length_; }
  bool closed() const override { return closed_; }

  PoleSeries north_series() const override {
    PoleSeries ps;
    for (std::size_t k = 0; k < kSeriesTerms && k < b_.size(); ++k)
      ps.c[k] = b_[k];
    ps.finalize();
    return ps;
  }

  PoleSeries south_series() const override {
    // Expand f(L - t) = sum_m a_m t^m; a binomial shift of the polynomial.
    const int degree = 2 * (int)b_.size() - 1;
    std::vector<double> a(degree + 1, 0.0);
    for (std::size_t k = 0; k < b_.size(); ++k) {
      const int j = 2 * (int)k + 1;
      double binom = 1.0;  // C(j, m)
      double lpow = std::pow(length_, j);
      for (int m = 0; m <= j; ++m) {
        a[m] += b_[k] * binom * lpow * (m % 2 == 0 ? 1.0 : -1.0);
        binom *= double(j - m) / double(m + 1);
        lpow /= length_;
      }
    }
    PoleSeries ps;
    for (std::size_t k = 0; k < kSeriesTerms; ++k) {
      const std::size_t m = 2 * k + 1;
      ps.c[k] = (m < a.size()) ? a[m] : 0.0;
    }
    ps.finalize();
    return ps;
  }

  std::string describe() const override {
    std::string s = "series([";
    for (std::size_t k = 1; k < b_.size(); ++k) {
      if (k > 1) s += ",";
      s += fmt_g(b_[k]);
    }
    s += "], L=" + fmt_g(length_) + (closed_ ? ", closed)" : ")");
    return s;
  }

 private:
  static double safe_pow(double r, int n) {
    if (n < 0) return 0.0;  // coefficient is zero for these terms
    double p = 1.0;
    for (int i = 0; i < n; ++i) p *= r;
    return p;
  }

  std::vector<double> b_;  // b_[k] multiplies r^(2k+1); b_[0] = 1
  double length_;
  bool closed_;
};

// Reflection of a base form with totally geodesic boundary about r = L.
class DoubledForm : public WarpForm {
 public:
  DoubledForm(std::shared_ptr<const WarpForm> base, double base_length)
      : base_(std::move(base)), base_length_(base_length) {}

  double value(double r) const override {
    return base_->value(r <= base_length_ ? r : 2.0 * base_length_ - r);
  }

  FJet jet(double r, Side side) const override {
    const double eps = 1e-13 * base_length_;
    if (r < base_length_ - eps) return base_->jet(r, Side::automatic);
    if (r > base_length_ + eps) return mirrored(2.0 * base_length_ - r);
    if (side == Side::above) return mirrored(base_length_);
    return base_->jet(base_length_, Side::automatic);
  }

  double length() const override { return 2.0 * base_length_; }
  bool closed() const override { return true; }
  double seam() const override { return base_length_; }

  PoleSeries north_series() const override { return base_->north_series(); }
  PoleSeries south_series() const override { return base_->north_series(); }

  std::string describe() const override {
    return "doubled(" + base_->describe() + ")";
  }

 private:
  FJet mirrored(double t) const {
    FJet j = base_->jet(t, Side::automatic);
    j.f1 = -j.f1;
    j.f3 = -j.f3;
    return j;
  }

  std::shared_ptr<const WarpForm> base_;
  double base_length_;
};

}  // namespace detail

double WarpedMetric::f(double r) const { return form_->value(r); }

FJet WarpedMetric::jet(double r, Side side) const { return form_->jet(r, side); }

const PoleSeries& WarpedMetric::north_series() const { return north_series_; }

const PoleSeries& WarpedMetric::south_series() const {
  if (!closed_)
    throw Error(errc::out_of_domain,
                "south_series: metric with boundary has no south pole");
  return south_series_;
}

std::string WarpedMetric::describe() const { return form_->describe(); }

CurvatureData WarpedMetric::curvature(double r, Side side) const {
  const double eps = 1e-12 * std::fmax(1.0, length_);
  if (r < -eps || r > length_ + eps)
    throw Error(errc::out_of_domain, "curvature: radius outside [0, L]");
  r = std::clamp(r, 0.0, length_);

  CurvatureData out;
  out.r = r;
  out.at_seam = has_seam() && std::fabs(r - seam_) <= eps;

  const double t_north = r;
  const double t_south = closed_ ? length_ - r : std::numeric_limits<double>::infinity();
  if (t_north <= pole_window_ || t_south <= pole_window_) {
    const bool north = t_north <= t_south;
    const PoleSeries& ps = north ? north_series_ : south_series_;
    const double t = north ? t_north : t_south;
    const double u = t * t;
    out.ric_radial = series_eval(ps.ric_radial, u);
    out.ric_tangential = series_eval(ps.ric_tangential, u);
    out.scalar = series_eval(ps.scalar, u);
    return out;
  }

  const FJet j = jet(r, side);
  const double a = j.f2 / j.f;
  const double b = (1.0 - j.f1 * j.f1) / (j.f * j.f);
  out.ric_radial = -2.0 * a;
  out.ric_tangential = -a + b;
  out.scalar = -4.0 * a + 2.0 * b;
  return out;
}

double WarpedMetric::ball_volume(double r) const {
  const double eps = 1e-12 * std::fmax(1.0, length_);
  if (r < -eps || r > length_ + eps)
    throw Error(errc::out_of_domain, "ball_volume: radius outside [0, L]");
  r = std::clamp(r, 0.0, length_);
  const auto f2 = [this](double t) {
    const double v = form_->value(t);
    return v * v;
  };
  if (!has_seam() || r <= seam_)
    return 4.0 * kPi * integrate_panels(f2, 0.0, r, panels_);
  return seam_volume_ + 4.0 * kPi * integrate_panels(f2, seam_, r, panels_);
}

double WarpedMetric::radius_for_volume(double volume) const {
  const double total = total_volume_;
  const double vol_eps = 1e-9 * total;
  if (volume < -vol_eps || volume > total + vol_eps)
    throw Error(errc::out_of_range,
                "radius_for_volume: volume outside [0, total]");
  volume = std::clamp(volume, 0.0, total);
  if (volume == 0.0) return 0.0;
  if (volume == total) return length_;

  const auto g = [&](double r) { return ball_volume(r) - volume; };
  const double xtol = options_.root_xtol_factor * std::fmax(1.0, length_);
  double r = brent(g, 0.0, length_, -volume, total - volume, xtol);

  // Fixed Newton polish with the exact slope dV/dr = 4 pi f(r)^2. A fixed
  // iteration count keeps the map V -> r smooth, which the difference
  // quotients downstream rely on.
  for (int i = 0; i < 3; ++i) {
    const double fr = form_->value(r);
    const double slope = 4.0 * kPi * fr * fr;
    if (slope < 1e-300) break;
    r = std::clamp(r - g(r) / slope, 0.0, length_);
  }
  return r;
}

namespace {

void check_endpoint_conditions(const WarpedMetric& m, bool closed) {
  const double L = m.length();
  const double scale = std::fmax(1.0, L);
  const FJet j0 = m.jet(0.0);
  if (std::fabs(j0.f) > 1e-12 * scale)
    throw Error(errc::geometry_violation, "f(0) != 0");
  if (std::fabs(j0.f1 - 1.0) > 1e-9)
    throw Error(errc::geometry_violation, "f'(0) != 1");

  const FJet jL = m.jet(L, Side::below);
  if (closed) {
    if (std::fabs(jL.f) > 1e-9 * scale)
      throw Error(errc::geometry_violation,
                  "closed metric requires f(L) = 0, got f(L) = " + fmt_g(jL.f));
    if (std::fabs(jL.f1 + 1.0) > 1e-9)
      throw Error(errc::geometry_violation,
                  "closed metric requires f'(L) = -1, got f'(L) = " + fmt_g(jL.f1));
    // Even-order derivatives must vanish for the south pole to be smooth;
    // otherwise the curvature is not even defined there.
    const double dscale = 1.0 + 1.0 / L;
    if (std::fabs(jL.f2) > 1e-7 * dscale)
      throw Error(errc::geometry_violation,
                  "closed metric requires f''(L) = 0, got " + fmt_g(jL.f2));
    if (std::fabs(jL.f4) > 1e-5 * dscale * dscale * dscale)
      throw Error(errc::geometry_violation,
                  "closed metric requires f''''(L) = 0, got " + fmt_g(jL.f4));
  } else {
    if (jL.f <= 1e-12 * scale)
      throw Error(errc::geometry_violation,
                  "metric with boundary requires f(L) > 0");
  }
}

void check_interior_positivity(const WarpedMetric& m) {
  const int n = 2048;
  const double L = m.length();
  for (int i = 1; i < n; ++i) {
    const double r = L * i / n;
    if (m.f(r) <= 0.0)
      throw Error(errc::geometry_violation,
                  "f <= 0 in the interior at r = " + fmt_g(r));
  }
}

void check_pole_consistency(const WarpedMetric& m) {
  // Series and generic curvature paths must agree at the window edge, and
  // the two Ricci eigenvalues must coincide in the isotropy limit.
  const double d0 = m.pole_window();
  std::vector<double> probes = {d0};
  if (m.is_closed()) probes.push_back(m.length() - d0);
  for (double r : probes) {
    const CurvatureData series = m.curvature(r);
    const FJet j = m.jet(r);
    const double a = j.f2 / j.f;
    const double b = (1.0 - j.f1 * j.f1) / (j.f * j.f);
    const double generic = -4.0 * a + 2.0 * b;
    if (std::fabs(series.scalar - generic) >
        1e-6 * std::fmax(1.0, std::fabs(generic)))
      throw Error(errc::geometry_violation,
                  "pole series inconsistent with generic curvature at r = " +
                      fmt_g(r));
  }
  std::vector<double> iso = {0.5 * d0};
  if (m.is_closed()) iso.push_back(m.length() - 0.5 * d0);
  for (double r : iso) {
    const CurvatureData c = m.curvature(r);
    if (std::fabs(c.ric_radial - c.ric_tangential) >
        1e-6 * std::fmax(1.0, std::fabs(c.ric_radial)))
      throw Error(errc::geometry_violation,
                  "Ricci eigenvalues not isotropic near pole, r = " + fmt_g(r));
  }
}

void finalize_metric(WarpedMetric& m) {
  check_endpoint_conditions(m, m.is_closed());
  check_interior_positivity(m);
  check_pole_consistency(m);
}

}  // namespace

WarpedMetric build_metric(const WarpingSpec& spec, const MetricOptions& options) {
  WarpedMetric m;
  m.options_ = options;

  switch (spec.kind) {
    case WarpingSpec::Kind::round:
    case WarpingSpec::Kind::scaled:
    case WarpingSpec::Kind::hemisphere: {
      if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda))
        throw Error(errc::malformed_spec, "lambda must be positive and finite");
      const bool hemi = spec.kind == WarpingSpec::Kind::hemisphere;
      m.form_ = std::make_shared<detail::SinForm>(spec.lambda, hemi, spec.kind);
      break;
    }
    case WarpingSpec::Kind::series: {
      if (!(spec.length > 0.0) || !std::isfinite(spec.length))
        throw Error(errc::malformed_spec, "series length must be positive");
      if (spec.odd_coefficients.empty() ||
          spec.odd_coefficients.size() > kSeriesTerms - 1)
        throw Error(errc::malformed_spec,
                    "series needs between 1 and " +
                        std::to_string(kSeriesTerms - 1) + " odd coefficients");
      for (double c : spec.odd_coefficients)
        if (!std::isfinite(c))
          throw Error(errc::malformed_spec, "series coefficient not finite");
      m.form_ = std::make_shared<detail::PolyForm>(
          spec.odd_coefficients, spec.length, spec.series_closed);
      break;
    }
  }

  m.length_ = m.form_->length();
  m.closed_ = m.form_->closed();
  m.seam_ = m.form_->seam();
  m.pole_window_ = options.pole_window_factor * m.length_;
  m.north_series_ = m.form_->north_series();
  if (m.closed_) m.south_series_ = m.form_->south_series();

  const auto f2 = [&](double t) {
    const double v = m.form_->value(t);
    return v * v;
  };
  int panels = calibrate_panels(f2, 0.0, m.length_, options.quad_rel, 4);
  panels = std::max(panels,
                    calibrate_panels(f2, 0.0, 0.37 * m.length_, options.quad_rel, 4));
  m.panels_ = panels;
  m.total_volume_ = 4.0 * kPi * integrate_panels(f2, 0.0, m.length_, panels);

  finalize_metric(m);
  return m;
}

WarpedMetric double_metric(const WarpedMetric& metric, double boundary_tol) {
  if (metric.is_closed())
    throw Error(errc::not_totally_geodesic,
                "double: metric is closed, there is no boundary to reflect");
  const FJet jL = metric.jet(metric.length(), Side::below);
  if (std::fabs(jL.f1) > boundary_tol)
    throw Error(errc::not_totally_geodesic,
                "double: boundary not totally geodesic, f'(L) = " + fmt_g(jL.f1));

  WarpedMetric m;
  m.options_ = metric.options_;
  m.form_ = std::make_shared<detail::DoubledForm>(metric.form_, metric.length());
  m.length_ = 2.0 * metric.length();
  m.closed_ = true;
  m.seam_ = metric.length();
  m.pole_window_ = metric.options_.pole_window_factor * m.length_;
  m.panels_ = metric.panels_;
  m.seam_volume_ = metric.total_volume_;
  m.total_volume_ = 2.0 * metric.total_volume_;
  m.north_series_ = metric.north_series_;
  m.south_series_ = metric.north_series_;
  return m;
}

CurvatureData curvature_at(const WarpedMetric& metric, double r) {
  return metric.curvature(r);
}

HypothesisReport verify_hypotheses(const WarpedMetric& metric, int grid_size,
                                   Exec exec, double scalar_slack,
                                   double seam_notch_factor) {
  if (grid_size < 64)
    throw Error(errc::out_of_range, "verify_hypotheses: gridSize >= 64 required");

  const double L = metric.length();
  const double notch = metric.has_seam() ? seam_notch_factor * L : -1.0;
  const int n = grid_size;

  std::vector<CurvatureData> samples(n + 1);
  std::vector<char> keep(n + 1, 1);
  parallel_for(n + 1, exec, [&](std::int64_t i) {
    const double r = L * double(i) / double(n);
    if (metric.has_seam() && std::fabs(r - metric.seam_radius()) < notch) {
      keep[i] = 0;
      return;
    }
    samples[i] = metric.curvature(r);
  });

  HypothesisReport report;
  report.min_scalar = std::numeric_limits<double>::infinity();
  report.min_ricci_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    if (!keep[i]) continue;
    const CurvatureData& c = samples[i];
    report.min_scalar = std::fmin(report.min_scalar, c.scalar);
    const double ric_min = std::fmin(c.ric_radial, c.ric_tangential);
    report.min_ricci_eigenvalue = std::fmin(report.min_ricci_eigenvalue, ric_min);
    if (c.scalar < 6.0 - scalar_slack)
      report.violations.push_back({c.r, "scalar", c.scalar});
    if (ric_min <= 0.0) report.violations.push_back({c.r, "ricci", ric_min});
  }
  report.scalar_ok = report.min_scalar >= 6.0 - scalar_slack;
  report.ricci_ok = report.min_ricci_eigenvalue > 0.0;

  if (metric.has_seam()) {
    const double s = metric.seam_radius();
    report.seam.push_back({Side::below, metric.curvature(s, Side::below)});
    report.seam.push_back({Side::above, metric.curvature(s, Side::above)});
  }
  return report;
}

double laplacian_scalar_at_pole(const WarpedMetric& metric, Pole pole) {
  if (pole == Pole::south && !metric.is_closed())
    throw Error(errc::out_of_domain,
                "laplacian_scalar_at_pole: south end is a boundary, not a pole");
  const double L = metric.length();
  const double pole_r = (pole == Pole::north) ? 0.0 : L;
  if (metric.has_seam() &&
      std::fabs(pole_r - metric.seam_radius()) < 1e-9 * std::fmax(1.0, L))
    throw Error(errc::seam_pole,
                "laplacian_scalar_at_pole: pole coincides with the seam");

  // R is even in the distance t to the pole:
  //   2 (R(t) - R(0)) / t^2 = R''(0) + O(t^2).
  // The points sit inside the pole window, where R comes from the radial
  // expansion; the difference R(t) - R(0) is evaluated through the shifted
  // expansion to avoid subtractive cancellation. Richardson extrapolation
  // in t^2 then removes the tail.
  const PoleSeries& ps =
      (pole == Pole::north) ? metric.north_series() : metric.south_series();
  USeries tail{};
  for (std::size_t k = 0; k + 1 < kSeriesTerms; ++k) tail[k] = ps.scalar[k + 1];

  const double h0 = 0.45 * metric.pole_window();
  constexpr int levels = 5;
  double tab[levels];
  for (int j = 0; j < levels; ++j) {
    const double h = h0 / double(1 << j);
    tab[j] = 2.0 * series_eval(tail, h * h);
  }
  double factor = 1.0;
  for (int k = 1; k < levels; ++k) {
    factor *= 4.0;
    for (int j = levels - 1; j >= k; --j)
      tab[j] = (factor * tab[j] - tab[j - 1]) / (factor - 1.0);
  }
  return 3.0 * tab[levels - 1];
}

}  // namespace isolab
