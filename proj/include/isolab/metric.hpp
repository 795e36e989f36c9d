#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isolab/errors.hpp"
#include "isolab/parallel.hpp"
#include "isolab/series.hpp"

namespace isolab {

enum class Pole { north, south };

// Evaluation side for metrics with a doubling seam (C^{1,1} there).
enum class Side { automatic, below, above };

inline const char* pole_name(Pole p) { return p == Pole::north ? "north" : "south"; }

// Warping function value and derivatives through fourth order at one radius.
struct FJet {
  double f = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f4 = 0.0;
};

// Declarative description of the warping function. Presets carry analytic
// derivative formulas; the series kind is an odd polynomial
//   f(r) = r + f3 r^3 + f5 r^5 + ...
// evaluated term-wise, so its derivatives are exact as well.
struct WarpingSpec {
  enum class Kind { round, scaled, hemisphere, series };

  Kind kind = Kind::round;
  double lambda = 1.0;                   // scaled / hemisphere
  std::vector<double> odd_coefficients;  // series: f3, f5, ...
  double length = 0.0;                   // series: domain length L
  bool series_closed = false;            // series: closed manifold intended

  static WarpingSpec round();
  static WarpingSpec scaled(double lambda);
  static WarpingSpec hemisphere(double lambda);
  static WarpingSpec series(std::vector<double> odd, double length,
                            bool closed = false);
};

std::string spec_kind_name(WarpingSpec::Kind kind);

struct CurvatureData {
  double r = 0.0;
  double scalar = 0.0;          // R
  double ric_radial = 0.0;      // Ric(d_r, d_r) = -2 f''/f
  double ric_tangential = 0.0;  // -f''/f + (1 - f'^2)/f^2
  bool at_seam = false;         // one-sided value at a doubling seam
};

struct HypothesisViolation {
  double r = 0.0;
  std::string quantity;  // "scalar" or "ricci"
  double value = 0.0;
};

struct SeamSample {
  Side side = Side::below;
  CurvatureData curvature;
};

struct HypothesisReport {
  bool scalar_ok = false;
  bool ricci_ok = false;
  double min_scalar = 0.0;
  double min_ricci_eigenvalue = 0.0;
  std::vector<HypothesisViolation> violations;
  std::vector<SeamSample> seam;  // one-sided seam data, doubled metrics only

  bool passed() const { return scalar_ok && ricci_ok; }
};

struct MetricOptions {
  double pole_window_factor = 1e-3;  // series evaluation inside delta0 = factor * L
  double quad_rel = 1e-13;           // panel calibration target
  double root_xtol_factor = 1e-10;   // Brent tolerance (times L) before Newton polish
};

namespace detail {
class WarpForm;
}

// Validated rotationally symmetric metric dr^2 + f(r)^2 g_{S^2} on [0, L].
// All evaluators are pure; instances may be shared freely across threads.
class WarpedMetric {
 public:
  // Empty until assigned from build_metric / double_metric.
  WarpedMetric() = default;

  double length() const { return length_; }
  bool is_closed() const { return closed_; }
  bool has_boundary() const { return !closed_; }
  double total_volume() const { return total_volume_; }
  double pole_window() const { return pole_window_; }

  bool has_seam() const { return seam_ >= 0.0; }
  double seam_radius() const { return seam_; }

  double f(double r) const;
  FJet jet(double r, Side side = Side::automatic) const;

  CurvatureData curvature(double r, Side side = Side::automatic) const;

  // Volume of the coordinate ball about the north pole: 4 pi Int_0^r f^2.
  double ball_volume(double r) const;
  // Inverse of ball_volume on [0, total_volume].
  double radius_for_volume(double volume) const;

  const PoleSeries& north_series() const;
  const PoleSeries& south_series() const;  // closed metrics only

  std::string describe() const;
  const MetricOptions& options() const { return options_; }

 private:
  friend WarpedMetric build_metric(const WarpingSpec&, const MetricOptions&);
  friend WarpedMetric double_metric(const WarpedMetric&, double);

  std::shared_ptr<const detail::WarpForm> form_;
  double length_ = 0.0;
  bool closed_ = false;
  double seam_ = -1.0;
  double seam_volume_ = 0.0;  // ball volume up to the seam (doubled metrics)
  double total_volume_ = 0.0;
  double pole_window_ = 0.0;
  int panels_ = 0;
  MetricOptions options_;
  PoleSeries north_series_;
  PoleSeries south_series_;
};

WarpedMetric build_metric(const WarpingSpec& spec,
                          const MetricOptions& options = {});

// Reflects a totally geodesic boundary, producing the closed C^{1,1} double.
WarpedMetric double_metric(const WarpedMetric& metric,
                           double boundary_tol = 1e-10);

CurvatureData curvature_at(const WarpedMetric& metric, double r);

HypothesisReport verify_hypotheses(const WarpedMetric& metric, int grid_size,
                                   Exec exec = Exec::parallel,
                                   double scalar_slack = 1e-9,
                                   double seam_notch_factor = 1e-2);

// Delta R at a pole, computed as 3 R''(0+) from Richardson-extrapolated
// central differences of the even radial expansion of R.
double laplacian_scalar_at_pole(const WarpedMetric& metric, Pole pole);

}  // namespace isolab
