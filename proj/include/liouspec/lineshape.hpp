#ifndef LIOUSPEC_LINESHAPE_HPP_
#define LIOUSPEC_LINESHAPE_HPP_

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "liouspec/spectral.hpp"

namespace liouspec {

// A: a / (Δ² + γ²) + c
// B: A + b (γ² - Δ²) / (Δ² + γ²)², with Δ = ω - ω0.
enum class LineModel { A, B };

std::string_view to_string(LineModel m);
inline int parameter_count(LineModel m) { return m == LineModel::A ? 4 : 5; }

struct LineShapeParams {
  double a = 0.0;
  double omega0 = 0.0;
  double gamma = 1.0;
  double c = 0.0;
  double b = 0.0;  // ignored by model A
};

// Lorentzian profile 1 / (Δ² + γ²).
template <typename Scalar>
Scalar lorentzian(Scalar delta, Scalar gamma) {
  return Scalar(1) / (delta * delta + gamma * gamma);
}

// Real part of the second-order pole, (γ² - Δ²) / (Δ² + γ²)².
template <typename Scalar>
Scalar super_lorentzian(Scalar delta, Scalar gamma) {
  const Scalar den = delta * delta + gamma * gamma;
  return (gamma * gamma - delta * delta) / (den * den);
}

template <typename Scalar>
Scalar eval_model(LineModel model, const LineShapeParams& q, Scalar omega) {
  const Scalar delta = omega - Scalar(q.omega0);
  const Scalar g = Scalar(q.gamma);
  Scalar s = Scalar(q.a) * lorentzian(delta, g) + Scalar(q.c);
  if (model == LineModel::B) s += Scalar(q.b) * super_lorentzian(delta, g);
  return s;
}

// r = |b| / (|a| + |b|); 0 when both vanish.
double ep_weight(const LineShapeParams& q);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct FitResult {
  LineModel model = LineModel::A;
  LineShapeParams params;
  double rss = 0.0;
  Index n_points = 0;
  int n_params = 4;
  bool converged = false;
  int n_iterations = 0;
  FitWindow window;
  double data_scale = 0.0;  // max |value| in the window
  // RMS residual at or below kPerfectFitRtol * data_scale: the misfit is
  // roundoff, and information criteria treat it like RSS = 0.
  bool perfect = false;
};

inline constexpr double kPerfectFitRtol = 1e-12;

struct FitOptions {
  std::vector<double> gamma_scales{0.25, 0.5, 1.0, 2.0, 4.0};
  int max_iterations = 500;
  double rss_rtol = 1e-12;
  double grad_tol = 1e-10;
};

// Starting point derived from the data: ω0 at the maximum, γ from the
// half-maximum crossings, c from the window edges, a matching the peak, b = 0.
LineShapeParams initial_guess(std::span<const double> omega, std::span<const double> values);

// Half width at half maximum around index peak, linearly interpolated; the
// half level sits midway between the minimum and the peak.
double half_width_estimate(std::span<const double> omega, std::span<const double> values,
                           std::size_t peak);

// Multi-start fit of one model to (omega, values). A seed, when given, is
// used as an additional start (with b reset to 0 for model A).
FitResult fit(std::span<const double> omega, std::span<const double> values, LineModel model,
              const FitOptions& opts = {}, const LineShapeParams* seed = nullptr);

// Fit restricted to the points of trace with lo <= ω <= hi.
FitResult fit(const SpectrumTrace& trace, LineModel model, FitWindow window,
              const FitOptions& opts = {});

// Sum of squared residuals of fit.params on the given points.
double residual_sum_of_squares(LineModel model, const LineShapeParams& q,
                               std::span<const double> omega, std::span<const double> values);

// k ln N + N ln(RSS/N); -infinity for perfect fits.
double bic(const FitResult& f);
// 2k + N ln(RSS/N); -infinity for perfect fits.
double aic(const FitResult& f);

// Criterion difference B - A. A perfect model-A fit gives the pure parameter
// penalty, a perfect model-B fit against an imperfect A gives -infinity.
double delta_bic(const FitResult& A, const FitResult& B);
double delta_aic(const FitResult& A, const FitResult& B);

struct DiagnosticsOptions {
  double window_mult = 10.0;  // window = peak ± window_mult * γ̂
  Index min_points = 21;      // window grows symmetrically until it holds this many
  FitOptions fit;
};

struct EPDiagnostics {
  double r = 0.0;
  double delta_bic = 0.0;
  double delta_aic = 0.0;
  FitResult fitA;
  FitResult fitB;
  FitWindow window;
  double gamma_estimate = 0.0;
};

// Picks the window around the dominant peak, fits both models (B is also
// started from the best A, so rss_B <= rss_A) and reports r, ΔBIC, ΔAIC.
// Throws NoPeak when max <= 3 * median.
EPDiagnostics ep_diagnostics(const SpectrumTrace& trace, const DiagnosticsOptions& opts = {});
EPDiagnostics ep_diagnostics(std::span<const double> omega, std::span<const double> values,
                             const DiagnosticsOptions& opts = {});

}  // namespace liouspec

#endif  // LIOUSPEC_LINESHAPE_HPP_
