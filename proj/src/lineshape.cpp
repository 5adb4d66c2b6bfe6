#include "liouspec/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "liouspec/detail/levenberg_marquardt.hpp"

namespace liouspec {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr Index kMinFitPoints = 20;

// Parameter vector: [a, ω0, log γ, c] (+ b for model B).
VectorXd pack(LineModel model, const LineShapeParams& q) {
  VectorXd th(parameter_count(model));
  th << q.a, q.omega0, std::log(q.gamma), q.c;
  if (model == LineModel::B) th(4) = q.b;
  return th;
}

LineShapeParams unpack(LineModel model, const VectorXd& th) {
  LineShapeParams q;
  q.a = th(0);
  q.omega0 = th(1);
  q.gamma = std::exp(th(2));
  q.c = th(3);
  q.b = model == LineModel::B ? th(4) : 0.0;
  return q;
}

class LineShapeProblem {
 public:
  LineShapeProblem(std::span<const double> x, std::span<const double> y, LineModel model)
      : x_(x), y_(y), model_(model) {}

  void residuals(const VectorXd& th, VectorXd& r) const {
    const LineShapeParams q = unpack(model_, th);
    r.resize(static_cast<Index>(x_.size()));
    for (std::size_t i = 0; i < x_.size(); ++i) {
      r(static_cast<Index>(i)) = eval_model(model_, q, x_[i]) - y_[i];
    }
  }

  void jacobian(const VectorXd& th, MatrixXd& J) const {
    const double a = th(0);
    const double w0 = th(1);
    const double g2 = std::exp(2.0 * th(2));
    const double b = model_ == LineModel::B ? th(4) : 0.0;
    J.resize(static_cast<Index>(x_.size()), th.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const auto row = static_cast<Index>(i);
      const double dx = x_[i] - w0;
      const double D = dx * dx;
      const double den = D + g2;
      const double den2 = den * den;
      const double den3 = den2 * den;
      // ∂f/∂D and ∂f/∂(γ²) of a/den + b(γ²-D)/den².
      const double df_dD = -a / den2 + b * (D - 3.0 * g2) / den3;
      const double df_dg2 = -a / den2 + b * (3.0 * D - g2) / den3;
      J(row, 0) = 1.0 / den;
      J(row, 1) = -2.0 * dx * df_dD;
      J(row, 2) = 2.0 * g2 * df_dg2;
      J(row, 3) = 1.0;
      if (model_ == LineModel::B) J(row, 4) = (g2 - D) / den2;
    }
  }

 private:
  std::span<const double> x_;
  std::span<const double> y_;
  LineModel model_;
};

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_shapes(std::span<const double> omega, std::span<const double> values) {
  if (omega.size() != values.size()) {
    throw DimensionMismatch("line shape: omega and values differ in length");
  }
}

}  // namespace

std::string_view to_string(LineModel m) { return m == LineModel::A ? "A" : "B"; }

double ep_weight(const LineShapeParams& q) {
  const double denom = std::abs(q.a) + std::abs(q.b);
  return denom > 0.0 ? std::abs(q.b) / denom : 0.0;
}

double half_width_estimate(std::span<const double> omega, std::span<const double> values,
                           std::size_t peak) {
  check_shapes(omega, values);
  if (values.size() < 2 || peak >= values.size()) {
    throw InvalidArgument("half width: need at least two points and a valid peak index");
  }
  const double top = values[peak];
  const double floor = *std::min_element(values.begin(), values.end());
  const double level = floor + 0.5 * (top - floor);

  auto crossing = [&](std::size_t from, std::size_t to) {
    // Linear interpolation between the last point above and first point below.
    const double t = (values[from] - level) / (values[from] - values[to]);
    return omega[from] + t * (omega[to] - omega[from]);
  };

  double left = omega.front();
  for (std::size_t i = peak; i > 0; --i) {
    if (values[i - 1] < level) {
      left = crossing(i, i - 1);
      break;
    }
  }
  double right = omega.back();
  for (std::size_t i = peak; i + 1 < values.size(); ++i) {
    if (values[i + 1] < level) {
      right = crossing(i, i + 1);
      break;
    }
  }
  double hw = 0.5 * (right - left);
  if (!(hw > 0.0)) hw = omega[1] - omega[0];
  return hw;
}

LineShapeParams initial_guess(std::span<const double> omega, std::span<const double> values) {
  check_shapes(omega, values);
  const std::size_t n = values.size();
  const std::size_t k = argmax(values);

  LineShapeParams q;
  q.omega0 = omega[k];
  q.gamma = half_width_estimate(omega, values, k);

  const std::size_t edge = std::min<std::size_t>(5, n / 2);
  std::vector<double> edges(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(edge));
  edges.insert(edges.end(), values.end() - static_cast<std::ptrdiff_t>(edge), values.end());
  q.c = median(std::move(edges));
  q.a = (values[k] - q.c) * q.gamma * q.gamma;
  q.b = 0.0;
  return q;
}

double residual_sum_of_squares(LineModel model, const LineShapeParams& q,
                               std::span<const double> omega, std::span<const double> values) {
  check_shapes(omega, values);
  double rss = 0.0;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double r = eval_model(model, q, omega[i]) - values[i];
    rss += r * r;
  }
  return rss;
}

FitResult fit(std::span<const double> omega, std::span<const double> values, LineModel model,
              const FitOptions& opts, const LineShapeParams* seed) {
  check_shapes(omega, values);
  if (static_cast<Index>(omega.size()) < kMinFitPoints) {
    throw InvalidArgument("fit: need at least 20 points in the window, got " +
                          std::to_string(omega.size()));
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw DegenerateWindow("fit: all values in the window are equal");

  const LineShapeParams base = initial_guess(omega, values);
  const double peak = *hi;

  std::vector<LineShapeParams> starts;
  for (double s : opts.gamma_scales) {
    LineShapeParams q = base;
    q.gamma = base.gamma * s;
    q.a = (peak - base.c) * q.gamma * q.gamma;
    starts.push_back(q);
  }
  if (seed != nullptr) {
    LineShapeParams q = *seed;
    q.b = 0.0;
    if (q.gamma > 0.0 && std::isfinite(q.gamma)) starts.push_back(q);
  }

  const LineShapeProblem problem(omega, values, model);
  detail::LMOptions lm;
  lm.max_iterations = opts.max_iterations;
  lm.rss_rtol = opts.rss_rtol;
  lm.grad_tol = opts.grad_tol;

  FitResult best;
  best.model = model;
  best.n_params = parameter_count(model);
  best.n_points = static_cast<Index>(omega.size());
  best.window = {omega.front(), omega.back()};
  best.rss = std::numeric_limits<double>::infinity();
  bool have = false;
  for (const auto& q0 : starts) {
    const auto res = detail::levenberg_marquardt(problem, pack(model, q0), lm);
    if (!res.theta.allFinite() || !std::isfinite(res.rss)) continue;
    if (!have || res.rss < best.rss) {
      best.params = unpack(model, res.theta);
      best.rss = res.rss;
      best.converged = res.converged;
      best.n_iterations = res.iterations;
      have = true;
    }
  }
  if (!have) {
    best.params = base;
    best.converged = false;
  }
  best.rss = residual_sum_of_squares(model, best.params, omega, values);
  best.data_scale = std::max(std::abs(*lo), std::abs(*hi));
  const double floor = kPerfectFitRtol * best.data_scale;
  best.perfect = best.rss <= static_cast<double>(best.n_points) * floor * floor;
  return best;
}

FitResult fit(const SpectrumTrace& trace, LineModel model, FitWindow window,
              const FitOptions& opts) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < trace.omegas.size(); ++i) {
    if (trace.omegas[i] >= window.lo && trace.omegas[i] <= window.hi) {
      x.push_back(trace.omegas[i]);
      y.push_back(trace.values[i]);
    }
  }
  return fit(x, y, model, opts);
}

namespace {

double criterion(const FitResult& f, double penalty_per_param) {
  if (f.n_points <= f.n_params) {
    throw InvalidArgument("information criterion: need more points than parameters");
  }
  if (f.perfect || f.rss == 0.0) return -std::numeric_limits<double>::infinity();
  const double N = static_cast<double>(f.n_points);
  return penalty_per_param * f.n_params + N * std::log(f.rss / N);
}

double criterion_delta(const FitResult& A, const FitResult& B, double penalty_per_param) {
  if (A.perfect || A.rss == 0.0) return penalty_per_param * (B.n_params - A.n_params);
  return criterion(B, penalty_per_param) - criterion(A, penalty_per_param);
}

}  // namespace

double bic(const FitResult& f) { return criterion(f, std::log(static_cast<double>(f.n_points))); }
double aic(const FitResult& f) { return criterion(f, 2.0); }

double delta_bic(const FitResult& A, const FitResult& B) {
  return criterion_delta(A, B, std::log(static_cast<double>(A.n_points)));
}
double delta_aic(const FitResult& A, const FitResult& B) { return criterion_delta(A, B, 2.0); }

EPDiagnostics ep_diagnostics(std::span<const double> omega, std::span<const double> values,
                             const DiagnosticsOptions& opts) {
  check_shapes(omega, values);
  if (omega.size() < 3) throw InvalidArgument("ep_diagnostics: trace too short");

  const std::size_t k = argmax(values);
  const double med = median(std::vector<double>(values.begin(), values.end()));
  if (!(values[k] > 3.0 * med)) {
    throw NoPeak("ep_diagnostics: no dominant peak (max <= 3 x median)");
  }

  EPDiagnostics out;
  out.gamma_estimate = half_width_estimate(omega, values, k);
  const double half = opts.window_mult * out.gamma_estimate;
  std::size_t first = k;
  std::size_t last = k;
  while (first > 0 && omega[first - 1] >= omega[k] - half) --first;
  while (last + 1 < omega.size() && omega[last + 1] <= omega[k] + half) ++last;
  while (static_cast<Index>(last - first + 1) < opts.min_points &&
         (first > 0 || last + 1 < omega.size())) {
    if (first > 0) --first;
    if (last + 1 < omega.size() && static_cast<Index>(last - first + 1) < opts.min_points) ++last;
  }

  const auto x = omega.subspan(first, last - first + 1);
  const auto y = values.subspan(first, last - first + 1);
  out.window = {x.front(), x.back()};
  out.fitA = fit(x, y, LineModel::A, opts.fit);
  out.fitB = fit(x, y, LineModel::B, opts.fit, &out.fitA.params);
  // B contains A; if no start beat the best A, A itself is B's optimum.
  if (out.fitB.rss > out.fitA.rss) {
    out.fitB.params = out.fitA.params;
    out.fitB.params.b = 0.0;
    out.fitB.rss = residual_sum_of_squares(LineModel::B, out.fitB.params, x, y);
    out.fitB.perfect = out.fitA.perfect;
  }
  out.r = ep_weight(out.fitB.params);
  out.delta_bic = delta_bic(out.fitA, out.fitB);
  out.delta_aic = delta_aic(out.fitA, out.fitB);
  return out;
}

EPDiagnostics ep_diagnostics(const SpectrumTrace& trace, const DiagnosticsOptions& opts) {
  return ep_diagnostics(std::span<const double>(trace.omegas),
                        std::span<const double>(trace.values), opts);
}

}  // namespace liouspec
