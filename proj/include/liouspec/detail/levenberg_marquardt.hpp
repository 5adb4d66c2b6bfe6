#ifndef LIOUSPEC_DETAIL_LEVENBERG_MARQUARDT_HPP_
#define LIOUSPEC_DETAIL_LEVENBERG_MARQUARDT_HPP_

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace liouspec::detail {

struct LMOptions {
  int max_iterations = 500;
  double rss_rtol = 1e-12;   // relative RSS change on an accepted step
  double grad_tol = 1e-10;   // ||Jᵀr||_inf
  double initial_damping = 1e-3;
  double max_damping = 1e32;
};

struct LMResult {
  Eigen::VectorXd theta;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Gauss-Newton with Marquardt's diagonal scaling and Nielsen's
// damping update. `problem` provides
//   void residuals(const VectorXd& theta, VectorXd& r) const;
//   void jacobian(const VectorXd& theta, MatrixXd& J) const;
// The diagonal scaling makes the iterates equivariant under rescaling of
// individual parameters.
template <typename Problem>
LMResult levenberg_marquardt(const Problem& problem, Eigen::VectorXd theta,
                             const LMOptions& opts = {}) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  VectorXd r;
  MatrixXd J;
  problem.residuals(theta, r);
  LMResult out;
  out.rss = r.squaredNorm();
  if (!std::isfinite(out.rss)) {
    out.theta = theta;
    return out;
  }

  double damping = opts.initial_damping;
  double nu = 2.0;
  bool fresh_jacobian = false;
  VectorXd g;
  MatrixXd A;

  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it + 1;
    if (!fresh_jacobian) {
      problem.jacobian(theta, J);
      A = J.transpose() * J;
      g = J.transpose() * r;
      fresh_jacobian = true;
    }
    if (out.rss == 0.0 || g.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      out.converged = true;
      break;
    }

    VectorXd scale = A.diagonal().cwiseMax(1e-300);
    MatrixXd damped = A;
    damped.diagonal() += damping * scale;
    const VectorXd step = damped.ldlt().solve(-g);

    const VectorXd trial = theta + step;
    VectorXd r_trial;
    problem.residuals(trial, r_trial);
    const double rss_trial = r_trial.squaredNorm();

    // RSS reduction predicted by the local quadratic model.
    const double predicted = step.dot(damping * scale.cwiseProduct(step) - g);
    if (std::isfinite(rss_trial) && rss_trial <= out.rss && step.allFinite()) {
      const double rel = (out.rss - rss_trial) / out.rss;
      const double rho = predicted > 0 ? (out.rss - rss_trial) / predicted : 0.0;
      theta = trial;
      r = std::move(r_trial);
      out.rss = rss_trial;
      fresh_jacobian = false;
      damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (rel < opts.rss_rtol) {
        out.converged = true;
        break;
      }
    } else {
      damping *= nu;
      nu *= 2.0;
      if (damping > opts.max_damping) break;
    }
  }
  out.theta = theta;
  return out;
}

}  // namespace liouspec::detail

#endif  // LIOUSPEC_DETAIL_LEVENBERG_MARQUARDT_HPP_
