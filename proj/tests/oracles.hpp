#ifndef LIOUSPEC_TESTS_ORACLES_HPP_
#define LIOUSPEC_TESTS_ORACLES_HPP_

// Reference computations that share no code path with the library's
// resolvent machinery. Used by the unit tests and the acceptance binary.

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "liouspec/liouvillian.hpp"

namespace liouspec::oracles {

struct QuadratureResult {
  std::vector<double> values;
  double horizon = 0.0;         // T
  double final_correlator = 0.0;  // |C(T)|
  std::size_t steps = 0;
};

// S(ω) = (1/π) Re ∫_0^T e^{-iωτ} Tr[J- e^{Lτ} (ρ0 J+)] dτ, with the
// correlator stepped by the dense propagator expm(L dt) on the full
// Liouville space and integrated with composite Simpson. T grows until
// |C(τ)| stays below tail_tol.
inline QuadratureResult quadrature_spectrum(const Liouvillian& L, const MatrixXc& rho0,
                                            std::span<const double> grid, double dt = 0.005,
                                            double tail_tol = 1e-10) {
  const auto ops = build_spin_ops<Complex>(L.params.j);
  const MatrixXc P = (L.matrix * dt).exp();
  VectorXc v = vectorize(MatrixXc(rho0 * ops.Jp));

  std::vector<Complex> C;
  C.push_back((ops.Jm * devectorize(v)).trace());
  // Keep stepping until the correlator has been small over a full period of
  // the coherent rotation; the step count stays even for Simpson.
  const std::size_t window = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / dt));
  std::size_t quiet = 0;
  while (quiet < window || C.size() % 2 == 0) {
    v = P * v;
    C.push_back((ops.Jm * devectorize(v)).trace());
    quiet = std::abs(C.back()) < tail_tol ? quiet + 1 : 0;
    if (C.size() > 50'000'000) break;
  }

  QuadratureResult out;
  out.steps = C.size() - 1;
  out.horizon = dt * static_cast<double>(out.steps);
  out.final_correlator = std::abs(C.back());
  out.values.reserve(grid.size());
  for (double w : grid) {
    const Complex step = std::exp(Complex(0.0, -w * dt));
    Complex phase = 1.0;
    Complex sum = 0.0;
    for (std::size_t k = 0; k < C.size(); ++k) {
      const double weight = (k == 0 || k + 1 == C.size()) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += weight * phase * C[k];
      phase *= step;
    }
    out.values.push_back((sum * dt / 3.0).real() / std::numbers::pi);
  }
  return out;
}

// Σ_μ (c·r_μ)(l_μ·x) / (iω - λ_μ) from a full eigendecomposition of the
// block; also reports the eigenvector condition number.
struct ModalExpansion {
  VectorXc lambda;
  VectorXc weights;
  double condition = 0.0;

  Complex at(double omega) const {
    Complex s = 0.0;
    for (Index k = 0; k < lambda.size(); ++k) s += weights(k) / (Complex(0.0, omega) - lambda(k));
    return s;
  }
};

inline ModalExpansion modal_expansion(const MatrixXc& block, const VectorXc& probe,
                                      const VectorXc& source) {
  Eigen::ComplexEigenSolver<MatrixXc> es(block);
  const MatrixXc& V = es.eigenvectors();
  const Eigen::JacobiSVD<MatrixXc> svd(V);
  ModalExpansion m;
  m.condition = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
  const VectorXc coeff = V.fullPivLu().solve(source);
  m.lambda = es.eigenvalues();
  m.weights = (probe.transpose() * V).transpose().cwiseProduct(coeff);
  return m;
}

// Null vector of the full Liouvillian by full-pivot LU, as a density matrix.
inline MatrixXc nullspace_state(const Liouvillian& L) {
  Eigen::FullPivLU<MatrixXc> lu(L.matrix);
  lu.setThreshold(1e-10);
  const MatrixXc ker = lu.kernel();
  MatrixXc rho = devectorize(VectorXc(ker.col(0)));
  rho /= rho.trace();
  return rho;
}

}  // namespace liouspec::oracles

#endif  // LIOUSPEC_TESTS_ORACLES_HPP_
