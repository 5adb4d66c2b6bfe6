#include "liouspec/jordan_oracle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "liouspec/errors.hpp"

namespace liouspec {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

MatrixXc nilpotent_part() {
  MatrixXc N = MatrixXc::Zero(2, 2);
  N(0, 1) = 1.0;
  return N;
}

MatrixXc jordan_generator(Complex lambda0) {
  MatrixXc L = nilpotent_part();
  L.diagonal().setConstant(lambda0);
  return L;
}

MatrixXc jordan_resolvent(Complex lambda0, Complex z) {
  const Complex u = z - lambda0;
  if (u == Complex(0.0)) throw InvalidArgument("jordan_resolvent: z sits on the pole");
  MatrixXc R = MatrixXc::Identity(2, 2) / u;
  R += nilpotent_part() / (u * u);
  return R;
}

PoleWeights alpha_beta(const JordanBlockSystem& sys) {
  return {sys.A_r0 * sys.l0_B + sys.A_r1 * sys.l1_B, sys.A_r0 * sys.l1_B};
}

Complex jordan_response(const JordanBlockSystem& sys, Complex z) {
  Eigen::RowVector2cd a(sys.A_r0, sys.A_r1);
  Eigen::Vector2cd b(sys.l0_B, sys.l1_B);
  return (a * jordan_resolvent(sys.lambda0, z) * b)(0, 0);
}

InducedAmplitudes induced_amplitudes(const JordanBlockSystem& sys) {
  const double g = sys.gamma();
  if (!(g > 0.0)) throw InvalidArgument("jordan oracle: need Re λ0 < 0");
  const auto [alpha, beta] = alpha_beta(sys);
  // iω - λ0 = γ + iΔ; multiply through by the conjugate (γ - iΔ).
  return {g * alpha.real(), beta.real(), alpha.imag(), 2.0 * g * beta.imag()};
}

double analytic_ep_weight(const JordanBlockSystem& sys) {
  const auto amp = induced_amplitudes(sys);
  return ep_weight(LineShapeParams{amp.a, 0.0, 1.0, 0.0, amp.b});
}

double jordan_lineshape(const JordanBlockSystem& sys, double omega) {
  const auto amp = induced_amplitudes(sys);
  const double g = sys.gamma();
  const double delta = omega - sys.omega0();
  const double den = delta * delta + g * g;
  const double s = amp.a * lorentzian(delta, g) + amp.b * super_lorentzian(delta, g) +
                   amp.a_disp * delta / den + amp.b_disp * delta / (den * den);
  return s / std::numbers::pi;
}

LineShapeParams model_b_params(const JordanBlockSystem& sys) {
  const auto amp = induced_amplitudes(sys);
  return {amp.a / std::numbers::pi, sys.omega0(), sys.gamma(), 0.0, amp.b / std::numbers::pi};
}

UnfoldedGenerator embed_jordan_in_liouvillian(Complex lambda0, double epsilon) {
  if (!(epsilon >= 0.0)) throw InvalidArgument("embed_jordan: epsilon must be >= 0");
  UnfoldedGenerator g{lambda0, epsilon, jordan_generator(lambda0)};
  g.matrix(1, 0) = epsilon * epsilon;
  return g;
}

Complex bilinear_resolvent(const MatrixXc& G, const VectorXc& a, const VectorXc& b, Complex z) {
  if (G.rows() != G.cols() || a.size() != G.rows() || b.size() != G.rows()) {
    throw DimensionMismatch("bilinear_resolvent: shapes do not match");
  }
  MatrixXc shifted = -G;
  shifted.diagonal().array() += z;
  Eigen::FullPivLU<MatrixXc> lu(shifted);
  if (!lu.isInvertible()) throw SingularResolvent("bilinear_resolvent: z is an eigenvalue");
  return a.transpose() * lu.solve(b);
}

SpectrumTrace generator_lineshape(const MatrixXc& G, const VectorXc& a, const VectorXc& b,
                                  std::span<const double> grid) {
  SpectrumTrace t;
  t.source = SourceKind::Synthetic;
  t.sector_used = 0;
  t.omegas.assign(grid.begin(), grid.end());
  t.values.reserve(grid.size());
  for (double w : grid) {
    const Complex v = bilinear_resolvent(G, a, b, kI * w);
    t.values.push_back(v.real() / std::numbers::pi);
  }
  return t;
}

SpectrumTrace jordan_trace(const JordanBlockSystem& sys, std::span<const double> grid) {
  SpectrumTrace t;
  t.source = SourceKind::Synthetic;
  t.sector_used = 0;
  t.omegas.assign(grid.begin(), grid.end());
  t.values.reserve(grid.size());
  for (double w : grid) t.values.push_back(jordan_lineshape(sys, w));
  return t;
}

}  // namespace liouspec
