#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "liouspec/jordan_oracle.hpp"

using namespace liouspec;

namespace {

constexpr double kGamma = 0.05;
constexpr double kOmega0 = 1.0;

// Probe e0, source e0 + κ e1 with κ chosen so that r = r0 at ε = 0.
double kappa_for(double r0) { return r0 * kGamma / (1.0 - r0); }

JordanBlockSystem chain_system(double r0) {
  JordanBlockSystem s;
  s.lambda0 = {-kGamma, kOmega0};
  s.l1_B = kappa_for(r0);
  return s;
}

VectorXc e(Index k) {
  VectorXc v = VectorXc::Zero(2);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("closed-form resolvent matches dense inversion") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const Complex l0(-std::abs(u(rng)) - 0.01, u(rng));
    const Complex z(u(rng), u(rng));
    const MatrixXc dense = (z * MatrixXc::Identity(2, 2) - jordan_generator(l0)).inverse();
    const MatrixXc closed = jordan_resolvent(l0, z);
    CHECK(max_abs(dense - closed) <= 1e-12 * std::max(1.0, max_abs(dense)));
  }
}

TEST_CASE("resolvent at unit distance is I + N") {
  const MatrixXc R = jordan_resolvent(Complex(-1.0, 0.0), Complex(0.0, 0.0));
  CHECK(max_abs(R - (MatrixXc::Identity(2, 2) + nilpotent_part())) == 0.0);
  CHECK_THROWS_AS(jordan_resolvent(Complex(-1.0, 2.0), Complex(-1.0, 2.0)), InvalidArgument);
  const MatrixXc N = nilpotent_part();
  CHECK(max_abs(N * N) == 0.0);
}

TEST_CASE("response has the double-pole Laurent form") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) {
    JordanBlockSystem s;
    s.lambda0 = {-0.1 - std::abs(n(rng)), n(rng)};
    s.A_r0 = {n(rng), n(rng)};
    s.A_r1 = {n(rng), n(rng)};
    s.l0_B = {n(rng), n(rng)};
    s.l1_B = {n(rng), n(rng)};
    const auto w = alpha_beta(s);
    const Complex z(n(rng), n(rng));
    const Complex d = z - s.lambda0;
    const Complex expected = w.alpha / d + w.beta / (d * d);
    CHECK(std::abs(jordan_response(s, z) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));

    // The real-axis line splits into absorptive and dispersive pieces.
    const double omega = n(rng);
    const Complex di = Complex(0.0, omega) - s.lambda0;
    const double direct = (w.alpha / di + w.beta / (di * di)).real() / std::numbers::pi;
    CHECK(std::abs(jordan_lineshape(s, omega) - direct) <= 1e-14 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("induced amplitudes") {
  JordanBlockSystem s;
  s.lambda0 = {-0.2, 1.0};
  s.A_r0 = {1.0, 0.5};
  s.l1_B = {0.3, -0.1};
  const auto amp = induced_amplitudes(s);
  const auto w = alpha_beta(s);
  CHECK(amp.a == doctest::Approx(0.2 * w.alpha.real()));
  CHECK(amp.b == doctest::Approx(w.beta.real()));
  CHECK(amp.a_disp == doctest::Approx(w.alpha.imag()));
  CHECK(amp.b_disp == doctest::Approx(0.4 * w.beta.imag()));
  const auto mb = model_b_params(chain_system(0.3));
  CHECK(mb.omega0 == kOmega0);
  CHECK(mb.gamma == kGamma);
  CHECK(ep_weight(mb) == doctest::Approx(0.3).epsilon(1e-14));
  JordanBlockSystem bad;
  bad.lambda0 = {0.0, 1.0};
  CHECK_THROWS_AS(induced_amplitudes(bad), InvalidArgument);
}

TEST_CASE("a source without chain overlap gives a plain Lorentzian") {
  JordanBlockSystem s;
  s.lambda0 = {-kGamma, kOmega0};
  s.A_r0 = 1.0;
  s.A_r1 = 1.0;
  s.l0_B = 1.0;
  s.l1_B = 0.0;
  CHECK(alpha_beta(s).beta == Complex(0.0));
  const auto tr = jordan_trace(s, uniform_grid(0.0, 2.0, 2001));
  const auto d = ep_diagnostics(tr);
  CHECK(d.r < 1e-6);
  CHECK(d.delta_bic > 0.0);
}

TEST_CASE("a chain source is detected and its weight recovered") {
  const auto s = chain_system(0.3);
  CHECK(analytic_ep_weight(s) == doctest::Approx(0.3).epsilon(1e-14));
  const auto tr = jordan_trace(s, uniform_grid(0.0, 2.0, 2001));
  CHECK(tr.source == SourceKind::Synthetic);
  const auto d = ep_diagnostics(tr);
  CHECK(d.delta_bic < 0.0);
  CHECK(std::abs(d.r - 0.3) <= 1e-6);
  CHECK(std::abs(d.fitB.params.gamma - kGamma) <= 1e-8);
}

TEST_CASE("unfolded generator") {
  const Complex l0(-kGamma, kOmega0);
  const auto u = embed_jordan_in_liouvillian(l0, 0.01);
  Eigen::ComplexEigenSolver<MatrixXc> es(u.matrix);
  const Complex a = es.eigenvalues()(0), b = es.eigenvalues()(1);
  CHECK(std::min(std::abs(a - (l0 + 0.01)), std::abs(a - (l0 - 0.01))) <= 1e-14);
  CHECK(std::abs(a + b - 2.0 * l0) <= 1e-14);
  CHECK(max_abs(embed_jordan_in_liouvillian(l0, 0.0).matrix - jordan_generator(l0)) == 0.0);
  CHECK_THROWS_AS(embed_jordan_in_liouvillian(l0, -1e-3), InvalidArgument);
}

TEST_CASE("unfolded line approaches the Jordan line smoothly as epsilon vanishes") {
  const Complex l0(-kGamma, kOmega0);
  const auto s = chain_system(0.3);
  const VectorXc src = e(0) + kappa_for(0.3) * e(1);
  const auto grid = uniform_grid(0.5, 1.5, 201);
  const auto ref = jordan_trace(s, grid);
  const auto at0 = generator_lineshape(embed_jordan_in_liouvillian(l0, 0.0).matrix, e(0), src, grid);
  double worst0 = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    worst0 = std::max(worst0, std::abs(at0.values[k] - ref.values[k]));
  }
  const double peak = *std::max_element(ref.values.begin(), ref.values.end());
  CHECK(worst0 <= 1e-12 * peak);

  auto deviation = [&](double eps) {
    const auto tr = generator_lineshape(embed_jordan_in_liouvillian(l0, eps).matrix, e(0), src, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) worst = std::max(worst, std::abs(tr.values[k] - ref.values[k]));
    return worst / peak;
  };
  const double d1 = deviation(1e-3);
  const double d2 = deviation(2e-3);
  CHECK(d1 <= 1e-3);
  CHECK(d1 > 0.0);
  // The resolvent depends on ε only through ε², so doubling ε quadruples the gap.
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("fitted weight decreases as the exceptional point is unfolded") {
  const Complex l0(-kGamma, kOmega0);
  const VectorXc src = e(0) + kappa_for(0.3) * e(1);
  const auto grid = uniform_grid(0.0, 2.0, 2001);
  double prev = 1.0;
  for (double eps : {0.0, 0.0005, 0.001, 0.002, 0.005, 0.01, 0.015, 0.02}) {
    CAPTURE(eps);
    const auto tr = generator_lineshape(embed_jordan_in_liouvillian(l0, eps).matrix, e(0), src, grid);
    const auto d = ep_diagnostics(tr);
    if (eps == 0.0) CHECK(d.r == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(d.r < prev);
    prev = d.r;
  }
}

TEST_CASE("bilinear resolvent validation") {
  const MatrixXc G = jordan_generator(Complex(-1.0, 0.0));
  CHECK(std::abs(bilinear_resolvent(G, e(0), e(1), 0.0) - Complex(1.0)) <= 1e-15);
  CHECK_THROWS_AS(bilinear_resolvent(G, VectorXc::Zero(3), e(1), 0.0), DimensionMismatch);
  CHECK_THROWS_AS(bilinear_resolvent(G, e(0), e(1), Complex(-1.0, 0.0)), SingularResolvent);
}
