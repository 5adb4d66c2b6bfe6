#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "liouspec/lineshape.hpp"

using namespace liouspec;

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n) { return uniform_grid(lo, hi, n); }

std::vector<double> sample(LineModel m, const LineShapeParams& q, const std::vector<double>& w) {
  std::vector<double> y;
  y.reserve(w.size());
  for (double x : w) y.push_back(eval_model(m, q, x));
  return y;
}

LineShapeParams params(double a, double w0, double g, double c, double b = 0.0) {
  LineShapeParams q;
  q.a = a;
  q.omega0 = w0;
  q.gamma = g;
  q.c = c;
  q.b = b;
  return q;
}

}  // namespace

TEST_CASE("profile helpers") {
  CHECK(lorentzian(0.0, 2.0) == 0.25);
  CHECK(super_lorentzian(0.0, 2.0) == 0.25);
  CHECK(super_lorentzian(2.0, 2.0) == 0.0);
  CHECK(super_lorentzian(3.0, 1.0) < 0.0);
  const auto q = params(2.0, 1.0, 0.5, 0.1, 0.3);
  CHECK(eval_model(LineModel::A, q, 1.0) == doctest::Approx(2.0 / 0.25 + 0.1));
  CHECK(eval_model(LineModel::B, q, 1.0) == doctest::Approx(2.0 / 0.25 + 0.1 + 0.3 / 0.25));
  CHECK(parameter_count(LineModel::A) == 4);
  CHECK(parameter_count(LineModel::B) == 5);
  CHECK(to_string(LineModel::B) == "B");
}

TEST_CASE("ep weight") {
  CHECK(ep_weight(params(1, 0, 1, 0, 0)) == 0.0);
  CHECK(ep_weight(params(0, 0, 1, 0, 0)) == 0.0);
  CHECK(ep_weight(params(1, 0, 1, 0, -1)) == 0.5);
  CHECK(ep_weight(params(-3, 0, 1, 0, 1)) == 0.25);
}

TEST_CASE("initial guess and half width") {
  const auto w = grid(0.0, 2.0, 401);
  const auto y = sample(LineModel::A, params(0.01, 1.0, 0.1, 0.0), w);
  const auto g = initial_guess(w, y);
  CHECK(g.omega0 == doctest::Approx(1.0));
  CHECK(g.gamma == doctest::Approx(0.1).epsilon(0.02));
  CHECK(g.b == 0.0);
  CHECK(half_width_estimate(w, y, 200) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("model A recovers a noiseless Lorentzian") {
  const auto truth = params(0.02, 1.01, 0.07, 0.003);
  const auto w = grid(0.3, 1.7, 301);
  const auto y = sample(LineModel::A, truth, w);
  const auto f = fit(w, y, LineModel::A);
  CHECK(f.converged);
  CHECK(f.rss < 1e-20);
  CHECK(std::abs(f.params.a - truth.a) <= 1e-8 * std::abs(truth.a));
  CHECK(std::abs(f.params.omega0 - truth.omega0) <= 1e-8);
  CHECK(std::abs(f.params.gamma - truth.gamma) <= 1e-8 * truth.gamma);
  CHECK(std::abs(f.params.c - truth.c) <= 1e-8);
  CHECK(f.n_points == 301);
  CHECK(f.n_params == 4);
  CHECK(f.perfect);
}

TEST_CASE("model B recovers the second-order amplitude") {
  const auto truth = params(0.02, 1.0, 0.05, 0.001, 0.01);
  const auto w = grid(0.5, 1.5, 401);
  const auto y = sample(LineModel::B, truth, w);
  const auto fb = fit(w, y, LineModel::B);
  const auto fa = fit(w, y, LineModel::A);
  CHECK(std::abs(fb.params.b - truth.b) <= 1e-6 * std::abs(truth.b) + 1e-12);
  CHECK(std::abs(fb.params.gamma - truth.gamma) <= 1e-8);
  CHECK(ep_weight(fb.params) == doctest::Approx(ep_weight(truth)).epsilon(1e-6));
  CHECK(fa.rss / std::max(fb.rss, 1e-300) >= 10.0);
  CHECK(delta_bic(fa, fb) < 0.0);
}

TEST_CASE("information criteria arithmetic") {
  FitResult f;
  f.model = LineModel::A;
  f.n_params = 4;
  f.n_points = 100;
  f.rss = 2.0;
  f.data_scale = 1.0;
  CHECK(bic(f) == doctest::Approx(4 * std::log(100.0) + 100 * std::log(0.02)));
  CHECK(aic(f) == doctest::Approx(8 + 100 * std::log(0.02)));
  FitResult g = f;
  g.model = LineModel::B;
  g.n_params = 5;
  g.rss = 1.0;
  CHECK(delta_bic(f, g) == doctest::Approx(std::log(100.0) + 100 * std::log(0.5)));
  CHECK(delta_aic(f, g) == doctest::Approx(2 + 100 * std::log(0.5)));

  // A perfect A leaves only the penalty; a perfect B alone wins outright.
  f.perfect = true;
  g.perfect = true;
  CHECK(bic(f) == -std::numeric_limits<double>::infinity());
  CHECK(delta_bic(f, g) == doctest::Approx(std::log(100.0)));
  CHECK(delta_aic(f, g) == doctest::Approx(2.0));
  f.perfect = false;
  CHECK(delta_bic(f, g) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("model B never fits worse than model A on a pure Lorentzian") {
  const auto truth = params(0.02, 1.0, 0.05, 0.0);
  const auto w = grid(0.5, 1.5, 201);
  const auto d = ep_diagnostics(w, sample(LineModel::A, truth, w));
  CHECK(d.fitB.rss <= d.fitA.rss);
  CHECK(d.r < 1e-6);
  CHECK(d.delta_bic > 0.0);
  CHECK(d.delta_aic > 0.0);
  CHECK(d.window.lo >= 0.5);
  CHECK(d.window.hi <= 1.5);
}

TEST_CASE("fits are equivariant under scaling and frequency shifts") {
  const auto truth = params(0.02, 1.0, 0.05, 0.001, 0.004);
  const auto w = grid(0.5, 1.5, 401);
  const auto y = sample(LineModel::B, truth, w);
  const auto base = fit(w, y, LineModel::B);

  std::vector<double> y2 = y;
  for (double& v : y2) v *= 7.5;
  const auto scaled = fit(w, y2, LineModel::B);
  CHECK(scaled.params.a == doctest::Approx(7.5 * base.params.a).epsilon(1e-6));
  CHECK(scaled.params.b == doctest::Approx(7.5 * base.params.b).epsilon(1e-6));
  CHECK(ep_weight(scaled.params) == doctest::Approx(ep_weight(base.params)).epsilon(1e-6));

  std::vector<double> w2 = w;
  for (double& v : w2) v += 0.3;
  const auto shifted = fit(w2, y, LineModel::B);
  CHECK(shifted.params.omega0 == doctest::Approx(base.params.omega0 + 0.3).epsilon(1e-8));
  CHECK(shifted.params.gamma == doctest::Approx(base.params.gamma).epsilon(1e-6));
}

TEST_CASE("fit input validation") {
  const auto w = grid(0.0, 1.0, 10);
  const std::vector<double> y(10, 1.0);
  CHECK_THROWS_AS(fit(w, y, LineModel::A), InvalidArgument);
  const auto w2 = grid(0.0, 1.0, 50);
  const std::vector<double> flat(50, 1.0);
  CHECK_THROWS_AS(fit(w2, flat, LineModel::A), DegenerateWindow);
  CHECK_THROWS_AS(ep_diagnostics(w2, flat), NoPeak);
  std::vector<double> bumpy(50, 1.0);
  bumpy[25] = 2.5;
  CHECK_THROWS_AS(ep_diagnostics(w2, bumpy), NoPeak);
}

TEST_CASE("noisy Lorentzians are recovered within their error bars") {
  const auto truth = params(0.02, 1.0, 0.05, 0.0);
  const auto w = grid(0.5, 1.5, 201);
  const auto clean = sample(LineModel::A, truth, w);
  const double sigma = 1e-3 * (truth.a / (truth.gamma * truth.gamma));
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, sigma);
    std::vector<double> y = clean;
    for (double& v : y) v += n(rng);
    const auto f = fit(w, y, LineModel::A);
    if (std::abs(f.params.gamma / truth.gamma - 1.0) < 0.01 &&
        std::abs(f.params.omega0 - truth.omega0) < 0.01 * truth.gamma &&
        std::abs(f.params.a / truth.a - 1.0) < 0.01) {
      ++good;
    }
  }
  CHECK(good >= 95);
}
