#include "liouspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace liouspec {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kZeroModeTol = 1e-9;
constexpr double kSingularRcond = 1e-14;

// The rcond estimate is unreliable once a pivot is exactly zero.
bool is_singular(const Eigen::PartialPivLU<MatrixXc>& lu) {
  if (lu.rows() == 0) return false;
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0) return true;
  return !(lu.rcond() > kSingularRcond);
}
constexpr double kOmegaNudge = 1e-12;

}  // namespace

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::Steady:
      return "steady";
    case SourceKind::InfiniteTemperature:
      return "infinite_temperature";
    case SourceKind::Random:
      return "random";
    case SourceKind::Custom:
      return "custom";
    case SourceKind::Synthetic:
      return "synthetic";
  }
  return "unknown";
}

SteadyState steady_state(const Liouvillian& L) {
  const Index d = L.hilbert_dim();
  const MatrixXc block = sector_block(L, 0);

  Eigen::ComplexEigenSolver<MatrixXc> es(block, true);
  if (es.info() != Eigen::Success) {
    throw EigensolverFailure("steady state: eigensolver failed on the M=0 block");
  }
  const VectorXc& w = es.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(w.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return std::abs(w(a)) < std::abs(w(b)); });

  const double gap = order.size() > 1 ? std::abs(w(order[1])) : std::numeric_limits<double>::infinity();
  if (gap < kZeroModeTol) {
    throw NonUniqueSteadyState("steady state: M=0 block has " +
                               std::string("at least two eigenvalues within 1e-9 of zero"));
  }

  // M=0 indices are |k><k| in increasing k, so the block eigenvector is the
  // diagonal of rho.
  const VectorXc v = es.eigenvectors().col(order[0]);
  MatrixXc rho = MatrixXc::Zero(d, d);
  rho.diagonal() = v / v.sum();

  SteadyState ss;
  ss.hermitization_delta = 0.5 * max_abs(rho - rho.adjoint());
  if (ss.hermitization_delta > 1e-9) {
    throw NumericalError("steady state: zero mode is not Hermitian (delta " +
                         std::to_string(ss.hermitization_delta) + ")");
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  ss.rho = std::move(rho);
  ss.residual = max_abs(L.matrix * vectorize(ss.rho));
  ss.uniqueness_gap = gap;
  return ss;
}

std::size_t LiouvSpectrum::flagged_count() const {
  return static_cast<std::size_t>(std::count(near_degenerate.begin(), near_degenerate.end(), true));
}

std::vector<bool> near_degenerate_flags(std::span<const Complex> values, double threshold) {
  std::vector<bool> flags(values.size(), false);
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (std::abs(values[a] - values[b]) < threshold) {
        flags[a] = true;
        flags[b] = true;
      }
    }
  }
  return flags;
}

LiouvSpectrum full_spectrum(const SectorDecomposition& sectors, double threshold, double scale) {
  if (!(threshold > 0.0) || !(scale > 0.0)) {
    throw InvalidArgument("full_spectrum: threshold and scale must be positive");
  }
  LiouvSpectrum out;
  out.pairing_threshold = threshold;
  out.scale = scale;
  for (const auto& s : sectors.sectors) {
    Eigen::ComplexEigenSolver<MatrixXc> es(s.block, false);
    if (es.info() != Eigen::Success) {
      throw EigensolverFailure("full_spectrum: eigensolver failed in sector M=" +
                               std::to_string(s.M));
    }
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
      out.eigenvalues.push_back(es.eigenvalues()(k));
      out.sector.push_back(s.M);
    }
  }
  std::vector<Complex> scaled(out.eigenvalues.size());
  std::transform(out.eigenvalues.begin(), out.eigenvalues.end(), scaled.begin(),
                 [scale](Complex z) { return z / scale; });
  out.near_degenerate = near_degenerate_flags(scaled, threshold);
  return out;
}

LiouvSpectrum full_spectrum(const Liouvillian& L, double threshold, double scale) {
  return full_spectrum(sector_decompose(L), threshold, scale);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("uniform_grid: need n >= 2 and a finite range lo < hi");
  }
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + step * static_cast<double>(k);
  out.back() = hi;
  return out;
}

std::vector<double> default_grid(const ModelParams& params, std::size_t n,
                                 double half_span_in_gamma) {
  const double half = half_span_in_gamma * params.gamma;
  return uniform_grid(params.h - half, params.h + half, n);
}

SectorResolvent::SectorResolvent(const Liouvillian& L, int M)
    : M_(M), indices_(sector_indices(L.hilbert_dim(), M)), block_(sector_block(L, M)) {}

VectorXc SectorResolvent::project(const MatrixXc& X) const {
  const Index d = X.rows();
  VectorXc x(static_cast<Index>(indices_.size()));
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    x(static_cast<Index>(k)) = X(indices_[k] / d, indices_[k] % d);
  }
  return x;
}

VectorXc SectorResolvent::probe_for(const MatrixXc& probe_op) const {
  // Tr[P Y] = Σ_ab P(b, a) Y(a, b).
  const Index d = probe_op.rows();
  VectorXc c(static_cast<Index>(indices_.size()));
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    c(static_cast<Index>(k)) = probe_op(indices_[k] % d, indices_[k] / d);
  }
  return c;
}

Complex SectorResolvent::evaluate(double omega, const VectorXc& probe, const VectorXc& source,
                                  bool* perturbed) const {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double w = attempt == 0 ? omega : omega + kOmegaNudge;
    MatrixXc shifted = -block_;
    shifted.diagonal().array() += kI * w;
    Eigen::PartialPivLU<MatrixXc> lu(shifted);
    if (is_singular(lu)) continue;
    if (perturbed) *perturbed = attempt > 0;
    const VectorXc y = lu.solve(source);
    return (probe.array() * y.array()).sum();
  }
  throw SingularResolvent("resolvent singular at omega = " + std::to_string(omega));
}

Complex resolvent_trace_full(const Liouvillian& L, const MatrixXc& probe_op,
                             const MatrixXc& source_op, double omega) {
  MatrixXc shifted = -L.matrix;
  shifted.diagonal().array() += kI * omega;
  Eigen::PartialPivLU<MatrixXc> lu(shifted);
  if (is_singular(lu)) {
    throw SingularResolvent("full resolvent singular at omega = " + std::to_string(omega));
  }
  const VectorXc y = lu.solve(vectorize(source_op));
  const VectorXc c = vectorize(MatrixXc(probe_op.transpose()));
  return (c.array() * y.array()).sum();
}

double sector_leak_fraction(const MatrixXc& X, int M) {
  const double total = X.squaredNorm();
  if (total == 0.0) return 0.0;
  double outside = 0.0;
  for (Index c = 0; c < X.cols(); ++c) {
    for (Index r = 0; r < X.rows(); ++r) {
      if (sector_of(r, c) != M) outside += std::norm(X(r, c));
    }
  }
  return std::sqrt(outside / total);
}

void validate_density_matrix(const MatrixXc& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.size() == 0) {
    throw DimensionMismatch("density matrix must be square and non-empty");
  }
  if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if (max_abs(rho - rho.adjoint()) > tol) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > tol) {
    throw InvalidArgument("density matrix trace is not 1");
  }
  const MatrixXc herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
}

SpectrumTrace emission_spectrum_source(const Liouvillian& L, const MatrixXc& rho0,
                                       std::span<const double> grid, SourceKind kind) {
  if (grid.empty()) throw InvalidArgument("emission spectrum: empty frequency grid");
  if (rho0.rows() != L.hilbert_dim()) {
    throw DimensionMismatch("emission spectrum: source state has wrong dimension");
  }
  validate_density_matrix(rho0);

  const auto ops = build_spin_ops<Complex>(L.params.j);
  const MatrixXc X = rho0 * ops.Jp;

  const SectorResolvent resolvent(L, 1);
  const VectorXc source = resolvent.project(X);
  const VectorXc probe = resolvent.probe_for(ops.Jm);

  SpectrumTrace trace;
  trace.omegas.assign(grid.begin(), grid.end());
  trace.values.resize(grid.size());
  trace.source = kind;
  trace.params = L.params;
  trace.sector_used = 1;
  trace.dropped_fraction = sector_leak_fraction(X, 1);

  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw InvalidArgument("emission spectrum: grid must be strictly increasing");
    }
    bool nudged = false;
    const Complex t = resolvent.evaluate(grid[k], probe, source, &nudged);
    trace.values[k] = t.real() / std::numbers::pi;
    trace.max_imag_residue = std::max(trace.max_imag_residue, std::abs(t.imag()) / std::numbers::pi);
    if (nudged) ++trace.perturbed_points;
    if (!std::isfinite(trace.values[k])) {
      throw NumericalError("emission spectrum: non-finite value at omega = " +
                           std::to_string(grid[k]));
    }
  }
  return trace;
}

SpectrumTrace emission_spectrum_steady(const Liouvillian& L, const SteadyState& ss,
                                       std::span<const double> grid) {
  return emission_spectrum_source(L, ss.rho, grid, SourceKind::Steady);
}

MatrixXc random_full_rank_state(Index d, std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("random state: dimension must be >= 1");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXc G(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      const double re = normal(engine);
      const double im = normal(engine);
      G(r, c) = Complex(re, im);
    }
  }
  MatrixXc rho = G * G.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace liouspec
