#include "liouspec/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace liouspec {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite_all(const ModelParams& p) {
  return std::isfinite(p.h) && std::isfinite(p.gamma) && std::isfinite(p.gamma0) &&
         std::isfinite(p.p);
}

}  // namespace

void ModelParams::validate() const {
  if (!finite_all(*this)) throw InvalidArgument("model parameters must be finite");
  if (p < -1.0 || p > 1.0) {
    throw InvalidArgument("bath polarization p must lie in [-1, 1], got " + std::to_string(p));
  }
  if (gamma < 0.0) throw InvalidArgument("gamma must be >= 0, got " + std::to_string(gamma));
  if (gamma0 < 0.0) throw InvalidArgument("gamma0 must be >= 0, got " + std::to_string(gamma0));
}

std::string_view to_string(VectorConvention c) {
  switch (c) {
    case VectorConvention::RowMajorKron:
      return "row_major_kron";
  }
  return "unknown";
}

Liouvillian build_liouvillian_generic(const ModelParams& params) {
  params.validate();
  const auto ops = build_spin_ops<Complex>(params.j);
  const double j = params.j.value();
  const MatrixXc& I = ops.I;

  const MatrixXc H = -params.h * ops.Jz;
  MatrixXc L = -kI * (kron(H, I) - kron(I, H.transpose()));

  const MatrixXc jumps[] = {
      std::sqrt(params.gamma0 / j) * ops.Jz,
      std::sqrt(params.gamma * (1.0 - params.p) / (2.0 * j)) * ops.Jp,
      std::sqrt(params.gamma * (1.0 + params.p) / (2.0 * j)) * ops.Jm,
  };
  for (const auto& jump : jumps) {
    const MatrixXc n = jump.adjoint() * jump;
    L += kron(jump, MatrixXc(jump.conjugate()));
    L -= 0.5 * kron(n, I);
    L -= 0.5 * kron(I, MatrixXc(n.transpose()));
  }
  return Liouvillian{params, std::move(L), VectorConvention::RowMajorKron};
}

Liouvillian build_liouvillian_explicit(const ModelParams& params) {
  params.validate();
  const auto ops = build_spin_ops<Complex>(params.j);
  const double j = params.j.value();
  const double G = params.gamma;
  const double p = params.p;
  const MatrixXc& I = ops.I;

  // Products of left and right generators collapse by the mixed-product rule,
  // (A ⊗ I)(I ⊗ B) = A ⊗ B, so no dense superoperator products are formed.
  const MatrixXc K1z = kron(ops.Jz, I);
  const MatrixXc K2z = kron(I, ops.Jz);
  const VectorXc Kz = (K1z - K2z).diagonal();
  const Index n = K1z.rows();

  MatrixXc L = MatrixXc::Identity(n, n) * Complex(-G * (j + 1.0));
  L.diagonal() += kI * params.h * Kz;
  L += (G / j) * kron(ops.Jz, ops.Jz);
  L.diagonal() += ((G - params.gamma0) / (2.0 * j)) * Kz.cwiseAbs2().cast<Complex>();
  L -= (G / j) * (p / 2.0) * (K1z + K2z);
  L += (G / j) * ((1.0 - p) / 2.0) * kron(ops.Jp, ops.Jp);  // K1+ K2+
  L += (G / j) * ((1.0 + p) / 2.0) * kron(ops.Jm, ops.Jm);  // K1- K2-
  return Liouvillian{params, std::move(L), VectorConvention::RowMajorKron};
}

VectorXc trace_functional(Index d) { return vectorize(MatrixXc::Identity(d, d)); }

std::vector<Index> sector_indices(Index d, int M) {
  std::vector<Index> out;
  if (std::abs(M) >= d) return out;
  out.reserve(static_cast<std::size_t>(d - std::abs(M)));
  // M = col - row.
  for (Index row = 0; row < d; ++row) {
    const Index col = row + M;
    if (col >= 0 && col < d) out.push_back(liouville_index(row, col, d));
  }
  return out;
}

MatrixXc sector_block(const Liouvillian& L, int M) {
  const auto idx = sector_indices(L.hilbert_dim(), M);
  if (idx.empty()) {
    throw InvalidArgument("sector M=" + std::to_string(M) + " is empty for this spin length");
  }
  const auto n = static_cast<Index>(idx.size());
  MatrixXc block(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) block(a, b) = L.matrix(idx[a], idx[b]);
  }
  return block;
}

double cross_sector_max(const Liouvillian& L) {
  const Index d = L.hilbert_dim();
  const Index n = L.dim();
  double worst = 0.0;
  for (Index c = 0; c < n; ++c) {
    const int Mc = sector_of(c / d, c % d);
    for (Index r = 0; r < n; ++r) {
      if (sector_of(r / d, r % d) != Mc) worst = std::max(worst, std::abs(L.matrix(r, c)));
    }
  }
  return worst;
}

const Sector& SectorDecomposition::at(int M) const {
  const int offset = M + j.twice();
  if (offset < 0 || offset >= static_cast<int>(sectors.size())) {
    throw InvalidArgument("sector M=" + std::to_string(M) + " out of range");
  }
  return sectors[static_cast<std::size_t>(offset)];
}

SectorDecomposition sector_decompose(const Liouvillian& L, double tol) {
  SectorDecomposition out;
  out.j = L.params.j;
  out.max_cross_sector = cross_sector_max(L);
  if (out.max_cross_sector > tol) {
    throw SectorLeak("Liouvillian couples weak-symmetry sectors: max cross-sector entry " +
                     std::to_string(out.max_cross_sector));
  }
  const int twice_j = L.params.j.twice();
  out.sectors.reserve(static_cast<std::size_t>(2 * twice_j + 1));
  for (int M = -twice_j; M <= twice_j; ++M) {
    out.sectors.push_back(Sector{M, sector_indices(L.hilbert_dim(), M), sector_block(L, M)});
  }
  return out;
}

double bath_inverse_temperature(const ModelParams& params) {
  if (params.h == 0.0) throw InvalidArgument("bath inverse temperature undefined at h = 0");
  if (params.p < -1.0 || params.p > 1.0) {
    throw InvalidArgument("bath polarization p must lie in [-1, 1]");
  }
  if (params.p == 1.0) return params.h > 0 ? -std::numeric_limits<double>::infinity()
                                           : std::numeric_limits<double>::infinity();
  if (params.p == -1.0) return params.h > 0 ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity();
  return std::log((1.0 - params.p) / (1.0 + params.p)) / params.h;
}

}  // namespace liouspec
