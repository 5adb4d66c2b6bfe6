#ifndef LIOUSPEC_LIOUVILLIAN_HPP_
#define LIOUSPEC_LIOUVILLIAN_HPP_

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "liouspec/errors.hpp"
#include "liouspec/spin_algebra.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

// Collective spin with H = -h Jz and jumps
//   L0 = sqrt(gamma0 / j) Jz,  L± = sqrt(gamma (1 ∓ p) / (2j)) J±.
struct ModelParams {
  SpinLength j = SpinLength::from_twice(1);
  double h = 1.0;
  double gamma = 0.1;
  double gamma0 = 0.0;
  double p = 0.0;

  // Throws InvalidArgument on |p| > 1, negative rates or non-finite values.
  void validate() const;
};

// vec(rho)[m * d + n] = rho(m, n), so that vec(A rho B) = (A ⊗ Bᵀ) vec(rho).
enum class VectorConvention { RowMajorKron };

std::string_view to_string(VectorConvention c);

struct Liouvillian {
  ModelParams params;
  MatrixXc matrix;
  VectorConvention convention = VectorConvention::RowMajorKron;

  Index dim() const { return matrix.rows(); }
  Index hilbert_dim() const { return params.j.dim(); }
};

// Position of |row><col| in a Liouville vector.
inline Index liouville_index(Index row, Index col, Index d) { return row * d + col; }

template <typename Derived>
Vector<typename Derived::Scalar> vectorize(const Eigen::MatrixBase<Derived>& rho) {
  if (rho.rows() != rho.cols()) {
    throw DimensionMismatch("vectorize: density matrix must be square");
  }
  const Index d = rho.rows();
  Vector<typename Derived::Scalar> v(d * d);
  for (Index m = 0; m < d; ++m) {
    for (Index n = 0; n < d; ++n) v(liouville_index(m, n, d)) = rho(m, n);
  }
  return v;
}

template <typename Derived>
Matrix<typename Derived::Scalar> devectorize(const Eigen::MatrixBase<Derived>& v) {
  if (v.cols() != 1) throw DimensionMismatch("devectorize: expected a column vector");
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) {
    throw DimensionMismatch("devectorize: length " + std::to_string(v.size()) +
                            " is not a perfect square");
  }
  Matrix<typename Derived::Scalar> rho(d, d);
  for (Index m = 0; m < d; ++m) {
    for (Index n = 0; n < d; ++n) rho(m, n) = v(liouville_index(m, n, d));
  }
  return rho;
}

// Lindblad generator assembled term by term from H and the jump operators:
//   -i(H ⊗ I - I ⊗ Hᵀ) + Σ L ⊗ L* - ½ L†L ⊗ I - ½ I ⊗ (L†L)ᵀ.
Liouvillian build_liouvillian_generic(const ModelParams& params);

// Closed form in the left/right algebras K1α = Jα ⊗ I and K2z = I ⊗ Jz,
// K2± = I ⊗ J± (= I ⊗ (J∓)ᵀ, the transpose of right multiplication by J∓):
//   -Γ(j+1) + ih(K1z-K2z) + (Γ/j)K1zK2z + ((Γ-Γ0)/2j)(K1z-K2z)²
//   - (Γ/j)(p/2)(K1z+K2z) + (Γ/j)((1-p)/2)K1+K2+ + (Γ/j)((1+p)/2)K1-K2-.
// The K2± convention above is the one that reproduces the generic builder.
Liouvillian build_liouvillian_explicit(const ModelParams& params);

// Row-vector <<I| whose left action is the trace.
VectorXc trace_functional(Index d);

// Weak-symmetry label M = m - m' of Liouville basis element |m><m'|.
inline int sector_of(Index row, Index col) { return static_cast<int>(col - row); }

// Liouville indices of sector M in ascending order; empty if |M| > 2j.
std::vector<Index> sector_indices(Index d, int M);

struct Sector {
  int M = 0;
  std::vector<Index> indices;
  MatrixXc block;

  Index dim() const { return static_cast<Index>(indices.size()); }
};

struct SectorDecomposition {
  SpinLength j = SpinLength::from_twice(1);
  std::vector<Sector> sectors;  // M = -2j, ..., 2j
  double max_cross_sector = 0.0;

  const Sector& at(int M) const;
};

// Splits L into its M blocks. Throws SectorLeak if any entry coupling two
// sectors exceeds tol.
SectorDecomposition sector_decompose(const Liouvillian& L, double tol = 1e-10);

// Gathers the M block of L without scanning the rest of the matrix.
MatrixXc sector_block(const Liouvillian& L, int M);

// Largest |entry| of L that couples different sectors.
double cross_sector_max(const Liouvillian& L);

// beta = ln((1-p)/(1+p)) / h; ±infinity at |p| = 1.
double bath_inverse_temperature(const ModelParams& params);

}  // namespace liouspec

#endif  // LIOUSPEC_LIOUVILLIAN_HPP_
