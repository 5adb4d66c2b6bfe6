#ifndef LIOUSPEC_SPIN_ALGEBRA_HPP_
#define LIOUSPEC_SPIN_ALGEBRA_HPP_

#include <cmath>
#include <type_traits>

#include <Eigen/Core>
#include <unsupported/Eigen/KroneckerProduct>

#include "liouspec/errors.hpp"
#include "liouspec/types.hpp"

namespace liouspec {

// Spin length j, held as the integer 2j so half-integers stay exact.
class SpinLength {
 public:
  static SpinLength from_twice(int twice_j);
  // Accepts j = 0.5, 1, 1.5, ...; rejects anything not a positive
  // half-integer.
  static SpinLength from_value(double j);

  int twice() const { return twice_j_; }
  double value() const { return 0.5 * twice_j_; }
  Index dim() const { return twice_j_ + 1; }
  // Magnetic quantum number of basis index k (k = 0 is m = j).
  double m(Index k) const { return 0.5 * (twice_j_ - 2 * static_cast<int>(k)); }

  friend bool operator==(SpinLength a, SpinLength b) { return a.twice_j_ == b.twice_j_; }

 private:
  explicit SpinLength(int twice_j) : twice_j_(twice_j) {}
  int twice_j_;
};

// Collective su(2) generators in the |j,m> basis ordered m = j, j-1, ..., -j.
// With this ordering Jp is strictly upper triangular.
template <typename Scalar = double>
struct SpinOps {
  SpinLength j;
  Matrix<Scalar> Jz;
  Matrix<Scalar> Jp;
  Matrix<Scalar> Jm;
  Matrix<Scalar> I;

  Index dim() const { return j.dim(); }
};

template <typename Scalar = double>
SpinOps<Scalar> build_spin_ops(SpinLength j) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const Index d = j.dim();
  const Real jv = static_cast<Real>(j.value());

  SpinOps<Scalar> ops{j, Matrix<Scalar>::Zero(d, d), Matrix<Scalar>::Zero(d, d),
                      Matrix<Scalar>::Zero(d, d), Matrix<Scalar>::Identity(d, d)};
  for (Index k = 0; k < d; ++k) {
    ops.Jz(k, k) = Scalar(static_cast<Real>(j.m(k)));
  }
  // <m+1|J+|m> = sqrt(j(j+1) - m(m+1)); |m+1> sits one index above |m>.
  for (Index k = 1; k < d; ++k) {
    const Real m = static_cast<Real>(j.m(k));
    ops.Jp(k - 1, k) = Scalar(std::sqrt(jv * (jv + 1) - m * (m + 1)));
  }
  ops.Jm = ops.Jp.transpose();
  return ops;
}

// A B - B A.
template <typename DA, typename DB>
typename DA::PlainObject commutator(const Eigen::MatrixBase<DA>& A,
                                    const Eigen::MatrixBase<DB>& B) {
  static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>,
                "commutator operands must share a scalar type");
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows()) {
    throw DimensionMismatch("commutator: operands must be square and of equal size");
  }
  typename DA::PlainObject out = A * B;
  out.noalias() -= B * A;
  return out;
}

// Dense Kronecker product A ⊗ B.
template <typename DA, typename DB>
typename DA::PlainObject kron(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>,
                "kron operands must share a scalar type");
  typename DA::PlainObject out(A.rows() * B.rows(), A.cols() * B.cols());
  out = Eigen::kroneckerProduct(A.derived(), B.derived());
  return out;
}

}  // namespace liouspec

#endif  // LIOUSPEC_SPIN_ALGEBRA_HPP_
