#ifndef LIOUSPEC_TYPES_HPP_
#define LIOUSPEC_TYPES_HPP_

#include <complex>

#include <Eigen/Core>

namespace liouspec {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = Matrix<Complex>;
using VectorXc = Vector<Complex>;

// Largest absolute entry; 0 for empty expressions.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return static_cast<double>(m.cwiseAbs().maxCoeff());
}

}  // namespace liouspec

#endif  // LIOUSPEC_TYPES_HPP_
