#include "liouspec/spin_algebra.hpp"

#include <cmath>
#include <string>

namespace liouspec {

SpinLength SpinLength::from_twice(int twice_j) {
  if (twice_j < 1) {
    throw InvalidArgument("spin length: 2j must be >= 1, got " + std::to_string(twice_j));
  }
  return SpinLength(twice_j);
}

SpinLength SpinLength::from_value(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded < 1.0) {
    throw InvalidArgument("spin length: j must be a positive half-integer, got " +
                          std::to_string(j));
  }
  return SpinLength(static_cast<int>(rounded));
}

}  // namespace liouspec
