#pragma once

#include <cmath>
#include <stdexcept>

#include "spiralbound/spiral.hpp"

namespace spiralbound {

/// One-dimensional semiclassical constant
/// L^cl_{sigma,1} = Gamma(sigma+1) / (sqrt(4 pi) Gamma(sigma+3/2)).
inline double lt_constant_1(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("lt_constant_1: sigma must be >= 0");
  return std::exp(std::lgamma(sigma + 1.0) - std::lgamma(sigma + 1.5)) /
         std::sqrt(4.0 * kPi);
}

/// Two-dimensional semiclassical constant L^cl_{sigma,2} = 1/(4 pi (sigma+1)).
inline double lt_constant_2(double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("lt_constant_2: sigma must be >= 0");
  return 1.0 / (4.0 * kPi * (sigma + 1.0));
}

}  // namespace spiralbound
