// common.hpp -- shared aliases, constants and error types.
//
// Internal unit convention: hbar = k_B = 1.  The CLI layer converts
// spectroscopic units (cm^-1, K, ps) at the boundary; everything below
// works in natural units.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ctpi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr Complex kImag{0.0, 1.0};

// Configuration or argument problem: bad input, malformed config file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: quadrature non-convergence, NaN/Inf, negative weights.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource guard tripped: problem size beyond a hard cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ctpi
