#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace necrotic {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VectorX<double>;
using Mat = MatrixX<double>;

/// Raised when a solver fails to reach its tolerance or loses precision.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an operation is called outside its contract.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace necrotic
