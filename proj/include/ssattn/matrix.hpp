#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ssattn {

/// Real dense matrix with row-major storage; carries every operand of the
/// attention pipeline (Q, K, V, score matrices, sketches, pseudoinverses).
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors. The CLI maps each subclass to a
/// stable process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, shapes or flags (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown such as a diverging iteration (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable files (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Throws UsageError naming the first non-finite entry of `m`.
void require_finite(const DenseMatrix& m, const char* what);

/// Throws UsageError unless `m` is non-empty.
void require_nonempty(const DenseMatrix& m, const char* what);

std::string shape_str(const DenseMatrix& m);

}  // namespace ssattn
