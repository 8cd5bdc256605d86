#pragma once

#include <ssattn/matrix.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace ssattn {

enum class NormKind { frobenius, inf_induced, spectral };

const char* to_string(NormKind kind);
NormKind parse_norm_kind(const std::string& text);

struct SvdFactors {
  DenseMatrix u;
  Vector sigma;  // nonincreasing, >= 0
  DenseMatrix vt;
};

/// Thin SVD, m = u * diag(sigma) * vt.
SvdFactors svd(const DenseMatrix& m);

/// Numerically stable row-wise softmax: exp(row - rowmax) / sum.
DenseMatrix row_softmax(const DenseMatrix& m);

/// In-place variant used by the pipelines to avoid an extra n x c buffer.
void row_softmax_inplace(DenseMatrix& m);

inline constexpr double kDefaultPinvTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-10;

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// tol * sigma_max are treated as zero.
DenseMatrix pinv_svd(const DenseMatrix& m, double tol = kDefaultPinvTol);

/// The same pseudoinverse from precomputed factors.
DenseMatrix pinv_from_svd(const SvdFactors& f, double tol = kDefaultPinvTol);

/// Count of entries strictly above tol * sigma(0).
Index rank_from_sigma(const Vector& sigma, double tol = kDefaultRankTol);

struct PinvIterOptions {
  int max_iters = 30;
  double tol = 1e-10;
  /// Evaluate the contraction precondition on Z_0 against pinv_svd.
  /// Costs an SVD, so only worth doing at desk scale.
  bool check_initial_condition = false;
  /// Keep the per-iteration residual trace.
  bool record_history = false;
};

struct PinvIterResult {
  DenseMatrix z;
  int iterations = 0;
  /// ||A Z A - A||_F / ||A||_F at the returned iterate.
  double residual = 0.0;
  bool converged = false;
  /// Set when ||A A^+ - A Z_0|| >= 1 (only when checked).
  bool initial_condition_violated = false;
  std::optional<double> initial_condition_value;
  /// residual after iteration j+1, when record_history is on.
  std::vector<double> history;
};

/// High-order fixed-point iteration for the pseudoinverse of a square matrix:
///   Z_{j+1} = 1/4 Z_j (13 I - A Z_j (15 I - A Z_j (7 I - A Z_j)))
/// started from Z_0 = A^T / (||A||_1 ||A||_inf). Throws NumericalError when
/// the residual grows three iterations in a row.
PinvIterResult pinv_iterative(const DenseMatrix& a, const PinvIterOptions& opts = {});

double norm(const DenseMatrix& m, NormKind kind);

/// Maximum absolute column sum.
double norm_one_induced(const DenseMatrix& m);

struct Spectrum {
  std::vector<double> values;      // descending magnitude
  std::vector<double> cumulative;  // normalized to end at 1.0
};

/// Eigenvalues (symmetric input) or singular values (otherwise), sorted by
/// descending magnitude, with the normalized cumulative-sum series.
Spectrum spectrum(const DenseMatrix& m, double symmetry_tol = 1e-12);

/// Number of singular values strictly above tol * sigma_max.
Index numerical_rank(const DenseMatrix& m, double tol = kDefaultRankTol);

bool is_symmetric(const DenseMatrix& m, double tol);

DenseMatrix identity(Index n);

}  // namespace ssattn
