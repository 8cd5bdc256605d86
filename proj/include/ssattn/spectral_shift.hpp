#pragma once

#include <ssattn/matcore.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ssattn {

/// Distinct column indices into an n x n matrix; K P is a column gather.
struct ColumnSelection {
  std::vector<Index> indices;

  Index size() const { return static_cast<Index>(indices.size()); }
  void validate(Index n) const;
};

/// Spectral-shifting factors: the approximation is C U C^T + delta I.
struct SSFactors {
  DenseMatrix u_ss;
  double delta_ss = 0.0;
  /// The c x c sketch the factors were computed from. For the full method
  /// this is the column block K~ P restricted to the selected rows.
  DenseMatrix a_s;
  /// rank(A_s) for the sketched method, rank(C~) for the full one; the
  /// rank that appears in the shift denominator.
  Index rank_a = 0;
  /// rank hit the dimension, so the shift formula is 0/0 and delta was set
  /// to 0 with U reducing to the prototype model.
  bool full_rank_convention = false;
};

struct ShiftDelta {
  double delta = 0.0;
  Index rank = 0;
  bool full_rank_convention = false;
};

/// Optimal shift for a fixed column block C of an n x n matrix:
///   (tr(K) - tr(C^+ K C)) / (n - rank(C)).
/// Does not require symmetry; used both by the full method and as the
/// desk-scale oracle shift for attention matrices.
ShiftDelta shift_delta_full(const DenseMatrix& k_mat, const DenseMatrix& c_tilde,
                            double rank_tol = kDefaultRankTol);

/// Full closed-form spectral shifting on an explicit symmetric matrix. C is
/// gathered from K, or from K - shift I when `shift` is given. O(n^2 c).
SSFactors ss_factors_full(const DenseMatrix& k_mat, const ColumnSelection& sel,
                          std::optional<double> shift = std::nullopt,
                          double rank_tol = kDefaultRankTol);

/// The column block C~ that ss_factors_full uses.
DenseMatrix ss_columns(const DenseMatrix& k_mat, const ColumnSelection& sel,
                       std::optional<double> shift = std::nullopt);

/// Sketched closed form on the c x c block A_s alone:
///   delta = (tr(A_s) - tr(A_s^+ A_s^2)) / (c - rank(A_s))
///   U     = A_s^+ - delta (A_s^2)^+
/// O(c^3).
SSFactors ss_factors_modified(const DenseMatrix& a_s, double rank_tol = kDefaultRankTol);

/// C U C^T + delta I_n.
DenseMatrix ss_reconstruct(const DenseMatrix& c_mat, const SSFactors& f, Index n);

enum class ObjectiveMode { full, sketched };

/// Frobenius norm of K - C U C^T - delta I (full) or of its P^T (.) P
/// restriction to the selected rows and columns (sketched). C is gathered
/// from K, or from K - shift I when `shift` is given.
double ss_objective(const DenseMatrix& k_mat, const ColumnSelection& sel, const DenseMatrix& u,
                    double delta, ObjectiveMode mode, std::optional<double> shift = std::nullopt);

double ss_objective(const DenseMatrix& k_mat, const ColumnSelection& sel, const SSFactors& f,
                    ObjectiveMode mode, std::optional<double> shift = std::nullopt);

/// Symmetric positive definite matrix with k leading eigenvalues `head_eigs`
/// and a flat tail of n - k eigenvalues equal to theta.
struct FlatTailSpec {
  Index n = 0;
  Index k = 0;
  double theta = 0.0;
  std::vector<double> head_eigs;
  std::uint64_t seed = 0;

  void validate() const;
};

/// V diag(head_eigs, theta, ..., theta) V^T with V Haar-random orthogonal.
DenseMatrix flat_tail_spsd(const FlatTailSpec& spec);

/// Default head spectrum for k eigenvalues: evenly spaced in (theta, 10].
std::vector<double> default_head_eigs(Index k, double theta);

/// First c pivots of a column-pivoted QR of `m`; for a rank-r matrix with
/// c >= r these span its column space.
ColumnSelection pivoted_columns(const DenseMatrix& m, Index c);

struct Theorem1Report {
  Index n = 0;
  Index k = 0;
  Index c = 0;
  double theta = 0.0;
  double k_norm = 0.0;       // ||K||_F
  double ss_error = 0.0;     // ||K - (C U C^T + delta I)||_F
  double nystrom_error = 0.0;
  double delta_ss = 0.0;
  Index rank_c = 0;
  bool ss_exact = false;     // ss_error <= 1e-6 ||K||_F
  bool ss_not_worse = false; // ss_error <= nystrom_error
  std::vector<Index> columns;
};

/// Builds a flat-tail matrix, picks c columns spanning range(K - theta I),
/// and compares shifted reconstruction (shift = theta) with plain Nystrom on
/// the same columns.
Theorem1Report theorem1_check(const FlatTailSpec& spec, Index c);

}  // namespace ssattn
