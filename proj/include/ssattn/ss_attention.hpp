#pragma once

#include <ssattn/pipeline.hpp>

#include <string>
#include <vector>

namespace ssattn {

enum class DeltaMode {
  /// Sketched closed form on A_s (collapses to 0, see ss_factors_modified).
  paper_formula,
  /// Caller-supplied value.
  fixed,
  /// Full closed-form shift on the materialized exact score matrix with
  /// C = softmax(Q K~^T / sqrt(d_k)). Desk scale only.
  full_oracle,
};

enum class DiagShift {
  omit,
  /// Adds delta I_n to the approximation (delta V to the output).
  include,
};

enum class ParenForm {
  /// F A_s^+ (I - delta A_s^+) B.
  derived,
  /// F A_s^+ (I - delta A_s) B, with A_s where A_s^+ belongs; comparison only.
  literal,
};

const char* to_string(DeltaMode mode);
const char* to_string(DiagShift mode);

struct SSAttentionConfig {
  Index m = 64;
  PinvChoice pinv;
  DeltaMode delta_mode = DeltaMode::paper_formula;
  double fixed_delta = 0.0;
  DiagShift diag_shift = DiagShift::omit;
  ParenForm paren = ParenForm::derived;
  /// Relative rank cutoff for the shift formulas.
  double tol = kDefaultRankTol;
  /// Largest n for which full_oracle may materialize n x n.
  Index desk_limit = 4096;

  void validate() const;
};

struct SSAttentionResult {
  DenseMatrix output;  // n x d_v
  double delta = 0.0;
  Index rank_a_s = 0;
  PinvOutcome pinv;
  StageTimings timings;
  std::vector<std::string> flags;
};

/// Landmark spectral-shifting attention
///   S~ V = F A_s^+ (I - delta A_s^+) B V   (+ delta V with diag_shift)
/// evaluated right to left: B V, then (I - delta Z) (B V), then Z (...),
/// then F (...). Never forms an n x n matrix; cost O(n m^2 + n m d + m^3).
SSAttentionResult ss_attention_run(const AttentionProblem& p, const SSAttentionConfig& cfg,
                                   AllocationAudit* audit = nullptr);

DenseMatrix ss_attention(const AttentionProblem& p, const SSAttentionConfig& cfg);

/// Explicit n x n S~ (plus delta I_n with diag_shift). Desk scale.
DenseMatrix ss_attention_materialized(const AttentionProblem& p, const SSAttentionConfig& cfg);

/// The shift that ss_attention would use for this problem and config.
double resolve_delta(const AttentionProblem& p, const SSAttentionConfig& cfg);

/// Single entry S~_ij from the SVD A_s = U G V^T:
///   f_i V G^+ U^T (I - delta V G^+ U^T) b_j
/// with f_i computed from query i alone and b_j the j-th column of B.
double ss_entry_svd_form(const AttentionProblem& p, const SSAttentionConfig& cfg, Index i, Index j);

}  // namespace ssattn
