#pragma once

#include <ssattn/pipeline.hpp>

#include <vector>

namespace ssattn {

/// Prototype reconstruction from selected rows/columns of an explicit matrix:
///   C = s[:, cols], R = s[cols, :], A = s[cols, cols], result C A^+ R.
/// Materializes n x n.
DenseMatrix nystrom_raw(const DenseMatrix& s, const std::vector<Index>& cols,
                        double pinv_tol = kDefaultPinvTol);

struct NystromResult {
  DenseMatrix output;  // n x d_v
  PinvOutcome pinv;
  StageTimings timings;
};

/// Landmark Nystrom attention F A_s^+ (B V), evaluated right to left in
/// O(n m d + m^3) without forming an n x n matrix. Pads when m does not
/// divide n and truncates the result back to n rows.
NystromResult nystrom_attention_run(const AttentionProblem& p, Index m, const PinvChoice& pinv = {},
                                    AllocationAudit* audit = nullptr);

DenseMatrix nystrom_attention(const AttentionProblem& p, Index m, const PinvChoice& pinv = {});

/// The same approximation as an explicit n x n matrix F A_s^+ B. Desk scale.
DenseMatrix nystrom_attention_materialized(const AttentionProblem& p, Index m,
                                           const PinvChoice& pinv = {});

}  // namespace ssattn
