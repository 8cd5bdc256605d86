#pragma once

#include <ssattn/matrix.hpp>

namespace ssattn {

/// Queries, keys and values for one attention head. Logits are scaled by
/// 1/sqrt(d_k) where d_k is the key width.
struct AttentionProblem {
  DenseMatrix q;  // n x d_k
  DenseMatrix k;  // n x d_k
  DenseMatrix v;  // n x d_v

  Index n() const { return q.rows(); }
  Index d_k() const { return q.cols(); }
  Index d_v() const { return v.cols(); }
  double scale() const;

  /// Throws UsageError on inconsistent shapes or non-finite entries.
  void validate() const;
};

/// Q K^T / sqrt(d_k).
DenseMatrix scaled_logits(const AttentionProblem& p);

/// Full score matrix S = softmax(Q K^T / sqrt(d_k)).
DenseMatrix exact_scores(const AttentionProblem& p);

/// Softmax of caller-supplied logits; the hook the shift-invariance tests use.
DenseMatrix scores_from_logits(const DenseMatrix& logits);

/// S V, the reference output.
DenseMatrix exact_attention(const AttentionProblem& p);

}  // namespace ssattn
