#include <ssattn/exact_attention.hpp>
#include <ssattn/matcore.hpp>

#include <cmath>

namespace ssattn {

double AttentionProblem::scale() const { return 1.0 / std::sqrt(double(d_k())); }

void AttentionProblem::validate() const {
  if (q.rows() < 1 || q.cols() < 1) throw UsageError("attention: Q must be non-empty, got " + shape_str(q));
  if (v.cols() < 1) throw UsageError("attention: V must have at least one column");
  if (k.cols() != q.cols()) {
    throw UsageError("attention: Q is " + shape_str(q) + " but K is " + shape_str(k) +
                     "; key and query widths must match");
  }
  if (k.rows() != q.rows() || v.rows() != q.rows()) {
    throw UsageError("attention: row counts differ (Q " + shape_str(q) + ", K " + shape_str(k) + ", V " +
                     shape_str(v) + ")");
  }
  require_finite(q, "attention Q");
  require_finite(k, "attention K");
  require_finite(v, "attention V");
}

DenseMatrix scaled_logits(const AttentionProblem& p) {
  p.validate();
  DenseMatrix logits = (p.q * p.k.transpose()) * p.scale();
  return logits;
}

DenseMatrix scores_from_logits(const DenseMatrix& logits) { return row_softmax(logits); }

DenseMatrix exact_scores(const AttentionProblem& p) {
  DenseMatrix s = scaled_logits(p);
  row_softmax_inplace(s);
  return s;
}

DenseMatrix exact_attention(const AttentionProblem& p) { return exact_scores(p) * p.v; }

}  // namespace ssattn
