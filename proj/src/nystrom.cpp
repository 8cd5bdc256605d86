#include <ssattn/nystrom.hpp>

#include "stopwatch.hpp"

#include <unordered_set>

namespace ssattn {

namespace {

void check_selection(const std::vector<Index>& cols, Index n, const char* what) {
  if (cols.empty()) throw UsageError(std::string(what) + ": column selection is empty");
  std::unordered_set<Index> seen;
  for (Index c : cols) {
    if (c < 0 || c >= n) {
      throw UsageError(std::string(what) + ": column index " + std::to_string(c) + " out of range [0, " +
                       std::to_string(n) + ")");
    }
    if (!seen.insert(c).second) {
      throw UsageError(std::string(what) + ": duplicate column index " + std::to_string(c));
    }
  }
}

}  // namespace

DenseMatrix nystrom_raw(const DenseMatrix& s, const std::vector<Index>& cols, double pinv_tol) {
  if (s.rows() != s.cols()) throw UsageError("nystrom_raw: matrix must be square, got " + shape_str(s));
  check_selection(cols, s.rows(), "nystrom_raw");
  const DenseMatrix c = s(Eigen::all, cols);
  const DenseMatrix r = s(cols, Eigen::all);
  const DenseMatrix a = s(cols, cols);
  return c * (pinv_svd(a, pinv_tol) * r);
}

NystromResult nystrom_attention_run(const AttentionProblem& p, Index m, const PinvChoice& pinv,
                                    AllocationAudit* audit) {
  p.validate();
  check_landmark_count(p.n(), m);
  detail::Stopwatch clock;
  AttentionProblem padded_storage;
  const AttentionProblem* work = &p;
  if (p.n() % m != 0) {
    padded_storage = pad_problem(p, m);
    work = &padded_storage;
    if (audit) audit->acquire(work->n(), 2 * work->d_k() + work->d_v(), "padded_qkv");
  }
  const AttentionProblem& padded = *work;

  NystromResult res;
  const LandmarkSketch sk = build_sketch(padded, m, audit);
  res.timings.sketch = clock.lap();
  res.pinv = invert_sketch(sk.a_s, pinv, audit);
  res.timings.pinv = clock.lap();

  // F (Z (B V)), right to left.
  DenseMatrix bv = sk.b * padded.v;
  DenseMatrix zbv = res.pinv.z * bv;
  if (audit) {
    audit->acquire(bv.rows(), bv.cols(), "bv");
    audit->acquire(zbv.rows(), zbv.cols(), "zbv");
    audit->acquire(p.n(), p.d_v(), "output");
  }
  res.output = sk.f.topRows(p.n()) * zbv;
  res.timings.products = clock.lap();
  res.timings.total = clock.total();
  return res;
}

DenseMatrix nystrom_attention(const AttentionProblem& p, Index m, const PinvChoice& pinv) {
  return nystrom_attention_run(p, m, pinv).output;
}

DenseMatrix nystrom_attention_materialized(const AttentionProblem& p, Index m, const PinvChoice& pinv) {
  p.validate();
  const AttentionProblem padded = pad_problem(p, m);
  const LandmarkSketch sk = build_sketch(padded, m);
  const PinvOutcome z = invert_sketch(sk.a_s, pinv);
  const Index n = p.n();
  return sk.f.topRows(n) * (z.z * sk.b.leftCols(n));
}

}  // namespace ssattn
