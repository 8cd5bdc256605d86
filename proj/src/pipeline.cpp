#include <ssattn/landmarks.hpp>
#include <ssattn/pipeline.hpp>

#include <algorithm>

namespace ssattn {

const char* to_string(PinvMode mode) { return mode == PinvMode::svd ? "svd" : "iterative"; }

PinvMode parse_pinv_mode(const std::string& text) {
  if (text == "svd") return PinvMode::svd;
  if (text == "iterative" || text == "iter") return PinvMode::iterative;
  throw UsageError("unknown pinv mode '" + text + "' (expected svd or iterative)");
}

void AllocationAudit::acquire(Index rows, Index cols, const char* label) {
  current_ += rows * cols;
  peak_ = std::max(peak_, current_);
  entries_.push_back({label, rows, cols});
}

void AllocationAudit::release(Index rows, Index cols) { current_ -= rows * cols; }

namespace {

void note(AllocationAudit* audit, Index rows, Index cols, const char* label) {
  if (audit) audit->acquire(rows, cols, label);
}

}  // namespace

void check_landmark_count(Index n, Index m) {
  if (m < 1) throw UsageError("landmark count m must be >= 1");
  if (m > n) {
    throw UsageError("landmark count m = " + std::to_string(m) + " exceeds sequence length n = " + std::to_string(n) +
                     "; reduce m");
  }
}

AttentionProblem pad_problem(const AttentionProblem& p, Index m) {
  check_landmark_count(p.n(), m);
  if (p.n() % m == 0) return p;
  return AttentionProblem{pad_to_multiple(p.q, m).x, pad_to_multiple(p.k, m).x, pad_to_multiple(p.v, m).x};
}

LandmarkSketch build_sketch(const AttentionProblem& p, Index m, AllocationAudit* audit) {
  const Index n = p.n();
  const LandmarkPair lm = make_landmarks(p.q, p.k, m);
  note(audit, m, p.d_k(), "q_tilde");
  note(audit, m, p.d_k(), "k_tilde");

  const double scale = p.scale();
  LandmarkSketch sk;
  sk.f.noalias() = (p.q * lm.k_tilde.transpose()) * scale;
  note(audit, n, m, "f");
  row_softmax_inplace(sk.f);
  sk.a_s.noalias() = (lm.q_tilde * lm.k_tilde.transpose()) * scale;
  note(audit, m, m, "a_s");
  row_softmax_inplace(sk.a_s);
  sk.b.noalias() = (lm.q_tilde * p.k.transpose()) * scale;
  note(audit, m, n, "b");
  row_softmax_inplace(sk.b);
  return sk;
}

PinvOutcome invert_sketch(const DenseMatrix& a_s, const PinvChoice& choice, AllocationAudit* audit) {
  const Index c = a_s.rows();
  PinvOutcome out;
  if (choice.mode == PinvMode::svd) {
    // u, vt, the result, and the dense copy handed to the SVD.
    note(audit, c, 4 * c, "pinv_svd_scratch");
    out.z = pinv_svd(a_s, choice.svd_tol);
    return out;
  }
  // z, x, x_next, t, inner and two product temporaries.
  note(audit, c, 7 * c, "pinv_iter_scratch");
  PinvIterResult r = pinv_iterative(a_s, choice.iter);
  out.z = std::move(r.z);
  out.iterations = r.iterations;
  out.residual = r.residual;
  out.converged = r.converged;
  if (!r.converged) out.flags.emplace_back("pinv_not_converged");
  if (r.initial_condition_violated) out.flags.emplace_back("pinv_initial_condition_violated");
  return out;
}

}  // namespace ssattn
