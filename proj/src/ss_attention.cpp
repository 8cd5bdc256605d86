#include <ssattn/landmarks.hpp>
#include <ssattn/spectral_shift.hpp>
#include <ssattn/ss_attention.hpp>

#include "stopwatch.hpp"

#include <cmath>
#include <optional>

namespace ssattn {

const char* to_string(DeltaMode mode) {
  switch (mode) {
    case DeltaMode::paper_formula:
      return "paper_formula";
    case DeltaMode::fixed:
      return "fixed";
    case DeltaMode::full_oracle:
      return "full_oracle";
  }
  return "?";
}

const char* to_string(DiagShift mode) { return mode == DiagShift::omit ? "omit" : "include"; }

void SSAttentionConfig::validate() const {
  if (m < 1) throw UsageError("ss_attention: landmark count m must be >= 1");
  if (pinv.iter.max_iters < 1) throw UsageError("ss_attention: pinv iterations must be >= 1");
  if (delta_mode == DeltaMode::fixed && !std::isfinite(fixed_delta)) {
    throw UsageError("ss_attention: fixed delta must be finite");
  }
  if (!(tol > 0.0)) throw UsageError("ss_attention: tol must be positive");
}

namespace {

struct DeltaChoice {
  double delta = 0.0;
  Index rank = 0;
  std::vector<std::string> flags;
};

/// `original` is the unpadded problem; `sk` was built from its padded twin.
DeltaChoice choose_delta(const AttentionProblem& original, const LandmarkSketch& sk, const SSAttentionConfig& cfg) {
  DeltaChoice out;
  switch (cfg.delta_mode) {
    case DeltaMode::fixed:
      out.delta = cfg.fixed_delta;
      out.rank = numerical_rank(sk.a_s, cfg.tol);
      break;
    case DeltaMode::paper_formula: {
      const SSFactors f = ss_factors_modified(sk.a_s, cfg.tol);
      out.delta = f.delta_ss;
      out.rank = f.rank_a;
      if (f.full_rank_convention) out.flags.emplace_back("full_rank_convention");
      break;
    }
    case DeltaMode::full_oracle: {
      if (original.n() > cfg.desk_limit) {
        throw UsageError("ss_attention: full_oracle delta materializes n x n; n = " + std::to_string(original.n()) +
                         " exceeds the desk-scale limit " + std::to_string(cfg.desk_limit));
      }
      const DenseMatrix s = exact_scores(original);
      const ShiftDelta sd = shift_delta_full(s, sk.f.topRows(original.n()), cfg.tol);
      out.delta = sd.delta;
      out.rank = numerical_rank(sk.a_s, cfg.tol);
      if (sd.full_rank_convention) out.flags.emplace_back("full_rank_convention");
      break;
    }
  }
  return out;
}

/// Holds the zero-padded copy only when m does not divide n.
struct Prepared {
  std::optional<AttentionProblem> padded;

  const AttentionProblem& use(const AttentionProblem& p) const { return padded ? *padded : p; }
};

Prepared prepare(const AttentionProblem& p, const SSAttentionConfig& cfg, AllocationAudit* audit) {
  p.validate();
  cfg.validate();
  check_landmark_count(p.n(), cfg.m);
  Prepared out;
  if (p.n() % cfg.m != 0) {
    out.padded = pad_problem(p, cfg.m);
    if (audit) audit->acquire(out.padded->n(), 2 * out.padded->d_k() + out.padded->d_v(), "padded_qkv");
  }
  return out;
}

}  // namespace

double resolve_delta(const AttentionProblem& p, const SSAttentionConfig& cfg) {
  const Prepared prep = prepare(p, cfg, nullptr);
  const LandmarkSketch sk = build_sketch(prep.use(p), cfg.m);
  return choose_delta(p, sk, cfg).delta;
}

SSAttentionResult ss_attention_run(const AttentionProblem& p, const SSAttentionConfig& cfg, AllocationAudit* audit) {
  detail::Stopwatch clock;
  const Prepared prep = prepare(p, cfg, audit);
  const AttentionProblem& work = prep.use(p);
  const Index n = p.n();

  SSAttentionResult res;
  const LandmarkSketch sk = build_sketch(work, cfg.m, audit);
  res.timings.sketch = clock.lap();

  res.pinv = invert_sketch(sk.a_s, cfg.pinv, audit);
  DeltaChoice dc = choose_delta(p, sk, cfg);
  res.delta = dc.delta;
  res.rank_a_s = dc.rank;
  res.flags = std::move(dc.flags);
  res.flags.insert(res.flags.end(), res.pinv.flags.begin(), res.pinv.flags.end());
  res.timings.pinv = clock.lap();

  const DenseMatrix& z = res.pinv.z;
  DenseMatrix bv = sk.b * work.v;
  if (audit) audit->acquire(bv.rows(), bv.cols(), "bv");
  // (I - delta Z) (B V), or (I - delta A_s) (B V) for the literal form.
  DenseMatrix w = bv;
  if (audit) audit->acquire(w.rows(), w.cols(), "w");
  if (res.delta != 0.0) {
    const DenseMatrix& inner = cfg.paren == ParenForm::derived ? z : sk.a_s;
    w.noalias() -= res.delta * (inner * bv);
  }
  DenseMatrix zw = z * w;
  if (audit) {
    audit->acquire(zw.rows(), zw.cols(), "zw");
    audit->acquire(n, work.d_v(), "output");
  }
  res.output = sk.f.topRows(n) * zw;
  if (cfg.diag_shift == DiagShift::include) res.output += res.delta * p.v;
  res.timings.products = clock.lap();
  res.timings.total = clock.total();
  return res;
}

DenseMatrix ss_attention(const AttentionProblem& p, const SSAttentionConfig& cfg) {
  return ss_attention_run(p, cfg).output;
}

DenseMatrix ss_attention_materialized(const AttentionProblem& p, const SSAttentionConfig& cfg) {
  const Prepared prep = prepare(p, cfg, nullptr);
  const Index n = p.n();
  const LandmarkSketch sk = build_sketch(prep.use(p), cfg.m);
  const PinvOutcome z = invert_sketch(sk.a_s, cfg.pinv);
  const double delta = choose_delta(p, sk, cfg).delta;

  DenseMatrix mid = identity(cfg.m);
  mid -= delta * (cfg.paren == ParenForm::derived ? z.z : sk.a_s);
  DenseMatrix s_tilde = sk.f.topRows(n) * (z.z * mid * sk.b.leftCols(n));
  if (cfg.diag_shift == DiagShift::include) s_tilde.diagonal().array() += delta;
  return s_tilde;
}

double ss_entry_svd_form(const AttentionProblem& p, const SSAttentionConfig& cfg, Index i, Index j) {
  const Prepared prep = prepare(p, cfg, nullptr);
  const AttentionProblem& work = prep.use(p);
  const Index n = p.n();
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw UsageError("ss_entry_svd_form: index (" + std::to_string(i) + ", " + std::to_string(j) +
                     ") out of range for n = " + std::to_string(n));
  }

  const LandmarkPair lm = make_landmarks(work.q, work.k, cfg.m);
  const double scale = work.scale();

  DenseMatrix a_s = (lm.q_tilde * lm.k_tilde.transpose()) * scale;
  row_softmax_inplace(a_s);

  // f_i: softmax of query i against the key landmarks.
  DenseMatrix f_i = (work.q.row(i) * lm.k_tilde.transpose()) * scale;
  row_softmax_inplace(f_i);

  // b_j: column j of the row-wise softmax of Q~ K^T. Each landmark row needs
  // its own normalizer over all keys.
  const DenseMatrix logits = (lm.q_tilde * work.k.transpose()) * scale;
  Vector b_j(cfg.m);
  for (Index r = 0; r < cfg.m; ++r) {
    const double mx = logits.row(r).maxCoeff();
    const double denom = (logits.row(r).array() - mx).exp().sum();
    b_j(r) = std::exp(logits(r, j) - mx) / denom;
  }

  // V G^+ U^T from the SVD; singular values below the pinv cutoff are dropped.
  const DenseMatrix a_pinv = pinv_from_svd(svd(a_s), cfg.pinv.svd_tol);

  const LandmarkSketch sk{DenseMatrix(), a_s, DenseMatrix()};
  double delta = 0.0;
  if (cfg.delta_mode == DeltaMode::full_oracle) {
    delta = resolve_delta(p, cfg);
  } else {
    delta = choose_delta(p, sk, cfg).delta;
  }

  const DenseMatrix& inner = cfg.paren == ParenForm::derived ? a_pinv : a_s;
  const Vector right = b_j - delta * (inner * b_j);
  double value = (f_i * (a_pinv * right))(0, 0);
  if (cfg.diag_shift == DiagShift::include && i == j) value += delta;
  return value;
}

}  // namespace ssattn
