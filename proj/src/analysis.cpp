#include <ssattn/analysis.hpp>
#include <ssattn/nystrom.hpp>
#include <ssattn/random.hpp>

#include "stopwatch.hpp"

#include <algorithm>
#include <cmath>

namespace ssattn {

ErrorPair approx_error(const DenseMatrix& s, const DenseMatrix& s_tilde, NormKind kind) {
  if (s.rows() != s_tilde.rows() || s.cols() != s_tilde.cols()) {
    throw UsageError("approx_error: shapes differ (" + shape_str(s) + " vs " + shape_str(s_tilde) + ")");
  }
  ErrorPair e;
  e.absolute = norm(s - s_tilde, kind);
  const double base = norm(s, kind);
  e.relative = base > 0.0 ? e.absolute / base : (e.absolute == 0.0 ? 0.0 : INFINITY);
  return e;
}

double error_bound(const DenseMatrix& a_s, double delta_ss, const DenseMatrix& z_star) {
  if (a_s.rows() != a_s.cols() || z_star.rows() != a_s.rows() || z_star.cols() != a_s.cols()) {
    throw UsageError("error_bound: A_s is " + shape_str(a_s) + ", Z* is " + shape_str(z_star));
  }
  const DenseMatrix a_pinv = pinv_svd(a_s);
  const double pinv_norm = norm(a_pinv, NormKind::inf_induced);
  const double gap = norm(a_pinv - z_star, NormKind::inf_induced);
  return 1.0 + pinv_norm * (1.0 + delta_ss * pinv_norm) * (1.0 - gap);
}

SpectrumReport spectrum_report(const DenseMatrix& m, std::string label) {
  Spectrum sp = spectrum(m);
  return SpectrumReport{std::move(label), std::move(sp.values), std::move(sp.cumulative)};
}

Index count_above(const std::vector<double>& values, double rel_tol) {
  if (values.empty() || values.front() <= 0.0) return 0;
  const double cutoff = rel_tol * values.front();
  return static_cast<Index>(std::count_if(values.begin(), values.end(), [&](double v) { return v > cutoff; }));
}

const char* to_string(Method m) {
  switch (m) {
    case Method::exact:
      return "exact";
    case Method::nystrom:
      return "nystrom";
    case Method::ss:
      return "ss";
  }
  return "?";
}

Method parse_method(const std::string& text) {
  if (text == "exact") return Method::exact;
  if (text == "nystrom") return Method::nystrom;
  if (text == "ss") return Method::ss;
  throw UsageError("unknown method '" + text + "' (expected exact, nystrom or ss)");
}

SSAttentionConfig default_bench_config() {
  SSAttentionConfig cfg;
  cfg.pinv.mode = PinvMode::iterative;
  return cfg;
}

namespace {

double max_row_sum_deviation(const DenseMatrix& m) {
  return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

void fill_errors(ApproxReport& rep, const DenseMatrix& s, const DenseMatrix& s_tilde) {
  rep.materialized = true;
  rep.err_frobenius = approx_error(s, s_tilde, NormKind::frobenius);
  rep.err_inf_induced = approx_error(s, s_tilde, NormKind::inf_induced);
  rep.err_spectral = approx_error(s, s_tilde, NormKind::spectral);
  rep.empirical_e = rep.err_inf_induced.absolute;
  rep.rank_s_tilde = numerical_rank(s_tilde);
  rep.row_sum_deviation = max_row_sum_deviation(s_tilde);
}

/// Explicit F Z (I - delta Z) B for a given Z, truncated to n x n.
DenseMatrix materialize_with(const LandmarkSketch& sk, const DenseMatrix& z, double delta, Index n) {
  DenseMatrix mid = identity(z.rows()) - delta * z;
  return sk.f.topRows(n) * (z * mid * sk.b.leftCols(n));
}

}  // namespace

ApproxReport run_approx(const AttentionProblem& p, const ApproxRequest& req) {
  p.validate();
  ApproxReport rep;
  rep.method = to_string(req.method);
  rep.n = p.n();
  rep.d_k = p.d_k();
  rep.d_v = p.d_v();
  rep.m = req.method == Method::exact ? p.n() : req.cfg.m;

  if (req.materialize && p.n() > req.cfg.desk_limit) {
    throw UsageError("materialization needs n <= " + std::to_string(req.cfg.desk_limit) + ", got n = " +
                     std::to_string(p.n()));
  }

  if (req.method == Method::exact) {
    detail::Stopwatch clock;
    rep.output = exact_attention(p);
    rep.runtimes.products = rep.runtimes.total = clock.total();
    if (req.materialize) fill_errors(rep, exact_scores(p), exact_scores(p));
    return rep;
  }

  SSAttentionConfig cfg = req.cfg;
  cfg.validate();
  if (req.method == Method::nystrom) {
    cfg.delta_mode = DeltaMode::fixed;
    cfg.fixed_delta = 0.0;
    cfg.diag_shift = DiagShift::omit;
    NystromResult run = nystrom_attention_run(p, cfg.m, cfg.pinv);
    rep.output = std::move(run.output);
    rep.pinv_iterations = run.pinv.iterations;
    rep.pinv_residual = run.pinv.residual;
    rep.runtimes = run.timings;
    rep.flags = run.pinv.flags;
  } else {
    SSAttentionResult run = ss_attention_run(p, cfg);
    rep.output = std::move(run.output);
    rep.delta_used = run.delta;
    rep.rank_a_s = run.rank_a_s;
    rep.pinv_iterations = run.pinv.iterations;
    rep.pinv_residual = run.pinv.residual;
    rep.runtimes = run.timings;
    rep.flags = run.flags;
  }

  if (req.materialize) {
    const DenseMatrix s = exact_scores(p);
    const DenseMatrix s_tilde = req.method == Method::nystrom ? nystrom_attention_materialized(p, cfg.m, cfg.pinv)
                                                              : ss_attention_materialized(p, cfg);
    fill_errors(rep, s, s_tilde);

    // The bound compares against the approximation without the diagonal term.
    const AttentionProblem padded = pad_problem(p, cfg.m);
    const LandmarkSketch sk = build_sketch(padded, cfg.m);
    const DenseMatrix z = invert_sketch(sk.a_s, cfg.pinv).z;
    if (req.method == Method::nystrom) rep.rank_a_s = numerical_rank(sk.a_s, cfg.tol);
    rep.empirical_e = norm(s - materialize_with(sk, z, rep.delta_used, p.n()), NormKind::inf_induced);
    rep.bound_value = error_bound(sk.a_s, rep.delta_used, z);
    rep.has_bound = true;
    rep.bound_respected = rep.empirical_e <= rep.bound_value;
    if (!rep.bound_respected) rep.flags.emplace_back("bound_violation");
  }
  return rep;
}

BoundInstance bound_instance(const AttentionProblem& p, const SSAttentionConfig& cfg_in) {
  p.validate();
  SSAttentionConfig cfg = cfg_in;
  cfg.validate();
  if (p.n() > cfg.desk_limit) {
    throw UsageError("bound evaluation needs n <= " + std::to_string(cfg.desk_limit));
  }
  cfg.pinv.mode = PinvMode::iterative;
  const AttentionProblem padded = pad_problem(p, cfg.m);
  const LandmarkSketch sk = build_sketch(padded, cfg.m);
  const PinvOutcome z = invert_sketch(sk.a_s, cfg.pinv);
  const double delta = resolve_delta(p, cfg);

  BoundInstance out;
  out.delta = delta;
  out.pinv_iterations = z.iterations;
  out.empirical_e = norm(exact_scores(p) - materialize_with(sk, z.z, delta, p.n()), NormKind::inf_induced);
  out.bound_value = error_bound(sk.a_s, delta, z.z);
  out.respected = out.empirical_e <= out.bound_value;
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("loglog_slope: need at least two points");
  const std::size_t k = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw UsageError("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= double(k);
  my /= double(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw UsageError("loglog_slope: x values must not all be equal");
  return sxy / sxx;
}

namespace {

double time_once(Method method, const AttentionProblem& p, const SSAttentionConfig& cfg) {
  detail::Stopwatch clock;
  DenseMatrix out;
  switch (method) {
    case Method::exact:
      out = exact_attention(p);
      break;
    case Method::nystrom:
      out = nystrom_attention(p, cfg.m, cfg.pinv);
      break;
    case Method::ss:
      out = ss_attention(p, cfg);
      break;
  }
  const double t = clock.total();
  // Keep the result observable so the work cannot be elided.
  if (!std::isfinite(out(0, 0))) throw NumericalError("benchmark produced a non-finite output");
  return t;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

ScalingResult scaling_study(const ScalingOptions& opts) {
  if (opts.trials < 3) throw UsageError("scaling_study: trials must be >= 3");
  if (opts.n_list.empty()) throw UsageError("scaling_study: n_list is empty");
  for (std::size_t i = 0; i < opts.n_list.size(); ++i) {
    if (opts.n_list[i] < 1) throw UsageError("scaling_study: n values must be >= 1");
    if (i > 0 && opts.n_list[i] <= opts.n_list[i - 1]) throw UsageError("scaling_study: n_list must be ascending");
  }
  SSAttentionConfig cfg = opts.cfg;
  cfg.m = opts.m;
  cfg.validate();

  ScalingResult res;
  for (Method method : opts.methods) {
    std::vector<double> xs, ys;
    for (Index n : opts.n_list) {
      const AttentionProblem p = random_problem(n, opts.d_k, opts.d_k, opts.seed + std::uint64_t(n));
      time_once(method, p, cfg);  // warm-up
      ScalingRow row;
      row.method = method;
      row.n = n;
      for (int t = 0; t < opts.trials; ++t) row.trial_seconds.push_back(time_once(method, p, cfg));
      row.median_seconds = median(row.trial_seconds);
      xs.push_back(double(n));
      ys.push_back(row.median_seconds);
      res.rows.push_back(std::move(row));
    }
    ScalingFit fit;
    fit.method = method;
    if (xs.size() >= 2) {
      fit.has_slope = true;
      fit.slope = loglog_slope(xs, ys);
    }
    res.fits.push_back(fit);
  }
  return res;
}

}  // namespace ssattn
