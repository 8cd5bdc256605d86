#pragma once

#include <ssattn/ss_attention.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ssattn {

struct ErrorPair {
  double absolute = 0.0;
  double relative = 0.0;
};

/// norm(s - s_tilde) and that divided by norm(s).
ErrorPair approx_error(const DenseMatrix& s, const DenseMatrix& s_tilde, NormKind kind);

/// Right-hand side of the iterative-pseudoinverse error bound, evaluated as
/// written with induced inf-norms and A_s^+ from pinv_svd:
///   1 + ||A_s^+|| (1 + delta ||A_s^+||) (1 - ||A_s^+ - Z*||)
double error_bound(const DenseMatrix& a_s, double delta_ss, const DenseMatrix& z_star);

struct SpectrumReport {
  std::string label;
  std::vector<double> values;
  std::vector<double> cumulative;
};

SpectrumReport spectrum_report(const DenseMatrix& m, std::string label);

/// Entries of `values` above rel_tol * values.front().
Index count_above(const std::vector<double>& values, double rel_tol);

enum class Method { exact, nystrom, ss };

const char* to_string(Method m);
Method parse_method(const std::string& text);

struct ApproxReport {
  std::string method;
  Index n = 0;
  Index m = 0;
  Index d_k = 0;
  Index d_v = 0;
  bool materialized = false;
  ErrorPair err_frobenius;
  ErrorPair err_inf_induced;
  ErrorPair err_spectral;
  /// Measured E = ||S - S~||_inf with S~ built from the pipeline's Z*.
  double empirical_e = 0.0;
  double bound_value = 0.0;
  bool bound_respected = false;
  bool has_bound = false;
  double delta_used = 0.0;
  Index rank_s_tilde = 0;
  Index rank_a_s = 0;
  double row_sum_deviation = 0.0;  // max_i |sum_j S~_ij - 1|
  int pinv_iterations = 0;
  double pinv_residual = 0.0;
  StageTimings runtimes;
  std::vector<std::string> flags;
  DenseMatrix output;
};

struct ApproxRequest {
  Method method = Method::ss;
  SSAttentionConfig cfg;
  bool materialize = false;
};

/// Runs one method and, when materialize is set, compares the explicit
/// approximation against exact S.
ApproxReport run_approx(const AttentionProblem& p, const ApproxRequest& req);

struct BoundInstance {
  double empirical_e = 0.0;
  double bound_value = 0.0;
  bool respected = false;
  double delta = 0.0;
  int pinv_iterations = 0;
};

/// E = ||S - F Z* (I - delta Z*) B||_inf against error_bound(A_s, delta, Z*),
/// with Z* from the iterative pseudoinverse. Desk scale.
BoundInstance bound_instance(const AttentionProblem& p, const SSAttentionConfig& cfg);

/// Pipeline-mode settings: iterative pseudoinverse, paper-formula shift.
SSAttentionConfig default_bench_config();

struct ScalingOptions {
  Index d_k = 64;
  Index m = 64;
  std::vector<Index> n_list;
  int trials = 3;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::exact, Method::nystrom, Method::ss};
  /// Used for the nystrom and ss methods; m is overridden by `m` above.
  SSAttentionConfig cfg = default_bench_config();
};

struct ScalingRow {
  Method method = Method::ss;
  Index n = 0;
  double median_seconds = 0.0;
  std::vector<double> trial_seconds;
};

struct ScalingFit {
  Method method = Method::ss;
  bool has_slope = false;
  double slope = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<ScalingFit> fits;
};

/// Times each method at each n (one warm-up, then the median of `trials`
/// runs) and fits log(time) against log(n) by least squares.
ScalingResult scaling_study(const ScalingOptions& opts);

/// Least-squares slope of log(y) on log(x). Needs two distinct x values.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ssattn
