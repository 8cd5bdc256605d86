#include "cli.hpp"

#include <ssattn/analysis.hpp>
#include <ssattn/matrix_io.hpp>
#include <ssattn/random.hpp>
#include <ssattn/spectral_shift.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace ssattn::cli {

namespace {

using json = nlohmann::json;

/// Materialization (and the exact baseline in bench) stops here unless forced.
constexpr Index kDeskLimit = 4096;
constexpr Index kBenchExactLimit = 16384;
constexpr Index kInlineOutputLimit = 1024;

struct DeltaFlag {
  DeltaMode mode = DeltaMode::paper_formula;
  double value = 0.0;
};

DeltaFlag parse_delta_flag(const std::string& text) {
  if (text == "paper" || text == "paper_formula") return {DeltaMode::paper_formula, 0.0};
  if (text == "oracle" || text == "full_oracle") return {DeltaMode::full_oracle, 0.0};
  if (text.rfind("fixed=", 0) == 0) {
    const std::string num = text.substr(6);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
    if (num.empty() || ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(v)) {
      throw UsageError("--delta-mode: cannot parse fixed value '" + num + "'");
    }
    return {DeltaMode::fixed, v};
  }
  throw UsageError("--delta-mode: expected paper, fixed=<value> or oracle, got '" + text + "'");
}

DiagShift parse_diag_shift(const std::string& text) {
  if (text == "omit") return DiagShift::omit;
  if (text == "include") return DiagShift::include;
  throw UsageError("--diag-shift: expected omit or include, got '" + text + "'");
}

std::vector<Index> parse_index_list(const std::string& text, const char* flag) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || v < 1) {
      throw UsageError(std::string(flag) + ": invalid entry '" + item + "'");
    }
    out.push_back(static_cast<Index>(v));
  }
  if (out.empty()) throw UsageError(std::string(flag) + ": list is empty");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError(std::string(flag) + ": invalid entry '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("SSATTN_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

json matrix_json(const DenseMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json error_json(const ErrorPair& e) { return {{"absolute", e.absolute}, {"relative", e.relative}}; }

json timings_json(const StageTimings& t) {
  return {{"sketch", t.sketch}, {"pinv", t.pinv}, {"products", t.products}, {"total", t.total}};
}

json base_report(const char* command) { return {{"schema", kSchemaVersion}, {"command", command}}; }

/// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << text;
  if (!f) throw IoError(path + ": write failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- options

struct ProblemArgs {
  Index n = 256;
  Index d = 32;
  Index m = 32;
  std::uint64_t seed = 0;
  std::string q_path, k_path, v_path;
};

void add_problem_options(CLI::App* sub, ProblemArgs& a, bool with_files) {
  sub->add_option("--n", a.n, "sequence length")->check(CLI::PositiveNumber);
  sub->add_option("--d", a.d, "key/value width")->check(CLI::PositiveNumber);
  sub->add_option("--m", a.m, "landmark count")->check(CLI::PositiveNumber);
  sub->add_option("--seed", a.seed, "RNG seed (mt19937_64)");
  if (with_files) {
    sub->add_option("--q", a.q_path, "queries file (csv or .mat1)");
    sub->add_option("--k", a.k_path, "keys file");
    sub->add_option("--v", a.v_path, "values file");
  }
}

AttentionProblem load_problem(const ProblemArgs& a) {
  const bool any = !a.q_path.empty() || !a.k_path.empty() || !a.v_path.empty();
  if (!any) return random_problem(a.n, a.d, a.d, a.seed);
  if (a.q_path.empty() || a.k_path.empty() || a.v_path.empty()) {
    throw UsageError("--q, --k and --v must be given together");
  }
  AttentionProblem p{read_matrix(a.q_path), read_matrix(a.k_path), read_matrix(a.v_path)};
  p.validate();
  return p;
}

struct ApproxArgs {
  ProblemArgs prob;
  std::string method = "ss";
  std::string pinv = "svd";
  int iters = 30;
  std::string delta_mode = "paper";
  std::string diag_shift = "omit";
  bool materialize = false;
  bool force = false;
  std::string out;
  std::string write_output;
};

struct SpectrumArgs {
  ProblemArgs prob;
  std::string delta_mode = "paper";
  std::string diag_shift = "omit";
  std::string pinv = "svd";
  std::string out_prefix = "spectrum";
  bool force = false;
};

struct BenchArgs {
  std::string methods = "exact,nystrom,ss";
  std::string n_list = "2048,4096,8192";
  Index d = 64;
  Index m = 64;
  int trials = 3;
  int threads = 1;
  std::uint64_t seed = 0;
  bool force = false;
  std::string csv;
  std::string json_path;
};

struct Lemma1Args {
  Index n = 256;
  Index k = 8;
  double theta = 0.5;
  Index c = 16;
  std::uint64_t seed = 0;
  std::string head_eigs;
  std::string out;
};

struct BoundArgs {
  ProblemArgs prob;
  int iters = 30;
  std::string delta_mode = "paper";
  int trials = 1;
  int threads = 1;
  bool force = false;
  std::string out;
};

struct GenArgs {
  Index n = 256;
  Index d = 32;
  std::uint64_t seed = 0;
  std::string out_prefix = "problem";
  std::string format = "mat1";
};

SSAttentionConfig make_config(Index m, const std::string& pinv, int iters, const std::string& delta,
                              const std::string& diag, bool force) {
  if (iters < 1) throw UsageError("--iters must be >= 1");
  SSAttentionConfig cfg;
  cfg.m = m;
  cfg.pinv.mode = parse_pinv_mode(pinv);
  cfg.pinv.iter.max_iters = iters;
  const DeltaFlag df = parse_delta_flag(delta);
  cfg.delta_mode = df.mode;
  cfg.fixed_delta = df.value;
  cfg.diag_shift = parse_diag_shift(diag);
  if (force) cfg.desk_limit = std::numeric_limits<Index>::max();
  return cfg;
}

// ---------------------------------------------------------------- commands

int cmd_approx(const ApproxArgs& a, std::ostream& out) {
  const Method method = parse_method(a.method);
  const AttentionProblem p = load_problem(a.prob);
  ApproxRequest req;
  req.method = method;
  req.cfg = make_config(a.prob.m, a.pinv, a.iters, a.delta_mode, a.diag_shift, a.force);
  req.materialize = a.materialize;
  if (a.materialize && p.n() > kDeskLimit && !a.force) {
    throw UsageError("--materialize needs n <= " + std::to_string(kDeskLimit) + " (use --force)");
  }

  json j = base_report("approx");
  j["method"] = to_string(method);
  j["seed"] = a.prob.seed;
  j["config"] = {{"pinv", to_string(req.cfg.pinv.mode)},
                 {"iters", req.cfg.pinv.iter.max_iters},
                 {"delta_mode", to_string(req.cfg.delta_mode)},
                 {"fixed_delta", req.cfg.fixed_delta},
                 {"diag_shift", to_string(req.cfg.diag_shift)}};
  ApproxReport rep;
  try {
    rep = run_approx(p, req);
  } catch (const NumericalError& e) {
    j["status"] = "numerical_failure";
    j["message"] = e.what();
    j["flags"] = json::array({"numerical_failure"});
    emit(dump(j), a.out, out);
    return kExitNumerical;
  }

  j["status"] = "ok";
  j["n"] = rep.n;
  j["m"] = rep.m;
  j["d_k"] = rep.d_k;
  j["d_v"] = rep.d_v;
  j["materialized"] = rep.materialized;
  j["delta_used"] = rep.delta_used;
  j["rank_a_s"] = rep.rank_a_s;
  j["pinv"] = {{"iterations", rep.pinv_iterations}, {"residual", rep.pinv_residual}};
  j["runtimes"] = timings_json(rep.runtimes);
  j["flags"] = rep.flags;
  if (rep.materialized) {
    j["err_frobenius"] = error_json(rep.err_frobenius);
    j["err_inf_induced"] = error_json(rep.err_inf_induced);
    j["err_spectral"] = error_json(rep.err_spectral);
    j["rank_s_tilde"] = rep.rank_s_tilde;
    j["row_sum_deviation"] = rep.row_sum_deviation;
    if (rep.has_bound) {
      j["bound"] = {{"empirical_E", rep.empirical_e},
                    {"bound_value", rep.bound_value},
                    {"respected", rep.bound_respected}};
    }
  }
  if (rep.output.size() <= kInlineOutputLimit) j["output"] = matrix_json(rep.output);
  if (!a.write_output.empty()) write_matrix(a.write_output, rep.output);
  emit(dump(j), a.out, out);
  return kExitOk;
}

void write_spectrum_csv(const std::string& path, const SpectrumReport& r) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError(path + ": cannot open for writing");
  f << "index,value,cumulative\n" << std::setprecision(17);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    f << (i + 1) << ',' << r.values[i] << ',' << r.cumulative[i] << '\n';
  }
  if (!f) throw IoError(path + ": write failed");
}

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out) {
  const AttentionProblem p = load_problem(a.prob);
  if (p.n() > kDeskLimit && !a.force) {
    throw UsageError("spectrum needs n <= " + std::to_string(kDeskLimit) + " (use --force)");
  }
  const SSAttentionConfig cfg = make_config(a.prob.m, a.pinv, 30, a.delta_mode, a.diag_shift, a.force);
  const SpectrumReport exact = spectrum_report(exact_scores(p), "exact");
  const SpectrumReport approx = spectrum_report(ss_attention_materialized(p, cfg), "approx");
  const std::string exact_path = a.out_prefix + "_exact.csv";
  const std::string approx_path = a.out_prefix + "_approx.csv";
  write_spectrum_csv(exact_path, exact);
  write_spectrum_csv(approx_path, approx);

  json j = base_report("spectrum");
  j["n"] = p.n();
  j["m"] = cfg.m;
  j["delta_used"] = resolve_delta(p, cfg);
  j["diag_shift"] = to_string(cfg.diag_shift);
  j["files"] = {exact_path, approx_path};
  j["above_threshold"] = {{"exact", count_above(exact.values, kDefaultRankTol)},
                          {"approx", count_above(approx.values, kDefaultRankTol)}};
  out << dump(j);
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.threads < 1) throw UsageError("--threads must be >= 1");
  ScalingOptions opts;
  opts.n_list = parse_index_list(a.n_list, "--n-list");
  for (std::size_t i = 1; i < opts.n_list.size(); ++i) {
    if (opts.n_list[i] <= opts.n_list[i - 1]) throw UsageError("--n-list must be strictly ascending");
  }
  opts.methods.clear();
  std::stringstream ss(a.methods);
  std::string item;
  while (std::getline(ss, item, ',')) opts.methods.push_back(parse_method(item));
  if (opts.methods.empty()) throw UsageError("--methods is empty");
  const bool has_exact = std::find(opts.methods.begin(), opts.methods.end(), Method::exact) != opts.methods.end();
  if (has_exact && opts.n_list.back() > kBenchExactLimit && !a.force) {
    throw UsageError("exact method above n = " + std::to_string(kBenchExactLimit) + " needs --force");
  }
  for (Index n : opts.n_list) {
    if (n < a.m) throw UsageError("--n-list entries must be >= --m");
  }
  opts.d_k = a.d;
  opts.m = a.m;
  opts.trials = a.trials;
  opts.seed = a.seed;
  if (a.trials < 3) throw UsageError("--trials must be >= 3");

  const ScalingResult res = scaling_study(opts);

  std::ostringstream csv;
  csv << "method,n,median_seconds\n" << std::setprecision(9);
  for (const ScalingRow& r : res.rows) csv << to_string(r.method) << ',' << r.n << ',' << r.median_seconds << '\n';

  json j = base_report("bench");
  j["d"] = a.d;
  j["m"] = a.m;
  j["trials"] = a.trials;
  j["threads"] = a.threads;
  j["timing_threads"] = 1;
  json slopes = json::object();
  for (const ScalingFit& f : res.fits) {
    if (f.has_slope) slopes[to_string(f.method)] = f.slope;
  }
  j["slopes"] = slopes;
  json rows = json::array();
  for (const ScalingRow& r : res.rows) {
    rows.push_back({{"method", to_string(r.method)}, {"n", r.n}, {"median_seconds", r.median_seconds},
                    {"trial_seconds", r.trial_seconds}});
  }
  j["rows"] = rows;

  if (!a.csv.empty()) {
    emit(csv.str(), a.csv, out);
    emit(dump(j), a.json_path, out);
  } else {
    out << csv.str();
    if (a.json_path.empty()) {
      err << dump(j);
    } else {
      emit(dump(j), a.json_path, out);
    }
  }
  return kExitOk;
}

int cmd_lemma1(const Lemma1Args& a, std::ostream& out) {
  if (a.c < a.k) {
    throw UsageError("--c (" + std::to_string(a.c) + ") must be >= --k (" + std::to_string(a.k) + ")");
  }
  FlatTailSpec spec;
  spec.n = a.n;
  spec.k = a.k;
  spec.theta = a.theta;
  spec.seed = a.seed;
  spec.head_eigs = a.head_eigs.empty() ? default_head_eigs(a.k, a.theta) : parse_double_list(a.head_eigs, "--head-eigs");
  const Theorem1Report r = theorem1_check(spec, a.c);

  json j = base_report("lemma1");
  j["n"] = r.n;
  j["k"] = r.k;
  j["c"] = r.c;
  j["theta"] = r.theta;
  j["seed"] = a.seed;
  j["head_eigs"] = spec.head_eigs;
  j["k_frobenius"] = r.k_norm;
  j["ss_error"] = r.ss_error;
  j["nystrom_error"] = r.nystrom_error;
  j["ss_relative_error"] = r.ss_error / r.k_norm;
  j["delta_ss"] = r.delta_ss;
  j["rank_c"] = r.rank_c;
  j["ss_exact"] = r.ss_exact;
  j["ss_not_worse"] = r.ss_not_worse;
  j["columns"] = r.columns;
  emit(dump(j), a.out, out);
  return kExitOk;
}

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  if (a.iters < 1) throw UsageError("--iters must be >= 1");
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  if (a.threads < 1) throw UsageError("--threads must be >= 1");
  if (a.prob.n > kDeskLimit && !a.force) {
    throw UsageError("bound needs n <= " + std::to_string(kDeskLimit) + " (use --force)");
  }
  const SSAttentionConfig cfg = make_config(a.prob.m, "iterative", a.iters, a.delta_mode, "omit", a.force);

  std::vector<std::optional<BoundInstance>> results(static_cast<std::size_t>(a.trials));
  std::vector<std::string> failures(results.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t t = begin; t < results.size(); t += step) {
      ProblemArgs pa = a.prob;
      pa.seed = a.prob.seed + t;
      try {
        results[t] = bound_instance(load_problem(pa), cfg);
      } catch (const NumericalError& e) {
        failures[t] = e.what();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::size_t(a.threads), results.size());
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }

  json j = base_report("bound");
  j["n"] = a.prob.n;
  j["m"] = a.prob.m;
  j["d"] = a.prob.d;
  j["iters"] = a.iters;
  json instances = json::array();
  bool any_failure = false;
  std::size_t respected = 0;
  for (std::size_t t = 0; t < results.size(); ++t) {
    json inst = {{"seed", a.prob.seed + t}};
    if (results[t]) {
      const BoundInstance& b = *results[t];
      inst["empirical_E"] = b.empirical_e;
      inst["bound_value"] = b.bound_value;
      inst["respected"] = b.respected;
      inst["delta"] = b.delta;
      inst["pinv_iterations"] = b.pinv_iterations;
      respected += b.respected ? 1 : 0;
    } else {
      inst["status"] = "numerical_failure";
      inst["message"] = failures[t];
      any_failure = true;
    }
    instances.push_back(std::move(inst));
  }
  j["instances"] = instances;
  j["respected_count"] = respected;
  if (results.size() == 1 && results[0]) {
    j["empirical_E"] = results[0]->empirical_e;
    j["bound_value"] = results[0]->bound_value;
    j["respected"] = results[0]->respected;
  }
  j["flags"] = any_failure ? json::array({"numerical_failure"}) : json::array();
  emit(dump(j), a.out, out);
  return any_failure ? kExitNumerical : kExitOk;
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const AttentionProblem p = random_problem(a.n, a.d, a.d, a.seed);
  const std::string ext = a.format == "mat1" ? ".mat1" : a.format == "csv" ? ".csv" : "";
  if (ext.empty()) throw UsageError("--format: expected csv or mat1");
  const MatrixFormat fmt = a.format == "mat1" ? MatrixFormat::mat1 : MatrixFormat::csv;
  json files = json::array();
  for (const auto& [name, m] : {std::pair{"q", &p.q}, std::pair{"k", &p.k}, std::pair{"v", &p.v}}) {
    const std::string path = a.out_prefix + "_" + name + ext;
    write_matrix(path, *m, fmt);
    files.push_back(path);
  }
  json j = base_report("gen");
  j["n"] = a.n;
  j["d"] = a.d;
  j["seed"] = a.seed;
  j["files"] = files;
  out << dump(j);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ssattn: landmark spectral-shifting attention and its baselines"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  ApproxArgs approx;
  auto* s_approx = app.add_subcommand("approx", "run one attention method and report errors");
  add_problem_options(s_approx, approx.prob, true);
  s_approx->add_option("--method", approx.method, "exact | nystrom | ss");
  s_approx->add_option("--pinv", approx.pinv, "svd | iterative");
  s_approx->add_option("--iters", approx.iters, "max pseudoinverse iterations");
  s_approx->add_option("--delta-mode", approx.delta_mode, "paper | fixed=<v> | oracle");
  s_approx->add_option("--diag-shift", approx.diag_shift, "omit | include");
  s_approx->add_flag("--materialize", approx.materialize, "compare the explicit n x n approximation with S");
  s_approx->add_flag("--force", approx.force, "lift the desk-scale limit");
  s_approx->add_option("--out", approx.out, "JSON report path (default stdout)");
  s_approx->add_option("--write-output", approx.write_output, "write the n x d_v output matrix");

  SpectrumArgs spec_args;
  spec_args.prob.d = 16;
  auto* s_spectrum = app.add_subcommand("spectrum", "write spectra of S and the approximation as CSV");
  add_problem_options(s_spectrum, spec_args.prob, true);
  s_spectrum->add_option("--delta-mode", spec_args.delta_mode, "paper | fixed=<v> | oracle");
  s_spectrum->add_option("--diag-shift", spec_args.diag_shift, "omit | include");
  s_spectrum->add_option("--pinv", spec_args.pinv, "svd | iterative");
  s_spectrum->add_option("--out-prefix", spec_args.out_prefix, "writes <prefix>_exact.csv and <prefix>_approx.csv");
  s_spectrum->add_flag("--force", spec_args.force, "lift the desk-scale limit");

  BenchArgs bench;
  bench.threads = default_threads();
  auto* s_bench = app.add_subcommand("bench", "time methods across sequence lengths");
  s_bench->add_option("--methods", bench.methods, "comma list of exact,nystrom,ss");
  s_bench->add_option("--n-list", bench.n_list, "ascending comma list of n");
  s_bench->add_option("--d", bench.d)->check(CLI::PositiveNumber);
  s_bench->add_option("--m", bench.m)->check(CLI::PositiveNumber);
  s_bench->add_option("--trials", bench.trials, "timed trials per point (>= 3)");
  s_bench->add_option("--threads", bench.threads, "worker threads for error studies; timing is single-threaded");
  s_bench->add_option("--seed", bench.seed);
  s_bench->add_flag("--force", bench.force, "allow the exact method above n = 16384");
  s_bench->add_option("--csv", bench.csv, "CSV path (default stdout)");
  s_bench->add_option("--json", bench.json_path, "JSON slopes path");

  Lemma1Args lemma;
  auto* s_lemma = app.add_subcommand("lemma1", "flat-tail exact-reconstruction check against Nystrom");
  s_lemma->add_option("--n", lemma.n)->check(CLI::PositiveNumber);
  s_lemma->add_option("--k", lemma.k)->check(CLI::NonNegativeNumber);
  s_lemma->add_option("--theta", lemma.theta);
  s_lemma->add_option("--c", lemma.c)->check(CLI::PositiveNumber);
  s_lemma->add_option("--seed", lemma.seed);
  s_lemma->add_option("--head-eigs", lemma.head_eigs, "comma list of k head eigenvalues");
  s_lemma->add_option("--out", lemma.out);

  BoundArgs bound;
  bound.threads = default_threads();
  auto* s_bound = app.add_subcommand("bound", "evaluate the iterative-pseudoinverse error bound");
  add_problem_options(s_bound, bound.prob, false);
  s_bound->add_option("--iters", bound.iters, "pseudoinverse iterations (>= 1)");
  s_bound->add_option("--delta-mode", bound.delta_mode, "paper | fixed=<v> | oracle");
  s_bound->add_option("--trials", bound.trials, "instances at seeds seed, seed+1, ...");
  s_bound->add_option("--threads", bound.threads, "parallel instances");
  s_bound->add_flag("--force", bound.force, "lift the desk-scale limit");
  s_bound->add_option("--out", bound.out);

  GenArgs gen;
  auto* s_gen = app.add_subcommand("gen", "write random Q, K, V matrices");
  s_gen->add_option("--n", gen.n)->check(CLI::PositiveNumber);
  s_gen->add_option("--d", gen.d)->check(CLI::PositiveNumber);
  s_gen->add_option("--seed", gen.seed);
  s_gen->add_option("--out-prefix", gen.out_prefix);
  s_gen->add_option("--format", gen.format, "csv | mat1");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_approx) return cmd_approx(approx, out);
    if (*s_spectrum) return cmd_spectrum(spec_args, out);
    if (*s_bench) return cmd_bench(bench, out, err);
    if (*s_lemma) return cmd_lemma1(lemma, out);
    if (*s_bound) return cmd_bound(bound, out);
    if (*s_gen) return cmd_gen(gen, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace ssattn::cli
