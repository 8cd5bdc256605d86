// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <ssattn/analysis.hpp>
#include <ssattn/matrix_io.hpp>
#include <ssattn/nystrom.hpp>
#include <ssattn/random.hpp>
#include <ssattn/spectral_shift.hpp>
#include <ssattn/ss_attention.hpp>

#include <cli.hpp>

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "alloc_tracker.hpp"
#include "oracles.hpp"

using namespace ssattn;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_frob(const DenseMatrix& a, const DenseMatrix& ref) { return (a - ref).norm() / ref.norm(); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "ssattn_acceptance";
  fs::create_directories(dir);
  return dir;
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

Outcome nystrom_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int used = 0;
  for (std::uint64_t seed = 0; used < 20; ++seed) {
    const Index n = 16 + Index(seed % 8) * 16;  // 16 .. 128
    const Index d = 8 + Index(seed % 4) * 8;    // 8 .. 32
    const AttentionProblem p = random_problem(n, d, d, 1000 + seed);
    const LandmarkSketch sk = build_sketch(p, n);
    if (oracle::condition_number(sk.a_s) > 1e10) continue;
    worst = std::max(worst, rel_frob(nystrom_attention(p, n), exact_attention(p)));
    ++used;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 1e-8 && secs < 5.0, "max rel err " + fmt(worst) + ", " + fmt(secs) + " s"};
}

Outcome ss_reduction() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 64 + Index(seed % 4) * 64;
    const AttentionProblem p = random_problem(n, 16, 16, 2000 + seed);
    SSAttentionConfig cfg;
    cfg.m = 16;
    cfg.delta_mode = DeltaMode::fixed;
    cfg.fixed_delta = 0.0;
    cfg.diag_shift = DiagShift::omit;
    worst = std::max(worst, rel_frob(ss_attention(p, cfg), nystrom_attention(p, cfg.m)));
  }
  return {worst <= 1e-10, "max rel diff " + fmt(worst)};
}

Outcome svd_form_equivalence() {
  Rng rng(3000);
  double worst = 0.0, worst_cond = 0.0;
  int probes = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AttentionProblem p = random_problem(64, 16, 8, 3000 + seed);
    SSAttentionConfig cfg;
    cfg.m = 16;
    cfg.delta_mode = seed % 2 ? DeltaMode::fixed : DeltaMode::paper_formula;
    cfg.fixed_delta = 0.05;
    cfg.diag_shift = seed % 3 == 0 ? DiagShift::include : DiagShift::omit;
    const double cond = oracle::condition_number(build_sketch(p, cfg.m).a_s);
    if (cond > 1e8) return {false, "seed " + std::to_string(seed) + " has cond(A_s) " + fmt(cond)};
    worst_cond = std::max(worst_cond, cond);
    const DenseMatrix mat = ss_attention_materialized(p, cfg);
    std::uniform_int_distribution<Index> idx(0, p.n() - 1);
    for (int t = 0; t < 5; ++t, ++probes) {
      const Index i = idx(rng), j = idx(rng);
      worst = std::max(worst, std::abs(ss_entry_svd_form(p, cfg, i, j) - mat(i, j)));
    }
  }
  return {worst <= 1e-9 && probes == 50,
          std::to_string(probes) + " probes, max |diff| " + fmt(worst) + ", max cond " + fmt(worst_cond)};
}

Outcome flat_tail_reconstruction() {
  int instances = 0, ok = 0;
  double worst_rel = 0.0, min_gap = INFINITY;
  for (Index k : {1, 4, 8}) {
    for (double theta : {0.1, 0.5, 1.0}) {
      const FlatTailSpec spec{256, k, theta, default_head_eigs(k, theta), std::uint64_t(4000 + k)};
      const Theorem1Report r = theorem1_check(spec, 2 * k);
      ++instances;
      worst_rel = std::max(worst_rel, r.ss_error / r.k_norm);
      min_gap = std::min(min_gap, r.nystrom_error - r.ss_error);
      if (r.ss_error <= 1e-6 * r.k_norm && r.nystrom_error > r.ss_error) ++ok;
    }
  }
  return {ok == instances, std::to_string(ok) + "/" + std::to_string(instances) + " instances, max ss rel err " +
                               fmt(worst_rel) + ", min nystrom-ss gap " + fmt(min_gap)};
}

Outcome trace_degeneracy() {
  Rng rng(5000);
  std::uniform_int_distribution<int> dim(2, 64);
  double worst = 0.0;
  int deficient = 0;
  for (int t = 0; t < 200; ++t) {
    const Index c = dim(rng);
    DenseMatrix a;
    switch (t % 4) {
      case 0: {
        const DenseMatrix g = oracle::gaussian(c, c, rng);
        a = 0.5 * (g + g.transpose());
        break;
      }
      case 1: a = oracle::gaussian(c, c, rng); break;
      case 2: a = oracle::row_stochastic(c, rng); break;
      default: a = oracle::rank_deficient(c, c, std::max<Index>(1, c / 2), rng); break;
    }
    const SSFactors f = ss_factors_modified(a);
    deficient += f.full_rank_convention ? 0 : 1;
    worst = std::max(worst, std::abs(f.delta_ss) / (std::abs(a.trace()) + 1.0));
  }
  return {worst <= 1e-8, "max |delta|/(|tr|+1) " + fmt(worst) + ", rank-deficient " + std::to_string(deficient) + "/200"};
}

Outcome iterative_pinv() {
  Rng rng(6000);
  std::uniform_int_distribution<int> dim(2, 64);
  int used = 0, ok = 0, max_iters = 0, non_monotone = 0;
  double worst = 0.0;
  while (used < 50) {
    const Index c = dim(rng);
    DenseMatrix a;
    switch (used % 3) {
      case 0: a = oracle::gaussian(c, c, rng); break;
      case 1: a = oracle::diagonally_dominant(c, rng); break;
      default: a = oracle::row_stochastic(c, rng); break;
    }
    if (oracle::condition_number(a) > 1e6) continue;
    ++used;
    PinvIterOptions opts;
    opts.max_iters = 20;
    opts.record_history = true;
    PinvIterResult r;
    try {
      r = pinv_iterative(a, opts);
    } catch (const NumericalError&) {
      continue;
    }
    const DenseMatrix ref = pinv_svd(a);
    const double err = (r.z - ref).norm() / ref.norm();
    worst = std::max(worst, err);
    max_iters = std::max(max_iters, r.iterations);
    // Increases at the rounding floor are not counted.
    bool monotone = true;
    for (std::size_t j = 3; j + 1 < r.history.size(); ++j) {
      if (r.history[j + 1] > r.history[j] && r.history[j + 1] > 1e-12) monotone = false;
    }
    non_monotone += monotone ? 0 : 1;
    if (err <= 1e-6 && r.iterations <= 20 && monotone) ++ok;
  }
  return {ok == 50, std::to_string(ok) + "/50 matrices, max rel err " + fmt(worst) + ", max iterations " +
                        std::to_string(max_iters) + ", non-monotone " + std::to_string(non_monotone)};
}

Outcome error_bound_records() {
  std::string out, err;
  const int code = cli({"bound", "--n", "256", "--m", "32", "--d", "32", "--seed", "7000", "--trials", "20"}, &out, &err);
  if (code != 0) return {false, "bound exited " + std::to_string(code) + ": " + err};
  const json j = json::parse(out);
  int finite = 0, recorded = 0;
  for (const auto& inst : j["instances"]) {
    if (inst.contains("empirical_E") && std::isfinite(inst["empirical_E"].get<double>()) &&
        std::isfinite(inst["bound_value"].get<double>())) {
      ++finite;
    }
    if (inst.contains("respected") && inst["respected"].is_boolean()) ++recorded;
  }
  return {finite == 20 && recorded == 20 && j["instances"].size() == 20,
          std::to_string(finite) + "/20 finite, respected " + std::to_string(j["respected_count"].get<int>()) +
              "/20 (recorded, not asserted)"};
}

Outcome spectrum_claim() {
  const Index n = 256, m = 32;
  int ok = 0;
  Index max_rank_omit = 0, min_rank_incl = n;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const AttentionProblem p = random_problem(n, 32, 32, 8000 + seed);
    SSAttentionConfig cfg;
    cfg.m = m;
    const Index r_omit = numerical_rank(ss_attention_materialized(p, cfg));
    cfg.delta_mode = DeltaMode::fixed;
    cfg.fixed_delta = 0.1;
    cfg.diag_shift = DiagShift::include;
    const Index r_incl = numerical_rank(ss_attention_materialized(p, cfg));
    max_rank_omit = std::max(max_rank_omit, r_omit);
    min_rank_incl = std::min(min_rank_incl, r_incl);
    if (r_omit <= m && r_incl == n) ++ok;
  }
  const fs::path prefix = scratch_dir() / "spectrum";
  std::string err;
  const int code = cli({"spectrum", "--n", "256", "--m", "32", "--d", "32", "--seed", "8000", "--delta-mode", "fixed=0.1",
                        "--diag-shift", "include", "--out-prefix", prefix.string()},
                       nullptr, &err);
  bool csv_ok = false;
  double ratio = 0.0;
  if (code == 0) {
    std::ifstream f(prefix.string() + "_approx.csv");
    std::string line;
    std::getline(f, line);
    std::vector<double> values;
    while (std::getline(f, line)) values.push_back(std::stod(line.substr(line.find(',') + 1)));
    if (values.size() == std::size_t(n)) {
      ratio = values[std::size_t(m)] / values[0];  // index m+1 in the 1-based CSV
      csv_ok = ratio > 1e-10;
    }
  }
  return {ok == 10 && csv_ok, std::to_string(ok) + "/10 seeds, max rank omit " + std::to_string(max_rank_omit) +
                                  ", min rank include " + std::to_string(min_rank_incl) + ", csv value[m+1]/value[1] " +
                                  fmt(ratio)};
}

Outcome linear_scaling() {
  ScalingOptions ss;
  ss.d_k = 64;
  ss.m = 64;
  ss.n_list = {2048, 4096, 8192, 16384};
  ss.methods = {Method::ss};
  ss.seed = 9000;
  const ScalingResult rs = scaling_study(ss);

  ScalingOptions ex = ss;
  ex.n_list = {1024, 2048, 4096};
  ex.methods = {Method::exact};
  const ScalingResult re = scaling_study(ex);

  const double s_ss = rs.fits[0].slope, s_ex = re.fits[0].slope;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < rs.rows.size(); ++i) {
    worst_ratio = std::max(worst_ratio, rs.rows[i].median_seconds / rs.rows[i - 1].median_seconds);
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << "ss slope " << s_ss << ", exact slope " << s_ex
     << ", max ss doubling ratio " << worst_ratio << ", ss medians (s)";
  for (const ScalingRow& r : rs.rows) os << ' ' << r.n << ':' << std::setprecision(4) << r.median_seconds;
  return {s_ss >= 0.8 && s_ss <= 1.3 && s_ex >= 1.7 && s_ex <= 2.3, os.str()};
}

Outcome memory_contract() {
  const Index n = 8192, m = 64, dv = 64;
  const AttentionProblem p = random_problem(n, 64, dv, 10000);
  SSAttentionConfig cfg = default_bench_config();
  cfg.m = m;
  const Index budget = 3 * (n * m + m * m + n * dv);

  AllocationAudit audit;
  const std::size_t base = alloc_tracker::current_bytes();
  alloc_tracker::reset_peak();
  {
    const SSAttentionResult r = ss_attention_run(p, cfg, &audit);
    if (!r.output.allFinite()) return {false, "non-finite output"};
  }
  const std::size_t heap_peak = alloc_tracker::peak_bytes() - base;
  const double heap_slots = double(heap_peak) / sizeof(double);

  return {audit.peak() <= budget && heap_slots <= double(budget),
          "audit peak " + std::to_string(audit.peak()) + " slots, heap peak " + std::to_string(Index(heap_slots)) +
              " slots, budget " + std::to_string(budget) + ", n^2 = " + std::to_string(n * n)};
}

Outcome io_round_trips() {
  Rng rng(11000);
  const fs::path dir = scratch_dir();
  DenseMatrix m = 1e2 * oracle::gaussian(33, 17, rng);
  m(0, 0) = -0.0;
  m(1, 1) = 5e-324;

  write_matrix((dir / "rt.mat1").string(), m);
  const DenseMatrix b = read_matrix((dir / "rt.mat1").string());
  const bool mat1_ok = b.rows() == m.rows() && b.cols() == m.cols() &&
                       std::memcmp(b.data(), m.data(), sizeof(double) * std::size_t(m.size())) == 0;

  const DenseMatrix small = oracle::gaussian(20, 9, rng);
  write_matrix((dir / "rt.csv").string(), small);
  const double csv_err = (read_matrix((dir / "rt.csv").string()) - small).cwiseAbs().maxCoeff();

  // Corrupted inputs through the command line surface.
  if (cli({"gen", "--n", "8", "--d", "2", "--seed", "1", "--out-prefix", (dir / "good").string(), "--format", "mat1"}) != 0) {
    return {false, "gen failed"};
  }
  const std::string k = (dir / "good_k.mat1").string(), v = (dir / "good_v.mat1").string();
  const std::string q_trunc = (dir / "trunc.mat1").string(), q_magic = (dir / "magic.mat1").string();
  fs::copy_file(dir / "good_q.mat1", q_trunc, fs::copy_options::overwrite_existing);
  fs::resize_file(q_trunc, fs::file_size(q_trunc) - 4);
  fs::copy_file(dir / "good_q.mat1", q_magic, fs::copy_options::overwrite_existing);
  {
    std::fstream f(q_magic, std::ios::in | std::ios::out | std::ios::binary);
    f.write("MATX", 4);
  }
  const std::string ragged = (dir / "ragged.csv").string();
  {
    std::ofstream f(ragged);
    f << "1,2\n3,4\n5\n6,7\n";
  }
  int corrupt_ok = 0;
  for (const auto& [path, needle] : {std::pair{q_trunc, std::string("offset")}, std::pair{q_magic, std::string("offset")},
                                     std::pair{ragged, std::string("line 3")}}) {
    std::string err;
    const int code = cli({"approx", "--m", "2", "--q", path, "--k", k, "--v", v}, nullptr, &err);
    if (code == 4 && err.find(needle) != std::string::npos) ++corrupt_ok;
  }
  return {mat1_ok && csv_err <= 1e-15 && corrupt_ok == 3,
          std::string("mat1 ") + (mat1_ok ? "bit-exact" : "MISMATCH") + ", csv max err " + fmt(csv_err) +
              ", corrupted files " + std::to_string(corrupt_ok) + "/3 exit 4 with location"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"C1 nystrom exactness at m = n", nystrom_exactness},
      {"C2 ss reduces to nystrom with fixed zero shift", ss_reduction},
      {"C3 svd entry form matches materialized", svd_form_equivalence},
      {"C4 flat-tail exact reconstruction beats nystrom", flat_tail_reconstruction},
      {"C5 sketched shift formula collapses to zero", trace_degeneracy},
      {"C6 iterative pseudoinverse convergence", iterative_pinv},
      {"C7 error bound evaluated and recorded", error_bound_records},
      {"C8 diagonal shift restores full spectrum", spectrum_claim},
      {"C9 linear vs quadratic runtime scaling", linear_scaling},
      {"C10 working set stays O(nc + c^2 + n d_v)", memory_contract},
      {"C11 matrix file round-trips and corruption", io_round_trips},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " -- " << o.detail << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (11 - failed) << "/11" << std::endl;
  return failed ? 1 : 0;
}
