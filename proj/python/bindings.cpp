#include <ssattn/analysis.hpp>
#include <ssattn/landmarks.hpp>
#include <ssattn/matcore.hpp>
#include <ssattn/nystrom.hpp>
#include <ssattn/random.hpp>
#include <ssattn/spectral_shift.hpp>
#include <ssattn/ss_attention.hpp>

#include <cli.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <tuple>

namespace py = pybind11;
using namespace ssattn;

namespace {

AttentionProblem make_problem(const DenseMatrix& q, const DenseMatrix& k, const DenseMatrix& v) {
  AttentionProblem p{q, k, v};
  p.validate();
  return p;
}

PinvChoice make_pinv(const std::string& mode, int max_iters, double tol) {
  PinvChoice c;
  c.mode = parse_pinv_mode(mode);
  c.iter.max_iters = max_iters;
  c.iter.tol = tol;
  return c;
}

SSAttentionConfig make_ss_config(Index m, const std::string& pinv, const std::string& delta_mode,
                                 double delta, bool diag_shift, int max_iters, double tol) {
  SSAttentionConfig cfg;
  cfg.m = m;
  cfg.pinv = make_pinv(pinv, max_iters, tol);
  if (delta_mode == "paper_formula" || delta_mode == "formula") {
    cfg.delta_mode = DeltaMode::paper_formula;
  } else if (delta_mode == "fixed") {
    cfg.delta_mode = DeltaMode::fixed;
    cfg.fixed_delta = delta;
  } else if (delta_mode == "full_oracle") {
    cfg.delta_mode = DeltaMode::full_oracle;
  } else {
    throw UsageError("unknown delta mode '" + delta_mode + "'");
  }
  cfg.diag_shift = diag_shift ? DiagShift::include : DiagShift::omit;
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Landmark spectral-shifting attention (C++ core)";

  // Library errors surface as subclasses of familiar builtins.
  py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(mod, "IoError", PyExc_OSError);

  mod.def("exact_scores",
          [](const DenseMatrix& q, const DenseMatrix& k) {
            return exact_scores(make_problem(q, k, DenseMatrix::Zero(q.rows(), 1)));
          },
          py::arg("q"), py::arg("k"), "Row-softmax of Q K^T / sqrt(d_k), n x n.");

  mod.def("exact_attention",
          [](const DenseMatrix& q, const DenseMatrix& k, const DenseMatrix& v) {
            return exact_attention(make_problem(q, k, v));
          },
          py::arg("q"), py::arg("k"), py::arg("v"));

  mod.def("nystrom_attention",
          [](const DenseMatrix& q, const DenseMatrix& k, const DenseMatrix& v, Index m,
             const std::string& pinv, int max_iters, double tol) {
            return nystrom_attention(make_problem(q, k, v), m, make_pinv(pinv, max_iters, tol));
          },
          py::arg("q"), py::arg("k"), py::arg("v"), py::arg("m"), py::arg("pinv") = "svd",
          py::arg("max_iters") = 30, py::arg("tol") = 1e-10);

  mod.def("ss_attention",
          [](const DenseMatrix& q, const DenseMatrix& k, const DenseMatrix& v, Index m,
             const std::string& pinv, const std::string& delta_mode, double delta, bool diag_shift,
             int max_iters, double tol) {
            const SSAttentionResult r = ss_attention_run(
                make_problem(q, k, v), make_ss_config(m, pinv, delta_mode, delta, diag_shift, max_iters, tol));
            py::dict info;
            info["delta"] = r.delta;
            info["rank_a_s"] = r.rank_a_s;
            info["pinv_iterations"] = r.pinv.iterations;
            info["pinv_residual"] = r.pinv.residual;
            info["flags"] = r.flags;
            return std::make_tuple(r.output, info);
          },
          py::arg("q"), py::arg("k"), py::arg("v"), py::arg("m"), py::arg("pinv") = "svd",
          py::arg("delta_mode") = "paper_formula", py::arg("delta") = 0.0, py::arg("diag_shift") = false,
          py::arg("max_iters") = 30, py::arg("tol") = 1e-10,
          "Returns (output, info) where info holds delta, rank and pinv diagnostics.");

  mod.def("ss_attention_materialized",
          [](const DenseMatrix& q, const DenseMatrix& k, const DenseMatrix& v, Index m,
             const std::string& pinv, const std::string& delta_mode, double delta, bool diag_shift) {
            return ss_attention_materialized(make_problem(q, k, v),
                                             make_ss_config(m, pinv, delta_mode, delta, diag_shift, 30, 1e-10));
          },
          py::arg("q"), py::arg("k"), py::arg("v"), py::arg("m"), py::arg("pinv") = "svd",
          py::arg("delta_mode") = "paper_formula", py::arg("delta") = 0.0, py::arg("diag_shift") = false);

  mod.def("segment_means", [](const DenseMatrix& x, Index m) { return segment_means(x, m); },
          py::arg("x"), py::arg("m"));

  mod.def("row_softmax", &row_softmax, py::arg("m"));
  mod.def("pinv_svd", &pinv_svd, py::arg("m"), py::arg("tol") = kDefaultPinvTol);

  mod.def("pinv_iterative",
          [](const DenseMatrix& a, int max_iters, double tol) {
            PinvIterOptions opts;
            opts.max_iters = max_iters;
            opts.tol = tol;
            opts.record_history = true;
            const PinvIterResult r = pinv_iterative(a, opts);
            py::dict info;
            info["iterations"] = r.iterations;
            info["residual"] = r.residual;
            info["converged"] = r.converged;
            info["history"] = r.history;
            return std::make_tuple(r.z, info);
          },
          py::arg("a"), py::arg("max_iters") = 30, py::arg("tol") = 1e-10,
          "Returns (Z, info) with the per-iteration residual history.");

  mod.def("numerical_rank", &numerical_rank, py::arg("m"), py::arg("tol") = kDefaultRankTol);

  mod.def("spectrum",
          [](const DenseMatrix& m) {
            const Spectrum s = spectrum(m);
            return std::make_tuple(s.values, s.cumulative);
          },
          py::arg("m"), "Returns (values, cumulative) sorted by descending magnitude.");

  mod.def("error_bound", &error_bound, py::arg("a_s"), py::arg("delta"), py::arg("z"));

  mod.def("theorem1_check",
          [](Index n, Index k, double theta, Index c, std::uint64_t seed) {
            FlatTailSpec spec;
            spec.n = n;
            spec.k = k;
            spec.theta = theta;
            spec.head_eigs = default_head_eigs(k, theta);
            spec.seed = seed;
            const Theorem1Report r = theorem1_check(spec, c);
            py::dict out;
            out["k_norm"] = r.k_norm;
            out["ss_error"] = r.ss_error;
            out["nystrom_error"] = r.nystrom_error;
            out["delta_ss"] = r.delta_ss;
            out["rank_c"] = r.rank_c;
            out["ss_exact"] = r.ss_exact;
            out["ss_not_worse"] = r.ss_not_worse;
            out["columns"] = r.columns;
            return out;
          },
          py::arg("n"), py::arg("k"), py::arg("theta"), py::arg("c"), py::arg("seed") = 0);

  mod.def("random_problem",
          [](Index n, Index d, Index d_v, std::uint64_t seed) {
            const AttentionProblem p = random_problem(n, d, d_v, seed);
            return std::make_tuple(p.q, p.k, p.v);
          },
          py::arg("n"), py::arg("d"), py::arg("d_v"), py::arg("seed") = 0);

  mod.def("run_cli",
          [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
              py::gil_scoped_release release;
              code = cli::run(args, out, err);
            }
            return std::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line tool in process; returns (exit_code, stdout, stderr).");
}
