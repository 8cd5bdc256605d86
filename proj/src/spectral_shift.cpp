#include <ssattn/nystrom.hpp>
#include <ssattn/random.hpp>
#include <ssattn/spectral_shift.hpp>

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ssattn {

namespace {

constexpr double kSymmetryTol = 1e-10;

}  // namespace

void ColumnSelection::validate(Index n) const {
  if (indices.empty()) throw UsageError("column selection is empty");
  std::unordered_set<Index> seen;
  for (Index i : indices) {
    if (i < 0 || i >= n) {
      throw UsageError("column index " + std::to_string(i) + " out of range [0, " + std::to_string(n) + ")");
    }
    if (!seen.insert(i).second) throw UsageError("duplicate column index " + std::to_string(i));
  }
}

DenseMatrix ss_columns(const DenseMatrix& k_mat, const ColumnSelection& sel, std::optional<double> shift) {
  if (k_mat.rows() != k_mat.cols()) throw UsageError("ss_columns: matrix must be square, got " + shape_str(k_mat));
  sel.validate(k_mat.rows());
  DenseMatrix c = k_mat(Eigen::all, sel.indices);
  if (shift) {
    for (Index j = 0; j < sel.size(); ++j) c(sel.indices[std::size_t(j)], j) -= *shift;
  }
  return c;
}

ShiftDelta shift_delta_full(const DenseMatrix& k_mat, const DenseMatrix& c_tilde, double rank_tol) {
  if (k_mat.rows() != k_mat.cols() || c_tilde.rows() != k_mat.rows()) {
    throw UsageError("shift_delta_full: K is " + shape_str(k_mat) + ", C is " + shape_str(c_tilde));
  }
  const Index n = k_mat.rows();
  ShiftDelta out;
  out.rank = numerical_rank(c_tilde, rank_tol);
  if (out.rank >= n) {
    out.full_rank_convention = true;
    return out;
  }
  const DenseMatrix c_pinv = pinv_svd(c_tilde);
  const double projected_trace = (c_pinv * (k_mat * c_tilde)).trace();
  out.delta = (k_mat.trace() - projected_trace) / double(n - out.rank);
  return out;
}

SSFactors ss_factors_full(const DenseMatrix& k_mat, const ColumnSelection& sel, std::optional<double> shift,
                          double rank_tol) {
  if (!is_symmetric(k_mat, kSymmetryTol)) {
    throw UsageError("ss_factors_full: matrix is not symmetric within " + std::to_string(kSymmetryTol));
  }
  require_finite(k_mat, "ss_factors_full");
  if (shift && !std::isfinite(*shift)) throw UsageError("ss_factors_full: shift must be finite");

  const DenseMatrix c_tilde = ss_columns(k_mat, sel, shift);
  const ShiftDelta sd = shift_delta_full(k_mat, c_tilde, rank_tol);
  const DenseMatrix c_pinv = pinv_svd(c_tilde);

  SSFactors f;
  f.delta_ss = sd.delta;
  f.rank_a = sd.rank;
  f.full_rank_convention = sd.full_rank_convention;
  f.u_ss = c_pinv * k_mat * c_pinv.transpose();
  if (!sd.full_rank_convention) f.u_ss -= sd.delta * pinv_svd(c_tilde.transpose() * c_tilde);
  f.a_s = c_tilde(sel.indices, Eigen::all);
  return f;
}

SSFactors ss_factors_modified(const DenseMatrix& a_s, double rank_tol) {
  if (a_s.rows() != a_s.cols()) throw UsageError("ss_factors_modified: sketch must be square, got " + shape_str(a_s));
  require_nonempty(a_s, "ss_factors_modified");
  require_finite(a_s, "ss_factors_modified");

  const Index c = a_s.rows();
  SSFactors f;
  f.a_s = a_s;
  // One factorization serves both the rank and the pseudoinverse.
  const SvdFactors factors = svd(a_s);
  f.rank_a = rank_from_sigma(factors.sigma, rank_tol);
  const DenseMatrix a_pinv = pinv_from_svd(factors);
  if (f.rank_a >= c) {
    f.full_rank_convention = true;
    f.delta_ss = 0.0;
    f.u_ss = a_pinv;
    return f;
  }
  const DenseMatrix a_sq = a_s * a_s;
  f.delta_ss = (a_s.trace() - (a_pinv * a_sq).trace()) / double(c - f.rank_a);
  f.u_ss = a_pinv - f.delta_ss * pinv_svd(a_sq);
  return f;
}

DenseMatrix ss_reconstruct(const DenseMatrix& c_mat, const SSFactors& f, Index n) {
  if (c_mat.rows() != n || c_mat.cols() != f.u_ss.rows() || f.u_ss.rows() != f.u_ss.cols()) {
    throw UsageError("ss_reconstruct: C is " + shape_str(c_mat) + ", U is " + shape_str(f.u_ss) +
                     ", n = " + std::to_string(n));
  }
  DenseMatrix out = c_mat * (f.u_ss * c_mat.transpose());
  out.diagonal().array() += f.delta_ss;
  return out;
}

double ss_objective(const DenseMatrix& k_mat, const ColumnSelection& sel, const DenseMatrix& u, double delta,
                    ObjectiveMode mode, std::optional<double> shift) {
  const DenseMatrix c_tilde = ss_columns(k_mat, sel, shift);
  if (u.rows() != c_tilde.cols() || u.cols() != c_tilde.cols()) {
    throw UsageError("ss_objective: U is " + shape_str(u) + " for " + std::to_string(c_tilde.cols()) + " columns");
  }
  if (mode == ObjectiveMode::full) {
    DenseMatrix r = k_mat - c_tilde * (u * c_tilde.transpose());
    r.diagonal().array() -= delta;
    return r.norm();
  }
  // P^T (K - C U C^T - delta I) P only touches the selected rows of C.
  const DenseMatrix c_rows = c_tilde(sel.indices, Eigen::all);
  DenseMatrix r = k_mat(sel.indices, sel.indices) - c_rows * (u * c_rows.transpose());
  r.diagonal().array() -= delta;
  return r.norm();
}

double ss_objective(const DenseMatrix& k_mat, const ColumnSelection& sel, const SSFactors& f, ObjectiveMode mode,
                    std::optional<double> shift) {
  return ss_objective(k_mat, sel, f.u_ss, f.delta_ss, mode, shift);
}

void FlatTailSpec::validate() const {
  if (n < 1) throw UsageError("flat-tail spec: n must be >= 1");
  if (k < 0 || k > n) throw UsageError("flat-tail spec: k must lie in [0, n]");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw UsageError("flat-tail spec: theta must be finite and > 0");
  if (static_cast<Index>(head_eigs.size()) != k) {
    throw UsageError("flat-tail spec: expected " + std::to_string(k) + " head eigenvalues, got " +
                     std::to_string(head_eigs.size()));
  }
  for (double e : head_eigs) {
    if (!std::isfinite(e) || !(e > theta)) {
      throw UsageError("flat-tail spec: head eigenvalue " + std::to_string(e) +
                       " must be strictly greater than theta = " + std::to_string(theta));
    }
  }
}

std::vector<double> default_head_eigs(Index k, double theta) {
  const double hi = std::max(10.0, 2.0 * theta);
  std::vector<double> eigs(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) eigs[std::size_t(i)] = theta + (hi - theta) * double(k - i) / double(k);
  return eigs;
}

DenseMatrix flat_tail_spsd(const FlatTailSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const DenseMatrix v = random_orthogonal(spec.n, rng);
  Vector eigs = Vector::Constant(spec.n, spec.theta);
  for (Index i = 0; i < spec.k; ++i) eigs(i) = spec.head_eigs[std::size_t(i)];
  DenseMatrix k_mat = v * eigs.asDiagonal() * v.transpose();
  const DenseMatrix sym = 0.5 * (k_mat + k_mat.transpose());
  return sym;
}

ColumnSelection pivoted_columns(const DenseMatrix& m, Index c) {
  if (c < 1 || c > m.cols()) {
    throw UsageError("pivoted_columns: c = " + std::to_string(c) + " outside [1, " + std::to_string(m.cols()) + "]");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(m)};
  const auto& perm = qr.colsPermutation().indices();
  ColumnSelection sel;
  sel.indices.assign(perm.data(), perm.data() + c);
  return sel;
}

Theorem1Report theorem1_check(const FlatTailSpec& spec, Index c) {
  spec.validate();
  if (c < spec.k) {
    throw UsageError("theorem1_check: c = " + std::to_string(c) + " is below the head rank k = " +
                     std::to_string(spec.k));
  }
  if (c < 1 || c > spec.n) throw UsageError("theorem1_check: c must lie in [1, n]");

  const DenseMatrix k_mat = flat_tail_spsd(spec);
  DenseMatrix k_shifted = k_mat;
  k_shifted.diagonal().array() -= spec.theta;
  const ColumnSelection sel = pivoted_columns(k_shifted, c);

  const SSFactors f = ss_factors_full(k_mat, sel, spec.theta);
  const DenseMatrix recon = ss_reconstruct(ss_columns(k_mat, sel, spec.theta), f, spec.n);

  Theorem1Report rep;
  rep.n = spec.n;
  rep.k = spec.k;
  rep.c = c;
  rep.theta = spec.theta;
  rep.k_norm = k_mat.norm();
  rep.ss_error = (k_mat - recon).norm();
  rep.nystrom_error = (k_mat - nystrom_raw(k_mat, sel.indices)).norm();
  rep.delta_ss = f.delta_ss;
  rep.rank_c = f.rank_a;
  rep.ss_exact = rep.ss_error <= 1e-6 * rep.k_norm;
  rep.ss_not_worse = rep.ss_error <= rep.nystrom_error;
  rep.columns = sel.indices;
  return rep;
}

}  // namespace ssattn
