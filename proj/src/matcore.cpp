#include <ssattn/matcore.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace ssattn {

void require_finite(const DenseMatrix& m, const char* what) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        std::ostringstream os;
        os << what << ": non-finite entry " << m(i, j) << " at (" << i << ", " << j << ")";
        throw UsageError(os.str());
      }
    }
  }
}

void require_nonempty(const DenseMatrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw UsageError(std::string(what) + ": matrix must have at least one row and column, got " +
                     shape_str(m));
  }
}

std::string shape_str(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::frobenius:
      return "frobenius";
    case NormKind::inf_induced:
      return "inf_induced";
    case NormKind::spectral:
      return "spectral";
  }
  return "?";
}

NormKind parse_norm_kind(const std::string& text) {
  if (text == "frobenius" || text == "fro") return NormKind::frobenius;
  if (text == "inf_induced" || text == "inf") return NormKind::inf_induced;
  if (text == "spectral" || text == "2") return NormKind::spectral;
  throw UsageError("unknown norm kind '" + text + "'");
}

DenseMatrix identity(Index n) { return DenseMatrix::Identity(n, n); }

SvdFactors svd(const DenseMatrix& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
  return SvdFactors{solver.matrixU(), solver.singularValues(), solver.matrixV().transpose()};
}

namespace {

Vector singular_values(const DenseMatrix& m) {
  if (m.size() == 0) return Vector();
  Eigen::BDCSVD<Eigen::MatrixXd> solver{Eigen::MatrixXd(m)};
  return solver.singularValues();
}

}  // namespace

void row_softmax_inplace(DenseMatrix& m) {
  if (m.cols() < 1) throw UsageError("row_softmax: matrix needs at least one column");
  require_finite(m, "row_softmax");
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    const double mx = row.maxCoeff();
    row = (row.array() - mx).exp().matrix();
    row /= row.sum();
  }
}

DenseMatrix row_softmax(const DenseMatrix& m) {
  DenseMatrix out = m;
  row_softmax_inplace(out);
  return out;
}

DenseMatrix pinv_svd(const DenseMatrix& m, double tol) {
  if (!(tol > 0.0)) throw UsageError("pinv_svd: tol must be positive");
  require_finite(m, "pinv_svd");
  if (m.size() == 0) return DenseMatrix::Zero(m.cols(), m.rows());
  return pinv_from_svd(svd(m), tol);
}

Index rank_from_sigma(const Vector& sigma, double tol) {
  if (!(tol > 0.0)) throw UsageError("rank tolerance must be positive");
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  return (sigma.array() > tol * sigma(0)).count();
}

DenseMatrix pinv_from_svd(const SvdFactors& f, double tol) {
  if (!(tol > 0.0)) throw UsageError("pinv_svd: tol must be positive");
  // Retained singular values lead the nonincreasing sigma.
  const Index r = rank_from_sigma(f.sigma, tol);
  if (r == 0) return DenseMatrix::Zero(f.vt.cols(), f.u.rows());
  const Vector inv = f.sigma.head(r).cwiseInverse();
  return f.vt.topRows(r).transpose() * inv.asDiagonal() * f.u.leftCols(r).transpose();
}

double norm_one_induced(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double norm(const DenseMatrix& m, NormKind kind) {
  if (m.size() == 0) return 0.0;
  switch (kind) {
    case NormKind::frobenius:
      return m.norm();
    case NormKind::inf_induced:
      return m.cwiseAbs().rowwise().sum().maxCoeff();
    case NormKind::spectral: {
      const Vector s = singular_values(m);
      return s.size() == 0 ? 0.0 : s(0);
    }
  }
  return 0.0;
}

PinvIterResult pinv_iterative(const DenseMatrix& a, const PinvIterOptions& opts) {
  if (a.rows() != a.cols()) {
    throw UsageError("pinv_iterative: matrix must be square, got " + shape_str(a));
  }
  if (opts.max_iters < 1) throw UsageError("pinv_iterative: max_iters must be >= 1");
  if (!(opts.tol > 0.0)) throw UsageError("pinv_iterative: tol must be positive");
  require_nonempty(a, "pinv_iterative");
  require_finite(a, "pinv_iterative");

  const Index c = a.rows();
  PinvIterResult res;
  const double a_fro = a.norm();
  if (a_fro == 0.0) {
    res.z = DenseMatrix::Zero(c, c);
    res.converged = true;
    return res;
  }

  const double scale = norm_one_induced(a) * norm(a, NormKind::inf_induced);
  DenseMatrix z = a.transpose() / scale;
  DenseMatrix x = a * z;

  if (opts.check_initial_condition) {
    const DenseMatrix proj = a * pinv_svd(a);
    const double value = norm(proj - x, NormKind::spectral);
    res.initial_condition_value = value;
    res.initial_condition_violated = !(value < 1.0);
  }

  DenseMatrix t(c, c);
  DenseMatrix x_next(c, c);
  double prev_residual = std::numeric_limits<double>::infinity();
  int growth_streak = 0;

  for (int it = 1; it <= opts.max_iters; ++it) {
    // inner = 13I - X(15I - X(7I - X)), built from the innermost factor out.
    t = -x;
    t.diagonal().array() += 7.0;
    DenseMatrix inner = -(x * t);
    inner.diagonal().array() += 15.0;
    t.noalias() = -(x * inner);
    t.diagonal().array() += 13.0;
    z = 0.25 * (z * t);

    x_next.noalias() = a * z;
    const double step = (x_next - x).norm();
    const double x_norm = x.norm();
    x.swap(x_next);

    res.residual = (x * a - a).norm() / a_fro;
    res.iterations = it;
    if (opts.record_history) res.history.push_back(res.residual);
    if (!std::isfinite(res.residual)) {
      throw NumericalError("pinv_iterative: non-finite residual at iteration " + std::to_string(it));
    }

    if (res.residual > prev_residual) {
      if (++growth_streak >= 3) {
        std::ostringstream os;
        os << "pinv_iterative: diverging, residual grew 3 consecutive iterations (last residual "
           << res.residual << " at iteration " << it << ")";
        throw NumericalError(os.str());
      }
    } else {
      growth_streak = 0;
    }
    prev_residual = res.residual;

    if (step <= opts.tol * x_norm) {
      res.converged = true;
      break;
    }
  }
  res.z = std::move(z);
  return res;
}

bool is_symmetric(const DenseMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Spectrum spectrum(const DenseMatrix& m, double symmetry_tol) {
  if (m.rows() != m.cols()) throw UsageError("spectrum: matrix must be square, got " + shape_str(m));
  require_nonempty(m, "spectrum");
  require_finite(m, "spectrum");

  Spectrum out;
  if (is_symmetric(m, symmetry_tol)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
    const Vector ev = solver.eigenvalues();
    out.values.resize(static_cast<std::size_t>(ev.size()));
    for (Index i = 0; i < ev.size(); ++i) out.values[static_cast<std::size_t>(i)] = std::abs(ev(i));
  } else {
    const Vector s = singular_values(m);
    out.values.assign(s.data(), s.data() + s.size());
  }
  std::sort(out.values.begin(), out.values.end(), std::greater<>());

  const std::size_t n = out.values.size();
  out.cumulative.resize(n);
  const double total = std::accumulate(out.values.begin(), out.values.end(), 0.0);
  if (total == 0.0) {
    // Zero matrix: no preferred direction, spread the mass uniformly.
    for (std::size_t i = 0; i < n; ++i) out.cumulative[i] = double(i + 1) / double(n);
    return out;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += out.values[i];
    out.cumulative[i] = std::min(acc / total, 1.0);
  }
  out.cumulative.back() = 1.0;
  return out;
}

Index numerical_rank(const DenseMatrix& m, double tol) {
  if (!(tol > 0.0)) throw UsageError("numerical_rank: tol must be positive");
  return rank_from_sigma(singular_values(m), tol);
}

}  // namespace ssattn
