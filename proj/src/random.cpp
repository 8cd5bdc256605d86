#include <ssattn/random.hpp>

namespace ssattn {

DenseMatrix random_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = dist(rng);
  }
  return out;
}

DenseMatrix random_orthogonal(Index n, Rng& rng) {
  const Eigen::MatrixXd g = random_normal(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

AttentionProblem random_problem(Index n, Index d, Index d_v, std::uint64_t seed) {
  if (n < 1 || d < 1 || d_v < 1) throw UsageError("random_problem: n, d and d_v must be >= 1");
  Rng rng(seed);
  AttentionProblem p;
  p.q = random_normal(n, d, rng);
  p.k = random_normal(n, d, rng);
  p.v = random_normal(n, d_v, rng);
  return p;
}

}  // namespace ssattn
