#include <ssattn/landmarks.hpp>

namespace ssattn {

namespace {

void check_landmark_count(Index n, Index m, const char* what) {
  if (m < 1) throw UsageError(std::string(what) + ": landmark count m must be >= 1");
  if (m > n) {
    throw UsageError(std::string(what) + ": landmark count m=" + std::to_string(m) +
                     " exceeds sequence length n=" + std::to_string(n) + "; reduce m to at most n");
  }
}

}  // namespace

Padded pad_to_multiple(const DenseMatrix& x, Index m) {
  if (m < 1) throw UsageError("pad_to_multiple: landmark count m must be >= 1");
  const Index n = x.rows();
  const Index padded_n = ((n + m - 1) / m) * m;
  Padded out{DenseMatrix::Zero(padded_n, x.cols()), n};
  out.x.topRows(n) = x;
  return out;
}

DenseMatrix segment_means(const DenseMatrix& x, Index m, SegmentRule rule) {
  check_landmark_count(x.rows(), m, "segment_means");
  if (x.rows() % m != 0) return segment_means(pad_to_multiple(x, m).x, m, rule);

  const Index n = x.rows();
  const Index l = n / m;
  DenseMatrix out(m, x.cols());
  if (rule == SegmentRule::mean) {
    for (Index j = 0; j < m; ++j) out.row(j) = x.middleRows(j * l, l).colwise().sum() / double(l);
    return out;
  }
  if ((m - 1) * l + m > n) {
    throw UsageError("segment_means: literal rule needs (m-1)*l + m <= n, got n=" + std::to_string(n) +
                     " m=" + std::to_string(m));
  }
  for (Index j = 0; j < m; ++j) out.row(j) = x.middleRows(j * l, m).colwise().sum() / double(m);
  return out;
}

LandmarkPair make_landmarks(const DenseMatrix& q, const DenseMatrix& k, Index m) {
  if (q.rows() != k.rows() || q.cols() != k.cols()) {
    throw UsageError("make_landmarks: Q is " + shape_str(q) + " but K is " + shape_str(k));
  }
  check_landmark_count(q.rows(), m, "make_landmarks");
  if (q.rows() % m != 0) {
    throw UsageError("make_landmarks: n=" + std::to_string(q.rows()) + " is not divisible by m=" +
                     std::to_string(m) + "; pad first");
  }
  return LandmarkPair{segment_means(q, m), segment_means(k, m), m, q.rows() / m};
}

}  // namespace ssattn
