#pragma once

#include <ssattn/matrix.hpp>

namespace ssattn {

/// Pooled landmark rows for queries and keys.
struct LandmarkPair {
  DenseMatrix q_tilde;  // m x d_k
  DenseMatrix k_tilde;  // m x d_k
  Index m = 0;
  Index l = 0;  // segment length
};

struct Padded {
  DenseMatrix x;
  Index original_n = 0;
};

/// Appends zero rows until the row count is a multiple of m.
Padded pad_to_multiple(const DenseMatrix& x, Index m);

enum class SegmentRule {
  /// Row j is the mean of the l = n/m consecutive rows of segment j.
  mean,
  /// Alternative indexing: sum rows (j-1)l+1 .. (j-1)l+m and
  /// divide by m. Kept for comparison only; reads past the segment when
  /// m > l and requires (m-1)l + m <= n.
  literal,
};

/// Segment means over contiguous, equal-length segments. n must be
/// divisible by m (pad first otherwise).
DenseMatrix segment_means(const DenseMatrix& x, Index m, SegmentRule rule = SegmentRule::mean);

/// Landmarks for Q and K; both must already have n divisible by m.
LandmarkPair make_landmarks(const DenseMatrix& q, const DenseMatrix& k, Index m);

}  // namespace ssattn
