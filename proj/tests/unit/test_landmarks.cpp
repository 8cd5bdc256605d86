#include <ssattn/landmarks.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ssattn;

TEST(SegmentMeans, PairsAveraged) {
  DenseMatrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const DenseMatrix out = segment_means(x, 2);
  DenseMatrix expect(2, 2);
  expect << 2, 3, 6, 7;
  EXPECT_EQ(out, expect);
}

TEST(SegmentMeans, IdentityWhenMEqualsN) {
  Rng rng(1);
  const DenseMatrix x = oracle::gaussian(7, 3, rng);
  EXPECT_EQ(segment_means(x, 7), x);
}

TEST(SegmentMeans, ConstantRows) {
  DenseMatrix x(6, 3);
  for (Index i = 0; i < 6; ++i) x.row(i) << 1.5, -2.0, 0.25;
  const DenseMatrix out = segment_means(x, 3);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(out.row(j), x.row(0));
}

TEST(SegmentMeans, MatchesLoopOracleAndPreservesColumnMean) {
  Rng rng(2);
  for (Index m : {1, 2, 4, 8, 16}) {
    const DenseMatrix x = oracle::gaussian(64, 5, rng);
    const DenseMatrix out = segment_means(x, m);
    EXPECT_LT((out - oracle::segment_means(x, m)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((out.colwise().mean() - x.colwise().mean()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(SegmentMeans, CovariantUnderWithinSegmentPermutation) {
  Rng rng(3);
  const DenseMatrix x = oracle::gaussian(12, 4, rng);
  DenseMatrix y = x;
  // Shuffle rows inside each of the 3 segments of length 4.
  for (Index s = 0; s < 3; ++s) {
    std::vector<Index> idx{0, 1, 2, 3};
    std::shuffle(idx.begin(), idx.end(), rng);
    for (Index r = 0; r < 4; ++r) y.row(s * 4 + r) = x.row(s * 4 + idx[std::size_t(r)]);
  }
  EXPECT_LT((segment_means(x, 3) - segment_means(y, 3)).cwiseAbs().maxCoeff(), 1e-14);

  // Swapping whole segments permutes the landmarks the same way.
  DenseMatrix z = x;
  z.topRows(4) = x.middleRows(8, 4);
  z.middleRows(8, 4) = x.topRows(4);
  const DenseMatrix a = segment_means(x, 3), b = segment_means(z, 3);
  EXPECT_LT((a.row(0) - b.row(2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((a.row(2) - b.row(0)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(SegmentMeans, Errors) {
  const DenseMatrix x = DenseMatrix::Ones(4, 2);
  EXPECT_THROW(segment_means(x, 0), UsageError);
  try {
    segment_means(x, 5);
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("reduce m"), std::string::npos);
  }
}

TEST(SegmentMeans, LiteralRuleDiffersWhenSegmentLengthDiffersFromM) {
  Rng rng(4);
  const DenseMatrix x = oracle::gaussian(8, 2, rng);  // m = 2, l = 4
  const DenseMatrix lit = segment_means(x, 2, SegmentRule::literal);
  // Row j sums rows j*l .. j*l + m - 1 and divides by m.
  EXPECT_LT((lit.row(0) - (x.row(0) + x.row(1)) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((lit.row(1) - (x.row(4) + x.row(5)) / 2.0).cwiseAbs().maxCoeff(), 1e-15);
  // When l = m both rules coincide.
  const DenseMatrix y = oracle::gaussian(4, 2, rng);
  EXPECT_LT((segment_means(y, 2, SegmentRule::literal) - segment_means(y, 2)).cwiseAbs().maxCoeff(), 1e-15);
  // m > l reads past the end.
  EXPECT_THROW(segment_means(oracle::gaussian(6, 2, rng), 3, SegmentRule::literal), UsageError);
}

TEST(PadToMultiple, Shapes) {
  Rng rng(5);
  const DenseMatrix x5 = oracle::gaussian(5, 3, rng);
  Padded p = pad_to_multiple(x5, 2);
  EXPECT_EQ(p.x.rows(), 6);
  EXPECT_EQ(p.original_n, 5);
  EXPECT_EQ(p.x.topRows(5), x5);
  EXPECT_EQ(p.x.row(5).norm(), 0.0);

  const DenseMatrix x6 = oracle::gaussian(6, 3, rng);
  p = pad_to_multiple(x6, 3);
  EXPECT_EQ(p.x, x6);

  p = pad_to_multiple(oracle::gaussian(7, 3, rng), 4);
  EXPECT_EQ(p.x.rows(), 8);
  EXPECT_THROW(pad_to_multiple(x6, 0), UsageError);
}

TEST(SegmentMeans, PadsWhenNotDivisible) {
  DenseMatrix x(3, 1);
  x << 2, 4, 6;
  const DenseMatrix out = segment_means(x, 2);  // padded to [2,4,6,0]
  EXPECT_DOUBLE_EQ(out(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 3.0);
}

TEST(MakeLandmarks, ShapesAndValidation) {
  Rng rng(6);
  const DenseMatrix q = oracle::gaussian(8, 3, rng), k = oracle::gaussian(8, 3, rng);
  const LandmarkPair lm = make_landmarks(q, k, 4);
  EXPECT_EQ(lm.q_tilde.rows(), 4);
  EXPECT_EQ(lm.k_tilde.cols(), 3);
  EXPECT_EQ(lm.l, 2);
  EXPECT_THROW(make_landmarks(q, oracle::gaussian(8, 2, rng), 4), UsageError);
  EXPECT_THROW(make_landmarks(q, k, 3), UsageError);
}
