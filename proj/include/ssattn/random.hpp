#pragma once

#include <ssattn/exact_attention.hpp>

#include <cstdint>
#include <random>

namespace ssattn {

/// All randomness flows through a 64-bit Mersenne Twister seeded explicitly;
/// normals come from std::normal_distribution.
using Rng = std::mt19937_64;

DenseMatrix random_normal(Index rows, Index cols, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q).
DenseMatrix random_orthogonal(Index n, Rng& rng);

/// Q, K (n x d) and V (n x d_v) with i.i.d. standard normal entries, drawn
/// in that order from Rng(seed).
AttentionProblem random_problem(Index n, Index d, Index d_v, std::uint64_t seed);

}  // namespace ssattn
