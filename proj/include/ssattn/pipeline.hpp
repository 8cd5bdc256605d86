#pragma once

#include <ssattn/exact_attention.hpp>
#include <ssattn/matcore.hpp>

#include <string>
#include <vector>

namespace ssattn {

enum class PinvMode { svd, iterative };

const char* to_string(PinvMode mode);
PinvMode parse_pinv_mode(const std::string& text);

/// How the c x c sketch A_s is (pseudo)inverted.
struct PinvChoice {
  PinvMode mode = PinvMode::svd;
  double svd_tol = kDefaultPinvTol;
  PinvIterOptions iter;
};

/// Records the area (scalar slots) of every temporary matrix a pipeline
/// holds, so tests can bound its working set without materializing n x n.
class AllocationAudit {
 public:
  void acquire(Index rows, Index cols, const char* label);
  void release(Index rows, Index cols);

  Index current() const { return current_; }
  Index peak() const { return peak_; }

  struct Entry {
    std::string label;
    Index rows = 0;
    Index cols = 0;
  };
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Index current_ = 0;
  Index peak_ = 0;
  std::vector<Entry> entries_;
};

/// The three softmax blocks of the landmark approximation:
///   F   = softmax(Q  K~^T / sqrt(d_k))   n x m
///   A_s = softmax(Q~ K~^T / sqrt(d_k))   m x m
///   B   = softmax(Q~ K^T  / sqrt(d_k))   m x n
struct LandmarkSketch {
  DenseMatrix f;
  DenseMatrix a_s;
  DenseMatrix b;
};

/// Builds the sketch. Q and K must have n divisible by m.
LandmarkSketch build_sketch(const AttentionProblem& p, Index m, AllocationAudit* audit = nullptr);

/// Throws UsageError unless 1 <= m <= n.
void check_landmark_count(Index n, Index m);

/// Pads Q, K, V with zero rows to a multiple of m. Returns the input
/// unchanged when already divisible.
AttentionProblem pad_problem(const AttentionProblem& p, Index m);

struct PinvOutcome {
  DenseMatrix z;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::vector<std::string> flags;
};

/// Applies the configured pseudoinverse to A_s.
PinvOutcome invert_sketch(const DenseMatrix& a_s, const PinvChoice& choice,
                          AllocationAudit* audit = nullptr);

/// Per-stage wall-clock seconds. `sketch` includes landmark pooling.
struct StageTimings {
  double sketch = 0.0;
  double pinv = 0.0;
  double products = 0.0;
  double total = 0.0;
};

}  // namespace ssattn
