#pragma once

#include <cstddef>
#include <vector>

namespace sgc {

/// Row-major rectangular matrix of similarity scores.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  SimilarityMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct MatchedPair {
  std::size_t source;
  std::size_t target;
  double score;

  bool operator==(const MatchedPair&) const = default;
};

struct AssignmentResult {
  std::vector<MatchedPair> pairs;  // ascending by source
  std::vector<std::size_t> unmatched_source;
  std::vector<std::size_t> unmatched_target;

  /// Sum of pair scores in ascending source order.
  double total() const;
};

/// Padding score for dummy rows/columns; strictly below any cosine.
inline constexpr double kDummyScore = -2.0;

/// Maximum-total one-to-one assignment. The smaller side is padded with
/// dummies scoring kDummyScore; rows or columns assigned to a dummy are
/// reported as unmatched. Among optimal assignments the one whose padded
/// row-to-column sequence is lexicographically smallest is returned.
/// Empty input yields an empty result; a non-finite entry or one outside
/// [-1, 1] throws kInvalidScore.
AssignmentResult hungarian_assign(const SimilarityMatrix& similarity);

}  // namespace sgc
