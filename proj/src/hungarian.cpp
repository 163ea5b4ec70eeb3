#include "sgc/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sgc/error.hpp"

namespace sgc {
namespace {

// Reduced costs within this band of zero count as tight when searching for the
// lexicographically smallest optimum.
constexpr double kTightTolerance = 1e-10;

class LexMinSolver {
 public:
  explicit LexMinSolver(const SimilarityMatrix& s) : n_(std::max(s.rows(), s.cols())), cost_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        bool real = i < s.rows() && j < s.cols();
        cost_[i * n_ + j] = -(real ? s(i, j) : kDummyScore);
      }
    }
  }

  // Returns row -> column.
  std::vector<std::size_t> solve() {
    minimize();
    lex_minimize();
    return row_to_col_;
  }

 private:
  double cost(std::size_t i, std::size_t j) const { return cost_[i * n_ + j]; }
  bool tight(std::size_t i, std::size_t j) const { return cost(i, j) - u_[i] - v_[j] <= kTightTolerance; }

  // Shortest augmenting path Hungarian method with row/column potentials.
  void minimize() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n_ + 1, 0.0), v(n_ + 1, 0.0);
    std::vector<std::size_t> p(n_ + 1, 0), way(n_ + 1, 0);
    for (std::size_t i = 1; i <= n_; ++i) {
      p[0] = i;
      std::size_t j0 = 0;
      std::vector<double> minv(n_ + 1, inf);
      std::vector<char> used(n_ + 1, false);
      do {
        used[j0] = true;
        std::size_t i0 = p[j0], j1 = 0;
        double delta = inf;
        for (std::size_t j = 1; j <= n_; ++j) {
          if (used[j]) continue;
          double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
        for (std::size_t j = 0; j <= n_; ++j) {
          if (used[j]) {
            u[p[j]] += delta;
            v[j] -= delta;
          } else {
            minv[j] -= delta;
          }
        }
        j0 = j1;
      } while (p[j0] != 0);
      do {
        std::size_t j1 = way[j0];
        p[j0] = p[j1];
        j0 = j1;
      } while (j0);
    }
    u_.assign(u.begin() + 1, u.end());
    v_.assign(v.begin() + 1, v.end());
    row_to_col_.assign(n_, 0);
    col_to_row_.assign(n_, 0);
    for (std::size_t j = 1; j <= n_; ++j) {
      row_to_col_[p[j] - 1] = j - 1;
      col_to_row_[j - 1] = p[j] - 1;
    }
  }

  // Every perfect matching on tight edges is optimal. Walk rows in order and
  // give each the smallest tight column that still admits a perfect matching
  // of the unfixed remainder, found by an alternating path.
  void lex_minimize() {
    std::vector<char> col_fixed(n_, false);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (col_fixed[j] || !tight(i, j)) continue;
        if (row_to_col_[i] == j || reroute(i, j, col_fixed)) {
          col_fixed[j] = true;
          break;
        }
      }
    }
  }

  bool reroute(std::size_t row, std::size_t col, const std::vector<char>& col_fixed) {
    const std::size_t freed = row_to_col_[row];
    const std::size_t displaced = col_to_row_[col];
    std::vector<char> seen(n_, false);
    seen[col] = true;
    std::vector<std::size_t> saved_r2c = row_to_col_, saved_c2r = col_to_row_;
    row_to_col_[row] = col;
    col_to_row_[col] = row;
    if (augment(displaced, freed, col_fixed, seen)) return true;
    row_to_col_ = std::move(saved_r2c);
    col_to_row_ = std::move(saved_c2r);
    return false;
  }

  bool augment(std::size_t r, std::size_t freed, const std::vector<char>& col_fixed, std::vector<char>& seen) {
    for (std::size_t y = 0; y < n_; ++y) {
      if (seen[y] || col_fixed[y] || !tight(r, y)) continue;
      seen[y] = true;
      if (y == freed || augment(col_to_row_[y], freed, col_fixed, seen)) {
        row_to_col_[r] = y;
        col_to_row_[y] = r;
        return true;
      }
    }
    return false;
  }

  std::size_t n_;
  std::vector<double> cost_;
  std::vector<double> u_, v_;
  std::vector<std::size_t> row_to_col_, col_to_row_;
};

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::kValidation, "ragged similarity matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

double AssignmentResult::total() const {
  double t = 0.0;
  for (const auto& p : pairs) t += p.score;
  return t;
}

AssignmentResult hungarian_assign(const SimilarityMatrix& s) {
  AssignmentResult result;
  if (s.empty()) {
    for (std::size_t i = 0; i < s.rows(); ++i) result.unmatched_source.push_back(i);
    for (std::size_t j = 0; j < s.cols(); ++j) result.unmatched_target.push_back(j);
    return result;
  }
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      double x = s(i, j);
      if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
        throw Error(ErrorCode::kInvalidScore, "similarity (" + std::to_string(i) + ", " + std::to_string(j) +
                                                  ") = " + std::to_string(x) + " is not a finite value in [-1, 1]");
      }
    }
  }
  auto row_to_col = LexMinSolver(s).solve();
  std::vector<char> target_used(s.cols(), false);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    std::size_t j = row_to_col[i];
    if (j < s.cols()) {
      result.pairs.push_back(MatchedPair{i, j, s(i, j)});
      target_used[j] = true;
    } else {
      result.unmatched_source.push_back(i);
    }
  }
  for (std::size_t j = 0; j < s.cols(); ++j) {
    if (!target_used[j]) result.unmatched_target.push_back(j);
  }
  return result;
}

}  // namespace sgc
