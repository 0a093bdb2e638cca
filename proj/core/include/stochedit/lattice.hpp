#pragma once

#include <cstddef>
#include <vector>

#include "stochedit/logmath.hpp"

namespace stochedit {

/// (T+1) x (V+1) table of log-values indexed by prefix lengths.
class LogMatrix {
 public:
  LogMatrix() = default;
  LogMatrix(std::size_t rows, std::size_t cols, double fill = kLogZero)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t t, std::size_t v) { return cells_[t * cols_ + v]; }
  double operator()(std::size_t t, std::size_t v) const { return cells_[t * cols_ + v]; }

  // Linear-domain value of one cell.
  double value(std::size_t t, std::size_t v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
};

}  // namespace stochedit
