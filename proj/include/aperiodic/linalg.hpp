#pragma once

// Dense exact linear algebra over Q(sqrt5): row reduction, rank, null space.

#include "golden.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace aperiodic {

class GoldenMatrix {
 public:
  GoldenMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols, GoldenNum(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  GoldenNum& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const GoldenNum& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  std::vector<GoldenNum> operator*(const std::vector<GoldenNum>& v) const {
    std::vector<GoldenNum> r(rows_, GoldenNum(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) r[i] += (*this)(i, j) * v[j];
    return r;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<GoldenNum> e_;
};

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(GoldenMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const GoldenNum inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j)
      if (!m(row, j).is_zero()) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const GoldenNum f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(GoldenMatrix m) { return row_reduce(m).size(); }

/// Basis of {x : m x = 0}.
inline std::vector<std::vector<GoldenNum>> null_space(GoldenMatrix m) {
  const std::vector<std::size_t> pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::vector<GoldenNum>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<GoldenNum> x(m.cols(), GoldenNum(0));
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m(r, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

/// Unique solution of a square system.
inline std::vector<GoldenNum> solve(const GoldenMatrix& a, const std::vector<GoldenNum>& b) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw std::invalid_argument("solve needs a square system");
  GoldenMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const std::vector<std::size_t> pivots = row_reduce(aug);
  if (pivots.size() != a.rows() || pivots.back() != a.cols() - 1) throw std::domain_error("singular linear system");
  std::vector<GoldenNum> x(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) x[i] = aug(i, a.cols());
  return x;
}

}  // namespace aperiodic
