#include "qfa/ratlin.hpp"

namespace qfa {

namespace {

// Row echelon form in place; returns pivot column per row rank order.
std::vector<int> echelon(RatMatrix& a, RatVector* b) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[r], a[sel]);
    if (b) std::swap((*b)[r], (*b)[sel]);
    Rat inv = a[r][c];
    for (int j = c; j < cols; ++j) a[r][j] /= inv;
    if (b) (*b)[r] /= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      if (b) (*b)[i] -= f * (*b)[r];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::optional<RatVector> ratlin_solve(RatMatrix a, RatVector b) {
  int rows = static_cast<int>(a.size());
  int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<int> pivots = echelon(a, &b);
  int rank = static_cast<int>(pivots.size());
  for (int i = rank; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVector x(cols, Rat(0));
  for (int r = 0; r < rank; ++r) x[pivots[r]] = b[r];
  return x;
}

std::optional<RatVector> ratlin_nullvector(RatMatrix a, int cols) {
  for (auto& row : a) row.resize(cols, Rat(0));
  std::vector<int> pivots = echelon(a, nullptr);
  if (static_cast<int>(pivots.size()) == cols) return std::nullopt;
  // first non-pivot column -> free variable 1
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) {
      free_col = c;
      break;
    }
  RatVector x(cols, Rat(0));
  x[free_col] = 1;
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free_col];
  return x;
}

}  // namespace qfa
