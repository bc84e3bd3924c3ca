#include "smoothkit/linalg.hpp"

#include <stdexcept>

namespace smoothkit {

Matrix zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<Scalar>(cols, Scalar(0)));
}

Matrix identity(std::size_t n) {
  Matrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Scalar(1);
  return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.empty()) return {};
  if (a[0].size() != b.size()) throw std::invalid_argument("matrix shape mismatch");
  std::size_t cols = b.empty() ? 0 : b[0].size();
  Matrix c = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

std::vector<Scalar> mat_vec(const Matrix& a, const std::vector<Scalar>& x) {
  std::vector<Scalar> y(a.size(), Scalar(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw std::invalid_argument("matrix shape mismatch");
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

bool is_identity(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != a.size()) return false;
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!(a[i][j] == Scalar(i == j ? 1 : 0))) return false;
  }
  return true;
}

namespace {

// Bareiss elimination in place; returns the rank and leaves the last
// pivot (the determinant for full-rank square input) in *det.
std::size_t bareiss(Matrix& a, Scalar* det) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  Scalar prev(1);
  std::size_t r = 0;
  int swaps = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      ++swaps;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = Scalar(0);
    }
    prev = a[r][c];
    ++r;
  }
  if (det) *det = (swaps % 2 ? -prev : prev);
  return r;
}

// reduced row echelon form; pivot column per row
std::vector<std::size_t> rref(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Scalar inv = a[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(Matrix a) { return bareiss(a, nullptr); }

Scalar determinant(Matrix a) {
  if (a.empty()) return Scalar(1);
  if (a[0].size() != a.size()) throw std::invalid_argument("determinant of non-square matrix");
  Scalar det;
  std::size_t r = bareiss(a, &det);
  return r == a.size() ? det : Scalar(0);
}

std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rhs length mismatch");
  std::size_t cols = a.empty() ? 0 : a[0].size();
  Matrix aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  std::vector<Scalar> x(cols, Scalar(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

std::vector<std::vector<Scalar>> nullspace(const Matrix& a, std::size_t cols) {
  Matrix m = a;
  auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Scalar> v(cols, Scalar(0));
    v[f] = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Matrix> inverse(const Matrix& a) {
  std::size_t n = a.size();
  Matrix aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    if (aug[i].size() != n) throw std::invalid_argument("inverse of non-square matrix");
    for (std::size_t j = 0; j < n; ++j) aug[i].push_back(Scalar(i == j ? 1 : 0));
  }
  auto pivots = rref(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

}  // namespace smoothkit
