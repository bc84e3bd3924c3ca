#pragma once

#include <optional>
#include <vector>

#include "smoothkit/scalar.hpp"

namespace smoothkit {

/// Dense row-major matrix over Q(sqrt2).
using Matrix = std::vector<std::vector<Scalar>>;

Matrix zeros(std::size_t rows, std::size_t cols);
Matrix identity(std::size_t n);
Matrix multiply(const Matrix& a, const Matrix& b);
std::vector<Scalar> mat_vec(const Matrix& a, const std::vector<Scalar>& x);
Matrix transpose(const Matrix& a);
bool is_identity(const Matrix& a);

/// Rank by fraction-free (Bareiss) elimination.
std::size_t rank(Matrix a);
Scalar determinant(Matrix a);

/// Some x with a x = b, if the system is consistent.
std::optional<std::vector<Scalar>> solve(const Matrix& a, const std::vector<Scalar>& b);

/// Basis of {x : a x = 0}, one vector per free column.
std::vector<std::vector<Scalar>> nullspace(const Matrix& a, std::size_t cols);

std::optional<Matrix> inverse(const Matrix& a);

}  // namespace smoothkit
