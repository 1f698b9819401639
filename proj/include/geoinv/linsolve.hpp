#pragma once

#include <optional>

#include <Eigen/Dense>

#include "geoinv/errors.hpp"
#include "geoinv/scalar.hpp"

namespace geoinv {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One solution of A x = b by Gauss-Jordan elimination; free variables are
/// set to zero. Returns nullopt when the system is inconsistent. Rational
/// input is solved exactly; doubles use partial pivoting with a relative
/// cutoff.
template <typename Scalar>
std::optional<Vector<Scalar>> solve_linear(Matrix<Scalar> a, Vector<Scalar> b)
{
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Scalar cutoff(0);
  if constexpr (!is_exact_v<Scalar>) {
    Scalar scale(0);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) scale = std::max(scale, abs_value(a(i, j)));
    cutoff = scale * Scalar(1e-12);
  }
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index best = -1;
    Scalar best_abs(0);
    for (Eigen::Index i = row; i < rows; ++i) {
      Scalar v = abs_value(a(i, col));
      if (v > best_abs) {
        best_abs = v;
        best = i;
        if constexpr (is_exact_v<Scalar>) break;
      }
    }
    if (best < 0 || best_abs <= cutoff) continue;
    a.row(row).swap(a.row(best));
    std::swap(b(row), b(best));
    const Scalar inv = Scalar(1) / a(row, col);
    a.row(row) *= inv;
    b(row) *= inv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      const Scalar factor = a(i, col);
      a.row(i) -= factor * a.row(row);
      b(i) -= factor * b(row);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (Eigen::Index i = row; i < rows; ++i) {
    if (abs_value(b(i)) > cutoff * Scalar(1e3)) return std::nullopt;
  }
  Vector<Scalar> x = Vector<Scalar>::Zero(cols);
  for (std::size_t k = 0; k < pivot_col.size(); ++k) x(pivot_col[k]) = b(static_cast<Eigen::Index>(k));
  return x;
}

/// Least-squares solution of an overdetermined system. Rational input goes
/// through the normal equations and is exact; doubles use column-pivoted QR.
template <typename Scalar>
Vector<Scalar> least_squares(const Matrix<Scalar>& a, const Vector<Scalar>& b)
{
  if constexpr (is_exact_v<Scalar>) {
    Matrix<Scalar> ata = a.transpose() * a;
    Vector<Scalar> atb = a.transpose() * b;
    auto x = solve_linear<Scalar>(ata, atb);
    if (!x) throw DegenerateError("least_squares: normal equations are inconsistent");
    return *x;
  } else {
    return a.colPivHouseholderQr().solve(b);
  }
}

}  // namespace geoinv
