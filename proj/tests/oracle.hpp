#pragma once

// Independent numerical references for the tests.  Nothing here goes through
// the library's matrix exponential or rank-revealing decompositions: the
// integrator is a classic embedded Runge-Kutta pair, quadrature is
// Gauss-Legendre with Newton-refined nodes, and the kernel basis comes from
// straight Gaussian elimination.

#include <mdeq/types.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using mdeq::Complex;
using mdeq::Matrix;
using mdeq::Vector;

// Dormand-Prince 5(4) for the matrix initial value problem M' = A(x) M,
// M(x0) = m0, integrated to x1 with absolute-plus-relative control at `tol`.
inline Matrix integrate_linear(const std::function<Matrix(double)>& a, double x0, double x1,
                               Matrix m, double tol = 1e-12) {
  if (x1 == x0) return m;
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double dir = x1 > x0 ? 1.0 : -1.0;
  double x = x0;
  double h = dir * std::min(std::abs(x1 - x0), 0.1);
  int guard = 0;
  while (dir * (x1 - x) > 0) {
    if (++guard > 1000000) throw std::runtime_error("integrate_linear: step limit");
    if (dir * (x + h - x1) > 0) h = x1 - x;
    const Matrix k1 = a(x) * m;
    const Matrix k2 = a(x + c2 * h) * (m + h * a21 * k1);
    const Matrix k3 = a(x + c3 * h) * (m + h * (a31 * k1 + a32 * k2));
    const Matrix k4 = a(x + c4 * h) * (m + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 = a(x + c5 * h) * (m + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 =
        a(x + h) * (m + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix next = m + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = a(x + h) * next;
    const double err =
        (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).cwiseAbs().maxCoeff();
    const double scale = tol * std::max(1.0, m.cwiseAbs().maxCoeff());
    if (err <= scale) {
      x += h;
      m = next;
    }
    const double grow = err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
  }
  return m;
}

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre nodes and weights, Newton iteration on the recurrence.
inline QuadRule gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// ∫_{x0}^{x1} f(t) dt by n-node Gauss-Legendre, matrix-valued integrand.
inline Matrix quad_matrix(const std::function<Matrix(double)>& f, double x0, double x1, int n) {
  const QuadRule rule = gauss_legendre(n);
  const double half = (x1 - x0) / 2, mid = (x1 + x0) / 2;
  Matrix acc;
  for (int i = 0; i < n; ++i) {
    const Matrix fi = f(mid + half * rule.nodes[i]);
    if (acc.size() == 0)
      acc = (half * rule.weights[i]) * fi;
    else
      acc += (half * rule.weights[i]) * fi;
  }
  return acc;
}

// Kernel basis of a complex matrix by Gaussian elimination with partial
// pivoting; columns are unit vectors over the free variables, unnormalized
// spans aside from a final column normalization.
inline Matrix kernel_elimination(Matrix m, double rel_tol = 1e-10) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  double scale = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) scale = std::max(scale, std::abs(m(i, j)));
  const double cut = rel_tol * std::max(scale, 1e-300);

  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = r;
    for (int i = r + 1; i < rows; ++i)
      if (std::abs(m(i, c)) > std::abs(m(best, c))) best = i;
    if (std::abs(m(best, c)) <= cut) continue;
    m.row(r).swap(m.row(best));
    m.row(r) /= m(r, c);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      if (std::abs(m(i, c)) > 0) m.row(i) -= m(i, c) * m.row(r);
    }
    pivot_col.push_back(c);
    ++r;
  }

  std::vector<int> free_col;
  {
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int c = 0; c < cols; ++c)
      if (!is_pivot[c]) free_col.push_back(c);
  }

  Matrix basis = Matrix::Zero(cols, static_cast<int>(free_col.size()));
  for (std::size_t k = 0; k < free_col.size(); ++k) {
    const int fc = free_col[k];
    basis(fc, static_cast<int>(k)) = 1;
    for (std::size_t p = 0; p < pivot_col.size(); ++p)
      basis(pivot_col[p], static_cast<int>(k)) = -m(static_cast<int>(p), fc);
    basis.col(static_cast<int>(k)) /= basis.col(static_cast<int>(k)).norm();
  }
  return basis;
}

}  // namespace oracle
