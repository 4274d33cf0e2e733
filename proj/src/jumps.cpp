#include <mdeq/jumps.hpp>

#include <mdeq/linalg.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mdeq {

JumpPair jump_matrices(const SystemSpec& spec, int k, Complex lambda) {
  const Atom& at = spec.atoms.at(static_cast<size_t>(k));
  const Matrix half = 0.5 * (at.dq - lambda * at.dw);
  return JumpPair{spec.J + half, spec.J - half};
}

namespace {

// Roots of p(λ) = det(B0 + λ C), degree <= n, via sampled interpolation and
// a companion matrix.  Returns all_of_c=true when the polynomial is
// numerically the zero polynomial.
struct PencilRoots {
  bool identically_zero = false;
  std::vector<Complex> roots;
};

PencilRoots pencil_roots(const Matrix& b0, const Matrix& c, double tol_det) {
  const int n = static_cast<int>(b0.rows());
  const int m = n + 1;  // sample count
  // Sample on a circle whose radius balances the two matrices.
  const double radius = 1.0 + b0.norm() / (1.0 + c.norm());
  Vector samples(m), values(m);
  double scale = 0.0;
  bool all_small = true;
  for (int k = 0; k < m; ++k) {
    const double th = 2.0 * M_PI * k / m;
    const Complex s = radius * Complex(std::cos(th), std::sin(th));
    samples(k) = s;
    const Matrix ms = b0 + s * c;
    values(k) = ms.determinant();
    const double h = std::max(hadamard_bound(ms), 1e-300);
    scale = std::max(scale, h);
    if (std::abs(values(k)) > tol_det * h) all_small = false;
  }
  PencilRoots out;
  if (all_small) {
    out.identically_zero = true;
    return out;
  }
  // Interpolate coefficients: V a = values with V_{kj} = samples(k)^j.
  Matrix vand(m, m);
  for (int k = 0; k < m; ++k) {
    Complex p = 1.0;
    for (int j = 0; j < m; ++j) {
      vand(k, j) = p;
      p *= samples(k);
    }
  }
  Vector coeff = vand.fullPivLu().solve(values);
  // Trim negligible leading coefficients to find the true degree.
  const double cmax = coeff.cwiseAbs().maxCoeff();
  int deg = m - 1;
  while (deg > 0 && std::abs(coeff(deg)) <= 1e-12 * cmax) --deg;
  if (deg == 0) return out;  // nonzero constant: no roots
  // Companion matrix of the monic polynomial.
  Matrix comp = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeff(i) / coeff(deg);
  Eigen::ComplexEigenSolver<Matrix> es(comp);
  for (int i = 0; i < deg; ++i) out.roots.push_back(es.eigenvalues()(i));
  return out;
}

}  // namespace

BadLambdaSet bad_lambda_set(const SystemSpec& spec, int k, const Tolerances& tol) {
  const Atom& at = spec.atoms.at(static_cast<size_t>(k));
  const Matrix b_plus0 = spec.J + 0.5 * at.dq;
  const Matrix b_minus0 = spec.J - 0.5 * at.dq;
  const Matrix c_plus = -0.5 * at.dw;
  const Matrix c_minus = 0.5 * at.dw;

  BadLambdaSet out;
  const PencilRoots rp = pencil_roots(b_plus0, c_plus, tol.det);
  const PencilRoots rm = pencil_roots(b_minus0, c_minus, tol.det);
  if (rp.identically_zero || rm.identically_zero) {
    out.all_of_c = true;
    return out;
  }
  std::vector<Complex> roots = rp.roots;
  roots.insert(roots.end(), rm.roots.begin(), rm.roots.end());

  // The two factors are adjoint-conjugate, so the union is closed under
  // conjugation in exact arithmetic.  Enforce the closure exactly: pair each
  // root with the nearest conjugate candidate and average, or adjoin the
  // conjugate when no partner is near.
  std::vector<Complex> closed;
  std::vector<bool> used(roots.size(), false);
  const double match = 1e-6;
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex r = roots[i];
    if (std::abs(r.imag()) <= match * (1.0 + std::abs(r))) {
      closed.push_back(Complex(r.real(), 0.0));
      continue;
    }
    size_t best = roots.size();
    double dist = match * (1.0 + std::abs(r));
    for (size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(std::conj(roots[j]) - r);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    Complex z = r;
    if (best < roots.size()) {
      used[best] = true;
      z = 0.5 * (r + std::conj(roots[best]));
    }
    closed.push_back(z);
    closed.push_back(std::conj(z));
  }
  // Deduplicate and sort deterministically.
  std::sort(closed.begin(), closed.end(), [](const Complex& u, const Complex& v) {
    if (u.real() != v.real()) return u.real() < v.real();
    return u.imag() < v.imag();
  });
  for (const Complex& z : closed) {
    if (!out.roots.empty() && std::abs(out.roots.back() - z) <= 1e-9 * (1.0 + std::abs(z)))
      continue;
    out.roots.push_back(z);
  }
  return out;
}

std::vector<int> xi_set(const SystemSpec& spec, Complex lambda, const Tolerances& tol) {
  std::vector<int> out;
  for (int k = 0; k < spec.N(); ++k) {
    const JumpPair jp = jump_matrices(spec, k, lambda);
    const double hp = std::max(hadamard_bound(jp.plus), 1e-300);
    const double hm = std::max(hadamard_bound(jp.minus), 1e-300);
    const bool sing_p = std::abs(jp.plus.determinant()) <= tol.det * hp;
    const bool sing_m = std::abs(jp.minus.determinant()) <= tol.det * hm;
    if (sing_p || sing_m) out.push_back(k);
  }
  return out;
}

}  // namespace mdeq
