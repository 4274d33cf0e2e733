#include <mdeq/propagate.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace mdeq {

RightHandSide RightHandSide::zero(const SystemSpec& spec) {
  RightHandSide f;
  f.gap.assign(static_cast<size_t>(spec.N() + 1), Vector::Zero(spec.n));
  f.atom.assign(static_cast<size_t>(spec.N()), Vector::Zero(spec.n));
  return f;
}

Matrix gap_generator(const SystemSpec& spec, int j, Complex lambda) {
  const Matrix rhs = lambda * spec.gap_W(j) - spec.gap_Q(j);
  if (rhs.norm() == 0.0) return Matrix::Zero(spec.n, spec.n);
  return spec.J.partialPivLu().solve(rhs);
}

Matrix transfer_matrix(const SystemSpec& spec, int j, double x, Complex lambda) {
  const double t = x - spec.x(j);
  const Matrix a = gap_generator(spec, j, lambda);
  if (a.norm() * std::abs(t) == 0.0) return Matrix::Identity(spec.n, spec.n);
  return (t * a).exp();
}

Matrix gap_integral_matrix(const SystemSpec& spec, int j, double x, Complex lambda) {
  const int n = spec.n;
  const Matrix w = spec.gap_W(j);
  const double t = x - spec.x(j);
  if (w.norm() == 0.0 || t == 0.0) return Matrix::Zero(n, n);
  const Matrix astar = gap_generator(spec, j, std::conj(lambda)).adjoint();
  Matrix block = Matrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = astar;
  block.topRightCorner(n, n) = w;
  const Matrix e = (t * block).exp();
  return e.topRightCorner(n, n);
}

Vector gap_integral(const SystemSpec& spec, int j, const RightHandSide& f, Complex lambda) {
  if (f.gap.empty()) return Vector::Zero(spec.n);
  return gap_integral_matrix(spec, j, spec.x(j + 1), lambda) * f.gap[static_cast<size_t>(j)];
}

namespace {

Vector rhs_gap_value(const RightHandSide& f, int n, int j) {
  if (f.gap.empty()) return Vector::Zero(n);
  return f.gap[static_cast<size_t>(j)];
}

Vector rhs_atom_value(const RightHandSide& f, int n, int k) {
  if (f.atom.empty()) return Vector::Zero(n);
  return f.atom[static_cast<size_t>(k)];
}

// Value of the path inside gap j (x strictly between the gap edges, or at
// them for one-sided limits).
Vector gap_value(const SystemSpec& spec, const BalancedPath& path, int j, double x) {
  const Vector& cj = path.c[static_cast<size_t>(j)];
  Vector v = cj;
  if (!path.rhs.gap.empty()) {
    const Vector fj = path.rhs.gap[static_cast<size_t>(j)];
    if (fj.norm() != 0.0 && spec.gap_W(j).norm() != 0.0) {
      const Vector p = gap_integral_matrix(spec, j, x, path.lambda) * fj;
      v += spec.J.partialPivLu().solve(p);
    }
  }
  return transfer_matrix(spec, j, x, path.lambda) * v;
}

}  // namespace

BalancedPath propagate_path(const SystemSpec& spec, Complex lambda, const Vector& u_tilde,
                            const RightHandSide& f) {
  const int n = spec.n;
  const int N = spec.N();
  if (u_tilde.size() != static_cast<Eigen::Index>(n) * (N + 1))
    throw OutOfDomain("coefficient stack has wrong length");
  BalancedPath path;
  path.lambda = lambda;
  path.rhs = f;
  if (path.rhs.gap.empty()) path.rhs.gap.assign(static_cast<size_t>(N + 1), Vector::Zero(n));
  if (path.rhs.atom.empty()) path.rhs.atom.assign(static_cast<size_t>(N), Vector::Zero(n));
  path.c.resize(static_cast<size_t>(N + 1));
  for (int j = 0; j <= N; ++j) path.c[static_cast<size_t>(j)] = u_tilde.segment(j * n, n);
  path.atom.resize(static_cast<size_t>(N));
  for (int k = 0; k < N; ++k) {
    AtomTriple tr;
    tr.left = gap_value(spec, path, k, spec.x(k + 1));
    tr.right = path.c[static_cast<size_t>(k + 1)];
    tr.mid = 0.5 * (tr.left + tr.right);
    path.atom[static_cast<size_t>(k)] = std::move(tr);
  }
  path.start = path.c[0];
  path.end = gap_value(spec, path, N, spec.b);
  return path;
}

Vector coefficient_stack(const BalancedPath& path) {
  const int n = path.c.empty() ? 0 : static_cast<int>(path.c[0].size());
  Vector u(static_cast<Eigen::Index>(n) * static_cast<Eigen::Index>(path.c.size()));
  for (size_t j = 0; j < path.c.size(); ++j) u.segment(static_cast<Eigen::Index>(j) * n, n) = path.c[j];
  return u;
}

double ResidualReport::max() const {
  double m = 0.0;
  for (double v : jump) m = std::max(m, v);
  for (double v : gap) m = std::max(m, v);
  return m;
}

ResidualReport residual(const SystemSpec& spec, const BalancedPath& path) {
  const int n = spec.n;
  const int N = spec.N();
  ResidualReport rep;
  rep.jump.resize(static_cast<size_t>(N));
  rep.gap.resize(static_cast<size_t>(N + 1));
  for (int k = 0; k < N; ++k) {
    const Atom& at = spec.atoms[static_cast<size_t>(k)];
    const Matrix half = 0.5 * (at.dq - path.lambda * at.dw);
    const Vector lhs = (spec.J + half) * path.atom[static_cast<size_t>(k)].right -
                       (spec.J - half) * path.atom[static_cast<size_t>(k)].left;
    const Vector rhs = at.dw * rhs_atom_value(path.rhs, n, k);
    rep.jump[static_cast<size_t>(k)] = (lhs - rhs).norm();
  }
  for (int j = 0; j <= N; ++j) {
    const double len = spec.gap_length(j);
    const Matrix q = spec.gap_Q(j);
    const Matrix w = spec.gap_W(j);
    const Vector fj = rhs_gap_value(path.rhs, n, j);
    const double h = 1e-4 * len;
    double worst = 0.0;
    constexpr int kNodes = 7;
    for (int i = 0; i < kNodes; ++i) {
      // Chebyshev nodes pulled slightly inside so the difference stencil
      // stays inside the gap.
      const double theta = M_PI * (2.0 * i + 1.0) / (2.0 * kNodes);
      const double lo = spec.x(j) + 3.0 * h, hi = spec.x(j + 1) - 3.0 * h;
      const double xc = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
      // Five-point central difference for u'.
      const Vector um2 = gap_value(spec, path, j, xc - 2 * h);
      const Vector um1 = gap_value(spec, path, j, xc - h);
      const Vector up1 = gap_value(spec, path, j, xc + h);
      const Vector up2 = gap_value(spec, path, j, xc + 2 * h);
      const Vector du = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
      const Vector u0 = gap_value(spec, path, j, xc);
      const Vector defect = spec.J * du + (q - path.lambda * w) * u0 - w * fj;
      worst = std::max(worst, defect.norm());
    }
    rep.gap[static_cast<size_t>(j)] = worst;
  }
  return rep;
}

Vector evaluate(const SystemSpec& spec, const BalancedPath& path, double x) {
  const double span = spec.b - spec.a;
  const double pos_tol = 1e-12 * std::max(1.0, span + std::abs(x));
  if (x < spec.a - pos_tol || x > spec.b + pos_tol)
    throw OutOfDomain("evaluation point outside [a,b]");
  if (std::abs(x - spec.a) <= pos_tol) return path.start;
  if (std::abs(x - spec.b) <= pos_tol) return path.end;
  for (int k = 0; k < spec.N(); ++k) {
    if (std::abs(x - spec.x(k + 1)) <= pos_tol) return path.atom[static_cast<size_t>(k)].mid;
  }
  int j = 0;
  while (j < spec.N() && x > spec.x(j + 1)) ++j;
  return gap_value(spec, path, j, x);
}

void add_scaled(RightHandSide& f, Complex alpha, const RightHandSide& g) {
  if (f.gap.size() < g.gap.size()) f.gap.resize(g.gap.size(), Vector());
  for (size_t j = 0; j < g.gap.size(); ++j) {
    if (f.gap[j].size() == 0)
      f.gap[j] = alpha * g.gap[j];
    else if (g.gap[j].size() != 0)
      f.gap[j] += alpha * g.gap[j];
  }
  if (f.atom.size() < g.atom.size()) f.atom.resize(g.atom.size(), Vector());
  for (size_t k = 0; k < g.atom.size(); ++k) {
    if (f.atom[k].size() == 0)
      f.atom[k] = alpha * g.atom[k];
    else if (g.atom[k].size() != 0)
      f.atom[k] += alpha * g.atom[k];
  }
}

void add_scaled(BalancedPath& p, Complex alpha, const BalancedPath& q) {
  for (size_t j = 0; j < p.c.size(); ++j) p.c[j] += alpha * q.c[j];
  for (size_t k = 0; k < p.atom.size(); ++k) {
    p.atom[k].left += alpha * q.atom[k].left;
    p.atom[k].mid += alpha * q.atom[k].mid;
    p.atom[k].right += alpha * q.atom[k].right;
  }
  p.start += alpha * q.start;
  p.end += alpha * q.end;
  add_scaled(p.rhs, alpha, q.rhs);
}

void scale_path(BalancedPath& p, Complex alpha) {
  for (auto& cj : p.c) cj *= alpha;
  for (auto& tr : p.atom) {
    tr.left *= alpha;
    tr.mid *= alpha;
    tr.right *= alpha;
  }
  p.start *= alpha;
  p.end *= alpha;
  for (auto& v : p.rhs.gap)
    if (v.size()) v *= alpha;
  for (auto& v : p.rhs.atom)
    if (v.size()) v *= alpha;
}

}  // namespace mdeq
