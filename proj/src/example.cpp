#include <mdeq/example.hpp>

#include <cmath>

namespace mdeq {
namespace {

// Index of the atom at x, 1-based, or 0 when x is not an atom position.
int atom_at(int M, double x) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-12 * (1.0 + std::abs(x))) return 0;
  const int p = static_cast<int>(r);
  return (p >= 1 && p <= 4 * M) ? p : 0;
}

void require_inside(int M, double x) {
  if (x < 0.5 || x > 4.0 * M + 0.5) throw OutOfDomain("x outside the interval");
}

// Pair block 1..2M containing x (closed [2k-1, 2k]), or 0.
int pair_of(int M, double x) {
  const int p = atom_at(M, x);
  if (p > 0) return (p + 1) / 2;
  const int f = static_cast<int>(std::floor(x));
  if (f >= 1 && f <= 4 * M - 1 && f % 2 == 1) return (f + 1) / 2;
  return 0;
}

Matrix green_core(Complex lambda, double s) {
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = -1.0 / lambda;
  g(0, 1) = 0.5 * s;
  g(1, 0) = -0.5 * s;
  return g;
}

}  // namespace

SystemSpec example_spec(int M) {
  if (M < 1) throw InvalidSpec("example family needs M >= 1");
  SystemSpec spec;
  spec.n = 2;
  spec.a = 0.5;
  spec.b = 4.0 * M + 0.5;
  spec.J = Matrix::Zero(2, 2);
  spec.J(0, 1) = -1.0;
  spec.J(1, 0) = 1.0;
  Matrix dq = Matrix::Zero(2, 2);
  dq(0, 1) = 2.0;
  dq(1, 0) = 2.0;
  Matrix dw = Matrix::Zero(2, 2);
  dw(0, 0) = 2.0;
  for (int p = 1; p <= 4 * M; ++p) {
    Atom atom;
    atom.x = p;
    atom.dq = (p % 2 == 0) ? dq : -dq;
    atom.dw = dw;
    spec.atoms.push_back(atom);
  }
  return spec;
}

Vector example_resolvent(int M, Complex lambda, const std::vector<Vector>& f_atoms, double x) {
  if (lambda == Complex(0.0)) throw NotInResolventSet("0 is an eigenvalue of the example family");
  if (f_atoms.size() != static_cast<size_t>(4 * M))
    throw InvalidSpec("f must list a value per atom");
  require_inside(M, x);

  const int k = pair_of(M, x);
  if (k == 0) return Vector::Zero(2);
  const Complex fl = f_atoms[static_cast<size_t>(2 * k - 2)][0];
  const Complex fr = f_atoms[static_cast<size_t>(2 * k - 1)][0];
  Vector v(2);
  v[0] = -(fl + fr) / lambda;
  v[1] = -0.5 * (fl - fr);
  if (atom_at(M, x) > 0) v *= 0.5;
  return v;
}

double example_norm_sq(int M, Complex lambda, const std::vector<Vector>& f_atoms) {
  if (lambda == Complex(0.0)) throw NotInResolventSet("0 is an eigenvalue of the example family");
  if (f_atoms.size() != static_cast<size_t>(4 * M))
    throw InvalidSpec("f must list a value per atom");
  double acc = 0.0;
  for (int k = 1; k <= 2 * M; ++k) {
    const Complex s = f_atoms[static_cast<size_t>(2 * k - 2)][0] +
                      f_atoms[static_cast<size_t>(2 * k - 1)][0];
    acc += std::norm(s);
  }
  return acc / std::norm(lambda);
}

Matrix example_green(int M, double x, double y, Complex lambda) {
  if (lambda == Complex(0.0)) throw NotInResolventSet("0 is an eigenvalue of the example family");
  require_inside(M, x);
  require_inside(M, y);

  const int kx = pair_of(M, x);
  const int ky = pair_of(M, y);
  if (kx == 0 || kx != ky) return Matrix::Zero(2, 2);

  double weight = 1.0;
  if (atom_at(M, y) > 0) weight *= 0.5;

  // At an atom the value is the average of the two one-sided limits; the
  // limit from outside the pair block vanishes, so only the inside limit
  // survives, with the sign the inside approach direction gives it.
  const int px = atom_at(M, x);
  const int py = atom_at(M, y);
  const double ye = py > 0 ? py : y;
  double s;
  if (px > 0) {
    weight *= 0.5;
    // Odd atom: block gap lies to its right, the inside limit x+ sits just
    // above px, so it exceeds y exactly when y <= px.  Even atom: mirrored.
    s = (px % 2 == 1) ? ((ye <= px) ? 1.0 : -1.0) : ((ye >= px) ? -1.0 : 1.0);
  } else {
    s = (x > ye) ? 1.0 : ((x < ye) ? -1.0 : 0.0);
  }
  return weight * green_core(lambda, s);
}

}  // namespace mdeq
