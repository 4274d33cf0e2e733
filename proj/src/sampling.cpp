#include <mdeq/sampling.hpp>

#include <mdeq/linalg.hpp>

#include <Eigen/QR>

namespace mdeq {
namespace {

Matrix ginibre(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Matrix hermitian(std::mt19937_64& rng, int m) {
  const Matrix g = ginibre(rng, m, m);
  return 0.5 * (g + g.adjoint());
}

// Positive semidefinite with each eigenvalue independently zeroed.
Matrix psd(std::mt19937_64& rng, int n, double rank_deficit) {
  std::uniform_real_distribution<double> mag(0.2, 2.0);
  std::bernoulli_distribution drop(rank_deficit);
  const Matrix v = random_unitary(rng, n);
  Vector d = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    if (!drop(rng)) d[i] = mag(rng);
  return v * d.asDiagonal() * v.adjoint();
}

Matrix planted_dq(double diag, double off) {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = diag;
  q(0, 1) = off;
  q(1, 0) = off;
  return q;
}

Matrix planted_dw(double s) {
  Matrix w = Matrix::Zero(2, 2);
  w(0, 0) = s;
  return w;
}

}  // namespace

Vector random_vector(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> g;
  Vector v(m);
  for (int i = 0; i < m; ++i) v[i] = Complex(g(rng), g(rng));
  return v;
}

Matrix random_unitary(std::mt19937_64& rng, int m) {
  const Matrix g = ginibre(rng, m, m);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const Complex d = r(j, j);
    if (d != Complex(0.0)) q.col(j) *= d / std::abs(d);
  }
  return q;
}

SystemSpec random_spec(std::mt19937_64& rng, const SpecOptions& opt) {
  std::uniform_int_distribution<int> pick_n(opt.n_min, opt.n_max);
  std::uniform_int_distribution<int> pick_na(opt.atoms_min, opt.atoms_max);
  std::uniform_real_distribution<double> gap_len(0.3, 1.5);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> pos(0.2, 2.0);
  std::bernoulli_distribution coin(0.5);

  SystemSpec spec;
  spec.n = opt.plant_l0 ? 2 : pick_n(rng);
  int na = pick_na(rng);
  if (opt.plant_l0 && na < 2) na = 2;

  spec.a = shift(rng);
  double x = spec.a;
  for (int k = 0; k < na; ++k) {
    x += gap_len(rng);
    Atom atom;
    atom.x = x;
    atom.dq = hermitian(rng, spec.n);
    atom.dw = psd(rng, spec.n, opt.w_rank_deficit);
    spec.atoms.push_back(std::move(atom));
  }
  spec.b = x + gap_len(rng);

  if (opt.plant_l0) {
    spec.J = Matrix::Zero(2, 2);
    spec.J(0, 1) = -1.0;
    spec.J(1, 0) = 1.0;
  } else {
    // Skew-adjoint invertible: unitary conjugate of i * (signed magnitudes).
    const Matrix u = random_unitary(rng, spec.n);
    Vector d(spec.n);
    for (int i = 0; i < spec.n; ++i) d[i] = Complex(0.0, coin(rng) ? mag(rng) : -mag(rng));
    spec.J = u * d.asDiagonal() * u.adjoint();
  }

  if (!opt.zero_gap_density || !opt.atomic_w) {
    spec.gaps.resize(static_cast<size_t>(na) + 1);
    for (int j = 0; j <= na; ++j) {
      GapDensity& gd = spec.gaps[static_cast<size_t>(j)];
      gd.Q = opt.zero_gap_density ? Matrix::Zero(spec.n, spec.n) : hermitian(rng, spec.n);
      gd.W = opt.atomic_w ? Matrix::Zero(spec.n, spec.n) : psd(rng, spec.n, opt.w_rank_deficit);
    }
  }

  if (opt.plant_l0) {
    std::uniform_int_distribution<int> pick_gap(1, na - 1);
    const int js = pick_gap(rng);
    if (!spec.gaps.empty()) {
      spec.gaps[static_cast<size_t>(js)].Q = Matrix::Zero(2, 2);
      spec.gaps[static_cast<size_t>(js)].W = Matrix::Zero(2, 2);
    }
    spec.atoms[static_cast<size_t>(js - 1)].dq = planted_dq(shift(rng), 2.0);
    spec.atoms[static_cast<size_t>(js - 1)].dw = planted_dw(pos(rng));
    spec.atoms[static_cast<size_t>(js)].dq = planted_dq(shift(rng), -2.0);
    spec.atoms[static_cast<size_t>(js)].dw = planted_dw(pos(rng));
  }

  // The measure must not vanish identically.
  double total = 0.0;
  for (const auto& atom : spec.atoms) total += max_abs(atom.dw);
  for (const auto& gd : spec.gaps) total += max_abs(gd.W);
  if (total == 0.0) {
    const Matrix v = random_unitary(rng, spec.n);
    Vector d = Vector::Zero(spec.n);
    d[0] = mag(rng);
    spec.atoms[0].dw = v * d.asDiagonal() * v.adjoint();
  }
  return spec;
}

RightHandSide random_rhs(const SystemSpec& spec, std::mt19937_64& rng) {
  RightHandSide f = RightHandSide::zero(spec);
  for (auto& v : f.gap) v = random_vector(rng, spec.n);
  for (auto& v : f.atom) v = random_vector(rng, spec.n);
  return f;
}

}  // namespace mdeq
