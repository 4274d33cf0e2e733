#include <mdeq/canonical.hpp>

#include <mdeq/linalg.hpp>
#include <mdeq/relations.hpp>

#include <cmath>

namespace mdeq {
namespace {

// Absolute noise floor for support and value tests, tied to the overall
// scale of the L0 stacks: entries below it are artifacts of the kernel
// computation, not genuine support.
double noise_floor(const Matrix& stacks, const Tolerances& tol) {
  return tol.supp * std::max(1.0, max_abs(stacks));
}

Matrix clean(const Matrix& m, double floor_abs) {
  Matrix out = m;
  for (int j = 0; j < out.cols(); ++j)
    for (int i = 0; i < out.rows(); ++i)
      if (std::abs(out(i, j)) <= floor_abs) out(i, j) = 0.0;
  return out;
}

// Orthonormal basis of the column span, dropping columns that sit below the
// absolute floor before the relative machinery sees them.
Matrix span_basis(const Matrix& vals, double floor_abs, const Tolerances& tol) {
  std::vector<int> keep;
  for (int j = 0; j < vals.cols(); ++j)
    if (vals.col(j).norm() > floor_abs) keep.push_back(j);
  if (keep.empty()) return Matrix(vals.rows(), 0);
  Matrix kept(vals.rows(), static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j)
    kept.col(static_cast<int>(j)) = vals.col(keep[j]).normalized();
  Matrix combo;
  return orthonormalize(kept, combo, tol);
}

}  // namespace

TauGrid tau_grid(const SystemSpec& spec) {
  require_valid(spec);
  TauGrid grid;
  grid.gap0 = 0;
  for (int j = 1; j <= spec.N(); ++j)
    if (spec.gap_length(j) > spec.gap_length(grid.gap0)) grid.gap0 = j;
  grid.tau0 = 0.5 * (spec.x(grid.gap0) + spec.x(grid.gap0 + 1));
  for (int k = grid.gap0; k < spec.N(); ++k) {
    grid.plus_atom.push_back(k);
    grid.plus.push_back(spec.atoms[static_cast<size_t>(k)].x);
  }
  for (int k = grid.gap0 - 1; k >= 0; --k) {
    grid.minus_atom.push_back(k);
    grid.minus.push_back(spec.atoms[static_cast<size_t>(k)].x);
  }
  return grid;
}

NkSpaces nk_spaces(const SystemSpec& spec, const TauGrid& grid,
                   const std::vector<BalancedPath>& l0, const Tolerances& tol) {
  NkSpaces nk;
  nk.grid = grid;
  nk.l0_dim = static_cast<int>(l0.size());
  const int n = spec.n;
  const int dim = nk.l0_dim;

  Matrix stacks(n * (spec.N() + 1), dim);
  for (int i = 0; i < dim; ++i) stacks.col(i) = coefficient_stack(l0[static_cast<size_t>(i)]);
  const double floor_abs = noise_floor(stacks, tol);

  nk.vals0 = Matrix(n, dim);
  for (int i = 0; i < dim; ++i)
    nk.vals0.col(i) = evaluate(spec, l0[static_cast<size_t>(i)], grid.tau0);
  nk.combos0 = Matrix::Identity(dim, dim);
  nk.n0 = span_basis(nk.vals0, floor_abs, tol);

  for (size_t k = 0; k < grid.plus_atom.size(); ++k) {
    const int k0 = grid.plus_atom[k];
    // L0 combinations vanishing on every gap strictly below the atom.
    const Matrix below = clean(stacks.topRows(n * (k0 + 1)), floor_abs);
    const Matrix y = max_abs(below) == 0.0 ? Matrix::Identity(dim, dim)
                                           : kernel_basis(below, tol);
    const Matrix vals = stacks.middleRows(n * (k0 + 1), n) * y;
    nk.plus_combos.push_back(y);
    nk.plus_vals.push_back(vals);
    nk.n_plus.push_back(span_basis(vals, floor_abs, tol));
  }

  for (size_t k = 0; k < grid.minus_atom.size(); ++k) {
    const int k0 = grid.minus_atom[k];
    // L0 combinations vanishing on every gap strictly above the atom.
    const Matrix above = clean(stacks.bottomRows(n * (spec.N() - k0)), floor_abs);
    const Matrix y = max_abs(above) == 0.0 ? Matrix::Identity(dim, dim)
                                           : kernel_basis(above, tol);
    const Matrix t = transfer_matrix(spec, k0, spec.x(k0 + 1), Complex(0.0));
    const Matrix vals = t * (stacks.middleRows(n * k0, n) * y);
    nk.minus_combos.push_back(y);
    nk.minus_vals.push_back(vals);
    nk.n_minus.push_back(span_basis(vals, floor_abs, tol));
  }
  return nk;
}

namespace {

Vector condition_value(const SystemSpec& spec, const BalancedPath& path, const NkSpaces& nk,
                       int k) {
  if (k == 0) return evaluate(spec, path, nk.grid.tau0);
  if (k > 0) {
    const size_t i = static_cast<size_t>(k - 1);
    if (i >= nk.grid.plus_atom.size()) throw OutOfDomain("no grid point with that index");
    return path.atom[static_cast<size_t>(nk.grid.plus_atom[i])].right;
  }
  const size_t i = static_cast<size_t>(-k - 1);
  if (i >= nk.grid.minus_atom.size()) throw OutOfDomain("no grid point with that index");
  return path.atom[static_cast<size_t>(nk.grid.minus_atom[i])].left;
}

const Matrix& condition_space(const NkSpaces& nk, int k) {
  if (k == 0) return nk.n0;
  if (k > 0) return nk.n_plus[static_cast<size_t>(k - 1)];
  return nk.n_minus[static_cast<size_t>(-k - 1)];
}

}  // namespace

bool satisfies_condition_k(const SystemSpec& spec, const BalancedPath& path, const NkSpaces& nk,
                           int k, const Tolerances& tol) {
  const Vector v = condition_value(spec, path, nk, k);
  const Matrix& q = condition_space(nk, k);
  if (q.cols() == 0) return true;
  return (q.adjoint() * v).norm() <= tol.lin * std::max(1.0, v.norm());
}

BalancedPath canonicalize(const SystemSpec& spec, const NkSpaces& nk,
                          const std::vector<BalancedPath>& l0, BalancedPath path,
                          const Tolerances& tol) {
  if (nk.l0_dim == 0) return path;
  if (static_cast<int>(l0.size()) != nk.l0_dim)
    throw InvalidSpec("canonicalize: grid spaces were built from a different L0 basis");

  auto project_out = [&](int k, const Matrix& vals, const Matrix& combos) {
    const Vector v = condition_value(spec, path, nk, k);
    const Matrix& q = condition_space(nk, k);
    if (q.cols() == 0) return;
    const Vector p = q * (q.adjoint() * v);
    const Vector gamma = least_squares(vals, p, tol.rank);
    if ((vals * gamma - p).norm() > tol.lin * std::max(1.0, v.norm()))
      throw ProjectionFailed("value component cannot be realized by the admissible elements");
    const Vector beta = combos * gamma;
    for (int i = 0; i < beta.size(); ++i)
      add_scaled(path, -beta[i], l0[static_cast<size_t>(i)]);
  };

  project_out(0, nk.vals0, nk.combos0);
  for (size_t k = 0; k < nk.grid.plus_atom.size(); ++k)
    project_out(static_cast<int>(k) + 1, nk.plus_vals[k], nk.plus_combos[k]);
  for (size_t k = 0; k < nk.grid.minus_atom.size(); ++k)
    project_out(-(static_cast<int>(k) + 1), nk.minus_vals[k], nk.minus_combos[k]);
  return path;
}

BalancedPath canonicalize(const SystemSpec& spec, const BalancedPath& path,
                          const Tolerances& tol) {
  const std::vector<BalancedPath> l0 = l0_basis(spec, tol);
  const TauGrid grid = tau_grid(spec);
  const NkSpaces nk = nk_spaces(spec, grid, l0, tol);
  return canonicalize(spec, nk, l0, path, tol);
}

}  // namespace mdeq
