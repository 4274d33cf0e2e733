#include <mdeq/relations.hpp>

#include <mdeq/linalg.hpp>

#include <cmath>
#include <utility>

namespace mdeq {
namespace {

void require_atomic(const SystemSpec& spec, const char* who) {
  if (!spec.purely_atomic_w())
    throw InvalidSpec(std::string(who) + " needs purely atomic w (all gap W densities zero)");
}

Vector zero_stack(const SystemSpec& spec) { return Vector::Zero(spec.n * (spec.N() + 1)); }

BalancedPath zero_pair(const SystemSpec& spec) {
  return propagate_path(spec, Complex(0.0), zero_stack(spec), RightHandSide::zero(spec));
}

BalancedPath combine(const SystemSpec& spec, const std::vector<BalancedPath>& raw,
                     const Matrix& combo, int col) {
  BalancedPath acc = zero_pair(spec);
  for (int i = 0; i < combo.rows(); ++i) add_scaled(acc, combo(i, col), raw[static_cast<size_t>(i)]);
  return acc;
}

// Classes below this magnitude are indistinguishable from the rounding
// noise of a unit coefficient stack pushed through the weights; the purely
// relative rank machinery must not be fed matrices made of such noise.
double class_floor(const L2Model& model, const Tolerances& tol) {
  double top = 1.0;
  for (const auto& mk : model.m)
    if (mk.size() > 0) top = std::max(top, std::sqrt(mk.maxCoeff()));
  return tol.rank * top;
}

Matrix drop_small_columns(const Matrix& z, double floor_norm, std::vector<int>* kept = nullptr) {
  std::vector<int> idx;
  for (int j = 0; j < z.cols(); ++j)
    if (z.col(j).norm() > floor_norm) idx.push_back(j);
  Matrix out(z.rows(), static_cast<int>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j) out.col(static_cast<int>(j)) = z.col(idx[j]);
  if (kept) *kept = std::move(idx);
  return out;
}

PairSubspace build_subspace(const SystemSpec& spec, std::string label, int dim_w,
                            const Matrix& raw_pairs, const std::vector<BalancedPath>& raw_reps,
                            const Tolerances& tol) {
  PairSubspace s;
  s.label = std::move(label);
  s.dim_w = dim_w;
  if (raw_pairs.cols() == 0) {
    s.basis = Matrix(2 * dim_w, 0);
    return s;
  }
  Matrix combo;
  s.basis = orthonormalize(raw_pairs, combo, tol);
  if (!raw_reps.empty()) {
    s.reps.reserve(static_cast<size_t>(s.basis.cols()));
    for (int j = 0; j < s.basis.cols(); ++j) s.reps.push_back(combine(spec, raw_reps, combo, j));
  }
  return s;
}

// Homogeneous solution paths at λ, one per kernel column of the block
// system; a spec without atoms has the free initial vectors as its kernel.
std::vector<BalancedPath> homogeneous_paths(const SystemSpec& spec, Complex lambda,
                                            const Tolerances& tol) {
  Matrix k;
  if (spec.N() == 0) {
    k = Matrix::Identity(spec.n, spec.n);
  } else {
    k = kernel_basis(assemble(spec, lambda).B, tol);
  }
  std::vector<BalancedPath> out;
  out.reserve(static_cast<size_t>(k.cols()));
  const RightHandSide zero = RightHandSide::zero(spec);
  for (int j = 0; j < k.cols(); ++j) out.push_back(propagate_path(spec, lambda, k.col(j), zero));
  return out;
}

// Classes of the vanishing homogeneous solutions at λ̄ = conj(λ); these span
// exactly the obstructions to solving at λ.
Matrix vanishing_witness_classes(const SystemSpec& spec, const L2Model& model, Complex lambda,
                                 const Tolerances& tol) {
  const Matrix wit = cokernel_basis(assemble(spec, lambda).B, tol);
  Matrix z(model.dim, wit.cols());
  const RightHandSide zero = RightHandSide::zero(spec);
  for (int l = 0; l < wit.cols(); ++l) {
    const Vector stack = reconstruct_from_hat(spec, std::conj(lambda), wit.col(l), tol);
    z.col(l) = class_of_path(model, propagate_path(spec, std::conj(lambda), stack, zero));
  }
  return z;
}

Matrix normalized_columns(const Matrix& z) {
  Matrix out = z;
  for (int j = 0; j < out.cols(); ++j) out.col(j) /= out.col(j).norm();
  return out;
}

// Orthonormal basis of the orthogonal complement of the columns of z.
Matrix complement_of_columns(const Matrix& z, int ambient, const Tolerances& tol) {
  if (z.cols() == 0) return Matrix::Identity(ambient, ambient);
  return kernel_basis(z.adjoint(), tol);
}

}  // namespace

L2Model l2_model(const SystemSpec& spec, const Tolerances& tol) {
  require_valid(spec, tol);
  L2Model model;
  model.n = spec.n;
  model.offset.assign(static_cast<size_t>(spec.N()) + 1, 0);
  for (int k = 0; k < spec.N(); ++k) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(spec.atoms[static_cast<size_t>(k)].dw);
    const RealVector ev = es.eigenvalues();
    const double scale = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
      if (ev[i] > tol.rank * scale && ev[i] > 0.0) keep.push_back(i);
    Matrix v(spec.n, static_cast<int>(keep.size()));
    RealVector mm(static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) {
      v.col(static_cast<int>(i)) = es.eigenvectors().col(keep[i]);
      mm[static_cast<int>(i)] = ev[keep[i]];
    }
    model.offset[static_cast<size_t>(k)] = model.dim;
    model.dim += static_cast<int>(keep.size());
    model.V.push_back(std::move(v));
    model.m.push_back(std::move(mm));
  }
  model.offset[static_cast<size_t>(spec.N())] = model.dim;
  return model;
}

Vector class_of_values(const L2Model& model, const std::vector<Vector>& values) {
  Vector z = Vector::Zero(model.dim);
  for (int k = 0; k < model.blocks(); ++k) {
    const int r = model.rank(k);
    if (r == 0) continue;
    if (static_cast<size_t>(k) >= values.size()) continue;
    const Vector& val = values[static_cast<size_t>(k)];
    if (val.size() == 0) continue;
    const Vector proj = model.V[static_cast<size_t>(k)].adjoint() * val;
    z.segment(model.offset[static_cast<size_t>(k)], r) =
        proj.cwiseProduct(model.m[static_cast<size_t>(k)].cwiseSqrt().cast<Complex>());
  }
  return z;
}

Vector class_of_path(const L2Model& model, const BalancedPath& path) {
  std::vector<Vector> mids;
  mids.reserve(path.atom.size());
  for (const auto& tr : path.atom) mids.push_back(tr.mid);
  return class_of_values(model, mids);
}

Vector class_of_rhs(const L2Model& model, const RightHandSide& f) {
  return class_of_values(model, f.atom);
}

std::vector<Vector> values_of_class(const L2Model& model, const Vector& z) {
  std::vector<Vector> out;
  out.reserve(static_cast<size_t>(model.blocks()));
  for (int k = 0; k < model.blocks(); ++k) {
    const int r = model.rank(k);
    if (r == 0) {
      out.push_back(Vector::Zero(model.n));
      continue;
    }
    const Vector zk = z.segment(model.offset[static_cast<size_t>(k)], r);
    const Vector scaled =
        zk.cwiseQuotient(model.m[static_cast<size_t>(k)].cwiseSqrt().cast<Complex>());
    out.push_back(model.V[static_cast<size_t>(k)] * scaled);
  }
  return out;
}

RightHandSide rhs_of_class(const SystemSpec& spec, const L2Model& model, const Vector& z) {
  RightHandSide f = RightHandSide::zero(spec);
  f.atom = values_of_class(model, z);
  return f;
}

Complex inner_product(const SystemSpec& spec, const RightHandSide& f, const RightHandSide& g) {
  Complex acc = 0.0;
  for (int k = 0; k < spec.N(); ++k) {
    if (static_cast<size_t>(k) >= f.atom.size() || static_cast<size_t>(k) >= g.atom.size())
      continue;
    const Vector& fk = f.atom[static_cast<size_t>(k)];
    const Vector& gk = g.atom[static_cast<size_t>(k)];
    if (fk.size() == 0 || gk.size() == 0) continue;
    acc += fk.dot(spec.atoms[static_cast<size_t>(k)].dw * gk);
  }
  for (int j = 0; j <= spec.N(); ++j) {
    const Matrix w = spec.gap_W(j);
    if (max_abs(w) == 0.0) continue;
    if (static_cast<size_t>(j) >= f.gap.size() || static_cast<size_t>(j) >= g.gap.size()) continue;
    const Vector& fj = f.gap[static_cast<size_t>(j)];
    const Vector& gj = g.gap[static_cast<size_t>(j)];
    if (fj.size() == 0 || gj.size() == 0) continue;
    acc += spec.gap_length(j) * fj.dot(w * gj);
  }
  return acc;
}

std::vector<BalancedPath> l0_basis(const SystemSpec& spec, const Tolerances& tol) {
  require_valid(spec, tol);
  const int n = spec.n;
  const int nn = spec.N();
  Matrix k;
  Matrix dmat;
  if (nn == 0) {
    k = Matrix::Identity(n, n);
  } else {
    const BlockSystem bs = assemble(spec, Complex(0.0));
    k = kernel_basis(bs.B, tol);
    dmat = bs.D;
  }
  if (k.cols() == 0) return {};

  // A constraint block whose image of the kernel is already at noise level
  // holds identically and is dropped rather than fed to rank decisions.
  std::vector<Matrix> rows;
  auto push_block = [&](const Matrix& weight, const Matrix& operand) {
    const Matrix block = weight * operand;
    const double scale = max_abs(weight) * std::max(1.0, max_abs(operand));
    if (max_abs(block) > tol.rank * scale) rows.push_back(block);
  };
  if (nn > 0) {
    const Matrix balanced = dmat * k;
    for (int a = 0; a < nn; ++a) {
      const Matrix& dw = spec.atoms[static_cast<size_t>(a)].dw;
      if (max_abs(dw) == 0.0) continue;
      push_block(dw, balanced.middleRows(n * a, n));
    }
  }
  for (int j = 0; j <= nn; ++j) {
    const Matrix w = spec.gap_W(j);
    if (max_abs(w) == 0.0) continue;
    const Matrix a = gap_generator(spec, j, Complex(0.0));
    const Matrix cj = k.middleRows(n * j, n);
    Matrix power = cj;
    for (int p = 0; p < n; ++p) {
      push_block(w, power);
      power = a * power;
    }
  }

  Matrix y;
  if (rows.empty()) {
    y = Matrix::Identity(k.cols(), k.cols());
  } else {
    int total = 0;
    for (const auto& r : rows) total += static_cast<int>(r.rows());
    Matrix c(total, k.cols());
    int at = 0;
    for (const auto& r : rows) {
      c.middleRows(at, static_cast<int>(r.rows())) = r;
      at += static_cast<int>(r.rows());
    }
    y = kernel_basis(c, tol);
  }

  const Matrix stacks = k * y;
  std::vector<BalancedPath> out;
  out.reserve(static_cast<size_t>(stacks.cols()));
  const RightHandSide zero = RightHandSide::zero(spec);
  for (int j = 0; j < stacks.cols(); ++j)
    out.push_back(propagate_path(spec, Complex(0.0), stacks.col(j), zero));
  return out;
}

Matrix pair_form_matrix(const Matrix& a, const Matrix& b) {
  const int dw = static_cast<int>(a.rows()) / 2;
  const Matrix atop = a.topRows(dw), abot = a.bottomRows(dw);
  const Matrix btop = b.topRows(dw), bbot = b.bottomRows(dw);
  return atop.adjoint() * bbot - abot.adjoint() * btop;
}

PairSubspace tmax_subspace(const SystemSpec& spec, const L2Model& model, const Tolerances& tol) {
  require_atomic(spec, "tmax_subspace");
  if (spec.N() == 0 || model.dim == 0)
    return build_subspace(spec, "Tmax", model.dim, Matrix(2 * model.dim, 0), {}, tol);

  const double floor_norm = class_floor(model, tol);
  Matrix zw = vanishing_witness_classes(spec, model, Complex(0.0), tol);
  zw = drop_small_columns(zw, floor_norm);
  const Matrix solvable_classes =
      complement_of_columns(zw.cols() ? normalized_columns(zw) : zw, model.dim, tol);

  std::vector<BalancedPath> reps;
  const int s = static_cast<int>(solvable_classes.cols());
  for (int j = 0; j < s; ++j) {
    const RightHandSide f = rhs_of_class(spec, model, solvable_classes.col(j));
    const SolveResult res = solve_nonhomogeneous(spec, Complex(0.0), f, tol);
    if (!res.solvable())
      throw InternalDisagreement("class predicted solvable was rejected by the solver");
    reps.push_back(propagate_path(spec, Complex(0.0), res.solution->particular, f));
  }
  // Homogeneous solutions with noise-level class are the zero element of
  // the relation; keeping them would feed junk columns to the basis build.
  std::vector<Vector> hom_classes;
  for (BalancedPath& path : homogeneous_paths(spec, Complex(0.0), tol)) {
    Vector z = class_of_path(model, path);
    if (z.norm() <= floor_norm) continue;
    hom_classes.push_back(std::move(z));
    reps.push_back(std::move(path));
  }

  Matrix raw(2 * model.dim, s + static_cast<int>(hom_classes.size()));
  for (int j = 0; j < s; ++j) {
    raw.col(j).head(model.dim) = class_of_path(model, reps[static_cast<size_t>(j)]);
    raw.col(j).tail(model.dim) = solvable_classes.col(j);
  }
  for (size_t h = 0; h < hom_classes.size(); ++h) {
    const int j = s + static_cast<int>(h);
    raw.col(j).head(model.dim) = hom_classes[h];
    raw.col(j).tail(model.dim).setZero();
  }
  return build_subspace(spec, "Tmax", model.dim, raw, reps, tol);
}

PairSubspace tmin_closure_subspace(const SystemSpec& spec, const L2Model& model,
                                   const Tolerances& tol) {
  require_atomic(spec, "tmin_closure_subspace");
  if (spec.N() == 0 || model.dim == 0)
    return build_subspace(spec, "TminClosure", model.dim, Matrix(2 * model.dim, 0), {}, tol);

  const double floor_norm = class_floor(model, tol);
  const std::vector<BalancedPath> hom = homogeneous_paths(spec, Complex(0.0), tol);
  Matrix zhom(model.dim, static_cast<int>(hom.size()));
  for (size_t h = 0; h < hom.size(); ++h)
    zhom.col(static_cast<int>(h)) = class_of_path(model, hom[h]);
  zhom = drop_small_columns(zhom, floor_norm);
  const Matrix vanish_classes =
      complement_of_columns(zhom.cols() ? normalized_columns(zhom) : zhom, model.dim, tol);

  std::vector<BalancedPath> reps;
  const int s = static_cast<int>(vanish_classes.cols());
  for (int j = 0; j < s; ++j) {
    const RightHandSide f = rhs_of_class(spec, model, vanish_classes.col(j));
    const SolveResult res = solve_vanishing(spec, Complex(0.0), f, tol);
    if (!res.solvable())
      throw InternalDisagreement(
          "class orthogonal to every homogeneous solution has no vanishing solution");
    reps.push_back(propagate_path(spec, Complex(0.0), res.solution->particular, f));
  }

  // Compactly supported homogeneous solutions: kernel of the vanishing
  // solve, already embedded as full stacks with zero end blocks.  Noise-level
  // classes are the zero element and are skipped.
  const SolveResult hom0 = solve_vanishing(spec, Complex(0.0), RightHandSide::zero(spec), tol);
  std::vector<Vector> compact_classes;
  const RightHandSide zero = RightHandSide::zero(spec);
  if (hom0.solvable()) {
    const Matrix& compact = hom0.solution->kernel;
    for (int h = 0; h < compact.cols(); ++h) {
      BalancedPath path = propagate_path(spec, Complex(0.0), compact.col(h), zero);
      Vector z = class_of_path(model, path);
      if (z.norm() <= floor_norm) continue;
      compact_classes.push_back(std::move(z));
      reps.push_back(std::move(path));
    }
  }

  Matrix raw(2 * model.dim, s + static_cast<int>(compact_classes.size()));
  for (int j = 0; j < s; ++j) {
    raw.col(j).head(model.dim) = class_of_path(model, reps[static_cast<size_t>(j)]);
    raw.col(j).tail(model.dim) = vanish_classes.col(j);
  }
  for (size_t h = 0; h < compact_classes.size(); ++h) {
    const int j = s + static_cast<int>(h);
    raw.col(j).head(model.dim) = compact_classes[h];
    raw.col(j).tail(model.dim).setZero();
  }
  return build_subspace(spec, "TminClosure", model.dim, raw, reps, tol);
}

PairSubspace adjoint_subspace(const L2Model& model, const PairSubspace& s, const Tolerances& tol) {
  const int dw = s.dim_w;
  Matrix flipped(2 * dw, s.dim());
  if (s.dim() > 0) {
    flipped.topRows(dw) = -s.basis.bottomRows(dw);
    flipped.bottomRows(dw) = s.basis.topRows(dw);
  }
  PairSubspace out;
  out.label = "Adjoint(" + s.label + ")";
  out.dim_w = dw;
  out.basis = complement_of_columns(flipped, 2 * dw, tol);
  (void)model;
  return out;
}

DeficiencySpace deficiency(const SystemSpec& spec, const L2Model& model, Complex lambda,
                           const Tolerances& tol) {
  require_atomic(spec, "deficiency");
  if (std::abs(lambda.imag()) == 0.0)
    throw OutOfDomain("deficiency index needs a non-real lambda");

  DeficiencySpace d;
  d.lambda = lambda;
  d.space.label = "Dlambda";
  d.space.dim_w = model.dim;
  d.space.basis = Matrix(2 * model.dim, 0);
  if (spec.N() == 0 || model.dim == 0) return d;

  std::vector<BalancedPath> paths = homogeneous_paths(spec, lambda, tol);
  Matrix z(model.dim, static_cast<int>(paths.size()));
  for (size_t j = 0; j < paths.size(); ++j)
    z.col(static_cast<int>(j)) = class_of_path(model, paths[j]);
  std::vector<int> kept;
  z = drop_small_columns(z, class_floor(model, tol), &kept);
  if (z.cols() == 0) return d;

  // Normalize the surviving classes so the relative drop threshold inside
  // the orthonormalization cannot discard a genuine small one; the rep
  // combination divides the factors back out.
  std::vector<double> col_norm(static_cast<size_t>(z.cols()));
  for (int j = 0; j < z.cols(); ++j) {
    col_norm[static_cast<size_t>(j)] = z.col(j).norm();
    z.col(j) /= col_norm[static_cast<size_t>(j)];
  }

  Matrix combo;
  const Matrix zon = orthonormalize(z, combo, tol);
  const int nl = static_cast<int>(zon.cols());
  if (nl > spec.n)
    throw InternalDisagreement("deficiency rank exceeded the system dimension");

  const double scale = 1.0 / std::sqrt(1.0 + std::norm(lambda));
  d.space.basis = Matrix(2 * model.dim, nl);
  d.space.basis.topRows(model.dim) = scale * zon;
  d.space.basis.bottomRows(model.dim) = (lambda * scale) * zon;
  d.index = nl;

  // The carrier of column j re-expresses the eigensolution as a pair at the
  // base equation: same path, right-hand side λ·(balanced values).
  for (int j = 0; j < nl; ++j) {
    BalancedPath acc = zero_pair(spec);
    for (int i = 0; i < combo.rows(); ++i) {
      const BalancedPath& src = paths[static_cast<size_t>(kept[static_cast<size_t>(i)])];
      BalancedPath pair = src;
      pair.lambda = 0.0;
      pair.rhs = RightHandSide::zero(spec);
      for (int a = 0; a < spec.N(); ++a)
        pair.rhs.atom[static_cast<size_t>(a)] = lambda * src.atom[static_cast<size_t>(a)].mid;
      add_scaled(acc, scale * combo(i, j) / col_norm[static_cast<size_t>(i)], pair);
    }
    d.space.reps.push_back(std::move(acc));
  }
  return d;
}

Complex boundary_form(const SystemSpec& spec, const BalancedPath& uf, const BalancedPath& vg) {
  return vg.end.dot(spec.J * uf.end) - vg.start.dot(spec.J * uf.start);
}

std::vector<BoundaryCondition> conditions_from_coefficients(const DeficiencySpace& dplus,
                                                            const DeficiencySpace& dminus,
                                                            const Matrix& coeffs) {
  const int d = dplus.index + dminus.index;
  if (coeffs.rows() != d)
    throw InvalidSpec("boundary coefficient vectors must have length n_plus + n_minus");
  if (!dplus.space.has_reps() || !dminus.space.has_reps())
    throw InvalidSpec("deficiency spaces must carry path representatives");

  std::vector<BoundaryCondition> out;
  out.reserve(static_cast<size_t>(coeffs.cols()));
  for (int j = 0; j < coeffs.cols(); ++j) {
    Vector klass = Vector::Zero(2 * dplus.space.dim_w);
    if (dplus.index > 0) klass += dplus.space.basis * coeffs.col(j).head(dplus.index);
    if (dminus.index > 0) klass += dminus.space.basis * coeffs.col(j).tail(dminus.index);
    const double norm = klass.norm();
    if (norm == 0.0) throw InvalidSpec("boundary condition vector is zero");

    BoundaryCondition cond;
    cond.klass = klass / norm;
    BalancedPath acc;
    bool first = true;
    for (int i = 0; i < dplus.index; ++i) {
      const Complex a = coeffs(i, j) / norm;
      if (first) {
        acc = dplus.space.reps[static_cast<size_t>(i)];
        scale_path(acc, a);
        first = false;
      } else {
        add_scaled(acc, a, dplus.space.reps[static_cast<size_t>(i)]);
      }
    }
    for (int i = 0; i < dminus.index; ++i) {
      const Complex a = coeffs(dplus.index + i, j) / norm;
      if (first) {
        acc = dminus.space.reps[static_cast<size_t>(i)];
        scale_path(acc, a);
        first = false;
      } else {
        add_scaled(acc, a, dminus.space.reps[static_cast<size_t>(i)]);
      }
    }
    cond.rep = std::move(acc);
    out.push_back(std::move(cond));
  }
  return out;
}

BoundaryData make_boundary_data(const DeficiencySpace& dplus, const DeficiencySpace& dminus,
                                const Matrix& coeffs) {
  BoundaryData data;
  data.conditions = conditions_from_coefficients(dplus, dminus, coeffs);
  data.n_plus = dplus.index;
  data.n_minus = dminus.index;
  return data;
}

Restriction restriction_from_conditions(const SystemSpec& spec, const L2Model& model,
                                        const PairSubspace& tmax, BoundaryData boundary,
                                        const Tolerances& tol) {
  const int c = static_cast<int>(boundary.conditions.size());
  const int d = boundary.d();

  Matrix cond(2 * model.dim, c);
  for (int j = 0; j < c; ++j) cond.col(j) = boundary.conditions[static_cast<size_t>(j)].klass;
  boundary.form = pair_form_matrix(cond, cond);

  Restriction out;
  out.domain.label = "Restriction";
  out.domain.dim_w = model.dim;

  if (c == 0) {
    out.domain.basis = tmax.basis;
    out.domain.reps = tmax.reps;
  } else {
    const Matrix functionals = pair_form_matrix(cond, tmax.basis);
    if (stable_rank(functionals, tol) < c)
      throw DependentConditions("boundary functionals are dependent on the maximal relation");
    const Matrix y = kernel_basis(functionals, tol);
    out.domain.basis = tmax.basis * y;
    if (tmax.has_reps())
      for (int j = 0; j < y.cols(); ++j) out.domain.reps.push_back(combine(spec, tmax.reps, y, j));
  }

  int rank_form = 0;
  if (c > 0 && max_abs(boundary.form) > tol.lin) rank_form = stable_rank(boundary.form, tol);
  if (rank_form == 2 * c - d)
    out.cls = rank_form == 0 ? RestrictionClass::SelfAdjoint : RestrictionClass::Symmetric;
  else
    out.cls = RestrictionClass::NonSymmetric;

  const PairSubspace adj = adjoint_subspace(model, out.domain, tol);
  const double angle_tol = 1e-8;
  const bool contained = out.domain.dim() == 0 ||
                         span_contained(out.domain.basis, adj.basis, angle_tol);
  const bool equal = contained && out.domain.dim() == adj.dim();
  const bool ok = out.cls == RestrictionClass::SelfAdjoint ? equal
                  : out.cls == RestrictionClass::Symmetric ? contained
                                                           : !contained;
  if (!ok)
    throw InternalDisagreement("boundary-form classification contradicts the computed adjoint");

  out.boundary = std::move(boundary);
  return out;
}

}  // namespace mdeq
