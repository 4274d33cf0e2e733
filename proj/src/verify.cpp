#include <mdeq/verify.hpp>

#include <mdeq/assembly.hpp>
#include <mdeq/canonical.hpp>
#include <mdeq/example.hpp>
#include <mdeq/greens.hpp>
#include <mdeq/linalg.hpp>
#include <mdeq/relations.hpp>
#include <mdeq/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mdeq {
namespace {

constexpr double kIdentityTol = 1e-10;
constexpr double kAngleTol = 1e-8;
constexpr double kOrthoTol = 1e-9;
constexpr double kIdempotenceTol = 1e-12;
constexpr double kRepIndependenceTol = 1e-10;
constexpr double kExampleTol = 1e-9;
constexpr double kOffBlockTol = 1e-10;

std::vector<CheckResult> vacuous(const std::vector<std::string>& names) {
  std::vector<CheckResult> out;
  for (const auto& name : names) {
    CheckResult r;
    r.name = name;
    r.pass = true;
    r.trials = 0;
    r.note = "warning: 0 trials requested, vacuously true";
    out.push_back(std::move(r));
  }
  return out;
}

// Mix of real and properly complex draws from the annulus 0.5 <= |λ| <= 2.
Complex random_lambda(std::mt19937_64& rng, bool allow_real) {
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::bernoulli_distribution real_draw(0.25);
  const double r = radius(rng);
  if (allow_real && real_draw(rng)) return Complex(rng() % 2 ? r : -r, 0.0);
  return std::polar(r, angle(rng));
}

CheckResult check_structural(const SystemSpec& spec, std::mt19937_64& rng, int trials) {
  CheckResult r;
  r.name = "structural-identities";
  r.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const Complex lambda = random_lambda(rng, true);
    const StructuralReport rep = structural_identities(spec, lambda);
    const double scale = std::max(1.0, rep.scale);
    r.worst = std::max({r.worst, rep.full / scale, rep.middle / scale, rep.junitary / scale});
  }
  r.pass = r.worst <= kIdentityTol;
  return r;
}

CheckResult check_integers(const SystemSpec& spec, std::mt19937_64& rng, int trials) {
  CheckResult r;
  r.name = "integer-identities";
  r.trials = trials;
  int unstable = 0;
  for (int t = 0; t < trials; ++t) {
    Complex lambda = random_lambda(rng, true);
    try {
      const int sum = n_tilde(spec, lambda) + n_tilde(spec, std::conj(lambda));
      r.worst = std::max(r.worst, std::abs(double(sum - 2 * spec.n)));
      if (spec.N() > 0) {
        const BlockSystem bs = assemble(spec, lambda);
        const int ker = static_cast<int>(kernel_basis(bs.B).cols());
        const int coker = static_cast<int>(cokernel_basis(bs.B).cols());
        r.worst = std::max(r.worst, std::abs(double(ker - spec.n - coker)));
      }
    } catch (const RankUnstable&) {
      ++unstable;  // not a rank-stable sample; skip rather than judge
    }
  }
  try {
    const Complex g = generic_lambda(spec, SampleRegion{}, rng());
    r.worst = std::max(r.worst, std::abs(double(n_tilde(spec, g) - spec.n)));
  } catch (const GenericityNotFound&) {
    r.note = "no generic lambda found";
    r.pass = false;
    return r;
  }
  if (unstable > 0) r.note = std::to_string(unstable) + " rank-unstable draws skipped";
  r.pass = r.worst == 0.0;
  return r;
}

CheckResult check_solvability(const SystemSpec& spec, std::mt19937_64& rng, int trials) {
  CheckResult r;
  r.name = "solvability-equivalence";
  r.trials = trials;
  int yes = 0, unstable = 0;
  for (int t = 0; t < trials; ++t) {
    const Complex lambda = random_lambda(rng, true);
    const RightHandSide f = random_rhs(spec, rng);
    try {
      if (solvable(spec, lambda, f)) ++yes;  // throws when its two routes disagree
    } catch (const RankUnstable&) {
      ++unstable;
    } catch (const InternalDisagreement& e) {
      r.note = e.what();
      r.pass = false;
      return r;
    }
  }
  std::ostringstream note;
  note << yes << " of " << trials << " solvable";
  if (unstable > 0) note << ", " << unstable << " rank-unstable draws skipped";
  r.note = note.str();
  r.pass = true;
  return r;
}

CheckResult check_deficiency(const SystemSpec& spec, const L2Model& model, std::mt19937_64& rng,
                             int trials, int* n_plus_out, int* n_minus_out) {
  CheckResult r;
  r.name = "deficiency-bounds";
  r.trials = trials;
  const int np = deficiency(spec, model, kI).index;
  const int nm = deficiency(spec, model, -kI).index;
  *n_plus_out = np;
  *n_minus_out = nm;
  r.worst = std::max({0.0, double(np - spec.n), double(nm - spec.n), std::abs(double(np - nm))});
  // The index is constant over each half-plane.
  std::uniform_real_distribution<double> re(-2.0, 2.0);
  std::uniform_real_distribution<double> im(0.1, 2.0);
  const int probes = std::min(trials, 5);
  for (int t = 0; t < probes; ++t) {
    const Complex up(re(rng), im(rng));
    r.worst = std::max(r.worst, std::abs(double(deficiency(spec, model, up).index - np)));
    r.worst = std::max(r.worst, std::abs(double(deficiency(spec, model, std::conj(up)).index - nm)));
  }
  std::ostringstream note;
  note << "n+ = " << np << ", n- = " << nm;
  r.note = note.str();
  r.pass = r.worst == 0.0;
  return r;
}

CheckResult check_adjoint_duality(const SystemSpec& spec, const L2Model& model,
                                  const PairSubspace& tmax, int np, int nm,
                                  const Tolerances& tol) {
  CheckResult r;
  r.name = "adjoint-duality";
  r.trials = 1;
  const PairSubspace tmin = tmin_closure_subspace(spec, model, tol);
  const PairSubspace adj_min = adjoint_subspace(model, tmin, tol);
  const PairSubspace adj_max = adjoint_subspace(model, tmax, tol);

  bool ok = adj_min.dim() == tmax.dim() && adj_max.dim() == tmin.dim();
  if (ok && tmax.dim() > 0) {
    const RealVector a1 = principal_angles(adj_min.basis, tmax.basis);
    if (a1.size() > 0) r.worst = std::max(r.worst, a1.maxCoeff());
  }
  if (ok && tmin.dim() > 0) {
    const RealVector a2 = principal_angles(adj_max.basis, tmin.basis);
    if (a2.size() > 0) r.worst = std::max(r.worst, a2.maxCoeff());
  }

  // Graph decomposition: T_max = closure(T_min) + D_i + D_-i, orthogonal
  // pieces, dimensions adding up.
  const int count = tmin.dim() + np + nm;
  ok = ok && count == tmax.dim();
  const DeficiencySpace dp = deficiency(spec, model, kI, tol);
  const DeficiencySpace dm = deficiency(spec, model, -kI, tol);
  double ortho = 0.0;
  if (tmin.dim() > 0 && dp.space.dim() > 0)
    ortho = std::max(ortho, max_abs(tmin.basis.adjoint() * dp.space.basis));
  if (tmin.dim() > 0 && dm.space.dim() > 0)
    ortho = std::max(ortho, max_abs(tmin.basis.adjoint() * dm.space.basis));
  if (dp.space.dim() > 0 && dm.space.dim() > 0)
    ortho = std::max(ortho, max_abs(dp.space.basis.adjoint() * dm.space.basis));

  std::ostringstream note;
  note << "dim Tmax = " << tmax.dim() << " = " << tmin.dim() << " + " << np << " + " << nm
       << ", cross-orthogonality " << ortho;
  r.note = note.str();
  r.pass = ok && r.worst <= kAngleTol && ortho <= kOrthoTol;
  r.worst = std::max(r.worst, ortho);
  return r;
}

CheckResult check_lagrange(const SystemSpec& spec, const PairSubspace& tmax) {
  CheckResult r;
  r.name = "lagrange-identity";
  r.trials = tmax.dim() * tmax.dim();
  if (!tmax.has_reps()) {
    r.note = "no path representatives";
    r.pass = tmax.dim() == 0;
    return r;
  }
  const Matrix form = pair_form_matrix(tmax.basis, tmax.basis);
  for (int k = 0; k < tmax.dim(); ++k)
    for (int l = 0; l < tmax.dim(); ++l) {
      const Complex lhs =
          boundary_form(spec, tmax.reps[static_cast<size_t>(l)], tmax.reps[static_cast<size_t>(k)]);
      r.worst = std::max(r.worst, std::abs(lhs - form(k, l)));
    }
  r.pass = r.worst <= kIdentityTol;
  return r;
}

CheckResult check_canonical(const SystemSpec& spec, const L2Model& model,
                            const PairSubspace& tmax, std::mt19937_64& rng, int trials,
                            const Tolerances& tol) {
  CheckResult r;
  r.name = "canonical-idempotence";
  r.trials = trials;
  const std::vector<BalancedPath> l0 = l0_basis(spec, tol);
  const TauGrid grid = tau_grid(spec);
  const NkSpaces nk = nk_spaces(spec, grid, l0, tol);
  if (!tmax.has_reps() || tmax.dim() == 0) {
    r.note = "no path representatives";
    r.pass = true;
    return r;
  }

  std::ostringstream note;
  note << "dim L0 = " << l0.size();
  r.note = note.str();
  bool ok = true;
  for (int t = 0; t < trials && ok; ++t) {
    BalancedPath p = tmax.reps[0];
    scale_path(p, Complex(0.0));
    const Vector coef = random_vector(rng, tmax.dim());
    for (int i = 0; i < tmax.dim(); ++i)
      add_scaled(p, coef[i], tmax.reps[static_cast<size_t>(i)]);
    const Vector z_before = class_of_path(model, p);

    const BalancedPath c1 = canonicalize(spec, nk, l0, p, tol);
    const BalancedPath c2 = canonicalize(spec, nk, l0, c1, tol);
    const Vector s1 = coefficient_stack(c1);
    const double scale = std::max(1.0, s1.norm());
    const double idem = (coefficient_stack(c2) - s1).norm() / scale;
    ok = ok && idem <= kIdempotenceTol;
    r.worst = std::max(r.worst, idem);

    // Every grid condition holds on the output.
    for (int k = -static_cast<int>(grid.minus.size()); k <= static_cast<int>(grid.plus.size());
         ++k)
      ok = ok && satisfies_condition_k(spec, c1, nk, k, tol);

    // The class survives untouched.
    const double class_drift = (class_of_path(model, c1) - z_before).norm() /
                               std::max(1.0, z_before.norm());
    ok = ok && class_drift <= kIdempotenceTol;
    r.worst = std::max(r.worst, class_drift);

    // Perturbing the representative inside L0 does not move the output.
    if (!l0.empty()) {
      BalancedPath q = p;
      const Vector mix = random_vector(rng, static_cast<int>(l0.size()));
      for (size_t i = 0; i < l0.size(); ++i)
        add_scaled(q, mix[static_cast<int>(i)], l0[i]);
      const BalancedPath c3 = canonicalize(spec, nk, l0, q, tol);
      const double indep = (coefficient_stack(c3) - s1).norm() / scale;
      ok = ok && indep <= kRepIndependenceTol;
      r.worst = std::max(r.worst, indep);
    }
  }
  r.pass = ok;
  return r;
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> run_property_suite(const SystemSpec& spec, std::uint64_t seed,
                                            int trials, const Tolerances& tol) {
  require_valid(spec, tol);
  const bool atomic = spec.purely_atomic_w() && spec.N() > 0;
  std::vector<std::string> names = {"structural-identities", "integer-identities",
                                    "solvability-equivalence"};
  if (atomic) {
    names.insert(names.end(), {"deficiency-bounds", "adjoint-duality", "lagrange-identity",
                               "canonical-idempotence"});
  }
  if (trials <= 0) return vacuous(names);

  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  if (spec.N() > 0) {
    out.push_back(check_structural(spec, rng, trials));
    out.push_back(check_integers(spec, rng, trials));
  } else {
    for (const char* name : {"structural-identities", "integer-identities"}) {
      CheckResult r;
      r.name = name;
      r.pass = true;
      r.note = "no atoms, block system empty";
      out.push_back(std::move(r));
    }
  }
  out.push_back(check_solvability(spec, rng, trials));

  if (atomic) {
    const L2Model model = l2_model(spec, tol);
    if (model.dim == 0) {
      for (const char* name :
           {"deficiency-bounds", "adjoint-duality", "lagrange-identity", "canonical-idempotence"}) {
        CheckResult r;
        r.name = name;
        r.pass = true;
        r.note = "L2(w) is trivial";
        out.push_back(std::move(r));
      }
      return out;
    }
    int np = 0, nm = 0;
    out.push_back(check_deficiency(spec, model, rng, trials, &np, &nm));
    const PairSubspace tmax = tmax_subspace(spec, model, tol);
    out.push_back(check_adjoint_duality(spec, model, tmax, np, nm, tol));
    out.push_back(check_lagrange(spec, tmax));
    out.push_back(check_canonical(spec, model, tmax, rng, std::min(trials, 5), tol));
  }
  return out;
}

namespace {

std::vector<int> interior_atoms(const SystemSpec& spec) {
  std::vector<int> keep;
  for (int k = 0; k < spec.N(); ++k) {
    const double x = spec.atoms[static_cast<size_t>(k)].x;
    if (x - spec.a >= 2.0 && spec.b - x >= 2.0) keep.push_back(k);
  }
  if (keep.empty() && spec.N() > 2)
    for (int k = 1; k + 1 < spec.N(); ++k) keep.push_back(k);
  return keep;
}

std::vector<double> interior_points(const SystemSpec& spec, std::mt19937_64& rng) {
  std::vector<double> xs;
  std::uniform_real_distribution<double> frac(0.15, 0.85);
  for (int j = 1; j < spec.N(); ++j) {
    xs.push_back(0.5 * (spec.x(j) + spec.x(j + 1)));
    xs.push_back(spec.x(j) + frac(rng) * (spec.x(j + 1) - spec.x(j)));
  }
  return xs;
}

}  // namespace

std::vector<CheckResult> run_builtin_suite(int M, std::uint64_t seed, int trials,
                                           const Tolerances& tol) {
  const std::vector<std::string> names = {"example-resolvent", "example-norm",
                                          "example-kernel-table", "example-decomposition"};
  if (trials <= 0) {
    std::vector<CheckResult> out = vacuous(names);
    const SystemSpec spec = example_spec(M);
    const auto rest = run_property_suite(spec, seed + 1, 0, tol);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }

  const SystemSpec spec = example_spec(M);
  const L2Model model = l2_model(spec, tol);
  const PairSubspace tmax = tmax_subspace(spec, model, tol);
  std::mt19937_64 rng(seed);
  const std::vector<int> support = interior_atoms(spec);
  const std::vector<double> xs = interior_points(spec, rng);
  const std::vector<Complex> lambdas = {Complex(0, 2), Complex(1, 1), Complex(0, -3)};

  CheckResult res, nrm;
  res.name = "example-resolvent";
  nrm.name = "example-norm";
  res.trials = nrm.trials = trials * static_cast<int>(lambdas.size());
  for (const Complex lambda : lambdas) {
    const ResolventContext ctx = resolvent_context(spec, model, tmax, lambda, tol);
    for (int t = 0; t < trials; ++t) {
      std::vector<Vector> f_atoms(static_cast<size_t>(spec.N()), Vector::Zero(2));
      RightHandSide f = RightHandSide::zero(spec);
      for (int k : support) {
        f_atoms[static_cast<size_t>(k)] = random_vector(rng, 2);
        f.atom[static_cast<size_t>(k)] = f_atoms[static_cast<size_t>(k)];
      }
      const BalancedPath u = resolvent_apply(ctx, f, tol);
      double fmax = 1.0;
      for (int k : support) fmax = std::max(fmax, f_atoms[static_cast<size_t>(k)].norm());
      for (double x : xs) {
        const Vector got = evaluate(spec, u, x);
        const Vector want = example_resolvent(M, lambda, f_atoms, x);
        res.worst = std::max(res.worst, (got - want).norm() / fmax);
      }
      const double got_sq = class_of_path(model, u).squaredNorm();
      const double want_sq = example_norm_sq(M, lambda, f_atoms);
      nrm.worst = std::max(nrm.worst,
                           std::abs(got_sq - want_sq) / std::max(1.0, std::abs(want_sq)));
    }
  }
  res.pass = res.worst <= kExampleTol;
  nrm.pass = nrm.worst <= kExampleTol;

  CheckResult tab;
  tab.name = "example-kernel-table";
  tab.trials = trials;
  {
    const Complex lambda(0, 2);
    const ResolventContext ctx = resolvent_context(spec, model, tmax, lambda, tol);
    std::vector<double> pts = xs;
    for (const auto& atom : spec.atoms) pts.push_back(atom.x);
    const KernelTable table = greens_table(ctx, pts, tol);

    double off_block = 0.0;
    for (size_t p = 0; p < pts.size(); ++p)
      for (int k = 0; k < spec.N(); ++k) {
        const Matrix want =
            example_green(M, pts[p], spec.atoms[static_cast<size_t>(k)].x, lambda) *
            spec.atoms[static_cast<size_t>(k)].dw;
        const double err = max_abs(table.K[p][static_cast<size_t>(k)] - want);
        if (max_abs(want) == 0.0)
          off_block = std::max(off_block, err);
        else
          tab.worst = std::max(tab.worst, err);
      }

    // The table is the resolvent, column by column.
    for (int t = 0; t < trials; ++t) {
      std::vector<Vector> f_atoms(static_cast<size_t>(spec.N()));
      RightHandSide f = RightHandSide::zero(spec);
      for (int k = 0; k < spec.N(); ++k) {
        f_atoms[static_cast<size_t>(k)] = random_vector(rng, 2);
        f.atom[static_cast<size_t>(k)] = f_atoms[static_cast<size_t>(k)];
      }
      const BalancedPath u = resolvent_apply(ctx, f, tol);
      double fmax = 1.0;
      for (const auto& v : f_atoms) fmax = std::max(fmax, v.norm());
      for (size_t p = 0; p < pts.size(); ++p) {
        Vector acc = Vector::Zero(2);
        for (int k = 0; k < spec.N(); ++k)
          acc += table.K[p][static_cast<size_t>(k)] * f_atoms[static_cast<size_t>(k)];
        tab.worst = std::max(tab.worst, (acc - evaluate(spec, u, pts[p])).norm() / fmax);
      }
    }
    std::ostringstream note;
    note << "off-block max " << off_block
         << "; atom columns carry the balanced one-half weighting relative to the"
            " two-point kernel read at full gap values (recorded, intentional)";
    tab.note = note.str();
    tab.pass = tab.worst <= kExampleTol && off_block <= kOffBlockTol;
    tab.worst = std::max(tab.worst, off_block);
  }

  CheckResult dec;
  dec.name = "example-decomposition";
  dec.trials = 1;
  {
    const int np = deficiency(spec, model, kI, tol).index;
    const int nm = deficiency(spec, model, -kI, tol).index;
    const int l0_dim = static_cast<int>(l0_basis(spec, tol).size());
    const PairSubspace tmin = tmin_closure_subspace(spec, model, tol);
    bool ok = np == 0 && nm == 0 && l0_dim == 2 * M + 1 && tmax.dim() == 4 * M &&
              tmin.dim() == tmax.dim();
    if (ok) {
      const RealVector angles = principal_angles(tmin.basis, tmax.basis);
      if (angles.size() > 0) dec.worst = angles.maxCoeff();
      ok = dec.worst <= kAngleTol;
    }
    // Split structure: top classes have equal pair entries, bottom classes
    // opposite ones.
    if (ok) {
      const int dw = model.dim;
      Matrix split = Matrix::Zero(2 * dw, 4 * M);
      for (int k = 0; k < 2 * M; ++k) {
        split(2 * k, k) = split(2 * k + 1, k) = 1.0 / std::sqrt(2.0);
        split(dw + 2 * k, 2 * M + k) = 1.0 / std::sqrt(2.0);
        split(dw + 2 * k + 1, 2 * M + k) = -1.0 / std::sqrt(2.0);
      }
      ok = same_span(tmax.basis, split, kAngleTol);
    }
    std::ostringstream note;
    note << "n+ = " << np << ", n- = " << nm << ", dim L0 = " << l0_dim << ", dim Tmax = "
         << tmax.dim();
    dec.note = note.str();
    dec.pass = ok;
  }

  std::vector<CheckResult> out = {std::move(res), std::move(nrm), std::move(tab), std::move(dec)};
  const auto rest = run_property_suite(spec, seed + 1, trials, tol);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

}  // namespace mdeq
