#include <mdeq/assembly.hpp>

#include <mdeq/linalg.hpp>

#include <cmath>
#include <random>

namespace mdeq {

BlockSystem assemble(const SystemSpec& spec, Complex lambda) {
  const int n = spec.n;
  const int N = spec.N();
  if (N == 0) throw EmptyPartition("no atoms: nothing to assemble");
  BlockSystem bs;
  bs.lambda = lambda;
  bs.B = Matrix::Zero(n * N, n * (N + 1));
  bs.D = Matrix::Zero(n * N, n * (N + 1));
  bs.U = Matrix::Zero(n * N, n * N);
  for (int k = 0; k < N; ++k) {
    const JumpPair jp = jump_matrices(spec, k, lambda);
    const Matrix u = transfer_matrix(spec, k, spec.x(k + 1), lambda);
    bs.U.block(k * n, k * n, n, n) = u;
    bs.B.block(k * n, k * n, n, n) = -jp.minus * u;
    bs.B.block(k * n, (k + 1) * n, n, n) = jp.plus;
    bs.D.block(k * n, k * n, n, n) = 0.5 * u;
    bs.D.block(k * n, (k + 1) * n, n, n) = 0.5 * Matrix::Identity(n, n);
  }
  const int mid = n * (N - 1);
  bs.Bm = bs.B.middleCols(n, mid);
  bs.Dm = bs.D.middleCols(n, mid);
  return bs;
}

RhsVector assemble_rhs(const SystemSpec& spec, Complex lambda, const RightHandSide& f) {
  const int n = spec.n;
  const int N = spec.N();
  if (N == 0) throw EmptyPartition("no atoms: nothing to assemble");
  RhsVector r;
  r.R = Vector::Zero(n * N);
  r.F0 = Vector::Zero(n * N);
  r.Itilde = Vector::Zero(n * N);
  r.I.resize(static_cast<size_t>(N + 1));
  for (int j = 0; j <= N; ++j) r.I[static_cast<size_t>(j)] = gap_integral(spec, j, f, lambda);
  const auto lu = spec.J.partialPivLu();
  for (int k = 0; k < N; ++k) {
    const Atom& at = spec.atoms[static_cast<size_t>(k)];
    Vector fk = f.atom.empty() ? Vector::Zero(n) : f.atom[static_cast<size_t>(k)];
    r.R.segment(k * n, n) = at.dw * fk;
    const JumpPair jp = jump_matrices(spec, k, lambda);
    const Matrix u = transfer_matrix(spec, k, spec.x(k + 1), lambda);
    r.F0.segment(k * n, n) =
        r.R.segment(k * n, n) + jp.minus * (u * lu.solve(r.I[static_cast<size_t>(k)]));
  }
  r.Itilde.segment((N - 1) * n, n) = r.I[static_cast<size_t>(N)];
  return r;
}

namespace {

double pairing_scale(const Vector& f0) { return std::max(1.0, f0.norm()); }

}  // namespace

SolveResult solve_nonhomogeneous(const SystemSpec& spec, Complex lambda,
                                 const RightHandSide& f, const Tolerances& tol) {
  const BlockSystem bs = assemble(spec, lambda);
  const RhsVector rhs = assemble_rhs(spec, lambda, f);
  const double scale = pairing_scale(rhs.F0);

  // Route one: adjoint witnesses.
  const Matrix wit = cokernel_basis(bs.B, tol);
  std::vector<Obstruction> obstructions;
  for (int i = 0; i < wit.cols(); ++i) {
    const Complex p = wit.col(i).dot(rhs.F0);
    if (std::abs(p) > tol.solv * scale) obstructions.push_back({wit.col(i), p});
  }
  // Route two: least-squares membership in the column span.
  const Vector up = least_squares(bs.B, rhs.F0, tol.rank);
  const double res = (bs.B * up - rhs.F0).norm();
  const bool ok_pairing = obstructions.empty();
  const bool ok_residual = res <= tol.solv * scale;
  if (ok_pairing != ok_residual)
    throw InternalDisagreement("solvability: witness pairings and least-squares residual disagree");

  SolveResult out;
  out.obstructions = std::move(obstructions);
  if (ok_pairing) {
    SolutionSet s;
    s.lambda = lambda;
    s.particular = up;
    s.kernel = kernel_basis(bs.B, tol);
    out.solution = std::move(s);
  }
  return out;
}

bool solvable(const SystemSpec& spec, Complex lambda, const RightHandSide& f,
              const Tolerances& tol) {
  const BlockSystem bs = assemble(spec, lambda);
  const RhsVector rhs = assemble_rhs(spec, lambda, f);
  const double scale = pairing_scale(rhs.F0);

  // Rank test: F0 in the column span of B(λ).
  const Vector up = least_squares(bs.B, rhs.F0, tol.rank);
  const bool ok_rank = (bs.B * up - rhs.F0).norm() <= tol.solv * scale;

  // Orthogonality test: every λ̄-solution vanishing at both endpoints must
  // pair to zero with f in the measure inner product.  Such solutions are
  // exactly the reconstructions of ker B(λ)* through the balanced-value map
  // of the conjugate problem.
  const Matrix wit = cokernel_basis(bs.B, tol);
  bool ok_orth = true;
  const int n = spec.n;
  for (int i = 0; i < wit.cols() && ok_orth; ++i) {
    const Vector v_tilde = reconstruct_from_hat(spec, std::conj(lambda), wit.col(i), tol);
    const BalancedPath v = propagate_path(spec, std::conj(lambda), v_tilde,
                                          RightHandSide::zero(spec));
    Complex pairing = 0.0;
    for (int k = 0; k < spec.N(); ++k) {
      const Vector fk = f.atom.empty() ? Vector::Zero(n) : f.atom[static_cast<size_t>(k)];
      pairing += v.atom[static_cast<size_t>(k)].mid.dot(spec.atoms[static_cast<size_t>(k)].dw * fk);
    }
    for (int j = 0; j <= spec.N(); ++j) {
      pairing += v.c[static_cast<size_t>(j)].dot(rhs.I[static_cast<size_t>(j)]);
    }
    const double fmag = [&] {
      double m = 0.0;
      for (const auto& g : f.gap) m = std::max(m, g.size() ? g.norm() : 0.0);
      for (const auto& g : f.atom) m = std::max(m, g.size() ? g.norm() : 0.0);
      return m;
    }();
    if (std::abs(pairing) > tol.solv * std::max(1.0, fmag) *
                                std::max(1.0, v_tilde.norm()))
      ok_orth = false;
  }
  if (ok_rank != ok_orth)
    throw InternalDisagreement("solvability: rank test and orthogonality test disagree");
  return ok_rank;
}

SolveResult solve_vanishing(const SystemSpec& spec, Complex lambda, const RightHandSide& f,
                            const Tolerances& tol) {
  const int n = spec.n;
  const int N = spec.N();
  const BlockSystem bs = assemble(spec, lambda);
  const RhsVector rhs = assemble_rhs(spec, lambda, f);

  // G = F0 + script-B 𝒥⁻¹ Ĩ: moving the pinned last block c_N = -J⁻¹ I_N to
  // the right-hand side.  script-B is block-diagonal B+(x_k,λ), so only the
  // last block row picks up a term.
  Vector g = rhs.F0;
  {
    const JumpPair jp = jump_matrices(spec, N - 1, lambda);
    g.segment((N - 1) * n, n) +=
        jp.plus * spec.J.partialPivLu().solve(rhs.Itilde.segment((N - 1) * n, n));
  }
  const double scale = pairing_scale(g);

  const Matrix wit = cokernel_basis(bs.Bm, tol);
  std::vector<Obstruction> obstructions;
  for (int i = 0; i < wit.cols(); ++i) {
    const Complex p = wit.col(i).dot(g);
    if (std::abs(p) > tol.solv * scale) obstructions.push_back({wit.col(i), p});
  }
  const Vector mid = least_squares(bs.Bm, g, tol.rank);
  const double res = (bs.Bm.cols() == 0 ? g : Vector(bs.Bm * mid - g)).norm();
  const bool ok_pairing = obstructions.empty();
  const bool ok_residual = res <= tol.solv * scale;
  if (ok_pairing != ok_residual)
    throw InternalDisagreement(
        "vanishing solvability: witness pairings and least-squares residual disagree");

  SolveResult out;
  out.obstructions = std::move(obstructions);
  if (!ok_pairing) return out;

  SolutionSet s;
  s.lambda = lambda;
  s.particular = Vector::Zero(n * (N + 1));
  if (N >= 2) s.particular.segment(n, n * (N - 1)) = mid;
  s.particular.segment(N * n, n) =
      -spec.J.partialPivLu().solve(rhs.I[static_cast<size_t>(N)]);
  // Homogeneous solutions vanishing at both ends: middle kernel embedded
  // with zero end blocks.
  const Matrix km = kernel_basis(bs.Bm, tol);
  Matrix kernel = Matrix::Zero(n * (N + 1), km.cols());
  if (km.cols() > 0 && N >= 2) kernel.middleRows(n, n * (N - 1)) = km;
  s.kernel = kernel;
  out.solution = std::move(s);
  return out;
}

Vector reconstruct_from_hat(const SystemSpec& spec, Complex lambda, const Vector& u_hat,
                            const Tolerances& tol) {
  const BlockSystem at_l = assemble(spec, lambda);
  const BlockSystem at_lc = assemble(spec, std::conj(lambda));
  const double scale = std::max(1.0, u_hat.norm());
  if (at_lc.Bm.cols() > 0) {
    const double defect = (at_lc.Bm.adjoint() * u_hat).norm();
    if (defect > tol.lin * scale * std::max(1.0, at_lc.Bm.norm()))
      throw NotInKernel("balanced values are not adjoint-middle-kernel data");
  }
  const int rows = static_cast<int>(at_l.B.rows());
  Matrix stacked(2 * rows, at_l.B.cols());
  stacked.topRows(rows) = at_l.B;
  stacked.bottomRows(rows) = at_l.D;
  Vector rhs = Vector::Zero(2 * rows);
  rhs.tail(rows) = u_hat;
  const Vector u_tilde = least_squares(stacked, rhs, tol.rank);
  const double res = (stacked * u_tilde - rhs).norm();
  if (res > 1e3 * tol.lin * scale * std::max(1.0, stacked.norm()))
    throw NotInKernel("no homogeneous solution attains these balanced values");
  return u_tilde;
}

StructuralReport structural_identities(const SystemSpec& spec, Complex lambda) {
  const int n = spec.n;
  const int N = spec.N();
  const BlockSystem at_l = assemble(spec, lambda);
  const BlockSystem at_lc = assemble(spec, std::conj(lambda));

  Matrix corner = Matrix::Zero(n * (N + 1), n * (N + 1));
  corner.topLeftCorner(n, n) = -spec.J;
  corner.bottomRightCorner(n, n) = spec.J;

  StructuralReport rep{};
  rep.full = (at_lc.D.adjoint() * at_l.B - at_lc.B.adjoint() * at_l.D - corner).norm();
  rep.middle = (at_lc.Dm.adjoint() * at_l.B - at_lc.Bm.adjoint() * at_l.D).norm();

  Matrix script_j = Matrix::Zero(n * N, n * N);
  for (int k = 0; k < N; ++k) script_j.block(k * n, k * n, n, n) = spec.J;
  rep.junitary = (at_lc.U.adjoint() * script_j * at_l.U - script_j).norm();

  rep.scale = std::max(1.0, at_l.B.norm() * std::max(1.0, at_l.D.norm()));
  return rep;
}

int n_tilde(const SystemSpec& spec, Complex lambda, const Tolerances& tol) {
  const BlockSystem bs = assemble(spec, std::conj(lambda));
  const int rk_full = stable_rank(bs.B, tol);
  const int rk_mid = stable_rank(bs.Bm, tol);
  return rk_full - rk_mid;
}

SampleRegion SampleRegion::annulus(double r0, double r1) {
  SampleRegion r;
  r.kind = Kind::Annulus;
  r.r0 = r0;
  r.r1 = r1;
  return r;
}

SampleRegion SampleRegion::rectangle(double re0, double re1, double im0, double im1) {
  SampleRegion r;
  r.kind = Kind::Rectangle;
  r.re0 = re0;
  r.re1 = re1;
  r.im0 = im0;
  r.im1 = im1;
  return r;
}

Complex generic_lambda(const SystemSpec& spec, const SampleRegion& region, std::uint64_t seed,
                       const Tolerances& tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Finite singular sets per atom; identically-singular atoms impose no
  // pointwise exclusion (they are partition points regardless of λ).
  std::vector<std::vector<Complex>> excluded;
  for (int k = 0; k < spec.N(); ++k) {
    const BadLambdaSet bl = bad_lambda_set(spec, k, tol);
    if (!bl.all_of_c) excluded.push_back(bl.roots);
  }

  for (int attempt = 0; attempt < tol.max_tries; ++attempt) {
    Complex lam;
    if (region.kind == SampleRegion::Kind::Annulus) {
      const double r = region.r0 + (region.r1 - region.r0) * unit(rng);
      const double th = 2.0 * M_PI * unit(rng);
      lam = r * Complex(std::cos(th), std::sin(th));
    } else {
      lam = Complex(region.re0 + (region.re1 - region.re0) * unit(rng),
                    region.im0 + (region.im1 - region.im0) * unit(rng));
    }
    if (std::abs(lam.imag()) <= tol.gap) continue;
    bool clear = true;
    for (const auto& roots : excluded) {
      for (const Complex& z : roots) {
        if (std::abs(lam - z) < tol.gap || std::abs(std::conj(lam) - z) < tol.gap) {
          clear = false;
          break;
        }
      }
      if (!clear) break;
    }
    if (!clear) continue;
    try {
      const int rk = stable_rank(assemble(spec, lam).B, tol);
      const int rk_c = stable_rank(assemble(spec, std::conj(lam)).B, tol);
      if (rk != rk_c) continue;
    } catch (const RankUnstable&) {
      continue;  // borderline sample: reject and redraw
    }
    return lam;
  }
  throw GenericityNotFound("no generic lambda found within the attempt budget");
}

}  // namespace mdeq
