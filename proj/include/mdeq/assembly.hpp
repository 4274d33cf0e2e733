#pragma once

// The finite-dimensional system equivalent to  J u' + (q - λ w) u = w f.
// Stacking the gap-initial vectors into ũ = (c_0, ..., c_N), the jump
// relations at the N atoms become  B(λ) ũ = F0(f,λ)  with the nN x n(N+1)
// block-bidiagonal matrix
//   row k:  [-B-(x_k,λ) U_{k-1}(x_k,λ)] c_{k-1} + [B+(x_k,λ)] c_k.
// D(λ) maps ũ to the stacked balanced atom values of the homogeneous path;
// Bm/Dm are the restrictions to the middle columns (both end blocks cut).
// No unique continuation: ker B(λ) is at least n-dimensional, and can be
// larger exactly when the adjoint kernel is nontrivial.

#include <mdeq/jumps.hpp>
#include <mdeq/propagate.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace mdeq {

struct BlockSystem {
  Complex lambda{};
  Matrix B;        // nN x n(N+1)
  Matrix D;        // nN x n(N+1)
  Matrix Bm, Dm;   // nN x n(N-1); zero-width when N = 1
  Matrix U;        // nN x nN block diagonal of gap transfer matrices
};

// Builds the block system at λ.  Throws EmptyPartition when the system has no
// atoms (a single gap needs no gluing; propagate handles it alone).
BlockSystem assemble(const SystemSpec& spec, Complex lambda);

struct RhsVector {
  Vector F0;              // right-hand side of B(λ) ũ = F0
  Vector R;               // stacked dw_k f(x_k)
  std::vector<Vector> I;  // full-gap integrals I_j(f,λ), j = 0..N
  Vector Itilde;          // (0, ..., 0, I_N)
};

RhsVector assemble_rhs(const SystemSpec& spec, Complex lambda, const RightHandSide& f);

struct SolutionSet {
  Complex lambda{};
  Vector particular;  // minimum-norm coefficient stack
  Matrix kernel;      // orthonormal basis of ker B(λ), deterministic phases
  bool unique() const { return kernel.cols() == 0; }
};

struct Obstruction {
  Vector witness;   // unit vector in ker B(λ)*
  Complex pairing;  // witness* F0, nonzero beyond tolerance
};

struct SolveResult {
  std::optional<SolutionSet> solution;
  std::vector<Obstruction> obstructions;
  bool solvable() const { return solution.has_value(); }
};

// Least-squares particular solution plus kernel, or the list of adjoint
// witnesses that obstruct solvability.  The pairing test (witness* F0) and
// the residual of the least-squares solve must agree on solvability, else
// InternalDisagreement.
SolveResult solve_nonhomogeneous(const SystemSpec& spec, Complex lambda,
                                 const RightHandSide& f, const Tolerances& tol = {});

// Decides solvability twice: (i) rank test, F0 within the column span of
// B(λ); (ii) orthogonality test, the measure pairing of f against every
// reconstructed λ̄-solution vanishing at both endpoints.  Disagreement
// throws InternalDisagreement.
bool solvable(const SystemSpec& spec, Complex lambda, const RightHandSide& f,
              const Tolerances& tol = {});

// Solution with u⁺(a) = 0 and u⁻(b) = 0: fixes c_0 = 0 and
// c_N = -J⁻¹ I_N(f,λ) and solves the middle-column system for the rest.
// The kernel columns are the compactly supported homogeneous solutions.
SolveResult solve_vanishing(const SystemSpec& spec, Complex lambda,
                            const RightHandSide& f, const Tolerances& tol = {});

// Inverse of the balanced-value map on the homogeneous solution set: given
// stacked balanced atom values u_hat in ker Bm(λ̄)*, returns the unique
// ũ ∈ ker B(λ) with D(λ) ũ = u_hat.  Throws NotInKernel otherwise.
Vector reconstruct_from_hat(const SystemSpec& spec, Complex lambda, const Vector& u_hat,
                            const Tolerances& tol = {});

// Residuals of the exact algebraic identities tying B, D and their λ̄
// adjoints together; `scale` is the natural magnitude to compare against.
struct StructuralReport {
  double full;       // ||D(λ̄)* B(λ) - B(λ̄)* D(λ) - diag(-J, 0, ..., 0, J)||
  double middle;     // ||Dm(λ̄)* B(λ) - Bm(λ̄)* D(λ)||
  double junitary;   // ||U(λ̄)* 𝒥 U(λ) - 𝒥|| over the gap transfer blocks
  double scale;
};

StructuralReport structural_identities(const SystemSpec& spec, Complex lambda);

// dim ker Bm(λ̄)* - dim ker B(λ̄)*  =  rank B(λ̄) - rank Bm(λ̄); the count of
// independent solutions of the λ-equation modulo those vanishing at both
// ends.  Evaluates to n at every λ where rank B(λ) = rank B(λ̄).
int n_tilde(const SystemSpec& spec, Complex lambda, const Tolerances& tol = {});

// Sampling region for generic λ.
struct SampleRegion {
  enum class Kind { Annulus, Rectangle } kind = Kind::Annulus;
  double r0 = 0.5, r1 = 2.0;                       // annulus radii
  double re0 = -2, re1 = 2, im0 = -2, im1 = 2;     // rectangle bounds
  static SampleRegion annulus(double r0, double r1);
  static SampleRegion rectangle(double re0, double re1, double im0, double im1);
};

// Draws λ from the region (deterministic in `seed`) until it is non-real,
// clears every finite singular-λ set of the atoms by tol.gap, and satisfies
// rank B(λ) = rank B(λ̄).  Throws GenericityNotFound after tol.max_tries.
Complex generic_lambda(const SystemSpec& spec, const SampleRegion& region,
                       std::uint64_t seed, const Tolerances& tol = {});

}  // namespace mdeq
