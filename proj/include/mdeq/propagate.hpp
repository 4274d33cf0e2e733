#pragma once

// Evolution on the atom-free gaps and the assembled piecewise description of
// a candidate solution.  On gap j the equation reduces to the linear ODE
//   u' = A_j(λ) u + J⁻¹ W_j f_j,   A_j(λ) = J⁻¹ (λ W_j - Q_j),
// with fundamental matrix U_j(x,λ) = exp((x - x_j) A_j(λ)) normalized at the
// left edge.  Right-hand sides are constant per gap plus a value per atom.
// A BalancedPath stores one initial vector per gap together with the
// one-sided limits and balanced (mean) value at every atom; it makes no
// claim of solving anything; residual() measures that.

#include <mdeq/system.hpp>

#include <vector>

namespace mdeq {

struct RightHandSide {
  std::vector<Vector> gap;   // size N+1
  std::vector<Vector> atom;  // size N
  static RightHandSide zero(const SystemSpec& spec);
};

// A_j(λ) for gap j.
Matrix gap_generator(const SystemSpec& spec, int j, Complex lambda);

// U_j(x,λ) for x in [x(j), x(j+1)]; scaling-and-squaring matrix exponential.
Matrix transfer_matrix(const SystemSpec& spec, int j, double x, Complex lambda);

// ∫_{x(j)}^{x} U_j(t,λ̄)* W_j dt, computed in closed form from the single
// block exponential exp( (x - x_j) [[A_j(λ̄)*, W_j], [0, 0]] ).
Matrix gap_integral_matrix(const SystemSpec& spec, int j, double x, Complex lambda);

// I_j(f,λ): the full-gap integral above applied to the gap value of f.
Vector gap_integral(const SystemSpec& spec, int j, const RightHandSide& f, Complex lambda);

struct AtomTriple {
  Vector left;   // u⁻(x_k)
  Vector mid;    // (u⁻ + u⁺)/2
  Vector right;  // u⁺(x_k)
};

struct BalancedPath {
  Complex lambda{};
  std::vector<Vector> c;        // u⁺(x(j)) per gap, j = 0..N
  std::vector<AtomTriple> atom; // per atom
  Vector start;                 // value assigned at a (= c[0])
  Vector end;                   // value assigned at b (= u⁻(b))
  RightHandSide rhs;            // driving data the path is paired with
};

// Builds the global path from the stacked gap-initial vectors
// u_tilde = (c_0, ..., c_N) and the right-hand side, by variation of
// constants on each gap.  u_tilde is free data: nothing forces the jump
// relation to hold, residual() reports how far off it is.
BalancedPath propagate_path(const SystemSpec& spec, Complex lambda, const Vector& u_tilde,
                            const RightHandSide& f);

// Stacked coefficient vector (c_0, ..., c_N) of a path.
Vector coefficient_stack(const BalancedPath& path);

struct ResidualReport {
  std::vector<double> jump;  // ||B+ u⁺ - B- u⁻ - dw f|| per atom
  std::vector<double> gap;   // max ODE defect over Chebyshev points per gap
  double max() const;
};

// Jump-relation residual at every atom and a finite-difference check of the
// gap ODE at interior Chebyshev points (independent of the evaluator's own
// derivative formula).
ResidualReport residual(const SystemSpec& spec, const BalancedPath& path);

// Balanced value at any x in [a,b]: one-sided limit data at the endpoints,
// the mean value at atoms, the variation-of-constants value inside gaps.
// Throws OutOfDomain outside [a,b].
Vector evaluate(const SystemSpec& spec, const BalancedPath& path, double x);

// In-place p += alpha * q for paths over the same system.  Valid when both
// paths carry the same lambda, or when q is a homogeneous path annihilated
// by w (then the gap evolution of the sum is still the one of p).
void add_scaled(BalancedPath& p, Complex alpha, const BalancedPath& q);

// Scales a path (and its right-hand side) in place.
void scale_path(BalancedPath& p, Complex alpha);

// Linear combination of right-hand sides.
void add_scaled(RightHandSide& f, Complex alpha, const RightHandSide& g);

}  // namespace mdeq
