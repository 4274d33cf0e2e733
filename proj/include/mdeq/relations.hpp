#pragma once

// Finite-dimensional model of L²(w) when w is purely atomic, and the linear
// relations inside its square: the maximal relation of all solution pairs,
// the closure of the compactly supported restriction, adjoints, deficiency
// spaces, and restrictions cut out by boundary conditions.
//
// Coordinates: with dw(x_k) = V_k diag(m_k) V_k* (positive part only), the
// map z_k(u) = diag(m_k)^{1/2} V_k* u#(x_k) identifies classes with C^dim
// isometrically, <u,v>_w = z(u)† z(v).  A pair ([u],[f]) is stored as the
// stacked vector (z_u; z_f); the carrier of a pair is a single BalancedPath
// whose attached right-hand side is the f of the pair.

#include <mdeq/assembly.hpp>

#include <string>
#include <vector>

namespace mdeq {

struct L2Model {
  int n = 0;
  int dim = 0;                 // sum of rank dw(x_k)
  std::vector<Matrix> V;       // n x r_k, orthonormal columns spanning ran dw
  std::vector<RealVector> m;   // positive eigenvalues of dw(x_k)
  std::vector<int> offset;     // block offsets, size N+1, last entry = dim

  int blocks() const { return static_cast<int>(V.size()); }
  int rank(int k) const { return static_cast<int>(m[static_cast<size_t>(k)].size()); }
};

// Eigendecomposition of every atom weight; requires a valid spec.  Gap
// densities are ignored here: the model only describes the atomic part.
L2Model l2_model(const SystemSpec& spec, const Tolerances& tol = {});

// z-coordinates of the class with the given pointwise atom values (missing
// or empty vectors count as zero).
Vector class_of_values(const L2Model& model, const std::vector<Vector>& values);

// Class of a path, read off its balanced atom values.
Vector class_of_path(const L2Model& model, const BalancedPath& path);

// Class of a right-hand side, read off its atom samples.
Vector class_of_rhs(const L2Model& model, const RightHandSide& f);

// The unique pointwise representative with values in ran dw(x_k).
std::vector<Vector> values_of_class(const L2Model& model, const Vector& z);

// Same representative packaged as a RightHandSide with zero gap data.
RightHandSide rhs_of_class(const SystemSpec& spec, const L2Model& model, const Vector& z);

// <f,g> = sum_k f(x_k)* dw(x_k) g(x_k) + sum_j |gap j| f_j* W_j g_j,
// conjugate-linear in f.  The gap terms vanish for purely atomic w.
Complex inner_product(const SystemSpec& spec, const RightHandSide& f, const RightHandSide& g);

// Basis of the zero-norm homogeneous solutions: kernel of the block system
// at λ = 0 intersected with dw u# = 0 at every atom and W u ≡ 0 on every
// gap (the gap condition is the finite stack of Krylov constraints
// W A^m c = 0, m < n).  Works for any valid spec, also with no atoms.
std::vector<BalancedPath> l0_basis(const SystemSpec& spec, const Tolerances& tol = {});

struct PairSubspace {
  std::string label;
  int dim_w = 0;                   // ambient L²(w) dimension
  Matrix basis;                    // 2*dim_w x m, orthonormal pair classes
  std::vector<BalancedPath> reps;  // per column: path solving Ju'+qu = w·(its rhs);
                                   // empty when the span is class-only
  int dim() const { return static_cast<int>(basis.cols()); }
  bool has_reps() const { return reps.size() == static_cast<size_t>(basis.cols()); }
};

// Boundary-form pairing of stacked pair classes: entry (k,l) is
//   z_u(A_k)† z_f(B_l) - z_f(A_k)† z_u(B_l),
// the class-level value of the Lagrange bracket [B_l, A_k].
Matrix pair_form_matrix(const Matrix& a, const Matrix& b);

// All pairs ([u],[f]) with J u' + q u = w f: one particular pair per
// solvable class direction plus every homogeneous pair.  Requires purely
// atomic w.
PairSubspace tmax_subspace(const SystemSpec& spec, const L2Model& model,
                           const Tolerances& tol = {});

// The pairs whose path vanishes identically on the first and last gap
// (compact support inside (a,b)); in this finite model the span is its own
// closure.  Requires purely atomic w.
PairSubspace tmin_closure_subspace(const SystemSpec& spec, const L2Model& model,
                                   const Tolerances& tol = {});

// Adjoint relation {([v],[g]) : <g,u> = <v,f> for all ([u],[f]) in S},
// computed as the orthogonal complement of the flipped span
// ([u],[f]) -> (-[f],[u]).  Class-only: the result carries no paths.
PairSubspace adjoint_subspace(const L2Model& model, const PairSubspace& s,
                              const Tolerances& tol = {});

struct DeficiencySpace {
  Complex lambda{};
  PairSubspace space;  // pairs ([u], λ[u]), orthonormal, with paths
  int index = 0;       // n_λ = space.dim()
};

// Classes of the solutions of J u' + q u = λ w u, λ non-real; the index is
// the rank of their Gram matrix and never exceeds n.  Requires purely
// atomic w.
DeficiencySpace deficiency(const SystemSpec& spec, const L2Model& model, Complex lambda,
                           const Tolerances& tol = {});

// (v* J u)⁻(b) - (v* J u)⁺(a) for the paths u = uf, v = vg, evaluated from
// endpoint values.  Equals <v, f> - <g, u> when both pairs solve their
// equations (the Lagrange identity; tested, not assumed).
Complex boundary_form(const SystemSpec& spec, const BalancedPath& uf, const BalancedPath& vg);

struct BoundaryCondition {
  Vector klass;      // pair class in C^{2 dim}, unit norm
  BalancedPath rep;  // carrier path of the pair
};

// Conditions w_j = sum_i coeffs(i,j) e_i over the concatenated bases of the
// two deficiency spaces (dplus first), each normalized to a unit pair.
std::vector<BoundaryCondition> conditions_from_coefficients(const DeficiencySpace& dplus,
                                                            const DeficiencySpace& dminus,
                                                            const Matrix& coeffs);

struct BoundaryData {
  std::vector<BoundaryCondition> conditions;
  int n_plus = 0;
  int n_minus = 0;
  Matrix form;  // filled by restriction_from_conditions: pairwise boundary
                // form of the conditions, the matrix whose rank classifies
  int d() const { return n_plus + n_minus; }
  int m() const { return d() - static_cast<int>(conditions.size()); }
};

BoundaryData make_boundary_data(const DeficiencySpace& dplus, const DeficiencySpace& dminus,
                                const Matrix& coeffs);

enum class RestrictionClass { NonSymmetric, Symmetric, SelfAdjoint };

struct Restriction {
  BoundaryData boundary;
  PairSubspace domain;
  RestrictionClass cls = RestrictionClass::NonSymmetric;
};

// Cuts T_max down by the boundary functionals ([u],[f]) -> [(u,f), w_j] and
// classifies the result: with c conditions and m = d - c, the restriction
// is symmetric exactly when the pairwise form matrix has rank 2c - d, and
// self-adjoint exactly when that matrix vanishes and 2c = d.  The verdict
// is cross-checked against the computed adjoint; disagreement throws
// InternalDisagreement.  Conditions that are dependent as functionals on
// T_max throw DependentConditions.
Restriction restriction_from_conditions(const SystemSpec& spec, const L2Model& model,
                                        const PairSubspace& tmax, BoundaryData boundary,
                                        const Tolerances& tol = {});

}  // namespace mdeq
