#pragma once

// Resolvents of a relation T given by its graph subspace, and the atom-wise
// kernel table of the resolvent.  With the graph parametrized by columns
// (z_u; z_g), the equation g - λu = f becomes a square linear system in the
// column coefficients; λ is in the resolvent set exactly when that system is
// invertible.  Outputs are canonical representatives, so equal inputs give
// equal paths.

#include <mdeq/canonical.hpp>
#include <mdeq/relations.hpp>

#include <Eigen/LU>

#include <vector>

namespace mdeq {

struct ResolventContext {
  SystemSpec spec;
  L2Model model;
  PairSubspace domain;  // graph of T, with path representatives
  Complex lambda{};
  Matrix m;  // Z_g - lambda Z_u in the domain basis
  Eigen::PartialPivLU<Matrix> lu;
  std::vector<BalancedPath> l0;
  NkSpaces nk;
};

// Builds the solve context.  Throws InvalidSpec when the domain carries no
// path representatives, NotInResolventSet when the graph dimension differs
// from dim L²(w) or the system matrix is rank-deficient.
ResolventContext resolvent_context(const SystemSpec& spec, const L2Model& model,
                                   const PairSubspace& domain, Complex lambda,
                                   const Tolerances& tol = {});

// u with (u, f + λu) in T, as the canonical representative of its class
// pair; the attached right-hand side of the returned path is f + λu.
BalancedPath resolvent_apply(const ResolventContext& ctx, const Vector& z_f,
                             const Tolerances& tol = {});
BalancedPath resolvent_apply(const ResolventContext& ctx, const RightHandSide& f,
                             const Tolerances& tol = {});

// K[p][k] maps the value of f at atom k to the contribution at points[p]:
//   (resolvent f)(points[p]) = sum_k K[p][k] f(x_k).
// G[p][k] = K[p][k] pinv(dw_k) is the two-point kernel against the measure.
struct KernelTable {
  Complex lambda{};
  std::vector<double> points;
  std::vector<std::vector<Matrix>> K;
  std::vector<std::vector<Matrix>> G;
};

KernelTable greens_table(const ResolventContext& ctx, const std::vector<double>& xs,
                         const Tolerances& tol = {});

}  // namespace mdeq
