#pragma once

// Built-in 2x2 family with 4M unit-spaced atoms pairing up into 2M
// independent blocks.  Everything about it is known in closed form, which
// makes it the reference target for the whole pipeline: its minimal and
// maximal relations coincide (both deficiency indices vanish), the kernel
// of the relation at 0 is nontrivial, and for lambda != 0 the resolvent is
// an explicit local average over each atom pair.

#include <mdeq/propagate.hpp>
#include <mdeq/system.hpp>
#include <mdeq/types.hpp>

#include <vector>

namespace mdeq {

// Atoms at 1..4M on (1/2, 4M + 1/2); n = 2, J = [[0,-1],[1,0]],
// dq = [[0,2],[2,0]] at even positions and its negative at odd ones,
// dw = [[2,0],[0,0]] everywhere, no gap densities.  M >= 1.
SystemSpec example_spec(int M);

// Closed-form resolvent value at x for the self-adjoint relation picked by
// the canonical construction: constant (alpha_k, beta_k) on the open gap
// between atoms 2k-1 and 2k, the balanced half of that at the two atoms,
// zero elsewhere.  f_atoms lists f(1)..f(4M).  lambda != 0.
Vector example_resolvent(int M, Complex lambda, const std::vector<Vector>& f_atoms, double x);

// Squared L2(w) norm of that resolvent output.
double example_norm_sq(int M, Complex lambda, const std::vector<Vector>& f_atoms);

// Two-point kernel with the same one-sided-average convention the pipeline
// uses for values at atoms: G vanishes unless x and y sit in the same
// closed pair block [2k-1, 2k], and atom arguments contribute a factor 1/2.
Matrix example_green(int M, double x, double y, Complex lambda);

}  // namespace mdeq
