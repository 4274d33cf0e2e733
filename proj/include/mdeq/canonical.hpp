#pragma once

// Canonical representatives inside a coset path + L0, where L0 is the space
// of zero-norm homogeneous solutions.  An element of L0 satisfies W h = 0 on
// every gap and dw h# = 0 at every atom, hence solves the homogeneous
// equation at every lambda; adding one to a path changes neither its classes
// nor its equation.  The representative is pinned by value conditions on a
// grid: one interior point tau_0 plus every atom position, swept outward.

#include <mdeq/propagate.hpp>
#include <mdeq/system.hpp>
#include <mdeq/types.hpp>

#include <vector>

namespace mdeq {

struct TauGrid {
  double tau0 = 0.0;        // midpoint of the widest gap (first on ties)
  int gap0 = 0;             // index of that gap
  std::vector<double> plus;   // atom positions above tau0, ascending
  std::vector<double> minus;  // atom positions below tau0, descending
  std::vector<int> plus_atom;   // 0-based atom indices matching plus
  std::vector<int> minus_atom;  // matching minus
};

TauGrid tau_grid(const SystemSpec& spec);

// The value spaces tested by the canonical conditions.  n0 spans the values
// at tau0 of all of L0; n_plus[k-1] spans the right-limit values at the k-th
// atom above tau0 of the L0 elements vanishing identically below that atom;
// n_minus mirrors this on the left with left-limit values.  The vals/combos
// matrices realize each space: column i of *_vals is the relevant value of
// the L0 combination given by column i of the matching *_combos.
struct NkSpaces {
  TauGrid grid;
  int l0_dim = 0;
  Matrix n0;
  std::vector<Matrix> n_plus;
  std::vector<Matrix> n_minus;
  Matrix vals0;
  Matrix combos0;
  std::vector<Matrix> plus_vals, plus_combos;
  std::vector<Matrix> minus_vals, minus_combos;
};

NkSpaces nk_spaces(const SystemSpec& spec, const TauGrid& grid,
                   const std::vector<BalancedPath>& l0, const Tolerances& tol = {});

// Condition k of the canonical grid: k = 0 tests the value at tau0 against
// n0, k > 0 the right value at the k-th atom above against n_plus[k-1],
// k < 0 the left value at the |k|-th atom below against n_minus[|k|-1].
// Holds when the value's component in the space is at most
// tol.lin * max(1, |value|).
bool satisfies_condition_k(const SystemSpec& spec, const BalancedPath& path, const NkSpaces& nk,
                           int k, const Tolerances& tol = {});

// Sweeps the grid outward from tau0 subtracting at each step the L0 element
// that matches the path's projected value there; the subtracted element
// vanishes on the already-visited side, so settled conditions stay settled.
// The result is the unique member of path + L0 meeting every condition.
// Throws ProjectionFailed when a projected value cannot be realized.
BalancedPath canonicalize(const SystemSpec& spec, const NkSpaces& nk,
                          const std::vector<BalancedPath>& l0, BalancedPath path,
                          const Tolerances& tol = {});

// Convenience overload building the L0 basis and the grid itself.
BalancedPath canonicalize(const SystemSpec& spec, const BalancedPath& path,
                          const Tolerances& tol = {});

}  // namespace mdeq
