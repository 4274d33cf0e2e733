#pragma once

// Jump factors at an atom:  B±(x,λ) = J ± (dq - λ dw)/2.  A solution's
// one-sided limits at an atom x with value f there satisfy
//   B+(x,λ) u⁺(x) - B-(x,λ) u⁻(x) = dw(x) f(x),
// and B-(x,λ) = -B+(x,λ̄)*.  Wherever one of the factors is singular the
// equation loses unique continuation; the λ at which that happens at a given
// atom form either a finite conjugation-closed set or all of C.

#include <mdeq/system.hpp>

#include <vector>

namespace mdeq {

struct JumpPair {
  Matrix plus;   // B+(x,λ)
  Matrix minus;  // B-(x,λ)
};

// Jump factors at atoms[k].
JumpPair jump_matrices(const SystemSpec& spec, int k, Complex lambda);

// Values of λ at which det B+(x,λ) * det B-(x,λ) = 0 for one atom.
struct BadLambdaSet {
  bool all_of_c = false;        // the determinant product vanishes identically
  std::vector<Complex> roots;   // finite case: closed under conjugation, sorted
};

// Roots of the two determinant pencils det(B±(x,0) ∓ λ dw/2), merged and
// symmetrized.  Identically-zero detection: a degree-<=n polynomial is
// sampled at n+1 points and declared zero when every sample is below tol.det
// relative to the Hadamard scale of the sampled matrix.
BadLambdaSet bad_lambda_set(const SystemSpec& spec, int k, const Tolerances& tol = {});

// Indices of atoms whose B+(x,λ) or B-(x,λ) is singular at this λ, i.e.
// |det| below tol.det relative to the Hadamard bound.  Sorted ascending.
std::vector<int> xi_set(const SystemSpec& spec, Complex lambda, const Tolerances& tol = {});

}  // namespace mdeq
