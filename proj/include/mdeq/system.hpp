#pragma once

// Problem data for the first-order system  J u' + q u = w f  on a finite
// interval (a,b): an invertible skew-Hermitian J, point masses of q and w at
// strictly increasing interior positions, and optional constant densities on
// the gaps between them.  Atoms split (a,b) into N+1 gaps; gap j runs from
// x(j) to x(j+1) with x(0)=a and x(N+1)=b.

#include <mdeq/types.hpp>

#include <string>
#include <vector>

namespace mdeq {

struct Atom {
  double x = 0.0;  // position in (a,b)
  Matrix dq;       // Hermitian point mass of q
  Matrix dw;       // Hermitian positive-semidefinite point mass of w
};

struct GapDensity {
  Matrix Q;  // Hermitian density of q on the gap
  Matrix W;  // Hermitian PSD density of w on the gap
};

struct SystemSpec {
  int n = 0;
  double a = 0.0;
  double b = 0.0;
  Matrix J;
  std::vector<Atom> atoms;        // strictly increasing positions
  std::vector<GapDensity> gaps;   // size atoms.size()+1; empty means all zero

  int N() const { return static_cast<int>(atoms.size()); }

  // Partition points: x(0)=a, x(k)=atoms[k-1].x for k=1..N, x(N+1)=b.
  double x(int k) const {
    if (k <= 0) return a;
    if (k >= N() + 1) return b;
    return atoms[static_cast<size_t>(k - 1)].x;
  }
  double gap_length(int j) const { return x(j + 1) - x(j); }

  // Density on gap j; zero matrices when gaps were not specified.
  Matrix gap_Q(int j) const;
  Matrix gap_W(int j) const;

  bool purely_atomic_w() const;  // all gap W densities vanish
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Structural checks: dimensions, J invertible skew-Hermitian, atom positions
// strictly increasing inside (a,b), dq Hermitian, dw (and gap W) Hermitian
// PSD, gap Q Hermitian, gap count N+1.  Symmetry slack is tol.sym relative.
ValidationReport validate(const SystemSpec& spec, const Tolerances& tol = {});

// Throws InvalidSpec when validate() reports violations.
void require_valid(const SystemSpec& spec, const Tolerances& tol = {});

}  // namespace mdeq
