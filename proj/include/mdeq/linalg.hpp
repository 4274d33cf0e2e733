#pragma once

// Rank-revealing and subspace primitives shared by the whole library.
// Every integer-valued decision (ranks, kernel dimensions) goes through
// stable_rank, which re-decides at tol*10 and tol/10 and refuses to answer
// when the decision flips inside that window.

#include <mdeq/types.hpp>

#include <vector>

namespace mdeq {

// Number of singular values above tol.rank * sigma_max, guarded: the same
// count must come out at tol.rank/10 and tol.rank*10 or RankUnstable is
// thrown.  The zero matrix has stable rank 0.
int stable_rank(const Eigen::Ref<const Matrix>& m, const Tolerances& tol = {});

// Unguarded variant used inside sampling loops where instability means
// "reject and resample" rather than "error out".
int plain_rank(const Eigen::Ref<const Matrix>& m, double rel_tol);

// Orthonormal basis of the (numerical) nullspace, columns fixed to a
// deterministic phase: in each column the entry of largest magnitude (first
// such index on ties) is made real and positive.  Rank decisions are guarded
// as in stable_rank unless guard=false.
Matrix kernel_basis(const Eigen::Ref<const Matrix>& m, const Tolerances& tol = {},
                    bool guard = true);

// Kernel of the adjoint map, i.e. the orthogonal complement of the column
// span;  kernel_basis(m.adjoint()) with the same conventions.
Matrix cokernel_basis(const Eigen::Ref<const Matrix>& m, const Tolerances& tol = {},
                      bool guard = true);

// Minimum-norm least-squares solution via complete orthogonal decomposition.
Vector least_squares(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Vector>& b,
                     double rel_tol);

// Modified Gram-Schmidt with one re-orthogonalization pass.  Returns Q with
// orthonormal columns and fills `combo` so that Q = x * combo; columns whose
// residual after projection falls below tol.rank * scale are dropped.
Matrix orthonormalize(const Eigen::Ref<const Matrix>& x, Matrix& combo,
                      const Tolerances& tol = {});

// Principal angles (radians, ascending) between the column spans of two
// matrices with orthonormal columns.
RealVector principal_angles(const Eigen::Ref<const Matrix>& qa,
                            const Eigen::Ref<const Matrix>& qb);

// True when the spans coincide: equal dimension and all principal angles
// below `angle_tol`.
bool same_span(const Eigen::Ref<const Matrix>& qa, const Eigen::Ref<const Matrix>& qb,
               double angle_tol);

// True when span(qa) is contained in span(qb) up to `angle_tol`.
bool span_contained(const Eigen::Ref<const Matrix>& qa, const Eigen::Ref<const Matrix>& qb,
                    double angle_tol);

// Moore-Penrose pseudoinverse of a Hermitian positive-semidefinite matrix.
Matrix pinv_psd(const Eigen::Ref<const Matrix>& m, double rel_tol);

// Hadamard bound: product of row 2-norms; the natural scale for |det|.
double hadamard_bound(const Eigen::Ref<const Matrix>& m);

// max(|m_ij|) convenience used for relative comparisons.
inline double max_abs(const Eigen::Ref<const Matrix>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Relative Hermiticity defect ||m - m*|| / max(1, ||m||).
double hermiticity_defect(const Eigen::Ref<const Matrix>& m);

// Smallest eigenvalue of the Hermitian part, for PSD checks.
double min_eigenvalue_hermitian(const Eigen::Ref<const Matrix>& m);

}  // namespace mdeq
