#include <mdeq/linalg.hpp>

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mdeq {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Eigen::Ref<const Matrix>& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_at(const Eigen::VectorXd& sv, double rel_tol) {
  if (sv.size() == 0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

// Deterministic phase: entry of largest magnitude (first index on ties)
// becomes real positive.
void fix_column_phases(Matrix& q) {
  for (int j = 0; j < q.cols(); ++j) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < q.rows(); ++i) {
      const double a = std::abs(q(i, j));
      if (a > best + 1e-15 * (1.0 + best)) {
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const Complex pivot = q(imax, j);
    q.col(j) *= std::conj(pivot) / std::abs(pivot);
  }
}

}  // namespace

int plain_rank(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_at(svd.singularValues(), rel_tol);
}

int stable_rank(const Eigen::Ref<const Matrix>& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  const int lo = rank_at(sv, tol.rank * 10.0);
  const int hi = rank_at(sv, tol.rank / 10.0);
  if (lo != hi)
    throw RankUnstable("rank decision flips between tol*10 and tol/10", lo, hi);
  return lo;
}

Matrix kernel_basis(const Eigen::Ref<const Matrix>& m, const Tolerances& tol, bool guard) {
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) {
    // Map from C^cols to {0}: the kernel is everything.
    return Matrix::Identity(m.cols(), m.cols());
  }
  auto svd = full_svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  const int r = guard ? stable_rank(m, tol) : rank_at(sv, tol.rank);
  const int dim = static_cast<int>(m.cols()) - r;
  Matrix k = svd.matrixV().rightCols(dim);
  fix_column_phases(k);
  return k;
}

Matrix cokernel_basis(const Eigen::Ref<const Matrix>& m, const Tolerances& tol, bool guard) {
  return kernel_basis(m.adjoint(), tol, guard);
}

Vector least_squares(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Vector>& b,
                     double rel_tol) {
  if (a.cols() == 0) return Vector(0);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  cod.setThreshold(rel_tol);
  return cod.solve(b);
}

Matrix orthonormalize(const Eigen::Ref<const Matrix>& x, Matrix& combo, const Tolerances& tol) {
  const int rows = static_cast<int>(x.rows());
  const int cols = static_cast<int>(x.cols());
  Matrix q(rows, cols);
  Matrix t = Matrix::Zero(cols, cols);  // q built so far = x * t
  double scale = 0.0;
  for (int j = 0; j < cols; ++j) scale = std::max(scale, x.col(j).norm());
  int kept = 0;
  for (int j = 0; j < cols; ++j) {
    Vector v = x.col(j);
    Vector c = Vector::Zero(cols);
    c(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < kept; ++i) {
        const Complex proj = q.col(i).dot(v);
        v -= proj * q.col(i);
        c -= proj * t.col(i);
      }
    }
    const double nv = v.norm();
    if (nv <= tol.rank * std::max(scale, 1e-300)) continue;
    q.col(kept) = v / nv;
    t.col(kept) = c / nv;
    ++kept;
  }
  combo = t.leftCols(kept);
  return q.leftCols(kept);
}

RealVector principal_angles(const Eigen::Ref<const Matrix>& qa,
                            const Eigen::Ref<const Matrix>& qb) {
  const int m = static_cast<int>(std::min(qa.cols(), qb.cols()));
  if (m == 0) return RealVector(0);
  const Matrix cross = qa.adjoint() * qb;
  Eigen::JacobiSVD<Matrix> svd(cross);
  // Cosines cannot resolve angles below sqrt(eps); the singular values of
  // the residual are the sines and can.  Cosines descend, sines ascend, so
  // sorted they pair index by index.
  Eigen::JacobiSVD<Matrix> res(qb - qa * cross);
  RealVector sines = res.singularValues();
  std::sort(sines.begin(), sines.end());
  RealVector angles(m);
  for (int i = 0; i < m; ++i) {
    const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    const double s = std::clamp(sines(i), 0.0, 1.0);
    angles(i) = c * c >= 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

bool same_span(const Eigen::Ref<const Matrix>& qa, const Eigen::Ref<const Matrix>& qb,
               double angle_tol) {
  if (qa.cols() != qb.cols()) return false;
  if (qa.cols() == 0) return true;
  const RealVector ang = principal_angles(qa, qb);
  return ang(ang.size() - 1) <= angle_tol;
}

bool span_contained(const Eigen::Ref<const Matrix>& qa, const Eigen::Ref<const Matrix>& qb,
                    double angle_tol) {
  if (qa.cols() == 0) return true;
  if (qa.cols() > qb.cols()) return false;
  // All singular values of qb* qa must be close to 1; near 1 the residual
  // sine is the accurate read of the worst angle.
  const Matrix cross = qb.adjoint() * qa;
  Eigen::JacobiSVD<Matrix> svd(cross);
  const double smin = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  if (smin * smin < 0.5) return std::acos(smin) <= angle_tol;
  Eigen::JacobiSVD<Matrix> res(qa - qb * cross);
  const double smax = std::clamp(res.singularValues().maxCoeff(), 0.0, 1.0);
  return std::asin(smax) <= angle_tol;
}

Matrix pinv_psd(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = rel_tol * std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  Matrix inv = Matrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) > cut && ev(i) > 0.0)
      inv += es.eigenvectors().col(i) * (1.0 / ev(i)) * es.eigenvectors().col(i).adjoint();
  }
  return inv;
}

double hadamard_bound(const Eigen::Ref<const Matrix>& m) {
  double h = 1.0;
  for (int i = 0; i < m.rows(); ++i) h *= m.row(i).norm();
  return h;
}

double hermiticity_defect(const Eigen::Ref<const Matrix>& m) {
  const double nm = m.norm();
  return (m - m.adjoint()).norm() / std::max(1.0, nm);
}

double min_eigenvalue_hermitian(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() == 0) return 0.0;
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace mdeq
