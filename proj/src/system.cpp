#include <mdeq/system.hpp>

#include <mdeq/linalg.hpp>

#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace mdeq {

Matrix SystemSpec::gap_Q(int j) const {
  if (gaps.empty()) return Matrix::Zero(n, n);
  return gaps[static_cast<size_t>(j)].Q;
}

Matrix SystemSpec::gap_W(int j) const {
  if (gaps.empty()) return Matrix::Zero(n, n);
  return gaps[static_cast<size_t>(j)].W;
}

bool SystemSpec::purely_atomic_w() const {
  for (int j = 0; j <= N(); ++j) {
    if (gap_W(j).norm() > 0.0) return false;
  }
  return true;
}

namespace {

void check_hermitian(const Matrix& m, int n, double tol_sym, const std::string& what,
                     std::vector<std::string>& out) {
  if (m.rows() != n || m.cols() != n) {
    out.push_back(what + ": expected " + std::to_string(n) + "x" + std::to_string(n) +
                  ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return;
  }
  if (hermiticity_defect(m) > tol_sym) out.push_back(what + ": not Hermitian");
}

void check_psd(const Matrix& m, int n, double tol_sym, const std::string& what,
               std::vector<std::string>& out) {
  check_hermitian(m, n, tol_sym, what, out);
  if (m.rows() == n && m.cols() == n) {
    const double lmin = min_eigenvalue_hermitian(m);
    if (lmin < -tol_sym * std::max(1.0, m.norm()))
      out.push_back(what + ": not positive semidefinite (min eigenvalue " +
                    std::to_string(lmin) + ")");
  }
}

}  // namespace

ValidationReport validate(const SystemSpec& spec, const Tolerances& tol) {
  ValidationReport rep;
  auto& out = rep.violations;

  if (spec.n < 1) out.push_back("n must be a positive integer");
  if (!(spec.a < spec.b) || !std::isfinite(spec.a) || !std::isfinite(spec.b))
    out.push_back("interval endpoints must be finite with a < b");
  if (spec.n < 1) return rep;

  if (spec.J.rows() != spec.n || spec.J.cols() != spec.n) {
    out.push_back("J has wrong dimensions");
    return rep;
  }
  if ((spec.J + spec.J.adjoint()).norm() > tol.sym * std::max(1.0, spec.J.norm()))
    out.push_back("J is not skew-Hermitian");
  {
    Eigen::JacobiSVD<Matrix> svd(spec.J);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= tol.rank * sv(0))
      out.push_back("J is not invertible");
  }

  double prev = spec.a;
  for (size_t k = 0; k < spec.atoms.size(); ++k) {
    const Atom& at = spec.atoms[k];
    const std::string tag = "atom " + std::to_string(k);
    if (!(at.x > prev))
      out.push_back(tag + ": positions must be strictly increasing inside (a,b)");
    prev = at.x;
    check_hermitian(at.dq, spec.n, tol.sym, tag + " dq", out);
    check_psd(at.dw, spec.n, tol.sym, tag + " dw", out);
  }
  if (!spec.atoms.empty() && !(spec.atoms.back().x < spec.b))
    out.push_back("last atom must lie strictly below b");

  if (!spec.gaps.empty()) {
    if (spec.gaps.size() != spec.atoms.size() + 1) {
      out.push_back("gaps must have exactly N+1 entries (or be omitted)");
    } else {
      for (size_t j = 0; j < spec.gaps.size(); ++j) {
        const std::string tag = "gap " + std::to_string(j);
        check_hermitian(spec.gaps[j].Q, spec.n, tol.sym, tag + " Q", out);
        check_psd(spec.gaps[j].W, spec.n, tol.sym, tag + " W", out);
      }
    }
  }
  return rep;
}

void require_valid(const SystemSpec& spec, const Tolerances& tol) {
  const ValidationReport rep = validate(spec, tol);
  if (!rep.ok()) {
    std::ostringstream os;
    os << "invalid system:";
    for (const auto& v : rep.violations) os << " [" << v << "]";
    throw InvalidSpec(os.str());
  }
}

}  // namespace mdeq
