#pragma once

// Shared scalar/matrix aliases, the pinned tolerance set, and the error
// vocabulary used across the library.  Everything numerical is dense
// complex<double> over Eigen.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdeq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// Pinned numerical policy.  These values are part of the library contract;
// callers may override individual entries (the CLI exposes `rank`) but the
// defaults are what every documented guarantee is stated against.
struct Tolerances {
  double sym = 1e-12;    // relative Hermiticity / positive-semidefiniteness slack
  double det = 1e-10;    // relative determinant cutoff for singular jump factors
  double rank = 1e-10;   // singular values below rank*sigma_max count as zero
  double gap = 1e-6;     // exclusion radius around singular lambda values
  double expm = 1e-12;   // accuracy budget for transfer matrices
  double supp = 1e-10;   // relative cutoff when declaring a path segment zero
  double lin = 1e-10;    // relative residual allowed in linear solves
  double solv = 1e-8;    // relative obstruction pairing above which solvability fails
  int max_tries = 1000;  // sampling attempts before GenericityNotFound
};

// Base for every library error so callers can catch the whole family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input-class errors (malformed or invalid data).
struct ParseError : Error {
  using Error::Error;
};
struct InvalidSpec : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct EmptyPartition : Error {
  using Error::Error;
};
struct DependentConditions : Error {
  using Error::Error;
};

// Obstruction-class errors (well-posed input, the mathematics refuses).
struct RankUnstable : Error {
  RankUnstable(const std::string& what, int lo, int hi)
      : Error(what), rank_low(lo), rank_high(hi) {}
  int rank_low;   // rank decided at tol/10
  int rank_high;  // rank decided at tol*10
};
struct NotInKernel : Error {
  using Error::Error;
};
struct GenericityNotFound : Error {
  using Error::Error;
};
struct ProjectionFailed : Error {
  using Error::Error;
};
struct NotInResolventSet : Error {
  using Error::Error;
};
struct InternalDisagreement : Error {
  using Error::Error;
};

}  // namespace mdeq
