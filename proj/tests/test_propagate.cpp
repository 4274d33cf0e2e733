#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mdeq/assembly.hpp>
#include <mdeq/linalg.hpp>
#include <mdeq/propagate.hpp>
#include <mdeq/sampling.hpp>

#include "oracle.hpp"

#include <random>

using namespace mdeq;

namespace {

std::mt19937_64 rng(777);

SpecOptions with_densities() {
  SpecOptions opt;
  opt.atomic_w = false;  // gap w present: exercises the full generator
  return opt;
}

}  // namespace

TEST_CASE("transfer matrix: scalar gap in closed form") {
  SystemSpec s;
  s.n = 1;
  s.a = 0;
  s.b = 2;
  s.J = Matrix(1, 1);
  s.J << Complex(0, 1);
  s.atoms.push_back({1.0, Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
  s.gaps.resize(2);
  Matrix q0(1, 1), w0(1, 1);
  q0 << 0.7;
  w0 << 1.3;
  s.gaps[0] = {q0, w0};
  s.gaps[1] = {Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
  REQUIRE(validate(s).ok());

  const Complex lambda(0.4, -1.1);
  // u' = -i (λ w0 - q0) u on gap 0
  const Complex mu = -kI * (lambda * w0(0, 0) - q0(0, 0));
  for (double x : {0.25, 0.6, 1.0}) {
    const Matrix u = transfer_matrix(s, 0, x, lambda);
    CHECK(std::abs(u(0, 0) - std::exp(mu * x)) < 1e-12 * std::abs(std::exp(mu * x)));
  }
}

TEST_CASE("transfer matrix agrees with an adaptive integrator") {
  double worst = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const SystemSpec s = random_spec(rng, with_densities());
    std::uniform_int_distribution<int> pick(0, s.N());
    const int j = pick(rng);
    const Complex lambda(std::uniform_real_distribution<>(-2, 2)(rng),
                         std::uniform_real_distribution<>(-2, 2)(rng));
    const Matrix a = gap_generator(s, j, lambda);
    const double x0 = s.x(j), x1 = s.x(j + 1);
    const double xm = x0 + 0.61803 * (x1 - x0);
    const Matrix lib = transfer_matrix(s, j, xm, lambda);
    const Matrix ref = oracle::integrate_linear([&](double) { return a; }, x0, xm,
                                                Matrix::Identity(s.n, s.n), 1e-13);
    worst = std::max(worst, max_abs(Matrix(lib - ref)) / std::max(1.0, max_abs(ref)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("transfer matrices are J-unitary across each gap") {
  for (int trial = 0; trial < 8; ++trial) {
    const SystemSpec s = random_spec(rng, with_densities());
    const Complex lambda(std::uniform_real_distribution<>(-2, 2)(rng),
                         std::uniform_real_distribution<>(0.2, 2)(rng));
    for (int j = 0; j <= s.N(); ++j) {
      const Matrix u = transfer_matrix(s, j, s.x(j + 1), lambda);
      const Matrix ubar = transfer_matrix(s, j, s.x(j + 1), std::conj(lambda));
      CHECK(max_abs(Matrix(ubar.adjoint() * s.J * u - s.J)) <=
            1e-11 * std::max(1.0, max_abs(u) * max_abs(u)));
    }
  }
}

TEST_CASE("gap integral block agrees with high-order quadrature") {
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const SystemSpec s = random_spec(rng, with_densities());
    std::uniform_int_distribution<int> pick(0, s.N());
    const int j = pick(rng);
    const Complex lambda(std::uniform_real_distribution<>(-2, 2)(rng),
                         std::uniform_real_distribution<>(-2, 2)(rng));
    const double x0 = s.x(j), x1 = s.x(j + 1);
    const Matrix w = s.gap_W(j);
    const Matrix abar = gap_generator(s, j, std::conj(lambda));
    const Matrix lib = gap_integral_matrix(s, j, x1, lambda);
    // reference: ∫ U(t, λ̄)* W dt with U from the independent integrator
    const Matrix ref = oracle::quad_matrix(
        [&](double t) {
          const Matrix u = oracle::integrate_linear([&](double) { return abar; }, x0, t,
                                                    Matrix::Identity(s.n, s.n), 1e-13);
          return Matrix(u.adjoint() * w);
        },
        x0, x1, 64);
    worst = std::max(worst, max_abs(Matrix(lib - ref)) / std::max(1.0, max_abs(ref)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("propagated homogeneous kernel paths have zero residual") {
  for (int trial = 0; trial < 6; ++trial) {
    const SystemSpec s = random_spec(rng, with_densities());
    const Complex lambda = generic_lambda(s, SampleRegion{}, 100 + trial);
    const BlockSystem blocks = assemble(s, lambda);
    const Matrix kern = kernel_basis(blocks.B, Tolerances{}, false);
    REQUIRE(kern.cols() >= s.n);
    const RightHandSide zero = RightHandSide::zero(s);
    for (int c = 0; c < kern.cols(); ++c) {
      const BalancedPath path = propagate_path(s, lambda, kern.col(c), zero);
      CHECK(residual(s, path).max() <= 1e-9);
    }
  }
}

TEST_CASE("evaluate: endpoints, atoms, gap interior, domain guard") {
  std::mt19937_64 local(5);
  const SystemSpec s = random_spec(local);
  const Complex lambda(0.3, 0.9);
  const RightHandSide f = random_rhs(s, local);
  const Vector u0 = random_vector(local, s.n * (s.N() + 1));
  const BalancedPath p = propagate_path(s, lambda, u0, f);

  CHECK((evaluate(s, p, s.a) - p.start).norm() < 1e-13);
  CHECK((evaluate(s, p, s.b) - p.end).norm() < 1e-13);
  for (int k = 0; k < s.N(); ++k) {
    CHECK((evaluate(s, p, s.atoms[k].x) - p.atom[k].mid).norm() < 1e-13);
    // balanced value is the mean of the one-sided limits
    CHECK((p.atom[k].mid - 0.5 * (p.atom[k].left + p.atom[k].right)).norm() < 1e-13);
  }
  // inside gap 0: variation of constants from the left edge,
  // u(x) = U(x) (c_0 + J^{-1} ∫ U(t,λ̄)* W dt f_0)
  const double xm = 0.5 * (s.x(0) + s.x(1));
  const Vector direct =
      transfer_matrix(s, 0, xm, lambda) *
      (p.c[0] + s.J.partialPivLu().solve(gap_integral_matrix(s, 0, xm, lambda) * f.gap[0]));
  CHECK((evaluate(s, p, xm) - direct).norm() <= 1e-11 * std::max(1.0, direct.norm()));

  CHECK_THROWS_AS(evaluate(s, p, s.b + 0.5), OutOfDomain);
  CHECK_THROWS_AS(evaluate(s, p, s.a - 0.5), OutOfDomain);
}

TEST_CASE("path algebra: add_scaled and coefficient_stack are linear") {
  std::mt19937_64 local(6);
  const SystemSpec s = random_spec(local);
  const Complex lambda(1.1, 0.4);
  const RightHandSide f = random_rhs(s, local);
  const RightHandSide g = random_rhs(s, local);
  const Vector ua = random_vector(local, s.n * (s.N() + 1));
  const Vector ub = random_vector(local, s.n * (s.N() + 1));
  const Complex alpha(0.3, -1.7);

  BalancedPath pa = propagate_path(s, lambda, ua, f);
  const BalancedPath pb = propagate_path(s, lambda, ub, g);

  RightHandSide fg = f;
  add_scaled(fg, alpha, g);
  const BalancedPath direct = propagate_path(s, lambda, Vector(ua + alpha * ub), fg);

  add_scaled(pa, alpha, pb);
  CHECK((coefficient_stack(pa) - coefficient_stack(direct)).norm() <= 1e-12);
  for (double x : {s.a, s.atoms[0].x, s.b}) {
    CHECK((evaluate(s, pa, x) - evaluate(s, direct, x)).norm() <=
          1e-11 * std::max(1.0, evaluate(s, direct, x).norm()));
  }

  scale_path(pa, Complex(2, 0));
  CHECK((coefficient_stack(pa) - 2.0 * coefficient_stack(direct)).norm() <= 1e-12);
}
