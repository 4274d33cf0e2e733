#pragma once

// Random instances for property checks.  Every draw is valid by
// construction: J skew-adjoint invertible, dq Hermitian, dw positive
// semidefinite with a controllable rank deficit, positions strictly
// increasing inside the interval.

#include <mdeq/propagate.hpp>
#include <mdeq/system.hpp>
#include <mdeq/types.hpp>

#include <random>

namespace mdeq {

struct SpecOptions {
  int n_min = 1;
  int n_max = 4;
  int atoms_min = 1;
  int atoms_max = 6;
  bool atomic_w = true;         // no gap w density
  bool zero_gap_density = false;  // no gap q density either
  bool plant_l0 = false;  // force a known zero-norm homogeneous solution
  double w_rank_deficit = 0.5;  // chance for each dw eigenvalue to vanish
};

SystemSpec random_spec(std::mt19937_64& rng, const SpecOptions& opt = {});

// Random values on every atom and gap, standard complex normal entries.
RightHandSide random_rhs(const SystemSpec& spec, std::mt19937_64& rng);

Matrix random_unitary(std::mt19937_64& rng, int m);

Vector random_vector(std::mt19937_64& rng, int m);

}  // namespace mdeq
