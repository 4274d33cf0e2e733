#pragma once

// Property suites behind the `verify` command.  Each check runs a batch of
// randomized trials against an identity that holds exactly in the theory
// and reports the worst observed defect next to its pass threshold.

#include <mdeq/system.hpp>
#include <mdeq/types.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mdeq {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst defect seen (0 when the check is structural)
  int trials = 0;
  std::string note;
};

bool all_pass(const std::vector<CheckResult>& checks);

// Identity checks on one spec: block-system identities, integer rank
// identities, solvability route agreement; for purely atomic w also
// deficiency bounds, adjoint duality with the dimension count, the endpoint
// form identity, and canonical-representative stability.  trials <= 0 makes
// every check pass vacuously, with a warning note.
std::vector<CheckResult> run_property_suite(const SystemSpec& spec, std::uint64_t seed,
                                            int trials, const Tolerances& tol = {});

// Closed-form cross-checks of the built-in family (resolvent values, norm,
// kernel table, subspace decomposition) followed by the property suite on
// the same spec.
std::vector<CheckResult> run_builtin_suite(int M, std::uint64_t seed, int trials,
                                           const Tolerances& tol = {});

}  // namespace mdeq
