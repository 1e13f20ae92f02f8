#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nnpart/multiscale.hpp"

namespace nnpart {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// Even-p exactness, general-p kernel error and the Taylor remainder.
std::vector<CheckResult> verify_kernels(std::uint64_t seed = 1);
/// Distribution LP on random matrices with M + Mᵀ >= 0.
std::vector<CheckResult> verify_lp(long trials = 10000, std::uint64_t seed = 1);
/// Lifted truth inside every scale set after every round of a short
/// multiscale run.
std::vector<CheckResult> verify_containment(long rounds = 200, std::uint64_t seed = 1);
/// Volume ratio on mistake rounds of two-point runs in d = 2.
std::vector<CheckResult> verify_volume(long mistakes = 10, std::size_t samples = 20000, std::uint64_t seed = 1);

/// Multiscale options for small runs: p = 2.5, d = 1, c_scale = 1.
MultiscaleOptions desk_multiscale_options(double separation);

struct ContainmentStats {
  long rounds = 0;
  long violations = 0;
  double worst = 0.0;  // largest constraint violation seen
  int scales = 0;      // scale sets created
};
/// Two-center multiscale run on uniform queries in [-1, 1]^d.
ContainmentStats containment_run(const MultiscaleOptions& opt, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                 long rounds, std::uint64_t seed);

struct VolumeSample {
  double ratio = 0.0;
  double std_error = 0.0;
  int index = 0;
};
/// Runs d = 2 two-point episodes on uniform queries until `mistakes` mistake
/// rounds are seen, estimating Vol(K' + z_i B)/Vol(K + z_i B) on each.
std::vector<VolumeSample> volume_ratios(long mistakes, std::size_t samples, std::uint64_t seed);

/// Prints one PASS/FAIL line per check; returns true if all passed.
bool report(std::ostream& out, const std::vector<CheckResult>& checks);

int cmd_verify(const std::string& suite);

}  // namespace nnpart
