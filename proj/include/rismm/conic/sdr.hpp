#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "rismm/conic/sdp.hpp"
#include "rismm/system_model.hpp"

namespace rismm {

struct SdrFeasibilityResult {
  bool feasible = false;
  SdpSolution solution;
};

/// Phase-shift feasibility for a common SINR floor: checks whether a lifted
/// unit-diagonal psd V exists whose per-user linearized SINR reaches
/// `min_sinr`, using the beam-dependent blocks of the assembly. Solved in
/// max-slack form, so the returned V carries the achieved margin.
inline SdrFeasibilityResult sdp_feasibility(const SdrAssembly& assembly, double min_sinr,
                                            const SdpOptions& opts = {}) {
  if (!assembly.has_beam_terms)
    throw std::invalid_argument("sdp_feasibility: assembly lacks beam-dependent blocks");
  if (min_sinr < 0.0) throw std::invalid_argument("sdp_feasibility: negative SINR floor");

  const int k_users = assembly.num_users;
  SdpProblem prob;
  const int lifted = assembly.total_elements + 1;
  prob.objective = Eigen::MatrixXcd::Zero(lifted, lifted);
  prob.inequalities.reserve(k_users);
  for (int k = 0; k < k_users; ++k) {
    Eigen::MatrixXcd a = assembly.lifted_kj(k, k);
    double rhs = -std::norm(assembly.pair_scalar(k, k));
    double interference = 1.0;
    for (int j = 0; j < k_users; ++j) {
      if (j == k) continue;
      a -= min_sinr * assembly.lifted_kj(k, j);
      interference += std::norm(assembly.pair_scalar(k, j));
    }
    rhs += min_sinr * interference;
    prob.inequalities.push_back({std::move(a), rhs});
  }

  SdrFeasibilityResult out;
  out.solution = solve_sdp(prob, opts);
  // solve_sdp already applies the normalized slack tolerance.
  out.feasible = out.solution.status == SolveStatus::optimal ||
                 out.solution.status == SolveStatus::max_iters;
  return out;
}

}  // namespace rismm
