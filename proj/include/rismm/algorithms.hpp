#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rismm/channel.hpp"
#include "rismm/conic/randomization.hpp"
#include "rismm/conic/sdp.hpp"
#include "rismm/conic/sdr.hpp"
#include "rismm/conic/socp.hpp"
#include "rismm/ilp/bilp.hpp"
#include "rismm/phases.hpp"
#include "rismm/rng.hpp"
#include "rismm/system_model.hpp"

namespace rismm {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimizationResult {
  BeamMatrix w;
  std::optional<PhaseVector> phases;
  Eigen::VectorXd per_user_rate;
  double min_rate = 0.0;
  double min_sinr = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // per-iteration minimum SINR, algorithm-defined units
  std::vector<std::string> warnings;
};

struct AlgorithmOptions {
  double bisection_eps = 0.1;
  int randomization_count = 1000;
  int max_alternations = 30;       // outer rounds of the alternating scheme
  int max_refinements = 300;       // coordinate visits of the successive refinement
  long bilp_node_limit = 1000000;
  IpmOptions ipm;
};

namespace alg_detail {

/// Recomputes rates for the returned operating point, so reported numbers can
/// never go stale relative to the beamformer/phase pair.
inline OptimizationResult finalize(const ChannelRealization& ch, BeamMatrix w,
                                   std::optional<PhaseVector> phases, int iterations,
                                   std::vector<double> trace = {},
                                   std::vector<std::string> warnings = {}) {
  Eigen::MatrixXcd eff = phases ? effective_channel(ch, *phases) : ch.ap_to_user;
  auto sr = sinr_rate(eff, w);
  OptimizationResult out;
  out.w = std::move(w);
  out.phases = std::move(phases);
  out.per_user_rate = sr.rate;
  out.min_rate = sr.min_rate;
  out.min_sinr = sr.min_sinr;
  out.iterations = iterations;
  out.trace = std::move(trace);
  out.warnings = std::move(warnings);
  return out;
}

inline double min_sinr_of(const ChannelRealization& ch, const PhaseVector& phases,
                          const BeamMatrix& w) {
  return sinr_rate(effective_channel(ch, phases), w).min_sinr;
}

}  // namespace alg_detail

struct BeamformingResult {
  BeamMatrix w;
  double sinr_floor = 0.0;  // proven-feasible common SINR
  int solves = 0;
};

/// Max-min transmit beamforming at fixed effective channels: bisection on the
/// common SINR target, each step a second-order-cone feasibility program.
inline BeamformingResult max_min_beamforming(const Eigen::MatrixXcd& effective, double power,
                                             const AlgorithmOptions& opts = {}) {
  const int k_users = static_cast<int>(effective.rows());
  const int m_aps = static_cast<int>(effective.cols());

  auto probe = [&](double xi) {
    return socp_feasibility({effective, xi, power}, opts.ipm);
  };

  BeamformingResult out;
  auto base = probe(0.0);
  if (base.status != SocpStatus::feasible)
    throw SolverError("beamforming bisection: zero-target program failed");
  out.w = base.w;
  out.solves = 1;

  double lo = 0.0;
  double hi = 0.0;
  for (int k = 0; k < k_users; ++k)
    hi = std::max(hi, m_aps * power * effective.row(k).squaredNorm());
  hi = hi * (1.0 + 1e-3) + 1e-3;

  while (hi - lo > opts.bisection_eps) {
    const double mid = 0.5 * (lo + hi);
    auto res = probe(mid);
    ++out.solves;
    if (res.status == SocpStatus::feasible) {
      lo = mid;
      out.w = res.w;
    } else if (res.status == SocpStatus::infeasible) {
      hi = mid;
    } else {
      throw SolverError("beamforming bisection: cone solver failure at target " +
                        std::to_string(mid));
    }
  }
  out.sinr_floor = lo;
  return out;
}

/// Joint design for one user with continuous phase shifts: lifted relaxation
/// of the effective-power objective, Gaussian rank-one recovery, then
/// matched-filter beamforming on the resulting channel.
inline OptimizationResult algorithm1_single_user_continuous(const ChannelRealization& ch,
                                                            double power, Rng& rng,
                                                            const AlgorithmOptions& opts = {}) {
  if (ch.num_users != 1)
    throw std::invalid_argument("single-user continuous design requires one user");
  const int i_dim = ch.total_elements();
  if (i_dim == 0) {
    BeamMatrix w(mrt_beamformer(ch.ap_to_user.row(0), power));
    return alg_detail::finalize(ch, std::move(w), PhaseVector::continuous({}), 0);
  }

  auto assembly = assemble_sdr(ch);
  SdpProblem prob;
  prob.objective = assembly.lifted;
  SdpOptions sopts;
  sopts.ipm = opts.ipm;
  auto sol = solve_sdp(prob, sopts);
  if (sol.status == SolveStatus::failure)
    throw SolverError("single-user continuous design: relaxation solve failed");

  auto score = [&](const Eigen::VectorXcd& cand) {
    // effective-power surrogate: cand^H quad cand + 2 Re(cand^H linear)
    return std::real((cand.adjoint() * assembly.quad * cand)(0)) +
           2.0 * std::real((cand.adjoint() * assembly.linear)(0));
  };
  auto rand_res = gaussian_randomize(sol.v, score, opts.randomization_count, rng);

  Eigen::MatrixXcd eff = effective_channel(ch, rand_res.phases);
  BeamMatrix w(mrt_beamformer(eff.row(0), power));
  return alg_detail::finalize(ch, std::move(w), rand_res.phases, sol.iterations);
}

/// Joint design for one user with discrete phase shifts: exact linearized
/// maximization of the effective-power bound, then matched-filter beamforming.
inline OptimizationResult algorithm2_single_user_discrete(const ChannelRealization& ch,
                                                          double power, int bits,
                                                          const AlgorithmOptions& opts = {}) {
  if (ch.num_users != 1)
    throw std::invalid_argument("single-user discrete design requires one user");
  if (bits < 1) throw std::domain_error("single-user discrete design: bits must be >= 1");
  const int i_dim = ch.total_elements();
  if (i_dim == 0) {
    BeamMatrix w(mrt_beamformer(ch.ap_to_user.row(0), power));
    return alg_detail::finalize(ch, std::move(w), PhaseVector::zeros_discrete(bits, 0), 0);
  }

  auto assembly = assemble_sdr(ch);
  auto bilp = build_bilp(assembly.quad, assembly.linear, bits);
  BilpOptions bopts;
  bopts.node_limit = opts.bilp_node_limit;
  auto sol = solve_bilp(bilp, bopts);

  std::vector<std::string> warnings;
  if (sol.status == BilpStatus::node_limit)
    warnings.push_back("discrete search hit the node limit; using the incumbent");

  PhaseVector phases = PhaseVector::discrete(bits, sol.levels);
  Eigen::MatrixXcd eff = effective_channel(ch, phases);
  BeamMatrix w(mrt_beamformer(eff.row(0), power));
  return alg_detail::finalize(ch, std::move(w), std::move(phases),
                              static_cast<int>(sol.explored_nodes), {}, std::move(warnings));
}

/// Transmit-beamforming stage at fixed phases.
inline BeamformingResult algorithm3_multiuser_beamforming(const ChannelRealization& ch,
                                                          const PhaseVector& phases,
                                                          double power,
                                                          const AlgorithmOptions& opts = {}) {
  return max_min_beamforming(effective_channel(ch, phases), power, opts);
}

/// Phase-shift stage at a fixed beamformer: bisection over the common SINR
/// with lifted-relaxation feasibility, then Gaussian recovery scored by the
/// true minimum SINR of each candidate.
inline PhaseVector algorithm4_multiuser_phases(const ChannelRealization& ch,
                                               const BeamMatrix& w, Rng& rng,
                                               const AlgorithmOptions& opts = {}) {
  const int i_dim = ch.total_elements();
  if (i_dim == 0) return PhaseVector::continuous({});
  const int k_users = ch.num_users;
  auto assembly = assemble_sdr(ch, w);

  SdpOptions sopts;
  sopts.ipm = opts.ipm;

  Eigen::MatrixXcd relaxed;
  if (k_users == 1) {
    // Single constraint: the bisection limit is the plain maximization of the
    // lifted user metric.
    SdpProblem prob;
    prob.objective = assembly.lifted_kj(0, 0);
    auto sol = solve_sdp(prob, sopts);
    if (sol.status == SolveStatus::failure)
      throw SolverError("phase stage: relaxation solve failed");
    relaxed = sol.v;
  } else {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_users; ++k) {
      double reach = assembly.vec_kj(k, k).lpNorm<1>() + std::abs(assembly.pair_scalar(k, k));
      hi = std::min(hi, reach * reach);
    }
    hi = hi * (1.0 + 1e-3) + 1e-3;

    auto base = sdp_feasibility(assembly, 0.0, sopts);
    if (!base.feasible) throw SolverError("phase stage: zero-floor program failed");
    relaxed = base.solution.v;
    while (hi - lo > opts.bisection_eps) {
      const double mid = 0.5 * (lo + hi);
      auto res = sdp_feasibility(assembly, mid, sopts);
      if (res.solution.status == SolveStatus::failure)
        throw SolverError("phase stage: relaxation failure at floor " + std::to_string(mid));
      if (res.feasible) {
        lo = mid;
        relaxed = res.solution.v;
      } else {
        hi = mid;
      }
    }
  }

  auto score = [&](const Eigen::VectorXcd& cand) {
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < k_users; ++k) {
      const std::complex<double> sig =
          (cand.adjoint() * assembly.vec_kj(k, k))(0) + assembly.pair_scalar(k, k);
      double interference = 1.0;
      for (int j = 0; j < k_users; ++j) {
        if (j == k) continue;
        const std::complex<double> leak =
            (cand.adjoint() * assembly.vec_kj(k, j))(0) + assembly.pair_scalar(k, j);
        interference += std::norm(leak);
      }
      worst = std::min(worst, std::norm(sig) / interference);
    }
    return worst;
  };
  return gaussian_randomize(relaxed, score, opts.randomization_count, rng).phases;
}

/// Alternating optimization for the multi-user continuous design. Alternates
/// the beamforming and phase stages, stops at the first non-improvement of
/// the minimum SINR (or after the round budget) and returns the best operating
/// point seen. The trace holds the per-round minimum SINR.
inline OptimizationResult algorithm5_alternating(const ChannelRealization& ch, double power,
                                                 Rng& rng, const AlgorithmOptions& opts = {}) {
  PhaseVector phases = PhaseVector::zeros_continuous(ch.total_elements());
  std::vector<double> trace;

  BeamMatrix best_w;
  PhaseVector best_phases = phases;
  double best_sinr = -1.0;
  double prev_sinr = -std::numeric_limits<double>::infinity();
  int rounds = 0;

  for (int t = 1; t <= opts.max_alternations; ++t) {
    Rng stage_rng = rng.split(t);
    BeamformingResult beam;
    try {
      beam = algorithm3_multiuser_beamforming(ch, phases, power, opts);
    } catch (const SolverError& err) {
      throw SolverError("alternation round " + std::to_string(t) + ": " + err.what());
    }
    ++rounds;
    {
      double here = alg_detail::min_sinr_of(ch, phases, beam.w);
      if (here > best_sinr) {
        best_sinr = here;
        best_w = beam.w;
        best_phases = phases;
      }
    }

    PhaseVector next_phases;
    try {
      next_phases = algorithm4_multiuser_phases(ch, beam.w, stage_rng, opts);
    } catch (const SolverError& err) {
      throw SolverError("alternation round " + std::to_string(t) + ": " + err.what());
    }
    const double paired = alg_detail::min_sinr_of(ch, next_phases, beam.w);
    trace.push_back(paired);
    if (paired > best_sinr) {
      best_sinr = paired;
      best_w = beam.w;
      best_phases = next_phases;
    }
    if (paired <= prev_sinr || t == opts.max_alternations) break;
    prev_sinr = paired;
    phases = next_phases;
  }

  return alg_detail::finalize(ch, std::move(best_w), std::move(best_phases), rounds,
                              std::move(trace));
}

/// ZF-based successive refinement for the multi-user discrete design:
/// coordinate descent over the element phases in lexicographic order, each
/// visit an exhaustive scan of the level set against the worst per-AP
/// pseudo-inverse row power. The trace holds the common SINR after each visit.
inline OptimizationResult algorithm6_zf_refinement(const ChannelRealization& ch, double power,
                                                   int bits,
                                                   const AlgorithmOptions& opts = {}) {
  if (bits < 1) throw std::domain_error("successive refinement: bits must be >= 1");
  if (ch.num_aps < ch.num_users)
    throw ZfInfeasible("ZF infeasible: fewer APs than users");
  const int i_dim = ch.total_elements();
  const int levels = 1 << bits;

  PhaseVector phases = PhaseVector::zeros_discrete(bits, i_dim);

  auto row_power = [&](const PhaseVector& p) {
    return zf_beamformer(effective_channel(ch, p), power).max_row_norm2;
  };

  double current;
  try {
    current = row_power(phases);
  } catch (const ZfInfeasible&) {
    throw ZfInfeasible("ZF infeasible at the all-zero phase start");
  }

  std::vector<double> trace;
  int visits = 0;
  int since_change = 0;
  int coord = 0;
  while (visits < opts.max_refinements && since_change < std::max(i_dim, 1)) {
    if (i_dim == 0) break;
    int best_level = phases.levels[coord];
    double best_value = current;
    for (int b = 0; b < levels; ++b) {
      if (b == phases.levels[coord]) continue;
      PhaseVector cand = phases;
      cand.levels[coord] = b;
      double value;
      try {
        value = row_power(cand);
      } catch (const ZfInfeasible&) {
        continue;  // a degenerate candidate never wins the scan
      }
      if (value < best_value - 1e-15 ||
          (value < best_value + 1e-15 && b < best_level && value <= best_value)) {
        // strict improvement, with lowest-level tie-break among exact minima
        if (value < best_value) {
          best_value = value;
          best_level = b;
        }
      }
    }
    if (best_level != phases.levels[coord] && best_value < current) {
      phases.levels[coord] = best_level;
      current = best_value;
      since_change = 0;
    } else {
      ++since_change;
    }
    ++visits;
    trace.push_back(power / current);
    coord = (coord + 1) % i_dim;
  }

  auto zf = zf_beamformer(effective_channel(ch, phases), power);
  return alg_detail::finalize(ch, zf.w, std::move(phases), visits, std::move(trace));
}

/// Benchmark: independently drawn phases (uniform over the continuous circle
/// or over the discrete level set), then the matched filter (one user) or the
/// beamforming stage (several users).
inline OptimizationResult random_phase_baseline(const ChannelRealization& ch, double power,
                                                int bits, Rng& rng,
                                                const AlgorithmOptions& opts = {}) {
  const int i_dim = ch.total_elements();
  PhaseVector phases;
  if (bits > 0) {
    std::vector<int> levels(i_dim);
    for (auto& l : levels) l = rng.uniform_int(1 << bits);
    phases = PhaseVector::discrete(bits, std::move(levels));
  } else {
    std::vector<double> theta(i_dim);
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * M_PI);
    phases = PhaseVector::continuous(std::move(theta));
  }

  if (ch.num_users == 1) {
    Eigen::MatrixXcd eff = effective_channel(ch, phases);
    BeamMatrix w(mrt_beamformer(eff.row(0), power));
    return alg_detail::finalize(ch, std::move(w), std::move(phases), 0);
  }
  auto beam = algorithm3_multiuser_beamforming(ch, phases, power, opts);
  return alg_detail::finalize(ch, beam.w, std::move(phases), beam.solves);
}

/// Benchmark: no reflecting surfaces at all; direct links only.
inline OptimizationResult no_ris_baseline(const ChannelRealization& ch, double power,
                                          const AlgorithmOptions& opts = {}) {
  if (ch.num_users == 1) {
    BeamMatrix w(mrt_beamformer(ch.ap_to_user.row(0), power));
    return alg_detail::finalize(ch, std::move(w), std::nullopt, 0);
  }
  auto beam = max_min_beamforming(ch.ap_to_user, power, opts);
  return alg_detail::finalize(ch, beam.w, std::nullopt, beam.solves);
}

}  // namespace rismm
