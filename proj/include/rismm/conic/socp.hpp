#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "rismm/conic/ipm.hpp"
#include "rismm/system_model.hpp"

namespace rismm {

// Beamformer feasibility for a common SINR target: find W with
//
//   Re(g_k^H w_k) >= sqrt(xi) * ||[g_k^H W_(k), 1]||   for every user k,
//   ||w-bar_m|| <= sqrt(P)                             for every AP m,
//
// solved as a max-slack second-order cone program (the slack rides on the
// SINR cones; power stays hard), so a feasible verdict carries a margin and
// an infeasible one a violated relaxation amount.

struct SocpFeasibilityProblem {
  Eigen::MatrixXcd effective;  // K x M rows g_k^H
  double target_sinr = 0.0;    // xi
  double power = 1.0;          // P

  void validate() const {
    if (target_sinr < 0.0) throw std::invalid_argument("socp: target must be nonnegative");
    if (!(power > 0.0)) throw std::invalid_argument("socp: power must be positive");
  }
};

enum class SocpStatus { feasible, infeasible, failure };

struct SocpResult {
  SocpStatus status = SocpStatus::failure;
  BeamMatrix w;        // populated when feasible
  double slack = 0.0;  // achieved max-min SINR-cone slack (normalized units)
  int iterations = 0;
};

inline SocpResult socp_feasibility(const SocpFeasibilityProblem& problem,
                                   const IpmOptions& ipm_opts = {}) {
  problem.validate();
  const int k_users = static_cast<int>(problem.effective.rows());
  const int m_aps = static_cast<int>(problem.effective.cols());
  const double sqrt_xi = std::sqrt(problem.target_sinr);
  const double sqrt_p = std::sqrt(problem.power);

  // Normalize channels and power to O(1).
  double gscale = 0.0;
  for (int k = 0; k < k_users; ++k)
    gscale = std::max(gscale, problem.effective.row(k).norm());
  if (gscale == 0.0) gscale = 1.0;
  Eigen::MatrixXcd eff = problem.effective / gscale;
  const double noise_hat = 1.0 / (gscale * sqrt_p);

  const int nw = m_aps * k_users;
  const int ny = 2 * nw + 1;  // Re(w), Im(w), slack
  const int t_idx = 2 * nw;
  auto re_idx = [&](int m, int j) { return j * m_aps + m; };
  auto im_idx = [&](int m, int j) { return nw + j * m_aps + m; };

  const int user_cone_dim = 2 * k_users;      // 1 + 2(K-1) + 1
  const int ap_cone_dim = 1 + 2 * k_users;
  const int n = k_users * user_cone_dim + m_aps * ap_cone_dim;

  ConicProblem prob;
  prob.a = Eigen::MatrixXd::Zero(ny, n);
  prob.b = Eigen::VectorXd::Zero(ny);
  prob.c = Eigen::VectorXd::Zero(n);
  prob.b(t_idx) = 1.0;  // the conic dual maximizes the slack

  // Each cone coordinate i encodes s_i = beta_i + alpha_i^T y via
  // c_i = beta_i and A(:, i) = -alpha_i.
  int col = 0;
  for (int k = 0; k < k_users; ++k) {
    // head: Re(g_k^H w_k) - t
    for (int m = 0; m < m_aps; ++m) {
      prob.a(re_idx(m, k), col) = -eff(k, m).real();
      prob.a(im_idx(m, k), col) = eff(k, m).imag();
    }
    prob.a(t_idx, col) = 1.0;
    ++col;
    for (int j = 0; j < k_users; ++j) {
      if (j == k) continue;
      for (int m = 0; m < m_aps; ++m) {
        prob.a(re_idx(m, j), col) = -sqrt_xi * eff(k, m).real();
        prob.a(im_idx(m, j), col) = sqrt_xi * eff(k, m).imag();
        prob.a(re_idx(m, j), col + 1) = -sqrt_xi * eff(k, m).imag();
        prob.a(im_idx(m, j), col + 1) = -sqrt_xi * eff(k, m).real();
      }
      col += 2;
    }
    prob.c(col) = sqrt_xi * noise_hat;
    ++col;
    prob.cones.push_back({ConeKind::soc, user_cone_dim});
  }
  for (int m = 0; m < m_aps; ++m) {
    prob.c(col) = 1.0;  // per-AP budget in normalized units
    ++col;
    for (int j = 0; j < k_users; ++j) {
      prob.a(re_idx(m, j), col) = -1.0;
      prob.a(im_idx(m, j), col + 1) = -1.0;
      col += 2;
    }
    prob.cones.push_back({ConeKind::soc, ap_cone_dim});
  }

  auto sol = solve_conic(prob, ipm_opts);
  SocpResult out;
  out.iterations = sol.iterations;
  if (sol.status == IpmStatus::numerical) return out;

  const double slack = sol.dual_obj;  // b^T y = t
  out.slack = slack;
  if (slack < -1e-7 && sol.status == IpmStatus::optimal) {
    out.status = SocpStatus::infeasible;
    return out;
  }
  if (sol.status != IpmStatus::optimal && slack < 0.0) {
    out.status = SocpStatus::failure;
    return out;
  }

  Eigen::MatrixXcd w(m_aps, k_users);
  for (int j = 0; j < k_users; ++j)
    for (int m = 0; m < m_aps; ++m)
      w(m, j) = sqrt_p * std::complex<double>(sol.y(re_idx(m, j)), sol.y(im_idx(m, j)));
  out.w = BeamMatrix(std::move(w));
  out.w.clamp_power(problem.power);

  // Validate the claimed feasibility in original units. The slack may be a
  // hair negative (within tolerance); accept residuals up to it.
  double worst = 0.0;
  for (int k = 0; k < k_users; ++k) {
    std::complex<double> desired = (problem.effective.row(k) * out.w.w.col(k))(0);
    double inter = 1.0;
    for (int j = 0; j < k_users; ++j) {
      if (j == k) continue;
      std::complex<double> leak = (problem.effective.row(k) * out.w.w.col(j))(0);
      inter += std::norm(leak);
    }
    worst = std::max(worst, sqrt_xi * std::sqrt(inter) - desired.real());
  }
  if (worst > (1e-8 + std::max(0.0, -slack)) * gscale * sqrt_p) {
    out.status = SocpStatus::failure;
    return out;
  }
  out.status = SocpStatus::feasible;
  return out;
}

}  // namespace rismm
