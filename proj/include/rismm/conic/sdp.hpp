#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rismm/conic/ipm.hpp"

namespace rismm {

// Complex Hermitian semidefinite programs
//
//   max  tr(C V)   s.t.  [V]_ii = 1,  tr(A_r V) >= b_r,  V psd
//
// solved through the real symmetric embedding H -> [Re H, -Im H; Im H, Re H]
// (which doubles traces), with unit-diagonal constraints becoming pairwise
// sums on the embedded diagonal. Inequalities ride along as nonnegative
// slacks; pure feasibility problems are solved in max-slack form so the
// verdict comes with a margin.

struct SdpProblem {
  Eigen::MatrixXcd objective;  // Hermitian C
  bool unit_diagonal = true;
  struct Inequality {
    Eigen::MatrixXcd a;  // Hermitian
    double b = 0.0;
  };
  std::vector<Inequality> inequalities;
};

enum class SolveStatus { optimal, infeasible, max_iters, failure };

struct SdpSolution {
  Eigen::MatrixXcd v;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::failure;
  double duality_gap = 0.0;
  double res_primal = 0.0, res_dual = 0.0;
  int iterations = 0;
  // Feasibility-mode extras: the achieved minimum constraint slack and, for
  // infeasible verdicts, convex multipliers lambda with
  // max_V sum_r lambda_r (tr(A_r V) - b_r) = slack < 0.
  double slack = 0.0;
  Eigen::VectorXd certificate;
};

struct SdpOptions {
  IpmOptions ipm;
  double feas_tol = 1e-7;  // minimum normalized slack accepted as feasible
};

namespace sdp_detail {

inline Eigen::MatrixXd embed(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.bottomRightCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  return 0.5 * (out + out.transpose());
}

/// Inverse of `embed` up to the structure average (X + J X J^T)/2, which
/// preserves feasibility and objective for embedded data.
inline Eigen::MatrixXcd extract(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows() / 2;
  Eigen::MatrixXd re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  Eigen::MatrixXd im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  Eigen::MatrixXcd v(n, n);
  v.real() = re;
  v.imag() = im;
  return 0.5 * (v + v.adjoint());
}

inline void check_hermitian(const Eigen::MatrixXcd& h, const char* what) {
  if (h.rows() != h.cols()) throw std::invalid_argument(std::string(what) + ": not square");
  double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (dev > 1e-12 * scale)
    throw std::invalid_argument(std::string(what) + ": not Hermitian");
}

}  // namespace sdp_detail

/// Maximizes tr(C V) over unit-diagonal Hermitian psd V subject to optional
/// trace inequalities. With inequalities present, feasibility is established
/// first via the max-slack program; with a zero objective that phase is the
/// whole answer.
inline SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opts = {}) {
  sdp_detail::check_hermitian(problem.objective, "sdp objective");
  for (const auto& ineq : problem.inequalities)
    sdp_detail::check_hermitian(ineq.a, "sdp inequality");

  const int nc = static_cast<int>(problem.objective.rows());
  const int ne = 2 * nc;
  const int psd_dim = svec::dim(ne);
  const int n_ineq = static_cast<int>(problem.inequalities.size());

  const double obj_scale = std::max(problem.objective.cwiseAbs().maxCoeff(), 1e-300);
  double con_scale = 1e-300;
  for (const auto& ineq : problem.inequalities)
    con_scale = std::max({con_scale, ineq.a.cwiseAbs().maxCoeff(), std::abs(ineq.b)});

  const bool zero_objective = problem.objective.cwiseAbs().maxCoeff() == 0.0;

  // Shift bound making the max-slack variable nonnegative: for unit-diagonal
  // psd V, |tr(A V)| <= max|A_ij| * nc^2 in scaled units.
  const double slack_shift = static_cast<double>(nc) * nc + 2.0;

  auto diag_rows = [&](ConicProblem& prob, int extra_cols) {
    prob.a.setZero();
    for (int i = 0; i < nc; ++i) {
      Eigen::MatrixXd e = Eigen::MatrixXd::Zero(ne, ne);
      e(i, i) = 1.0;
      e(nc + i, nc + i) = 1.0;
      prob.a.row(i).head(psd_dim) = svec::from_matrix(e).transpose();
      prob.b(i) = 2.0;
    }
    (void)extra_cols;
  };

  SdpSolution out;

  // Phase 1: max-slack feasibility when inequalities are present.
  if (n_ineq > 0) {
    ConicProblem prob;
    const int n_aux = 1 + n_ineq;  // shifted slack + per-constraint surpluses
    const int nv = psd_dim + n_aux;
    prob.a.resize(nc + n_ineq, nv);
    prob.b.resize(nc + n_ineq);
    prob.c = Eigen::VectorXd::Zero(nv);
    diag_rows(prob, n_aux);
    for (int r = 0; r < n_ineq; ++r) {
      const auto& ineq = problem.inequalities[r];
      // tr(A V) - s - t_r = b  with  s = s_plus - shift
      prob.a.row(nc + r).head(psd_dim) =
          0.5 * svec::from_matrix(sdp_detail::embed(ineq.a / con_scale)).transpose();
      prob.a(nc + r, psd_dim) = -1.0;
      prob.a(nc + r, psd_dim + 1 + r) = -1.0;
      prob.b(nc + r) = ineq.b / con_scale - slack_shift;
    }
    prob.c(psd_dim) = -1.0;  // maximize the shifted slack
    prob.cones = {{ConeKind::psd, ne}, {ConeKind::nonneg, n_aux}};

    auto sol = solve_conic(prob, opts.ipm);
    if (sol.status == IpmStatus::numerical) {
      out.status = SolveStatus::failure;
      return out;
    }
    const double slack = sol.x(psd_dim) - slack_shift;  // in scaled units
    out.slack = slack * con_scale;
    out.v = sdp_detail::extract(svec::to_matrix(sol.x.head(psd_dim), ne));
    out.iterations = sol.iterations;
    out.res_primal = sol.res_primal;
    out.res_dual = sol.res_dual;
    out.duality_gap = sol.gap * con_scale;
    if (slack < -opts.feas_tol) {
      out.status = SolveStatus::infeasible;
      // Multipliers of the inequality rows, normalized to a convex combination.
      Eigen::VectorXd lam = sol.y.tail(n_ineq);
      double total = lam.sum();
      if (std::abs(total) > 1e-300) lam /= total;
      out.certificate = lam;
      out.objective_value = 0.0;
      return out;
    }
    if (zero_objective) {
      out.status = sol.status == IpmStatus::optimal ? SolveStatus::optimal
                                                    : SolveStatus::max_iters;
      out.objective_value = 0.0;
      return out;
    }
  }

  // Phase 2: objective maximization.
  {
    ConicProblem prob;
    const int nv = psd_dim + n_ineq;
    prob.a.resize(nc + n_ineq, nv);
    prob.b.resize(nc + n_ineq);
    prob.c = Eigen::VectorXd::Zero(nv);
    diag_rows(prob, n_ineq);
    for (int r = 0; r < n_ineq; ++r) {
      const auto& ineq = problem.inequalities[r];
      prob.a.row(nc + r).head(psd_dim) =
          0.5 * svec::from_matrix(sdp_detail::embed(ineq.a / con_scale)).transpose();
      prob.a(nc + r, psd_dim + r) = -1.0;
      prob.b(nc + r) = ineq.b / con_scale;
    }
    prob.c.head(psd_dim) =
        -0.5 * svec::from_matrix(sdp_detail::embed(problem.objective / obj_scale));
    prob.cones.push_back({ConeKind::psd, ne});
    if (n_ineq > 0) prob.cones.push_back({ConeKind::nonneg, n_ineq});

    auto sol = solve_conic(prob, opts.ipm);
    if (sol.status == IpmStatus::numerical) {
      out.status = SolveStatus::failure;
      return out;
    }
    out.v = sdp_detail::extract(svec::to_matrix(sol.x.head(psd_dim), ne));
    out.objective_value = -sol.primal_obj * obj_scale;
    out.duality_gap = sol.gap * obj_scale;
    out.res_primal = sol.res_primal;
    out.res_dual = sol.res_dual;
    out.iterations = sol.iterations;
    out.status = sol.status == IpmStatus::optimal ? SolveStatus::optimal
                                                  : SolveStatus::max_iters;
  }
  return out;
}

}  // namespace rismm
