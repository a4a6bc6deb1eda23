#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace rismm {

// Primal-dual path-following solver for the conic pair
//
//   (P) min <c, x>   s.t.  A x = b,  x in K
//   (D) max <b, y>   s.t.  A^T y + s = c,  s in K
//
// over a product cone K of nonnegative, second-order and dense PSD blocks.
// PSD blocks travel in scaled vector form (svec with sqrt(2) off-diagonals)
// so that plain dot products realize trace inner products. Directions use
// Nesterov-Todd scaling with a Mehrotra predictor-corrector step and dense
// normal-equation factorizations.

enum class ConeKind { nonneg, soc, psd };

struct ConeBlock {
  ConeKind kind;
  int size;  // coordinates (nonneg), cone dimension (soc), matrix order (psd)

  int vec_dim() const {
    return kind == ConeKind::psd ? size * (size + 1) / 2 : size;
  }
  // Normalization for the complementarity measure mu = <x,s> / degree under
  // the plain dot product; a second-order cone contributes x^T s in one
  // lump, so it counts once.
  double degree() const {
    switch (kind) {
      case ConeKind::nonneg: return size;
      case ConeKind::soc: return 1.0;
      case ConeKind::psd: return size;
    }
    return 0.0;
  }
};

struct ConicProblem {
  Eigen::MatrixXd a;  // m x n
  Eigen::VectorXd b;  // m
  Eigen::VectorXd c;  // n
  std::vector<ConeBlock> cones;

  int total_vec_dim() const {
    int n = 0;
    for (const auto& blk : cones) n += blk.vec_dim();
    return n;
  }
};

enum class IpmStatus { optimal, max_iters, numerical };

struct ConicSolution {
  Eigen::VectorXd x, y, s;
  double primal_obj = 0.0, dual_obj = 0.0;
  double gap = 0.0;       // <x, s>
  double rel_gap = 0.0;   // gap / (1 + |pobj| + |dobj|)
  double res_primal = 0.0, res_dual = 0.0;  // relative infinity norms
  int iterations = 0;
  IpmStatus status = IpmStatus::numerical;
};

struct IpmOptions {
  double tol_gap = 1e-9;
  double tol_feas = 1e-9;
  int max_iters = 200;
  double step_fraction = 0.99;
  double init_scale = 10.0;
  bool verbose = false;
  std::ostream* trace = nullptr;  // per-iteration CSV rows when set
};

namespace svec {

inline int dim(int n) { return n * (n + 1) / 2; }

inline Eigen::VectorXd from_matrix(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::VectorXd v(dim(n));
  const double r2 = std::sqrt(2.0);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    v(idx++) = m(j, j);
    for (int i = j + 1; i < n; ++i) v(idx++) = m(i, j) * r2;
  }
  return v;
}

inline Eigen::MatrixXd to_matrix(const Eigen::Ref<const Eigen::VectorXd>& v, int n) {
  Eigen::MatrixXd m(n, n);
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  int idx = 0;
  for (int j = 0; j < n; ++j) {
    m(j, j) = v(idx++);
    for (int i = j + 1; i < n; ++i) {
      double val = v(idx++) * inv_r2;
      m(i, j) = val;
      m(j, i) = val;
    }
  }
  return m;
}

}  // namespace svec

namespace ipm_detail {

// Scaling state of one block. For PSD blocks, factor/factor_inv realize the
// NT scaling as X_hat = inv(G) X inv(G)^T and S_hat = G^T S G, in which both
// scaled points coincide with the diagonal matrix diag(lambda).
struct BlockScaling {
  // nonneg
  Eigen::VectorXd d;        // sqrt(x/s)
  Eigen::VectorXd v_lin;    // sqrt(x*s)
  // soc
  Eigen::VectorXd wh;       // Jordan sqrt of the unit scaling point
  double eta = 1.0;
  Eigen::VectorXd v_soc;    // scaled point
  // psd
  Eigen::MatrixXd factor;      // G
  Eigen::MatrixXd factor_inv;  // G^{-1}
  Eigen::VectorXd lam_sqrt;    // diagonal of the scaled point
};

inline double soc_residual(const Eigen::Ref<const Eigen::VectorXd>& u) {
  return u(0) * u(0) - u.tail(u.size() - 1).squaredNorm();
}

// Quadratic-representation product P(w) u = 2 w (w^T u) - det(w) (J u).
inline Eigen::VectorXd soc_quad_rep(const Eigen::Ref<const Eigen::VectorXd>& w, double detw,
                                    const Eigen::Ref<const Eigen::VectorXd>& u) {
  Eigen::VectorXd out = 2.0 * w.dot(u) * w;
  out(0) -= detw * u(0);
  out.tail(out.size() - 1) += detw * u.tail(u.size() - 1);
  return out;
}

inline Eigen::VectorXd soc_jordan_product(const Eigen::Ref<const Eigen::VectorXd>& u,
                                          const Eigen::Ref<const Eigen::VectorXd>& w) {
  Eigen::VectorXd out(u.size());
  out(0) = u.dot(w);
  out.tail(u.size() - 1) =
      u(0) * w.tail(w.size() - 1) + w(0) * u.tail(u.size() - 1);
  return out;
}

// Solves arrow(v) z = r in closed form.
inline Eigen::VectorXd soc_arrow_solve(const Eigen::Ref<const Eigen::VectorXd>& v,
                                       const Eigen::Ref<const Eigen::VectorXd>& r) {
  const Eigen::Index d = v.size();
  const double det = soc_residual(v);
  Eigen::VectorXd z(d);
  const auto vb = v.tail(d - 1);
  const auto rb = r.tail(d - 1);
  z(0) = (v(0) * r(0) - vb.dot(rb)) / det;
  z.tail(d - 1) = (rb - z(0) * vb) / v(0);
  return z;
}

// Largest step alpha with u + alpha * du staying in the cone (may be +inf).
inline double soc_max_step(const Eigen::Ref<const Eigen::VectorXd>& u,
                           const Eigen::Ref<const Eigen::VectorXd>& du) {
  const Eigen::Index d = u.size();
  const double a = soc_residual(du);
  const double b = 2.0 * (u(0) * du(0) - u.tail(d - 1).dot(du.tail(d - 1)));
  const double c = soc_residual(u);
  double alpha = std::numeric_limits<double>::infinity();
  // roots of a t^2 + b t + c = 0
  const double disc = b * b - 4.0 * a * c;
  if (std::abs(a) < 1e-300) {
    if (b < 0.0) alpha = std::min(alpha, -c / b);
  } else if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    for (double root : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)})
      if (root > 0.0) alpha = std::min(alpha, root);
  }
  if (du(0) < 0.0) alpha = std::min(alpha, -u(0) / du(0));
  return alpha;
}

inline double psd_max_step(const Eigen::VectorXd& v_diag, const Eigen::MatrixXd& delta) {
  // max alpha with diag(v) + alpha * delta psd: scale by v^{-1/2} and bound
  // by the most negative eigenvalue.
  const int n = static_cast<int>(v_diag.size());
  Eigen::MatrixXd scaled(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      scaled(i, j) = delta(i, j) / std::sqrt(v_diag(i) * v_diag(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues()(0);
  if (lam_min >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lam_min;
}

}  // namespace ipm_detail

class ConicSolver {
 public:
  ConicSolver(const ConicProblem& prob, const IpmOptions& opts)
      : p_(prob), o_(opts), m_(static_cast<int>(prob.a.rows())),
        n_(static_cast<int>(prob.a.cols())) {
    if (p_.total_vec_dim() != n_ || p_.b.size() != m_ || p_.c.size() != n_)
      throw std::invalid_argument("conic problem: inconsistent dimensions");
    offsets_.reserve(p_.cones.size());
    int off = 0;
    for (const auto& blk : p_.cones) {
      offsets_.push_back(off);
      off += blk.vec_dim();
      degree_ += blk.degree();
    }
  }

  ConicSolution solve() {
    init_point();
    ConicSolution best;
    double best_merit = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter <= o_.max_iters; ++iter) {
      Eigen::VectorXd rp = p_.b - p_.a * x_;
      Eigen::VectorXd rd = p_.c - p_.a.transpose() * y_ - s_;
      const double gap = x_.dot(s_);
      const double pobj = p_.c.dot(x_);
      const double dobj = p_.b.dot(y_);
      const double rel_gap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
      const double rp_rel = rp.lpNorm<Eigen::Infinity>() / (1.0 + p_.b.lpNorm<Eigen::Infinity>());
      const double rd_rel = rd.lpNorm<Eigen::Infinity>() / (1.0 + p_.c.lpNorm<Eigen::Infinity>());

      if (o_.trace)
        *o_.trace << iter << ',' << gap << ',' << rel_gap << ',' << rp_rel << ','
                  << rd_rel << '\n';

      const double merit = rel_gap + rp_rel + rd_rel;
      if (merit < best_merit) {
        best_merit = merit;
        fill_solution(best, pobj, dobj, gap, rel_gap, rp_rel, rd_rel, iter);
      }
      if (rel_gap <= o_.tol_gap && rp_rel <= o_.tol_feas && rd_rel <= o_.tol_feas) {
        best.status = IpmStatus::optimal;
        return best;
      }
      if (iter == o_.max_iters) break;

      if (!compute_scalings()) {
        best.status = IpmStatus::numerical;
        return best;
      }

      // Scaled residual in s-space and the scaled constraint matrix.
      Eigen::VectorXd rd_hat = scale_s_like(rd);
      Eigen::MatrixXd a_hat(m_, n_);
      for (int r = 0; r < m_; ++r)
        a_hat.row(r) = scale_s_like(p_.a.row(r).transpose()).transpose();

      Eigen::LLT<Eigen::MatrixXd> llt;
      if (!factor_normal_matrix(a_hat, llt)) {
        best.status = IpmStatus::numerical;
        return best;
      }

      const double mu = jordan_trace_product() / degree_;

      // Predictor: aim the complementarity at zero.
      Eigen::VectorXd q_aff = -v_all_;
      Eigen::VectorXd dy_a, dxh_a, dsh_a;
      solve_kkt(a_hat, llt, rp, rd_hat, q_aff, dy_a, dxh_a, dsh_a);

      const double ap_aff = max_step(dxh_a);
      const double ad_aff = max_step(dsh_a);
      const double mu_aff = predicted_mu(dxh_a, dsh_a, std::min(ap_aff, 1.0),
                                         std::min(ad_aff, 1.0));
      double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

      // Corrector with the second-order Mehrotra term.
      Eigen::VectorXd q_comb = corrector_rhs(sigma * mu, dxh_a, dsh_a);
      Eigen::VectorXd dy, dxh, dsh;
      solve_kkt(a_hat, llt, rp, rd_hat, q_comb, dy, dxh, dsh);

      double alpha_p = std::min(1.0, o_.step_fraction * max_step(dxh));
      double alpha_d = std::min(1.0, o_.step_fraction * max_step(dsh));

      Eigen::VectorXd dx = unscale_dx(dxh);
      Eigen::VectorXd ds = unscale_ds(dsh);

      // Keep the complementarity measure non-increasing.
      for (int guard = 0; guard < 30; ++guard) {
        double new_gap = (x_ + alpha_p * dx).dot(s_ + alpha_d * ds);
        if (new_gap <= gap * (1.0 + 1e-12) || new_gap < o_.tol_gap) break;
        alpha_p *= 0.7;
        alpha_d *= 0.7;
      }
      if (alpha_p < 1e-12 && alpha_d < 1e-12) {
        best.status = IpmStatus::numerical;
        return best;
      }

      x_ += alpha_p * dx;
      y_ += alpha_d * dy;
      s_ += alpha_d * ds;
    }
    best.status = IpmStatus::max_iters;
    return best;
  }

 private:
  void fill_solution(ConicSolution& sol, double pobj, double dobj, double gap,
                     double rel_gap, double rp_rel, double rd_rel, int iter) const {
    sol.x = x_;
    sol.y = y_;
    sol.s = s_;
    sol.primal_obj = pobj;
    sol.dual_obj = dobj;
    sol.gap = gap;
    sol.rel_gap = rel_gap;
    sol.res_primal = rp_rel;
    sol.res_dual = rd_rel;
    sol.iterations = iter;
  }

  void init_point() {
    x_.resize(n_);
    s_.resize(n_);
    y_ = Eigen::VectorXd::Zero(m_);
    const double tau = o_.init_scale;
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      auto xb = x_.segment(offsets_[bi], blk.vec_dim());
      auto sb = s_.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg:
          xb.setConstant(tau);
          sb.setConstant(tau);
          break;
        case ConeKind::soc:
          xb.setZero();
          sb.setZero();
          xb(0) = tau;
          sb(0) = tau;
          break;
        case ConeKind::psd:
          xb = svec::from_matrix(Eigen::MatrixXd::Identity(blk.size, blk.size) * tau);
          sb = xb;
          break;
      }
    }
  }

  bool compute_scalings() {
    scalings_.assign(p_.cones.size(), {});
    v_all_.resize(n_);
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      auto xb = x_.segment(offsets_[bi], blk.vec_dim());
      auto sb = s_.segment(offsets_[bi], blk.vec_dim());
      auto& sc = scalings_[bi];
      switch (blk.kind) {
        case ConeKind::nonneg: {
          if ((xb.array() <= 0.0).any() || (sb.array() <= 0.0).any()) return false;
          sc.d = (xb.array() / sb.array()).sqrt();
          sc.v_lin = (xb.array() * sb.array()).sqrt();
          v_all_.segment(offsets_[bi], blk.vec_dim()) = sc.v_lin;
          break;
        }
        case ConeKind::soc: {
          const double detx = ipm_detail::soc_residual(xb);
          const double dets = ipm_detail::soc_residual(sb);
          if (detx <= 0.0 || dets <= 0.0 || xb(0) <= 0.0 || sb(0) <= 0.0) return false;
          const double gx = std::sqrt(detx), gs = std::sqrt(dets);
          Eigen::VectorXd z = xb / gx, p = sb / gs;
          const double gbar = std::sqrt((1.0 + z.dot(p)) / 2.0);
          Eigen::VectorXd w = z;
          w(0) += p(0);
          w.tail(w.size() - 1) -= p.tail(p.size() - 1);
          w /= 2.0 * gbar;
          // Jordan square root of the unit-determinant scaling point.
          Eigen::VectorXd wh = w;
          wh(0) += 1.0;
          wh /= std::sqrt(2.0 * (w(0) + 1.0));
          sc.wh = wh;
          sc.eta = std::sqrt(gx / gs);
          // scaled point v = G s = eta * P(wh) s
          sc.v_soc = sc.eta * ipm_detail::soc_quad_rep(wh, 1.0, sb);
          v_all_.segment(offsets_[bi], blk.vec_dim()) = sc.v_soc;
          break;
        }
        case ConeKind::psd: {
          const int n = blk.size;
          Eigen::MatrixXd xm = svec::to_matrix(xb, n);
          Eigen::MatrixXd sm = svec::to_matrix(sb, n);
          Eigen::LLT<Eigen::MatrixXd> llt(xm);
          Eigen::MatrixXd l;
          if (llt.info() == Eigen::Success) {
            l = llt.matrixL();
          } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xm);
            if (es.eigenvalues()(0) <= 0.0) return false;
            l = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
          }
          Eigen::MatrixXd mid = l.transpose() * sm * l;
          mid = 0.5 * (mid + mid.transpose());
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mid);
          if (es.eigenvalues()(0) <= 0.0) return false;
          Eigen::VectorXd lam = es.eigenvalues();
          Eigen::VectorXd lam_q = lam.array().pow(0.25);
          // G = L Q diag(lam^{-1/4}),  G^{-1} = diag(lam^{1/4}) Q^T L^{-1}
          sc.factor = l * es.eigenvectors() * lam_q.cwiseInverse().asDiagonal();
          Eigen::MatrixXd linv =
              Eigen::TriangularView<const Eigen::MatrixXd, Eigen::Lower>(l).solve(
                  Eigen::MatrixXd::Identity(n, n));
          sc.factor_inv = lam_q.asDiagonal() * es.eigenvectors().transpose() * linv;
          sc.lam_sqrt = lam.cwiseSqrt();
          Eigen::MatrixXd vm = sc.lam_sqrt.asDiagonal();
          v_all_.segment(offsets_[bi], blk.vec_dim()) = svec::from_matrix(vm);
          break;
        }
      }
    }
    return true;
  }

  // Applies the s-side scaling (s_hat = G^T s); identical map for constraint
  // rows since <a, x> = <G^T a, x_hat>.
  Eigen::VectorXd scale_s_like(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(n_);
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      const auto& sc = scalings_[bi];
      auto ub = u.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg:
          out.segment(offsets_[bi], blk.vec_dim()) = sc.d.cwiseProduct(ub);
          break;
        case ConeKind::soc:
          out.segment(offsets_[bi], blk.vec_dim()) =
              sc.eta * ipm_detail::soc_quad_rep(sc.wh, 1.0, ub);
          break;
        case ConeKind::psd: {
          Eigen::MatrixXd um = svec::to_matrix(ub, blk.size);
          Eigen::MatrixXd scaled = sc.factor.transpose() * um * sc.factor;
          scaled = 0.5 * (scaled + scaled.transpose());
          out.segment(offsets_[bi], blk.vec_dim()) = svec::from_matrix(scaled);
          break;
        }
      }
    }
    return out;
  }

  Eigen::VectorXd unscale_dx(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(n_);
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      const auto& sc = scalings_[bi];
      auto ub = u.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg:
          out.segment(offsets_[bi], blk.vec_dim()) = sc.d.cwiseProduct(ub);
          break;
        case ConeKind::soc:
          out.segment(offsets_[bi], blk.vec_dim()) =
              sc.eta * ipm_detail::soc_quad_rep(sc.wh, 1.0, ub);
          break;
        case ConeKind::psd: {
          Eigen::MatrixXd um = svec::to_matrix(ub, blk.size);
          Eigen::MatrixXd raw = sc.factor * um * sc.factor.transpose();
          raw = 0.5 * (raw + raw.transpose());
          out.segment(offsets_[bi], blk.vec_dim()) = svec::from_matrix(raw);
          break;
        }
      }
    }
    return out;
  }

  Eigen::VectorXd unscale_ds(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(n_);
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      const auto& sc = scalings_[bi];
      auto ub = u.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg:
          out.segment(offsets_[bi], blk.vec_dim()) = ub.cwiseQuotient(sc.d);
          break;
        case ConeKind::soc: {
          // G^{-1} = (1/eta) P(J wh)
          Eigen::VectorXd whj = sc.wh;
          whj.tail(whj.size() - 1) = -whj.tail(whj.size() - 1);
          out.segment(offsets_[bi], blk.vec_dim()) =
              ipm_detail::soc_quad_rep(whj, 1.0, ub) / sc.eta;
          break;
        }
        case ConeKind::psd: {
          Eigen::MatrixXd um = svec::to_matrix(ub, blk.size);
          Eigen::MatrixXd raw = sc.factor_inv.transpose() * um * sc.factor_inv;
          raw = 0.5 * (raw + raw.transpose());
          out.segment(offsets_[bi], blk.vec_dim()) = svec::from_matrix(raw);
          break;
        }
      }
    }
    return out;
  }

  bool factor_normal_matrix(const Eigen::MatrixXd& a_hat, Eigen::LLT<Eigen::MatrixXd>& llt) {
    Eigen::MatrixXd normal = a_hat * a_hat.transpose();
    double reg = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      llt.compute(normal + reg * Eigen::MatrixXd::Identity(m_, m_));
      if (llt.info() == Eigen::Success) return true;
      reg = (reg == 0.0) ? 1e-12 * (1.0 + normal.trace() / m_) : reg * 100.0;
    }
    return false;
  }

  void solve_kkt(const Eigen::MatrixXd& a_hat, const Eigen::LLT<Eigen::MatrixXd>& llt,
                 const Eigen::VectorXd& rp, const Eigen::VectorXd& rd_hat,
                 const Eigen::VectorXd& q, Eigen::VectorXd& dy, Eigen::VectorXd& dxh,
                 Eigen::VectorXd& dsh) const {
    dy = llt.solve(rp - a_hat * (q - rd_hat));
    dsh = rd_hat - a_hat.transpose() * dy;
    dxh = q - dsh;
  }

  double max_step(const Eigen::VectorXd& du) const {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      const auto& sc = scalings_[bi];
      auto ub = du.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg:
          for (int i = 0; i < blk.size; ++i)
            if (ub(i) < 0.0) alpha = std::min(alpha, -sc.v_lin(i) / ub(i));
          break;
        case ConeKind::soc:
          alpha = std::min(alpha, ipm_detail::soc_max_step(sc.v_soc, ub));
          break;
        case ConeKind::psd:
          alpha = std::min(alpha,
                           ipm_detail::psd_max_step(sc.lam_sqrt, svec::to_matrix(ub, blk.size)));
          break;
      }
    }
    return alpha;
  }

  double jordan_trace_product() const { return x_.dot(s_); }

  double predicted_mu(const Eigen::VectorXd& dxh, const Eigen::VectorXd& dsh, double ap,
                      double ad) const {
    const Eigen::VectorXd xn = v_all_ + ap * dxh;
    const Eigen::VectorXd sn = v_all_ + ad * dsh;
    return xn.dot(sn) / degree_;
  }

  Eigen::VectorXd corrector_rhs(double target, const Eigen::VectorXd& dxh_a,
                                const Eigen::VectorXd& dsh_a) const {
    Eigen::VectorXd q(n_);
    for (std::size_t bi = 0; bi < p_.cones.size(); ++bi) {
      const auto& blk = p_.cones[bi];
      const auto& sc = scalings_[bi];
      auto dxb = dxh_a.segment(offsets_[bi], blk.vec_dim());
      auto dsb = dsh_a.segment(offsets_[bi], blk.vec_dim());
      switch (blk.kind) {
        case ConeKind::nonneg: {
          auto qb = q.segment(offsets_[bi], blk.vec_dim());
          for (int i = 0; i < blk.size; ++i) {
            double rhs = target - sc.v_lin(i) * sc.v_lin(i) - dxb(i) * dsb(i);
            qb(i) = rhs / sc.v_lin(i);
          }
          break;
        }
        case ConeKind::soc: {
          Eigen::VectorXd rhs = -ipm_detail::soc_jordan_product(sc.v_soc, sc.v_soc) -
                                ipm_detail::soc_jordan_product(dxb, dsb);
          rhs(0) += target;  // target * e with e = (1, 0, ...)
          q.segment(offsets_[bi], blk.vec_dim()) = ipm_detail::soc_arrow_solve(sc.v_soc, rhs);
          break;
        }
        case ConeKind::psd: {
          const int n = blk.size;
          Eigen::MatrixXd dxm = svec::to_matrix(dxb, n);
          Eigen::MatrixXd dsm = svec::to_matrix(dsb, n);
          Eigen::MatrixXd cross = 0.5 * (dxm * dsm + dsm * dxm);
          Eigen::MatrixXd qm(n, n);
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              double rhs = -cross(i, j);
              if (i == j) rhs += target - sc.lam_sqrt(i) * sc.lam_sqrt(i);
              qm(i, j) = 2.0 * rhs / (sc.lam_sqrt(i) + sc.lam_sqrt(j));
            }
          }
          q.segment(offsets_[bi], blk.vec_dim()) = svec::from_matrix(qm);
          break;
        }
      }
    }
    return q;
  }

  const ConicProblem& p_;
  IpmOptions o_;
  int m_, n_;
  std::vector<int> offsets_;
  double degree_ = 0.0;
  Eigen::VectorXd x_, y_, s_, v_all_;
  std::vector<ipm_detail::BlockScaling> scalings_;
};

inline ConicSolution solve_conic(const ConicProblem& prob, const IpmOptions& opts = {}) {
  return ConicSolver(prob, opts).solve();
}

}  // namespace rismm
