#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rismm/channel.hpp"
#include "rismm/phases.hpp"

namespace rismm {

struct ZfInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// M x K transmit beamforming matrix; row m is AP m's weight vector across
/// users, column k is user k's beamformer across APs.
struct BeamMatrix {
  Eigen::MatrixXcd w;

  BeamMatrix() = default;
  explicit BeamMatrix(Eigen::MatrixXcd m) : w(std::move(m)) {}

  int num_aps() const { return static_cast<int>(w.rows()); }
  int num_users() const { return static_cast<int>(w.cols()); }

  double ap_power(int m) const { return w.row(m).squaredNorm(); }
  double max_ap_power() const {
    double p = 0.0;
    for (int m = 0; m < num_aps(); ++m) p = std::max(p, ap_power(m));
    return p;
  }
  bool satisfies_power(double power, double slack = 1e-9) const {
    return max_ap_power() <= power + slack;
  }
  /// Scales down just enough to restore the per-AP budget after roundoff.
  void clamp_power(double power) {
    double p = max_ap_power();
    if (p > power && p > 0.0) w *= std::sqrt(power / p);
  }
};

/// Cascaded AP->surface->user channel row for surface l and user k at the
/// given phases. Equals reflect_link * diag(reflection) * ap_to_ris.
inline Eigen::RowVectorXcd composite_channel(const ChannelRealization& ch,
                                             const PhaseVector& phases, int l, int k) {
  if (l < 0 || l >= ch.num_ris || k < 0 || k >= ch.num_users)
    throw std::out_of_range("composite_channel: index out of range");
  if (phases.size() != ch.total_elements())
    throw std::invalid_argument("composite_channel: phase count mismatch");
  const int n = ch.elements_per_ris;
  const Eigen::RowVectorXcd& ru = ch.reflect_link(l, k);
  Eigen::RowVectorXcd scaled(n);
  for (int i = 0; i < n; ++i)
    scaled(i) = ru(i) * std::polar(1.0, phases.angle(l * n + i));
  return scaled * ch.ap_to_ris[l];
}

/// Combined channel rows: user k's row is the direct link plus every
/// surface's cascaded contribution.
inline Eigen::MatrixXcd effective_channel(const ChannelRealization& ch,
                                          const PhaseVector& phases) {
  Eigen::MatrixXcd g = ch.ap_to_user;
  for (int k = 0; k < ch.num_users; ++k)
    for (int l = 0; l < ch.num_ris; ++l) g.row(k) += composite_channel(ch, phases, l, k);
  return g;
}

struct SinrRate {
  Eigen::VectorXd sinr;
  Eigen::VectorXd rate;
  double min_rate = 0.0;
  double min_sinr = 0.0;
};

/// Per-user SINR and achievable rate for unit noise variance.
inline SinrRate sinr_rate(const Eigen::MatrixXcd& effective, const BeamMatrix& w) {
  const int k_users = static_cast<int>(effective.rows());
  if (effective.cols() != w.w.rows() || w.num_users() != k_users)
    throw std::invalid_argument("sinr_rate: dimension mismatch");
  SinrRate out;
  out.sinr.resize(k_users);
  out.rate.resize(k_users);
  Eigen::MatrixXcd rx = effective * w.w;  // rx(k, j) = g_k^H w_j
  for (int k = 0; k < k_users; ++k) {
    double signal = std::norm(rx(k, k));
    double interference = 0.0;
    for (int j = 0; j < k_users; ++j)
      if (j != k) interference += std::norm(rx(k, j));
    out.sinr(k) = signal / (interference + 1.0);
    out.rate(k) = std::log2(1.0 + out.sinr(k));
  }
  out.min_sinr = out.sinr.minCoeff();
  out.min_rate = out.rate.minCoeff();
  return out;
}

/// Maximum-ratio transmission for a single user: each AP spends its full
/// budget co-phased with its channel entry; dead entries transmit nothing.
inline Eigen::VectorXcd mrt_beamformer(const Eigen::RowVectorXcd& effective, double power) {
  Eigen::VectorXcd w(effective.size());
  const double amp = std::sqrt(power);
  for (Eigen::Index m = 0; m < effective.size(); ++m) {
    double mag = std::abs(effective(m));
    w(m) = mag > 0.0 ? amp * std::conj(effective(m)) / mag : std::complex<double>(0.0, 0.0);
  }
  return w;
}

struct ZfResult {
  BeamMatrix w;
  double alpha = 0.0;
  Eigen::MatrixXcd pseudo;  // unscaled right pseudo-inverse transpose, M x K
  double max_row_norm2 = 0.0;
};

/// Zero-forcing beamformer W = sqrt(alpha) * G (G^H G)^{-1} with alpha set so
/// the worst AP meets the power budget exactly. Computed through a thin QR
/// factorization instead of the explicit Gram inverse.
inline ZfResult zf_beamformer(const Eigen::MatrixXcd& effective, double power) {
  const int m_aps = static_cast<int>(effective.cols());
  const int k_users = static_cast<int>(effective.rows());
  if (m_aps < k_users) throw ZfInfeasible("ZF infeasible: fewer APs than users");

  // effective rows are g_k^H; the stacked channel matrix has columns g_k.
  Eigen::MatrixXcd g = effective.adjoint();  // M x K
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m_aps, k_users);
  Eigen::MatrixXcd r = qr.matrixQR().topRows(k_users).triangularView<Eigen::Upper>();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  const double smin = svd.singularValues()(k_users - 1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin >= 1e8)
    throw ZfInfeasible("ZF infeasible: rank-deficient combined channel");

  // H = G (G^H G)^{-1} = Q R^{-H}
  Eigen::MatrixXcd rinv_h = r.adjoint()
                                .triangularView<Eigen::Lower>()
                                .solve(Eigen::MatrixXcd::Identity(k_users, k_users));
  ZfResult out;
  out.pseudo = q * rinv_h;
  out.max_row_norm2 = 0.0;
  for (int m = 0; m < m_aps; ++m)
    out.max_row_norm2 = std::max(out.max_row_norm2, out.pseudo.row(m).squaredNorm());
  out.alpha = power / out.max_row_norm2;
  out.w = BeamMatrix(std::sqrt(out.alpha) * out.pseudo);
  return out;
}

/// Matrices feeding the relaxation solvers. Channel-side blocks are always
/// filled; the beam-dependent blocks exist only when a beamformer was given.
struct SdrAssembly {
  int num_users = 0;
  int total_elements = 0;

  /// cascade[l*K + k] = diag(reflect_link) * ap_to_ris, one N x M block each.
  std::vector<Eigen::MatrixXcd> cascade;
  /// cascade_stack[k]: the L blocks of user k stacked into an I x M matrix.
  std::vector<Eigen::MatrixXcd> cascade_stack;

  // Single-user blocks (populated when K == 1).
  Eigen::MatrixXcd quad;     // I x I Gram matrix of the stack
  Eigen::VectorXcd linear;   // I, stack * direct^H
  Eigen::MatrixXcd lifted;   // (I+1) x (I+1) homogenized objective

  // Beam-dependent blocks.
  bool has_beam_terms = false;
  std::vector<Eigen::VectorXcd> pair_vec;     // [k*K+j] = stack_k * w_j
  Eigen::MatrixXcd pair_scalar;               // (k, j) = direct_k * w_j
  std::vector<Eigen::MatrixXcd> lifted_pair;  // [k*K+j], (I+1)^2 homogenized

  const Eigen::MatrixXcd& lifted_kj(int k, int j) const {
    return lifted_pair[static_cast<std::size_t>(k) * num_users + j];
  }
  const Eigen::VectorXcd& vec_kj(int k, int j) const {
    return pair_vec[static_cast<std::size_t>(k) * num_users + j];
  }
};

namespace detail {

inline Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& a) {
  return 0.5 * (a + a.adjoint());
}

inline Eigen::MatrixXcd lift_quadratic(const Eigen::MatrixXcd& quad,
                                       const Eigen::VectorXcd& linear) {
  const Eigen::Index n = quad.rows();
  Eigen::MatrixXcd out(n + 1, n + 1);
  out.topLeftCorner(n, n) = quad;
  out.topRightCorner(n, 1) = linear;
  out.bottomLeftCorner(1, n) = linear.adjoint();
  out(n, n) = 0.0;
  return hermitize(out);
}

}  // namespace detail

inline SdrAssembly assemble_sdr(const ChannelRealization& ch) {
  SdrAssembly a;
  a.num_users = ch.num_users;
  a.total_elements = ch.total_elements();
  const int n = ch.elements_per_ris;

  a.cascade.resize(static_cast<std::size_t>(ch.num_ris) * ch.num_users);
  for (int l = 0; l < ch.num_ris; ++l)
    for (int k = 0; k < ch.num_users; ++k)
      a.cascade[static_cast<std::size_t>(l) * ch.num_users + k] =
          ch.reflect_link(l, k).asDiagonal() * ch.ap_to_ris[l];

  a.cascade_stack.resize(ch.num_users);
  for (int k = 0; k < ch.num_users; ++k) {
    Eigen::MatrixXcd stack(a.total_elements, ch.num_aps);
    for (int l = 0; l < ch.num_ris; ++l)
      stack.middleRows(l * n, n) = a.cascade[static_cast<std::size_t>(l) * ch.num_users + k];
    a.cascade_stack[k] = std::move(stack);
  }

  if (ch.num_users == 1) {
    a.quad = detail::hermitize(a.cascade_stack[0] * a.cascade_stack[0].adjoint());
    a.linear = a.cascade_stack[0] * ch.ap_to_user.row(0).adjoint();
    a.lifted = detail::lift_quadratic(a.quad, a.linear);
  }
  return a;
}

inline SdrAssembly assemble_sdr(const ChannelRealization& ch, const BeamMatrix& w) {
  SdrAssembly a = assemble_sdr(ch);
  const int k_users = ch.num_users;
  if (w.w.rows() != ch.num_aps || w.num_users() != k_users)
    throw std::invalid_argument("assemble_sdr: beam matrix dimension mismatch");

  a.has_beam_terms = true;
  a.pair_vec.resize(static_cast<std::size_t>(k_users) * k_users);
  a.lifted_pair.resize(static_cast<std::size_t>(k_users) * k_users);
  a.pair_scalar.resize(k_users, k_users);
  for (int k = 0; k < k_users; ++k) {
    for (int j = 0; j < k_users; ++j) {
      Eigen::VectorXcd u = a.cascade_stack[k] * w.w.col(j);
      std::complex<double> ubar = ch.ap_to_user.row(k) * w.w.col(j);
      a.pair_scalar(k, j) = ubar;
      a.lifted_pair[static_cast<std::size_t>(k) * k_users + j] =
          detail::lift_quadratic(detail::hermitize(u * u.adjoint()), u * std::conj(ubar));
      a.pair_vec[static_cast<std::size_t>(k) * k_users + j] = std::move(u);
    }
  }
  return a;
}

}  // namespace rismm
