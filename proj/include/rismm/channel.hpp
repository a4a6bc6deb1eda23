#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rismm/geometry.hpp"
#include "rismm/rng.hpp"
#include "rismm/scenario.hpp"

namespace rismm {

/// Distance-dependent linear power gain: c0 * (d1/d0)^(-alpha).
inline double path_loss(double d1_m, double alpha, double c0_db, double d0_m) {
  if (!(d1_m > 0.0) || !(d0_m > 0.0))
    throw std::domain_error("path_loss: distances must be positive");
  return db_to_linear(c0_db) * std::pow(d1_m / d0_m, -alpha);
}

/// One Rician draw: sqrt(beta*kappa/(1+kappa)) * los + sqrt(beta/(1+kappa)) * h
/// with h i.i.d. CN(0,1). Consumes exactly los.size() complex normals.
inline Eigen::VectorXcd rician_sample(double beta, double kappa,
                                      const Eigen::VectorXcd& los, Rng& rng) {
  if (beta < 0.0 || kappa < 0.0)
    throw std::domain_error("rician_sample: beta and kappa must be nonnegative");
  const double los_gain = std::sqrt(beta * kappa / (1.0 + kappa));
  const double nlos_gain = std::sqrt(beta / (1.0 + kappa));
  Eigen::VectorXcd out(los.size());
  for (Eigen::Index i = 0; i < los.size(); ++i)
    out(i) = los_gain * los(i) + nlos_gain * rng.cnormal();
  return out;
}

/// One draw of every channel in the scenario plus the geometry that produced
/// it. Regenerating with the same config and seed reproduces the realization
/// bit for bit.
struct ChannelRealization {
  int num_aps = 0, num_users = 0, num_ris = 0, elements_per_ris = 0;
  double power = 0.0;  // normalized SNR carried along for the optimizers

  /// ap_to_ris[l]: N x M, column m is the channel from AP m to surface l.
  std::vector<Eigen::MatrixXcd> ap_to_ris;
  /// ris_to_user[l*K + k]: 1 x N row, the conjugated reflect-link channel.
  std::vector<Eigen::RowVectorXcd> ris_to_user;
  /// ap_to_user: K x M, row k holds the direct links of user k.
  Eigen::MatrixXcd ap_to_user;
  /// blockage(m, k) is 0 when the direct AP m -> user k link is blocked.
  Eigen::MatrixXi blockage;

  std::vector<Eigen::Vector3d> ap_positions, user_positions, ris_positions;
  std::uint64_t seed = 0;

  int total_elements() const { return num_ris * elements_per_ris; }

  const Eigen::RowVectorXcd& reflect_link(int l, int k) const {
    return ris_to_user[static_cast<std::size_t>(l) * num_users + k];
  }
};

namespace detail {

inline std::complex<double> distance_phase(double dist_m, double wavelength_m) {
  return std::polar(1.0, -2.0 * M_PI * dist_m / wavelength_m);
}

}  // namespace detail

inline ChannelRealization generate_realization(const ScenarioConfig& cfg,
                                               std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);

  ChannelRealization out;
  out.num_aps = cfg.num_aps;
  out.num_users = cfg.num_users;
  out.num_ris = cfg.num_ris;
  out.elements_per_ris = cfg.elements_per_ris;
  out.power = cfg.snr();
  out.seed = seed;

  // Placement. Draw order is fixed: APs first, then users, so that pinning
  // one group does not shift the other group's draws relative positions.
  out.ap_positions = cfg.ap_positions;
  if (out.ap_positions.empty()) {
    out.ap_positions.reserve(cfg.num_aps);
    for (int m = 0; m < cfg.num_aps; ++m) {
      double x = rng.uniform(cfg.area_x_min, cfg.area_x_max);
      double y = rng.uniform(cfg.area_y_min, cfg.area_y_max);
      out.ap_positions.emplace_back(x, y, cfg.ap_height);
    }
  }
  out.user_positions = cfg.user_positions;
  if (out.user_positions.empty()) {
    out.user_positions.reserve(cfg.num_users);
    for (int k = 0; k < cfg.num_users; ++k) {
      double x = rng.uniform(cfg.area_x_min, cfg.area_x_max);
      double y = rng.uniform(cfg.area_y_min, cfg.area_y_max);
      out.user_positions.emplace_back(x, y, cfg.user_height);
    }
  }
  out.ris_positions = cfg.ris_positions;
  if (out.ris_positions.empty()) out.ris_positions = cfg.default_ris_positions();

  const UraGeometry geom = cfg.ris_rows > 0
                               ? UraGeometry{cfg.ris_rows, cfg.elements_per_ris / cfg.ris_rows,
                                             cfg.wavelength_m / 2.0}
                               : square_ura(cfg.elements_per_ris, cfg.wavelength_m / 2.0);

  const double kappa_ar = cfg.kappa_ap_ris();
  const double kappa_ru = cfg.kappa_ris_user();

  // Incident links: AP m -> surface l.
  out.ap_to_ris.resize(cfg.num_ris);
  for (int l = 0; l < cfg.num_ris; ++l) {
    Eigen::MatrixXcd g(cfg.elements_per_ris, cfg.num_aps);
    for (int m = 0; m < cfg.num_aps; ++m) {
      const double d = (out.ap_positions[m] - out.ris_positions[l]).norm();
      const double beta = path_loss(d, cfg.alpha_ap_ris, cfg.c0_db, cfg.d0_m);
      Eigen::VectorXcd los = los_response(out.ris_positions[l], out.ap_positions[m], geom,
                                          cfg.wavelength_m) *
                             detail::distance_phase(d, cfg.wavelength_m);
      g.col(m) = rician_sample(beta, kappa_ar, los, rng);
    }
    out.ap_to_ris[l] = std::move(g);
  }

  // Reflect links: surface l -> user k.
  out.ris_to_user.resize(static_cast<std::size_t>(cfg.num_ris) * cfg.num_users);
  for (int l = 0; l < cfg.num_ris; ++l) {
    for (int k = 0; k < cfg.num_users; ++k) {
      const double d = (out.user_positions[k] - out.ris_positions[l]).norm();
      const double beta = path_loss(d, cfg.alpha_ris_user, cfg.c0_db, cfg.d0_m);
      Eigen::VectorXcd los = los_response(out.ris_positions[l], out.user_positions[k], geom,
                                          cfg.wavelength_m) *
                             detail::distance_phase(d, cfg.wavelength_m);
      out.ris_to_user[static_cast<std::size_t>(l) * cfg.num_users + k] =
          rician_sample(beta, kappa_ru, los, rng).transpose();
    }
  }

  // Direct links with per-pair blockage. Fading is always drawn before the
  // blockage coin so the stream position does not depend on the outcome.
  out.ap_to_user.resize(cfg.num_users, cfg.num_aps);
  out.blockage.resize(cfg.num_aps, cfg.num_users);
  Eigen::VectorXcd los1(1);
  for (int k = 0; k < cfg.num_users; ++k) {
    for (int m = 0; m < cfg.num_aps; ++m) {
      const double d = (out.user_positions[k] - out.ap_positions[m]).norm();
      const double beta = path_loss(d, cfg.alpha_ap_user, cfg.c0_db, cfg.d0_m);
      los1(0) = detail::distance_phase(d, cfg.wavelength_m);
      const std::complex<double> fade = rician_sample(beta, cfg.kappa_ap_user, los1, rng)(0);
      const int open = rng.uniform() < cfg.p_block ? 0 : 1;
      out.blockage(m, k) = open;
      out.ap_to_user(k, m) = open ? fade : std::complex<double>(0.0, 0.0);
    }
  }

  return out;
}

}  // namespace rismm
