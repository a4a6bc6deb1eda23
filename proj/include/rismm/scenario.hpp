#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rismm {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Scenario description: counts, geometry and fading parameters for one
/// distributed-AP deployment with reflecting surfaces.
///
/// Positions left empty are drawn uniformly over the service area per
/// realization (APs and users) or filled with the default wall-mounted layout
/// (surfaces). The noise variance is normalized to one, so `snr()` is the
/// per-AP transmit power in the normalized model.
struct ScenarioConfig {
  int num_aps = 8;           // M
  int num_users = 3;         // K
  int num_ris = 4;           // L
  int elements_per_ris = 12; // N
  int ris_rows = 0;          // 0 -> near-square factorization of N

  double c0_db = -30.0;  // path gain at the reference distance
  double d0_m = 1.0;

  double alpha_ap_ris = 1.0;
  double alpha_ris_user = 1.5;
  double alpha_ap_user = 3.5;

  double kappa_ap_ris_db = 10.0;
  double kappa_ris_user_db = 5.0;
  double kappa_ap_user = 0.0;  // linear; 0 means pure Rayleigh direct links

  double p_block = 0.2;  // probability an AP-user link is blocked

  double p_dbm = 0.0;
  double n0_dbm = -80.0;

  double wavelength_m = 0.1;

  double area_x_min = 0.0, area_x_max = 120.0;
  double area_y_min = -60.0, area_y_max = 60.0;
  double ap_height = 5.0;
  double user_height = 1.65;
  double ris_height = 10.0;

  // Empty -> randomized (APs, users) or default layout (surfaces).
  std::vector<Eigen::Vector3d> ap_positions;
  std::vector<Eigen::Vector3d> user_positions;
  std::vector<Eigen::Vector3d> ris_positions;

  int total_elements() const { return num_ris * elements_per_ris; }

  /// Normalized SNR: transmit power over noise power.
  double snr() const { return db_to_linear(p_dbm - n0_dbm); }

  double kappa_ap_ris() const { return db_to_linear(kappa_ap_ris_db); }
  double kappa_ris_user() const { return db_to_linear(kappa_ris_user_db); }

  /// Default surface placement: panels on the y = +/-3 walls at x = 40, 80.
  std::vector<Eigen::Vector3d> default_ris_positions() const {
    static const double base[4][2] = {{40, 3}, {80, 3}, {40, -3}, {80, -3}};
    std::vector<Eigen::Vector3d> out;
    out.reserve(num_ris);
    for (int l = 0; l < num_ris; ++l) {
      if (l < 4) {
        out.emplace_back(base[l][0], base[l][1], ris_height);
      } else {
        // Extra panels fan out along the same two walls.
        double x = 20.0 + 80.0 * ((l / 2) % 5) / 4.0;
        double y = (l % 2 == 0) ? 3.0 : -3.0;
        out.emplace_back(x, y, ris_height);
      }
    }
    return out;
  }

  void validate() const {
    if (num_aps < 1 || num_users < 1 || num_ris < 0 || elements_per_ris < 1)
      throw std::invalid_argument("scenario: counts must be positive");
    if (p_block < 0.0 || p_block > 1.0)
      throw std::invalid_argument("scenario: blockage probability outside [0,1]");
    if (!(snr() > 0.0) || !std::isfinite(snr()))
      throw std::invalid_argument("scenario: normalized SNR must be finite and positive");
    if (!(d0_m > 0.0)) throw std::invalid_argument("scenario: reference distance must be positive");
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("scenario: wavelength must be positive");
    if (!ap_positions.empty() && static_cast<int>(ap_positions.size()) != num_aps)
      throw std::invalid_argument("scenario: pinned AP position count mismatch");
    if (!user_positions.empty() && static_cast<int>(user_positions.size()) != num_users)
      throw std::invalid_argument("scenario: pinned user position count mismatch");
    if (!ris_positions.empty() && static_cast<int>(ris_positions.size()) != num_ris)
      throw std::invalid_argument("scenario: pinned surface position count mismatch");
    if (ris_rows > 0 && elements_per_ris % ris_rows != 0)
      throw std::invalid_argument("scenario: ris_rows must divide elements_per_ris");
  }
};

}  // namespace rismm
