#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "rismm/channel.hpp"
#include "rismm/geometry.hpp"
#include "rismm/rng.hpp"
#include "rismm/scenario.hpp"

using namespace rismm;

TEST_CASE("path loss closed forms") {
  REQUIRE(path_loss(1.0, 3.5, -30.0, 1.0) == Catch::Approx(1e-3).epsilon(1e-12));
  REQUIRE(path_loss(7.3, 0.0, -30.0, 1.0) == Catch::Approx(1e-3).epsilon(1e-12));
  REQUIRE(path_loss(10.0, 2.0, -30.0, 1.0) == Catch::Approx(1e-5).epsilon(1e-12));
  REQUIRE_THROWS_AS(path_loss(0.0, 2.0, -30.0, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(path_loss(-1.0, 2.0, -30.0, 1.0), std::domain_error);
}

TEST_CASE("array response basics") {
  // single element
  auto single = los_response({0, 0, 0}, {10, 5, 2}, UraGeometry{1, 1, 0.05}, 0.1);
  REQUIRE(single.size() == 1);
  REQUIRE(std::abs(single(0) - std::complex<double>(1.0, 0.0)) < 1e-12);

  // broadside: direction along the array normal (local y axis)
  UraGeometry geom{2, 3, 0.05};
  auto broadside = los_response({0, 0, 0}, {0, 42.0, 0}, geom, 0.1);
  for (int i = 0; i < broadside.size(); ++i)
    REQUIRE(std::abs(broadside(i) - std::complex<double>(1.0, 0.0)) < 1e-12);

  REQUIRE_THROWS_AS(los_response({1, 2, 3}, {1, 2, 3}, geom, 0.1), std::domain_error);
}

TEST_CASE("array response matches a per-element geometric oracle") {
  UraGeometry geom{3, 4, 0.05};
  const double lambda = 0.1;
  Eigen::Vector3d array_pos(12.0, -3.0, 10.0);
  Eigen::Vector3d far_pos(47.0, 20.0, 1.65);
  auto resp = los_response(array_pos, far_pos, geom, lambda);

  Eigen::Vector3d dir = (far_pos - array_pos).normalized();
  for (int r = 0; r < geom.rows; ++r) {
    for (int c = 0; c < geom.cols; ++c) {
      Eigen::Vector3d offset(c * geom.spacing_m, 0.0, r * geom.spacing_m);
      double phase = 2.0 * M_PI * offset.dot(dir) / lambda;
      auto expected = std::polar(1.0, phase);
      REQUIRE(std::abs(resp(r * geom.cols + c) - expected) < 1e-12);
      REQUIRE(std::abs(std::abs(resp(r * geom.cols + c)) - 1.0) < 1e-15);
    }
  }
}

TEST_CASE("rician limit cases") {
  Rng rng(1234);
  const int n = 8;
  Eigen::VectorXcd los(n);
  for (int i = 0; i < n; ++i) los(i) = std::polar(1.0, 0.7 * i);

  SECTION("huge factor collapses onto the deterministic component") {
    const double beta = 2.5;
    auto sample = rician_sample(beta, 1e12, los, rng);
    Eigen::VectorXcd expected = std::sqrt(beta) * los;
    REQUIRE((sample - expected).norm() / expected.norm() < 1e-5);
  }

  SECTION("zero factor reproduces the scattered power") {
    const double beta = 0.37;
    const int draws = 100000 / n;
    double acc = 0.0;
    for (int d = 0; d < draws; ++d) acc += rician_sample(beta, 0.0, los, rng).squaredNorm();
    double mean_power = acc / (draws * n);
    REQUIRE(mean_power == Catch::Approx(beta).epsilon(0.02));
  }

  SECTION("ten dB factor splits power as 10:1") {
    const double kappa = db_to_linear(10.0);
    const double beta = 1.0;
    const int draws = 20000 / n;
    double scattered = 0.0;
    for (int d = 0; d < draws; ++d) {
      auto s = rician_sample(beta, kappa, los, rng);
      scattered += (s - std::sqrt(beta * kappa / (1.0 + kappa)) * los).squaredNorm();
    }
    REQUIRE(scattered / (draws * n) == Catch::Approx(beta / (1.0 + kappa)).epsilon(0.05));
  }

  REQUIRE_THROWS_AS(rician_sample(-1.0, 1.0, los, rng), std::domain_error);
  REQUIRE_THROWS_AS(rician_sample(1.0, -1.0, los, rng), std::domain_error);
}

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig cfg;
  cfg.num_aps = 4;
  cfg.num_users = 2;
  cfg.num_ris = 2;
  cfg.elements_per_ris = 3;
  return cfg;
}

bool identical(const ChannelRealization& a, const ChannelRealization& b) {
  if (a.ap_to_user != b.ap_to_user) return false;
  if (a.blockage != b.blockage) return false;
  for (int l = 0; l < a.num_ris; ++l)
    if (a.ap_to_ris[l] != b.ap_to_ris[l]) return false;
  for (std::size_t i = 0; i < a.ris_to_user.size(); ++i)
    if (a.ris_to_user[i] != b.ris_to_user[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("realizations are a pure function of config and seed") {
  auto cfg = small_scenario();
  auto a = generate_realization(cfg, 99);
  auto b = generate_realization(cfg, 99);
  REQUIRE(identical(a, b));
  auto c = generate_realization(cfg, 100);
  REQUIRE_FALSE(identical(a, c));
}

TEST_CASE("full blockage zeroes every direct link") {
  auto cfg = small_scenario();
  cfg.p_block = 1.0;
  auto ch = generate_realization(cfg, 7);
  REQUIRE(ch.ap_to_user.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(ch.blockage.sum() == 0);
}

TEST_CASE("blockage frequency matches the configured probability") {
  auto cfg = small_scenario();
  cfg.p_block = 0.2;
  long blocked = 0, total = 0;
  for (int t = 0; t < 10000; ++t) {
    auto ch = generate_realization(cfg, 5000 + t);
    total += ch.blockage.size();
    blocked += ch.blockage.size() - ch.blockage.sum();
  }
  double frac = static_cast<double>(blocked) / total;
  REQUIRE(frac == Catch::Approx(0.2).margin(0.01));
}

TEST_CASE("reference gain scales every link's mean square magnitude") {
  auto cfg = small_scenario();
  cfg.p_block = 0.0;
  const double gamma_db = 7.0;
  auto cfg2 = cfg;
  cfg2.c0_db += gamma_db;
  const double gamma = db_to_linear(gamma_db);

  double e1 = 0.0, e2 = 0.0;
  const int draws = 1500;
  for (int t = 0; t < draws; ++t) {
    auto a = generate_realization(cfg, 100 + t);
    auto b = generate_realization(cfg2, 100 + t);
    e1 += a.ap_to_ris[0].squaredNorm() + a.ap_to_user.squaredNorm();
    e2 += b.ap_to_ris[0].squaredNorm() + b.ap_to_user.squaredNorm();
  }
  REQUIRE(e2 / e1 == Catch::Approx(gamma).epsilon(0.05));
}

TEST_CASE("blockage is independent of the fading magnitude") {
  // 2x2 contingency table of (blocked?, latent |direct fade| above median?)
  // over many realizations; the chi-squared statistic with one degree of
  // freedom must stay below the p = 0.01 critical value 6.635.
  ScenarioConfig cfg;
  cfg.num_aps = 1;
  cfg.num_users = 1;
  cfg.num_ris = 0;
  cfg.elements_per_ris = 1;
  cfg.p_block = 0.3;
  cfg.user_positions = {{60.0, 10.0, 1.65}};
  cfg.ap_positions = {{30.0, -20.0, 5.0}};

  const int draws = 4000;
  std::vector<double> mags(draws);
  std::vector<int> blocked(draws);
  auto cfg_open = cfg;
  cfg_open.p_block = 0.0;
  for (int t = 0; t < draws; ++t) {
    auto ch = generate_realization(cfg, 777 + t);
    blocked[t] = 1 - ch.blockage(0, 0);
    // Same seed without masking exposes the latent fade behind the coin.
    auto open = generate_realization(cfg_open, 777 + t);
    mags[t] = std::abs(open.ap_to_user(0, 0));
  }
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + draws / 2, sorted.end());
  const double median = sorted[draws / 2];

  double n[2][2] = {{0, 0}, {0, 0}};
  for (int t = 0; t < draws; ++t) n[blocked[t]][mags[t] > median ? 1 : 0] += 1.0;
  double chi2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double row = n[i][0] + n[i][1];
      double col = n[0][j] + n[1][j];
      double expect = row * col / draws;
      chi2 += (n[i][j] - expect) * (n[i][j] - expect) / expect;
    }
  }
  REQUIRE(chi2 < 6.635);
}

TEST_CASE("scenario validation rejects bad configs") {
  ScenarioConfig cfg;
  cfg.num_aps = 0;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.p_block = 1.5;
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ScenarioConfig{};
  cfg.ap_positions = {{0, 0, 5}};  // wrong count
  REQUIRE_THROWS_AS(cfg.validate(), std::invalid_argument);
}
