#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "rismm/conic/ipm.hpp"
#include "rismm/rng.hpp"

using namespace rismm;

namespace {

Eigen::VectorXd random_vec(Rng& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = scale * (2.0 * rng.uniform() - 1.0);
  return v;
}

}  // namespace

TEST_CASE("soc scaling point maps s to x") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    int d = 2 + rng.uniform_int(6);
    Eigen::VectorXd x = random_vec(rng, d), s = random_vec(rng, d);
    x(0) = x.tail(d - 1).norm() + 0.1 + rng.uniform();
    s(0) = s.tail(d - 1).norm() + 0.1 + rng.uniform();

    const double gx = std::sqrt(ipm_detail::soc_residual(x));
    const double gs = std::sqrt(ipm_detail::soc_residual(s));
    Eigen::VectorXd z = x / gx, p = s / gs;
    const double gbar = std::sqrt((1.0 + z.dot(p)) / 2.0);
    Eigen::VectorXd w = z;
    w(0) += p(0);
    w.tail(d - 1) -= p.tail(d - 1);
    w /= 2.0 * gbar;
    REQUIRE(ipm_detail::soc_residual(w) == Catch::Approx(1.0).margin(1e-10));

    // P(w_nt) s = x with w_nt = sqrt(gx/gs) w
    Eigen::VectorXd mapped = (gx / gs) * ipm_detail::soc_quad_rep(w, 1.0, s);
    REQUIRE((mapped - x).norm() < 1e-10 * x.norm());

    // Jordan square root composes back to the scaling
    Eigen::VectorXd wh = w;
    wh(0) += 1.0;
    wh /= std::sqrt(2.0 * (w(0) + 1.0));
    Eigen::VectorXd twice = ipm_detail::soc_quad_rep(wh, 1.0, ipm_detail::soc_quad_rep(wh, 1.0, s));
    REQUIRE((ipm_detail::soc_quad_rep(w, 1.0, s) - twice).norm() < 1e-9 * s.norm());
  }
}

TEST_CASE("lp block agrees with a known linear program") {
  // min -x1 - 2 x2  s.t.  x1 + x2 + u1 = 4, x2 + u2 = 3, x >= 0
  // optimum at x = (1, 3), objective -7.
  ConicProblem prob;
  prob.a.resize(2, 4);
  prob.a << 1, 1, 1, 0,
            0, 1, 0, 1;
  prob.b.resize(2);
  prob.b << 4, 3;
  prob.c.resize(4);
  prob.c << -1, -2, 0, 0;
  prob.cones = {{ConeKind::nonneg, 4}};

  auto sol = solve_conic(prob);
  REQUIRE(sol.status == IpmStatus::optimal);
  REQUIRE(sol.primal_obj == Catch::Approx(-7.0).margin(1e-6));
  REQUIRE(sol.x(0) == Catch::Approx(1.0).margin(1e-5));
  REQUIRE(sol.x(1) == Catch::Approx(3.0).margin(1e-5));
}

TEST_CASE("soc projection problem") {
  // min t  s.t. (t, x - a) in SOC, x = p  -> t = |p - a|  encoded in dual form.
  // Direct primal form: variables (t, x) with x pinned by equalities.
  // Here: min c^T z with z = (t, u) where u = p - a fixed by A z = b.
  const int d = 3;
  Eigen::VectorXd target(d);
  target << 0.3, -1.2, 0.5;
  ConicProblem prob;
  prob.a.resize(d, d + 1);
  prob.a.setZero();
  for (int i = 0; i < d; ++i) prob.a(i, i + 1) = 1.0;
  prob.b = target;
  prob.c.resize(d + 1);
  prob.c.setZero();
  prob.c(0) = 1.0;
  prob.cones = {{ConeKind::soc, d + 1}};

  auto sol = solve_conic(prob);
  REQUIRE(sol.status == IpmStatus::optimal);
  REQUIRE(sol.primal_obj == Catch::Approx(target.norm()).margin(1e-6));
}

TEST_CASE("psd block: unit-diagonal trace maximization with all-ones objective") {
  const int n = 5;
  ConicProblem prob;
  prob.a.resize(n, svec::dim(n));
  prob.b = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, i) = 1.0;
    prob.a.row(i) = svec::from_matrix(e).transpose();
  }
  prob.c = -svec::from_matrix(Eigen::MatrixXd::Ones(n, n));
  prob.cones = {{ConeKind::psd, n}};

  auto sol = solve_conic(prob);
  REQUIRE(sol.status == IpmStatus::optimal);
  // |X_ij| <= 1 under unit diagonal, so the optimum is n^2 at X = ones.
  REQUIRE(-sol.primal_obj == Catch::Approx(static_cast<double>(n) * n).margin(1e-5));
}

TEST_CASE("psd block: dual certificate of a random unit-diagonal problem") {
  Rng rng(42);
  const int n = 6;
  Eigen::MatrixXd c_raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c_raw(i, j) = 2.0 * rng.uniform() - 1.0;
  Eigen::MatrixXd c_sym = 0.5 * (c_raw + c_raw.transpose());

  ConicProblem prob;
  prob.a.resize(n, svec::dim(n));
  prob.b = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, i) = 1.0;
    prob.a.row(i) = svec::from_matrix(e).transpose();
  }
  prob.c = -svec::from_matrix(c_sym);
  prob.cones = {{ConeKind::psd, n}};

  auto sol = solve_conic(prob);
  REQUIRE(sol.status == IpmStatus::optimal);

  // c was negated for minimization; in terms of max tr(C X) the dual reads
  // min sum(-y) s.t. Diag(-y) - C psd.
  Eigen::MatrixXd slack = (-sol.y).asDiagonal().toDenseMatrix() - c_sym;
  double primal_value = -sol.primal_obj;
  double dual_value = -sol.y.sum();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(slack);
  REQUIRE(es.eigenvalues()(0) > -1e-6);
  REQUIRE(primal_value == Catch::Approx(dual_value).margin(1e-5));
}

TEST_CASE("mixed cones: psd with linear inequality slacks") {
  // max tr(C X) s.t. diag(X) = 1, tr(D X) >= g  with C = I (constant trace),
  // made binding through D = E_12 symmetric: forces X_12 toward g/2... just
  // check feasibility and residuals.
  const int n = 4;
  Eigen::MatrixXd d_mat = Eigen::MatrixXd::Zero(n, n);
  d_mat(0, 1) = d_mat(1, 0) = 1.0;
  const double bound = 1.0;  // tr(D X) = 2 X_01 >= 1

  ConicProblem prob;
  const int nv = svec::dim(n) + 1;  // psd block + one slack
  prob.a.resize(n + 1, nv);
  prob.a.setZero();
  prob.b.resize(n + 1);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, i) = 1.0;
    prob.a.row(i).head(svec::dim(n)) = svec::from_matrix(e).transpose();
    prob.b(i) = 1.0;
  }
  prob.a.row(n).head(svec::dim(n)) = svec::from_matrix(d_mat).transpose();
  prob.a(n, svec::dim(n)) = -1.0;  // tr(D X) - slack = bound
  prob.b(n) = bound;
  prob.c = Eigen::VectorXd::Zero(nv);
  prob.c.head(svec::dim(n)) = -svec::from_matrix(Eigen::MatrixXd::Identity(n, n));
  prob.cones = {{ConeKind::psd, n}, {ConeKind::nonneg, 1}};

  auto sol = solve_conic(prob);
  REQUIRE(sol.status == IpmStatus::optimal);
  Eigen::MatrixXd x = svec::to_matrix(sol.x.head(svec::dim(n)), n);
  REQUIRE(-sol.primal_obj == Catch::Approx(4.0).margin(1e-6));
  REQUIRE(2.0 * x(0, 1) >= bound - 1e-7);
  for (int i = 0; i < n; ++i) REQUIRE(x(i, i) == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("iteration trace has non-increasing gap") {
  const int n = 5;
  std::ostringstream trace;
  ConicProblem prob;
  prob.a.resize(n, svec::dim(n));
  prob.b = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
    e(i, i) = 1.0;
    prob.a.row(i) = svec::from_matrix(e).transpose();
  }
  prob.c = -svec::from_matrix(Eigen::MatrixXd::Ones(n, n));
  prob.cones = {{ConeKind::psd, n}};
  IpmOptions opts;
  opts.trace = &trace;
  auto sol = solve_conic(prob, opts);
  REQUIRE(sol.status == IpmStatus::optimal);

  std::istringstream in(trace.str());
  std::string line;
  double prev = std::numeric_limits<double>::infinity();
  int rows = 0;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    double gap = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    REQUIRE(gap <= prev * (1.0 + 1e-9));
    prev = gap;
    ++rows;
  }
  REQUIRE(rows >= 2);
}
