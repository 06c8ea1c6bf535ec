#include "hinge/analysis_harness.hpp"
#include "hinge/energy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hinge;

namespace {

constexpr double kPi = std::numbers::pi;
const Interval kUnitPi{0.0, kPi};

OdeSystem make_system(int k, NonlinearFn f1 = make_nonlinearity("zero"),
                      NonlinearFn f2 = make_nonlinearity("zero"), Forcing f = {}) {
  return OdeSystem(make_basis(kUnitPi, k), Quadrature::for_modes(kUnitPi, k), std::move(f1),
                   std::move(f2), std::move(f));
}

ModalState two_mode(double g1, double g2, double v1, double v2) {
  ModalState s;
  s.g = Eigen::Vector2d(g1, g2);
  s.gdot = Eigen::Vector2d(v1, v2);
  return s;
}

Trajectory single_state(const ModalState& s) {
  Trajectory t;
  t.states.push_back(s);
  return t;
}

}  // namespace

TEST(EnergyReport, SpecExamples) {
  const auto free = make_system(2);
  auto e = energy_report(free, two_mode(1, 0, 0, 0));
  EXPECT_DOUBLE_EQ(e.elastic, 0.5);
  EXPECT_DOUBLE_EQ(e.total, 0.5);
  e = energy_report(free, two_mode(0, 0, 2, 0));
  EXPECT_DOUBLE_EQ(e.kinetic, 2.0);

  const auto lin3 = make_system(2, make_nonlinearity("zero"),
                                make_nonlinearity("linear", std::vector<double>{3.0}));
  e = energy_report(lin3, two_mode(1, 0, 0, 0));
  EXPECT_NEAR(e.potential, 1.5, 1e-13);
}

TEST(EnergyReport, DissipationAndWork) {
  const auto sys = make_system(2, make_nonlinearity("linear_damping", std::vector<double>{2.0}),
                               make_nonlinearity("zero"),
                               make_forcing("mode_cos", std::vector<double>{1.0, 1.0, 1.0}, kUnitPi));
  const auto e = energy_report(sys, two_mode(0, 0, 1.5, 0));
  EXPECT_NEAR(e.dissipation_rate, 2.0 * 1.5 * 1.5, 1e-13);
  // (sin x, 1.5 e1) = 1.5 sqrt(pi/2)
  EXPECT_NEAR(e.work_rate, 1.5 * std::sqrt(kPi / 2), 1e-13);
}

TEST(IdentityResidual, UndampedLinearModeConserves) {
  const auto sys = make_system(3);
  const ModalState init{0.0, Eigen::Vector3d(1, 0.2, 0), Eigen::Vector3d(0, 0, 0.1)};
  const auto traj = solve(sys, init,
                          5.0, 1e-2, Method::Splitting, 10);
  for (std::size_t i = 0; i + 1 < traj.states.size(); ++i) {
    EXPECT_LE(std::abs(identity_residual(sys, traj, i)), 1e-10);
  }
}

TEST(IdentityResidual, LinearDampingDecaysEnergy) {
  const auto sys = make_system(2, make_nonlinearity("linear_damping", std::vector<double>{1.0}));
  const auto traj = solve(sys, two_mode(1, 0.3, 0, 0), 5.0, 1e-3, Method::Splitting, 10);
  const auto series = energy_series(sys, traj);
  for (std::size_t i = 1; i < series.size(); ++i) EXPECT_LT(series[i].total, series[i - 1].total);
  const auto res = identity_residuals(series);
  ASSERT_EQ(res.size(), series.size() - 1);
  for (double r : res) EXPECT_LE(std::abs(r), 1e-5);
}

TEST(IdentityResidual, CumulativeResidualIsSecondOrderInCadence) {
  ProblemSetup setup = benchmark_setup(8);
  setup.T = 2.0;
  setup.dt = setup.resolved_dt();
  std::vector<ProblemSetup> setups;
  for (int every : {16, 8, 4}) {
    setup.output_every = every;
    setups.push_back(setup);
  }
  const auto runs = run_all(setups);
  std::vector<double> worst;
  for (const auto& r : runs) {
    const auto c = cumulative_identity_residuals(energy_series(*r.system, r.trajectory));
    double w = 0.0;
    for (double v : c) w = std::max(w, std::abs(v));
    worst.push_back(w);
  }
  EXPECT_GE(worst[0] / worst[1], 3.0);
  EXPECT_LE(worst[0] / worst[1], 5.0);
  EXPECT_GE(worst[1] / worst[2], 3.0);
  EXPECT_LE(worst[1] / worst[2], 5.0);
}

TEST(Bounds, LinearModeStep4Margins) {
  const auto sys = make_system(1);
  const auto traj = solve(sys, ModalState{0.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1)},
                          3.0, 1e-2, Method::Splitting, 5);
  const auto rep = check_apriori_bounds(sys, traj, Bound::Step4);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double c2 = std::cos(rep.times[i]) * std::cos(rep.times[i]);
    EXPECT_NEAR(rep.lhs[i], c2, 1e-12);
    EXPECT_NEAR(rep.rhs[i], 2 * c2, 1e-12);
    EXPECT_NEAR(rep.margins[i], c2, 1e-12);
  }
  EXPECT_TRUE(rep.passed);
}

TEST(Bounds, ZeroSolutionPassesEverything) {
  const auto sys = make_system(4, make_nonlinearity("cubic_damping"), make_nonlinearity("sine"));
  const auto traj = solve(sys, ModalState{0.0, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(4)},
                          1.0, 1e-3, Method::Splitting, 50);
  for (Bound b : {Bound::Step2, Bound::Step3, Bound::Step4, Bound::H4Recovery}) {
    const auto rep = check_apriori_bounds(sys, traj, b);
    EXPECT_TRUE(rep.passed) << to_string(b);
    if (b != Bound::H4Recovery) {
      for (double l : rep.lhs) EXPECT_EQ(l, 0.0);
    }
  }
}

TEST(Bounds, BenchmarkStep2Step3AndRecoveryPass) {
  const auto r = run(benchmark_setup(16));
  for (Bound b : {Bound::Step2, Bound::Step3, Bound::H4Recovery}) {
    const auto rep = check_apriori_bounds(*r.system, r.trajectory, b);
    EXPECT_TRUE(rep.passed) << to_string(b);
    EXPECT_GE(rep.min_margin(), 0.0) << to_string(b);
  }
  const auto s3 = check_apriori_bounds(*r.system, r.trajectory, Bound::Step3);
  for (const char* key : {"lambda1_sq", "sup_norm_bound_M", "lipschitz_F2_prime", "gronwall_C"}) {
    EXPECT_TRUE(s3.constants.count(key)) << key;
  }
  EXPECT_EQ(s3.lhs.front(), s3.rhs.front());
  const double M = s3.constants.at("sup_norm_bound_M");
  EXPECT_NEAR(s3.constants.at("lipschitz_F2_prime"), std::max(1.0, 3 * M * M - 1), 1e-9);
}

TEST(Bounds, Step4FactorTwoHasOneModeCounterexample) {
  // k = 1 on (0, pi), F1 = 0, F2 = s^3 - s, u = g e1 with g^2 = 4 pi / 9 and
  // f = (g/3) e1. With p = (u^3, e1) = 3 g^3 / (2 pi) = 2g/3:
  //   |u|_{H4*}^2 = g^2,  u'' = g/3 - p = -g/3,
  //   |F2(u)|^2 = (p - g)^2 + |(I-P)u^3|^2 = g^2/9 + g^6/(4 pi^2),
  // so 2(|f|^2 + |F2|^2 + |u''|^2) = 2g^2/3 + g^6/(2 pi^2) < g^2.
  const double g = std::sqrt(4 * kPi / 9);
  const double A = g / 3;
  const double amp = A * std::sqrt(2 / kPi);  // A e1 = amp sin x
  const auto sys = make_system(1, make_nonlinearity("zero"), make_nonlinearity("cubic_minus_linear"),
                               make_forcing("mode_cos", std::vector<double>{amp, 1.0, 0.0}, kUnitPi));
  const auto traj = single_state(ModalState{0.0, Eigen::VectorXd::Constant(1, g), Eigen::VectorXd::Zero(1)});
  const double lhs = g * g;
  const double rhs = 2 * g * g / 3 + std::pow(g, 6) / (2 * kPi * kPi);

  const auto rep = check_apriori_bounds(sys, traj, Bound::Step4);
  EXPECT_NEAR(rep.lhs[0], lhs, 1e-12);
  EXPECT_NEAR(rep.rhs[0], rhs, 1e-12);
  EXPECT_FALSE(rep.passed);
  EXPECT_NEAR(rep.constants.at("max_factor_needed"), 2 * lhs / rhs, 1e-12);
  EXPECT_LE(rep.constants.at("max_factor_needed"), 4.0);
  EXPECT_TRUE(check_apriori_bounds(sys, traj, Bound::H4Recovery).passed);
}

TEST(Bounds, Step3NeedsTimeDerivative) {
  Forcing f = make_forcing("mode_cos", std::vector<double>{0.1}, kUnitPi);
  f.time_deriv = nullptr;
  const auto sys = make_system(2, make_nonlinearity("zero"), make_nonlinearity("zero"), f);
  const auto traj = single_state(two_mode(0, 0, 0, 0));
  EXPECT_THROW(check_apriori_bounds(sys, traj, Bound::Step3), std::invalid_argument);
  EXPECT_THROW(check_apriori_bounds(sys, Trajectory{}, Bound::Step2), std::invalid_argument);
}

TEST(Bounds, PassedMatchesToleranceRule) {
  BoundReport rep;
  rep.times = {0, 1};
  rep.lhs = {1.0, 2.0};
  rep.rhs = {1.0, 2.0 - 1e-7};  // tolerance 1e-7 (1 + 2) covers this
  finalize(rep);
  EXPECT_TRUE(rep.passed);
  EXPECT_NEAR(rep.tolerance, 1e-7 * (1 + (2.0 - 1e-7)), 1e-20);
  rep.rhs = {1.0, 1.9};
  finalize(rep);
  EXPECT_FALSE(rep.passed);
  EXPECT_NEAR(rep.min_margin(), -0.1, 1e-15);
}

// Properties ----------------------------------------------------------------

TEST(EnergyProperty, PotentialFloorAndDissipationSign) {
  for (const auto& f2 : catalog_ids(Role::Restoring)) {
    ProblemSetup setup = benchmark_setup(8);
    setup.T = 2.0;
    setup.f2 = make_nonlinearity(f2);
    const auto r = run(setup);
    const double length = r.system->basis().interval().length();
    for (const auto& e : energy_series(*r.system, r.trajectory)) {
      EXPECT_GE(e.potential - r.system->f2().floor * length, -1e-9) << f2;
      EXPECT_GE(e.dissipation_rate, -1e-9) << f2;
      EXPECT_GE(e.kinetic, 0.0);
      EXPECT_GE(e.elastic, 0.0);
    }
  }
}

TEST(EnergyProperty, Step2BoundedUniformlyInK) {
  std::vector<ProblemSetup> setups;
  for (int k : {4, 8, 16, 32}) setups.push_back(benchmark_setup(k));
  const auto runs = run_all(setups);
  std::vector<double> peaks;
  for (const auto& r : runs) {
    const auto rep = check_apriori_bounds(*r.system, r.trajectory, Bound::Step2);
    peaks.push_back(*std::max_element(rep.lhs.begin(), rep.lhs.end()));
  }
  const auto [lo, hi] = std::minmax_element(peaks.begin(), peaks.end());
  EXPECT_LT((*hi - *lo) / *hi, 0.05);
}

TEST(EnergyProperty, UndampedNonlinearRk4Conserves) {
  ProblemSetup setup = benchmark_setup(8);
  setup.f1 = make_nonlinearity("zero");
  setup.forcing = Forcing{};
  setup.method = Method::Rk4;
  setup.dt = 1e-4;
  setup.T = 10.0;
  const auto r = run(setup);
  const auto series = energy_series(*r.system, r.trajectory);
  for (const auto& e : series) EXPECT_NEAR(e.total, series.front().total, 1e-9);
}
