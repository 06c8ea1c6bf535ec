#include "hinge/basis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hinge;

namespace {

constexpr double kPi = std::numbers::pi;
const Interval kUnitPi{0.0, kPi};

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(Interval, RejectsDegenerate) {
  EXPECT_THROW(Interval::make(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Interval::make(2.0, 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(Interval::make(-1.0, 2.0).length(), 3.0);
}

TEST(EigenBasis, EigenvaluesFollowFormula) {
  const EigenBasis a(kUnitPi, 2);
  EXPECT_DOUBLE_EQ(a.eigenvalue(1), 1.0);
  EXPECT_DOUBLE_EQ(a.eigenvalue(2), 4.0);
  const EigenBasis b({0.0, 1.0}, 1);
  EXPECT_NEAR(b.eigenvalue(1), 9.8696044010893586, 1e-13);
  const EigenBasis c({0.0, 2 * kPi}, 3);
  EXPECT_NEAR(c.eigenvalue(3), 2.25, 1e-14);
  EXPECT_NEAR(c.norm_factor(), std::sqrt(1.0 / kPi), 1e-15);
}

TEST(EigenBasis, RejectsBadModeCountAndIndex) {
  EXPECT_THROW(EigenBasis(kUnitPi, 0), std::invalid_argument);
  const EigenBasis b(kUnitPi, 3);
  EXPECT_THROW(b.eigenvalue(0), std::out_of_range);
  EXPECT_THROW(b.eigenvalue(4), std::out_of_range);
  EXPECT_THROW(b.eval(4, 1.0), std::out_of_range);
}

TEST(EigenBasis, PointEvaluations) {
  const EigenBasis b(kUnitPi, 2);
  const double nf = std::sqrt(2.0 / kPi);
  EXPECT_NEAR(b.eval(1, kPi / 2), nf, 1e-15);
  EXPECT_NEAR(b.eval(1, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(b.eval(2, kPi / 4, 2), -4.0 * nf, 1e-14);
}

TEST(EigenBasis, DerivativeOrdersMatchEigenRelations) {
  const EigenBasis b({-0.5, 1.7}, 5);
  for (int i = 1; i <= 5; ++i) {
    for (double x : {-0.4, 0.1, 0.9, 1.6}) {
      const double e = b.eval(i, x);
      EXPECT_NEAR(b.eval(i, x, 2), -b.eigenvalue(i) * e, 1e-11);
      EXPECT_NEAR(b.eval(i, x, 4), b.eigenvalue(i) * b.eigenvalue(i) * e, 1e-9);
      // derivative order 1 against a central difference
      const double h = 1e-6;
      const double fd = (b.eval(i, x + h) - b.eval(i, x - h)) / (2 * h);
      EXPECT_NEAR(b.eval(i, x, 1), fd, 1e-7);
    }
  }
}

TEST(EigenBasis, BoundaryConditionsHold) {
  const EigenBasis b({0.3, 2.1}, 8);
  for (int i = 1; i <= 8; ++i) {
    for (double x : {0.3, 2.1}) {
      EXPECT_NEAR(b.eval(i, x, 0), 0.0, 1e-13);
      EXPECT_NEAR(b.eval(i, x, 2), 0.0, 1e-11);
    }
  }
}

TEST(Quadrature, WeightsSumToLengthAndExactOnPolynomials) {
  const Interval iv{-1.0, 2.5};
  const auto q = Quadrature::gauss_legendre(iv, 3);
  EXPECT_EQ(q.size(), 30u);
  double sum = 0.0;
  for (double w : q.weights()) {
    EXPECT_GT(w, 0.0);
    sum += w;
  }
  EXPECT_NEAR(sum, iv.length(), 1e-12 * iv.length());
  // 10-point Gauss is exact through degree 19 on each panel
  for (int p = 0; p <= 19; ++p) {
    const double exact = (std::pow(2.5, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
    EXPECT_NEAR(q.integrate([p](double x) { return std::pow(x, p); }), exact,
                1e-12 * std::max(1.0, std::abs(exact)))
        << "degree " << p;
  }
}

TEST(Quadrature, DefaultNodeCount) {
  EXPECT_EQ(Quadrature::default_node_count(8), 128);
  EXPECT_EQ(Quadrature::default_node_count(32), 192);
  EXPECT_GE(Quadrature::for_modes(kUnitPi, 8).size(), 128u);
  EXPECT_GE(Quadrature::for_modes(kUnitPi, 40).size(), 240u);
}

TEST(Analyze, SineOnUnitPi) {
  auto basis = make_basis(kUnitPi, 3);
  const auto q = Quadrature::for_modes(kUnitPi, 3);
  const auto c = analyze([](double x) { return std::sin(x); }, basis, q);
  EXPECT_NEAR(c.coeff(1), std::sqrt(kPi / 2), 1e-13);
  EXPECT_NEAR(c.coeff(2), 0.0, 1e-13);
  EXPECT_NEAR(c.coeff(3), 0.0, 1e-13);
}

TEST(Analyze, ZeroAndEigenfunction) {
  auto basis = make_basis(kUnitPi, 3);
  const auto q = Quadrature::for_modes(kUnitPi, 3);
  EXPECT_LT(analyze([](double) { return 0.0; }, basis, q).coeffs().norm(), 1e-300);
  const auto c = analyze([&](double x) { return basis->eval(2, x); }, basis, q);
  EXPECT_NEAR(c.coeff(1), 0.0, 1e-14);
  EXPECT_NEAR(c.coeff(2), 1.0, 1e-14);
  EXPECT_NEAR(c.coeff(3), 0.0, 1e-14);
}

TEST(Analyze, ParabolaFirstCoefficient) {
  // oracle: int_0^pi x(pi-x) sin x dx = 4, times sqrt(2/pi)
  auto basis = make_basis(kUnitPi, 1);
  const auto q = Quadrature::for_modes(kUnitPi, 1);
  const auto c = analyze([](double x) { return x * (kPi - x); }, basis, q);
  EXPECT_NEAR(c.coeff(1), 4.0 * std::sqrt(2.0 / kPi), 1e-13);
  EXPECT_NEAR(c.coeff(1), 3.1915, 1e-4);
}

TEST(Synthesize, PointValues) {
  auto basis = make_basis(kUnitPi, 2);
  const double nf = std::sqrt(2.0 / kPi);
  const std::vector<double> xs{kPi / 2};
  EXPECT_NEAR(synthesize(SpectralField(basis, vec({1, 0})), xs)[0], nf, 1e-15);
  EXPECT_EQ(synthesize(SpectralField(basis, vec({0, 0})), xs)[0], 0.0);
  EXPECT_NEAR(synthesize(SpectralField(basis, vec({1, 1})), xs)[0], nf, 1e-15);
}

TEST(Norms, SpectralFormulas) {
  auto basis = make_basis(kUnitPi, 2);
  const SpectralField e1(basis, vec({1, 0}));
  EXPECT_DOUBLE_EQ(e1.norm(Space::L2), 1.0);
  EXPECT_DOUBLE_EQ(e1.norm(Space::H2Star), 1.0);
  EXPECT_DOUBLE_EQ(e1.norm(Space::H4Star), 1.0);
  EXPECT_DOUBLE_EQ(SpectralField(basis, vec({0, 1})).norm(Space::H2Star), 4.0);
  const SpectralField f(basis, vec({3, 4}));
  EXPECT_DOUBLE_EQ(f.norm(Space::L2), 5.0);
  EXPECT_DOUBLE_EQ(f.squared_norm(Space::L2), 25.0);
}

TEST(Truncate, KeepsLeadingCoefficients) {
  auto basis = make_basis(kUnitPi, 3);
  const SpectralField f(basis, vec({1, 2, 3}));
  const auto t = truncate(f, 2);
  ASSERT_EQ(t.size(), 2);
  EXPECT_EQ(t.coeff(1), 1.0);
  EXPECT_EQ(t.coeff(2), 2.0);
  EXPECT_EQ(truncate(f, 3).coeffs(), f.coeffs());
  EXPECT_THROW(truncate(f, 4), std::out_of_range);
  const SpectralField g(make_basis(kUnitPi, 2), vec({3, 4}));
  EXPECT_DOUBLE_EQ(truncate(g, 1).norm(Space::L2), 3.0);
}

TEST(ZeroPad, ExtendsWithZeros) {
  const SpectralField f(make_basis(kUnitPi, 2), vec({3, 4}));
  const auto p = zero_pad(f, make_basis(kUnitPi, 5));
  ASSERT_EQ(p.size(), 5);
  EXPECT_EQ(p.coeff(2), 4.0);
  EXPECT_EQ(p.coeff(5), 0.0);
  EXPECT_EQ(p.norm(Space::H2Star), f.norm(Space::H2Star));
}

// Properties ----------------------------------------------------------------

TEST(BasisProperty, H2StarGramMatrixIsDiagonal) {
  const EigenBasis b(kUnitPi, 8);
  const auto q = Quadrature::for_modes(kUnitPi, 8);
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      const double v = q.integrate([&](double x) { return b.eval(i, x, 2) * b.eval(j, x, 2); });
      const double want = i == j ? b.eigenvalue(i) * b.eigenvalue(i) : 0.0;
      EXPECT_NEAR(v, want, 1e-10) << i << "," << j;
    }
  }
}

TEST(BasisProperty, SpectralPoincareHoldsExactly) {
  auto basis = make_basis({0.0, 2.0}, 12);
  const double lam1_sq = basis->eigenvalue(1) * basis->eigenvalue(1);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd c(12);
    for (auto& v : c) v = nd(rng);
    const double l2 = squared_norm(*basis, c, Space::L2);
    const double h2 = squared_norm(*basis, c, Space::H2Star);
    const double h4 = squared_norm(*basis, c, Space::H4Star);
    EXPECT_GE(h2, lam1_sq * l2);
    EXPECT_GE(h4, lam1_sq * h2);
  }
}

TEST(BasisProperty, TransformRoundTrip) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int k : {1, 5, 16, 32}) {
    auto basis = make_basis({-1.0, 3.0}, k);
    const auto q = Quadrature::for_modes(basis->interval(), k);
    Eigen::VectorXd c(k);
    for (auto& v : c) v = ud(rng);
    const SpectralField f(basis, c);
    const auto back = analyze(
        [&](double x) { return synthesize(f, std::vector<double>{x})[0]; }, basis, q);
    EXPECT_LT((back.coeffs() - c).cwiseAbs().maxCoeff(), 1e-9) << "k=" << k;

    const NodeTable table(*basis, q);
    EXPECT_LT((table.analyze(table.synthesize(c)) - c).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(BasisProperty, QuadratureH2MatchesSpectralSum) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  auto basis = make_basis(kUnitPi, 10);
  const auto q = Quadrature::for_modes(kUnitPi, 10);
  Eigen::VectorXd c(10);
  for (auto& v : c) v = ud(rng);
  const SpectralField f(basis, c);
  const double quad = q.integrate([&](double x) {
    const double uxx = synthesize(f, std::vector<double>{x}, 2)[0];
    return uxx * uxx;
  });
  EXPECT_NEAR(quad, f.squared_norm(Space::H2Star), 1e-8 * std::max(1.0, quad));
}

TEST(BasisProperty, TruncationNeverIncreasesNorms) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  auto basis = make_basis(kUnitPi, 9);
  Eigen::VectorXd c(9);
  for (auto& v : c) v = ud(rng);
  const SpectralField f(basis, c);
  for (int m = 1; m <= 9; ++m) {
    for (Space s : {Space::L2, Space::H2Star, Space::H4Star}) {
      EXPECT_LE(truncate(f, m).norm(s), f.norm(s));
    }
  }
}

TEST(BasisProperty, SupNormBoundDominatesSamples) {
  auto basis = make_basis(kUnitPi, 6);
  const Eigen::VectorXd c = vec({0.3, -1.2, 0.5, 0.0, 0.8, -0.1});
  const SpectralField f(basis, c);
  const double M = sup_norm_bound(*basis, c);
  std::vector<double> xs;
  for (int i = 0; i <= 1000; ++i) xs.push_back(kPi * i / 1000.0);
  for (double u : synthesize(f, xs)) EXPECT_LE(std::abs(u), M);
}
