#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsm/analysis.hpp"

using namespace gsm;
constexpr double kPi = std::numbers::pi;

namespace {
double disc_area(const DiscGrid& d) { return d.disc_cells().size() * d.cell_area(); }
}  // namespace

TEST(DiscGrid, Construction) {
  EXPECT_THROW(DiscGrid(4), std::invalid_argument);
  EXPECT_THROW(DiscGrid(1), std::invalid_argument);
  DiscGrid d(65);
  EXPECT_NEAR(d.x(32), 0.0, 1e-15);
  EXPECT_NEAR(d.y(32 * 65), 0.0, 1e-15);
  EXPECT_NEAR(disc_area(d), kPi, 0.02);
}

TEST(Morrey, ValidatesParameters) {
  DiscGrid d(9);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(d.size());
  EXPECT_THROW(morrey_norm(f, d, {0.5, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(morrey_norm(f, d, {2.0, 2.5}, {1.0}), std::invalid_argument);
  EXPECT_THROW(morrey_norm(f, d, {2.0, 1.0}, {}), std::invalid_argument);
  EXPECT_THROW(morrey_norm(f, d, {2.0, 1.0}, {1.5}), std::invalid_argument);
  EXPECT_THROW(morrey_norm(Eigen::VectorXd::Ones(3), d, {2.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST(Morrey, LambdaEqualsDimensionIsLp) {
  DiscGrid d(41);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  Eigen::VectorXd f(d.size());
  for (int i = 0; i < f.size(); ++i) f(i) = n(rng);
  for (double p : {1.0, 2.0, 4.0})
    EXPECT_NEAR(morrey_norm(f, d, {p, 2.0}, dyadic_radii(1.0, 5)), lp_norm(f, d, p), 1e-12);
}

TEST(Morrey, ConstantField) {
  DiscGrid d(129);
  const double c = -1.7;
  const Eigen::VectorXd f = Eigen::VectorXd::Constant(d.size(), c);
  const auto radii = dyadic_radii(1.0, 6);
  EXPECT_NEAR(morrey_norm(f, d, {4.0, 2.0}, radii), std::abs(c) * std::pow(disc_area(d), 0.25), 1e-12);
  // λ = 0: sup of |c|^p |B_r ∩ U|/r² is π|c|^p up to cell quadrature
  const double l0 = morrey_norm(f, d, {4.0, 0.0}, radii);
  EXPECT_NEAR(l0 / (std::pow(kPi, 0.25) * std::abs(c)), 1.0, 0.02);
}

TEST(Morrey, RadiiMonotone) {
  DiscGrid d(33);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd f(d.size());
  for (int i = 0; i < f.size(); ++i) f(i) = u(rng);
  const double few = morrey_norm(f, d, {2.0, 1.0}, {0.5, 0.25});
  const double more = morrey_norm(f, d, {2.0, 1.0}, {1.0, 0.5, 0.25, 0.125});
  EXPECT_LE(few, more);
}

TEST(Morrey, InclusionOrdering) {
  DiscGrid d(31);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  const auto radii = dyadic_radii(1.0, 5);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd f(d.size());
    for (int i = 0; i < f.size(); ++i) f(i) = n(rng);
    const auto v = morrey_norms(f, d, 3.0, {0.0, 0.7, 1.4, 2.0}, radii);
    for (std::size_t k = 1; k < v.size(); ++k) EXPECT_GE(v[k - 1], v[k]);
  }
}

TEST(Riesz, FarFieldOfOneCell) {
  DiscGrid d(101);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(d.size());
  const int src = 50 + 101 * 50;
  f(src) = 1.0;
  const Eigen::VectorXd i1 = riesz_i1(f, d);
  const double h = d.h();
  for (int c : d.disc_cells()) {
    const double r = std::hypot(d.x(c) - d.x(src), d.y(c) - d.y(src));
    if (r >= 10 * h) EXPECT_NEAR(i1(c) / (h * h / r), 1.0, 1e-12);
  }
  EXPECT_NEAR(i1(src), 4.0 * h * std::log(1.0 + std::numbers::sqrt2), 1e-15);
}

TEST(Riesz, LinearAndPositive) {
  DiscGrid d(25);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd f(d.size()), g(d.size());
  for (int i = 0; i < f.size(); ++i) {
    f(i) = u(rng);
    g(i) = u(rng);
  }
  const Eigen::VectorXd lhs = riesz_i1(2.0 * f - 0.5 * g, d);
  const Eigen::VectorXd rhs = 2.0 * riesz_i1(f, d) - 0.5 * riesz_i1(g, d);
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GE(riesz_i1(f, d).minCoeff(), 0.0);
}

TEST(Riesz, ResolutionConsistencyOnGaussian) {
  // I₁ of a narrow Gaussian at the origin, two resolutions, against the closed form
  // ∫ e^{-|y|²/s²}/|y| dy = π^{3/2} s (the bump is negligible at |y| = 1)
  const double s = 0.15;
  auto bump = [s](double x, double y) { return std::exp(-(x * x + y * y) / (s * s)); };
  const double exact = std::pow(kPi, 1.5) * s;
  double prev = 1e300;
  for (int m : {41, 81, 161}) {
    DiscGrid d(m);
    const Eigen::VectorXd i1 = riesz_i1(sample_disc(d, bump), d);
    const double err = std::abs(i1((m / 2) * (m + 1)) - exact) / exact;
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(DecayProfile, ConstantZeroAndBorderline) {
  DiscGrid d(129);
  const auto radii = dyadic_radii(1.0, 5);
  const Eigen::Vector2d o(0.0, 0.0);
  for (const auto& [r, v] : decay_profile(Eigen::VectorXd::Zero(d.size()), d, o, 2.0, 1.0, radii)) EXPECT_EQ(v, 0.0);
  // constant: profile ∝ r^{λ/p}, radii kept ≥ 16h so cell counting stays accurate
  DiscGrid fine(257);
  const auto prof = decay_profile(Eigen::VectorXd::Constant(fine.size(), 2.0), fine, o, 2.0, 1.0, dyadic_radii(1.0, 4));
  for (std::size_t k = 0; k + 1 < prof.size(); ++k) {
    const double slope = std::log(prof[k].second / prof[k + 1].second) / std::log(prof[k].first / prof[k + 1].first);
    EXPECT_NEAR(slope, 0.5, 0.05);
  }
  // |x|^{-1/2} with p = 4, λ = 2: bounded (non-increasing) as r → 0
  const Eigen::VectorXd f = sample_disc(d, [](double x, double y) {
    const double r = std::hypot(x, y);
    return r < 1e-12 ? 0.0 : 1.0 / std::sqrt(r);
  });
  const auto b = decay_profile(f, d, o, 4.0, 2.0, radii);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) EXPECT_LE(b[k + 1].second, b[k].second);
}

TEST(DyadicRadii, Halving) {
  const auto r = dyadic_radii(0.8, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_DOUBLE_EQ(r[3], 0.1);
}
