#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gsm/grid.hpp"
#include "gsm/random_fields.hpp"
#include "gsm/target.hpp"

using namespace gsm;
constexpr double kPi = std::numbers::pi;

namespace {

ScalarField sample(const Grid& g, double (*f)(double, double)) {
  ScalarField out(g.size());
  for (int s = 0; s < g.size(); ++s) out(s) = f(g.x(s), g.y(s));
  return out;
}

Vector random_point(const TargetManifold& m, Rng& rng) {
  std::normal_distribution<double> n;
  Vector v(m.ambient_dim());
  for (int i = 0; i < v.size(); ++i) v(i) = n(rng);
  return m.project(v);
}

Vector random_tangent(const TargetManifold& m, const Vector& p, Rng& rng) {
  std::normal_distribution<double> n;
  Vector v(m.ambient_dim());
  for (int i = 0; i < v.size(); ++i) v(i) = n(rng);
  return m.tangent_project(p, v);
}

}  // namespace

TEST(Grid, IndexWraps) {
  Grid g(5, 4);
  EXPECT_EQ(g.index(-1, 0), 4);
  EXPECT_EQ(g.index(5, 4), 0);
  EXPECT_EQ(g.shift(g.index(4, 3), 0, 1), g.index(0, 3));
  EXPECT_EQ(g.shift(g.index(0, 0), 1, -1), g.index(0, 3));
}

TEST(Grid, GradOfConstantAndSine) {
  Grid g(16, 8);
  EXPECT_EQ(grad(ScalarField::Constant(g.size(), 2.5), g).cwiseAbs().maxCoeff(), 0.0);
  const ScalarField f = sample(g, [](double x, double) { return std::sin(2 * kPi * x); });
  const FieldMatrix d = grad(f, g);
  const double h = g.h1();
  for (int s = 0; s < g.size(); ++s) {
    EXPECT_NEAR(d(s, 0), std::sin(2 * kPi * h) / h * std::cos(2 * kPi * g.x(s)), 1e-12);
    EXPECT_NEAR(d(s, 1), 0.0, 1e-12);
  }
}

TEST(Grid, SummationByParts) {
  Grid g(12, 10);
  Rng rng(1);
  const FieldMatrix f = white_noise(g.size(), 1, rng);
  const FieldMatrix h = white_noise(g.size(), 1, rng);
  for (int a = 0; a < 2; ++a)
    EXPECT_NEAR((f.array() * partial(h, a, g).array()).sum() + (partial(f, a, g).array() * h.array()).sum(), 0.0,
                1e-10);
}

TEST(Grid, DivergenceProperties) {
  Grid g(12, 10);
  Rng rng(2);
  FieldMatrix v = white_noise(g.size(), 2, rng);
  EXPECT_NEAR(div(v, g).sum(), 0.0, 1e-9);
  EXPECT_EQ(div(FieldMatrix::Constant(g.size(), 2, 1.5), g).cwiseAbs().maxCoeff(), 0.0);
  const ScalarField f = white_noise(g.size(), 1, rng);
  EXPECT_LE((div(grad(f, g), g) - div_grad(f, g)).cwiseAbs().maxCoeff(), 1e-9);
  // −div is the adjoint of grad
  EXPECT_NEAR((grad(f, g).array() * v.array()).sum() + (f.array() * div(v, g).array()).sum(), 0.0, 1e-9);
}

TEST(Grid, LaplacianEigenvalue) {
  Grid g(16, 16);
  const ScalarField f = sample(g, [](double x, double) { return std::cos(2 * kPi * x); });
  const FieldMatrix l = laplacian(f, g);
  const double h = g.h1();
  const double lambda = -(2.0 / (h * h)) * (1.0 - std::cos(2 * kPi * h));
  for (int s = 0; s < g.size(); ++s) EXPECT_NEAR(l(s, 0), lambda * f(s), 1e-9);
  EXPECT_EQ(laplacian(ScalarField::Constant(g.size(), 3.0), g).cwiseAbs().maxCoeff(), 0.0);
  Rng rng(3);
  EXPECT_NEAR(laplacian(white_noise(g.size(), 1, rng), g).sum(), 0.0, 1e-8);
}

TEST(Target, SphereFrameAndProjector) {
  Sphere s(3);
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    const Vector p = random_point(s, rng);
    EXPECT_LE(s.manifold_defect(p), 1e-15);
    const Matrix nu = s.normal_frame(p);
    EXPECT_LE((nu.transpose() * nu - Matrix::Identity(1, 1)).cwiseAbs().maxCoeff(), 1e-12);
    const Matrix pt = s.tangent_projector(p);
    EXPECT_LE((pt * pt - pt).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((pt - pt.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((pt * nu).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Target, SphereExtrinsicClosedForms) {
  Sphere s(3);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Vector p = random_point(s, rng);
    const Vector x = random_tangent(s, p, rng);
    const Vector y = random_tangent(s, p, rng);
    const Vector z = random_tangent(s, p, rng);
    EXPECT_LE((second_fund_form(s, p, x, y) + x.dot(y) * p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((shape_operator(s, p, p, z) + z).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((curvature_operator(s, p, x, y, z) - (y.dot(z) * x - x.dot(z) * y)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(nabla_A(s, p, x, y, z).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(second_fund_form(s, p, x, Vector::Zero(3)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(shape_operator(s, p, Vector::Zero(3), z).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Target, RejectsOffManifoldPoints) {
  Sphere s(3);
  const Vector p = (Vector(3) << 0.0, 0.0, 1.1).finished();
  EXPECT_THROW(s.require_on_manifold(p), ConstraintError);
  Rng rng(6);
  EXPECT_THROW(second_fund_form(s, p, random_tangent(s, s.project(p), rng), random_tangent(s, s.project(p), rng)),
               ConstraintError);
}

TEST(Target, EllipsoidIdentities) {
  auto e = make_ellipsoid((Vector(3) << 1.0, 1.4, 0.7).finished());
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const Vector p = random_point(*e, rng);
    const Matrix nu = e->normal_frame(p);
    EXPECT_LE(std::abs(nu.col(0).norm() - 1.0), 1e-12);
    const Vector x = random_tangent(*e, p, rng);
    const Vector y = random_tangent(*e, p, rng);
    const Vector z = random_tangent(*e, p, rng);
    const Vector axy = second_fund_form(*e, p, x, y);
    EXPECT_LE((axy - second_fund_form(*e, p, y, x)).norm(), 1e-8);
    EXPECT_LE(e->tangent_project(p, axy).norm(), 1e-8);
    const Vector xi = nu.col(0);
    EXPECT_NEAR(xi.dot(axy), shape_operator(*e, p, xi, x).dot(y), 1e-8);
    EXPECT_LE(curvature_operator(*e, p, x, x, z).norm(), 1e-10);
    const Vector bianchi =
        curvature_operator(*e, p, x, y, z) + curvature_operator(*e, p, y, z, x) + curvature_operator(*e, p, z, x, y);
    EXPECT_LE(bianchi.norm(), 1e-7);
    EXPECT_LE((nabla_A(*e, p, x, y, z) - nabla_A(*e, p, y, x, z)).norm(), 1e-6);
  }
}

TEST(Target, EllipsoidNablaARichardson) {
  // differences between steps s, 2s, 4s shrink by 4 when the FD error is O(step²)
  const Vector axes = (Vector(3) << 1.0, 1.4, 0.7).finished();
  std::vector<std::unique_ptr<EmbeddedTarget>> t;
  for (double step : {1e-4, 2e-4, 4e-4}) {
    t.push_back(make_ellipsoid(axes));
    t.back()->set_fd_step(step);
  }
  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    const Vector p = random_point(*t[0], rng);
    const Vector x = random_tangent(*t[0], p, rng);
    const Vector y = random_tangent(*t[0], p, rng);
    const Vector z = random_tangent(*t[0], p, rng);
    const Vector a1 = nabla_A(*t[0], p, x, y, z);
    const Vector a2 = nabla_A(*t[1], p, x, y, z);
    const Vector a4 = nabla_A(*t[2], p, x, y, z);
    const double ratio = (a4 - a2).norm() / (a2 - a1).norm();
    EXPECT_NEAR(ratio, 4.0, 0.5);
    EXPECT_LE((a1 - a2).norm(), 1e-3 * (1.0 + a1.norm()));
  }
}
