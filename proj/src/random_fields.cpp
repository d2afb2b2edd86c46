#include "gsm/random_fields.hpp"

#include <cmath>
#include <numbers>

namespace gsm {

ScalarField smooth_scalar(const Grid& grid, Rng& rng, double amplitude, int max_mode) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField out = ScalarField::Zero(grid.size());
  const double two_pi = 2.0 * std::numbers::pi;
  double weight = 0.0;
  for (int kx = -max_mode; kx <= max_mode; ++kx)
    for (int ky = -max_mode; ky <= max_mode; ++ky) {
      const double damp = 1.0 / (1.0 + kx * kx + ky * ky);
      const double a = normal(rng) * damp;
      const double b = normal(rng) * damp;
      weight += 2.0 * damp * damp;
      for (int s = 0; s < grid.size(); ++s) {
        const double arg = two_pi * (kx * grid.x(s) + ky * grid.y(s));
        out(s) += a * std::cos(arg) + b * std::sin(arg);
      }
    }
  return out * (amplitude / std::sqrt(weight));
}

FieldMatrix smooth_matrix(const Grid& grid, Rng& rng, int cols, double amplitude, int max_mode) {
  FieldMatrix out(grid.size(), cols);
  for (int c = 0; c < cols; ++c) out.col(c) = smooth_scalar(grid, rng, amplitude, max_mode);
  return out;
}

MapField random_smooth_map(const Grid& grid, const TargetManifold& m, Rng& rng, double amplitude, int max_mode) {
  const int k = m.ambient_dim();
  // scale of the target along the first axis
  Vector probe = Vector::Zero(k);
  probe(0) = 1.0;
  const double r = m.project(probe).norm();
  MapField raw = equator_map(grid, k, r) + smooth_matrix(grid, rng, k, amplitude * r, max_mode);
  return project_map(raw, m);
}

VectorSpinorField random_tangent_spinors(const MapField& phi, const TargetManifold& m, const Grid& grid, Rng& rng,
                                         double amplitude, int max_mode) {
  const VectorSpinorField raw = smooth_matrix(grid, rng, 4 * static_cast<int>(phi.cols()), amplitude, max_mode);
  return tangency_project(raw, phi, m);
}

GravitinoField random_gravitino(const Grid& grid, Rng& rng, double amplitude, int max_mode) {
  return smooth_matrix(grid, rng, 8, amplitude, max_mode);
}

FieldMatrix white_noise(int rows, int cols, Rng& rng, double amplitude) {
  std::normal_distribution<double> normal(0.0, amplitude);
  FieldMatrix out(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) out(r, c) = normal(rng);
  return out;
}

MapField equator_map(const Grid& grid, int ambient_dim, double radius, Rng* rng, double amplitude, int max_mode) {
  if (ambient_dim < 2) throw std::invalid_argument("equator map needs ambient dimension >= 2");
  ScalarField theta(grid.size());
  for (int s = 0; s < grid.size(); ++s) theta(s) = 2.0 * std::numbers::pi * grid.x(s);
  if (rng && amplitude != 0.0) theta += smooth_scalar(grid, *rng, amplitude, max_mode);
  MapField out = MapField::Zero(grid.size(), ambient_dim);
  out.col(0) = radius * theta.array().cos();
  out.col(1) = radius * theta.array().sin();
  return out;
}

MapField constant_map(const Grid& grid, const Vector& point) {
  MapField out(grid.size(), point.size());
  for (int s = 0; s < grid.size(); ++s) out.row(s) = point.transpose();
  return out;
}

}  // namespace gsm
