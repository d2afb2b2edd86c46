#pragma once

#include <cstdint>
#include <random>

#include "gsm/fields.hpp"

namespace gsm {

using Rng = std::mt19937_64;

/// Σ over Fourier modes |k|∞ ≤ max_mode of random coefficients damped by 1/(1+|k|²),
/// scaled so the coefficient vector has unit standard deviation times amplitude.
ScalarField smooth_scalar(const Grid& grid, Rng& rng, double amplitude, int max_mode = 2);

/// N×cols matrix of independent smooth columns.
FieldMatrix smooth_matrix(const Grid& grid, Rng& rng, int cols, double amplitude, int max_mode = 2);

/// project((R cos 2πx, R sin 2πx, 0, …) + amplitude · smooth), R the target scale.
MapField random_smooth_map(const Grid& grid, const TargetManifold& m, Rng& rng, double amplitude,
                           int max_mode = 2);

VectorSpinorField random_tangent_spinors(const MapField& phi, const TargetManifold& m, const Grid& grid, Rng& rng,
                                         double amplitude, int max_mode = 2);

GravitinoField random_gravitino(const Grid& grid, Rng& rng, double amplitude, int max_mode = 2);

/// White-noise fields (no smoothing), used for algebraic identity checks.
FieldMatrix white_noise(int rows, int cols, Rng& rng, double amplitude = 1.0);

/// Equator loop x ↦ (r cos θ, r sin θ, 0, …) with θ = 2πx + amplitude·(smooth in-plane perturbation).
MapField equator_map(const Grid& grid, int ambient_dim, double radius, Rng* rng = nullptr, double amplitude = 0.0,
                     int max_mode = 2);

MapField constant_map(const Grid& grid, const Vector& point);

}  // namespace gsm
