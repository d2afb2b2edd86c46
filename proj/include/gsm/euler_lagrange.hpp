#pragma once

#include <array>
#include <vector>

#include "gsm/action.hpp"

namespace gsm {

/// Residuals of the coupled system, LHS − RHS of the extrinsic equations.
/// r_phi is an ambient ℝᴷ field; r_psi is tangent along φ.
struct ELResidual {
  MapField r_phi;
  VectorSpinorField r_psi;
};

/// ω, F, T per site and direction α (frame e_α), each K×K and antisymmetric.
struct AntisymPotentials {
  std::vector<std::array<Matrix, 2>> omega;
  std::vector<std::array<Matrix, 2>> F;
  std::vector<std::array<Matrix, 2>> T;
};

/// V^{a,β} = Σ_α ⟨e_α·e_β·χ^α, ψ′^a⟩ (flat spinor metric, frame components of χ); entry β is N×K.
std::array<MapField, 2> v_fields(const GravitinoField& chi, const VectorSpinorField& psi);

MapField residual_phi(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                      const ConformalFactor& u, const TargetManifold& m, const Grid& grid);

VectorSpinorField residual_psi(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                               const ConformalFactor& u, const TargetManifold& m, const Grid& grid);

ELResidual residuals(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                     const ConformalFactor& u, const TargetManifold& m, const Grid& grid);

AntisymPotentials potentials(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                             const ConformalFactor& u, const TargetManifold& m, const Grid& grid);

/// Δ_g φ′ − Σ_α (ω + F + T)_α e_α(φ′) − Z + div_g V′ rebuilt from the potentials.
MapField assemble_from_potentials(const AntisymPotentials& pot, const MapField& phi, const VectorSpinorField& psi,
                                  const GravitinoField& chi, const ConformalFactor& u, const TargetManifold& m,
                                  const Grid& grid);

/// Central-difference gradient of the discrete action. The φ-part moves one site along
/// project(φ + εe_a) carrying ψ by the tangent projector; the ψ-part moves along tangent
/// directions. Both are returned tangent-projected, unscaled.
struct ActionGradient {
  MapField phi;
  VectorSpinorField psi;
};

ActionGradient action_gradient_fd(const MapField& phi, const VectorSpinorField& psi, const ConformalFactor& u,
                                  const GravitinoField& chi, const TargetManifold& m, const Grid& grid,
                                  double step = 1e-5);

/// Rescales an action gradient to residual units: r_phi ≈ −∂𝔸/∂φ / (2e^{2u}h²) and
/// r_psi ≈ ∂𝔸/∂ψ / (2e^{3u}h²).
ELResidual gradient_as_residual(const ActionGradient& g, const ConformalFactor& u, const Grid& grid);

struct NormPair {
  double l2 = 0.0;
  double linf = 0.0;
};

/// Grid L² norm (weighted by h₁h₂) and max norm over all components.
NormPair field_norms(const FieldMatrix& f, const Grid& grid);

/// Tangent part of r_phi at every site.
MapField tangent_part(const MapField& r, const MapField& phi, const TargetManifold& m);

}  // namespace gsm
