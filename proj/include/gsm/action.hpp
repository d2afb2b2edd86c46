#pragma once

#include <array>
#include <vector>

#include "gsm/fields.hpp"

namespace gsm {

/// The five summands of the action and their sum.
struct ActionBreakdown {
  double dirichlet = 0.0;   // I
  double dirac = 0.0;       // II
  double gravitino = 0.0;   // III
  double qchi = 0.0;        // IV
  double curvature = 0.0;   // V
  double total = 0.0;

  std::array<double, 5> terms() const { return {dirichlet, dirac, gravitino, qchi, curvature}; }
};

// Quadrature weights at a site with conformal factor u (g = e^{2u}δ):
//   volume e^{2u} h₁h₂, spinor metric e^{u}, frame e_α = e^{-u}∂_α.
// χ is stored in frame components. With these weights every term is invariant under
// (ψ, u, χ^α) → (e^{-u}ψ, u, e^{-u}χ^α) site by site.

/// R(ψ) = Σ_l (tr S_l G)² − tr(S_l G S_l G) with G the Gram matrix of the K spinors at a site.
double curvature_scalar(const SiteSpinors& sp, const std::vector<Matrix>& sff);

/// SR(ψ) at a site, K×4 → returned as 4×K like site_spinors. ⟨SR(ψ), ψ⟩ = R(ψ).
SiteSpinors curvature_spinor(const SiteSpinors& sp, const std::vector<Matrix>& sff, const Matrix& tangent);

/// S∇R(ψ) at a site: the tangent vector Z ↦ (∇_Z R)(ψ, ψ, ψ, ψ) expressed in ℝᴷ.
Vector curvature_gradient(const TargetManifold& m, const SiteGeometry& geo, const SiteSpinors& sp);

/// Gravitino coupling Γ_β = Σ_α e_α·e_β·χ^α = -2 (Qχ)^β; column β.
SpinorTangent<double> gravitino_gamma(const SpinorTangent<double>& chi);

double term_dirichlet(const MapField& phi, const ConformalFactor& u, const Grid& grid);
double term_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                  const TargetManifold& m, const Grid& grid);
double term_gravitino(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                      const ConformalFactor& u, const Grid& grid);
double term_qchi(const GravitinoField& chi, const VectorSpinorField& psi, const ConformalFactor& u, const Grid& grid);
double term_curvature(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                      const TargetManifold& m, const Grid& grid);

VectorSpinorField sr_of(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m);
MapField snr_of(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m);

ActionBreakdown total_action(const MapField& phi, const VectorSpinorField& psi, const ConformalFactor& u,
                             const GravitinoField& chi, const TargetManifold& m, const Grid& grid);

/// Contribution of a single site to each of the five terms. The action is the sum of these
/// over sites in row-major order; the sum over a neighbourhood is what the gradient oracle
/// differentiates. `sff` is the second fundamental form at φ(site).
std::array<double, 5> site_density(int site, const MapField& phi, const VectorSpinorField& psi,
                                   const GravitinoField& chi, const ConformalFactor& u,
                                   const std::vector<Matrix>& sff, const Grid& grid);

}  // namespace gsm
