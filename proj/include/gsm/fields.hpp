#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gsm/clifford.hpp"
#include "gsm/grid.hpp"
#include "gsm/target.hpp"

namespace gsm {

// Field layouts (rows are sites in grid order):
//   MapField           N × K     extrinsic map φ′ = f∘φ
//   SpinorField        N × 4     one spinor per site
//   VectorSpinorField  N × 4K    column 4a + c is component c of ψ′^a
//   GravitinoField     N × 8     columns 0..3 hold χ¹, 4..7 hold χ² (frame components)
//   ConformalFactor    N         u with g = e^{2u}(dx² + dy²)
using MapField = FieldMatrix;
using SpinorField = FieldMatrix;
using VectorSpinorField = FieldMatrix;
using GravitinoField = FieldMatrix;
using ConformalFactor = ScalarField;

using SiteSpinors = Eigen::Matrix<double, 4, Eigen::Dynamic>;

/// ψ′ at one site as a 4×K matrix (column a = ψ′^a).
inline SiteSpinors site_spinors(const VectorSpinorField& psi, int site) {
  const int k = static_cast<int>(psi.cols()) / 4;
  SiteSpinors out(4, k);
  for (int a = 0; a < k; ++a) out.col(a) = psi.row(site).segment<4>(4 * a).transpose();
  return out;
}

inline void set_site_spinors(VectorSpinorField& psi, int site, const SiteSpinors& value) {
  for (int a = 0; a < value.cols(); ++a) psi.row(site).segment<4>(4 * a) = value.col(a).transpose();
}

inline SpinorTangent<double> site_gravitino(const GravitinoField& chi, int site) {
  SpinorTangent<double> out;
  out.col(0) = chi.row(site).segment<4>(0).transpose();
  out.col(1) = chi.row(site).segment<4>(4).transpose();
  return out;
}

inline void set_site_gravitino(GravitinoField& chi, int site, const SpinorTangent<double>& value) {
  chi.row(site).segment<4>(0) = value.col(0).transpose();
  chi.row(site).segment<4>(4) = value.col(1).transpose();
}

/// Extrinsic data of the target evaluated at every site of a map.
struct SiteGeometry {
  Vector point;
  Matrix normals;                  // K × L
  Matrix tangent;                  // K × K projector
  std::vector<Matrix> dnu;         // ∂ν_l^b/∂u^a
  std::vector<Matrix> sff;         // S_l
};

std::vector<SiteGeometry> site_geometry(const TargetManifold& m, const MapField& phi);

/// Tangential parts P_T(φ)·∂_α φ′ at every site; entry α is N × K.
std::array<MapField, 2> map_derivatives(const MapField& phi, const std::vector<SiteGeometry>& geo, const Grid& grid);

double map_defect(const TargetManifold& m, const MapField& phi);
void require_on_manifold(const TargetManifold& m, const MapField& phi);

double tangency_defect(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo);
void require_tangent(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo);

/// Σ_α γ(e_α) ∂_α applied slotwise to a field with 4m columns (Cl(0,2) on S).
FieldMatrix dirac_flat(const FieldMatrix& s, const Grid& grid);

/// Σ_α γ⁺(e_α) ∂_α on 2-component fields: the Cl(2,0) operator on Σ.
FieldMatrix dirac_sigma(const FieldMatrix& s, const Grid& grid);

/// Dirac operator of g = e^{2u}δ for spinors normalized against the rescaled spinor
/// metric e^u g_S:  D^g s = e^{-2u} D^flat(e^u s). Satisfies D^{e^{2u}δ}(e^{-u}s) = e^{-2u} D^flat s.
FieldMatrix dirac_conformal(const FieldMatrix& s, const ConformalFactor& u, const Grid& grid);

/// Extrinsic representative of the twisted Dirac operator Dψ.
VectorSpinorField twisted_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                                const TargetManifold& m, const Grid& grid);

VectorSpinorField twisted_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                                const std::vector<SiteGeometry>& geo, const Grid& grid);

/// Removes Σ_l (Σ_b ψ′^b ν_l^b) ν_l at every site and spinor slot.
VectorSpinorField tangency_project(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m);
VectorSpinorField tangency_project(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo);

/// Re-projects every site of a map onto the target.
MapField project_map(const MapField& phi, const TargetManifold& m);

GravitinoField field_q_project(const GravitinoField& chi);
GravitinoField field_p_project(const GravitinoField& chi);

/// Lifts a spinor field through σ pointwise (pure super-Weyl gauge direction).
GravitinoField field_sigma_lift(const SpinorField& s);

}  // namespace gsm
