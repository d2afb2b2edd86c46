#include "gsm/fields.hpp"

#include <cmath>
#include <sstream>

namespace gsm {

std::vector<SiteGeometry> site_geometry(const TargetManifold& m, const MapField& phi) {
  if (phi.cols() != m.ambient_dim()) throw std::invalid_argument("map field dimension does not match the target");
  std::vector<SiteGeometry> out(phi.rows());
  for (int s = 0; s < phi.rows(); ++s) {
    SiteGeometry& g = out[s];
    g.point = phi.row(s).transpose();
    g.normals = m.normal_frame(g.point);
    g.tangent = Matrix::Identity(m.ambient_dim(), m.ambient_dim()) - g.normals * g.normals.transpose();
    g.dnu = m.normal_frame_derivative(g.point);
    g.sff.clear();
    for (const Matrix& d : g.dnu) {
      Matrix sm = -g.tangent * d * g.tangent;
      g.sff.push_back(0.5 * (sm + sm.transpose()));
    }
  }
  return out;
}

std::array<MapField, 2> map_derivatives(const MapField& phi, const std::vector<SiteGeometry>& geo, const Grid& grid) {
  std::array<MapField, 2> out{partial(phi, 0, grid), partial(phi, 1, grid)};
  for (auto& d : out)
    for (int s = 0; s < grid.size(); ++s) d.row(s) = (geo[s].tangent * d.row(s).transpose()).transpose();
  return out;
}

double map_defect(const TargetManifold& m, const MapField& phi) {
  double worst = 0.0;
  for (int s = 0; s < phi.rows(); ++s) {
    const Vector p = phi.row(s).transpose();
    worst = std::max(worst, m.manifold_defect(p) / (1.0 + p.norm()));
  }
  return worst;
}

void require_on_manifold(const TargetManifold& m, const MapField& phi) {
  if (phi.cols() != m.ambient_dim()) throw std::invalid_argument("map field dimension does not match the target");
  for (int s = 0; s < phi.rows(); ++s) m.require_on_manifold(phi.row(s).transpose());
}

double tangency_defect(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo) {
  double worst = 0.0;
  for (int s = 0; s < psi.rows(); ++s) {
    const SiteSpinors sp = site_spinors(psi, s);
    const double normal = (sp * geo[s].normals).norm();
    worst = std::max(worst, normal / (1.0 + sp.norm()));
  }
  return worst;
}

void require_tangent(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo) {
  if (psi.rows() != static_cast<Eigen::Index>(geo.size())) throw std::invalid_argument("spinor field size mismatch");
  const double defect = tangency_defect(psi, geo);
  if (!(defect <= 1e-9)) {
    std::ostringstream msg;
    msg << "vector spinor is not tangent along the map (relative defect " << defect << ")";
    throw ConstraintError(msg.str());
  }
}

FieldMatrix dirac_flat(const FieldMatrix& s, const Grid& grid) {
  if (s.cols() % 4 != 0) throw std::invalid_argument("spinor fields need 4 columns per slot");
  const FieldMatrix d0 = partial(s, 0, grid);
  const FieldMatrix d1 = partial(s, 1, grid);
  const Eigen::Matrix4d g0t = clifford::gamma<double>(0).transpose();
  const Eigen::Matrix4d g1t = clifford::gamma<double>(1).transpose();
  FieldMatrix out(s.rows(), s.cols());
  for (Eigen::Index slot = 0; slot < s.cols(); slot += 4)
    out.middleCols<4>(slot) = d0.middleCols<4>(slot) * g0t + d1.middleCols<4>(slot) * g1t;
  return out;
}

FieldMatrix dirac_sigma(const FieldMatrix& s, const Grid& grid) {
  if (s.cols() != 2) throw std::invalid_argument("Σ spinor fields have 2 columns");
  return partial(s, 0, grid) * clifford::gamma_plus<double>(0).transpose() +
         partial(s, 1, grid) * clifford::gamma_plus<double>(1).transpose();
}

FieldMatrix dirac_conformal(const FieldMatrix& s, const ConformalFactor& u, const Grid& grid) {
  const Eigen::ArrayXd up = u.array().exp();
  const Eigen::ArrayXd um2 = (-2.0 * u.array()).exp();
  FieldMatrix scaled = s;
  scaled.array().colwise() *= up;
  FieldMatrix out = dirac_flat(scaled, grid);
  out.array().colwise() *= um2;
  return out;
}

VectorSpinorField twisted_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                                const TargetManifold& m, const Grid& grid) {
  require_on_manifold(m, phi);
  return twisted_dirac(psi, phi, u, site_geometry(m, phi), grid);
}

VectorSpinorField twisted_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                                const std::vector<SiteGeometry>& geo, const Grid& grid) {
  require_tangent(psi, geo);
  const int k = static_cast<int>(phi.cols());
  VectorSpinorField out = dirac_conformal(psi, u, grid);
  const auto dphi = map_derivatives(phi, geo, grid);
  const Eigen::Matrix4d g0 = clifford::gamma<double>(0);
  const Eigen::Matrix4d g1 = clifford::gamma<double>(1);
  for (int s = 0; s < grid.size(); ++s) {
    const SiteGeometry& g = geo[s];
    const SiteSpinors sp = site_spinors(psi, s);
    const double frame = std::exp(-u(s));
    // 𝒜(φ_*e_α, e_α·ψ)^a = -Σ_{l,b,d} (e_α(φ′^d) e_α·ψ′^b) ∂ν_l^b/∂u^d ν_l^a
    SiteSpinors a_term = SiteSpinors::Zero(4, k);
    for (int l = 0; l < static_cast<int>(g.dnu.size()); ++l) {
      // w^b = Σ_d e_α(φ^d) ∂ν_l^b/∂u^d
      const Vector w0 = g.dnu[l].transpose() * dphi[0].row(s).transpose() * frame;
      const Vector w1 = g.dnu[l].transpose() * dphi[1].row(s).transpose() * frame;
      const Eigen::Vector4d spin = g0 * (sp * w0) + g1 * (sp * w1);
      a_term -= spin * g.normals.col(l).transpose();
    }
    SiteSpinors d = site_spinors(out, s) - a_term;
    set_site_spinors(out, s, d * g.tangent);
  }
  return out;
}

VectorSpinorField tangency_project(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m) {
  return tangency_project(psi, site_geometry(m, phi));
}

VectorSpinorField tangency_project(const VectorSpinorField& psi, const std::vector<SiteGeometry>& geo) {
  VectorSpinorField out(psi.rows(), psi.cols());
  for (int s = 0; s < psi.rows(); ++s) set_site_spinors(out, s, site_spinors(psi, s) * geo[s].tangent);
  return out;
}

MapField project_map(const MapField& phi, const TargetManifold& m) {
  MapField out(phi.rows(), phi.cols());
  for (int s = 0; s < phi.rows(); ++s) out.row(s) = m.project(phi.row(s).transpose()).transpose();
  return out;
}

GravitinoField field_q_project(const GravitinoField& chi) {
  GravitinoField out(chi.rows(), 8);
  for (int s = 0; s < chi.rows(); ++s) set_site_gravitino(out, s, q_project<double>(site_gravitino(chi, s)));
  return out;
}

GravitinoField field_p_project(const GravitinoField& chi) {
  GravitinoField out(chi.rows(), 8);
  for (int s = 0; s < chi.rows(); ++s) set_site_gravitino(out, s, p_project<double>(site_gravitino(chi, s)));
  return out;
}

GravitinoField field_sigma_lift(const SpinorField& sp) {
  GravitinoField out(sp.rows(), 8);
  for (int s = 0; s < sp.rows(); ++s)
    set_site_gravitino(out, s, sigma_lift<double>(sp.row(s).transpose().eval()));
  return out;
}

}  // namespace gsm
