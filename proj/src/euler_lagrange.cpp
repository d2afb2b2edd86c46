#include "gsm/euler_lagrange.hpp"

#include <cmath>

namespace gsm {

namespace {

struct Prepared {
  std::vector<SiteGeometry> geo;
  std::array<MapField, 2> dphi;  // P_T ∂_α φ′ (coordinate derivatives)
  std::array<MapField, 2> v;
};

Prepared prepare(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                 const ConformalFactor& u, const TargetManifold& m, const Grid& grid) {
  const Eigen::Index n = grid.size();
  if (phi.rows() != n || psi.rows() != n || chi.rows() != n || u.size() != n)
    throw std::invalid_argument("field sizes do not match the grid");
  if (psi.cols() != 4 * phi.cols() || chi.cols() != 8) throw std::invalid_argument("field layouts are inconsistent");
  require_on_manifold(m, phi);
  Prepared p;
  p.geo = site_geometry(m, phi);
  require_tangent(psi, p.geo);
  p.dphi = map_derivatives(phi, p.geo, grid);
  p.v = v_fields(chi, psi);
  return p;
}

// B_α(c, d) = ⟨ψ^c, e_α·ψ^d⟩, antisymmetric
Matrix spinor_pairing(const SiteSpinors& sp, int alpha) {
  return sp.transpose() * clifford::gamma<double>(alpha) * sp;
}

// e^{-2u} ∂_β(e^{2u} V^β)
MapField weighted_divergence(const std::array<MapField, 2>& v, const ConformalFactor& u, const Grid& grid) {
  const Eigen::ArrayXd w = (2.0 * u.array()).exp();
  MapField out = MapField::Zero(v[0].rows(), v[0].cols());
  for (int beta = 0; beta < 2; ++beta) {
    MapField wv = v[beta];
    wv.array().colwise() *= w;
    out += partial(wv, beta, grid);
  }
  out.array().colwise() /= w;
  return out;
}

}  // namespace

std::array<MapField, 2> v_fields(const GravitinoField& chi, const VectorSpinorField& psi) {
  if (chi.rows() != psi.rows()) throw std::invalid_argument("gravitino and spinor fields differ in size");
  const int k = static_cast<int>(psi.cols()) / 4;
  std::array<MapField, 2> out{MapField(psi.rows(), k), MapField(psi.rows(), k)};
  for (int s = 0; s < psi.rows(); ++s) {
    const SpinorTangent<double> gam = gravitino_gamma(site_gravitino(chi, s));
    const SiteSpinors sp = site_spinors(psi, s);
    for (int beta = 0; beta < 2; ++beta) out[beta].row(s) = gam.col(beta).transpose() * sp;
  }
  return out;
}

MapField residual_phi(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                      const ConformalFactor& u, const TargetManifold& m, const Grid& grid) {
  const Prepared p = prepare(phi, psi, chi, u, m, grid);
  const int k = static_cast<int>(phi.cols());
  MapField out = div_grad(phi, grid);
  for (int s = 0; s < grid.size(); ++s) {
    const SiteGeometry& g = p.geo[s];
    const SiteSpinors sp = site_spinors(psi, s);
    const bool has_psi = sp.squaredNorm() > 0.0;
    Vector atrace = Vector::Zero(k);
    Vector curv = Vector::Zero(k);
    Vector vterm = Vector::Zero(k);
    for (int l = 0; l < m.codim(); ++l) {
      const Vector nu = g.normals.col(l);
      for (int alpha = 0; alpha < 2; ++alpha) {
        const Vector d = p.dphi[alpha].row(s).transpose();
        atrace += d.dot(g.dnu[l] * d) * nu;
        vterm += d.dot(g.dnu[l] * p.v[alpha].row(s).transpose()) * nu;
        if (has_psi) curv -= g.sff[l] * (spinor_pairing(sp, alpha) * (g.sff[l] * d));
      }
    }
    const double e2 = std::exp(-2.0 * u(s));
    Vector row = e2 * (out.row(s).transpose() + atrace) + curv + vterm;
    if (has_psi) row += (1.0 / 12.0) * std::exp(2.0 * u(s)) * curvature_gradient(m, g, sp);
    out.row(s) = row.transpose();
  }
  out += weighted_divergence(p.v, u, grid);
  return out;
}

VectorSpinorField residual_psi(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                               const ConformalFactor& u, const TargetManifold& m, const Grid& grid) {
  const Prepared p = prepare(phi, psi, chi, u, m, grid);
  VectorSpinorField out = twisted_dirac(psi, phi, u, p.geo, grid);
  for (int s = 0; s < grid.size(); ++s) {
    const SiteGeometry& g = p.geo[s];
    const SiteSpinors sp = site_spinors(psi, s);
    const SpinorTangent<double> chi_s = site_gravitino(chi, s);
    const SpinorTangent<double> gam = gravitino_gamma(chi_s);
    const double eu = std::exp(u(s));
    const double q = q_project<double>(chi_s).squaredNorm();
    SiteSpinors r = site_spinors(out, s) - eu * q * sp - (eu / 3.0) * curvature_spinor(sp, g.sff, g.tangent);
    for (int beta = 0; beta < 2; ++beta) r += (1.0 / eu) * gam.col(beta) * p.dphi[beta].row(s);
    set_site_spinors(out, s, r * g.tangent);
  }
  return out;
}

ELResidual residuals(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                     const ConformalFactor& u, const TargetManifold& m, const Grid& grid) {
  return {residual_phi(phi, psi, chi, u, m, grid), residual_psi(phi, psi, chi, u, m, grid)};
}

AntisymPotentials potentials(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                             const ConformalFactor& u, const TargetManifold& m, const Grid& grid) {
  const Prepared p = prepare(phi, psi, chi, u, m, grid);
  const int k = static_cast<int>(phi.cols());
  AntisymPotentials out;
  out.omega.resize(grid.size());
  out.F.resize(grid.size());
  out.T.resize(grid.size());
  for (int s = 0; s < grid.size(); ++s) {
    const SiteGeometry& g = p.geo[s];
    const SiteSpinors sp = site_spinors(psi, s);
    const double eu = std::exp(u(s));
    for (int alpha = 0; alpha < 2; ++alpha) {
      // frame quantities: e_α(φ′) = e^{-u}∂_α φ′, spinor metric e^{u}⟨·,·⟩
      const Vector e_phi = p.dphi[alpha].row(s).transpose() / eu;
      const Vector w = eu * p.v[alpha].row(s).transpose();
      const Matrix b = eu * spinor_pairing(sp, alpha);
      Matrix om = Matrix::Zero(k, k);
      Matrix f = Matrix::Zero(k, k);
      Matrix t = Matrix::Zero(k, k);
      for (int l = 0; l < m.codim(); ++l) {
        const Vector nu = g.normals.col(l);
        const Vector me = g.dnu[l].transpose() * e_phi;
        om += me * nu.transpose() - nu * me.transpose();
        f += g.sff[l] * b * g.sff[l];
        const Vector mw = g.dnu[l] * w;
        t -= nu * mw.transpose() - mw * nu.transpose();
      }
      out.omega[s][alpha] = om;
      out.F[s][alpha] = f;
      out.T[s][alpha] = t;
    }
  }
  return out;
}

MapField assemble_from_potentials(const AntisymPotentials& pot, const MapField& phi, const VectorSpinorField& psi,
                                  const GravitinoField& chi, const ConformalFactor& u, const TargetManifold& m,
                                  const Grid& grid) {
  const Prepared p = prepare(phi, psi, chi, u, m, grid);
  if (static_cast<int>(pot.omega.size()) != grid.size()) throw std::invalid_argument("potentials do not match grid");
  MapField out = div_grad(phi, grid);
  for (int s = 0; s < grid.size(); ++s) {
    const double eu = std::exp(u(s));
    Vector row = out.row(s).transpose() / (eu * eu);
    for (int alpha = 0; alpha < 2; ++alpha) {
      const Vector e_phi = p.dphi[alpha].row(s).transpose() / eu;
      row -= (pot.omega[s][alpha] + pot.F[s][alpha] + pot.T[s][alpha]) * e_phi;
    }
    const SiteSpinors sp = site_spinors(psi, s);
    if (sp.squaredNorm() > 0.0) row += (1.0 / 12.0) * eu * eu * curvature_gradient(m, p.geo[s], sp);
    out.row(s) = row.transpose();
  }
  out += weighted_divergence(p.v, u, grid);
  return out;
}

ActionGradient action_gradient_fd(const MapField& phi, const VectorSpinorField& psi, const ConformalFactor& u,
                                  const GravitinoField& chi, const TargetManifold& m, const Grid& grid,
                                  double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  require_on_manifold(m, phi);
  const auto geo = site_geometry(m, phi);
  require_tangent(psi, geo);
  const int k = static_cast<int>(phi.cols());

  MapField phi_w = phi;
  VectorSpinorField psi_w = psi;
  std::vector<std::vector<Matrix>> sff(geo.size());
  for (std::size_t s = 0; s < geo.size(); ++s) sff[s] = geo[s].sff;

  // densities of the site and its four neighbours, summed in a fixed order
  auto local = [&](int i) {
    const int sites[5] = {i, grid.shift(i, 0, 1), grid.shift(i, 0, -1), grid.shift(i, 1, 1), grid.shift(i, 1, -1)};
    double acc = 0.0;
    for (int j : sites) {
      const auto d = site_density(j, phi_w, psi_w, chi, u, sff[j], grid);
      acc += d[0] + d[1] + d[2] + d[3] + d[4];
    }
    return acc;
  };

  ActionGradient out{MapField::Zero(phi.rows(), k), VectorSpinorField::Zero(psi.rows(), psi.cols())};
  for (int i = 0; i < grid.size(); ++i) {
    const Vector p0 = phi.row(i).transpose();
    const SiteSpinors sp0 = site_spinors(psi, i);
    const double eps_phi = step * std::max(1.0, p0.norm());

    Vector g_phi(k);
    for (int e = 0; e < k; ++e) {
      double val[2];
      for (int side = 0; side < 2; ++side) {
        Vector q = p0;
        q(e) += side == 0 ? eps_phi : -eps_phi;
        q = m.project(q);
        phi_w.row(i) = q.transpose();
        set_site_spinors(psi_w, i, sp0 * m.tangent_projector(q));
        sff[i] = m.sff(q);
        val[side] = local(i);
      }
      g_phi(e) = (val[0] - val[1]) / (2.0 * eps_phi);
    }
    phi_w.row(i) = phi.row(i);
    psi_w.row(i) = psi.row(i);
    sff[i] = geo[i].sff;
    out.phi.row(i) = (geo[i].tangent * g_phi).transpose();

    const double eps_psi = step * std::max(1.0, sp0.norm());
    SiteSpinors g_psi(4, k);
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < 4; ++c) {
        double val[2];
        for (int side = 0; side < 2; ++side) {
          SiteSpinors sp = sp0;
          sp(c, a) += side == 0 ? eps_psi : -eps_psi;
          set_site_spinors(psi_w, i, sp * geo[i].tangent);
          val[side] = local(i);
        }
        g_psi(c, a) = (val[0] - val[1]) / (2.0 * eps_psi);
      }
    psi_w.row(i) = psi.row(i);
    set_site_spinors(out.psi, i, g_psi * geo[i].tangent);
  }
  return out;
}

ELResidual gradient_as_residual(const ActionGradient& g, const ConformalFactor& u, const Grid& grid) {
  ELResidual r{g.phi, g.psi};
  const double area = grid.cell_area();
  for (int s = 0; s < grid.size(); ++s) {
    r.r_phi.row(s) *= -1.0 / (2.0 * std::exp(2.0 * u(s)) * area);
    r.r_psi.row(s) *= 1.0 / (2.0 * std::exp(3.0 * u(s)) * area);
  }
  return r;
}

NormPair field_norms(const FieldMatrix& f, const Grid& grid) {
  return {std::sqrt(f.squaredNorm() * grid.cell_area()), f.size() ? f.cwiseAbs().maxCoeff() : 0.0};
}

MapField tangent_part(const MapField& r, const MapField& phi, const TargetManifold& m) {
  MapField out(r.rows(), r.cols());
  for (int s = 0; s < r.rows(); ++s)
    out.row(s) = (m.tangent_projector(phi.row(s).transpose()) * r.row(s).transpose()).transpose();
  return out;
}

}  // namespace gsm
