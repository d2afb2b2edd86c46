#include "gsm/action.hpp"

#include <cmath>

namespace gsm {

namespace {

Eigen::Vector4d site_spinor(const VectorSpinorField& psi, int site, int a) {
  return psi.row(site).segment<4>(4 * a).transpose();
}

Matrix gram(const SiteSpinors& sp) { return sp.transpose() * sp; }

void check_shapes(const Grid& grid, const MapField* phi, const VectorSpinorField* psi, const GravitinoField* chi,
                  const ConformalFactor* u) {
  const Eigen::Index n = grid.size();
  if (phi && phi->rows() != n) throw std::invalid_argument("map field does not match the grid");
  if (psi && psi->rows() != n) throw std::invalid_argument("spinor field does not match the grid");
  if (phi && psi && psi->cols() != 4 * phi->cols()) throw std::invalid_argument("spinor field needs 4K columns");
  if (chi && (chi->rows() != n || chi->cols() != 8)) throw std::invalid_argument("gravitino field must be N x 8");
  if (u && u->size() != n) throw std::invalid_argument("conformal factor does not match the grid");
}

double dens_dirichlet(int j, const MapField& phi, const Grid& grid) {
  double acc = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const double inv = 1.0 / (2.0 * grid.h(alpha));
    acc += ((phi.row(grid.shift(j, alpha, 1)) - phi.row(grid.shift(j, alpha, -1))) * inv).squaredNorm();
  }
  return acc * grid.cell_area();
}

// e^{3u}⟨ψ, e^{-2u}D(e^{u}ψ)⟩ h² at site j; the normal part of Dψ drops out against tangent ψ
double dens_dirac(int j, const VectorSpinorField& psi, const ConformalFactor& u, const Grid& grid) {
  const int k = static_cast<int>(psi.cols()) / 4;
  double acc = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const Eigen::Matrix4d g = clifford::gamma<double>(alpha);
    const int jp = grid.shift(j, alpha, 1);
    const int jm = grid.shift(j, alpha, -1);
    const double inv = 1.0 / (2.0 * grid.h(alpha));
    const double ep = std::exp(u(jp));
    const double em = std::exp(u(jm));
    for (int a = 0; a < k; ++a) {
      const Eigen::Vector4d d = (ep * site_spinor(psi, jp, a) - em * site_spinor(psi, jm, a)) * inv;
      acc += site_spinor(psi, j, a).dot(g * d);
    }
  }
  return std::exp(u(j)) * grid.cell_area() * acc;
}

double dens_gravitino(int j, const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                      const ConformalFactor& u, const Grid& grid) {
  const SpinorTangent<double> gam = gravitino_gamma(site_gravitino(chi, j));
  const int k = static_cast<int>(phi.cols());
  double acc = 0.0;
  for (int beta = 0; beta < 2; ++beta) {
    const double inv = 1.0 / (2.0 * grid.h(beta));
    for (int b = 0; b < k; ++b) {
      const double dphi = (phi(grid.shift(j, beta, 1), b) - phi(grid.shift(j, beta, -1), b)) * inv;
      acc += gam.col(beta).dot(site_spinor(psi, j, b)) * dphi;
    }
  }
  return 2.0 * std::exp(2.0 * u(j)) * grid.cell_area() * acc;
}

double dens_qchi(int j, const VectorSpinorField& psi, const GravitinoField& chi, const ConformalFactor& u,
                 const Grid& grid) {
  const double q = q_project<double>(site_gravitino(chi, j)).squaredNorm();
  return -std::exp(4.0 * u(j)) * grid.cell_area() * q * psi.row(j).squaredNorm();
}

double dens_curvature(int j, const VectorSpinorField& psi, const ConformalFactor& u, const std::vector<Matrix>& sff,
                      const Grid& grid) {
  return -(1.0 / 6.0) * std::exp(4.0 * u(j)) * grid.cell_area() * curvature_scalar(site_spinors(psi, j), sff);
}

}  // namespace

SpinorTangent<double> gravitino_gamma(const SpinorTangent<double>& chi) { return -2.0 * q_project<double>(chi); }

double curvature_scalar(const SiteSpinors& sp, const std::vector<Matrix>& sff) {
  const Matrix g = gram(sp);
  double r = 0.0;
  for (const Matrix& s : sff) {
    const Matrix sg = s * g;
    const double t = sg.trace();
    r += t * t - (sg * sg).trace();
  }
  return r;
}

SiteSpinors curvature_spinor(const SiteSpinors& sp, const std::vector<Matrix>& sff, const Matrix& tangent) {
  const Matrix g = gram(sp);
  const Matrix rows = sp.transpose();  // K × 4
  Matrix out = Matrix::Zero(rows.rows(), 4);
  for (const Matrix& s : sff) {
    const Matrix sg = s * g;
    out += sg.trace() * (s * rows) - sg * (s * rows);
  }
  return (tangent * out).transpose();
}

Vector curvature_gradient(const TargetManifold& m, const SiteGeometry& geo, const SiteSpinors& sp) {
  const int k = m.ambient_dim();
  Vector out = Vector::Zero(k);
  if (sp.squaredNorm() == 0.0) return out;
  const Matrix g = gram(sp);
  std::vector<Matrix> sg;
  std::vector<double> tr;
  for (const Matrix& s : geo.sff) {
    sg.push_back(s * g);
    tr.push_back(sg.back().trace());
  }
  for (int e = 0; e < k; ++e) {
    const Vector z = geo.tangent.col(e);
    if (z.norm() < 1e-14) continue;
    const std::vector<Matrix> ds = m.nabla_sff(geo.point, z);
    double acc = 0.0;
    for (std::size_t l = 0; l < ds.size(); ++l) {
      const Matrix dsg = ds[l] * g;
      acc += dsg.trace() * tr[l] - (dsg * sg[l]).trace();
    }
    out(e) = 2.0 * acc;
  }
  return out;
}

std::array<double, 5> site_density(int site, const MapField& phi, const VectorSpinorField& psi,
                                   const GravitinoField& chi, const ConformalFactor& u,
                                   const std::vector<Matrix>& sff, const Grid& grid) {
  return {dens_dirichlet(site, phi, grid), dens_dirac(site, psi, u, grid),
          dens_gravitino(site, phi, psi, chi, u, grid), dens_qchi(site, psi, chi, u, grid),
          dens_curvature(site, psi, u, sff, grid)};
}

double term_dirichlet(const MapField& phi, const ConformalFactor& u, const Grid& grid) {
  check_shapes(grid, &phi, nullptr, nullptr, &u);
  double acc = 0.0;
  for (int j = 0; j < grid.size(); ++j) acc += dens_dirichlet(j, phi, grid);
  return acc;
}

double term_dirac(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                  const TargetManifold& m, const Grid& grid) {
  check_shapes(grid, &phi, &psi, nullptr, &u);
  const VectorSpinorField d = twisted_dirac(psi, phi, u, m, grid);
  double acc = 0.0;
  for (int j = 0; j < grid.size(); ++j)
    acc += std::exp(3.0 * u(j)) * grid.cell_area() * psi.row(j).dot(d.row(j));
  return acc;
}

double term_gravitino(const MapField& phi, const VectorSpinorField& psi, const GravitinoField& chi,
                      const ConformalFactor& u, const Grid& grid) {
  check_shapes(grid, &phi, &psi, &chi, &u);
  double acc = 0.0;
  for (int j = 0; j < grid.size(); ++j) acc += dens_gravitino(j, phi, psi, chi, u, grid);
  return acc;
}

double term_qchi(const GravitinoField& chi, const VectorSpinorField& psi, const ConformalFactor& u, const Grid& grid) {
  check_shapes(grid, nullptr, &psi, &chi, &u);
  double acc = 0.0;
  for (int j = 0; j < grid.size(); ++j) acc += dens_qchi(j, psi, chi, u, grid);
  return acc;
}

double term_curvature(const VectorSpinorField& psi, const MapField& phi, const ConformalFactor& u,
                      const TargetManifold& m, const Grid& grid) {
  check_shapes(grid, &phi, &psi, nullptr, &u);
  require_on_manifold(m, phi);
  const auto geo = site_geometry(m, phi);
  require_tangent(psi, geo);
  double acc = 0.0;
  for (int j = 0; j < grid.size(); ++j) acc += dens_curvature(j, psi, u, geo[j].sff, grid);
  return acc;
}

VectorSpinorField sr_of(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m) {
  require_on_manifold(m, phi);
  const auto geo = site_geometry(m, phi);
  require_tangent(psi, geo);
  VectorSpinorField out(psi.rows(), psi.cols());
  for (int j = 0; j < psi.rows(); ++j)
    set_site_spinors(out, j, curvature_spinor(site_spinors(psi, j), geo[j].sff, geo[j].tangent));
  return out;
}

MapField snr_of(const VectorSpinorField& psi, const MapField& phi, const TargetManifold& m) {
  require_on_manifold(m, phi);
  const auto geo = site_geometry(m, phi);
  require_tangent(psi, geo);
  MapField out(phi.rows(), phi.cols());
  for (int j = 0; j < phi.rows(); ++j) out.row(j) = curvature_gradient(m, geo[j], site_spinors(psi, j)).transpose();
  return out;
}

ActionBreakdown total_action(const MapField& phi, const VectorSpinorField& psi, const ConformalFactor& u,
                             const GravitinoField& chi, const TargetManifold& m, const Grid& grid) {
  check_shapes(grid, &phi, &psi, &chi, &u);
  require_on_manifold(m, phi);
  const auto geo = site_geometry(m, phi);
  require_tangent(psi, geo);
  std::array<double, 5> acc{};
  for (int j = 0; j < grid.size(); ++j) {
    const auto d = site_density(j, phi, psi, chi, u, geo[j].sff, grid);
    for (int t = 0; t < 5; ++t) acc[t] += d[t];
  }
  ActionBreakdown out;
  out.dirichlet = acc[0];
  out.dirac = acc[1];
  out.gravitino = acc[2];
  out.qchi = acc[3];
  out.curvature = acc[4];
  out.total = acc[0] + acc[1] + acc[2] + acc[3] + acc[4];
  return out;
}

}  // namespace gsm
