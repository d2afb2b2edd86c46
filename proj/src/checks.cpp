#include "gsm/checks.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace gsm {

nlohmann::json to_json(const CheckResult& r) {
  return {{"suite", r.suite}, {"name", r.name},           {"passed", r.passed},
          {"value", r.value}, {"tolerance", r.tolerance}, {"detail", r.detail}};
}

nlohmann::json check_report(const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    checks.push_back(to_json(r));
    all = all && r.passed;
  }
  return {{"passed", all}, {"count", results.size()}, {"checks", checks}};
}

namespace {

CheckResult at_most(std::string suite, std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(suite), std::move(name), std::isfinite(value) && value <= tol, value, tol, std::move(detail)};
}

// keeps the worst defect per identity, in insertion order
class Defects {
 public:
  void add(const std::string& name, double v) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_[name] = order_.size();
      order_.push_back({name, v});
    } else {
      order_[it->second].second = std::max(order_[it->second].second, v);
    }
  }
  std::vector<CheckResult> results(const std::string& suite, double tol) const {
    std::vector<CheckResult> out;
    for (const auto& [n, v] : order_) out.push_back(at_most(suite, n, v, tol));
    return out;
  }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, double>> order_;
};

using S4 = Spinor<double>;
using V2 = TangentVector2<double>;
using ST = SpinorTangent<double>;

S4 random_spinor(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return S4(n(rng), n(rng), n(rng), n(rng));
}

V2 random_vec2(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return V2(n(rng), n(rng));
}

ST random_st(Rng& rng) {
  ST c;
  c.col(0) = random_spinor(rng);
  c.col(1) = random_spinor(rng);
  return c;
}

void fiber_identities(Defects& d, const S4& s, const S4& t, const V2& v, const V2& w, const ST& chi, const ST& chi2) {
  using Q = Quaternionic;
  d.add("clifford_relation", (clifford_mul(v, clifford_mul(w, s)) + clifford_mul(w, clifford_mul(v, s)) +
                              2.0 * v.dot(w) * s).cwiseAbs().maxCoeff());
  d.add("clifford_skew", std::abs(spinor_inner(clifford_mul(v, s), t) + spinor_inner(s, clifford_mul(v, t))));
  d.add("inner_symmetric", std::abs(spinor_inner(s, t) - spinor_inner(t, s)));
  d.add("volume_squared", (volume_mul(volume_mul(s)) + s).cwiseAbs().maxCoeff());
  d.add("volume_commutes_I", (volume_mul(quaternionic_structure(Q::I, s)) -
                              quaternionic_structure(Q::I, volume_mul(s))).cwiseAbs().maxCoeff());
  for (Q q : {Q::I, Q::J, Q::K})
    d.add("quaternion_squares", (quaternionic_structure(q, quaternionic_structure(q, s)) + s).cwiseAbs().maxCoeff());
  d.add("quaternion_I_eq_JK", (quaternionic_structure(Q::I, s) -
                               quaternionic_structure(Q::J, quaternionic_structure(Q::K, s))).cwiseAbs().maxCoeff());
  const std::pair<Q, Q> pairs[] = {{Q::I, Q::J}, {Q::J, Q::K}, {Q::K, Q::I}};
  for (const auto& [a, b] : pairs)
    d.add("quaternion_anticommute", (quaternionic_structure(a, quaternionic_structure(b, s)) +
                                     quaternionic_structure(b, quaternionic_structure(a, s))).cwiseAbs().maxCoeff());
  for (Q q : {Q::I, Q::J, Q::K})
    for (int alpha = 0; alpha < 2; ++alpha) {
      V2 e = V2::Zero();
      e(alpha) = 1.0;
      d.add("quaternion_commutes_clifford", (quaternionic_structure(q, clifford_mul(e, s)) -
                                             clifford_mul(e, quaternionic_structure(q, s))).cwiseAbs().maxCoeff());
    }
  d.add("gamma_sigma_identity", (gamma_contract<double>(sigma_lift<double>(s)) - s).cwiseAbs().maxCoeff());
  const ST p = p_project<double>(chi);
  const ST q = q_project<double>(chi);
  d.add("p_plus_q", (p + q - chi).cwiseAbs().maxCoeff());
  d.add("p_idempotent", (p_project<double>(p) - p).cwiseAbs().maxCoeff());
  d.add("q_idempotent", (q_project<double>(q) - q).cwiseAbs().maxCoeff());
  d.add("pq_zero", std::max(p_project<double>(q).cwiseAbs().maxCoeff(), q_project<double>(p).cwiseAbs().maxCoeff()));
  d.add("gamma_q_zero", gamma_contract<double>(q).cwiseAbs().maxCoeff());
  d.add("q_sigma_zero", q_project<double>(sigma_lift<double>(s)).cwiseAbs().maxCoeff());
  d.add("pythagoras", std::abs(p.squaredNorm() + q.squaredNorm() - chi.squaredNorm()));
  d.add("q_norm_identity", std::abs(q_norm_squared<double>(chi) - q.squaredNorm()));
  d.add("p_q_orthogonal", std::abs(spinor_tangent_inner<double>(p_project<double>(chi), q_project<double>(chi2))));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

std::vector<CheckResult> clifford_suite(Rng& rng, int random_count) {
  Defects d;
  // exhaustive over basis spinors and frame vectors
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const S4 s = S4::Unit(i);
          const S4 t = S4::Unit(j);
          const V2 v = V2::Unit(a);
          const V2 w = V2::Unit(b);
          ST chi = ST::Zero();
          chi.col(a) = s;
          ST chi2 = ST::Zero();
          chi2.col(b) = t;
          fiber_identities(d, s, t, v, w, chi, chi2);
        }
  for (int k = 0; k < random_count; ++k) {
    const S4 s = random_spinor(rng);
    const S4 t = random_spinor(rng);
    const V2 v = random_vec2(rng);
    const V2 w = random_vec2(rng);
    const ST chi = random_st(rng);
    const ST chi2 = random_st(rng);
    fiber_identities(d, s, t, v, w, chi, chi2);
  }
  auto out = d.results("clifford", 1e-12);
  // frozen golden value: γ(e₁)(1,0,0,0) = (0,0,1,0)
  const S4 g = clifford_mul<double>(V2(1.0, 0.0), S4(1.0, 0.0, 0.0, 0.0));
  out.push_back(at_most("clifford", "golden_gamma_e1", (g - S4(0.0, 0.0, 1.0, 0.0)).cwiseAbs().maxCoeff(), 0.0));
  return out;
}

std::vector<CheckResult> dirac_suite(const Grid& grid, Rng& rng) {
  std::vector<CheckResult> out;
  const double area = grid.cell_area();
  const FieldMatrix s = white_noise(grid.size(), 4, rng);
  const FieldMatrix t = white_noise(grid.size(), 4, rng);
  const FieldMatrix ds = dirac_flat(s, grid);
  const FieldMatrix dt = dirac_flat(t, grid);
  const double a = (s.array() * dt.array()).sum() * area;
  const double b = (ds.array() * t.array()).sum() * area;
  const double scale = (s.array() * dt.array()).abs().sum() * area;
  out.push_back(at_most("dirac", "symmetry", std::abs(a - b) / std::max(1.0, scale), 1e-12));

  const FieldMatrix c = FieldMatrix::Constant(grid.size(), 4, 0.7);
  out.push_back(at_most("dirac", "annihilates_constants", dirac_flat(c, grid).cwiseAbs().maxCoeff(), 1e-12));

  const FieldMatrix s2 = white_noise(grid.size(), 2, rng);
  const FieldMatrix d2 = dirac_sigma(s2, grid);
  const double plus = (s2.array() * d2.array()).sum() * area;
  const double plus_scale = (s2.array() * d2.array()).abs().sum() * area;
  out.push_back(at_most("dirac", "cl20_action_vanishes", std::abs(plus) / std::max(1.0, plus_scale), 1e-12));

  const double minus = (s.array() * ds.array()).sum() * area;
  const double minus_scale = (s.array() * ds.array()).abs().sum() * area;
  CheckResult nz{"dirac", "cl02_action_nonzero", std::abs(minus) > 1e-6 * minus_scale, std::abs(minus),
                 1e-6 * minus_scale, "passes when |Σ⟨s,Ds⟩h²| exceeds the tolerance"};
  out.push_back(nz);
  return out;
}

RandomData draw_random_data(const Grid& grid, const TargetManifold& m, Rng& rng, double map_amp, double psi_amp,
                       double chi_amp, double u_amp, int max_mode) {
  RandomData d;
  d.phi = random_smooth_map(grid, m, rng, map_amp, max_mode);
  d.psi = random_tangent_spinors(d.phi, m, grid, rng, psi_amp, max_mode);
  d.chi = random_gravitino(grid, rng, chi_amp, max_mode);
  d.u = smooth_scalar(grid, rng, u_amp, max_mode);
  return d;
}

std::vector<CheckResult> symmetry_suite(const Grid& grid, const TargetManifold& m, Rng& rng) {
  std::vector<CheckResult> out;
  const RandomData d = draw_random_data(grid, m, rng);
  const ActionBreakdown base = total_action(d.phi, d.psi, d.u, d.chi, m, grid);
  const char* names[5] = {"I", "II", "III", "IV", "V"};

  const SpinorField s = white_noise(grid.size(), 4, rng);
  const GravitinoField chi_w = d.chi + field_sigma_lift(s);
  const ActionBreakdown weyl = total_action(d.phi, d.psi, d.u, chi_w, m, grid);
  const ActionBreakdown z2 = total_action(d.phi, (-d.psi).eval(), d.u, (-d.chi).eval(), m, grid);
  const auto b = base.terms();
  const auto w = weyl.terms();
  const auto z = z2.terms();
  for (int t = 0; t < 5; ++t) {
    out.push_back(at_most("symmetry", std::string("super_weyl_") + names[t], rel(b[t], w[t]), 1e-12));
    out.push_back(at_most("symmetry", std::string("z2_") + names[t], rel(b[t], z[t]), 1e-12));
  }
  out.push_back(at_most("symmetry", "super_weyl_total", rel(base.total, weyl.total), 1e-12));
  out.push_back(at_most("symmetry", "z2_total", rel(base.total, z2.total), 1e-12));

  const GravitinoField chi_r = white_noise(grid.size(), 8, rng);
  out.push_back(at_most("projector", "field_p_plus_q",
                        (field_p_project(chi_r) + field_q_project(chi_r) - chi_r).cwiseAbs().maxCoeff(), 1e-12));
  out.push_back(at_most("projector", "field_q_of_sigma", field_q_project(field_sigma_lift(s)).cwiseAbs().maxCoeff(),
                        1e-12));
  const VectorSpinorField raw = white_noise(grid.size(), 4 * m.ambient_dim(), rng);
  const VectorSpinorField tp = tangency_project(raw, d.phi, m);
  const auto geo = site_geometry(m, d.phi);
  out.push_back(at_most("projector", "tangency_after_projection", tangency_defect(tp, geo), 1e-12));
  out.push_back(at_most("projector", "tangency_idempotent",
                        (tangency_project(tp, geo) - tp).cwiseAbs().maxCoeff(), 1e-12));
  return out;
}

double curvature_scalar_bruteforce(const TargetManifold& m, const Vector& p, const SiteSpinors& sp) {
  const int k = m.ambient_dim();
  const Matrix proj = m.tangent_projector(p);
  const Matrix g = sp.transpose() * sp;
  // Rm(i,j,k,l) = ⟨R(e_k, e_l) e_j, e_i⟩ with e_a the projected ambient basis
  double r = 0.0;
  for (int kk = 0; kk < k; ++kk)
    for (int ll = 0; ll < k; ++ll)
      for (int jj = 0; jj < k; ++jj) {
        const Vector rv = curvature_operator(m, p, proj.col(kk), proj.col(ll), proj.col(jj));
        for (int ii = 0; ii < k; ++ii) r += proj.col(ii).dot(rv) * g(ii, kk) * g(jj, ll);
      }
  return r;
}

std::vector<CheckResult> gauss_suite(Rng& rng, int triples) {
  std::vector<CheckResult> out;
  Sphere s2(3);
  std::normal_distribution<double> n(0.0, 1.0);
  auto rvec = [&](int k) {
    Vector v(k);
    for (int i = 0; i < k; ++i) v(i) = n(rng);
    return v;
  };
  double worst = 0.0;
  for (int t = 0; t < triples; ++t) {
    const Vector p = s2.project(rvec(3));
    const Matrix proj = s2.tangent_projector(p);
    const Vector x = proj * rvec(3);
    const Vector y = proj * rvec(3);
    const Vector z = proj * rvec(3);
    const Vector expect = y.dot(z) * x - x.dot(z) * y;
    worst = std::max(worst, (curvature_operator(s2, p, x, y, z) - expect).cwiseAbs().maxCoeff());
  }
  out.push_back(at_most("gauss", "sphere_constant_curvature", worst, 1e-10));

  auto ellipsoid = make_ellipsoid((Vector(3) << 1.0, 1.3, 0.8).finished());
  Sphere s3(4, 1.5);
  const TargetManifold* targets[] = {&s2, &s3, ellipsoid.get()};
  const char* names[] = {"curvature_quadruple_loop_S2", "curvature_quadruple_loop_S3", "curvature_quadruple_loop_ellipsoid"};
  for (int i = 0; i < 3; ++i) {
    const TargetManifold& m = *targets[i];
    double err = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Vector p = m.project(rvec(m.ambient_dim()));
      SiteSpinors sp(4, m.ambient_dim());
      for (int c = 0; c < 4; ++c) sp.row(c) = rvec(m.ambient_dim()).transpose();
      sp = sp * m.tangent_projector(p);
      const double fast = curvature_scalar(sp, m.sff(p));
      const double slow = curvature_scalar_bruteforce(m, p, sp);
      err = std::max(err, rel(fast, slow));
    }
    out.push_back(at_most("gauss", names[i], err, 1e-10));
  }
  return out;
}

std::vector<CheckResult> potential_suite(const Grid& grid, const TargetManifold& m, Rng& rng) {
  std::vector<CheckResult> out;
  const RandomData d = draw_random_data(grid, m, rng);
  const AntisymPotentials pot = potentials(d.phi, d.psi, d.chi, d.u, m, grid);
  double w = 0.0, f = 0.0, t = 0.0;
  for (int s = 0; s < grid.size(); ++s)
    for (int a = 0; a < 2; ++a) {
      w = std::max(w, (pot.omega[s][a] + pot.omega[s][a].transpose()).cwiseAbs().maxCoeff());
      f = std::max(f, (pot.F[s][a] + pot.F[s][a].transpose()).cwiseAbs().maxCoeff());
      t = std::max(t, (pot.T[s][a] + pot.T[s][a].transpose()).cwiseAbs().maxCoeff());
    }
  out.push_back(at_most("potentials", "omega_antisymmetric", w, 1e-12));
  out.push_back(at_most("potentials", "F_antisymmetric", f, 1e-12));
  out.push_back(at_most("potentials", "T_antisymmetric", t, 1e-12));
  const MapField direct = residual_phi(d.phi, d.psi, d.chi, d.u, m, grid);
  const MapField assembled = assemble_from_potentials(pot, d.phi, d.psi, d.chi, d.u, m, grid);
  out.push_back(at_most("potentials", "assembly_matches_residual", (direct - assembled).cwiseAbs().maxCoeff(), 1e-10));
  return out;
}

}  // namespace gsm
