#include "gsm/target.hpp"

#include <cmath>
#include <sstream>

namespace gsm {

Matrix TargetManifold::tangent_projector(const Vector& p) const {
  const Matrix nu = normal_frame(p);
  return Matrix::Identity(ambient_dim(), ambient_dim()) - nu * nu.transpose();
}

std::vector<Matrix> TargetManifold::sff(const Vector& p) const {
  const Matrix proj = tangent_projector(p);
  std::vector<Matrix> out;
  for (const Matrix& m : normal_frame_derivative(p)) {
    Matrix s = -proj * m * proj;
    out.push_back(0.5 * (s + s.transpose()));
  }
  return out;
}

void TargetManifold::require_on_manifold(const Vector& p) const {
  const double defect = manifold_defect(p);
  if (!(defect <= constraint_tolerance(p.norm()))) {
    std::ostringstream msg;
    msg << "point is off the target " << name() << " (distance " << defect << ")";
    throw ConstraintError(msg.str());
  }
}

std::vector<Matrix> TargetManifold::nabla_sff(const Vector& p, const Vector& z) const {
  const int k = ambient_dim();
  const int l_count = codim();
  std::vector<Matrix> out(l_count, Matrix::Zero(k, k));
  const double zn = z.norm();
  if (zn == 0.0) return out;

  // A as a normal-vector-valued bilinear form in ambient coordinates, one K×K slab per
  // output component c: T[c](x, y) = Σ_m (P S_m P)(x, y) ν_m^c.
  auto slabs = [&](const Vector& q) {
    const Matrix nu = normal_frame(q);
    const std::vector<Matrix> s = sff(q);
    std::vector<Matrix> t(k, Matrix::Zero(k, k));
    for (int c = 0; c < k; ++c)
      for (int m = 0; m < l_count; ++m) t[c] += s[m] * nu(c, m);
    return t;
  };

  const double eps = 10.0 * fd_step_ * (1.0 + p.norm()) / zn;
  const Vector qp = project(p + eps * z);
  const Vector qm = project(p - eps * z);
  const std::vector<Matrix> tp = slabs(qp);
  const std::vector<Matrix> tm = slabs(qm);
  const Matrix nu = normal_frame(p);
  const Matrix proj = tangent_projector(p);
  for (int l = 0; l < l_count; ++l) {
    Matrix d = Matrix::Zero(k, k);
    for (int c = 0; c < k; ++c) d += nu(c, l) * (tp[c] - tm[c]) / (2.0 * eps);
    d = proj * d * proj;
    out[l] = 0.5 * (d + d.transpose());
  }
  return out;
}

// ---------------------------------------------------------------------------

Sphere::Sphere(int ambient_dim, double radius) : dim_(ambient_dim), radius_(radius) {
  if (ambient_dim < 2) throw std::invalid_argument("sphere needs ambient dimension >= 2");
  if (!(radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
}

std::string Sphere::name() const {
  std::ostringstream s;
  s << "S^" << dim_ - 1 << "(r=" << radius_ << ")";
  return s.str();
}

Vector Sphere::project(const Vector& p) const {
  const double n = p.norm();
  if (n == 0.0) throw ConstraintError("cannot project the origin onto a sphere");
  return (radius_ / n) * p;
}

Matrix Sphere::normal_frame(const Vector& p) const {
  const double n = p.norm();
  if (n == 0.0) throw ConstraintError("normal frame undefined at the origin");
  return p / n;
}

std::vector<Matrix> Sphere::normal_frame_derivative(const Vector& p) const {
  // ν(u) = u / |u|  ⇒  ∂ν^b/∂u^a = (δ_ab - ν_a ν_b) / |u|
  const double n = p.norm();
  const Vector nu = p / n;
  return {(Matrix::Identity(dim_, dim_) - nu * nu.transpose()) / n};
}

std::vector<Matrix> Sphere::nabla_sff(const Vector&, const Vector&) const {
  return {Matrix::Zero(dim_, dim_)};
}

// ---------------------------------------------------------------------------

EmbeddedTarget::EmbeddedTarget(std::string name, int ambient_dim, int codim, ProjectFn project, FrameFn frame)
    : name_(std::move(name)), dim_(ambient_dim), codim_(codim), project_(std::move(project)), frame_(std::move(frame)) {
  if (codim_ < 1 || codim_ >= dim_) throw std::invalid_argument("codimension must lie in [1, K)");
}

Matrix EmbeddedTarget::normal_frame(const Vector& p) const { return frame_(project_(p)); }

std::vector<Matrix> EmbeddedTarget::normal_frame_derivative(const Vector& p) const {
  const double eps = fd_step_ * (1.0 + p.norm());
  std::vector<Matrix> out(codim_, Matrix::Zero(dim_, dim_));
  for (int a = 0; a < dim_; ++a) {
    Vector dp = p;
    Vector dm = p;
    dp(a) += eps;
    dm(a) -= eps;
    const Matrix diff = (normal_frame(dp) - normal_frame(dm)) / (2.0 * eps);
    for (int l = 0; l < codim_; ++l) out[l].row(a) = diff.col(l).transpose();
  }
  return out;
}

std::unique_ptr<EmbeddedTarget> make_ellipsoid(const Vector& semi_axes) {
  const int k = static_cast<int>(semi_axes.size());
  if (k < 2 || (semi_axes.array() <= 0.0).any()) throw std::invalid_argument("ellipsoid needs positive semi-axes");
  const Vector a2 = semi_axes.array().square();

  // Nearest point: x_i = p_i a_i² / (a_i² + t) with Σ x_i²/a_i² = 1, solved by Newton in t.
  auto project = [a2](const Vector& p) -> Vector {
    auto residual = [&](double t, double& deriv) {
      double f = -1.0;
      deriv = 0.0;
      for (int i = 0; i < p.size(); ++i) {
        const double d = a2(i) + t;
        f += a2(i) * p(i) * p(i) / (d * d);
        deriv -= 2.0 * a2(i) * p(i) * p(i) / (d * d * d);
      }
      return f;
    };
    double t = 0.0;
    for (int it = 0; it < 100; ++it) {
      double deriv = 0.0;
      const double f = residual(t, deriv);
      if (deriv == 0.0) throw ConstraintError("ellipsoid projection failed at the centre");
      double step = f / deriv;
      // keep a2 + t > 0 for the branch that contains the nearest point
      while (a2.minCoeff() + t - step <= 0.0) step *= 0.5;
      t -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(t))) break;
    }
    Vector x(p.size());
    for (int i = 0; i < p.size(); ++i) x(i) = p(i) * a2(i) / (a2(i) + t);
    return x;
  };
  auto frame = [a2](const Vector& x) -> Matrix {
    Vector g = x.array() / a2.array();
    return g / g.norm();
  };
  std::ostringstream name;
  name << "ellipsoid(" << semi_axes.transpose() << ")";
  return std::make_unique<EmbeddedTarget>(name.str(), k, 1, project, frame);
}

// ---------------------------------------------------------------------------

Vector second_fund_form(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y) {
  m.require_on_manifold(p);
  const Matrix nu = m.normal_frame(p);
  const std::vector<Matrix> s = m.sff(p);
  Vector out = Vector::Zero(m.ambient_dim());
  for (int l = 0; l < m.codim(); ++l) out += x.dot(s[l] * y) * nu.col(l);
  return out;
}

Vector shape_operator(const TargetManifold& m, const Vector& p, const Vector& xi, const Vector& z) {
  m.require_on_manifold(p);
  const Matrix nu = m.normal_frame(p);
  const std::vector<Matrix> s = m.sff(p);
  Vector out = Vector::Zero(m.ambient_dim());
  for (int l = 0; l < m.codim(); ++l) out += xi.dot(nu.col(l)) * (s[l] * z);
  return out;
}

Vector curvature_operator(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y,
                          const Vector& z) {
  return shape_operator(m, p, second_fund_form(m, p, y, z), x) - shape_operator(m, p, second_fund_form(m, p, x, z), y);
}

Vector nabla_A(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y, const Vector& z) {
  m.require_on_manifold(p);
  const Matrix nu = m.normal_frame(p);
  const std::vector<Matrix> ds = m.nabla_sff(p, z);
  Vector out = Vector::Zero(m.ambient_dim());
  for (int l = 0; l < m.codim(); ++l) out += x.dot(ds[l] * y) * nu.col(l);
  return out;
}

}  // namespace gsm
