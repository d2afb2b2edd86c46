#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gsm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a point leaves the target or a spinor leaves the tangent bundle.
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute tolerance used for the on-manifold and tangency checks at magnitude |p|.
inline double constraint_tolerance(double magnitude) { return 1e-9 * (1.0 + magnitude); }

/// Isometrically embedded target N ⊂ R^K.
///
/// normal_frame(p) returns a K×L matrix whose columns ν_l are orthonormal and span
/// the normal space at p. normal_frame_derivative(p)[l](a, b) = ∂ν_l^b / ∂u^a for the
/// extension ν_l ∘ project into a tubular neighbourhood.
class TargetManifold {
 public:
  virtual ~TargetManifold() = default;

  virtual int ambient_dim() const = 0;
  virtual int codim() const = 0;
  virtual bool analytic() const = 0;
  virtual std::string name() const = 0;

  virtual Vector project(const Vector& p) const = 0;
  virtual Matrix normal_frame(const Vector& p) const = 0;
  virtual std::vector<Matrix> normal_frame_derivative(const Vector& p) const = 0;

  /// Covariant derivative of the second fundamental form along Z, as L matrices
  /// (∇_Z S)_l restricted to tangent arguments. Default: central differences along
  /// a projected curve with first-order parallel transport of the arguments.
  virtual std::vector<Matrix> nabla_sff(const Vector& p, const Vector& z) const;

  Matrix tangent_projector(const Vector& p) const;
  Vector tangent_project(const Vector& p, const Vector& w) const { return tangent_projector(p) * w; }

  /// Scalar second fundamental forms S_l with A(X, Y) = Σ_l X^T S_l Y ν_l for tangent X, Y.
  std::vector<Matrix> sff(const Vector& p) const;

  double manifold_defect(const Vector& p) const { return (p - project(p)).norm(); }
  bool on_manifold(const Vector& p) const { return manifold_defect(p) <= constraint_tolerance(p.norm()); }
  void require_on_manifold(const Vector& p) const;

 protected:
  double fd_step_ = 1e-5;
};

/// Round sphere of radius r in R^K with closed-form extrinsic data.
class Sphere final : public TargetManifold {
 public:
  explicit Sphere(int ambient_dim, double radius = 1.0);

  int ambient_dim() const override { return dim_; }
  int codim() const override { return 1; }
  bool analytic() const override { return true; }
  std::string name() const override;
  double radius() const { return radius_; }

  Vector project(const Vector& p) const override;
  Matrix normal_frame(const Vector& p) const override;
  std::vector<Matrix> normal_frame_derivative(const Vector& p) const override;
  std::vector<Matrix> nabla_sff(const Vector& p, const Vector& z) const override;

 private:
  int dim_;
  double radius_;
};

/// Target given by a user projection and normal frame; derivatives by central differences
/// with relative step 1e-5.
class EmbeddedTarget : public TargetManifold {
 public:
  using ProjectFn = std::function<Vector(const Vector&)>;
  using FrameFn = std::function<Matrix(const Vector&)>;

  EmbeddedTarget(std::string name, int ambient_dim, int codim, ProjectFn project, FrameFn frame);

  int ambient_dim() const override { return dim_; }
  int codim() const override { return codim_; }
  bool analytic() const override { return false; }
  std::string name() const override { return name_; }

  Vector project(const Vector& p) const override { return project_(p); }
  Matrix normal_frame(const Vector& p) const override;
  std::vector<Matrix> normal_frame_derivative(const Vector& p) const override;

  void set_fd_step(double step) { fd_step_ = step; }

 private:
  std::string name_;
  int dim_;
  int codim_;
  ProjectFn project_;
  FrameFn frame_;
};

/// Ellipsoid Σ x_i² / a_i² = 1 in finite-difference mode.
std::unique_ptr<EmbeddedTarget> make_ellipsoid(const Vector& semi_axes);

// Extrinsic geometry at a point p ∈ N. All functions throw ConstraintError if p is off N.

Vector second_fund_form(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y);
Vector shape_operator(const TargetManifold& m, const Vector& p, const Vector& xi, const Vector& z);
Vector curvature_operator(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y,
                          const Vector& z);
Vector nabla_A(const TargetManifold& m, const Vector& p, const Vector& x, const Vector& y, const Vector& z);

}  // namespace gsm
