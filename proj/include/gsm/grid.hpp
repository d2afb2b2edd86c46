#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace gsm {

/// Periodic grid on the flat torus [0,1)². Site (i, j) has x = i·h₁, y = j·h₂ and
/// row index i + n₁·j in every field array (x fastest).
struct Grid {
  int n1 = 0;
  int n2 = 0;

  Grid() = default;
  Grid(int n1_, int n2_) : n1(n1_), n2(n2_) {
    if (n1 < 4 || n2 < 4) throw std::invalid_argument("grid needs at least 4 sites per direction");
  }

  int size() const { return n1 * n2; }
  double h1() const { return 1.0 / n1; }
  double h2() const { return 1.0 / n2; }
  double h(int alpha) const { return alpha == 0 ? h1() : h2(); }
  double cell_area() const { return h1() * h2(); }

  int index(int i, int j) const {
    i %= n1;
    if (i < 0) i += n1;
    j %= n2;
    if (j < 0) j += n2;
    return i + n1 * j;
  }
  int ix(int site) const { return site % n1; }
  int iy(int site) const { return site / n1; }
  double x(int site) const { return ix(site) * h1(); }
  double y(int site) const { return iy(site) * h2(); }

  /// Neighbour of `site` shifted by `step` in direction alpha.
  int shift(int site, int alpha, int step) const {
    return alpha == 0 ? index(ix(site) + step, iy(site)) : index(ix(site), iy(site) + step);
  }
};

using ScalarField = Eigen::VectorXd;
/// Rows are sites; columns are components.
using FieldMatrix = Eigen::MatrixXd;

/// Centered periodic difference ∂_α applied to every column.
template <typename Derived>
FieldMatrix partial(const Eigen::MatrixBase<Derived>& field, int alpha, const Grid& grid) {
  FieldMatrix out(field.rows(), field.cols());
  const double inv = 1.0 / (2.0 * grid.h(alpha));
  for (int s = 0; s < grid.size(); ++s)
    out.row(s) = (field.row(grid.shift(s, alpha, 1)) - field.row(grid.shift(s, alpha, -1))) * inv;
  return out;
}

/// Gradient of a scalar field: column α is ∂_α f.
inline FieldMatrix grad(const ScalarField& field, const Grid& grid) {
  FieldMatrix out(grid.size(), 2);
  out.col(0) = partial(field, 0, grid);
  out.col(1) = partial(field, 1, grid);
  return out;
}

/// Divergence of a 2-vector field (column α = component α); exact adjoint of -grad.
inline ScalarField div(const FieldMatrix& v, const Grid& grid) {
  ScalarField out = partial(v.col(0), 0, grid);
  out += partial(v.col(1), 1, grid);
  return out;
}

/// Composite div∘grad applied columnwise (the wide stencil with spacing 2h).
template <typename Derived>
FieldMatrix div_grad(const Eigen::MatrixBase<Derived>& field, const Grid& grid) {
  return partial(partial(field, 0, grid), 0, grid) + partial(partial(field, 1, grid), 1, grid);
}

/// Standard 5-point Laplacian applied columnwise.
template <typename Derived>
FieldMatrix laplacian(const Eigen::MatrixBase<Derived>& field, const Grid& grid) {
  FieldMatrix out(field.rows(), field.cols());
  const double w1 = 1.0 / (grid.h1() * grid.h1());
  const double w2 = 1.0 / (grid.h2() * grid.h2());
  for (int s = 0; s < grid.size(); ++s)
    out.row(s) = (field.row(grid.shift(s, 0, 1)) + field.row(grid.shift(s, 0, -1)) - 2.0 * field.row(s)) * w1 +
                 (field.row(grid.shift(s, 1, 1)) + field.row(grid.shift(s, 1, -1)) - 2.0 * field.row(s)) * w2;
  return out;
}

}  // namespace gsm
