#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gsm {

/// m×m cells of side h = 2/m covering [-1,1]²; a cell belongs to the unit disc U when its
/// centre does. Cell (i, j) has index i + m·j. m must be odd so that one centre sits at 0.
struct DiscGrid {
  int m = 0;

  explicit DiscGrid(int cells_per_side);

  int size() const { return m * m; }
  double h() const { return 2.0 / m; }
  double cell_area() const { return h() * h(); }
  double x(int c) const { return -1.0 + h() * (c % m + 0.5); }
  double y(int c) const { return -1.0 + h() * (c / m + 0.5); }
  bool inside(int c) const { return x(c) * x(c) + y(c) * y(c) < 1.0; }
  /// Indices of the cells inside U, ascending.
  const std::vector<int>& disc_cells() const { return cells_; }

 private:
  std::vector<int> cells_;
};

struct MorreyParams {
  double p = 2.0;
  double lambda = 2.0;   // in [0, n], n = 2

  void validate() const;
};

/// sup over disc-cell centres x and radii r of (r^{λ-2} Σ_{|y-x| ≤ r, y ∈ U} |f(y)|^p h²)^{1/p}.
double morrey_norm(const Eigen::VectorXd& field, const DiscGrid& disc, const MorreyParams& params,
                   const std::vector<double>& radii);

/// Same sup for several λ at once (one pass over centre/cell pairs).
std::vector<double> morrey_norms(const Eigen::VectorXd& field, const DiscGrid& disc, double p,
                                 const std::vector<double>& lambdas, const std::vector<double>& radii);

/// Discrete (Σ_{y∈U} |f|^p h²)^{1/p}.
double lp_norm(const Eigen::VectorXd& field, const DiscGrid& disc, double p);

/// I₁f(x) = Σ_{y∈U} f(y) h² / |x-y| on the disc cells (0 elsewhere); the self cell uses the
/// exact integral of 1/|z| over a square of side h, 4h·ln(1+√2).
Eigen::VectorXd riesz_i1(const Eigen::VectorXd& field, const DiscGrid& disc);

/// (r, (r^{λ-2} Σ_{|y-c| ≤ r} |f|^p h²)^{1/p}) for each radius.
std::vector<std::pair<double, double>> decay_profile(const Eigen::VectorXd& field, const DiscGrid& disc,
                                                     const Eigen::Vector2d& center, double p, double lambda,
                                                     const std::vector<double>& radii);

/// Dyadic radii r₀, r₀/2, …, (count entries), largest first.
std::vector<double> dyadic_radii(double r0, int count);

/// Samples f(x, y) at cell centres (all cells).
template <typename F>
Eigen::VectorXd sample_disc(const DiscGrid& disc, F&& f) {
  Eigen::VectorXd out(disc.size());
  for (int c = 0; c < disc.size(); ++c) out(c) = f(disc.x(c), disc.y(c));
  return out;
}

}  // namespace gsm
