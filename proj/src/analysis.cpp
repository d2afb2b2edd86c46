#include "gsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gsm {

DiscGrid::DiscGrid(int cells_per_side) : m(cells_per_side) {
  if (m < 3 || m % 2 == 0) throw std::invalid_argument("disc grid needs an odd number (>= 3) of cells per side");
  for (int c = 0; c < size(); ++c)
    if (inside(c)) cells_.push_back(c);
}

void MorreyParams::validate() const {
  if (!(p >= 1.0)) throw std::invalid_argument("Morrey exponent p must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 2.0)) throw std::invalid_argument("Morrey lambda must lie in [0, 2]");
}

namespace {

void check_field(const Eigen::VectorXd& field, const DiscGrid& disc) {
  if (field.size() != disc.size()) throw std::invalid_argument("field does not match the disc grid");
}

void check_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("radii list is empty");
  for (double r : radii)
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("radii must lie in (0, 1]");
}

// local integrals Σ_{|y-x| ≤ r_k} |f|^p h² for every radius, centre x
std::vector<double> ball_integrals(const Eigen::VectorXd& absp, const DiscGrid& disc, double cx, double cy,
                                   const std::vector<double>& sorted_radii) {
  std::vector<double> bins(sorted_radii.size() + 1, 0.0);
  for (int c : disc.disc_cells()) {
    const double dx = disc.x(c) - cx;
    const double dy = disc.y(c) - cy;
    const double d = std::sqrt(dx * dx + dy * dy);
    const auto it = std::lower_bound(sorted_radii.begin(), sorted_radii.end(), d);
    bins[it - sorted_radii.begin()] += absp(c);
  }
  std::vector<double> out(sorted_radii.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < sorted_radii.size(); ++k) {
    acc += bins[k];
    out[k] = acc * disc.cell_area();
  }
  return out;
}

}  // namespace

std::vector<double> morrey_norms(const Eigen::VectorXd& field, const DiscGrid& disc, double p,
                                 const std::vector<double>& lambdas, const std::vector<double>& radii) {
  check_field(field, disc);
  check_radii(radii);
  for (double l : lambdas) MorreyParams{p, l}.validate();
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const Eigen::VectorXd absp = field.cwiseAbs().array().pow(p);
  std::vector<double> best(lambdas.size(), 0.0);
  for (int c : disc.disc_cells()) {
    const std::vector<double> ints = ball_integrals(absp, disc, disc.x(c), disc.y(c), sorted);
    for (std::size_t k = 0; k < sorted.size(); ++k)
      for (std::size_t j = 0; j < lambdas.size(); ++j)
        best[j] = std::max(best[j], std::pow(sorted[k], lambdas[j] - 2.0) * ints[k]);
  }
  for (double& b : best) b = std::pow(b, 1.0 / p);
  return best;
}

double morrey_norm(const Eigen::VectorXd& field, const DiscGrid& disc, const MorreyParams& params,
                   const std::vector<double>& radii) {
  return morrey_norms(field, disc, params.p, {params.lambda}, radii).front();
}

double lp_norm(const Eigen::VectorXd& field, const DiscGrid& disc, double p) {
  check_field(field, disc);
  double acc = 0.0;
  for (int c : disc.disc_cells()) acc += std::pow(std::abs(field(c)), p);
  return std::pow(acc * disc.cell_area(), 1.0 / p);
}

Eigen::VectorXd riesz_i1(const Eigen::VectorXd& field, const DiscGrid& disc) {
  check_field(field, disc);
  const double h = disc.h();
  const double self = 4.0 * h * std::log(1.0 + std::numbers::sqrt2);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(disc.size());
  for (int x : disc.disc_cells()) {
    double acc = 0.0;
    for (int y : disc.disc_cells()) {
      if (y == x) {
        acc += self * field(y);
        continue;
      }
      const double dx = disc.x(x) - disc.x(y);
      const double dy = disc.y(x) - disc.y(y);
      acc += field(y) * disc.cell_area() / std::sqrt(dx * dx + dy * dy);
    }
    out(x) = acc;
  }
  return out;
}

std::vector<std::pair<double, double>> decay_profile(const Eigen::VectorXd& field, const DiscGrid& disc,
                                                     const Eigen::Vector2d& center, double p, double lambda,
                                                     const std::vector<double>& radii) {
  check_field(field, disc);
  check_radii(radii);
  MorreyParams{p, lambda}.validate();
  const Eigen::VectorXd absp = field.cwiseAbs().array().pow(p);
  std::vector<std::pair<double, double>> out;
  for (double r : radii) {
    const std::vector<double> ints = ball_integrals(absp, disc, center.x(), center.y(), {r});
    out.emplace_back(r, std::pow(std::pow(r, lambda - 2.0) * ints[0], 1.0 / p));
  }
  return out;
}

std::vector<double> dyadic_radii(double r0, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(r0 / std::pow(2.0, k));
  return out;
}

}  // namespace gsm
