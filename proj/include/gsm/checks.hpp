#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gsm/euler_lagrange.hpp"
#include "gsm/random_fields.hpp"

namespace gsm {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;       // observed defect (or statistic)
  double tolerance = 0.0;
  std::string detail;
};

nlohmann::json to_json(const CheckResult& r);
nlohmann::json check_report(const std::vector<CheckResult>& results);

/// Fiber algebra identities on the basis spinors and `random_count` random fibers.
std::vector<CheckResult> clifford_suite(Rng& rng, int random_count = 1000);

/// Discrete Dirac symmetry, vanishing of the untwisted Cl(2,0) action, non-vanishing of the Cl(0,2) one.
std::vector<CheckResult> dirac_suite(const Grid& grid, Rng& rng);

/// Super-Weyl and ℤ₂ invariance of every term of the action, plus the field projectors.
std::vector<CheckResult> symmetry_suite(const Grid& grid, const TargetManifold& m, Rng& rng);

/// Gauss equation on the unit S² against the constant-curvature formula, and R(ψ) against
/// a quadruple-loop contraction of the Riemann tensor built from curvature_operator.
std::vector<CheckResult> gauss_suite(Rng& rng, int triples = 1000);

/// Antisymmetry of ω, F, T and reassembly of residual_phi from them.
std::vector<CheckResult> potential_suite(const Grid& grid, const TargetManifold& m, Rng& rng);

/// R(ψ) at p by the quadruple loop Σ R_{ijkl}⟨ψ^i,ψ^k⟩⟨ψ^j,ψ^l⟩ in the ambient basis.
double curvature_scalar_bruteforce(const TargetManifold& m, const Vector& p, const SiteSpinors& sp);

/// Smooth random data used by several suites: (φ, ψ, χ, u) with the given amplitudes.
struct RandomData {
  MapField phi;
  VectorSpinorField psi;
  GravitinoField chi;
  ConformalFactor u;
};

RandomData draw_random_data(const Grid& grid, const TargetManifold& m, Rng& rng, double map_amp = 0.3,
                       double psi_amp = 0.3, double chi_amp = 0.3, double u_amp = 0.2, int max_mode = 1);

}  // namespace gsm
