#include "gsm/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace gsm {

FlowMode parse_flow_mode(const std::string& s) {
  if (s == "joint") return FlowMode::Joint;
  if (s == "phi-only" || s == "phi") return FlowMode::PhiOnly;
  if (s == "psi-only" || s == "psi") return FlowMode::PsiOnly;
  throw std::invalid_argument("unknown flow mode '" + s + "'");
}

std::string to_string(FlowMode mode) {
  switch (mode) {
    case FlowMode::Joint: return "joint";
    case FlowMode::PhiOnly: return "phi-only";
    case FlowMode::PsiOnly: return "psi-only";
  }
  return "joint";
}

void SolverConfig::validate() const {
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(initial_step > 0.0)) throw std::invalid_argument("initial step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink must lie in (0, 1)");
  if (!(grow > 1.0)) throw std::invalid_argument("grow must exceed 1");
  if (report_every < 1) throw std::invalid_argument("report_every must be >= 1");
}

namespace {

bool all_finite(const FieldMatrix& f) { return f.allFinite(); }

struct Evaluated {
  MapField r_phi;             // tangent part
  VectorSpinorField r_psi;
  NormPair n_phi;
  NormPair n_psi;
  double combined = 0.0;
};

bool pure_map_sector(const VectorSpinorField& psi, const GravitinoField& chi) {
  return psi.cwiseAbs().maxCoeff() == 0.0 && chi.cwiseAbs().maxCoeff() == 0.0;
}

Evaluated evaluate(const MapField& phi, const VectorSpinorField& psi, const FlowProblem& prob, FlowMode mode) {
  Evaluated e;
  e.r_phi = tangent_part(residual_phi(phi, psi, prob.chi, prob.u, prob.m, prob.grid), phi, prob.m);
  // with ψ = χ = 0 every term of r_psi vanishes identically
  e.r_psi = pure_map_sector(psi, prob.chi) ? VectorSpinorField::Zero(psi.rows(), psi.cols())
                                            : residual_psi(phi, psi, prob.chi, prob.u, prob.m, prob.grid);
  if (!all_finite(e.r_phi) || !all_finite(e.r_psi)) throw std::runtime_error("non-finite residual in flow");
  e.n_phi = field_norms(e.r_phi, prob.grid);
  e.n_psi = field_norms(e.r_psi, prob.grid);
  const double a = mode == FlowMode::PsiOnly ? 0.0 : e.n_phi.l2;
  const double b = mode == FlowMode::PhiOnly ? 0.0 : e.n_psi.l2;
  e.combined = std::sqrt(a * a + b * b);
  return e;
}

struct Direction {
  MapField phi;
  VectorSpinorField psi;
};

// Gradient of M = ½(‖r_phi‖² + ‖r_psi‖²) through one Jacobian–vector product. The residuals are
// r_phi = −G_φ/(2e^{2u}h²), r_psi = G_ψ/(2e^{3u}h²) with G the action gradient and ∂G symmetric, so
// ∇M ∝ (−e^{2u}(Jv)_φ, e^{3u}(Jv)_ψ) for v = (−e^{-2u} r_phi, e^{-3u} r_psi). Inactive blocks are zeroed.
Direction residual_descent(const MapField& phi, const VectorSpinorField& psi, const Evaluated& cur,
                           const FlowProblem& prob, bool move_phi, bool move_psi) {
  const Eigen::ArrayXd w2 = (2.0 * prob.u.array()).exp();
  const Eigen::ArrayXd w3 = (3.0 * prob.u.array()).exp();
  MapField vphi = MapField::Zero(phi.rows(), phi.cols());
  VectorSpinorField vpsi = VectorSpinorField::Zero(psi.rows(), psi.cols());
  if (move_phi) vphi = -(cur.r_phi.array().colwise() / w2).matrix();
  if (move_psi) vpsi = (cur.r_psi.array().colwise() / w3).matrix();
  Direction d{MapField::Zero(phi.rows(), phi.cols()), VectorSpinorField::Zero(psi.rows(), psi.cols())};
  const double vn = std::sqrt(vphi.squaredNorm() + vpsi.squaredNorm());
  if (vn == 0.0) return d;
  const double eps = 1e-6 * (1.0 + std::sqrt(phi.squaredNorm() + psi.squaredNorm())) / vn;
  auto eval_at = [&](double sgn) {
    const MapField p = move_phi ? project_map(phi + sgn * eps * vphi, prob.m) : phi;
    const VectorSpinorField q = tangency_project(psi + sgn * eps * vpsi, p, prob.m);
    return residuals(p, q, prob.chi, prob.u, prob.m, prob.grid);
  };
  const ELResidual plus = eval_at(1.0);
  const ELResidual minus = eval_at(-1.0);
  if (move_phi) {
    const MapField jv = (tangent_part(plus.r_phi, phi, prob.m) - tangent_part(minus.r_phi, phi, prob.m)) / (2.0 * eps);
    d.phi = tangent_part(-(jv.array().colwise() * w2).matrix(), phi, prob.m);
  }
  if (move_psi) {
    const VectorSpinorField jv = (plus.r_psi - minus.r_psi) / (2.0 * eps);
    d.psi = (jv.array().colwise() * w3).matrix();
  }
  return d;
}

// E(φ1) − E(φ0) for the Dirichlet term, summed as differences so that it stays accurate when tiny
double dirichlet_change(const MapField& phi1, const MapField& phi0, const Grid& grid) {
  double acc = 0.0;
  for (int alpha = 0; alpha < 2; ++alpha) {
    const MapField d1 = partial(phi1, alpha, grid);
    const MapField d0 = partial(phi0, alpha, grid);
    acc += ((d1 - d0).array() * (d1 + d0).array()).sum();
  }
  return acc * grid.cell_area();
}

}  // namespace

double explicit_step_limit(const ConformalFactor& u, const Grid& grid) {
  // the centred div∘grad has spectrum in [-(1/h₁² + 1/h₂²), 0]
  const double lam = (-2.0 * u.array()).exp().maxCoeff() * (1.0 / (grid.h1() * grid.h1()) + 1.0 / (grid.h2() * grid.h2()));
  return 1.0 / lam;
}

void evaluate_state(FlowState& state, const FlowProblem& prob) {
  const Evaluated e = evaluate(state.phi, state.psi, prob, FlowMode::Joint);
  state.residual_phi = e.n_phi;
  state.residual_psi = e.n_psi;
  state.combined = e.combined;
}

int flow_step(FlowState& state, const FlowProblem& prob, const SolverConfig& config) {
  const bool move_phi = config.mode != FlowMode::PsiOnly;
  const bool move_psi = config.mode != FlowMode::PhiOnly;
  // ψ = χ = 0 is invariant under the flow; there the map energy itself must not increase
  const bool harmonic = pure_map_sector(state.psi, prob.chi);

  const Evaluated cur = evaluate(state.phi, state.psi, prob, config.mode);
  const Direction dir = harmonic ? Direction{} : residual_descent(state.phi, state.psi, cur, prob, move_phi, move_psi);
  // Armijo slope: the first-order change of the energy along +dt·r_phi is −2 dt Σ e^{2u}h²|r_phi|²
  const double e0 = harmonic ? term_dirichlet(state.phi, prob.u, prob.grid) : 0.0;
  double slope = 0.0;
  for (int s = 0; s < prob.grid.size(); ++s)
    slope += 2.0 * std::exp(2.0 * prob.u(s)) * prob.grid.cell_area() * cur.r_phi.row(s).squaredNorm();

  double dt = state.step_size > 0.0 ? state.step_size : config.initial_step;
  if (move_phi) dt = std::min(dt, explicit_step_limit(prob.u, prob.grid));
  int rejected = 0;
  while (true) {
    if (dt < 1e-14) throw StepUnderflow("flow step size fell below 1e-14");
    MapField phi = state.phi;
    VectorSpinorField psi = state.psi;
    if (harmonic) {
      if (move_phi) phi = project_map(state.phi + dt * cur.r_phi, prob.m);
    } else {
      if (move_phi) phi = project_map(state.phi - dt * dir.phi, prob.m);
      if (move_psi) psi = state.psi - dt * dir.psi;
    }
    if (move_phi || move_psi) psi = tangency_project(psi, phi, prob.m);
    if (!all_finite(phi) || !all_finite(psi)) throw std::runtime_error("non-finite field in flow");

    bool accept;
    Evaluated next;
    if (harmonic) {
      const double change = dirichlet_change(phi, state.phi, prob.grid);
      accept = change <= -0.5 * dt * slope + 1e-14 * e0;
      if (accept) next = evaluate(phi, psi, prob, config.mode);
    } else {
      next = evaluate(phi, psi, prob, config.mode);
      accept = next.combined <= cur.combined;
    }
    if (accept) {
      state.phi = std::move(phi);
      state.psi = std::move(psi);
      state.residual_phi = next.n_phi;
      state.residual_psi = next.n_psi;
      state.combined = next.combined;
      state.step_size = dt * config.grow;
      ++state.iteration;
      return rejected;
    }
    dt *= config.shrink;
    ++rejected;
  }
}

FlowState solve(const MapField& phi0, const VectorSpinorField& psi0, const FlowProblem& prob,
                const SolverConfig& config, FlowReport& report) {
  config.validate();
  require_on_manifold(prob.m, phi0);
  FlowState state;
  state.phi = phi0;
  state.psi = psi0;
  state.step_size = config.initial_step;
  {
    const Evaluated e = evaluate(state.phi, state.psi, prob, config.mode);
    state.residual_phi = e.n_phi;
    state.residual_psi = e.n_psi;
    state.combined = e.combined;
  }
  report = FlowReport{};
  auto record = [&](int rejected) {
    FlowRecord r;
    r.iteration = state.iteration;
    r.action = total_action(state.phi, state.psi, prob.u, prob.chi, prob.m, prob.grid);
    r.residual_phi = state.residual_phi;
    r.residual_psi = state.residual_psi;
    r.combined = state.combined;
    r.step_size = state.step_size;
    r.rejected = rejected;
    report.records.push_back(r);
  };
  record(0);
  bool stalled = false;
  while (state.combined >= config.tolerance && state.iteration < config.max_iterations) {
    int rejected = 0;
    try {
      rejected = flow_step(state, prob, config);
    } catch (const StepUnderflow&) {
      stalled = true;
      break;
    }
    const bool last = state.combined < config.tolerance || state.iteration >= config.max_iterations;
    if (last || state.iteration % config.report_every == 0) record(rejected);
  }
  report.iterations = state.iteration;
  report.converged = state.combined < config.tolerance;
  report.reason = report.converged ? "tolerance reached"
                  : stalled        ? "step size underflow"
                                   : "max_iterations reached";
  return state;
}

}  // namespace gsm
