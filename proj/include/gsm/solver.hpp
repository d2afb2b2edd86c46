#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsm/euler_lagrange.hpp"

namespace gsm {

/// Thrown by flow_step when no step down to 1e-14 is accepted; solve turns it into a stalled report.
class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FlowMode { Joint, PhiOnly, PsiOnly };

FlowMode parse_flow_mode(const std::string& s);
std::string to_string(FlowMode mode);

struct SolverConfig {
  int max_iterations = 100000;
  double tolerance = 1e-6;      // on the combined residual L² norm
  double initial_step = 1e-4;
  double shrink = 0.5;
  double grow = 1.1;
  FlowMode mode = FlowMode::Joint;
  std::uint64_t seed = 0;
  int report_every = 1;         // record every n-th iteration (the last one always)

  void validate() const;
};

struct FlowState {
  MapField phi;
  VectorSpinorField psi;
  int iteration = 0;
  NormPair residual_phi;
  NormPair residual_psi;
  double combined = 0.0;        // sqrt(‖P_T r_phi‖² + ‖r_psi‖²), grid L²
  double step_size = 0.0;
};

struct FlowRecord {
  int iteration = 0;
  ActionBreakdown action;
  NormPair residual_phi;
  NormPair residual_psi;
  double combined = 0.0;
  double step_size = 0.0;
  int rejected = 0;
};

struct FlowReport {
  bool converged = false;
  int iterations = 0;
  std::string reason;
  std::vector<FlowRecord> records;
};

struct FlowProblem {
  const GravitinoField& chi;
  const ConformalFactor& u;
  const TargetManifold& m;
  const Grid& grid;
};

/// Upper bound on dt for the map update (inverse of the largest eigenvalue of e^{-2u} div∘grad).
double explicit_step_limit(const ConformalFactor& u, const Grid& grid);

/// Fills residual norms of a state.
void evaluate_state(FlowState& state, const FlowProblem& prob);

/// One accepted step (retrying with smaller dt on rejection). Returns the number of rejections.
int flow_step(FlowState& state, const FlowProblem& prob, const SolverConfig& config);

FlowState solve(const MapField& phi0, const VectorSpinorField& psi0, const FlowProblem& prob,
                const SolverConfig& config, FlowReport& report);

}  // namespace gsm
