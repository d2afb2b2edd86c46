#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsm/solver.hpp"

namespace gsm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// How one input field is produced. `kind` is one of
///   u:   zero | constant | random | file
///   chi: zero | random | file
///   phi: equator | random | constant | file
///   psi: zero | random | file
struct FieldSpec {
  explicit FieldSpec(std::string k = {}) : kind(std::move(k)) {}
  std::string kind;
  double value = 0.0;        // constant u
  double amplitude = 0.0;    // random / perturbed equator
  int max_mode = 2;
  Vector point;              // constant φ
  std::filesystem::path file;
};

struct MorreyConfig {
  std::string source = "energy";   // energy (|dφ|² density) | psi (|ψ|) | u | file
  std::filesystem::path file;      // kind u, used when source = file
  int cells = 65;                  // odd
  double p = 4.0;
  double lambda = 2.0;             // for the decay profile
  std::vector<double> lambdas{0.0, 1.0, 2.0};
  double r0 = 1.0;
  int radii = 6;
  double center_x = 0.0;
  double center_y = 0.0;
};

struct RunConfig {
  int n1 = 32;
  int n2 = 32;
  std::string target = "sphere";   // sphere | ellipsoid
  int dim = 3;                     // ambient dimension K of the sphere
  double radius = 1.0;
  Vector axes;                     // ellipsoid semi-axes (K = size)
  FieldSpec u{"zero"};
  FieldSpec chi{"zero"};
  FieldSpec phi{"equator"};
  FieldSpec psi{"zero"};
  SolverConfig solver;
  MorreyConfig morrey;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;

  int ambient_dim() const { return target == "sphere" ? dim : static_cast<int>(axes.size()); }
};

/// Parses the INI file. Relative field paths are resolved against the config's directory.
/// Unknown sections or keys are rejected.
RunConfig load_config(const std::filesystem::path& path);

std::unique_ptr<TargetManifold> make_target(const RunConfig& config);

struct RunFields {
  MapField phi;
  VectorSpinorField psi;
  GravitinoField chi;
  ConformalFactor u;
};

/// Deterministic in config.seed: u, χ, φ, ψ are drawn from one generator in that order.
RunFields build_fields(const RunConfig& config, const TargetManifold& m, const Grid& grid);

const std::vector<std::string>& commands();

/// Runs one command, writing artifacts into config.out_dir. Returns the exit status:
/// 0 success, 1 a check failed or the flow did not converge, 2 config/parse error,
/// 3 constraint violation, 4 other runtime failure. Errors go to `err` as one JSON line.
int run(const RunConfig& config, const std::string& command, std::ostream& err);

nlohmann::json error_json(const std::string& type, const std::string& message);

}  // namespace gsm
