#include "gsm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gsm/analysis.hpp"
#include "gsm/checks.hpp"
#include "gsm/io.hpp"
#include "gsm/random_fields.hpp"

namespace gsm {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

nlohmann::json error_json(const std::string& type, const std::string& message) {
  return {{"error", {{"type", type}, {"message", message}}}};
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"eval", "check", "residual", "solve", "morrey"};
  return c;
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"n1", "n2"}},
      {"target", {"kind", "dim", "radius", "axes"}},
      {"metric", {"u", "value", "amplitude", "max_mode", "file"}},
      {"gravitino", {"chi", "amplitude", "max_mode", "file"}},
      {"phi", {"init", "amplitude", "max_mode", "point", "file"}},
      {"psi", {"init", "amplitude", "max_mode", "file"}},
      {"solver", {"mode", "max_iterations", "tolerance", "initial_step", "shrink", "grow", "report_every"}},
      {"morrey", {"source", "file", "cells", "p", "lambda", "lambdas", "r0", "radii", "center_x", "center_y"}},
      {"run", {"seed"}}};
  return keys;
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::istringstream in(*node);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("cannot parse [" + key + "] = '" + *node + "'");
  return value;
}

std::string get_str(const pt::ptree& tree, const std::string& key, const std::string& fallback) {
  auto node = tree.get_optional<std::string>(key);
  return node ? *node : fallback;
}

std::vector<double> get_list(const pt::ptree& tree, const std::string& key, std::vector<double> fallback) {
  auto node = tree.get_optional<std::string>(key);
  if (!node) return fallback;
  std::istringstream in(*node);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof() || out.empty()) throw ConfigError("cannot parse list [" + key + "] = '" + *node + "'");
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void require_one_of(const std::string& what, const std::string& value, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (value == o) return;
  std::string list;
  for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
  throw ConfigError(what + " must be one of {" + list + "}, got '" + value + "'");
}

fs::path resolve(const fs::path& base, const std::string& file) {
  if (file.empty()) return {};
  fs::path p(file);
  return p.is_absolute() ? p : base / p;
}

void read_field_spec(const pt::ptree& root, const std::string& section, const std::string& kind_key, FieldSpec& spec,
                     const fs::path& base) {
  const std::string s = section + ".";
  spec.kind = get_str(root, s + kind_key, spec.kind);
  spec.value = get(root, s + "value", spec.value);
  spec.amplitude = get(root, s + "amplitude", spec.amplitude);
  spec.max_mode = get(root, s + "max_mode", spec.max_mode);
  if (root.get_optional<std::string>(s + "point")) spec.point = to_vector(get_list(root, s + "point", {}));
  spec.file = resolve(base, get_str(root, s + "file", ""));
  if (spec.kind == "file") {
    if (spec.file.empty()) throw ConfigError("[" + section + "] file spec needs a 'file' key");
    if (!fs::exists(spec.file)) throw ConfigError("[" + section + "] file not found: " + spec.file.string());
  }
  if (spec.max_mode < 0) throw ConfigError("[" + section + "] max_mode must be >= 0");
  if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.value))
    throw ConfigError("[" + section + "] amplitude and value must be finite");
}

FieldFile load_checked(const fs::path& path, const std::string& kind, const Grid& grid, int K) {
  FieldFile f = read_field(path);
  if (f.kind != kind) throw ConfigError(path.string() + ": expected kind " + kind + ", found " + f.kind);
  if (f.n1 != grid.n1 || f.n2 != grid.n2)
    throw ConfigError(path.string() + ": grid " + std::to_string(f.n1) + "x" + std::to_string(f.n2) +
                      " does not match the configured grid");
  if (field_components(kind, K) != f.data.cols() || (kind != "u" && kind != "chi" && f.K != K))
    throw ConfigError(path.string() + ": component count does not match K = " + std::to_string(K));
  return f;
}

void write_inputs(const fs::path& dir, const Grid& grid, int K, const MapField& phi, const VectorSpinorField& psi,
                  const GravitinoField& chi) {
  write_field_csv(dir / "fields_phi.csv", {"phi", grid.n1, grid.n2, K, phi});
  write_field_csv(dir / "fields_psi.csv", {"psi", grid.n1, grid.n2, K, psi});
  write_field_csv(dir / "fields_chi.csv", {"chi", grid.n1, grid.n2, K, chi});
}

int nearest(double t, int n) {
  int i = static_cast<int>(std::floor(t * n));
  return ((i % n) + n) % n;
}

// Torus [0,1)² is mapped affinely onto [-1,1]², nearest site per disc cell.
Eigen::VectorXd morrey_source(const RunConfig& c, const RunFields& f, const TargetManifold& m, const Grid& grid,
                              const DiscGrid& disc) {
  ScalarField density(grid.size());
  if (c.morrey.source == "energy") {
    const auto geo = site_geometry(m, f.phi);
    const auto d = map_derivatives(f.phi, geo, grid);
    density = d[0].rowwise().squaredNorm() + d[1].rowwise().squaredNorm();
  } else if (c.morrey.source == "psi") {
    density = f.psi.rowwise().norm();
  } else if (c.morrey.source == "u") {
    density = f.u;
  } else {
    density = load_checked(c.morrey.file, "u", grid, c.ambient_dim()).data.col(0);
  }
  return sample_disc(disc, [&](double x, double y) {
    return density(grid.index(nearest((x + 1.0) / 2.0, grid.n1), nearest((y + 1.0) / 2.0, grid.n2)));
  });
}

int cmd_eval(const RunConfig& c, const TargetManifold& m, const Grid& grid, const RunFields& f) {
  write_json(c.out_dir / "breakdown.json", to_json(total_action(f.phi, f.psi, f.u, f.chi, m, grid)));
  write_inputs(c.out_dir, grid, m.ambient_dim(), f.phi, f.psi, f.chi);
  return 0;
}

int cmd_check(const RunConfig& c, const TargetManifold& m, const Grid& grid) {
  Rng rng(c.seed);
  std::vector<CheckResult> all;
  auto append = [&](std::vector<CheckResult> v) { all.insert(all.end(), v.begin(), v.end()); };
  append(clifford_suite(rng));
  append(dirac_suite(grid, rng));
  append(symmetry_suite(grid, m, rng));
  append(gauss_suite(rng));
  append(potential_suite(grid, m, rng));
  const nlohmann::json report = check_report(all);
  write_json(c.out_dir / "check_report.json", report);
  return report["passed"].get<bool>() ? 0 : 1;
}

int cmd_residual(const RunConfig& c, const TargetManifold& m, const Grid& grid, const RunFields& f) {
  const ELResidual r = residuals(f.phi, f.psi, f.chi, f.u, m, grid);
  const MapField rt = tangent_part(r.r_phi, f.phi, m);
  const NormPair np = field_norms(rt, grid);
  const NormPair ns = field_norms(r.r_psi, grid);
  nlohmann::json j{{"r_phi", to_json(np)},
                   {"r_psi", to_json(ns)},
                   {"combined", std::sqrt(np.l2 * np.l2 + ns.l2 * ns.l2)},
                   {"map_defect", map_defect(m, f.phi)},
                   {"tangency_defect", tangency_defect(f.psi, site_geometry(m, f.phi))}};
  write_json(c.out_dir / "residuals.json", j);
  const int K = m.ambient_dim();
  write_field_csv(c.out_dir / "fields_r_phi.csv", {"r_phi", grid.n1, grid.n2, K, rt});
  write_field_csv(c.out_dir / "fields_r_psi.csv", {"r_psi", grid.n1, grid.n2, K, r.r_psi});
  write_inputs(c.out_dir, grid, K, f.phi, f.psi, f.chi);
  return 0;
}

int cmd_solve(const RunConfig& c, const TargetManifold& m, const Grid& grid, const RunFields& f) {
  FlowReport report;
  const FlowProblem prob{f.chi, f.u, m, grid};
  SolverConfig sc = c.solver;
  sc.seed = c.seed;
  const FlowState s = solve(f.phi, f.psi, prob, sc, report);
  write_flow_report(c.out_dir / "flow_report.jsonl", report);
  write_json(c.out_dir / "breakdown.json", to_json(total_action(s.phi, s.psi, f.u, f.chi, m, grid)));
  write_inputs(c.out_dir, grid, m.ambient_dim(), s.phi, s.psi, f.chi);
  return report.converged ? 0 : 1;
}

int cmd_morrey(const RunConfig& c, const TargetManifold& m, const Grid& grid, const RunFields& f) {
  const DiscGrid disc(c.morrey.cells);
  const Eigen::VectorXd field = morrey_source(c, f, m, grid, disc);
  const std::vector<double> radii = dyadic_radii(c.morrey.r0, c.morrey.radii);
  const Eigen::Vector2d center(c.morrey.center_x, c.morrey.center_y);
  write_decay_profile(c.out_dir / "decay_profile.csv",
                      decay_profile(field, disc, center, c.morrey.p, c.morrey.lambda, radii));
  const std::vector<double> norms = morrey_norms(field, disc, c.morrey.p, c.morrey.lambdas, radii);
  nlohmann::json j{{"source", c.morrey.source}, {"cells", c.morrey.cells}, {"p", c.morrey.p},
                   {"radii", radii},            {"lambdas", c.morrey.lambdas}, {"norms", norms},
                   {"lp_norm", lp_norm(field, disc, c.morrey.p)}};
  write_json(c.out_dir / "morrey_norms.json", j);
  return 0;
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  pt::ptree root;
  try {
    pt::read_ini(path.string(), root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("ini parse error: ") + e.what());
  }
  for (const auto& [section, body] : root) {
    auto it = allowed_keys().find(section);
    if (it == allowed_keys().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, _] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  RunConfig c;
  c.n1 = get(root, "grid.n1", c.n1);
  c.n2 = get(root, "grid.n2", c.n2);
  if (c.n1 < 4 || c.n2 < 4) throw ConfigError("grid sizes must be >= 4");

  c.target = get_str(root, "target.kind", c.target);
  require_one_of("[target] kind", c.target, {"sphere", "ellipsoid"});
  c.dim = get(root, "target.dim", c.dim);
  c.radius = get(root, "target.radius", c.radius);
  if (c.target == "sphere") {
    if (c.dim < 2) throw ConfigError("[target] dim must be >= 2");
    if (!(c.radius > 0.0)) throw ConfigError("[target] radius must be positive");
  } else {
    c.axes = to_vector(get_list(root, "target.axes", {}));
    if (c.axes.size() < 2) throw ConfigError("[target] ellipsoid needs at least two axes");
    if ((c.axes.array() <= 0.0).any()) throw ConfigError("[target] axes must be positive");
  }

  read_field_spec(root, "metric", "u", c.u, base);
  require_one_of("[metric] u", c.u.kind, {"zero", "constant", "random", "file"});
  read_field_spec(root, "gravitino", "chi", c.chi, base);
  require_one_of("[gravitino] chi", c.chi.kind, {"zero", "random", "file"});
  read_field_spec(root, "phi", "init", c.phi, base);
  require_one_of("[phi] init", c.phi.kind, {"equator", "random", "constant", "file"});
  read_field_spec(root, "psi", "init", c.psi, base);
  require_one_of("[psi] init", c.psi.kind, {"zero", "random", "file"});
  if (c.phi.kind == "constant" && c.phi.point.size() != c.ambient_dim())
    throw ConfigError("[phi] point must have K = " + std::to_string(c.ambient_dim()) + " entries");

  c.solver.mode = parse_flow_mode(get_str(root, "solver.mode", to_string(c.solver.mode)));
  c.solver.max_iterations = get(root, "solver.max_iterations", c.solver.max_iterations);
  c.solver.tolerance = get(root, "solver.tolerance", c.solver.tolerance);
  c.solver.initial_step = get(root, "solver.initial_step", c.solver.initial_step);
  c.solver.shrink = get(root, "solver.shrink", c.solver.shrink);
  c.solver.grow = get(root, "solver.grow", c.solver.grow);
  c.solver.report_every = get(root, "solver.report_every", c.solver.report_every);
  try {
    c.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[solver] ") + e.what());
  }

  MorreyConfig& mc = c.morrey;
  mc.source = get_str(root, "morrey.source", mc.source);
  require_one_of("[morrey] source", mc.source, {"energy", "psi", "u", "file"});
  mc.file = resolve(base, get_str(root, "morrey.file", ""));
  if (mc.source == "file" && !fs::exists(mc.file)) throw ConfigError("[morrey] file not found: " + mc.file.string());
  mc.cells = get(root, "morrey.cells", mc.cells);
  if (mc.cells < 3 || mc.cells % 2 == 0) throw ConfigError("[morrey] cells must be odd and >= 3");
  mc.p = get(root, "morrey.p", mc.p);
  mc.lambda = get(root, "morrey.lambda", mc.lambda);
  mc.lambdas = get_list(root, "morrey.lambdas", mc.lambdas);
  mc.r0 = get(root, "morrey.r0", mc.r0);
  mc.radii = get(root, "morrey.radii", mc.radii);
  mc.center_x = get(root, "morrey.center_x", mc.center_x);
  mc.center_y = get(root, "morrey.center_y", mc.center_y);
  try {
    MorreyParams{mc.p, mc.lambda}.validate();
    for (double l : mc.lambdas) MorreyParams{mc.p, l}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[morrey] ") + e.what());
  }
  if (!(mc.r0 > 0.0 && mc.r0 <= 1.0) || mc.radii < 1) throw ConfigError("[morrey] need 0 < r0 <= 1 and radii >= 1");

  c.seed = get<std::uint64_t>(root, "run.seed", 0);
  return c;
}

std::unique_ptr<TargetManifold> make_target(const RunConfig& c) {
  if (c.target == "sphere") return std::make_unique<Sphere>(c.dim, c.radius);
  return make_ellipsoid(c.axes);
}

RunFields build_fields(const RunConfig& c, const TargetManifold& m, const Grid& grid) {
  Rng rng(c.seed);
  const int K = m.ambient_dim();
  RunFields f;

  if (c.u.kind == "zero") f.u = ScalarField::Zero(grid.size());
  else if (c.u.kind == "constant") f.u = ScalarField::Constant(grid.size(), c.u.value);
  else if (c.u.kind == "random") f.u = smooth_scalar(grid, rng, c.u.amplitude, c.u.max_mode);
  else f.u = load_checked(c.u.file, "u", grid, K).data.col(0);

  if (c.chi.kind == "zero") f.chi = GravitinoField::Zero(grid.size(), 8);
  else if (c.chi.kind == "random") f.chi = random_gravitino(grid, rng, c.chi.amplitude, c.chi.max_mode);
  else f.chi = load_checked(c.chi.file, "chi", grid, K).data;

  if (c.phi.kind == "equator") {
    if (c.target != "sphere") throw ConfigError("[phi] equator init needs a sphere target");
    f.phi = equator_map(grid, K, c.radius, &rng, c.phi.amplitude, c.phi.max_mode);
  } else if (c.phi.kind == "random") {
    f.phi = random_smooth_map(grid, m, rng, c.phi.amplitude, c.phi.max_mode);
  } else if (c.phi.kind == "constant") {
    m.require_on_manifold(c.phi.point);
    f.phi = constant_map(grid, c.phi.point);
  } else {
    f.phi = load_checked(c.phi.file, "phi", grid, K).data;
  }
  require_on_manifold(m, f.phi);

  if (c.psi.kind == "zero") f.psi = VectorSpinorField::Zero(grid.size(), 4 * K);
  else if (c.psi.kind == "random") f.psi = random_tangent_spinors(f.phi, m, grid, rng, c.psi.amplitude, c.psi.max_mode);
  else f.psi = load_checked(c.psi.file, "psi", grid, K).data;
  require_tangent(f.psi, site_geometry(m, f.phi));
  return f;
}

int run(const RunConfig& c, const std::string& command, std::ostream& err) {
  try {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
      throw ConfigError("unknown command '" + command + "'");
    if (c.out_dir.empty()) throw ConfigError("no output directory given");
    fs::create_directories(c.out_dir);
    const Grid grid(c.n1, c.n2);
    const auto m = make_target(c);
    if (command == "check") return cmd_check(c, *m, grid);
    const RunFields f = build_fields(c, *m, grid);
    if (command == "eval") return cmd_eval(c, *m, grid, f);
    if (command == "residual") return cmd_residual(c, *m, grid, f);
    if (command == "solve") return cmd_solve(c, *m, grid, f);
    return cmd_morrey(c, *m, grid, f);
  } catch (const ConfigError& e) {
    err << error_json("config", e.what()).dump() << '\n';
    return 2;
  } catch (const ConstraintError& e) {
    err << error_json("constraint", e.what()).dump() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << error_json("runtime", e.what()).dump() << '\n';
    return 4;
  }
}

}  // namespace gsm
