#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "gsm/cli.hpp"
#include "gsm/io.hpp"
#include "gsm/random_fields.hpp"

using namespace gsm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gsm_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_ini(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "run.ini";
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cmd(const fs::path& ini, const fs::path& out, const std::string& command, std::string* err = nullptr,
            std::uint64_t seed = 5) {
  RunConfig c = load_config(ini);
  c.out_dir = out;
  c.seed = seed;
  std::ostringstream e;
  const int status = run(c, command, e);
  if (err) *err = e.str();
  return status;
}

const char* kSmall = R"([grid]
n1 = 8
n2 = 8
[target]
kind = sphere
dim = 3
[metric]
u = random
amplitude = 0.1
max_mode = 1
[gravitino]
chi = random
amplitude = 0.05
max_mode = 1
[phi]
init = random
amplitude = 0.3
max_mode = 1
[psi]
init = random
amplitude = 0.1
max_mode = 1
[solver]
max_iterations = 20
[morrey]
cells = 21
radii = 4
)";

}  // namespace

TEST(FieldFiles, CsvAndJsonRoundTrip) {
  const fs::path dir = scratch("fields");
  Rng rng(1);
  FieldFile f{"psi", 4, 3, 3, white_noise(12, 12, rng)};
  f.data(0, 0) = 1.0 / 3.0;
  write_field_csv(dir / "a.csv", f);
  write_field_json(dir / "a.json", f);
  for (const auto& path : {dir / "a.csv", dir / "a.json"}) {
    const FieldFile g = read_field(path);
    EXPECT_EQ(g.kind, "psi");
    EXPECT_EQ(g.n1, 4);
    EXPECT_EQ(g.n2, 3);
    EXPECT_EQ(g.K, 3);
    EXPECT_EQ(g.data, f.data);
  }
  EXPECT_EQ(field_components("phi", 3), 3);
  EXPECT_EQ(field_components("psi", 3), 12);
  EXPECT_EQ(field_components("chi", 3), 8);
  EXPECT_EQ(field_components("u", 3), 1);
}

TEST(FieldFiles, RejectsMalformedInput) {
  const fs::path dir = scratch("bad");
  std::ofstream(dir / "bad.csv") << "# kind=phi n1=2 n2=2 K=3 components=3\nsite,i,j,v0,v1,v2\n0,0,0,1,0\n";
  EXPECT_THROW(read_field(dir / "bad.csv"), std::runtime_error);
  std::ofstream(dir / "x.txt") << "nothing";
  EXPECT_THROW(read_field(dir / "x.txt"), std::runtime_error);
}

TEST(Serialization, ActionAndDecayProfile) {
  const fs::path dir = scratch("ser");
  ActionBreakdown a{0.1, -0.2, 1.0 / 3.0, -4e-17, 5.5, 0.0};
  a.total = a.dirichlet + a.dirac + a.gravitino + a.qchi + a.curvature;
  write_json(dir / "b.json", to_json(a));
  const ActionBreakdown b = action_from_json(read_json(dir / "b.json"));
  EXPECT_EQ(b.terms(), a.terms());
  EXPECT_EQ(b.total, a.total);
  const std::vector<std::pair<double, double>> rows{{1.0, 0.25}, {0.5, 1.0 / 7.0}};
  write_decay_profile(dir / "d.csv", rows);
  EXPECT_EQ(read_decay_profile(dir / "d.csv"), rows);
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23})
    EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Config, ParsesAndRejects) {
  const fs::path dir = scratch("cfg");
  const RunConfig c = load_config(write_ini(dir, kSmall));
  EXPECT_EQ(c.n1, 8);
  EXPECT_EQ(c.u.kind, "random");
  EXPECT_EQ(c.morrey.cells, 21);
  EXPECT_EQ(c.solver.max_iterations, 20);
  EXPECT_THROW(load_config(write_ini(dir, "[grid]\nn1 = 8\nbogus = 1\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[mystery]\na = 1\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[grid]\nn1 = eight\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[phi]\ninit = file\nfile = missing.csv\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[solver]\nshrink = 2\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[morrey]\ncells = 20\n")), ConfigError);
  EXPECT_THROW(load_config(write_ini(dir, "[target]\nkind = torus\n")), ConfigError);
  EXPECT_THROW(load_config(dir / "absent.ini"), ConfigError);
}

TEST(Cli, EvalOnConstantMapIsZero) {
  const fs::path dir = scratch("eval0");
  const fs::path ini = write_ini(dir, "[grid]\nn1 = 8\nn2 = 8\n[phi]\ninit = constant\npoint = 0 0 1\n");
  ASSERT_EQ(run_cmd(ini, dir / "out", "eval"), 0);
  const nlohmann::json j = read_json(dir / "out" / "breakdown.json");
  for (const auto& [k, v] : j.items()) EXPECT_EQ(v.get<double>(), 0.0) << k;
  EXPECT_TRUE(fs::exists(dir / "out" / "fields_phi.csv"));
}

TEST(Cli, AllCommandsProduceArtifacts) {
  const fs::path dir = scratch("all");
  const fs::path ini = write_ini(dir, kSmall);
  EXPECT_EQ(run_cmd(ini, dir / "o", "check"), 0);
  EXPECT_TRUE(read_json(dir / "o" / "check_report.json")["passed"].get<bool>());
  EXPECT_EQ(run_cmd(ini, dir / "o", "eval"), 0);
  EXPECT_EQ(run_cmd(ini, dir / "o", "residual"), 0);
  const nlohmann::json r = read_json(dir / "o" / "residuals.json");
  EXPECT_GT(r["r_phi"]["l2"].get<double>(), 0.0);
  EXPECT_EQ(read_field(dir / "o" / "fields_r_psi.csv").kind, "r_psi");
  const int solve_status = run_cmd(ini, dir / "o", "solve");
  EXPECT_EQ(solve_status, 1);  // 20 iterations are not enough; reported, not an error
  const auto lines = read_jsonl(dir / "o" / "flow_report.jsonl");
  ASSERT_FALSE(lines.empty());
  EXPECT_FALSE(lines.back()["converged"].get<bool>());
  EXPECT_EQ(run_cmd(ini, dir / "o", "morrey"), 0);
  EXPECT_EQ(read_decay_profile(dir / "o" / "decay_profile.csv").size(), 4u);
  for (const char* f : {"fields_phi.csv", "fields_psi.csv", "fields_chi.csv"}) {
    const FieldFile ff = read_field(dir / "o" / f);
    EXPECT_EQ(ff.n1, 8);
  }
}

TEST(Cli, BitIdenticalArtifacts) {
  const fs::path dir = scratch("det");
  const fs::path ini = write_ini(dir, kSmall);
  for (const char* cmd : {"eval", "residual", "solve", "morrey"}) {
    run_cmd(ini, dir / "a", cmd);
    run_cmd(ini, dir / "b", cmd);
  }
  for (const auto& entry : fs::directory_iterator(dir / "a"))
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / entry.path().filename())) << entry.path();
  run_cmd(ini, dir / "c", "eval", nullptr, 6);
  EXPECT_NE(slurp(dir / "a" / "breakdown.json"), slurp(dir / "c" / "breakdown.json"));
}

TEST(Cli, FieldFilesFeedBackIn) {
  const fs::path dir = scratch("feed");
  ASSERT_EQ(run_cmd(write_ini(dir, kSmall), dir / "a", "eval"), 0);
  const std::string body = R"([grid]
n1 = 8
n2 = 8
[metric]
u = zero
[gravitino]
chi = file
file = a/fields_chi.csv
[phi]
init = file
file = a/fields_phi.csv
[psi]
init = file
file = a/fields_psi.csv
)";
  const fs::path ini = write_ini(dir, body);
  ASSERT_EQ(run_cmd(ini, dir / "b", "eval"), 0);
  for (const char* f : {"fields_phi.csv", "fields_psi.csv", "fields_chi.csv"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f));
}

TEST(Cli, ErrorsAreMachineReadable) {
  const fs::path dir = scratch("err");
  MapField phi = MapField::Zero(64, 3);
  phi.col(2).setConstant(1.5);
  write_field_csv(dir / "off.csv", {"phi", 8, 8, 3, phi});
  const fs::path ini = write_ini(dir, "[grid]\nn1 = 8\nn2 = 8\n[phi]\ninit = file\nfile = off.csv\n");
  std::string err;
  EXPECT_EQ(run_cmd(ini, dir / "o", "eval", &err), 3);
  const nlohmann::json j = nlohmann::json::parse(err);
  EXPECT_EQ(j["error"]["type"], "constraint");

  write_field_csv(dir / "wrong.csv", {"phi", 4, 4, 3, MapField::Zero(16, 3)});
  const fs::path ini2 = write_ini(dir, "[grid]\nn1 = 8\nn2 = 8\n[phi]\ninit = file\nfile = wrong.csv\n");
  EXPECT_EQ(run_cmd(ini2, dir / "o", "eval", &err), 2);
  EXPECT_EQ(nlohmann::json::parse(err)["error"]["type"], "config");
  EXPECT_EQ(run_cmd(ini2, dir / "o", "launch", &err), 2);
}
