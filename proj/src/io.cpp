#include "gsm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gsm {

namespace {

std::runtime_error io_error(const std::filesystem::path& path, const std::string& what) {
  return std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw io_error(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error(path, "cannot open for reading");
  return in;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e) throw io_error(path, "bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

void validate(const FieldFile& f, const std::filesystem::path& path) {
  if (f.n1 < 1 || f.n2 < 1) throw io_error(path, "bad grid size in header");
  if (f.data.rows() != static_cast<Eigen::Index>(f.n1) * f.n2) throw io_error(path, "row count does not match n1*n2");
  const int comps = field_components(f.kind, f.K);
  if (f.data.cols() != comps) throw io_error(path, "column count does not match the field kind");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

int field_components(const std::string& kind, int K) {
  if (kind == "phi" || kind == "r_phi") return K;
  if (kind == "psi" || kind == "r_psi") return 4 * K;
  if (kind == "chi") return 8;
  if (kind == "u") return 1;
  throw std::invalid_argument("unknown field kind '" + kind + "'");
}

// CSV layout:
//   # kind=<kind> n1=<n1> n2=<n2> K=<K> components=<c>
//   site,i,j,v0,...,v{c-1}
//   one row per site, site = i + n1*j
void write_field_csv(const std::filesystem::path& path, const FieldFile& f) {
  validate(f, path);
  std::ofstream out = open_out(path);
  out << "# kind=" << f.kind << " n1=" << f.n1 << " n2=" << f.n2 << " K=" << f.K
      << " components=" << f.data.cols() << "\n";
  out << "site,i,j";
  for (Eigen::Index c = 0; c < f.data.cols(); ++c) out << ",v" << c;
  out << "\n";
  for (Eigen::Index s = 0; s < f.data.rows(); ++s) {
    out << s << ',' << s % f.n1 << ',' << s / f.n1;
    for (Eigen::Index c = 0; c < f.data.cols(); ++c) out << ',' << format_double(f.data(s, c));
    out << "\n";
  }
  if (!out) throw io_error(path, "write failed");
}

FieldFile read_field_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw io_error(path, "missing header line");
  std::map<std::string, std::string> kv;
  std::istringstream hs(line.substr(2));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw io_error(path, "bad header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"kind", "n1", "n2", "K", "components"})
    if (!kv.count(key)) throw io_error(path, std::string("header lacks ") + key);
  FieldFile f;
  f.kind = kv["kind"];
  f.n1 = std::stoi(kv["n1"]);
  f.n2 = std::stoi(kv["n2"]);
  f.K = std::stoi(kv["K"]);
  const int comps = std::stoi(kv["components"]);
  if (!std::getline(in, line)) throw io_error(path, "missing column line");
  if (static_cast<int>(split(line, ',').size()) != comps + 3) throw io_error(path, "column line does not match header");
  f.data.resize(static_cast<Eigen::Index>(f.n1) * f.n2, comps);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (static_cast<int>(cells.size()) != comps + 3) throw io_error(path, "bad row " + std::to_string(row));
    if (row >= f.data.rows()) throw io_error(path, "too many rows");
    if (std::stol(cells[0]) != row) throw io_error(path, "rows out of order at " + std::to_string(row));
    for (int c = 0; c < comps; ++c) f.data(row, c) = parse_double(cells[3 + c], path);
    ++row;
  }
  if (row != f.data.rows()) throw io_error(path, "too few rows");
  validate(f, path);
  return f;
}

// JSON layout: {"kind", "n1", "n2", "K", "components", "data": [[v0, ...], ...]} one inner array per site
void write_field_json(const std::filesystem::path& path, const FieldFile& f) {
  validate(f, path);
  nlohmann::json j;
  j["kind"] = f.kind;
  j["n1"] = f.n1;
  j["n2"] = f.n2;
  j["K"] = f.K;
  j["components"] = f.data.cols();
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index s = 0; s < f.data.rows(); ++s) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index c = 0; c < f.data.cols(); ++c) r.push_back(f.data(s, c));
    rows.push_back(std::move(r));
  }
  j["data"] = std::move(rows);
  write_json(path, j);
}

FieldFile read_field_json(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  FieldFile f;
  try {
    f.kind = j.at("kind").get<std::string>();
    f.n1 = j.at("n1").get<int>();
    f.n2 = j.at("n2").get<int>();
    f.K = j.at("K").get<int>();
    const int comps = j.at("components").get<int>();
    const auto& rows = j.at("data");
    f.data.resize(static_cast<Eigen::Index>(rows.size()), comps);
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (static_cast<int>(rows[s].size()) != comps) throw io_error(path, "bad row " + std::to_string(s));
      for (int c = 0; c < comps; ++c) f.data(s, c) = rows[s][c].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw io_error(path, e.what());
  }
  validate(f, path);
  return f;
}

FieldFile read_field(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_field_csv(path);
  if (ext == ".json") return read_field_json(path);
  throw io_error(path, "unknown field file extension");
}

nlohmann::json to_json(const ActionBreakdown& a) {
  return {{"I_dirichlet", a.dirichlet}, {"II_dirac", a.dirac}, {"III_gravitino", a.gravitino},
          {"IV_qchi", a.qchi},           {"V_curvature", a.curvature}, {"total", a.total}};
}

ActionBreakdown action_from_json(const nlohmann::json& j) {
  ActionBreakdown a;
  a.dirichlet = j.at("I_dirichlet").get<double>();
  a.dirac = j.at("II_dirac").get<double>();
  a.gravitino = j.at("III_gravitino").get<double>();
  a.qchi = j.at("IV_qchi").get<double>();
  a.curvature = j.at("V_curvature").get<double>();
  a.total = j.at("total").get<double>();
  return a;
}

nlohmann::json to_json(const NormPair& n) { return {{"l2", n.l2}, {"linf", n.linf}}; }

nlohmann::json to_json(const FlowRecord& r) {
  return {{"iteration", r.iteration},
          {"action", to_json(r.action)},
          {"residual_phi", to_json(r.residual_phi)},
          {"residual_psi", to_json(r.residual_psi)},
          {"combined", r.combined},
          {"step_size", r.step_size},
          {"rejected", r.rejected}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw io_error(path, "write failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw io_error(path, e.what());
  }
}

void write_flow_report(const std::filesystem::path& path, const FlowReport& report) {
  std::ofstream out = open_out(path);
  for (const FlowRecord& r : report.records) out << to_json(r).dump() << "\n";
  nlohmann::json summary = {{"summary", true},
                            {"converged", report.converged},
                            {"iterations", report.iterations},
                            {"reason", report.reason}};
  out << summary.dump() << "\n";
  if (!out) throw io_error(path, "write failed");
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw io_error(path, e.what());
    }
  }
  return out;
}

void write_decay_profile(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "r,value\n";
  for (const auto& [r, v] : rows) out << format_double(r) << ',' << format_double(v) << "\n";
  if (!out) throw io_error(path, "write failed");
}

std::vector<std::pair<double, double>> read_decay_profile(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "r,value") throw io_error(path, "missing header");
  std::vector<std::pair<double, double>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2) throw io_error(path, "bad row");
    out.emplace_back(parse_double(cells[0], path), parse_double(cells[1], path));
  }
  return out;
}

}  // namespace gsm
