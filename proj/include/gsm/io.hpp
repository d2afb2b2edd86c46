#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gsm/action.hpp"
#include "gsm/solver.hpp"

namespace gsm {

/// A grid field with its header. `data` rows are sites in row-major order (x fastest).
struct FieldFile {
  std::string kind;   // phi | psi | chi | u | r_phi | r_psi
  int n1 = 0;
  int n2 = 0;
  int K = 0;          // ambient dimension of the target (0 where it does not apply)
  FieldMatrix data;
};

/// Expected number of columns for a kind and ambient dimension.
int field_components(const std::string& kind, int K);

void write_field_csv(const std::filesystem::path& path, const FieldFile& f);
FieldFile read_field_csv(const std::filesystem::path& path);
void write_field_json(const std::filesystem::path& path, const FieldFile& f);
FieldFile read_field_json(const std::filesystem::path& path);
/// Dispatches on the extension (.csv or .json).
FieldFile read_field(const std::filesystem::path& path);

nlohmann::json to_json(const ActionBreakdown& a);
ActionBreakdown action_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NormPair& n);
nlohmann::json to_json(const FlowRecord& r);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

void write_flow_report(const std::filesystem::path& path, const FlowReport& report);
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

void write_decay_profile(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& rows);
std::vector<std::pair<double, double>> read_decay_profile(const std::filesystem::path& path);

/// Formats a double so that it parses back to the same value.
std::string format_double(double v);

}  // namespace gsm
