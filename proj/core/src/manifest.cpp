#include "ifa/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ifa/csv.hpp"

namespace fs = std::filesystem;

namespace ifa {

namespace {

const std::set<std::string> kKnownAttacks = {"FGSM", "BIM",      "Deepfool",
                                             "C&W",  "PGD",      "MIM"};

std::optional<double> parse_opt_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

Manifest parse_manifest_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  const char* required[] = {"stimulus_id", "ref_path", "test_path",
                            "attack",      "param_name", "param_value"};
  std::vector<std::string> errors;
  for (const char* col : required) {
    if (t.column(col) < 0) errors.push_back(std::string("missing column: ") + col);
  }
  if (!errors.empty() || t.rows.empty()) {
    std::string msg = "manifest schema error:";
    if (t.header.empty()) msg += " empty file";
    for (const auto& e : errors) msg += "\n  " + e;
    if (t.rows.empty() && t.header.size()) msg += "\n  no data rows";
    throw std::runtime_error(msg);
  }
  const int ci_id = t.column("stimulus_id"), ci_ref = t.column("ref_path"),
            ci_test = t.column("test_path"), ci_attack = t.column("attack"),
            ci_pn = t.column("param_name"), ci_pv = t.column("param_value"),
            ci_mos = t.column("mos"), ci_ci = t.column("ci95");

  Manifest m;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row.size() < t.header.size()) {
      errors.push_back("row " + std::to_string(r + 2) + ": too few fields");
      continue;
    }
    StimulusPair p;
    p.stimulus_id = row[ci_id];
    p.ref_path = row[ci_ref];
    p.test_path = row[ci_test];
    p.attack = row[ci_attack];
    p.param_name = row[ci_pn];
    p.param_value = row[ci_pv];
    try {
      if (ci_mos >= 0) p.mos = parse_opt_double(row[ci_mos]);
      if (ci_ci >= 0) p.ci95 = parse_opt_double(row[ci_ci]);
    } catch (const std::exception& e) {
      errors.push_back("row " + std::to_string(r + 2) + ": " + e.what());
    }
    if (p.stimulus_id.empty()) {
      errors.push_back("row " + std::to_string(r + 2) + ": empty stimulus_id");
    }
    if (!kKnownAttacks.count(p.attack)) {
      errors.push_back("row " + std::to_string(r + 2) + ": unknown attack '" +
                       p.attack + "'");
    }
    m.pairs.push_back(std::move(p));
  }
  if (!errors.empty()) {
    std::string msg = "manifest validation failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  return m;
}

Manifest parse_manifest_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("manifest JSON parse error: ") + e.what());
  }
  Manifest m;
  std::vector<std::string> errors;
  m.schema_version = j.value("schema_version", 1);
  m.dataset_root = j.value("dataset_root", std::string());
  if (!j.contains("pairs") || !j["pairs"].is_array() || j["pairs"].empty()) {
    throw std::runtime_error("manifest schema error: missing or empty 'pairs' array");
  }
  std::size_t idx = 0;
  for (const auto& e : j["pairs"]) {
    StimulusPair p;
    try {
      p.stimulus_id = e.at("stimulus_id").get<std::string>();
      p.ref_path = e.at("ref_path").get<std::string>();
      p.test_path = e.at("test_path").get<std::string>();
      p.attack = e.at("attack").get<std::string>();
      p.param_name = e.value("param_name", std::string());
      p.param_value = e.contains("param_value") && e["param_value"].is_number()
                          ? std::to_string(e["param_value"].get<double>())
                          : e.value("param_value", std::string());
      if (e.contains("mos") && !e["mos"].is_null()) p.mos = e["mos"].get<double>();
      if (e.contains("ci95") && !e["ci95"].is_null()) p.ci95 = e["ci95"].get<double>();
    } catch (const std::exception& ex) {
      errors.push_back("pairs[" + std::to_string(idx) + "]: " + ex.what());
    }
    if (!kKnownAttacks.count(p.attack)) {
      errors.push_back("pairs[" + std::to_string(idx) + "]: unknown attack '" +
                       p.attack + "'");
    }
    m.pairs.push_back(std::move(p));
    ++idx;
  }
  if (!errors.empty()) {
    std::string msg = "manifest validation failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  return m;
}

}  // namespace

std::string resolve_path(const Manifest& m, const std::string& p) {
  fs::path path(p);
  if (path.is_absolute() || m.dataset_root.empty()) return p;
  return (fs::path(m.dataset_root) / path).string();
}

Manifest load_manifest(const std::string& path, bool check_files) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Manifest m = fs::path(path).extension() == ".json" ? parse_manifest_json(text)
                                                     : parse_manifest_csv(text);
  if (m.dataset_root.empty()) {
    m.dataset_root = fs::path(path).parent_path().string();
  }

  std::vector<std::string> errors;
  std::set<std::string> seen;
  for (const auto& p : m.pairs) {
    if (!seen.insert(p.stimulus_id).second) {
      errors.push_back("duplicate stimulus_id: " + p.stimulus_id);
    }
  }
  if (check_files) {
    // every missing file listed, not first-failure
    for (const auto& p : m.pairs) {
      for (const std::string& f : {p.ref_path, p.test_path}) {
        const std::string full = resolve_path(m, f);
        if (!fs::exists(full)) errors.push_back("missing file: " + full);
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "manifest validation failed:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::runtime_error(msg);
  }
  return m;
}

}  // namespace ifa
