#ifndef IFA_MANIFEST_HPP
#define IFA_MANIFEST_HPP

#include <optional>
#include <string>
#include <vector>

namespace ifa {

/// One reference/adversarial pair plus its attack metadata; the atomic
/// scoring unit.
struct StimulusPair {
  std::string stimulus_id;
  std::string ref_path;
  std::string test_path;
  std::string attack;      // FGSM, BIM, Deepfool, C&W, PGD, MIM
  std::string param_name;
  std::string param_value; // single value, or "v1;v2" for two-parameter attacks
  std::optional<double> mos;
  std::optional<double> ci95;
};

struct Manifest {
  std::vector<StimulusPair> pairs;
  std::string dataset_root;
  int schema_version = 1;
};

/// Loads a manifest from CSV (columns: stimulus_id,ref_path,test_path,
/// attack,param_name,param_value,mos,ci95) or JSON ({"schema_version",
/// "dataset_root", "pairs":[...]}), selected by file extension.
/// Relative image paths resolve against dataset_root (default: the
/// manifest's directory). Validation reports every problem, not just the
/// first; set check_files=false to skip image existence checks.
Manifest load_manifest(const std::string& path, bool check_files = true);

/// Resolves a pair's image paths against the manifest root.
std::string resolve_path(const Manifest& m, const std::string& p);

}  // namespace ifa

#endif
