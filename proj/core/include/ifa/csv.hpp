#ifndef IFA_CSV_HPP
#define IFA_CSV_HPP

#include <string>
#include <vector>

namespace ifa {

/// Minimal CSV support: comma-separated, optional double-quoted fields,
/// no embedded newlines. Enough for the manifest/score/report formats.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& field);

}  // namespace ifa

#endif
