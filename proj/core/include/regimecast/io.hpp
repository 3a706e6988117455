#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regimecast/data.hpp"
#include "regimecast/types.hpp"

namespace regimecast {

// Shortest representation that round-trips the double exactly.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // all rows have header.size() cells
};

// Strict parser: rejects ragged rows and empty files, reports row numbers.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values);
// Variant with a leading string column (dates, labels, ...).
void write_csv(const std::string& path, const std::string& key_name,
               const std::vector<std::string>& keys, const std::vector<std::string>& header,
               const Matrix& values);

Matrix parse_numeric(const CsvTable& table, std::size_t first_col, const std::string& path);

// Loads a level panel from CSV (header: date, then variable columns) and
// applies per-column transforms ("none" | "log"). When expected_names is
// non-empty the header must match that ordering exactly.
Dataset load_dataset(const std::string& path,
                     const std::map<std::string, std::string>& transforms = {},
                     const std::vector<std::string>& expected_names = {});

void save_dataset(const Dataset& data, const std::string& path);

// Real-time snapshots keyed by vintage date; files named YYYYQq.csv.
struct VintageStore {
  std::map<Quarter, Dataset> vintages;

  static VintageStore from_directory(const std::string& dir,
                                     const std::map<std::string, std::string>& transforms = {},
                                     const std::vector<std::string>& expected_names = {});
  // Within-vintage monotone dates are checked at load; this verifies that
  // later vintages extend or revise earlier ones (never shrink).
  void validate() const;
};

}  // namespace regimecast
