#include "regimecast/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace regimecast {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& path) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument(path + ": non-numeric cell '" + cell + "' at row " +
                                std::to_string(row));
  return v;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (row == 1) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size())
      throw std::invalid_argument(path + ": expected " + std::to_string(table.header.size()) +
                                  " cells at row " + std::to_string(row) + ", got " +
                                  std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw std::invalid_argument(path + ": empty file");
  return table;
}

Matrix parse_numeric(const CsvTable& table, std::size_t first_col, const std::string& path) {
  const std::size_t cols = table.header.size() - first_col;
  Matrix out(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      out(i, j) = parse_cell(table.rows[i][first_col + j], i + 2, path);
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& values) {
  write_csv(path, std::string(), {}, header, values);
}

void write_csv(const std::string& path, const std::string& key_name,
               const std::vector<std::string>& keys, const std::vector<std::string>& header,
               const Matrix& values) {
  require(static_cast<Eigen::Index>(header.size()) == values.cols(),
          "write_csv: header/column mismatch for " + path);
  const bool keyed = !key_name.empty();
  if (keyed)
    require(static_cast<Eigen::Index>(keys.size()) == values.rows(),
            "write_csv: key/row mismatch for " + path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (keyed) out << key_name << (header.empty() ? "" : ",");
  for (std::size_t j = 0; j < header.size(); ++j)
    out << header[j] << (j + 1 < header.size() ? "," : "");
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (keyed) out << keys[i] << (values.cols() > 0 ? "," : "");
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << format_double(values(i, j)) << (j + 1 < values.cols() ? "," : "");
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Dataset load_dataset(const std::string& path,
                     const std::map<std::string, std::string>& transforms,
                     const std::vector<std::string>& expected_names) {
  const CsvTable table = read_csv(path);
  require(table.header.size() >= 2, path + ": need a date column plus data columns");
  require(table.header[0] == "date", path + ": first column must be 'date'");
  require(!table.rows.empty(), path + ": no data rows");

  Dataset data;
  data.names.assign(table.header.begin() + 1, table.header.end());
  if (!expected_names.empty())
    require(data.names == expected_names,
            path + ": variable ordering does not match the configured ordering");

  data.levels = parse_numeric(table, 1, path);
  data.dates.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    Quarter d;
    try {
      d = Quarter::parse(table.rows[i][0]);
    } catch (const std::exception& e) {
      throw std::invalid_argument(path + ": row " + std::to_string(i + 2) + ": " + e.what());
    }
    if (!data.dates.empty() && !(data.dates.back() < d))
      throw std::invalid_argument(path + ": non-monotone date at row " + std::to_string(i + 2));
    data.dates.push_back(d);
  }

  for (std::size_t j = 0; j < data.names.size(); ++j) {
    const auto it = transforms.find(data.names[j]);
    if (it == transforms.end() || it->second == "none") continue;
    require(it->second == "log", path + ": unknown transform '" + it->second + "' for column " +
                                     data.names[j]);
    for (Eigen::Index t = 0; t < data.levels.rows(); ++t) {
      require(data.levels(t, j) > 0.0, path + ": log transform of non-positive value at row " +
                                           std::to_string(t + 2));
      data.levels(t, j) = std::log(data.levels(t, j));
    }
  }
  data.validate();
  return data;
}

void save_dataset(const Dataset& data, const std::string& path) {
  data.validate();
  std::vector<std::string> keys;
  keys.reserve(data.dates.size());
  for (const auto& d : data.dates) keys.push_back(d.str());
  write_csv(path, "date", keys, data.names, data.levels);
}

VintageStore VintageStore::from_directory(const std::string& dir,
                                          const std::map<std::string, std::string>& transforms,
                                          const std::vector<std::string>& expected_names) {
  require(fs::is_directory(dir), "vintage store: " + dir + " is not a directory");
  VintageStore store;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    const std::string stem = entry.path().stem().string();
    Quarter date;
    try {
      date = Quarter::parse(stem);
    } catch (const std::exception&) {
      continue;  // not a vintage file
    }
    store.vintages[date] = load_dataset(entry.path().string(), transforms, expected_names);
  }
  require(!store.vintages.empty(), "vintage store: no YYYYQq.csv files in " + dir);
  store.validate();
  return store;
}

void VintageStore::validate() const {
  const Dataset* prev = nullptr;
  const Quarter* prev_date = nullptr;
  for (const auto& [date, data] : vintages) {
    data.validate();
    if (prev) {
      require(data.rows() >= prev->rows(), "vintage store: vintage " + date.str() +
                                               " shrinks relative to " + prev_date->str());
      require(data.names == prev->names,
              "vintage store: variable set changes at vintage " + date.str());
    }
    prev = &data;
    prev_date = &date;
  }
}

}  // namespace regimecast
