#include "regimecast/data.hpp"

#include <cctype>
#include <charconv>

namespace regimecast {

std::string Quarter::str() const {
  return std::to_string(year) + "-Q" + std::to_string(q);
}

Quarter Quarter::parse(const std::string& text) {
  // YYYY[-]Qq
  std::size_t pos = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  require(pos == 4, "Quarter::parse: expected 4-digit year in '" + text + "'");
  std::size_t qpos = pos;
  if (qpos < text.size() && text[qpos] == '-') ++qpos;
  require(qpos < text.size() && (text[qpos] == 'Q' || text[qpos] == 'q'),
          "Quarter::parse: expected 'Q' in '" + text + "'");
  ++qpos;
  require(qpos + 1 == text.size() && std::isdigit(static_cast<unsigned char>(text[qpos])),
          "Quarter::parse: trailing characters in '" + text + "'");
  Quarter out;
  out.year = std::stoi(text.substr(0, 4));
  out.q = text[qpos] - '0';
  require(out.q >= 1 && out.q <= 4, "Quarter::parse: quarter out of range in '" + text + "'");
  return out;
}

void Dataset::validate() const {
  require(levels.rows() > 0 && levels.cols() > 0, "Dataset: empty panel");
  require(static_cast<Eigen::Index>(names.size()) == levels.cols(),
          "Dataset: name count does not match column count");
  require(static_cast<Eigen::Index>(dates.size()) == levels.rows(),
          "Dataset: date count does not match row count");
  require(levels.allFinite(), "Dataset: non-finite value in panel");
  for (std::size_t t = 1; t < dates.size(); ++t)
    require(dates[t - 1] < dates[t], "Dataset: dates not strictly increasing at row " +
                                         std::to_string(t + 1));
}

int Dataset::date_index(const Quarter& date) const {
  for (std::size_t t = 0; t < dates.size(); ++t)
    if (dates[t] == date) return static_cast<int>(t);
  return -1;
}

Dataset Dataset::truncated(const Quarter& through) const {
  const int idx = date_index(through);
  require(idx >= 0, "Dataset::truncated: date " + through.str() + " not in panel");
  Dataset out;
  out.levels = levels.topRows(idx + 1);
  out.names = names;
  out.dates.assign(dates.begin(), dates.begin() + idx + 1);
  return out;
}

}  // namespace regimecast
