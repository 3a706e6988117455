#pragma once

#include <compare>
#include <string>
#include <vector>

#include "regimecast/types.hpp"

namespace regimecast {

// Quarterly period identifier, serialized as "1999-Q1".
struct Quarter {
  int year = 1999;
  int q = 1;

  auto operator<=>(const Quarter&) const = default;

  Quarter next() const { return q == 4 ? Quarter{year + 1, 1} : Quarter{year, q + 1}; }
  std::string str() const;
  // Accepts "1999-Q1" and the compact vintage-file form "1999Q1".
  static Quarter parse(const std::string& text);
};

// T x m panel of level observations with quarterly dates and variable names.
struct Dataset {
  Matrix levels;                    // T x m
  std::vector<std::string> names;   // m labels
  std::vector<Quarter> dates;       // T identifiers, strictly increasing

  Eigen::Index rows() const { return levels.rows(); }
  Eigen::Index cols() const { return levels.cols(); }

  // Throws if dimensions disagree, values are non-finite, or dates do not
  // increase strictly.
  void validate() const;

  // Rows up to and including `through` (error if the date is not present).
  Dataset truncated(const Quarter& through) const;

  int date_index(const Quarter& date) const;  // -1 if absent
};

}  // namespace regimecast
