#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace regimecast {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Collects non-fatal messages (degenerate data, numerical floors, ...).
// Callers that do not care pass nullptr and the message goes to stderr.
class WarningSink {
 public:
  void add(std::string msg) { messages_.push_back(std::move(msg)); }
  const std::vector<std::string>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

 private:
  std::vector<std::string> messages_;
};

void warn(WarningSink* sink, std::string msg);

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace regimecast
