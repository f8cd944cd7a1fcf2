#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grafcat {

using Id = std::string;

/// Raised for precondition violations and malformed inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome of a structural check: one entry per violated clause.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  explicit operator bool() const { return ok(); }

  void add(std::string clause) { violations.push_back(std::move(clause)); }
  void merge(const ValidationReport& other, const std::string& prefix = {}) {
    for (const auto& v : other.violations) violations.push_back(prefix + v);
  }
  bool mentions(const std::string& needle) const {
    for (const auto& v : violations)
      if (v.find(needle) != std::string::npos) return true;
    return false;
  }
  std::string str() const {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }
};

}  // namespace grafcat
