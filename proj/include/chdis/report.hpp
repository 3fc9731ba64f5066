#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace chdis {

/// Outcome of a single named diagnostic check.
struct CheckResult {
    std::string name;
    double residual = 0.0;   // worst residual observed
    double tolerance = 0.0;
    bool pass = true;
    double loc_t = std::nan("");  // time of the worst residual, if applicable
    double loc_x = std::nan("");  // x or xi of the worst residual, if applicable
    std::string note;
};

/// A set of check results, kept sorted by check name. Each name appears once;
/// adding a result under an existing name keeps the worse of the two.
class DiagnosticsReport {
  public:
    void add(CheckResult result);
    void merge(const DiagnosticsReport& other);
    bool all_pass() const;
    const CheckResult* find(std::string_view name) const;
    const std::vector<CheckResult>& checks() const { return checks_; }

  private:
    std::vector<CheckResult> checks_;
};

}  // namespace chdis
