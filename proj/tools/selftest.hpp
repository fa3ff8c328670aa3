#ifndef ITC_TOOLS_SELFTEST_HPP
#define ITC_TOOLS_SELFTEST_HPP

#include <string>
#include <vector>

namespace itc::tools {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // failure explanation, empty on pass
};

struct SelftestOptions {
  std::string golden_rsc_path;
};

// Runs every built-in consistency check; never throws.
std::vector<CheckResult> run_selftests(const SelftestOptions& options);

}  // namespace itc::tools

#endif  // ITC_TOOLS_SELFTEST_HPP
