#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace epsmatch::harness {

struct SelftestOptions {
  std::uint64_t seed = 20240601;
  unsigned threads = 1;
  std::uint64_t p_samples = 200'000;
  std::uint64_t markets = 5'000;
  /// Statistical checks pass within this many (combined) standard errors.
  double sigmas = 4.0;
  bool include_matrix = true;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::vector<std::string> failures() const;
};

/// Closed-form oracle checks for the estimators and spacings, a negative
/// check of the EpsParams invariants, and the 27-point cross-estimator
/// agreement matrix over n in {2,4,6}, k in {0,1,3}, eps*lambda in {0,0.1,0.5}.
SelftestReport run_selftest(const SelftestOptions& options);

void write_selftest_report(std::ostream& out, const SelftestReport& report);

}  // namespace epsmatch::harness
