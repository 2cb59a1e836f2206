#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "epsmatch/estimators.hpp"

namespace epsmatch::harness {

enum class RegimeKind { CCritical, Omega };

/// eps*lambda = coefficient * ln n / n, evaluated per n at run time.
struct RegimePoint {
  RegimeKind kind = RegimeKind::CCritical;
  double coefficient = 1.0;

  [[nodiscard]] double eps_lambda(std::size_t n) const;
  [[nodiscard]] std::string label() const;
};

struct SweepConfig {
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> k_list{0};
  std::vector<RegimePoint> regimes;
  std::vector<Method> methods{Method::Integrand};
  std::uint64_t samples = kDefaultPSamples;
  std::uint64_t markets = kDefaultMarkets;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t enumeration_limit = 10;
  /// Record wall time in the seconds column; 0 is written otherwise so that
  /// repeated runs produce identical bytes.
  bool timing = false;
  std::string out;

  /// Throws InvalidArgument on empty lists or non-positive coefficients.
  void validate() const;
};

/// Reads the flat JSON form: {"n_list":[..], "k_list":[..],
/// "regime":"c-critical"|"omega", "coefficients":[..], "c":[..], "omega":[..],
/// "methods":[..], "samples":N, "markets":N, "seed":N, "threads":N,
/// "limit":N, "timing":bool, "out":"path"}. Missing fields keep defaults.
SweepConfig sweep_config_from_json(const std::string& text);

RegimeKind parse_regime(const std::string& name);

inline constexpr const char* kSweepCsvHeader =
    "n,k,eps,lambda,regime,method,samples,mean_log,stderr_log,seconds";

struct SweepRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double eps = 0.0;
  double lambda = 1.0;
  std::string regime;
  Method method = Method::Integrand;
  std::uint64_t samples = 0;
  double mean_log = 0.0;
  double stderr_log = 0.0;
  double seconds = 0.0;
  bool degenerate = false;
};

std::string format_sweep_row(const SweepRow& row);
/// Inverse of format_sweep_row; throws InvalidArgument on malformed lines.
SweepRow parse_sweep_row(const std::string& line);

struct SlopeSummary {
  std::size_t k = 0;
  std::string regime;
  Method method = Method::Integrand;
  /// Least-squares slope of (log S)/(log n) against n over the non-degenerate rows.
  double slope = 0.0;
  std::size_t points = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SlopeSummary> slopes;
};

/// Runs every (n, k, regime point, method) configuration with lambda = 1,
/// writing the header and then each row to `csv` as soon as it is computed.
/// Degenerate or oversized points produce a row with nan estimates.
SweepResult run_sweep(const SweepConfig& config, std::ostream& csv);

void write_slope_summary(std::ostream& out, const SweepResult& result);

}  // namespace epsmatch::harness
