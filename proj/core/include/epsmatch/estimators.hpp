#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "epsmatch/market.hpp"
#include "epsmatch/parallel.hpp"

namespace epsmatch {

enum class Method { Indicator, Integrand, EmpiricalCount };

std::string_view to_string(Method m) noexcept;
/// Accepts "indicator", "integrand", "empirical-count"; throws InvalidArgument otherwise.
Method parse_method(std::string_view name);

/// Monte Carlo estimate of a mean. When log_scale is set, mean and std_error
/// describe the natural log of the target.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  Method method = Method::Integrand;
  bool log_scale = false;
  /// Log scale only: false when std_error/mean >= 0.5 on the linear scale, in
  /// which case ci_low/ci_high are ln(mean -/+ 2 std_error) rather than
  /// mean -/+ 2 std_error.
  bool delta_method = true;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct EstimatorOptions {
  std::uint64_t samples = 1'000'000;
  Seed seed{};
  unsigned threads = 1;
  /// Exact-enumeration size limit for the empirical-count route.
  std::size_t enumeration_limit = 10;
};

inline constexpr std::uint64_t kDefaultPSamples = 1'000'000;
inline constexpr std::uint64_t kDefaultMarkets = 10'000;

/// Conditional probability that the diagonal matching is eps-stable given
/// its own entries x (firm side) and y (worker side):
///   prod_{i != j} (1 - p x_i y_j) * prod_l (1 - q x_l)^k,
/// evaluated as exp of a sum of log1p terms.
double integrand(std::span<const double> x, std::span<const double> y, std::size_t k,
                 const EpsParams& params);

/// Mean of the integrand over uniform (x, y); unbiased for P.
MCEstimate estimate_P_integrand(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options);

/// Fraction of random markets whose diagonal matching is eps-stable.
MCEstimate estimate_P_indicator(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options);

/// Mean exact count of eps-stable matchings over random markets;
/// options.samples is the number of markets.
MCEstimate estimate_S_empirical(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options);

/// ln((n+k)!/k!) by summing logarithms.
double log_falling_factorial(std::size_t n, std::size_t k);
/// Same value through the exact big-integer product; for cross-checking.
double log_falling_factorial_exact(std::size_t n, std::size_t k);

/// Converts a linear-scale estimate of a positive quantity into log scale,
/// adding `log_offset`. Throws DegenerateEstimate when the mean is 0.
MCEstimate to_log_scale(const MCEstimate& linear, double log_offset = 0.0);

/// ln S = ln (n+k)_n + ln P using the indicator or integrand route.
MCEstimate expected_count_log(std::size_t n, std::size_t k, const EpsParams& params,
                              Method method, const EstimatorOptions& options);

/// Linear-scale S estimate from any of the three routes.
MCEstimate estimate_S(std::size_t n, std::size_t k, const EpsParams& params, Method method,
                      const EstimatorOptions& options);

}  // namespace epsmatch
