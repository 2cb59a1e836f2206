#include "epsmatch/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "epsmatch/enumeration.hpp"
#include "epsmatch/error.hpp"
#include "epsmatch/stability.hpp"

namespace epsmatch {

namespace {

void require_samples(std::uint64_t samples) {
  if (samples < 2) throw InvalidArgument("at least 2 samples are required");
}

// Each route draws from its own family of sub-streams so that estimates of
// the same quantity by different routes are independent for a shared seed.
Seed route_seed(Seed seed, Method method) noexcept {
  return Seed{seed.value, splitmix64(seed.stream ^ (0xA24BAED4963EE407ull * (static_cast<std::uint64_t>(method) + 1)))};
}

MCEstimate finish(const Moments& m, Method method) {
  MCEstimate e;
  e.mean = m.mean;
  e.std_error = m.stderr_of_mean();
  e.samples = m.count;
  e.method = method;
  e.ci_low = e.mean - 2.0 * e.std_error;
  e.ci_high = e.mean + 2.0 * e.std_error;
  return e;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Indicator: return "indicator";
    case Method::Integrand: return "integrand";
    case Method::EmpiricalCount: return "empirical-count";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "indicator") return Method::Indicator;
  if (name == "integrand") return Method::Integrand;
  if (name == "empirical-count" || name == "empirical") return Method::EmpiricalCount;
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected indicator, integrand or empirical-count)");
}

double integrand(std::span<const double> x, std::span<const double> y, std::size_t k,
                 const EpsParams& params) {
  const std::size_t n = x.size();
  if (y.size() != n) throw InvalidArgument("integrand: x and y must have equal length");
  const double p = params.p();
  const double q = params.q();
  double log_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double px = p * x[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double t = px * y[j];
      if (t >= 1.0) return 0.0;
      log_sum += std::log1p(-t);
    }
  }
  if (k > 0) {
    double unmatched = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double t = q * x[l];
      if (t >= 1.0) return 0.0;
      unmatched += std::log1p(-t);
    }
    log_sum += static_cast<double>(k) * unmatched;
  }
  return std::exp(log_sum);
}

MCEstimate estimate_P_integrand(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options) {
  require_samples(options.samples);
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  const Seed base = route_seed(options.seed, Method::Integrand);
  const Moments m = reduce_replicates(options.samples, options.threads, [&](std::size_t r) {
    thread_local std::vector<double> xy;
    xy.resize(2 * n);
    CounterRng rng(base.substream(r));
    for (double& v : xy) v = rng.uniform();
    return integrand(std::span(xy).first(n), std::span(xy).last(n), k, params);
  });
  return finish(m, Method::Integrand);
}

MCEstimate estimate_P_indicator(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options) {
  require_samples(options.samples);
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  const Matching diagonal = Matching::diagonal(n, n + k);
  const Seed base = route_seed(options.seed, Method::Indicator);
  const Moments m = reduce_replicates(options.samples, options.threads, [&](std::size_t r) {
    const Market market = generate_market(n, k, base.substream(r));
    return is_eps_stable(market, diagonal, params) ? 1.0 : 0.0;
  });
  return finish(m, Method::Indicator);
}

MCEstimate estimate_S_empirical(std::size_t n, std::size_t k, const EpsParams& params,
                                const EstimatorOptions& options) {
  require_samples(options.samples);
  if (n > options.enumeration_limit) {
    throw InstanceTooLarge("instance too large for exact enumeration: n=" + std::to_string(n) +
                           " exceeds limit " + std::to_string(options.enumeration_limit));
  }
  CountOptions count_options;
  count_options.limit = options.enumeration_limit;
  count_options.threads = 1;
  const Seed base = route_seed(options.seed, Method::EmpiricalCount);
  const Moments m = reduce_replicates(options.samples, options.threads, [&](std::size_t r) {
    const Market market = generate_market(n, k, base.substream(r));
    return count_eps_stable(market, params, count_options).count.convert_to<double>();
  });
  return finish(m, Method::EmpiricalCount);
}

double log_falling_factorial(std::size_t n, std::size_t k) {
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  double s = 0.0;
  for (std::size_t t = k + 1; t <= n + k; ++t) s += std::log(static_cast<double>(t));
  return s;
}

double log_falling_factorial_exact(std::size_t n, std::size_t k) {
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  if (n + k > 170) throw InvalidArgument("exact path limited to n+k <= 170");
  return std::log(falling_factorial(n, k).convert_to<double>());
}

MCEstimate to_log_scale(const MCEstimate& linear, double log_offset) {
  if (!(linear.mean > 0.0)) {
    throw DegenerateEstimate("estimate degenerate: no successes in " +
                             std::to_string(linear.samples) +
                             " samples; raise --samples");
  }
  MCEstimate e = linear;
  e.log_scale = true;
  const double rel = linear.std_error / linear.mean;
  e.mean = log_offset + std::log(linear.mean);
  e.std_error = rel;
  e.delta_method = rel < 0.5;
  if (e.delta_method) {
    e.ci_low = e.mean - 2.0 * rel;
    e.ci_high = e.mean + 2.0 * rel;
  } else {
    const double lo = linear.mean - 2.0 * linear.std_error;
    e.ci_low = lo > 0.0 ? log_offset + std::log(lo) : -std::numeric_limits<double>::infinity();
    e.ci_high = log_offset + std::log(linear.mean + 2.0 * linear.std_error);
  }
  return e;
}

MCEstimate expected_count_log(std::size_t n, std::size_t k, const EpsParams& params,
                              Method method, const EstimatorOptions& options) {
  MCEstimate p;
  switch (method) {
    case Method::Indicator: p = estimate_P_indicator(n, k, params, options); break;
    case Method::Integrand: p = estimate_P_integrand(n, k, params, options); break;
    case Method::EmpiricalCount:
      throw InvalidArgument("expected_count_log takes the indicator or integrand route");
  }
  return to_log_scale(p, log_falling_factorial(n, k));
}

MCEstimate estimate_S(std::size_t n, std::size_t k, const EpsParams& params, Method method,
                      const EstimatorOptions& options) {
  if (method == Method::EmpiricalCount) return estimate_S_empirical(n, k, params, options);
  MCEstimate e = method == Method::Indicator ? estimate_P_indicator(n, k, params, options)
                                             : estimate_P_integrand(n, k, params, options);
  const double scale = std::exp(log_falling_factorial(n, k));
  e.mean *= scale;
  e.std_error *= scale;
  e.ci_low *= scale;
  e.ci_high *= scale;
  return e;
}

}  // namespace epsmatch
