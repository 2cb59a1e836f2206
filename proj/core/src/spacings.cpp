#include "epsmatch/spacings.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "epsmatch/error.hpp"
#include "epsmatch/parallel.hpp"

namespace epsmatch {

namespace {

constexpr std::size_t kLongDoubleMaxEll = 24;
constexpr double kSeriesCutoff = 1e-4;

class MpfrValue {
 public:
  explicit MpfrValue(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
  ~MpfrValue() { mpfr_clear(v_); }
  MpfrValue(const MpfrValue&) = delete;
  MpfrValue& operator=(const MpfrValue&) = delete;
  mpfr_ptr get() noexcept { return v_; }

 private:
  mpfr_t v_;
};

double cdf_long_double(std::size_t ell, double a, std::size_t terms) {
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (std::size_t j = 0; j <= terms; ++j) {
    if (j > 0) binom = binom * static_cast<long double>(ell - j + 1) / static_cast<long double>(j);
    const long double base = 1.0L - static_cast<long double>(j) * a;
    if (base <= 0.0L) break;
    const long double term = binom * std::pow(base, static_cast<long double>(ell - 1));
    sum += (j % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum);
}

double cdf_mpfr(std::size_t ell, double a, std::size_t terms) {
  const auto bits = static_cast<mpfr_prec_t>(ell + 80);
  MpfrValue sum(bits), binom(bits), base(bits), aa(bits);
  mpfr_set_zero(sum.get(), 1);
  mpfr_set_ui(binom.get(), 1, MPFR_RNDN);
  mpfr_set_d(aa.get(), a, MPFR_RNDN);
  for (std::size_t j = 0; j <= terms; ++j) {
    if (j > 0) {
      mpfr_mul_ui(binom.get(), binom.get(), static_cast<unsigned long>(ell - j + 1), MPFR_RNDN);
      mpfr_div_ui(binom.get(), binom.get(), static_cast<unsigned long>(j), MPFR_RNDN);
    }
    mpfr_mul_ui(base.get(), aa.get(), static_cast<unsigned long>(j), MPFR_RNDN);
    mpfr_ui_sub(base.get(), 1, base.get(), MPFR_RNDN);
    if (mpfr_sgn(base.get()) <= 0) break;
    mpfr_pow_ui(base.get(), base.get(), static_cast<unsigned long>(ell - 1), MPFR_RNDN);
    mpfr_mul(base.get(), base.get(), binom.get(), MPFR_RNDN);
    if (j % 2 == 0) {
      mpfr_add(sum.get(), sum.get(), base.get(), MPFR_RNDN);
    } else {
      mpfr_sub(sum.get(), sum.get(), base.get(), MPFR_RNDN);
    }
  }
  return mpfr_get_d(sum.get(), MPFR_RNDN);
}

// F extended continuously to z = 0.
double f_ratio_closed(double z) {
  if (z < kSeriesCutoff) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
  return -std::expm1(-z) / z;
}

// (z + 1)|(log F)'(z)|
double a_integrand(double z) { return (z + 1.0) * std::abs(log_f_prime(z)); }

}  // namespace

SpacingSample sample_spacings(std::size_t ell, Seed seed) {
  if (ell == 0) throw InvalidArgument("ell must be >= 1");
  CounterRng rng(seed);
  SpacingSample s;
  s.ell = ell;
  s.lengths.resize(ell);
  double total = 0.0;
  for (double& w : s.lengths) {
    w = rng.exponential();
    total += w;
  }
  for (double& w : s.lengths) {
    w /= total;
    s.max_spacing = std::max(s.max_spacing, w);
    s.sum_squares += w * w;
  }
  return s;
}

double max_spacing_cdf(std::size_t ell, double a) {
  if (ell == 0) throw InvalidArgument("ell must be >= 1");
  if (!(a > 0.0)) throw InvalidArgument("max_spacing_cdf: a must be > 0");
  if (a >= 1.0) return 1.0;
  if (ell == 1) return 0.0;  // the single spacing is 1
  // floor(1/a) <= ell - 1 whenever the result can be non-zero.
  const std::size_t terms = std::min<std::size_t>(ell, static_cast<std::size_t>(std::floor(1.0 / a)));
  const double v = ell <= kLongDoubleMaxEll ? cdf_long_double(ell, a, terms)
                                            : cdf_mpfr(ell, a, terms);
  return std::clamp(v, 0.0, 1.0);
}

double density_S(std::size_t ell, double s) {
  if (ell == 0) throw InvalidArgument("ell must be >= 1");
  const auto l = static_cast<double>(ell);
  if (!(s > 0.0) || !(s < l)) return 0.0;
  const double envelope = std::exp((l - 1.0) * std::log(s) - std::lgamma(l));
  return envelope * max_spacing_cdf(ell, 1.0 / s);
}

BoundsReport check_domination(std::size_t ell, std::size_t points) {
  if (ell < 2) throw InvalidArgument("check_domination requires ell >= 2");
  if (points == 0) throw InvalidArgument("check_domination requires grid points");
  BoundsReport report;
  const auto l = static_cast<double>(ell);
  std::ostringstream g;
  g << points << " uniform interior points of (0, " << ell << ")";
  report.grid = g.str();
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= points; ++i) {
    const double s = l * static_cast<double>(i) / static_cast<double>(points + 1);
    const double lhs = density_S(ell, s);
    const double rhs = std::exp((l - 1.0) * std::log(s) - std::lgamma(l));
    ++report.checked;
    report.worst_margin = std::max(report.worst_margin, lhs - rhs);
    if (lhs > rhs) report.violations.push_back({"s=" + std::to_string(s), lhs, rhs});
  }
  return report;
}

SpacingMoments spacing_moments(std::size_t ell, std::uint64_t samples, Seed seed,
                               unsigned threads) {
  if (ell < 2) throw InvalidArgument("spacing_moments requires ell >= 2 (ln 1 = 0)");
  if (samples < 100) throw InvalidArgument("spacing_moments requires samples >= 100");
  std::vector<std::pair<double, double>> values(samples);
  const double l = static_cast<double>(ell);
  parallel_for(samples, threads, [&](std::size_t r) {
    const SpacingSample s = sample_spacings(ell, seed.substream(r));
    values[r] = {s.max_spacing * l / std::log(l), l * s.sum_squares};
  });
  Moments mx, mu;
  for (const auto& [a, b] : values) {
    mx.add(a);
    mu.add(b);
  }
  SpacingMoments out;
  out.ell = ell;
  out.samples = samples;
  out.mean_max_normalized = mx.mean;
  out.stderr_max_normalized = mx.stderr_of_mean();
  out.mean_ell_u = mu.mean;
  out.stderr_ell_u = mu.stderr_of_mean();
  out.exact_mean_ell_u = 2.0 * l * l / ((l + 1.0) * (l + 2.0));
  return out;
}

double dkw_band(std::uint64_t samples, double alpha) {
  if (samples == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("dkw_band needs samples > 0 and alpha in (0,1)");
  }
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(samples)));
}

EcdfCheck check_max_spacing_ecdf(std::size_t ell, std::uint64_t samples, Seed seed, double alpha,
                                 unsigned threads) {
  if (ell < 2) throw InvalidArgument("ecdf check requires ell >= 2");
  std::vector<double> maxima(samples);
  parallel_for(samples, threads, [&](std::size_t r) {
    maxima[r] = sample_spacings(ell, seed.substream(r)).max_spacing;
  });
  std::sort(maxima.begin(), maxima.end());
  std::vector<double> cdf(samples);
  parallel_for(samples, threads, [&](std::size_t i) { cdf[i] = max_spacing_cdf(ell, maxima[i]); });
  EcdfCheck out;
  out.ell = ell;
  out.samples = samples;
  out.band = dkw_band(samples, alpha);
  const auto n = static_cast<double>(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double above = static_cast<double>(i + 1) / n - cdf[i];
    const double below = cdf[i] - static_cast<double>(i) / n;
    out.sup_deviation = std::max({out.sup_deviation, above, below});
  }
  return out;
}

double f_ratio(double z) {
  if (!(z > 0.0)) throw InvalidArgument("f_ratio requires z > 0");
  return f_ratio_closed(z);
}

double log_f_prime(double z) {
  if (!(z > 0.0)) throw InvalidArgument("log_f_prime requires z > 0");
  if (z < kSeriesCutoff) {
    const double z2 = z * z;
    return -0.5 + z / 12.0 - z * z2 / 720.0 + z * z2 * z2 / 30240.0;
  }
  return 1.0 / std::expm1(z) - 1.0 / z;
}

BoundsReport estimate_A(const GridSpec& grid) {
  if (!(grid.z_min > 0.0 && grid.z_max > grid.z_min) || grid.points_per_decade == 0) {
    throw InvalidArgument("estimate_A: bad grid");
  }
  const double decades = std::log10(grid.z_max / grid.z_min);
  const auto points =
      static_cast<std::size_t>(std::ceil(decades * static_cast<double>(grid.points_per_decade))) + 1;
  std::vector<double> zs(points);
  for (std::size_t i = 0; i < points; ++i) {
    zs[i] = grid.z_min *
            std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double v = a_integrand(zs[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double sup = best_value;
  if (best > 0 && best + 1 < points) {
    // Golden-section search for the interior maximum between neighbours.
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = zs[best - 1], hi = zs[best + 1];
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = a_integrand(c), fd = a_integrand(d);
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - phi * (hi - lo);
        fc = a_integrand(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + phi * (hi - lo);
        fd = a_integrand(d);
      }
    }
    sup = std::max({sup, fc, fd});
  }
  sup = std::max({sup, 0.5, 1.0});

  BoundsReport report;
  report.a_constant = sup;
  std::ostringstream g;
  g << points << " log-spaced points on [" << grid.z_min << ", " << grid.z_max << "], "
    << grid.points_per_decade << " per decade, refined; limits 1/2 and 1";
  report.grid = g.str();
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (double z : zs) {
    const double v = a_integrand(z);
    ++report.checked;
    report.worst_margin = std::max(report.worst_margin, v - sup);
    if (v > sup) report.violations.push_back({"z=" + std::to_string(z), v, sup});
  }
  return report;
}

std::pair<double, double> product_bound_sides(const std::vector<double>& x, double p,
                                              double a_constant) {
  double s = 0.0;
  for (double v : x) s += v;
  double lhs = 0.0;
  for (double v : x) lhs += std::log(f_ratio_closed(std::max(0.0, s - v) * p));
  const double rhs = a_constant + static_cast<double>(x.size()) * std::log(f_ratio_closed(s * p));
  return {lhs, rhs};
}

BoundsReport check_product_bound(std::size_t n, double p, std::uint64_t trials, Seed seed,
                                 unsigned threads) {
  if (n < 2) throw InvalidArgument("check_product_bound requires n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("check_product_bound requires p in (0,1]");
  BoundsReport report = estimate_A();
  const double a = report.a_constant;
  std::ostringstream g;
  g << trials << " uniform draws of x in [0,1]^" << n << ", p=" << p;
  report.grid = g.str();
  report.violations.clear();
  report.checked = trials;
  std::vector<double> margins(trials);
  parallel_for(trials, threads, [&](std::size_t r) {
    CounterRng rng(seed.substream(r));
    std::vector<double> x(n);
    for (double& v : x) v = rng.uniform();
    const auto [lhs, rhs] = product_bound_sides(x, p, a);
    margins[r] = lhs - rhs;
  });
  report.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < trials; ++r) {
    report.worst_margin = std::max(report.worst_margin, margins[r]);
    // 1e-12 absorbs rounding in the log sums.
    if (margins[r] > 1e-12) {
      report.violations.push_back({"trial " + std::to_string(r), margins[r], 0.0});
    }
  }
  return report;
}

}  // namespace epsmatch
