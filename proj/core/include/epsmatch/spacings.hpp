#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epsmatch/rng.hpp"

namespace epsmatch {

/// Lengths of the ell pieces of [0,1] cut at ell-1 uniform points.
struct SpacingSample {
  std::size_t ell = 0;
  std::vector<double> lengths;
  double max_spacing = 0.0;  // L+ = max length
  double sum_squares = 0.0;  // U = sum of squared lengths
};

/// Draws ell exponentials and normalizes them by their sum.
SpacingSample sample_spacings(std::size_t ell, Seed seed);

/// P(max spacing <= a) = sum_{j=0}^{floor(1/a)} (-1)^j C(ell,j) (1 - j a)_+^(ell-1).
/// Evaluated in long double for ell <= 24 and in MPFR with ell+80 bits
/// beyond. Values a >= 1 give 1. Throws InvalidArgument for a <= 0.
double max_spacing_cdf(std::size_t ell, double a);

/// Density of the sum of ell independent uniforms:
/// s^(ell-1)/(ell-1)! * P(max spacing <= 1/s); zero outside (0, ell).
double density_S(std::size_t ell, double s);

struct BoundViolation {
  std::string where;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundsReport {
  double a_constant = 0.0;
  std::string grid;
  std::uint64_t checked = 0;
  /// Largest lhs - rhs seen (log scale for the product bound).
  double worst_margin = 0.0;
  std::vector<BoundViolation> violations;
};

/// Checks density_S(ell, s) <= s^(ell-1)/(ell-1)! at `points` interior grid points.
BoundsReport check_domination(std::size_t ell, std::size_t points = 100);

struct SpacingMoments {
  std::size_t ell = 0;
  std::uint64_t samples = 0;
  double mean_max_normalized = 0.0;  // mean of L+ * ell / ln ell
  double stderr_max_normalized = 0.0;
  double mean_ell_u = 0.0;  // mean of ell * U
  double stderr_ell_u = 0.0;
  double exact_mean_ell_u = 0.0;  // 2 ell^2 / ((ell+1)(ell+2))
};

/// Requires ell >= 2 and samples >= 100.
SpacingMoments spacing_moments(std::size_t ell, std::uint64_t samples, Seed seed,
                               unsigned threads = 1);

struct EcdfCheck {
  std::size_t ell = 0;
  std::uint64_t samples = 0;
  double sup_deviation = 0.0;  // sup |F_n - F| over the sample
  double band = 0.0;           // DKW half-width
  [[nodiscard]] bool within_band() const noexcept { return sup_deviation <= band; }
};

/// DKW half-width sqrt(ln(2/alpha) / (2 samples)).
double dkw_band(std::uint64_t samples, double alpha);

/// Compares the empirical CDF of simulated max spacings with max_spacing_cdf.
EcdfCheck check_max_spacing_ecdf(std::size_t ell, std::uint64_t samples, Seed seed,
                                 double alpha = 0.001, unsigned threads = 1);

/// F(z) = (1 - e^-z)/z for z > 0; series below 1e-4.
double f_ratio(double z);
/// (log F)'(z) = 1/(e^z - 1) - 1/z for z > 0; series below 1e-4.
double log_f_prime(double z);

struct GridSpec {
  double z_min = 1e-6;
  double z_max = 1e6;
  std::size_t points_per_decade = 200;
};

/// A = sup_{z>0} (z+1)|(log F)'(z)| from a log-spaced grid, a golden-section
/// refinement around the best grid point, and the limits 1/2 (z -> 0) and
/// 1 (z -> infinity). Violations lists grid points exceeding the result.
BoundsReport estimate_A(const GridSpec& grid = {});

/// For `trials` uniform x in [0,1]^n, checks
///   prod_j F(p (s - x_j)) <= e^A F(p s)^n,  s = sum x,
/// in log space. Requires n >= 2 and 0 < p <= 1.
BoundsReport check_product_bound(std::size_t n, double p, std::uint64_t trials, Seed seed,
                                 unsigned threads = 1);

/// Same inequality for one explicit point; returns {log lhs, log rhs}.
std::pair<double, double> product_bound_sides(const std::vector<double>& x, double p,
                                              double a_constant);

}  // namespace epsmatch
