// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "epsmatch/enumeration.hpp"
#include "epsmatch/estimators.hpp"
#include "epsmatch/spacings.hpp"
#include "epsmatch/stability.hpp"
#include "sweep.hpp"

using namespace epsmatch;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_seconds,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << " exception: " << e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= budget_seconds) {
    out.ok = false;
    out.detail << " FAILED(runtime over " << budget_seconds << " s)";
  }
  if (!out.ok) ++failures;
  std::printf("[%s] C%-2d %s (%.2f s / %.0f s)%s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(),
              secs, budget_seconds, out.detail.str().c_str());
  std::fflush(stdout);
}

std::string show(const MCEstimate& e) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g+-%.3g", e.mean, e.std_error);
  return buf;
}

bool near(const MCEstimate& e, double target, double sigmas) {
  return std::abs(e.mean - target) <= sigmas * e.std_error;
}

bool agree(const MCEstimate& a, const MCEstimate& b, double sigmas) {
  return std::abs(a.mean - b.mean) <= sigmas * std::hypot(a.std_error, b.std_error);
}

std::set<Matching> as_set(const CountResult& r) {
  return {r.matchings->begin(), r.matchings->end()};
}

}  // namespace

int main() {
  criterion(1, "closed-form P at n=1 k=1 eps*lambda=0.5", 10.0, [](Outcome& o) {
    const double target = 1.0 - std::exp(-0.5) / 2.0;
    const EpsParams params(0.5, 1.0);
    EstimatorOptions opts;
    opts.samples = 1'000'000;
    opts.seed = Seed{kSeed, 1};
    const auto a = estimate_P_integrand(1, 1, params, opts);
    const auto b = estimate_P_indicator(1, 1, params, opts);
    o.detail << " target=" << target << " integrand=" << show(a) << " indicator=" << show(b);
    o.require(near(a, target, 3.0), "integrand");
    o.require(near(b, target, 3.0), "indicator");
  });

  criterion(2, "closed-form S = 9/8 at n=2 k=0 eps=0", 60.0, [](Outcome& o) {
    const EpsParams params(0.0, 1.0);
    EstimatorOptions opts;
    opts.samples = 1'000'000;
    opts.seed = Seed{kSeed, 2};
    EstimatorOptions markets = opts;
    markets.samples = 100'000;
    const auto a = estimate_S(2, 0, params, Method::Indicator, opts);
    const auto b = estimate_S(2, 0, params, Method::Integrand, opts);
    const auto c = estimate_S(2, 0, params, Method::EmpiricalCount, markets);
    o.detail << " indicator=" << show(a) << " integrand=" << show(b) << " empirical=" << show(c);
    o.require(near(a, 9.0 / 8.0, 3.0), "indicator");
    o.require(near(b, 9.0 / 8.0, 3.0), "integrand");
    o.require(near(c, 9.0 / 8.0, 3.0), "empirical");
  });

  criterion(3, "cross-estimator agreement on 27 configurations", 600.0, [](Outcome& o) {
    EstimatorOptions opts;
    opts.samples = 1'000'000;
    opts.seed = Seed{kSeed, 3};
    EstimatorOptions markets = opts;
    markets.samples = 20'000;
    markets.seed = Seed{kSeed, 4};
    int bad = 0, total = 0;
    for (std::size_t n : {2u, 4u, 6u}) {
      for (std::size_t k : {0u, 1u, 3u}) {
        for (double el : {0.0, 0.1, 0.5}) {
          const EpsParams params(el, 1.0);
          const auto a = estimate_S(n, k, params, Method::Indicator, opts);
          const auto b = estimate_S(n, k, params, Method::Integrand, opts);
          const auto c = estimate_S(n, k, params, Method::EmpiricalCount, markets);
          ++total;
          if (!(agree(a, b, 4.0) && agree(a, c, 4.0) && agree(b, c, 4.0))) {
            ++bad;
            o.detail << " [n=" << n << " k=" << k << " el=" << el << ": " << show(a) << " "
                     << show(b) << " " << show(c) << "]";
          }
        }
      }
    }
    o.detail << " configurations=" << total << " disagreements=" << bad;
    o.require(total == 27 && bad == 0, "agreement");
  });

  criterion(4, "pruned enumeration matches brute force; DA membership; nesting", 120.0,
            [](Outcome& o) {
              const double eps_points[] = {0.0, 0.05, 0.2, 0.5, 2.0};
              CountOptions collect;
              collect.collect = true;
              int mismatches = 0, non_members = 0, nesting = 0;
              for (std::uint64_t inst = 0; inst < 200; ++inst) {
                const std::size_t n = 1 + inst % 5;
                const std::size_t k = (inst / 5) % 3;
                const Market market = generate_market(n, k, Seed{kSeed, 100 + inst});
                const Matching da = deferred_acceptance(market);
                std::set<Matching> previous;
                for (double eps : eps_points) {
                  const EpsParams params(eps, 1.0);
                  const auto pruned = count_eps_stable(market, params, collect);
                  const auto brute = brute_force_count(market, params, true);
                  const auto set = as_set(pruned);
                  if (pruned.count != brute.count || set != as_set(brute)) ++mismatches;
                  if (!set.contains(da)) ++non_members;
                  if (!std::includes(set.begin(), set.end(), previous.begin(), previous.end()))
                    ++nesting;
                  previous = set;
                }
              }
              o.detail << " instances=200 eps_points=5 mismatches=" << mismatches
                       << " da_missing=" << non_members << " nesting_breaks=" << nesting;
              o.require(mismatches == 0, "pruned vs brute force");
              o.require(non_members == 0, "deferred acceptance membership");
              o.require(nesting == 0, "nesting");
            });

  criterion(5, "saturation count equals (n+k)_n", 60.0, [](Outcome& o) {
    int bad = 0;
    for (std::uint64_t inst = 0; inst < 50; ++inst) {
      const std::size_t n = 4, k = inst % 3;
      const Market m = generate_market(n, k, Seed{kSeed, 1000 + inst});
      double lo = 1.0, hi = 0.0;
      for (const Matrix* mat : {&m.x(), &m.y()}) {
        for (double v : mat->data()) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      const double q = 0.5 * lo / hi;
      const EpsParams params(-std::log(q), 1.0);
      if (!(params.q() < lo / hi) ||
          count_eps_stable(m, params).count != falling_factorial(n, k)) {
        ++bad;
      }
    }
    o.detail << " instances=50 failures=" << bad;
    o.require(bad == 0, "saturation");
  });

  criterion(6, "log S grows by >= ln 1000 from c=1 to omega=5 at n=10", 60.0, [](Outcome& o) {
    const std::size_t n = 10;
    const double base = std::log(double(n)) / double(n);
    EstimatorOptions opts;
    opts.samples = 1'000'000;
    opts.seed = Seed{kSeed, 6};
    for (std::size_t k : {0u, 1u}) {
      const auto lo = expected_count_log(n, k, EpsParams(base, 1.0), Method::Integrand, opts);
      const auto hi =
          expected_count_log(n, k, EpsParams(5.0 * base, 1.0), Method::Integrand, opts);
      o.detail << " k=" << k << ": " << show(lo) << " -> " << show(hi)
               << " diff=" << hi.mean - lo.mean;
      o.require(hi.mean - lo.mean >= std::log(1000.0), "gap k=" + std::to_string(k));
      o.require(hi.ci_low > lo.ci_high, "CI overlap k=" + std::to_string(k));
    }
  });

  criterion(7, "spacing moments at ell=4096 and max-spacing ECDF in DKW band", 120.0,
            [](Outcome& o) {
              const auto m = spacing_moments(4096, 2000, Seed{kSeed, 7});
              o.detail << " mean(ellU)=" << m.mean_ell_u
                       << " mean(L+ ell/ln ell)=" << m.mean_max_normalized;
              o.require(m.mean_ell_u >= 1.9 && m.mean_ell_u <= 2.1, "ellU");
              o.require(m.mean_max_normalized >= 0.85 && m.mean_max_normalized <= 1.15, "L+");
              for (std::size_t ell : {5u, 50u, 500u}) {
                const auto e = check_max_spacing_ecdf(ell, 10'000, Seed{kSeed, 70 + ell}, 0.001);
                o.detail << " ell=" << ell << " sup=" << e.sup_deviation << "/" << e.band;
                o.require(e.within_band(), "DKW ell=" + std::to_string(ell));
              }
            });

  criterion(8, "sum-of-uniforms density normalizes and is dominated", 30.0, [](Outcome& o) {
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    for (std::size_t ell : {2u, 3u, 5u, 10u}) {
      double total = 0.0;
      for (std::size_t m = 0; m < ell; ++m) {
        total += Quad::integrate([&](double s) { return density_S(ell, s); }, double(m),
                                 double(m + 1), 10, 1e-14);
      }
      const auto dom = check_domination(ell);
      o.detail << " ell=" << ell << " integral-1=" << total - 1.0
               << " violations=" << dom.violations.size() << "/" << dom.checked;
      o.require(std::abs(total - 1.0) <= 1e-6, "integral ell=" + std::to_string(ell));
      o.require(dom.violations.empty() && dom.checked > 0,
                "domination ell=" + std::to_string(ell));
    }
  });

  criterion(9, "log-derivative constant A and product bound", 10.0, [](Outcome& o) {
    const GridSpec grid;
    const auto a = estimate_A(grid);
    // independent sweep of the same grid
    double worst = 0.0;
    const double decades = std::log10(grid.z_max / grid.z_min);
    const auto points = std::size_t(std::llround(decades * double(grid.points_per_decade)));
    for (std::size_t i = 0; i <= points; ++i) {
      const double z = grid.z_min * std::pow(10.0, double(i) / double(grid.points_per_decade));
      worst = std::max(worst, (z + 1.0) * std::abs(log_f_prime(z)));
    }
    o.detail << " A=" << a.a_constant << " grid max=" << worst;
    o.require(a.a_constant > 0.0 && a.violations.empty() && worst <= a.a_constant, "grid");
    for (double p : {0.5, 1.0}) {
      const auto r = check_product_bound(5, p, 10'000, Seed{kSeed, 9});
      o.detail << " p=" << p << " checked=" << r.checked << " violations=" << r.violations.size();
      o.require(r.checked == 10'000 && r.violations.empty(), "product bound");
    }
    const double d = log_f_prime(1e-8);
    o.detail << " log_f_prime(1e-8)=" << d;
    o.require(std::abs(d + 0.5) <= 1e-6, "small-z limit");
  });

  criterion(10, "sweep CSV byte-identical across runs and thread counts", 600.0, [](Outcome& o) {
    harness::SweepConfig config;
    config.n_list = {4, 6, 8};
    config.k_list = {0, 1};
    config.regimes = {{harness::RegimeKind::CCritical, 1.0}, {harness::RegimeKind::Omega, 5.0}};
    config.methods = {Method::Integrand, Method::Indicator, Method::EmpiricalCount};
    config.samples = 50'000;
    config.markets = 200;
    config.seed = kSeed;
    std::string reference;
    int runs = 0, differing = 0;
    for (unsigned threads : {1u, 4u, 8u, 1u, 8u}) {
      config.threads = threads;
      std::ostringstream csv;
      harness::run_sweep(config, csv);
      if (runs++ == 0) reference = csv.str();
      if (csv.str() != reference) ++differing;
    }
    o.detail << " runs=" << runs << " bytes=" << reference.size() << " differing=" << differing;
    o.require(differing == 0 && !reference.empty(), "byte identity");
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED",
              failures);
  return failures ? 1 : 0;
}
