#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "epsmatch/error.hpp"
#include "epsmatch/estimators.hpp"
#include "epsmatch/spacings.hpp"

namespace epsmatch::harness {

namespace {

class Runner {
 public:
  explicit Runner(SelftestReport& report) : report_(report) {}

  void check(const std::string& name, const std::function<std::string(bool&)>& body) {
    SelftestCheck c{name, false, {}};
    try {
      c.detail = body(c.passed);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    report_.checks.push_back(std::move(c));
  }

 private:
  SelftestReport& report_;
};

std::string describe(const MCEstimate& e, double target) {
  std::ostringstream os;
  os.precision(8);
  os << "mean=" << e.mean << " stderr=" << e.std_error << " target=" << target;
  return os.str();
}

bool within(const MCEstimate& e, double target, double sigmas) {
  return std::abs(e.mean - target) <= sigmas * e.std_error ||
         (e.std_error == 0.0 && e.mean == target);
}

}  // namespace

bool SelftestReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> SelftestReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name + ": " + c.detail);
  }
  return out;
}

SelftestReport run_selftest(const SelftestOptions& o) {
  SelftestReport report;
  Runner run(report);
  EstimatorOptions p_opts;
  p_opts.samples = o.p_samples;
  p_opts.seed = Seed{o.seed, 1};
  p_opts.threads = o.threads;
  EstimatorOptions m_opts = p_opts;
  m_opts.samples = o.markets;
  m_opts.seed = Seed{o.seed, 2};

  run.check("eps-params rejects q != sqrt(p)", [&](bool& ok) {
    try {
      EpsParams::unchecked(0.5, 1.0, std::exp(-1.0), 0.9).validate();
      ok = false;
      return std::string("corrupted parameters were accepted");
    } catch (const InvalidArgument& e) {
      ok = true;
      return std::string(e.what());
    }
  });

  const EpsParams half(0.5, 1.0);
  const EpsParams zero(0.0, 1.0);
  const double p11 = 1.0 - std::exp(-0.5) / 2.0;

  run.check("P integrand n=1 k=1 eps*lambda=0.5", [&](bool& ok) {
    const auto e = estimate_P_integrand(1, 1, half, p_opts);
    ok = within(e, p11, o.sigmas);
    return describe(e, p11);
  });
  run.check("P indicator n=1 k=1 eps*lambda=0.5", [&](bool& ok) {
    const auto e = estimate_P_indicator(1, 1, half, p_opts);
    ok = within(e, p11, o.sigmas);
    return describe(e, p11);
  });
  run.check("P integrand n=2 k=0 eps=0", [&](bool& ok) {
    const auto e = estimate_P_integrand(2, 0, zero, p_opts);
    ok = within(e, 0.5625, o.sigmas);
    return describe(e, 0.5625);
  });
  run.check("P indicator n=2 k=0 eps=0", [&](bool& ok) {
    const auto e = estimate_P_indicator(2, 0, zero, p_opts);
    ok = within(e, 0.5625, o.sigmas);
    return describe(e, 0.5625);
  });
  run.check("P n=1 k=0 is exactly 1", [&](bool& ok) {
    const auto a = estimate_P_integrand(1, 0, half, p_opts);
    const auto b = estimate_P_indicator(1, 0, half, p_opts);
    ok = a.mean == 1.0 && a.std_error == 0.0 && b.mean == 1.0 && b.std_error == 0.0;
    return describe(a, 1.0);
  });
  run.check("S empirical n=2 k=0 eps=0", [&](bool& ok) {
    const auto e = estimate_S_empirical(2, 0, zero, m_opts);
    ok = within(e, 1.125, o.sigmas);
    return describe(e, 1.125);
  });
  run.check("S empirical n=1 k=1 eps*lambda=0.5", [&](bool& ok) {
    const double target = 2.0 - std::exp(-0.5);
    const auto e = estimate_S_empirical(1, 1, half, m_opts);
    ok = within(e, target, o.sigmas);
    return describe(e, target);
  });
  run.check("log S integrand n=2 k=0 eps=0", [&](bool& ok) {
    const double target = std::log(1.125);
    const auto e = expected_count_log(2, 0, zero, Method::Integrand, p_opts);
    ok = within(e, target, o.sigmas);
    return describe(e, target);
  });
  run.check("log falling factorial", [&](bool& ok) {
    const double a = log_falling_factorial(1, 0);
    const double b = log_falling_factorial(2, 1);
    const double c = log_falling_factorial(10, 0);
    ok = a == 0.0 && std::abs(b - std::log(6.0)) < 1e-12 &&
         std::abs(c - std::log(3628800.0)) < 1e-12 &&
         std::abs(c - log_falling_factorial_exact(10, 0)) < 1e-12;
    return "ln 10! = " + std::to_string(c);
  });
  run.check("max spacing cdf closed forms", [&](bool& ok) {
    const double a = max_spacing_cdf(2, 0.75);
    const double b = max_spacing_cdf(50, 0.5);
    ok = std::abs(a - 0.5) < 1e-12 && std::abs(b - (1.0 - 50.0 * std::pow(0.5, 49))) < 1e-12;
    return "cdf(2,0.75)=" + std::to_string(a);
  });
  run.check("density of S closed forms", [&](bool& ok) {
    ok = std::abs(density_S(2, 0.5) - 0.5) < 1e-12 && std::abs(density_S(2, 1.5) - 0.5) < 1e-12 &&
         std::abs(density_S(1, 0.3) - 1.0) < 1e-12;
    return std::string("triangular and uniform densities");
  });
  run.check("spacing moments ell=4096", [&](bool& ok) {
    const auto m = spacing_moments(4096, 2000, Seed{o.seed, 3}, o.threads);
    ok = m.mean_ell_u >= 1.9 && m.mean_ell_u <= 2.1 && m.mean_max_normalized >= 0.85 &&
         m.mean_max_normalized <= 1.15;
    return "mean ellU=" + std::to_string(m.mean_ell_u) +
           " mean L+ ell/ln ell=" + std::to_string(m.mean_max_normalized);
  });
  run.check("F and (log F)' reference values", [&](bool& ok) {
    const double f1 = f_ratio(1.0);
    const double d1 = log_f_prime(1.0);
    const double d0 = log_f_prime(1e-8);
    ok = std::abs(f1 - (1.0 - std::exp(-1.0))) < 1e-12 &&
         std::abs(d1 - (1.0 / (std::numbers::e - 1.0) - 1.0)) < 1e-12 &&
         std::abs(d0 + 0.5) < 1e-6;
    return "F(1)=" + std::to_string(f1) + " (logF)'(1)=" + std::to_string(d1);
  });

  if (o.include_matrix) {
    const std::size_t ns[] = {2, 4, 6};
    const std::size_t ks[] = {0, 1, 3};
    const double els[] = {0.0, 0.1, 0.5};
    for (std::size_t n : ns) {
      for (std::size_t k : ks) {
        for (double el : els) {
          std::ostringstream name;
          name << "agreement n=" << n << " k=" << k << " eps*lambda=" << el;
          run.check(name.str(), [&](bool& ok) {
            const EpsParams params(el, 1.0);
            const auto a = estimate_S(n, k, params, Method::Indicator, p_opts);
            const auto b = estimate_S(n, k, params, Method::Integrand, p_opts);
            const auto c = estimate_S(n, k, params, Method::EmpiricalCount, m_opts);
            auto agree = [&](const MCEstimate& u, const MCEstimate& v) {
              return std::abs(u.mean - v.mean) <=
                     o.sigmas * std::hypot(u.std_error, v.std_error);
            };
            ok = agree(a, b) && agree(a, c) && agree(b, c);
            std::ostringstream os;
            os.precision(6);
            os << "indicator=" << a.mean << "+-" << a.std_error << " integrand=" << b.mean
               << "+-" << b.std_error << " empirical=" << c.mean << "+-" << c.std_error;
            return os.str();
          });
        }
      }
    }
  }
  return report;
}

void write_selftest_report(std::ostream& out, const SelftestReport& report) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " -- " << c.detail << '\n';
  }
  out << (report.passed() ? "selftest passed" : "selftest FAILED") << " ("
      << report.checks.size() << " checks)\n";
}

}  // namespace epsmatch::harness
