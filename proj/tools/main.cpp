// epsmatch: command-line front end for the eps-stable matching laboratory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "epsmatch/enumeration.hpp"
#include "epsmatch/error.hpp"
#include "epsmatch/estimators.hpp"
#include "epsmatch/market_io.hpp"
#include "epsmatch/spacings.hpp"
#include "epsmatch/stability.hpp"
#include "json.hpp"
#include "selftest.hpp"
#include "sweep.hpp"

namespace {

using nlohmann::json;
using namespace epsmatch;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSelftest = 2;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool json_out = false;
  bool csv_out = false;
  std::string out;
};

// Destination for command output: --out file or stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InvalidArgument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json count_to_json(const BigCount& c) {
  if (c <= std::numeric_limits<std::uint64_t>::max()) return c.convert_to<std::uint64_t>();
  return c.str();
}

json estimate_to_json(const MCEstimate& e, std::size_t n, std::size_t k, const EpsParams& params,
                      const std::string& target, double seconds) {
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"n", n},
              {"k", k},
              {"eps", params.eps()},
              {"lambda", params.lambda()},
              {"method", std::string(to_string(e.method))},
              {"target", target},
              {"mean", e.mean},
              {"stderr", e.std_error},
              {"samples", e.samples},
              {"log_scale", e.log_scale},
              {"delta_method", e.delta_method},
              {"ci_low", finite_or_null(e.ci_low)},
              {"ci_high", finite_or_null(e.ci_high)},
              {"seconds", seconds}};
}

json report_to_json(const BoundsReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"where", x.where}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  return json{{"a_constant", r.a_constant},
              {"grid", r.grid},
              {"checked", r.checked},
              {"worst_margin", r.worst_margin},
              {"violations", v}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epsmatch: eps-stable matchings with switching costs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  auto* json_flag = app.add_flag("--json", g.json_out, "JSON output");
  app.add_flag("--csv", g.csv_out, "CSV output")->excludes(json_flag);
  app.add_option("--out", g.out, "Output file (default stdout)");

  // gen
  std::size_t gen_n = 0, gen_k = 0;
  auto* gen = app.add_subcommand("gen", "Generate a random market as JSON");
  gen->add_option("--n", gen_n, "Number of firms")->required();
  gen->add_option("--k", gen_k, "Excess workers");

  // check
  std::string market_path, matching_text;
  double eps = 0.0, lambda = 1.0;
  auto* check = app.add_subcommand("check", "Test a matching for eps-stability");
  check->add_option("--market", market_path, "Market JSON file")->required();
  check->add_option("--matching", matching_text, "1-based worker per firm, e.g. \"2,1\"")->required();
  check->add_option("--eps", eps, "Switching-cost threshold")->required();
  check->add_option("--lambda", lambda, "Utility rate");

  // count
  bool list = false;
  std::size_t limit = 10, cap = 1000;
  auto* count = app.add_subcommand("count", "Exactly count eps-stable matchings");
  count->add_option("--market", market_path, "Market JSON file")->required();
  count->add_option("--eps", eps, "Switching-cost threshold")->required();
  count->add_option("--lambda", lambda, "Utility rate");
  count->add_flag("--list", list, "Include the stable matchings");
  count->add_option("--limit", limit, "Largest n to enumerate");
  count->add_option("--cap", cap, "Maximum matchings listed");

  // estimate
  std::size_t est_n = 0, est_k = 0;
  std::string method_name = "integrand";
  std::uint64_t samples = 0;
  bool log_scale = false;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of P or S");
  estimate->add_option("--n", est_n, "Number of firms")->required();
  estimate->add_option("--k", est_k, "Excess workers");
  estimate->add_option("--eps", eps, "Switching-cost threshold")->required();
  estimate->add_option("--lambda", lambda, "Utility rate");
  estimate->add_option("--method", method_name, "indicator | integrand | empirical-count");
  estimate->add_option("--samples", samples, "Replicates (markets for empirical-count)");
  estimate->add_option("--limit", limit, "Enumeration limit for empirical-count");
  estimate->add_flag("--log", log_scale, "Report ln S instead of the linear estimate");

  // spacings
  std::size_t ell = 0;
  std::uint64_t spacing_samples = 2000;
  bool ecdf = false;
  auto* spacings = app.add_subcommand("spacings", "Uniform spacings moments report");
  spacings->add_option("--ell", ell, "Number of spacings")->required();
  spacings->add_option("--samples", spacing_samples, "Monte Carlo samples");
  spacings->add_flag("--ecdf", ecdf, "Also compare the max-spacing ECDF with its exact CDF");

  // bounds
  std::size_t bound_n = 5;
  double bound_p = 1.0;
  std::uint64_t trials = 10'000;
  auto* bounds = app.add_subcommand("bounds", "Check the F-product bound and report A");
  bounds->add_option("--n", bound_n, "Dimension")->required();
  bounds->add_option("--p", bound_p, "Discount p in (0,1]")->required();
  bounds->add_option("--trials", trials, "Random draws");

  // sweep
  std::string config_path, regime_name = "c-critical";
  std::vector<std::size_t> n_list, k_list;
  std::vector<double> coefs, c_list, omega_list;
  std::vector<std::string> methods;
  std::uint64_t sweep_samples = 0, markets = 0;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Regime sweep of ln S over n");
  sweep->add_option("--config", config_path, "Flat JSON sweep configuration");
  sweep->add_option("--n-list", n_list, "Sizes")->delimiter(',');
  sweep->add_option("--k-list", k_list, "Imbalances")->delimiter(',');
  sweep->add_option("--regime", regime_name, "c-critical | omega (applies to --coef)");
  sweep->add_option("--coef", coefs, "Coefficients for --regime")->delimiter(',');
  sweep->add_option("--c", c_list, "c-critical coefficients")->delimiter(',');
  sweep->add_option("--omega", omega_list, "omega multipliers")->delimiter(',');
  sweep->add_option("--methods", methods, "Estimator subset")->delimiter(',');
  sweep->add_option("--samples", sweep_samples, "Samples per P estimate");
  sweep->add_option("--markets", markets, "Markets per empirical-count estimate");
  sweep->add_option("--limit", limit, "Enumeration limit");
  sweep->add_flag("--timing", timing, "Record wall time per row");

  // selftest
  harness::SelftestOptions st;
  bool no_matrix = false;
  auto* selftest = app.add_subcommand("selftest", "Run the closed-form oracle suite");
  selftest->add_option("--samples", st.p_samples, "Samples per P estimate");
  selftest->add_option("--markets", st.markets, "Markets per empirical estimate");
  selftest->add_flag("--no-matrix", no_matrix, "Skip the cross-estimator matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const Seed seed{g.seed, 0};
    if (*gen) {
      const Market m = generate_market(gen_n, gen_k, seed);
      Output out(g.out);
      write_market_json(out.stream(), m);
    } else if (*check) {
      const Market market = read_market_file(market_path);
      const Matching m = parse_matching(matching_text, market.workers());
      if (m.firms() != market.firms()) throw InvalidArgument("matching must list one worker per firm");
      const EpsParams params(eps, lambda);
      json pairs = json::array();
      for (const auto& b : blocking_pairs(market, m, params)) {
        pairs.push_back({{"firm", b.firm + 1},
                         {"worker", b.worker + 1},
                         {"kind", b.kind == BlockKind::MatchedWorker ? "matched-worker"
                                                                     : "unmatched-worker"}});
      }
      Output out(g.out);
      out.stream() << json{{"stable", pairs.empty()},
                           {"eps", eps},
                           {"lambda", lambda},
                           {"matching", format_matching(m)},
                           {"blocking_pairs", pairs}}
                          .dump(2)
                   << '\n';
    } else if (*count) {
      const Market market = read_market_file(market_path);
      CountOptions options;
      options.collect = list;
      options.cap = cap;
      options.limit = limit;
      options.threads = g.threads;
      const CountResult r = count_eps_stable(market, EpsParams(eps, lambda), options);
      json j{{"count", count_to_json(r.count)}, {"nodes_visited", r.nodes_visited}};
      if (r.matchings) {
        json ms = json::array();
        for (const auto& m : *r.matchings) ms.push_back(format_matching(m));
        j["matchings"] = ms;
      }
      Output out(g.out);
      out.stream() << j.dump(2) << '\n';
    } else if (*estimate) {
      const Method method = parse_method(method_name);
      const EpsParams params(eps, lambda);
      EstimatorOptions options;
      options.samples = samples ? samples
                                : (method == Method::EmpiricalCount ? kDefaultMarkets
                                                                    : kDefaultPSamples);
      options.seed = seed;
      options.threads = g.threads;
      options.enumeration_limit = limit;
      const auto start = std::chrono::steady_clock::now();
      MCEstimate e;
      std::string target;
      if (log_scale) {
        e = method == Method::EmpiricalCount
                ? to_log_scale(estimate_S_empirical(est_n, est_k, params, options))
                : expected_count_log(est_n, est_k, params, method, options);
        target = "log S";
      } else if (method == Method::EmpiricalCount) {
        e = estimate_S_empirical(est_n, est_k, params, options);
        target = "S";
      } else {
        e = method == Method::Indicator ? estimate_P_indicator(est_n, est_k, params, options)
                                        : estimate_P_integrand(est_n, est_k, params, options);
        target = "P";
      }
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      Output out(g.out);
      if (g.csv_out) {
        out.stream() << "n,k,eps,lambda,method,samples,mean,stderr,log_scale,seconds\n"
                     << est_n << ',' << est_k << ',' << num17(eps) << ',' << num17(lambda) << ','
                     << to_string(e.method) << ',' << e.samples << ',' << num17(e.mean) << ','
                     << num17(e.std_error) << ',' << (e.log_scale ? "true" : "false") << ','
                     << num17(seconds) << '\n';
      } else {
        out.stream() << estimate_to_json(e, est_n, est_k, params, target, seconds).dump(2) << '\n';
      }
    } else if (*spacings) {
      const auto m = spacing_moments(ell, spacing_samples, seed, g.threads);
      json j{{"ell", m.ell},
             {"samples", m.samples},
             {"mean_max_normalized", m.mean_max_normalized},
             {"stderr_max_normalized", m.stderr_max_normalized},
             {"mean_ell_u", m.mean_ell_u},
             {"stderr_ell_u", m.stderr_ell_u},
             {"exact_mean_ell_u", m.exact_mean_ell_u}};
      if (ecdf) {
        const auto c = check_max_spacing_ecdf(ell, spacing_samples, seed, 0.001, g.threads);
        j["ecdf"] = {{"sup_deviation", c.sup_deviation},
                     {"dkw_band_999", c.band},
                     {"within_band", c.within_band()}};
      }
      Output out(g.out);
      out.stream() << j.dump(2) << '\n';
    } else if (*bounds) {
      const BoundsReport a = estimate_A();
      const BoundsReport r = check_product_bound(bound_n, bound_p, trials, seed, g.threads);
      Output out(g.out);
      out.stream() << json{{"estimate_A", report_to_json(a)}, {"product_bound", report_to_json(r)}}
                          .dump(2)
                   << '\n';
    } else if (*sweep) {
      harness::SweepConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw InvalidArgument("cannot open sweep config: " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        config = harness::sweep_config_from_json(ss.str());
      }
      if (!n_list.empty()) config.n_list = n_list;
      if (!k_list.empty()) config.k_list = k_list;
      if (!coefs.empty() || !c_list.empty() || !omega_list.empty()) {
        config.regimes.clear();
        const auto kind = harness::parse_regime(regime_name);
        for (double c : coefs) config.regimes.push_back({kind, c});
        for (double c : c_list) config.regimes.push_back({harness::RegimeKind::CCritical, c});
        for (double c : omega_list) config.regimes.push_back({harness::RegimeKind::Omega, c});
      }
      if (sweep->count("--methods")) {
        config.methods.clear();
        for (const auto& m : methods) config.methods.push_back(parse_method(m));
      }
      if (sweep_samples) config.samples = sweep_samples;
      if (markets) config.markets = markets;
      if (app.count("--seed")) config.seed = g.seed;
      if (app.count("--threads")) config.threads = g.threads;
      if (sweep->count("--limit")) config.enumeration_limit = limit;
      if (timing) config.timing = true;
      if (!g.out.empty()) config.out = g.out;
      if (g.json_out) throw InvalidArgument("sweep writes CSV only");
      config.validate();
      Output out(config.out);
      const auto result = harness::run_sweep(config, out.stream());
      harness::write_slope_summary(std::cerr, result);
    } else if (*selftest) {
      if (app.count("--seed")) st.seed = g.seed;
      st.threads = g.threads;
      st.include_matrix = !no_matrix;
      const auto report = harness::run_selftest(st);
      Output out(g.out);
      harness::write_selftest_report(out.stream(), report);
      return report.passed() ? kExitOk : kExitSelftest;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
