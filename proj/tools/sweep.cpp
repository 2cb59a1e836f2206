#include "sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "epsmatch/error.hpp"
#include "json.hpp"

namespace epsmatch::harness {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("bad number '" + s + "'");
  }
  if (pos != s.size()) throw InvalidArgument("bad number '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw InvalidArgument("bad integer '" + s + "'");
  return v;
}

}  // namespace

double RegimePoint::eps_lambda(std::size_t n) const {
  const auto nn = static_cast<double>(n);
  return coefficient * std::log(nn) / nn;
}

std::string RegimePoint::label() const {
  return (kind == RegimeKind::CCritical ? "c=" : "omega=") + num(coefficient);
}

RegimeKind parse_regime(const std::string& name) {
  if (name == "c-critical" || name == "c") return RegimeKind::CCritical;
  if (name == "omega") return RegimeKind::Omega;
  throw InvalidArgument("unknown regime '" + name + "' (expected c-critical or omega)");
}

void SweepConfig::validate() const {
  if (n_list.empty()) throw InvalidArgument("sweep: n_list must not be empty");
  if (k_list.empty()) throw InvalidArgument("sweep: k_list must not be empty");
  if (regimes.empty()) throw InvalidArgument("sweep: at least one regime coefficient is required");
  if (methods.empty()) throw InvalidArgument("sweep: method list must not be empty");
  for (std::size_t n : n_list) {
    if (n == 0) throw InvalidArgument("sweep: n must be >= 1");
  }
  for (const auto& r : regimes) {
    if (!(r.coefficient > 0.0) || !std::isfinite(r.coefficient)) {
      throw InvalidArgument("sweep: regime coefficients must be > 0");
    }
  }
  if (samples < 2 || markets < 2) throw InvalidArgument("sweep: samples and markets must be >= 2");
}

SweepConfig sweep_config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("sweep config parse error: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("sweep config must be a JSON object");
  SweepConfig c;
  try {
    if (j.contains("n_list")) c.n_list = j["n_list"].get<std::vector<std::size_t>>();
    if (j.contains("k_list")) c.k_list = j["k_list"].get<std::vector<std::size_t>>();
    if (j.contains("coefficients")) {
      const RegimeKind kind = parse_regime(j.value("regime", std::string("c-critical")));
      for (double v : j["coefficients"].get<std::vector<double>>()) c.regimes.push_back({kind, v});
    }
    if (j.contains("c")) {
      for (double v : j["c"].get<std::vector<double>>()) {
        c.regimes.push_back({RegimeKind::CCritical, v});
      }
    }
    if (j.contains("omega")) {
      for (double v : j["omega"].get<std::vector<double>>()) {
        c.regimes.push_back({RegimeKind::Omega, v});
      }
    }
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j["methods"].get<std::vector<std::string>>()) {
        c.methods.push_back(parse_method(m));
      }
    }
    c.samples = j.value("samples", c.samples);
    c.markets = j.value("markets", c.markets);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.enumeration_limit = j.value("limit", c.enumeration_limit);
    c.timing = j.value("timing", c.timing);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("sweep config: ") + e.what());
  }
  return c;
}

std::string format_sweep_row(const SweepRow& r) {
  std::ostringstream os;
  os << r.n << ',' << r.k << ',' << num(r.eps) << ',' << num(r.lambda) << ',' << r.regime << ','
     << to_string(r.method) << ',' << r.samples << ',' << num(r.mean_log) << ','
     << num(r.stderr_log) << ',' << num(r.seconds);
  return os.str();
}

SweepRow parse_sweep_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
  if (f.size() != 10) throw InvalidArgument("sweep row must have 10 fields: " + line);
  SweepRow r;
  r.n = parse_count(f[0]);
  r.k = parse_count(f[1]);
  r.eps = parse_double(f[2]);
  r.lambda = parse_double(f[3]);
  r.regime = f[4];
  r.method = parse_method(f[5]);
  r.samples = parse_count(f[6]);
  r.mean_log = parse_double(f[7]);
  r.stderr_log = parse_double(f[8]);
  r.seconds = parse_double(f[9]);
  r.degenerate = std::isnan(r.mean_log);
  return r;
}

SweepResult run_sweep(const SweepConfig& config, std::ostream& csv) {
  config.validate();
  SweepResult result;
  csv << kSweepCsvHeader << '\n' << std::flush;
  for (std::size_t n : config.n_list) {
    for (std::size_t k : config.k_list) {
      for (const RegimePoint& regime : config.regimes) {
        const double eps = regime.eps_lambda(n);
        const EpsParams params(eps, 1.0);
        for (Method method : config.methods) {
          EstimatorOptions options;
          options.samples = method == Method::EmpiricalCount ? config.markets : config.samples;
          options.seed = Seed{config.seed, 0};
          options.threads = config.threads;
          options.enumeration_limit = config.enumeration_limit;

          SweepRow row;
          row.n = n;
          row.k = k;
          row.eps = eps;
          row.lambda = 1.0;
          row.regime = regime.label();
          row.method = method;
          row.samples = options.samples;
          const auto start = std::chrono::steady_clock::now();
          try {
            const MCEstimate e =
                method == Method::EmpiricalCount
                    ? to_log_scale(estimate_S_empirical(n, k, params, options))
                    : expected_count_log(n, k, params, method, options);
            row.mean_log = e.mean;
            row.stderr_log = e.std_error;
          } catch (const DegenerateEstimate&) {
            row.degenerate = true;
          } catch (const InstanceTooLarge&) {
            row.degenerate = true;
          }
          if (row.degenerate) {
            row.mean_log = std::numeric_limits<double>::quiet_NaN();
            row.stderr_log = std::numeric_limits<double>::quiet_NaN();
          }
          if (config.timing) {
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                              .count();
          }
          csv << format_sweep_row(row) << '\n' << std::flush;
          result.rows.push_back(std::move(row));
        }
      }
    }
  }

  // Least-squares slope of (log S)/(log n) against n per (k, regime, method).
  std::map<std::tuple<std::size_t, std::string, int>, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : result.rows) {
    if (r.degenerate || r.n < 2) continue;
    const auto n = static_cast<double>(r.n);
    groups[{r.k, r.regime, static_cast<int>(r.method)}].emplace_back(n, r.mean_log / std::log(n));
  }
  for (const auto& [key, pts] : groups) {
    SlopeSummary s;
    s.k = std::get<0>(key);
    s.regime = std::get<1>(key);
    s.method = static_cast<Method>(std::get<2>(key));
    s.points = pts.size();
    if (pts.size() >= 2) {
      double mx = 0, my = 0;
      for (auto [x, y] : pts) {
        mx += x;
        my += y;
      }
      mx /= static_cast<double>(pts.size());
      my /= static_cast<double>(pts.size());
      double sxy = 0, sxx = 0;
      for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
      }
      s.slope = sxx > 0 ? sxy / sxx : 0.0;
    }
    result.slopes.push_back(std::move(s));
  }
  return result;
}

void write_slope_summary(std::ostream& out, const SweepResult& result) {
  for (const auto& s : result.slopes) {
    out << "slope k=" << s.k << ' ' << s.regime << ' ' << to_string(s.method)
        << ": d(logS/log n)/dn = " << num(s.slope) << " over " << s.points << " sizes\n";
  }
}

}  // namespace epsmatch::harness
