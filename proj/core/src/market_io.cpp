#include "epsmatch/market_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "epsmatch/error.hpp"
#include "json.hpp"

namespace epsmatch {

namespace {

void write_number(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out << ',';
    out << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      write_number(out, m(r, c));
    }
    out << ']';
  }
  out << ']';
}

Matrix read_matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols, const char* name) {
  if (!j.is_array() || j.size() != rows) {
    throw InvalidArgument(std::string("market field '") + name + "' must have n rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw InvalidArgument(std::string("market field '") + name + "' rows must have n+k entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw InvalidArgument("market entries must be numbers");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

}  // namespace

void write_market_json(std::ostream& out, const Market& market) {
  out << "{\"n\":" << market.firms() << ",\"k\":" << market.imbalance() << ",\"x\":";
  write_matrix(out, market.x());
  out << ",\"y\":";
  write_matrix(out, market.y());
  out << "}\n";
}

std::string market_to_json(const Market& market) {
  std::ostringstream os;
  write_market_json(os, market);
  return os.str();
}

Market market_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("market JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("x") ||
      !j.contains("y")) {
    throw InvalidArgument("market JSON needs fields n, k, x, y");
  }
  if (!j["n"].is_number_unsigned() || !j["k"].is_number_unsigned()) {
    throw InvalidArgument("market fields n and k must be non-negative integers");
  }
  const auto n = j["n"].get<std::size_t>();
  const auto k = j["k"].get<std::size_t>();
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  return Market(n, k, read_matrix(j["x"], n, n + k, "x"), read_matrix(j["y"], n, n + k, "y"));
}

Market read_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open market file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return market_from_json(ss.str());
}

void write_market_file(const std::string& path, const Market& market) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write market file: " + path);
  write_market_json(out, market);
}

Matching parse_matching(const std::string& text, std::size_t workers) {
  std::vector<std::size_t> assignment;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("bad matching entry '" + item + "'");
    }
    if (pos != item.size() || v == 0) throw InvalidArgument("bad matching entry '" + item + "'");
    assignment.push_back(static_cast<std::size_t>(v - 1));
  }
  return Matching(std::move(assignment), workers);
}

std::string format_matching(const Matching& m) {
  std::string s;
  for (std::size_t i = 0; i < m.firms(); ++i) {
    if (i) s += ',';
    s += std::to_string(m.partner_of_firm(i) + 1);
  }
  return s;
}

}  // namespace epsmatch
