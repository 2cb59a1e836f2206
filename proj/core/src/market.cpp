#include "epsmatch/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <string>

#include "epsmatch/error.hpp"

namespace epsmatch {

namespace {

bool has_duplicates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

}  // namespace

Market::Market(std::size_t n, std::size_t k, Matrix x, Matrix y)
    : n_(n), k_(k), x_(std::move(x)), y_(std::move(y)) {
  if (n_ == 0) throw InvalidArgument("market needs at least one firm");
  if (x_.rows() != n_ || x_.cols() != n_ + k_ || y_.rows() != n_ || y_.cols() != n_ + k_) {
    throw InvalidArgument("market matrices must be n x (n+k)");
  }
  for (const Matrix* m : {&x_, &y_}) {
    for (double v : m->data()) {
      if (!(v > 0.0 && v < 1.0)) {
        throw InvalidArgument("market entries must lie strictly inside (0,1), got " +
                              std::to_string(v));
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = x_.row(i);
    if (has_duplicates({r.begin(), r.end()})) {
      throw InvalidArgument("tie in row " + std::to_string(i + 1) + " of X");
    }
  }
  std::vector<double> column(n_);
  for (std::size_t j = 0; j < n_ + k_; ++j) {
    for (std::size_t i = 0; i < n_; ++i) column[i] = y_(i, j);
    if (has_duplicates(column)) {
      throw InvalidArgument("tie in column " + std::to_string(j + 1) + " of Y");
    }
  }
}

Matching::Matching(std::vector<std::size_t> assignment, std::size_t workers)
    : assignment_(std::move(assignment)), firm_of_(workers, kUnmatched) {
  if (assignment_.size() > workers) {
    throw InvalidArgument("matching has more firms than workers");
  }
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    const std::size_t w = assignment_[i];
    if (w >= workers) {
      throw InvalidArgument("firm " + std::to_string(i + 1) + " matched to out-of-range worker " +
                            std::to_string(w + 1));
    }
    if (firm_of_[w] != kUnmatched) {
      throw InvalidArgument("worker " + std::to_string(w + 1) + " matched twice");
    }
    firm_of_[w] = i;
  }
}

Matching Matching::diagonal(std::size_t n, std::size_t workers) {
  std::vector<std::size_t> a(n);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return Matching(std::move(a), workers);
}

std::optional<std::size_t> Matching::partner_of_worker(std::size_t worker) const {
  const std::size_t f = firm_of_.at(worker);
  if (f == kUnmatched) return std::nullopt;
  return f;
}

EpsParams::EpsParams(double eps, double lambda)
    : eps_(eps), lambda_(lambda) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("eps must be finite and >= 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and > 0");
  q_ = std::exp(-eps * lambda);
  p_ = std::exp(-2.0 * eps * lambda);
  // exp(-2x) can underflow to 0 for huge eps*lambda; every decision then
  // behaves as "nothing blocks", which the smallest positive double preserves.
  if (p_ == 0.0) p_ = std::numeric_limits<double>::denorm_min();
  if (q_ == 0.0) q_ = std::numeric_limits<double>::denorm_min();
}

EpsParams EpsParams::unchecked(double eps, double lambda, double p, double q) noexcept {
  EpsParams e;
  e.eps_ = eps;
  e.lambda_ = lambda;
  e.p_ = p;
  e.q_ = q;
  return e;
}

void EpsParams::validate() const {
  if (!(eps_ >= 0.0)) throw InvalidArgument("EpsParams: eps must be >= 0");
  if (!(lambda_ > 0.0)) throw InvalidArgument("EpsParams: lambda must be > 0");
  if (!(p_ > 0.0 && p_ <= 1.0)) throw InvalidArgument("EpsParams: p must lie in (0,1]");
  if (!(q_ > 0.0 && q_ <= 1.0)) throw InvalidArgument("EpsParams: q must lie in (0,1]");
  if (std::abs(q_ * q_ - p_) > 1e-12 && p_ > std::numeric_limits<double>::min()) {
    throw InvalidArgument("EpsParams: q must equal sqrt(p)");
  }
  if (eps_ == 0.0 && p_ != 1.0) throw InvalidArgument("EpsParams: eps == 0 requires p == 1");
  if (std::abs(q_ - std::exp(-eps_ * lambda_)) > 1e-12) {
    throw InvalidArgument("EpsParams: q must equal exp(-eps*lambda)");
  }
}

Market generate_market(std::size_t n, std::size_t k, Seed seed) {
  if (n == 0) throw InvalidArgument("invalid size: n must be >= 1");
  CounterRng rng(seed);
  Matrix x(n, n + k);
  Matrix y(n, n + k);
  for (Matrix* m : {&x, &y}) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n + k; ++j) (*m)(i, j) = rng.uniform_open();
    }
  }
  return Market(n, k, std::move(x), std::move(y));
}

std::vector<std::size_t> preference_order(const Market& market, Side side, std::size_t index) {
  std::vector<double> keys;
  if (side == Side::Firm) {
    if (index >= market.firms()) throw InvalidArgument("firm index out of range");
    const auto r = market.x().row(index);
    keys.assign(r.begin(), r.end());
  } else {
    if (index >= market.workers()) throw InvalidArgument("worker index out of range");
    keys.resize(market.firms());
    for (std::size_t i = 0; i < market.firms(); ++i) keys[i] = market.y()(i, index);
  }
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return order;
}

double utility(double entry, double lambda) {
  if (!(entry > 0.0 && entry < 1.0)) throw InvalidArgument("utility entry must lie in (0,1)");
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  return -std::log(entry) / lambda;
}

}  // namespace epsmatch
