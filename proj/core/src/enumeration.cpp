#include "epsmatch/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>

#include "epsmatch/error.hpp"
#include "epsmatch/stability.hpp"

namespace epsmatch {

namespace {

struct BranchResult {
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
  std::vector<Matching> found;
};

class PrunedSearch {
 public:
  PrunedSearch(const Market& market, double q, bool collect, std::size_t cap)
      : market_(market),
        x_(market.x()),
        y_(market.y()),
        q_(q),
        n_(market.firms()),
        w_(market.workers()),
        collect_(collect),
        cap_(cap),
        order_(n_),
        assignment_(n_),
        used_(w_, 0) {
    for (std::size_t i = 0; i < n_; ++i) order_[i] = preference_order(market, Side::Firm, i);
  }

  [[nodiscard]] const std::vector<std::size_t>& first_level() const { return order_[0]; }

  BranchResult run_branch(std::size_t first_worker) {
    result_ = {};
    std::fill(used_.begin(), used_.end(), 0);
    assignment_[0] = first_worker;
    used_[first_worker] = 1;
    ++result_.nodes;
    descend(1);
    return std::move(result_);
  }

 private:
  // Does firm i (matched to j) form a blocking pair with an earlier firm ii
  // (matched to jj), in either direction?
  [[nodiscard]] bool conflicts(std::size_t i, std::size_t j, std::size_t ii,
                               std::size_t jj) const {
    if (x_(i, jj) < q_ * x_(i, j) && y_(i, jj) < q_ * y_(ii, jj)) return true;
    return x_(ii, j) < q_ * x_(ii, jj) && y_(ii, j) < q_ * y_(i, j);
  }

  [[nodiscard]] bool leaf_ok() const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double bound = q_ * x_(i, assignment_[i]);
      for (std::size_t j = 0; j < w_; ++j) {
        if (!used_[j] && x_(i, j) < bound) return false;
      }
    }
    return true;
  }

  void descend(std::size_t i) {
    if (i == n_) {
      if (!leaf_ok()) return;
      ++result_.count;
      if (collect_ && result_.found.size() < cap_) result_.found.emplace_back(assignment_, w_);
      return;
    }
    for (std::size_t j : order_[i]) {
      if (used_[j]) continue;
      bool ok = true;
      for (std::size_t ii = 0; ii < i && ok; ++ii) ok = !conflicts(i, j, ii, assignment_[ii]);
      if (!ok) continue;
      assignment_[i] = j;
      used_[j] = 1;
      ++result_.nodes;
      descend(i + 1);
      used_[j] = 0;
    }
  }

  const Market& market_;
  const Matrix& x_;
  const Matrix& y_;
  double q_;
  std::size_t n_;
  std::size_t w_;
  bool collect_;
  std::size_t cap_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<std::size_t> assignment_;
  std::vector<char> used_;
  BranchResult result_;
};

}  // namespace

CountResult count_eps_stable(const Market& market, const EpsParams& params,
                             const CountOptions& options) {
  if (market.firms() > options.limit) {
    throw InstanceTooLarge("instance too large for exact enumeration: n=" +
                           std::to_string(market.firms()) +
                           " exceeds limit " + std::to_string(options.limit));
  }
  const std::vector<std::size_t> branches =
      PrunedSearch(market, params.q(), false, 0).first_level();
  std::vector<BranchResult> results(branches.size());

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(branches.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    PrunedSearch search(market, params.q(), options.collect, options.cap);
    for (std::size_t b; (b = next.fetch_add(1)) < branches.size();) {
      results[b] = search.run_branch(branches[b]);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  CountResult out;
  out.nodes_visited = 1;  // root
  if (options.collect) out.matchings.emplace();
  for (auto& r : results) {
    out.count += r.count;
    out.nodes_visited += r.nodes;
    if (options.collect) {
      for (auto& m : r.found) {
        if (out.matchings->size() >= options.cap) break;
        out.matchings->push_back(std::move(m));
      }
    }
  }
  return out;
}

CountResult brute_force_count(const Market& market, const EpsParams& params, bool collect,
                              std::size_t cap) {
  const std::size_t n = market.firms();
  const std::size_t w = market.workers();
  if (n > kBruteForceLimit) {
    throw InstanceTooLarge("instance too large for brute-force enumeration: n=" +
                           std::to_string(n));
  }
  CountResult out;
  if (collect) out.matchings.emplace();
  std::vector<std::size_t> assignment(n);
  std::vector<char> used(w, 0);
  std::uint64_t count = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    ++out.nodes_visited;
    if (i == n) {
      Matching m(assignment, w);
      if (is_eps_stable(market, m, params)) {
        ++count;
        if (collect && out.matchings->size() < cap) out.matchings->push_back(std::move(m));
      }
      return;
    }
    for (std::size_t j = 0; j < w; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      assignment[i] = j;
      self(self, i + 1);
      used[j] = 0;
    }
  };
  rec(rec, 0);
  out.count = count;
  return out;
}

BigCount falling_factorial(std::size_t n, std::size_t k) {
  BigCount r = 1;
  for (std::size_t t = k + 1; t <= n + k; ++t) r *= t;
  return r;
}

}  // namespace epsmatch
