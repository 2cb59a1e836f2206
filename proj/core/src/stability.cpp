#include "epsmatch/stability.hpp"

#include <deque>

#include "epsmatch/error.hpp"

namespace epsmatch {

namespace {

void check_shape(const Market& market, const Matching& m) {
  if (m.firms() != market.firms() || m.workers() != market.workers()) {
    throw InvalidArgument("matching does not fit the market");
  }
}

// No validation; callers guarantee shape and j != M(i).
inline bool blocks_unchecked(const Market& market, const Matching& m, std::size_t i,
                             std::size_t j, double q) {
  const Matrix& x = market.x();
  if (!(x(i, j) < q * x(i, m.partner_of_firm(i)))) return false;
  const auto rival = m.partner_of_worker(j);
  if (!rival) return true;
  const Matrix& y = market.y();
  return y(i, j) < q * y(*rival, j);
}

}  // namespace

bool blocks(const Market& market, const Matching& m, std::size_t firm, std::size_t worker,
            const EpsParams& params) {
  check_shape(market, m);
  if (firm >= market.firms() || worker >= market.workers()) {
    throw InvalidArgument("blocking pair index out of range");
  }
  if (m.partner_of_firm(firm) == worker) {
    throw InvalidArgument("a pair cannot block its own match");
  }
  return blocks_unchecked(market, m, firm, worker, params.q());
}

bool is_eps_stable(const Market& market, const Matching& m, const EpsParams& params) {
  check_shape(market, m);
  const double q = params.q();
  for (std::size_t i = 0; i < market.firms(); ++i) {
    const std::size_t own = m.partner_of_firm(i);
    for (std::size_t j = 0; j < market.workers(); ++j) {
      if (j != own && blocks_unchecked(market, m, i, j, q)) return false;
    }
  }
  return true;
}

std::vector<BlockingPair> blocking_pairs(const Market& market, const Matching& m,
                                         const EpsParams& params) {
  check_shape(market, m);
  std::vector<BlockingPair> out;
  const double q = params.q();
  for (std::size_t i = 0; i < market.firms(); ++i) {
    const std::size_t own = m.partner_of_firm(i);
    for (std::size_t j = 0; j < market.workers(); ++j) {
      if (j == own || !blocks_unchecked(market, m, i, j, q)) continue;
      out.push_back({i, j,
                     m.partner_of_worker(j) ? BlockKind::MatchedWorker
                                            : BlockKind::UnmatchedWorker});
    }
  }
  return out;
}

bool classical_stable_rankcheck(const Market& market, const Matching& m) {
  check_shape(market, m);
  const std::size_t n = market.firms();
  const std::size_t w = market.workers();
  // firm_rank[i][j]: position of worker j in firm i's list; likewise for workers.
  std::vector<std::vector<std::size_t>> firm_rank(n, std::vector<std::size_t>(w));
  std::vector<std::vector<std::size_t>> worker_rank(w, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto order = preference_order(market, Side::Firm, i);
    for (std::size_t r = 0; r < order.size(); ++r) firm_rank[i][order[r]] = r;
  }
  for (std::size_t j = 0; j < w; ++j) {
    const auto order = preference_order(market, Side::Worker, j);
    for (std::size_t r = 0; r < order.size(); ++r) worker_rank[j][order[r]] = r;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = m.partner_of_firm(i);
    for (std::size_t j = 0; j < w; ++j) {
      if (j == own || firm_rank[i][j] >= firm_rank[i][own]) continue;
      const auto rival = m.partner_of_worker(j);
      if (!rival || worker_rank[j][i] < worker_rank[j][*rival]) return false;
    }
  }
  return true;
}

Matching deferred_acceptance(const Market& market) {
  const std::size_t n = market.firms();
  const std::size_t w = market.workers();
  std::vector<std::vector<std::size_t>> lists(n);
  for (std::size_t i = 0; i < n; ++i) lists[i] = preference_order(market, Side::Firm, i);

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(n, 0);
  std::vector<std::size_t> holder(w, kNone);
  std::vector<std::size_t> partner(n, kNone);
  std::deque<std::size_t> free_firms;
  for (std::size_t i = 0; i < n; ++i) free_firms.push_back(i);

  const Matrix& y = market.y();
  while (!free_firms.empty()) {
    const std::size_t i = free_firms.front();
    free_firms.pop_front();
    // n <= workers, so a free firm always has someone left to propose to.
    const std::size_t j = lists[i][next[i]++];
    const std::size_t current = holder[j];
    if (current == kNone) {
      holder[j] = i;
      partner[i] = j;
    } else if (y(i, j) < y(current, j)) {
      holder[j] = i;
      partner[i] = j;
      partner[current] = kNone;
      free_firms.push_back(current);
    } else {
      free_firms.push_back(i);
    }
  }
  return Matching(std::move(partner), w);
}

}  // namespace epsmatch
