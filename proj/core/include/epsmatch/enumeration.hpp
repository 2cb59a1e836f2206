#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "epsmatch/market.hpp"

namespace epsmatch {

using BigCount = boost::multiprecision::cpp_int;

struct CountResult {
  BigCount count = 0;
  /// Present when collection was requested; holds at most `cap` matchings.
  std::optional<std::vector<Matching>> matchings;
  std::uint64_t nodes_visited = 0;
};

struct CountOptions {
  bool collect = false;
  std::size_t cap = std::numeric_limits<std::size_t>::max();
  /// Largest n accepted by the pruned search.
  std::size_t limit = 10;
  /// Worker threads for the first-level split; 0 means hardware concurrency.
  unsigned threads = 1;
};

inline constexpr std::size_t kBruteForceLimit = 7;

/// Counts eps-stable matchings exactly by backtracking with pair pruning.
/// Firms are assigned in index order, each trying workers from most to least
/// preferred. Throws InstanceTooLarge when n > options.limit.
CountResult count_eps_stable(const Market& market, const EpsParams& params,
                             const CountOptions& options = {});

/// Unpruned reference: tests every injection with is_eps_stable. n <= 7.
CountResult brute_force_count(const Market& market, const EpsParams& params, bool collect = false,
                              std::size_t cap = std::numeric_limits<std::size_t>::max());

/// (n+k)!/k! as an exact integer.
BigCount falling_factorial(std::size_t n, std::size_t k);

}  // namespace epsmatch
