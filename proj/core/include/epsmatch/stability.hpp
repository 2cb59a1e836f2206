#pragma once

#include <vector>

#include "epsmatch/market.hpp"

namespace epsmatch {

enum class BlockKind { MatchedWorker, UnmatchedWorker };

struct BlockingPair {
  std::size_t firm;
  std::size_t worker;
  BlockKind kind;

  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

// A pair (i, j) with j != M(i) eps-blocks M when firm i gains more than eps
// in utility and, if j is matched, worker j does too. With log utilities this
// is X(i,j) < q X(i,M(i)) [and Y(i,j) < q Y(M(j),j)], q = exp(-eps lambda).
// Inequalities are strict.

/// Throws InvalidArgument when j == M(i).
bool blocks(const Market& market, const Matching& m, std::size_t firm, std::size_t worker,
            const EpsParams& params);

bool is_eps_stable(const Market& market, const Matching& m, const EpsParams& params);

/// All blocking pairs, ordered by firm then worker.
std::vector<BlockingPair> blocking_pairs(const Market& market, const Matching& m,
                                         const EpsParams& params);

/// Classical stability decided from preference ranks only.
bool classical_stable_rankcheck(const Market& market, const Matching& m);

/// Firm-proposing Gale-Shapley; every firm ends up matched.
Matching deferred_acceptance(const Market& market);

}  // namespace epsmatch
