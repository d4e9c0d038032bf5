#pragma once

#include <functional>
#include <string>
#include <vector>

#include "meshcoop/allocation.hpp"

namespace meshcoop {

// A partition of {1..M} into non-empty disjoint blocks, each block sorted by
// its smallest member.
struct CoalitionStructure {
  std::vector<Coalition> blocks;

  std::string to_string() const;  // "{{1,2},{3}}"
  friend bool operator==(const CoalitionStructure&, const CoalitionStructure&) = default;
};

inline constexpr int kMaxPartitionProviders = 12;

// Every set partition of {1..M}: more blocks first, then lexicographic by the
// member lists of the blocks. Throws SizeError for M > 12.
std::vector<CoalitionStructure> enumerate_partitions(int providers);

struct PayoffRow {
  CoalitionStructure structure;
  std::vector<double> dual_payoff;  // per provider; NaN when unavailable
  std::vector<double> shapley;      // per provider
  double value = 0.0;               // Σ_k v(S_k)
};

struct PayoffMatrix {
  int providers = 0;
  std::vector<PayoffRow> rows;
};

// Dual payoff of one block as a standalone game (entries of non-members 0).
using BlockPricer = std::function<std::vector<double>(Coalition)>;

// One row per structure; every block is an isolated sub-game and singleton
// blocks receive v({m}). Dual payoffs come from each block's own program.
PayoffMatrix structure_table(const Network& network, const CharacteristicFunction& cf);

// As above with a caller-supplied block pricer; an empty pricer leaves dual
// entries NaN (for characteristic functions without a network).
PayoffMatrix structure_table(const CharacteristicFunction& cf, const BlockPricer& pricer);

}  // namespace meshcoop
