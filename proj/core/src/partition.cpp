#include "meshcoop/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "meshcoop/error.hpp"

namespace meshcoop {

std::string CoalitionStructure::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ",";
    s += blocks[i].to_string();
  }
  return s + "}";
}

std::vector<CoalitionStructure> enumerate_partitions(int providers) {
  if (providers < 1) throw DomainError("enumerate_partitions: need at least one provider");
  if (providers > kMaxPartitionProviders) {
    throw SizeError("partition enumeration limited to M <= " + std::to_string(kMaxPartitionProviders) +
                    ", got " + std::to_string(providers));
  }
  // Restricted growth strings: label[0] = 0, label[i] <= 1 + max(label[0..i)).
  std::vector<CoalitionStructure> out;
  const auto n = static_cast<std::size_t>(providers);
  std::vector<int> label(n, 0);
  std::vector<int> prefix_max(n, 0);
  for (;;) {
    const int blocks = prefix_max[n - 1] + 1;
    CoalitionStructure cs;
    cs.blocks.assign(static_cast<std::size_t>(blocks), Coalition{});
    for (std::size_t i = 0; i < n; ++i) {
      auto& b = cs.blocks[static_cast<std::size_t>(label[i])];
      b = b.with(static_cast<ProviderId>(i + 1));
    }
    out.push_back(std::move(cs));

    std::size_t i = n - 1;
    while (i > 0 && label[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++label[i];
    prefix_max[i] = std::max(prefix_max[i - 1], label[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      label[k] = 0;
      prefix_max[k] = prefix_max[i];
    }
  }
  auto key = [](const CoalitionStructure& cs) {
    std::vector<std::vector<ProviderId>> members;
    for (const auto& b : cs.blocks) members.push_back(b.members());
    return members;
  };
  std::stable_sort(out.begin(), out.end(), [&](const CoalitionStructure& a, const CoalitionStructure& b) {
    if (a.blocks.size() != b.blocks.size()) return a.blocks.size() > b.blocks.size();
    return key(a) < key(b);
  });
  return out;
}

PayoffMatrix structure_table(const CharacteristicFunction& cf, const BlockPricer& pricer) {
  cf.require_complete();
  const int M = cf.providers();
  PayoffMatrix table;
  table.providers = M;
  for (const auto& cs : enumerate_partitions(M)) {
    PayoffRow row;
    row.structure = cs;
    row.dual_payoff.assign(static_cast<std::size_t>(M), std::numeric_limits<double>::quiet_NaN());
    row.shapley.assign(static_cast<std::size_t>(M), 0.0);
    for (Coalition block : cs.blocks) {
      row.value += cf(block);
      if (block.size() == 1) {
        const ProviderId m = block.members().front();
        row.dual_payoff[static_cast<std::size_t>(m - 1)] = cf(block);
        row.shapley[static_cast<std::size_t>(m - 1)] = cf(block);
        continue;
      }
      const Allocation phi = shapley(cf, block);
      std::vector<double> mu;
      if (pricer) mu = pricer(block);
      for (ProviderId m : block.members()) {
        const auto at = static_cast<std::size_t>(m - 1);
        row.shapley[at] = phi.payoffs[at];
        if (pricer) row.dual_payoff[at] = mu.at(at);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PayoffMatrix structure_table(const Network& network, const CharacteristicFunction& cf) {
  std::map<Coalition, std::vector<double>> memo;
  BlockPricer pricer = [&](Coalition block) {
    auto it = memo.find(block);
    if (it == memo.end()) it = memo.emplace(block, dual_payoff(network, block, cf.mode()).payoffs).first;
    return it->second;
  };
  return structure_table(cf, pricer);
}

}  // namespace meshcoop
