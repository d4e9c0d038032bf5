#include "meshcoop/random.hpp"

#include <limits>
#include <set>
#include <string>

#include "meshcoop/error.hpp"
#include "meshcoop/net_model.hpp"

namespace meshcoop {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::below: empty range");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;  // last accepted value
  std::uint64_t x;
  do {
    x = next();
  } while (x > limit);
  return x % n;
}

NetworkSpec generate_random(int providers, int nodes_per_provider, int sessions_per_provider,
                            const Params& params, std::uint64_t seed) {
  if (providers < 1 || nodes_per_provider < 1 || sessions_per_provider < 0) {
    throw DomainError("generate_random: providers and nodes_per_provider must be >= 1");
  }
  if (sessions_per_provider > 0 && nodes_per_provider < 2) {
    throw DomainError("generate_random: sessions need at least 2 nodes per provider");
  }
  validate(params);

  Rng rng(seed);
  NetworkSpec spec;
  spec.providers = providers;
  spec.params = params;
  spec.nodes.reserve(static_cast<std::size_t>(providers) * nodes_per_provider);
  NodeId next_id = 1;
  for (ProviderId m = 1; m <= providers; ++m) {
    for (int k = 0; k < nodes_per_provider; ++k) {
      Node node;
      node.id = next_id++;
      node.owner = m;
      node.position.x = rng.uniform(0.0, params.area_side_m);
      node.position.y = rng.uniform(0.0, params.area_side_m);
      spec.nodes.push_back(node);
    }
  }
  const auto n = static_cast<std::uint64_t>(nodes_per_provider);
  for (ProviderId m = 1; m <= providers; ++m) {
    const NodeId first = 1 + (m - 1) * nodes_per_provider;
    for (int k = 1; k <= sessions_per_provider; ++k) {
      const auto src = rng.below(n);
      auto dst = rng.below(n);
      while (dst == src) dst = rng.below(n);
      FlowSession session;
      session.id = "l" + std::to_string(m) + "." + std::to_string(k);
      session.owner = m;
      session.source = first + static_cast<NodeId>(src);
      session.destination = first + static_cast<NodeId>(dst);
      session.rate_req_kbps = rng.uniform(params.rate_req_min_kbps, params.rate_req_max_kbps);
      spec.sessions.push_back(std::move(session));
    }
  }
  return spec;
}

}  // namespace meshcoop
