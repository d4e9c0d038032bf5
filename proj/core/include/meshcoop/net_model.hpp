#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "meshcoop/coalition_mask.hpp"

namespace meshcoop {

// Economic and radio parameters shared by every provider.
struct Params {
  double price_per_rate = 10.0;  // payoff per Kbps served
  double cost_per_rate = 1.0;    // payoff per Kbps per transmitting node
  double bandwidth_hz = 200e3;
  double tx_range_m = 150.0;
  double gain_coeff = 62.5;
  double gain_exponent = 4.0;
  double tx_power_w = 1.0;
  double noise_power_w = 1e-10;
  double area_side_m = 600.0;
  double rate_req_min_kbps = 20.0;
  double rate_req_max_kbps = 80.0;

  friend bool operator==(const Params&, const Params&) = default;
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

struct Node {
  NodeId id = 0;
  ProviderId owner = 0;
  Position position;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
  NodeId from = 0;
  NodeId to = 0;
  double capacity_kbps = 0.0;

  friend bool operator==(const Link&, const Link&) = default;
};

struct FlowSession {
  std::string id;
  ProviderId owner = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double rate_req_kbps = 0.0;

  friend bool operator==(const FlowSession&, const FlowSession&) = default;
};

// Replaces the derived capacity of one directed pair. A pair outside
// transmission range gains a link; capacity 0 removes the link.
struct CapacityOverride {
  NodeId from = 0;
  NodeId to = 0;
  double capacity_kbps = 0.0;

  friend bool operator==(const CapacityOverride&, const CapacityOverride&) = default;
};

struct NetworkSpec {
  int providers = 0;
  std::vector<Node> nodes;
  std::vector<FlowSession> sessions;
  Params params;
  std::vector<CapacityOverride> capacity_overrides;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// Throw ValidationError listing every violated invariant.
void validate(const Params& params);
void validate(const NetworkSpec& spec);

// Shannon capacity in Kbps of a link of the given length, or nullopt when the
// distance exceeds the transmission range. Throws DomainError for distance <= 0.
std::optional<double> link_capacity(double distance_m, const Params& params);

// Immutable graph view: nodes of `spec`, derived directed links, adjacency.
class Network {
 public:
  const NetworkSpec& spec() const { return spec_; }
  const Params& params() const { return spec_.params; }
  int providers() const { return spec_.providers; }
  const std::vector<Node>& nodes() const { return spec_.nodes; }
  const std::vector<FlowSession>& sessions() const { return spec_.sessions; }
  const std::vector<Link>& links() const { return links_; }

  // Indices into links() leaving / entering the node at `node_index`.
  std::span<const std::size_t> out_links(std::size_t node_index) const { return out_[node_index]; }
  std::span<const std::size_t> in_links(std::size_t node_index) const { return in_[node_index]; }

  std::optional<std::size_t> node_index(NodeId id) const;
  const Node& node(NodeId id) const;
  std::optional<std::size_t> link_index(NodeId from, NodeId to) const;
  // Providers owning at least one node or session.
  Coalition members() const { return members_; }

 private:
  friend Network build_network(NetworkSpec spec);
  friend Network restrict(const Network& network, Coalition coalition);

  void index();

  NetworkSpec spec_;
  std::vector<Link> links_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::unordered_map<NodeId, std::size_t> node_lookup_;
  Coalition members_;
};

// Validates `spec` and derives one directed link per ordered in-range pair,
// ordered by (from, to) position in the node list. Overrides win.
Network build_network(NetworkSpec spec);

// Subnetwork induced by the nodes and sessions of coalition members.
// Throws DomainError for an empty coalition or members outside {1..M}.
Network restrict(const Network& network, Coalition coalition);

// Seeded random instance: positions i.i.d. uniform over the square, then per
// provider `sessions_per_provider` sessions between distinct own nodes with
// uniform rate requirements. See random.hpp for the exact draw order.
NetworkSpec generate_random(int providers, int nodes_per_provider, int sessions_per_provider,
                            const Params& params, std::uint64_t seed);

}  // namespace meshcoop
