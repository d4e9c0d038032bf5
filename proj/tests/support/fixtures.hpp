#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "meshcoop/coalition.hpp"
#include "meshcoop/net_model.hpp"

namespace meshcoop::testing {

// Characteristic function read off the payoff matrix of the three-provider
// case study: singleton rows give v({m}); each two-block row's total minus
// the singleton block gives the pair value.
inline CharacteristicFunction case_study_cf() {
  return CharacteristicFunction::from_values(3, {
                                                    {Coalition::of({1}), 767.0},
                                                    {Coalition::of({2}), 1101.0},
                                                    {Coalition::of({3}), 976.0},
                                                    {Coalition::of({1, 2}), 2877.0 - 976.0},
                                                    {Coalition::of({1, 3}), 2936.0 - 1101.0},
                                                    {Coalition::of({2, 3}), 2974.0 - 767.0},
                                                    {Coalition::of({1, 2, 3}), 3062.0},
                                                });
}

// Node at explicit coordinates.
struct PlacedNode {
  NodeId id;
  ProviderId owner;
  double x;
  double y;
};

inline NetworkSpec placed_spec(int providers, const std::vector<PlacedNode>& nodes,
                               std::vector<FlowSession> sessions, Params params = {}) {
  NetworkSpec spec;
  spec.providers = providers;
  spec.params = params;
  for (const auto& n : nodes) spec.nodes.push_back({n.id, n.owner, {n.x, n.y}});
  spec.sessions = std::move(sessions);
  return spec;
}

// Graph given link by link: nodes sit 10 m apart on a row with a 1 m radio
// range, so every link comes from an override.
struct ExplicitLink {
  NodeId from;
  NodeId to;
  double capacity;
};

inline NetworkSpec explicit_spec(int providers, const std::vector<std::pair<NodeId, ProviderId>>& nodes,
                                 const std::vector<ExplicitLink>& links, std::vector<FlowSession> sessions,
                                 Params params = {}) {
  params.tx_range_m = 1.0;
  params.area_side_m = 10.0 * static_cast<double>(nodes.size() + 1);
  NetworkSpec spec;
  spec.providers = providers;
  spec.params = params;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    spec.nodes.push_back({nodes[i].first, nodes[i].second, {10.0 * static_cast<double>(i + 1), 5.0}});
  }
  for (const auto& l : links) spec.capacity_overrides.push_back({l.from, l.to, l.capacity});
  spec.sessions = std::move(sessions);
  return spec;
}

// S(1) -> A(2) -> D(3), one provider, capacities `cap` both ways.
inline NetworkSpec line_spec(double cap, double rate, Params params = {}) {
  return explicit_spec(1, {{1, 1}, {2, 1}, {3, 1}},
                       {{1, 2, cap}, {2, 1, cap}, {2, 3, cap}, {3, 2, cap}},
                       {{"l", 1, 1, 3, rate}}, params);
}

// Provider 1 owns three straight chains of relays 100 m apart: sessions of
// 33, 42 and 55 Kbps whose only routes have 3, 3 and 4 hops. Providers 2 and
// 3 own a 2-hop (40 Kbps) and a 3-hop (30 Kbps) chain far away. With the
// default radio model every link carries ~2.5 Mbps, far above demand.
inline NetworkSpec worked_example_spec() {
  Params params;
  params.area_side_m = 1200.0;
  std::vector<PlacedNode> nodes;
  std::vector<FlowSession> sessions;
  NodeId next = 1;
  auto chain = [&](ProviderId owner, double x0, double y, int hops, const std::string& id, double rate) {
    const NodeId first = next;
    for (int k = 0; k <= hops; ++k) nodes.push_back({next++, owner, x0 + 100.0 * k, y});
    sessions.push_back({id, owner, first, next - 1, rate});
  };
  chain(1, 100.0, 100.0, 3, "l1.1", 33.0);
  chain(1, 100.0, 400.0, 3, "l1.2", 42.0);
  chain(1, 100.0, 700.0, 4, "l1.3", 55.0);
  chain(2, 800.0, 100.0, 2, "l2.1", 40.0);
  chain(3, 800.0, 500.0, 3, "l3.1", 30.0);
  return placed_spec(3, nodes, std::move(sessions), params);
}

// Two providers, each with a session whose only standalone route has three
// hops; in each region the other provider owns one relay that shortens the
// route to two hops.
inline NetworkSpec cooperation_spec(double rate1 = 50.0, double rate2 = 70.0) {
  Params params;
  params.area_side_m = 1500.0;
  std::vector<PlacedNode> nodes;
  auto region = [&](ProviderId owner, ProviderId helper, NodeId base, double dx) {
    nodes.push_back({base + 0, owner, 100.0 + dx, 100.0});   // source
    nodes.push_back({base + 1, owner, 160.0 + dx, 225.0});   // own relay
    nodes.push_back({base + 2, owner, 300.0 + dx, 225.0});   // own relay
    nodes.push_back({base + 3, owner, 360.0 + dx, 100.0});   // destination
    nodes.push_back({base + 4, helper, 230.0 + dx, 100.0});  // other provider's relay
  };
  region(1, 2, 1, 0.0);
  region(2, 1, 11, 1000.0);
  return placed_spec(2, nodes, {{"l1.1", 1, 1, 4, rate1}, {"l2.1", 2, 11, 14, rate2}}, params);
}

}  // namespace meshcoop::testing
