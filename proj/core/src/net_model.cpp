#include "meshcoop/net_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "meshcoop/error.hpp"

namespace meshcoop {

ValidationError::ValidationError(std::vector<std::string> offenders)
    : ValidationError("validation failed", std::move(offenders)) {}

ValidationError::ValidationError(const std::string& what, std::vector<std::string> offenders)
    : Error([&] {
        std::ostringstream os;
        os << what;
        for (const auto& o : offenders) os << "\n  - " << o;
        return os.str();
      }()),
      offenders_(std::move(offenders)) {}

Coalition Coalition::of(std::initializer_list<ProviderId> providers) {
  Coalition c;
  for (ProviderId m : providers) {
    if (m < 1 || m > kMaxProviders) throw DomainError("provider id out of range: " + std::to_string(m));
    c = c.with(m);
  }
  return c;
}

std::vector<ProviderId> Coalition::members() const {
  std::vector<ProviderId> out;
  for (Mask rest = mask_; rest != 0; rest &= rest - 1) out.push_back(std::countr_zero(rest) + 1);
  return out;
}

std::string Coalition::to_string() const {
  std::string s = "{";
  bool first = true;
  for (ProviderId m : members()) {
    if (!first) s += ",";
    s += std::to_string(m);
    first = false;
  }
  return s + "}";
}

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

void validate(const Params& p) {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  check(finite_pos(p.price_per_rate), "price_per_rate must be > 0");
  check(finite_pos(p.cost_per_rate), "cost_per_rate must be > 0");
  check(p.price_per_rate > p.cost_per_rate, "price_per_rate must exceed cost_per_rate");
  check(finite_pos(p.bandwidth_hz), "bandwidth_hz must be > 0");
  check(finite_pos(p.tx_range_m), "tx_range_m must be > 0");
  check(finite_pos(p.gain_coeff), "gain_coeff must be > 0");
  check(finite_pos(p.gain_exponent), "gain_exponent must be > 0");
  check(finite_pos(p.tx_power_w), "tx_power_w must be > 0");
  check(finite_pos(p.noise_power_w), "noise_power_w must be > 0");
  check(finite_pos(p.area_side_m), "area_side_m must be > 0");
  check(finite_pos(p.rate_req_min_kbps), "rate_req_min_kbps must be > 0");
  check(finite_pos(p.rate_req_max_kbps) && p.rate_req_min_kbps <= p.rate_req_max_kbps,
        "rate_req_max_kbps must be >= rate_req_min_kbps");
  if (!bad.empty()) throw ValidationError("invalid params", std::move(bad));
}

void validate(const NetworkSpec& spec) {
  validate(spec.params);
  std::vector<std::string> bad;
  if (spec.providers < 1 || spec.providers > Coalition::kMaxProviders) {
    bad.push_back("providers must be in [1, " + std::to_string(Coalition::kMaxProviders) + "]");
  }
  const double side = spec.params.area_side_m;
  std::map<NodeId, const Node*> by_id;
  for (const Node& node : spec.nodes) {
    const std::string tag = "node " + std::to_string(node.id);
    if (!by_id.emplace(node.id, &node).second) bad.push_back(tag + ": duplicate id");
    if (node.owner < 1 || node.owner > spec.providers) bad.push_back(tag + ": owner out of range");
    const auto& [x, y] = node.position;
    if (!(std::isfinite(x) && std::isfinite(y) && x >= 0 && y >= 0 && x <= side && y <= side)) {
      bad.push_back(tag + ": position outside [0, area_side]^2");
    }
  }
  std::set<std::string> session_ids;
  for (const FlowSession& s : spec.sessions) {
    const std::string tag = "session " + s.id;
    if (!session_ids.insert(s.id).second) bad.push_back(tag + ": duplicate id");
    if (s.owner < 1 || s.owner > spec.providers) bad.push_back(tag + ": owner out of range");
    if (!(std::isfinite(s.rate_req_kbps) && s.rate_req_kbps > 0)) bad.push_back(tag + ": rate requirement must be > 0");
    if (s.source == s.destination) bad.push_back(tag + ": source equals destination");
    for (auto [end, name] : {std::pair{s.source, "source"}, std::pair{s.destination, "destination"}}) {
      auto it = by_id.find(end);
      if (it == by_id.end()) {
        bad.push_back(tag + ": " + name + " node " + std::to_string(end) + " does not exist");
      } else if (it->second->owner != s.owner) {
        bad.push_back(tag + ": " + name + " node " + std::to_string(end) + " is not owned by the session owner");
      }
    }
  }
  std::set<std::pair<NodeId, NodeId>> override_pairs;
  for (const CapacityOverride& o : spec.capacity_overrides) {
    const std::string tag = "override (" + std::to_string(o.from) + "," + std::to_string(o.to) + ")";
    if (!by_id.contains(o.from) || !by_id.contains(o.to)) bad.push_back(tag + ": unknown node");
    if (o.from == o.to) bad.push_back(tag + ": self loop");
    if (!(std::isfinite(o.capacity_kbps) && o.capacity_kbps >= 0)) bad.push_back(tag + ": capacity must be >= 0");
    if (!override_pairs.emplace(o.from, o.to).second) bad.push_back(tag + ": duplicate pair");
  }
  if (!bad.empty()) throw ValidationError("invalid network spec", std::move(bad));
}

std::optional<double> link_capacity(double distance_m, const Params& p) {
  if (!(distance_m > 0.0)) throw DomainError("link_capacity: distance must be > 0");
  if (distance_m > p.tx_range_m) return std::nullopt;
  const double gain = p.gain_coeff * std::pow(distance_m, -p.gain_exponent);
  const double snr = p.tx_power_w * gain / p.noise_power_w;
  return p.bandwidth_hz * std::log2(1.0 + snr) / 1000.0;
}

void Network::index() {
  node_lookup_.clear();
  out_.assign(spec_.nodes.size(), {});
  in_.assign(spec_.nodes.size(), {});
  Coalition members;
  for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
    node_lookup_.emplace(spec_.nodes[i].id, i);
    members = members.with(spec_.nodes[i].owner);
  }
  for (const auto& s : spec_.sessions) members = members.with(s.owner);
  members_ = members;
  for (std::size_t k = 0; k < links_.size(); ++k) {
    out_[node_lookup_.at(links_[k].from)].push_back(k);
    in_[node_lookup_.at(links_[k].to)].push_back(k);
  }
}

std::optional<std::size_t> Network::node_index(NodeId id) const {
  auto it = node_lookup_.find(id);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

const Node& Network::node(NodeId id) const {
  auto idx = node_index(id);
  if (!idx) throw DomainError("unknown node " + std::to_string(id));
  return spec_.nodes[*idx];
}

std::optional<std::size_t> Network::link_index(NodeId from, NodeId to) const {
  auto fi = node_index(from);
  if (!fi) return std::nullopt;
  for (std::size_t k : out_[*fi]) {
    if (links_[k].to == to) return k;
  }
  return std::nullopt;
}

Network build_network(NetworkSpec spec) {
  validate(spec);
  std::map<std::pair<NodeId, NodeId>, double> overrides;
  for (const auto& o : spec.capacity_overrides) overrides[{o.from, o.to}] = o.capacity_kbps;

  std::vector<std::string> bad;
  Network net;
  const auto& nodes = spec.nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (i == j) continue;
      auto ov = overrides.find({nodes[i].id, nodes[j].id});
      if (ov != overrides.end()) {
        if (ov->second > 0) net.links_.push_back({nodes[i].id, nodes[j].id, ov->second});
        continue;
      }
      const double d = distance(nodes[i].position, nodes[j].position);
      if (d > spec.params.tx_range_m) continue;
      if (d == 0.0) {
        if (i < j) {
          bad.push_back("nodes " + std::to_string(nodes[i].id) + " and " + std::to_string(nodes[j].id) +
                        " are co-located");
        }
        continue;
      }
      net.links_.push_back({nodes[i].id, nodes[j].id, *link_capacity(d, spec.params)});
    }
  }
  if (!bad.empty()) throw ValidationError("invalid network spec", std::move(bad));
  net.spec_ = std::move(spec);
  net.index();
  return net;
}

Network restrict(const Network& network, Coalition coalition) {
  if (coalition.empty()) throw DomainError("restrict: empty coalition");
  if (!coalition.subset_of(Coalition::grand(network.providers()))) {
    throw DomainError("restrict: coalition " + coalition.to_string() + " names unknown providers");
  }
  Network sub;
  sub.spec_.providers = network.spec_.providers;
  sub.spec_.params = network.spec_.params;
  std::set<NodeId> keep;
  for (const Node& node : network.spec_.nodes) {
    if (coalition.contains(node.owner)) {
      sub.spec_.nodes.push_back(node);
      keep.insert(node.id);
    }
  }
  for (const auto& s : network.spec_.sessions) {
    if (coalition.contains(s.owner)) sub.spec_.sessions.push_back(s);
  }
  for (const auto& o : network.spec_.capacity_overrides) {
    if (keep.contains(o.from) && keep.contains(o.to)) sub.spec_.capacity_overrides.push_back(o);
  }
  for (const Link& link : network.links_) {
    if (keep.contains(link.from) && keep.contains(link.to)) sub.links_.push_back(link);
  }
  sub.index();
  return sub;
}

}  // namespace meshcoop
