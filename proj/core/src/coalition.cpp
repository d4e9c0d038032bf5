#include "meshcoop/coalition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_map>

#include "meshcoop/error.hpp"

namespace meshcoop {

const char* to_string(DemandMode mode) { return mode == DemandMode::elastic ? "elastic" : "strict"; }

DemandMode parse_demand_mode(const std::string& text) {
  if (text == "elastic") return DemandMode::elastic;
  if (text == "strict") return DemandMode::strict;
  throw DomainError("unknown demand mode '" + text + "' (expected elastic or strict)");
}

namespace {

std::string link_name(const Link& l) { return "(" + std::to_string(l.from) + "," + std::to_string(l.to) + ")"; }

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Adds the flow columns of one session plus its conservation rows; shared by
// the payoff program and the isolated max-flow. Returns the column index per
// link (npos where excluded).
std::vector<std::size_t> add_session_flows(const Network& net, std::size_t s, lp::Problem& lp,
                                           CoalitionProgram* prog, double flow_cost, double revenue) {
  const FlowSession& session = net.sessions()[s];
  const auto& links = net.links();
  std::vector<std::size_t> col(links.size(), npos);
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& link = links[k];
    if (link.to == session.source || link.from == session.destination) continue;
    const double c = link.from == session.source ? revenue - flow_cost : -flow_cost;
    col[k] = lp.add_var(c, "f[" + session.id + "]" + link_name(link));
    if (prog) prog->columns.push_back({CoalitionProgram::ColumnKind::flow, s, k});
  }
  for (std::size_t i = 0; i < net.nodes().size(); ++i) {
    const Node& node = net.nodes()[i];
    if (node.id == session.source || node.id == session.destination) continue;
    lp::Row row;
    for (std::size_t k : net.out_links(i)) {
      if (col[k] != npos) row.terms.push_back({col[k], 1.0});
    }
    for (std::size_t k : net.in_links(i)) {
      if (col[k] != npos) row.terms.push_back({col[k], -1.0});
    }
    if (row.terms.empty()) continue;
    row.label = "cons[" + session.id + "]@" + std::to_string(node.id);
    lp.eq_rows.push_back(std::move(row));
    if (prog) {
      prog->eq_tags.push_back({CoalitionProgram::RowKind::conservation, s, 0, node.id, node.owner});
    }
  }
  return col;
}

void add_capacity_rows(const Network& net, const std::vector<std::vector<std::size_t>>& cols, lp::Problem& lp,
                       CoalitionProgram* prog) {
  const auto& links = net.links();
  for (std::size_t k = 0; k < links.size(); ++k) {
    lp::Row row;
    for (const auto& per_session : cols) {
      if (per_session[k] != npos) row.terms.push_back({per_session[k], 1.0});
    }
    if (row.terms.empty()) continue;
    row.rhs = links[k].capacity_kbps;
    row.label = "cap" + link_name(links[k]);
    lp.ineq_rows.push_back(std::move(row));
    if (prog) {
      prog->ineq_tags.push_back({CoalitionProgram::RowKind::capacity, 0, k, 0, net.node(links[k].from).owner});
    }
  }
}

double isolated_max_flow(const Network& sub, std::size_t s, lp::Solver& solver) {
  lp::Problem lp;
  std::vector<std::vector<std::size_t>> cols(1);
  cols[0] = add_session_flows(sub, s, lp, nullptr, 0.0, 1.0);
  add_capacity_rows(sub, cols, lp, nullptr);
  const lp::Solution sol = solver.solve(lp);
  if (sol.status != lp::Status::optimal) throw NumericFailure("session max-flow program is not optimal");
  return std::max(0.0, sol.value);
}

std::size_t session_slot(const Network& net, const std::string& id) {
  const auto& ss = net.sessions();
  for (std::size_t s = 0; s < ss.size(); ++s) {
    if (ss[s].id == id) return s;
  }
  return npos;
}

}  // namespace

CoalitionProgram build_coalition_lp(const Network& network, Coalition coalition, DemandMode mode) {
  if (coalition.empty()) throw DomainError("build_coalition_lp: empty coalition");
  CoalitionProgram prog;
  prog.coalition = coalition;
  prog.mode = mode;
  prog.subnetwork = restrict(network, coalition);
  const Network& sub = prog.subnetwork;
  const Params& params = sub.params();
  const double price = params.price_per_rate;
  const double cost = params.cost_per_rate;
  lp::Problem& lp = prog.problem;

  std::vector<std::vector<std::size_t>> cols;
  std::vector<std::size_t> served_col;
  if (mode == DemandMode::strict) {
    lp::Solver solver;
    for (std::size_t s = 0; s < sub.sessions().size(); ++s) {
      prog.fixed_rate.push_back(std::min(sub.sessions()[s].rate_req_kbps, isolated_max_flow(sub, s, solver)));
    }
  }
  for (std::size_t s = 0; s < sub.sessions().size(); ++s) {
    const FlowSession& session = sub.sessions()[s];
    if (mode == DemandMode::elastic) {
      served_col.push_back(lp.add_var(price, "r[" + session.id + "]"));
      prog.columns.push_back({CoalitionProgram::ColumnKind::served, s, 0});
      cols.push_back(add_session_flows(sub, s, lp, &prog, cost, 0.0));
    } else {
      cols.push_back(add_session_flows(sub, s, lp, &prog, cost, price));
    }
  }
  add_capacity_rows(sub, cols, lp, &prog);
  for (std::size_t s = 0; s < sub.sessions().size(); ++s) {
    const FlowSession& session = sub.sessions()[s];
    lp::Row balance;
    balance.label = "src[" + session.id + "]";
    for (std::size_t k : sub.out_links(*sub.node_index(session.source))) {
      if (cols[s][k] != npos) balance.terms.push_back({cols[s][k], 1.0});
    }
    if (mode == DemandMode::elastic) {
      balance.terms.push_back({served_col[s], -1.0});
      lp::Row demand;
      demand.terms.push_back({served_col[s], 1.0});
      demand.rhs = session.rate_req_kbps;
      demand.label = "dem[" + session.id + "]";
      lp.ineq_rows.push_back(std::move(demand));
      prog.ineq_tags.push_back({CoalitionProgram::RowKind::demand, s, 0, 0, session.owner});
    } else {
      balance.rhs = prog.fixed_rate[s];
    }
    lp.eq_rows.push_back(std::move(balance));
    prog.eq_tags.push_back({CoalitionProgram::RowKind::source_balance, s, 0, session.source, session.owner});
  }
  return prog;
}

Routing extract_routing(const CoalitionProgram& prog, const lp::Solution& sol) {
  Routing routing;
  const Network& sub = prog.subnetwork;
  for (std::size_t s = 0; s < sub.sessions().size(); ++s) {
    routing.served[sub.sessions()[s].id] = prog.mode == DemandMode::strict ? prog.fixed_rate[s] : 0.0;
  }
  for (std::size_t j = 0; j < prog.columns.size(); ++j) {
    const auto& col = prog.columns[j];
    const double v = std::max(0.0, sol.primal[j]);
    const std::string& id = sub.sessions()[col.session].id;
    if (col.kind == CoalitionProgram::ColumnKind::served) {
      routing.served[id] = v;
    } else if (v > 1e-12) {
      const Link& link = sub.links()[col.link];
      routing.flows.push_back({id, link.from, link.to, v});
    }
  }
  return routing;
}

double session_max_rate(const Network& network, Coalition coalition, const std::string& session_id) {
  const Network sub = restrict(network, coalition);
  const std::size_t s = session_slot(sub, session_id);
  if (s == npos) {
    throw DomainError("session_max_rate: session " + session_id + " is not owned by coalition " + coalition.to_string());
  }
  lp::Solver solver;
  return isolated_max_flow(sub, s, solver);
}

CoalitionOutcome coalition_value(const Network& network, Coalition coalition, DemandMode mode, lp::Solver* solver) {
  CoalitionOutcome out;
  if (coalition.empty()) return out;
  lp::Solver local;
  lp::Solver& lps = solver ? *solver : local;
  const CoalitionProgram prog = build_coalition_lp(network, coalition, mode);
  const lp::Solution sol = lps.solve(prog.problem);
  if (sol.status == lp::Status::infeasible) {
    // Sessions that fall short of their fixed rate when total served
    // rate is maximised without costs.
    lp::Problem relaxed = prog.problem;
    std::fill(relaxed.objective.begin(), relaxed.objective.end(), 0.0);
    std::vector<std::size_t> short_col;
    for (std::size_t i = 0; i < prog.eq_tags.size(); ++i) {
      if (prog.eq_tags[i].kind != CoalitionProgram::RowKind::source_balance) continue;
      lp::Row& row = relaxed.eq_rows[i];
      const std::size_t r = relaxed.add_var(1.0);
      row.terms.push_back({r, -1.0});
      lp::Row cap;
      cap.terms.push_back({r, 1.0});
      cap.rhs = row.rhs;
      row.rhs = 0.0;
      relaxed.ineq_rows.push_back(std::move(cap));
      short_col.push_back(r);
    }
    const lp::Solution rs = lps.solve(relaxed);
    std::vector<std::string> blocking;
    for (std::size_t s = 0; s < prog.fixed_rate.size(); ++s) {
      if (rs.status != lp::Status::optimal || rs.primal[short_col[s]] < prog.fixed_rate[s] - 1e-6) {
        blocking.push_back(prog.subnetwork.sessions()[s].id);
      }
    }
    std::string what = "strict demand infeasible for coalition " + coalition.to_string() + "; blocking sessions:";
    for (const auto& b : blocking) what += " " + b;
    throw InfeasibleDemandError(what, std::move(blocking));
  }
  if (sol.status != lp::Status::optimal) {
    throw NumericFailure(std::string("coalition program is ") + lp::to_string(sol.status));
  }
  out.value = sol.value;
  out.routing = extract_routing(prog, sol);
  out.degenerate = sol.degenerate;
  return out;
}

std::vector<std::string> check_routing(const Network& network, const Routing& routing, double tol) {
  std::vector<std::string> bad;
  std::unordered_map<std::string, const FlowSession*> sessions;
  for (const auto& s : network.sessions()) sessions.emplace(s.id, &s);
  std::vector<double> link_load(network.links().size(), 0.0);
  // net outflow per (session, node index)
  std::map<std::pair<std::string, std::size_t>, double> balance;
  for (const auto& f : routing.flows) {
    const std::string tag = "flow " + f.session + " (" + std::to_string(f.from) + "," + std::to_string(f.to) + ")";
    auto sit = sessions.find(f.session);
    auto k = network.link_index(f.from, f.to);
    if (sit == sessions.end()) {
      bad.push_back(tag + ": unknown session");
      continue;
    }
    if (!k) {
      bad.push_back(tag + ": unknown link");
      continue;
    }
    if (f.rate_kbps < -tol) bad.push_back(tag + ": negative rate");
    if (f.to == sit->second->source) bad.push_back(tag + ": flow into source");
    if (f.from == sit->second->destination) bad.push_back(tag + ": flow out of destination");
    link_load[*k] += f.rate_kbps;
    balance[{f.session, *network.node_index(f.from)}] += f.rate_kbps;
    balance[{f.session, *network.node_index(f.to)}] -= f.rate_kbps;
  }
  for (std::size_t k = 0; k < link_load.size(); ++k) {
    if (link_load[k] > network.links()[k].capacity_kbps + tol) {
      bad.push_back("link " + link_name(network.links()[k]) + ": load exceeds capacity");
    }
  }
  for (const auto& [id, served] : routing.served) {
    auto sit = sessions.find(id);
    if (sit == sessions.end()) {
      bad.push_back("served rate for unknown session " + id);
      continue;
    }
    if (served < -tol || served > sit->second->rate_req_kbps + tol) bad.push_back("session " + id + ": served rate out of [0, R]");
  }
  for (const auto& s : network.sessions()) {
    auto it = routing.served.find(s.id);
    const double served = it == routing.served.end() ? 0.0 : it->second;
    for (std::size_t i = 0; i < network.nodes().size(); ++i) {
      const NodeId id = network.nodes()[i].id;
      auto bit = balance.find({s.id, i});
      const double out = bit == balance.end() ? 0.0 : bit->second;
      double expect = 0.0;
      if (id == s.source) expect = served;
      if (id == s.destination) expect = -served;
      if (std::abs(out - expect) > tol) {
        bad.push_back("session " + s.id + ": conservation violated at node " + std::to_string(id));
      }
    }
  }
  return bad;
}

CharacteristicFunction::CharacteristicFunction(int providers, DemandMode mode) : providers_(providers), mode_(mode) {
  if (providers < 1) throw DomainError("characteristic function needs at least one provider");
  if (providers > kMaxProviders) {
    throw SizeError("characteristic function limited to " + std::to_string(kMaxProviders) + " providers, got " +
                    std::to_string(providers));
  }
  values_.assign(std::size_t{1} << providers, std::nullopt);
  values_[0] = 0.0;
}

CharacteristicFunction CharacteristicFunction::from_values(int providers, const std::map<Coalition, double>& values) {
  CharacteristicFunction cf(providers);
  for (const auto& [c, v] : values) cf.set(c, v);
  return cf;
}

void CharacteristicFunction::set(Coalition coalition, double value, std::optional<Routing> routing) {
  if (!coalition.subset_of(grand())) throw DomainError("coalition " + coalition.to_string() + " outside player set");
  if (coalition.empty() && value != 0.0) throw DomainError("v(empty) must be 0");
  values_[coalition.mask()] = value;
  if (routing) routings_[coalition] = std::move(*routing);
}

bool CharacteristicFunction::has(Coalition coalition) const {
  return coalition.subset_of(grand()) && values_[coalition.mask()].has_value();
}

double CharacteristicFunction::value(Coalition coalition) const {
  if (!has(coalition)) throw DomainError("characteristic function has no value for " + coalition.to_string());
  return *values_[coalition.mask()];
}

const Routing* CharacteristicFunction::routing(Coalition coalition) const {
  auto it = routings_.find(coalition);
  return it == routings_.end() ? nullptr : &it->second;
}

std::vector<Coalition> CharacteristicFunction::missing() const {
  std::vector<Coalition> out;
  for (std::size_t mask = 0; mask < values_.size(); ++mask) {
    if (!values_[mask]) out.push_back(Coalition::from_mask(static_cast<Coalition::Mask>(mask)));
  }
  return out;
}

void CharacteristicFunction::require_complete() const {
  const auto miss = missing();
  if (miss.empty()) return;
  std::string what = "characteristic function incomplete; missing:";
  for (std::size_t i = 0; i < miss.size() && i < 16; ++i) what += " " + miss[i].to_string();
  if (miss.size() > 16) what += " ... (" + std::to_string(miss.size()) + " total)";
  throw DomainError(what);
}

CharacteristicFunction characteristic_function(const Network& network, DemandMode mode, unsigned threads) {
  const int M = network.providers();
  if (M > CharacteristicFunction::kMaxProviders) {
    throw SizeError("enumeration over 2^M coalitions limited to M <= 20, got " + std::to_string(M));
  }
  CharacteristicFunction cf(M, mode);
  const std::size_t count = std::size_t{1} << M;
  std::vector<CoalitionOutcome> outcomes(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{1};
  auto worker = [&] {
    lp::Solver solver;
    for (std::size_t mask = next++; mask < count; mask = next++) {
      try {
        outcomes[mask] = coalition_value(network, Coalition::from_mask(static_cast<Coalition::Mask>(mask)), mode, &solver);
      } catch (...) {
        errors[mask] = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count - 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (std::size_t mask = 1; mask < count; ++mask) {
    if (errors[mask]) std::rethrow_exception(errors[mask]);
    cf.set(Coalition::from_mask(static_cast<Coalition::Mask>(mask)), outcomes[mask].value,
           std::move(outcomes[mask].routing));
  }
  cf.set(Coalition{}, 0.0, Routing{});
  return cf;
}

double PayoffBreakdown::total_net() const {
  double t = 0.0;
  for (const auto& p : providers) t += p.net;
  return t;
}

PayoffBreakdown payoff_breakdown(const Routing& routing, const Network& network, const Params& params) {
  std::vector<std::string> bad;
  PayoffBreakdown out;
  out.providers.resize(static_cast<std::size_t>(network.providers()));
  for (int m = 1; m <= network.providers(); ++m) out.providers[m - 1].provider = m;
  std::unordered_map<std::string, const FlowSession*> sessions;
  for (const auto& s : network.sessions()) sessions.emplace(s.id, &s);
  for (const auto& [id, served] : routing.served) {
    auto it = sessions.find(id);
    if (it == sessions.end()) {
      bad.push_back("served rate for unknown session " + id);
      continue;
    }
    out.providers[it->second->owner - 1].revenue += params.price_per_rate * served;
  }
  for (const auto& f : routing.flows) {
    if (!network.link_index(f.from, f.to)) {
      bad.push_back("flow on unknown link (" + std::to_string(f.from) + "," + std::to_string(f.to) + ")");
      continue;
    }
    if (!sessions.contains(f.session)) {
      bad.push_back("flow of unknown session " + f.session);
      continue;
    }
    out.providers[network.node(f.from).owner - 1].routing_cost += params.cost_per_rate * f.rate_kbps;
  }
  if (!bad.empty()) throw ValidationError("routing does not match network", std::move(bad));
  for (auto& p : out.providers) p.net = p.revenue - p.routing_cost;
  return out;
}

std::vector<SuperadditivityViolation> check_superadditive(const CharacteristicFunction& cf, double tol) {
  cf.require_complete();
  std::vector<SuperadditivityViolation> out;
  const Coalition::Mask full = cf.grand().mask();
  for (Coalition::Mask s = 1; s <= full; ++s) {
    const Coalition::Mask rest = full & ~s;
    // T ranges over non-empty subsets of the complement with T > S.
    for (Coalition::Mask t = rest; t != 0; t = (t - 1) & rest) {
      if (t < s) continue;
      const Coalition S = Coalition::from_mask(s);
      const Coalition T = Coalition::from_mask(t);
      const double gap = cf(S) + cf(T) - cf(S | T);
      if (gap > tol) out.push_back({S, T, gap});
    }
  }
  return out;
}

std::vector<MonotonicityViolation> check_monotone(const CharacteristicFunction& cf, double tol) {
  cf.require_complete();
  std::vector<MonotonicityViolation> out;
  const Coalition::Mask full = cf.grand().mask();
  for (Coalition::Mask s = 0; s < full; ++s) {
    const Coalition S = Coalition::from_mask(s);
    for (int m = 1; m <= cf.providers(); ++m) {
      if (S.contains(m)) continue;
      const Coalition T = S.with(m);
      const double gap = cf(S) - cf(T);
      if (gap > tol) out.push_back({S, T, gap});
    }
  }
  return out;
}

}  // namespace meshcoop
