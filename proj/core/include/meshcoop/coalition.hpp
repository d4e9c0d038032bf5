#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meshcoop/coalition_mask.hpp"
#include "meshcoop/lp.hpp"
#include "meshcoop/net_model.hpp"

namespace meshcoop {

// elastic: served rate r(l) is a variable in [0, R(l)] of the joint program.
// strict:  r(l) is fixed to min(R(l), F*(l)), F* the isolated max-flow.
enum class DemandMode { elastic, strict };

const char* to_string(DemandMode mode);
DemandMode parse_demand_mode(const std::string& text);

struct Routing {
  struct Flow {
    std::string session;
    NodeId from = 0;
    NodeId to = 0;
    double rate_kbps = 0.0;

    friend bool operator==(const Flow&, const Flow&) = default;
  };
  std::vector<Flow> flows;                 // positive flows only
  std::map<std::string, double> served;    // session id -> r(l)

  friend bool operator==(const Routing&, const Routing&) = default;
};

// Flow conservation, capacity and demand checks at absolute tolerance `tol`.
// Returns one message per violation; empty when the routing is feasible.
std::vector<std::string> check_routing(const Network& network, const Routing& routing, double tol = 1e-6);

// The arc-flow program of one coalition together with the bookkeeping needed
// to map columns back to flows and rows back to owned resources.
struct CoalitionProgram {
  enum class ColumnKind { flow, served };
  struct Column {
    ColumnKind kind = ColumnKind::flow;
    std::size_t session = 0;  // index into subnetwork.sessions()
    std::size_t link = 0;     // index into subnetwork.links(); flow columns only
  };
  enum class RowKind { capacity, demand, source_balance, conservation };
  struct RowTag {
    RowKind kind = RowKind::capacity;
    std::size_t session = 0;  // demand, source_balance, conservation
    std::size_t link = 0;     // capacity
    NodeId node = 0;          // conservation
    ProviderId owner = 0;     // provider whose resource the row prices
  };

  Coalition coalition;
  DemandMode mode = DemandMode::elastic;
  Network subnetwork;
  lp::Problem problem;
  std::vector<Column> columns;
  std::vector<RowTag> ineq_tags;
  std::vector<RowTag> eq_tags;
  std::vector<double> fixed_rate;  // strict mode: r(l) per session, else empty
};

// Maximise P·Σ r(l) − C·Σ f over the subnetwork of `coalition`. Flow columns
// exist for every (session, link) except links entering the source or
// leaving the destination. Rows with no columns are omitted, except the
// per-session source balance. Throws DomainError for an empty coalition.
CoalitionProgram build_coalition_lp(const Network& network, Coalition coalition, DemandMode mode);

// Maps an optimal solution of `program` to a routing.
Routing extract_routing(const CoalitionProgram& program, const lp::Solution& solution);

// Max-flow of one session alone on the coalition subnetwork.
double session_max_rate(const Network& network, Coalition coalition, const std::string& session_id);

struct CoalitionOutcome {
  double value = 0.0;
  Routing routing;
  bool degenerate = false;
};

// v(S) and an optimal routing; v(∅) = 0 with an empty routing.
// Strict mode throws InfeasibleDemandError naming the sessions that cannot
// jointly reach their fixed rates.
CoalitionOutcome coalition_value(const Network& network, Coalition coalition, DemandMode mode,
                                 lp::Solver* solver = nullptr);

class CharacteristicFunction {
 public:
  static constexpr int kMaxProviders = 20;

  // Only v(∅) = 0 is set. Throws SizeError beyond kMaxProviders.
  explicit CharacteristicFunction(int providers, DemandMode mode = DemandMode::elastic);

  // From explicit values keyed by coalition; missing entries stay unset.
  static CharacteristicFunction from_values(int providers, const std::map<Coalition, double>& values);

  int providers() const { return providers_; }
  DemandMode mode() const { return mode_; }
  Coalition grand() const { return Coalition::grand(providers_); }

  void set(Coalition coalition, double value, std::optional<Routing> routing = std::nullopt);
  bool has(Coalition coalition) const;
  // Throws DomainError when the coalition has no value.
  double value(Coalition coalition) const;
  double operator()(Coalition coalition) const { return value(coalition); }
  const Routing* routing(Coalition coalition) const;

  bool complete() const { return missing().empty(); }
  std::vector<Coalition> missing() const;
  // Throws DomainError listing missing coalitions.
  void require_complete() const;

 private:
  int providers_;
  DemandMode mode_;
  std::vector<std::optional<double>> values_;
  std::map<Coalition, Routing> routings_;
};

// All 2^M coalitions. `threads` = 0 picks the hardware concurrency; each
// worker owns its solver. Throws SizeError for M > 20.
CharacteristicFunction characteristic_function(const Network& network, DemandMode mode, unsigned threads = 1);

struct ProviderPayoff {
  ProviderId provider = 0;
  double revenue = 0.0;
  double routing_cost = 0.0;
  double net = 0.0;
};

// Accounting view of a routing: revenue of each provider's served sessions,
// routing cost charged to the owner of each transmitting node.
struct PayoffBreakdown {
  std::vector<ProviderPayoff> providers;  // providers[m-1]
  double total_net() const;
};

PayoffBreakdown payoff_breakdown(const Routing& routing, const Network& network, const Params& params);

struct SuperadditivityViolation {
  Coalition first;
  Coalition second;
  double gap = 0.0;  // v(S) + v(T) − v(S∪T)
};

// Disjoint pairs with v(S∪T) < v(S) + v(T) − tol, each unordered pair once.
std::vector<SuperadditivityViolation> check_superadditive(const CharacteristicFunction& cf, double tol = 1e-6);

struct MonotonicityViolation {
  Coalition subset;
  Coalition superset;
  double gap = 0.0;  // v(S) − v(T)
};

// Pairs S ⊂ T = S ∪ {m} with v(S) > v(T) + tol.
std::vector<MonotonicityViolation> check_monotone(const CharacteristicFunction& cf, double tol = 1e-6);

}  // namespace meshcoop
