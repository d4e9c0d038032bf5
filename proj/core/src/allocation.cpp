#include "meshcoop/allocation.hpp"

#include <cmath>
#include <cstdint>

#include "meshcoop/error.hpp"

namespace meshcoop {

const char* to_string(AllocationMethod method) {
  return method == AllocationMethod::dual_payoff ? "dual_payoff" : "shapley";
}

double Allocation::total() const {
  double t = 0.0;
  for (double v : payoffs) t += v;
  return t;
}

double Allocation::total(Coalition coalition) const {
  double t = 0.0;
  for (ProviderId m : coalition.members()) t += (*this)[m];
  return t;
}

namespace {

double tolerance(double tol, double magnitude) { return tol * std::max(1.0, std::abs(magnitude)); }

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

}  // namespace

double marginal_contribution(const CharacteristicFunction& cf, ProviderId m, Coalition coalition) {
  if (m < 1 || m > cf.providers()) throw DomainError("provider " + std::to_string(m) + " outside player set");
  if (coalition.contains(m)) {
    throw DomainError("marginal contribution of " + std::to_string(m) + " to " + coalition.to_string() +
                      ": player already a member");
  }
  return cf(coalition.with(m)) - cf(coalition);
}

Allocation shapley(const CharacteristicFunction& cf, Coalition players) {
  if (!players.subset_of(cf.grand())) throw DomainError("shapley: players outside the game");
  Allocation out;
  out.method = AllocationMethod::shapley;
  out.payoffs.assign(static_cast<std::size_t>(cf.providers()), 0.0);
  const int n = players.size();
  std::vector<std::string> missing;
  for (Coalition::Mask s = players.mask();; s = (s - 1) & players.mask()) {
    if (!cf.has(Coalition::from_mask(s))) missing.push_back(Coalition::from_mask(s).to_string());
    if (s == 0) break;
  }
  if (!missing.empty()) {
    std::string what = "shapley: characteristic function incomplete; missing:";
    for (const auto& m : missing) what += " " + m;
    throw DomainError(what);
  }
  // weight[k] = k!(n-k-1)!/n! as an exact integer ratio, divided once.
  const std::uint64_t denom = factorial(n);
  std::vector<double> weight(static_cast<std::size_t>(std::max(n, 1)));
  for (int k = 0; k < n; ++k) {
    weight[static_cast<std::size_t>(k)] =
        static_cast<double>(factorial(k) * factorial(n - k - 1)) / static_cast<double>(denom);
  }
  for (ProviderId m : players.members()) {
    const Coalition::Mask others = players.without(m).mask();
    long double acc = 0.0L;
    for (Coalition::Mask s = others;; s = (s - 1) & others) {
      const Coalition S = Coalition::from_mask(s);
      acc += static_cast<long double>(weight[static_cast<std::size_t>(S.size())]) *
             static_cast<long double>(cf(S.with(m)) - cf(S));
      if (s == 0) break;
    }
    out.payoffs[static_cast<std::size_t>(m - 1)] = static_cast<double>(acc);
  }
  return out;
}

Allocation shapley(const CharacteristicFunction& cf) {
  cf.require_complete();
  return shapley(cf, cf.grand());
}

Allocation dual_payoff(const Network& network, Coalition coalition, DemandMode mode) {
  Allocation out;
  out.method = AllocationMethod::dual_payoff;
  out.payoffs.assign(static_cast<std::size_t>(network.providers()), 0.0);
  if (coalition.empty()) return out;
  const CoalitionProgram prog = build_coalition_lp(network, coalition, mode);
  const lp::Solution sol = lp::solve(prog.problem);
  if (sol.status != lp::Status::optimal) {
    throw NumericFailure(std::string("dual payoff: coalition program is ") + lp::to_string(sol.status));
  }
  for (std::size_t i = 0; i < prog.ineq_tags.size(); ++i) {
    out.payoffs[static_cast<std::size_t>(prog.ineq_tags[i].owner - 1)] += sol.dual_ineq[i] * prog.problem.ineq_rows[i].rhs;
  }
  for (std::size_t i = 0; i < prog.eq_tags.size(); ++i) {
    out.payoffs[static_cast<std::size_t>(prog.eq_tags[i].owner - 1)] += sol.dual_eq[i] * prog.problem.eq_rows[i].rhs;
  }
  out.degenerate = sol.degenerate;
  return out;
}

Allocation dual_payoff(const Network& network, const CharacteristicFunction& cf) {
  if (cf.providers() != network.providers()) {
    throw DomainError("dual payoff: characteristic function and network disagree on provider count");
  }
  return dual_payoff(network, cf.grand(), cf.mode());
}

bool is_imputation(const CharacteristicFunction& cf, const Allocation& x, double tol) {
  if (x.payoffs.size() != static_cast<std::size_t>(cf.providers())) return false;
  const double vm = cf(cf.grand());
  if (std::abs(x.total() - vm) > tolerance(tol, vm)) return false;
  for (ProviderId m = 1; m <= cf.providers(); ++m) {
    const double vs = cf(Coalition::singleton(m));
    if (x[m] < vs - tolerance(tol, vs)) return false;
  }
  return true;
}

CoreReport in_core(const CharacteristicFunction& cf, const Allocation& x, double tol) {
  cf.require_complete();
  if (x.payoffs.size() != static_cast<std::size_t>(cf.providers())) {
    throw DomainError("in_core: allocation has " + std::to_string(x.payoffs.size()) + " entries for " +
                      std::to_string(cf.providers()) + " providers");
  }
  CoreReport report;
  report.efficiency_gap = std::abs(x.total() - cf(cf.grand()));
  report.is_imputation = is_imputation(cf, x, tol);
  const Coalition::Mask full = cf.grand().mask();
  for (Coalition::Mask s = 1; s <= full; ++s) {
    const Coalition S = Coalition::from_mask(s);
    const double deficit = cf(S) - x.total(S);
    if (deficit > tolerance(tol, cf(S))) report.violated_coalitions.push_back({S, deficit});
  }
  report.in_core = report.is_imputation && report.violated_coalitions.empty();
  return report;
}

}  // namespace meshcoop
