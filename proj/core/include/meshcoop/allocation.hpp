#pragma once

#include <string>
#include <vector>

#include "meshcoop/coalition.hpp"

namespace meshcoop {

enum class AllocationMethod { dual_payoff, shapley };

const char* to_string(AllocationMethod method);

struct Allocation {
  AllocationMethod method = AllocationMethod::shapley;
  std::vector<double> payoffs;  // payoffs[m-1]
  // Dual payoff only: the optimal basis was degenerate, so other optimal
  // dual prices (and a different allocation) may exist.
  bool degenerate = false;

  double operator[](ProviderId m) const { return payoffs.at(static_cast<std::size_t>(m - 1)); }
  double total() const;
  double total(Coalition coalition) const;
};

// v(S ∪ {m}) − v(S). Throws DomainError when m ∈ S.
double marginal_contribution(const CharacteristicFunction& cf, ProviderId m, Coalition coalition);

// φ_m = Σ_{S ⊆ M∖{m}} |S|!(M−|S|−1)!/M! · (v(S∪{m}) − v(S)).
// Throws DomainError naming missing coalitions when cf is incomplete.
Allocation shapley(const CharacteristicFunction& cf);

// Shapley value of the sub-game on `players` (cf restricted to subsets of
// it); entries of non-members are 0.
Allocation shapley(const CharacteristicFunction& cf, Coalition players);

// Prices every provider's resources at the grand-coalition duals:
// μ_m = Σ_{capacity rows of links transmitted by m's nodes} π·c
//     + Σ_{rows of m's sessions} δ·rhs.
// Uses cf.mode() for the demand model.
Allocation dual_payoff(const Network& network, const CharacteristicFunction& cf);

// Same pricing with one coalition's own program; entries of non-members are 0.
Allocation dual_payoff(const Network& network, Coalition coalition, DemandMode mode);

// Σx = v(M) and x_m >= v({m}), both within tol.
bool is_imputation(const CharacteristicFunction& cf, const Allocation& x, double tol = 1e-6);

struct CoreViolation {
  Coalition coalition;
  double deficit = 0.0;  // v(S) − x(S)
};

struct CoreReport {
  bool is_imputation = false;
  double efficiency_gap = 0.0;  // |Σx − v(M)|
  std::vector<CoreViolation> violated_coalitions;
  bool in_core = false;
};

// Checks x(S) >= v(S) − tol for every coalition.
CoreReport in_core(const CharacteristicFunction& cf, const Allocation& x, double tol = 1e-6);

}  // namespace meshcoop
