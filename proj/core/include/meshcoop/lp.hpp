#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace meshcoop::lp {

struct Term {
  std::size_t var = 0;
  double coeff = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

// Sparse row `Σ coeff·x[var]` compared against `rhs`.
struct Row {
  std::vector<Term> terms;
  double rhs = 0.0;
  std::string label;

  friend bool operator==(const Row&, const Row&) = default;
};

enum class Sense { maximize, minimize };

// optimize objective·x  s.t.  ineq_rows: a·x <= b,  eq_rows: e·x = d,  x >= 0.
struct Problem {
  Sense sense = Sense::maximize;
  std::vector<double> objective;  // one entry per variable
  std::vector<Row> ineq_rows;
  std::vector<Row> eq_rows;
  std::vector<std::string> var_labels;  // empty or one per variable

  std::size_t num_vars() const { return objective.size(); }
  std::size_t add_var(double cost, std::string label = {});

  // Throws ValidationError on out-of-range indices, non-finite numbers or a
  // label vector of the wrong length.
  void validate() const;
};

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status status);

// Dual multipliers are the sensitivities of the optimal value to each row's
// right-hand side, so value == dual_ineq·b + dual_eq·d at optimum. Under a
// maximize sense inequality duals are >= 0; under minimize they are <= 0.
// At a degenerate vertex the duals need not be unique; `degenerate` flags a
// basis with a basic variable at zero.
struct Solution {
  Status status = Status::infeasible;
  double value = 0.0;
  std::vector<double> primal;
  std::vector<double> dual_ineq;
  std::vector<double> dual_eq;
  std::size_t iterations = 0;
  bool degenerate = false;

  friend bool operator==(const Solution&, const Solution&) = default;
};

// bland:   lowest-index improving column, leaving row by min ratio with
//          ties to the lowest basic index. Cycle-free.
// dantzig: largest reduced cost, falling back to Bland's rule after
//          `degenerate_streak_limit` consecutive degenerate pivots until the
//          next non-degenerate one. Usually fewer pivots.
enum class Pricing { bland, dantzig };

struct Options {
  Pricing pricing = Pricing::bland;
  double feasibility_tol = 1e-9;  // row activity / phase-one residual
  double optimality_tol = 1e-9;   // reduced cost
  double pivot_tol = 1e-9;        // smallest admissible pivot element
  double certificate_tol = 1e-6;  // relative; duality gap and residual checks
  std::size_t refactor_interval = 100;
  std::size_t degenerate_streak_limit = 50;  // dantzig pricing only
  std::size_t max_iterations = 0;  // 0: 50·(rows + columns) + 10000
  bool verify = true;              // check the optimality certificate
  std::ostream* trace = nullptr;   // per-pivot debug dump when set
};

// Primal/dual feasibility, complementary slackness and duality gap of an
// optimal solution, each scaled by max(1, magnitude of the data it compares).
struct Certificate {
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
  double duality_gap = 0.0;

  bool holds(double tol) const {
    return primal_residual <= tol && dual_residual <= tol && complementarity <= tol && duality_gap <= tol;
  }
};

Certificate certify(const Problem& problem, const Solution& solution);

// Two-phase revised simplex with an explicit basis inverse. A solver object
// owns its work arrays; run one solve at a time per instance.
class Solver {
 public:
  explicit Solver(Options options = {}) : options_(options) {}

  // Infeasible and unbounded programs are reported through Solution::status.
  // Throws NumericFailure when the iteration cap is hit or the final
  // certificate fails after refactorization.
  Solution solve(const Problem& problem);

  const Options& options() const { return options_; }

 private:
  Options options_;
};

inline Solution solve(const Problem& problem, const Options& options = {}) {
  return Solver(options).solve(problem);
}

// Textbook dual of `problem`, returned in the same representation and with a
// sense chosen so that its optimal value equals the primal optimal value.
// For maximize: min b·y + d·(z⁺ − z⁻)  s.t.  Aᵀy + Eᵀ(z⁺ − z⁻) >= c,  y, z± >= 0,
// written with its >= rows negated into <= rows. Variables are ordered
// y (one per inequality row), z⁺, z⁻ (one each per equality row).
Problem dual_of(const Problem& problem);

// Human-readable listing of the problem, for troubleshooting.
void dump(std::ostream& os, const Problem& problem);

}  // namespace meshcoop::lp
