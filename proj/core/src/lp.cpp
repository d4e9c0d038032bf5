#include "meshcoop/lp.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "meshcoop/error.hpp"

namespace meshcoop::lp {

std::size_t Problem::add_var(double cost, std::string label) {
  objective.push_back(cost);
  if (!label.empty() || !var_labels.empty()) {
    var_labels.resize(objective.size() - 1);
    var_labels.push_back(std::move(label));
  }
  return objective.size() - 1;
}

void Problem::validate() const {
  std::vector<std::string> bad;
  const std::size_t n = num_vars();
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) bad.push_back("objective[" + std::to_string(j) + "] is not finite");
  }
  if (!var_labels.empty() && var_labels.size() != n) bad.push_back("var_labels size does not match variable count");
  auto check_rows = [&](const std::vector<Row>& rows, const char* kind) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string tag = std::string(kind) + "[" + std::to_string(i) + "]";
      if (!std::isfinite(rows[i].rhs)) bad.push_back(tag + ": rhs is not finite");
      for (const Term& t : rows[i].terms) {
        if (t.var >= n) bad.push_back(tag + ": variable index " + std::to_string(t.var) + " out of range");
        if (!std::isfinite(t.coeff)) bad.push_back(tag + ": coefficient is not finite");
      }
    }
  };
  check_rows(ineq_rows, "ineq_rows");
  check_rows(eq_rows, "eq_rows");
  if (!bad.empty()) throw ValidationError("invalid linear program", std::move(bad));
}

const char* to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

enum class ColKind : unsigned char { structural, slack, artificial };

double scale_of(double v) { return std::max(1.0, std::abs(v)); }

// Column-compressed standard form: rows are sign-normalized so that b >= 0,
// every inequality row owns a slack and rows without a feasible slack start
// on an artificial.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t structural = 0;
  std::vector<std::size_t> col_start;
  std::vector<std::size_t> row_index;
  std::vector<double> value;
  std::vector<ColKind> kind;
  std::vector<double> b;
  std::vector<double> sign;
  std::vector<std::size_t> start_basis;

  std::size_t cols() const { return kind.size(); }

  template <class F>
  void for_column(std::size_t j, F&& f) const {
    for (std::size_t k = col_start[j]; k < col_start[j + 1]; ++k) f(row_index[k], value[k]);
  }

  double dot_column(std::size_t j, const Eigen::VectorXd& v) const {
    double s = 0.0;
    for (std::size_t k = col_start[j]; k < col_start[j + 1]; ++k) s += v[static_cast<Eigen::Index>(row_index[k])] * value[k];
    return s;
  }
};

StandardForm standardize(const Problem& p) {
  StandardForm sf;
  const std::size_t mi = p.ineq_rows.size();
  sf.rows = mi + p.eq_rows.size();
  sf.structural = p.num_vars();
  sf.b.resize(sf.rows);
  sf.sign.resize(sf.rows);

  std::vector<std::vector<std::pair<std::size_t, double>>> columns(sf.structural);
  auto add_row = [&](std::size_t r, const Row& row) {
    const double s = row.rhs < 0 ? -1.0 : 1.0;
    sf.sign[r] = s;
    sf.b[r] = s * row.rhs;
    std::map<std::size_t, double> merged;
    for (const Term& t : row.terms) merged[t.var] += t.coeff;
    for (auto [j, a] : merged) {
      if (a != 0.0) columns[j].emplace_back(r, s * a);
    }
  };
  for (std::size_t i = 0; i < mi; ++i) add_row(i, p.ineq_rows[i]);
  for (std::size_t i = 0; i < p.eq_rows.size(); ++i) add_row(mi + i, p.eq_rows[i]);

  sf.col_start.push_back(0);
  auto push_col = [&](ColKind kind) {
    sf.kind.push_back(kind);
    sf.col_start.push_back(sf.row_index.size());
  };
  for (auto& col : columns) {
    for (auto [r, a] : col) {
      sf.row_index.push_back(r);
      sf.value.push_back(a);
    }
    push_col(ColKind::structural);
  }
  sf.start_basis.assign(sf.rows, 0);
  for (std::size_t i = 0; i < mi; ++i) {
    sf.row_index.push_back(i);
    sf.value.push_back(sf.sign[i]);
    push_col(ColKind::slack);
    if (sf.sign[i] > 0) sf.start_basis[i] = sf.cols() - 1;
  }
  for (std::size_t i = 0; i < sf.rows; ++i) {
    if (i < mi && sf.sign[i] > 0) continue;
    sf.row_index.push_back(i);
    sf.value.push_back(1.0);
    push_col(ColKind::artificial);
    sf.start_basis[i] = sf.cols() - 1;
  }
  return sf;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const Options& opt) : sf_(sf), opt_(opt) {
    m_ = static_cast<Eigen::Index>(sf.rows);
    basis_ = sf.start_basis;
    position_.assign(sf.cols(), kNonbasic);
    for (std::size_t r = 0; r < basis_.size(); ++r) position_[basis_[r]] = r;
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    x_ = Eigen::Map<const Eigen::VectorXd>(sf.b.data(), m_);
    y_ = Eigen::VectorXd::Zero(m_);
    max_iter_ = opt.max_iterations ? opt.max_iterations : 50 * (sf.rows + sf.cols()) + 10000;
  }

  enum class Outcome { optimal, unbounded };

  // Maximizes cost·x from the current basis. Artificial columns never enter.
  Outcome run(const std::vector<double>& cost, int phase) {
    cost_ = &cost;
    refactor();
    bool fresh = true;
    std::size_t streak = 0;
    const bool always_bland = opt_.pricing == Pricing::bland;
    bool bland = always_bland;
    for (;;) {
      if (iterations_ >= max_iter_) {
        throw NumericFailure("simplex: iteration limit reached (" + std::to_string(max_iter_) + ")");
      }
      if (since_refactor_ >= opt_.refactor_interval) {
        refactor();
        fresh = true;
      }
      double dq = 0.0;
      const std::size_t q = price(bland, dq);
      if (q == kNone) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return Outcome::optimal;
      }
      const Eigen::VectorXd alpha = ftran(q);
      const std::size_t r = ratio(alpha, bland);
      if (r == kNone) {
        if (!fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return Outcome::unbounded;
      }
      const double theta = std::max(0.0, x_[idx(r)]) / alpha[idx(r)];
      if (opt_.trace) {
        *opt_.trace << "phase " << phase << " iter " << iterations_ << " enter " << q << " leave "
                    << basis_[r] << " row " << r << " theta " << theta << " d " << dq
                    << (bland ? " bland" : "") << '\n';
      }
      pivot(q, r, alpha, dq);
      fresh = false;
      if (theta <= 1e-12) {
        if (++streak >= opt_.degenerate_streak_limit) bland = true;
      } else {
        streak = 0;
        bland = always_bland;
      }
    }
  }

  // After phase one: swap basic artificials (at zero) for structural or
  // slack columns wherever the row admits a nonzero pivot. Rows that admit
  // none are linearly dependent and keep their artificial.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (sf_.kind[basis_[r]] != ColKind::artificial) continue;
      const Eigen::VectorXd rho = binv_.row(idx(r)).transpose();
      std::size_t best = kNone;
      double best_abs = opt_.pivot_tol;
      for (std::size_t j = 0; j < sf_.cols(); ++j) {
        if (position_[j] != kNonbasic || sf_.kind[j] == ColKind::artificial) continue;
        const double a = std::abs(sf_.dot_column(j, rho));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best == kNone) continue;
      const Eigen::VectorXd alpha = ftran(best);
      pivot(best, r, alpha, 0.0);
    }
  }

  double basic_sum(ColKind kind) const {
    double s = 0.0;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      if (sf_.kind[basis_[r]] == kind) s += x_[idx(r)];
    }
    return s;
  }

  void finalize(const std::vector<double>& cost) {
    cost_ = &cost;
    refactor();
  }

  const Eigen::VectorXd& duals() const { return y_; }
  double column_value(std::size_t j) const {
    return position_[j] == kNonbasic ? 0.0 : x_[idx(position_[j])];
  }
  bool degenerate() const {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (std::abs(x_[r]) <= opt_.feasibility_tol) return true;
    }
    return false;
  }
  std::size_t iterations() const { return iterations_; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kNonbasic = std::numeric_limits<std::size_t>::max();

  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return;
    std::vector<Eigen::Triplet<double>> trips;
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      sf_.for_column(basis_[r], [&](std::size_t i, double a) { trips.emplace_back(idx(i), idx(r), a); });
    }
    Eigen::SparseMatrix<double> basis_matrix(m_, m_);
    basis_matrix.setFromTriplets(trips.begin(), trips.end());
    basis_matrix.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(basis_matrix);
    lu.factorize(basis_matrix);
    if (lu.info() != Eigen::Success) throw NumericFailure("simplex: singular basis during refactorization");
    binv_ = lu.solve(Eigen::MatrixXd::Identity(m_, m_));
    if (lu.info() != Eigen::Success) throw NumericFailure("simplex: basis solve failed");
    for (std::size_t r = 0; r < basis_.size(); ++r) {
      const Eigen::VectorXd col = ftran(basis_[r]);
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double expect = i == idx(r) ? 1.0 : 0.0;
        if (std::abs(col[i] - expect) > 1e-7) throw NumericFailure("simplex: ill-conditioned basis");
      }
    }
    x_ = binv_ * Eigen::Map<const Eigen::VectorXd>(sf_.b.data(), m_);
    Eigen::VectorXd cb(m_);
    for (std::size_t r = 0; r < basis_.size(); ++r) cb[idx(r)] = (*cost_)[basis_[r]];
    y_ = binv_.transpose() * cb;
  }

  // Largest positive reduced cost (lowest index on ties), or the lowest
  // index with a positive reduced cost under Bland's rule.
  std::size_t price(bool bland, double& dq) const {
    std::size_t best = kNone;
    double best_d = opt_.optimality_tol;
    for (std::size_t j = 0; j < sf_.cols(); ++j) {
      if (position_[j] != kNonbasic || sf_.kind[j] == ColKind::artificial) continue;
      const double d = (*cost_)[j] - sf_.dot_column(j, y_);
      if (d > best_d) {
        best = j;
        best_d = d;
        if (bland) break;
      }
    }
    dq = best == kNone ? 0.0 : best_d;
    return best;
  }

  Eigen::VectorXd ftran(std::size_t j) const {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_);
    sf_.for_column(j, [&](std::size_t i, double a) { alpha += a * binv_.col(idx(i)); });
    return alpha;
  }

  std::size_t ratio(const Eigen::VectorXd& alpha, bool bland) const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (alpha[i] > opt_.pivot_tol) best = std::min(best, std::max(0.0, x_[i]) / alpha[i]);
    }
    if (!std::isfinite(best)) return kNone;
    const double tie = best + 1e-12 * (1.0 + best);
    std::size_t chosen = kNone;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (alpha[i] <= opt_.pivot_tol || std::max(0.0, x_[i]) / alpha[i] > tie) continue;
      const auto r = static_cast<std::size_t>(i);
      if (chosen == kNone) {
        chosen = r;
        continue;
      }
      const bool better = bland ? basis_[r] < basis_[chosen]
                                : (alpha[i] > alpha[idx(chosen)] ||
                                   (alpha[i] == alpha[idx(chosen)] && basis_[r] < basis_[chosen]));
      if (better) chosen = r;
    }
    return chosen;
  }

  void pivot(std::size_t q, std::size_t r, const Eigen::VectorXd& alpha, double dq) {
    const Eigen::Index ri = idx(r);
    const double ar = alpha[ri];
    const double theta = x_[ri] / ar;
    x_ -= theta * alpha;
    x_[ri] = theta;

    const Eigen::RowVectorXd rho = binv_.row(ri);
    y_ += (dq / ar) * rho.transpose();

    std::vector<Eigen::Index> nz;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i != ri && alpha[i] != 0.0) nz.push_back(i);
    }
    for (Eigen::Index k = 0; k < m_; ++k) {
      const double rk = rho[k];
      if (rk == 0.0) continue;
      const double pv = rk / ar;
      double* col = binv_.col(k).data();
      for (Eigen::Index i : nz) col[i] -= alpha[i] * pv;
      col[ri] = pv;
    }

    position_[basis_[r]] = kNonbasic;
    basis_[r] = q;
    position_[q] = r;
    ++iterations_;
    ++since_refactor_;
  }

  const StandardForm& sf_;
  const Options& opt_;
  const std::vector<double>* cost_ = nullptr;
  Eigen::Index m_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd x_;
  Eigen::VectorXd y_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::size_t max_iter_ = 0;
};

}  // namespace

Certificate certify(const Problem& p, const Solution& s) {
  Certificate cert;
  if (s.status != Status::optimal) return cert;
  const double sgn = p.sense == Sense::maximize ? 1.0 : -1.0;
  const std::size_t n = p.num_vars();
  const double vscale = scale_of(s.value);
  std::vector<double> reduced(p.objective);
  double dual_obj = 0.0;

  auto row_pass = [&](const std::vector<Row>& rows, const std::vector<double>& duals, bool equality) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Row& row = rows[i];
      double act = 0.0;
      for (const Term& t : row.terms) {
        act += t.coeff * s.primal[t.var];
        reduced[t.var] -= duals[i] * t.coeff;
      }
      const double viol = equality ? std::abs(act - row.rhs) : std::max(0.0, act - row.rhs);
      cert.primal_residual = std::max(cert.primal_residual, viol / scale_of(row.rhs));
      if (!equality) {
        cert.dual_residual = std::max(cert.dual_residual, std::max(0.0, -sgn * duals[i]));
        cert.complementarity =
            std::max(cert.complementarity, std::abs(duals[i] * (row.rhs - act)) / vscale);
      }
      dual_obj += duals[i] * row.rhs;
    }
  };
  row_pass(p.ineq_rows, s.dual_ineq, false);
  row_pass(p.eq_rows, s.dual_eq, true);
  for (std::size_t j = 0; j < n; ++j) {
    cert.primal_residual = std::max(cert.primal_residual, std::max(0.0, -s.primal[j]));
    cert.dual_residual = std::max(cert.dual_residual, std::max(0.0, sgn * reduced[j]) / scale_of(p.objective[j]));
    cert.complementarity = std::max(cert.complementarity, std::abs(s.primal[j] * reduced[j]) / vscale);
  }
  cert.duality_gap = std::abs(s.value - dual_obj) / vscale;
  return cert;
}

Solution Solver::solve(const Problem& problem) {
  problem.validate();
  const StandardForm sf = standardize(problem);
  const double sgn = problem.sense == Sense::maximize ? 1.0 : -1.0;

  std::vector<double> phase1(sf.cols(), 0.0);
  std::vector<double> phase2(sf.cols(), 0.0);
  bool any_artificial = false;
  for (std::size_t j = 0; j < sf.cols(); ++j) {
    if (sf.kind[j] == ColKind::artificial) {
      phase1[j] = -1.0;
      any_artificial = true;
    } else if (sf.kind[j] == ColKind::structural) {
      phase2[j] = sgn * problem.objective[j];
    }
  }

  Simplex simplex(sf, options_);
  Solution sol;
  if (any_artificial) {
    double bscale = 1.0;
    for (double v : sf.b) bscale = std::max(bscale, v);
    if (simplex.basic_sum(ColKind::artificial) > 0.0) simplex.run(phase1, 1);
    if (simplex.basic_sum(ColKind::artificial) > options_.feasibility_tol * bscale) {
      sol.status = Status::infeasible;
      sol.iterations = simplex.iterations();
      return sol;
    }
    simplex.drive_out_artificials();
  }
  if (simplex.run(phase2, 2) == Simplex::Outcome::unbounded) {
    sol.status = Status::unbounded;
    sol.iterations = simplex.iterations();
    return sol;
  }
  simplex.finalize(phase2);

  sol.status = Status::optimal;
  sol.iterations = simplex.iterations();
  sol.degenerate = simplex.degenerate();
  sol.primal.resize(sf.structural);
  for (std::size_t j = 0; j < sf.structural; ++j) {
    const double v = simplex.column_value(j);
    sol.primal[j] = (v < 0.0 && v > -options_.feasibility_tol) ? 0.0 : v;
  }
  const auto& y = simplex.duals();
  const std::size_t mi = problem.ineq_rows.size();
  sol.dual_ineq.resize(mi);
  sol.dual_eq.resize(problem.eq_rows.size());
  for (std::size_t i = 0; i < sf.rows; ++i) {
    const double d = sgn * sf.sign[i] * y[static_cast<Eigen::Index>(i)];
    if (i < mi) {
      sol.dual_ineq[i] = d;
    } else {
      sol.dual_eq[i - mi] = d;
    }
  }
  double value = 0.0;
  for (std::size_t j = 0; j < sf.structural; ++j) value += problem.objective[j] * sol.primal[j];
  sol.value = value;

  if (options_.verify) {
    const Certificate cert = certify(problem, sol);
    if (!cert.holds(options_.certificate_tol)) {
      std::ostringstream os;
      os << "simplex: optimality certificate failed (primal " << cert.primal_residual << ", dual "
         << cert.dual_residual << ", complementarity " << cert.complementarity << ", gap "
         << cert.duality_gap << ")";
      throw NumericFailure(os.str());
    }
  }
  return sol;
}

Problem dual_of(const Problem& p) {
  p.validate();
  // Work with max c'x where c' = c (maximize) or -c (minimize).
  const double sgn = p.sense == Sense::maximize ? 1.0 : -1.0;
  const std::size_t mi = p.ineq_rows.size();
  const std::size_t me = p.eq_rows.size();
  const std::size_t n = p.num_vars();

  Problem d;
  d.objective.reserve(mi + 2 * me);
  for (std::size_t i = 0; i < mi; ++i) d.add_var(p.ineq_rows[i].rhs, "y[" + p.ineq_rows[i].label + "]");
  for (std::size_t i = 0; i < me; ++i) d.add_var(p.eq_rows[i].rhs, "z+[" + p.eq_rows[i].label + "]");
  for (std::size_t i = 0; i < me; ++i) d.add_var(-p.eq_rows[i].rhs, "z-[" + p.eq_rows[i].label + "]");

  // One row per primal variable: -(Aᵀy + Eᵀz⁺ - Eᵀz⁻)_j <= -c'_j.
  d.ineq_rows.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    d.ineq_rows[j].rhs = -sgn * p.objective[j];
    d.ineq_rows[j].label = p.var_labels.empty() ? "x" + std::to_string(j) : p.var_labels[j];
  }
  for (std::size_t i = 0; i < mi; ++i) {
    for (const Term& t : p.ineq_rows[i].terms) d.ineq_rows[t.var].terms.push_back({i, -t.coeff});
  }
  for (std::size_t i = 0; i < me; ++i) {
    for (const Term& t : p.eq_rows[i].terms) {
      d.ineq_rows[t.var].terms.push_back({mi + i, -t.coeff});
      d.ineq_rows[t.var].terms.push_back({mi + me + i, t.coeff});
    }
  }
  if (p.sense == Sense::maximize) {
    d.sense = Sense::minimize;
  } else {
    // value(primal) = -min(b·y + ...), i.e. max of the negated objective.
    d.sense = Sense::maximize;
    for (double& c : d.objective) c = -c;
  }
  return d;
}

void dump(std::ostream& os, const Problem& p) {
  auto name = [&](std::size_t j) {
    return p.var_labels.empty() || p.var_labels[j].empty() ? "x" + std::to_string(j) : p.var_labels[j];
  };
  os << (p.sense == Sense::maximize ? "maximize" : "minimize") << '\n';
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    if (p.objective[j] != 0.0) os << "  " << p.objective[j] << " " << name(j) << '\n';
  }
  auto rows = [&](const std::vector<Row>& rs, const char* op) {
    for (const Row& r : rs) {
      os << (r.label.empty() ? "row" : r.label) << ":";
      for (const Term& t : r.terms) os << ' ' << (t.coeff >= 0 ? "+" : "") << t.coeff << ' ' << name(t.var);
      os << ' ' << op << ' ' << r.rhs << '\n';
    }
  };
  os << "subject to\n";
  rows(p.ineq_rows, "<=");
  rows(p.eq_rows, "=");
}

}  // namespace meshcoop::lp
