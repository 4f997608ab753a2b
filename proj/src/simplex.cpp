// Two-phase dense revised simplex.
//
// The LP is rewritten as  min c's  s.t.  A s = b, s >= 0, b >= 0  by shifting
// finite bounds to zero, splitting free variables, turning upper bounds of boxed
// variables into extra rows and adding one slack per inequality. The basis
// inverse is kept explicitly and refactored every `refactor_interval` pivots.
// Long degenerate stalls perturb the right-hand side; the perturbation is removed
// at the end and any resulting infeasibility is repaired with dual simplex pivots.

#include <algorithm>
#include <cmath>
#include <string>

#include "motdual/lp.hpp"

namespace motdual::lp {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);
// Pivots below this magnitude are taken only when no other column can enter.
constexpr double kStablePivot = 1e-7;

struct StandardForm {
  std::size_t rows = 0;
  std::size_t original_rows = 0;
  std::size_t columns = 0;  // structural + slack + artificial
  std::vector<double> a;    // column-major, rows x columns
  std::vector<double> b;
  std::vector<double> cost;  // phase-two cost, min form
  std::vector<double> row_sign;
  std::vector<std::size_t> var_of;  // original variable of a structural column, else kNone
  std::vector<double> var_sign;
  std::vector<char> artificial;
  std::vector<double> shift;  // per original variable
  std::vector<std::size_t> initial_basis;

  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return a[j * rows + i]; }
  [[nodiscard]] const double* column(std::size_t j) const { return a.data() + j * rows; }
};

StandardForm standardize(const LinearProgram& lp) {
  const auto& vars = lp.variables();
  const auto& cons = lp.constraints();
  const double sense = lp.sense() == Sense::Maximize ? -1.0 : 1.0;

  StandardForm sf;
  sf.original_rows = cons.size();
  sf.shift.assign(vars.size(), 0.0);

  struct Structural {
    std::size_t var;
    double sign;
  };
  std::vector<Structural> structural;
  std::vector<std::pair<std::size_t, double>> boxed;  // (structural column, width)
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    const bool has_lower = std::isfinite(v.lower);
    const bool has_upper = std::isfinite(v.upper);
    if (has_lower) {
      sf.shift[j] = v.lower;
      structural.push_back({j, 1.0});
      if (has_upper) boxed.emplace_back(structural.size() - 1, v.upper - v.lower);
    } else if (has_upper) {
      sf.shift[j] = v.upper;
      structural.push_back({j, -1.0});
    } else {
      structural.push_back({j, 1.0});
      structural.push_back({j, -1.0});
    }
  }

  const std::size_t m = cons.size() + boxed.size();
  const std::size_t ns = structural.size();
  sf.rows = m;

  // dense row-major scratch for the structural block, plus per-row relation/rhs
  std::vector<double> block(m * ns, 0.0);
  std::vector<Relation> relation(m);
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& row = cons[i];
    double r = row.rhs;
    for (std::size_t j = 0; j < vars.size(); ++j) r -= row.coefficients[j] * sf.shift[j];
    for (std::size_t c = 0; c < ns; ++c) {
      block[i * ns + c] = structural[c].sign * row.coefficients[structural[c].var];
    }
    relation[i] = row.relation;
    rhs[i] = r;
  }
  for (std::size_t k = 0; k < boxed.size(); ++k) {
    const std::size_t i = cons.size() + k;
    block[i * ns + boxed[k].first] = 1.0;
    relation[i] = Relation::LessEqual;
    rhs[i] = boxed[k].second;
  }

  sf.row_sign.assign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) sf.row_sign[i] = -1.0;
  }

  std::vector<std::size_t> slack_of(m, kNone);
  std::size_t slack_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (relation[i] != Relation::Equal) slack_of[i] = ns + slack_count++;
  }

  // a slack with coefficient +1 after sign normalization can start in the basis
  std::vector<std::size_t> artificial_of(m, kNone);
  std::size_t artificial_count = 0;
  sf.initial_basis.assign(m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    const double slack_coef = relation[i] == Relation::LessEqual      ? 1.0
                              : relation[i] == Relation::GreaterEqual ? -1.0
                                                                      : 0.0;
    if (slack_coef * sf.row_sign[i] > 0.0) {
      sf.initial_basis[i] = slack_of[i];
    } else {
      artificial_of[i] = ns + slack_count + artificial_count++;
      sf.initial_basis[i] = artificial_of[i];
    }
  }

  sf.columns = ns + slack_count + artificial_count;
  sf.a.assign(m * sf.columns, 0.0);
  sf.b.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = sf.row_sign[i];
    for (std::size_t c = 0; c < ns; ++c) sf.a[c * m + i] = s * block[i * ns + c];
    if (slack_of[i] != kNone) {
      const double coef = relation[i] == Relation::LessEqual ? 1.0 : -1.0;
      sf.a[slack_of[i] * m + i] = s * coef;
    }
    if (artificial_of[i] != kNone) sf.a[artificial_of[i] * m + i] = 1.0;
    sf.b[i] = s * rhs[i];
  }

  sf.cost.assign(sf.columns, 0.0);
  sf.var_of.assign(sf.columns, kNone);
  sf.var_sign.assign(sf.columns, 0.0);
  sf.artificial.assign(sf.columns, 0);
  for (std::size_t c = 0; c < ns; ++c) {
    sf.var_of[c] = structural[c].var;
    sf.var_sign[c] = structural[c].sign;
    sf.cost[c] = sense * structural[c].sign * vars[structural[c].var].cost;
  }
  for (std::size_t c = ns + slack_count; c < sf.columns; ++c) sf.artificial[c] = 1;
  return sf;
}

class RevisedSimplex {
 public:
  enum class Outcome { Optimal, Unbounded };

  RevisedSimplex(const StandardForm& sf, const SolverOptions& options)
      : sf_(sf), opt_(options), m_(sf.rows), basis_(sf.initial_basis),
        position_(sf.columns, kNone), rhs_(sf.b) {
    for (std::size_t k = 0; k < m_; ++k) position_[basis_[k]] = k;
    refactor();
  }

  Outcome run(const std::vector<double>& cost, bool phase_two) {
    bland_ = opt_.pivot_rule == PivotRule::Bland;
    std::size_t degenerate = 0;
    std::size_t since_refactor = 0;
    std::vector<double> y(m_);
    std::vector<double> alpha(m_);
    bool allow_small_pivot = false;
    rejected_.clear();

    for (;;) {
      if (since_refactor >= opt_.refactor_interval) {
        refactor();
        since_refactor = 0;
      }
      dual_values(cost, y);
      std::size_t entering = price(cost, y, phase_two);
      if (entering == kNone) {
        if (since_refactor == 0 && rejected_.empty()) return Outcome::Optimal;
        // confirm optimality on a fresh factorization, readmitting rejected columns
        allow_small_pivot = !rejected_.empty();
        rejected_.clear();
        refactor();
        since_refactor = 0;
        dual_values(cost, y);
        entering = price(cost, y, phase_two);
        if (entering == kNone) return Outcome::Optimal;
      }

      column_solve(entering, alpha);
      bool artificial_leaves = false;
      const std::size_t leaving = ratio_test(alpha, phase_two, artificial_leaves);
      (void)artificial_leaves;
      if (leaving == kNone) {
        entering_ = entering;
        alpha_ = alpha;
        return Outcome::Unbounded;
      }
      if (std::abs(alpha[leaving]) < kStablePivot && !allow_small_pivot) {
        rejected_.push_back(entering);
        continue;
      }
      allow_small_pivot = false;
      rejected_.clear();

      // The exact step keeps xb consistent with the basis; Harris bounds any backward move
      // by the feasibility tolerance.
      const double theta = xb_[leaving] / alpha[leaving];
      if (std::abs(theta) <= 1e-12) {
        if (++degenerate > opt_.degenerate_limit) {
          degenerate = 0;
          if (!perturbed_) {
            perturb();
          } else if (!bland_) {
            bland_ = true;
            switched_ = true;
          }
        }
      } else {
        degenerate = 0;
      }
      pivot(leaving, entering, alpha, theta);
      ++since_refactor;
      if (++iterations_ > opt_.max_iterations) {
        throw NumericFailure("simplex iteration limit reached (" +
                             std::to_string(opt_.max_iterations) + ")");
      }
    }
  }

  /// Pivots artificial columns that are basic at level zero out of the basis where a
  /// structural or slack column can replace them; leftovers mark redundant rows.
  void expel_artificials() {
    std::vector<double> row(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      if (!sf_.artificial[basis_[k]]) continue;
      std::size_t best = kNone;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < sf_.columns; ++j) {
        if (sf_.artificial[j] || position_[j] != kNone) continue;
        const double* col = sf_.column(j);
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) v += binv_[k * m_ + i] * col[i];
        if (std::abs(v) > best_abs) {
          best_abs = std::abs(v);
          best = j;
        }
      }
      if (best == kNone) continue;
      std::vector<double> alpha(m_);
      column_solve(best, alpha);
      pivot(k, best, alpha, 0.0);
    }
    refactor();
  }

  void refactor() {
    // Gauss-Jordan with partial pivoting on [B | I]
    std::vector<double> work(m_ * m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const double* col = sf_.column(basis_[k]);
      for (std::size_t i = 0; i < m_; ++i) work[i * m_ + k] = col[i];
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      double best = std::abs(work[c * m_ + c]);
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(work[r * m_ + c]) > best) {
          best = std::abs(work[r * m_ + c]);
          p = r;
        }
      }
      if (best < 1e-12) throw NumericFailure("singular basis during refactorization");
      if (p != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(work[p * m_ + k], work[c * m_ + k]);
          std::swap(binv_[p * m_ + k], binv_[c * m_ + k]);
        }
      }
      const double inv = 1.0 / work[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        work[c * m_ + k] *= inv;
        binv_[c * m_ + k] *= inv;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = work[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          work[r * m_ + k] -= f * work[c * m_ + k];
          binv_[r * m_ + k] -= f * binv_[c * m_ + k];
        }
      }
    }
    // row c of the reduced matrix corresponds to basis position c
    xb_.assign(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[k * m_ + i] * rhs_[i];
      xb_[k] = v;
    }
  }

  /// Drops any right-hand-side perturbation and restores primal feasibility of the current
  /// (dual feasible) basis. Throws NumericFailure if that fails.
  void restore(const std::vector<double>& cost) {
    if (!perturbed_) return;
    perturbed_ = false;
    rhs_ = sf_.b;
    refactor();
    std::vector<double> y(m_);
    std::vector<double> alpha(m_);
    std::size_t since_refactor = 0;
    for (;;) {
      std::size_t r = kNone;
      double worst = -opt_.feasibility_tolerance;
      for (std::size_t k = 0; k < m_; ++k) {
        if (xb_[k] < worst) {
          worst = xb_[k];
          r = k;
        }
      }
      if (r == kNone) return;

      dual_values(cost, y);
      const double* rho = binv_.data() + r * m_;
      std::size_t entering = kNone;
      double best = kInf;
      double best_pivot = 0.0;
      for (std::size_t j = 0; j < sf_.columns; ++j) {
        if (position_[j] != kNone || sf_.artificial[j]) continue;
        const double* col = sf_.column(j);
        double a = 0.0;
        double d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
          a += rho[i] * col[i];
          d -= y[i] * col[i];
        }
        if (a >= -opt_.pivot_tolerance) continue;
        const double ratio = std::max(d, 0.0) / -a;
        if (ratio < best - 1e-12 || (ratio <= best + 1e-12 && -a > best_pivot)) {
          best = ratio;
          best_pivot = -a;
          entering = j;
        }
      }
      if (entering == kNone) {
        throw NumericFailure("perturbation removal left an infeasible basis");
      }
      column_solve(entering, alpha);
      pivot(r, entering, alpha, xb_[r] / alpha[r]);
      if (++since_refactor >= opt_.refactor_interval) {
        refactor();
        since_refactor = 0;
      }
      if (++iterations_ > opt_.max_iterations) {
        throw NumericFailure("simplex iteration limit reached (" +
                             std::to_string(opt_.max_iterations) + ")");
      }
    }
  }

  void dual_values(const std::vector<double>& cost, std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost[basis_[k]];
      if (cb == 0.0) continue;
      const double* row = binv_.data() + k * m_;
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * row[i];
    }
  }

  [[nodiscard]] const std::vector<std::size_t>& basis() const noexcept { return basis_; }
  [[nodiscard]] const std::vector<double>& xb() const noexcept { return xb_; }
  [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
  [[nodiscard]] bool switched() const noexcept { return switched_; }
  [[nodiscard]] std::size_t entering() const noexcept { return entering_; }
  [[nodiscard]] const std::vector<double>& alpha() const noexcept { return alpha_; }

 private:
  /// Lifts every basic structural or slack value by a small, index-dependent amount and
  /// folds the shift into the right-hand side so later refactorizations keep it.
  void perturb() {
    double scale = 1.0;
    for (double v : sf_.b) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < m_; ++k) {
      if (sf_.artificial[basis_[k]]) continue;
      const double delta = 1e-7 * scale * (1.0 + static_cast<double>((k * 7919) % 101) / 101.0);
      xb_[k] += delta;
      const double* col = sf_.column(basis_[k]);
      for (std::size_t i = 0; i < m_; ++i) rhs_[i] += delta * col[i];
    }
    perturbed_ = true;
  }

  std::size_t price(const std::vector<double>& cost, const std::vector<double>& y,
                    bool phase_two) const {
    std::size_t entering = kNone;
    double best = -opt_.optimality_tolerance;
    for (std::size_t j = 0; j < sf_.columns; ++j) {
      if (position_[j] != kNone) continue;
      if (sf_.artificial[j]) continue;
      if (std::find(rejected_.begin(), rejected_.end(), j) != rejected_.end()) continue;
      const double* col = sf_.column(j);
      double d = cost[j];
      for (std::size_t i = 0; i < m_; ++i) d -= y[i] * col[i];
      if (d < best) {
        entering = j;
        if (bland_) return j;
        best = d;
      }
    }
    (void)phase_two;
    return entering;
  }

  void column_solve(std::size_t j, std::vector<double>& alpha) const {
    const double* col = sf_.column(j);
    for (std::size_t k = 0; k < m_; ++k) {
      const double* row = binv_.data() + k * m_;
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += row[i] * col[i];
      alpha[k] = v;
    }
  }

  // Two-pass Harris test: bound the step with rows relaxed by the feasibility tolerance,
  // then take the largest pivot among rows whose exact ratio fits under that bound.
  std::size_t ratio_test(const std::vector<double>& alpha, bool phase_two,
                         bool& artificial_leaves) const {
    artificial_leaves = false;
    auto eligible = [&](std::size_t k) {
      const bool art = phase_two && sf_.artificial[basis_[k]];
      return art ? std::abs(alpha[k]) > opt_.pivot_tolerance : alpha[k] > opt_.pivot_tolerance;
    };
    auto ratio = [&](std::size_t k) {
      if (phase_two && sf_.artificial[basis_[k]]) return 0.0;  // pinned at zero
      return std::max(xb_[k], 0.0) / alpha[k];
    };

    double bound = kInf;
    for (std::size_t k = 0; k < m_; ++k) {
      if (!eligible(k)) continue;
      const double relaxed = (phase_two && sf_.artificial[basis_[k]])
                                 ? 0.0
                                 : (std::max(xb_[k], 0.0) + opt_.feasibility_tolerance) / alpha[k];
      bound = std::min(bound, relaxed);
    }
    if (bound == kInf) return kNone;

    std::size_t leaving = kNone;
    for (std::size_t k = 0; k < m_; ++k) {
      if (!eligible(k) || ratio(k) > bound) continue;
      if (leaving == kNone) {
        leaving = k;
      } else if (bland_) {
        if (ratio(k) < ratio(leaving) - 1e-12 ||
            (ratio(k) <= ratio(leaving) + 1e-12 && basis_[k] < basis_[leaving])) {
          leaving = k;
        }
      } else if (std::abs(alpha[k]) > std::abs(alpha[leaving])) {
        leaving = k;
      }
    }
    if (leaving != kNone) artificial_leaves = phase_two && sf_.artificial[basis_[leaving]];
    return leaving;
  }

  void pivot(std::size_t r, std::size_t entering, const std::vector<double>& alpha, double theta) {
    for (std::size_t k = 0; k < m_; ++k) {
      if (k != r) xb_[k] -= theta * alpha[k];
    }
    xb_[r] = theta;

    double* pivot_row = binv_.data() + r * m_;
    const double inv = 1.0 / alpha[r];
    for (std::size_t i = 0; i < m_; ++i) pivot_row[i] *= inv;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == r || alpha[k] == 0.0) continue;
      double* row = binv_.data() + k * m_;
      const double f = alpha[k];
      for (std::size_t i = 0; i < m_; ++i) row[i] -= f * pivot_row[i];
    }

    position_[basis_[r]] = kNone;
    basis_[r] = entering;
    position_[entering] = r;
  }

  const StandardForm& sf_;
  const SolverOptions& opt_;
  std::size_t m_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> position_;
  std::vector<double> rhs_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  bool perturbed_ = false;
  std::size_t iterations_ = 0;
  bool bland_ = false;
  bool switched_ = false;
  std::size_t entering_ = kNone;
  std::vector<double> alpha_;
  /// Entering candidates skipped since the last pivot because their pivot was too small.
  std::vector<std::size_t> rejected_;
};

void normalize_max(std::vector<double>& v) {
  double scale = 0.0;
  for (double e : v) scale = std::max(scale, std::abs(e));
  if (scale > 0.0) {
    for (double& e : v) e /= scale;
  }
}

LpSolution solve_once(const LinearProgram& lp, const StandardForm& sf,
                      const SolverOptions& options) {
  const std::size_t m = sf.rows;
  const bool maximize = lp.sense() == Sense::Maximize;

  RevisedSimplex simplex(sf, options);
  LpSolution sol;

  const bool needs_phase_one =
      std::any_of(sf.initial_basis.begin(), sf.initial_basis.end(),
                  [&](std::size_t c) { return sf.artificial[c] != 0; });
  if (needs_phase_one) {
    std::vector<double> phase_one_cost(sf.columns, 0.0);
    for (std::size_t c = 0; c < sf.columns; ++c) {
      if (sf.artificial[c]) phase_one_cost[c] = 1.0;
    }
    // artificials never re-enter, so phase one cannot be unbounded (cost bounded below by 0)
    simplex.run(phase_one_cost, false);
    simplex.restore(phase_one_cost);
    simplex.refactor();

    double infeasibility = 0.0;
    double b_scale = 1.0;
    for (double v : sf.b) b_scale = std::max(b_scale, std::abs(v));
    for (std::size_t k = 0; k < m; ++k) {
      if (sf.artificial[simplex.basis()[k]]) infeasibility += std::max(simplex.xb()[k], 0.0);
    }
    if (infeasibility > options.feasibility_tolerance * b_scale) {
      std::vector<double> y(m);
      simplex.dual_values(phase_one_cost, y);
      sol.status = Status::Infeasible;
      sol.value = maximize ? -kInf : kInf;
      sol.farkas.assign(sf.original_rows, 0.0);
      for (std::size_t i = 0; i < sf.original_rows; ++i) sol.farkas[i] = sf.row_sign[i] * y[i];
      normalize_max(sol.farkas);
      sol.iterations = simplex.iterations();
      sol.switched_to_bland = simplex.switched();
      return sol;
    }
    simplex.expel_artificials();
  }

  const auto outcome = simplex.run(sf.cost, true);
  sol.iterations = simplex.iterations();
  sol.switched_to_bland = simplex.switched();
  const std::size_t nvars = lp.num_variables();

  if (outcome == RevisedSimplex::Outcome::Unbounded) {
    std::vector<double> direction(sf.columns, 0.0);
    direction[simplex.entering()] = 1.0;
    for (std::size_t k = 0; k < m; ++k) direction[simplex.basis()[k]] -= simplex.alpha()[k];
    sol.status = Status::Unbounded;
    sol.value = maximize ? kInf : -kInf;
    sol.ray.assign(nvars, 0.0);
    for (std::size_t c = 0; c < sf.columns; ++c) {
      if (sf.var_of[c] != kNone) sol.ray[sf.var_of[c]] += sf.var_sign[c] * direction[c];
    }
    normalize_max(sol.ray);
    return sol;
  }

  simplex.restore(sf.cost);
  simplex.refactor();
  std::vector<double> s(sf.columns, 0.0);
  for (std::size_t k = 0; k < m; ++k) s[simplex.basis()[k]] = simplex.xb()[k];
  sol.x = sf.shift;
  for (std::size_t c = 0; c < sf.columns; ++c) {
    if (sf.var_of[c] != kNone) sol.x[sf.var_of[c]] += sf.var_sign[c] * s[c];
  }
  std::vector<double> y(m);
  simplex.dual_values(sf.cost, y);
  sol.duals.assign(sf.original_rows, 0.0);
  const double sense = maximize ? -1.0 : 1.0;
  for (std::size_t i = 0; i < sf.original_rows; ++i) sol.duals[i] = sense * sf.row_sign[i] * y[i];
  sol.status = Status::Optimal;
  sol.value = lp.objective(sol.x);
  return sol;
}

/// Whether the solution's certificate checks out against the original program.
bool certified(const LinearProgram& lp, const LpSolution& sol, double tol) {
  switch (sol.status) {
    case Status::Optimal:
      return check_certificates(lp, sol).within(tol);
    case Status::Infeasible:
      return check_farkas(lp, sol.farkas).proves_infeasible(1e-9);
    case Status::Unbounded:
      return check_ray(lp, sol.ray).proves_unbounded(1e-9);
  }
  return false;
}

}  // namespace

// Each result is checked against its certificate; on failure the solve is repeated with
// more frequent refactorization and then with Bland's rule throughout.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options) {
  lp.validate();
  const StandardForm sf = standardize(lp);

  std::vector<SolverOptions> attempts{options};
  SolverOptions frequent = options;
  frequent.refactor_interval = std::max<std::size_t>(1, std::min<std::size_t>(16, options.refactor_interval));
  attempts.push_back(frequent);
  SolverOptions careful = frequent;
  careful.pivot_rule = PivotRule::Bland;
  attempts.push_back(careful);

  std::string failure;
  std::size_t spent = 0;
  for (const auto& attempt : attempts) {
    try {
      auto sol = solve_once(lp, sf, attempt);
      sol.iterations += spent;
      if (certified(lp, sol, 1e-8)) return sol;
      spent = sol.iterations;
      failure = std::string("uncertified ") + to_string(sol.status) + " result";
    } catch (const NumericFailure& e) {
      failure = e.what();
      if (failure.find("iteration limit") != std::string::npos) throw;
    }
  }
  throw NumericFailure("simplex failed after retries: " + failure);
}

}  // namespace motdual::lp
