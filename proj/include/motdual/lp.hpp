#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace motdual::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<double> coefficients;
  Relation relation = Relation::Equal;
  double rhs = 0.0;
};

using Term = std::pair<std::size_t, double>;

/// Dense LP. Every constraint row has one coefficient per variable; adding a
/// variable after rows exist pads those rows with zeros.
class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Minimize) : sense_(sense) {}

  std::size_t add_variable(std::string name, double lower, double upper, double cost = 0.0);
  std::size_t add_constraint(std::string name, std::span<const Term> terms, Relation relation,
                             double rhs);
  std::size_t add_constraint(std::string name, std::initializer_list<Term> terms,
                             Relation relation, double rhs) {
    return add_constraint(std::move(name), std::span<const Term>(terms.begin(), terms.size()),
                          relation, rhs);
  }
  std::size_t add_dense_constraint(std::string name, std::vector<double> coefficients,
                                   Relation relation, double rhs);
  void set_cost(std::size_t j, double cost) { variables_.at(j).cost = cost; }
  void set_sense(Sense sense) noexcept { sense_ = sense; }

  [[nodiscard]] Sense sense() const noexcept { return sense_; }
  [[nodiscard]] const std::vector<Variable>& variables() const noexcept { return variables_; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return rows_; }
  [[nodiscard]] std::size_t num_variables() const noexcept { return variables_.size(); }
  [[nodiscard]] std::size_t num_constraints() const noexcept { return rows_.size(); }
  [[nodiscard]] double objective(std::span<const double> x) const;
  [[nodiscard]] double activity(std::size_t row, std::span<const double> x) const;

  /// Throws motdual::InvariantViolation on NaN data, lower > upper, or ragged rows.
  void validate() const;

 private:
  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<Constraint> rows_;
};

enum class Status { Optimal, Infeasible, Unbounded };
enum class PivotRule { Dantzig, Bland };

const char* to_string(Status status) noexcept;

struct SolverOptions {
  PivotRule pivot_rule = PivotRule::Dantzig;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  std::size_t max_iterations = 200000;
  std::size_t refactor_interval = 64;
  /// Consecutive degenerate pivots before Dantzig pricing falls back to Bland's rule.
  std::size_t degenerate_limit = 50;
};

/// duals[i] is the sensitivity d(value)/d(rhs_i) of row i, in the LP's own sense.
/// ray (Unbounded) is an improving primal direction; farkas (Infeasible) is a row
/// multiplier vector proving infeasibility. Both are scaled to unit max-norm.
struct LpSolution {
  Status status = Status::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> ray;
  std::vector<double> farkas;
  std::size_t iterations = 0;
  bool switched_to_bland = false;

  [[nodiscard]] bool optimal() const noexcept { return status == Status::Optimal; }
};

/// Singular basis, iteration limit or similar breakdown. Never folded into a status.
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-phase dense revised simplex. Deterministic for identical input.
LpSolution solve(const LinearProgram& lp, const SolverOptions& options = {});

struct ResidualReport {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
  double objective_gap = 0.0;
  double dual_objective = 0.0;

  [[nodiscard]] double worst() const noexcept;
  [[nodiscard]] bool within(double tol) const noexcept { return worst() <= tol; }
};

/// Recomputes feasibility, dual feasibility, complementary slackness and the
/// primal/dual objective gap (relative to max(1,|value|)) from scratch.
ResidualReport check_certificates(const LinearProgram& lp, const LpSolution& solution);

struct FarkasReport {
  /// Sign errors plus coefficient mass on unbounded variable directions.
  double violation = 0.0;
  /// rhs'y - sup_{x in bounds} (A'y)'x; positive proves infeasibility.
  double margin = 0.0;

  [[nodiscard]] bool proves_infeasible(double tol = 1e-8) const noexcept {
    return violation <= tol && margin > tol;
  }
};

FarkasReport check_farkas(const LinearProgram& lp, std::span<const double> multipliers);

struct RayReport {
  /// Largest violation of the recession-cone conditions.
  double violation = 0.0;
  /// Objective improvement along the ray (positive means improving).
  double improvement = 0.0;

  [[nodiscard]] bool proves_unbounded(double tol = 1e-8) const noexcept {
    return violation <= tol && improvement > tol;
  }
};

RayReport check_ray(const LinearProgram& lp, std::span<const double> ray);

/// Fixed-width MPS dump for cross-checking with external solvers.
void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name = "MOTDUAL");

}  // namespace motdual::lp
