#include <algorithm>
#include <cmath>

#include "motdual/lp.hpp"

namespace motdual::lp {

namespace {

double row_violation(Relation rel, double activity, double rhs) {
  switch (rel) {
    case Relation::LessEqual:
      return std::max(0.0, activity - rhs);
    case Relation::GreaterEqual:
      return std::max(0.0, rhs - activity);
    case Relation::Equal:
      return std::abs(activity - rhs);
  }
  return 0.0;
}

// Multipliers of a min-form problem: >= rows carry y >= 0, <= rows y <= 0.
double sign_violation(Relation rel, double y) {
  switch (rel) {
    case Relation::LessEqual:
      return std::max(0.0, y);
    case Relation::GreaterEqual:
      return std::max(0.0, -y);
    case Relation::Equal:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

double ResidualReport::worst() const noexcept {
  return std::max({primal, dual, complementarity, objective_gap});
}

ResidualReport check_certificates(const LinearProgram& lp, const LpSolution& sol) {
  ResidualReport rep;
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  if (sol.status != Status::Optimal || sol.x.size() != vars.size() ||
      sol.duals.size() != rows.size()) {
    rep.primal = rep.dual = rep.complementarity = rep.objective_gap = kInf;
    return rep;
  }
  const double s = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
  const auto& x = sol.x;

  std::vector<double> reduced(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) reduced[j] = s * vars[j].cost;

  double dual_objective = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double y = s * sol.duals[i];
    const double act = lp.activity(i, x);
    rep.primal = std::max(rep.primal, row_violation(row.relation, act, row.rhs));
    rep.dual = std::max(rep.dual, sign_violation(row.relation, y));
    if (row.relation != Relation::Equal) {
      rep.complementarity = std::max(rep.complementarity, std::abs(y * (act - row.rhs)));
    }
    dual_objective += y * row.rhs;
    for (std::size_t j = 0; j < vars.size(); ++j) reduced[j] -= y * row.coefficients[j];
  }

  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    const double r = reduced[j];
    const bool has_lower = std::isfinite(v.lower);
    const bool has_upper = std::isfinite(v.upper);
    if (has_lower) rep.primal = std::max(rep.primal, v.lower - x[j]);
    if (has_upper) rep.primal = std::max(rep.primal, x[j] - v.upper);

    if (r > 0.0) {
      if (has_lower) {
        dual_objective += r * v.lower;
        rep.complementarity = std::max(rep.complementarity, r * std::abs(x[j] - v.lower));
      } else {
        rep.dual = std::max(rep.dual, r);
      }
    } else if (r < 0.0) {
      if (has_upper) {
        dual_objective += r * v.upper;
        rep.complementarity = std::max(rep.complementarity, -r * std::abs(v.upper - x[j]));
      } else {
        rep.dual = std::max(rep.dual, -r);
      }
    }
  }

  const double primal_objective = s * lp.objective(x);
  rep.objective_gap =
      std::abs(primal_objective - dual_objective) / std::max(1.0, std::abs(primal_objective));
  rep.dual_objective = s * dual_objective;
  return rep;
}

FarkasReport check_farkas(const LinearProgram& lp, std::span<const double> y) {
  FarkasReport rep;
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  if (y.size() != rows.size()) {
    rep.violation = kInf;
    return rep;
  }
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    rep.violation = kInf;
    return rep;
  }

  std::vector<double> coef(vars.size(), 0.0);
  double rhs_term = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double yi = y[i] / scale;
    rep.violation = std::max(rep.violation, sign_violation(rows[i].relation, yi));
    rhs_term += yi * rows[i].rhs;
    for (std::size_t j = 0; j < vars.size(); ++j) coef[j] += yi * rows[i].coefficients[j];
  }
  double sup = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const double c = coef[j];
    if (c > 0.0) {
      if (std::isfinite(vars[j].upper)) {
        sup += c * vars[j].upper;
      } else {
        rep.violation = std::max(rep.violation, c);
      }
    } else if (c < 0.0) {
      if (std::isfinite(vars[j].lower)) {
        sup += c * vars[j].lower;
      } else {
        rep.violation = std::max(rep.violation, -c);
      }
    }
  }
  rep.margin = rhs_term - sup;
  return rep;
}

RayReport check_ray(const LinearProgram& lp, std::span<const double> ray) {
  RayReport rep;
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  if (ray.size() != vars.size()) {
    rep.violation = kInf;
    return rep;
  }
  double scale = 0.0;
  for (double v : ray) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) {
    rep.violation = kInf;
    return rep;
  }
  std::vector<double> r(ray.begin(), ray.end());
  for (double& v : r) v /= scale;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    rep.violation = std::max(rep.violation, row_violation(rows[i].relation, lp.activity(i, r), 0.0));
  }
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (std::isfinite(vars[j].lower)) rep.violation = std::max(rep.violation, -r[j]);
    if (std::isfinite(vars[j].upper)) rep.violation = std::max(rep.violation, r[j]);
  }
  const double c = lp.objective(r);
  rep.improvement = lp.sense() == Sense::Maximize ? c : -c;
  return rep;
}

}  // namespace motdual::lp
