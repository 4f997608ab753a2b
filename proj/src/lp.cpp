#include <cmath>

#include "motdual/core.hpp"
#include "motdual/lp.hpp"

namespace motdual::lp {

std::size_t LinearProgram::add_variable(std::string name, double lower, double upper,
                                        double cost) {
  variables_.push_back(Variable{std::move(name), lower, upper, cost});
  for (auto& row : rows_) row.coefficients.push_back(0.0);
  return variables_.size() - 1;
}

std::size_t LinearProgram::add_constraint(std::string name, std::span<const Term> terms,
                                          Relation relation, double rhs) {
  std::vector<double> coefficients(variables_.size(), 0.0);
  for (const auto& [j, a] : terms) {
    if (j >= variables_.size()) {
      throw std::out_of_range("constraint '" + name + "' references unknown variable " +
                              std::to_string(j));
    }
    coefficients[j] += a;
  }
  rows_.push_back(Constraint{std::move(name), std::move(coefficients), relation, rhs});
  return rows_.size() - 1;
}

std::size_t LinearProgram::add_dense_constraint(std::string name, std::vector<double> coefficients,
                                                Relation relation, double rhs) {
  if (coefficients.size() != variables_.size()) {
    throw ShapeMismatch("row '" + name + "' has " + std::to_string(coefficients.size()) +
                        " coefficients for " + std::to_string(variables_.size()) + " variables");
  }
  rows_.push_back(Constraint{std::move(name), std::move(coefficients), relation, rhs});
  return rows_.size() - 1;
}

double LinearProgram::objective(std::span<const double> x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) v += variables_[j].cost * x[j];
  return v;
}

double LinearProgram::activity(std::size_t row, std::span<const double> x) const {
  const auto& a = rows_.at(row).coefficients;
  double v = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) v += a[j] * x[j];
  return v;
}

void LinearProgram::validate() const {
  for (const auto& v : variables_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || !std::isfinite(v.cost)) {
      throw InvariantViolation("LinearProgram.finite", "variable '" + v.name + "' has NaN data");
    }
    if (v.lower > v.upper || v.lower == kInf || v.upper == -kInf) {
      throw InvariantViolation("LinearProgram.bounds", "variable '" + v.name + "' has empty bounds");
    }
  }
  for (const auto& r : rows_) {
    if (r.coefficients.size() != variables_.size()) {
      throw InvariantViolation("LinearProgram.row_width", "row '" + r.name + "' is ragged");
    }
    if (!std::isfinite(r.rhs)) {
      throw InvariantViolation("LinearProgram.finite", "row '" + r.name + "' has non-finite rhs");
    }
    for (double a : r.coefficients) {
      if (!std::isfinite(a)) {
        throw InvariantViolation("LinearProgram.finite",
                                 "row '" + r.name + "' has a non-finite coefficient");
      }
    }
  }
}

const char* to_string(Status status) noexcept {
  switch (status) {
    case Status::Optimal:
      return "Optimal";
    case Status::Infeasible:
      return "Infeasible";
    case Status::Unbounded:
      return "Unbounded";
  }
  return "Unknown";
}

}  // namespace motdual::lp
