#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motdual/core.hpp"

namespace motdual {

/// Discounted call prices C(K) for one maturity.
struct CallQuoteCurve {
  int maturity = 1;
  std::vector<double> strikes;
  std::vector<double> prices;
};

/// Quotes that violate monotonicity, convexity or the slope bound -1 <= C' <= 0.
class StaticArbitrage : public std::invalid_argument {
 public:
  StaticArbitrage(std::string rule, std::vector<double> strikes, const std::string& detail);

  [[nodiscard]] const std::string& rule() const noexcept { return rule_; }
  /// Offending strikes: a triple for convexity, a pair for the slope rules.
  [[nodiscard]] const std::vector<double>& strikes() const noexcept { return strikes_; }

 private:
  std::string rule_;
  std::vector<double> strikes_;
};

/// Throws StaticArbitrage or InvariantViolation; tolerance 1e-9 on the shape rules.
void validate_call_curve(const CallQuoteCurve& curve);

/// Strike set with 0 prepended when absent.
std::vector<double> default_bl_grid(const CallQuoteCurve& curve);

/// The unique probability on `grid` that reprices every quote. Uses second differences when
/// the grid is the strike set starting at 0, and a rank-checked linear solve otherwise.
/// Throws InvariantViolation("CallQuoteCurve.identified") when the quotes do not pin down a
/// single measure on the grid, or when no measure on the grid reprices them.
DiscreteMeasure marginal_from_calls(const CallQuoteCurve& curve, const std::vector<double>& grid);

/// sum_x (x - K)^+ p(x).
double call_price(const std::vector<double>& grid, const DiscreteMeasure& measure, double strike);

}  // namespace motdual
