#include "motdual/breeden_litzenberger.hpp"

#include <algorithm>
#include <cmath>

namespace motdual {

namespace {

constexpr double kShapeTolerance = 1e-9;

std::string fmt(double v) {
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

double slope(const CallQuoteCurve& c, std::size_t j) {
  return (c.prices[j] - c.prices[j - 1]) / (c.strikes[j] - c.strikes[j - 1]);
}

/// Gaussian elimination with partial pivoting on an (rows x cols) system, rows >= cols.
/// Returns nullopt when the column rank is deficient.
std::optional<std::vector<double>> solve_overdetermined(std::vector<std::vector<double>> a,
                                                        std::vector<double> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = a.empty() ? 0 : a.front().size();
  double scale = 1.0;
  for (const auto& r : a) {
    for (double v : r) scale = std::max(scale, std::abs(v));
  }
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < rows; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    if (pivot >= rows || std::abs(a[pivot][c]) <= 1e-12 * scale) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(cols);
  for (std::size_t c = 0; c < cols; ++c) x[c] = b[c] / a[c][c];
  return x;
}

}  // namespace

StaticArbitrage::StaticArbitrage(std::string rule, std::vector<double> strikes,
                                 const std::string& detail)
    : std::invalid_argument([&] {
        std::string s = "static arbitrage in call quotes (" + rule + ") at strikes (";
        for (std::size_t i = 0; i < strikes.size(); ++i) s += (i ? ", " : "") + fmt(strikes[i]);
        return s + "): " + detail;
      }()),
      rule_(std::move(rule)),
      strikes_(std::move(strikes)) {}

void validate_call_curve(const CallQuoteCurve& c) {
  if (c.strikes.empty() || c.strikes.size() != c.prices.size()) {
    throw InvariantViolation("CallQuoteCurve.shape", "need matching, nonempty strikes and prices");
  }
  for (std::size_t j = 0; j < c.strikes.size(); ++j) {
    if (!std::isfinite(c.strikes[j]) || !std::isfinite(c.prices[j])) {
      throw InvariantViolation("CallQuoteCurve.finite", "quotes must be finite");
    }
    if (c.strikes[j] < 0.0) {
      throw InvariantViolation("CallQuoteCurve.strikes", "strikes must be >= 0");
    }
    if (j > 0 && c.strikes[j] <= c.strikes[j - 1]) {
      throw InvariantViolation("CallQuoteCurve.strikes", "strikes must be strictly increasing");
    }
    if (c.prices[j] < -kShapeTolerance) {
      throw StaticArbitrage("nonnegative", {c.strikes[j]}, "negative call price");
    }
  }
  for (std::size_t j = 1; j < c.strikes.size(); ++j) {
    const double s = slope(c, j);
    if (s > kShapeTolerance) {
      throw StaticArbitrage("nonincreasing", {c.strikes[j - 1], c.strikes[j]},
                            "call price increases with strike");
    }
    if (s < -1.0 - kShapeTolerance) {
      throw StaticArbitrage("slope", {c.strikes[j - 1], c.strikes[j]},
                            "call price falls faster than the strike rises");
    }
    if (j + 1 < c.strikes.size() && slope(c, j + 1) < s - kShapeTolerance) {
      throw StaticArbitrage("convexity", {c.strikes[j - 1], c.strikes[j], c.strikes[j + 1]},
                            "call curve is not convex");
    }
  }
}

std::vector<double> default_bl_grid(const CallQuoteCurve& curve) {
  std::vector<double> grid = curve.strikes;
  if (grid.empty() || grid.front() != 0.0) grid.insert(grid.begin(), 0.0);
  return grid;
}

double call_price(const std::vector<double>& grid, const DiscreteMeasure& measure, double strike) {
  double c = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) c += std::max(grid[j] - strike, 0.0) * measure.weight(j);
  return c;
}

DiscreteMeasure marginal_from_calls(const CallQuoteCurve& curve, const std::vector<double>& grid) {
  validate_call_curve(curve);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!std::isfinite(grid[j]) || grid[j] < 0.0 || (j > 0 && grid[j] <= grid[j - 1])) {
      throw InvariantViolation("CallQuoteCurve.grid", "grid must be increasing and >= 0");
    }
  }
  if (grid.empty()) throw InvariantViolation("CallQuoteCurve.grid", "grid is empty");

  std::vector<double> p;
  const std::size_t m = curve.strikes.size();
  if (grid == curve.strikes && grid.front() == 0.0) {
    if (std::abs(curve.prices.back()) > kShapeTolerance) {
      throw InvariantViolation("CallQuoteCurve.identified",
                               "call at the largest strike is nonzero, so mass lies beyond the grid");
    }
    p.assign(m, 0.0);
    if (m == 1) {
      p[0] = 1.0;
    } else {
      p[0] = 1.0 + slope(curve, 1);
      for (std::size_t j = 1; j + 1 < m; ++j) p[j] = slope(curve, j + 1) - slope(curve, j);
      p[m - 1] = -slope(curve, m - 1);
    }
  } else {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double> row(grid.size());
      for (std::size_t j = 0; j < grid.size(); ++j) row[j] = std::max(grid[j] - curve.strikes[k], 0.0);
      a.push_back(std::move(row));
      b.push_back(curve.prices[k]);
    }
    a.emplace_back(grid.size(), 1.0);
    b.push_back(1.0);
    auto solved = solve_overdetermined(a, b);
    if (!solved) {
      throw InvariantViolation("CallQuoteCurve.identified",
                               "quotes do not determine a unique measure on the grid");
    }
    p = std::move(*solved);
    for (std::size_t k = 0; k < a.size(); ++k) {
      double r = -b[k];
      for (std::size_t j = 0; j < grid.size(); ++j) r += a[k][j] * p[j];
      if (std::abs(r) > kShapeTolerance) {
        throw InvariantViolation("CallQuoteCurve.identified",
                                 "no measure on the grid reprices the quotes");
      }
    }
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < -kShapeTolerance) {
      throw StaticArbitrage("nonnegative_density", {grid[j]}, "recovered mass is negative");
    }
    p[j] = std::max(p[j], 0.0);
  }
  return DiscreteMeasure(curve.maturity, std::move(p));
}

}  // namespace motdual
