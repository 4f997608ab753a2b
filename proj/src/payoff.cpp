#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "motdual/core.hpp"

namespace motdual {

namespace {

std::size_t resolve_time(int n, const Instance& instance, const char* what) {
  const auto horizon = static_cast<int>(instance.horizon());
  const int t = n == 0 ? horizon : n;
  if (t < 1 || t > horizon) {
    throw std::out_of_range(std::string(what) + " time " + std::to_string(n) +
                            " outside 1.." + std::to_string(horizon));
  }
  return static_cast<std::size_t>(t - 1);
}

std::vector<double> expand_named(const NamedPayoff& spec, const Instance& instance) {
  const auto& grid = instance.grid();
  const auto d = instance.dimension();
  std::vector<double> table(grid.size(), 0.0);

  if (spec.generator == "basket_call") {
    const auto n = resolve_time(spec.n, instance, "basket_call");
    if (spec.weights.size() != d) {
      throw ShapeMismatch("basket_call needs one weight per asset");
    }
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      const auto& x = instance.path_point(flat, n);
      double basket = 0.0;
      for (std::size_t i = 0; i < d; ++i) basket += spec.weights[i] * x[i];
      table[flat] = std::max(basket - spec.strike, 0.0);
    }
  } else if (spec.generator == "straddle") {
    const auto n = resolve_time(spec.n, instance, "straddle");
    const auto m = resolve_time(spec.m, instance, "straddle");
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      const auto& a = instance.path_point(flat, n);
      const auto& b = instance.path_point(flat, m);
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      table[flat] = std::sqrt(s);
    }
  } else if (spec.generator == "forward") {
    const auto n = resolve_time(spec.n, instance, "forward");
    if (spec.asset < 1 || static_cast<std::size_t>(spec.asset) > d) {
      throw std::out_of_range("forward asset index outside 1..d");
    }
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      table[flat] = instance.path_point(flat, n)[spec.asset - 1] - spec.strike;
    }
  } else if (spec.generator == "cylinder_liminf") {
    const auto last = resolve_time(spec.depth, instance, "cylinder_liminf");
    const std::size_t depth = last + 1;
    const std::size_t window_start = (depth + 1) / 2;  // ceil(N/2), 1-based
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k <= window_start; ++k) {
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t j = k; j <= depth; ++j) {
          lowest = std::min(lowest, instance.path_point(flat, j - 1)[0]);
        }
        best = std::max(best, lowest);
      }
      table[flat] = best;
    }
  } else {
    throw std::invalid_argument("unknown payoff generator '" + spec.generator + "'");
  }
  return table;
}

}  // namespace

Payoff Payoff::dense(std::vector<double> values) { return Payoff(DenseTable{std::move(values)}); }

Payoff Payoff::separable(std::vector<std::vector<double>> legs) {
  return Payoff(SeparableLegs{std::move(legs)});
}

Payoff Payoff::named(NamedPayoff spec) { return Payoff(std::move(spec)); }

Payoff Payoff::constant(const Instance& instance, double c) {
  return dense(std::vector<double>(instance.grid().size(), c));
}

std::vector<double> Payoff::expand(const Instance& instance) const {
  const auto& grid = instance.grid();
  if (grid.size() > kMaxDenseEntries) {
    throw std::length_error("payoff table would have " + std::to_string(grid.size()) +
                            " entries, above the cap of " + std::to_string(kMaxDenseEntries));
  }
  std::vector<double> table;
  if (const auto* dense = std::get_if<DenseTable>(&rep_)) {
    if (dense->values.size() != grid.size()) {
      throw ShapeMismatch("dense payoff has " + std::to_string(dense->values.size()) +
                          " entries, grid has " + std::to_string(grid.size()));
    }
    table = dense->values;
  } else if (const auto* sep = std::get_if<SeparableLegs>(&rep_)) {
    if (sep->legs.size() != instance.horizon()) {
      throw ShapeMismatch("separable payoff needs one leg per axis");
    }
    for (std::size_t n = 0; n < instance.horizon(); ++n) {
      if (sep->legs[n].size() != instance.axis(n).size()) {
        throw ShapeMismatch("separable leg " + std::to_string(n + 1) + " has wrong length");
      }
    }
    table.assign(grid.size(), 0.0);
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      for (std::size_t n = 0; n < instance.horizon(); ++n) {
        table[flat] += sep->legs[n][grid.coordinate(flat, n)];
      }
    }
  } else {
    table = expand_named(std::get<NamedPayoff>(rep_), instance);
  }
  for (double v : table) {
    if (!std::isfinite(v)) throw InvariantViolation("Payoff.finite", "payoff has a non-finite value");
  }
  return table;
}

}  // namespace motdual
