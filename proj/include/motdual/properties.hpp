#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "motdual/core.hpp"
#include "motdual/lp.hpp"

namespace motdual {

/// Worst observed violations of the sublinear-functional axioms.
struct FunctionalPropertiesReport {
  std::size_t trials = 0;
  double monotonicity = 0.0;        // max (phi(f) - phi(f'))^+ over f <= f'
  double homogeneity = 0.0;         // max |phi(l f) - l phi(f)|
  double subadditivity = 0.0;       // max (phi(f + f') - phi(f) - phi(f'))^+
  double translation = 0.0;         // max |phi(f + c) - phi(f) - c|

  [[nodiscard]] double worst() const noexcept;
};

using ValueMap = std::function<double(std::span<const double>)>;

/// Random-pair check of monotonicity, positive homogeneity, subadditivity and
/// cash translation for any payoff-to-value map on a grid of `grid_size` paths.
FunctionalPropertiesReport check_functional_properties(const ValueMap& phi,
                                                       std::size_t grid_size,
                                                       std::size_t trials, std::uint64_t seed);

/// The same suite applied to the transport dual value map of `instance`.
FunctionalPropertiesReport functional_properties_check(const Instance& instance,
                                                       std::size_t trials,
                                                       std::uint64_t seed = 7,
                                                       const lp::SolverOptions& options = {});

}  // namespace motdual
