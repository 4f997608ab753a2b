#include "motdual/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "motdual/transport.hpp"

namespace motdual {

double FunctionalPropertiesReport::worst() const noexcept {
  return std::max({monotonicity, homogeneity, subadditivity, translation});
}

FunctionalPropertiesReport check_functional_properties(const ValueMap& phi, std::size_t grid_size,
                                                       std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  std::uniform_real_distribution<double> scale(0.1, 3.0);
  std::uniform_real_distribution<double> cash(-2.0, 2.0);

  FunctionalPropertiesReport rep;
  rep.trials = trials;
  std::vector<double> f(grid_size), other(grid_size), work(grid_size);
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& v : f) v = value(rng);
    for (auto& v : other) v = value(rng);
    const double phi_f = phi(f);
    const double phi_other = phi(other);

    for (std::size_t k = 0; k < grid_size; ++k) work[k] = f[k] + bump(rng);
    rep.monotonicity = std::max(rep.monotonicity, phi_f - phi(work));

    const double lambda = scale(rng);
    for (std::size_t k = 0; k < grid_size; ++k) work[k] = lambda * f[k];
    rep.homogeneity = std::max(rep.homogeneity, std::abs(phi(work) - lambda * phi_f));

    for (std::size_t k = 0; k < grid_size; ++k) work[k] = f[k] + other[k];
    rep.subadditivity = std::max(rep.subadditivity, phi(work) - phi_f - phi_other);

    const double c = cash(rng);
    for (std::size_t k = 0; k < grid_size; ++k) work[k] = f[k] + c;
    rep.translation = std::max(rep.translation, std::abs(phi(work) - phi_f - c));
  }
  return rep;
}

FunctionalPropertiesReport functional_properties_check(const Instance& instance,
                                                       std::size_t trials, std::uint64_t seed,
                                                       const lp::SolverOptions& options) {
  const ValueMap phi = [&](std::span<const double> f) {
    return dual_transport(instance, Payoff::dense({f.begin(), f.end()}), options).value;
  };
  return check_functional_properties(phi, instance.grid().size(), trials, seed);
}

}  // namespace motdual
