#pragma once

#include <string>
#include <vector>

#include "motdual/core.hpp"
#include "motdual/lp.hpp"

namespace motdual {

/// N fair coins: axes {0, 1} with Exact marginals (1/2, 1/2).
Instance bernoulli_instance(std::size_t depth);

/// Optimal (m, g) of the tail-forced superreplication LP.
struct TailForcedBound {
  double value = 0.0;
  double m = 0.0;
  std::vector<std::vector<double>> g;
  /// m + sum_n <g_n, nu_n>, recomputed outside the LP.
  double repriced_cost = 0.0;
  lp::ResidualReport residuals;
};

/// min m + sum_n <g_n, nu_n> s.t. m + (+)g >= 1 on every prefix, g >= 0. With the tail of
/// the path set to all ones, liminf equals 1 whatever the prefix.
TailForcedBound tail_forced_dual_bound(const Instance& instance,
                                       const lp::SolverOptions& options = {});
TailForcedBound tail_forced_dual_bound(std::size_t depth, const lp::SolverOptions& options = {});

struct LiminfPrimal {
  /// <liminf, mu*> for mu* = (delta_{0...0} + delta_{1...1}) / 2.
  double candidate_value = 0.0;
  /// max <pi_N, mu> over couplings of the depth-N marginals.
  double upper_bound = 0.0;
};

LiminfPrimal liminf_primal_value(std::size_t depth, const lp::SolverOptions& options = {});

/// The two-point measure (delta_{0...0} + delta_{1...1}) / 2 on the depth-N grid.
Coupling two_point_measure(std::size_t depth);

/// E[max_{k <= ceil(N/2)} min_{k <= n <= N} x_n] under the product of fair coins, for each
/// N = 1..depth. Decreases to 0 as N grows.
std::vector<double> cylinder_product_expectations(std::size_t depth);

struct BernoulliGapReport {
  std::size_t depth = 0;
  /// Tail-forced lower bound on the superreplication value.
  double dual_value = 0.0;
  /// m = 1, g = 0 superreplicates, so the value is also at most this.
  double dual_upper_bound = 1.0;
  double primal_candidate_value = 0.0;
  double primal_upper_bound = 0.0;
  double gap = 0.0;
  TailForcedBound dual_certificate;
  std::string attaining_measure;
  /// Depth-N transport duality for the cylinder payoff, without tail forcing.
  double cylinder_primal = 0.0;
  double cylinder_dual = 0.0;

  [[nodiscard]] bool invariants_hold() const noexcept;
};

BernoulliGapReport gap_report(std::size_t depth, const lp::SolverOptions& options = {});

}  // namespace motdual
