#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "motdual/core.hpp"
#include "motdual/lp.hpp"

namespace motdual {

/// Paired primal/dual solve summary shared by the transport and martingale modules.
struct DualityReport {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  lp::ResidualReport primal_residuals;
  lp::ResidualReport dual_residuals;
  /// Optimizer handles.
  std::optional<Coupling> coupling;
  std::vector<double> dual_solution;

  [[nodiscard]] bool within(double tol) const noexcept {
    return gap <= tol * std::max(1.0, std::abs(dual_value));
  }
};

struct TransportPrimalSolution {
  double value = 0.0;
  Coupling coupling;
  /// Mixture weights over hull vertices per axis (a single 1 for Exact axes).
  std::vector<std::vector<double>> mixture;
  lp::LpSolution lp;
  lp::ResidualReport residuals;
};

/// Cash m plus static legs g_n >= 0 dominating the payoff.
struct TransportDualSolution {
  double value = 0.0;
  double m = 0.0;
  std::vector<std::vector<double>> g;
  /// ConvexHull axes: multipliers of the epigraph rows t_n >= <g_n, nu^k> (sum to 1).
  std::vector<std::vector<double>> mixture;
  lp::LpSolution lp;
  lp::ResidualReport residuals;

  /// min over the grid of m + (+)g - f.
  [[nodiscard]] double superreplication_slack(const Instance& instance,
                                              std::span<const double> payoff) const;
  /// m + sum_n price_n(g_n), recomputed with sublinear_price.
  [[nodiscard]] double repriced_cost(const Instance& instance) const;
};

/// max <f, mu> over couplings whose marginals lie in the constraint sets.
TransportPrimalSolution primal_transport(const Instance& instance, const Payoff& payoff,
                                         const lp::SolverOptions& options = {});

/// min m + sum_n phi_n(g_n) over m + (+)g >= f, g >= 0.
TransportDualSolution dual_transport(const Instance& instance, const Payoff& payoff,
                                     const lp::SolverOptions& options = {});

/// Dual with signed legs g1 - g2 (both >= 0) and no cash; Exact constraints only.
double dual_equivalent_split(const Instance& instance, const Payoff& payoff,
                             const lp::SolverOptions& options = {});

lp::LinearProgram build_primal_transport_lp(const Instance& instance,
                                            std::span<const double> payoff);
lp::LinearProgram build_dual_transport_lp(const Instance& instance,
                                          std::span<const double> payoff);

DualityReport transport_duality_report(const Instance& instance, const Payoff& payoff,
                                       const lp::SolverOptions& options = {});

/// Value of the conjugate phi* at a coupling: zero on the feasible set, +infinity off it.
struct ConjugateValue {
  enum class Kind { Zero, PositiveInfinity };
  enum class Witness { None, Constant, SeparatingVector };

  Kind kind = Kind::Zero;
  Witness witness = Witness::None;
  /// Constant witness c with c * (mass - 1) > 0.
  double constant = 0.0;
  /// Separating witness: axis and g >= 0 with <g, mu_n> > phi_n(g).
  std::size_t axis = 0;
  std::vector<double> g;
  /// <g, mu_n> - phi_n(g), or c * (mass - 1) for the constant witness.
  double excess = 0.0;

  [[nodiscard]] bool is_zero() const noexcept { return kind == Kind::Zero; }
};

ConjugateValue conjugate_membership(const Instance& instance, const Coupling& mu,
                                    const lp::SolverOptions& options = {});

struct RepresentationEntry {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct RepresentationReport {
  std::vector<RepresentationEntry> entries;
  double max_gap = 0.0;
};

/// Checks dual_transport(f) == primal_transport(f) for each payoff.
RepresentationReport verify_representation(const Instance& instance,
                                           const std::vector<Payoff>& payoffs,
                                           const lp::SolverOptions& options = {});

}  // namespace motdual
