#include "motdual/counterexample.hpp"

#include <cmath>

#include "motdual/transport.hpp"

namespace motdual {

Instance bernoulli_instance(std::size_t depth) {
  if (depth == 0) throw InvariantViolation("bernoulli_instance.depth", "depth must be >= 1");
  std::vector<DiscreteAxis> axes;
  std::vector<MarginalConstraint> constraints;
  for (std::size_t n = 0; n < depth; ++n) {
    const int index = static_cast<int>(n + 1);
    axes.push_back(DiscreteAxis::scalar(index, {0.0, 1.0}));
    constraints.push_back(MarginalConstraint::exact(DiscreteMeasure(index, {0.5, 0.5})));
  }
  return Instance(std::move(axes), std::move(constraints), "bernoulli-" + std::to_string(depth));
}

TailForcedBound tail_forced_dual_bound(const Instance& instance,
                                       const lp::SolverOptions& options) {
  auto dual = dual_transport(instance, Payoff::constant(instance, 1.0), options);
  TailForcedBound out;
  out.value = dual.value;
  out.m = dual.m;
  out.g = dual.g;
  out.repriced_cost = dual.m;
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    out.repriced_cost += instance.constraint(n).measure().integrate(dual.g[n]);
  }
  out.residuals = dual.residuals;
  return out;
}

TailForcedBound tail_forced_dual_bound(std::size_t depth, const lp::SolverOptions& options) {
  return tail_forced_dual_bound(bernoulli_instance(depth), options);
}

Coupling two_point_measure(std::size_t depth) {
  const auto instance = bernoulli_instance(depth);
  std::vector<double> w(instance.grid().size(), 0.0);
  w.front() = 0.5;
  w.back() = 0.5;
  return Coupling(instance.grid().shape(), std::move(w));
}

namespace {

Payoff cylinder(std::size_t depth) {
  NamedPayoff spec;
  spec.generator = "cylinder_liminf";
  spec.depth = static_cast<int>(depth);
  return Payoff::named(spec);
}

}  // namespace

LiminfPrimal liminf_primal_value(std::size_t depth, const lp::SolverOptions& options) {
  const auto instance = bernoulli_instance(depth);
  LiminfPrimal out;
  out.candidate_value = evaluate_expectation(instance, two_point_measure(depth), cylinder(depth));
  NamedPayoff last;
  last.generator = "forward";
  last.n = static_cast<int>(depth);
  out.upper_bound = primal_transport(instance, Payoff::named(last), options).value;
  return out;
}

std::vector<double> cylinder_product_expectations(std::size_t depth) {
  std::vector<double> out;
  for (std::size_t N = 1; N <= depth; ++N) {
    const auto instance = bernoulli_instance(N);
    std::vector<DiscreteMeasure> marginals;
    for (const auto& c : instance.constraints()) marginals.push_back(c.measure());
    out.push_back(evaluate_expectation(instance, Coupling::product(marginals), cylinder(N)));
  }
  return out;
}

bool BernoulliGapReport::invariants_hold() const noexcept {
  return dual_value >= 1.0 - 1e-9 && primal_candidate_value <= primal_upper_bound + 1e-12 &&
         gap == dual_value - primal_candidate_value;
}

BernoulliGapReport gap_report(std::size_t depth, const lp::SolverOptions& options) {
  BernoulliGapReport out;
  out.depth = depth;
  out.dual_certificate = tail_forced_dual_bound(depth, options);
  out.dual_value = out.dual_certificate.value;
  const auto primal = liminf_primal_value(depth, options);
  out.primal_candidate_value = primal.candidate_value;
  out.primal_upper_bound = primal.upper_bound;
  out.gap = out.dual_value - out.primal_candidate_value;
  out.attaining_measure = "1/2 delta(0,...,0) + 1/2 delta(1,...,1)";
  const auto cyl = transport_duality_report(bernoulli_instance(depth), cylinder(depth), options);
  out.cylinder_primal = cyl.primal_value;
  out.cylinder_dual = cyl.dual_value;
  return out;
}

}  // namespace motdual
