#include "motdual/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace motdual {

namespace {

using lp::Relation;
using lp::Term;

std::string idx(const char* base, std::size_t a) { return std::string(base) + std::to_string(a); }

std::string idx(const char* base, std::size_t a, std::size_t b) {
  return std::string(base) + std::to_string(a) + "_" + std::to_string(b);
}

void require_optimal(const lp::LpSolution& sol, const char* what) {
  if (!sol.optimal()) {
    throw lp::NumericFailure(std::string(what) + " LP ended " + lp::to_string(sol.status) +
                             " on a problem that must have an optimum");
  }
}

std::vector<double> clamp_nonnegative(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e = std::max(e, 0.0);
  return out;
}

}  // namespace

lp::LinearProgram build_primal_transport_lp(const Instance& instance,
                                            std::span<const double> payoff) {
  const auto& grid = instance.grid();
  if (payoff.size() != grid.size()) throw ShapeMismatch("payoff table does not match grid");

  lp::LinearProgram prog(lp::Sense::Maximize);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    prog.add_variable(idx("mu", flat), 0.0, lp::kInf, payoff[flat]);
  }
  std::vector<std::size_t> mixture_offset(instance.horizon(), 0);
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    if (c.is_exact()) continue;
    mixture_offset[n] = prog.num_variables();
    for (std::size_t k = 0; k < c.vertex_count(); ++k) {
      prog.add_variable(idx("lam", n + 1, k), 0.0, lp::kInf, 0.0);
    }
  }

  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    std::vector<std::vector<Term>> rows(instance.axis(n).size());
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      rows[grid.coordinate(flat, n)].emplace_back(flat, 1.0);
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (c.is_exact()) {
        prog.add_constraint(idx("marg", n + 1, j), rows[j], Relation::Equal, c.measure().weight(j));
      } else {
        for (std::size_t k = 0; k < c.vertex_count(); ++k) {
          rows[j].emplace_back(mixture_offset[n] + k, -c.measures()[k].weight(j));
        }
        prog.add_constraint(idx("marg", n + 1, j), rows[j], Relation::Equal, 0.0);
      }
    }
    if (!c.is_exact()) {
      std::vector<Term> simplex;
      for (std::size_t k = 0; k < c.vertex_count(); ++k) simplex.emplace_back(mixture_offset[n] + k, 1.0);
      prog.add_constraint(idx("mix", n + 1), simplex, Relation::Equal, 1.0);
    }
  }
  return prog;
}

TransportPrimalSolution primal_transport(const Instance& instance, const Payoff& payoff,
                                         const lp::SolverOptions& options) {
  const auto table = payoff.expand(instance);
  const auto prog = build_primal_transport_lp(instance, table);
  auto sol = lp::solve(prog, options);
  require_optimal(sol, "primal transport");

  const auto& grid = instance.grid();
  std::vector<std::vector<double>> mixture(instance.horizon());
  std::size_t offset = grid.size();
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    if (c.is_exact()) {
      mixture[n] = {1.0};
      continue;
    }
    mixture[n] = clamp_nonnegative(std::span<const double>(sol.x).subspan(offset, c.vertex_count()));
    offset += c.vertex_count();
  }
  TransportPrimalSolution out{
      sol.value,
      Coupling(grid.shape(), clamp_nonnegative(std::span<const double>(sol.x).first(grid.size()))),
      std::move(mixture), std::move(sol), {}};
  out.residuals = lp::check_certificates(prog, out.lp);
  return out;
}

lp::LinearProgram build_dual_transport_lp(const Instance& instance,
                                          std::span<const double> payoff) {
  const auto& grid = instance.grid();
  if (payoff.size() != grid.size()) throw ShapeMismatch("payoff table does not match grid");

  lp::LinearProgram prog(lp::Sense::Minimize);
  const std::size_t cash = prog.add_variable("m", -lp::kInf, lp::kInf, 1.0);
  std::vector<std::size_t> leg_offset(instance.horizon());
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    leg_offset[n] = prog.num_variables();
    for (std::size_t j = 0; j < instance.axis(n).size(); ++j) {
      const double price = c.is_exact() ? c.measure().weight(j) : 0.0;
      prog.add_variable(idx("g", n + 1, j), 0.0, lp::kInf, price);
    }
  }
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    if (c.is_exact()) continue;
    const std::size_t t = prog.add_variable(idx("t", n + 1), -lp::kInf, lp::kInf, 1.0);
    for (std::size_t k = 0; k < c.vertex_count(); ++k) {
      std::vector<Term> terms{{t, 1.0}};
      for (std::size_t j = 0; j < instance.axis(n).size(); ++j) {
        terms.emplace_back(leg_offset[n] + j, -c.measures()[k].weight(j));
      }
      prog.add_constraint(idx("epi", n + 1, k), terms, Relation::GreaterEqual, 0.0);
    }
  }
  std::vector<Term> terms;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    terms.assign({{cash, 1.0}});
    for (std::size_t n = 0; n < instance.horizon(); ++n) {
      terms.emplace_back(leg_offset[n] + grid.coordinate(flat, n), 1.0);
    }
    prog.add_constraint(idx("dom", flat), terms, Relation::GreaterEqual, payoff[flat]);
  }
  return prog;
}

TransportDualSolution dual_transport(const Instance& instance, const Payoff& payoff,
                                     const lp::SolverOptions& options) {
  const auto table = payoff.expand(instance);
  const auto prog = build_dual_transport_lp(instance, table);
  auto sol = lp::solve(prog, options);
  require_optimal(sol, "dual transport");

  TransportDualSolution out;
  out.value = sol.value;
  out.m = sol.x[0];
  std::size_t offset = 1;
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto size = instance.axis(n).size();
    out.g.push_back(clamp_nonnegative(std::span<const double>(sol.x).subspan(offset, size)));
    offset += size;
  }
  out.mixture.resize(instance.horizon());
  std::size_t row = 0;
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    if (c.is_exact()) {
      out.mixture[n] = {1.0};
      continue;
    }
    for (std::size_t k = 0; k < c.vertex_count(); ++k) out.mixture[n].push_back(sol.duals[row++]);
  }
  out.lp = std::move(sol);
  out.residuals = lp::check_certificates(prog, out.lp);
  return out;
}

double TransportDualSolution::superreplication_slack(const Instance& instance,
                                                     std::span<const double> payoff) const {
  const auto& grid = instance.grid();
  double worst = lp::kInf;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    double v = m - payoff[flat];
    for (std::size_t n = 0; n < instance.horizon(); ++n) v += g[n][grid.coordinate(flat, n)];
    worst = std::min(worst, v);
  }
  return worst;
}

double TransportDualSolution::repriced_cost(const Instance& instance) const {
  double cost = m;
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    cost += sublinear_price(instance.constraint(n), g[n]);
  }
  return cost;
}

double dual_equivalent_split(const Instance& instance, const Payoff& payoff,
                             const lp::SolverOptions& options) {
  if (!instance.all_exact()) {
    throw Unsupported("the split-leg dual is defined for Exact constraints only");
  }
  const auto table = payoff.expand(instance);
  const auto& grid = instance.grid();

  lp::LinearProgram prog(lp::Sense::Minimize);
  std::vector<std::size_t> long_offset(instance.horizon());
  std::vector<std::size_t> short_offset(instance.horizon());
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& nu = instance.constraint(n).measure();
    long_offset[n] = prog.num_variables();
    for (std::size_t j = 0; j < nu.size(); ++j) {
      prog.add_variable(idx("g1_", n + 1, j), 0.0, lp::kInf, nu.weight(j));
    }
    short_offset[n] = prog.num_variables();
    for (std::size_t j = 0; j < nu.size(); ++j) {
      prog.add_variable(idx("g2_", n + 1, j), 0.0, lp::kInf, -nu.weight(j));
    }
  }
  std::vector<Term> terms;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    terms.clear();
    for (std::size_t n = 0; n < instance.horizon(); ++n) {
      const auto j = grid.coordinate(flat, n);
      terms.emplace_back(long_offset[n] + j, 1.0);
      terms.emplace_back(short_offset[n] + j, -1.0);
    }
    prog.add_constraint(idx("dom", flat), terms, Relation::GreaterEqual, table[flat]);
  }
  const auto sol = lp::solve(prog, options);
  require_optimal(sol, "split-leg dual");
  return sol.value;
}

DualityReport transport_duality_report(const Instance& instance, const Payoff& payoff,
                                       const lp::SolverOptions& options) {
  auto primal = primal_transport(instance, payoff, options);
  auto dual = dual_transport(instance, payoff, options);
  DualityReport rep;
  rep.primal_value = primal.value;
  rep.dual_value = dual.value;
  rep.gap = std::abs(primal.value - dual.value);
  rep.primal_residuals = primal.residuals;
  rep.dual_residuals = dual.residuals;
  rep.coupling = std::move(primal.coupling);
  rep.dual_solution.push_back(dual.m);
  for (const auto& leg : dual.g) rep.dual_solution.insert(rep.dual_solution.end(), leg.begin(), leg.end());
  return rep;
}

namespace {

lp::LinearProgram mixture_feasibility_lp(const MarginalConstraint& c, const DiscreteMeasure& target) {
  lp::LinearProgram prog(lp::Sense::Minimize);
  for (std::size_t k = 0; k < c.vertex_count(); ++k) prog.add_variable(idx("lam", k), 0.0, lp::kInf);
  for (std::size_t j = 0; j < target.size(); ++j) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < c.vertex_count(); ++k) {
      terms.emplace_back(k, c.measures()[k].weight(j));
    }
    prog.add_constraint(idx("pt", j), terms, Relation::Equal, target.weight(j));
  }
  std::vector<Term> simplex;
  for (std::size_t k = 0; k < c.vertex_count(); ++k) simplex.emplace_back(k, 1.0);
  prog.add_constraint("sum", simplex, Relation::Equal, 1.0);
  return prog;
}

/// max <g, target> - t  s.t. t >= <g, nu^k>, 0 <= g <= 1.
lp::LpSolution separating_vector(const MarginalConstraint& c, const DiscreteMeasure& target,
                                 const lp::SolverOptions& options) {
  lp::LinearProgram prog(lp::Sense::Maximize);
  for (std::size_t j = 0; j < target.size(); ++j) {
    prog.add_variable(idx("g", j), 0.0, 1.0, target.weight(j));
  }
  const std::size_t t = prog.add_variable("t", -lp::kInf, lp::kInf, -1.0);
  for (std::size_t k = 0; k < c.vertex_count(); ++k) {
    std::vector<Term> terms{{t, 1.0}};
    for (std::size_t j = 0; j < target.size(); ++j) terms.emplace_back(j, -c.measures()[k].weight(j));
    prog.add_constraint(idx("epi", k), terms, Relation::GreaterEqual, 0.0);
  }
  return lp::solve(prog, options);
}

}  // namespace

ConjugateValue conjugate_membership(const Instance& instance, const Coupling& mu,
                                    const lp::SolverOptions& options) {
  if (!mu.matches(instance)) throw ShapeMismatch("coupling shape does not match the instance grid");

  ConjugateValue out;
  const double mass = mu.total_mass();
  if (std::abs(mass - 1.0) > kProbabilityTolerance) {
    out.kind = ConjugateValue::Kind::PositiveInfinity;
    out.witness = ConjugateValue::Witness::Constant;
    out.constant = mass > 1.0 ? 1.0 : -1.0;
    out.excess = out.constant * (mass - 1.0);
    return out;
  }

  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& c = instance.constraint(n);
    const auto marginal = marginal_of(mu, n);
    std::vector<double> g(marginal.size(), 0.0);
    if (c.is_exact()) {
      double worst = 0.0;
      for (std::size_t j = 0; j < marginal.size(); ++j) {
        const double diff = marginal.weight(j) - c.measure().weight(j);
        worst = std::max(worst, std::abs(diff));
        if (diff > 0.0) g[j] = 1.0;
      }
      if (worst <= kProbabilityTolerance) continue;
    } else {
      const auto feasible = lp::solve(mixture_feasibility_lp(c, marginal), options);
      if (feasible.optimal()) continue;
      const auto sep = separating_vector(c, marginal, options);
      require_optimal(sep, "separating vector");
      for (std::size_t j = 0; j < g.size(); ++j) g[j] = std::clamp(sep.x[j], 0.0, 1.0);
    }
    out.kind = ConjugateValue::Kind::PositiveInfinity;
    out.witness = ConjugateValue::Witness::SeparatingVector;
    out.axis = n;
    out.excess = marginal.integrate(g) - sublinear_price(c, g);
    out.g = std::move(g);
    return out;
  }
  return out;
}

RepresentationReport verify_representation(const Instance& instance,
                                           const std::vector<Payoff>& payoffs,
                                           const lp::SolverOptions& options) {
  RepresentationReport rep;
  for (const auto& f : payoffs) {
    const auto p = primal_transport(instance, f, options);
    const auto d = dual_transport(instance, f, options);
    RepresentationEntry e{p.value, d.value, std::abs(p.value - d.value)};
    rep.max_gap = std::max(rep.max_gap, e.gap);
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace motdual
