#include "motdual/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace motdual {

namespace {

using lp::Relation;
using lp::Term;

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::string name(const char* base, std::initializer_list<std::size_t> parts) {
  std::string out(base);
  bool first = true;
  for (std::size_t p : parts) {
    out += first ? "" : "_";
    out += std::to_string(p);
    first = false;
  }
  return out;
}

bool needs_friction_form(const Market& market, bool forced) {
  return forced || !market.frictionless();
}

std::vector<double> nonnegative(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (double& e : out) e = std::max(e, 0.0);
  return out;
}

}  // namespace

Market::Market(Instance instance, Point s0, std::vector<double> epsilons)
    : instance_(std::move(instance)), s0_(std::move(s0)), epsilons_(std::move(epsilons)) {
  const std::size_t d = instance_.dimension();
  if (s0_.size() != d) {
    throw ShapeMismatch("s0 has " + std::to_string(s0_.size()) + " coordinates, grid has " +
                        std::to_string(d));
  }
  if (epsilons_.size() != d) {
    throw ShapeMismatch("expected one transaction cost per asset (" + std::to_string(d) + ")");
  }
  for (double s : s0_) {
    if (!std::isfinite(s) || s < 0.0) {
      throw InvariantViolation("Market.nonnegative_prices", "s0 must be finite and >= 0");
    }
  }
  for (double e : epsilons_) {
    if (!std::isfinite(e) || e < 0.0) {
      throw InvariantViolation("Market.transaction_costs", "eps must be finite and >= 0");
    }
  }
  for (const auto& axis : instance_.axes()) {
    for (const auto& p : axis.points()) {
      for (double v : p) {
        if (v < 0.0) {
          throw InvariantViolation("Market.nonnegative_prices",
                                   "axis " + std::to_string(axis.index()) +
                                       " has a negative price");
        }
      }
    }
  }
}

bool Market::frictionless() const noexcept {
  return std::all_of(epsilons_.begin(), epsilons_.end(), [](double e) { return e == 0.0; });
}

Market Market::with_epsilons(std::vector<double> epsilons) const {
  return Market(instance_, s0_, std::move(epsilons));
}

Market Market::with_uniform_epsilon(double eps) const {
  return with_epsilons(std::vector<double>(dimension(), eps));
}

double strategy_cost(const Market& market, const SemiStaticStrategy& strategy) {
  const auto& inst = market.instance();
  if (strategy.g.size() != inst.horizon()) throw ShapeMismatch("strategy needs one leg per axis");
  double cost = strategy.m;
  for (std::size_t n = 0; n < inst.horizon(); ++n) {
    cost += sublinear_price(inst.constraint(n), strategy.g[n]);
  }
  return cost;
}

std::vector<double> strategy_outcome(const Market& market, const SemiStaticStrategy& strategy) {
  const auto& inst = market.instance();
  const auto& grid = inst.grid();
  const std::size_t d = market.dimension();
  if (strategy.g.size() != inst.horizon()) throw ShapeMismatch("strategy needs one leg per axis");
  for (std::size_t n = 0; n < inst.horizon(); ++n) {
    if (strategy.g[n].size() != inst.axis(n).size()) throw ShapeMismatch("leg size mismatch");
  }
  for (const auto& block : strategy.blocks) {
    if (block.horizon == 0 || block.horizon > inst.horizon() || block.h.size() != block.horizon) {
      throw ShapeMismatch("trading block horizon does not match its holdings");
    }
    for (std::size_t n = 0; n < block.horizon; ++n) {
      if (block.h[n].size() != grid.prefix_count(n) * d) {
        throw ShapeMismatch("holding h_" + std::to_string(n + 1) + " is not indexed by prefixes");
      }
    }
  }

  std::vector<double> out(grid.size());
  std::vector<double> prev(d);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    double v = strategy.m;
    for (std::size_t n = 0; n < inst.horizon(); ++n) v += strategy.g[n][grid.coordinate(flat, n)];
    for (const auto& block : strategy.blocks) {
      std::fill(prev.begin(), prev.end(), 0.0);
      for (std::size_t n = 0; n < block.horizon; ++n) {
        const std::size_t p = grid.prefix_index(flat, n);
        for (std::size_t i = 0; i < d; ++i) {
          const double h = block.h[n][p * d + i];
          const double s = market.price(flat, n, i);
          v += h * (market.price(flat, n + 1, i) - s);
          v -= market.epsilons()[i] * std::abs(h - prev[i]) * s;
          prev[i] = h;
        }
      }
    }
    out[flat] = v;
  }
  return out;
}

lp::LinearProgram build_superhedge_lp(const Market& market, std::span<const double> payoff,
                                      const SuperhedgeOptions& options, StrategyLayout* layout) {
  const auto& inst = market.instance();
  const auto& grid = inst.grid();
  const std::size_t T = inst.horizon();
  const std::size_t d = market.dimension();
  if (payoff.size() != grid.size()) throw ShapeMismatch("payoff table does not match grid");

  StrategyLayout lay;
  lay.dimension = d;
  lay.friction_form = needs_friction_form(market, options.force_friction_form);

  lp::LinearProgram prog(lp::Sense::Minimize);
  lay.cash = prog.add_variable("m", -lp::kInf, lp::kInf, 1.0);
  lay.leg_offset.resize(T);
  for (std::size_t n = 0; n < T; ++n) {
    const auto& c = inst.constraint(n);
    lay.leg_offset[n] = prog.num_variables();
    for (std::size_t j = 0; j < inst.axis(n).size(); ++j) {
      prog.add_variable(name("g", {n + 1, j}), 0.0, lp::kInf, c.is_exact() ? c.measure().weight(j) : 0.0);
    }
  }
  lay.epigraph.assign(T, kNone);
  for (std::size_t n = 0; n < T; ++n) {
    if (!inst.constraint(n).is_exact()) {
      lay.epigraph[n] = prog.add_variable(name("t", {n + 1}), -lp::kInf, lp::kInf, 1.0);
    }
  }

  if (!options.static_only) {
    const std::size_t first = lay.friction_form ? 1 : T;
    for (std::size_t N = first; N <= T; ++N) {
      StrategyLayout::Block block;
      block.horizon = N;
      for (std::size_t n = 0; n < N; ++n) {
        block.h_offset.push_back(prog.num_variables());
        for (std::size_t q = 0; q < grid.prefix_count(n) * d; ++q) {
          prog.add_variable(name("h", {N, n + 1, q}), -lp::kInf, lp::kInf, 0.0);
        }
      }
      if (lay.friction_form) {
        for (std::size_t n = 0; n < N; ++n) {
          block.u_offset.push_back(prog.num_variables());
          for (std::size_t q = 0; q < grid.prefix_count(n) * d; ++q) {
            prog.add_variable(name("u", {N, n + 1, q}), 0.0, lp::kInf, 0.0);
          }
        }
      }
      lay.blocks.push_back(std::move(block));
    }
  }

  for (std::size_t n = 0; n < T; ++n) {
    if (lay.epigraph[n] == kNone) continue;
    const auto& c = inst.constraint(n);
    for (std::size_t k = 0; k < c.vertex_count(); ++k) {
      std::vector<Term> terms{{lay.epigraph[n], 1.0}};
      for (std::size_t j = 0; j < inst.axis(n).size(); ++j) {
        terms.emplace_back(lay.leg_offset[n] + j, -c.measures()[k].weight(j));
      }
      prog.add_constraint(name("epi", {n + 1, k}), terms, Relation::GreaterEqual, 0.0);
    }
  }

  if (options.cost_floor) {
    std::vector<Term> terms{{lay.cash, 1.0}};
    for (std::size_t n = 0; n < T; ++n) {
      if (lay.epigraph[n] != kNone) {
        terms.emplace_back(lay.epigraph[n], 1.0);
        continue;
      }
      for (std::size_t j = 0; j < inst.axis(n).size(); ++j) {
        terms.emplace_back(lay.leg_offset[n] + j, inst.constraint(n).measure().weight(j));
      }
    }
    prog.add_constraint("floor", terms, Relation::GreaterEqual, *options.cost_floor);
  }

  // u >= |h_n - h_{n-1}|; the parent of a length-n prefix drops its last coordinate.
  for (std::size_t b = 0; b < lay.blocks.size() && lay.friction_form; ++b) {
    for (std::size_t n = 0; n < lay.blocks[b].horizon; ++n) {
      for (std::size_t p = 0; p < grid.prefix_count(n); ++p) {
        for (std::size_t i = 0; i < d; ++i) {
          const std::size_t u = lay.u_column(b, n, p, i);
          const std::size_t h = lay.h_column(b, n, p, i);
          for (double sign : {1.0, -1.0}) {
            std::vector<Term> terms{{u, 1.0}, {h, -sign}};
            if (n > 0) terms.emplace_back(lay.h_column(b, n - 1, p / grid.shape()[n - 1], i), sign);
            prog.add_constraint(name(sign > 0 ? "up" : "dn", {lay.blocks[b].horizon, n + 1, p * d + i}),
                                terms, Relation::GreaterEqual, 0.0);
          }
        }
      }
    }
  }

  lay.first_path_row = prog.num_constraints();
  std::vector<Term> terms;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    terms.clear();
    terms.emplace_back(lay.cash, 1.0);
    for (std::size_t n = 0; n < T; ++n) {
      terms.emplace_back(lay.leg_offset[n] + grid.coordinate(flat, n), 1.0);
    }
    for (std::size_t b = 0; b < lay.blocks.size(); ++b) {
      for (std::size_t n = 0; n < lay.blocks[b].horizon; ++n) {
        const std::size_t p = grid.prefix_index(flat, n);
        for (std::size_t i = 0; i < d; ++i) {
          const double s = market.price(flat, n, i);
          terms.emplace_back(lay.h_column(b, n, p, i), market.price(flat, n + 1, i) - s);
          if (lay.friction_form) {
            terms.emplace_back(lay.u_column(b, n, p, i), -market.epsilons()[i] * s);
          }
        }
      }
    }
    prog.add_constraint(name("path", {flat}), terms, Relation::GreaterEqual, payoff[flat]);
  }

  if (layout != nullptr) *layout = std::move(lay);
  return prog;
}

SemiStaticStrategy decode_strategy(const Market& market, const StrategyLayout& layout,
                                   std::span<const double> x) {
  const auto& inst = market.instance();
  const auto& grid = inst.grid();
  SemiStaticStrategy s;
  s.m = x[layout.cash];
  for (std::size_t n = 0; n < inst.horizon(); ++n) {
    s.g.push_back(nonnegative(x.subspan(layout.leg_offset[n], inst.axis(n).size())));
  }
  for (const auto& block : layout.blocks) {
    TradingBlock tb;
    tb.horizon = block.horizon;
    for (std::size_t n = 0; n < block.horizon; ++n) {
      const std::size_t width = grid.prefix_count(n) * layout.dimension;
      auto h = x.subspan(block.h_offset[n], width);
      tb.h.emplace_back(h.begin(), h.end());
      if (!block.u_offset.empty()) tb.u.push_back(nonnegative(x.subspan(block.u_offset[n], width)));
    }
    s.blocks.push_back(std::move(tb));
  }
  return s;
}

SuperhedgeResult superhedge_dual(const Market& market, const Payoff& payoff,
                                 const SuperhedgeOptions& options) {
  const auto table = payoff.expand(market.instance());
  StrategyLayout layout;
  const auto prog = build_superhedge_lp(market, table, options, &layout);
  SuperhedgeResult out;
  out.lp = lp::solve(prog, options.lp);
  switch (out.lp.status) {
    case lp::Status::Optimal:
      out.status = HedgeStatus::Optimal;
      out.value = out.lp.value;
      out.strategy = decode_strategy(market, layout, out.lp.x);
      out.residuals = lp::check_certificates(prog, out.lp);
      break;
    case lp::Status::Unbounded:
      out.status = HedgeStatus::Unbounded;
      out.value = -std::numeric_limits<double>::infinity();
      out.improving_ray = decode_strategy(market, layout, out.lp.ray);
      break;
    case lp::Status::Infeasible:
      // Cash alone always superhedges a finite table.
      throw lp::NumericFailure("superhedging LP reported infeasible");
  }
  return out;
}

lp::LinearProgram build_primal_mot_lp(const Market& market, std::span<const double> payoff,
                                      bool friction_form) {
  const auto& inst = market.instance();
  const auto& grid = inst.grid();
  const std::size_t T = inst.horizon();
  const std::size_t d = market.dimension();
  auto prog = build_primal_transport_lp(inst, payoff);

  std::vector<std::vector<Term>> lo;
  std::vector<std::vector<Term>> hi;
  for (std::size_t n = 0; n < T; ++n) {
    const std::size_t prefixes = grid.prefix_count(n);
    const std::size_t last = friction_form ? T : n + 1;
    for (std::size_t N = n + 1; N <= last; ++N) {
      for (std::size_t i = 0; i < d; ++i) {
        const double eps = market.epsilons()[i];
        lo.assign(prefixes, {});
        hi.assign(prefixes, {});
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
          const std::size_t p = grid.prefix_index(flat, n);
          const double sn = market.price(flat, n, i);
          const double sN = market.price(flat, N, i);
          if (eps == 0.0) {
            if (sN != sn) lo[p].emplace_back(flat, sN - sn);
          } else {
            lo[p].emplace_back(flat, sN - (1.0 - eps) * sn);
            hi[p].emplace_back(flat, sN - (1.0 + eps) * sn);
          }
        }
        for (std::size_t p = 0; p < prefixes; ++p) {
          if (eps == 0.0) {
            if (!lo[p].empty()) {
              prog.add_constraint(name("mart", {n, N, p, i + 1}), lo[p], Relation::Equal, 0.0);
            }
            continue;
          }
          prog.add_constraint(name("bid", {n, N, p, i + 1}), lo[p], Relation::GreaterEqual, 0.0);
          prog.add_constraint(name("ask", {n, N, p, i + 1}), hi[p], Relation::LessEqual, 0.0);
        }
      }
    }
  }
  return prog;
}

MotPrimalResult primal_mot(const Market& market, const Payoff& payoff, const MotOptions& options) {
  const auto& inst = market.instance();
  const auto& grid = inst.grid();
  const auto table = payoff.expand(inst);
  const auto prog =
      build_primal_mot_lp(market, table, needs_friction_form(market, options.force_friction_form));
  MotPrimalResult out;
  out.lp = lp::solve(prog, options.lp);
  if (out.lp.status == lp::Status::Infeasible) {
    out.status = MotStatus::Infeasible;
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  if (out.lp.status == lp::Status::Unbounded) {
    throw lp::NumericFailure("martingale transport LP reported unbounded over a polytope");
  }
  out.status = MotStatus::Optimal;
  out.value = out.lp.value;
  const std::span<const double> x(out.lp.x);
  out.coupling.emplace(grid.shape(), nonnegative(x.first(grid.size())));
  std::size_t offset = grid.size();
  for (std::size_t n = 0; n < inst.horizon(); ++n) {
    const auto& c = inst.constraint(n);
    if (c.is_exact()) {
      out.mixture.push_back({1.0});
      continue;
    }
    out.mixture.push_back(nonnegative(x.subspan(offset, c.vertex_count())));
    offset += c.vertex_count();
  }
  out.residuals = lp::check_certificates(prog, out.lp);
  return out;
}

double martingale_violation(const Market& market, const Coupling& mu, bool friction_form) {
  const auto& inst = market.instance();
  if (!mu.matches(inst)) throw ShapeMismatch("coupling shape does not match the market grid");
  const auto& grid = inst.grid();
  const std::size_t T = inst.horizon();
  const std::size_t d = market.dimension();
  const auto w = mu.weights();
  double worst = 0.0;
  std::vector<double> drift;
  std::vector<double> base;
  for (std::size_t n = 0; n < T; ++n) {
    const std::size_t last = friction_form ? T : n + 1;
    for (std::size_t N = n + 1; N <= last; ++N) {
      for (std::size_t i = 0; i < d; ++i) {
        drift.assign(grid.prefix_count(n), 0.0);
        base.assign(grid.prefix_count(n), 0.0);
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
          const std::size_t p = grid.prefix_index(flat, n);
          const double sn = market.price(flat, n, i);
          drift[p] += w[flat] * (market.price(flat, N, i) - sn);
          base[p] += w[flat] * sn;
        }
        for (std::size_t p = 0; p < drift.size(); ++p) {
          worst = std::max(worst, std::abs(drift[p]) - market.epsilons()[i] * base[p]);
        }
      }
    }
  }
  return worst;
}

const char* to_string(ArbitrageVerdict::Kind kind) noexcept {
  switch (kind) {
    case ArbitrageVerdict::Kind::NoArbitrage:
      return "NoArbitrage";
    case ArbitrageVerdict::Kind::UniformArbitrage:
      return "UniformArbitrage";
    case ArbitrageVerdict::Kind::ModelIndependentArbitrage:
      return "ModelIndependentArbitrage";
  }
  return "?";
}

ArbitrageVerdict classify_arbitrage(const Market& market, const lp::SolverOptions& options) {
  const auto& inst = market.instance();
  SuperhedgeOptions opts;
  opts.cost_floor = -1.0;
  opts.lp = options;

  ArbitrageVerdict out;
  const auto uniform = superhedge_dual(market, Payoff::constant(inst, 0.0), opts);
  const auto mi = superhedge_dual(market, Payoff::constant(inst, 1.0), opts);
  out.uniform_lp_value = uniform.value;
  out.model_independent_lp_value = mi.value;
  out.uniform_detected = uniform.value < -kPriceTolerance;
  out.model_independent_detected = mi.value <= kPriceTolerance;
  if (out.uniform_detected) out.uniform_strategy = uniform.strategy;

  if (out.model_independent_detected) {
    out.kind = ArbitrageVerdict::Kind::ModelIndependentArbitrage;
    out.strategy = mi.strategy;
    out.note = out.uniform_detected ? "uniform arbitrage also present"
                                    : "no strictly negative-cost strategy found";
  } else if (out.uniform_detected) {
    out.kind = ArbitrageVerdict::Kind::UniformArbitrage;
    out.strategy = uniform.strategy;
    out.note = "uniform arbitrage without a model-independent one indicates numerical trouble";
  }
  if (out.strategy) {
    out.witness_cost = strategy_cost(market, *out.strategy);
    const auto outcome = strategy_outcome(market, *out.strategy);
    out.witness_min_outcome = *std::min_element(outcome.begin(), outcome.end());
  }
  return out;
}

FtapReport ftap_check(const Market& market, const lp::SolverOptions& options) {
  FtapReport out;
  out.verdict = classify_arbitrage(market, options);
  out.no_model_independent_arbitrage = !out.verdict.model_independent_detected;
  out.no_uniform_arbitrage = !out.verdict.uniform_detected;
  MotOptions mot;
  mot.lp = options;
  auto primal = primal_mot(market, Payoff::constant(market.instance(), 0.0), mot);
  out.martingale_measures_exist = primal.status == MotStatus::Optimal;
  out.martingale_witness = std::move(primal.coupling);
  return out;
}

DualityReport superhedging_duality_report(const Market& market, const Payoff& payoff,
                                          const lp::SolverOptions& options) {
  MotOptions mot;
  mot.lp = options;
  auto primal = primal_mot(market, payoff, mot);
  if (primal.status != MotStatus::Optimal) {
    throw PreconditionFailed("no admissible martingale coupling: the market admits arbitrage");
  }
  SuperhedgeOptions sh;
  sh.lp = options;
  auto dual = superhedge_dual(market, payoff, sh);
  if (dual.status != HedgeStatus::Optimal) {
    throw lp::NumericFailure("superhedging LP unbounded although a martingale coupling exists");
  }
  DualityReport out;
  out.primal_value = primal.value;
  out.dual_value = dual.value;
  out.gap = std::abs(dual.value - primal.value);
  out.primal_residuals = primal.residuals;
  out.dual_residuals = dual.residuals;
  out.coupling = std::move(primal.coupling);
  out.dual_solution = std::move(dual.lp.x);
  return out;
}

FrictionlessLimitReport frictionless_limit_check(const Market& market, const Payoff& payoff,
                                                 const std::vector<double>& eps_sequence,
                                                 const lp::SolverOptions& options) {
  SuperhedgeOptions sh;
  sh.lp = options;
  FrictionlessLimitReport out;
  out.epsilons = eps_sequence;
  for (double eps : eps_sequence) {
    out.values.push_back(superhedge_dual(market.with_uniform_epsilon(eps), payoff, sh).value);
  }
  out.frictionless_value = superhedge_dual(market.with_uniform_epsilon(0.0), payoff, sh).value;
  for (std::size_t k = 1; k < out.values.size(); ++k) {
    const double a = out.values[k - 1];
    const double b = out.values[k];
    if (std::isinf(a) && std::isinf(b) && a == b) continue;
    out.worst_increase = std::max(out.worst_increase, b - a);
  }
  if (!out.values.empty()) {
    const double last = out.values.back();
    out.final_gap = last == out.frictionless_value ? 0.0 : std::abs(last - out.frictionless_value);
  }
  return out;
}

}  // namespace motdual
