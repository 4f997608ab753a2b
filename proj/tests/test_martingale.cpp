#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "motdual/martingale.hpp"
#include "motdual/properties.hpp"
#include "support/generators.hpp"

using namespace motdual;

namespace {

/// S_1 = 1 surely, S_2 uniform on {0, 2}.
Market spread_market(double eps = 0.0) {
  std::vector<DiscreteAxis> axes{DiscreteAxis::scalar(1, {1.0}), DiscreteAxis::scalar(2, {0.0, 2.0})};
  std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, {1.0})),
                                       MarginalConstraint::exact(DiscreteMeasure(2, {0.5, 0.5}))};
  return Market(Instance(std::move(axes), std::move(cons)), {1.0}, {eps});
}

Market barycenter_market(double s0, double eps) {
  std::vector<DiscreteAxis> axes{DiscreteAxis::scalar(1, {0.0, 2.0})};
  std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, {0.5, 0.5}))};
  return Market(Instance(std::move(axes), std::move(cons)), {s0}, {eps});
}

Payoff straddle() { return Payoff::named({.generator = "straddle", .n = 2, .m = 1}); }

double min_gap(const std::vector<double>& outcome, const std::vector<double>& f) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) worst = std::min(worst, outcome[k] - f[k]);
  return worst;
}

Market random_cost_market(testgen::Rng& rng, std::size_t max_horizon, bool frictionless = false) {
  const std::size_t T = testgen::pick(rng, 1, max_horizon);
  const std::size_t d = testgen::pick(rng, 1, 2);
  auto eps = frictionless ? std::vector<double>(d, 0.0) : testgen::random_epsilons(rng, d);
  return testgen::martingale_market(rng, T, d, std::move(eps));
}

}  // namespace

TEST_CASE("market validation") {
  CHECK_THROWS_AS(spread_market(-0.1), InvariantViolation);
  const auto m = spread_market();
  CHECK_THROWS((void)Market(m.instance(), {-1.0}, {0.0}));
  CHECK_THROWS((void)Market(m.instance(), {1.0, 1.0}, {0.0}));
  CHECK(m.frictionless());
  CHECK(!m.with_uniform_epsilon(0.1).frictionless());
  CHECK(m.price(0, 0, 0) == 1.0);
  CHECK(m.price(1, 2, 0) == 2.0);
}

TEST_CASE("straddle on the spread market") {
  const auto market = spread_market();
  const auto d = superhedge_dual(market, straddle());
  REQUIRE(d.status == HedgeStatus::Optimal);
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto p = primal_mot(market, straddle());
  REQUIRE(p.status == MotStatus::Optimal);
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(p.coupling);
  CHECK(p.coupling->weights()[0] == doctest::Approx(0.5));
  CHECK(p.coupling->weights()[1] == doctest::Approx(0.5));

  const auto r = superhedging_duality_report(market, straddle());
  CHECK(r.gap <= 1e-12);

  const auto zero = superhedging_duality_report(market, Payoff::constant(market.instance(), 0.0));
  CHECK(std::abs(zero.primal_value) <= 1e-12);
  CHECK(std::abs(zero.dual_value) <= 1e-12);
}

TEST_CASE("superhedging strategies dominate the payoff and cost their value") {
  testgen::Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto market = random_cost_market(rng, 3);
    const auto& inst = market.instance();
    const auto table = testgen::random_table(rng, inst.grid().size());
    const auto d = superhedge_dual(market, Payoff::dense(table));
    REQUIRE(d.status == HedgeStatus::Optimal);
    CHECK(d.residuals.within(1e-8));
    CHECK(strategy_cost(market, d.strategy) == doctest::Approx(d.value).epsilon(1e-9));
    CHECK(min_gap(strategy_outcome(market, d.strategy), table) >= -1e-8);
  }
}

TEST_CASE("cash payoffs cost their constant") {
  testgen::Rng rng(9);
  for (int t = 0; t < 10; ++t) {
    const auto market = testgen::martingale_market(rng, 2, 1, {0.01});
    const double c = testgen::uniform(rng, -2, 2);
    CHECK(superhedge_dual(market, Payoff::constant(market.instance(), c)).value ==
          doctest::Approx(c).epsilon(1e-9));
  }
}

TEST_CASE("large costs make dynamic trading useless for a forward") {
  const auto market = spread_market(0.5);
  const auto f = Payoff::named({.generator = "forward", .strike = 1.0, .n = 2});
  const auto full = superhedge_dual(market, f);
  SuperhedgeOptions statics;
  statics.static_only = true;
  const auto restricted = superhedge_dual(market, f, statics);
  CHECK(full.value == doctest::Approx(restricted.value).epsilon(1e-12));
  CHECK(full.value == doctest::Approx(0.0));
}

TEST_CASE("barycenter obstruction and bid-ask relief") {
  const auto zero = Payoff::constant(barycenter_market(0.9, 0.0).instance(), 0.0);
  const auto tight = primal_mot(barycenter_market(0.9, 0.0), zero);
  CHECK(tight.status == MotStatus::Infeasible);
  CHECK(std::isinf(tight.value));

  const auto wide_market = barycenter_market(0.9, 0.2);
  const auto wide = primal_mot(wide_market, zero);
  REQUIRE(wide.status == MotStatus::Optimal);
  REQUIRE(wide.coupling);
  // 0.72 <= E[S_1] = 1 <= 1.08.
  CHECK(martingale_violation(wide_market, *wide.coupling, true) <= 1e-12);
  CHECK(martingale_violation(barycenter_market(0.9, 0.0), *wide.coupling, true) > 0.09);
}

TEST_CASE("arbitrage classification examples") {
  const auto free = classify_arbitrage(spread_market());
  CHECK(free.kind == ArbitrageVerdict::Kind::NoArbitrage);
  CHECK(!free.strategy);

  const auto arb = classify_arbitrage(barycenter_market(0.9, 0.0));
  CHECK(arb.kind == ArbitrageVerdict::Kind::ModelIndependentArbitrage);
  REQUIRE(arb.strategy);
  CHECK(arb.witness_cost <= 1e-9);
  CHECK(arb.witness_min_outcome > 0.0);
  const auto market = barycenter_market(0.9, 0.0);
  const auto outcome = strategy_outcome(market, *arb.strategy);
  CHECK(*std::min_element(outcome.begin(), outcome.end()) == doctest::Approx(arb.witness_min_outcome));
  CHECK(strategy_cost(market, *arb.strategy) == doctest::Approx(arb.witness_cost));
  if (arb.uniform_detected) {
    REQUIRE(arb.uniform_strategy);
    CHECK(strategy_cost(market, *arb.uniform_strategy) < -1e-9);
    const auto u = strategy_outcome(market, *arb.uniform_strategy);
    CHECK(*std::min_element(u.begin(), u.end()) >= -1e-9);
  }
  CHECK(std::string(to_string(arb.kind)) == "ModelIndependentArbitrage");
}

TEST_CASE("reversed convex order") {
  std::vector<DiscreteAxis> axes{DiscreteAxis::scalar(1, {0.0, 2.0}), DiscreteAxis::scalar(2, {1.0})};
  std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, {0.5, 0.5})),
                                       MarginalConstraint::exact(DiscreteMeasure(2, {1.0}))};
  const Market market(Instance(std::move(axes), std::move(cons)), {1.0}, {0.0});
  CHECK(!check_convex_order(market.instance(), market.s0()).passed());
  CHECK(primal_mot(market, Payoff::constant(market.instance(), 0.0)).status == MotStatus::Infeasible);
  const auto report = ftap_check(market);
  CHECK(report.verdict.kind != ArbitrageVerdict::Kind::NoArbitrage);
  CHECK(report.equivalent());
  CHECK(!report.martingale_measures_exist);
}

TEST_CASE("fundamental theorem on random markets") {
  testgen::Rng rng(13);
  int free = 0;
  for (int t = 0; t < 60; ++t) {
    const auto market = testgen::random_market(rng);
    const auto report = ftap_check(market);
    CHECK(report.equivalent());
    if (!report.arbitrage_free()) continue;
    ++free;
    REQUIRE(report.martingale_witness);
    CHECK(martingale_violation(market, *report.martingale_witness, !market.frictionless()) <= 1e-9);
    const auto f = Payoff::dense(testgen::random_table(rng, market.instance().grid().size()));
    CHECK(superhedging_duality_report(market, f).within(1e-7));
  }
  CHECK(free >= 15);
}

TEST_CASE("convex-order markets are arbitrage free") {
  testgen::Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto market = testgen::martingale_market(rng, testgen::pick(rng, 1, 3), 1, {0.0});
    CHECK(check_convex_order(market.instance(), market.s0()).passed());
    const auto report = ftap_check(market);
    CHECK(report.no_model_independent_arbitrage);
    CHECK(report.no_uniform_arbitrage);
    CHECK(report.martingale_measures_exist);
  }
}

TEST_CASE("wide bid-ask bands admit the product measure") {
  testgen::Rng rng(19);
  for (int t = 0; t < 10; ++t) {
    std::vector<DiscreteAxis> axes;
    std::vector<MarginalConstraint> cons;
    std::vector<DiscreteMeasure> laws;
    for (int n = 1; n <= 2; ++n) {
      std::vector<double> pts;
      for (std::size_t j = 0; j < testgen::pick(rng, 1, 3); ++j) pts.push_back(0.5 + 0.25 * j);
      axes.push_back(DiscreteAxis::scalar(n, pts));
      laws.emplace_back(n, testgen::simplex(rng, pts.size()));
      cons.push_back(MarginalConstraint::exact(laws.back()));
    }
    const Market market(Instance(std::move(axes), std::move(cons)), {1.0}, {2.0});
    CHECK(martingale_violation(market, Coupling::product(laws), true) <= 0.0);
    const auto report = ftap_check(market);
    CHECK(report.arbitrage_free());
  }
}

TEST_CASE("hull marginals keep duality") {
  testgen::Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const auto base = random_cost_market(rng, 2);
    const auto market = testgen::with_hull_marginals(rng, base);
    const auto f = Payoff::dense(testgen::random_table(rng, market.instance().grid().size()));
    const auto r = superhedging_duality_report(market, f);
    CHECK(r.within(1e-7));
    CHECK(r.dual_value >= superhedge_dual(base, f).value - 1e-8);
  }
}

TEST_CASE("weak duality across optimizers") {
  testgen::Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    const auto market = random_cost_market(rng, 3);
    const auto n = market.instance().grid().size();
    const auto p = primal_mot(market, Payoff::dense(testgen::random_table(rng, n)));
    REQUIRE(p.status == MotStatus::Optimal);
    const auto f = Payoff::dense(testgen::random_table(rng, n));
    const auto d = superhedge_dual(market, f);
    CHECK(evaluate_expectation(market.instance(), *p.coupling, f) <= strategy_cost(market, d.strategy) + 1e-8);
  }
}

TEST_CASE("zero costs reduce to the frictionless program") {
  testgen::Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const auto market = random_cost_market(rng, 3, true);
    const auto table = testgen::random_table(rng, market.instance().grid().size());
    const auto f = Payoff::dense(table);
    SuperhedgeOptions forced;
    forced.force_friction_form = true;
    CHECK(std::abs(superhedge_dual(market, f).value - superhedge_dual(market, f, forced).value) <= 1e-10);
    MotOptions mforced;
    mforced.force_friction_form = true;
    CHECK(std::abs(primal_mot(market, f).value - primal_mot(market, f, mforced).value) <= 1e-10);

    // Every frictionless column reappears verbatim on the path rows of the cost form.
    StrategyLayout plain_layout;
    StrategyLayout cost_layout;
    const auto plain = build_superhedge_lp(market, table, {}, &plain_layout);
    const auto cost = build_superhedge_lp(market, table, forced, &cost_layout);
    REQUIRE(!plain_layout.friction_form);
    REQUIRE(cost_layout.friction_form);
    REQUIRE(plain_layout.blocks.size() == 1);
    const std::size_t last = cost_layout.blocks.size() - 1;
    std::vector<std::size_t> map(plain.num_variables());
    std::iota(map.begin(), map.end(), 0);
    for (std::size_t n = 0; n < plain_layout.blocks[0].h_offset.size(); ++n) {
      const std::size_t width = (n + 1 < plain_layout.blocks[0].h_offset.size()
                                     ? plain_layout.blocks[0].h_offset[n + 1]
                                     : plain.num_variables()) -
                                plain_layout.blocks[0].h_offset[n];
      for (std::size_t q = 0; q < width; ++q) {
        map[plain_layout.blocks[0].h_offset[n] + q] = cost_layout.blocks[last].h_offset[n] + q;
      }
    }
    const std::size_t paths = market.instance().grid().size();
    bool identical = true;
    for (std::size_t j = 0; j < plain.num_variables(); ++j) {
      identical = identical && plain.variables()[j].cost == cost.variables()[map[j]].cost;
      for (std::size_t k = 0; k < paths; ++k) {
        identical = identical && plain.constraints()[plain_layout.first_path_row + k].coefficients[j] ==
                                     cost.constraints()[cost_layout.first_path_row + k].coefficients[map[j]];
      }
    }
    CHECK(identical);
    for (const auto& u : cost_layout.blocks[last].u_offset) {
      for (std::size_t k = 0; k < paths; ++k) {
        CHECK(cost.constraints()[cost_layout.first_path_row + k].coefficients[u] == 0.0);
      }
    }
  }
}

TEST_CASE("holdings are indexed by the observed prefix only") {
  testgen::Rng rng(37);
  const auto market = testgen::martingale_market(rng, 3, 1, {0.1});
  const auto& inst = market.instance();
  const auto table = testgen::random_table(rng, inst.grid().size());
  StrategyLayout layout;
  const auto prog = build_superhedge_lp(market, table, {}, &layout);

  for (std::size_t k = 1; k < 3; ++k) {
    // Reverse the points of every axis from position k on, along with their laws and payoff.
    std::vector<DiscreteAxis> axes;
    std::vector<MarginalConstraint> cons;
    for (std::size_t n = 0; n < 3; ++n) {
      auto pts = inst.axis(n).points();
      auto w = std::vector<double>(inst.constraint(n).measure().weights().begin(),
                                   inst.constraint(n).measure().weights().end());
      if (n >= k) {
        std::reverse(pts.begin(), pts.end());
        std::reverse(w.begin(), w.end());
      }
      axes.emplace_back(inst.axis(n).index(), pts);
      cons.push_back(MarginalConstraint::exact(DiscreteMeasure(inst.axis(n).index(), w)));
    }
    const Market permuted(Instance(std::move(axes), std::move(cons)), market.s0(), market.epsilons());
    const auto& grid = inst.grid();
    auto relabel = [&](std::size_t flat) {
      auto idx = grid.multi_index(flat);
      for (std::size_t n = k; n < 3; ++n) idx[n] = grid.shape()[n] - 1 - idx[n];
      return grid.flat_index(idx);
    };
    std::vector<double> moved(table.size());
    for (std::size_t flat = 0; flat < table.size(); ++flat) moved[relabel(flat)] = table[flat];
    StrategyLayout permuted_layout;
    const auto other = build_superhedge_lp(permuted, moved, {}, &permuted_layout);

    bool unchanged = true;
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
      const auto& row = prog.constraints()[layout.first_path_row + flat].coefficients;
      const auto& twin = other.constraints()[permuted_layout.first_path_row + relabel(flat)].coefficients;
      for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
        for (std::size_t n = 0; n <= k && n < layout.blocks[b].horizon; ++n) {
          const std::size_t p = grid.prefix_index(flat, n);
          unchanged = unchanged && p == grid.prefix_index(relabel(flat), n);
          unchanged = unchanged && layout.h_column(b, n, p, 0) == permuted_layout.h_column(b, n, p, 0);
          if (n < k) {
            unchanged = unchanged && row[layout.h_column(b, n, p, 0)] == twin[layout.h_column(b, n, p, 0)];
            unchanged = unchanged && row[layout.u_column(b, n, p, 0)] == twin[layout.u_column(b, n, p, 0)];
          }
        }
      }
    }
    CHECK(unchanged);
    CHECK(superhedge_dual(permuted, Payoff::dense(moved)).value ==
          doctest::Approx(superhedge_dual(market, Payoff::dense(table)).value).epsilon(1e-9));
  }
}

TEST_CASE("frictionless limit") {
  const auto market = spread_market();
  const auto rep = frictionless_limit_check(market, straddle(), {0.1, 0.01, 0.001, 0.0});
  CHECK(rep.values.size() == 4);
  CHECK(rep.monotone(1e-9));
  CHECK(rep.values.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.final_gap <= 1e-10);

  // A static leg on the last axis needs no trading, so costs do not matter.
  const auto legs = Payoff::separable({{0.0}, {0.0, 2.0}});
  const auto flat = frictionless_limit_check(market, legs, {0.1, 0.01, 0.001, 0.0});
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

  testgen::Rng rng(41);
  for (int t = 0; t < 15; ++t) {
    const auto m = random_cost_market(rng, 3, true);
    const auto f = Payoff::dense(testgen::random_table(rng, m.instance().grid().size()));
    const auto r = frictionless_limit_check(m, f, {0.1, 0.01, 0.001, 0.0});
    CHECK(r.monotone(1e-9));
    CHECK(r.final_gap <= 1e-9);
  }
}

TEST_CASE("superhedging value map is increasing and translation covariant") {
  testgen::Rng rng(43);
  for (int t = 0; t < 4; ++t) {
    const auto market = testgen::martingale_market(rng, 2, 1, testgen::random_epsilons(rng, 1));
    const ValueMap phi = [&](std::span<const double> f) {
      return superhedge_dual(market, Payoff::dense(std::vector<double>(f.begin(), f.end()))).value;
    };
    const auto rep = check_functional_properties(phi, market.instance().grid().size(), 10, 200 + t);
    CHECK(rep.worst() <= 1e-8);
  }
}
