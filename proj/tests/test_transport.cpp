#include <doctest.h>

#include <cmath>

#include "motdual/properties.hpp"
#include "motdual/transport.hpp"
#include "oracles/transport_vertices.hpp"
#include "support/generators.hpp"
#include "support/membership.hpp"

using namespace motdual;

namespace {

Instance uniform_pair() {
  std::vector<DiscreteAxis> axes{DiscreteAxis::scalar(1, {0, 1}), DiscreteAxis::scalar(2, {0, 1})};
  std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, {0.5, 0.5})),
                                       MarginalConstraint::exact(DiscreteMeasure(2, {0.5, 0.5}))};
  return Instance(std::move(axes), std::move(cons));
}

std::vector<double> diagonal(const Instance& inst) {
  std::vector<double> f(inst.grid().size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = inst.path_point(k, 0) == inst.path_point(k, 1) ? 1.0 : 0.0;
  }
  return f;
}

double dyadic(double v) { return std::round(v * 64.0) / 64.0; }

}  // namespace

TEST_CASE("diagonal payoff on uniform marginals") {
  const auto inst = uniform_pair();
  const auto f = Payoff::dense(diagonal(inst));
  const auto p = primal_transport(inst, f);
  CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.coupling.weights()[0] == doctest::Approx(0.5));
  CHECK(p.coupling.weights()[3] == doctest::Approx(0.5));
  CHECK(p.coupling.weights()[1] == doctest::Approx(0.0));
  const auto d = dual_transport(inst, f);
  CHECK(d.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant payoffs are replicated with cash") {
  testgen::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto inst = t % 2 == 0 ? testgen::random_exact_instance(rng) : testgen::random_hull_instance(rng);
    const double c = testgen::uniform(rng, -3, 3);
    const auto f = Payoff::constant(inst, c);
    CHECK(primal_transport(inst, f).value == doctest::Approx(c).epsilon(1e-12));
    const auto d = dual_transport(inst, f);
    CHECK(d.value == doctest::Approx(c).epsilon(1e-12));
    CHECK(d.m == doctest::Approx(c).epsilon(1e-12));
    for (const auto& g : d.g) {
      for (double v : g) CHECK(v == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("negative Monge cost matches vertex enumeration") {
  std::vector<DiscreteAxis> axes{DiscreteAxis::scalar(1, {0, 1, 2}), DiscreteAxis::scalar(2, {0, 1, 2})};
  const std::vector<double> a{0.25, 0.5, 0.25};
  const std::vector<double> b{0.5, 0.0, 0.5};
  std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, a)),
                                       MarginalConstraint::exact(DiscreteMeasure(2, b))};
  const Instance inst(std::move(axes), std::move(cons));
  std::vector<double> f(9);
  for (std::size_t k = 0; k < 9; ++k) f[k] = -std::abs(inst.path_point(k, 0)[0] - inst.path_point(k, 1)[0]);
  const auto expected = oracle::transport_max(a, b, f);
  REQUIRE(expected.status == oracle::Status::Optimal);
  // Any transport plan moves the middle half unit by one step.
  CHECK(oracle::to_double(expected.value) == doctest::Approx(-0.5));
  CHECK(primal_transport(inst, Payoff::dense(f)).value ==
        doctest::Approx(oracle::to_double(expected.value)).epsilon(1e-12));
}

TEST_CASE("primal agrees with transport-polytope vertices") {
  testgen::Rng rng(11);
  for (int t = 0; t < 60; ++t) {
    std::vector<DiscreteAxis> axes = testgen::random_axes(rng, 2, 4);
    const auto a = testgen::dyadic_simplex(rng, axes[0].size());
    const auto b = testgen::dyadic_simplex(rng, axes[1].size());
    std::vector<MarginalConstraint> cons{MarginalConstraint::exact(DiscreteMeasure(1, a)),
                                         MarginalConstraint::exact(DiscreteMeasure(2, b))};
    const Instance inst(std::move(axes), std::move(cons));
    auto f = testgen::random_table(rng, inst.grid().size());
    for (auto& v : f) v = dyadic(v);
    const auto expected = oracle::transport_max(a, b, f);
    REQUIRE(expected.status == oracle::Status::Optimal);
    const double want = oracle::to_double(expected.value);
    const auto p = primal_transport(inst, Payoff::dense(f));
    CHECK(p.value == doctest::Approx(want).epsilon(1e-9));
    CHECK(std::abs(p.value - want) <= 1e-7);
  }
}

TEST_CASE("separable payoffs price at their marginal integrals") {
  testgen::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testgen::random_exact_instance(rng);
    std::vector<std::vector<double>> legs;
    double total = 0.0;
    for (std::size_t n = 0; n < inst.horizon(); ++n) {
      legs.push_back(testgen::random_table(rng, inst.axis(n).size(), 0.0, 2.0));
      total += inst.constraint(n).measure().integrate(legs.back());
    }
    const auto d = dual_transport(inst, Payoff::separable(legs));
    CHECK(d.value == doctest::Approx(total).epsilon(1e-9));

    std::vector<std::vector<double>> shorts = legs;
    for (auto& g : shorts) {
      for (auto& v : g) v = -v;
    }
    CHECK(dual_equivalent_split(inst, Payoff::separable(shorts)) == doctest::Approx(-total).epsilon(1e-9));
  }
}

TEST_CASE("split dual equals the standard dual") {
  testgen::Rng rng(17);
  const auto pair = uniform_pair();
  CHECK(dual_equivalent_split(pair, Payoff::dense(diagonal(pair))) == doctest::Approx(1.0));
  for (int t = 0; t < 50; ++t) {
    const auto inst = testgen::random_exact_instance(rng, 2, 5);
    const auto f = Payoff::dense(testgen::random_table(rng, inst.grid().size()));
    const double standard = dual_transport(inst, f).value;
    CHECK(std::abs(dual_equivalent_split(inst, f) - standard) <= 1e-8);
  }
}

TEST_CASE("dual solutions satisfy their own invariants") {
  testgen::Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    const auto inst = t % 2 == 0 ? testgen::random_exact_instance(rng) : testgen::random_hull_instance(rng);
    const auto table = testgen::random_table(rng, inst.grid().size());
    const auto d = dual_transport(inst, Payoff::dense(table));
    for (const auto& g : d.g) {
      for (double v : g) CHECK(v >= 0.0);
    }
    CHECK(d.superreplication_slack(inst, table) >= -1e-8);
    CHECK(std::abs(d.value - d.repriced_cost(inst)) <= 1e-9);
    CHECK(d.residuals.within(1e-8));
  }
}

TEST_CASE("zero duality gap on random instances") {
  testgen::Rng rng(29);
  for (int t = 0; t < 60; ++t) {
    const auto inst = t % 2 == 0 ? testgen::random_exact_instance(rng) : testgen::random_hull_instance(rng);
    const auto f = Payoff::dense(testgen::random_table(rng, inst.grid().size()));
    const auto r = transport_duality_report(inst, f);
    CHECK(r.within(1e-7));
    CHECK(r.primal_residuals.within(1e-8));
    CHECK(r.dual_residuals.within(1e-8));
  }
}

TEST_CASE("feasible couplings are bounded by the dual value") {
  testgen::Rng rng(31);
  int checked = 0;
  while (checked < 200) {
    const auto inst = checked % 2 == 0 ? testgen::random_exact_instance(rng) : testgen::random_hull_instance(rng);
    const auto f = Payoff::dense(testgen::random_table(rng, inst.grid().size()));
    const double dual = dual_transport(inst, f).value;
    for (int k = 0; k < 10; ++k, ++checked) {
      const auto mu = testgen::random_feasible_coupling(rng, inst);
      REQUIRE(conjugate_membership(inst, mu).is_zero());
      CHECK(evaluate_expectation(inst, mu, f) <= dual + 1e-8);
    }
  }
}

TEST_CASE("conjugate membership examples") {
  const auto inst = uniform_pair();
  const auto product = Coupling::product({inst.constraint(0).measure(), inst.constraint(1).measure()});
  CHECK(conjugate_membership(inst, product).is_zero());

  std::vector<double> doubled(product.weights().begin(), product.weights().end());
  for (auto& w : doubled) w *= 2.0;
  const auto scaled = conjugate_membership(inst, Coupling(product.shape(), doubled));
  CHECK(scaled.kind == ConjugateValue::Kind::PositiveInfinity);
  CHECK(scaled.witness == ConjugateValue::Witness::Constant);
  CHECK(scaled.constant * (2.0 - 1.0) > 0.0);

  const Coupling skewed({2, 2}, {0.45, 0.45, 0.05, 0.05});
  const auto sep = conjugate_membership(inst, skewed);
  REQUIRE(sep.kind == ConjugateValue::Kind::PositiveInfinity);
  REQUIRE(sep.witness == ConjugateValue::Witness::SeparatingVector);
  CHECK(sep.axis == 0);
  CHECK(sep.g[0] > 0.0);
  CHECK(sep.g[1] == 0.0);
  const double lhs = marginal_of(skewed, 0).integrate(sep.g);
  const double rhs = sublinear_price(inst.constraint(0), sep.g);
  CHECK(lhs > rhs);
  CHECK(sep.excess == doctest::Approx(lhs - rhs));
}

TEST_CASE("conjugate membership matches direct constraint checks") {
  testgen::Rng rng(37);
  int off = 0;
  for (int t = 0; t < 200; ++t) {
    const auto inst = testgen::random_hull_instance(rng, 3, 4, 3, true);
    const auto mu = testgen::perturbed_coupling(rng, testgen::random_feasible_coupling(rng, inst), t);
    const bool member = testgen::in_constraint_set(inst, mu);
    const auto got = conjugate_membership(inst, mu);
    CHECK(got.is_zero() == member);
    if (!member) {
      ++off;
      REQUIRE(!got.is_zero());
      if (got.witness == ConjugateValue::Witness::Constant) {
        CHECK(got.constant * (mu.total_mass() - 1.0) > 0.0);
      } else {
        const double lhs = marginal_of(mu, got.axis).integrate(got.g);
        CHECK(lhs - sublinear_price(inst.constraint(got.axis), got.g) > 0.0);
        for (double v : got.g) CHECK(v >= 0.0);
      }
    }
  }
  CHECK(off >= 80);
}

TEST_CASE("representation holds on basis payoffs and constants") {
  const auto inst = uniform_pair();
  std::vector<Payoff> basis;
  for (std::size_t z = 0; z < inst.grid().size(); ++z) {
    std::vector<double> f(inst.grid().size(), 0.0);
    f[z] = 1.0;
    basis.push_back(Payoff::dense(f));
  }
  const auto rep = verify_representation(inst, basis);
  CHECK(rep.entries.size() == 4);
  CHECK(rep.max_gap <= 1e-8);
  CHECK(rep.entries[0].primal == doctest::Approx(0.5));

  const auto consts = verify_representation(inst, {Payoff::constant(inst, 2.5), Payoff::constant(inst, -1.0)});
  CHECK(consts.max_gap <= 1e-12);
}

TEST_CASE("representation on random three-axis instances") {
  testgen::Rng rng(41);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<DiscreteAxis> axes = testgen::random_axes(rng, 3, 4);
    std::vector<MarginalConstraint> cons;
    for (const auto& a : axes) {
      cons.push_back(MarginalConstraint::exact(DiscreteMeasure(a.index(), testgen::simplex(rng, a.size()))));
    }
    const Instance inst(std::move(axes), std::move(cons));
    std::vector<Payoff> fs;
    for (int k = 0; k < 5; ++k) fs.push_back(Payoff::dense(testgen::random_table(rng, inst.grid().size())));
    worst = std::max(worst, verify_representation(inst, fs).max_gap);
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("dual value map is increasing and sublinear") {
  testgen::Rng rng(43);
  const auto inst = uniform_pair();
  const auto f = diagonal(inst);
  auto phi = [&](const std::vector<double>& t) { return dual_transport(inst, Payoff::dense(t)).value; };
  std::vector<double> shifted = f;
  std::vector<double> doubled = f;
  for (auto& v : shifted) v += 1.0;
  for (auto& v : doubled) v *= 2.0;
  CHECK(phi(shifted) == doctest::Approx(phi(f) + 1.0).epsilon(1e-12));
  CHECK(phi(doubled) == doctest::Approx(2.0 * phi(f)).epsilon(1e-12));

  for (int t = 0; t < 6; ++t) {
    const auto i = t % 2 == 0 ? testgen::random_exact_instance(rng) : testgen::random_hull_instance(rng);
    const auto rep = functional_properties_check(i, 10, 100 + t);
    CHECK(rep.trials == 10);
    CHECK(rep.worst() <= 1e-8);
  }
}

TEST_CASE("shape mismatch is rejected") {
  const auto inst = uniform_pair();
  CHECK_THROWS_AS((void)conjugate_membership(inst, Coupling({3, 2}, std::vector<double>(6, 1.0 / 6))), ShapeMismatch);
}
