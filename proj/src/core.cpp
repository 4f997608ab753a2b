#include "motdual/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace motdual {

namespace {

std::string axis_label(int index) { return "axis " + std::to_string(index); }

}  // namespace

DiscreteAxis::DiscreteAxis(int index, std::vector<Point> points, bool allow_negative)
    : index_(index), points_(std::move(points)), dimension_(0), allow_negative_(allow_negative) {
  if (index_ < 1) {
    throw InvariantViolation("DiscreteAxis.index", "time index must be >= 1");
  }
  if (points_.empty()) {
    throw InvariantViolation("DiscreteAxis.non_empty", axis_label(index_) + " has no points");
  }
  dimension_ = points_.front().size();
  if (dimension_ == 0) {
    throw InvariantViolation("DiscreteAxis.dimension", axis_label(index_) + " has d = 0");
  }
  for (const auto& p : points_) {
    if (p.size() != dimension_) {
      throw InvariantViolation("DiscreteAxis.dimension",
                               axis_label(index_) + " mixes point dimensions");
    }
    for (double v : p) {
      if (!std::isfinite(v)) {
        throw InvariantViolation("DiscreteAxis.finite", axis_label(index_) + " has non-finite point");
      }
      if (!allow_negative_ && v < 0.0) {
        throw InvariantViolation("DiscreteAxis.nonnegative",
                                 axis_label(index_) + " has a negative coordinate");
      }
    }
  }
  std::set<Point> seen(points_.begin(), points_.end());
  if (seen.size() != points_.size()) {
    throw InvariantViolation("DiscreteAxis.distinct", axis_label(index_) + " repeats a point");
  }
}

DiscreteAxis DiscreteAxis::scalar(int index, const std::vector<double>& values,
                                  bool allow_negative) {
  std::vector<Point> points;
  points.reserve(values.size());
  for (double v : values) points.push_back(Point{v});
  return DiscreteAxis(index, std::move(points), allow_negative);
}

DiscreteMeasure::DiscreteMeasure(int axis_index, std::vector<double> weights)
    : axis_index_(axis_index), weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvariantViolation("DiscreteMeasure.nonnegative",
                               "weights must be finite and >= 0 on " + axis_label(axis_index_));
    }
  }
}

double DiscreteMeasure::total_mass() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

bool DiscreteMeasure::is_probability() const noexcept {
  return std::abs(total_mass() - 1.0) <= kProbabilityTolerance;
}

double DiscreteMeasure::integrate(std::span<const double> g) const {
  if (g.size() != weights_.size()) {
    throw ShapeMismatch("integrand has " + std::to_string(g.size()) + " entries, measure has " +
                        std::to_string(weights_.size()));
  }
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += g[j] * weights_[j];
  return s;
}

MarginalConstraint::MarginalConstraint(ConstraintKind kind, std::vector<DiscreteMeasure> measures)
    : kind_(kind), measures_(std::move(measures)) {
  if (measures_.empty()) {
    throw InvariantViolation("MarginalConstraint.non_empty", "no measures given");
  }
  const auto size = measures_.front().size();
  const auto axis = measures_.front().axis_index();
  for (const auto& mu : measures_) {
    if (mu.size() != size || mu.axis_index() != axis) {
      throw InvariantViolation("MarginalConstraint.common_axis",
                               "all measures must live on the same axis");
    }
    if (!mu.is_probability()) {
      throw InvariantViolation("DiscreteMeasure.is_probability",
                               "marginal on " + axis_label(axis) + " has mass " +
                                   std::to_string(mu.total_mass()));
    }
  }
}

MarginalConstraint MarginalConstraint::exact(DiscreteMeasure measure) {
  std::vector<DiscreteMeasure> ms;
  ms.push_back(std::move(measure));
  return MarginalConstraint(ConstraintKind::Exact, std::move(ms));
}

MarginalConstraint MarginalConstraint::convex_hull(std::vector<DiscreteMeasure> vertices) {
  return MarginalConstraint(ConstraintKind::ConvexHull, std::move(vertices));
}

const DiscreteMeasure& MarginalConstraint::measure() const {
  if (kind_ != ConstraintKind::Exact) {
    throw Unsupported("measure() requires an Exact constraint");
  }
  return measures_.front();
}

ProductGrid::ProductGrid(std::vector<std::size_t> shape) : shape_(std::move(shape)), size_(1) {
  strides_.assign(shape_.size(), 1);
  for (std::size_t k = shape_.size(); k-- > 0;) {
    strides_[k] = size_;
    if (shape_[k] == 0) throw InvariantViolation("ProductGrid.shape", "zero-length axis");
    size_ *= shape_[k];
  }
}

std::vector<std::size_t> ProductGrid::multi_index(std::size_t flat) const {
  std::vector<std::size_t> idx(shape_.size());
  for (std::size_t k = 0; k < shape_.size(); ++k) idx[k] = coordinate(flat, k);
  return idx;
}

std::size_t ProductGrid::flat_index(std::span<const std::size_t> multi) const {
  if (multi.size() != shape_.size()) throw ShapeMismatch("multi-index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    if (multi[k] >= shape_[k]) throw std::out_of_range("multi-index coordinate out of range");
    flat += multi[k] * strides_[k];
  }
  return flat;
}

std::size_t ProductGrid::prefix_count(std::size_t len) const {
  std::size_t c = 1;
  for (std::size_t k = 0; k < len; ++k) c *= shape_[k];
  return c;
}

namespace {

std::vector<std::size_t> shape_of(const std::vector<DiscreteAxis>& axes) {
  std::vector<std::size_t> shape;
  shape.reserve(axes.size());
  for (const auto& a : axes) shape.push_back(a.size());
  return shape;
}

}  // namespace

Instance::Instance(std::vector<DiscreteAxis> axes, std::vector<MarginalConstraint> constraints,
                   std::string label)
    : axes_(std::move(axes)),
      constraints_(std::move(constraints)),
      label_(std::move(label)),
      grid_(shape_of(axes_)) {
  if (axes_.empty()) throw InvariantViolation("Instance.horizon", "at least one axis required");
  if (axes_.size() != constraints_.size()) {
    throw InvariantViolation("Instance.constraint_count",
                             std::to_string(axes_.size()) + " axes but " +
                                 std::to_string(constraints_.size()) + " constraints");
  }
  for (std::size_t n = 0; n < axes_.size(); ++n) {
    if (axes_[n].dimension() != axes_.front().dimension()) {
      throw InvariantViolation("Instance.dimension", "axes disagree on asset dimension");
    }
    if (constraints_[n].support_size() != axes_[n].size()) {
      throw InvariantViolation("Instance.constraint_shape",
                               "constraint " + std::to_string(n + 1) + " has " +
                                   std::to_string(constraints_[n].support_size()) +
                                   " weights for " + std::to_string(axes_[n].size()) + " points");
    }
  }
}

bool Instance::all_exact() const noexcept {
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [](const MarginalConstraint& c) { return c.is_exact(); });
}

Coupling::Coupling(std::vector<std::size_t> shape, std::vector<double> weights)
    : grid_(std::move(shape)), weights_(std::move(weights)) {
  if (weights_.size() != grid_.size()) {
    throw ShapeMismatch("coupling has " + std::to_string(weights_.size()) +
                        " weights for a grid of " + std::to_string(grid_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvariantViolation("Coupling.nonnegative", "coupling weights must be finite and >= 0");
    }
  }
}

Coupling Coupling::product(const std::vector<DiscreteMeasure>& measures) {
  std::vector<std::size_t> shape;
  for (const auto& m : measures) shape.push_back(m.size());
  ProductGrid grid(shape);
  std::vector<double> w(grid.size(), 1.0);
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    for (std::size_t n = 0; n < measures.size(); ++n) {
      w[flat] *= measures[n].weight(grid.coordinate(flat, n));
    }
  }
  return Coupling(std::move(shape), std::move(w));
}

double Coupling::total_mass() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

DiscreteMeasure marginal_of(const Coupling& coupling, std::size_t axis) {
  const auto& grid = coupling.grid();
  if (axis >= grid.rank()) {
    throw std::out_of_range("axis " + std::to_string(axis) + " out of range for rank " +
                            std::to_string(grid.rank()));
  }
  std::vector<double> marginal(grid.shape()[axis], 0.0);
  const auto w = coupling.weights();
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    marginal[grid.coordinate(flat, axis)] += w[flat];
  }
  return DiscreteMeasure(static_cast<int>(axis) + 1, std::move(marginal));
}

double evaluate_expectation(const Instance& instance, const Coupling& coupling,
                            const Payoff& payoff) {
  if (!coupling.matches(instance)) {
    throw ShapeMismatch("coupling shape does not match the instance grid");
  }
  if (const auto* sep = std::get_if<SeparableLegs>(&payoff.representation())) {
    if (sep->legs.size() != instance.horizon()) {
      throw ShapeMismatch("separable payoff needs one leg per axis");
    }
    double total = 0.0;
    for (std::size_t n = 0; n < instance.horizon(); ++n) {
      total += marginal_of(coupling, n).integrate(sep->legs[n]);
    }
    return total;
  }
  const auto table = payoff.expand(instance);
  const auto w = coupling.weights();
  double total = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) total += table[k] * w[k];
  return total;
}

double sublinear_price(const MarginalConstraint& constraint, std::span<const double> g) {
  if (g.size() != constraint.support_size()) {
    throw ShapeMismatch("price vector has " + std::to_string(g.size()) + " entries, axis has " +
                        std::to_string(constraint.support_size()));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& mu : constraint.measures()) best = std::max(best, mu.integrate(g));
  return best;
}

bool translation_check(const MarginalConstraint& constraint, std::span<const double> g, double c) {
  std::vector<double> shifted(g.begin(), g.end());
  for (double& v : shifted) v += c;
  return std::abs(sublinear_price(constraint, shifted) - (sublinear_price(constraint, g) + c)) <=
         kPriceTolerance;
}

std::vector<std::size_t> tightness_certificate(const MarginalConstraint& constraint, double m,
                                               double eps) {
  if (!(m > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("tightness_certificate requires m > 0 and eps > 0");
  }
  const std::size_t size = constraint.support_size();
  std::vector<double> worst(size, 0.0);
  for (const auto& mu : constraint.measures()) {
    for (std::size_t j = 0; j < size; ++j) worst[j] = std::max(worst[j], mu.weight(j));
  }
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return worst[a] > worst[b]; });

  std::vector<double> indicator(size, m);
  std::vector<std::size_t> certificate;
  for (std::size_t k = 0;; ++k) {
    if (sublinear_price(constraint, indicator) <= eps) return certificate;
    // the full axis leaves an empty complement, so k < size here
    indicator[order[k]] = 0.0;
    certificate.push_back(order[k]);
  }
}

ConvexOrderReport check_convex_order(const Instance& instance, const Point& s0) {
  if (instance.dimension() != 1) {
    throw Unsupported("convex-order diagnostic is only defined for d = 1");
  }
  if (!instance.all_exact()) {
    throw Unsupported("convex-order diagnostic requires Exact constraints");
  }
  if (s0.size() != 1) throw ShapeMismatch("s0 must have one coordinate");

  ConvexOrderReport report;
  std::vector<double> strikes{s0[0]};
  for (const auto& axis : instance.axes()) {
    for (const auto& p : axis.points()) strikes.push_back(p[0]);
  }
  std::sort(strikes.begin(), strikes.end());
  strikes.erase(std::unique(strikes.begin(), strikes.end()), strikes.end());

  report.barycenters_match = true;
  for (std::size_t n = 0; n < instance.horizon(); ++n) {
    const auto& mu = instance.constraint(n).measure();
    double mean = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      mean += mu.weight(j) * instance.axis(n).coordinate(j, 0);
    }
    report.barycenters.push_back(mean);
    if (std::abs(mean - s0[0]) > kPriceTolerance) report.barycenters_match = false;
  }

  // time 0 is the point mass at s0
  auto call = [&](std::size_t n, double strike) {
    if (n == 0) return std::max(s0[0] - strike, 0.0);
    const auto& mu = instance.constraint(n - 1).measure();
    double c = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      c += mu.weight(j) * std::max(instance.axis(n - 1).coordinate(j, 0) - strike, 0.0);
    }
    return c;
  };

  report.calls_nondecreasing = true;
  for (std::size_t n = 1; n <= instance.horizon(); ++n) {
    for (double k : strikes) {
      const double drop = call(n - 1, k) - call(n, k);
      if (drop > report.worst_call_decrease) report.worst_call_decrease = drop;
      if (drop > kPriceTolerance && report.calls_nondecreasing) {
        report.calls_nondecreasing = false;
        report.failing_axis = n - 1;
        report.failing_strike = k;
      }
    }
  }
  return report;
}

}  // namespace motdual
