#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace motdual {

/// Mass tolerance for deciding whether a weight vector is a probability.
inline constexpr double kProbabilityTolerance = 1e-12;
/// Tolerance for prices and LP values.
inline constexpr double kPriceTolerance = 1e-9;

using Point = std::vector<double>;

/// Thrown when constructing a value would break one of its invariants.
/// invariant() names the broken rule, e.g. "DiscreteMeasure.is_probability".
class InvariantViolation : public std::invalid_argument {
 public:
  InvariantViolation(std::string invariant, const std::string& detail)
      : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  [[nodiscard]] const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Finite set of distinct points in R^d attached to one time index.
class DiscreteAxis {
 public:
  DiscreteAxis(int index, std::vector<Point> points, bool allow_negative = false);

  [[nodiscard]] int index() const noexcept { return index_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] bool allows_negative() const noexcept { return allow_negative_; }
  [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }
  [[nodiscard]] const Point& point(std::size_t j) const { return points_.at(j); }
  [[nodiscard]] double coordinate(std::size_t j, std::size_t asset) const {
    return points_[j][asset];
  }

  /// Convenience for scalar grids.
  static DiscreteAxis scalar(int index, const std::vector<double>& values,
                             bool allow_negative = false);

  friend bool operator==(const DiscreteAxis&, const DiscreteAxis&) = default;

 private:
  int index_;
  std::vector<Point> points_;
  std::size_t dimension_;
  bool allow_negative_;
};

/// Nonnegative weights over the points of one axis.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int axis_index, std::vector<double> weights);

  [[nodiscard]] int axis_index() const noexcept { return axis_index_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double weight(std::size_t j) const { return weights_.at(j); }
  [[nodiscard]] double total_mass() const noexcept;
  [[nodiscard]] bool is_probability() const noexcept;
  [[nodiscard]] double integrate(std::span<const double> g) const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  int axis_index_;
  std::vector<double> weights_;
};

enum class ConstraintKind { Exact, ConvexHull };

/// A single prescribed marginal, or the convex hull of finitely many candidates.
class MarginalConstraint {
 public:
  static MarginalConstraint exact(DiscreteMeasure measure);
  static MarginalConstraint convex_hull(std::vector<DiscreteMeasure> vertices);

  [[nodiscard]] ConstraintKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_exact() const noexcept { return kind_ == ConstraintKind::Exact; }
  [[nodiscard]] const std::vector<DiscreteMeasure>& measures() const noexcept { return measures_; }
  [[nodiscard]] std::size_t vertex_count() const noexcept { return measures_.size(); }
  [[nodiscard]] std::size_t support_size() const noexcept { return measures_.front().size(); }
  /// The prescribed measure; throws Unsupported for ConvexHull constraints.
  [[nodiscard]] const DiscreteMeasure& measure() const;

  friend bool operator==(const MarginalConstraint&, const MarginalConstraint&) = default;

 private:
  MarginalConstraint(ConstraintKind kind, std::vector<DiscreteMeasure> measures);

  ConstraintKind kind_;
  std::vector<DiscreteMeasure> measures_;
};

/// Row-major enumeration of a product grid, first axis slowest.
class ProductGrid {
 public:
  explicit ProductGrid(std::vector<std::size_t> shape);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  [[nodiscard]] std::size_t coordinate(std::size_t flat, std::size_t axis) const {
    return (flat / strides_[axis]) % shape_[axis];
  }
  [[nodiscard]] std::vector<std::size_t> multi_index(std::size_t flat) const;
  [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> multi) const;
  /// Number of distinct prefixes (x_1..x_len).
  [[nodiscard]] std::size_t prefix_count(std::size_t len) const;
  /// Index of the length-`len` prefix of `flat` among prefix_count(len) prefixes.
  [[nodiscard]] std::size_t prefix_index(std::size_t flat, std::size_t len) const {
    return len == 0 ? 0 : flat / strides_[len - 1];
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

/// Axes X_1..X_T with one marginal constraint per axis.
class Instance {
 public:
  Instance(std::vector<DiscreteAxis> axes, std::vector<MarginalConstraint> constraints,
           std::string label = {});

  [[nodiscard]] const std::vector<DiscreteAxis>& axes() const noexcept { return axes_; }
  [[nodiscard]] const std::vector<MarginalConstraint>& constraints() const noexcept {
    return constraints_;
  }
  [[nodiscard]] const DiscreteAxis& axis(std::size_t n) const { return axes_.at(n); }
  [[nodiscard]] const MarginalConstraint& constraint(std::size_t n) const {
    return constraints_.at(n);
  }
  [[nodiscard]] std::size_t horizon() const noexcept { return axes_.size(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return axes_.front().dimension(); }
  [[nodiscard]] const ProductGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] bool all_exact() const noexcept;
  /// Coordinates of path `flat` at axis n.
  [[nodiscard]] const Point& path_point(std::size_t flat, std::size_t n) const {
    return axes_[n].point(grid_.coordinate(flat, n));
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.axes_ == b.axes_ && a.constraints_ == b.constraints_ && a.label_ == b.label_;
  }

 private:
  std::vector<DiscreteAxis> axes_;
  std::vector<MarginalConstraint> constraints_;
  std::string label_;
  ProductGrid grid_;
};

/// Cap on materialized payoff tables.
inline constexpr std::size_t kMaxDenseEntries = 1'000'000;

struct DenseTable {
  std::vector<double> values;
  friend bool operator==(const DenseTable&, const DenseTable&) = default;
};

/// Per-axis legs g_1..g_T; the payoff is their direct sum.
struct SeparableLegs {
  std::vector<std::vector<double>> legs;
  friend bool operator==(const SeparableLegs&, const SeparableLegs&) = default;
};

/// Closed-form generators. Times are 1-based; 0 means "last axis".
///   basket_call:     (sum_i weights[i] * x_n^i - strike)^+
///   straddle:        |x_n - x_m| (Euclidean norm)
///   forward:         x_n^asset - strike
///   cylinder_liminf: max_{k <= ceil(N/2)} min_{k <= j <= N} x_j^1 with N = depth
struct NamedPayoff {
  std::string generator;
  std::vector<double> weights;
  double strike = 0.0;
  int n = 0;
  int m = 0;
  int asset = 1;
  int depth = 0;
  friend bool operator==(const NamedPayoff&, const NamedPayoff&) = default;
};

class Payoff {
 public:
  using Representation = std::variant<DenseTable, SeparableLegs, NamedPayoff>;

  static Payoff dense(std::vector<double> values);
  static Payoff separable(std::vector<std::vector<double>> legs);
  static Payoff named(NamedPayoff spec);
  static Payoff constant(const Instance& instance, double c);

  [[nodiscard]] const Representation& representation() const noexcept { return rep_; }
  [[nodiscard]] bool is_dense() const noexcept { return std::holds_alternative<DenseTable>(rep_); }
  [[nodiscard]] bool is_separable() const noexcept {
    return std::holds_alternative<SeparableLegs>(rep_);
  }
  /// Materializes the table over instance.grid(); validates shape and finiteness.
  [[nodiscard]] std::vector<double> expand(const Instance& instance) const;

  friend bool operator==(const Payoff&, const Payoff&) = default;

 private:
  explicit Payoff(Representation rep) : rep_(std::move(rep)) {}
  Representation rep_;
};

/// Nonnegative weights over a product grid.
class Coupling {
 public:
  Coupling(std::vector<std::size_t> shape, std::vector<double> weights);

  /// Product of the given per-axis measures.
  static Coupling product(const std::vector<DiscreteMeasure>& measures);

  [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return grid_.shape(); }
  [[nodiscard]] const ProductGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] double total_mass() const noexcept;
  [[nodiscard]] bool matches(const Instance& instance) const noexcept {
    return grid_.shape() == instance.grid().shape();
  }

 private:
  ProductGrid grid_;
  std::vector<double> weights_;
};

/// n-th marginal (0-based axis position) of a coupling.
DiscreteMeasure marginal_of(const Coupling& coupling, std::size_t axis);

double evaluate_expectation(const Instance& instance, const Coupling& coupling,
                            const Payoff& payoff);

/// sup over the constraint's measures of <g, nu>; a vertex maximum for ConvexHull.
double sublinear_price(const MarginalConstraint& constraint, std::span<const double> g);

bool translation_check(const MarginalConstraint& constraint, std::span<const double> g, double c);

/// Smallest greedy set K with sublinear_price(m * 1_{K^c}) <= eps. Points enter K in order of
/// descending worst-case mass (ties by index). Returns point indices in insertion order.
std::vector<std::size_t> tightness_certificate(const MarginalConstraint& constraint, double m,
                                               double eps);

struct ConvexOrderReport {
  bool barycenters_match = false;
  bool calls_nondecreasing = false;
  std::vector<double> barycenters;
  /// First failing (axis, strike) pair when calls decrease.
  std::size_t failing_axis = 0;
  double failing_strike = 0.0;
  double worst_call_decrease = 0.0;

  [[nodiscard]] bool passed() const noexcept { return barycenters_match && calls_nondecreasing; }
};

/// Necessary conditions for a martingale coupling on a scalar instance with Exact marginals.
ConvexOrderReport check_convex_order(const Instance& instance, const Point& s0);

}  // namespace motdual
