#pragma once

#include <optional>
#include <string>
#include <vector>

#include "motdual/core.hpp"
#include "motdual/lp.hpp"
#include "motdual/transport.hpp"

namespace motdual {

/// Discounted price grids X_1..X_T in R^d_+, spot s0 and proportional costs eps_i.
class Market {
 public:
  Market(Instance instance, Point s0, std::vector<double> epsilons);

  [[nodiscard]] const Instance& instance() const noexcept { return instance_; }
  [[nodiscard]] const Point& s0() const noexcept { return s0_; }
  [[nodiscard]] const std::vector<double>& epsilons() const noexcept { return epsilons_; }
  [[nodiscard]] std::size_t horizon() const noexcept { return instance_.horizon(); }
  [[nodiscard]] std::size_t dimension() const noexcept { return instance_.dimension(); }
  [[nodiscard]] bool frictionless() const noexcept;
  /// Price of asset i on path `flat` at time n (n = 0 is the spot).
  [[nodiscard]] double price(std::size_t flat, std::size_t n, std::size_t asset) const {
    return n == 0 ? s0_[asset] : instance_.path_point(flat, n - 1)[asset];
  }

  [[nodiscard]] Market with_epsilons(std::vector<double> epsilons) const;
  [[nodiscard]] Market with_uniform_epsilon(double eps) const;

  friend bool operator==(const Market&, const Market&) = default;

 private:
  Instance instance_;
  Point s0_;
  std::vector<double> epsilons_;
};

/// Dynamic positions liquidated at `horizon`. h[n][prefix * d + i] is the holding in asset i
/// over (n, n+1], chosen from the length-n price prefix; u mirrors h with the cost slack
/// u >= |h_n - h_{n-1}| and is empty when the block carries no transaction costs.
struct TradingBlock {
  std::size_t horizon = 0;
  std::vector<std::vector<double>> h;
  std::vector<std::vector<double>> u;
};

/// (m, (+)g, h): cash, static option legs g_n >= 0 and adapted trading blocks.
struct SemiStaticStrategy {
  double m = 0.0;
  std::vector<std::vector<double>> g;
  std::vector<TradingBlock> blocks;
};

/// m + sum_n phi_n(g_n).
double strategy_cost(const Market& market, const SemiStaticStrategy& strategy);

/// Per-path outcome m + (+)g + h(S), with costs eps_i |h_n - h_{n-1}| S_{n-1} taken from the
/// holdings themselves (h_{-1} = 0). Trading blocks are summed.
std::vector<double> strategy_outcome(const Market& market, const SemiStaticStrategy& strategy);

/// Column map of the superhedging LP.
struct StrategyLayout {
  struct Block {
    std::size_t horizon = 0;
    std::vector<std::size_t> h_offset;  // per period n < horizon
    std::vector<std::size_t> u_offset;  // empty when frictionless form
  };

  std::size_t dimension = 0;
  std::size_t cash = 0;
  std::vector<std::size_t> leg_offset;
  std::vector<std::size_t> epigraph;  // per axis; npos for Exact axes
  std::vector<Block> blocks;
  bool friction_form = false;
  std::size_t first_path_row = 0;

  [[nodiscard]] std::size_t h_column(std::size_t block, std::size_t n, std::size_t prefix,
                                     std::size_t asset) const {
    return blocks[block].h_offset[n] + prefix * dimension + asset;
  }
  [[nodiscard]] std::size_t u_column(std::size_t block, std::size_t n, std::size_t prefix,
                                     std::size_t asset) const {
    return blocks[block].u_offset[n] + prefix * dimension + asset;
  }
};

struct SuperhedgeOptions {
  /// Build the transaction-cost form (one block per liquidation time, with cost slacks)
  /// even when every eps_i is zero.
  bool force_friction_form = false;
  /// Drop all trading blocks.
  bool static_only = false;
  /// Adds the row m + sum_n phi_n(g_n) >= floor.
  std::optional<double> cost_floor;
  lp::SolverOptions lp;
};

lp::LinearProgram build_superhedge_lp(const Market& market, std::span<const double> payoff,
                                      const SuperhedgeOptions& options,
                                      StrategyLayout* layout = nullptr);

SemiStaticStrategy decode_strategy(const Market& market, const StrategyLayout& layout,
                                   std::span<const double> x);

enum class HedgeStatus { Optimal, Unbounded };

struct SuperhedgeResult {
  HedgeStatus status = HedgeStatus::Optimal;
  /// -infinity when Unbounded.
  double value = 0.0;
  SemiStaticStrategy strategy;
  /// Improving ray of the LP (Unbounded only), decoded as a strategy: a uniform arbitrage.
  std::optional<SemiStaticStrategy> improving_ray;
  lp::LpSolution lp;
  lp::ResidualReport residuals;
};

/// min m + sum_n phi_n(g_n) s.t. m + (+)g + h(S) >= f on every path.
SuperhedgeResult superhedge_dual(const Market& market, const Payoff& payoff,
                                 const SuperhedgeOptions& options = {});

struct MotOptions {
  bool force_friction_form = false;
  lp::SolverOptions lp;
};

enum class MotStatus { Optimal, Infeasible };

struct MotPrimalResult {
  MotStatus status = MotStatus::Infeasible;
  /// -infinity when Infeasible.
  double value = 0.0;
  std::optional<Coupling> coupling;
  std::vector<std::vector<double>> mixture;
  lp::LpSolution lp;
  lp::ResidualReport residuals;
};

lp::LinearProgram build_primal_mot_lp(const Market& market, std::span<const double> payoff,
                                      bool friction_form);

/// max <f, mu> over couplings with admissible marginals under which S is a martingale
/// (eps = 0) or stays inside the bid-ask band (1 -/+ eps_i) S_n for every n <= N.
MotPrimalResult primal_mot(const Market& market, const Payoff& payoff,
                           const MotOptions& options = {});

/// Largest violation of the martingale / bid-ask constraints by `mu`, in joint (unconditioned)
/// form: per prefix p, |E[1_p (S_N - S_n)]| beyond eps_i E[1_p S_n].
double martingale_violation(const Market& market, const Coupling& mu, bool friction_form);

struct ArbitrageVerdict {
  enum class Kind { NoArbitrage, UniformArbitrage, ModelIndependentArbitrage };

  Kind kind = Kind::NoArbitrage;
  std::optional<SemiStaticStrategy> strategy;
  bool uniform_detected = false;
  bool model_independent_detected = false;
  /// min cost s.t. outcome >= 0 and cost >= -1.
  double uniform_lp_value = 0.0;
  /// min cost s.t. outcome >= 1 and cost >= -1.
  double model_independent_lp_value = 0.0;
  /// Independently recomputed cost and worst outcome of the reported strategy.
  double witness_cost = 0.0;
  double witness_min_outcome = 0.0;
  std::optional<SemiStaticStrategy> uniform_strategy;
  std::string note;
};

const char* to_string(ArbitrageVerdict::Kind kind) noexcept;

/// Detects uniform arbitrage (negative cost, nonnegative outcome) and model-independent
/// arbitrage (nonpositive cost, outcome >= 1 as a scale-free stand-in for outcome > 0).
/// Reports ModelIndependentArbitrage whenever it is found, since every uniform arbitrage
/// yields one after adding cash.
ArbitrageVerdict classify_arbitrage(const Market& market, const lp::SolverOptions& options = {});

struct FtapReport {
  bool no_model_independent_arbitrage = false;
  bool no_uniform_arbitrage = false;
  bool martingale_measures_exist = false;
  ArbitrageVerdict verdict;
  std::optional<Coupling> martingale_witness;

  [[nodiscard]] bool equivalent() const noexcept {
    return no_model_independent_arbitrage == no_uniform_arbitrage &&
           no_uniform_arbitrage == martingale_measures_exist;
  }
  [[nodiscard]] bool arbitrage_free() const noexcept {
    return equivalent() && martingale_measures_exist;
  }
};

FtapReport ftap_check(const Market& market, const lp::SolverOptions& options = {});

/// Thrown by operations whose market-level precondition fails (e.g. an empty martingale set).
class PreconditionFailed : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Primal (martingale coupling) and dual (superhedge) values with their gap.
DualityReport superhedging_duality_report(const Market& market, const Payoff& payoff,
                                          const lp::SolverOptions& options = {});

struct FrictionlessLimitReport {
  std::vector<double> epsilons;
  std::vector<double> values;
  double frictionless_value = 0.0;
  /// Largest increase between consecutive values (ideally <= 0).
  double worst_increase = 0.0;
  /// |last value - frictionless value|.
  double final_gap = 0.0;

  [[nodiscard]] bool monotone(double tol = kPriceTolerance) const noexcept {
    return worst_increase <= tol;
  }
};

/// Superhedging values with every eps_i set to each entry of `eps_sequence`.
FrictionlessLimitReport frictionless_limit_check(const Market& market, const Payoff& payoff,
                                                 const std::vector<double>& eps_sequence,
                                                 const lp::SolverOptions& options = {});

}  // namespace motdual
