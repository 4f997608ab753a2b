#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "motdual/breeden_litzenberger.hpp"
#include "motdual/core.hpp"
#include "motdual/lp.hpp"
#include "motdual/martingale.hpp"

namespace motdual {

inline constexpr int kDocumentVersion = 1;

struct MarketBlock {
  Point s0;
  std::vector<double> epsilons;
  friend bool operator==(const MarketBlock&, const MarketBlock&) = default;
};

/// Parsed instance file: grid, constraints and the optional market, payoff and solver blocks.
struct InstanceDocument {
  Instance instance;
  std::optional<MarketBlock> market;
  std::optional<Payoff> payoff;
  std::optional<lp::SolverOptions> solver;

  /// Throws SchemaError when the document has no market block.
  [[nodiscard]] Market to_market() const;

  friend bool operator==(const InstanceDocument& a, const InstanceDocument& b);
};

/// Malformed JSON (line set) or a document that breaks the schema (field set).
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(std::string field, std::size_t line, const std::string& detail);

  /// JSON pointer of the offending value, empty for syntax errors.
  [[nodiscard]] const std::string& field() const noexcept { return field_; }
  /// 1-based line of a syntax error, 0 otherwise.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

InstanceDocument parse_instance(std::string_view text);
std::string serialize(const InstanceDocument& document);

/// {"maturity": n, "strikes": [...], "prices": [...]}; maturity defaults to 1.
CallQuoteCurve parse_call_curve(std::string_view text);

nlohmann::json to_json(const lp::ResidualReport& r);
nlohmann::json to_json(const Coupling& c);
nlohmann::json to_json(const SemiStaticStrategy& s);
nlohmann::json to_json(const DiscreteMeasure& m);
nlohmann::json to_json(const lp::SolverOptions& o);
nlohmann::json to_json(const Payoff& p);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace motdual
