#include "motdual/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace motdual {

using nlohmann::json;

namespace {

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& path, const std::string& detail) {
  throw SchemaError(path.empty() ? "/" : path, 0, detail);
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(child(path, key), "missing required field");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "number must be finite");
  return d;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], child(path, i)));
  return out;
}

std::vector<std::vector<double>> matrix(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(numbers(v[i], child(path, i)));
  return out;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) fail(child(path, key), "unknown field");
  }
}

DiscreteAxis parse_axis(const json& v, std::size_t position, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v, {"index", "points", "allow_negative"}, path);
  const int index = v.contains("index") ? integer(v["index"], child(path, "index"))
                                        : static_cast<int>(position + 1);
  const auto& pts = require(v, "points", path);
  if (!pts.is_array()) fail(child(path, "points"), "expected an array");
  std::vector<Point> points;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const auto p = child(child(path, "points"), j);
    if (pts[j].is_number()) {
      points.push_back({number(pts[j], p)});
    } else {
      points.push_back(numbers(pts[j], p));
    }
  }
  bool allow_negative = false;
  if (v.contains("allow_negative")) {
    if (!v["allow_negative"].is_boolean()) fail(child(path, "allow_negative"), "expected a boolean");
    allow_negative = v["allow_negative"].get<bool>();
  }
  return DiscreteAxis(index, std::move(points), allow_negative);
}

MarginalConstraint parse_constraint(const json& v, int axis_index, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  const auto& kind = require(v, "kind", path);
  if (!kind.is_string()) fail(child(path, "kind"), "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "exact") {
    reject_unknown(v, {"kind", "weights"}, path);
    return MarginalConstraint::exact(
        DiscreteMeasure(axis_index, numbers(require(v, "weights", path), child(path, "weights"))));
  }
  if (k == "convex_hull") {
    reject_unknown(v, {"kind", "vertices"}, path);
    std::vector<DiscreteMeasure> vertices;
    for (auto& w : matrix(require(v, "vertices", path), child(path, "vertices"))) {
      vertices.emplace_back(axis_index, std::move(w));
    }
    return MarginalConstraint::convex_hull(std::move(vertices));
  }
  fail(child(path, "kind"), "expected \"exact\" or \"convex_hull\"");
}

Payoff parse_payoff(const json& v, const std::string& path) {
  const auto& type = require(v, "type", path);
  if (!type.is_string()) fail(child(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  if (t == "dense") {
    reject_unknown(v, {"type", "values"}, path);
    return Payoff::dense(numbers(require(v, "values", path), child(path, "values")));
  }
  if (t == "separable") {
    reject_unknown(v, {"type", "legs"}, path);
    return Payoff::separable(matrix(require(v, "legs", path), child(path, "legs")));
  }
  if (t == "named") {
    reject_unknown(v, {"type", "generator", "weights", "strike", "n", "m", "asset", "depth"}, path);
    NamedPayoff spec;
    const auto& gen = require(v, "generator", path);
    if (!gen.is_string()) fail(child(path, "generator"), "expected a string");
    spec.generator = gen.get<std::string>();
    if (v.contains("weights")) spec.weights = numbers(v["weights"], child(path, "weights"));
    if (v.contains("strike")) spec.strike = number(v["strike"], child(path, "strike"));
    if (v.contains("n")) spec.n = integer(v["n"], child(path, "n"));
    if (v.contains("m")) spec.m = integer(v["m"], child(path, "m"));
    if (v.contains("asset")) spec.asset = integer(v["asset"], child(path, "asset"));
    if (v.contains("depth")) spec.depth = integer(v["depth"], child(path, "depth"));
    return Payoff::named(std::move(spec));
  }
  fail(child(path, "type"), "expected \"dense\", \"separable\" or \"named\"");
}

lp::SolverOptions parse_solver(const json& v, const std::string& path) {
  if (!v.is_object()) fail(path, "expected an object");
  reject_unknown(v,
                 {"pivot_rule", "feasibility_tolerance", "optimality_tolerance", "pivot_tolerance",
                  "max_iterations", "refactor_interval", "degenerate_limit"},
                 path);
  lp::SolverOptions o;
  if (v.contains("pivot_rule")) {
    const auto& r = v["pivot_rule"];
    const auto p = child(path, "pivot_rule");
    if (!r.is_string()) fail(p, "expected a string");
    if (r == "dantzig") {
      o.pivot_rule = lp::PivotRule::Dantzig;
    } else if (r == "bland") {
      o.pivot_rule = lp::PivotRule::Bland;
    } else {
      fail(p, "expected \"dantzig\" or \"bland\"");
    }
  }
  auto positive = [&](const char* key, double& out) {
    if (!v.contains(key)) return;
    out = number(v[key], child(path, key));
    if (out <= 0.0) fail(child(path, key), "must be positive");
  };
  positive("feasibility_tolerance", o.feasibility_tolerance);
  positive("optimality_tolerance", o.optimality_tolerance);
  positive("pivot_tolerance", o.pivot_tolerance);
  auto count = [&](const char* key, std::size_t& out) {
    if (!v.contains(key)) return;
    const int c = integer(v[key], child(path, key));
    if (c <= 0) fail(child(path, key), "must be positive");
    out = static_cast<std::size_t>(c);
  };
  count("max_iterations", o.max_iterations);
  count("refactor_interval", o.refactor_interval);
  count("degenerate_limit", o.degenerate_limit);
  return o;
}

bool same_options(const lp::SolverOptions& a, const lp::SolverOptions& b) {
  return a.pivot_rule == b.pivot_rule && a.feasibility_tolerance == b.feasibility_tolerance &&
         a.optimality_tolerance == b.optimality_tolerance &&
         a.pivot_tolerance == b.pivot_tolerance && a.max_iterations == b.max_iterations &&
         a.refactor_interval == b.refactor_interval && a.degenerate_limit == b.degenerate_limit;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) line += text[i] == '\n' ? 1 : 0;
    throw SchemaError("", line, e.what());
  } catch (const json::exception& e) {
    // e.g. a numeric literal outside the double range
    throw SchemaError("/", 0, e.what());
  }
}

}  // namespace

SchemaError::SchemaError(std::string field, std::size_t line, const std::string& detail)
    : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + detail
                                     : field + ": " + detail),
      field_(std::move(field)),
      line_(line) {}

Market InstanceDocument::to_market() const {
  if (!market) throw SchemaError("/market", 0, "this command needs a market block");
  return Market(instance, market->s0, market->epsilons);
}

bool operator==(const InstanceDocument& a, const InstanceDocument& b) {
  if (!(a.instance == b.instance && a.market == b.market && a.payoff == b.payoff)) return false;
  if (a.solver.has_value() != b.solver.has_value()) return false;
  return !a.solver || same_options(*a.solver, *b.solver);
}

InstanceDocument parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  const std::string root;
  if (!doc.is_object()) fail(root, "expected a JSON object");
  reject_unknown(doc, {"version", "label", "axes", "constraints", "market", "payoff", "solver"},
                 root);
  if (doc.contains("version") && integer(doc["version"], "/version") != kDocumentVersion) {
    fail("/version", "unsupported version (expected " + std::to_string(kDocumentVersion) + ")");
  }
  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) fail("/label", "expected a string");
    label = doc["label"].get<std::string>();
  }

  const auto& axes_json = require(doc, "axes", root);
  if (!axes_json.is_array() || axes_json.empty()) fail("/axes", "expected a nonempty array");
  std::vector<DiscreteAxis> axes;
  for (std::size_t n = 0; n < axes_json.size(); ++n) {
    axes.push_back(parse_axis(axes_json[n], n, child("/axes", n)));
  }
  const auto& cons_json = require(doc, "constraints", root);
  if (!cons_json.is_array()) fail("/constraints", "expected an array");
  if (cons_json.size() != axes.size()) {
    fail("/constraints", "expected one constraint per axis (" + std::to_string(axes.size()) + ")");
  }
  std::vector<MarginalConstraint> constraints;
  for (std::size_t n = 0; n < cons_json.size(); ++n) {
    constraints.push_back(parse_constraint(cons_json[n], axes[n].index(), child("/constraints", n)));
  }

  InstanceDocument out{Instance(std::move(axes), std::move(constraints), std::move(label)), {}, {}, {}};
  if (doc.contains("market")) {
    const auto& m = doc["market"];
    if (!m.is_object()) fail("/market", "expected an object");
    reject_unknown(m, {"s0", "epsilons", "horizon"}, "/market");
    MarketBlock block;
    block.s0 = numbers(require(m, "s0", "/market"), "/market/s0");
    block.epsilons = m.contains("epsilons")
                         ? numbers(m["epsilons"], "/market/epsilons")
                         : std::vector<double>(out.instance.dimension(), 0.0);
    if (m.contains("horizon") &&
        integer(m["horizon"], "/market/horizon") != static_cast<int>(out.instance.horizon())) {
      fail("/market/horizon", "horizon must equal the number of axes");
    }
    out.market = std::move(block);
    (void)out.to_market();
  }
  if (doc.contains("payoff")) out.payoff = parse_payoff(doc["payoff"], "/payoff");
  if (doc.contains("solver")) out.solver = parse_solver(doc["solver"], "/solver");
  return out;
}

json to_json(const Payoff& p) {
  const auto& rep = p.representation();
  if (const auto* d = std::get_if<DenseTable>(&rep)) return {{"type", "dense"}, {"values", d->values}};
  if (const auto* s = std::get_if<SeparableLegs>(&rep)) return {{"type", "separable"}, {"legs", s->legs}};
  const auto& n = std::get<NamedPayoff>(rep);
  return {{"type", "named"}, {"generator", n.generator}, {"weights", n.weights},
          {"strike", n.strike},  {"n", n.n},              {"m", n.m},
          {"asset", n.asset},    {"depth", n.depth}};
}

json to_json(const lp::SolverOptions& o) {
  return {{"pivot_rule", o.pivot_rule == lp::PivotRule::Bland ? "bland" : "dantzig"},
          {"feasibility_tolerance", o.feasibility_tolerance},
          {"optimality_tolerance", o.optimality_tolerance},
          {"pivot_tolerance", o.pivot_tolerance},
          {"max_iterations", o.max_iterations},
          {"refactor_interval", o.refactor_interval},
          {"degenerate_limit", o.degenerate_limit}};
}

std::string serialize(const InstanceDocument& d) {
  json doc;
  doc["version"] = kDocumentVersion;
  doc["label"] = d.instance.label();
  json axes = json::array();
  for (const auto& a : d.instance.axes()) {
    axes.push_back({{"index", a.index()}, {"points", a.points()}, {"allow_negative", a.allows_negative()}});
  }
  doc["axes"] = std::move(axes);
  json cons = json::array();
  for (const auto& c : d.instance.constraints()) {
    if (c.is_exact()) {
      cons.push_back({{"kind", "exact"}, {"weights", c.measure().weights()}});
      continue;
    }
    json vertices = json::array();
    for (const auto& m : c.measures()) vertices.push_back(m.weights());
    cons.push_back({{"kind", "convex_hull"}, {"vertices", std::move(vertices)}});
  }
  doc["constraints"] = std::move(cons);
  if (d.market) {
    doc["market"] = {{"s0", d.market->s0},
                     {"epsilons", d.market->epsilons},
                     {"horizon", d.instance.horizon()}};
  }
  if (d.payoff) doc["payoff"] = to_json(*d.payoff);
  if (d.solver) doc["solver"] = to_json(*d.solver);
  return doc.dump(2) + "\n";
}

CallQuoteCurve parse_call_curve(std::string_view text) {
  const json doc = parse_json(text);
  const std::string root;
  if (!doc.is_object()) fail(root, "expected a JSON object");
  reject_unknown(doc, {"maturity", "strikes", "prices"}, root);
  CallQuoteCurve c;
  if (doc.contains("maturity")) c.maturity = integer(doc["maturity"], "/maturity");
  c.strikes = numbers(require(doc, "strikes", root), "/strikes");
  c.prices = numbers(require(doc, "prices", root), "/prices");
  if (c.strikes.size() != c.prices.size()) fail("/prices", "expected one price per strike");
  return c;
}

json to_json(const lp::ResidualReport& r) {
  return {{"primal", r.primal},
          {"dual", r.dual},
          {"complementarity", r.complementarity},
          {"objective_gap", r.objective_gap},
          {"dual_objective", r.dual_objective}};
}

json to_json(const Coupling& c) {
  return {{"shape", c.shape()}, {"weights", c.weights()}};
}

json to_json(const SemiStaticStrategy& s) {
  json blocks = json::array();
  for (const auto& b : s.blocks) {
    json block = {{"horizon", b.horizon}, {"h", b.h}};
    if (!b.u.empty()) block["u"] = b.u;
    blocks.push_back(std::move(block));
  }
  return {{"m", s.m}, {"g", s.g}, {"blocks", std::move(blocks)}};
}

json to_json(const DiscreteMeasure& m) {
  return {{"axis", m.axis_index()}, {"weights", m.weights()}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace motdual
