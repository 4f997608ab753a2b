#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "motdual/breeden_litzenberger.hpp"
#include "motdual/counterexample.hpp"
#include "motdual/document.hpp"
#include "motdual/martingale.hpp"
#include "motdual/transport.hpp"

namespace {

using nlohmann::json;
using namespace motdual;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitFinding = 2;

struct Flags {
  std::string input;
  std::string output = "-";
  std::string format = "json";
  double tol = 1e-7;
  std::string dump_lp;
  std::size_t depth = 6;
  std::string calls;
  int maturity = 1;
};

/// What a command hands back: the deterministic payload, a table for humans and an exit code.
struct Outcome {
  json result;
  std::vector<std::pair<std::string, std::string>> rows;
  int exit_code = kExitOk;
};

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

InstanceDocument load(const Flags& f) {
  if (f.input.empty()) throw SchemaError("", 0, "--input is required for this command");
  return parse_instance(read_file(f.input));
}

lp::SolverOptions solver_of(const InstanceDocument& doc) { return doc.solver.value_or(lp::SolverOptions{}); }

const Payoff& payoff_of(const InstanceDocument& doc) {
  if (!doc.payoff) throw SchemaError("/payoff", 0, "this command needs a payoff block");
  return *doc.payoff;
}

void dump(const Flags& f, const lp::LinearProgram& prog, const char* name) {
  if (f.dump_lp.empty()) return;
  std::ostringstream ss;
  lp::write_mps(prog, ss, name);
  write_file_atomic(f.dump_lp, ss.str());
}

Outcome solve_transport(const Flags& f) {
  const auto doc = load(f);
  const auto& payoff = payoff_of(doc);
  const auto table = payoff.expand(doc.instance);
  dump(f, build_primal_transport_lp(doc.instance, table), "TRANSP");
  const auto sol = primal_transport(doc.instance, payoff, solver_of(doc));
  Outcome out;
  out.result = {{"status", "optimal"},
                {"primal_value", sol.value},
                {"coupling", to_json(sol.coupling)},
                {"mixture", sol.mixture},
                {"iterations", sol.lp.iterations},
                {"residuals", to_json(sol.residuals)}};
  out.rows = {{"status", "optimal"},
              {"primal value", num(sol.value)},
              {"worst residual", num(sol.residuals.worst())}};
  return out;
}

Outcome solve_mot(const Flags& f) {
  const auto doc = load(f);
  const auto market = doc.to_market();
  const auto& payoff = payoff_of(doc);
  const auto opts = solver_of(doc);
  dump(f, build_primal_mot_lp(market, payoff.expand(doc.instance), !market.frictionless()), "MOT");

  MotOptions mot;
  mot.lp = opts;
  const auto primal = primal_mot(market, payoff, mot);
  SuperhedgeOptions sh;
  sh.lp = opts;
  const auto dual = superhedge_dual(market, payoff, sh);

  Outcome out;
  if (primal.status == MotStatus::Infeasible) {
    const auto prog = build_primal_mot_lp(market, payoff.expand(doc.instance), !market.frictionless());
    const auto farkas = lp::check_farkas(prog, primal.lp.farkas);
    out.result = {{"status", "infeasible"},
                  {"primal_value", nullptr},
                  {"dual_value", nullptr},
                  {"farkas", primal.lp.farkas},
                  {"residuals", {{"farkas_violation", farkas.violation}, {"farkas_margin", farkas.margin}}}};
    if (dual.improving_ray) out.result["arbitrage_ray"] = to_json(*dual.improving_ray);
    out.rows = {{"status", "infeasible (no admissible martingale coupling)"},
                {"farkas margin", num(farkas.margin)},
                {"farkas violation", num(farkas.violation)}};
    out.exit_code = kExitFinding;
    return out;
  }
  const double gap = std::abs(dual.value - primal.value);
  out.result = {{"status", "optimal"},
                {"primal_value", primal.value},
                {"dual_value", dual.value},
                {"gap", gap},
                {"coupling", to_json(*primal.coupling)},
                {"strategy", to_json(dual.strategy)},
                {"residuals", {{"primal", to_json(primal.residuals)}, {"dual", to_json(dual.residuals)}}}};
  out.rows = {{"status", "optimal"},
              {"primal value", num(primal.value)},
              {"superhedging value", num(dual.value)},
              {"gap", num(gap)},
              {"worst residual", num(std::max(primal.residuals.worst(), dual.residuals.worst()))}};
  return out;
}

Outcome check_arbitrage(const Flags& f) {
  const auto doc = load(f);
  const auto market = doc.to_market();
  const auto opts = solver_of(doc);
  if (!f.dump_lp.empty()) {
    SuperhedgeOptions sh;
    sh.cost_floor = -1.0;
    const auto one = Payoff::constant(doc.instance, 1.0).expand(doc.instance);
    dump(f, build_superhedge_lp(market, one, sh), "ARBMI");
  }
  const auto ftap = ftap_check(market, opts);
  const auto& v = ftap.verdict;
  Outcome out;
  out.result = {{"verdict", to_string(v.kind)},
                {"model_independent_arbitrage", v.model_independent_detected},
                {"uniform_arbitrage", v.uniform_detected},
                {"martingale_measures_exist", ftap.martingale_measures_exist},
                {"ftap_consistent", ftap.equivalent()},
                {"uniform_lp_value", v.uniform_lp_value},
                {"model_independent_lp_value", v.model_independent_lp_value},
                {"residuals",
                 {{"witness_cost", v.witness_cost}, {"witness_min_outcome", v.witness_min_outcome}}}};
  if (v.strategy) out.result["strategy"] = to_json(*v.strategy);
  if (ftap.martingale_witness) out.result["martingale_coupling"] = to_json(*ftap.martingale_witness);
  if (!v.note.empty()) out.result["note"] = v.note;
  out.rows = {{"verdict", to_string(v.kind)},
              {"martingale measures", ftap.martingale_measures_exist ? "nonempty" : "empty"},
              {"ftap consistent", ftap.equivalent() ? "yes" : "no"}};
  if (v.strategy) {
    out.rows.emplace_back("witness cost", num(v.witness_cost));
    out.rows.emplace_back("witness min outcome", num(v.witness_min_outcome));
  }
  out.exit_code = v.kind == ArbitrageVerdict::Kind::NoArbitrage ? kExitOk : kExitFinding;
  return out;
}

Outcome verify_duality(const Flags& f) {
  const auto doc = load(f);
  const auto& payoff = payoff_of(doc);
  const auto opts = solver_of(doc);
  Outcome out;
  DualityReport rep;
  std::string kind;
  if (doc.market) {
    kind = "martingale";
    const auto market = doc.to_market();
    dump(f, build_primal_mot_lp(market, payoff.expand(doc.instance), !market.frictionless()), "MOT");
    try {
      rep = superhedging_duality_report(market, payoff, opts);
    } catch (const PreconditionFailed& e) {
      out.result = {{"kind", kind}, {"status", "infeasible"}, {"message", e.what()},
                    {"residuals", nullptr}};
      out.rows = {{"status", "infeasible"}, {"message", e.what()}};
      out.exit_code = kExitFinding;
      return out;
    }
  } else {
    kind = "transport";
    dump(f, build_primal_transport_lp(doc.instance, payoff.expand(doc.instance)), "TRANSP");
    rep = transport_duality_report(doc.instance, payoff, opts);
  }
  const bool ok = rep.within(f.tol);
  out.result = {{"kind", kind},
                {"status", ok ? "zero_gap" : "gap"},
                {"primal_value", rep.primal_value},
                {"dual_value", rep.dual_value},
                {"gap", rep.gap},
                {"tolerance", f.tol},
                {"residuals", {{"primal", to_json(rep.primal_residuals)}, {"dual", to_json(rep.dual_residuals)}}}};
  if (rep.coupling) out.result["coupling"] = to_json(*rep.coupling);
  out.result["dual_solution"] = rep.dual_solution;
  out.rows = {{"duality", kind},
              {"primal value", num(rep.primal_value)},
              {"dual value", num(rep.dual_value)},
              {"gap", num(rep.gap)},
              {"within tolerance", ok ? "yes" : "no"}};
  out.exit_code = ok ? kExitOk : kExitFinding;
  return out;
}

Outcome counterexample(const Flags& f) {
  if (f.depth == 0) throw SchemaError("--depth", 0, "depth must be >= 1");
  const auto inst = bernoulli_instance(f.depth);
  dump(f, build_dual_transport_lp(inst, Payoff::constant(inst, 1.0).expand(inst)), "TAIL");
  const auto cylinder = cylinder_product_expectations(f.depth);
  Outcome out;
  json rows = json::array();
  bool ok = true;
  for (std::size_t n = 1; n <= f.depth; ++n) {
    const auto r = gap_report(n);
    ok = ok && r.invariants_hold();
    rows.push_back({{"depth", n},
                    {"dual_value", r.dual_value},
                    {"dual_upper_bound", r.dual_upper_bound},
                    {"primal_value", r.primal_candidate_value},
                    {"primal_upper_bound", r.primal_upper_bound},
                    {"gap", r.gap},
                    {"cylinder_product_expectation", cylinder[n - 1]},
                    {"cylinder_duality_gap", std::abs(r.cylinder_primal - r.cylinder_dual)},
                    {"certificate", {{"m", r.dual_certificate.m}, {"g", r.dual_certificate.g}}},
                    {"attaining_measure", r.attaining_measure},
                    {"residuals", to_json(r.dual_certificate.residuals)}});
    if (n == f.depth) {
      out.rows = {{"depth", std::to_string(n)},
                  {"dual", num(r.dual_value)},
                  {"primal", num(r.primal_candidate_value)},
                  {"fatou bound", num(r.primal_upper_bound)},
                  {"gap", num(r.gap)}};
    }
  }
  out.result = {{"rows", std::move(rows)}, {"invariants_hold", ok}};
  return out;
}

Outcome bl_ingest(const Flags& f) {
  if (f.calls.empty()) throw SchemaError("--calls", 0, "--calls is required");
  auto curve = parse_call_curve(read_file(f.calls));
  curve.maturity = f.maturity;
  Outcome out;
  try {
    const auto grid = default_bl_grid(curve);
    const auto measure = marginal_from_calls(curve, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < curve.strikes.size(); ++k) {
      worst = std::max(worst, std::abs(call_price(grid, measure, curve.strikes[k]) - curve.prices[k]));
    }
    double barycenter = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) barycenter += grid[j] * measure.weight(j);
    out.result = {{"status", "recovered"},
                  {"axis", {{"index", curve.maturity}, {"points", grid}}},
                  {"constraint", {{"kind", "exact"}, {"weights", measure.weights()}}},
                  {"barycenter", barycenter},
                  {"residuals", {{"max_repricing_error", worst}, {"mass_error", std::abs(measure.total_mass() - 1.0)}}}};
    out.rows = {{"maturity", std::to_string(curve.maturity)},
                {"points", std::to_string(grid.size())},
                {"barycenter", num(barycenter)},
                {"max repricing error", num(worst)}};
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out.rows.emplace_back("p(" + num(grid[j]) + ")", num(measure.weight(j)));
    }
  } catch (const StaticArbitrage& e) {
    out.result = {{"status", "static_arbitrage"},
                  {"rule", e.rule()},
                  {"strikes", e.strikes()},
                  {"message", e.what()},
                  {"residuals", nullptr}};
    out.rows = {{"status", "static arbitrage"}, {"rule", e.rule()}, {"message", e.what()}};
    out.exit_code = kExitFinding;
  }
  return out;
}

void emit(const Flags& f, const std::string& command, const Outcome& o, double elapsed_ms) {
  json doc = {{"command", command},
              {"version", kDocumentVersion},
              {"exit_code", o.exit_code},
              {"result", o.result},
              {"metadata", {{"elapsed_ms", elapsed_ms}}}};
  const std::string text = doc.dump(2) + "\n";
  if (f.output != "-") write_file_atomic(f.output, text);
  if (f.format == "table") {
    std::size_t width = 0;
    for (const auto& [k, _] : o.rows) width = std::max(width, k.size());
    std::cout << command << "\n";
    for (const auto& [k, v] : o.rows) {
      std::cout << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << "\n";
    }
  } else if (f.output == "-") {
    std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transport and martingale-transport duality on finite grids"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input", flags.input, "instance document (JSON)");
    if (needs_input) in->required()->check(CLI::ExistingFile);
    sub->add_option("--output", flags.output, "result document path, - for stdout");
    sub->add_option("--format", flags.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--tol", flags.tol, "duality gap tolerance (relative to max(1,|dual|))")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dump-lp", flags.dump_lp, "write the main LP in MPS format");
  };

  using Handler = Outcome (*)(const Flags&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h, bool needs_input) {
    auto* sub = app.add_subcommand(name, help);
    common(sub, needs_input);
    commands.emplace_back(sub, h);
    return sub;
  };
  add("solve-transport", "primal multi-marginal transport", solve_transport, true);
  add("solve-mot", "martingale transport and superhedging", solve_mot, true);
  add("check-arbitrage", "classify arbitrage and check the FTAP conditions", check_arbitrage, true);
  add("verify-duality", "primal and dual values with their gap", verify_duality, true);
  auto* cx = add("counterexample", "duality gap on the product of fair coins", counterexample, false);
  cx->add_option("--depth", flags.depth, "truncation depth")->check(CLI::Range(1, 20));
  auto* bl = add("bl-ingest", "recover a marginal from call quotes", bl_ingest, false);
  bl->add_option("--calls", flags.calls, "call quote file (JSON)")->required()->check(CLI::ExistingFile);
  bl->add_option("--maturity", flags.maturity, "maturity index")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  for (const auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto outcome = handler(flags);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      emit(flags, sub->get_name(), outcome, ms);
      return outcome.exit_code;
    } catch (const lp::NumericFailure& e) {
      std::cerr << "error: solver failure: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInput;
    }
  }
  return kExitInput;
}
