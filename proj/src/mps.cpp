#include <cmath>
#include <cstdio>
#include <ostream>

#include "motdual/lp.hpp"

namespace motdual::lp {

namespace {

// Field 4/6 of fixed MPS is 12 characters wide.
std::string number(double v) {
  char buf[64];
  for (int precision = 12; precision > 0; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::string(buf).size() <= 12) return buf;
  }
  return buf;
}

std::string fixed_name(const std::string& name, char prefix, std::size_t index) {
  const bool fits = !name.empty() && name.size() <= 8 && name.find(' ') == std::string::npos;
  if (fits) return name;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%07zu", prefix, index);
  return buf;
}

void field_line(std::ostream& out, const char* code, const std::string& f1, const std::string& f2,
                const std::string& v2) {
  char buf[128];
  std::snprintf(buf, sizeof buf, " %-2s %-8s  %-8s  %12s", code, f1.c_str(), f2.c_str(),
                v2.c_str());
  out << buf << '\n';
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name) {
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  std::vector<std::string> row_names(rows.size());
  std::vector<std::string> col_names(vars.size());
  for (std::size_t i = 0; i < rows.size(); ++i) row_names[i] = fixed_name(rows[i].name, 'R', i);
  for (std::size_t j = 0; j < vars.size(); ++j) col_names[j] = fixed_name(vars[j].name, 'C', j);

  out << "NAME          " << name << '\n';
  if (lp.sense() == Sense::Maximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  COST\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const char* code = rows[i].relation == Relation::LessEqual      ? "L"
                       : rows[i].relation == Relation::GreaterEqual ? "G"
                                                                    : "E";
    out << ' ' << code << "  " << row_names[i] << '\n';
  }
  out << "COLUMNS\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].cost != 0.0) field_line(out, "", col_names[j], "COST", number(vars[j].cost));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double a = rows[i].coefficients[j];
      if (a != 0.0) field_line(out, "", col_names[j], row_names[i], number(a));
    }
  }
  out << "RHS\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rhs != 0.0) field_line(out, "", "RHS", row_names[i], number(rows[i].rhs));
  }
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    const bool lo = std::isfinite(v.lower);
    const bool up = std::isfinite(v.upper);
    if (!lo && !up) {
      out << " FR BND       " << col_names[j] << '\n';
      continue;
    }
    if (lo && up && v.lower == v.upper) {
      field_line(out, "FX", "BND", col_names[j], number(v.lower));
      continue;
    }
    if (!lo) {
      out << " MI BND       " << col_names[j] << '\n';
    } else if (v.lower != 0.0) {
      field_line(out, "LO", "BND", col_names[j], number(v.lower));
    }
    if (up) field_line(out, "UP", "BND", col_names[j], number(v.upper));
  }
  out << "ENDATA\n";
}

}  // namespace motdual::lp
