#pragma once

#include <span>
#include <vector>

#include "oracles/rational_vertices.hpp"

namespace oracle {

/// max <f, mu> over the 2-axis transport polytope with marginals a (rows) and b (columns),
/// by exact vertex enumeration. Inputs must be exactly representable (dyadic) doubles.
inline Result transport_max(std::span<const double> a, std::span<const double> b,
                            std::span<const double> f) {
  const std::size_t r = a.size();
  const std::size_t c = b.size();
  QMatrix e;
  std::vector<Q> rhs;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Q> row(r * c, 0);
    for (std::size_t j = 0; j < c; ++j) row[i * c + j] = 1;
    e.push_back(std::move(row));
    rhs.emplace_back(a[i]);
  }
  for (std::size_t j = 0; j < c; ++j) {
    std::vector<Q> row(r * c, 0);
    for (std::size_t i = 0; i < r; ++i) row[i * c + j] = 1;
    e.push_back(std::move(row));
    rhs.emplace_back(b[j]);
  }
  std::vector<Q> cost;
  for (double v : f) cost.emplace_back(v);
  return maximize(e, rhs, cost);
}

/// Whether `target` is a convex combination of `vertices`, decided exactly.
inline bool in_hull(const std::vector<std::vector<double>>& vertices, std::span<const double> target) {
  const std::size_t k = vertices.size();
  QMatrix e;
  std::vector<Q> rhs;
  for (std::size_t j = 0; j < target.size(); ++j) {
    std::vector<Q> row;
    for (std::size_t v = 0; v < k; ++v) row.emplace_back(vertices[v][j]);
    e.push_back(std::move(row));
    rhs.emplace_back(target[j]);
  }
  e.emplace_back(k, Q(1));
  rhs.emplace_back(1);
  return maximize(e, rhs, std::vector<Q>(k, 0)).status != Status::Infeasible;
}

}  // namespace oracle
