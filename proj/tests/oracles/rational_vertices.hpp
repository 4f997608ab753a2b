#pragma once

// Exact vertex enumeration over {x : E x = b, x >= 0} in GMP rationals. Independent of the
// simplex code under test: no pivoting rules, no tolerances.

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using Q = mpq_class;
using QMatrix = std::vector<std::vector<Q>>;

/// Row echelon reduction of [E | b]. Drops dependent rows; returns nullopt if the system is
/// inconsistent.
inline std::optional<std::pair<QMatrix, std::vector<Q>>> independent_rows(QMatrix e,
                                                                          std::vector<Q> b) {
  const std::size_t rows = e.size();
  const std::size_t cols = rows ? e[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && e[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(e[r], e[piv]);
    std::swap(b[r], b[piv]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || e[i][c] == 0) continue;
      const Q f = e[i][c] / e[r][c];
      for (std::size_t k = c; k < cols; ++k) e[i][k] -= f * e[r][k];
      b[i] -= f * b[r];
    }
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  e.resize(r);
  b.resize(r);
  return std::make_pair(std::move(e), std::move(b));
}

/// Solves the square system B y = b; nullopt if singular.
inline std::optional<std::vector<Q>> solve_square(QMatrix a, std::vector<Q> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const Q f = a[i][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Rows scaled by the lcm of their denominators, as integers.
inline std::pair<std::vector<std::vector<mpz_class>>, std::vector<mpz_class>> integer_rows(
    const QMatrix& e, const std::vector<Q>& b) {
  std::vector<std::vector<mpz_class>> a;
  std::vector<mpz_class> rhs;
  for (std::size_t i = 0; i < e.size(); ++i) {
    mpz_class l = b[i].get_den();
    for (const auto& v : e[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    std::vector<mpz_class> row;
    for (const auto& v : e[i]) row.push_back(mpz_class(v * l));
    a.push_back(std::move(row));
    rhs.push_back(mpz_class(b[i] * l));
  }
  return {std::move(a), std::move(rhs)};
}

/// Fraction-free (Bareiss) solve of a square integer system; nullopt if singular.
inline std::optional<std::vector<Q>> solve_bareiss(std::vector<std::vector<mpz_class>> a,
                                                   std::vector<mpz_class> b) {
  const std::size_t n = a.size();
  mpz_class prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
      b[i] = (b[i] * a[k][k] - a[i][k] * b[k]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  std::vector<Q> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Q s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= Q(a[i][j]) * x[j];
    x[i] = s / Q(a[i][i]);
    x[i].canonicalize();
  }
  return x;
}

/// Calls visit(x) for every basic feasible solution (with repetition for degenerate ones).
/// Returns false if the system is inconsistent.
inline bool for_each_vertex(const QMatrix& e, const std::vector<Q>& b,
                            const std::function<void(const std::vector<Q>&)>& visit) {
  auto reduced = independent_rows(e, b);
  if (!reduced) return false;
  const auto [rows, rhs] = integer_rows(reduced->first, reduced->second);
  const std::size_t m = rows.size();
  const std::size_t n = e.empty() ? 0 : e[0].size();
  if (m == 0) {
    visit(std::vector<Q>(n, 0));
    return true;
  }
  std::vector<std::size_t> basis(m);
  std::vector<std::vector<mpz_class>> a(m, std::vector<mpz_class>(m));
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t pos, std::size_t start) {
    if (pos == m) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) a[i][k] = rows[i][basis[k]];
      }
      auto y = solve_bareiss(a, rhs);
      if (!y) return;
      for (const auto& v : *y) {
        if (v < 0) return;
      }
      std::vector<Q> x(n, 0);
      for (std::size_t k = 0; k < m; ++k) x[basis[k]] = (*y)[k];
      visit(x);
      return;
    }
    for (std::size_t j = start; j + (m - pos) <= n; ++j) {
      basis[pos] = j;
      choose(pos + 1, j + 1);
    }
  };
  choose(0, 0);
  return true;
}

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Q value = 0;
  std::vector<Q> x;
};

/// max c'x over {E x = b, x >= 0}. Unboundedness is decided on the normalized recession cone
/// {E d = 0, d >= 0, sum d = 1}, whose vertices are the extreme rays.
inline Result maximize(const QMatrix& e, const std::vector<Q>& b, const std::vector<Q>& c) {
  Result out;
  bool feasible = false;
  for_each_vertex(e, b, [&](const std::vector<Q>& x) {
    Q v = 0;
    for (std::size_t j = 0; j < x.size(); ++j) v += c[j] * x[j];
    if (!feasible || v > out.value) {
      out.value = v;
      out.x = x;
    }
    feasible = true;
  });
  if (!feasible) return out;

  QMatrix cone = e;
  std::vector<Q> zero(e.size(), 0);
  cone.emplace_back(c.size(), Q(1));
  zero.emplace_back(1);
  bool unbounded = false;
  for_each_vertex(cone, zero, [&](const std::vector<Q>& d) {
    Q v = 0;
    for (std::size_t j = 0; j < d.size(); ++j) v += c[j] * d[j];
    if (v > 0) unbounded = true;
  });
  out.status = unbounded ? Status::Unbounded : Status::Optimal;
  return out;
}

inline double to_double(const Q& q) { return q.get_d(); }

}  // namespace oracle
