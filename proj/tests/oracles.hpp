// Independent oracles used by the unit and acceptance suites. Everything in
// here deliberately avoids the library's computation paths: values are
// recomputed from first principles (enumeration, recursion, vertex
// enumeration, classic special-function series) so a test failure points at
// the implementation, not at a shared bug.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opprl/mdp.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Policy-value recursion and exhaustive policy enumeration
// ---------------------------------------------------------------------------

// Expected return of a fixed policy from (state, step), by direct recursion
// over the transition tree rather than a value-table sweep.
inline double policy_value_recursive(const opprl::FiniteHorizonMdp& mdp,
                                     const opprl::Policy& policy, int state,
                                     int step) {
  if (step == mdp.horizon) return 0.0;
  const int action = policy.action(state, step);
  double expected = 0.0;
  for (int next = 0; next < mdp.num_states; ++next) {
    const double p = mdp.transition(state, action, next);
    if (p > 0.0)
      expected += p * policy_value_recursive(mdp, policy, next, step + 1);
  }
  return mdp.reward(state, action) + mdp.discount * expected;
}

// Pointwise-best values over all A^(S*H) deterministic nonstationary
// policies. Feasible for S <= 3, A <= 2, H <= 3.
inline std::vector<double> enumerate_optimal_values(
    const opprl::FiniteHorizonMdp& mdp) {
  const int cells = mdp.num_states * mdp.horizon;
  std::vector<double> best(
      static_cast<std::size_t>(mdp.num_states) * mdp.horizon,
      -std::numeric_limits<double>::infinity());

  opprl::Policy policy(mdp.num_states, mdp.horizon);
  std::vector<int> digits(cells, 0);
  for (;;) {
    for (int h = 0; h < mdp.horizon; ++h)
      for (int s = 0; s < mdp.num_states; ++s)
        policy.action(s, h) = digits[h * mdp.num_states + s];
    for (int h = 0; h < mdp.horizon; ++h)
      for (int s = 0; s < mdp.num_states; ++s) {
        const std::size_t i =
            static_cast<std::size_t>(h) * mdp.num_states + s;
        best[i] =
            std::max(best[i], policy_value_recursive(mdp, policy, s, h));
      }

    int pos = cells - 1;
    while (pos >= 0 && ++digits[pos] == mdp.num_actions) digits[pos--] = 0;
    if (pos < 0) return best;  // (step, state) row-major
  }
}

// Independently coded backward induction for the optimal start value.
inline double optimal_start_value_dp(const opprl::FiniteHorizonMdp& mdp) {
  std::vector<double> future(mdp.num_states, 0.0);
  std::vector<double> current(mdp.num_states, 0.0);
  for (int h = mdp.horizon - 1; h >= 0; --h) {
    for (int s = 0; s < mdp.num_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions; ++a) {
        double q = mdp.reward(s, a);
        for (int next = 0; next < mdp.num_states; ++next)
          q += mdp.discount * mdp.transition(s, a, next) * future[next];
        best = std::max(best, q);
      }
      current[s] = best;
    }
    std::swap(future, current);
  }
  return future[mdp.start_state];
}

// ---------------------------------------------------------------------------
// Linear program max v.p over {||p - p_hat||_1 <= d} x simplex, by vertex
// enumeration
// ---------------------------------------------------------------------------

namespace detail {

// Solves the n x n system by Gaussian elimination with partial pivoting.
// Returns false on a (near-)singular matrix.
inline bool solve_linear(std::vector<double> a, std::vector<double> b,
                         int n, std::vector<double>& x) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int row = col + 1; row < n; ++row)
      if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col]))
        pivot = row;
    if (std::abs(a[pivot * n + col]) < 1e-12) return false;
    for (int k = 0; k < n; ++k)
      std::swap(a[col * n + k], a[pivot * n + k]);
    std::swap(b[col], b[pivot]);
    for (int row = col + 1; row < n; ++row) {
      const double f = a[row * n + col] / a[col * n + col];
      for (int k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
      b[row] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int row = n - 1; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < n; ++k) acc -= a[row * n + k] * x[k];
    x[row] = acc / a[row * n + row];
  }
  return true;
}

}  // namespace detail

// Exact maximum of sum_i values[i] * p[i] subject to p on the simplex and
// ||p - p_hat||_1 <= width. The feasible set is a polytope: the simplex
// equality plus p_i >= 0 and, for every sign vector sigma, a halfspace
// sigma.(p - p_hat) <= width. All vertices (n-1 active inequalities plus the
// equality) are enumerated.
inline double l1_ball_linear_max(const std::vector<double>& p_hat,
                                 const std::vector<double>& values,
                                 double width) {
  const int n = static_cast<int>(p_hat.size());
  // Inequality rows: coeff . p <= bound.
  std::vector<std::vector<double>> coeffs;
  std::vector<double> bounds;
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = -1.0;  // -p_i <= 0
    coeffs.push_back(row);
    bounds.push_back(0.0);
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> row(n);
    double offset = 0.0;
    for (int i = 0; i < n; ++i) {
      row[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      offset += row[i] * p_hat[i];
    }
    coeffs.push_back(row);
    bounds.push_back(width + offset);
  }

  const int m = static_cast<int>(coeffs.size());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(n - 1, 0);
  std::vector<double> a, b, x;

  // All (n-1)-subsets of the inequality constraints.
  std::vector<int> subset(n - 1);
  for (int i = 0; i < n - 1; ++i) subset[i] = i;
  for (;;) {
    a.assign(static_cast<std::size_t>(n) * n, 0.0);
    b.assign(n, 0.0);
    for (int i = 0; i < n; ++i) a[i] = 1.0;  // simplex equality
    b[0] = 1.0;
    for (int r = 0; r < n - 1; ++r) {
      for (int i = 0; i < n; ++i) a[(r + 1) * n + i] = coeffs[subset[r]][i];
      b[r + 1] = bounds[subset[r]];
    }
    if (detail::solve_linear(a, b, n, x)) {
      bool feasible = true;
      for (int i = 0; feasible && i < n; ++i)
        if (x[i] < -1e-9) feasible = false;
      double l1 = 0.0;
      for (int i = 0; i < n; ++i) l1 += std::abs(x[i] - p_hat[i]);
      if (l1 > width + 1e-9) feasible = false;
      if (feasible) {
        double objective = 0.0;
        for (int i = 0; i < n; ++i) objective += values[i] * x[i];
        best = std::max(best, objective);
      }
    }

    int pos = n - 2;
    while (pos >= 0 && subset[pos] == m - (n - 1) + pos) --pos;
    if (pos < 0) return best;
    ++subset[pos];
    for (int i = pos + 1; i < n - 1; ++i) subset[i] = subset[i - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Special functions (classic series / continued-fraction forms)
// ---------------------------------------------------------------------------

namespace detail {

inline double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b) via the continued fraction.
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

// Regularized lower incomplete gamma P(a, x) (series for x < a+1, continued
// fraction otherwise).
inline double incomplete_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 3e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  constexpr double kFpMin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 3e-16) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Chi-square upper-tail p-value.
inline double chi_square_p_value(double statistic, int dof) {
  return 1.0 - incomplete_gamma_p(dof / 2.0, statistic / 2.0);
}

// P(Bin(n, p) <= x), the lower tail used by the one-sided coverage tests.
inline double binomial_lower_tail(int n, double p, int x) {
  double total = 0.0;
  for (int k = 0; k <= x; ++k) {
    const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(n - k + 1.0) + k * std::log(p) +
                           (n - k) * std::log1p(-p);
    total += std::exp(log_pmf);
  }
  return std::min(1.0, total);
}

// ---------------------------------------------------------------------------
// Grid search on foot: BFS shortest safe path on a rectangular grid
// ---------------------------------------------------------------------------

// Number of moves on the shortest path from start to goal that avoids the
// blocked cells (4-neighborhood, clamped edges); -1 if unreachable.
inline int bfs_shortest_path(int rows, int cols, int start, int goal,
                             const std::vector<int>& blocked) {
  std::vector<int> distance(static_cast<std::size_t>(rows) * cols, -1);
  std::vector<int> frontier{start};
  distance[start] = 0;
  while (!frontier.empty()) {
    std::vector<int> next_frontier;
    for (const int cell : frontier) {
      if (cell == goal) return distance[cell];
      const int row = cell / cols, col = cell % cols;
      const std::array<int, 4> moves{
          std::max(row - 1, 0) * cols + col,
          std::min(row + 1, rows - 1) * cols + col,
          row * cols + std::min(col + 1, cols - 1),
          row * cols + std::max(col - 1, 0)};
      for (const int next : moves) {
        if (distance[next] >= 0) continue;
        if (std::find(blocked.begin(), blocked.end(), next) != blocked.end())
          continue;
        distance[next] = distance[cell] + 1;
        next_frontier.push_back(next);
      }
    }
    frontier = std::move(next_frontier);
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Tiny CSV reader (no quoting; the project's CSVs never need it)
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::runtime_error("csv: no column named " + name);
    return static_cast<int>(it - header.begin());
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream stream(line);
    std::string field;
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (line.size() && line.back() == ',') fields.push_back("");
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace oracle
