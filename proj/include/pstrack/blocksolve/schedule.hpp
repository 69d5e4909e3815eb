#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <vector>

#include "pstrack/errors.hpp"

namespace pstrack {

/// One operation of the triangular block solve.
struct pipeline_op {
  enum class kind { factor, solve, update };
  kind what = kind::factor;
  std::size_t k = 0;  ///< solve: index of x_k; update: source x_k
  std::size_t j = 0;  ///< update target b_j

  static pipeline_op factor() { return {kind::factor, 0, 0}; }
  static pipeline_op solve(std::size_t k) { return {kind::solve, k, k}; }
  static pipeline_op update(std::size_t j, std::size_t k) { return {kind::update, k, j}; }

  friend bool operator==(const pipeline_op&, const pipeline_op&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const pipeline_op& op) {
  switch (op.what) {
    case pipeline_op::kind::factor:
      return os << "F0=F(A0)";
    case pipeline_op::kind::solve:
      return os << "x" << op.k << "=S(F0,b" << op.k << ")";
    case pipeline_op::kind::update:
      return os << "b" << op.j << "-=A" << (op.j - op.k) << "*x" << op.k;
  }
  return os;
}

/// Operations grouped into stages; operations in one stage are independent.
struct pipeline_schedule {
  std::size_t degree = 0;
  std::size_t workers = 1;
  std::vector<std::vector<pipeline_op>> stages;

  std::size_t steps() const noexcept { return stages.size(); }
};

/// Steps of the one-thread solve: one factorization, d+1 solves and
/// d(d+1)/2 updates.
constexpr std::size_t sequential_steps(std::size_t d) noexcept { return d * (d - 1) / 2 + 2 * (d + 1); }

/// Greedy list schedule on p workers. Each stage takes the ready solve
/// first, then ready updates by increasing target j, at most one update per
/// b_j. Updates into a given b_j therefore happen in increasing k, and with
/// p = 1 the stages are the left-looking sequential order.
inline pipeline_schedule make_schedule(std::size_t d, std::size_t p) {
  if (p == 0) throw domain_error("schedule needs at least one worker");
  pipeline_schedule s;
  s.degree = d;
  s.workers = p;
  s.stages.push_back({pipeline_op::factor()});
  std::vector<std::size_t> applied(d + 1, 0);  // updates done into b_j
  std::size_t solved = 0;                      // x_0 .. x_{solved-1} are known
  while (solved <= d) {
    std::vector<pipeline_op> stage;
    if (applied[solved] == solved) stage.push_back(pipeline_op::solve(solved));
    for (std::size_t j = solved; j <= d && stage.size() < p; ++j) {
      const std::size_t k = applied[j];
      if (k < j && k < solved) stage.push_back(pipeline_op::update(j, k));
    }
    for (const auto& op : stage) {
      if (op.what == pipeline_op::kind::solve)
        ++solved;
      else
        ++applied[op.j];
    }
    s.stages.push_back(std::move(stage));
  }
  return s;
}

/// Exact non-negative fraction in lowest terms.
struct rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  rational() = default;
  rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d == 0) throw domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const rational&, const rational&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const rational& r) { return os << r.num << "/" << r.den; }

/// Ratio of sequential steps to pipelined steps on p workers.
inline rational model_speedup(std::size_t d, std::size_t p) {
  if (d == 0) throw domain_error("speedup model needs degree at least one");
  return {static_cast<std::int64_t>(sequential_steps(d)), static_cast<std::int64_t>(make_schedule(d, p).steps())};
}

/// 1 + d(d-1)/(4(d+1)), the speedup reached with enough workers.
inline rational limiting_speedup(std::size_t d) {
  const auto dd = static_cast<std::int64_t>(d);
  return {4 * (dd + 1) + dd * (dd - 1), 4 * (dd + 1)};
}

/// Fewest workers for which the schedule reaches 2(d+1) steps.
inline std::size_t saturating_workers(std::size_t d) {
  for (std::size_t p = 1;; ++p)
    if (make_schedule(d, p).steps() == 2 * (d + 1)) return p;
}

}  // namespace pstrack
