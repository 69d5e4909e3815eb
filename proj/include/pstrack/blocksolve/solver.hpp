#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pstrack/blocksolve/schedule.hpp"
#include "pstrack/linalg/lu.hpp"
#include "pstrack/work_crew.hpp"

namespace pstrack {

/// Lower triangular block Toeplitz system with blocks A_0..A_d on the
/// diagonals and right-hand sides b_0..b_d.
template <xprec::working_real R>
struct block_toeplitz_system {
  std::vector<matrix<R>> blocks;
  std::vector<cvector<R>> rhs;

  std::size_t size() const noexcept { return blocks.empty() ? 0 : blocks.front().rows(); }
  std::size_t degree() const noexcept { return blocks.empty() ? 0 : blocks.size() - 1; }

  void validate() const {
    if (blocks.empty()) throw dimension_error("block system has no blocks");
    if (rhs.size() != blocks.size()) throw dimension_error("block system needs one right-hand side per block");
    const std::size_t n = size();
    for (const auto& a : blocks)
      if (a.rows() != n || a.cols() != n) throw dimension_error("blocks must be square of one size");
    for (const auto& b : rhs)
      if (b.size() != n) throw dimension_error("right-hand side length does not match the blocks");
  }
};

namespace detail {

template <xprec::working_real R>
struct block_solve_state {
  const block_toeplitz_system<R>& sys;
  std::vector<cvector<R>> b;
  std::vector<cvector<R>> x;
  std::optional<lu_factors<R>> f0;

  explicit block_solve_state(const block_toeplitz_system<R>& s)
      : sys(s), b(s.rhs), x(s.blocks.size()) {}

  void run(const pipeline_op& op) {
    switch (op.what) {
      case pipeline_op::kind::factor:
        f0 = lu_factor(sys.blocks[0]);
        break;
      case pipeline_op::kind::solve:
        x[op.k] = lu_solve(*f0, b[op.k]);
        break;
      case pipeline_op::kind::update: {
        const auto& a = sys.blocks[op.j - op.k];
        auto& target = b[op.j];
        const auto& src = x[op.k];
        const std::size_t n = src.size();
        for (std::size_t r = 0; r < n; ++r) {
          xprec::xcomplex<R> acc;
          for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * src[c];
          target[r] -= acc;
        }
        break;
      }
    }
  }
};

}  // namespace detail

/// x_k = A_0^{-1} (b_k - sum_{i=1..k} A_i x_{k-i}) using one factorization of A_0.
template <xprec::working_real R>
std::vector<cvector<R>> solve_sequential(const block_toeplitz_system<R>& sys) {
  sys.validate();
  detail::block_solve_state<R> st(sys);
  for (const auto& stage : make_schedule(sys.degree(), 1).stages)
    for (const auto& op : stage) st.run(op);
  return std::move(st.x);
}

/// Runs the greedy schedule for crew.size() workers, one stage at a time.
/// Every b_j sees the same update order as in the sequential solve, so the
/// result is bitwise identical for any crew size.
template <xprec::working_real R>
std::vector<cvector<R>> solve_pipelined(const block_toeplitz_system<R>& sys, work_crew& crew) {
  sys.validate();
  detail::block_solve_state<R> st(sys);
  for (const auto& stage : make_schedule(sys.degree(), crew.size()).stages) {
    if (stage.size() == 1)
      st.run(stage.front());
    else
      crew.for_each(stage.size(), [&](std::size_t i, std::size_t) { st.run(stage[i]); });
  }
  return std::move(st.x);
}

template <xprec::working_real R>
std::vector<cvector<R>> solve_pipelined(const block_toeplitz_system<R>& sys, std::size_t workers) {
  work_crew crew(workers);
  return solve_pipelined(sys, crew);
}

/// Right-hand sides b_k = sum_{i=0..k} A_i x_{k-i} for given blocks and solution.
template <xprec::working_real R>
std::vector<cvector<R>> block_multiply(const std::vector<matrix<R>>& blocks, const std::vector<cvector<R>>& x) {
  if (blocks.size() != x.size()) throw dimension_error("block product needs one vector per block");
  std::vector<cvector<R>> b;
  for (std::size_t k = 0; k < x.size(); ++k) {
    cvector<R> acc(x[k].size());
    for (std::size_t i = 0; i <= k; ++i) {
      const auto y = blocks[i] * x[k - i];
      for (std::size_t r = 0; r < acc.size(); ++r) acc[r] += y[r];
    }
    b.push_back(std::move(acc));
  }
  return b;
}

}  // namespace pstrack
