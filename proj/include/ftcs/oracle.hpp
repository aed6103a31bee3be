// oracle.hpp
//
// Brute-force reference: scans all |alphabet|^(m*n) candidate blocks cell by
// cell in row-major order, pruning as soon as a completed window is
// forbidden. Uses only the forbidden set, never the presentations.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ftcs/core.hpp"

namespace ftcs {

using BigCount = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultEnumerateBudget = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultCountBudget = std::uint64_t{1} << 36;

namespace detail {

class ForbiddenScanner {
 public:
  ForbiddenScanner(const ConstraintSystem& cs, std::size_t m, std::size_t n, std::uint64_t budget)
      : h_(cs.h()), w_(cs.w()), q_(cs.alphabet().size()), block_(m, n) {
    if (!bounded_power(q_, static_cast<std::uint64_t>(m) * n, budget))
      throw BudgetExceeded("brute-force candidate space exceeds the budget");
    const auto space = *bounded_power(q_, h_ * w_, kMaxWindowSpace);
    banned_.assign(space, false);
    for (const Block& f : cs.forbidden()) banned_[window_code(f, 0, 0, h_, w_, q_)] = true;
  }

  // Visits members in canonical (lexicographic row-major) order.
  void scan(const std::function<void(const Block&)>& visit) {
    const std::size_t total = block_.rows() * block_.cols();
    if (total == 0) {
      visit(block_);
      return;
    }
    std::size_t k = 0;
    std::vector<int> value(total, -1);
    for (;;) {
      if (++value[k] == static_cast<int>(q_)) {
        value[k] = -1;
        if (k == 0) return;
        --k;
        continue;
      }
      const std::size_t r = k / block_.cols(), c = k % block_.cols();
      block_.cell(r, c) = static_cast<Symbol>(value[k]);
      if (r + 1 >= h_ && c + 1 >= w_ && banned_[window_code(block_, r + 1 - h_, c + 1 - w_, h_, w_, q_)]) continue;
      if (k + 1 == total) {
        visit(block_);
        continue;
      }
      ++k;
    }
  }

 private:
  std::size_t h_, w_;
  std::uint64_t q_;
  Block block_;
  std::vector<bool> banned_;
};

}  // namespace detail

// All members of size m x n, in canonical order.
inline std::vector<Block> enumerate_members(const ConstraintSystem& cs, std::size_t m, std::size_t n,
                                            std::uint64_t budget = kDefaultEnumerateBudget) {
  std::vector<Block> out;
  detail::ForbiddenScanner(cs, m, n, budget).scan([&](const Block& b) { out.push_back(b); });
  return out;
}

inline BigCount count_members(const ConstraintSystem& cs, std::size_t m, std::size_t n,
                              std::uint64_t budget = kDefaultCountBudget) {
  std::uint64_t count = 0;
  detail::ForbiddenScanner(cs, m, n, budget).scan([&](const Block&) { ++count; });
  return BigCount(count);
}

}  // namespace ftcs
