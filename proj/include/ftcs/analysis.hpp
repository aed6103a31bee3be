// analysis.hpp
//
// Counting N(m,n), the number of m x n members, by dynamic programming over
// rows of the identifier grid, and capacity estimates built from those
// counts. A DP state is one full grid row: a chain of red edges of length
// n - w. Row S may be followed by row T when T[0] is a blue successor of
// S[0] and every later T[k] completes the quadruple (S[k-1], S[k], T[k-1], T[k]).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ftcs/core.hpp"
#include "ftcs/oracle.hpp"
#include "ftcs/presentation.hpp"

namespace ftcs {

inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 22;

namespace detail {

class RowStates {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit RowStates(std::size_t width) : width_(width) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return width_ == 0 ? 0 : flat_.size() / width_; }

  std::span<const VertexId> state(std::size_t k) const {
    return std::span<const VertexId>(flat_).subspan(k * width_, width_);
  }

  // Prefix trie over red chains. A node stands for a chain prefix; its slots
  // follow red_out of the prefix's last vertex and hold the child node, or the
  // state index at the last level. Lookup walks one slot per vertex.
  std::size_t root(VertexId head) const { return roots_[head - 1]; }
  std::size_t step(const Presentation& g, std::size_t node, VertexId last, VertexId v) const {
    if (node == npos) return npos;
    const auto out = g.red_out(last);
    const auto it = std::lower_bound(out.begin(), out.end(), v);
    if (it == out.end() || *it != v) return npos;
    return slots_[base_[node] + static_cast<std::size_t>(it - out.begin())];
  }

 private:
  friend RowStates red_chains(const Presentation&, std::size_t, std::uint64_t, bool);

  std::size_t width_;
  std::vector<VertexId> flat_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> slots_;
};

// Red chains with `width` vertices, in lexicographic order. With `cyclic`,
// only chains whose last vertex also has a red edge back to the first.
inline RowStates red_chains(const Presentation& g, std::size_t width, std::uint64_t budget, bool cyclic) {
  RowStates states(width);
  std::vector<VertexId> path;
  const auto push_state = [&] {
    if (cyclic && !g.has_red(path.back(), path.front())) return RowStates::npos;
    if (states.size() >= budget) throw BudgetExceeded("row state space exceeds the budget");
    states.flat_.insert(states.flat_.end(), path.begin(), path.end());
    return states.size() - 1;
  };
  const std::function<std::size_t()> grow = [&]() -> std::size_t {
    if (path.size() == width) return push_state();
    const std::size_t node = states.base_.size();
    const auto out = g.red_out(path.back());
    states.base_.push_back(states.slots_.size());
    states.slots_.resize(states.slots_.size() + out.size(), RowStates::npos);
    for (std::size_t k = 0; k < out.size(); ++k) {
      path.push_back(out[k]);
      const std::size_t child = grow();
      states.slots_[states.base_[node] + k] = child;
      path.pop_back();
    }
    return node;
  };
  for (VertexId head = 1; head <= g.vertex_count(); ++head) {
    path.assign(1, head);
    states.roots_.push_back(grow());
  }
  return states;
}

struct Transitions {
  std::vector<std::size_t> offsets;  // targets of state k: [offsets[k], offsets[k+1])
  std::vector<std::size_t> targets;
};

inline Transitions row_transitions(const Presentation& g, const QuadrupleTable& quads, const RowStates& states,
                                   std::uint64_t budget) {
  Transitions t;
  t.offsets.reserve(states.size() + 1);
  t.offsets.push_back(0);
  const std::size_t width = states.width();
  std::vector<VertexId> target(width);
  std::vector<std::size_t> node(width);
  std::vector<std::span<const VertexId>> options(width);
  std::vector<std::size_t> next(width);
  const std::uint64_t edge_budget = budget * 64;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto src = states.state(k);
    std::size_t pos = 0;
    options[0] = g.blue_out(src[0]);
    next[0] = 0;
    for (;;) {
      if (next[pos] == options[pos].size()) {
        if (pos == 0) break;
        --pos;
        continue;
      }
      target[pos] = options[pos][next[pos]++];
      node[pos] = pos == 0 ? states.root(target[0]) : states.step(g, node[pos - 1], target[pos - 1], target[pos]);
      if (node[pos] == RowStates::npos) continue;
      if (pos + 1 == width) {
        if (t.targets.size() >= edge_budget) throw BudgetExceeded("row transition count exceeds the budget");
        t.targets.push_back(node[pos]);
        continue;
      }
      ++pos;
      options[pos] = quads.completions(src[pos - 1], src[pos], target[pos - 1]);
      next[pos] = 0;
    }
    t.offsets.push_back(t.targets.size());
  }
  return t;
}

// acc += v; false on overflow.
inline bool accumulate(std::uint64_t& acc, std::uint64_t v) noexcept { return !__builtin_add_overflow(acc, v, &acc); }
inline bool accumulate(unsigned __int128& acc, unsigned __int128 v) noexcept { return !__builtin_add_overflow(acc, v, &acc); }
inline bool accumulate(BigCount& acc, const BigCount& v) {
  acc += v;
  return true;
}

inline BigCount to_big(std::uint64_t v) { return BigCount(v); }
inline BigCount to_big(unsigned __int128 v) {
  return (BigCount(static_cast<std::uint64_t>(v >> 64)) << 64) | BigCount(static_cast<std::uint64_t>(v));
}
inline BigCount to_big(const BigCount& v) { return v; }

// Totals after 0, 1, ..., steps transitions starting from one of every state.
template <class Count>
std::optional<std::vector<BigCount>> propagate_totals(const Transitions& t, std::size_t states, std::size_t steps) {
  std::vector<Count> cur(states, Count(1)), nxt(states);
  std::vector<BigCount> totals;
  for (std::size_t step = 0;; ++step) {
    Count total = 0;
    for (const Count& c : cur)
      if (!accumulate(total, c)) return std::nullopt;
    totals.push_back(to_big(total));
    if (step == steps) break;
    std::fill(nxt.begin(), nxt.end(), Count(0));
    for (std::size_t s = 0; s < states; ++s) {
      if (cur[s] == 0) continue;
      for (std::size_t e = t.offsets[s]; e < t.offsets[s + 1]; ++e)
        if (!accumulate(nxt[t.targets[e]], cur[s])) return std::nullopt;
    }
    std::swap(cur, nxt);
  }
  return totals;
}

// traces[p-1] = trace(A^p) for p = 1..max_p.
template <class Count>
std::optional<std::vector<BigCount>> propagate_traces(const Transitions& t, std::size_t states, std::size_t max_p) {
  std::vector<Count> traces(max_p, Count(0));
  std::vector<Count> cur(states), nxt(states);
  for (std::size_t start = 0; start < states; ++start) {
    std::fill(cur.begin(), cur.end(), Count(0));
    cur[start] = 1;
    for (std::size_t p = 1; p <= max_p; ++p) {
      std::fill(nxt.begin(), nxt.end(), Count(0));
      for (std::size_t s = 0; s < states; ++s) {
        if (cur[s] == 0) continue;
        for (std::size_t e = t.offsets[s]; e < t.offsets[s + 1]; ++e)
          if (!accumulate(nxt[t.targets[e]], cur[s])) return std::nullopt;
      }
      std::swap(cur, nxt);
      if (!accumulate(traces[p - 1], cur[start])) return std::nullopt;
    }
  }
  std::vector<BigCount> out;
  for (const Count& c : traces) out.push_back(to_big(c));
  return out;
}

}  // namespace detail

// N(m, n) for m = h .. max_m (entry m - h), at fixed width n.
inline std::vector<BigCount> count_profile_column(const Presentation& g, const QuadrupleTable& quads,
                                                  std::size_t max_m, std::size_t n,
                                                  std::uint64_t budget = kDefaultStateBudget) {
  g.require(PresentationKind::combined);
  const auto& cs = g.system();
  if (max_m < cs.h() || n < cs.w()) throw DimensionError("count size is smaller than the window");
  const std::size_t steps = max_m - cs.h();
  if (cs.allowed_count() == 0) return std::vector<BigCount>(steps + 1, BigCount(0));
  const auto states = detail::red_chains(g, n - cs.w() + 1, budget, false);
  const auto t = detail::row_transitions(g, quads, states, budget);
  if (auto fast = detail::propagate_totals<std::uint64_t>(t, states.size(), steps)) return *fast;
  if (auto wide = detail::propagate_totals<unsigned __int128>(t, states.size(), steps)) return *wide;
  return *detail::propagate_totals<BigCount>(t, states.size(), steps);
}

inline BigCount count_by_profile(const Presentation& g, const QuadrupleTable& quads, std::size_t m, std::size_t n,
                                 std::uint64_t budget = kDefaultStateBudget) {
  return count_profile_column(g, quads, m, n, budget).back();
}

inline BigCount count_by_profile(const Presentation& g, std::size_t m, std::size_t n,
                                 std::uint64_t budget = kDefaultStateBudget) {
  return count_by_profile(g, quadruples(g), m, n, budget);
}

// Number of configurations on the p x q torus of window positions, i.e. of
// (p+h-1) x (q+w-1) members whose first h-1 rows repeat as the last h-1 rows
// and whose first w-1 columns repeat as the last w-1 columns. Entry p - 1 for
// p = 1 .. max_p.
inline std::vector<BigCount> count_torus_column(const Presentation& g, const QuadrupleTable& quads,
                                                std::size_t max_p, std::size_t q,
                                                std::uint64_t budget = kDefaultStateBudget) {
  g.require(PresentationKind::combined);
  if (max_p == 0 || q == 0) throw DimensionError("torus periods must be positive");
  if (g.vertex_count() == 0) return std::vector<BigCount>(max_p, BigCount(0));
  const auto states = detail::red_chains(g, q, budget, true);
  const auto t = detail::row_transitions(g, quads, states, budget);
  const long double work = static_cast<long double>(states.size()) * max_p * (t.targets.size() + states.size());
  if (work > static_cast<long double>(budget) * 256) throw BudgetExceeded("torus count exceeds the work budget");
  if (auto fast = detail::propagate_traces<std::uint64_t>(t, states.size(), max_p)) return *fast;
  if (auto wide = detail::propagate_traces<unsigned __int128>(t, states.size(), max_p)) return *wide;
  return *detail::propagate_traces<BigCount>(t, states.size(), max_p);
}

inline double log2_count(const BigCount& x) {
  if (x <= 0) return -std::numeric_limits<double>::infinity();
  const std::size_t bits = boost::multiprecision::msb(x);
  if (bits < 1000) return std::log2(x.convert_to<double>());
  const std::size_t shift = bits - 60;
  const BigCount top = x >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

struct CountTable {
  const ConstraintSystem* system = nullptr;
  std::map<std::pair<std::size_t, std::size_t>, BigCount> entries;

  const BigCount& at(std::size_t m, std::size_t n) const {
    const auto it = entries.find({m, n});
    if (it == entries.end()) throw RangeError("count table has no entry for this size");
    return it->second;
  }
};

// N(m, n) for every h <= m <= max_m, w <= n <= max_n.
inline CountTable build_count_table(const Presentation& g, const QuadrupleTable& quads, std::size_t max_m,
                                    std::size_t max_n, std::uint64_t budget = kDefaultStateBudget) {
  const auto& cs = g.system();
  CountTable table{&cs, {}};
  for (std::size_t n = cs.w(); n <= max_n; ++n) {
    const auto column = count_profile_column(g, quads, max_m, n, budget);
    for (std::size_t m = cs.h(); m <= max_m; ++m) table.entries[{m, n}] = column[m - cs.h()];
  }
  return table;
}

struct CapacityEstimate {
  bool empty = false;
  double lower = -std::numeric_limits<double>::infinity();
  double point = -std::numeric_limits<double>::infinity();
  double upper = -std::numeric_limits<double>::infinity();
  // point = log2 N(point_rows, point_cols) / (point_rows * point_cols)
  std::size_t point_rows = 0, point_cols = 0;
  // upper = log2(N(m, ratio_cols) / N(m, ratio_cols - 1)) / m minimised at m = upper_strip_rows
  std::size_t upper_strip_rows = 0, ratio_cols = 0;
  // lower comes from tiling with a torus of these window periods
  std::size_t lower_period_rows = 0, lower_period_cols = 0;
  BigCount torus_count = 0;
};

// point: free-boundary density at (max_m, max_n).
// upper: min over strip heights m of log2(lambda_m) / m, lambda_m estimated by
//   N(m, max_n) / N(m, max_n - 1).
// lower: a p x q torus configuration count T with K frame cells (the first
//   h-1 rows or w-1 columns of one period) gives (log2 T - K log2 |alphabet|)
//   / (p q): some frame is shared by at least T / |alphabet|^K tori, and tori
//   sharing a frame tile the plane freely. Maximised over the periods the
//   budget allows.
inline CapacityEstimate capacity_estimate(const Presentation& g, const QuadrupleTable& quads, std::size_t max_m,
                                          std::size_t max_n, std::uint64_t budget = kDefaultStateBudget) {
  g.require(PresentationKind::combined);
  const auto& cs = g.system();
  if (max_m < cs.h() || max_n < cs.w() + 1)
    throw DimensionError("capacity needs max_m >= h and max_n >= w + 1");
  CapacityEstimate est;
  est.point_rows = max_m;
  est.point_cols = max_n;
  est.ratio_cols = max_n;
  if (cs.allowed_count() == 0) {
    est.empty = true;
    return est;
  }
  const auto wide = count_profile_column(g, quads, max_m, max_n, budget);
  const auto narrow = count_profile_column(g, quads, max_m, max_n - 1, budget);
  const BigCount& total = wide.back();
  if (total == 0) {
    est.empty = true;
    return est;
  }
  est.point = log2_count(total) / static_cast<double>(max_m * max_n);

  est.upper = std::numeric_limits<double>::infinity();
  for (std::size_t m = cs.h(); m <= max_m; ++m) {
    const BigCount& a = wide[m - cs.h()];
    const BigCount& b = narrow[m - cs.h()];
    if (a == 0 || b == 0) continue;
    const double rate = (log2_count(a) - log2_count(b)) / static_cast<double>(m);
    if (rate < est.upper) {
      est.upper = rate;
      est.upper_strip_rows = m;
    }
  }

  const std::size_t max_p = max_m - cs.h() + 1, max_q = max_n - cs.w() + 1;
  const double log_q = std::log2(static_cast<double>(cs.alphabet().size()));
  for (std::size_t q = 1; q <= max_q; ++q) {
    std::vector<BigCount> tori;
    try {
      tori = count_torus_column(g, quads, max_p, q, budget);
    } catch (const BudgetExceeded&) {
      break;
    }
    for (std::size_t p = 1; p <= max_p; ++p) {
      const BigCount& t = tori[p - 1];
      if (t == 0) continue;
      const std::size_t inner_rows = p >= cs.h() - 1 ? p - (cs.h() - 1) : 0;
      const std::size_t inner_cols = q >= cs.w() - 1 ? q - (cs.w() - 1) : 0;
      const double frame = static_cast<double>(p * q - inner_rows * inner_cols);
      const double bound = (log2_count(t) - frame * log_q) / static_cast<double>(p * q);
      if (bound > est.lower) {
        est.lower = bound;
        est.lower_period_rows = p;
        est.lower_period_cols = q;
        est.torus_count = t;
      }
    }
  }
  return est;
}

inline CapacityEstimate capacity_estimate(const Presentation& g, std::size_t max_m, std::size_t max_n,
                                          std::uint64_t budget = kDefaultStateBudget) {
  return capacity_estimate(g, quadruples(g), max_m, max_n, budget);
}

}  // namespace ftcs
