// generation.hpp
//
// Generating members from the combined graph. A block of size m x n is
// encoded by its grid of window identifiers s(i,j), indexed by the
// right-bottom corner of each h x w window (h <= i <= m, w <= j <= n).
// Cells on the first grid row or column only need one edge to an already
// placed neighbour; every other cell must complete a quadruple with its
// three upper-left neighbours.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ftcs/core.hpp"
#include "ftcs/presentation.hpp"

namespace ftcs {

class DeadEnd : public Error {
 public:
  using Error::Error;
};

class NotRealizable : public Error {
 public:
  using Error::Error;
};

class UnfilledPredecessor : public Error {
 public:
  using Error::Error;
};

class ReconstructionError : public Error {
 public:
  using Error::Error;
};

// Right-bottom coordinates of a window.
struct GridCell {
  std::size_t i;
  std::size_t j;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

class IdentifierGrid {
 public:
  IdentifierGrid(std::size_t h, std::size_t w, std::size_t m, std::size_t n) : h_(h), w_(w), m_(m), n_(n) {
    if (m < h || n < w) throw DimensionError("target block is smaller than the window");
    ids_.assign(grid_rows() * grid_cols(), kNoVertex);
  }

  std::size_t h() const noexcept { return h_; }
  std::size_t w() const noexcept { return w_; }
  std::size_t block_rows() const noexcept { return m_; }
  std::size_t block_cols() const noexcept { return n_; }
  std::size_t grid_rows() const noexcept { return m_ - h_ + 1; }
  std::size_t grid_cols() const noexcept { return n_ - w_ + 1; }

  bool contains(std::size_t i, std::size_t j) const noexcept { return i >= h_ && i <= m_ && j >= w_ && j <= n_; }

  VertexId at(std::size_t i, std::size_t j) const { return ids_[index(i, j)]; }
  bool is_set(std::size_t i, std::size_t j) const { return at(i, j) != kNoVertex; }
  void set(std::size_t i, std::size_t j, VertexId id) { ids_[index(i, j)] = id; }
  void clear(std::size_t i, std::size_t j) { ids_[index(i, j)] = kNoVertex; }

  bool complete() const noexcept {
    return std::none_of(ids_.begin(), ids_.end(), [](VertexId v) { return v == kNoVertex; });
  }

  // Enlarges the target; placed identifiers keep their coordinates.
  void grow(std::size_t m, std::size_t n) {
    if (m < m_ || n < n_) throw DimensionError("a grid can only grow");
    std::vector<VertexId> ids((m - h_ + 1) * (n - w_ + 1), kNoVertex);
    for (std::size_t r = 0; r < grid_rows(); ++r)
      for (std::size_t c = 0; c < grid_cols(); ++c) ids[r * (n - w_ + 1) + c] = ids_[r * grid_cols() + c];
    ids_ = std::move(ids);
    m_ = m;
    n_ = n;
  }

  // Stitches the windows of a complete grid into the m x n block, checking
  // that overlapping windows agree on every shared cell.
  Block reconstruct(const ConstraintSystem& cs) const {
    if (!complete()) throw ReconstructionError("identifier grid is incomplete");
    Block out(m_, n_);
    std::vector<bool> written(m_ * n_, false);
    for (std::size_t i = h_; i <= m_; ++i) {
      for (std::size_t j = w_; j <= n_; ++j) {
        const Block& v = cs.block(at(i, j));
        const std::size_t top = i - h_, left = j - w_;
        for (std::size_t r = 0; r < h_; ++r) {
          for (std::size_t c = 0; c < w_; ++c) {
            const std::size_t k = (top + r) * n_ + left + c;
            if (written[k] && out.cell(top + r, left + c) != v.cell(r, c))
              throw ReconstructionError("overlapping windows disagree at (" + std::to_string(top + r + 1) + "," +
                                        std::to_string(left + c + 1) + ")");
            out.cell(top + r, left + c) = v.cell(r, c);
            written[k] = true;
          }
        }
      }
    }
    return out;
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (!contains(i, j)) throw RangeError("grid cell out of range");
    return (i - h_) * grid_cols() + (j - w_);
  }

  std::size_t h_, w_, m_, n_;
  std::vector<VertexId> ids_;
};

enum class StepCase {
  first,     // (h, w): any vertex
  top_row,   // i = h, j > w: red edge from the left neighbour
  left_col,  // j = w, i > h: blue edge from the upper neighbour
  interior,  // i > h, j > w: quadruple with the three upper-left neighbours
};

inline StepCase step_case(std::size_t h, std::size_t w, GridCell cell) noexcept {
  if (cell.i == h && cell.j == w) return StepCase::first;
  if (cell.i == h) return StepCase::top_row;
  if (cell.j == w) return StepCase::left_col;
  return StepCase::interior;
}

// Cases "first", "top_row" and "left_col" together form Case 1.
inline bool is_case1(StepCase s) noexcept { return s != StepCase::interior; }

inline std::vector<VertexId> candidates(const Presentation& g, const QuadrupleTable& quads,
                                        const IdentifierGrid& grid, std::size_t i, std::size_t j) {
  g.require(PresentationKind::combined);
  if (!grid.contains(i, j)) throw RangeError("grid cell out of range");
  auto need = [&](std::size_t pi, std::size_t pj) {
    const VertexId v = grid.at(pi, pj);
    if (v == kNoVertex)
      throw UnfilledPredecessor("cell (" + std::to_string(i) + "," + std::to_string(j) + ") needs (" +
                                std::to_string(pi) + "," + std::to_string(pj) + ") first");
    return v;
  };
  switch (step_case(grid.h(), grid.w(), {i, j})) {
    case StepCase::first: {
      std::vector<VertexId> all(g.vertex_count());
      for (VertexId v = 1; v <= g.vertex_count(); ++v) all[v - 1] = v;
      return all;
    }
    case StepCase::top_row: {
      const auto out = g.red_out(need(i, j - 1));
      return {out.begin(), out.end()};
    }
    case StepCase::left_col: {
      const auto out = g.blue_out(need(i - 1, j));
      return {out.begin(), out.end()};
    }
    case StepCase::interior: {
      const VertexId a = need(i - 1, j - 1), b = need(i - 1, j), c = need(i, j - 1);
      const auto out = quads.completions(a, b, c);
      return {out.begin(), out.end()};
    }
  }
  return {};
}

using Schedule = std::vector<GridCell>;

enum class ScheduleKind { row_major, col_major, interleaved };

inline std::optional<ScheduleKind> parse_schedule_kind(std::string_view name) {
  if (name == "row-major") return ScheduleKind::row_major;
  if (name == "col-major") return ScheduleKind::col_major;
  if (name == "interleaved") return ScheduleKind::interleaved;
  return std::nullopt;
}

// interleaved: bands of two grid columns, filled row by row within a band.
// On a 3 x 5 hard-square target this visits (2,2) (2,3) (3,2) (3,3) (2,4)
// (2,5) (3,4) (3,5).
inline Schedule make_schedule(ScheduleKind kind, std::size_t h, std::size_t w, std::size_t m, std::size_t n) {
  if (m < h || n < w) throw DimensionError("target block is smaller than the window");
  Schedule s;
  switch (kind) {
    case ScheduleKind::row_major:
      for (std::size_t i = h; i <= m; ++i)
        for (std::size_t j = w; j <= n; ++j) s.push_back({i, j});
      break;
    case ScheduleKind::col_major:
      for (std::size_t j = w; j <= n; ++j)
        for (std::size_t i = h; i <= m; ++i) s.push_back({i, j});
      break;
    case ScheduleKind::interleaved:
      for (std::size_t band = w; band <= n; band += 2)
        for (std::size_t i = h; i <= m; ++i)
          for (std::size_t j = band; j <= std::min(band + 1, n); ++j) s.push_back({i, j});
      break;
  }
  return s;
}

// Throws unless `s` visits every cell of `grid` once and each cell after
// its left, upper and upper-left neighbours (cells already set count as done).
inline void validate_schedule(const Schedule& s, const IdentifierGrid& grid) {
  std::vector<bool> done(grid.grid_rows() * grid.grid_cols(), false);
  auto slot = [&](GridCell c) { return (c.i - grid.h()) * grid.grid_cols() + (c.j - grid.w()); };
  for (std::size_t i = grid.h(); i <= grid.block_rows(); ++i)
    for (std::size_t j = grid.w(); j <= grid.block_cols(); ++j)
      if (grid.is_set(i, j)) done[slot({i, j})] = true;
  std::vector<bool> visited(done.size(), false);
  for (const GridCell& c : s) {
    if (!grid.contains(c.i, c.j)) throw RangeError("schedule visits a cell outside the grid");
    if (visited[slot(c)]) throw Error("schedule visits a cell twice");
    auto ready = [&](std::size_t pi, std::size_t pj) { return !grid.contains(pi, pj) || done[slot({pi, pj})]; };
    if (!ready(c.i, c.j - 1) || !ready(c.i - 1, c.j) || !ready(c.i - 1, c.j - 1))
      throw UnfilledPredecessor("schedule visits (" + std::to_string(c.i) + "," + std::to_string(c.j) +
                                ") before its predecessors");
    visited[slot(c)] = true;
    done[slot(c)] = true;
  }
  for (std::size_t k = 0; k < done.size(); ++k)
    if (!done[k]) throw Error("schedule leaves a cell unfilled");
}

enum class ChooserMode {
  random,     // seeded uniform order without replacement
  ascending,  // identifiers in increasing order; used for exhaustive enumeration
};

struct GenerationPolicy {
  ScheduleKind schedule = ScheduleKind::row_major;
  std::optional<Schedule> custom_schedule;
  ChooserMode chooser = ChooserMode::random;
  bool backtracking = true;
  std::uint64_t seed = 0;
};

struct StepRecord {
  GridCell cell;
  StepCase kind;
  VertexId id;
  std::size_t candidate_count;
};

struct GenerationStats {
  std::size_t dead_ends = 0;   // cells that had no admissible candidate
  std::size_t backtracks = 0;  // retreats to an earlier cell after a failure
  std::size_t completions = 0;
  std::vector<StepRecord> steps;  // the last completed fill, in schedule order
};

namespace detail {

// Depth-first fill of the unset cells of `grid` along `schedule`. on_complete
// returns true to keep searching (enumeration) or false to stop.
inline bool search_grid(const Presentation& g, const QuadrupleTable& quads, IdentifierGrid& grid,
                        const Schedule& schedule, const GenerationPolicy& policy, GenerationStats& stats,
                        const std::function<bool(const IdentifierGrid&)>& on_complete) {
  struct Frame {
    std::vector<VertexId> options;
    std::size_t next = 0;
    bool started = false;
    bool preset = false;
  };
  std::mt19937_64 rng(policy.seed);
  std::vector<Frame> frames(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) frames[k].preset = grid.is_set(schedule[k].i, schedule[k].j);

  auto record = [&] {
    stats.steps.clear();
    for (std::size_t k = 0; k < schedule.size(); ++k) {
      const GridCell c = schedule[k];
      stats.steps.push_back({c, step_case(grid.h(), grid.w(), c), grid.at(c.i, c.j), frames[k].options.size()});
    }
  };

  if (schedule.empty()) {
    ++stats.completions;
    record();
    on_complete(grid);
    return true;
  }

  std::size_t pos = 0;
  bool found = false;
  for (;;) {
    Frame& f = frames[pos];
    const GridCell cell = schedule[pos];
    if (!f.started) {
      f.started = true;
      f.next = 0;
      if (f.preset) {
        const VertexId fixed = grid.at(cell.i, cell.j);
        grid.clear(cell.i, cell.j);
        auto cands = candidates(g, quads, grid, cell.i, cell.j);
        grid.set(cell.i, cell.j, fixed);
        f.options.clear();
        if (std::binary_search(cands.begin(), cands.end(), fixed)) f.options.push_back(fixed);
      } else {
        f.options = candidates(g, quads, grid, cell.i, cell.j);
        if (policy.chooser == ChooserMode::random) std::shuffle(f.options.begin(), f.options.end(), rng);
      }
      if (f.options.empty()) {
        ++stats.dead_ends;
        if (!policy.backtracking)
          throw DeadEnd("no admissible identifier for cell (" + std::to_string(cell.i) + "," +
                        std::to_string(cell.j) + ")");
      }
    }
    if (f.next < f.options.size()) {
      grid.set(cell.i, cell.j, f.options[f.next++]);
      if (pos + 1 < schedule.size()) {
        ++pos;
        continue;
      }
      ++stats.completions;
      found = true;
      record();
      if (!on_complete(grid)) return true;
      continue;  // try the next option of the last cell
    }
    // Options at this cell are exhausted: retreat.
    f.started = false;
    if (!f.preset) grid.clear(cell.i, cell.j);
    if (pos == 0) return found;
    if (!found) ++stats.backtracks;
    --pos;
  }
}

}  // namespace detail

// Fills every unset cell of `grid`. Cells that are already set are kept and
// only checked. Throws NotRealizable when exhaustive backtracking finds no
// completion and DeadEnd when backtracking is disabled and a cell is stuck.
inline void fill_grid(const Presentation& g, const QuadrupleTable& quads, IdentifierGrid& grid,
                      const GenerationPolicy& policy, GenerationStats* stats = nullptr) {
  g.require(PresentationKind::combined);
  GenerationStats local;
  GenerationStats& st = stats ? *stats : local;
  if (g.vertex_count() == 0) throw NotRealizable("the allowed set is empty");
  const Schedule schedule =
      policy.custom_schedule
          ? *policy.custom_schedule
          : make_schedule(policy.schedule, grid.h(), grid.w(), grid.block_rows(), grid.block_cols());
  validate_schedule(schedule, grid);
  const bool ok = detail::search_grid(g, quads, grid, schedule, policy, st, [](const IdentifierGrid&) { return false; });
  if (!ok) throw NotRealizable("no member of size " + std::to_string(grid.block_rows()) + "x" +
                               std::to_string(grid.block_cols()) + " exists");
}

inline Block generate_block(const Presentation& g, const QuadrupleTable& quads, std::size_t m, std::size_t n,
                            const GenerationPolicy& policy, GenerationStats* stats = nullptr) {
  g.require(PresentationKind::combined);
  const auto& cs = g.system();
  IdentifierGrid grid(cs.h(), cs.w(), m, n);
  fill_grid(g, quads, grid, policy, stats);
  return grid.reconstruct(cs);
}

inline Block generate_block(const Presentation& g, std::size_t m, std::size_t n, const GenerationPolicy& policy,
                            GenerationStats* stats = nullptr) {
  return generate_block(g, quadruples(g), m, n, policy, stats);
}

// Every m x n block reachable by the process under the policy's schedule,
// sorted. The chooser is ignored: all candidates are tried in ascending order.
inline std::vector<Block> enumerate_blocks(const Presentation& g, const QuadrupleTable& quads, std::size_t m,
                                           std::size_t n, const GenerationPolicy& policy,
                                           GenerationStats* stats = nullptr) {
  g.require(PresentationKind::combined);
  const auto& cs = g.system();
  GenerationStats local;
  GenerationStats& st = stats ? *stats : local;
  std::vector<Block> out;
  if (cs.allowed_count() == 0) return out;
  IdentifierGrid grid(cs.h(), cs.w(), m, n);
  const Schedule schedule =
      policy.custom_schedule ? *policy.custom_schedule : make_schedule(policy.schedule, cs.h(), cs.w(), m, n);
  validate_schedule(schedule, grid);
  GenerationPolicy exhaustive = policy;
  exhaustive.chooser = ChooserMode::ascending;
  exhaustive.backtracking = true;
  detail::search_grid(g, quads, grid, schedule, exhaustive, st, [&](const IdentifierGrid& full) {
    out.push_back(full.reconstruct(cs));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

template <EdgeColor Color>
Block generate_strip(const Presentation& g, VertexId head, std::size_t length, const GenerationPolicy& policy) {
  if (head < 1 || head > g.vertex_count()) throw RangeError("bad head identifier");
  std::mt19937_64 rng(policy.seed);
  std::vector<VertexId> path{head};
  std::vector<std::vector<VertexId>> options;
  std::vector<std::size_t> next;
  while (path.size() < length + 1) {
    if (options.size() < path.size()) {
      const auto out = Color == EdgeColor::blue ? g.blue_out(path.back()) : g.red_out(path.back());
      options.emplace_back(out.begin(), out.end());
      if (policy.chooser == ChooserMode::random) std::shuffle(options.back().begin(), options.back().end(), rng);
      next.push_back(0);
      if (options.back().empty() && !policy.backtracking)
        throw DeadEnd("vertex " + std::to_string(path.back()) + " has no outgoing edge");
    }
    if (next.back() < options.back().size()) {
      path.push_back(options.back()[next.back()++]);
    } else {
      options.pop_back();
      next.pop_back();
      path.pop_back();
      if (path.empty()) throw DeadEnd("no path of the required length from vertex " + std::to_string(head));
    }
  }
  return Color == EdgeColor::blue ? assemble_row_strip(g, path) : assemble_col_strip(g, path);
}

}  // namespace detail

// m x w strip generated by a blue path of length m - h from `head`.
inline Block generate_row_strip(const Presentation& gr, VertexId head, std::size_t m,
                                const GenerationPolicy& policy = {}) {
  if (gr.kind() == PresentationKind::column) throw KindError("row strips need blue edges");
  if (m < gr.system().h()) throw DimensionError("strip shorter than the window");
  return detail::generate_strip<EdgeColor::blue>(gr, head, m - gr.system().h(), policy);
}

// h x n strip generated by a red path of length n - w from `head`.
inline Block generate_col_strip(const Presentation& gc, VertexId head, std::size_t n,
                                const GenerationPolicy& policy = {}) {
  if (gc.kind() == PresentationKind::row) throw KindError("column strips need red edges");
  if (n < gc.system().w()) throw DimensionError("strip narrower than the window");
  return detail::generate_strip<EdgeColor::red>(gc, head, n - gc.system().w(), policy);
}

inline std::vector<Block> enumerate_row_strips(const Presentation& gr, VertexId head, std::size_t m) {
  if (m < gr.system().h()) throw DimensionError("strip shorter than the window");
  std::vector<Block> out;
  for_each_path(gr, EdgeColor::blue, head, m - gr.system().h(),
                [&](std::span<const VertexId> p) { out.push_back(assemble_row_strip(gr, p)); });
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Block> enumerate_col_strips(const Presentation& gc, VertexId head, std::size_t n) {
  if (n < gc.system().w()) throw DimensionError("strip narrower than the window");
  std::vector<Block> out;
  for_each_path(gc, EdgeColor::red, head, n - gc.system().w(),
                [&](std::span<const VertexId> p) { out.push_back(assemble_col_strip(gc, p)); });
  std::sort(out.begin(), out.end());
  return out;
}

// G(S) generates b: every |b|_r x w subblock comes from a blue path and every
// h x |b|_c subblock from a red path. Checked window by window.
inline bool is_generated(const Presentation& g, const Block& b) {
  g.require(PresentationKind::combined);
  const auto& cs = g.system();
  if (b.rows() < cs.h() || b.cols() < cs.w()) throw DimensionError("block is smaller than the window");
  detail::check_symbols(b, cs.alphabet().size());
  const std::size_t rows = b.rows() - cs.h() + 1, cols = b.cols() - cs.w() + 1;
  std::vector<VertexId> ids(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const VertexId v = cs.window_id(b, r, c);
      if (v == kNoVertex) return false;
      ids[r * cols + c] = v;
    }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const VertexId v = ids[r * cols + c];
      if (c + 1 < cols && !g.has_red(v, ids[r * cols + c + 1])) return false;
      if (r + 1 < rows && !g.has_blue(v, ids[(r + 1) * cols + c])) return false;
    }
  return true;
}

}  // namespace ftcs
