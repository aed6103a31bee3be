// presentation.hpp
//
// Labelled directed graphs on the allowed set: the row-wise presentation
// (blue edges append one 1 x w row), the column-wise presentation (red edges
// append one h x 1 column), their union, the table of compatible quadruples
// and the per-head class views of the column-wise presentation.

#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "ftcs/core.hpp"

namespace ftcs {

enum class PresentationKind { row, column, combined };

inline const char* kind_name(PresentationKind kind) noexcept {
  switch (kind) {
    case PresentationKind::row: return "row";
    case PresentationKind::column: return "column";
    case PresentationKind::combined: return "combined";
  }
  return "?";
}

class SystemMismatch : public Error {
 public:
  using Error::Error;
};

class KindError : public Error {
 public:
  using Error::Error;
};

struct Edge {
  VertexId from;
  VertexId to;
  Block label;
};

class Presentation {
 public:
  PresentationKind kind() const noexcept { return kind_; }
  const ConstraintSystem& system() const noexcept { return *system_; }
  const std::shared_ptr<const ConstraintSystem>& system_ptr() const noexcept { return system_; }
  std::size_t vertex_count() const noexcept { return system_->allowed_count(); }

  const std::vector<Edge>& blue_edges() const noexcept { return blue_edges_; }
  const std::vector<Edge>& red_edges() const noexcept { return red_edges_; }

  // Sorted out-neighbours.
  std::span<const VertexId> blue_out(VertexId u) const { return blue_out_.at(checked(u)); }
  std::span<const VertexId> red_out(VertexId u) const { return red_out_.at(checked(u)); }

  bool has_blue(VertexId u, VertexId v) const {
    const auto out = blue_out(u);
    return std::binary_search(out.begin(), out.end(), v);
  }
  bool has_red(VertexId u, VertexId v) const {
    const auto out = red_out(u);
    return std::binary_search(out.begin(), out.end(), v);
  }

  void require(PresentationKind expected) const {
    if (kind_ != expected)
      throw KindError(std::string("expected a ") + kind_name(expected) + " presentation, got " + kind_name(kind_));
  }

 private:
  friend Presentation build_row_presentation(std::shared_ptr<const ConstraintSystem>);
  friend Presentation build_col_presentation(std::shared_ptr<const ConstraintSystem>);
  friend Presentation build_combined(const Presentation&, const Presentation&);

  explicit Presentation(std::shared_ptr<const ConstraintSystem> system, PresentationKind kind)
      : kind_(kind), system_(std::move(system)) {
    if (!system_) throw Error("presentation needs a constraint system");
    blue_out_.resize(system_->allowed_count() + 1);
    red_out_.resize(system_->allowed_count() + 1);
  }

  VertexId checked(VertexId u) const {
    if (u < 1 || u > vertex_count()) throw RangeError("vertex identifier out of range");
    return u;
  }

  PresentationKind kind_;
  std::shared_ptr<const ConstraintSystem> system_;
  std::vector<Edge> blue_edges_;
  std::vector<Edge> red_edges_;
  std::vector<std::vector<VertexId>> blue_out_;
  std::vector<std::vector<VertexId>> red_out_;
};

namespace detail {

// Connects u -> v whenever tail(block(u)) == head(block(v)); buckets vertices
// by head so the test is one map lookup per source.
template <class Tail, class Head, class Label>
void connect_overlaps(const ConstraintSystem& cs, Tail tail, Head head, Label label, std::vector<Edge>& edges,
                      std::vector<std::vector<VertexId>>& out) {
  std::map<Block, std::vector<VertexId>> by_head;
  for (VertexId v = 1; v <= cs.allowed_count(); ++v) by_head[head(cs.block(v))].push_back(v);
  for (VertexId u = 1; u <= cs.allowed_count(); ++u) {
    const auto it = by_head.find(tail(cs.block(u)));
    if (it == by_head.end()) continue;
    for (VertexId v : it->second) {
      edges.push_back(Edge{u, v, label(cs.block(v))});
      out[u].push_back(v);
    }
  }
}

}  // namespace detail

// Blue edge u -> v iff the last h-1 rows of u equal the first h-1 rows of v;
// the label is the h-th row of v.
inline Presentation build_row_presentation(std::shared_ptr<const ConstraintSystem> cs) {
  Presentation g(std::move(cs), PresentationKind::row);
  const auto& sys = g.system();
  detail::connect_overlaps(
      sys, [](const Block& b) { return suffix_row(b); }, [](const Block& b) { return prefix_row(b); },
      [&](const Block& b) { return row_of(b, sys.h()); }, g.blue_edges_, g.blue_out_);
  return g;
}

// Red edge u -> v iff the last w-1 columns of u equal the first w-1 columns
// of v; the label is the w-th column of v.
inline Presentation build_col_presentation(std::shared_ptr<const ConstraintSystem> cs) {
  Presentation g(std::move(cs), PresentationKind::column);
  const auto& sys = g.system();
  detail::connect_overlaps(
      sys, [](const Block& b) { return suffix_col(b); }, [](const Block& b) { return prefix_col(b); },
      [&](const Block& b) { return column_of(b, sys.w()); }, g.red_edges_, g.red_out_);
  return g;
}

inline Presentation build_combined(const Presentation& gr, const Presentation& gc) {
  gr.require(PresentationKind::row);
  gc.require(PresentationKind::column);
  if (gr.system_ptr() != gc.system_ptr() && !(gr.system() == gc.system()))
    throw SystemMismatch("row and column presentations come from different systems");
  Presentation g(gr.system_ptr(), PresentationKind::combined);
  g.blue_edges_ = gr.blue_edges_;
  g.blue_out_ = gr.blue_out_;
  g.red_edges_ = gc.red_edges_;
  g.red_out_ = gc.red_out_;
  return g;
}

inline Presentation build_combined(std::shared_ptr<const ConstraintSystem> cs) {
  return build_combined(build_row_presentation(cs), build_col_presentation(cs));
}

// (a, b, c, d) = (s(i-1,j-1), s(i-1,j), s(i,j-1), s(i,j)).
using Quad = std::array<VertexId, 4>;

class QuadrupleTable {
 public:
  explicit QuadrupleTable(std::vector<Quad> quads) : quads_(std::move(quads)) {
    std::sort(quads_.begin(), quads_.end());
    quads_.erase(std::unique(quads_.begin(), quads_.end()), quads_.end());
    completions_.reserve(quads_.size());
    for (const Quad& q : quads_) completions_.push_back(q[3]);
  }

  std::size_t size() const noexcept { return quads_.size(); }
  const std::vector<Quad>& quads() const noexcept { return quads_; }

  bool contains(const Quad& q) const { return std::binary_search(quads_.begin(), quads_.end(), q); }

  // Sorted identifiers d with (a, b, c, d) in the table.
  std::span<const VertexId> completions(VertexId a, VertexId b, VertexId c) const {
    const Quad lo{a, b, c, 0};
    const auto first = std::lower_bound(quads_.begin(), quads_.end(), lo);
    auto last = first;
    while (last != quads_.end() && (*last)[0] == a && (*last)[1] == b && (*last)[2] == c) ++last;
    const auto offset = static_cast<std::size_t>(first - quads_.begin());
    return std::span<const VertexId>(completions_).subspan(offset, static_cast<std::size_t>(last - first));
  }

 private:
  std::vector<Quad> quads_;
  std::vector<VertexId> completions_;
};

// All (a, b, c, d) with red a -> b, blue a -> c, red c -> d and blue b -> d.
inline QuadrupleTable quadruples(const Presentation& g) {
  g.require(PresentationKind::combined);
  std::vector<Quad> quads;
  std::vector<VertexId> common;
  for (VertexId a = 1; a <= g.vertex_count(); ++a) {
    for (VertexId b : g.red_out(a)) {
      for (VertexId c : g.blue_out(a)) {
        const auto via_b = g.blue_out(b);
        const auto via_c = g.red_out(c);
        common.clear();
        std::set_intersection(via_b.begin(), via_b.end(), via_c.begin(), via_c.end(), std::back_inserter(common));
        for (VertexId d : common) quads.push_back(Quad{a, b, c, d});
      }
    }
  }
  return QuadrupleTable(std::move(quads));
}

enum class EdgeColor { blue, red };

// Calls visit(path) for every path of exactly `length` edges of one colour
// starting at `head`, in ascending lexicographic order of identifiers.
inline void for_each_path(const Presentation& g, EdgeColor color, VertexId head, std::size_t length,
                          const std::function<void(std::span<const VertexId>)>& visit) {
  if (head < 1 || head > g.vertex_count()) throw RangeError("vertex identifier out of range");
  std::vector<VertexId> path{head};
  std::vector<std::size_t> next{0};
  while (!path.empty()) {
    if (path.size() == length + 1) {
      visit(path);
      path.pop_back();
      next.pop_back();
      continue;
    }
    const auto out = color == EdgeColor::blue ? g.blue_out(path.back()) : g.red_out(path.back());
    if (next.back() < out.size()) {
      path.push_back(out[next.back()++]);
      next.push_back(0);
    } else {
      path.pop_back();
      next.pop_back();
    }
  }
}

// [block(u_0), label(u_0,u_1), ...]_r for a blue path.
inline Block assemble_row_strip(const Presentation& g, std::span<const VertexId> path) {
  const auto& cs = g.system();
  Block out = cs.block(path.front());
  for (std::size_t k = 1; k < path.size(); ++k) out = concat_row(out, row_of(cs.block(path[k]), cs.h()));
  return out;
}

// [block(v_0), label(v_0,v_1), ...]_c for a red path.
inline Block assemble_col_strip(const Presentation& g, std::span<const VertexId> path) {
  const auto& cs = g.system();
  Block out = cs.block(path.front());
  for (std::size_t k = 1; k < path.size(); ++k) out = concat_col(out, column_of(cs.block(path[k]), cs.w()));
  return out;
}

// The column-wise presentation seen from one head block: every path it
// enumerates starts at head().
class ClassView {
 public:
  ClassView(const Presentation& gc, VertexId head) : gc_(&gc), head_(head) {
    if (gc.kind() != PresentationKind::column && gc.kind() != PresentationKind::combined)
      throw KindError("class views need a presentation with red edges");
    if (head < 1 || head > gc.vertex_count()) throw RangeError("class identifier out of range");
  }

  VertexId head() const noexcept { return head_; }
  const Presentation& graph() const noexcept { return *gc_; }

  // Red paths of length n - w from the head.
  std::vector<std::vector<VertexId>> paths(std::size_t n) const {
    std::vector<std::vector<VertexId>> out;
    const std::size_t w = gc_->system().w();
    if (n < w) throw DimensionError("strip narrower than the window");
    for_each_path(*gc_, EdgeColor::red, head_, n - w,
                  [&](std::span<const VertexId> p) { out.emplace_back(p.begin(), p.end()); });
    return out;
  }

  // All h x n blocks this class generates.
  std::vector<Block> strips(std::size_t n) const {
    std::vector<Block> out;
    for (const auto& p : paths(n)) out.push_back(assemble_col_strip(*gc_, p));
    std::sort(out.begin(), out.end());
    return out;
  }

  // Vertices reachable from the head by red edges, head included.
  std::vector<VertexId> reachable() const {
    std::vector<bool> seen(gc_->vertex_count() + 1, false);
    std::vector<VertexId> stack{head_};
    seen[head_] = true;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (VertexId v : gc_->red_out(u))
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
    }
    std::vector<VertexId> out;
    for (VertexId v = 1; v <= gc_->vertex_count(); ++v)
      if (seen[v]) out.push_back(v);
    return out;
  }

 private:
  const Presentation* gc_;
  VertexId head_;
};

inline ClassView class_view(const Presentation& gc, VertexId k) { return ClassView(gc, k); }

inline std::vector<ClassView> class_views(const Presentation& gc) {
  std::vector<ClassView> out;
  for (VertexId k = 1; k <= gc.vertex_count(); ++k) out.emplace_back(gc, k);
  return out;
}

// Class k connects to class k' iff blue edge k -> k' exists.
inline std::set<std::pair<VertexId, VertexId>> class_connections(const Presentation& g) {
  g.require(PresentationKind::combined);
  std::set<std::pair<VertexId, VertexId>> out;
  for (const Edge& e : g.blue_edges()) out.emplace(e.from, e.to);
  return out;
}

}  // namespace ftcs
