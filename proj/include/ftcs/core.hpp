// core.hpp
//
// Finite two-dimensional blocks over a finite alphabet, the prefix/suffix
// and concatenation operators, and constraint systems given by a forbidden
// set of h x w blocks.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ftcs {

using Symbol = std::uint8_t;

// Vertex identifiers are 1-based; 0 marks "no vertex" in lookup tables.
using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = 0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class Alphabet {
 public:
  // Each character of `tokens` is one symbol; symbol k is tokens[k].
  explicit Alphabet(std::string_view tokens) : tokens_(tokens) {
    if (tokens_.empty()) throw Error("alphabet must contain at least one symbol");
    if (tokens_.size() > std::numeric_limits<Symbol>::max())
      throw Error("alphabet too large");
    index_.fill(-1);
    for (std::size_t k = 0; k < tokens_.size(); ++k) {
      const auto c = static_cast<unsigned char>(tokens_[k]);
      if (c <= ' ' || c >= 0x7f)
        throw Error("alphabet symbols must be printable non-whitespace characters");
      if (index_[c] >= 0) throw Error(std::string("duplicate alphabet symbol '") + tokens_[k] + "'");
      index_[c] = static_cast<std::int16_t>(k);
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& tokens() const noexcept { return tokens_; }

  char token(Symbol s) const {
    if (s >= tokens_.size()) throw RangeError("symbol index out of range");
    return tokens_[s];
  }

  std::optional<Symbol> index_of(char c) const noexcept {
    const auto k = index_[static_cast<unsigned char>(c)];
    if (k < 0) return std::nullopt;
    return static_cast<Symbol>(k);
  }

  bool operator==(const Alphabet& other) const noexcept { return tokens_ == other.tokens_; }

 private:
  std::string tokens_;
  std::array<std::int16_t, 256> index_{};
};

// Dense m x n array of symbol indices, row-major. Public coordinates are
// 1-based (i = row, j = column); cell() is the 0-based accessor used in loops.
// A block with zero rows or zero columns holds no cells and compares equal to
// every other such block (the empty block).
class Block {
 public:
  Block() = default;

  Block(std::size_t rows, std::size_t cols, Symbol fill = 0)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}

  Block(std::size_t rows, std::size_t cols, std::vector<Symbol> cells)
      : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (cells_.size() != rows_ * cols_) throw DimensionError("block cell count does not match its size");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return cells_.empty(); }

  Symbol cell(std::size_t r, std::size_t c) const noexcept { return cells_[r * cols_ + c]; }
  Symbol& cell(std::size_t r, std::size_t c) noexcept { return cells_[r * cols_ + c]; }

  Symbol at(std::size_t i, std::size_t j) const {
    if (i < 1 || j < 1 || i > rows_ || j > cols_) throw RangeError("block coordinate out of range");
    return cell(i - 1, j - 1);
  }

  std::span<const Symbol> cells() const noexcept { return cells_; }

  friend bool operator==(const Block& a, const Block& b) noexcept {
    if (a.empty() || b.empty()) return a.empty() && b.empty();
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
  }

  // Orders by size, then lexicographically by cells; every empty block sorts first.
  friend bool operator<(const Block& a, const Block& b) noexcept {
    if (a.empty() || b.empty()) return a.empty() && !b.empty();
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.cells_ < b.cells_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Symbol> cells_;
};

// Parses rows of symbol characters into a block; all rows must have equal length.
inline Block block_from_rows(const Alphabet& alphabet, std::span<const std::string> rows) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows.front().size();
  std::vector<Symbol> cells;
  cells.reserve(m * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("block rows have unequal lengths");
    for (char c : row) {
      const auto s = alphabet.index_of(c);
      if (!s) throw AlphabetMismatch(std::string("symbol '") + c + "' is not in the alphabet");
      cells.push_back(*s);
    }
  }
  return Block(m, n, std::move(cells));
}

inline Block block_from_rows(const Alphabet& alphabet, std::initializer_list<std::string> rows) {
  const std::vector<std::string> v(rows);
  return block_from_rows(alphabet, std::span<const std::string>(v));
}

inline std::vector<std::string> block_rows(const Block& b, const Alphabet& alphabet) {
  std::vector<std::string> out(b.rows(), std::string(b.cols(), ' '));
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out[r][c] = alphabet.token(b.cell(r, c));
  return out;
}

// Rows joined by `sep`, e.g. "01/10".
inline std::string block_to_string(const Block& b, const Alphabet& alphabet, std::string_view sep = "/") {
  std::string out;
  const auto rows = block_rows(b, alphabet);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += sep;
    out += rows[r];
  }
  return out;
}

// 1-based top/left; the result is rows x cols.
inline Block subblock(const Block& b, std::size_t top, std::size_t left, std::size_t rows, std::size_t cols) {
  if (top < 1 || left < 1 || top - 1 + rows > b.rows() || left - 1 + cols > b.cols())
    throw RangeError("subblock out of range");
  Block out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.cell(r, c) = b.cell(top - 1 + r, left - 1 + c);
  return out;
}

// Drops the last column.
inline Block prefix_col(const Block& b) {
  if (b.cols() == 0) throw DimensionError("prefix_col needs at least one column");
  return subblock(b, 1, 1, b.rows(), b.cols() - 1);
}

// Drops the first column.
inline Block suffix_col(const Block& b) {
  if (b.cols() == 0) throw DimensionError("suffix_col needs at least one column");
  return subblock(b, 1, 2, b.rows(), b.cols() - 1);
}

// Drops the last row.
inline Block prefix_row(const Block& b) {
  if (b.rows() == 0) throw DimensionError("prefix_row needs at least one row");
  return subblock(b, 1, 1, b.rows() - 1, b.cols());
}

// Drops the first row.
inline Block suffix_row(const Block& b) {
  if (b.rows() == 0) throw DimensionError("suffix_row needs at least one row");
  return subblock(b, 2, 1, b.rows() - 1, b.cols());
}

inline Block row_of(const Block& b, std::size_t i) { return subblock(b, i, 1, 1, b.cols()); }
inline Block column_of(const Block& b, std::size_t j) { return subblock(b, 1, j, b.rows(), 1); }

// [a, b]_c: a on the left.
inline Block concat_col(const Block& a, const Block& b) {
  if (a.rows() != b.rows()) throw DimensionError("concat_col needs equal heights");
  Block out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out.cell(r, c) = a.cell(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) out.cell(r, a.cols() + c) = b.cell(r, c);
  }
  return out;
}

// [a, b]_r: a on top.
inline Block concat_row(const Block& a, const Block& b) {
  if (a.cols() != b.cols()) throw DimensionError("concat_row needs equal widths");
  Block out(a.rows() + b.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out.cell(r, c) = a.cell(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out.cell(a.rows() + r, c) = b.cell(r, c);
  return out;
}

inline Block transpose(const Block& b) {
  Block out(b.cols(), b.rows());
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) out.cell(c, r) = b.cell(r, c);
  return out;
}

namespace detail {

// Largest window space (|alphabet|^(h*w)) a ConstraintSystem will tabulate.
inline constexpr std::uint64_t kMaxWindowSpace = std::uint64_t{1} << 24;

// q^e, or nullopt when it exceeds `limit`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t q, std::uint64_t e, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::uint64_t k = 0; k < e; ++k) {
    if (q != 0 && v > limit / q) return std::nullopt;
    v *= q;
  }
  if (v > limit) return std::nullopt;
  return v;
}

// Mixed-radix code of the h x w window of `b` at 0-based (top, left); the
// first cell is most significant so code order equals row-major lexicographic order.
inline std::uint64_t window_code(const Block& b, std::size_t top, std::size_t left, std::size_t h, std::size_t w,
                                 std::uint64_t q) {
  std::uint64_t code = 0;
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) code = code * q + b.cell(top + r, left + c);
  return code;
}

inline Block block_from_code(std::uint64_t code, std::size_t h, std::size_t w, std::uint64_t q) {
  Block b(h, w);
  for (std::size_t k = h * w; k-- > 0;) {
    b.cell(k / w, k % w) = static_cast<Symbol>(code % q);
    code /= q;
  }
  return b;
}

inline void check_symbols(const Block& b, std::size_t q) {
  for (Symbol s : b.cells())
    if (s >= q) throw AlphabetMismatch("block symbol outside the alphabet");
}

}  // namespace detail

// Alphabet, window size, forbidden set F and the allowed set A_F with its
// identifier bijection. Identifier k names the k-th allowed block in
// row-major lexicographic order unless the system was relabelled.
class ConstraintSystem {
 public:
  ConstraintSystem(Alphabet alphabet, std::size_t h, std::size_t w, const std::set<Block>& forbidden)
      : alphabet_(std::move(alphabet)), h_(h), w_(w), forbidden_(forbidden) {
    if (h_ == 0 || w_ == 0) throw DimensionError("window size must be positive");
    const auto space = detail::bounded_power(alphabet_.size(), h_ * w_, detail::kMaxWindowSpace);
    if (!space) throw BudgetExceeded("window space |alphabet|^(h*w) is too large to tabulate");
    for (const Block& f : forbidden_) {
      if (f.rows() != h_ || f.cols() != w_) throw DimensionError("forbidden block has the wrong size");
      detail::check_symbols(f, alphabet_.size());
    }
    std::vector<bool> banned(*space, false);
    for (const Block& f : forbidden_) banned[detail::window_code(f, 0, 0, h_, w_, alphabet_.size())] = true;
    std::vector<std::uint64_t> order;
    for (std::uint64_t code = 0; code < *space; ++code)
      if (!banned[code]) order.push_back(code);
    assign(order, *space);
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t h() const noexcept { return h_; }
  std::size_t w() const noexcept { return w_; }
  const std::set<Block>& forbidden() const noexcept { return forbidden_; }
  const std::vector<Block>& allowed() const noexcept { return allowed_; }
  std::size_t allowed_count() const noexcept { return allowed_.size(); }

  const Block& block(VertexId id) const {
    if (id < 1 || id > allowed_.size()) throw RangeError("vertex identifier out of range");
    return allowed_[id - 1];
  }

  // Identifier of an allowed h x w block, nullopt for anything else.
  std::optional<VertexId> id_of(const Block& b) const {
    if (b.rows() != h_ || b.cols() != w_) return std::nullopt;
    for (Symbol s : b.cells())
      if (s >= alphabet_.size()) return std::nullopt;
    const VertexId id = id_by_code_[detail::window_code(b, 0, 0, h_, w_, alphabet_.size())];
    if (id == kNoVertex) return std::nullopt;
    return id;
  }

  // Identifier of the window of `b` at 0-based (top, left); kNoVertex if forbidden.
  VertexId window_id(const Block& b, std::size_t top, std::size_t left) const noexcept {
    return id_by_code_[detail::window_code(b, top, left, h_, w_, alphabet_.size())];
  }

  // Same system with identifiers reassigned: new identifier k names the block
  // that had identifier order[k-1].
  ConstraintSystem relabelled(std::span<const VertexId> order) const {
    if (order.size() != allowed_.size()) throw DimensionError("relabelling must be a permutation of all identifiers");
    std::vector<bool> seen(allowed_.size() + 1, false);
    std::vector<std::uint64_t> codes;
    for (VertexId old : order) {
      if (old < 1 || old > allowed_.size() || seen[old]) throw RangeError("relabelling is not a permutation");
      seen[old] = true;
      codes.push_back(detail::window_code(allowed_[old - 1], 0, 0, h_, w_, alphabet_.size()));
    }
    ConstraintSystem out(*this);
    out.assign(codes, id_by_code_.size());
    return out;
  }

  bool operator==(const ConstraintSystem& other) const noexcept {
    return alphabet_ == other.alphabet_ && h_ == other.h_ && w_ == other.w_ && forbidden_ == other.forbidden_ &&
           allowed_ == other.allowed_;
  }

 private:
  void assign(std::span<const std::uint64_t> codes, std::uint64_t space) {
    allowed_.clear();
    id_by_code_.assign(space, kNoVertex);
    for (std::uint64_t code : codes) {
      allowed_.push_back(detail::block_from_code(code, h_, w_, alphabet_.size()));
      id_by_code_[code] = static_cast<VertexId>(allowed_.size());
    }
  }

  Alphabet alphabet_;
  std::size_t h_;
  std::size_t w_;
  std::set<Block> forbidden_;
  std::vector<Block> allowed_;
  std::vector<VertexId> id_by_code_;
};

inline ConstraintSystem allowed_set(const Alphabet& alphabet, std::size_t h, std::size_t w,
                                    const std::set<Block>& forbidden) {
  return ConstraintSystem(alphabet, h, w, forbidden);
}

inline ConstraintSystem allowed_set(const Alphabet& alphabet, std::size_t h, std::size_t w,
                                    std::span<const Block> forbidden) {
  return ConstraintSystem(alphabet, h, w, std::set<Block>(forbidden.begin(), forbidden.end()));
}

// True if `pattern` occurs as a subblock of `b`.
inline bool contains_subblock(const Block& b, const Block& pattern) {
  if (pattern.empty()) return true;
  if (pattern.rows() > b.rows() || pattern.cols() > b.cols()) return false;
  for (std::size_t top = 0; top + pattern.rows() <= b.rows(); ++top) {
    for (std::size_t left = 0; left + pattern.cols() <= b.cols(); ++left) {
      bool match = true;
      for (std::size_t r = 0; r < pattern.rows() && match; ++r)
        for (std::size_t c = 0; c < pattern.cols() && match; ++c)
          match = b.cell(top + r, left + c) == pattern.cell(r, c);
      if (match) return true;
    }
  }
  return false;
}

// Every h x w block containing at least one of the (smaller or equal) patterns.
inline std::set<Block> embed_forbidden(const Alphabet& alphabet, std::size_t h, std::size_t w,
                                       std::span<const Block> patterns) {
  std::set<Block> out;
  if (patterns.empty()) return out;
  for (const Block& p : patterns) {
    if (p.rows() > h || p.cols() > w) throw DimensionError("pattern is larger than the window size");
    detail::check_symbols(p, alphabet.size());
  }
  const auto space = detail::bounded_power(alphabet.size(), h * w, detail::kMaxWindowSpace);
  if (!space) throw BudgetExceeded("window space |alphabet|^(h*w) is too large to enumerate");
  for (std::uint64_t code = 0; code < *space; ++code) {
    Block b = detail::block_from_code(code, h, w, alphabet.size());
    if (std::any_of(patterns.begin(), patterns.end(), [&](const Block& p) { return contains_subblock(b, p); }))
      out.insert(std::move(b));
  }
  return out;
}

// 1-based top-left corner of the first forbidden h x w window in row-major
// scan order, or nullopt when there is none.
inline std::optional<std::pair<std::size_t, std::size_t>> first_forbidden_window(const ConstraintSystem& cs,
                                                                                 const Block& b) {
  detail::check_symbols(b, cs.alphabet().size());
  if (b.rows() < cs.h() || b.cols() < cs.w()) return std::nullopt;
  for (std::size_t top = 0; top + cs.h() <= b.rows(); ++top)
    for (std::size_t left = 0; left + cs.w() <= b.cols(); ++left)
      if (cs.window_id(b, top, left) == kNoVertex) return std::pair{top + 1, left + 1};
  return std::nullopt;
}

inline bool is_member(const ConstraintSystem& cs, const Block& b) { return !first_forbidden_window(cs, b); }

// Members smaller than the window size lie outside the modified system that
// the graph presentations describe.
inline bool below_window_size(const ConstraintSystem& cs, const Block& b) noexcept {
  return b.rows() < cs.h() || b.cols() < cs.w();
}

}  // namespace ftcs
