// io.hpp
//
// Text formats and Graphviz output.
//
// Forbidden-set file:
//   alphabet 01
//   size 2 2
//   forbid            exactly h rows of w symbols follow
//   11
//   00
//   pattern [r c]     up to h rows of up to w symbols; without dimensions the
//   11                rows run until the next stanza keyword or end of file
//
// Blank lines and lines starting with '#' are ignored everywhere.

#pragma once

#include <cctype>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ftcs/core.hpp"
#include "ftcs/presentation.hpp"

namespace ftcs {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct ForbiddenSetFile {
  Alphabet alphabet;
  std::size_t h = 0;
  std::size_t w = 0;
  std::vector<Block> forbid;    // h x w stanzas
  std::vector<Block> patterns;  // smaller stanzas, embedded into h x w windows

  std::set<Block> forbidden_set() const {
    std::set<Block> out(forbid.begin(), forbid.end());
    const auto embedded = embed_forbidden(alphabet, h, w, patterns);
    out.insert(embedded.begin(), embedded.end());
    return out;
  }

  std::shared_ptr<const ConstraintSystem> system() const {
    return std::make_shared<const ConstraintSystem>(alphabet, h, w, forbidden_set());
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Line {
  std::size_t number;
  std::string text;
};

// Non-blank, non-comment lines, trimmed.
inline std::vector<Line> content_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  for (std::size_t number = 1; std::getline(in, raw); ++number) {
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    out.push_back({number, t});
  }
  return out;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) {
    if (w[0] == '#') break;
    out.push_back(w);
  }
  return out;
}

inline std::size_t parse_positive(const std::string& s, std::size_t line, const char* what) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v == 0 || s[0] == '-') throw ParseError(line, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

inline Block parse_rows(const Alphabet& alphabet, const std::vector<Line>& rows) {
  std::vector<std::string> text;
  for (const auto& r : rows) text.push_back(r.text);
  try {
    return block_from_rows(alphabet, std::span<const std::string>(text));
  } catch (const Error& e) {
    throw ParseError(rows.empty() ? 0 : rows.front().number, e.what());
  }
}

inline bool is_keyword_line(const std::string& t) {
  const auto ws = words(t);
  return !ws.empty() && (ws[0] == "forbid" || ws[0] == "pattern");
}

}  // namespace detail

inline ForbiddenSetFile parse_forbidden_set(std::istream& in) {
  const auto lines = detail::content_lines(in);
  if (lines.size() < 2) throw ParseError(lines.empty() ? 1 : lines.back().number, "missing alphabet or size line");

  const auto alpha = detail::words(lines[0].text);
  if (alpha.size() != 2 || alpha[0] != "alphabet") throw ParseError(lines[0].number, "expected 'alphabet <symbols>'");
  if (alpha[1].find('#') != std::string::npos) throw ParseError(lines[0].number, "'#' cannot be an alphabet symbol");
  std::optional<Alphabet> alphabet;
  try {
    alphabet.emplace(alpha[1]);
  } catch (const Error& e) {
    throw ParseError(lines[0].number, e.what());
  }

  const auto size = detail::words(lines[1].text);
  if (size.size() != 3 || size[0] != "size") throw ParseError(lines[1].number, "expected 'size <h> <w>'");
  ForbiddenSetFile file{*alphabet, detail::parse_positive(size[1], lines[1].number, "height"),
                        detail::parse_positive(size[2], lines[1].number, "width"), {}, {}};

  std::size_t k = 2;
  while (k < lines.size()) {
    const auto head = detail::words(lines[k].text);
    const std::size_t at = lines[k].number;
    ++k;
    if (head[0] == "forbid") {
      if (head.size() != 1) throw ParseError(at, "'forbid' takes no arguments");
      if (k + file.h > lines.size()) throw ParseError(at, "forbid stanza needs " + std::to_string(file.h) + " rows");
      std::vector<detail::Line> rows(lines.begin() + static_cast<std::ptrdiff_t>(k),
                                     lines.begin() + static_cast<std::ptrdiff_t>(k + file.h));
      k += file.h;
      Block b = detail::parse_rows(file.alphabet, rows);
      if (b.cols() != file.w) throw ParseError(rows.front().number, "forbid rows must have " + std::to_string(file.w) + " symbols");
      file.forbid.push_back(std::move(b));
    } else if (head[0] == "pattern") {
      std::vector<detail::Line> rows;
      if (head.size() == 3) {
        const std::size_t r = detail::parse_positive(head[1], at, "pattern height");
        const std::size_t c = detail::parse_positive(head[2], at, "pattern width");
        if (k + r > lines.size()) throw ParseError(at, "pattern stanza is missing rows");
        rows.assign(lines.begin() + static_cast<std::ptrdiff_t>(k), lines.begin() + static_cast<std::ptrdiff_t>(k + r));
        k += r;
        if (rows.front().text.size() != c) throw ParseError(rows.front().number, "pattern width does not match");
      } else if (head.size() == 1) {
        while (k < lines.size() && !detail::is_keyword_line(lines[k].text)) rows.push_back(lines[k++]);
        if (rows.empty()) throw ParseError(at, "empty pattern stanza");
      } else {
        throw ParseError(at, "expected 'pattern' or 'pattern <rows> <cols>'");
      }
      Block b = detail::parse_rows(file.alphabet, rows);
      if (b.rows() > file.h || b.cols() > file.w) throw ParseError(at, "pattern is larger than the window size");
      file.patterns.push_back(std::move(b));
    } else {
      throw ParseError(at, "unexpected '" + head[0] + "', expected 'forbid' or 'pattern'");
    }
  }
  return file;
}

inline ForbiddenSetFile parse_forbidden_set(const std::string& text) {
  std::istringstream in(text);
  return parse_forbidden_set(in);
}

// Canonical form: every forbidden block as a forbid stanza, in canonical order.
inline void write_forbidden_set(std::ostream& out, const ConstraintSystem& cs) {
  out << "alphabet " << cs.alphabet().tokens() << "\n";
  out << "size " << cs.h() << " " << cs.w() << "\n";
  for (const Block& f : cs.forbidden()) {
    out << "forbid\n";
    for (const auto& row : block_rows(f, cs.alphabet())) out << row << "\n";
  }
}

// m rows of n symbols.
inline Block parse_block(std::istream& in, const Alphabet& alphabet) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) return Block();
  return detail::parse_rows(alphabet, lines);
}

inline Block parse_block(const std::string& text, const Alphabet& alphabet) {
  std::istringstream in(text);
  return parse_block(in, alphabet);
}

inline void write_block(std::ostream& out, const Block& b, const Alphabet& alphabet) {
  for (const auto& row : block_rows(b, alphabet)) out << row << "\n";
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

// Vertices carry their identifier and block rows joined by '/'; blue and red
// edges keep their label blocks.
inline void write_dot(std::ostream& out, const Presentation& g) {
  const auto& cs = g.system();
  const auto& a = cs.alphabet();
  const char* name = g.kind() == PresentationKind::row      ? "row_presentation"
                     : g.kind() == PresentationKind::column ? "column_presentation"
                                                            : "combined_presentation";
  out << "digraph " << name << " {\n";
  for (VertexId v = 1; v <= g.vertex_count(); ++v)
    out << "  " << v << " [label=\"" << v << "\\n" << detail::dot_escape(block_to_string(cs.block(v), a)) << "\"];\n";
  for (const Edge& e : g.blue_edges())
    out << "  " << e.from << " -> " << e.to << " [color=blue, label=\""
        << detail::dot_escape(block_to_string(e.label, a)) << "\"];\n";
  for (const Edge& e : g.red_edges())
    out << "  " << e.from << " -> " << e.to << " [color=red, label=\""
        << detail::dot_escape(block_to_string(e.label, a)) << "\"];\n";
  out << "}\n";
}

// One node per class of the column-wise presentation, joined by blue edges.
inline void write_class_dot(std::ostream& out, const Presentation& g) {
  const auto& cs = g.system();
  out << "digraph classes {\n";
  for (VertexId k = 1; k <= g.vertex_count(); ++k)
    out << "  " << k << " [shape=doublecircle, color=red, label=\"" << k << "-class\\n"
        << detail::dot_escape(block_to_string(cs.block(k), cs.alphabet())) << "\"];\n";
  for (const auto& [from, to] : class_connections(g)) out << "  " << from << " -> " << to << " [color=blue];\n";
  out << "}\n";
}

}  // namespace ftcs
