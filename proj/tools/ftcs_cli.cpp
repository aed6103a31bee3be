// ftcs_cli.cpp
//
// Command-line driver: build, check, generate, count, capacity, export-dot.
// Exit codes: 0 ok, 1 nonmember (check), 2 parse error, 3 unrealizable
// (generate), 4 any other error or an oracle/profile mismatch.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "ftcs/ftcs.hpp"

namespace {

constexpr int kExitNonmember = 1;
constexpr int kExitParse = 2;
constexpr int kExitUnrealizable = 3;
constexpr int kExitError = 4;

ftcs::ForbiddenSetFile load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ftcs::ParseError(0, "cannot open " + path);
  return ftcs::parse_forbidden_set(in);
}

struct Graphs {
  std::shared_ptr<const ftcs::ConstraintSystem> cs;
  ftcs::Presentation row;
  ftcs::Presentation col;
  ftcs::Presentation combined;
};

Graphs build_graphs(const std::string& path) {
  auto cs = load_system_file(path).system();
  auto row = ftcs::build_row_presentation(cs);
  auto col = ftcs::build_col_presentation(cs);
  auto combined = ftcs::build_combined(row, col);
  return Graphs{cs, std::move(row), std::move(col), std::move(combined)};
}

std::string format_rate(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

int cmd_build(const std::string& file) {
  const auto g = build_graphs(file);
  const auto quads = ftcs::quadruples(g.combined);
  std::cout << "|A_F|=" << g.cs->allowed_count() << " blue=" << g.row.blue_edges().size()
            << " red=" << g.col.red_edges().size() << " quads=" << quads.size() << "\n";
  return 0;
}

int cmd_check(const std::string& file, const std::string& block_file) {
  const auto cs = load_system_file(file).system();
  std::ifstream in(block_file);
  if (!in) throw ftcs::ParseError(0, "cannot open " + block_file);
  const auto b = ftcs::parse_block(in, cs->alphabet());
  if (const auto window = ftcs::first_forbidden_window(*cs, b)) {
    std::cout << "nonmember (" << window->first << "," << window->second << ")\n";
    return kExitNonmember;
  }
  std::cout << "member\n";
  if (ftcs::below_window_size(*cs, b)) std::cout << "below window size " << cs->h() << "x" << cs->w() << "\n";
  return 0;
}

int cmd_generate(const std::string& file, std::size_t rows, std::size_t cols, std::uint64_t seed,
                 const std::string& schedule, bool no_backtrack) {
  const auto g = build_graphs(file);
  ftcs::GenerationPolicy policy;
  const auto kind = ftcs::parse_schedule_kind(schedule);
  if (!kind) throw ftcs::Error("unknown schedule '" + schedule + "'");
  policy.schedule = *kind;
  policy.seed = seed;
  policy.backtracking = !no_backtrack;
  try {
    const auto b = ftcs::generate_block(g.combined, rows, cols, policy);
    ftcs::write_block(std::cout, b, g.cs->alphabet());
    return 0;
  } catch (const ftcs::NotRealizable& e) {
    std::cerr << e.what() << "\n";
  } catch (const ftcs::DeadEnd& e) {
    std::cerr << "dead end: " << e.what() << "\n";
  }
  std::cout << "UNREALIZABLE\n";
  return kExitUnrealizable;
}

int cmd_count(const std::string& file, std::size_t rows, std::size_t cols, bool oracle) {
  const auto g = build_graphs(file);
  if (!oracle) {
    std::cout << ftcs::count_by_profile(g.combined, rows, cols) << "\n";
    return 0;
  }
  const auto brute = ftcs::count_members(*g.cs, rows, cols);
  if (rows >= g.cs->h() && cols >= g.cs->w()) {
    try {
      const auto profile = ftcs::count_by_profile(g.combined, rows, cols);
      if (profile != brute) {
        std::cerr << "mismatch: oracle " << brute << " profile " << profile << "\n";
        std::cout << brute << "\n";
        return kExitError;
      }
    } catch (const ftcs::BudgetExceeded&) {
    }
  }
  std::cout << brute << "\n";
  return 0;
}

int cmd_capacity(const std::string& file, std::size_t max_rows, std::size_t max_cols, bool verbose) {
  const auto g = build_graphs(file);
  const auto est = ftcs::capacity_estimate(g.combined, max_rows, max_cols);
  std::cout << "lower=" << format_rate(est.lower) << " point=" << format_rate(est.point)
            << " upper=" << format_rate(est.upper) << "\n";
  if (est.empty) std::cout << "empty system\n";
  if (verbose && !est.empty) {
    std::cout << "point: N(" << est.point_rows << "," << est.point_cols << ")\n";
    std::cout << "upper: strip rows " << est.upper_strip_rows << ", ratio N(m," << est.ratio_cols << ")/N(m,"
              << est.ratio_cols - 1 << ")\n";
    if (est.lower_period_rows)
      std::cout << "lower: torus periods " << est.lower_period_rows << "x" << est.lower_period_cols << ", "
                << est.torus_count << " configurations\n";
  }
  return 0;
}

int cmd_export_dot(const std::string& file, const std::string& graph, const std::string& output) {
  const auto g = build_graphs(file);
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!output.empty() && output != "-") {
    file_out.open(output);
    if (!file_out) throw ftcs::Error("cannot write " + output);
    out = &file_out;
  }
  if (graph == "row")
    ftcs::write_dot(*out, g.row);
  else if (graph == "col")
    ftcs::write_dot(*out, g.col);
  else if (graph == "combined")
    ftcs::write_dot(*out, g.combined);
  else
    ftcs::write_class_dot(*out, g.combined);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph presentations of two-dimensional finite-type constrained systems"};
  app.require_subcommand(1);

  std::string file, block_file, schedule = "row-major", graph = "combined", output;
  std::size_t rows = 0, cols = 0;
  std::uint64_t seed = 0;
  bool no_backtrack = false, oracle = false, verbose = false;

  auto* build = app.add_subcommand("build", "print vertex, edge and quadruple counts");
  build->add_option("file", file, "forbidden-set file")->required();

  auto* check = app.add_subcommand("check", "test a block for membership");
  check->add_option("file", file, "forbidden-set file")->required();
  check->add_option("block", block_file, "block file")->required();

  auto* generate = app.add_subcommand("generate", "generate one member block");
  generate->add_option("file", file, "forbidden-set file")->required();
  generate->add_option("--rows", rows, "block height")->required();
  generate->add_option("--cols", cols, "block width")->required();
  generate->add_option("--seed", seed, "random seed")->required();
  generate->add_option("--schedule", schedule, "fill order")
      ->check(CLI::IsMember({"row-major", "col-major", "interleaved"}));
  generate->add_flag("--no-backtrack", no_backtrack, "fail at the first stuck cell");

  auto* count = app.add_subcommand("count", "count members of a given size");
  count->add_option("file", file, "forbidden-set file")->required();
  count->add_option("--rows", rows, "block height")->required();
  count->add_option("--cols", cols, "block width")->required();
  count->add_flag("--oracle", oracle, "brute force, cross-checked against the profile count");

  std::size_t max_rows = 0, max_cols = 0;
  auto* capacity = app.add_subcommand("capacity", "estimate the capacity");
  capacity->add_option("file", file, "forbidden-set file")->required();
  capacity->add_option("--max-rows", max_rows, "largest strip height")->required();
  capacity->add_option("--max-cols", max_cols, "largest strip width")->required();
  capacity->add_flag("--verbose", verbose, "also print the sizes used");

  auto* dot = app.add_subcommand("export-dot", "write a Graphviz digraph");
  dot->add_option("file", file, "forbidden-set file")->required();
  dot->add_option("--graph", graph, "row, col, combined or classes")
      ->check(CLI::IsMember({"row", "col", "combined", "classes"}));
  dot->add_option("-o,--output", output, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(file);
    if (*check) return cmd_check(file, block_file);
    if (*generate) return cmd_generate(file, rows, cols, seed, schedule, no_backtrack);
    if (*count) return cmd_count(file, rows, cols, oracle);
    if (*capacity) return cmd_capacity(file, max_rows, max_cols, verbose);
    if (*dot) return cmd_export_dot(file, graph, output);
  } catch (const ftcs::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
