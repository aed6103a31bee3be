#include <gtest/gtest.h>

#include <random>

#include "ftcs/generation.hpp"
#include "ftcs/oracle.hpp"
#include "test_support.hpp"

namespace ftcs {
namespace {

using testing::rows;

std::set<Block> brute_members(const ConstraintSystem& cs, std::size_t m, std::size_t n) {
  std::set<Block> out;
  testing::for_each_block(cs.alphabet().size(), m, n, [&](const Block& b) {
    if (testing::naive_member(cs.forbidden(), cs.h(), cs.w(), b)) out.insert(b);
  });
  return out;
}

// Columns "0/0" and "0/1" (h = 2, w = 1): "0/1" has no blue successor.
std::shared_ptr<const ConstraintSystem> stubby_columns() {
  const Alphabet& a = testing::binary();
  return std::make_shared<const ConstraintSystem>(a, 2, 1, std::set<Block>{rows({"1", "0"}), rows({"1", "1"})});
}

class HardSquareGeneration : public ::testing::Test {
 protected:
  std::shared_ptr<const ConstraintSystem> cs = testing::hard_square();
  Presentation g = build_combined(cs);
  QuadrupleTable quads = quadruples(g);
  VertexId zero = *cs->id_of(rows({"00", "00"}));
};

TEST_F(HardSquareGeneration, RowStripOfWindowHeightIsTheHead) {
  for (VertexId v = 1; v <= 7; ++v) EXPECT_EQ(generate_row_strip(g, v, 2), cs->block(v));
  for (VertexId v = 1; v <= 7; ++v) EXPECT_EQ(generate_col_strip(g, v, 2), cs->block(v));
}

TEST_F(HardSquareGeneration, ThreeStripsFromTheZeroBlock) {
  // Third row r must avoid "11"; the rows above are zero.
  std::set<Block> expected;
  testing::for_each_block(2, 1, 2, [&](const Block& r) {
    const Block b = concat_row(rows({"00", "00"}), r);
    if (testing::no_adjacent_ones(b)) expected.insert(b);
  });
  ASSERT_EQ(expected.size(), 3u);
  const auto strips = enumerate_row_strips(g, zero, 3);
  EXPECT_EQ(std::set<Block>(strips.begin(), strips.end()), expected);

  std::set<Block> expected_cols;
  for (const Block& b : expected) expected_cols.insert(transpose(b));
  const auto col_strips = enumerate_col_strips(g, zero, 3);
  EXPECT_EQ(std::set<Block>(col_strips.begin(), col_strips.end()), expected_cols);
}

TEST_F(HardSquareGeneration, RandomStripsAreMembers) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenerationPolicy p;
    p.seed = seed;
    const VertexId head = 1 + seed % 7;
    const Block r = generate_row_strip(g, head, 9, p);
    EXPECT_EQ(r.rows(), 9u);
    EXPECT_EQ(r.cols(), 2u);
    EXPECT_TRUE(is_member(*cs, r));
    const Block c = generate_col_strip(g, head, 9, p);
    EXPECT_EQ(c.rows(), 2u);
    EXPECT_EQ(c.cols(), 9u);
    EXPECT_TRUE(is_member(*cs, c));
  }
}

TEST_F(HardSquareGeneration, StripSoundnessAndCompleteness) {
  for (std::size_t m = 2; m <= 6; ++m) {
    std::set<Block> generated;
    for (VertexId v = 1; v <= 7; ++v)
      for (const Block& b : enumerate_row_strips(g, v, m)) EXPECT_TRUE(generated.insert(b).second);
    EXPECT_EQ(generated, brute_members(*cs, m, 2)) << m;
    EXPECT_EQ(generated.size(), testing::grid_independent_sets(m, 2));
  }
}

TEST_F(HardSquareGeneration, StripErrors) {
  EXPECT_THROW(generate_row_strip(g, 0, 3), RangeError);
  EXPECT_THROW(generate_row_strip(g, 1, 1), DimensionError);
  EXPECT_THROW(generate_row_strip(build_col_presentation(cs), 1, 3), KindError);
}

TEST(StripGeneration, DeadEndsAndBacktracking) {
  const auto cs = stubby_columns();
  const auto gr = build_row_presentation(cs);
  const VertexId stuck = *cs->id_of(rows({"0", "1"}));
  const VertexId zero = *cs->id_of(rows({"0", "0"}));
  EXPECT_TRUE(gr.blue_out(stuck).empty());
  EXPECT_THROW(generate_row_strip(gr, stuck, 3), DeadEnd);
  GenerationPolicy strict;
  strict.backtracking = false;
  EXPECT_THROW(generate_row_strip(gr, stuck, 3, strict), DeadEnd);
  // From the zero column every seed finds a path; some pass through "0/1" and back off.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenerationPolicy p;
    p.seed = seed;
    const Block b = generate_row_strip(gr, zero, 6, p);
    EXPECT_TRUE(is_member(*cs, b));
    EXPECT_EQ(b.rows(), 6u);
  }
}

TEST_F(HardSquareGeneration, CandidatesCaseOne) {
  IdentifierGrid grid(2, 2, 3, 5);
  const auto first = candidates(g, quads, grid, 2, 2);
  EXPECT_EQ(first.size(), 7u);
  grid.set(2, 2, zero);
  const auto right = candidates(g, quads, grid, 2, 3);
  EXPECT_EQ(right.size(), 3u);
  EXPECT_TRUE(std::ranges::equal(right, g.red_out(zero)));
  const auto below = candidates(g, quads, grid, 3, 2);
  EXPECT_TRUE(std::ranges::equal(below, g.blue_out(zero)));
  EXPECT_THROW(candidates(g, quads, grid, 3, 3), UnfilledPredecessor);
  EXPECT_THROW(candidates(g, quads, grid, 2, 4), UnfilledPredecessor);
}

TEST_F(HardSquareGeneration, CandidatesCaseTwoUsesQuadruples) {
  IdentifierGrid grid(2, 2, 3, 3);
  for (const Quad& q : quads.quads()) {
    grid.set(2, 2, q[0]);
    grid.set(2, 3, q[1]);
    grid.set(3, 2, q[2]);
    const auto c = candidates(g, quads, grid, 3, 3);
    EXPECT_TRUE(std::ranges::binary_search(c, q[3]));
  }
  // b does not continue a to the right, so no quadruple starts with (a, b).
  const VertexId a = *cs->id_of(rows({"01", "00"}));
  const VertexId b = *cs->id_of(rows({"00", "00"}));
  const VertexId c = *cs->id_of(rows({"00", "00"}));
  ASSERT_FALSE(g.has_red(a, b));
  ASSERT_TRUE(g.has_blue(a, c));
  grid.set(2, 2, a);
  grid.set(2, 3, b);
  grid.set(3, 2, c);
  EXPECT_TRUE(candidates(g, quads, grid, 3, 3).empty());
}

TEST_F(HardSquareGeneration, ExhaustiveThreeByFiveMatchesOracle) {
  GenerationPolicy p;
  GenerationStats stats;
  const auto blocks = enumerate_blocks(g, quads, 3, 5, p, &stats);
  EXPECT_EQ(blocks.size(), 827u);
  EXPECT_EQ(stats.dead_ends, 0u);
  const auto expected = brute_members(*cs, 3, 5);
  EXPECT_EQ(std::set<Block>(blocks.begin(), blocks.end()), expected);
  EXPECT_EQ(blocks, enumerate_members(*cs, 3, 5));
}

TEST_F(HardSquareGeneration, RandomBlocksAreMembersWithoutBacktracking) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenerationPolicy p;
    p.seed = seed;
    p.schedule = static_cast<ScheduleKind>(seed % 3);
    GenerationStats stats;
    const Block b = generate_block(g, quads, 4 + seed % 5, 3 + seed % 7, p, &stats);
    EXPECT_TRUE(is_member(*cs, b));
    EXPECT_EQ(stats.backtracks, 0u);
    EXPECT_EQ(stats.dead_ends, 0u);
  }
}

TEST_F(HardSquareGeneration, SeedDeterminism) {
  GenerationPolicy p;
  p.seed = 12345;
  EXPECT_EQ(generate_block(g, quads, 7, 9, p), generate_block(g, quads, 7, 9, p));
  std::set<Block> distinct;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    p.seed = seed;
    distinct.insert(generate_block(g, quads, 7, 9, p));
  }
  EXPECT_GT(distinct.size(), 1u);
}

TEST_F(HardSquareGeneration, WindowSizedTargetsCoverTheAllowedSet) {
  std::map<Block, int> seen;
  for (std::uint64_t seed = 0; seed < 700; ++seed) {
    GenerationPolicy p;
    p.seed = seed;
    const Block b = generate_block(g, quads, 2, 2, p);
    EXPECT_TRUE(cs->id_of(b).has_value());
    ++seen[b];
  }
  EXPECT_EQ(seen.size(), 7u);
  // Roughly uniform: each of the 7 blocks near 100 of 700.
  for (const auto& [b, k] : seen) {
    EXPECT_GT(k, 50);
    EXPECT_LT(k, 150);
  }
}

TEST(Generation, EverythingForbiddenIsNotRealizable) {
  const auto g = build_combined(testing::everything_forbidden());
  EXPECT_THROW(generate_block(g, 3, 3, GenerationPolicy{}), NotRealizable);
  EXPECT_TRUE(enumerate_blocks(g, quadruples(g), 3, 3, GenerationPolicy{}).empty());
}

TEST(Generation, TargetSmallerThanWindow) {
  const auto g = build_combined(testing::hard_square());
  EXPECT_THROW(generate_block(g, 1, 3, GenerationPolicy{}), DimensionError);
}

// Backtracking finds a member exactly when one exists; without it the
// process either succeeds or stops at a dead end.
TEST(Generation, BacktrackingOnDenseForbiddenSets) {
  std::size_t unrealizable = 0, rescued = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto cs = testing::random_system(seed, 2, 2, 2, 9);
    const auto g = build_combined(cs);
    const auto quads = quadruples(g);
    for (std::size_t size = 3; size <= 4; ++size) {
      const bool exists = count_members(*cs, size, size) > 0;
      GenerationPolicy p;
      p.seed = seed;
      GenerationStats stats;
      try {
        const Block b = generate_block(g, quads, size, size, p, &stats);
        EXPECT_TRUE(exists);
        EXPECT_TRUE(is_member(*cs, b));
        rescued += stats.backtracks > 0;
      } catch (const NotRealizable&) {
        EXPECT_FALSE(exists);
        ++unrealizable;
      }
      p.backtracking = false;
      try {
        EXPECT_TRUE(is_member(*cs, generate_block(g, quads, size, size, p)));
      } catch (const DeadEnd&) {
      } catch (const NotRealizable&) {
        EXPECT_EQ(cs->allowed_count(), 0u);
      }
    }
  }
  EXPECT_GT(unrealizable, 0u);
  EXPECT_GT(rescued, 0u);
}

TEST(Schedule, InterleavedOrderOnThreeByFive) {
  const auto s = make_schedule(ScheduleKind::interleaved, 2, 2, 3, 5);
  const Schedule expected{{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}};
  EXPECT_EQ(s, expected);
  std::vector<bool> interior;
  for (const auto& c : s) interior.push_back(!is_case1(step_case(2, 2, c)));
  // Steps 4, 7 and 8 are the interior ones.
  EXPECT_EQ(interior, (std::vector<bool>{false, false, false, true, false, false, true, true}));
}

TEST(Schedule, ValidationRejectsBadOrders) {
  IdentifierGrid grid(2, 2, 3, 3);
  EXPECT_THROW(validate_schedule({{2, 2}, {3, 3}, {2, 3}, {3, 2}}, grid), UnfilledPredecessor);
  EXPECT_THROW(validate_schedule({{2, 2}, {2, 3}, {3, 2}}, grid), Error);
  EXPECT_THROW(validate_schedule({{2, 2}, {2, 2}, {2, 3}, {3, 2}, {3, 3}}, grid), Error);
  EXPECT_NO_THROW(validate_schedule({{2, 2}, {3, 2}, {2, 3}, {3, 3}}, grid));
  for (auto kind : {ScheduleKind::row_major, ScheduleKind::col_major, ScheduleKind::interleaved})
    for (std::size_t m = 2; m <= 5; ++m)
      for (std::size_t n = 2; n <= 6; ++n)
        EXPECT_NO_THROW(validate_schedule(make_schedule(kind, 2, 2, m, n), IdentifierGrid(2, 2, m, n)));
}

TEST(Schedule, IndependenceOfOutputSets) {
  for (const auto& cs : {testing::hard_square(), testing::random_system(7, 3, 2, 2, 20)}) {
    const auto g = build_combined(cs);
    const auto quads = quadruples(g);
    GenerationPolicy p;
    const auto base = enumerate_blocks(g, quads, 3, 4, p);
    for (auto kind : {ScheduleKind::col_major, ScheduleKind::interleaved}) {
      p.schedule = kind;
      EXPECT_EQ(enumerate_blocks(g, quads, 3, 4, p), base);
    }
    EXPECT_EQ(base, enumerate_members(*cs, 3, 4));
  }
}

TEST(Generation, CustomSchedulesAreHonoured) {
  const auto g = build_combined(testing::hard_square());
  const auto quads = quadruples(g);
  GenerationPolicy p;
  p.custom_schedule = Schedule{{2, 2}, {3, 2}, {4, 2}, {2, 3}, {3, 3}, {4, 3}};
  GenerationStats stats;
  const Block b = generate_block(g, quads, 4, 3, p, &stats);
  EXPECT_TRUE(is_member(*g.system_ptr(), b));
  ASSERT_EQ(stats.steps.size(), 6u);
  EXPECT_EQ(stats.steps[1].cell, (GridCell{3, 2}));
  EXPECT_EQ(stats.steps[1].kind, StepCase::left_col);
  p.custom_schedule = Schedule{{2, 3}, {2, 2}};
  EXPECT_THROW(generate_block(g, quads, 2, 3, p), UnfilledPredecessor);
}

TEST(Generation, GrowingTheTargetMidway) {
  const auto cs = testing::hard_square();
  const auto g = build_combined(cs);
  const auto quads = quadruples(g);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenerationPolicy p;
    p.seed = seed;
    IdentifierGrid grid(2, 2, 3, 3);
    fill_grid(g, quads, grid, p);
    const Block small = grid.reconstruct(*cs);
    grid.grow(3, 5);
    fill_grid(g, quads, grid, p);
    grid.grow(6, 5);
    fill_grid(g, quads, grid, p);
    const Block big = grid.reconstruct(*cs);
    EXPECT_EQ(big.rows(), 6u);
    EXPECT_EQ(big.cols(), 5u);
    EXPECT_EQ(subblock(big, 1, 1, 3, 3), small);
    EXPECT_TRUE(is_member(*cs, big));
  }
  IdentifierGrid grid(2, 2, 3, 3);
  EXPECT_THROW(grid.grow(2, 3), DimensionError);
}

TEST(IdentifierGrid, ReconstructionDetectsDisagreement) {
  const auto cs = testing::unconstrained();
  IdentifierGrid grid(2, 2, 2, 3);
  grid.set(2, 2, *cs->id_of(rows({"00", "00"})));
  EXPECT_THROW(grid.reconstruct(*cs), ReconstructionError);
  grid.set(2, 3, *cs->id_of(rows({"11", "11"})));
  EXPECT_THROW(grid.reconstruct(*cs), ReconstructionError);
  grid.set(2, 3, *cs->id_of(rows({"01", "01"})));
  EXPECT_EQ(grid.reconstruct(*cs), rows({"001", "001"}));
}

TEST(IsGenerated, Conventions) {
  const auto cs = testing::hard_square();
  const auto g = build_combined(cs);
  for (VertexId v = 1; v <= 7; ++v) EXPECT_TRUE(is_generated(g, cs->block(v)));
  EXPECT_FALSE(is_generated(g, rows({"000", "011", "000"})));
  EXPECT_THROW(is_generated(g, rows({"0"})), DimensionError);
}

// G(S) generates b exactly when b is a member.
TEST(IsGenerated, EquivalentToMembership) {
  const auto hs = testing::hard_square();
  const auto g = build_combined(hs);
  std::size_t checked = 0;
  testing::for_each_block(2, 4, 4, [&](const Block& b) {
    EXPECT_EQ(is_generated(g, b), testing::no_adjacent_ones(b));
    ++checked;
  });
  EXPECT_EQ(checked, 65536u);

  const auto cs = testing::random_system(13, 3, 2, 2, 20);
  const auto g3 = build_combined(cs);
  testing::for_each_block(3, 3, 4, [&](const Block& b) {
    EXPECT_EQ(is_generated(g3, b), testing::naive_member(cs->forbidden(), 2, 2, b));
  });
}

TEST(IsGenerated, NonSquareWindows) {
  const auto cs = testing::random_system(31, 2, 2, 3, 12);
  const auto g = build_combined(cs);
  const auto quads = quadruples(g);
  testing::for_each_block(2, 3, 4, [&](const Block& b) {
    EXPECT_EQ(is_generated(g, b), testing::naive_member(cs->forbidden(), 2, 3, b));
  });
  EXPECT_EQ(enumerate_blocks(g, quads, 4, 5, GenerationPolicy{}), enumerate_members(*cs, 4, 5));
}

}  // namespace
}  // namespace ftcs
