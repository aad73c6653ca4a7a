#include "lulab/distribution.hpp"
#include "lulab/list_state.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace lulab {
namespace {

using testing::q;

TEST(Distribution, SortsAndKeepsLabels) {
  const auto d = make_distribution({0.3, 0.7}, false);
  EXPECT_EQ(d.prob(1), rational_from_double(0.7));
  EXPECT_EQ(d.prob(2), rational_from_double(0.3));
  EXPECT_EQ(d.label(1), 2);
  EXPECT_EQ(d.label(2), 1);
}

TEST(Distribution, TiesKeepInputOrder) {
  const auto d = make_distribution({q(1, 2), q(1, 2)}, false);
  EXPECT_EQ(d.label(1), 1);
  EXPECT_EQ(d.label(2), 2);
  EXPECT_TRUE(d.normalized());
}

TEST(Distribution, RejectsBadInput) {
  EXPECT_THROW(make_distribution({0.5, -0.1}, false), std::invalid_argument);
  EXPECT_THROW(make_distribution({q(1), q(0)}, true), std::invalid_argument);
  EXPECT_THROW(make_distribution(std::vector<Rational>{}, true), std::invalid_argument);
}

TEST(Distribution, DecimalLiteralsAreExact) {
  const auto d = parse_distribution("0.7,0.3", std::nullopt);
  EXPECT_EQ(d.prob(1), q(7, 10));
  EXPECT_EQ(d.prob(2), q(3, 10));
  EXPECT_EQ(parse_rational("1e-3"), q(1, 1000));
  EXPECT_EQ(parse_rational(" 6/4 "), q(3, 2));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Distribution, NormalizesWhenAsked) {
  const auto d = parse_distribution("3,1", std::nullopt);
  EXPECT_EQ(d.prob(1), q(3, 4));
  const auto s = parse_distribution("3,1", std::nullopt, false);
  EXPECT_EQ(s.prob(1), q(3));
  EXPECT_FALSE(s.normalized());
}

TEST(Distribution, BuiltinFamilies) {
  const auto u = builtin_distribution({Family::uniform}, 3);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(u.prob(i), q(1, 3));
  const auto z = builtin_distribution({Family::zipf, 1.0}, 2);
  EXPECT_EQ(z.prob(1), q(2, 3));
  EXPECT_EQ(z.prob(2), q(1, 3));
  const auto g = builtin_distribution({Family::geometric, 1.0, q(1, 2)}, 3);
  EXPECT_EQ(g.prob(1), q(4, 7));
  EXPECT_EQ(g.prob(2), q(2, 7));
  EXPECT_EQ(g.prob(3), q(1, 7));
  EXPECT_EQ(parse_distribution("geom:1/2", 3).prob(3), q(1, 7));
  EXPECT_THROW(parse_distribution("uniform", std::nullopt), std::invalid_argument);
  EXPECT_THROW(parse_distribution("zipf:-1", 3), std::invalid_argument);
  EXPECT_THROW(parse_distribution("geom:2", 3), std::invalid_argument);
}

TEST(Distribution, NonIntegralZipfIsNormalizedAndSorted) {
  const auto z = builtin_distribution({Family::zipf, 0.5}, 5);
  EXPECT_TRUE(z.normalized());
  for (int i = 1; i < 5; ++i) EXPECT_GT(z.prob(i), z.prob(i + 1));
}

TEST(Distribution, RationalFromDoubleIsExact) {
  EXPECT_EQ(rational_from_double(0.5), q(1, 2));
  EXPECT_EQ(rational_from_double(-3.0), q(-3));
  EXPECT_EQ(to_double(rational_from_double(0.1)), 0.1);
  EXPECT_NE(rational_from_double(0.1), q(1, 10));
}

TEST(OptCost, Examples) {
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(opt_cost(builtin_distribution({Family::uniform}, n)), q(n + 1, 2));
  }
  EXPECT_EQ(opt_cost(parse_distribution("0.7,0.3", std::nullopt)), q(13, 10));
  EXPECT_EQ(opt_cost(parse_distribution("1", std::nullopt)), q(1));
}

TEST(ListState, TranspositionExamples) {
  const auto s = ListState::from_order({1, 2, 3});
  EXPECT_EQ(transposition_step(s, 1), ListState::from_order({1, 2, 3}));
  EXPECT_EQ(transposition_step(s, 3), ListState::from_order({1, 3, 2}));
  EXPECT_EQ(transposition_step(ListState::from_order({1, 3, 2}), 2), ListState::from_order({1, 2, 3}));
  EXPECT_THROW(transposition_step(s, 4), std::out_of_range);
  EXPECT_THROW(transposition_step(s, 0), std::out_of_range);
}

TEST(ListState, MoveToFrontExamples) {
  const auto s = ListState::from_order({1, 2, 3});
  EXPECT_EQ(mtf_step(s, 3), ListState::from_order({3, 1, 2}));
  EXPECT_EQ(mtf_step(s, 1), s);
  EXPECT_EQ(mtf_step(ListState::from_order({3, 1, 2}), 2), ListState::from_order({2, 3, 1}));
  EXPECT_THROW(mtf_step(s, 9), std::out_of_range);
}

TEST(ListState, RejectsNonPermutations) {
  EXPECT_THROW(ListState::from_order({1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(ListState::from_positions({0, 1}), std::invalid_argument);
}

TEST(ListState, TextForm) { EXPECT_EQ(ListState::from_order({2, 1, 3}).to_string(), "[2,1,3]"); }

TEST(Inversions, Examples) {
  const auto p = parse_distribution("0.7,0.3", std::nullopt);
  const auto id = inversions(ListState::identity(2), p);
  EXPECT_TRUE(id.pairs.empty());
  EXPECT_EQ(id.weighted_excess, 0);
  const auto sw = inversions(ListState::from_order({2, 1}), p);
  ASSERT_EQ(sw.pairs.size(), 1u);
  EXPECT_EQ(sw.pairs[0], std::make_pair(1, 2));
  EXPECT_EQ(sw.weighted_excess, q(2, 5));
  const auto p3 = parse_distribution("5,3,2", std::nullopt);
  EXPECT_EQ(inversions(ListState::reversed(3), p3).pairs.size(), 3u);
}

TEST(Properties, StepsPreserveBijection) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 7; ++n) {
    ListState t = ListState::identity(n), m = ListState::identity(n);
    for (int step = 0; step < 500; ++step) {
      const int item = static_cast<int>(rng() % n) + 1;
      t = transposition_step(t, item);
      m = mtf_step(m, item);
      for (int k = 1; k <= n; ++k) {
        EXPECT_EQ(t.position(t.item_at(k)), k);
        EXPECT_EQ(m.position(m.item_at(k)), k);
      }
      EXPECT_EQ(m.item_at(1), item);
    }
  }
}

TEST(Properties, ExcessEqualsCostMinusOpt) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 5; ++n) {
    const auto p = testing::random_rational_distribution(rng, n);
    for_each_permutation(n, [&](const ListState& s) {
      EXPECT_EQ(inversions(s, p).weighted_excess, access_cost(s, p) - opt_cost(p));
    });
  }
}

TEST(Properties, TwoRequestsMoveTwoPlaces) {
  for (int n = 3; n <= 6; ++n) {
    for_each_permutation(n, [&](const ListState& s) {
      for (int item = 1; item <= n; ++item) {
        const auto twice = transposition_step(transposition_step(s, item), item);
        EXPECT_EQ(twice.position(item), std::max(1, s.position(item) - 2));
      }
    });
  }
}

TEST(Enumeration, VisitsEveryPermutationOnce) {
  for (int n = 1; n <= 6; ++n) {
    std::set<std::vector<int>> seen;
    for_each_permutation(n, [&](const ListState& s) { seen.emplace(s.positions().begin(), s.positions().end()); });
    EXPECT_EQ(BigInt(seen.size()), factorial(n));
  }
}

}  // namespace
}  // namespace lulab
