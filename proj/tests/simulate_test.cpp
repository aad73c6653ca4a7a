#include "lulab/exact.hpp"
#include "lulab/simulate.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace lulab {
namespace {

using testing::q;

SimulationConfig config(Rule rule, std::int64_t steps, std::uint64_t seed = 1) {
  SimulationConfig cfg;
  cfg.rule = rule;
  cfg.steps = steps;
  cfg.seed = seed;
  return cfg;
}

TEST(Simulate, UniformThreeItems) {
  const auto s = run_chain(parse_distribution("uniform", 3), config(Rule::transposition, 1'000'000));
  EXPECT_NEAR(s.avg_cost, 2.0, 0.01);
  EXPECT_EQ(s.samples, 900'000);
}

TEST(Simulate, TwoItemsMatchesExact) {
  const auto s = run_chain(parse_distribution("0.7,0.3", std::nullopt), config(Rule::transposition, 1'000'000));
  EXPECT_NEAR(s.avg_cost, 1.42, 0.01);
}

TEST(Simulate, MoveToFrontMatchesClosedForm) {
  const auto p = parse_distribution("5,3,2,1", std::nullopt);
  const auto s = run_chain(p, config(Rule::mtf, 2'000'000, 3));
  EXPECT_LE(std::abs(s.avg_cost - to_double(mtf_closed_form(p))), 5 * s.std_error);
}

TEST(Simulate, GladiatorAcceptsStrengths) {
  const auto p = parse_distribution("5,3,2", std::nullopt, false);
  const auto s = run_chain(p, config(Rule::gladiator, 1'000'000, 5));
  const auto m = position_marginals(p);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(s.position_freq[i][k], to_double(m[i][k]), 0.01);
  }
  EXPECT_THROW(run_chain(p, config(Rule::transposition, 100)), std::invalid_argument);
}

TEST(Simulate, Deterministic) {
  const auto p = parse_distribution("zipf:1", 4);
  for (Rule rule : {Rule::transposition, Rule::mtf, Rule::gladiator}) {
    const auto a = run_chain(p, config(rule, 50'000, 7));
    const auto b = run_chain(p, config(rule, 50'000, 7));
    EXPECT_EQ(a.avg_cost, b.avg_cost);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_EQ(a.position_freq, b.position_freq);
    EXPECT_EQ(a.final_state, b.final_state);
    EXPECT_NE(run_chain(p, config(rule, 50'000, 8)).avg_cost, a.avg_cost);
  }
}

TEST(Simulate, FrequencyRowsAndColumnsSumToOne) {
  const auto s = run_chain(parse_distribution("4,3,2,1", std::nullopt), config(Rule::transposition, 20'000));
  for (int a = 0; a < 4; ++a) {
    double row = 0, col = 0;
    for (int b = 0; b < 4; ++b) {
      row += s.position_freq[a][b];
      col += s.position_freq[b][a];
    }
    EXPECT_NEAR(row, 1.0, 1e-12);
    EXPECT_NEAR(col, 1.0, 1e-12);
  }
}

TEST(Simulate, InitialStates) {
  SimulationConfig cfg = config(Rule::transposition, 10);
  cfg.burn_in = 0;
  cfg.batches = 1;
  cfg.initial = Initial::reversed;
  const auto p = parse_distribution("1", std::nullopt);
  EXPECT_EQ(run_chain(p, cfg).avg_cost, 1.0);
  const auto p3 = parse_distribution("uniform", 3);
  cfg.steps = 1;
  EXPECT_EQ(run_chain(p3, cfg).position_freq[2][0], 1.0);
  cfg.initial = Initial::random;
  EXPECT_NO_THROW(run_chain(p3, cfg));
}

TEST(Simulate, ConfigValidation) {
  const auto p = parse_distribution("uniform", 3);
  EXPECT_THROW(run_chain(p, config(Rule::transposition, 0)), std::invalid_argument);
  SimulationConfig cfg = config(Rule::transposition, 100);
  cfg.burn_in = 100;
  EXPECT_THROW(run_chain(p, cfg), std::invalid_argument);
  cfg.burn_in = 10;
  cfg.batches = 0;
  EXPECT_THROW(run_chain(p, cfg), std::invalid_argument);
  cfg.batches = 91;
  EXPECT_THROW(run_chain(p, cfg), std::invalid_argument);
}

TEST(Simulate, ReplicasUseDistinctSeeds) {
  const auto p = parse_distribution("zipf:1", 3);
  const auto reps = run_replicas(p, config(Rule::transposition, 20'000, 2), 3, 2);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_NE(reps[0].avg_cost, reps[1].avg_cost);
  SimulationConfig c = config(Rule::transposition, 20'000, replica_seed(2, 1));
  EXPECT_EQ(run_chain(p, c).avg_cost, reps[1].avg_cost);
  EXPECT_THROW(run_replicas(p, c, 0), std::invalid_argument);
}

TEST(Simulate, AliasTableFrequencies) {
  const std::vector<double> w{0.5, 0.3, 0.15, 0.05};
  const detail::AliasTable table(w);
  std::mt19937_64 rng(12);
  std::vector<int> count(4);
  const int draws = 400'000;
  for (int t = 0; t < draws; ++t) ++count[table.sample(rng)];
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(count[i] / double(draws), w[i], 0.005);
}

TEST(MtfClosedForm, Examples) {
  EXPECT_EQ(mtf_closed_form(parse_distribution("0.7,0.3", std::nullopt)), q(71, 50));
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(mtf_closed_form(parse_distribution("uniform", n)), q(n + 1, 2));
  EXPECT_THROW(mtf_closed_form(parse_distribution("2,1", std::nullopt, false)), std::invalid_argument);
}

}  // namespace
}  // namespace lulab
