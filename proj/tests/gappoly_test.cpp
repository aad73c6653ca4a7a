#include "lulab/gappoly.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

namespace lulab {
namespace {

using testing::q;
using Poly = std::map<std::vector<int>, BigInt>;

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [da, ca] : a) {
    for (const auto& [db, cb] : b) {
      std::vector<int> d(da.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = da[i] + db[i];
      out[d] += ca * cb;
    }
  }
  return out;
}

void add_into(Poly& acc, const Poly& p, const BigInt& scale) {
  for (const auto& [d, c] : p) acc[d] += scale * c;
}

// p_i written in gap variables: x_i + ... + x_n.
Poly gap_prob(int n, int i) {
  Poly p;
  for (int h = i; h <= n; ++h) {
    std::vector<int> d(n, 0);
    d[h - 1] = 1;
    p[d] = 1;
  }
  return p;
}

// The numerator for index j expanded symbolically in gap variables.
Poly expand_numerator(int n, int j) {
  Poly total;
  for_each_permutation(n, [&](const ListState& pi) {
    Poly weight{{std::vector<int>(n, 0), BigInt(1)}};
    for (int l = 1; l <= n; ++l) {
      for (int e = 0; e < n - pi.position(l); ++e) weight = mul(weight, gap_prob(n, l));
    }
    Poly factor;
    add_into(factor, gap_prob(n, j), 1);
    for (int i = 1; i < j; ++i) {
      if (pi.position(j) < pi.position(i)) {
        add_into(factor, gap_prob(n, i), -1);
        add_into(factor, gap_prob(n, j), 1);
      }
    }
    add_into(total, mul(factor, weight), 1);
  });
  return total;
}

TEST(Gap, RoundTrip) {
  const auto p = parse_distribution("0.7,0.3", std::nullopt);
  const auto g = to_gap(p);
  ASSERT_EQ(g.x.size(), 2u);
  EXPECT_EQ(g.x[0], q(2, 5));
  EXPECT_EQ(g.x[1], q(3, 10));
  EXPECT_EQ(from_gap(g).probs()[0], p.prob(1));
  EXPECT_EQ(from_gap(g).probs()[1], p.prob(2));
  EXPECT_THROW(from_gap(GapVector{{q(1, 2), q(-1, 10)}}), std::invalid_argument);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = testing::random_rational_distribution(rng, 1 + trial % 6);
    const auto back = from_gap(to_gap(r));
    for (int i = 1; i <= r.n(); ++i) EXPECT_EQ(back.prob(i), r.prob(i));
  }
}

TEST(DegreeVectors, Validation) {
  EXPECT_NO_THROW(DegreeVector::checked({0, 2}));
  EXPECT_THROW(DegreeVector::checked({1, 2}), std::invalid_argument);
  EXPECT_THROW(DegreeVector::checked({-1, 3}), std::invalid_argument);
  EXPECT_EQ(DegreeVector::checked({0, 2, 2, 2, 5}).to_string(), "0,2,2,2,5");
  EXPECT_EQ(all_degree_vectors(5).size(), 1365u);
  EXPECT_EQ(BigInt(all_degree_vectors(4).size()), binomial(10, 3));
}

TEST(Epi, Examples) {
  const auto id = ListState::identity(2);
  const auto sw = ListState::from_order({2, 1});
  EXPECT_EQ(epi_count(id, std::vector<int>{1, 0}), 1);
  EXPECT_EQ(epi_count(sw, std::vector<int>{0, 1}), 1);
  EXPECT_EQ(epi_count(sw, std::vector<int>{1, 0}), 0);
  EXPECT_EQ(epi_count(id, std::vector<int>{-1, 2}), 0);
  EXPECT_THROW(epi_count(id, std::vector<int>{1}), std::invalid_argument);
}

TEST(Epi, MatchesBruteForceWordTuples) {
  for (int n = 1; n <= 4; ++n) {
    const auto degrees = compositions(n, n * (n - 1) / 2);
    for_each_permutation(n, [&](const ListState& pi) {
      for (const auto& d : degrees) EXPECT_EQ(epi_count(pi, d), testing::brute_force_epi(pi, d)) << pi.to_string();
    });
  }
}

TEST(Epi, SumsToMultinomialTotal) {
  // Setting every x to 1: F^pi(1) = prod (n - l + 1)^(n - pi(l)).
  const int n = 4;
  for_each_permutation(n, [&](const ListState& pi) {
    BigInt sum = 0;
    for (const auto& d : compositions(n, n * (n - 1) / 2)) sum += epi_count(pi, d);
    BigInt expect = 1;
    for (int l = 1; l <= n; ++l) expect *= boost::multiprecision::pow(BigInt(n - l + 1), n - pi.position(l));
    EXPECT_EQ(sum, expect);
  });
}

TEST(Coefficient, TwoItemExamples) {
  EXPECT_EQ(coefficient(2, 2, DegreeVector::checked({0, 2})), 2);
  EXPECT_EQ(coefficient(2, 2, DegreeVector::checked({1, 1})), 0);
  EXPECT_EQ(coefficient(2, 2, DegreeVector::checked({2, 0})), 0);
  EXPECT_THROW(coefficient(2, 5, DegreeVector::checked({0, 2})), std::out_of_range);
  EXPECT_THROW(coefficient(2, 1, DegreeVector::checked({0, 2})), std::out_of_range);
  EXPECT_THROW(coefficient(3, 2, DegreeVector::checked({0, 2})), std::invalid_argument);
}

TEST(Coefficient, MatchesSymbolicExpansion) {
  for (int n = 2; n <= 4; ++n) {
    for (int j = 2; j <= n; ++j) {
      const Poly poly = expand_numerator(n, j);
      const auto scan = scan_coefficients(n, j);
      std::map<std::vector<int>, BigInt> got;
      for (const auto& [d, c] : scan.nonzero) got[{d.values().begin(), d.values().end()}] = c;
      for (const auto& [d, c] : poly) {
        const BigInt have = got.count(d) ? got[d] : BigInt(0);
        EXPECT_EQ(have, c) << "n=" << n << " j=" << j;
      }
      for (const auto& [d, c] : got) EXPECT_TRUE(poly.count(d)) << "n=" << n << " j=" << j;
      for (const auto& [d, c] : scan.nonzero) EXPECT_EQ(coefficient(n, j, d), c);
    }
  }
}

TEST(Coefficient, Homogeneous) {
  // No monomial of degree other than C(n,2)+1 survives.
  const int n = 3;
  const auto perms = detail::all_permutations(n);
  for (int total : {degree_target(n) - 1, degree_target(n) + 1}) {
    for (const auto& d : compositions(n, total)) {
      for (int j = 2; j <= n; ++j) {
        EXPECT_EQ(detail::coefficient_raw(
                      n, j, d, perms.size(), [&](std::size_t p) -> const ListState& { return perms[p]; },
                      [&](std::size_t p, std::span<const int> dd) { return epi_count(perms[p], dd); }),
                  0);
      }
    }
  }
}

TEST(Scan, Examples) {
  const auto two = scan_coefficients(2, 2);
  EXPECT_EQ(two.min_coefficient, 0);
  ASSERT_EQ(two.nonzero.size(), 1u);
  EXPECT_EQ(two.nonzero[0].first, DegreeVector::checked({0, 2}));
  EXPECT_EQ(two.nonzero[0].second, 2);
  EXPECT_GE(scan_coefficients(3, 2).min_coefficient, 0);
  EXPECT_GE(scan_coefficients(3, 3).min_coefficient, 0);
  EXPECT_EQ(scan_coefficients(3, 3).degree_vectors_checked, 15u);
  EXPECT_THROW(scan_coefficients(6, 2), LimitExceeded);
  EXPECT_THROW(scan_coefficients(3, 4), std::out_of_range);
}

TEST(Numerator, Examples) {
  EXPECT_EQ(numerator_value(parse_distribution("0.7,0.3", std::nullopt), 2), q(9, 50));
  for (int n = 2; n <= 5; ++n) {
    const auto u = parse_distribution("uniform", n);
    const auto z = ExactAnalysis(u).partition_function();
    for (int j = 2; j <= n; ++j) EXPECT_EQ(numerator_value(u, j), z / n);
  }
}

TEST(Numerator, CrossEvaluation) {
  std::mt19937_64 rng(6);
  std::vector<std::vector<ScanReport>> scans(6);
  for (int n = 2; n <= 4; ++n) scans[n] = scan_all_coefficients(n);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + trial % 3;
    const auto p = testing::random_rational_distribution(rng, n);
    const ExactAnalysis a(p);
    for (int j = 2; j <= n; ++j) {
      const auto value = numerator_value(p, j);
      EXPECT_EQ(value, a.partition_function() * (p.prob(j) - a.blame(j)));
      EXPECT_EQ(value, evaluate_coefficient_sum(scans[n][j - 2], to_gap(p)));
    }
  }
}

}  // namespace
}  // namespace lulab
