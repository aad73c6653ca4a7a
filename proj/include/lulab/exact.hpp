#pragma once

// Exact stationary analysis of the Transposition chain by enumerating S_n.
//
// The stationary law is Q(pi) proportional to prod_i p_i^(n - pi(i)). All sums
// are carried in integers: with D the lcm of the probability denominators and
// a_i = D * p_i, the unnormalized weight prod_i a_i^(n - pi(i)) differs from
// prod_i p_i^(n - pi(i)) by the constant D^C(n,2), which cancels in Q.

#include "lulab/distribution.hpp"
#include "lulab/list_state.hpp"
#include "lulab/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lulab {

inline constexpr int kDefaultExactLimit = 8;

struct ExactOptions {
  int limit = kDefaultExactLimit;
  unsigned threads = 0;  // 0: machine parallelism
};

/// LULAB_EXACT_LIMIT, when set to a positive integer, replaces the default limit.
inline int exact_limit_from_env() {
  if (const char* env = std::getenv("LULAB_EXACT_LIMIT")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultExactLimit;
}

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StationaryLaw {
  Rational Z;                                  // partition function in the caller's units
  std::vector<std::pair<ListState, Rational>> Q;  // lexicographic in the position vector
};

struct ExactReport {
  int n = 0;
  Rational Z;
  std::vector<std::pair<ListState, Rational>> Q;
  Rational expected_cost;
  Rational opt;
  Rational excess;
  /// inv_prob[i-1][j-1] = P[pi(j) < pi(i)], filled for i < j only.
  std::vector<std::vector<Rational>> inv_prob;
  /// blame[j-2] = s_j for j = 2..n.
  std::vector<Rational> blame;
  /// gladiator_excess[j-1] for j = 1..n.
  std::vector<Rational> gladiator_excess;

  const Rational& s(int j) const { return blame.at(j - 2); }
};

namespace detail {

struct ExactSums {
  BigInt z;                                 // sum of integer weights
  BigInt cost;                              // sum of weight * sum_i a_i pi(i)
  std::vector<std::vector<BigInt>> ahead;   // [i][j]: sum of weights with pi(j) < pi(i)
  std::vector<std::vector<BigInt>> at;      // [i][k]: sum of weights with pi(i) = k

  ExactSums() = default;
  explicit ExactSums(int n)
      : z(0), cost(0), ahead(n, std::vector<BigInt>(n, 0)), at(n, std::vector<BigInt>(n, 0)) {}

  ExactSums& operator+=(const ExactSums& o) {
    z += o.z;
    cost += o.cost;
    for (std::size_t i = 0; i < ahead.size(); ++i) {
      for (std::size_t j = 0; j < ahead.size(); ++j) {
        ahead[i][j] += o.ahead[i][j];
        at[i][j] += o.at[i][j];
      }
    }
    return *this;
  }
};

/// Integer scaling of a distribution and the power table a_i^e, e < n.
struct IntegerWeights {
  BigInt scale;                              // D
  std::vector<BigInt> a;                     // a_i = D * p_i
  std::vector<std::vector<BigInt>> powers;   // powers[i][e] = a_i^e

  explicit IntegerWeights(const AccessDistribution& dist) : scale(1) {
    for (const auto& p : dist.probs()) scale = boost::multiprecision::lcm(scale, denominator(p));
    const int n = dist.n();
    for (const auto& p : dist.probs()) a.push_back(numerator(p) * (scale / denominator(p)));
    powers.assign(n, {});
    for (int i = 0; i < n; ++i) {
      BigInt acc = 1;
      for (int e = 0; e < n; ++e) {
        powers[i].push_back(acc);
        acc *= a[i];
      }
    }
  }

  BigInt weight(const ListState& s) const {
    const int n = s.n();
    BigInt w = 1;
    for (int i = 1; i <= n; ++i) w *= powers[i - 1][n - s.position(i)];
    return w;
  }
};

inline void check_limit(const AccessDistribution& dist, const ExactOptions& opts) {
  if (dist.n() > opts.limit) {
    throw LimitExceeded("n = " + std::to_string(dist.n()) + " exceeds the exact enumeration limit " +
                        std::to_string(opts.limit) + " (raise it with --exact-limit or LULAB_EXACT_LIMIT)");
  }
}

inline void require_normalized(const AccessDistribution& dist, const char* what) {
  if (!dist.normalized()) throw std::invalid_argument(std::string(what) + " requires a normalized distribution");
}

inline void check_pair(const AccessDistribution& dist, int i, int j) {
  if (i < 1 || j > dist.n() || i >= j) {
    throw std::out_of_range("need 1 <= i < j <= n, got i=" + std::to_string(i) + ", j=" + std::to_string(j));
  }
}

}  // namespace detail

/// One enumeration of S_n; every exact quantity is read off its sums.
class ExactAnalysis {
 public:
  explicit ExactAnalysis(const AccessDistribution& dist, const ExactOptions& opts = {})
      : dist_(dist), weights_(dist), sums_(dist.n()) {
    detail::check_limit(dist, opts);
    const int n = dist.n();
    auto parts = parallel_map(static_cast<std::size_t>(n), opts.threads, [&](std::size_t first) {
      detail::ExactSums part(n);
      for_each_permutation_with_first(n, static_cast<int>(first) + 1, [&](const ListState& s) {
        const BigInt w = weights_.weight(s);
        part.z += w;
        BigInt c = 0;
        for (int i = 1; i <= n; ++i) {
          c += weights_.a[i - 1] * s.position(i);
          part.at[i - 1][s.position(i) - 1] += w;
          for (int j = i + 1; j <= n; ++j) {
            if (s.position(j) < s.position(i)) part.ahead[i - 1][j - 1] += w;
          }
        }
        part.cost += w * c;
      });
      return part;
    });
    for (const auto& p : parts) sums_ += p;
  }

  int n() const { return dist_.n(); }
  const AccessDistribution& distribution() const { return dist_; }

  Rational partition_function() const {
    const unsigned pairs = static_cast<unsigned>(n() * (n() - 1) / 2);
    return Rational(sums_.z, boost::multiprecision::pow(weights_.scale, pairs));
  }

  Rational probability(const ListState& s) const { return Rational(weights_.weight(s), sums_.z); }

  StationaryLaw law() const {
    StationaryLaw out{partition_function(), {}};
    for_each_permutation(n(), [&](const ListState& s) { out.Q.emplace_back(s, probability(s)); });
    return out;
  }

  /// Sum over pi of Q(pi) * sum_i p_i pi(i), in the distribution's units.
  Rational expected_cost() const { return Rational(sums_.cost, sums_.z * weights_.scale); }

  /// P[pi(j) < pi(i)] for i < j.
  Rational inversion_probability(int i, int j) const {
    detail::check_pair(dist_, i, j);
    return Rational(sums_.ahead[i - 1][j - 1], sums_.z);
  }

  /// P[pi(i) = k].
  Rational position_probability(int item, int k) const { return Rational(sums_.at[item - 1][k - 1], sums_.z); }

  /// s_j = sum_{i<j} (p_i - p_j) P[pi(j) < pi(i)].
  Rational blame(int j) const {
    if (j < 2 || j > n()) throw std::out_of_range("blame index j must lie in 2..n, got " + std::to_string(j));
    Rational s = 0;
    for (int i = 1; i < j; ++i) s += (dist_.prob(i) - dist_.prob(j)) * inversion_probability(i, j);
    return s;
  }

  /// E[ sum over i ranked below j of max(p_i - p_j, 0) ].
  Rational gladiator_excess(int j) const {
    if (j < 1 || j > n()) throw std::out_of_range("gladiator index j must lie in 1..n, got " + std::to_string(j));
    Rational total = 0;
    for (int i = 1; i <= n(); ++i) {
      if (i == j || dist_.prob(i) <= dist_.prob(j)) continue;
      const Rational below = i < j ? inversion_probability(i, j) : Rational(1) - inversion_probability(j, i);
      total += (dist_.prob(i) - dist_.prob(j)) * below;
    }
    return total;
  }

 private:
  AccessDistribution dist_;
  detail::IntegerWeights weights_;
  detail::ExactSums sums_;
};

inline StationaryLaw stationary_distribution(const AccessDistribution& dist, const ExactOptions& opts = {}) {
  return ExactAnalysis(dist, opts).law();
}

/// Largest |Q(pi) p_b - Q(pi') p_a| over all pi and adjacent pairs (a, b) at
/// positions (k, k+1), pi' being pi with a and b exchanged. Zero exactly when
/// detailed balance holds.
inline Rational detailed_balance_check(const AccessDistribution& dist, const ExactOptions& opts = {}) {
  detail::check_limit(dist, opts);
  const int n = dist.n();
  const detail::IntegerWeights weights(dist);
  auto parts = parallel_map(static_cast<std::size_t>(n), opts.threads, [&](std::size_t first) {
    std::pair<BigInt, BigInt> part{0, 0};  // (max residual, partition sum)
    for_each_permutation_with_first(n, static_cast<int>(first) + 1, [&](const ListState& s) {
      const BigInt w = weights.weight(s);
      part.second += w;
      for (int k = 1; k < n; ++k) {
        const int a = s.item_at(k);
        const int b = s.item_at(k + 1);
        ListState swapped = s;
        swapped.swap_adjacent(k);
        BigInt r = w * weights.a[b - 1] - weights.weight(swapped) * weights.a[a - 1];
        if (r < 0) r = -r;
        if (r > part.first) part.first = r;
      }
    });
    return part;
  });
  BigInt worst = 0;
  BigInt z = 0;
  for (const auto& [r, zs] : parts) {
    if (r > worst) worst = r;
    z += zs;
  }
  return Rational(worst, z * weights.scale);
}

inline Rational stationary_cost(const AccessDistribution& dist, const ExactOptions& opts = {}) {
  detail::require_normalized(dist, "stationary cost");
  return ExactAnalysis(dist, opts).expected_cost();
}

inline Rational inversion_probability(const AccessDistribution& dist, int i, int j, const ExactOptions& opts = {}) {
  detail::check_pair(dist, i, j);
  return ExactAnalysis(dist, opts).inversion_probability(i, j);
}

inline Rational blame(const AccessDistribution& dist, int j, const ExactOptions& opts = {}) {
  detail::require_normalized(dist, "blame");
  if (j < 2 || j > dist.n()) throw std::out_of_range("blame index j must lie in 2..n, got " + std::to_string(j));
  return ExactAnalysis(dist, opts).blame(j);
}

inline Rational gladiator_excess(const AccessDistribution& dist, int j, const ExactOptions& opts = {}) {
  if (j < 1 || j > dist.n()) throw std::out_of_range("gladiator index j must lie in 1..n, got " + std::to_string(j));
  return ExactAnalysis(dist, opts).gladiator_excess(j);
}

/// marginals[i-1][k-1] = P[pi(i) = k].
inline std::vector<std::vector<Rational>> position_marginals(const AccessDistribution& dist,
                                                             const ExactOptions& opts = {}) {
  const ExactAnalysis a(dist, opts);
  std::vector<std::vector<Rational>> m(dist.n(), std::vector<Rational>(dist.n()));
  for (int i = 1; i <= dist.n(); ++i) {
    for (int k = 1; k <= dist.n(); ++k) m[i - 1][k - 1] = a.position_probability(i, k);
  }
  return m;
}

class InternalCheckFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Full report. The identity expected_cost - opt = sum_j s_j is asserted
/// between the two independently accumulated routes.
inline ExactReport excess_decomposition(const AccessDistribution& dist, const ExactOptions& opts = {}) {
  detail::require_normalized(dist, "excess decomposition");
  const ExactAnalysis a(dist, opts);
  const int n = dist.n();
  ExactReport r;
  r.n = n;
  auto law = a.law();
  r.Z = std::move(law.Z);
  r.Q = std::move(law.Q);
  r.expected_cost = a.expected_cost();
  r.opt = opt_cost(dist);
  r.excess = r.expected_cost - r.opt;
  r.inv_prob.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) r.inv_prob[i - 1][j - 1] = a.inversion_probability(i, j);
  }
  Rational blame_sum = 0;
  for (int j = 2; j <= n; ++j) {
    r.blame.push_back(a.blame(j));
    blame_sum += r.blame.back();
  }
  for (int j = 1; j <= n; ++j) r.gladiator_excess.push_back(a.gladiator_excess(j));
  if (blame_sum != r.excess) {
    throw InternalCheckFailure("excess " + to_string(r.excess) + " differs from the blame sum " + to_string(blame_sum));
  }
  return r;
}

}  // namespace lulab
