#pragma once

// Gap-variable form of the inequality s_j <= p_j.
//
// With x_i = p_i - p_{i+1} (x_n = p_n) the cleared-denominator numerator
//   sum_pi (p_j - sum_{i<j} (p_i - p_j) [pi(j) < pi(i)]) prod_l p_l^(n - pi(l))
// becomes a homogeneous polynomial of degree C(n,2)+1 in x. Its coefficients
// are integer combinations of E^pi(d) = [x^d] prod_i (x_i + ... + x_n)^(n - pi(i)).

#include "lulab/distribution.hpp"
#include "lulab/exact.hpp"
#include "lulab/list_state.hpp"
#include "lulab/parallel.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lulab {

inline int degree_target(int n) { return n * (n - 1) / 2 + 1; }

struct GapVector {
  std::vector<Rational> x;
};

inline GapVector to_gap(const AccessDistribution& dist) {
  GapVector g;
  const int n = dist.n();
  for (int i = 1; i < n; ++i) g.x.push_back(dist.prob(i) - dist.prob(i + 1));
  g.x.push_back(dist.prob(n));
  return g;
}

/// p_i = x_i + ... + x_n. The result is not renormalized, and x_n must be
/// positive for it to be a valid distribution.
inline AccessDistribution from_gap(const GapVector& g) {
  if (g.x.empty()) throw std::invalid_argument("empty gap vector");
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    if (g.x[i] < 0) throw std::invalid_argument("negative gap x_" + std::to_string(i + 1) + " = " + to_string(g.x[i]));
  }
  std::vector<Rational> p(g.x.size());
  Rational acc = 0;
  for (std::size_t i = g.x.size(); i-- > 0;) {
    acc += g.x[i];
    p[i] = acc;
  }
  return make_distribution(std::move(p), false);
}

/// Exponent vector whose entries sum to C(n,2)+1.
class DegreeVector {
 public:
  static DegreeVector checked(std::vector<int> d) {
    const int n = static_cast<int>(d.size());
    if (n < 1) throw std::invalid_argument("empty degree vector");
    for (int v : d) {
      if (v < 0) throw std::invalid_argument("degree vector entries must be nonnegative");
    }
    const int sum = std::accumulate(d.begin(), d.end(), 0);
    if (sum != degree_target(n)) {
      throw std::invalid_argument("degree vector sums to " + std::to_string(sum) + ", expected C(n,2)+1 = " +
                                  std::to_string(degree_target(n)));
    }
    DegreeVector out;
    out.d_ = std::move(d);
    return out;
  }

  int n() const { return static_cast<int>(d_.size()); }
  int operator[](int letter) const { return d_[letter - 1]; }  // 1-based
  std::span<const int> values() const { return d_; }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < d_.size(); ++i) s += (i ? "," : "") + std::to_string(d_[i]);
    return s;
  }

  friend bool operator==(const DegreeVector&, const DegreeVector&) = default;

 private:
  std::vector<int> d_;
};

/// All nonnegative vectors of length n summing to `total`, in colexicographic order.
inline std::vector<std::vector<int>> compositions(int n, int total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  // Fill from the last coordinate so the last entry varies slowest.
  auto rec = [&](auto&& self, int idx, int remaining) -> void {
    if (idx == 0) {
      cur[0] = remaining;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[idx] = v;
      self(self, idx - 1, remaining - v);
    }
  };
  if (n > 0) rec(rec, n - 1, total);
  return out;
}

inline std::vector<DegreeVector> all_degree_vectors(int n) {
  std::vector<DegreeVector> out;
  for (auto& d : compositions(n, degree_target(n))) out.push_back(DegreeVector::checked(std::move(d)));
  return out;
}

namespace detail {

/// Coefficient extraction for prod_i (x_i + ... + x_n)^(e_i). Item i is the
/// last one allowed to emit letter i, so it takes all remaining copies of i
/// and spreads the rest of its exponent over letters i+1..n.
class EpiDp {
 public:
  EpiDp(std::vector<int> exponents, std::span<const int> d) : e_(std::move(exponents)), n_(static_cast<int>(e_.size())) {
    fact_.push_back(1);
    for (int v = 1; v <= n_; ++v) fact_.push_back(fact_.back() * v);
    remaining_.assign(d.begin(), d.end());
  }

  BigInt run() { return solve(0); }

 private:
  BigInt solve(int item) {
    if (item == n_) return 1;
    std::vector<int> key(remaining_.begin() + item, remaining_.end());
    key.push_back(item);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    BigInt total = 0;
    const int own = remaining_[item];
    const int budget = e_[item];
    if (own <= budget) {
      remaining_[item] = 0;
      // Spread budget - own letters over item+1..n_-1, each capped by what remains.
      distribute(item, item + 1, budget - own, fact_[budget] / fact_[own], total);
      remaining_[item] = own;
    }
    memo_.emplace(std::move(key), total);
    return total;
  }

  void distribute(int item, int letter, int left, const BigInt& coeff, BigInt& total) {
    if (letter == n_) {
      if (left == 0) total += coeff * solve(item + 1);
      return;
    }
    const int cap = std::min(left, remaining_[letter]);
    for (int c = 0; c <= cap; ++c) {
      remaining_[letter] -= c;
      distribute(item, letter + 1, left - c, coeff / fact_[c], total);
      remaining_[letter] += c;
    }
  }

  std::vector<int> e_;
  int n_;
  std::vector<BigInt> fact_;
  std::vector<int> remaining_;
  std::map<std::vector<int>, BigInt> memo_;
};

}  // namespace detail

/// E^pi(d): the coefficient of x^d in prod_i (x_i + ... + x_n)^(n - pi(i)).
/// Zero whenever some entry of d is negative.
inline BigInt epi_count(const ListState& pi, std::span<const int> d) {
  const int n = pi.n();
  if (static_cast<int>(d.size()) != n) throw std::invalid_argument("degree vector length differs from n");
  int sum = 0;
  for (int v : d) {
    if (v < 0) return 0;
    sum += v;
  }
  if (sum != n * (n - 1) / 2) return 0;
  std::vector<int> e(n);
  for (int i = 1; i <= n; ++i) e[i - 1] = n - pi.position(i);
  return detail::EpiDp(std::move(e), d).run();
}

namespace detail {

inline std::uint64_t pack_degree(std::span<const int> d, int base) {
  std::uint64_t key = 0;
  for (int v : d) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(v);
  return key;
}

/// E^pi over every pi in S_n and every degree vector of total C(n,2),
/// precomputed once so coefficient scans become table lookups.
class EpiTable {
 public:
  EpiTable(int n, unsigned threads) : n_(n), base_(n * (n - 1) / 2 + 2) {
    for_each_permutation(n, [&](const ListState& s) { perms_.push_back(s); });
    const auto degrees = compositions(n, n * (n - 1) / 2);
    tables_ = parallel_map(perms_.size(), threads, [&](std::size_t p) {
      std::unordered_map<std::uint64_t, BigInt> table;
      for (const auto& d : degrees) {
        BigInt v = epi_count(perms_[p], d);
        if (v != 0) table.emplace(pack_degree(d, base_), std::move(v));
      }
      return table;
    });
  }

  int n() const { return n_; }
  std::size_t size() const { return perms_.size(); }
  const ListState& perm(std::size_t p) const { return perms_[p]; }

  /// E^perm(p)(d); entries may be negative.
  BigInt lookup(std::size_t p, std::span<const int> d) const {
    for (int v : d) {
      if (v < 0 || v >= base_) return 0;
    }
    const auto& t = tables_[p];
    auto it = t.find(pack_degree(d, base_));
    return it == t.end() ? BigInt(0) : it->second;
  }

 private:
  int n_;
  int base_;
  std::vector<ListState> perms_;
  std::vector<std::unordered_map<std::uint64_t, BigInt>> tables_;
};

/// Coefficient of x^d for arbitrary d (no degree check) over `count`
/// permutations; `perm_at(p)` yields the p-th one and `epi(p, d')` its E^pi(d').
template <class PermAt, class Epi>
BigInt coefficient_raw(int n, int j, std::span<const int> d, std::size_t count, PermAt&& perm_at, Epi&& epi) {
  BigInt total = 0;
  std::vector<int> shifted(d.begin(), d.end());
  for (std::size_t p = 0; p < count; ++p) {
    const ListState& pi = perm_at(p);
    for (int k = 1; k <= n; ++k) {
      shifted[k - 1] -= 1;
      const BigInt c = epi(p, std::span<const int>(shifted));
      shifted[k - 1] += 1;
      if (c == 0) continue;
      if (k >= j) {
        total += c;
      } else {
        int later = 0;  // i <= k with pi(i) > pi(j)
        for (int i = 1; i <= k; ++i) later += pi.position(i) > pi.position(j);
        total -= c * later;
      }
    }
  }
  return total;
}

/// coefficient_raw backed by a precomputed table.
inline BigInt coefficient_from_table(const EpiTable& table, int j, std::span<const int> d) {
  return coefficient_raw(
      table.n(), j, d, table.size(), [&](std::size_t p) -> const ListState& { return table.perm(p); },
      [&](std::size_t p, std::span<const int> dd) { return table.lookup(p, dd); });
}

inline std::vector<ListState> all_permutations(int n) {
  std::vector<ListState> out;
  for_each_permutation(n, [&](const ListState& s) { out.push_back(s); });
  return out;
}

inline void check_j(int n, int j) {
  if (j < 2 || j > n) {
    throw std::out_of_range("j out of range: need 2 <= j <= n = " + std::to_string(n) + ", got " + std::to_string(j));
  }
}

}  // namespace detail

/// Coefficient of x^d in the gap-variable numerator for index j.
inline BigInt coefficient(int n, int j, const DegreeVector& d, const ExactOptions& opts = {}) {
  if (d.n() != n) throw std::invalid_argument("degree vector length differs from n");
  detail::check_j(n, j);
  if (n > opts.limit) throw LimitExceeded("n exceeds the exact enumeration limit");
  const auto perms = detail::all_permutations(n);
  return detail::coefficient_raw(
      n, j, d.values(), perms.size(), [&](std::size_t p) -> const ListState& { return perms[p]; },
      [&](std::size_t p, std::span<const int> dd) { return epi_count(perms[p], dd); });
}

inline constexpr int kDefaultScanLimit = 5;

struct ScanOptions {
  int limit = kDefaultScanLimit;
  unsigned threads = 0;
};

struct ScanReport {
  int n = 0;
  int j = 0;
  BigInt min_coefficient;
  std::size_t degree_vectors_checked = 0;
  std::vector<std::pair<DegreeVector, BigInt>> nonzero;  // colexicographic in d
};

namespace detail {
inline ScanReport scan_with_table(const EpiTable& table, int j, unsigned threads) {
  const int n = table.n();
  const auto degrees = all_degree_vectors(n);
  auto values = parallel_map(degrees.size(), threads,
                             [&](std::size_t t) { return coefficient_from_table(table, j, degrees[t].values()); });
  ScanReport r;
  r.n = n;
  r.j = j;
  r.degree_vectors_checked = degrees.size();
  for (std::size_t t = 0; t < degrees.size(); ++t) {
    if (t == 0 || values[t] < r.min_coefficient) r.min_coefficient = values[t];
    if (values[t] != 0) r.nonzero.emplace_back(degrees[t], values[t]);
  }
  return r;
}
}  // namespace detail

/// Every coefficient for (n, j); min_coefficient >= 0 is the claim under test.
inline ScanReport scan_coefficients(int n, int j, const ScanOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("coefficient scans need n >= 2");
  detail::check_j(n, j);
  if (n > opts.limit) {
    throw LimitExceeded("n = " + std::to_string(n) + " exceeds the coefficient scan limit " + std::to_string(opts.limit));
  }
  const detail::EpiTable table(n, opts.threads);
  return detail::scan_with_table(table, j, opts.threads);
}

/// Scans every j = 2..n sharing one E^pi table.
inline std::vector<ScanReport> scan_all_coefficients(int n, const ScanOptions& opts = {}) {
  if (n < 2) throw std::invalid_argument("coefficient scans need n >= 2");
  if (n > opts.limit) {
    throw LimitExceeded("n = " + std::to_string(n) + " exceeds the coefficient scan limit " + std::to_string(opts.limit));
  }
  const detail::EpiTable table(n, opts.threads);
  std::vector<ScanReport> out;
  for (int j = 2; j <= n; ++j) out.push_back(detail::scan_with_table(table, j, opts.threads));
  return out;
}

/// Direct evaluation of sum_pi (p_j - sum_{i<j} (p_i - p_j) [pi(j) < pi(i)]) prod_l p_l^(n - pi(l)).
inline Rational numerator_value(const AccessDistribution& dist, int j, const ExactOptions& opts = {}) {
  const int n = dist.n();
  detail::check_j(n, j);
  detail::check_limit(dist, opts);
  Rational total = 0;
  for_each_permutation(n, [&](const ListState& pi) {
    Rational factor = dist.prob(j);
    for (int i = 1; i < j; ++i) {
      if (pi.position(j) < pi.position(i)) factor -= dist.prob(i) - dist.prob(j);
    }
    if (factor == 0) return;
    Rational weight = 1;
    for (int l = 1; l <= n; ++l) weight *= ipow(dist.prob(l), static_cast<unsigned>(n - pi.position(l)));
    total += factor * weight;
  });
  return total;
}

/// sum_d coefficient(n, j, d) x^d at the given gap vector.
inline Rational evaluate_coefficient_sum(const ScanReport& scan, const GapVector& g) {
  if (static_cast<int>(g.x.size()) != scan.n) throw std::invalid_argument("gap vector length differs from n");
  Rational total = 0;
  for (const auto& [d, c] : scan.nonzero) {
    Rational term{c};
    for (int l = 1; l <= scan.n; ++l) term *= ipow(g.x[l - 1], static_cast<unsigned>(d[l]));
    total += term;
  }
  return total;
}

}  // namespace lulab
