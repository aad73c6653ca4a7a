#pragma once

#include "lulab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lulab {

/// Request probabilities (or gladiator strengths) sorted nonincreasing.
///
/// Items are addressed by their sorted rank 1..n; `label(i)` maps a rank back
/// to the caller's 1-based index. The exact form is authoritative; `floats()`
/// is a mirror for simulation.
class AccessDistribution {
 public:
  int n() const { return static_cast<int>(probs_.size()); }
  const Rational& prob(int item) const { return probs_.at(item - 1); }
  std::span<const Rational> probs() const { return probs_; }
  std::span<const double> floats() const { return floats_; }
  /// Caller index (1-based) of the item with sorted rank `item`.
  int label(int item) const { return labels_.at(item - 1); }
  std::span<const int> label_map() const { return labels_; }
  bool normalized() const { return normalized_; }
  Rational total() const { return std::accumulate(probs_.begin(), probs_.end(), Rational(0)); }

  /// Same items with every weight multiplied by `factor` > 0.
  AccessDistribution scaled(const Rational& factor) const {
    if (factor <= 0) throw std::invalid_argument("scale factor must be positive");
    AccessDistribution out = *this;
    for (auto& p : out.probs_) p *= factor;
    out.refresh();
    return out;
  }

  friend AccessDistribution make_distribution(std::vector<Rational> weights, bool normalize);

 private:
  void refresh() {
    floats_.clear();
    for (const auto& p : probs_) floats_.push_back(to_double(p));
    normalized_ = total() == 1;
  }

  std::vector<Rational> probs_;
  std::vector<double> floats_;
  std::vector<int> labels_;
  bool normalized_ = false;
};

/// Validates, optionally normalizes, and stably sorts `weights` nonincreasing.
inline AccessDistribution make_distribution(std::vector<Rational> weights, bool normalize) {
  if (weights.empty()) throw std::invalid_argument("empty distribution");
  if (normalize) {
    const Rational sum = std::accumulate(weights.begin(), weights.end(), Rational(0));
    if (sum == 0) throw std::invalid_argument("cannot normalize a zero-sum weight vector");
    for (auto& w : weights) w /= sum;
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) {
      throw std::invalid_argument("nonpositive entry at index " + std::to_string(i + 1) + ": " +
                                  to_string(weights[i]));
    }
  }
  std::vector<int> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weights[a] > weights[b]; });

  AccessDistribution d;
  for (int idx : order) {
    d.probs_.push_back(weights[idx]);
    d.labels_.push_back(idx + 1);
  }
  d.refresh();
  return d;
}

/// Doubles are converted exactly from their binary representation.
inline AccessDistribution make_distribution(std::span<const double> weights, bool normalize) {
  std::vector<Rational> exact;
  exact.reserve(weights.size());
  for (double w : weights) exact.push_back(rational_from_double(w));
  return make_distribution(std::move(exact), normalize);
}

inline AccessDistribution make_distribution(std::initializer_list<double> weights, bool normalize) {
  return make_distribution(std::span<const double>(weights.begin(), weights.size()), normalize);
}

enum class Family { uniform, zipf, geometric };

struct FamilySpec {
  Family kind = Family::uniform;
  double alpha = 1.0;        // zipf exponent
  Rational ratio{1, 2};      // geometric ratio
};

/// Normalized member of a named family. Zipf with an integral exponent is
/// exact; other exponents go through the binary value of i^-alpha.
inline AccessDistribution builtin_distribution(const FamilySpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  std::vector<Rational> w;
  w.reserve(n);
  switch (spec.kind) {
    case Family::uniform:
      w.assign(n, Rational(1));
      break;
    case Family::zipf: {
      if (!(spec.alpha > 0) || !std::isfinite(spec.alpha)) throw std::invalid_argument("zipf exponent must be > 0");
      const bool integral = spec.alpha == std::floor(spec.alpha) && spec.alpha <= 64;
      for (int i = 1; i <= n; ++i) {
        if (integral) {
          w.emplace_back(BigInt(1), boost::multiprecision::pow(BigInt(i), static_cast<unsigned>(spec.alpha)));
        } else {
          w.push_back(rational_from_double(std::pow(static_cast<double>(i), -spec.alpha)));
        }
      }
      break;
    }
    case Family::geometric: {
      if (spec.ratio <= 0 || spec.ratio >= 1) throw std::invalid_argument("geometric ratio must lie in (0, 1)");
      Rational term = 1;
      for (int i = 1; i <= n; ++i) {
        w.push_back(term);
        term *= spec.ratio;
      }
      break;
    }
  }
  return make_distribution(std::move(w), true);
}

/// Expected cost of the static list in sorted order: sum of i * p_i.
inline Rational opt_cost(const AccessDistribution& dist) {
  Rational sum = 0;
  for (int i = 1; i <= dist.n(); ++i) sum += dist.prob(i) * i;
  return sum;
}

// ---------------------------------------------------------------------------
// Distribution literals: "7/10,3/10", "0.5,0.25,0.25", "uniform", "zipf:1",
// "geom:1/2". Named families need an item count.

inline bool is_family_literal(std::string_view literal) {
  const auto s = detail::trim(literal);
  return s == "uniform" || s.starts_with("zipf:") || s.starts_with("geom:");
}

inline std::vector<Rational> parse_weight_list(std::string_view literal) {
  std::vector<Rational> out;
  std::string_view rest = literal;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_rational(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

inline FamilySpec parse_family(std::string_view literal) {
  const auto s = detail::trim(literal);
  FamilySpec spec;
  if (s == "uniform") {
    spec.kind = Family::uniform;
  } else if (s.starts_with("zipf:")) {
    spec.kind = Family::zipf;
    spec.alpha = to_double(parse_rational(s.substr(5)));
  } else if (s.starts_with("geom:")) {
    spec.kind = Family::geometric;
    spec.ratio = parse_rational(s.substr(5));
  } else {
    throw std::invalid_argument("unknown distribution family '" + std::string(s) + "'");
  }
  return spec;
}

/// Parses any literal. Lists are normalized when `normalize` is set.
inline AccessDistribution parse_distribution(std::string_view literal, std::optional<int> n, bool normalize = true) {
  if (is_family_literal(literal)) {
    if (!n) throw std::invalid_argument("distribution '" + std::string(literal) + "' needs an item count (--n)");
    return builtin_distribution(parse_family(literal), *n);
  }
  auto weights = parse_weight_list(literal);
  if (n && *n != static_cast<int>(weights.size())) {
    throw std::invalid_argument("--n does not match the number of listed weights");
  }
  return make_distribution(std::move(weights), normalize);
}

}  // namespace lulab
