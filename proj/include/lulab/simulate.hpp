#pragma once

// Seeded Monte-Carlo runs of the Transposition, Move-to-Front, and gladiator
// chains.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by the
// C++ standard. Variates are derived from raw 64-bit outputs by the helpers
// below (never by <random> distributions, whose algorithms are
// implementation-defined), so a (distribution, config) pair reproduces the
// same summary bit for bit on every conforming platform.

#include "lulab/distribution.hpp"
#include "lulab/list_state.hpp"
#include "lulab/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace lulab {

inline constexpr const char* kRngAlgorithm = "mt19937_64";

enum class Rule { transposition, mtf, gladiator };
enum class Initial { identity, reversed, random };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::transposition: return "transposition";
    case Rule::mtf: return "mtf";
    case Rule::gladiator: return "gladiator";
  }
  return "?";
}

inline const char* to_string(Initial i) {
  switch (i) {
    case Initial::identity: return "identity";
    case Initial::reversed: return "reversed";
    case Initial::random: return "random";
  }
  return "?";
}

struct SimulationConfig {
  Rule rule = Rule::transposition;
  std::int64_t steps = 1'000'000;
  std::optional<std::int64_t> burn_in;  // default: steps / 10
  std::uint64_t seed = 1;
  Initial initial = Initial::identity;
  int batches = 100;  // batch-means groups for standard errors

  std::int64_t effective_burn_in() const { return burn_in.value_or(steps / 10); }
};

struct SimulationSummary {
  double avg_cost = 0;
  double std_error = 0;  // batch-means estimate
  std::int64_t samples = 0;
  /// position_freq[i-1][k-1]: fraction of recorded steps with item i at position k.
  std::vector<std::vector<double>> position_freq;
  std::vector<std::vector<double>> position_stderr;
  ListState final_state;
};

/// SplitMix64 finalizer. Replica r of a run seeded with s uses
/// splitmix64(s + (r + 1) * 0x9E3779B97F4A7C15).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return splitmix64(seed + (replica + 1) * 0x9E3779B97F4A7C15ULL);
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Vose alias table over 0..n-1.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
    const std::size_t n = weights.size();
    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::size_t i : large) prob_[i] = 1.0, alias_[i] = i;
    for (std::size_t i : small) prob_[i] = 1.0, alias_[i] = i;
  }

  std::size_t sample(std::mt19937_64& rng) const {
    const double u = uniform01(rng) * static_cast<double>(prob_.size());
    const auto column = static_cast<std::size_t>(u);
    return (u - static_cast<double>(column)) < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

inline ListState initial_state(int n, Initial kind, std::mt19937_64& rng) {
  switch (kind) {
    case Initial::identity: return ListState::identity(n);
    case Initial::reversed: return ListState::reversed(n);
    case Initial::random: {
      std::vector<int> order(n);
      for (int k = 0; k < n; ++k) order[k] = k + 1;
      for (int k = n - 1; k > 0; --k) {
        std::swap(order[k], order[uniform_below(rng, static_cast<std::uint64_t>(k) + 1)]);
      }
      return ListState::from_order(std::move(order));
    }
  }
  throw std::logic_error("unknown initial state kind");
}

/// Batch-means accumulator for one scalar series.
struct BatchMeans {
  double sum = 0, sum_sq = 0;
  int count = 0;
  void add(double batch_mean) {
    sum += batch_mean;
    sum_sq += batch_mean * batch_mean;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double std_error() const {
    if (count < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
    return std::sqrt(var / count);
  }
};

}  // namespace detail

inline void validate(const SimulationConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("steps must be at least 1");
  const auto burn = cfg.effective_burn_in();
  if (burn < 0 || burn >= cfg.steps) throw std::invalid_argument("burn-in must satisfy 0 <= burn-in < steps");
  if (cfg.batches < 1) throw std::invalid_argument("batches must be at least 1");
  if (cfg.batches > cfg.steps - burn) throw std::invalid_argument("more batches than recorded steps");
}

/// Runs one chain. For transposition and mtf each step draws an item with
/// probability p_i, records its access cost, then applies the rule. For the
/// gladiator chain each step picks an adjacent rank pair uniformly and lets
/// the lower item win with probability p_b / (p_a + p_b); the recorded cost
/// is the full expected access cost of the current arrangement.
inline SimulationSummary run_chain(const AccessDistribution& dist, const SimulationConfig& cfg) {
  validate(cfg);
  if (cfg.rule != Rule::gladiator && !dist.normalized()) {
    throw std::invalid_argument(std::string(to_string(cfg.rule)) + " simulation requires a normalized distribution");
  }
  const int n = dist.n();
  const auto p = dist.floats();
  std::mt19937_64 rng(cfg.seed);
  ListState state = detail::initial_state(n, cfg.initial, rng);
  const detail::AliasTable alias(p);

  const std::int64_t burn = cfg.effective_burn_in();
  const std::int64_t recorded = cfg.steps - burn;

  auto full_cost = [&] {
    double c = 0;
    for (int i = 1; i <= n; ++i) c += p[i - 1] * state.position(i);
    return c;
  };
  double gladiator_cost = full_cost();

  detail::BatchMeans cost_stats;
  std::vector<detail::BatchMeans> pos_stats(static_cast<std::size_t>(n) * n);
  std::vector<std::int64_t> batch_pos(static_cast<std::size_t>(n) * n, 0);
  double batch_cost = 0;
  std::int64_t batch_len = 0;
  int batch_index = 0;
  std::int64_t batch_end = recorded * (batch_index + 1) / cfg.batches;

  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    const bool record = t >= burn;
    double cost = 0;
    int requested = 0;
    if (cfg.rule == Rule::gladiator) {
      cost = gladiator_cost;
    } else {
      requested = static_cast<int>(alias.sample(rng)) + 1;
      cost = state.position(requested);
    }
    if (record) {
      batch_cost += cost;
      for (int k = 1; k <= n; ++k) ++batch_pos[static_cast<std::size_t>(state.item_at(k) - 1) * n + (k - 1)];
      ++batch_len;
      if (t - burn + 1 == batch_end) {
        cost_stats.add(batch_cost / static_cast<double>(batch_len));
        for (std::size_t c = 0; c < batch_pos.size(); ++c) {
          pos_stats[c].add(static_cast<double>(batch_pos[c]) / static_cast<double>(batch_len));
          batch_pos[c] = 0;
        }
        batch_cost = 0;
        batch_len = 0;
        ++batch_index;
        batch_end = recorded * (batch_index + 1) / cfg.batches;
      }
    }
    switch (cfg.rule) {
      case Rule::transposition:
        if (const int k = state.position(requested); k > 1) state.swap_adjacent(k - 1);
        break;
      case Rule::mtf:
        state.move_to_front(requested);
        break;
      case Rule::gladiator: {
        if (n < 2) break;
        const int k = static_cast<int>(detail::uniform_below(rng, static_cast<std::uint64_t>(n - 1))) + 1;
        const int a = state.item_at(k);
        const int b = state.item_at(k + 1);
        if (detail::uniform01(rng) * (p[a - 1] + p[b - 1]) < p[b - 1]) {
          state.swap_adjacent(k);
          gladiator_cost = full_cost();
        }
        break;
      }
    }
  }

  SimulationSummary out;
  out.samples = recorded;
  // Equal-size batches up to one step, so the mean of batch means is the
  // grand mean within rounding.
  out.avg_cost = cost_stats.mean();
  out.std_error = cost_stats.std_error();
  out.position_freq.assign(n, std::vector<double>(n));
  out.position_stderr.assign(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      out.position_freq[i][k] = pos_stats[static_cast<std::size_t>(i) * n + k].mean();
      out.position_stderr[i][k] = pos_stats[static_cast<std::size_t>(i) * n + k].std_error();
    }
  }
  out.final_state = std::move(state);
  return out;
}

/// Independent replicas with seeds from replica_seed(cfg.seed, r).
inline std::vector<SimulationSummary> run_replicas(const AccessDistribution& dist, const SimulationConfig& cfg,
                                                   int replicas, unsigned threads = 0) {
  if (replicas < 1) throw std::invalid_argument("replicas must be at least 1");
  return parallel_map(static_cast<std::size_t>(replicas), threads, [&](std::size_t r) {
    SimulationConfig c = cfg;
    c.seed = replica_seed(cfg.seed, r);
    return run_chain(dist, c);
  });
}

/// Stationary expected cost of Move-to-Front: 1 + 2 sum_{i<j} p_i p_j / (p_i + p_j).
inline Rational mtf_closed_form(const AccessDistribution& dist) {
  if (!dist.normalized()) throw std::invalid_argument("Move-to-Front closed form requires a normalized distribution");
  Rational sum = 0;
  for (int i = 1; i <= dist.n(); ++i) {
    for (int j = i + 1; j <= dist.n(); ++j) {
      sum += dist.prob(i) * dist.prob(j) / (dist.prob(i) + dist.prob(j));
    }
  }
  return 1 + 2 * sum;
}

}  // namespace lulab
