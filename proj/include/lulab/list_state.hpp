#pragma once

#include "lulab/distribution.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lulab {

/// A list arrangement. Items and positions are both 1-based: `position(i)` is
/// where item i sits, `item_at(k)` is the item at position k.
class ListState {
 public:
  ListState() = default;

  static ListState identity(int n) {
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 1);
    return from_positions(std::move(pos));
  }

  static ListState reversed(int n) {
    std::vector<int> order(n);
    std::iota(order.rbegin(), order.rend(), 1);
    return from_order(std::move(order));
  }

  /// `pos[i-1]` is the position of item i.
  static ListState from_positions(std::vector<int> pos) {
    ListState s;
    s.order_ = invert(pos, "position vector");
    s.pos_ = std::move(pos);
    return s;
  }

  /// `order[k-1]` is the item at position k.
  static ListState from_order(std::vector<int> order) {
    ListState s;
    s.pos_ = invert(order, "order vector");
    s.order_ = std::move(order);
    return s;
  }

  int n() const { return static_cast<int>(pos_.size()); }
  int position(int item) const { return pos_[item - 1]; }
  int item_at(int position) const { return order_[position - 1]; }
  std::span<const int> positions() const { return pos_; }
  std::span<const int> order() const { return order_; }

  /// Exchanges the items at positions k and k+1.
  void swap_adjacent(int k) {
    const int a = order_[k - 1];
    const int b = order_[k];
    std::swap(order_[k - 1], order_[k]);
    pos_[a - 1] = k + 1;
    pos_[b - 1] = k;
  }

  /// Moves `item` to the front, shifting the items ahead of it back by one.
  void move_to_front(int item) {
    const int k = pos_[item - 1];
    for (int p = k; p > 1; --p) {
      order_[p - 1] = order_[p - 2];
      pos_[order_[p - 1] - 1] = p;
    }
    order_[0] = item;
    pos_[item - 1] = 1;
  }

  /// One-line notation of the position vector, e.g. "[2,1,3]".
  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(pos_[i]);
    }
    return s + "]";
  }

  friend bool operator==(const ListState&, const ListState&) = default;

 private:
  static std::vector<int> invert(std::span<const int> perm, const char* what) {
    const int n = static_cast<int>(perm.size());
    std::vector<int> inv(n, 0);
    for (int i = 0; i < n; ++i) {
      const int v = perm[i];
      if (v < 1 || v > n || inv[v - 1] != 0) {
        throw std::invalid_argument(std::string(what) + " is not a permutation of 1.." + std::to_string(n));
      }
      inv[v - 1] = i + 1;
    }
    return inv;
  }

  std::vector<int> pos_;
  std::vector<int> order_;
};

namespace detail {
inline void check_item(const ListState& s, int item) {
  if (item < 1 || item > s.n()) {
    throw std::out_of_range("item " + std::to_string(item) + " out of range 1.." + std::to_string(s.n()));
  }
}
inline void check_same_n(const ListState& s, const AccessDistribution& d) {
  if (s.n() != d.n()) throw std::invalid_argument("list state and distribution disagree on n");
}
}  // namespace detail

/// Transposition rule: a requested item swaps with its predecessor.
inline ListState transposition_step(ListState state, int item) {
  detail::check_item(state, item);
  if (const int k = state.position(item); k > 1) state.swap_adjacent(k - 1);
  return state;
}

inline ListState mtf_step(ListState state, int item) {
  detail::check_item(state, item);
  state.move_to_front(item);
  return state;
}

/// Expected access cost of a fixed arrangement: sum of p_i * position(i).
inline Rational access_cost(const ListState& state, const AccessDistribution& dist) {
  detail::check_same_n(state, dist);
  Rational sum = 0;
  for (int i = 1; i <= dist.n(); ++i) sum += dist.prob(i) * state.position(i);
  return sum;
}

struct InversionSummary {
  std::vector<std::pair<int, int>> pairs;  // (i, j), i < j, j ahead of i
  Rational weighted_excess;                // sum of p_i - p_j over pairs
};

inline InversionSummary inversions(const ListState& state, const AccessDistribution& dist) {
  detail::check_same_n(state, dist);
  InversionSummary out;
  out.weighted_excess = 0;
  for (int i = 1; i <= state.n(); ++i) {
    for (int j = i + 1; j <= state.n(); ++j) {
      if (state.position(j) < state.position(i)) {
        out.pairs.emplace_back(i, j);
        out.weighted_excess += dist.prob(i) - dist.prob(j);
      }
    }
  }
  return out;
}

/// Calls `fn(const ListState&)` for every arrangement of n items, in
/// lexicographic order of the position vector.
template <class Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 1);
  do {
    fn(ListState::from_positions(pos));
  } while (std::next_permutation(pos.begin(), pos.end()));
}

/// Same, restricted to position vectors whose first entry is `first`.
template <class Fn>
void for_each_permutation_with_first(int n, int first, Fn&& fn) {
  std::vector<int> pos;
  pos.reserve(n);
  pos.push_back(first);
  for (int v = 1; v <= n; ++v) {
    if (v != first) pos.push_back(v);
  }
  do {
    fn(ListState::from_positions(pos));
  } while (std::next_permutation(pos.begin() + 1, pos.end()));
}

}  // namespace lulab
