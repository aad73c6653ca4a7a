#pragma once

// Word-tuple model of the coefficient formula and the injection f: A -> B.
//
// For fixed (n, d, j), B collects tuples (w_1..w_n) with w_l over {l..n},
// lengths a permutation of {0..n-1}, and letter counts d - e_k for a single
// deficit letter k >= j. A collects pairs (tuple, i) with i < j,
// |w_i| < |w_j|, and deficit k in [i, j-1]. The forward map moves the deficit
// into {j..n}; the inverse reconstructs the input from the output alone.

#include "lulab/gappoly.hpp"
#include "lulab/list_state.hpp"
#include "lulab/parallel.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lulab {

using Word = std::vector<int>;  // letters are 1-based

struct WordTuple {
  std::vector<Word> words;

  int n() const { return static_cast<int>(words.size()); }
  const Word& operator[](int l) const { return words[l - 1]; }
  Word& operator[](int l) { return words[l - 1]; }

  friend auto operator<=>(const WordTuple&, const WordTuple&) = default;
  friend bool operator==(const WordTuple&, const WordTuple&) = default;
};

struct SetBElement {
  WordTuple tuple;
  int deficit = 0;

  friend bool operator==(const SetBElement&, const SetBElement&) = default;
};

struct SetAElement {
  WordTuple tuple;
  int i = 0;
  int deficit = 0;  // 0: derive from (tuple, d)

  friend bool operator==(const SetAElement&, const SetAElement&) = default;
};

enum class StepKind { receiver, exchange, tail };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::receiver: return "receiver";
    case StepKind::exchange: return "exchange";
    case StepKind::tail: return "tail";
  }
  return "?";
}

struct InjectionTrace {
  int k = 0;                        // input deficit letter
  int L = 0, U = 0, m = 0;
  std::vector<int> b;               // b[t-1] = b_t, letters cut from w_j
  std::vector<int> indices;         // indices[t-1] = i_t
  std::vector<StepKind> step_kinds; // step_kinds[t-1] for i_t
  /// buffer_history[0] is the initial buffer; entry s is the buffer after the
  /// s-th loop iteration, i.e. after processing t = m - s + 1.
  std::vector<Word> buffer_history;
};

struct NotInImage {
  std::string reason;
};

inline std::string word_to_string(const Word& w, int n) {
  if (w.empty()) return "ε";
  std::string s;
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (n >= 10 && p) s += '.';
    s += std::to_string(w[p]);
  }
  return s;
}

inline std::string tuple_to_string(const WordTuple& t) {
  std::string s = "(";
  for (int l = 1; l <= t.n(); ++l) s += (l > 1 ? ", " : "") + word_to_string(t[l], t.n());
  return s + ")";
}

/// Parses one word: "ε", "e" or "" for the empty word; digits for n < 10, or
/// dot-separated letters ("10.12").
inline Word parse_word(std::string_view text) {
  const auto s = detail::trim(text);
  if (s.empty() || s == "e" || s == "ε") return {};
  Word w;
  if (s.find('.') != std::string_view::npos) {
    std::string_view rest = s;
    while (true) {
      const auto dot = rest.find('.');
      w.push_back(static_cast<int>(detail::parse_integer(rest.substr(0, dot), text)));
      if (dot == std::string_view::npos) break;
      rest.remove_prefix(dot + 1);
    }
    return w;
  }
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("malformed word '" + std::string(text) + "'");
    w.push_back(c - '0');
  }
  return w;
}

/// Comma-separated words, e.g. "2,,353,4545,55".
inline WordTuple parse_word_tuple(std::string_view text) {
  WordTuple t;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    t.words.push_back(parse_word(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return t;
}

namespace detail {

inline void check_parameters(int n, const DegreeVector& d, int j) {
  if (n < 2) throw std::invalid_argument("word-tuple sets need n >= 2");
  if (d.n() != n) throw std::invalid_argument("degree vector length differs from n");
  if (j < 2 || j > n) {
    throw std::out_of_range("j out of range: need 2 <= j <= n = " + std::to_string(n) + ", got " + std::to_string(j));
  }
}

/// Alphabet and length conditions shared by A and B. Empty string when valid.
inline std::string shape_violation(const WordTuple& t, int n) {
  if (t.n() != n) return "tuple has " + std::to_string(t.n()) + " words, expected " + std::to_string(n);
  std::vector<bool> seen(n, false);
  for (int l = 1; l <= n; ++l) {
    for (int letter : t[l]) {
      if (letter < l || letter > n) {
        return "word " + std::to_string(l) + " uses letter " + std::to_string(letter) + " outside {" +
               std::to_string(l) + ".." + std::to_string(n) + "}";
      }
    }
    const auto len = t[l].size();
    if (len >= static_cast<std::size_t>(n) || seen[len]) return "word lengths are not a permutation of {0..n-1}";
    seen[len] = true;
  }
  return {};
}

}  // namespace detail

/// The unique letter whose count is one short of d, if the counts differ from
/// d in exactly that way.
inline std::optional<int> deficit_letter(const WordTuple& t, const DegreeVector& d) {
  const int n = d.n();
  std::vector<int> counts(n + 1, 0);
  for (const auto& w : t.words) {
    for (int letter : w) {
      if (letter < 1 || letter > n) return std::nullopt;
      ++counts[letter];
    }
  }
  std::optional<int> deficit;
  for (int l = 1; l <= n; ++l) {
    const int gap = d[l] - counts[l];
    if (gap == 0) continue;
    if (gap != 1 || deficit) return std::nullopt;
    deficit = l;
  }
  return deficit;
}

/// Empty string when `t` lies in B for (d, j); otherwise the violated condition.
inline std::string b_violation(const WordTuple& t, const DegreeVector& d, int j) {
  if (auto why = detail::shape_violation(t, d.n()); !why.empty()) return why;
  const auto k = deficit_letter(t, d);
  if (!k) return "letter counts do not fall short of d by exactly one letter";
  if (*k < j) return "deficit letter " + std::to_string(*k) + " is below j";
  return {};
}

/// Empty string when (t, i) lies in A for (d, j); otherwise the violated condition.
inline std::string a_violation(const WordTuple& t, int i, const DegreeVector& d, int j) {
  if (auto why = detail::shape_violation(t, d.n()); !why.empty()) return why;
  if (i < 1 || i >= j) return "index i = " + std::to_string(i) + " is not in 1..j-1";
  if (t[i].size() >= t[j].size()) return "|w_i| < |w_j| fails";
  const auto k = deficit_letter(t, d);
  if (!k) return "letter counts do not fall short of d by exactly one letter";
  if (*k < i || *k >= j) return "deficit letter " + std::to_string(*k) + " is not in [i, j-1]";
  return {};
}

namespace detail {

/// All tuples with the given word lengths whose letter counts equal `counts`
/// exactly (w_l over {l..n}), in lexicographic order of the concatenation.
template <class Emit>
void for_each_filling(int n, const std::vector<int>& lengths, std::vector<int> counts, Emit&& emit) {
  WordTuple t;
  t.words.assign(n, {});
  auto rec = [&](auto&& self, int word, int slot) -> void {
    if (word > n) {
      emit(t);
      return;
    }
    if (slot == 0) {
      // Letters below `word` can no longer be placed.
      for (int l = 1; l < word; ++l) {
        if (counts[l] != 0) return;
      }
    }
    if (slot == lengths[word - 1]) {
      self(self, word + 1, 0);
      return;
    }
    for (int letter = word; letter <= n; ++letter) {
      if (counts[letter] == 0) continue;
      --counts[letter];
      t[word].push_back(letter);
      self(self, word, slot + 1);
      t[word].pop_back();
      ++counts[letter];
    }
  };
  rec(rec, 1, 0);
}

inline std::vector<int> shifted_counts(const DegreeVector& d, int k) {
  std::vector<int> c(d.n() + 1, 0);
  for (int l = 1; l <= d.n(); ++l) c[l] = d[l] - (l == k ? 1 : 0);
  return c;
}

inline void check_enumeration_limit(int n, int limit) {
  if (n > limit) {
    throw LimitExceeded("n = " + std::to_string(n) + " exceeds the word-tuple enumeration limit " +
                        std::to_string(limit));
  }
}

}  // namespace detail

inline constexpr int kDefaultEnumerationLimit = 5;

/// B in canonical order: length assignment (lexicographic), deficit k, then words.
inline std::vector<SetBElement> enumerate_set_B(int n, const DegreeVector& d, int j,
                                                int limit = kDefaultEnumerationLimit) {
  detail::check_parameters(n, d, j);
  detail::check_enumeration_limit(n, limit);
  std::vector<SetBElement> out;
  std::vector<int> lengths(n);
  std::iota(lengths.begin(), lengths.end(), 0);
  do {
    for (int k = j; k <= n; ++k) {
      if (d[k] < 1) continue;
      detail::for_each_filling(n, lengths, detail::shifted_counts(d, k),
                               [&](const WordTuple& t) { out.push_back({t, k}); });
    }
  } while (std::next_permutation(lengths.begin(), lengths.end()));
  return out;
}

/// A in canonical order: length assignment, then i, then deficit k, then words.
inline std::vector<SetAElement> enumerate_set_A(int n, const DegreeVector& d, int j,
                                                int limit = kDefaultEnumerationLimit) {
  detail::check_parameters(n, d, j);
  detail::check_enumeration_limit(n, limit);
  std::vector<SetAElement> out;
  std::vector<int> lengths(n);
  std::iota(lengths.begin(), lengths.end(), 0);
  do {
    for (int i = 1; i < j; ++i) {
      if (lengths[i - 1] >= lengths[j - 1]) continue;
      for (int k = i; k < j; ++k) {
        if (d[k] < 1) continue;
        detail::for_each_filling(n, lengths, detail::shifted_counts(d, k),
                                 [&](const WordTuple& t) { out.push_back({t, i, k}); });
      }
    }
  } while (std::next_permutation(lengths.begin(), lengths.end()));
  return out;
}

struct ForwardResult {
  SetBElement output;
  InjectionTrace trace;
};

/// The sign-eliminating injection. Throws std::invalid_argument when the input
/// is not an element of A for (d, j).
inline ForwardResult inject_forward(const SetAElement& elem, const DegreeVector& d, int j) {
  const int n = d.n();
  detail::check_parameters(n, d, j);
  if (auto why = a_violation(elem.tuple, elem.i, d, j); !why.empty()) {
    throw std::invalid_argument("input is not in A: " + why);
  }
  const int k = *deficit_letter(elem.tuple, d);
  if (elem.deficit != 0 && elem.deficit != k) {
    throw std::invalid_argument("stored deficit " + std::to_string(elem.deficit) + " disagrees with derived deficit " +
                                std::to_string(k));
  }
  const WordTuple& w = elem.tuple;
  InjectionTrace tr;
  tr.k = k;
  tr.L = static_cast<int>(w[elem.i].size());
  tr.U = static_cast<int>(w[j].size());
  tr.m = tr.U - tr.L;

  WordTuple out = w;
  out[j].assign(w[j].begin(), w[j].begin() + tr.L);
  tr.b.assign(w[j].begin() + tr.L, w[j].end());

  std::vector<int> by_length(n, 0);
  for (int l = 1; l <= n; ++l) by_length[w[l].size()] = l;
  for (int t = 1; t <= tr.m; ++t) tr.indices.push_back(by_length[tr.L + t - 1]);
  tr.step_kinds.resize(tr.m);

  Word v{k};
  tr.buffer_history.push_back(v);
  for (int t = tr.m; t >= 1; --t) {
    const int it = tr.indices[t - 1];
    const int bt = tr.b[t - 1];
    if (it > j) {
      tr.step_kinds[t - 1] = StepKind::tail;
      v.insert(v.begin(), bt);
    } else if (it > k) {
      tr.step_kinds[t - 1] = StepKind::exchange;
      const int at = w[it].back();
      out[it].back() = bt;
      v.insert(v.begin(), at);
    } else {
      tr.step_kinds[t - 1] = StepKind::receiver;
      out[it].insert(out[it].end(), v.begin(), v.end());
      v.assign(1, bt);
    }
    tr.buffer_history.push_back(v);
  }
  return {SetBElement{std::move(out), tr.b.front()}, std::move(tr)};
}

/// Reconstructs the preimage of `out`, or reports that `out` is outside f(A).
/// Throws std::invalid_argument when `out` is not even in B.
inline std::variant<SetAElement, NotInImage> inject_inverse(const SetBElement& out, const DegreeVector& d, int j) {
  const int n = d.n();
  detail::check_parameters(n, d, j);
  if (auto why = b_violation(out.tuple, d, j); !why.empty()) throw std::invalid_argument("output is not in B: " + why);
  const WordTuple& ow = out.tuple;

  // Step 1: b_1, L, U, m, k.
  const int b1 = *deficit_letter(ow, d);
  const int L = static_cast<int>(ow[j].size());
  std::vector<int> by_length(n, 0);
  for (int l = 1; l <= n; ++l) by_length[ow[l].size()] = l;
  int U = -1;
  int k = 0;
  for (int len = L + 1; len < n; ++len) {
    const Word& word = ow[by_length[len]];
    if (word.back() < j) {
      U = len;
      k = word.back();
      break;
    }
  }
  if (U < 0) return NotInImage{"no word longer than |w_j| ends in a letter below j"};
  const int m = U - L;

  // Step 2: i and i_1..i_m.
  std::vector<int> interval;  // I without j
  std::vector<int> receivers;
  for (int l = 1; l <= n; ++l) {
    const int len = static_cast<int>(ow[l].size());
    if (l == j || len < L || len > U) continue;
    interval.push_back(l);
    if (l <= k) receivers.push_back(l);
  }
  if (receivers.empty()) return NotInImage{"no receiver index in the length window"};
  std::sort(receivers.begin(), receivers.end(), [&](int a, int b) { return ow[a].size() < ow[b].size(); });
  std::vector<int> original_length(n + 1, -1);
  for (int l : interval) original_length[l] = static_cast<int>(ow[l].size());
  original_length[receivers.front()] = L;
  for (std::size_t q = 1; q < receivers.size(); ++q) {
    original_length[receivers[q]] = static_cast<int>(ow[receivers[q - 1]].size());
  }
  std::vector<int> indices(m, 0);
  for (int l : interval) {
    const int t = original_length[l] - L + 1;
    if (t < 1 || t > m || indices[t - 1] != 0) return NotInImage{"original lengths do not tile [L, U-1]"};
    indices[t - 1] = l;
  }
  if (std::find(indices.begin(), indices.end(), 0) != indices.end()) {
    return NotInImage{"original lengths do not tile [L, U-1]"};
  }

  // Step 3: undo the loop from t = 1 upward.
  WordTuple in = ow;
  std::vector<int> b(m, 0);
  Word v{b1};
  for (int t = 1; t <= m; ++t) {
    const int it = indices[t - 1];
    Word& word = in[it];
    if (it <= k) {
      if (v.size() != 1) return NotInImage{"receiver step finds a buffer of length " + std::to_string(v.size())};
      b[t - 1] = v.front();
      const std::size_t keep = static_cast<std::size_t>(L + t - 1);
      if (word.size() <= keep) return NotInImage{"receiver word is too short to have absorbed a buffer"};
      v.assign(word.begin() + static_cast<std::ptrdiff_t>(keep), word.end());
      word.resize(keep);
    } else if (it > j) {
      if (v.empty()) return NotInImage{"tail step finds an empty buffer"};
      b[t - 1] = v.front();
      v.erase(v.begin());
    } else {
      if (v.empty() || word.empty()) return NotInImage{"exchange step lacks a letter to swap back"};
      b[t - 1] = word.back();
      word.back() = v.front();
      v.erase(v.begin());
    }
  }
  if (v != Word{k}) return NotInImage{"buffer does not unwind to the deficit letter"};

  // Step 4: w_j and untouched words.
  in[j].insert(in[j].end(), b.begin(), b.end());

  // Step 5: the candidate must lie in A and map back onto `out`.
  const int i = receivers.front();
  if (auto why = a_violation(in, i, d, j); !why.empty()) return NotInImage{"reconstruction is not in A: " + why};
  SetAElement candidate{std::move(in), i, k};
  if (inject_forward(candidate, d, j).output.tuple != ow) {
    return NotInImage{"reconstruction does not map back onto the output"};
  }
  return candidate;
}

struct InjectionReport {
  int n = 0;
  int j = 0;
  DegreeVector d;
  std::size_t size_A = 0;
  std::size_t size_B = 0;
  std::size_t not_in_image = 0;
  BigInt coefficient;
  bool forward_ok = true;    // every f(a) lies in B with deficit b_1
  bool roundtrip_ok = true;  // inverse(f(a)) = a
  bool distinct_ok = true;   // f is injective on A
  bool image_ok = true;      // inverse succeeds on exactly |A| elements of B
  bool cardinality_ok = true;  // |B| - |A| = coefficient
  std::vector<std::string> witnesses;

  bool passed() const { return forward_ok && roundtrip_ok && distinct_ok && image_ok && cardinality_ok; }
};

struct InjectionOptions {
  int limit = kDefaultEnumerationLimit;
  unsigned threads = 0;
  std::size_t max_witnesses = 5;
};

namespace detail {

inline InjectionReport verify_one(int n, const DegreeVector& d, int j, const BigInt& coeff,
                                  const InjectionOptions& opts) {
  InjectionReport r;
  r.n = n;
  r.j = j;
  r.d = d;
  r.coefficient = coeff;
  const auto A = enumerate_set_A(n, d, j, opts.limit);
  const auto B = enumerate_set_B(n, d, j, opts.limit);
  r.size_A = A.size();
  r.size_B = B.size();
  auto witness = [&](std::string s) {
    if (r.witnesses.size() < opts.max_witnesses) r.witnesses.push_back(std::move(s));
  };

  std::set<WordTuple> images;
  for (const auto& a : A) {
    const auto [out, trace] = inject_forward(a, d, j);
    if (auto why = b_violation(out.tuple, d, j); !why.empty() || deficit_letter(out.tuple, d) != trace.b.front()) {
      r.forward_ok = false;
      witness("forward output " + tuple_to_string(out.tuple) + " of " + tuple_to_string(a.tuple) + ", i=" +
              std::to_string(a.i) + " is not in B" + (why.empty() ? "" : ": " + why));
      continue;
    }
    if (!images.insert(out.tuple).second) {
      r.distinct_ok = false;
      witness("collision at " + tuple_to_string(out.tuple));
    }
    const auto back = inject_inverse(out, d, j);
    const auto* pre = std::get_if<SetAElement>(&back);
    if (!pre || pre->tuple != a.tuple || pre->i != a.i) {
      r.roundtrip_ok = false;
      witness("round trip fails for " + tuple_to_string(a.tuple) + ", i=" + std::to_string(a.i) +
              (pre ? "" : ": " + std::get<NotInImage>(back).reason));
    }
  }
  std::size_t recovered = 0;
  for (const auto& b : B) {
    if (std::holds_alternative<SetAElement>(inject_inverse(b, d, j))) {
      ++recovered;
    } else {
      ++r.not_in_image;
    }
  }
  if (recovered != A.size() || recovered + r.not_in_image != B.size()) {
    r.image_ok = false;
    witness("inverse succeeds on " + std::to_string(recovered) + " elements of B, expected |A| = " +
            std::to_string(A.size()));
  }
  if (BigInt(B.size()) - BigInt(A.size()) != coeff) {
    r.cardinality_ok = false;
    witness("|B| - |A| = " + std::to_string(B.size()) + " - " + std::to_string(A.size()) + " but coefficient is " +
            coeff.str());
  }
  return r;
}

}  // namespace detail

/// Checks well-definedness, round trip, injectivity, image characterization
/// and |B| - |A| = coefficient(n, j, d) for one (d, j).
inline InjectionReport verify_injection(int n, const DegreeVector& d, int j, const InjectionOptions& opts = {}) {
  detail::check_parameters(n, d, j);
  detail::check_enumeration_limit(n, opts.limit);
  return detail::verify_one(n, d, j, coefficient(n, j, d, ExactOptions{opts.limit, opts.threads}), opts);
}

inline constexpr int kDefaultExhaustiveLimit = 4;

/// verify_injection over every degree vector (colexicographic) for one j.
inline std::vector<InjectionReport> verify_injection_all(int n, int j, const InjectionOptions& opts = {},
                                                         int exhaustive_limit = kDefaultExhaustiveLimit) {
  if (n > exhaustive_limit) {
    throw LimitExceeded("exhaustive injection verification is limited to n <= " + std::to_string(exhaustive_limit));
  }
  if (n < 2 || j < 2 || j > n) {
    throw std::out_of_range("j out of range: need 2 <= j <= n = " + std::to_string(n) + ", got " + std::to_string(j));
  }
  const detail::EpiTable table(n, opts.threads);
  const auto degrees = all_degree_vectors(n);
  return parallel_map(degrees.size(), opts.threads, [&](std::size_t t) {
    return detail::verify_one(n, degrees[t], j, detail::coefficient_from_table(table, j, degrees[t].values()), opts);
  });
}

}  // namespace lulab
