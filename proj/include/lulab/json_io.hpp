#pragma once

// JSON forms of the reports. Rationals are "num/den" strings with a decimal
// mirror under the same key plus "_float". Items are reported by the caller's
// labels; `labels[r-1]` is the label of sorted rank r.

#include "lulab/exact.hpp"
#include "lulab/gappoly.hpp"
#include "lulab/injection.hpp"
#include "lulab/simulate.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace lulab {

using Json = nlohmann::ordered_json;

inline void put_rational(Json& obj, const std::string& key, const Rational& q) {
  obj[key] = to_string(q);
  obj[key + "_float"] = to_double(q);
}

inline Json rational_array(std::span<const Rational> values) {
  Json a = Json::array();
  for (const auto& q : values) a.push_back(to_string(q));
  return a;
}

inline Json float_array(std::span<const Rational> values) {
  Json a = Json::array();
  for (const auto& q : values) a.push_back(to_double(q));
  return a;
}

/// Position vector indexed by caller labels, in one-line notation.
inline std::string labelled_key(const ListState& s, std::span<const int> labels) {
  std::vector<int> pos(s.n());
  for (int r = 1; r <= s.n(); ++r) pos[labels[r - 1] - 1] = s.position(r);
  return ListState::from_positions(std::move(pos)).to_string();
}

inline Json to_json(const SimulationSummary& s, const SimulationConfig& cfg, std::span<const int> labels) {
  const int n = static_cast<int>(labels.size());
  Json j;
  j["rng"] = kRngAlgorithm;
  j["rule"] = to_string(cfg.rule);
  j["seed"] = cfg.seed;
  j["steps"] = cfg.steps;
  j["burn_in"] = cfg.effective_burn_in();
  j["batches"] = cfg.batches;
  j["initial"] = to_string(cfg.initial);
  j["samples"] = s.samples;
  j["avg_cost"] = s.avg_cost;
  j["stderr"] = s.std_error;
  // Rows by caller label, columns by position.
  std::vector<std::vector<double>> freq(n), err(n);
  for (int r = 1; r <= n; ++r) {
    freq[labels[r - 1] - 1] = s.position_freq[r - 1];
    err[labels[r - 1] - 1] = s.position_stderr[r - 1];
  }
  j["position_freq"] = freq;
  j["position_stderr"] = err;
  Json order = Json::array();
  for (int k = 1; k <= s.final_state.n(); ++k) order.push_back(labels[s.final_state.item_at(k) - 1]);
  j["final_order"] = order;
  return j;
}

inline std::string position_freq_csv(const SimulationSummary& s, std::span<const int> labels) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> rank_of(n);
  for (int r = 1; r <= n; ++r) rank_of[labels[r - 1] - 1] = r;
  std::string out = "item";
  for (int k = 1; k <= n; ++k) out += ",pos" + std::to_string(k);
  out += '\n';
  for (int u = 1; u <= n; ++u) {
    out += std::to_string(u);
    for (int k = 1; k <= n; ++k) out += "," + Json(s.position_freq[rank_of[u - 1] - 1][k - 1]).dump();
    out += '\n';
  }
  return out;
}

inline Json per_rank_items(const AccessDistribution& dist, std::span<const int> labels) {
  Json a = Json::array();
  for (int r = 1; r <= dist.n(); ++r) {
    Json e;
    e["rank"] = r;
    e["item"] = labels[r - 1];
    put_rational(e, "p", dist.prob(r));
    a.push_back(std::move(e));
  }
  return a;
}

inline Json to_json(const ExactReport& r, const AccessDistribution& dist, std::span<const int> labels,
                    bool include_q = true) {
  Json j;
  j["n"] = r.n;
  j["items"] = per_rank_items(dist, labels);
  put_rational(j, "Z", r.Z);
  put_rational(j, "expected_cost", r.expected_cost);
  put_rational(j, "opt", r.opt);
  put_rational(j, "excess", r.excess);
  Json inv = Json::array();
  for (int a = 1; a <= r.n; ++a) {
    for (int b = a + 1; b <= r.n; ++b) {
      Json e;
      e["i"] = a;
      e["j"] = b;
      e["item_i"] = labels[a - 1];
      e["item_j"] = labels[b - 1];
      put_rational(e, "p_j_ahead", r.inv_prob[a - 1][b - 1]);
      inv.push_back(std::move(e));
    }
  }
  j["inv_prob"] = inv;
  Json s = Json::array();
  for (int b = 2; b <= r.n; ++b) {
    Json e;
    e["j"] = b;
    e["item"] = labels[b - 1];
    put_rational(e, "s", r.s(b));
    s.push_back(std::move(e));
  }
  j["s"] = s;
  Json g = Json::array();
  for (int b = 1; b <= r.n; ++b) {
    Json e;
    e["j"] = b;
    e["item"] = labels[b - 1];
    put_rational(e, "excess", r.gladiator_excess[b - 1]);
    g.push_back(std::move(e));
  }
  j["gladiator_excess"] = g;
  if (include_q) {
    Json q = Json::object();
    for (const auto& [perm, prob] : r.Q) q[labelled_key(perm, labels)] = to_string(prob);
    j["Q"] = q;
  }
  return j;
}

inline Json to_json(const ScanReport& r) {
  Json j;
  j["n"] = r.n;
  j["j"] = r.j;
  j["min_coefficient"] = r.min_coefficient.str();
  j["degree_vectors_checked"] = r.degree_vectors_checked;
  Json nz = Json::array();
  for (const auto& [d, c] : r.nonzero) {
    Json e;
    e["d"] = std::vector<int>(d.values().begin(), d.values().end());
    e["value"] = c.str();
    nz.push_back(std::move(e));
  }
  j["nonzero"] = nz;
  return j;
}

inline Json to_json(const InjectionReport& r) {
  Json j;
  j["n"] = r.n;
  j["j"] = r.j;
  j["d"] = std::vector<int>(r.d.values().begin(), r.d.values().end());
  j["size_A"] = r.size_A;
  j["size_B"] = r.size_B;
  j["coefficient"] = r.coefficient.str();
  j["forward_ok"] = r.forward_ok;
  j["roundtrip_ok"] = r.roundtrip_ok;
  j["distinct_ok"] = r.distinct_ok;
  j["image_ok"] = r.image_ok;
  j["cardinality_ok"] = r.cardinality_ok;
  j["not_in_image"] = r.not_in_image;
  j["witnesses"] = r.witnesses;
  return j;
}

inline Json word_json(const Word& w, int n) { return w.empty() ? std::string() : word_to_string(w, n); }

inline Json to_json(const SetAElement& in, const ForwardResult& f, const DegreeVector& d, int j) {
  const int n = d.n();
  Json out;
  out["n"] = n;
  out["j"] = j;
  out["d"] = std::vector<int>(d.values().begin(), d.values().end());
  out["i"] = in.i;
  out["k"] = f.trace.k;
  out["L"] = f.trace.L;
  out["U"] = f.trace.U;
  out["m"] = f.trace.m;
  Json words_in = Json::array(), words_out = Json::array();
  for (int l = 1; l <= n; ++l) {
    words_in.push_back(word_json(in.tuple[l], n));
    words_out.push_back(word_json(f.output.tuple[l], n));
  }
  out["input"] = words_in;
  out["b"] = f.trace.b;
  Json steps = Json::array();
  for (int t = f.trace.m; t >= 1; --t) {
    Json e;
    e["t"] = t;
    e["index"] = f.trace.indices[t - 1];
    e["kind"] = to_string(f.trace.step_kinds[t - 1]);
    e["buffer_after"] = word_json(f.trace.buffer_history[f.trace.m - t + 1], n);
    steps.push_back(std::move(e));
  }
  out["initial_buffer"] = word_json(f.trace.buffer_history.front(), n);
  out["steps"] = steps;
  out["output"] = words_out;
  out["new_deficit"] = f.output.deficit;
  return out;
}

/// Tabular layout: one row per word, sorted by input length, with the
/// buffer left after that word's step.
inline std::string trace_text(const SetAElement& in, const ForwardResult& f, const DegreeVector& d, int j) {
  const int n = d.n();
  const auto& tr = f.trace;
  std::vector<int> rows(n);
  for (int l = 1; l <= n; ++l) rows[in.tuple[l].size()] = l;

  struct Row {
    std::string label, input, buffer, output;
  };
  std::vector<Row> table;
  for (int l : rows) {
    Row row{std::to_string(l), word_to_string(in.tuple[l], n), "", word_to_string(f.output.tuple[l], n)};
    if (l == j) {
      row.label = "j=" + std::to_string(j);
      row.buffer = word_to_string(tr.buffer_history.front(), n);
    }
    for (int t = 1; t <= tr.m; ++t) {
      if (tr.indices[t - 1] != l) continue;
      row.label = std::string(to_string(tr.step_kinds[t - 1])) + ": i_" + std::to_string(t) + "=" + std::to_string(l);
      if (t == 1) row.label = std::string(to_string(tr.step_kinds[0])) + ": i=i_1=" + std::to_string(l);
      row.buffer = word_to_string(tr.buffer_history[tr.m - t + 1], n);
    }
    table.push_back(std::move(row));
  }
  // ε is two bytes but one column.
  auto width = [](const std::string& s) { return s == "ε" ? std::size_t{1} : s.size(); };
  std::size_t w0 = 5, w1 = 11, w2 = 6;
  for (const auto& r : table) {
    w0 = std::max(w0, width(r.label));
    w1 = std::max(w1, width(r.input));
    w2 = std::max(w2, width(r.buffer));
  }
  auto pad = [&](const std::string& s, std::size_t w) { return s + std::string(w - width(s) + 2, ' '); };
  std::string text = "n=" + std::to_string(n) + " d=(" + d.to_string() + ") j=" + std::to_string(j) +
                     " i=" + std::to_string(in.i) + " k=" + std::to_string(tr.k) + " L=" + std::to_string(tr.L) +
                     " U=" + std::to_string(tr.U) + " m=" + std::to_string(tr.m) + "\n";
  text += pad("index", w0) + pad("input words", w1) + pad("buffer", w2) + "output words\n";
  for (const auto& r : table) text += pad(r.label, w0) + pad(r.input, w1) + pad(r.buffer, w2) + r.output + "\n";
  text += "new deficit: " + std::to_string(f.output.deficit) + "\n";
  return text;
}

}  // namespace lulab
