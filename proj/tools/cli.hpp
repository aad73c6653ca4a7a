#pragma once

// Command dispatcher for the `lulab` tool. Kept in a header so tests can drive
// it in-process.
//
// Exit status: 0 success, 1 invalid input or exceeded limit, 2 a verification
// check failed (which would indicate a bug).

#include "lulab/exact.hpp"
#include "lulab/gappoly.hpp"
#include "lulab/injection.hpp"
#include "lulab/json_io.hpp"
#include "lulab/simulate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace lulab::cli {

inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kCheckFailed = 2;

class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A distribution plus the caller's label for each sorted rank. Zero weights
/// are removed before construction and listed in `removed`.
struct LoadedDistribution {
  AccessDistribution dist;
  std::vector<int> labels;
  std::vector<int> removed;
};

inline LoadedDistribution load_distribution(const std::string& literal, std::optional<int> n, bool normalize,
                                            std::ostream& err) {
  if (is_family_literal(literal)) {
    auto d = parse_distribution(literal, n, normalize);
    std::vector<int> labels(d.label_map().begin(), d.label_map().end());
    return {std::move(d), std::move(labels), {}};
  }
  auto weights = parse_weight_list(literal);
  if (n && *n != static_cast<int>(weights.size())) {
    throw std::invalid_argument("--n does not match the number of listed weights");
  }
  std::vector<Rational> kept;
  std::vector<int> kept_labels, removed;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0) {
      removed.push_back(static_cast<int>(i) + 1);
    } else {
      kept.push_back(weights[i]);
      kept_labels.push_back(static_cast<int>(i) + 1);
    }
  }
  if (!removed.empty()) {
    err << "note: removed " << removed.size() << " zero-weight item(s):";
    for (int r : removed) err << ' ' << r;
    err << '\n';
  }
  auto d = make_distribution(std::move(kept), normalize);
  std::vector<int> labels;
  for (int r = 1; r <= d.n(); ++r) labels.push_back(kept_labels[d.label(r) - 1]);
  return {std::move(d), std::move(labels), std::move(removed)};
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto trimmed = detail::trim(part);
    if (trimmed.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(static_cast<int>(detail::parse_integer(trimmed, text)));
  }
  return out;
}

struct CommonFlags {
  std::string format = "json";
  std::string out_path;
  unsigned threads = 0;
  std::optional<int> exact_limit;
};

inline ExactOptions exact_options(const CommonFlags& c, int n, std::ostream& err) {
  ExactOptions o;
  o.limit = c.exact_limit.value_or(exact_limit_from_env());
  o.threads = c.threads;
  if (n > kDefaultExactLimit && n <= o.limit) {
    err << "warning: exact enumeration over " << n << "! permutations may take a long time\n";
  }
  return o;
}

inline void emit(const CommonFlags& c, const std::string& text, std::ostream& out) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + c.out_path + "'");
  f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string dist;
  std::optional<int> n;
  std::string rule = "transposition";
  std::int64_t steps = 1'000'000;
  std::optional<std::int64_t> burn_in;
  std::uint64_t seed = 1;
  std::string initial = "identity";
  int batches = 100;
  int replicas = 1;
  bool strengths = false;
};

inline std::string run_simulate(const SimulateArgs& a, const CommonFlags& c, std::ostream& err) {
  const auto loaded = load_distribution(a.dist, a.n, !a.strengths, err);
  SimulationConfig cfg;
  static const std::map<std::string, Rule> rules{
      {"transposition", Rule::transposition}, {"mtf", Rule::mtf}, {"gladiator", Rule::gladiator}};
  static const std::map<std::string, Initial> initials{
      {"identity", Initial::identity}, {"reversed", Initial::reversed}, {"random", Initial::random}};
  cfg.rule = rules.at(a.rule);
  cfg.initial = initials.at(a.initial);
  cfg.steps = a.steps;
  cfg.burn_in = a.burn_in;
  cfg.seed = a.seed;
  cfg.batches = a.batches;
  validate(cfg);

  if (a.replicas == 1) {
    const auto s = run_chain(loaded.dist, cfg);
    if (c.format == "csv") return position_freq_csv(s, loaded.labels);
    Json j = to_json(s, cfg, loaded.labels);
    if (!loaded.removed.empty()) j["removed_items"] = loaded.removed;
    return dump(j);
  }
  if (c.format == "csv") throw std::invalid_argument("csv output supports a single replica only");
  const auto runs = run_replicas(loaded.dist, cfg, a.replicas, c.threads);
  Json arr = Json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    SimulationConfig rc = cfg;
    rc.seed = replica_seed(cfg.seed, r);
    Json e = to_json(runs[r], rc, loaded.labels);
    e["replica"] = r;
    arr.push_back(std::move(e));
  }
  Json j;
  j["replicas"] = arr;
  return dump(j);
}

// ---------------------------------------------------------------------------

struct ExactArgs {
  std::string dist;
  std::optional<int> n;
  bool strengths = false;
  bool no_q = false;
};

inline std::string run_exact(const ExactArgs& a, const CommonFlags& c, std::ostream& err) {
  const auto loaded = load_distribution(a.dist, a.n, !a.strengths, err);
  const auto& dist = loaded.dist;
  const auto opts = exact_options(c, dist.n(), err);
  const Rational residual = detailed_balance_check(dist, opts);
  if (residual != 0) throw CheckFailed("detailed balance residual is " + to_string(residual));

  if (dist.normalized()) {
    const auto report = excess_decomposition(dist, opts);
    if (c.format == "csv") {
      std::string out = "rank,item,p,s,gladiator_excess\n";
      for (int r = 1; r <= dist.n(); ++r) {
        out += std::to_string(r) + "," + std::to_string(loaded.labels[r - 1]) + "," + to_string(dist.prob(r)) + "," +
               (r >= 2 ? to_string(report.s(r)) : std::string("0")) + "," + to_string(report.gladiator_excess[r - 1]) +
               "\n";
      }
      return out;
    }
    if (c.format == "text") {
      std::ostringstream t;
      t << "n = " << dist.n() << "\n";
      t << "OPT = " << to_string(report.opt) << " (" << to_double(report.opt) << ")\n";
      t << "expected cost = " << to_string(report.expected_cost) << " (" << to_double(report.expected_cost) << ")\n";
      t << "excess = " << to_string(report.excess) << " (" << to_double(report.excess) << ")\n";
      for (int r = 2; r <= dist.n(); ++r) {
        t << "s_" << r << " = " << to_string(report.s(r)) << " (" << to_double(report.s(r)) << ")\n";
      }
      return t.str();
    }
    Json j = to_json(report, dist, loaded.labels, !a.no_q);
    j["normalized"] = true;
    put_rational(j, "detailed_balance_residual", residual);
    if (!loaded.removed.empty()) j["removed_items"] = loaded.removed;
    return dump(j);
  }

  // Gladiator strengths: costs are not defined, the stationary law and the
  // gladiator excesses are.
  if (c.format != "json") throw std::invalid_argument("unnormalized strengths support json output only");
  const ExactAnalysis analysis(dist, opts);
  Json j;
  j["n"] = dist.n();
  j["normalized"] = false;
  j["items"] = per_rank_items(dist, loaded.labels);
  put_rational(j, "Z", analysis.partition_function());
  put_rational(j, "detailed_balance_residual", residual);
  Json g = Json::array();
  for (int b = 1; b <= dist.n(); ++b) {
    Json e;
    e["j"] = b;
    e["item"] = loaded.labels[b - 1];
    put_rational(e, "excess", analysis.gladiator_excess(b));
    g.push_back(std::move(e));
  }
  j["gladiator_excess"] = g;
  if (!a.no_q) {
    Json q = Json::object();
    for (const auto& [perm, prob] : analysis.law().Q) q[labelled_key(perm, loaded.labels)] = to_string(prob);
    j["Q"] = q;
  }
  return dump(j);
}

// ---------------------------------------------------------------------------

struct CoeffsArgs {
  int n = 0;
  std::optional<int> j;
  std::string d;
  int scan_limit = kDefaultScanLimit;
};

inline std::string run_coeffs(const CoeffsArgs& a, const CommonFlags& c) {
  if (a.n < 2) throw std::invalid_argument("--n must be at least 2");
  if (a.j && (*a.j < 2 || *a.j > a.n)) {
    throw std::out_of_range("j out of range: need 2 <= j <= " + std::to_string(a.n));
  }
  if (!a.d.empty()) {
    if (!a.j) throw std::invalid_argument("--d requires --j");
    auto d = DegreeVector::checked(parse_int_list(a.d));
    if (d.n() != a.n) throw std::invalid_argument("--d has " + std::to_string(d.n()) + " entries, expected n");
    const BigInt value = coefficient(a.n, *a.j, d, ExactOptions{kDefaultExactLimit, c.threads});
    if (value < 0) throw CheckFailed("negative coefficient " + value.str() + " at d=(" + d.to_string() + ")");
    Json j;
    j["n"] = a.n;
    j["j"] = *a.j;
    j["d"] = std::vector<int>(d.values().begin(), d.values().end());
    j["coefficient"] = value.str();
    return dump(j);
  }
  const ScanOptions opts{a.scan_limit, c.threads};
  std::vector<ScanReport> scans;
  if (a.j) {
    scans.push_back(scan_coefficients(a.n, *a.j, opts));
  } else {
    scans = scan_all_coefficients(a.n, opts);
  }
  std::string text;
  if (c.format == "csv") {
    text = "j,d,value\n";
    for (const auto& s : scans) {
      for (const auto& [d, v] : s.nonzero) text += std::to_string(s.j) + ",\"" + d.to_string() + "\"," + v.str() + "\n";
    }
  } else if (scans.size() == 1) {
    text = dump(to_json(scans.front()));
  } else {
    Json arr = Json::array();
    for (const auto& s : scans) arr.push_back(to_json(s));
    text = dump(arr);
  }
  for (const auto& s : scans) {
    if (s.min_coefficient < 0) {
      throw CheckFailed("negative coefficient " + s.min_coefficient.str() + " for n=" + std::to_string(s.n) +
                        ", j=" + std::to_string(s.j));
    }
  }
  return text;
}

// ---------------------------------------------------------------------------

struct InjectArgs {
  int n = 0;
  std::optional<int> j;
  std::string d;
  std::string words;
  int i = 0;
  int enum_limit = kDefaultEnumerationLimit;
  int exhaustive_limit = kDefaultExhaustiveLimit;
};

inline std::string run_inject_verify(const InjectArgs& a, const CommonFlags& c, bool& all_passed) {
  const InjectionOptions opts{a.enum_limit, c.threads, 5};
  std::vector<InjectionReport> reports;
  if (!a.d.empty()) {
    auto d = DegreeVector::checked(parse_int_list(a.d));
    const int n = a.n ? a.n : d.n();
    if (d.n() != n) throw std::invalid_argument("--d has " + std::to_string(d.n()) + " entries, expected n");
    if (a.j) {
      reports.push_back(verify_injection(n, d, *a.j, opts));
    } else {
      for (int j = 2; j <= n; ++j) reports.push_back(verify_injection(n, d, j, opts));
    }
  } else {
    if (a.n < 2) throw std::invalid_argument("--n must be at least 2 (or pass --d)");
    if (a.j && (*a.j < 2 || *a.j > a.n)) throw std::out_of_range("j out of range: need 2 <= j <= " + std::to_string(a.n));
    const int first = a.j.value_or(2), last = a.j.value_or(a.n);
    for (int j = first; j <= last; ++j) {
      auto part = verify_injection_all(a.n, j, opts, a.exhaustive_limit);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  }
  all_passed = true;
  for (const auto& r : reports) all_passed = all_passed && r.passed();
  if (c.format == "csv") {
    std::string out = "n,j,d,size_A,size_B,coefficient,passed\n";
    for (const auto& r : reports) {
      out += std::to_string(r.n) + "," + std::to_string(r.j) + ",\"" + r.d.to_string() + "\"," +
             std::to_string(r.size_A) + "," + std::to_string(r.size_B) + "," + r.coefficient.str() + "," +
             (r.passed() ? "true" : "false") + "\n";
    }
    return out;
  }
  if (reports.size() == 1) return dump(to_json(reports.front()));
  Json j;
  j["all_passed"] = all_passed;
  j["checked"] = reports.size();
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  j["reports"] = arr;
  return dump(j);
}

inline std::string run_inject_trace(const InjectArgs& a, const CommonFlags& c) {
  if (a.d.empty() || a.words.empty() || !a.j) throw std::invalid_argument("inject-trace needs --d, --j, --words and --i");
  auto d = DegreeVector::checked(parse_int_list(a.d));
  SetAElement in{parse_word_tuple(a.words), a.i, 0};
  const auto f = inject_forward(in, d, *a.j);
  const auto back = inject_inverse(f.output, d, *a.j);
  const auto* pre = std::get_if<SetAElement>(&back);
  if (!pre || pre->tuple != in.tuple || pre->i != in.i) throw CheckFailed("inverse does not recover the traced input");
  if (c.format == "json") return dump(to_json(in, f, d, *a.j));
  return trace_text(in, f, d, *a.j);
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::string dist;
  std::optional<int> n;
};

inline std::string run_report(const ReportArgs& a, const CommonFlags& c, std::ostream& err) {
  const auto loaded = load_distribution(a.dist, a.n, true, err);
  const auto& dist = loaded.dist;
  const auto report = excess_decomposition(dist, exact_options(c, dist.n(), err));
  const Rational mtf = mtf_closed_form(dist);
  const Rational slack = 1 - report.excess;
  if (slack < 0) throw CheckFailed("stationary excess " + to_string(report.excess) + " exceeds 1");
  if (report.expected_cost > mtf) throw CheckFailed("Transposition cost exceeds Move-to-Front");

  if (c.format == "csv") {
    std::string out = "j,item,p,s,margin\n";
    for (int r = 2; r <= dist.n(); ++r) {
      out += std::to_string(r) + "," + std::to_string(loaded.labels[r - 1]) + "," + to_string(dist.prob(r)) + "," +
             to_string(report.s(r)) + "," + to_string(dist.prob(r) - report.s(r)) + "\n";
    }
    return out;
  }
  if (c.format == "text") {
    std::ostringstream t;
    auto line = [&](const std::string& name, const Rational& q) {
      t << name << " = " << to_string(q) << " (" << to_double(q) << ")\n";
    };
    line("OPT", report.opt);
    line("Transposition stationary cost", report.expected_cost);
    line("Move-to-Front stationary cost", mtf);
    line("excess", report.excess);
    line("slack to OPT+1", slack);
    for (int r = 2; r <= dist.n(); ++r) line("p_" + std::to_string(r) + " - s_" + std::to_string(r), dist.prob(r) - report.s(r));
    return t.str();
  }
  Json j;
  j["n"] = dist.n();
  j["items"] = per_rank_items(dist, loaded.labels);
  put_rational(j, "opt", report.opt);
  put_rational(j, "transposition_cost", report.expected_cost);
  put_rational(j, "mtf_cost", mtf);
  put_rational(j, "excess", report.excess);
  put_rational(j, "slack", slack);
  Json per = Json::array();
  for (int r = 2; r <= dist.n(); ++r) {
    Json e;
    e["j"] = r;
    e["item"] = loaded.labels[r - 1];
    put_rational(e, "p", dist.prob(r));
    put_rational(e, "s", report.s(r));
    put_rational(e, "margin", dist.prob(r) - report.s(r));
    per.push_back(std::move(e));
  }
  j["blame"] = per;
  if (!loaded.removed.empty()) j["removed_items"] = loaded.removed;
  return dump(j);
}

// ---------------------------------------------------------------------------

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-organizing list analysis: simulation, exact stationary analysis, coefficient scans "
               "and injection verification",
               "lulab"};
  app.require_subcommand(1);
  CommonFlags common;
  auto add_common = [&](CLI::App* sub, const std::vector<std::string>& formats) {
    sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember(formats));
    sub->add_option("--out", common.out_path, "Write the report to this path instead of standard output");
    sub->add_option("--threads", common.threads, "Worker threads (0 = machine parallelism, 1 = sequential)");
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run of one chain");
  simulate->add_option("--dist", sim.dist, "Distribution literal")->required();
  simulate->add_option("--n", sim.n, "Item count for named families");
  simulate->add_option("--rule", sim.rule)->check(CLI::IsMember({"transposition", "mtf", "gladiator"}));
  simulate->add_option("--steps", sim.steps)->check(CLI::PositiveNumber);
  simulate->add_option("--burn-in", sim.burn_in, "Discarded initial steps (default steps/10)");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--initial", sim.initial)->check(CLI::IsMember({"identity", "reversed", "random"}));
  simulate->add_option("--batches", sim.batches, "Batch-means groups for standard errors");
  simulate->add_option("--replicas", sim.replicas, "Independent replicas with derived seeds");
  simulate->add_flag("--strengths", sim.strengths, "Keep weights unnormalized (gladiator rule)");
  add_common(simulate, {"json", "csv"});

  ExactArgs ex;
  auto* exact = app.add_subcommand("exact", "Exact stationary analysis of Transposition");
  exact->add_option("--dist", ex.dist, "Distribution literal")->required();
  exact->add_option("--n", ex.n, "Item count for named families");
  exact->add_flag("--strengths", ex.strengths, "Keep weights unnormalized (gladiator strengths)");
  exact->add_flag("--no-q", ex.no_q, "Omit the per-permutation stationary law");
  exact->add_option("--exact-limit", common.exact_limit, "Largest n enumerated exactly (default 8)");
  add_common(exact, {"json", "csv", "text"});

  CoeffsArgs co;
  auto* coeffs = app.add_subcommand("coeffs", "Gap-polynomial coefficient scan");
  coeffs->add_option("--n", co.n)->required();
  coeffs->add_option("--j", co.j, "Index j (default: every j)");
  coeffs->add_option("--d", co.d, "Single degree vector, comma separated");
  coeffs->add_option("--scan-limit", co.scan_limit, "Largest n scanned (default 5)");
  add_common(coeffs, {"json", "csv"});

  InjectArgs iv;
  auto* verify = app.add_subcommand("inject-verify", "Verify the injection A -> B");
  verify->add_option("--n", iv.n);
  verify->add_option("--j", iv.j, "Index j (default: every j)");
  verify->add_option("--d", iv.d, "Single degree vector (default: every degree vector)");
  verify->add_option("--enum-limit", iv.enum_limit, "Largest n enumerated for a single degree vector (default 5)");
  verify->add_option("--exhaustive-limit", iv.exhaustive_limit, "Largest n for all-degree runs (default 4)");
  add_common(verify, {"json", "csv"});

  InjectArgs it;
  std::string trace_format = "text";
  auto* trace = app.add_subcommand("inject-trace", "Trace the injection on one input");
  trace->add_option("--d", it.d)->required();
  trace->add_option("--j", it.j)->required();
  trace->add_option("--words", it.words, "Comma-separated words, empty for ε (e.g. 2,,353,4545,55)")->required();
  trace->add_option("--i", it.i)->required();
  trace->add_option("--format", trace_format)->check(CLI::IsMember({"text", "json"}));
  trace->add_option("--out", common.out_path);

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Summary of OPT, Transposition, Move-to-Front and blame margins");
  report->add_option("--dist", rep.dist, "Distribution literal")->required();
  report->add_option("--n", rep.n, "Item count for named families");
  report->add_option("--exact-limit", common.exact_limit, "Largest n enumerated exactly (default 8)");
  add_common(report, {"json", "csv", "text"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    std::string text;
    int status = kOk;
    if (*simulate) {
      text = run_simulate(sim, common, err);
    } else if (*exact) {
      text = run_exact(ex, common, err);
    } else if (*coeffs) {
      text = run_coeffs(co, common);
    } else if (*verify) {
      bool ok = true;
      text = run_inject_verify(iv, common, ok);
      if (!ok) {
        err << "error: injection verification failed\n";
        status = kCheckFailed;
      }
    } else if (*trace) {
      common.format = trace_format;
      text = run_inject_trace(it, common);
    } else if (*report) {
      text = run_report(rep, common, err);
    }
    emit(common, text, out);
    return status;
  } catch (const CheckFailed& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InternalCheckFailure& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace lulab::cli
