#pragma once

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixid/catalog.hpp"
#include "mixid/certify.hpp"
#include "mixid/polyring.hpp"
#include "mixid/search.hpp"

namespace mixid::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchema = "mixid-report/1";

enum Exit : int { kOk = 0, kInconclusive = 1, kCounterexample = 2, kBudget = 3, kBadInput = 4 };

struct RunConfig {
  std::string command;
  std::string spec;
  std::string constants_spec;
  std::string catalog;
  std::string word_file;
  std::string what = "all";
  std::string mode = "exhaustive";
  std::string format = "json";
  std::string out;
  int n = 0, m = 0, k = -1, l = -1, frob = 0;
  std::uint32_t q = 0;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10'000;
  std::uint64_t trials = 100;
  std::uint64_t budget_enum = 10'000'000;
  std::uint64_t budget_tuples = 1'000'000'000;
  std::uint64_t budget_words = 1'000'000'000;
  unsigned threads = 8;
  std::size_t max_len = 3;
  bool unnormalized = false;
  bool timing = true;

  void validate() const {
    if (!budget_enum || !budget_tuples || !budget_words) throw std::invalid_argument("budgets must be positive");
    if (!threads) throw std::invalid_argument("thread count must be positive");
    if (format != "json" && format != "tsv") throw std::invalid_argument("format must be json or tsv");
    if (mode != "exhaustive" && mode != "sampled") throw std::invalid_argument("mode must be exhaustive or sampled");
  }
};

struct Report {
  json doc;
  int exit_code = kOk;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Word files

struct WordFile {
  std::string spec;  // from a "# spec: ..." header, may be empty
  std::vector<std::string> words;
};

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

inline WordFile parse_word_file(std::istream& in) {
  WordFile f;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(line.substr(1));
      if (body.rfind("spec:", 0) == 0 && f.spec.empty()) f.spec = trim(body.substr(5));
      continue;
    }
    f.words.push_back(line);
  }
  return f;
}

inline WordFile read_word_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read word file: " + path);
  return parse_word_file(in);
}

// ---------------------------------------------------------------------------
// Report plumbing

inline json header(const RunConfig& c, const std::string& spec) {
  json h;
  h["schema"] = kSchema;
  h["tool"] = "mixid";
  h["version"] = kVersion;
  h["command"] = c.command;
  h["spec"] = spec;
  h["seed"] = c.seed;
  h["budgets"] = {{"enumeration", c.budget_enum}, {"tuples", c.budget_tuples}, {"words", c.budget_words}};
  h["threads"] = c.threads;
  return h;
}

template <SerializableGroup G>
json serialize_all(const G& g, const std::vector<typename G::element>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(g.serialize(x));
  return a;
}

template <class E>
json recipe_json(const IdentityRecipe<E>& r) {
  return {{"name", r.name},
          {"spec", r.spec},
          {"constant_spec", r.constant_spec},
          {"length", r.word.length()},
          {"variables", r.word.num_vars()},
          {"claimed_bound", r.claimed_bound},
          {"bound_formula", r.bound_formula},
          {"within_bound", r.word.length() <= r.claimed_bound},
          {"notes", r.notes}};
}

inline std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// Metadata as "# key: value" lines, then the results table with the union
/// of row keys as columns.
inline std::string to_tsv(const json& doc) {
  std::ostringstream os;
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "results") os << "# " << it.key() << ": " << cell(it.value()) << '\n';
  if (!doc.contains("results")) return os.str();
  std::vector<std::string> cols;
  for (const auto& row : doc["results"])
    for (auto it = row.begin(); it != row.end(); ++it)
      if (std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "\t" : "") << cols[i];
  os << '\n';
  for (const auto& row : doc["results"]) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "\t" : "") << (row.contains(cols[i]) ? cell(row[cols[i]]) : "");
    os << '\n';
  }
  return os.str();
}

inline std::string render(const Report& r, const std::string& format) {
  return format == "tsv" ? to_tsv(r.doc) : r.doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Catalog

inline IdentityRecipe<SemilinearElement> matrix_recipe(const RunConfig& c) {
  const std::string& name = c.catalog;
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw InputError("catalog " + name + " needs " + what);
  };
  if (name == "psl") {
    need(c.n >= 2 && c.q, "--n and --q");
    return psl_identity(c.n, c.q);
  }
  if (name == "sl2-law") {
    need(c.q, "--q");
    return sl2_law(c.q);
  }
  if (name == "frobenius") {
    need(c.q, "--q");
    return psl2_frobenius_identity(c.q, c.frob ? c.frob : 1);
  }
  if (name == "sp") {
    need(c.m >= 2 && c.q, "--m and --q");
    return sp_identity(c.m, c.q);
  }
  if (name == "so") {
    need(c.m >= 3 && c.q, "--m and --q");
    return so_odd_identity(c.m, c.q);
  }
  if (name == "su") {
    need(c.n >= 2 && c.q, "--n and --q");
    return su_identity(c.n, c.q);
  }
  throw InputError("unknown catalog entry: " + name);
}

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"psl", "sl2-law", "frobenius", "sp", "so", "su", "alternating"};
  return names;
}

inline Report cmd_catalog(const RunConfig& c) {
  Report rep;
  rep.doc = header(c, c.catalog.empty() ? "" : c.spec);
  json rows = json::array();
  if (c.catalog.empty()) {
    auto add = [&](auto&& r) { rows.push_back(recipe_json(r)); };
    add(psl_identity(2, 3));
    add(psl_identity(2, 5));
    add(psl_identity(3, 2));
    add(psl_identity(3, 3));
    for (std::uint32_t q : {2u, 3u, 5u}) add(sl2_law(q));
    add(psl2_frobenius_identity(4, 1));
    add(psl2_frobenius_identity(9, 1));
    add(sp_identity(2, 2));
    add(sp_identity(2, 3));
    add(so_odd_identity(3, 3));
    add(su_identity(2, 2));
    add(su_identity(3, 2));
    add(su_identity(2, 3));
    add(alternating_identity(5));
  } else if (c.catalog == "alternating") {
    if (c.n < 3) throw InputError("catalog alternating needs --n >= 3");
    auto r = alternating_identity(c.n);
    json row = recipe_json(r);
    row["word"] = to_string(PermGroup::alternating(c.n), r.word);
    rows.push_back(row);
    rep.doc["spec"] = r.spec;
  } else {
    auto r = matrix_recipe(c);
    json row = recipe_json(r);
    row["word"] = to_string(MatrixGroup(GroupSpec::parse(r.constant_spec)), r.word);
    rows.push_back(row);
    rep.doc["spec"] = r.spec;
  }
  rep.doc["results"] = rows;
  return rep;
}

// ---------------------------------------------------------------------------
// Verification

template <SerializableGroup G>
Report verify_words(const RunConfig& c, const G& g, const std::vector<WordOf<G>>& words,
                    const std::vector<std::string>& texts, const std::function<std::vector<typename G::element>()>& all,
                    const std::function<typename G::element(std::mt19937_64&)>& draw, json doc) {
  using E = typename G::element;
  Report rep;
  json rows = json::array();
  std::size_t failures = 0;
  const bool exhaustive = c.mode == "exhaustive";
  try {
    std::vector<E> els;
    if (exhaustive && !words.empty()) els = all();
    if (exhaustive) doc["group_order"] = els.size();
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      IdentityVerdict<E> v = exhaustive ? verify_exhaustive(g, w, els, c.budget_tuples, c.threads)
                                        : verify_sampled<G>(g, w, draw, c.samples, c.seed + i);
      json row{{"index", i}, {"length", w.length()}, {"variables", w.num_vars()}, {"identity", v.identity}};
      if (exhaustive) row["ground_truth"] = v.ground_truth;
      row["checked"] = v.checked;
      row["witness"] = v.witness ? serialize_all(g, *v.witness) : json();
      if (!texts.empty()) row["word"] = texts[i];
      rows.push_back(row);
      if (!v.identity) ++failures;
    }
    doc["status"] = failures ? "counterexample" : "complete";
    rep.exit_code = failures ? kCounterexample : kOk;
  } catch (const BudgetExceeded& e) {
    doc["status"] = "budget_exceeded";
    doc["error"] = e.what();
    rep.exit_code = kBudget;
  }
  doc["summary"] = {{"words", words.size()}, {"verified", rows.size()}, {"counterexamples", failures}};
  doc["results"] = rows;
  rep.doc = std::move(doc);
  return rep;
}

inline std::function<SemilinearElement(std::mt19937_64&)> matrix_draw(const GroupSpec& spec, std::uint64_t seed) {
  auto s = std::make_shared<Sampler>(spec, seed);
  return [s](std::mt19937_64&) { return s->next(); };
}

inline std::function<Perm(std::mt19937_64&)> perm_draw(const PermGroup& g) {
  auto els = std::make_shared<std::vector<Perm>>(g.elements());
  return [els](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, els->size() - 1);
    return (*els)[d(rng)];
  };
}

/// h g0^x h g0^x h = 0 over the whole group.
inline json so_kernel_check(const IdentityRecipe<SemilinearElement>& r, int m, std::uint64_t budget) {
  const GroupSpec spec = GroupSpec::parse(r.spec);
  std::uint64_t zero = 0, total = 0;
  for (const auto& x : enumerate(spec, budget)) {
    ++total;
    if (is_zero(so_kernel_product(x.mat, m))) ++zero;
  }
  return {{"elements", total}, {"expected_order", spec.order()}, {"kernel_zero", zero}, {"holds", zero == total}};
}

inline Report cmd_verify(const RunConfig& c) {
  if (!c.catalog.empty()) {
    if (c.catalog == "alternating") {
      if (c.n < 3) throw InputError("catalog alternating needs --n >= 3");
      auto r = alternating_identity(c.n);
      PermGroup g = PermGroup::alternating(c.n);
      json doc = header(c, r.spec);
      doc["recipe"] = recipe_json(r);
      return verify_words<PermGroup>(c, g, {r.word}, {}, [&] { return g.elements(); }, perm_draw(g), doc);
    }
    auto r = matrix_recipe(c);
    MatrixGroup g(GroupSpec::parse(r.constant_spec));
    const GroupSpec spec = GroupSpec::parse(r.spec);
    json doc = header(c, r.spec);
    doc["recipe"] = recipe_json(r);
    auto rep = verify_words<MatrixGroup>(
        c, g, {r.word}, {}, [&] { return enumerate(spec, c.budget_enum); }, matrix_draw(spec, c.seed), doc);
    if (c.catalog == "so" && c.mode == "exhaustive" && rep.exit_code != kBudget) {
      rep.doc["kernel_check"] = so_kernel_check(r, c.m, c.budget_enum);
      if (!rep.doc["kernel_check"]["holds"].get<bool>()) rep.exit_code = kCounterexample;
    }
    return rep;
  }
  if (c.word_file.empty()) throw InputError("verify needs --catalog or --word-file");
  WordFile wf = read_word_file(c.word_file);
  const std::string spec_text = c.spec.empty() ? wf.spec : c.spec;
  if (spec_text.empty()) throw InputError("no group spec given");
  const std::string cspec_text = c.constants_spec.empty() ? spec_text : c.constants_spec;
  json doc = header(c, spec_text);
  doc["constant_spec"] = cspec_text;
  if (PermGroup::is_perm_spec(spec_text)) {
    PermGroup g = PermGroup::from_spec(cspec_text);
    PermGroup eval = PermGroup::from_spec(spec_text);
    std::vector<WordOf<PermGroup>> words;
    for (const auto& t : wf.words) words.push_back(parse_word(g, t));
    return verify_words<PermGroup>(c, g, words, wf.words, [&] { return eval.elements(); }, perm_draw(eval), doc);
  }
  const GroupSpec spec = GroupSpec::parse(spec_text);
  MatrixGroup g(GroupSpec::parse(cspec_text));
  std::vector<WordOf<MatrixGroup>> words;
  for (const auto& t : wf.words) words.push_back(parse_word(g, t));
  return verify_words<MatrixGroup>(
      c, g, words, wf.words, [&] { return enumerate(spec, c.budget_enum); }, matrix_draw(spec, c.seed), doc);
}

// ---------------------------------------------------------------------------
// Certification

inline json certificate_json(const MatrixGroup& g, const Certificate& cert) {
  const FiniteField& F = g.field();
  auto elem = [&](const std::optional<FFElem>& a) { return a ? json(F.to_string(*a)) : json(); };
  json j{{"outcome", cert.nonconstant() ? "nonconstant" : "identity_candidate"},
         {"reason", cert.reason},
         {"reasons", cert.reasons},
         {"method", cert.method},
         {"degree", cert.degree},
         {"letter_degrees", cert.letter_degrees},
         {"hypotheses_hold", cert.hypotheses_hold},
         {"in_regime", cert.in_regime ? json(*cert.in_regime) : json()},
         {"substituted", cert.substituted},
         {"lambda", elem(cert.lambda)},
         {"mu", elem(cert.mu)},
         {"alpha", elem(cert.alpha)}};
  if (cert.probe) {
    json v = json::array(), phi = json::array();
    for (FFElem a : cert.probe->v) v.push_back(F.to_string(a));
    for (FFElem a : cert.probe->phi) phi.push_back(F.to_string(a));
    j["probe"] = {{"v", v}, {"phi", phi}};
  }
  j["witness_lambda"] = serialize_all(g, cert.witness_lambda);
  j["witness_mu"] = serialize_all(g, cert.witness_mu);
  return j;
}

inline Report cmd_certify(const RunConfig& c) {
  std::vector<Word<SemilinearElement>> words;
  std::vector<std::string> texts;
  std::string spec_text = c.spec;
  json doc;
  if (!c.catalog.empty()) {
    auto r = matrix_recipe(c);
    if (spec_text.empty()) spec_text = r.constant_spec;
    words.push_back(r.word);
    doc = header(c, spec_text);
    doc["recipe"] = recipe_json(r);
  } else {
    if (c.word_file.empty()) throw InputError("certify needs --catalog or --word-file");
    WordFile wf = read_word_file(c.word_file);
    if (spec_text.empty()) spec_text = wf.spec;
    if (spec_text.empty()) throw InputError("no group spec given");
    MatrixGroup g(GroupSpec::parse(spec_text));
    for (const auto& t : wf.words) words.push_back(parse_word(g, t));
    texts = wf.words;
    doc = header(c, spec_text);
  }
  const GroupSpec spec = GroupSpec::parse(spec_text);
  MatrixGroup g(spec);
  CertifyOptions opt;
  opt.seed = c.seed;
  opt.substitution.seed = c.seed;
  json rows = json::array();
  std::size_t certified = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    Certificate cert = spec.frob ? certify_semilinear(words[i], spec, opt) : certify_nonconstant(words[i], spec, opt);
    json row{{"index", i}, {"length", words[i].length()}};
    row.update(certificate_json(g, cert));
    if (!texts.empty()) row["word"] = texts[i];
    rows.push_back(row);
    if (cert.nonconstant()) ++certified;
  }
  doc["summary"] = {{"words", words.size()}, {"nonconstant", certified}, {"inconclusive", words.size() - certified}};
  doc["status"] = certified == words.size() ? "complete" : "inconclusive";
  doc["results"] = rows;
  return {doc, certified == words.size() ? kOk : kInconclusive};
}

// ---------------------------------------------------------------------------
// Search

template <SerializableGroup G>
Report run_search(const RunConfig& c, const G& g, const std::vector<typename G::element>& els,
                  const std::vector<typename G::element>& constants, json doc) {
  Report rep;
  doc["group_order"] = els.size();
  doc["constants"] = constants.size();
  doc["max_len"] = c.max_len;
  doc["normalized"] = !c.unnormalized;
  try {
    auto res = c.unnormalized ? search_shortest_unnormalized(g, els, constants, c.max_len, c.budget_words)
                              : search_shortest(g, els, constants, c.max_len, c.budget_words);
    json row{{"found", res.found()}};
    if (res.found()) {
      row["length"] = res.length();
      row["word"] = to_string(g, *res.identity);
      row["statement"] = "shortest identity has length " + std::to_string(res.length());
      row["verified"] = verify_exhaustive(g, *res.identity, els, c.budget_tuples, c.threads).identity;
    } else {
      row["statement"] = "none <= " + std::to_string(c.max_len);
    }
    row["words_examined"] = res.words;
    row["multiplications"] = res.mults;
    doc["status"] = "complete";
    doc["results"] = json::array({row});
  } catch (const BudgetExceeded& e) {
    doc["status"] = "budget_exceeded";
    doc["error"] = e.what();
    doc["results"] = json::array();
    rep.exit_code = kBudget;
  }
  rep.doc = std::move(doc);
  return rep;
}

inline Report cmd_search(const RunConfig& c) {
  if (c.spec.empty()) throw InputError("search needs --spec");
  const std::string cspec = c.constants_spec.empty() ? c.spec : c.constants_spec;
  json doc = header(c, c.spec);
  doc["constant_spec"] = cspec;
  if (PermGroup::is_perm_spec(c.spec)) {
    PermGroup g = PermGroup::from_spec(c.spec), cg = PermGroup::from_spec(cspec);
    return run_search(c, cg, g.elements(), cg.elements(), doc);
  }
  const GroupSpec s = GroupSpec::parse(c.spec), cs = GroupSpec::parse(cspec);
  MatrixGroup g(cs);
  return run_search(c, g, enumerate(s, c.budget_enum), enumerate(cs, c.budget_enum), doc);
}

// ---------------------------------------------------------------------------
// Counting

inline json count_row(const std::string& kind, const std::string& instance, std::uint64_t brute, std::uint64_t formula) {
  return {{"kind", kind}, {"instance", instance}, {"brute", brute}, {"formula", formula}, {"match", brute == formula}};
}

inline Report cmd_count(const RunConfig& c) {
  json doc = header(c, c.spec);
  json rows = json::array();
  const bool all = c.what == "all";
  static const std::vector<std::string> kinds{"all", "involutions", "isotropic", "fixedpoints", "zeros"};
  if (std::find(kinds.begin(), kinds.end(), c.what) == kinds.end()) throw InputError("unknown count kind: " + c.what);
  Report rep;
  try {
    if (all || c.what == "involutions") {
      std::vector<std::pair<unsigned, std::uint64_t>> inst;
      if (c.m && c.q)
        inst.emplace_back(c.m, c.q);
      else
        inst = {{2, 2}, {2, 3}};
      for (auto [m, q] : inst) {
        auto r = count_involutions(m, q, c.budget_enum);
        rows.push_back(count_row("involutions", "Sp " + std::to_string(2 * m) + " " + std::to_string(q), r.brute, r.formula));
      }
    }
    if (all || c.what == "isotropic") {
      std::vector<std::tuple<int, int, std::uint64_t>> inst;
      if (c.k >= 0 && c.l >= 0 && c.q)
        inst.emplace_back(c.k, c.l, c.q);
      else
        inst = {{3, 0, 2}, {2, 1, 2}, {1, 0, 2}, {0, 2, 3}, {2, 0, 3}, {3, 1, 2}, {4, 0, 2}, {2, 2, 3}};
      for (auto [k, l, q] : inst) {
        auto r = count_isotropic(k, l, q, c.threads, c.budget_tuples);
        rows.push_back(count_row("isotropic",
                                 "k=" + std::to_string(k) + " l=" + std::to_string(l) + " q=" + std::to_string(q),
                                 r.brute, r.formula));
      }
    }
    if (all || c.what == "fixedpoints") {
      std::vector<std::uint32_t> qs = c.q ? std::vector<std::uint32_t>{c.q} : std::vector<std::uint32_t>{4, 8, 9, 16};
      std::vector<int> ns = c.n ? std::vector<int>{c.n} : std::vector<int>{2, 3};
      std::mt19937_64 rng(c.seed);
      for (std::uint32_t q : qs)
        for (int n : ns) {
          const FiniteField& F = ff_of_order(q);
          std::uint64_t worst = 0, violations = 0;
          for (std::uint64_t t = 0; t < c.trials; ++t) {
            Mat A(F, n);
            do {
              for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) A.set(i, j, F.elements()[rng() % q]);
            } while (!det(A).v);
            auto r = semilinear_fixed_points(SemilinearElement{A, static_cast<int>(rng() % F.e())});
            worst = std::max(worst, r.fixed);
            if (!r.holds()) ++violations;
          }
          rows.push_back({{"kind", "fixedpoints"},
                          {"instance", "n=" + std::to_string(n) + " q=" + std::to_string(q)},
                          {"trials", c.trials},
                          {"max_fixed", worst},
                          {"violations", violations},
                          {"match", violations == 0}});
        }
    }
    if (all || c.what == "zeros") {
      const std::uint32_t q = c.q ? c.q : 3;
      const FiniteField& F = ff_of_order(q);
      const int n = c.m ? 2 * c.m : 4;
      std::mt19937_64 rng(c.seed);
      const std::uint64_t trials = std::min<std::uint64_t>(c.trials, 20);
      std::uint64_t violations = 0, worst = 0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        Mat G(F, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) G.set(i, j, F.elements()[rng() % q]);
        auto z = count_nonalternating_zeros(G, c.threads, c.budget_tuples);
        if (!z.alternating) worst = std::max(worst, z.count);
        if (!z.holds) ++violations;
      }
      rows.push_back({{"kind", "zeros"},
                      {"instance", "dim=" + std::to_string(n) + " q=" + std::to_string(q)},
                      {"trials", trials},
                      {"max_zeros", worst},
                      {"bound", 2 * detail::saturate(detail::ipow(q, n - 1)) - 1},
                      {"violations", violations},
                      {"match", violations == 0}});
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r["match"].get<bool>();
    doc["status"] = ok ? "complete" : "mismatch";
    rep.exit_code = ok ? kOk : kCounterexample;
  } catch (const BudgetExceeded& e) {
    doc["status"] = "budget_exceeded";
    doc["error"] = e.what();
    rep.exit_code = kBudget;
  }
  doc["results"] = rows;
  rep.doc = std::move(doc);
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomial machinery

inline Report cmd_polytest(const RunConfig& c) {
  std::uint32_t q = c.q;
  std::string spec_text = c.spec;
  WordFile wf;
  if (!c.word_file.empty()) {
    wf = read_word_file(c.word_file);
    if (spec_text.empty()) spec_text = wf.spec;
  }
  if (!spec_text.empty()) {
    GroupSpec s = GroupSpec::parse(spec_text);
    if (s.n != 2 || s.frob) throw InputError("polytest works over PSL 2 q");
    q = s.q;
  }
  if (!q) throw InputError("polytest needs --q or --spec");
  spec_text = "PSL 2 " + std::to_string(q);
  const GroupSpec spec = GroupSpec::parse(spec_text);
  MatrixGroup g(spec);
  json doc = header(c, spec_text);

  std::vector<Word<SemilinearElement>> words;
  std::vector<std::string> texts;
  if (!c.word_file.empty()) {
    for (const auto& t : wf.words) words.push_back(parse_word(g, t));
    texts = wf.words;
  } else {
    if (q <= 5) words.push_back(psl_identity(2, q).word);
    Sampler s(spec, c.seed);
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t t = 0; t < c.trials; ++t)
      words.push_back(random_word(g, [&] { return s.next(); }, rng, 1 + t % 4));
  }

  json rows = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto v = specialization_identity_test(words[i]);
    const bool degree_ok = v.max_degree <= static_cast<long long>(4 * v.length);
    const bool regime_ok = !v.identity || v.eight_l_ge_q;
    ok = ok && degree_ok && regime_ok;
    json row{{"index", i},
             {"length", v.length},
             {"identity", v.identity},
             {"stage", v.stage},
             {"max_degree", v.max_degree},
             {"degree_bound", 4 * v.length},
             {"eight_l_ge_q", v.eight_l_ge_q},
             {"witness_alpha", v.witness_alpha ? json(g.field().to_string(*v.witness_alpha)) : json()}};
    if (!texts.empty()) row["word"] = texts[i];
    rows.push_back(row);
  }
  json structure = json::array();
  for (std::uint32_t p : {2u, 3u, 5u}) {
    bool all = true;
    for (int n = 1; n <= 6; ++n) all = all && gpower_reduced_form(n, ff_of_order(p));
    structure.push_back({{"check", "gpower n<=6"}, {"field", p}, {"holds", all}});
    ok = ok && all;
  }
  auto cs = case_split_check(g.field());
  structure.push_back({{"check", "case split"}, {"field", q}, {"checked", cs.checked}, {"holds", cs.failures == 0}});
  ok = ok && cs.failures == 0;
  doc["structure"] = structure;
  doc["status"] = ok ? "complete" : "mismatch";
  doc["results"] = rows;
  return {doc, ok ? kOk : kCounterexample};
}

// ---------------------------------------------------------------------------

inline Report run(const RunConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  Report rep;
  try {
    c.validate();
    if (c.command == "catalog")
      rep = cmd_catalog(c);
    else if (c.command == "verify")
      rep = cmd_verify(c);
    else if (c.command == "certify")
      rep = cmd_certify(c);
    else if (c.command == "search")
      rep = cmd_search(c);
    else if (c.command == "count")
      rep = cmd_count(c);
    else if (c.command == "polytest")
      rep = cmd_polytest(c);
    else
      throw InputError("unknown command: " + c.command);
  } catch (const BudgetExceeded& e) {
    rep.doc = header(c, c.spec);
    rep.doc["status"] = "budget_exceeded";
    rep.doc["error"] = e.what();
    rep.exit_code = kBudget;
  } catch (const std::exception& e) {
    rep.doc = header(c, c.spec);
    rep.doc["status"] = "error";
    rep.doc["error"] = e.what();
    rep.exit_code = kBadInput;
  }
  rep.doc["exit_code"] = rep.exit_code;
  if (c.timing) {
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.doc["wall_time_ms"] = ms;
  }
  return rep;
}

}  // namespace mixid::cli
