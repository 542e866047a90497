#pragma once

#include <algorithm>
#include <cctype>
#include <concepts>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mixid {

/// Requirements on a group model used for evaluation.
template <class G>
concept GroupModel = requires(const G& g, const typename G::element& a) {
  { g.identity() } -> std::convertible_to<typename G::element>;
  { g.mul(a, a) } -> std::convertible_to<typename G::element>;
  { g.inv(a) } -> std::convertible_to<typename G::element>;
  { g.is_identity(a) } -> std::convertible_to<bool>;
  { g.equal(a, a) } -> std::convertible_to<bool>;
};

template <class G>
concept SerializableGroup = GroupModel<G> && requires(const G& g, const typename G::element& a, std::string_view s) {
  { g.serialize(a) } -> std::convertible_to<std::string>;
  { g.parse(s) } -> std::convertible_to<typename G::element>;
};

class WordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Letter {
  int var = 1;   // variable index, starting at 1
  int sign = 1;  // +1 or -1
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// c0 x_{i(1)}^{e(1)} c1 ... x_{i(l)}^{e(l)} c_l. Always holds l+1 constants.
template <class E>
struct Word {
  std::vector<E> constants;
  std::vector<Letter> letters;

  std::size_t length() const { return letters.size(); }
  int num_vars() const {
    int m = 0;
    for (const auto& x : letters) m = std::max(m, x.var);
    return m;
  }
};

template <GroupModel G>
using WordOf = Word<typename G::element>;

// ---------------------------------------------------------------------------
// Construction

template <GroupModel G>
WordOf<G> constant_word(const G& g, const typename G::element& c) {
  (void)g;
  return {{c}, {}};
}

template <GroupModel G>
WordOf<G> letter_word(const G& g, int var = 1, int sign = 1) {
  if (var < 1 || (sign != 1 && sign != -1)) throw WordError("invalid letter");
  return {{g.identity(), g.identity()}, {{var, sign}}};
}

/// Reduced form: cancels x^e 1 x^-e pairs and fuses constants.
template <GroupModel G>
WordOf<G> reduce(const G& g, const WordOf<G>& w) {
  if (w.constants.size() != w.letters.size() + 1) throw WordError("word needs l+1 constants");
  WordOf<G> out;
  out.constants.push_back(w.constants[0]);
  for (std::size_t j = 0; j < w.letters.size(); ++j) {
    const Letter& x = w.letters[j];
    const auto& c = w.constants[j + 1];
    if (!out.letters.empty() && out.letters.back().var == x.var && out.letters.back().sign == -x.sign &&
        g.is_identity(out.constants.back())) {
      auto mid = out.constants.back();
      out.letters.pop_back();
      out.constants.pop_back();
      out.constants.back() = g.mul(g.mul(out.constants.back(), mid), c);
    } else {
      out.letters.push_back(x);
      out.constants.push_back(c);
    }
  }
  return out;
}

template <GroupModel G>
bool is_reduced(const G& g, const WordOf<G>& w) {
  for (std::size_t j = 0; j + 1 < w.letters.size(); ++j)
    if (w.letters[j].var == w.letters[j + 1].var && w.letters[j].sign == -w.letters[j + 1].sign &&
        g.is_identity(w.constants[j + 1]))
      return false;
  return true;
}

template <GroupModel G>
WordOf<G> concat(const G& g, const WordOf<G>& a, const WordOf<G>& b) {
  WordOf<G> r = a;
  r.constants.back() = g.mul(r.constants.back(), b.constants.front());
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  r.constants.insert(r.constants.end(), b.constants.begin() + 1, b.constants.end());
  return reduce(g, r);
}

template <GroupModel G>
WordOf<G> inverse(const G& g, const WordOf<G>& w) {
  WordOf<G> r;
  for (auto it = w.constants.rbegin(); it != w.constants.rend(); ++it) r.constants.push_back(g.inv(*it));
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back({it->var, -it->sign});
  return r;
}

template <GroupModel G>
WordOf<G> power(const G& g, const WordOf<G>& w, long long k) {
  WordOf<G> base = k < 0 ? inverse(g, w) : w;
  WordOf<G> r = constant_word(g, g.identity());
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) r = concat(g, r, base);
  return r;
}

/// [a, b] = a^-1 b^-1 a b.
template <GroupModel G>
WordOf<G> commutator(const G& g, const WordOf<G>& a, const WordOf<G>& b) {
  return concat(g, concat(g, concat(g, inverse(g, a), inverse(g, b)), a), b);
}

/// a^b = b^-1 a b.
template <GroupModel G>
WordOf<G> conjugate(const G& g, const WordOf<G>& a, const WordOf<G>& b) {
  return concat(g, concat(g, inverse(g, b), a), b);
}

/// Replaces x_i by images[i-1] and reduces.
template <GroupModel G>
WordOf<G> substitute(const G& g, const WordOf<G>& w, const std::vector<WordOf<G>>& images) {
  WordOf<G> r = constant_word(g, w.constants[0]);
  for (std::size_t j = 0; j < w.letters.size(); ++j) {
    const Letter& x = w.letters[j];
    if (x.var < 1 || x.var > static_cast<int>(images.size())) throw WordError("substitution misses a variable");
    const WordOf<G>& img = images[x.var - 1];
    r = concat(g, r, x.sign > 0 ? img : inverse(g, img));
    r = concat(g, r, constant_word(g, w.constants[j + 1]));
  }
  return r;
}

/// Random word of the given length in `vars` variables. Constants come from
/// `draw`; intermediate constants are redrawn until `keep` accepts them
/// (default: not the identity).
template <GroupModel G, class Draw>
WordOf<G> random_word(const G& g, Draw&& draw, std::mt19937_64& rng, std::size_t length, int vars = 1,
                      const std::function<bool(const typename G::element&)>& keep = {}) {
  std::uniform_int_distribution<int> var(1, std::max(1, vars)), coin(0, 1);
  WordOf<G> w;
  w.constants.push_back(draw());
  for (std::size_t j = 0; j < length; ++j) {
    w.letters.push_back({var(rng), coin(rng) ? 1 : -1});
    auto c = draw();
    if (j + 1 < length)
      while (keep ? !keep(c) : g.is_identity(c)) c = draw();
    w.constants.push_back(c);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Cyclic reduction and classification

template <GroupModel G>
bool is_cyclically_reduced(const G& g, const WordOf<G>& w) {
  if (!is_reduced(g, w)) return false;
  const std::size_t l = w.letters.size();
  if (l < 2) return true;
  const Letter &first = w.letters.front(), &last = w.letters.back();
  if (last.var == first.var && last.sign == -first.sign)
    return !g.is_identity(g.mul(w.constants.back(), w.constants.front()));
  return true;
}

template <class E>
struct CyclicReduction {
  Word<E> v;  // cyclically reduced
  Word<E> u;  // conjugator: w = u^-1 v u
};

template <GroupModel G>
CyclicReduction<typename G::element> cyclically_reduce(const G& g, const WordOf<G>& w0) {
  WordOf<G> v = reduce(g, w0);
  WordOf<G> u = constant_word(g, g.identity());
  while (v.letters.size() >= 2) {
    const Letter first = v.letters.front(), last = v.letters.back();
    if (!(last.var == first.var && last.sign == -first.sign)) break;
    if (!g.is_identity(g.mul(v.constants.back(), v.constants.front()))) break;
    // v = c0 x^a (inner) x^-a c_l with c_l c0 = 1: v = U^-1 inner U, U = x^-a c0^-1.
    auto c0 = v.constants.front();
    WordOf<G> U{{g.identity(), g.inv(c0)}, {{first.var, -first.sign}}};
    WordOf<G> inner;
    inner.constants.assign(v.constants.begin() + 1, v.constants.end() - 1);
    inner.letters.assign(v.letters.begin() + 1, v.letters.end() - 1);
    v = reduce(g, inner);
    u = concat(g, U, u);
  }
  return {v, u};
}

struct ConstantClassification {
  std::vector<std::size_t> j0, jplus, jminus;  // indices in 1..l-1
};

template <class E>
ConstantClassification classify_constants(const Word<E>& w) {
  ConstantClassification c;
  for (std::size_t j = 1; j < w.letters.size(); ++j) {
    const Letter &a = w.letters[j - 1], &b = w.letters[j];
    if (a.var != b.var)
      c.j0.push_back(j);
    else if (a.sign == b.sign)
      c.jplus.push_back(j);
    else
      c.jminus.push_back(j);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Evaluation

template <GroupModel G>
typename G::element evaluate(const G& g, const WordOf<G>& w, const std::vector<typename G::element>& values) {
  const int r = w.num_vars();
  if (static_cast<int>(values.size()) < r) throw WordError("assignment misses a variable");
  std::vector<typename G::element> inverses;
  inverses.reserve(values.size());
  for (const auto& x : values) inverses.push_back(g.inv(x));
  auto acc = w.constants[0];
  for (std::size_t j = 0; j < w.letters.size(); ++j) {
    const Letter& x = w.letters[j];
    acc = g.mul(acc, x.sign > 0 ? values[x.var - 1] : inverses[x.var - 1]);
    acc = g.mul(acc, w.constants[j + 1]);
  }
  return acc;
}

template <GroupModel G>
typename G::element evaluate1(const G& g, const WordOf<G>& w, const typename G::element& x) {
  return evaluate(g, w, std::vector<typename G::element>{x});
}

// ---------------------------------------------------------------------------
// Substitution to one variable

template <class E>
struct OneVariableSubstitution {
  Word<E> word;
  std::vector<E> left;   // g_{-i}
  std::vector<E> right;  // g_{i}
  bool exhaustive = false;
  std::uint64_t trials = 0;
};

struct SubstitutionOptions {
  std::uint64_t trials = 100'000;
  std::uint64_t exhaustive_limit = 100'000'000;
  std::uint64_t seed = 1;
};

namespace detail {

template <GroupModel G>
WordOf<G> apply_one_variable(const G& g, const WordOf<G>& w, const std::vector<typename G::element>& left,
                             const std::vector<typename G::element>& right) {
  const std::size_t l = w.letters.size();
  WordOf<G> r;
  r.constants.resize(l + 1);
  // x_i^{+1} -> g_{-i} x g_i ; x_i^{-1} -> g_i^-1 x^-1 g_{-i}^-1
  auto L = [&](const Letter& x) { return x.sign > 0 ? left[x.var - 1] : g.inv(right[x.var - 1]); };
  auto R = [&](const Letter& x) { return x.sign > 0 ? right[x.var - 1] : g.inv(left[x.var - 1]); };
  for (std::size_t j = 0; j <= l; ++j) {
    auto c = w.constants[j];
    if (j > 0) c = g.mul(R(w.letters[j - 1]), c);
    if (j < l) c = g.mul(c, L(w.letters[j]));
    r.constants[j] = c;
  }
  for (const auto& x : w.letters) r.letters.push_back({1, x.sign});
  return r;
}

template <GroupModel G>
bool substitution_ok(const G& g, const WordOf<G>& w, bool need_cyclic,
                     const std::function<bool(const WordOf<G>&)>& extra) {
  for (std::size_t j = 1; j < w.letters.size(); ++j)
    if (g.is_identity(w.constants[j])) return false;
  if (need_cyclic && !is_cyclically_reduced(g, w)) return false;
  return !extra || extra(w);
}

}  // namespace detail

/// Finds x_i -> g_{-i} x g_i making every intermediate constant nontrivial.
/// Random tuples are tried first, then an exhaustive scan when affordable.
template <GroupModel G>
OneVariableSubstitution<typename G::element> substitute_one_variable(
    const G& g, const WordOf<G>& w, const std::vector<typename G::element>& elements,
    std::uint64_t group_order, const SubstitutionOptions& opt = {},
    const std::function<typename G::element(std::mt19937_64&)>& draw = {},
    const std::function<bool(const WordOf<G>&)>& extra = {}) {
  using E = typename G::element;
  const std::size_t l = w.letters.size();
  const int r = std::max(1, w.num_vars());
  const bool need_cyclic = is_cyclically_reduced(g, w) && l < group_order;
  OneVariableSubstitution<E> out;
  std::vector<E> left(r, g.identity()), right(r, g.identity());
  auto attempt = [&]() {
    auto cand = detail::apply_one_variable(g, w, left, right);
    if (detail::substitution_ok(g, cand, need_cyclic, extra)) {
      out.word = cand;
      out.left = left;
      out.right = right;
      return true;
    }
    return false;
  };
  if (w.num_vars() <= 1 && attempt()) return out;
  std::mt19937_64 rng(opt.seed);
  auto pick = [&]() -> E {
    if (draw) return draw(rng);
    if (elements.empty()) throw WordError("no elements to draw from");
    std::uniform_int_distribution<std::size_t> d(0, elements.size() - 1);
    return elements[d(rng)];
  };
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    for (int i = 0; i < r; ++i) {
      left[i] = pick();
      right[i] = pick();
    }
    out.trials = t + 1;
    if (attempt()) return out;
  }
  // Exhaustive scan over (G^2)^r.
  long double space = 1;
  for (int i = 0; i < 2 * r; ++i) space *= static_cast<long double>(elements.size());
  if (elements.empty() || space > static_cast<long double>(opt.exhaustive_limit))
    throw WordError("substitution search exhausted its budget");
  std::vector<std::size_t> idx(2 * r, 0);
  out.exhaustive = true;
  while (true) {
    for (int i = 0; i < r; ++i) {
      left[i] = elements[idx[2 * i]];
      right[i] = elements[idx[2 * i + 1]];
    }
    if (attempt()) return out;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == elements.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  throw WordError("no substitution exists; the length hypothesis is violated");
}

// ---------------------------------------------------------------------------
// Text form: c{...} x<i>^<+-1> ..., identity constants elided.

template <SerializableGroup G>
std::string to_string(const G& g, const WordOf<G>& w) {
  std::ostringstream os;
  bool any = false;
  auto put_const = [&](const typename G::element& c) {
    if (g.is_identity(c)) return;
    os << (any ? " " : "") << "c{" << g.serialize(c) << "}";
    any = true;
  };
  put_const(w.constants[0]);
  for (std::size_t j = 0; j < w.letters.size(); ++j) {
    os << (any ? " " : "") << 'x' << w.letters[j].var << '^' << (w.letters[j].sign > 0 ? "1" : "-1");
    any = true;
    put_const(w.constants[j + 1]);
  }
  return any ? os.str() : "1";
}

template <SerializableGroup G>
WordOf<G> parse_word(const G& g, std::string_view s) {
  WordOf<G> w;
  w.constants.push_back(g.identity());
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
      continue;
    }
    if (s[i] == 'c' && i + 1 < s.size() && s[i + 1] == '{') {
      int depth = 0;
      std::size_t j = i + 1;
      for (; j < s.size(); ++j) {
        if (s[j] == '{') ++depth;
        if (s[j] == '}' && --depth == 0) break;
      }
      if (j >= s.size()) throw WordError("unterminated constant");
      w.constants.back() = g.mul(w.constants.back(), g.parse(s.substr(i + 2, j - i - 2)));
      i = j + 1;
    } else if (s[i] == 'x') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1 || j + 1 >= s.size() || s[j] != '^') throw WordError("malformed letter");
      int var = std::stoi(std::string(s.substr(i + 1, j - i - 1)));
      std::size_t k = j + 1;
      std::size_t e = k;
      if (e < s.size() && (s[e] == '-' || s[e] == '+')) ++e;
      while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
      int sign = std::stoi(std::string(s.substr(k, e - k)));
      if ((sign != 1 && sign != -1) || var < 1) throw WordError("malformed letter");
      w.letters.push_back({var, sign});
      w.constants.push_back(g.identity());
      i = e;
    } else if (s[i] == '1' && (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1])))) {
      ++i;
    } else {
      throw WordError("unexpected character in word: " + std::string(s.substr(i, 1)));
    }
  }
  return w;
}

}  // namespace mixid
