#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixid {

/// Permutation of {0..n-1} stored as its image list; acts on the right, so
/// (a*b)(i) = b(a(i)).
using Perm = std::vector<std::uint8_t>;

inline Perm perm_identity(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(i);
  return p;
}

/// Cycle notation with 0-based points, e.g. {{0,1,2}}.
inline Perm perm_from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  Perm p = perm_identity(n);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) p[c[i]] = static_cast<std::uint8_t>(c[(i + 1) % c.size()]);
  return p;
}

inline bool perm_is_even(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  int transpositions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

/// Permutation group given by generators (S_n, A_n or any subgroup).
class PermGroup {
 public:
  using element = Perm;

  PermGroup(int degree, std::vector<Perm> gens, std::string name)
      : n_(degree), gens_(std::move(gens)), name_(std::move(name)) {
    if (degree < 1 || degree > 255) throw std::invalid_argument("permutation degree out of range");
  }

  static PermGroup symmetric(int n) {
    std::vector<Perm> g;
    if (n >= 2) {
      std::vector<int> cyc(n);
      for (int i = 0; i < n; ++i) cyc[i] = i;
      g.push_back(perm_from_cycles(n, {{0, 1}}));
      g.push_back(perm_from_cycles(n, {cyc}));
    }
    return PermGroup(n, g, "S " + std::to_string(n));
  }
  static PermGroup alternating(int n) {
    std::vector<Perm> g;
    for (int i = 2; i < n; ++i) g.push_back(perm_from_cycles(n, {{0, 1, i}}));
    return PermGroup(n, g, "A " + std::to_string(n));
  }
  /// Dihedral group of order 2n acting on n points.
  static PermGroup dihedral(int n) {
    std::vector<int> cyc(n);
    for (int i = 0; i < n; ++i) cyc[i] = i;
    Perm refl = perm_identity(n);
    for (int i = 0; i < n; ++i) refl[i] = static_cast<std::uint8_t>((n - i) % n);
    return PermGroup(n, {perm_from_cycles(n, {cyc}), refl}, "D " + std::to_string(n));
  }
  /// Parses `S n`, `A n` or `D n`.
  static PermGroup from_spec(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string fam;
    int n = 0;
    if (!(is >> fam >> n)) throw std::invalid_argument("malformed permutation group spec");
    if (fam == "S") return symmetric(n);
    if (fam == "A") return alternating(n);
    if (fam == "D") return dihedral(n);
    throw std::invalid_argument("unknown permutation family: " + fam);
  }
  static bool is_perm_spec(std::string_view text) {
    return text.size() > 1 && (text[0] == 'S' || text[0] == 'A' || text[0] == 'D') && text[1] == ' ';
  }

  int degree() const { return n_; }
  const std::string& name() const { return name_; }
  const std::vector<Perm>& gens() const { return gens_; }

  element identity() const { return perm_identity(n_); }
  element mul(const element& a, const element& b) const {
    Perm r(n_);
    for (int i = 0; i < n_; ++i) r[i] = b[a[i]];
    return r;
  }
  element inv(const element& a) const {
    Perm r(n_);
    for (int i = 0; i < n_; ++i) r[a[i]] = static_cast<std::uint8_t>(i);
    return r;
  }
  bool is_identity(const element& a) const {
    for (int i = 0; i < n_; ++i)
      if (a[i] != i) return false;
    return true;
  }
  bool equal(const element& a, const element& b) const { return a == b; }
  bool is_central(const element& a) const {
    for (const auto& g : gens_)
      if (mul(a, g) != mul(g, a)) return false;
    return true;
  }
  element canonical(const element& a) const { return a; }
  bool less(const element& a, const element& b) const { return a < b; }
  std::size_t hash(const element& a) const {
    std::size_t h = 0;
    for (auto x : a) h = h * 257 + x;
    return h;
  }
  std::string serialize(const element& a) const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) os << (i ? "," : "") << int(a[i]);
    return os.str();
  }
  element parse(std::string_view s) const {
    Perm p;
    std::stringstream ss{std::string(s)};
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(static_cast<std::uint8_t>(std::stoi(tok)));
    if (static_cast<int>(p.size()) != n_) throw std::invalid_argument("permutation has wrong degree");
    std::vector<bool> hit(n_, false);
    for (auto x : p) {
      if (x >= n_ || hit[x]) throw std::invalid_argument("not a permutation");
      hit[x] = true;
    }
    return p;
  }

  /// All elements, sorted.
  std::vector<Perm> elements() const {
    std::set<Perm> seen{identity()};
    std::deque<Perm> queue{identity()};
    while (!queue.empty()) {
      Perm x = queue.front();
      queue.pop_front();
      for (const auto& g : gens_) {
        Perm y = mul(x, g);
        if (seen.insert(y).second) queue.push_back(y);
      }
    }
    return {seen.begin(), seen.end()};
  }
  std::uint64_t order() const { return elements().size(); }
  bool contains(const element& a) const {
    auto els = elements();
    return std::binary_search(els.begin(), els.end(), a);
  }

 private:
  int n_;
  std::vector<Perm> gens_;
  std::string name_;
};

/// Direct product A x B of two group models.
template <class A, class B>
class ProductGroup {
 public:
  using element = std::pair<typename A::element, typename B::element>;

  ProductGroup(A a, B b) : a_(std::move(a)), b_(std::move(b)) {}

  const A& first() const { return a_; }
  const B& second() const { return b_; }

  element identity() const { return {a_.identity(), b_.identity()}; }
  element mul(const element& x, const element& y) const { return {a_.mul(x.first, y.first), b_.mul(x.second, y.second)}; }
  element inv(const element& x) const { return {a_.inv(x.first), b_.inv(x.second)}; }
  bool is_identity(const element& x) const { return a_.is_identity(x.first) && b_.is_identity(x.second); }
  bool equal(const element& x, const element& y) const { return a_.equal(x.first, y.first) && b_.equal(x.second, y.second); }
  bool is_central(const element& x) const { return a_.is_central(x.first) && b_.is_central(x.second); }
  element canonical(const element& x) const { return {a_.canonical(x.first), b_.canonical(x.second)}; }
  bool less(const element& x, const element& y) const {
    if (!a_.equal(x.first, y.first)) return a_.less(x.first, y.first);
    return b_.less(x.second, y.second);
  }
  std::size_t hash(const element& x) const { return a_.hash(x.first) * 1000003u + b_.hash(x.second); }
  std::string serialize(const element& x) const { return a_.serialize(x.first) + "|" + b_.serialize(x.second); }
  element parse(std::string_view s) const {
    auto bar = s.find('|');
    if (bar == std::string_view::npos) throw std::invalid_argument("product element needs '|'");
    return {a_.parse(s.substr(0, bar)), b_.parse(s.substr(bar + 1))};
  }
  std::vector<element> elements() const {
    std::vector<element> out;
    for (const auto& x : a_.elements())
      for (const auto& y : b_.elements()) out.push_back({x, y});
    return out;
  }
  std::uint64_t order() const { return a_.order() * b_.order(); }

 private:
  A a_;
  B b_;
};

}  // namespace mixid
