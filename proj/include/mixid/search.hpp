#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixid/matgrp.hpp"
#include "mixid/words.hpp"

namespace mixid {

/// Shortest one-variable mixed identity search over a small group.
template <class E>
struct SearchResult {
  std::optional<Word<E>> identity;
  std::size_t max_len = 0;
  std::uint64_t words = 0;  // candidate words examined
  std::uint64_t mults = 0;  // group multiplications spent
  bool found() const { return identity.has_value(); }
  std::size_t length() const { return identity ? identity->length() : 0; }
};

namespace detail {

template <GroupModel G>
struct SearchState {
  const G& g;
  const std::vector<typename G::element>& elements;
  const std::vector<typename G::element>& constants;
  std::vector<typename G::element> inverses;
  std::uint64_t budget;
  std::uint64_t mults = 0;
  std::uint64_t words = 0;

  SearchState(const G& g_, const std::vector<typename G::element>& els, const std::vector<typename G::element>& cs,
              std::uint64_t b)
      : g(g_), elements(els), constants(cs), budget(b) {
    inverses.reserve(els.size());
    for (const auto& x : els) inverses.push_back(g.inv(x));
  }

  void spend(std::uint64_t k) {
    mults += k;
    if (mults > budget) throw BudgetExceeded("search budget of " + std::to_string(budget) + " multiplications exceeded");
  }

  // acc[x] * c * x^sign for every x
  std::vector<typename G::element> step(const std::vector<typename G::element>& acc, const typename G::element& c,
                                        int sign) {
    spend(2 * acc.size());
    std::vector<typename G::element> out;
    out.reserve(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out.push_back(g.mul(g.mul(acc[i], c), sign > 0 ? elements[i] : inverses[i]));
    return out;
  }

  bool all_equal(const std::vector<typename G::element>& v) const {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!g.equal(v[i], v[0])) return false;
    return true;
  }
};

}  // namespace detail

/// Normalized scan: c0 = 1, first exponent +1, reduced and cyclically reduced,
/// last constant fixed by w(1) = 1. Lengths are tried in increasing order.
template <GroupModel G>
SearchResult<typename G::element> search_shortest(const G& g, const std::vector<typename G::element>& elements,
                                                  const std::vector<typename G::element>& constants,
                                                  std::size_t max_len, std::uint64_t budget = 1'000'000'000ULL) {
  using E = typename G::element;
  detail::SearchState<G> st(g, elements, constants, budget);
  SearchResult<E> res;
  res.max_len = max_len;
  if (elements.empty()) return res;
  const E one = g.identity();

  for (std::size_t L = 1; L <= max_len && !res.identity; ++L) {
    std::vector<E> cs{one};
    std::vector<int> signs{1};
    std::function<bool(const std::vector<E>&)> dfs = [&](const std::vector<E>& acc) -> bool {
      if (signs.size() == L) {
        ++st.words;
        if (!st.all_equal(acc)) return false;
        E last = g.inv(acc[0]);
        if (signs.back() == -signs.front() && g.is_identity(last)) return false;
        Word<E> w;
        w.constants = cs;
        w.constants.push_back(last);
        for (int s : signs) w.letters.push_back({1, s});
        res.identity = w;
        return true;
      }
      for (const E& c : constants) {
        const bool trivial = g.is_identity(c);
        for (int s : {1, -1}) {
          if (trivial && s == -signs.back()) continue;
          cs.push_back(c);
          signs.push_back(s);
          bool hit = dfs(st.step(acc, c, s));
          if (hit) return true;
          cs.pop_back();
          signs.pop_back();
        }
      }
      return false;
    };
    dfs(elements);
  }
  res.words = st.words;
  res.mults = st.mults;
  return res;
}

/// Reference scan over every word c0 x^e1 c1 ... x^eL cL with no normalization.
template <GroupModel G>
SearchResult<typename G::element> search_shortest_unnormalized(const G& g,
                                                               const std::vector<typename G::element>& elements,
                                                               const std::vector<typename G::element>& constants,
                                                               std::size_t max_len,
                                                               std::uint64_t budget = 1'000'000'000ULL) {
  using E = typename G::element;
  detail::SearchState<G> st(g, elements, constants, budget);
  SearchResult<E> res;
  res.max_len = max_len;
  if (elements.empty()) return res;

  for (std::size_t L = 1; L <= max_len && !res.identity; ++L) {
    std::vector<E> cs;
    std::vector<int> signs;
    std::function<bool(const std::vector<E>&)> dfs = [&](const std::vector<E>& acc) -> bool {
      if (signs.size() == L) {
        for (const E& c : constants) {
          ++st.words;
          st.spend(acc.size());
          bool ok = true;
          for (const E& a : acc)
            if (!g.is_identity(g.mul(a, c))) {
              ok = false;
              break;
            }
          if (!ok) continue;
          Word<E> w;
          w.constants = cs;
          w.constants.push_back(c);
          for (int s : signs) w.letters.push_back({1, s});
          if (!is_reduced(g, w)) continue;
          res.identity = w;
          return true;
        }
        return false;
      }
      for (const E& c : constants)
        for (int s : {1, -1}) {
          cs.push_back(c);
          signs.push_back(s);
          if (dfs(st.step(acc, c, s))) return true;
          cs.pop_back();
          signs.pop_back();
        }
      return false;
    };
    dfs(std::vector<E>(elements.size(), g.identity()));
  }
  res.words = st.words;
  res.mults = st.mults;
  return res;
}

}  // namespace mixid
