#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mixid/matgrp.hpp"
#include "mixid/perm.hpp"
#include "mixid/words.hpp"

namespace mixid {

template <class E>
struct IdentityRecipe {
  std::string name;
  std::string spec;           // group the identity is verified on
  std::string constant_spec;  // group the constants live in
  Word<E> word;
  std::uint64_t claimed_bound = 0;
  std::string bound_formula;
  std::string notes;
};

// ---------------------------------------------------------------------------
// Verification

enum class VerifyMode { exhaustive, sampled };

template <class E>
struct IdentityVerdict {
  bool identity = false;
  bool ground_truth = false;  // exhaustive verdicts only
  std::optional<std::vector<E>> witness;
  std::uint64_t checked = 0;
};

inline unsigned default_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return std::clamp(h, 1u, 8u);
}

/// Evaluates w on every tuple of `elements` (tuples in lexicographic index
/// order, last variable fastest). The reported witness is the first
/// counterexample in that order regardless of the thread count.
template <GroupModel G>
IdentityVerdict<typename G::element> verify_exhaustive(const G& g, const WordOf<G>& w,
                                                       const std::vector<typename G::element>& elements,
                                                       std::uint64_t budget = 10'000'000,
                                                       unsigned threads = 1) {
  using E = typename G::element;
  const int r = std::max(1, w.num_vars());
  long double total_ld = 1;
  for (int i = 0; i < r; ++i) total_ld *= static_cast<long double>(elements.size());
  if (total_ld > static_cast<long double>(budget)) throw BudgetExceeded("tuple count exceeds the evaluation budget");
  const std::uint64_t total = static_cast<std::uint64_t>(total_ld);
  std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};
  auto decode = [&](std::uint64_t idx) {
    std::vector<E> t(r);
    for (int i = r - 1; i >= 0; --i) {
      t[i] = elements[idx % elements.size()];
      idx /= elements.size();
    }
    return t;
  };
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      if (idx >= first_bad.load(std::memory_order_relaxed)) return;
      if (!g.is_identity(evaluate(g, w, decode(idx)))) {
        std::uint64_t cur = first_bad.load();
        while (idx < cur && !first_bad.compare_exchange_weak(cur, idx)) {
        }
        return;
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::uint64_t>(1, total / 64))));
  if (threads == 1) {
    work(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(work, std::min(total, t * chunk), std::min(total, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  IdentityVerdict<E> v;
  v.ground_truth = true;
  const std::uint64_t bad = first_bad.load();
  v.identity = bad == std::numeric_limits<std::uint64_t>::max();
  v.checked = v.identity ? total : bad + 1;
  if (!v.identity) v.witness = decode(bad);
  return v;
}

/// Random tuples; a pass is inconclusive.
template <GroupModel G>
IdentityVerdict<typename G::element> verify_sampled(
    const G& g, const WordOf<G>& w, const std::function<typename G::element(std::mt19937_64&)>& draw,
    std::uint64_t count, std::uint64_t seed) {
  using E = typename G::element;
  std::mt19937_64 rng(seed);
  const int r = std::max(1, w.num_vars());
  IdentityVerdict<E> v;
  v.identity = true;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<E> t;
    for (int k = 0; k < r; ++k) t.push_back(draw(rng));
    ++v.checked;
    if (!g.is_identity(evaluate(g, w, t))) {
      v.identity = false;
      v.witness = t;
      return v;
    }
  }
  return v;
}

/// Exhaustive or sampled verification; sampled draws from `elements`.
template <GroupModel G>
IdentityVerdict<typename G::element> is_mixed_identity(const G& g, const WordOf<G>& w,
                                                       const std::vector<typename G::element>& elements,
                                                       VerifyMode mode, std::uint64_t seed = 1,
                                                       std::uint64_t count = 10'000,
                                                       std::uint64_t budget = 10'000'000) {
  if (mode == VerifyMode::exhaustive) return verify_exhaustive(g, w, elements, budget, default_threads());
  auto draw = [&](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, elements.size() - 1);
    return elements[d(rng)];
  };
  return verify_sampled<G>(g, w, draw, count, seed);
}

// ---------------------------------------------------------------------------
// Generic constructions

template <GroupModel G>
IdentityRecipe<typename G::element> center_identity(const G& g, const typename G::element& c, std::string spec) {
  if (g.is_identity(c)) throw WordError("central constant must be nontrivial");
  if (!g.is_central(c)) throw WordError("constant is not central");
  auto X = letter_word(g);
  IdentityRecipe<typename G::element> r;
  r.name = "center";
  r.spec = r.constant_spec = std::move(spec);
  r.word = commutator(g, X, constant_word(g, c));
  r.claimed_bound = 2;
  r.bound_formula = "2";
  return r;
}

/// [a^x, b] on A x B with a in A x 1 and b in 1 x B.
template <class A, class B>
IdentityRecipe<typename ProductGroup<A, B>::element> product_identity(
    const ProductGroup<A, B>& g, const typename ProductGroup<A, B>::element& a,
    const typename ProductGroup<A, B>::element& b, std::string spec) {
  if (!g.second().is_identity(a.second) || g.first().is_identity(a.first))
    throw WordError("a must be a nontrivial element of the first factor");
  if (!g.first().is_identity(b.first) || g.second().is_identity(b.second))
    throw WordError("b must be a nontrivial element of the second factor");
  auto X = letter_word(g);
  IdentityRecipe<typename ProductGroup<A, B>::element> r;
  r.name = "product";
  r.spec = r.constant_spec = std::move(spec);
  r.word = commutator(g, conjugate(g, constant_word(g, a), X), constant_word(g, b));
  r.claimed_bound = 4;
  r.bound_formula = "4";
  return r;
}

/// v = w(x^-1 n x): an identity for the ambient group when w is one for the
/// normal subgroup containing n.
template <GroupModel G>
IdentityRecipe<typename G::element> normal_subgroup_lift(const G& g, const IdentityRecipe<typename G::element>& inner,
                                                         const typename G::element& n, std::string spec) {
  const auto& w = inner.word;
  if (g.is_identity(n)) throw WordError("lift needs a nontrivial element of the normal subgroup");
  if (w.num_vars() > 1) throw WordError("lift needs a one-variable word");
  for (std::size_t j = 1; j < w.letters.size(); ++j)
    if (g.is_identity(w.constants[j])) throw WordError("lift needs nontrivial intermediate constants");
  auto X = letter_word(g);
  IdentityRecipe<typename G::element> r;
  r.name = inner.name + "-lift";
  r.spec = std::move(spec);
  r.constant_spec = r.spec;
  r.word = substitute(g, w, {conjugate(g, constant_word(g, n), X)});
  if (r.word.length() != 2 * w.length()) throw WordError("lift did not double the length");
  r.claimed_bound = 2 * inner.claimed_bound;
  r.bound_formula = "2*(" + inner.bound_formula + ")";
  return r;
}

/// [x, s]^30 for the 3-cycle s = (0 1 2) in A_n.
inline IdentityRecipe<Perm> alternating_identity(int n) {
  if (n < 3) throw WordError("alternating identity needs n >= 3");
  PermGroup g = PermGroup::alternating(n);
  auto X = letter_word(g);
  auto S = constant_word(g, perm_from_cycles(n, {{0, 1, 2}}));
  IdentityRecipe<Perm> r;
  r.name = "alternating";
  r.spec = r.constant_spec = g.name();
  r.word = power(g, commutator(g, X, S), 30);
  r.claimed_bound = 60;
  r.bound_formula = "60";
  return r;
}

/// v(x, y) = [[[x, y^p], y^-(Q-1)], y^(Q+1)] applied to words x, y.
template <GroupModel G>
WordOf<G> sl2_law_apply(const G& g, const WordOf<G>& x, const WordOf<G>& y, std::uint64_t p, std::uint64_t Q) {
  auto a = commutator(g, x, power(g, y, static_cast<long long>(p)));
  auto b = commutator(g, a, power(g, y, -static_cast<long long>(Q - 1)));
  return commutator(g, b, power(g, y, static_cast<long long>(Q + 1)));
}

// ---------------------------------------------------------------------------
// Matrix-group constructions

namespace detail {

inline std::uint64_t ipow64(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) r *= b;
  return r;
}

inline std::uint64_t lcm64(std::uint64_t a, std::uint64_t b) { return a / gcd(a, b) * b; }

/// Words built from transvections k1, k2 sharing the image line u. For every
/// x, <k1, k2, k1^x, k2^x> stabilises U = <u, u.x>, acts trivially on V/U and
/// as SL(U) on U, so a law of SL_2(Q) lands in an abelian kernel.
///
/// With k2: A = k1 k2^x, B = k2 k1^x generate a free group in C * <x>, and
/// w = [v(A, B), v(B, A)].
/// Without k2 (a single involution, p = 2): <k1, k1^x> is dihedral in C * <x>
/// and w = (k1 k1^x)^M with M = p * exponent(SL_2(Q)).
inline Word<SemilinearElement> transvection_law_word(const MatrixGroup& g, const Mat& k1,
                                                     const std::optional<Mat>& k2, std::uint64_t p,
                                                     std::uint64_t Q) {
  auto X = letter_word(g);
  auto K1 = constant_word(g, linear(k1));
  Word<SemilinearElement> w;
  if (k2) {
    auto K2 = constant_word(g, linear(*k2));
    auto A = concat(g, K1, conjugate(g, K2, X));
    auto B = concat(g, K2, conjugate(g, K1, X));
    w = commutator(g, sl2_law_apply(g, A, B, p, Q), sl2_law_apply(g, B, A, p, Q));
  } else {
    std::uint64_t e = lcm64(lcm64(p == 2 ? 2 : 2 * p, Q - 1), Q + 1);
    w = power(g, concat(g, K1, conjugate(g, K1, X)), static_cast<long long>(p * e));
  }
  if (w.length() == 0) throw WordError("law word collapsed to a constant");
  return w;
}

}  // namespace detail

/// The two-variable law of SL_2(q).
inline IdentityRecipe<SemilinearElement> sl2_law(std::uint32_t q) {
  GroupSpec spec{Family::SL, 2, q, 0};
  MatrixGroup g(spec);
  const auto p = g.field().p();
  IdentityRecipe<SemilinearElement> r;
  r.name = "sl2-law";
  r.spec = r.constant_spec = spec.to_string();
  r.word = sl2_law_apply(g, letter_word(g, 1), letter_word(g, 2), p, q);
  r.claimed_bound = 8ull * p + 6ull * q + 6;
  r.bound_formula = "8p + 6q + 6";
  return r;
}

/// Identity for SL_n(q) (hence PSL_n(q)) from the transvection k = 1 + e_{2,1}.
inline IdentityRecipe<SemilinearElement> psl_identity(int n, std::uint32_t q) {
  if (n < 2) throw WordError("psl identity needs n >= 2");
  GroupSpec spec{Family::SL, n, q, 0};
  MatrixGroup g(spec);
  const FiniteField& F = g.field();
  Mat k1 = Mat::identity(F, n);
  k1.set(1, 0, F.one());
  std::optional<Mat> k2;
  if (n >= 3) {
    k2 = Mat::identity(F, n);
    k2->set(2, 0, F.one());
  } else if (q > 2) {
    k2 = Mat::identity(F, n);
    k2->set(1, 0, F.primitive());
  }
  IdentityRecipe<SemilinearElement> r;
  r.name = "psl";
  r.spec = r.constant_spec = spec.to_string();
  r.word = detail::transvection_law_word(g, k1, k2, F.p(), q);
  r.claimed_bound = 64ull * F.p() + 48ull * q + 48;
  r.bound_formula = "64p + 48q + 48";
  r.notes = k2 ? "verified on SL; descends to PSL" : "order word; verified on SL; descends to PSL";
  return r;
}

/// [[[c, P^p], P^(r-1)], P^(r+1)] with P = x x^F ... x^(F^(e/f-1)), r = p^f.
inline IdentityRecipe<SemilinearElement> psl2_frobenius_identity(std::uint32_t q, int f) {
  const FiniteField& F = ff_of_order(q);
  if (f <= 0 || F.e() % static_cast<std::uint32_t>(f) != 0) throw WordError("f must divide e");
  if (static_cast<std::uint32_t>(f) >= F.e()) throw WordError("f must be smaller than e");
  GroupSpec cspec{Family::SL, 2, q, f};
  MatrixGroup g(cspec);
  const std::uint64_t p = F.p(), rr = detail::ipow64(p, f), ef = F.e() / f;
  auto els = enumerate(GroupSpec{Family::SL, 2, q, 0});
  std::optional<SemilinearElement> c;
  for (const auto& x : els)
    if (!g.is_central(x)) {
      c = x;
      break;
    }
  auto X = letter_word(g);
  auto Phi = constant_word(g, frobenius_element(F, 2, f));
  auto P = power(g, concat(g, X, Phi), static_cast<long long>(ef));
  auto C = constant_word(g, *c);
  auto w1 = commutator(g, C, power(g, X, static_cast<long long>(p)));
  auto w2 = commutator(g, w1, power(g, X, static_cast<long long>(rr - 1)));
  auto w3 = commutator(g, w2, power(g, X, static_cast<long long>(rr + 1)));
  IdentityRecipe<SemilinearElement> r;
  r.name = "psl2-frobenius";
  r.spec = GroupSpec{Family::SL, 2, q, 0}.to_string();
  r.constant_spec = cspec.to_string();
  r.word = substitute(g, w3, {P});
  r.claimed_bound = 14 * ef * rr;
  r.bound_formula = "14*(e/f)*p^f";
  return r;
}

inline Mat sp_g0(const FiniteField& F, int m) {
  const int n = 2 * m;
  Mat g0 = Mat::identity(F, n);
  for (int base : {0, m}) {
    g0.set(base, base, F.zero());
    g0.set(base + 1, base + 1, F.zero());
    g0.set(base, base + 1, F.one());
    g0.set(base + 1, base, F.one());
  }
  return g0;
}

/// [g0^x k g0^x, k] on Sp_{2m}(q), k = 1 + e_{1,m+1}.
inline IdentityRecipe<SemilinearElement> sp_identity(int m, std::uint32_t q) {
  if (m < 2) throw WordError("symplectic identity needs m >= 2");
  GroupSpec spec{Family::Sp, 2 * m, q, 0};
  MatrixGroup g(spec);
  const FiniteField& F = g.field();
  Mat k = Mat::identity(F, 2 * m);
  k.set(0, m, F.one());
  auto X = letter_word(g);
  auto G0x = conjugate(g, constant_word(g, linear(sp_g0(F, m))), X);
  auto K = constant_word(g, linear(k));
  IdentityRecipe<SemilinearElement> r;
  r.name = "sp";
  r.spec = r.constant_spec = spec.to_string();
  r.word = commutator(g, concat(g, concat(g, G0x, K), G0x), K);
  r.claimed_bound = 8;
  r.bound_formula = "8";
  r.notes = "descends to PSp";
  return r;
}

inline Mat so_g0(const FiniteField& F, int m) {
  const int N = 2 * m - 1;
  Mat g0 = Mat::scalar(F, N, F.neg(F.one()));
  g0.set(m - 1, m - 1, F.one());
  return g0;
}

/// h = e_{1,N-1} - e_{2,N} (1-based), the nilpotent part of the Eichler element.
inline Mat so_h(const FiniteField& F, int N) {
  Mat h(F, N);
  h.set(0, N - 2, F.one());
  h.set(1, N - 1, F.neg(F.one()));
  return h;
}

/// The second Eichler parameter: least element of GF(q)^* other than 1.
inline FFElem so_mu(const FiniteField& F) {
  for (FFElem a : F.elements())
    if (a.v && a != F.one()) return a;
  throw WordError("field too small");
}

/// [r(1,x), r(mu,x)], r(l,x) = g0^x k(l) g0^x k(-l), on SO_{2m-1}(q).
inline IdentityRecipe<SemilinearElement> so_odd_identity(int m, std::uint32_t q) {
  if (m < 3) throw WordError("orthogonal identity needs m >= 3");
  if (q % 2 == 0) throw WordError("orthogonal identity needs odd q");
  const int N = 2 * m - 1;
  GroupSpec spec{Family::SO_odd, N, q, 0};
  MatrixGroup g(spec);
  const FiniteField& F = g.field();
  auto X = letter_word(g);
  auto G0x = conjugate(g, constant_word(g, linear(so_g0(F, m))), X);
  auto rword = [&](FFElem l) {
    auto a = concat(g, G0x, constant_word(g, linear(so_eichler_k(F, N, l))));
    a = concat(g, a, G0x);
    return concat(g, a, constant_word(g, linear(so_eichler_k(F, N, F.neg(l)))));
  };
  IdentityRecipe<SemilinearElement> r;
  r.name = "so";
  r.spec = r.constant_spec = spec.to_string();
  r.word = commutator(g, rword(F.one()), rword(so_mu(F)));
  r.claimed_bound = 16;
  r.bound_formula = "16";
  const bool omega = (m % 2 == 1) || (q % 4 == 1);
  r.notes = omega ? "descends to the spinor-norm kernel" : "PSO only";
  return r;
}

/// h g0^x h g0^x h, which vanishes for every x in SO.
inline Mat so_kernel_product(const Mat& x, int m) {
  const FiniteField& F = x.field();
  const int N = 2 * m - 1;
  Mat h = so_h(F, N);
  Mat g0x = inverse(x) * so_g0(F, m) * x;
  return h * g0x * h * g0x * h;
}

/// For odd m: g0 = x y with y = z^-1 x z, all in SO_{2m-1}(q).
struct G0Factorization {
  Mat x, y, z;
};

inline G0Factorization so_g0_conjugate_factors(const FiniteField& F, int m) {
  if (m % 2 == 0) throw WordError("conjugate factorization needs odd m");
  const int N = 2 * m - 1, half = (m - 1) / 2;
  const FFElem minus = F.neg(F.one());
  Mat x = Mat::identity(F, N), y = Mat::identity(F, N), z(F, N);
  for (int i = 0; i < half; ++i) {
    x.set(i, i, minus);
    x.set(N - 1 - i, N - 1 - i, minus);
    y.set(half + i, half + i, minus);
    y.set(N - 1 - half - i, N - 1 - half - i, minus);
  }
  // z swaps the two halves of the hyperbolic pairs.
  for (int i = 0; i < N; ++i) {
    int j = i;
    if (i < half) j = i + half;
    else if (i < 2 * half) j = i - half;
    else if (i > N - 1 - half) j = i - half;
    else if (i > N - 1 - 2 * half) j = i + half;
    z.set(i, j, F.one());
  }
  return {x, y, z};
}

/// For q = 1 mod 4: g0 = x^2 with x = diag(a 1_{m-1}, 1, -a 1_{m-1}), a^2 = -1.
inline Mat so_g0_square_root(const FiniteField& F, int m) {
  const int N = 2 * m - 1;
  std::optional<FFElem> alpha;
  for (FFElem a : F.elements())
    if (F.mul(a, a) == F.neg(F.one())) {
      alpha = a;
      break;
    }
  if (!alpha) throw WordError("-1 is not a square");
  Mat x = Mat::identity(F, N);
  for (int i = 0; i < m - 1; ++i) {
    x.set(i, i, *alpha);
    x.set(N - 1 - i, N - 1 - i, F.neg(*alpha));
  }
  return x;
}

/// Least isotropic point of the standard hermitian form.
inline Vec least_isotropic(const Form& f, int n) {
  for (const Vec& v : projective_points(f.field(), n))
    if (!f(v, v).v) return v;
  throw WordError("no isotropic vector");
}

/// Transvection-law identity on SU_n(q) with unitary transvections on one
/// isotropic line; the law uses field size q^2.
inline IdentityRecipe<SemilinearElement> su_identity(int n, std::uint32_t q) {
  if (n < 2) throw WordError("unitary identity needs n >= 2");
  GroupSpec spec{Family::SU, n, q, 0};
  MatrixGroup g(spec);
  const FiniteField& F = g.field();
  Form f = standard_form(spec);
  const Vec v = least_isotropic(f, n);
  std::vector<FFElem> lambdas;
  for (FFElem a : F.elements())
    if (a.v && !F.trace_half(a).v) lambdas.push_back(a);
  std::optional<Mat> k2;
  if (lambdas.size() > 1) k2 = unitary_transvection(f, v, lambdas[1]);
  const std::uint64_t Q = static_cast<std::uint64_t>(q) * q;
  IdentityRecipe<SemilinearElement> r;
  r.name = "su";
  r.spec = r.constant_spec = spec.to_string();
  r.word = detail::transvection_law_word(g, unitary_transvection(f, v, lambdas[0]), k2, F.p(), Q);
  r.claimed_bound = 64ull * F.p() + 48ull * Q + 48;
  r.bound_formula = "64p + 48q^2 + 48 <= 128q^2";
  r.notes = k2 ? "descends to PSU" : "order word; descends to PSU";
  return r;
}

}  // namespace mixid
