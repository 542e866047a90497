#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixid/matgrp.hpp"
#include "mixid/words.hpp"

namespace mixid {

/// Dense polynomial over a finite field, lowest degree first, no trailing zeros.
class Poly {
 public:
  explicit Poly(const FiniteField& F) : F_(&F) {}
  Poly(const FiniteField& F, std::vector<FFElem> c) : F_(&F), c_(std::move(c)) { trim(); }
  static Poly constant(const FiniteField& F, FFElem a) { return Poly(F, {a}); }
  static Poly monomial(const FiniteField& F, FFElem a, std::size_t k) {
    std::vector<FFElem> c(k + 1, F.zero());
    c[k] = a;
    return Poly(F, c);
  }

  const FiniteField& field() const { return *F_; }
  const std::vector<FFElem>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long long degree() const { return static_cast<long long>(c_.size()) - 1; }
  FFElem coeff(std::size_t k) const { return k < c_.size() ? c_[k] : F_->zero(); }

  FFElem operator()(FFElem x) const {
    FFElem r = F_->zero();
    for (std::size_t k = c_.size(); k-- > 0;) r = F_->add(F_->mul(r, x), c_[k]);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const FiniteField& F = *a.F_;
    std::vector<FFElem> c(std::max(a.c_.size(), b.c_.size()), F.zero());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = F.add(a.coeff(k), b.coeff(k));
    return Poly(F, c);
  }
  friend Poly operator-(const Poly& a) {
    std::vector<FFElem> c = a.c_;
    for (auto& x : c) x = a.F_->neg(x);
    return Poly(*a.F_, c);
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    const FiniteField& F = *a.F_;
    if (a.is_zero() || b.is_zero()) return Poly(F);
    std::vector<FFElem> c(a.c_.size() + b.c_.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!a.c_[i].v) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = F.add(c[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return Poly(F, c);
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (!c_[k].v) continue;
      if (!s.empty()) s += " + ";
      s += "(" + F_->to_string(c_[k]) + ")";
      if (k) s += "t^" + std::to_string(k);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && !c_.back().v) c_.pop_back();
  }
  const FiniteField* F_;
  std::vector<FFElem> c_;
};

/// 2x2 matrix over F_q[t], entries row-major.
struct PolyMat2 {
  std::array<Poly, 4> e;

  const FiniteField& field() const { return e[0].field(); }
  const Poly& operator()(int i, int j) const { return e[2 * i + j]; }

  static PolyMat2 from(const Mat& m) {
    const FiniteField& F = m.field();
    if (m.dim() != 2) throw std::invalid_argument("PolyMat2 needs a 2x2 matrix");
    return {{Poly::constant(F, m(0, 0)), Poly::constant(F, m(0, 1)), Poly::constant(F, m(1, 0)),
             Poly::constant(F, m(1, 1))}};
  }
  static PolyMat2 identity(const FiniteField& F) { return from(Mat::identity(F, 2)); }

  friend PolyMat2 operator*(const PolyMat2& a, const PolyMat2& b) {
    return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3], a.e[2] * b.e[0] + a.e[3] * b.e[2],
             a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
  }
  friend bool operator==(const PolyMat2& a, const PolyMat2& b) { return a.e == b.e; }

  Poly det() const { return e[0] * e[3] - e[1] * e[2]; }
  /// Adjugate; the inverse when det = 1.
  PolyMat2 adjugate() const { return {{e[3], -e[1], -e[2], e[0]}}; }
  PolyMat2 negated() const { return {{-e[0], -e[1], -e[2], -e[3]}}; }
  long long max_degree() const {
    long long d = -1;
    for (const auto& p : e) d = std::max(d, p.degree());
    return d;
  }
  Mat at(FFElem t) const {
    Mat m(field(), 2);
    for (int i = 0; i < 4; ++i) m.set(i / 2, i % 2, e[i](t));
    return m;
  }
  /// Equal to +1 or -1 as a constant matrix.
  bool is_plus_minus_one() const {
    const FiniteField& F = field();
    if (max_degree() > 0 || !e[1].is_zero() || !e[2].is_zero()) return false;
    FFElem a = e[0].coeff(0);
    return a == e[3].coeff(0) && (a == F.one() || a == F.neg(F.one()));
  }
};

inline Poly poly_t(const FiniteField& F) { return Poly::monomial(F, F.one(), 1); }

/// u(f) = [[1, f], [0, 1]].
inline PolyMat2 upoly(const Poly& f) {
  const FiniteField& F = f.field();
  return {{Poly::constant(F, F.one()), f, Poly(F), Poly::constant(F, F.one())}};
}

/// r = [[0, 1], [-1, 0]].
inline PolyMat2 rpoly(const FiniteField& F) {
  return PolyMat2::from(Mat::from_ints(F, 2, {0, 1, -1, 0}));
}

/// g = u(t^2) r u(t) r u(t).
inline PolyMat2 embedding_generator(const FiniteField& F) {
  const Poly t = poly_t(F);
  const PolyMat2 r = rpoly(F);
  return upoly(t * t) * r * upoly(t) * r * upoly(t);
}

/// Lexicographically least lift to SL_2(q) of a PSL_2(q) element.
inline Mat lift_to_sl2(const Mat& a) {
  const FiniteField& F = a.field();
  if (a.dim() != 2) throw std::invalid_argument("constant must be 2x2");
  const FFElem d = det(a);
  if (!d.v) throw std::invalid_argument("singular constant");
  std::optional<Mat> best;
  for (FFElem s : F.elements()) {
    if (!s.v || F.mul(F.mul(s, s), d) != F.one()) continue;
    Mat m = scale(a, s);
    if (!best || canonical_less(m, *best)) best = m;
  }
  if (!best) throw std::invalid_argument("constant lies outside PSL_2(q)");
  return *best;
}

struct EmbeddedWord {
  PolyMat2 W;
  std::size_t length = 0;
  long long max_degree = 0;
};

/// Image of a one-variable word under x -> g, constants lifted to SL_2(q).
inline EmbeddedWord embed_word(const Word<SemilinearElement>& w) {
  if (w.num_vars() > 1) throw WordError("embed_word needs a one-variable word");
  if (w.constants.empty()) throw WordError("empty word");
  const FiniteField& F = w.constants[0].mat.field();
  const PolyMat2 g = embedding_generator(F), gi = g.adjugate();
  auto lift = [](const SemilinearElement& c) {
    if (c.frob) throw std::invalid_argument("constant has a Frobenius part");
    return PolyMat2::from(lift_to_sl2(c.mat));
  };
  PolyMat2 W = lift(w.constants[0]);
  for (std::size_t j = 0; j < w.letters.size(); ++j) {
    W = W * (w.letters[j].sign > 0 ? g : gi);
    W = W * lift(w.constants[j + 1]);
  }
  return {W, w.letters.size(), W.max_degree()};
}

struct SpecializationVerdict {
  bool identity = false;
  /// 1: decided by the specializations alone; 2: every specialization was
  /// trivial and the verdict was confirmed by evaluating on the whole group.
  int stage = 1;
  std::optional<FFElem> witness_alpha;
  std::optional<Mat> witness;  // x with w(x) != 1
  std::size_t length = 0;
  long long max_degree = 0;
  bool eight_l_ge_q = false;
  /// All specializations trivial with 8l < q forces W = +-1 identically.
  bool forced_trivial = false;
};

/// Evaluates W(alpha) for every alpha; a nontrivial value is a witness
/// (re-checked by evaluating w at g(alpha)). When every value is +-1 the
/// verdict is settled on the whole group unless `confirm` is false.
inline SpecializationVerdict specialization_identity_test(const Word<SemilinearElement>& w, bool confirm = true) {
  const FiniteField& F = w.constants[0].mat.field();
  const GroupSpec spec{Family::PSL, 2, F.q(), 0};
  const MatrixGroup G(spec);
  const auto red = reduce(G, w);
  SpecializationVerdict v;
  const EmbeddedWord ew = embed_word(red);
  v.length = red.letters.size();
  v.max_degree = ew.max_degree;
  v.eight_l_ge_q = 8 * v.length >= F.q();
  const PolyMat2 g = embedding_generator(F);
  for (FFElem a : F.elements()) {
    const Mat Wa = ew.W.at(a);
    if (scalar_value(Wa)) continue;
    const Mat x = g.at(a);
    if (G.is_identity(evaluate1(G, red, linear(x)))) throw std::logic_error("specialization disagrees with evaluation");
    v.witness_alpha = a;
    v.witness = x;
    return v;
  }
  v.forced_trivial = !v.eight_l_ge_q;
  if (!confirm) {
    v.identity = true;
    return v;
  }
  v.stage = 2;
  for (const auto& x : enumerate(spec))
    if (!G.is_identity(evaluate1(G, red, x))) {
      v.witness = x.mat;
      return v;
    }
  v.identity = true;
  return v;
}

/// g^n = u(t^2) (r u(t) r u(t + t^2))^{n-1} r u(t) r u(t), multiplied out.
inline bool gpower_reduced_form(int n, const FiniteField& F) {
  if (n < 1) throw std::invalid_argument("power must be positive");
  const Poly t = poly_t(F);
  const PolyMat2 r = rpoly(F), g = embedding_generator(F);
  PolyMat2 lhs = PolyMat2::identity(F);
  for (int i = 0; i < n; ++i) lhs = lhs * g;
  PolyMat2 rhs = upoly(t * t);
  const PolyMat2 block = r * upoly(t) * r * upoly(t + t * t);
  for (int i = 1; i < n; ++i) rhs = rhs * block;
  rhs = rhs * r * upoly(t) * r * upoly(t);
  return lhs == rhs;
}

struct FreenessReport {
  std::uint64_t trials = 0;
  std::uint64_t nontrivial = 0;
  std::uint64_t borel_blocks = 0;  // inner h_j upper triangular (contractions needed)
};

/// Random reduced products g^{n0} h0 ... g^{nl} hl with n(j) != 0 for j >= 1
/// and h_j != +-1 for j < l; each must differ from +-1 over F_q[t].
inline FreenessReport freeness_spot_check(std::uint32_t q, std::uint64_t trials, int max_blocks, std::uint64_t seed) {
  const GroupSpec spec{Family::SL, 2, q, 0};
  const FiniteField& F = spec.field();
  const auto els = enumerate(spec);
  const PolyMat2 g = embedding_generator(F), gi = g.adjugate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
  std::uniform_int_distribution<int> blocks(0, std::max(0, max_blocks - 1)), expo(1, 3), coin(0, 1);
  FreenessReport rep;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const int l = blocks(rng);
    PolyMat2 W = PolyMat2::identity(F);
    for (int j = 0; j <= l; ++j) {
      int n = expo(rng) * (coin(rng) ? 1 : -1);
      if (j == 0 && l > 0 && coin(rng)) n = 0;
      for (int k = 0; k < std::abs(n); ++k) W = W * (n > 0 ? g : gi);
      Mat h = els[pick(rng)].mat;
      if (j < l) {
        while (scalar_value(h)) h = els[pick(rng)].mat;
        if (!h(1, 0).v) ++rep.borel_blocks;
      }
      W = W * PolyMat2::from(h);
    }
    ++rep.trials;
    if (!W.is_plus_minus_one()) ++rep.nontrivial;
  }
  return rep;
}

struct CaseSplitReport {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
};

/// The two rewriting cases for an upper triangular h = [[a, b], [0, 1/a]]
/// between r u(x) and u(y) r, x in {t, -t^2}, y in {-t, t^2}.
inline CaseSplitReport case_split_check(const FiniteField& F) {
  const Poly t = poly_t(F);
  const PolyMat2 r = rpoly(F);
  const std::vector<Poly> xs{t, -(t * t)}, ys{-t, t * t};
  CaseSplitReport rep;
  for (FFElem a : F.elements()) {
    if (!a.v) continue;
    for (FFElem b : F.elements()) {
      Mat hm(F, 2);
      hm.set(0, 0, a);
      hm.set(0, 1, b);
      hm.set(1, 1, F.inv(a));
      const PolyMat2 h = PolyMat2::from(hm);
      const bool pm1 = F.mul(a, a) == F.one();
      if (pm1 && !b.v) continue;
      for (const Poly& x : xs)
        for (const Poly& y : ys) {
          ++rep.checked;
          const PolyMat2 lhs = r * upoly(x) * h * upoly(y) * r;
          bool ok;
          if (!pm1) {
            const FFElem ai = F.inv(a);
            const Poly f = Poly::constant(F, F.mul(ai, b)) + Poly::constant(F, F.mul(ai, ai)) * x + y;
            Mat k(F, 2);
            k.set(0, 1, ai);
            k.set(1, 0, F.neg(a));
            ok = f.degree() > 0 && lhs == PolyMat2::from(k) * upoly(f) * r;
          } else {
            // a = +-1: +-r u(x + y +- b) r.
            const Poly f = x + y + Poly::constant(F, F.mul(a, b));
            PolyMat2 rhs = r * upoly(f) * r;
            if (a != F.one()) rhs = rhs.negated();
            ok = lhs == rhs;
          }
          rep.failures += !ok;
        }
    }
  }
  return rep;
}

}  // namespace mixid
