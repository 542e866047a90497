#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "mixid/matgrp.hpp"
#include "mixid/words.hpp"

namespace mixid {

/// Rank-one operator h = phi^T v (x -> phi(x) v) with h^2 = 0.
struct Probe {
  Vec v;    // image line
  Vec phi;  // kernel is ker(phi)
  Mat h;
  /// Semilinear words: per-letter Frobenius exponents m(j) of the twisted
  /// letters and the global shift i with x = F^{-i}(k).
  std::vector<int> frob_exponents;
  int shift = 0;
};

namespace failure {
inline constexpr const char* no_letters = "no variable letters";
inline constexpr const char* central_constant = "central intermediate constant";
inline constexpr const char* involution_critical = "involution critical constant";
inline constexpr const char* substitution = "substitution failed";
inline constexpr const char* no_probe = "all probes die";
inline constexpr const char* leading_zero = "leading coefficient vanishes";
inline constexpr const char* dependent = "no coefficient independent of the leading one";
inline constexpr const char* degree_budget = "degree budget exceeded";
inline constexpr const char* no_separation = "no separating parameters";
inline constexpr const char* unsupported = "unsupported family";
}  // namespace failure

enum class Outcome { nonconstant, identity_candidate };

struct Certificate {
  Outcome outcome = Outcome::identity_candidate;
  std::string reason;                // first fatal failure; empty on success
  std::vector<std::string> reasons;  // every failed hypothesis, in the order checked
  std::string method;                // "polynomial" or "scan"
  std::optional<Probe> probe;
  std::optional<FFElem> lambda, mu;  // parameters of k; for unitary groups k uses alpha*lambda
  std::optional<FFElem> alpha;
  std::vector<std::uint64_t> letter_degrees;
  std::uint64_t degree = 0;
  bool hypotheses_hold = false;  // p_D != 0, some p_j independent of p_D, D < |S|
  std::optional<bool> in_regime;  // absent when no explicit regime is known
  bool substituted = false;
  /// Assignments of the original variables that give distinct values.
  std::vector<SemilinearElement> witness_lambda, witness_mu;

  bool nonconstant() const { return outcome == Outcome::nonconstant; }
};

struct CertifyOptions {
  SubstitutionOptions substitution{2000, 0, 1};
  bool check_interpolation = false;
  /// Compare values at sampled elements when the probe method fails.
  bool scan_fallback = false;
  std::uint64_t scan_samples = 64;
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Polynomial expansion

/// Coefficients p_0..p_D of a0 (1 + e_1 t^{d_1} h_1) a1 ... (1 + e_l t^{d_l} h_l) a_l.
struct Expansion {
  std::vector<Mat> coeffs;
  std::vector<std::uint64_t> degrees;  // d_j

  std::uint64_t degree() const { return coeffs.size() - 1; }
  Mat at(FFElem t) const {
    const FiniteField& F = coeffs[0].field();
    Mat r(F, coeffs[0].dim());
    FFElem pw = F.one();
    for (const Mat& c : coeffs) {
      r = r + scale(c, pw);
      pw = F.mul(pw, t);
    }
    return r;
  }
};

inline Expansion expand_product(const std::vector<Mat>& a, const std::vector<int>& signs, const std::vector<Mat>& hs,
                                const std::vector<std::uint64_t>& degrees) {
  const std::size_t l = signs.size();
  if (a.size() != l + 1 || hs.size() != l || degrees.size() != l) throw std::invalid_argument("expansion shape");
  const FiniteField& F = a[0].field();
  std::uint64_t D = 0;
  for (auto d : degrees) D += d;
  Expansion ex;
  ex.degrees = degrees;
  ex.coeffs.assign(D + 1, Mat(F, a[0].dim()));
  ex.coeffs[0] = a[0];
  std::uint64_t top = 0;
  for (std::size_t j = 0; j < l; ++j) {
    const std::uint64_t d = degrees[j];
    const Mat eh = signs[j] > 0 ? hs[j] : scale(hs[j], F.neg(F.one()));
    for (std::uint64_t k = top + 1; k-- > 0;) ex.coeffs[k + d] = ex.coeffs[k + d] + ex.coeffs[k] * eh;
    top += d;
    for (std::uint64_t k = 0; k <= top; ++k) ex.coeffs[k] = ex.coeffs[k] * a[j + 1];
  }
  return ex;
}

/// One-variable word over a linear group, k(t) = 1 + t h.
inline Expansion polynomial_expand(const Word<SemilinearElement>& w, const Probe& probe) {
  if (w.num_vars() > 1) throw WordError("polynomial_expand needs a one-variable word");
  std::vector<Mat> a;
  for (const auto& c : w.constants) {
    if (c.frob) throw WordError("polynomial_expand needs linear constants; use certify_semilinear");
    a.push_back(c.mat);
  }
  std::vector<int> signs;
  for (const auto& x : w.letters) signs.push_back(x.sign);
  return expand_product(a, signs, std::vector<Mat>(signs.size(), probe.h),
                        std::vector<std::uint64_t>(signs.size(), 1));
}

/// Entry positions (a, b) whose coefficient sequences are linearly independent.
inline std::optional<std::pair<int, int>> independent_entries(const Expansion& ex) {
  const int n = ex.coeffs[0].dim();
  const FiniteField& F = ex.coeffs[0].field();
  auto column = [&](int pos) {
    Vec c;
    for (const Mat& m : ex.coeffs) c.push_back(m(pos / n, pos % n));
    return c;
  };
  int first = -1;
  for (int pos = 0; pos < n * n; ++pos) {
    Vec c = column(pos);
    if (std::all_of(c.begin(), c.end(), [](FFElem x) { return x.v == 0; })) continue;
    if (first < 0) {
      first = pos;
      continue;
    }
    if (rank_of({column(first), c}, F) == 2) return std::make_pair(first, pos);
  }
  return std::nullopt;
}

/// Scans mu then lambda over S for a nonzero cross determinant of the two
/// independent entries.
inline std::optional<std::pair<FFElem, FFElem>> separate(const Expansion& ex, const std::vector<FFElem>& S) {
  auto ab = independent_entries(ex);
  if (!ab) return std::nullopt;
  const int n = ex.coeffs[0].dim();
  const FiniteField& F = ex.coeffs[0].field();
  auto entry = [&](int pos, FFElem t) {
    FFElem r = F.zero(), pw = F.one();
    for (const Mat& m : ex.coeffs) {
      r = F.add(r, F.mul(m(pos / n, pos % n), pw));
      pw = F.mul(pw, t);
    }
    return r;
  };
  for (FFElem mu : S) {
    const FFElem am = entry(ab->first, mu), bm = entry(ab->second, mu);
    if (!am.v && !bm.v) continue;
    for (FFElem la : S) {
      FFElem cross = F.sub(F.mul(entry(ab->first, la), bm), F.mul(entry(ab->second, la), am));
      if (cross.v) return std::make_pair(la, mu);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Probe search

/// Linear probe: v avoiding the fixed points of every c_j, then phi with
/// phi(v) = 0 and phi(v c_j) != 0, both in canonical order.
inline std::optional<Probe> find_probe_linear(const Word<SemilinearElement>& w) {
  if (w.constants.empty()) return std::nullopt;
  const FiniteField& F = w.constants[0].mat.field();
  const int n = w.constants[0].mat.dim();
  std::vector<Mat> mids;
  for (std::size_t j = 1; j < w.letters.size(); ++j) {
    if (scalar_value(w.constants[j].mat)) return std::nullopt;
    mids.push_back(w.constants[j].mat);
  }
  const auto points = projective_points(F, n);
  for (const Vec& v : points) {
    std::vector<Vec> images;
    bool fixed = false;
    for (const Mat& c : mids) {
      images.push_back(vec_mul(v, c));
      if (proportional(v, images.back(), F)) {
        fixed = true;
        break;
      }
    }
    if (fixed) continue;
    for (const Vec& phi : points) {
      if (dot(phi, v, F).v) continue;
      bool ok = true;
      for (const Vec& u : images)
        if (!dot(phi, u, F).v) {
          ok = false;
          break;
        }
      if (ok) return Probe{v, phi, outer(phi, v, F), {}, 0};
    }
  }
  return std::nullopt;
}

/// Form probe: v (isotropic if required) with f(v c_j, v) != 0 for all j;
/// h is x -> f(x, v) v.
inline std::optional<Probe> find_probe_form(const Word<SemilinearElement>& w, const Form& f) {
  const FiniteField& F = f.field();
  const int n = f.gram.dim();
  for (const Vec& v : projective_points(F, n)) {
    if (f(v, v).v) continue;
    bool ok = true;
    for (std::size_t j = 1; j < w.letters.size() && ok; ++j)
      if (!f(vec_mul(v, w.constants[j].mat), v).v) ok = false;
    if (!ok) continue;
    Vec w = v;
    if (f.kind == FormKind::hermitian)
      for (auto& c : w) c = F.conj(c);
    Vec phi = vec_mul(w, transpose(f.gram));  // phi(x) = f(x, v)
    return Probe{v, phi, outer(phi, v, F), {}, 0};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Involutions

struct InvolutionScreen {
  bool involution = false;   // c^2 = 1 on the matrix
  bool alternating = false;  // g(u,v) = f(u c, v) alternating
  std::optional<Vec> witness;  // g(v,v) != 0
  bool criteria_agree = true;  // q odd: both directions; q even: alternating implies involution
};

inline bool is_involution(const Mat& c) { return is_identity(c * c); }

inline InvolutionScreen involution_screen(const Mat& c, const Form& f) {
  if (f.kind != FormKind::alternating) throw FieldError("involution screen needs an alternating form");
  if (!(f.transform(c) == f.gram)) throw FieldError("element is not symplectic");
  const FiniteField& F = f.field();
  const int n = c.dim();
  const Mat G = c * f.gram;  // g(u,v) = u G v^T
  InvolutionScreen s;
  s.involution = is_involution(c);
  for (int i = 0; i < n && !s.witness; ++i)
    if (G(i, i).v) s.witness = detail::unit_vec(F, n, i);
  for (int i = 0; i < n && !s.witness; ++i)
    for (int j = i + 1; j < n && !s.witness; ++j)
      if (F.add(G(i, j), G(j, i)).v) {
        Vec v = detail::unit_vec(F, n, i);
        v[j] = F.one();
        s.witness = v;
      }
  s.alternating = !s.witness;
  s.criteria_agree = (F.p() % 2) ? (s.involution == s.alternating) : (!s.alternating || s.involution);
  return s;
}

// ---------------------------------------------------------------------------
// Certifiers

namespace detail {

inline std::vector<Mat> mats_of(const Word<SemilinearElement>& w) {
  std::vector<Mat> a;
  for (const auto& c : w.constants) a.push_back(c.mat);
  return a;
}

inline std::vector<int> signs_of(const Word<SemilinearElement>& w) {
  std::vector<int> s;
  for (const auto& x : w.letters) s.push_back(x.sign);
  return s;
}

inline Certificate fail(Certificate c, const std::string& why) {
  c.outcome = Outcome::identity_candidate;
  if (c.reason.empty()) c.reason = why;
  if (std::find(c.reasons.begin(), c.reasons.end(), why) == c.reasons.end()) c.reasons.push_back(why);
  return c;
}

inline void note(Certificate& c, const std::string& why) {
  if (std::find(c.reasons.begin(), c.reasons.end(), why) == c.reasons.end()) c.reasons.push_back(why);
}

inline GroupSpec projective_spec(GroupSpec s) {
  s.family = projective_of(s.family);
  return s;
}

/// Assignment of the original variables for the one-variable value x.
/// Variables removed by reduction get the identity.
inline std::vector<SemilinearElement> lift_assignment(const MatrixGroup& g,
                                                      const OneVariableSubstitution<SemilinearElement>& sub,
                                                      const SemilinearElement& x, int vars) {
  std::vector<SemilinearElement> out;
  for (std::size_t i = 0; i < sub.left.size(); ++i) out.push_back(g.mul(g.mul(sub.left[i], x), sub.right[i]));
  while (static_cast<int>(out.size()) < vars) out.push_back(g.identity());
  return out;
}

struct Prepared {
  Word<SemilinearElement> word;  // one variable, reduced
  OneVariableSubstitution<SemilinearElement> sub;
};

/// Reduces, then substitutes x_i -> a_i x b_i when several variables or a
/// bad intermediate constant require it.
inline std::optional<Prepared> prepare(const MatrixGroup& g, const Word<SemilinearElement>& w0,
                                       const CertifyOptions& opt, Certificate& cert,
                                       const std::function<bool(const SemilinearElement&)>& bad_constant = {}) {
  auto w = reduce(g, w0);
  if (w.letters.empty()) {
    cert = fail(cert, failure::no_letters);
    return std::nullopt;
  }
  const int r = w.num_vars();
  bool need = r > 1;
  for (std::size_t j = 1; j < w.letters.size() && !need; ++j)
    if (g.is_central(w.constants[j]) || (bad_constant && bad_constant(w.constants[j]))) need = true;
  Prepared p;
  if (!need) {
    p.word = w;
    p.sub.word = w;
    p.sub.left.assign(r, g.identity());
    p.sub.right.assign(r, g.identity());
    return p;
  }
  Sampler sampler(g.spec(), opt.seed ^ 0x9e3779b97f4a7c15ull);
  auto draw = [&](std::mt19937_64&) { return sampler.next(); };
  std::function<bool(const Word<SemilinearElement>&)> extra = [&](const Word<SemilinearElement>& cand) {
    for (std::size_t j = 1; j < cand.letters.size(); ++j)
      if (g.is_central(cand.constants[j]) || (bad_constant && bad_constant(cand.constants[j]))) return false;
    return true;
  };
  try {
    p.sub = substitute_one_variable(g, w, {}, g.order(), opt.substitution, draw, extra);
  } catch (const WordError&) {
    cert = fail(cert, r > 1 ? failure::substitution : failure::central_constant);
    return std::nullopt;
  }
  p.word = p.sub.word;
  cert.substituted = true;
  return p;
}

/// Finishes a certificate from an expansion: hypotheses, separation, and the
/// re-check through `evaluate`.
inline Certificate conclude(Certificate cert, const MatrixGroup& g, const Word<SemilinearElement>& original,
                            const Prepared& prep, const Expansion& ex, const std::vector<FFElem>& S,
                            const std::function<SemilinearElement(FFElem)>& k_of) {
  cert.degree = ex.degree();
  cert.letter_degrees = ex.degrees;
  const Mat& top = ex.coeffs.back();
  bool ok = true;
  if (is_zero(top)) {
    note(cert, failure::leading_zero);
    ok = false;
  }
  if (!independent_entries(ex)) {
    note(cert, failure::dependent);
    ok = false;
  }
  if (ex.degree() >= S.size()) {
    note(cert, failure::degree_budget);
    ok = false;
  }
  cert.hypotheses_hold = ok;
  auto sep = separate(ex, S);
  if (!sep) return fail(cert, cert.reasons.empty() ? failure::no_separation : cert.reasons.front());
  cert.lambda = sep->first;
  cert.mu = sep->second;
  cert.witness_lambda = lift_assignment(g, prep.sub, k_of(sep->first), original.num_vars());
  cert.witness_mu = lift_assignment(g, prep.sub, k_of(sep->second), original.num_vars());
  auto a = evaluate(g, original, cert.witness_lambda);
  auto b = evaluate(g, original, cert.witness_mu);
  if (g.equal(a, b)) throw std::logic_error("certificate failed its own re-check");
  cert.outcome = Outcome::nonconstant;
  cert.method = "polynomial";
  cert.reason.clear();
  return cert;
}

inline Certificate scan_fallback(Certificate cert, const MatrixGroup& g, const Word<SemilinearElement>& w,
                                 const CertifyOptions& opt) {
  if (!opt.scan_fallback) return cert;
  Sampler s(g.spec(), opt.seed);
  const int r = std::max(1, w.num_vars());
  auto draw = [&]() {
    std::vector<SemilinearElement> xs;
    for (int i = 0; i < r; ++i) xs.push_back(s.next());
    return xs;
  };
  auto first = draw();
  auto base = evaluate(g, w, first);
  for (std::uint64_t t = 0; t < opt.scan_samples; ++t) {
    auto xs = draw();
    if (!g.equal(evaluate(g, w, xs), base)) {
      cert.outcome = Outcome::nonconstant;
      cert.method = "scan";
      cert.witness_lambda = first;
      cert.witness_mu = xs;
      return cert;
    }
  }
  return cert;
}

inline bool expansion_matches(const MatrixGroup& lin, const Word<SemilinearElement>& w, const Expansion& ex,
                              const std::vector<FFElem>& S, const std::function<SemilinearElement(FFElem)>& k_of) {
  for (FFElem t : S) {
    auto direct = evaluate1(lin, w, k_of(t));
    if (!(direct.mat == ex.at(t))) return false;
  }
  return true;
}

}  // namespace detail

/// Non-constancy certificate for a word over a PSL, PSp or PSU family (the
/// linear covers are accepted and treated projectively).
inline Certificate certify_nonconstant(const Word<SemilinearElement>& w, const GroupSpec& spec0,
                                       const CertifyOptions& opt = {}) {
  Certificate cert;
  const GroupSpec spec = detail::projective_spec(spec0);
  const Family fam = linear_cover(spec.family);
  if (spec.frob || !(fam == Family::SL || fam == Family::GL || fam == Family::Sp || fam == Family::SU))
    return detail::fail(cert, failure::unsupported);
  const MatrixGroup g(spec);
  const FiniteField& F = spec.field();
  const std::uint64_t q = spec.q;
  const std::uint64_t l_orig = reduce(g, w).letters.size();
  if (fam == Family::SL || fam == Family::GL)
    cert.in_regime = spec.n == 2 ? 2 * l_orig <= q + 2 : l_orig + 1 <= q;
  else if (fam == Family::Sp)
    cert.in_regime = 2 * l_orig <= q + 2;

  std::function<bool(const SemilinearElement&)> bad;
  if (fam == Family::Sp) {
    const auto red = reduce(g, w);
    const auto cls = classify_constants(red);
    for (std::size_t j : cls.jminus)
      if (is_involution(red.constants[j].mat)) return detail::fail(cert, failure::involution_critical);
    bad = [](const SemilinearElement& c) { return is_involution(c.mat); };
  }
  auto prep = detail::prepare(g, w, opt, cert, bad);
  if (!prep) return detail::scan_fallback(cert, g, w, opt);
  const auto& w1 = prep->word;
  const std::size_t l = w1.letters.size();

  std::optional<Probe> probe;
  std::vector<FFElem> S = F.elements();
  FFElem alpha = F.one();
  if (fam == Family::SL || fam == Family::GL) {
    probe = find_probe_linear(w1);
  } else {
    const Form f = standard_form(spec);
    probe = find_probe_form(w1, f);
    if (fam == Family::SU) {
      S = F.subfield(F.e() / 2);
      for (FFElem a : F.elements())
        if (a.v && !F.trace_half(a).v) {
          alpha = a;
          break;
        }
      cert.alpha = alpha;
      if (probe) {
        probe->h = scale(probe->h, alpha);
        for (auto& c : probe->phi) c = F.mul(c, alpha);
      }
    }
  }
  if (!probe) return detail::scan_fallback(detail::fail(cert, failure::no_probe), g, w, opt);
  cert.probe = probe;
  const Mat h = probe->h;
  const int n = spec.n;
  auto k_of = [&](FFElem t) { return linear(Mat::identity(F, n) + scale(h, t)); };
  const auto ex = expand_product(detail::mats_of(w1), detail::signs_of(w1), std::vector<Mat>(l, h),
                                         std::vector<std::uint64_t>(l, 1));
  if (opt.check_interpolation) {
    GroupSpec lin = spec;
    lin.family = linear_cover(spec.family);
    if (!detail::expansion_matches(MatrixGroup(lin), w1, ex, S, k_of))
      throw std::logic_error("expansion disagrees with direct evaluation");
  }
  auto out = detail::conclude(cert, g, w, *prep, ex, S, k_of);
  if (!out.nonconstant()) return detail::scan_fallback(out, g, w, opt);
  return out;
}

/// Non-constancy certificate for a word over PGL_n(q) or PSL_n(q) extended by
/// a Frobenius part: shifts the twists into the letters, picks the global
/// twist of least total degree and expands the twisted polynomial.
inline Certificate certify_semilinear(const Word<SemilinearElement>& w, const GroupSpec& spec0,
                                      const CertifyOptions& opt = {}) {
  Certificate cert;
  const GroupSpec spec = detail::projective_spec(spec0);
  const Family fam = linear_cover(spec.family);
  if (!(fam == Family::SL || fam == Family::GL)) return detail::fail(cert, failure::unsupported);
  const MatrixGroup g(spec);
  const FiniteField& F = spec.field();
  const int e = static_cast<int>(F.e());
  const int n = spec.n;
  const std::uint64_t p = F.p();
  {
    const std::uint64_t l0 = reduce(g, w).letters.size();
    if (spec.frob) {
      const std::uint64_t ef = e / spec.frob;
      const std::uint64_t pf = detail::saturate(detail::ipow(p, spec.frob));
      cert.in_regime = n == 2 ? 2 * l0 <= ef * (pf - 1) + 2 : l0 <= ef * (pf - 1);
    }
  }
  auto prep = detail::prepare(g, w, opt, cert);
  if (!prep) return detail::scan_fallback(cert, g, w, opt);
  const auto& w1 = prep->word;
  const std::size_t l = w1.letters.size();

  // T_j: twist accumulated before letter j; a_j = F^{T_j}(A_j).
  std::vector<int> T(l + 1, 0);
  for (std::size_t j = 1; j <= l; ++j) T[j] = (T[j - 1] + w1.constants[j - 1].frob) % e;
  std::vector<Mat> a;
  for (std::size_t j = 0; j <= l; ++j) a.push_back(frobenius(w1.constants[j].mat, j == 0 ? 0 : T[j]));

  std::vector<std::pair<std::uint64_t, int>> order;
  for (int i = 0; i < e; ++i) {
    std::uint64_t D = 0;
    for (std::size_t j = 1; j <= l; ++j)
      D += detail::saturate(detail::ipow(p, static_cast<unsigned>(((T[j] - i) % e + e) % e)));
    order.push_back({D, i});
  }
  std::sort(order.begin(), order.end());

  const auto points = projective_points(F, n);
  for (auto [D, i] : order) {
    std::vector<int> m(l + 1, 0);
    for (std::size_t j = 1; j <= l; ++j) m[j] = ((T[j] - i) % e + e) % e;
    for (const Vec& v : points) {
      // Exclude v whose line is fixed by the twisted intermediate maps.
      std::vector<Vec> imgs;
      bool dead = false;
      for (std::size_t j = 1; j < l && !dead; ++j) {
        imgs.push_back(vec_mul(vec_frobenius(v, F, m[j]), a[j]));
        if (proportional(imgs.back(), vec_frobenius(v, F, m[j + 1]), F)) dead = true;
      }
      if (dead) continue;
      for (const Vec& phi : points) {
        if (dot(phi, v, F).v) continue;
        bool ok = true;
        for (std::size_t j = 1; j < l && ok; ++j)
          if (!dot(imgs[j - 1], vec_frobenius(phi, F, m[j + 1]), F).v) ok = false;
        if (!ok) continue;
        Probe probe{v, phi, outer(phi, v, F), std::vector<int>(m.begin() + 1, m.end()), i};
        std::vector<Mat> hs;
        std::vector<std::uint64_t> deg;
        for (std::size_t j = 1; j <= l; ++j) {
          hs.push_back(frobenius(probe.h, m[j]));
          deg.push_back(detail::saturate(detail::ipow(p, static_cast<unsigned>(m[j]))));
        }
        cert.probe = probe;
        const auto ex = expand_product(a, detail::signs_of(w1), hs, deg);
        auto k_of = [&, h = probe.h, i = i](FFElem t) {
          return linear(frobenius(Mat::identity(F, n) + scale(h, t), -i));
        };
        if (opt.check_interpolation) {
          for (FFElem t : F.elements()) {
            auto direct = evaluate1(g, w1, k_of(t));
            if (!(direct.mat == ex.at(t))) throw std::logic_error("twisted expansion disagrees with evaluation");
          }
        }
        auto out = detail::conclude(cert, g, w, *prep, ex, F.elements(), k_of);
        if (!out.nonconstant()) return detail::scan_fallback(out, g, w, opt);
        return out;
      }
    }
  }
  return detail::scan_fallback(detail::fail(cert, failure::no_probe), g, w, opt);
}

// ---------------------------------------------------------------------------
// Counting

namespace detail {

using i128 = __int128;

inline u128 exact_div(u128 a, u128 b) {
  if (b == 0 || a % b) throw std::logic_error("closed form term is not an integer");
  return a / b;
}

/// Counts indices in [0, total) accepted by `fn`, split over threads.
inline std::uint64_t parallel_count(std::uint64_t total, unsigned threads,
                                    const std::function<bool(std::uint64_t)>& fn) {
  threads = std::max(1u, threads);
  std::vector<std::uint64_t> part(threads, 0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::uint64_t i = t; i < total; i += threads)
        if (fn(i)) ++part[t];
    });
  for (auto& th : pool) th.join();
  return std::accumulate(part.begin(), part.end(), std::uint64_t{0});
}

inline Vec vector_at(const FiniteField& F, int n, std::uint64_t idx) {
  const auto& els = F.elements();
  Vec v(n);
  for (int i = n - 1; i >= 0; --i) {
    v[i] = els[idx % F.q()];
    idx /= F.q();
  }
  return v;
}

inline std::uint64_t vector_count(const FiniteField& F, int n, std::uint64_t budget) {
  u128 total = ipow(F.q(), static_cast<unsigned>(n));
  if (total > budget) throw BudgetExceeded("vector space exceeds the enumeration budget");
  return static_cast<std::uint64_t>(total);
}

}  // namespace detail

inline constexpr std::uint64_t kVectorBudget = 100'000'000;

struct CountCheck {
  std::uint64_t brute = 0;
  std::uint64_t formula = 0;
  bool match() const { return brute == formula; }
};

/// Solutions of c^2 = 1 in Sp_{2m}(q), identity included, by the closed
/// forms for odd and even q.
inline std::uint64_t involution_formula(unsigned m, std::uint64_t q) {
  using detail::u128;
  const u128 G = sp_order(m, q);
  u128 sum = 0;
  auto sp_dim = [&](unsigned d) -> u128 { return sp_order(d / 2, q); };
  if (q % 2) {
    for (unsigned i = 0; i <= m; ++i) sum += detail::exact_div(G, u128(sp_order(i, q)) * sp_order(m - i, q));
    return detail::saturate(sum);
  }
  for (unsigned i = 0; i <= m; ++i) {
    const u128 prefix = detail::ipow(q, i * (i + 1) / 2 + i * (2 * m - 2 * i));
    const u128 rest = sp_dim(2 * m - 2 * i);
    if (i % 2 == 0) {
      sum += detail::exact_div(G, prefix * sp_dim(i) * rest);
      if (i >= 2) sum += detail::exact_div(G, prefix * detail::ipow(q, i - 1) * sp_dim(i - 2) * rest);
    } else {
      sum += detail::exact_div(G, prefix * sp_dim(i - 1) * rest);
    }
  }
  return detail::saturate(sum);
}

inline CountCheck count_involutions(unsigned m, std::uint64_t q, std::uint64_t budget = kDefaultEnumerationBudget) {
  GroupSpec s{Family::Sp, static_cast<int>(2 * m), static_cast<std::uint32_t>(q), 0};
  CountCheck c;
  for (const auto& x : enumerate(s, budget))
    if (is_involution(x.mat)) ++c.brute;
  c.formula = involution_formula(m, q);
  return c;
}

/// N_{k,l,q}: nonzero isotropic vectors of a hermitian form of rank k with
/// an l-dimensional radical.
inline std::uint64_t isotropic_formula(int k, int l, std::uint64_t q) {
  using detail::i128;
  auto sp = [&](int a) -> i128 {
    i128 r = 1;
    for (int i = 0; i < a; ++i) r *= static_cast<i128>(q);
    return r;
  };
  auto sgn = [](int a) -> i128 { return a % 2 ? -1 : 1; };
  const i128 q2l = sp(2 * l);
  const i128 lead = k >= 1 ? (sp(k) - sgn(k)) * (sp(k - 1) - sgn(k - 1)) : 0;
  return static_cast<std::uint64_t>(lead * q2l + q2l - 1);
}

/// Brute-force count for the form diag(1 (k times), 0 (l times)) over GF(q^2).
inline CountCheck count_isotropic(int k, int l, std::uint64_t q, unsigned threads = 1,
                                  std::uint64_t budget = kVectorBudget) {
  const FiniteField& B = ff_of_order(q);
  const FiniteField& F = ff_make(B.p(), 2 * B.e());
  const int n = k + l;
  const std::uint64_t total = detail::vector_count(F, n, budget);
  CountCheck c;
  c.brute = detail::parallel_count(total, threads, [&](std::uint64_t idx) {
    if (idx == 0) return false;
    Vec v = detail::vector_at(F, n, idx);
    FFElem s = F.zero();
    for (int i = 0; i < k; ++i) s = F.add(s, F.norm_half(v[i]));
    return s.v == 0;
  });
  c.formula = isotropic_formula(k, l, q);
  return c;
}

struct ZeroCount {
  std::uint64_t count = 0;  // nonzero v with g(v,v) = 0
  bool alternating = false;
  std::uint64_t bound = 0;  // 2 q^{2m-1} - 1
  bool holds = true;        // checked only for non-alternating g
};

/// Zeros of v -> v G v^T on F_q^{2m}.
inline ZeroCount count_nonalternating_zeros(const Mat& G, unsigned threads = 1,
                                            std::uint64_t budget = kVectorBudget) {
  const FiniteField& F = G.field();
  const int n = G.dim();
  if (n % 2) throw std::invalid_argument("form dimension must be even");
  ZeroCount z;
  z.alternating = true;
  for (int i = 0; i < n; ++i) {
    if (G(i, i).v) z.alternating = false;
    for (int j = 0; j < n; ++j)
      if (F.add(G(i, j), G(j, i)).v) z.alternating = false;
  }
  const std::uint64_t total = detail::vector_count(F, n, budget);
  z.count = detail::parallel_count(total, threads, [&](std::uint64_t idx) {
    if (idx == 0) return false;
    Vec v = detail::vector_at(F, n, idx);
    return dot(vec_mul(v, G), v, F).v == 0;
  });
  z.bound = 2 * detail::saturate(detail::ipow(F.q(), n - 1)) - 1;
  z.holds = z.alternating || z.count <= z.bound;
  return z;
}

struct UnitaryDensity {
  std::uint64_t common = 0;     // nonzero v with f(v,v) = g(v,v) = 0
  std::uint64_t isotropic = 0;  // N_{n,q}
  int k = 0;                    // rank of f on ker(phi)
  Mat normalized;               // M C conj(M)^T with entry (1,0) nonzero
  double ratio = 0;
  double bound = 0;
  bool holds = false;
};

/// Density of the common zeros of f = sum u_i conj(v_i) and g(u,v) =
/// u C conj(v)^T among the zeros of f, against the explicit bound built from
/// N_{n-1,q}, N_{k,n-1-k,q} and N_{n,q}.
inline UnitaryDensity unitary_common_zero_ratio(const Mat& C, std::uint64_t q, unsigned threads = 1,
                                                std::uint64_t budget = kVectorBudget) {
  const FiniteField& F = C.field();
  const int n = C.dim();
  if (n < 3) throw std::invalid_argument("density bound needs n >= 3");
  if (F.q() != q * q) throw std::invalid_argument("form must live over GF(q^2)");
  if (scalar_value(C)) throw std::invalid_argument("scalar form rejected");
  auto conjT = [&](const Mat& M) { return frobenius(transpose(M), F.e() / 2); };
  auto permutation = [&](int to0, int to1) {
    std::vector<int> pi{to0, to1};
    for (int i = 0; i < n; ++i)
      if (i != to0 && i != to1) pi.push_back(i);
    Mat P(F, n);
    for (int a = 0; a < n; ++a) P.set(a, pi[a], F.one());
    return P;
  };
  Mat Cn = C;
  if (!Cn(1, 0).v) {
    std::optional<std::pair<int, int>> off;
    for (int i = 0; i < n && !off; ++i)
      for (int j = 0; j < n && !off; ++j)
        if (i != j && C(i, j).v) off = std::make_pair(i, j);
    if (off) {
      Mat P = permutation(off->second, off->first);
      Cn = P * C * transpose(P);
    } else {
      int i = 1;
      while (C(i, i) == C(0, 0)) ++i;
      Mat P = permutation(0, i);
      Cn = P * C * transpose(P);
      std::optional<Mat> U;
      for (FFElem a : F.elements())
        for (FFElem b : F.elements())
          if (!U && a.v && b.v && F.add(F.norm_half(a), F.norm_half(b)) == F.one()) {
            Mat u = Mat::identity(F, n);
            u.set(0, 0, a);
            u.set(0, 1, b);
            u.set(1, 0, F.neg(F.conj(b)));
            u.set(1, 1, F.conj(a));
            U = u;
          }
      if (!U) {
        // GF(4): no such 2x2 block; use a 3x3 unitary block instead.
        for (const auto& x : enumerate(GroupSpec{Family::SU, 3, static_cast<std::uint32_t>(q), 0})) {
          Mat u = Mat::identity(F, n);
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) u.set(r, s, x.mat(r, s));
          if ((u * Cn * conjT(u))(1, 0).v) {
            U = u;
            break;
          }
        }
      }
      if (!U) throw std::logic_error("no unitary normalisation found");
      Cn = *U * Cn * conjT(*U);
    }
  }
  UnitaryDensity d;
  d.normalized = Cn;
  Vec phi(n, F.zero());
  for (int i = 1; i < n; ++i) phi[i] = Cn(i, 0);
  const auto basis = nullspace({phi}, n, F);
  Mat gram(F, n - 1);
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b) {
      FFElem s = F.zero();
      for (int i = 0; i < n; ++i) s = F.add(s, F.mul(basis[a][i], F.conj(basis[b][i])));
      gram.set(a, b, s);
    }
  d.k = rank(gram);
  const std::uint64_t total = detail::vector_count(F, n, budget);
  d.common = detail::parallel_count(total, threads, [&](std::uint64_t idx) {
    if (idx == 0) return false;
    Vec v = detail::vector_at(F, n, idx);
    FFElem fv = F.zero();
    for (auto x : v) fv = F.add(fv, F.norm_half(x));
    if (fv.v) return false;
    Vec vc = v;
    for (auto& x : vc) x = F.conj(x);
    return dot(vec_mul(v, C), vc, F).v == 0;
  });
  using detail::i128;
  const i128 Nn = isotropic_formula(n, 0, q), Nn1 = isotropic_formula(n - 1, 0, q),
             Nk = isotropic_formula(d.k, n - 1 - d.k, q);
  d.isotropic = static_cast<std::uint64_t>(Nn);
  const i128 num = static_cast<i128>(q + 1) * (Nn1 + Nk) + 2 * (Nn - Nn1 - Nk);
  d.holds = static_cast<i128>(d.common) * static_cast<i128>(q + 1) <= num;
  d.ratio = static_cast<double>(d.common) / static_cast<double>(Nn);
  d.bound = static_cast<double>(num) / static_cast<double>(static_cast<i128>(q + 1) * Nn);
  return d;
}

struct FixedPointCheck {
  std::uint64_t fixed = 0;
  std::uint64_t bound = 0;
  bool holds() const { return fixed <= bound; }
};

/// Fixed points of c on P(V) against (p^{m'n}-1)/(p^{m'}-1), m' = gcd(e, twist).
inline FixedPointCheck semilinear_fixed_points(const SemilinearElement& c) {
  const FiniteField& F = c.mat.field();
  return {projective_fixed_points(c).size(), semilinear_fixed_point_bound(F, c.mat.dim(), c.frob)};
}

}  // namespace mixid
