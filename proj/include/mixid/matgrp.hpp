#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "mixid/group_spec.hpp"
#include "mixid/matrix.hpp"
#include "mixid/semilinear.hpp"

namespace mixid {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Forms

enum class FormKind { alternating, symmetric, hermitian };

struct Form {
  FormKind kind;
  Mat gram;

  const FiniteField& field() const { return gram.field(); }

  FFElem operator()(const Vec& u, const Vec& v) const {
    const FiniteField& F = field();
    Vec w = v;
    if (kind == FormKind::hermitian)
      for (auto& c : w) c = F.conj(c);
    return dot(vec_mul(u, gram), w, F);
  }

  /// Gram matrix transformed by g: g G g^T, or g G conj(g)^T.
  Mat transform(const Mat& g) const {
    Mat gt = transpose(g);
    if (kind == FormKind::hermitian) gt = frobenius(gt, field().e() / 2);
    return g * gram * gt;
  }
};

inline Mat omega_symplectic(const FiniteField& F, int n) {
  const int m = n / 2;
  Mat o(F, n);
  for (int i = 0; i < m; ++i) {
    o.set(i, m + i, F.one());
    o.set(m + i, i, F.neg(F.one()));
  }
  return o;
}

inline Mat omega_antidiagonal(const FiniteField& F, int n) {
  Mat o(F, n);
  for (int i = 0; i < n; ++i) o.set(i, n - 1 - i, F.one());
  return o;
}

inline Form standard_form(const GroupSpec& spec) {
  const FiniteField& F = spec.field();
  if (spec.symplectic()) return {FormKind::alternating, omega_symplectic(F, spec.n)};
  if (spec.orthogonal()) return {FormKind::symmetric, omega_antidiagonal(F, spec.n)};
  if (spec.unitary()) return {FormKind::hermitian, Mat::identity(F, spec.n)};
  throw FieldError("family has no invariant form");
}

inline bool has_form(const GroupSpec& spec) { return spec.symplectic() || spec.orthogonal() || spec.unitary(); }

// ---------------------------------------------------------------------------
// Membership

/// Scalars a with a*A in the linear cover of `spec` (form preserved exactly,
/// determinant one where required).
inline std::vector<FFElem> cover_scalars(const Mat& A, const GroupSpec& spec) {
  const FiniteField& F = A.field();
  std::vector<FFElem> out;
  FFElem d = det(A);
  if (!d.v) return out;
  std::optional<FFElem> form_scale;
  std::uint64_t form_exp = 2;
  if (has_form(spec)) {
    Form f = standard_form(spec);
    Mat t = f.transform(A);
    // t must equal c * gram.
    int pi = -1, pj = -1;
    for (int i = 0; i < spec.n && pi < 0; ++i)
      for (int j = 0; j < spec.n; ++j)
        if (f.gram(i, j).v) {
          pi = i;
          pj = j;
          break;
        }
    FFElem c = F.div(t(pi, pj), f.gram(pi, pj));
    if (!(t == scale(f.gram, c))) return out;
    form_scale = c;
    if (spec.unitary()) form_exp = spec.q + 1;
  }
  const bool need_det = spec.needs_det_one();
  for (FFElem a : F.elements()) {
    if (!a.v) continue;
    if (form_scale && F.mul(F.pow(a, static_cast<long long>(form_exp)), *form_scale) != F.one()) continue;
    if (need_det && F.mul(F.pow(a, spec.n), d) != F.one()) continue;
    out.push_back(a);
  }
  return out;
}

inline bool is_member(const SemilinearElement& g, const GroupSpec& spec) {
  if (g.mat.dim() != spec.n) throw FieldError("dimension mismatch");
  if (g.mat.field_ptr() != &spec.field()) throw FieldError("field mismatch");
  if (spec.frob == 0 ? g.frob != 0 : g.frob % spec.frob != 0) return false;
  if (!det(g.mat).v) return false;
  if (spec.projective()) return !cover_scalars(g.mat, spec).empty();
  auto s = cover_scalars(g.mat, spec);
  return std::find(s.begin(), s.end(), spec.field().one()) != s.end();
}

/// Symplectic membership via the block equations a b^T = b a^T,
/// a d^T - b c^T = 1, c d^T = d c^T.
inline bool sp_block_conditions(const Mat& g) {
  const FiniteField& F = g.field();
  const int n = g.dim(), m = n / 2;
  if (n % 2) return false;
  auto block = [&](int r0, int c0) {
    std::vector<Vec> b(m, Vec(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) b[i][j] = g(r0 + i, c0 + j);
    return b;
  };
  auto a = block(0, 0), b = block(0, m), c = block(m, 0), d = block(m, m);
  // (x y^T)_{ij} = sum_k x_{ik} y_{jk}
  auto xyT = [&](const std::vector<Vec>& x, const std::vector<Vec>& y, int i, int j) {
    FFElem s = F.zero();
    for (int k = 0; k < m; ++k) s = F.add(s, F.mul(x[i][k], y[j][k]));
    return s;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (xyT(a, b, i, j) != xyT(b, a, i, j)) return false;
      if (xyT(c, d, i, j) != xyT(d, c, i, j)) return false;
      FFElem e = F.sub(xyT(a, d, i, j), xyT(b, c, i, j));
      if (e != (i == j ? F.one() : F.zero())) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Canonical projective representatives

inline Mat normalize_leading(const Mat& A) {
  const FiniteField& F = A.field();
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      if (A(i, j).v) return scale(A, F.inv(A(i, j)));
  throw FieldError("zero matrix has no projective class");
}

inline SemilinearElement canonical_projective(const SemilinearElement& g, const GroupSpec& spec) {
  if (is_zero(g.mat)) throw FieldError("zero matrix has no projective class");
  if (linear_cover(spec.family) == Family::GL || spec.frob) return {normalize_leading(g.mat), g.frob};
  auto scalars = cover_scalars(g.mat, spec);
  if (scalars.empty()) return {normalize_leading(g.mat), g.frob};
  Mat best = scale(g.mat, scalars[0]);
  for (std::size_t i = 1; i < scalars.size(); ++i) {
    Mat c = scale(g.mat, scalars[i]);
    if (canonical_less(c, best)) best = c;
  }
  return {best, g.frob};
}

// ---------------------------------------------------------------------------
// Transvections and Eichler transformations

/// 1 + lambda * phi^T v, a transvection when phi(v) = 0.
inline Mat linear_transvection(const Vec& phi, const Vec& v, FFElem lambda, const FiniteField& F) {
  if (dot(phi, v, F).v) throw FieldError("transvection needs phi(v) = 0");
  const int n = static_cast<int>(v.size());
  return Mat::identity(F, n) + scale(outer(phi, v, F), lambda);
}

/// Operator x -> f(x, v) v of the form (rank at most one).
inline Mat form_rank_one(const Form& f, const Vec& v) {
  const FiniteField& F = f.field();
  Vec w = v;
  if (f.kind == FormKind::hermitian)
    for (auto& c : w) c = F.conj(c);
  // f(x, v) = x G w^T; column G w^T.
  Mat gt = transpose(f.gram);
  Vec col = vec_mul(w, gt);
  return outer(col, v, F);
}

/// x -> x + lambda f(x,v) v for the symplectic form.
inline Mat symplectic_transvection(const Form& f, const Vec& v, FFElem lambda) {
  if (f.kind != FormKind::alternating) throw FieldError("symplectic transvection needs an alternating form");
  return Mat::identity(f.field(), f.gram.dim()) + scale(form_rank_one(f, v), lambda);
}

/// x -> x + lambda f(x,v) v for a hermitian form; needs f(v,v) = 0 and
/// lambda + lambda^q = 0.
inline Mat unitary_transvection(const Form& f, const Vec& v, FFElem lambda) {
  const FiniteField& F = f.field();
  if (f.kind != FormKind::hermitian) throw FieldError("unitary transvection needs a hermitian form");
  if (f(v, v).v) throw FieldError("unitary transvection needs an isotropic vector");
  if (F.trace_half(lambda).v) throw FieldError("unitary transvection needs a trace-zero scalar");
  return Mat::identity(F, f.gram.dim()) + scale(form_rank_one(f, v), lambda);
}

/// Eichler transformation x -> x + f(x,u)v - f(x,v)u - (1/2)f(v,v)f(x,u)u
/// for isotropic u with f(u,v) = 0 (odd characteristic).
inline Mat eichler(const Form& f, const Vec& u, const Vec& v) {
  const FiniteField& F = f.field();
  if (f.kind != FormKind::symmetric) throw FieldError("Eichler transformation needs a symmetric form");
  if (F.p() == 2) throw FieldError("Eichler transformation needs odd characteristic");
  if (f(u, u).v || f(u, v).v) throw FieldError("Eichler transformation needs isotropic u orthogonal to v");
  const int n = f.gram.dim();
  Mat fu = form_rank_one(f, u);  // x -> f(x,u) u
  Mat gt = transpose(f.gram);
  Vec colu = vec_mul(u, gt), colv = vec_mul(v, gt);
  FFElem half = F.inv(F.from_int(2));
  FFElem qv = F.mul(half, f(v, v));
  return Mat::identity(F, n) + outer(colu, v, F) - outer(colv, u, F) - scale(fu, qv);
}

/// The Eichler element 1 + lambda (e_{1,N-1} - e_{2,N}) of SO_N, N = 2m-1
/// (1-based indices), written as eichler(e_N, lambda e_{N-1}).
inline Mat so_eichler_k(const FiniteField& F, int N, FFElem lambda) {
  Mat k = Mat::identity(F, N);
  k.set(0, N - 2, lambda);
  k.set(1, N - 1, F.neg(lambda));
  return k;
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

inline std::vector<FFElem> additive_basis(const FiniteField& F) {
  std::vector<FFElem> b;
  FFElem w = F.one();
  for (std::uint32_t i = 0; i < F.e(); ++i) {
    b.push_back(w);
    w = F.mul(w, F.primitive());
  }
  return b;
}

inline Vec unit_vec(const FiniteField& F, int n, int i) {
  Vec v(n, F.zero());
  v[i] = F.one();
  return v;
}

}  // namespace detail

/// Generating set of the linear cover of `spec` (plus the Frobenius element
/// when the spec has a Frobenius part).
inline std::vector<SemilinearElement> generators(const GroupSpec& spec) {
  const FiniteField& F = spec.field();
  const int n = spec.n;
  std::vector<SemilinearElement> gens;
  auto add = [&](const Mat& m) { gens.push_back(linear(m)); };
  auto basis = detail::additive_basis(F);
  switch (linear_cover(spec.family)) {
    case Family::GL:
    case Family::SL: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j)
            for (FFElem l : basis) {
              Mat m = Mat::identity(F, n);
              m.set(i, j, l);
              add(m);
            }
      if (linear_cover(spec.family) == Family::GL && F.q() > 2) {
        Mat d = Mat::identity(F, n);
        d.set(0, 0, F.primitive());
        add(d);
      }
      break;
    }
    case Family::Sp: {
      const int m = n / 2;
      for (FFElem l : basis) {
        for (int i = 0; i < m; ++i) {
          Mat a = Mat::identity(F, n), b = Mat::identity(F, n);
          a.set(i, m + i, l);
          b.set(m + i, i, l);
          add(a);
          add(b);
          for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            Mat s = Mat::identity(F, n);
            s.set(i, j, l);
            s.set(m + j, m + i, F.neg(l));
            add(s);
            if (i < j) {
              Mat t = Mat::identity(F, n), u = Mat::identity(F, n);
              t.set(i, m + j, l);
              t.set(j, m + i, l);
              u.set(m + i, j, l);
              u.set(m + j, i, l);
              add(t);
              add(u);
            }
          }
        }
      }
      break;
    }
    case Family::SO_odd: {
      Form f = standard_form(spec);
      const int mid = n / 2;
      for (FFElem l : basis)
        for (int a = 0; a < n; ++a) {
          if (a == mid) continue;
          for (int b = 0; b < n; ++b) {
            if (b == a || b == n - 1 - a) continue;
            Vec v = detail::unit_vec(F, n, b);
            for (auto& c : v) c = F.mul(c, l);
            add(eichler(f, detail::unit_vec(F, n, a), v));
          }
        }
      Mat d = Mat::identity(F, n);
      d.set(0, 0, F.primitive());
      d.set(n - 1, n - 1, F.inv(F.primitive()));
      add(d);
      break;
    }
    case Family::SU: {
      Form f = standard_form(spec);
      std::vector<FFElem> trace_zero;
      for (FFElem a : F.elements())
        if (a.v && !F.trace_half(a).v) trace_zero.push_back(a);
      for (const Vec& v : projective_points(F, n)) {
        if (f(v, v).v) continue;
        for (FFElem l : trace_zero) add(unitary_transvection(f, v, l));
      }
      for (int i = 0; i + 1 < n; ++i) {
        Mat s(F, n);
        for (int k = 0; k < n; ++k) s.set(k, k, F.one());
        s.set(i, i, F.zero());
        s.set(i + 1, i + 1, F.zero());
        s.set(i, i + 1, F.one());
        s.set(i + 1, i, F.neg(F.one()));
        add(s);
      }
      // A few seeded random orthonormal frames; transvections alone miss part
      // of SU_3(2).
      std::mt19937_64 rng(0x5eed);
      std::uniform_int_distribution<std::uint32_t> pick(0, F.q() - 1);
      for (int frame = 0; frame < 12; ++frame) {
        std::vector<Vec> rows;
        while (static_cast<int>(rows.size()) < n) {
          std::vector<Vec> cond;
          for (const Vec& r : rows) cond.push_back(vec_frobenius(r, F, F.e() / 2));
          auto basis = nullspace(cond, n, F);
          for (;;) {
            Vec v(n, F.zero());
            for (const Vec& b : basis) {
              FFElem c = F.elements()[pick(rng)];
              for (int j = 0; j < n; ++j) v[j] = F.add(v[j], F.mul(c, b[j]));
            }
            if (f(v, v) == F.one()) {
              rows.push_back(v);
              break;
            }
          }
        }
        Mat m(F, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m.set(i, j, rows[i][j]);
        FFElem c = F.inv(det(m));
        for (int j = 0; j < n; ++j) m.set(n - 1, j, F.mul(c, m(n - 1, j)));
        add(m);
      }
      for (FFElem a : F.elements()) {
        if (!a.v || F.norm_half(a) != F.one() || a == F.one()) continue;
        if (n < 2) break;
        Mat d = Mat::identity(F, n);
        d.set(0, 0, a);
        d.set(1, 1, F.inv(a));
        add(d);
      }
      break;
    }
    default:
      break;
  }
  if (spec.frob) gens.push_back(frobenius_element(F, n, spec.frob));
  return gens;
}

// ---------------------------------------------------------------------------
// Group model

/// Matrix group model used by words and verifiers. Products are exact; the
/// identity test is projective for projective families.
class MatrixGroup {
 public:
  using element = SemilinearElement;

  explicit MatrixGroup(GroupSpec spec) : spec_(spec), F_(&spec.field()) { spec_.validate(); }

  const GroupSpec& spec() const { return spec_; }
  const FiniteField& field() const { return *F_; }
  int dim() const { return spec_.n; }

  element identity() const { return linear(Mat::identity(*F_, spec_.n)); }
  element mul(const element& a, const element& b) const { return compose(a, b); }
  element inv(const element& a) const { return inverse(a); }
  bool is_identity(const element& a) const {
    if (a.frob) return false;
    if (spec_.projective()) return scalar_value(a.mat).has_value();
    return mixid::is_identity(a.mat);
  }
  bool equal(const element& a, const element& b) const {
    if (a.frob != b.frob) return false;
    if (spec_.projective()) return projectively_equal(a.mat, b.mat);
    return a.mat == b.mat;
  }
  bool is_central(const element& a) const {
    if (a.frob) return false;
    return scalar_value(a.mat).has_value();
  }
  element canonical(const element& a) const {
    return spec_.projective() ? canonical_projective(a, spec_) : a;
  }
  bool less(const element& a, const element& b) const { return canonical_less(a, b); }
  std::size_t hash(const element& a) const { return hash_element(a); }
  std::string serialize(const element& a) const { return to_string(a); }
  element parse(std::string_view s) const {
    element x = parse_semilinear(*F_, s);
    if (x.mat.dim() != spec_.n) throw FieldError("constant has wrong dimension");
    return x;
  }
  std::uint64_t order() const { return spec_.order() * static_cast<std::uint64_t>(spec_.frob_cosets()); }
  bool contains(const element& a) const { return is_member(a, spec_); }
  /// All elements in canonical order; see `enumerate`.
  std::vector<element> elements(std::uint64_t budget = 10'000'000) const;

 private:
  GroupSpec spec_;
  const FiniteField* F_;
};

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// All elements of `spec` (canonical representatives for projective specs),
/// sorted in canonical order. The BFS count is checked against the closed
/// form order.
inline std::vector<SemilinearElement> enumerate(const GroupSpec& spec,
                                                std::uint64_t budget = kDefaultEnumerationBudget) {
  spec.validate();
  const std::uint64_t expected = spec.order() * static_cast<std::uint64_t>(spec.frob_cosets());
  if (expected > budget) throw BudgetExceeded("group order " + std::to_string(expected) + " exceeds enumeration budget");
  MatrixGroup G(spec);
  auto gens = generators(spec);
  std::unordered_set<SemilinearElement, SemilinearHash> seen;
  std::vector<SemilinearElement> out;
  std::deque<std::size_t> queue;
  auto push = [&](const SemilinearElement& x) {
    if (seen.insert(x).second) {
      out.push_back(x);
      queue.push_back(out.size() - 1);
    }
  };
  push(G.canonical(G.identity()));
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      push(G.canonical(G.mul(out[i], s)));
      if (out.size() > expected) throw std::logic_error("enumeration exceeded the group order for " + spec.to_string());
    }
  }
  if (out.size() != expected)
    throw std::logic_error("generator closure reached " + std::to_string(out.size()) + " of " +
                           std::to_string(expected) + " elements for " + spec.to_string());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return canonical_less(a, b); });
  return out;
}

inline std::vector<SemilinearElement> MatrixGroup::elements(std::uint64_t budget) const {
  return enumerate(spec_, budget);
}

/// Elements of shard `index` out of `count` disjoint hash-range shards.
inline std::vector<SemilinearElement> shard(const std::vector<SemilinearElement>& all, std::size_t index,
                                            std::size_t count) {
  std::vector<SemilinearElement> out;
  for (const auto& x : all)
    if (hash_element(x) % count == index) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// Sampling

/// Seeded product-replacement sampler.
class Sampler {
 public:
  Sampler(const GroupSpec& spec, std::uint64_t seed) : group_(spec), rng_(seed) {
    state_ = generators(spec);
    if (state_.empty()) state_.push_back(group_.identity());
    const std::size_t base = state_.size();
    while (state_.size() < 10) state_.push_back(state_[state_.size() % base]);
    acc_ = group_.identity();
    for (int i = 0; i < 100; ++i) step();
  }

  SemilinearElement next() {
    step();
    return group_.canonical(acc_);
  }

  const MatrixGroup& group() const { return group_; }

 private:
  void step() {
    std::uniform_int_distribution<std::size_t> pick(0, state_.size() - 1);
    std::size_t i = pick(rng_), j = pick(rng_);
    while (j == i) j = pick(rng_);
    std::uniform_int_distribution<int> coin(0, 3);
    int c = coin(rng_);
    SemilinearElement sj = (c & 1) ? group_.inv(state_[j]) : state_[j];
    state_[i] = (c & 2) ? group_.mul(sj, state_[i]) : group_.mul(state_[i], sj);
    acc_ = group_.mul(acc_, state_[i]);
  }

  MatrixGroup group_;
  std::mt19937_64 rng_;
  std::vector<SemilinearElement> state_;
  SemilinearElement acc_;
};

// ---------------------------------------------------------------------------
// Fixed points on P(V)

inline std::vector<Vec> projective_fixed_points(const SemilinearElement& c) {
  const FiniteField& F = c.mat.field();
  if (!det(c.mat).v) throw FieldError("fixed points of a singular map");
  std::vector<Vec> out;
  for (const Vec& v : projective_points(F, c.mat.dim()))
    if (proportional(v, act(v, c), F)) out.push_back(v);
  return out;
}

/// (p^{m'n} - 1)/(p^{m'} - 1) with m' = gcd(e, twist); twist 0 gives |P(V)|.
inline std::uint64_t semilinear_fixed_point_bound(const FiniteField& F, int n, int twist) {
  const std::uint64_t mp = detail::gcd(F.e(), static_cast<std::uint64_t>(((twist % static_cast<int>(F.e())) + F.e()) % F.e()));
  const std::uint64_t base = detail::saturate(detail::ipow(F.p(), static_cast<unsigned>(mp)));
  return detail::saturate((detail::ipow(base, n) - 1) / (base - 1));
}

/// (q^{n-1} - 1)/(q - 1) + 1 for non-scalar linear maps.
inline std::uint64_t linear_fixed_point_bound(const FiniteField& F, int n) {
  const std::uint64_t q = F.q();
  return detail::saturate((detail::ipow(q, n - 1) - 1) / (q - 1) + 1);
}

}  // namespace mixid
