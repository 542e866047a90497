#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mixid {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest field order accepted by `ff_make`.
inline constexpr std::uint32_t kMaxFieldOrder = 65536;

/// Element of GF(p^e). The value packs the power-basis coefficients as base-p
/// digits with c0 least significant.
struct FFElem {
  std::uint16_t v = 0;
  friend constexpr bool operator==(FFElem, FFElem) = default;
};

class FiniteField {
 public:
  FiniteField(std::uint32_t p, std::uint32_t e);

  std::uint32_t p() const { return p_; }
  std::uint32_t e() const { return e_; }
  std::uint32_t q() const { return q_; }
  /// Monic modulus, coefficients low degree first (length e+1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FFElem zero() const { return FFElem{0}; }
  FFElem one() const { return FFElem{1}; }
  FFElem from_int(long long k) const {
    long long r = k % static_cast<long long>(p_);
    if (r < 0) r += p_;
    return FFElem{static_cast<std::uint16_t>(r)};
  }
  FFElem from_index(std::uint32_t packed) const {
    if (packed >= q_) throw FieldError("packed index out of range");
    return FFElem{static_cast<std::uint16_t>(packed)};
  }
  FFElem from_coeffs(const std::vector<long long>& c) const;
  std::vector<std::uint32_t> coeffs(FFElem a) const;

  FFElem add(FFElem a, FFElem b) const {
    if (!add_.empty()) return FFElem{add_[a.v * q_ + b.v]};
    return slow_add(a, b);
  }
  FFElem neg(FFElem a) const { return FFElem{neg_[a.v]}; }
  FFElem sub(FFElem a, FFElem b) const { return add(a, neg(b)); }
  FFElem mul(FFElem a, FFElem b) const {
    if (a.v == 0 || b.v == 0) return FFElem{0};
    return FFElem{exp_[log_[a.v] + log_[b.v]]};
  }
  FFElem inv(FFElem a) const {
    if (a.v == 0) throw FieldError("inverse of zero");
    return FFElem{exp_[(q_ - 1 - log_[a.v]) % (q_ - 1)]};
  }
  FFElem div(FFElem a, FFElem b) const { return mul(a, inv(b)); }
  FFElem pow(FFElem a, long long k) const;
  /// a^(p^k); k is taken modulo e and may be negative.
  FFElem frobenius(FFElem a, long long k) const;

  FFElem primitive() const { return FFElem{exp_[1]}; }
  /// Discrete log with respect to `primitive()`.
  std::uint32_t log(FFElem a) const {
    if (a.v == 0) throw FieldError("log of zero");
    return log_[a.v];
  }
  FFElem exp(long long k) const {
    long long m = k % static_cast<long long>(q_ - 1);
    if (m < 0) m += q_ - 1;
    return FFElem{exp_[m]};
  }

  /// Canonical order: lexicographic on (c0, c1, ...).
  std::uint32_t order_key(FFElem a) const { return key_[a.v]; }
  bool less(FFElem a, FFElem b) const { return key_[a.v] < key_[b.v]; }
  /// All elements in canonical order.
  const std::vector<FFElem>& elements() const { return sorted_; }
  /// Elements fixed by x -> x^(p^d), in canonical order.
  std::vector<FFElem> subfield(std::uint32_t d) const;

  /// For a field of even degree viewed over the half-degree subfield.
  FFElem conj(FFElem a) const { return frobenius(a, e_ / 2); }
  FFElem trace_half(FFElem a) const { return add(a, conj(a)); }
  FFElem norm_half(FFElem a) const { return mul(a, conj(a)); }

  std::string to_string(FFElem a) const;
  FFElem parse(std::string_view s) const;
  std::string header() const;

 private:
  FFElem slow_add(FFElem a, FFElem b) const;
  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const;

  std::uint32_t p_, e_, q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint16_t> add_, neg_, exp_, frob_;
  std::vector<std::uint32_t> log_, key_;
  std::vector<FFElem> sorted_;
};

namespace detail {

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Remainder of a modulo monic b, both low degree first, over GF(p).
inline std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> a,
                                           const std::vector<std::uint32_t>& b,
                                           std::uint32_t p) {
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    std::uint32_t lead = a.back();
    if (lead != 0) {
      std::size_t shift = a.size() - 1 - db;
      for (std::size_t i = 0; i <= db; ++i)
        a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
    }
    a.pop_back();
  }
  return a;
}

inline bool is_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> g(d + 1, 0);
      std::uint64_t t = idx;
      for (std::uint32_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[d] = 1;
      auto r = poly_rem(f, g, p);
      bool zero = true;
      for (auto c : r)
        if (c) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Lexicographically least monic irreducible of degree e over GF(p),
/// coefficients compared from c0 upward.
inline std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t e) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < e; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint32_t> f(e + 1, 0);
    std::uint64_t t = idx;
    for (std::uint32_t i = e; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    f[e] = 1;
    if (e == 1 || detail::is_irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");
}

inline FiniteField::FiniteField(std::uint32_t p, std::uint32_t e) : p_(p), e_(e) {
  if (!detail::is_prime(p)) throw FieldError("characteristic must be prime");
  if (e == 0) throw FieldError("degree must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) throw FieldError("field order exceeds budget");
  }
  q_ = static_cast<std::uint32_t>(q);
  modulus_ = least_irreducible(p, e);

  neg_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    std::uint32_t r = 0, t = a, pw = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      r += ((p_ - t % p_) % p_) * pw;
      t /= p_;
      pw *= p_;
    }
    neg_[a] = static_cast<std::uint16_t>(r);
  }
  if (q_ <= 1024) {
    add_.resize(static_cast<std::size_t>(q_) * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b)
        add_[a * q_ + b] = slow_add(FFElem{static_cast<std::uint16_t>(a)},
                                    FFElem{static_cast<std::uint16_t>(b)}).v;
  }

  // Primitive element: least in packed order whose powers exhaust GF(q)^*.
  exp_.assign(2 * static_cast<std::size_t>(q_), 0);
  log_.assign(q_, 0);
  bool found = false;
  for (std::uint32_t g = 1; g < q_ && !found; ++g) {
    std::uint32_t x = 1, period = 0;
    do {
      x = poly_mul(x, g);
      ++period;
    } while (x != 1 && period < q_);
    if (period != q_ - 1) continue;
    x = 1;
    for (std::uint32_t k = 0; k < q_ - 1; ++k) {
      exp_[k] = static_cast<std::uint16_t>(x);
      log_[x] = k;
      x = poly_mul(x, g);
    }
    found = true;
  }
  if (q_ == 2) {
    exp_[0] = 1;
    log_[1] = 0;
    found = true;
  }
  if (!found) throw FieldError("no primitive element");
  for (std::size_t k = q_ - 1; k < exp_.size(); ++k) exp_[k] = exp_[k % (q_ - 1)];

  frob_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a)
    frob_[a] = pow(FFElem{static_cast<std::uint16_t>(a)}, p_).v;

  key_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    std::uint32_t k = 0, t = a;
    for (std::uint32_t i = 0; i < e_; ++i) {
      k = k * p_ + t % p_;
      t /= p_;
    }
    key_[a] = k;
  }
  sorted_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) sorted_[key_[a]] = FFElem{static_cast<std::uint16_t>(a)};
}

inline FFElem FiniteField::slow_add(FFElem a, FFElem b) const {
  std::uint32_t r = 0, x = a.v, y = b.v, pw = 1;
  for (std::uint32_t i = 0; i < e_; ++i) {
    r += ((x % p_ + y % p_) % p_) * pw;
    x /= p_;
    y /= p_;
    pw *= p_;
  }
  return FFElem{static_cast<std::uint16_t>(r)};
}

inline std::uint32_t FiniteField::poly_mul(std::uint32_t a, std::uint32_t b) const {
  std::vector<std::uint32_t> x(e_), y(e_), prod(2 * e_ - 1, 0);
  for (std::uint32_t i = 0; i < e_; ++i) {
    x[i] = a % p_;
    a /= p_;
    y[i] = b % p_;
    b /= p_;
  }
  for (std::uint32_t i = 0; i < e_; ++i)
    for (std::uint32_t j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
  auto r = detail::poly_rem(prod, modulus_, p_);
  std::uint32_t out = 0;
  for (std::uint32_t i = static_cast<std::uint32_t>(r.size()); i-- > 0;) out = out * p_ + r[i];
  return out;
}

inline FFElem FiniteField::from_coeffs(const std::vector<long long>& c) const {
  if (c.size() > e_) throw FieldError("too many coefficients");
  std::uint32_t out = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    long long r = c[i] % static_cast<long long>(p_);
    if (r < 0) r += p_;
    out = out * p_ + static_cast<std::uint32_t>(r);
  }
  return FFElem{static_cast<std::uint16_t>(out)};
}

inline std::vector<std::uint32_t> FiniteField::coeffs(FFElem a) const {
  std::vector<std::uint32_t> c(e_);
  std::uint32_t t = a.v;
  for (std::uint32_t i = 0; i < e_; ++i) {
    c[i] = t % p_;
    t /= p_;
  }
  return c;
}

inline FFElem FiniteField::pow(FFElem a, long long k) const {
  if (a.v == 0) {
    if (k == 0) return one();
    if (k < 0) throw FieldError("negative power of zero");
    return zero();
  }
  long long m = (static_cast<long long>(log_[a.v]) * (k % static_cast<long long>(q_ - 1))) %
                static_cast<long long>(q_ - 1);
  return exp(m);
}

inline FFElem FiniteField::frobenius(FFElem a, long long k) const {
  long long m = k % static_cast<long long>(e_);
  if (m < 0) m += e_;
  for (long long i = 0; i < m; ++i) a = FFElem{frob_[a.v]};
  return a;
}

inline std::vector<FFElem> FiniteField::subfield(std::uint32_t d) const {
  std::vector<FFElem> out;
  for (FFElem a : sorted_)
    if (frobenius(a, d) == a) out.push_back(a);
  return out;
}

inline std::string FiniteField::to_string(FFElem a) const {
  std::ostringstream os;
  os << '[';
  auto c = coeffs(a);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

inline FFElem FiniteField::parse(std::string_view s) const {
  auto b = s.find('['), t = s.rfind(']');
  if (b == std::string_view::npos || t == std::string_view::npos || t < b)
    throw FieldError("malformed field element: " + std::string(s));
  std::vector<long long> c;
  std::string body(s.substr(b + 1, t - b - 1));
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    c.push_back(std::stoll(tok));
  }
  if (c.size() != e_) throw FieldError("wrong coefficient count: " + std::string(s));
  for (long long x : c)
    if (x < 0 || x >= static_cast<long long>(p_)) throw FieldError("coefficient out of range");
  return from_coeffs(c);
}

inline std::string FiniteField::header() const {
  std::ostringstream os;
  os << "GF(" << p_ << '^' << e_ << "; modulus=[";
  for (std::size_t i = 0; i < modulus_.size(); ++i) os << (i ? "," : "") << modulus_[i];
  os << "])";
  return os.str();
}

/// Shared field instance. Instances live for the rest of the program, so raw
/// pointers to them stay valid.
inline const FiniteField& ff_make(std::uint32_t p, std::uint32_t e) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, e}];
  if (!slot) slot = std::make_unique<FiniteField>(p, e);
  return *slot;
}

/// Field of order q, where q must be a prime power.
inline const FiniteField& ff_of_order(std::uint64_t q) {
  if (q < 2) throw FieldError("field order must be at least 2");
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    std::uint32_t e = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++e;
    }
    if (t != 1) throw FieldError("order is not a prime power");
    return ff_make(p, e);
  }
  throw FieldError("order is not a prime power");
}

/// Inverse of `FiniteField::header`.
inline const FiniteField& parse_field_header(std::string_view s) {
  auto g = s.find("GF(");
  auto caret = s.find('^');
  auto semi = s.find(';');
  if (g == std::string_view::npos || caret == std::string_view::npos || semi == std::string_view::npos)
    throw FieldError("malformed field header");
  auto p = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(g + 3, caret - g - 3))));
  auto e = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(caret + 1, semi - caret - 1))));
  const FiniteField& F = ff_make(p, e);
  if (F.header() != std::string(s)) throw FieldError("field header modulus mismatch");
  return F;
}

}  // namespace mixid
