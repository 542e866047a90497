#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mixid/field.hpp"

namespace mixid {

enum class Family { GL, SL, PGL, PSL, Sp, PSp, SU, PSU, SO_odd, PSO_odd };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::GL: return "GL";
    case Family::SL: return "SL";
    case Family::PGL: return "PGL";
    case Family::PSL: return "PSL";
    case Family::Sp: return "Sp";
    case Family::PSp: return "PSp";
    case Family::SU: return "SU";
    case Family::PSU: return "PSU";
    case Family::SO_odd: return "SO_odd";
    case Family::PSO_odd: return "PSO_odd";
  }
  return "?";
}

inline bool is_projective(Family f) {
  return f == Family::PGL || f == Family::PSL || f == Family::PSp || f == Family::PSU ||
         f == Family::PSO_odd;
}

/// Linear family covering a projective one (identity on linear families).
inline Family linear_cover(Family f) {
  switch (f) {
    case Family::PGL: return Family::GL;
    case Family::PSL: return Family::SL;
    case Family::PSp: return Family::Sp;
    case Family::PSU: return Family::SU;
    case Family::PSO_odd: return Family::SO_odd;
    default: return f;
  }
}

inline Family projective_of(Family f) {
  switch (f) {
    case Family::GL: return Family::PGL;
    case Family::SL: return Family::PSL;
    case Family::Sp: return Family::PSp;
    case Family::SU: return Family::PSU;
    case Family::SO_odd: return Family::PSO_odd;
    default: return f;
  }
}

namespace detail {

using u128 = unsigned __int128;

inline std::uint64_t saturate(u128 x) {
  return x > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                       : static_cast<std::uint64_t>(x);
}

inline u128 sat_mul(u128 a, u128 b) {
  const u128 cap = u128(1) << 100;
  if (a == 0 || b == 0) return 0;
  if (a > cap / b) return cap;
  return a * b;
}

inline u128 ipow(u128 b, unsigned k) {
  u128 r = 1;
  for (unsigned i = 0; i < k; ++i) r = sat_mul(r, b);
  return r;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// |Sp_{2m}(q)| = q^{m^2} prod_{i=1..m} (q^{2i} - 1); |Sp_0| = 1.
inline std::uint64_t sp_order(unsigned m, std::uint64_t q) {
  detail::u128 r = detail::ipow(q, m * m);
  for (unsigned i = 1; i <= m; ++i) r = detail::sat_mul(r, detail::ipow(q, 2 * i) - 1);
  return detail::saturate(r);
}

/// Descriptor of a classical group. For unitary families `q` is the unitary
/// parameter and matrices live over GF(q^2). `frob` is 0 or the exponent f
/// of the Frobenius part F^f (in units of the p-th power).
struct GroupSpec {
  Family family = Family::SL;
  int n = 2;
  std::uint32_t q = 2;
  int frob = 0;

  bool projective() const { return is_projective(family); }
  bool unitary() const { return family == Family::SU || family == Family::PSU; }
  bool symplectic() const { return family == Family::Sp || family == Family::PSp; }
  bool orthogonal() const { return family == Family::SO_odd || family == Family::PSO_odd; }
  bool needs_det_one() const {
    Family c = linear_cover(family);
    return c == Family::SL || c == Family::SU || c == Family::SO_odd;
  }

  const FiniteField& base_field() const { return ff_of_order(q); }
  /// Field the matrices are defined over.
  const FiniteField& field() const {
    const FiniteField& B = base_field();
    return unitary() ? ff_make(B.p(), 2 * B.e()) : B;
  }

  void validate() const {
    const FiniteField& F = field();
    if (n < 1 || n > 8) throw FieldError("dimension out of range");
    if (symplectic() && n % 2) throw FieldError("symplectic dimension must be even");
    if (orthogonal() && (n % 2 == 0 || n < 3)) throw FieldError("orthogonal dimension must be odd and at least 3");
    if (orthogonal() && q % 2 == 0) throw FieldError("orthogonal groups require odd q");
    if (frob < 0 || (frob > 0 && F.e() % static_cast<std::uint32_t>(frob) != 0))
      throw FieldError("Frobenius part must divide the field degree");
  }

  /// Order of the linear or projective group, ignoring any Frobenius part.
  /// Saturates at 2^64 - 1.
  std::uint64_t order() const {
    using detail::ipow;
    using detail::sat_mul;
    using detail::u128;
    const std::uint64_t Q = q;
    u128 r = 0;
    std::uint64_t centre = 1;
    switch (linear_cover(family)) {
      case Family::GL:
      case Family::SL: {
        r = ipow(Q, static_cast<unsigned>(n * (n - 1) / 2));
        for (int i = 2; i <= n; ++i) r = sat_mul(r, ipow(Q, i) - 1);
        if (family == Family::GL) r = sat_mul(r, Q - 1);
        if (family == Family::PSL) centre = detail::gcd(n, Q - 1);
        break;
      }
      case Family::Sp:
        r = sp_order(static_cast<unsigned>(n / 2), Q);
        if (family == Family::PSp) centre = detail::gcd(2, Q - 1);
        break;
      case Family::SU: {
        r = ipow(Q, static_cast<unsigned>(n * (n - 1) / 2));
        for (int i = 2; i <= n; ++i) {
          u128 t = ipow(Q, i);
          r = sat_mul(r, (i % 2 == 0) ? t - 1 : t + 1);
        }
        if (family == Family::PSU) centre = detail::gcd(n, Q + 1);
        break;
      }
      case Family::SO_odd:
        r = sp_order(static_cast<unsigned>((n - 1) / 2), Q);
        break;
      default:
        break;
    }
    return detail::saturate(r / centre);
  }

  /// Number of Frobenius cosets (1 when there is no Frobenius part).
  int frob_cosets() const { return frob ? static_cast<int>(field().e()) / frob : 1; }

  std::string to_string() const {
    std::ostringstream os;
    os << family_name(family) << ' ' << n << ' ' << q;
    if (frob) os << " frob=" << frob;
    return os.str();
  }

  /// Parses `FAMILY n q [frob=f] [projective]`.
  static GroupSpec parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string fam;
    GroupSpec s;
    if (!(is >> fam >> s.n >> s.q)) throw FieldError("malformed group spec: " + std::string(text));
    bool found = false;
    for (Family f : {Family::GL, Family::SL, Family::PGL, Family::PSL, Family::Sp, Family::PSp, Family::SU,
                     Family::PSU, Family::SO_odd, Family::PSO_odd})
      if (fam == family_name(f)) {
        s.family = f;
        found = true;
      }
    if (!found) throw FieldError("unknown family: " + fam);
    std::string tok;
    while (is >> tok) {
      if (tok.rfind("frob=", 0) == 0) {
        s.frob = std::stoi(tok.substr(5));
      } else if (tok == "projective") {
        s.family = projective_of(s.family);
      } else {
        throw FieldError("unknown spec token: " + tok);
      }
    }
    s.validate();
    return s;
  }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

}  // namespace mixid
