#pragma once

#include <string>

#include "mixid/matrix.hpp"

namespace mixid {

/// Pair (A, k) standing for A followed by the k-th Frobenius twist. Products
/// follow (A,i)(B,j) = (A F^i(B), i+j) with F the entrywise p-th power, and
/// a row vector v is sent to F^(-k)(v A).
struct SemilinearElement {
  Mat mat;
  int frob = 0;  // exponent of p, reduced modulo e

  friend bool operator==(const SemilinearElement&, const SemilinearElement&) = default;
};

inline int reduce_frob(long long k, const FiniteField& F) {
  long long m = k % static_cast<long long>(F.e());
  if (m < 0) m += F.e();
  return static_cast<int>(m);
}

inline SemilinearElement linear(const Mat& a) { return {a, 0}; }

inline SemilinearElement frobenius_element(const FiniteField& F, int n, long long k) {
  return {Mat::identity(F, n), reduce_frob(k, F)};
}

inline SemilinearElement compose(const SemilinearElement& x, const SemilinearElement& y) {
  const FiniteField& F = x.mat.field();
  return {x.mat * frobenius(y.mat, x.frob), reduce_frob(x.frob + y.frob, F)};
}

inline SemilinearElement inverse(const SemilinearElement& x) {
  return {frobenius(inverse(x.mat), -x.frob), reduce_frob(-x.frob, x.mat.field())};
}

inline Vec act(const Vec& v, const SemilinearElement& x) {
  return vec_frobenius(vec_mul(v, x.mat), x.mat.field(), -x.frob);
}

inline std::size_t hash_element(const SemilinearElement& x) {
  return hash_mat(x.mat) * 31u + static_cast<std::size_t>(x.frob);
}

inline bool canonical_less(const SemilinearElement& x, const SemilinearElement& y) {
  if (x.frob != y.frob) return x.frob < y.frob;
  return canonical_less(x.mat, y.mat);
}

inline std::string to_string(const SemilinearElement& x) {
  std::string s = to_string(x.mat);
  if (x.frob) s += ";F^" + std::to_string(x.frob);
  return s;
}

inline SemilinearElement parse_semilinear(const FiniteField& F, std::string_view s) {
  auto semi = s.find(';');
  SemilinearElement x{parse_mat(F, s.substr(0, semi)), 0};
  if (semi != std::string_view::npos) {
    auto body = s.substr(semi + 1);
    if (body.substr(0, 2) != "F^") throw FieldError("malformed Frobenius suffix");
    x.frob = reduce_frob(std::stoll(std::string(body.substr(2))), F);
  }
  return x;
}

struct SemilinearHash {
  std::size_t operator()(const SemilinearElement& x) const { return hash_element(x); }
};

}  // namespace mixid
