#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mixid/field.hpp"

namespace mixid {

inline constexpr int kMaxDim = 8;

using Vec = std::vector<FFElem>;

/// Square matrix over a finite field, at most kMaxDim x kMaxDim.
class Mat {
 public:
  Mat() = default;
  Mat(const FiniteField& F, int n) : F_(&F), n_(static_cast<std::uint8_t>(n)) {
    if (n < 1 || n > kMaxDim) throw FieldError("matrix dimension out of range");
  }
  static Mat identity(const FiniteField& F, int n) { return scalar(F, n, F.one()); }
  static Mat scalar(const FiniteField& F, int n, FFElem a) {
    Mat m(F, n);
    for (int i = 0; i < n; ++i) m.set(i, i, a);
    return m;
  }
  /// Row-major entries given as prime-field integers.
  static Mat from_ints(const FiniteField& F, int n, std::initializer_list<long long> xs) {
    Mat m(F, n);
    int k = 0;
    for (long long x : xs) {
      if (k >= n * n) throw FieldError("too many matrix entries");
      m.set(k / n, k % n, F.from_int(x));
      ++k;
    }
    if (k != n * n) throw FieldError("too few matrix entries");
    return m;
  }
  static Mat unit(const FiniteField& F, int n, int i, int j) {
    Mat m(F, n);
    m.set(i, j, F.one());
    return m;
  }

  const FiniteField& field() const { return *F_; }
  const FiniteField* field_ptr() const { return F_; }
  int dim() const { return n_; }
  FFElem operator()(int i, int j) const { return FFElem{a_[i * kMaxDim + j]}; }
  void set(int i, int j, FFElem x) { a_[i * kMaxDim + j] = x.v; }
  const std::array<std::uint16_t, kMaxDim * kMaxDim>& raw() const { return a_; }

  friend bool operator==(const Mat& x, const Mat& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

 private:
  const FiniteField* F_ = nullptr;
  std::uint8_t n_ = 0;
  std::array<std::uint16_t, kMaxDim * kMaxDim> a_{};
};

inline Mat operator*(const Mat& x, const Mat& y) {
  const FiniteField& F = x.field();
  const int n = x.dim();
  Mat r(F, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      FFElem xik = x(i, k);
      if (xik.v == 0) continue;
      for (int j = 0; j < n; ++j) {
        FFElem ykj = y(k, j);
        if (ykj.v == 0) continue;
        r.set(i, j, F.add(r(i, j), F.mul(xik, ykj)));
      }
    }
  return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
  const FiniteField& F = x.field();
  Mat r(F, x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.set(i, j, F.add(x(i, j), y(i, j)));
  return r;
}

inline Mat operator-(const Mat& x, const Mat& y) {
  const FiniteField& F = x.field();
  Mat r(F, x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.set(i, j, F.sub(x(i, j), y(i, j)));
  return r;
}

inline Mat scale(const Mat& x, FFElem a) {
  const FiniteField& F = x.field();
  Mat r(F, x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.set(i, j, F.mul(a, x(i, j)));
  return r;
}

inline Mat transpose(const Mat& x) {
  Mat r(x.field(), x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.set(j, i, x(i, j));
  return r;
}

/// Entrywise a -> a^(p^k).
inline Mat frobenius(const Mat& x, long long k) {
  const FiniteField& F = x.field();
  if (k % static_cast<long long>(F.e()) == 0) return x;
  Mat r(F, x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) r.set(i, j, F.frobenius(x(i, j), k));
  return r;
}

inline bool is_zero(const Mat& x) {
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      if (x(i, j).v) return false;
  return true;
}

/// The scalar a with x = a*1, if any.
inline std::optional<FFElem> scalar_value(const Mat& x) {
  FFElem d = x(0, 0);
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      if (x(i, j) != (i == j ? d : FFElem{0})) return std::nullopt;
  return d;
}

inline bool is_identity(const Mat& x) {
  auto s = scalar_value(x);
  return s && s->v == 1;
}

namespace detail {

// Row echelon in place; returns rank and the determinant factor.
inline int echelon(std::vector<Vec>& rows, const FiniteField& F, FFElem* det = nullptr) {
  const int m = static_cast<int>(rows.size());
  const int n = m ? static_cast<int>(rows[0].size()) : 0;
  int rank = 0;
  FFElem d = F.one();
  for (int col = 0; col < n && rank < m; ++col) {
    int piv = -1;
    for (int r = rank; r < m; ++r)
      if (rows[r][col].v) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank) {
      std::swap(rows[piv], rows[rank]);
      d = F.neg(d);
    }
    FFElem pv = rows[rank][col];
    d = F.mul(d, pv);
    FFElem pinv = F.inv(pv);
    for (int r = rank + 1; r < m; ++r) {
      if (!rows[r][col].v) continue;
      FFElem f = F.mul(rows[r][col], pinv);
      for (int c = col; c < n; ++c) rows[r][c] = F.sub(rows[r][c], F.mul(f, rows[rank][c]));
    }
    ++rank;
  }
  if (det) *det = (rank == m && m == n) ? d : F.zero();
  return rank;
}

}  // namespace detail

inline FFElem det(const Mat& x) {
  std::vector<Vec> rows(x.dim(), Vec(x.dim()));
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) rows[i][j] = x(i, j);
  FFElem d;
  detail::echelon(rows, x.field(), &d);
  return d;
}

inline int rank(const Mat& x) {
  std::vector<Vec> rows(x.dim(), Vec(x.dim()));
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) rows[i][j] = x(i, j);
  return detail::echelon(rows, x.field());
}

/// Rank of a list of equal-length vectors.
inline int rank_of(std::vector<Vec> rows, const FiniteField& F) { return detail::echelon(rows, F); }

/// Basis of {v : r . v = 0 for every row r}, for rows of length n.
inline std::vector<Vec> nullspace(std::vector<Vec> rows, int n, const FiniteField& F) {
  std::vector<int> pivots;
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r)
      if (rows[r][col].v) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    FFElem pinv = F.inv(rows[rank][col]);
    for (auto& c : rows[rank]) c = F.mul(c, pinv);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      if (r == rank || !rows[r][col].v) continue;
      FFElem f = rows[r][col];
      for (int c = 0; c < n; ++c) rows[r][c] = F.sub(rows[r][c], F.mul(f, rows[rank][c]));
    }
    pivots.push_back(col);
    ++rank;
  }
  std::vector<Vec> basis;
  for (int free = 0; free < n; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vec v(n, F.zero());
    v[free] = F.one();
    for (int i = 0; i < rank; ++i) v[pivots[i]] = F.neg(rows[i][free]);
    basis.push_back(v);
  }
  return basis;
}

inline Mat inverse(const Mat& x) {
  const FiniteField& F = x.field();
  const int n = x.dim();
  std::vector<Vec> rows(n, Vec(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rows[i][j] = x(i, j);
    rows[i][n + i] = F.one();
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (rows[r][col].v) {
        piv = r;
        break;
      }
    if (piv < 0) throw FieldError("singular matrix");
    std::swap(rows[piv], rows[col]);
    FFElem pinv = F.inv(rows[col][col]);
    for (auto& c : rows[col]) c = F.mul(c, pinv);
    for (int r = 0; r < n; ++r) {
      if (r == col || !rows[r][col].v) continue;
      FFElem f = rows[r][col];
      for (int c = 0; c < 2 * n; ++c) rows[r][c] = F.sub(rows[r][c], F.mul(f, rows[col][c]));
    }
  }
  Mat r(F, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.set(i, j, rows[i][n + j]);
  return r;
}

/// Row vector times matrix.
inline Vec vec_mul(const Vec& v, const Mat& x) {
  const FiniteField& F = x.field();
  Vec r(x.dim(), F.zero());
  for (int i = 0; i < x.dim(); ++i) {
    if (!v[i].v) continue;
    for (int j = 0; j < x.dim(); ++j) r[j] = F.add(r[j], F.mul(v[i], x(i, j)));
  }
  return r;
}

inline FFElem dot(const Vec& u, const Vec& v, const FiniteField& F) {
  FFElem s = F.zero();
  for (std::size_t i = 0; i < u.size(); ++i) s = F.add(s, F.mul(u[i], v[i]));
  return s;
}

inline Vec vec_frobenius(const Vec& v, const FiniteField& F, long long k) {
  Vec r(v);
  for (auto& c : r) c = F.frobenius(c, k);
  return r;
}

/// Column u^T times row v.
inline Mat outer(const Vec& u, const Vec& v, const FiniteField& F) {
  Mat r(F, static_cast<int>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r.set(static_cast<int>(i), static_cast<int>(j), F.mul(u[i], v[j]));
  return r;
}

/// Whether u and v span a line (both nonzero and proportional).
inline bool proportional(const Vec& u, const Vec& v, const FiniteField& F) {
  int piv = -1;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i].v) {
      piv = static_cast<int>(i);
      break;
    }
  if (piv < 0 || !v[piv].v) return false;
  FFElem s = F.div(v[piv], u[piv]);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (F.mul(s, u[i]) != v[i]) return false;
  return true;
}

/// Whether x = a*y for some nonzero a.
inline bool projectively_equal(const Mat& x, const Mat& y) {
  const FiniteField& F = x.field();
  int pi = -1, pj = -1;
  for (int i = 0; i < x.dim() && pi < 0; ++i)
    for (int j = 0; j < x.dim(); ++j)
      if (y(i, j).v) {
        pi = i;
        pj = j;
        break;
      }
  if (pi < 0) return is_zero(x);
  if (!x(pi, pj).v) return false;
  FFElem s = F.div(x(pi, pj), y(pi, pj));
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j)
      if (x(i, j) != F.mul(s, y(i, j))) return false;
  return true;
}

/// Lexicographic comparison on canonical entry order, row-major.
inline bool canonical_less(const Mat& x, const Mat& y) {
  const FiniteField& F = x.field();
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) {
      auto a = F.order_key(x(i, j)), b = F.order_key(y(i, j));
      if (a != b) return a < b;
    }
  return false;
}

inline std::size_t hash_mat(const Mat& x) {
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) {
      h ^= x(i, j).v;
      h *= 1099511628211ull;
    }
  return static_cast<std::size_t>(h);
}

/// Nonzero vectors with first nonzero coordinate 1, in canonical order.
inline std::vector<Vec> projective_points(const FiniteField& F, int n) {
  std::vector<Vec> out;
  const auto& els = F.elements();
  for (int lead = 0; lead < n; ++lead) {
    const int free = n - lead - 1;
    std::uint64_t count = 1;
    for (int i = 0; i < free; ++i) count *= F.q();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Vec v(n, F.zero());
      v[lead] = F.one();
      std::uint64_t t = idx;
      for (int i = n - 1; i > lead; --i) {
        v[i] = els[t % F.q()];
        t /= F.q();
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// All vectors of F^n in canonical order.
inline void for_each_vector(const FiniteField& F, int n, const std::function<void(const Vec&)>& fn) {
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) count *= F.q();
  const auto& els = F.elements();
  Vec v(n);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t t = idx;
    for (int i = n - 1; i >= 0; --i) {
      v[i] = els[t % F.q()];
      t /= F.q();
    }
    fn(v);
  }
}

inline std::string to_string(const Mat& x) {
  std::ostringstream os;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < x.dim(); ++j) os << ((i || j) ? "," : "") << x.field().to_string(x(i, j));
  return os.str();
}

/// Parses `to_string` output; the dimension is inferred from the entry count.
inline Mat parse_mat(const FiniteField& F, std::string_view s) {
  std::vector<FFElem> entries;
  std::size_t pos = 0;
  while (true) {
    auto b = s.find('[', pos);
    if (b == std::string_view::npos) break;
    auto t = s.find(']', b);
    if (t == std::string_view::npos) throw FieldError("unterminated matrix entry");
    entries.push_back(F.parse(s.substr(b, t - b + 1)));
    pos = t + 1;
  }
  int n = 0;
  while (n * n < static_cast<int>(entries.size())) ++n;
  if (n * n != static_cast<int>(entries.size()) || n == 0) throw FieldError("matrix entry count is not a square");
  Mat m(F, n);
  for (int k = 0; k < n * n; ++k) m.set(k / n, k % n, entries[k]);
  return m;
}

}  // namespace mixid
