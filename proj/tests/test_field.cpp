#include <gtest/gtest.h>

#include <set>

#include "mixid/field.hpp"

using namespace mixid;

namespace {

// Naive polynomial product over GF(p), low degree first.
std::vector<std::uint32_t> pmul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                std::uint32_t p) {
  std::vector<std::uint32_t> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return r;
}

std::vector<std::vector<std::uint32_t>> monic_of_degree(std::uint32_t p, std::uint32_t d) {
  std::vector<std::vector<std::uint32_t>> out;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < d; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint32_t> f(d + 1, 0);
    std::uint64_t t = idx;
    for (std::uint32_t i = 0; i < d; ++i) {
      f[i] = t % p;
      t /= p;
    }
    f[d] = 1;
    out.push_back(f);
  }
  return out;
}

// Reducible iff it is a product of two monic factors of positive degree.
bool oracle_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::uint32_t n = static_cast<std::uint32_t>(f.size() - 1);
  for (std::uint32_t d = 1; d < n; ++d)
    for (const auto& a : monic_of_degree(p, d))
      for (const auto& b : monic_of_degree(p, n - d))
        if (pmul(a, b, p) == f) return false;
  return true;
}

// Least monic irreducible by the low-degree-first residue order.
std::vector<std::uint32_t> oracle_least(std::uint32_t p, std::uint32_t e) {
  std::vector<std::vector<std::uint32_t>> all = monic_of_degree(p, e);
  std::sort(all.begin(), all.end());
  for (const auto& f : all)
    if (e == 1 || oracle_irreducible(f, p)) return f;
  return {};
}

const std::vector<std::pair<std::uint32_t, std::uint32_t>> kSmall = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1},
                                                                      {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}};

}  // namespace

TEST(Field, ModulusMatchesBruteForce) {
  for (auto [p, e] : kSmall) {
    EXPECT_EQ(least_irreducible(p, e), oracle_least(p, e)) << p << "^" << e;
    EXPECT_TRUE(oracle_irreducible(least_irreducible(p, e), p));
  }
}

TEST(Field, FrozenModuli) {
  using V = std::vector<std::uint32_t>;
  EXPECT_EQ(ff_make(2, 2).modulus(), (V{1, 1, 1}));
  EXPECT_EQ(ff_make(2, 3).modulus(), (V{1, 0, 1, 1}));
  EXPECT_EQ(ff_make(3, 2).modulus(), (V{1, 0, 1}));
  EXPECT_EQ(ff_make(2, 4).modulus(), (V{1, 0, 0, 1, 1}));
  EXPECT_EQ(ff_make(5, 2).modulus(), (V{1, 1, 1}));
  EXPECT_EQ(ff_make(3, 3).modulus(), (V{1, 0, 2, 1}));
  EXPECT_EQ(ff_make(2, 2).header(), "GF(2^2; modulus=[1,1,1])");
}

TEST(Field, Axioms) {
  for (auto [p, e] : kSmall) {
    const FiniteField& F = ff_make(p, e);
    const auto& els = F.elements();
    ASSERT_EQ(els.size(), F.q());
    for (FFElem a : els) {
      EXPECT_EQ(F.add(a, F.neg(a)), F.zero());
      EXPECT_EQ(F.mul(a, F.one()), a);
      if (a.v) EXPECT_EQ(F.mul(a, F.inv(a)), F.one());
      EXPECT_EQ(F.pow(a, F.q()), a);
      for (FFElem b : els) {
        EXPECT_EQ(F.add(a, b), F.add(b, a));
        EXPECT_EQ(F.mul(a, b), F.mul(b, a));
        EXPECT_EQ(F.frobenius(F.mul(a, b), 1), F.mul(F.frobenius(a, 1), F.frobenius(b, 1)));
        EXPECT_EQ(F.frobenius(F.add(a, b), 1), F.add(F.frobenius(a, 1), F.frobenius(b, 1)));
        if (F.q() <= 27)
          for (FFElem c : els) EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      }
    }
  }
}

TEST(Field, PrimitiveGeneratesUnits) {
  for (auto [p, e] : kSmall) {
    const FiniteField& F = ff_make(p, e);
    std::set<std::uint16_t> seen;
    FFElem x = F.one();
    for (std::uint32_t k = 0; k + 1 < F.q(); ++k) {
      seen.insert(x.v);
      x = F.mul(x, F.primitive());
    }
    EXPECT_EQ(seen.size(), F.q() - 1);
    EXPECT_EQ(x, F.one());
  }
}

TEST(Field, FrobeniusOrderIsDegree) {
  const FiniteField& F = ff_make(2, 4);
  for (FFElem a : F.elements()) EXPECT_EQ(F.frobenius(a, 4), a);
  EXPECT_EQ(F.subfield(2).size(), 4u);
  EXPECT_EQ(F.subfield(1).size(), 2u);
}

TEST(Field, HalfTraceAndNorm) {
  const FiniteField& F = ff_make(3, 2);
  int trace_zero = 0, norm_one = 0;
  for (FFElem a : F.elements()) {
    EXPECT_EQ(F.frobenius(F.norm_half(a), 1), F.norm_half(a));
    if (!F.trace_half(a).v) ++trace_zero;
    if (F.norm_half(a) == F.one()) ++norm_one;
  }
  EXPECT_EQ(trace_zero, 3);
  EXPECT_EQ(norm_one, 4);
}

TEST(Field, SerializationRoundTrip) {
  const FiniteField& F = ff_make(5, 2);
  for (FFElem a : F.elements()) EXPECT_EQ(F.parse(F.to_string(a)), a);
  EXPECT_EQ(F.to_string(F.from_coeffs({2, 3})), "[2,3]");
  EXPECT_EQ(&parse_field_header(F.header()), &F);
  EXPECT_THROW(F.parse("[1]"), FieldError);
  EXPECT_THROW(F.parse("[5,0]"), FieldError);
}

TEST(Field, ElementOrderIsLexicographic) {
  const FiniteField& F = ff_make(3, 2);
  const auto& els = F.elements();
  for (std::size_t i = 1; i < els.size(); ++i) EXPECT_LT(F.coeffs(els[i - 1]), F.coeffs(els[i]));
}

TEST(Field, Rejects) {
  EXPECT_THROW(ff_make(4, 1), FieldError);
  EXPECT_THROW(ff_of_order(6), FieldError);
  EXPECT_THROW(ff_make(2, 17), FieldError);
}
