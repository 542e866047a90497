#include <gtest/gtest.h>

#include "mixid/catalog.hpp"
#include "mixid/polyring.hpp"

using namespace mixid;

namespace {

Poly P(const FiniteField& F, std::initializer_list<long long> c) {
  std::vector<FFElem> v;
  for (long long x : c) v.push_back(F.from_int(x));
  return Poly(F, v);
}

Word<SemilinearElement> one_var(const std::vector<SemilinearElement>& cs, const std::vector<int>& signs) {
  Word<SemilinearElement> w;
  w.constants = cs;
  for (int s : signs) w.letters.push_back({1, s});
  return w;
}

std::string psl2(std::uint32_t q) { return "PSL 2 " + std::to_string(q); }

bool up_to_sign(const PolyMat2& a, const PolyMat2& b) { return a == b || a == b.negated(); }

}  // namespace

TEST(Polyring, PolyArithmetic) {
  const FiniteField& F = ff_of_order(5);
  Poly a = P(F, {1, 2}), b = P(F, {0, 3, 1});
  EXPECT_EQ((a * b).coeffs().size(), 4u);
  EXPECT_EQ(a * b, P(F, {0, 3, 7, 2}));
  EXPECT_EQ(a - a, Poly(F));
  EXPECT_EQ((a - a).degree(), -1);
  EXPECT_EQ(P(F, {1, 0, 0}).degree(), 0);
  for (FFElem x : F.elements()) EXPECT_EQ((a * b)(x), F.mul(a(x), b(x)));
}

TEST(Polyring, GeneratorMatchesDisplayedMatrix) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
    const FiniteField& F = ff_of_order(q);
    PolyMat2 shown{{P(F, {1, 0, 0, -1}), P(F, {0, 1, 1, 0, -1}), P(F, {0, -1}), P(F, {1, 0, -1})}};
    PolyMat2 g = embedding_generator(F);
    EXPECT_EQ(g, shown.negated()) << q;
    EXPECT_EQ(g.det(), P(F, {1}));
    EXPECT_EQ(g.max_degree(), 4);
    EXPECT_EQ(g * g.adjugate(), PolyMat2::identity(F));
  }
}

TEST(Polyring, EmbedSmallWords) {
  const FiniteField& F = ff_of_order(5);
  MatrixGroup G{GroupSpec::parse(psl2(5))};
  auto I = G.identity();
  EXPECT_TRUE(up_to_sign(embed_word(one_var({I, I}, {1})).W, embedding_generator(F)));
  auto inv = embed_word(one_var({I, I, I}, {1, -1}));
  EXPECT_TRUE(inv.W.is_plus_minus_one());
  auto sq = embed_word(one_var({I, I, I}, {1, 1}));
  const PolyMat2 g = embedding_generator(F);
  EXPECT_TRUE(up_to_sign(sq.W, g * g));
  EXPECT_LE(sq.max_degree, 8);
  // Squared entries of a length-one word have degree at most 8.
  for (const auto& e : embed_word(one_var({I, I}, {1})).W.e) EXPECT_LE((e * e).degree(), 8);
}

TEST(Polyring, LiftsRejectNonSquareDeterminants) {
  const FiniteField& F = ff_of_order(5);
  EXPECT_THROW(lift_to_sl2(Mat::from_ints(F, 2, {2, 0, 0, 1})), std::invalid_argument);
  Mat l = lift_to_sl2(Mat::from_ints(F, 2, {4, 0, 0, 1}));
  EXPECT_EQ(det(l), F.one());
  EXPECT_TRUE(projectively_equal(l, Mat::from_ints(F, 2, {4, 0, 0, 1})));
}

TEST(Polyring, EmbeddingIsMultiplicativeAndDegreeBounded) {
  for (std::uint32_t q : {3u, 4u, 5u, 7u}) {
    MatrixGroup G{GroupSpec::parse(psl2(q))};
    Sampler s(GroupSpec::parse(psl2(q)), q);
    std::mt19937_64 rng(q);
    for (int t = 0; t < 100; ++t) {
      auto a = random_word(G, [&] { return s.next(); }, rng, 1 + t % 6);
      auto b = random_word(G, [&] { return s.next(); }, rng, 1 + t % 4);
      Word<SemilinearElement> ab = a;
      ab.constants.back() = G.mul(ab.constants.back(), b.constants.front());
      ab.letters.insert(ab.letters.end(), b.letters.begin(), b.letters.end());
      ab.constants.insert(ab.constants.end(), b.constants.begin() + 1, b.constants.end());
      auto ea = embed_word(a), eb = embed_word(b), eab = embed_word(ab);
      EXPECT_TRUE(up_to_sign(eab.W, ea.W * eb.W));
      for (const auto* e : {&ea, &eb, &eab}) {
        EXPECT_LE(e->max_degree, static_cast<long long>(4 * e->length));
        EXPECT_EQ(e->W.det(), P(G.field(), {1}));
      }
    }
  }
}

TEST(Polyring, GPowerReducedForm) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u})
    for (int n = 1; n <= 6; ++n) EXPECT_TRUE(gpower_reduced_form(n, ff_of_order(q))) << q << " " << n;
  EXPECT_THROW(gpower_reduced_form(0, ff_of_order(2)), std::invalid_argument);
}

TEST(Polyring, CaseSplit) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
    auto r = case_split_check(ff_of_order(q));
    EXPECT_EQ(r.failures, 0u) << q;
    EXPECT_GT(r.checked, 0u);
  }
}

TEST(Polyring, FreenessSpotCheck) {
  auto r = freeness_spot_check(3, 1000, 4, 1);
  EXPECT_EQ(r.trials, 1000u);
  EXPECT_EQ(r.nontrivial, 1000u);
  EXPECT_GT(r.borel_blocks, 0u);
  auto r5 = freeness_spot_check(5, 300, 3, 2);
  EXPECT_EQ(r5.nontrivial, r5.trials);
}

TEST(Polyring, CommutatorIsNotAnIdentity) {
  MatrixGroup G{GroupSpec::parse(psl2(7))};
  const FiniteField& F = G.field();
  auto c = linear(Mat::from_ints(F, 2, {1, 1, 0, 1}));
  auto w = one_var({G.identity(), c, G.inv(c)}, {1, -1});
  auto v = specialization_identity_test(w);
  EXPECT_FALSE(v.identity);
  EXPECT_EQ(v.stage, 1);
  ASSERT_TRUE(v.witness_alpha);
  EXPECT_FALSE(G.is_identity(evaluate1(G, w, linear(*v.witness))));
}

TEST(Polyring, GroupExponentPower) {
  MatrixGroup G{GroupSpec::parse(psl2(5))};
  Word<SemilinearElement> w = one_var(std::vector<SemilinearElement>(61, G.identity()), std::vector<int>(60, 1));
  auto v = specialization_identity_test(w);
  EXPECT_TRUE(v.identity);
  EXPECT_TRUE(v.eight_l_ge_q);
  EXPECT_LE(v.max_degree, 240);
}

TEST(Polyring, AgreesWithExhaustiveVerification) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
    const GroupSpec spec = GroupSpec::parse(psl2(q));
    MatrixGroup G(spec);
    const auto els = enumerate(spec);
    std::vector<Word<SemilinearElement>> corpus;
    if (q <= 5) corpus.push_back(psl_identity(2, q).word);
    Sampler s(spec, 7 * q);
    std::mt19937_64 rng(q);
    for (int t = 0; t < 100; ++t) corpus.push_back(random_word(G, [&] { return s.next(); }, rng, 1 + t % 4));
    if (q <= 4) {
      for (const auto& c1 : els) {
        corpus.push_back(one_var({G.identity(), c1}, {1}));
        for (const auto& c2 : els)
          for (int e : {1, -1}) corpus.push_back(one_var({G.identity(), c1, c2}, {1, e}));
      }
    }
    int identities = 0;
    for (const auto& w : corpus) {
      auto red = reduce(G, w);
      if (red.letters.empty()) continue;
      auto v = specialization_identity_test(w);
      auto truth = is_mixed_identity(G, w, els, VerifyMode::exhaustive);
      ASSERT_EQ(v.identity, truth.identity) << q;
      EXPECT_LE(v.max_degree, static_cast<long long>(4 * v.length));
      if (v.identity) {
        ++identities;
        EXPECT_GE(8 * v.length, q);
        EXPECT_FALSE(v.forced_trivial);
      }
    }
    if (q <= 5) EXPECT_GE(identities, 1) << q;
  }
}
