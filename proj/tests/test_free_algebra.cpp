#include "gen.hpp"
#include "oracles.hpp"
#include "subst/free_algebra.hpp"

#include <gtest/gtest.h>

using namespace subst;

TEST(FreeAlgebra, AtomCountsMatchTheOracle) {
  struct Case {
    SigKind kind;
    int n, m;
  };
  for (auto c : {Case{SigKind::TA, 2, 1}, Case{SigKind::TA, 2, 2}, Case{SigKind::SA, 2, 1}, Case{SigKind::TA, 3, 1}}) {
    auto h = build_free(make_signature(c.n, c.kind), c.m);
    auto s = free_stats(h);
    EXPECT_TRUE(s.exhaustive);
    EXPECT_EQ(s.unrealized, 0u);
    EXPECT_EQ(s.atoms, oracle::free_atom_count(c.n, generator_letters(c.n, c.kind), c.m));
    EXPECT_EQ(s.cardinality, BigInt(1) << static_cast<unsigned>(s.atoms));
  }
}

TEST(FreeAlgebra, PinnedCardinalities) {
  EXPECT_EQ(free_stats(build_free(make_signature(2, SigKind::TA), 1)).cardinality, 16);
  EXPECT_EQ(free_stats(build_free(make_signature(2, SigKind::TA), 2)).cardinality, 65536);
  EXPECT_EQ(free_stats(build_free(make_signature(2, SigKind::SA), 1)).cardinality, 65536);
  EXPECT_EQ(free_stats(build_free(make_signature(3, SigKind::TA), 1)).atoms, 64u);
  auto s = free_stats(build_free(make_signature(2, SigKind::TA), 1));
  EXPECT_GT(s.cardinality, s.stated_bound);
}

TEST(FreeAlgebra, SampledStatsAboveTheExhaustiveCap) {
  auto h = build_free(make_signature(4, SigKind::TA), 1);
  EXPECT_EQ(h.alphabet.size(), 24u);
  auto s = free_stats(h, 3, 12, 200);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_EQ(s.checked, 200u);
  EXPECT_EQ(s.unrealized, 0u);
  EXPECT_EQ(s.atoms, std::uint64_t{1} << 24);
}

TEST(FreeAlgebra, Limits) {
  EXPECT_THROW(build_free(make_signature(3, SigKind::SAD), 1), Error);
  EXPECT_THROW(build_free(make_signature(3, SigKind::SA), 1), BudgetExceeded);
  EXPECT_THROW(build_free(make_signature(4, SigKind::TA), 2), BudgetExceeded);
  EXPECT_THROW(build_free(make_signature(2, SigKind::TA), 0), Error);
  auto h = build_free(make_signature(2, SigKind::TA), 1);
  EXPECT_THROW(free_element(h, Term::var(1)), Error);
}

TEST(FreeAlgebra, ElementsIdentifyEquivalentTerms) {
  gen::Rng rng(51);
  const auto sig = make_signature(2, SigKind::SA);
  auto h = build_free(sig, 2);
  for (int k = 0; k < 200; ++k) {
    auto eq = gen::equation(rng, sig, 2, 4);
    const bool same = free_element(h, eq.lhs) == free_element(h, eq.rhs);
    EXPECT_EQ(same, decide_equation(eq, sig).valid()) << to_string(eq);
  }
}

TEST(FreeAlgebra, SubstitutionActionMatchesTerms) {
  gen::Rng rng(52);
  const auto sig = make_signature(3, SigKind::TA);
  auto h = build_free(sig, 1);
  for (int k = 0; k < 100; ++k) {
    auto t = gen::term(rng, sig, 1, 4);
    auto l = gen::letter(rng, sig);
    EXPECT_EQ(subst_action(h, free_element(h, t), l.value(3)), free_element(h, Term::subst(l, t)));
  }
  EXPECT_THROW(subst_action(h, free_generator(h, 0), Transformation::replacement(3, 0, 1)), Error);
}

TEST(FreeAlgebra, AtomsAreDisjointAndCoverTop) {
  auto h = build_free(make_signature(2, SigKind::TA), 1);
  auto atoms = free_atoms(h);
  ASSERT_EQ(atoms.size(), 4u);
  Bits all(atoms[0].table.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    EXPECT_EQ(atoms[a].table.count(), 1u);
    all |= atoms[a].table;
    for (std::size_t b = a + 1; b < atoms.size(); ++b) EXPECT_TRUE((atoms[a].table & atoms[b].table).none());
  }
  EXPECT_TRUE(all.all());
}

TEST(Interpolation, SimpleExample) {
  const auto sig = make_signature(2, SigKind::TA);
  auto res = interpolate(parse_term("x0 & x1", sig), parse_term("x0 | x2", sig), sig);
  EXPECT_EQ(res.shared, (std::set<int>{0}));
  EXPECT_EQ(to_string(res.interpolant), "x0");
  EXPECT_TRUE(res.lower.valid());
  EXPECT_TRUE(res.upper.valid());
}

TEST(Interpolation, RandomSplitImplications) {
  gen::Rng rng(53);
  for (auto sig : {make_signature(2, SigKind::TA), make_signature(2, SigKind::SA), make_signature(3, SigKind::TA),
                   make_signature(3, SigKind::SA)})
    for (int k = 0; k < 25; ++k) {
      auto [a, c, s] = gen::split_implication(rng, sig);
      auto res = interpolate(a, c, sig);
      EXPECT_EQ(res.shared, (std::set<int>{1}));
      for (int v : vars_of(res.interpolant)) EXPECT_EQ(v, 1);
      EXPECT_TRUE(res.lower.valid()) << to_string(a);
      EXPECT_TRUE(res.upper.valid()) << to_string(c);
      // strongest: below every other shared-vocabulary upper bound of a
      for (int j = 0; j < 4; ++j) {
        auto b = gen::rename(gen::term(rng, sig, 1, 3), {1});
        if (decide_equation(below(a, b), sig).valid()) {
          EXPECT_TRUE(decide_equation(below(res.interpolant, b), sig).valid());
        }
      }
    }
}

TEST(Interpolation, ExplicitSharedVocabulary) {
  const auto sig = make_signature(2, SigKind::TA);
  auto a = parse_term("x0 & x1 & s[0,1] x1", sig);
  auto c = parse_term("x1", sig);
  auto res = interpolate(a, c, sig, std::set<int>{1});
  EXPECT_EQ(vars_of(res.interpolant), (std::set<int>{1}));
  EXPECT_TRUE(res.lower.valid() && res.upper.valid());
  auto none = interpolate(parse_term("x0 & ~x0", sig), parse_term("x1", sig), sig);
  EXPECT_EQ(none.interpolant, Term::bottom());
}

TEST(Interpolation, InvalidPremiseCarriesACountermodel) {
  const auto sig = make_signature(2, SigKind::TA);
  auto a = parse_term("x0", sig), c = parse_term("x1", sig);
  try {
    interpolate(a, c, sig);
    FAIL();
  } catch (const PremiseNotValid& e) {
    ASSERT_TRUE(e.result().invalid());
    EXPECT_TRUE(replay(below(a, c), *e.result().countermodel));
  }
  EXPECT_THROW(interpolate(Term::diag(0, 1), Term::top(), make_signature(2, SigKind::SAD)), Error);
}
