#include <gtest/gtest.h>

#include "homdiv/specs.hpp"
#include "homdiv/theorems.hpp"
#include "oracles.hpp"

using namespace homdiv;

namespace {

TheoremTask task(TheoremKind kind, const FiniteGroup& g) {
  TheoremTask t;
  t.kind = kind;
  t.group = g;
  return t;
}

}  // namespace

TEST(ExponentMatrix, Rows) {
  const auto s = GroupEquationSystem::parse(2, {{"c", 1}}, {"x0 x1 x0^-1 x1^-1 c", "x0^2 x1", "x0^3 x1^-3"});
  const auto m = exponent_matrix(s);
  EXPECT_EQ(m.rows, (std::vector<IntVector>{{0, 0}, {2, 1}, {3, -3}}));
}

TEST(GroupEquations, CommutatorSystem) {
  const auto g = FiniteGroup::symmetric(3);
  const auto r = count_equation_solutions(g, GroupEquationSystem::parse(2, {}, {"x0 x1 x0^-1 x1^-1"}));
  EXPECT_EQ(r.count, 18u);
  EXPECT_EQ(r.divisor, 6u);
  EXPECT_TRUE(r.divisible);
  EXPECT_TRUE(r.theorem_applicable);
  EXPECT_EQ(*r.quotient, 3u);
}

TEST(GroupEquations, WithCoefficient) {
  const auto g = FiniteGroup::symmetric(3);
  const Element c = *g.find_label("(1,3,2)");
  const auto r = count_equation_solutions(g, GroupEquationSystem::parse(2, {{"c", c}}, {"x0 x1 x0^-1 x1^-1 c"}));
  std::uint64_t brute = 0;
  for (Element a = 0; a < 6; ++a)
    for (Element b = 0; b < 6; ++b) brute += g.mul(g.mul(g.mul(g.mul(a, b), g.inv(a)), g.inv(b)), c) == 0;
  EXPECT_EQ(r.count, brute);
  EXPECT_EQ(r.divisor, 3u);
  EXPECT_TRUE(r.divisible);
}

TEST(GroupEquations, RankFailureStillCounts) {
  const auto g = FiniteGroup::symmetric(3);
  const auto r = count_equation_solutions(g, GroupEquationSystem::parse(1, {{"c", *g.find_label("(1,2,3)")}}, {"x0^2 c^-1"}));
  EXPECT_FALSE(r.theorem_applicable);
  EXPECT_EQ(r.count, 1u);
}

TEST(GroupEquations, RenamingUnknownsKeepsCount) {
  const auto g = FiniteGroup::dihedral(4);
  const auto a = count_equation_solutions(g, GroupEquationSystem::parse(3, {}, {"x0 x1^2 x2^-1 x1^-2", "x2 x0 x2^-1 x0^-1"}));
  const auto b = count_equation_solutions(g, GroupEquationSystem::parse(3, {}, {"x2 x0^2 x1^-1 x0^-2", "x1 x2 x1^-1 x2^-1"}));
  EXPECT_EQ(a.count, b.count);
  EXPECT_TRUE(a.divisible);
}

TEST(Roots, SpecExamples) {
  const auto s3 = FiniteGroup::symmetric(3);
  const auto a3 = subgroup_closure(s3, {*s3.find_label("(1,2,3)")});
  EXPECT_EQ(count_nth_roots(s3, a3, 2).count, 6u);
  EXPECT_EQ(count_nth_roots(s3, a3, 1).count, 3u);
  const auto c4 = FiniteGroup::cyclic(4);
  EXPECT_EQ(count_nth_roots(c4, subgroup_closure(c4, {2}), 2).count, 4u);
  for (std::int64_t n = 1; n <= 6; ++n) EXPECT_EQ(count_nth_roots(s3, Subgroup::whole(s3), n).count, 6u);
  EXPECT_THROW(count_nth_roots(c4, a3, 2), ForeignSubgroup);
}

TEST(Hall, FormulaValues) {
  EXPECT_EQ(hall_count(FiniteGroup::cyclic(1), 3), 1u);
  EXPECT_EQ(hall_count(FiniteGroup::cyclic(5), 2), 24u);
  EXPECT_EQ(hall_count(FiniteGroup::symmetric(3), 2), 18u);
  for (const auto& [spec, g] : oracle::catalog())
    if (g.order() <= 12) {
      for (std::size_t n = 1; n <= 2; ++n) EXPECT_EQ(hall_count(g, std::int64_t(n)), oracle::generating_tuples(g, n)) << spec;
    }
  EXPECT_THROW(hall_count(FiniteGroup::symmetric(5), 2), OrderBoundExceeded);
}

TEST(Tasks, GeneratingTuplesAndEpimorphisms) {
  const auto s3 = FiniteGroup::symmetric(3);
  auto t = task(TheoremKind::GeneratingTuples, s3);
  t.n = 2;
  const auto r = run_theorem_task(t);
  EXPECT_EQ(r.count, 18u);
  EXPECT_EQ(r.divisor, 3u);
  EXPECT_TRUE(r.divisible);
  ASSERT_EQ(r.supplementary.size(), 1u);
  EXPECT_EQ(r.supplementary[0].divisor, 6u);
  EXPECT_TRUE(r.supplementary[0].divisible);

  auto e = task(TheoremKind::Epimorphisms, s3);
  e.presentation = IndexedPresentation::free(2);
  EXPECT_EQ(run_theorem_task(e).count, 18u);
}

TEST(Tasks, AllHomsAndDoubleCoset) {
  const auto s3 = FiniteGroup::symmetric(3);
  auto t = task(TheoremKind::AllHoms, s3);
  t.presentation = IndexedPresentation::free(2);
  const auto r = run_theorem_task(t);
  EXPECT_EQ(r.count, 36u);
  EXPECT_EQ(r.divisor, 6u);

  auto d = task(TheoremKind::DoubleCoset, s3);
  d.presentation = IndexedPresentation::free(1);
  d.subgroup = subgroup_closure(s3, {*s3.find_label("(1,2)")});
  d.words = {Word::generator(0)};
  d.coset_representatives = {*s3.find_label("(1,2,3)")};
  const auto dr = run_theorem_task(d);
  EXPECT_EQ(dr.count, 4u);
  EXPECT_EQ(dr.divisor, 2u);
  EXPECT_TRUE(dr.divisible);
}

TEST(Tasks, InjectiveRestrictionSemidirect) {
  // F = Z x sym:3 (trivial action), W = A = the order-3 subgroup of K.
  const auto s3 = FiniteGroup::symmetric(3);
  std::vector<Element> identity(6);
  for (Element x = 0; x < 6; ++x) identity[x] = x;
  const auto p = IndexedPresentation::semidirect(s3, identity);
  const auto a = subgroup_closure(s3, {*s3.find_label("(1,2,3)")});
  auto t = task(TheoremKind::InjectiveRestriction, s3);
  t.presentation = p;
  t.subgroup = a;
  for (Element x : a.elements()) t.words.push_back(p->base_element_word(x));
  const auto r = run_theorem_task(t);
  EXPECT_EQ(r.count, 6u);
  EXPECT_EQ(r.divisor, 6u);
  EXPECT_TRUE(r.divisible);
  EXPECT_TRUE(r.theorem_applicable);

  t.image_equal = true;
  const auto b = run_theorem_task(t);
  EXPECT_TRUE(b.divisible);
  EXPECT_LE(b.count, r.count);
}

TEST(Tasks, InjectiveRestrictionSpecExample) {
  // With W = all of K = sym:3 mapped injectively into A = sym:3, the base
  // map is an automorphism and t must centralize it.
  const auto s3 = FiniteGroup::symmetric(3);
  std::vector<Element> identity(6);
  for (Element x = 0; x < 6; ++x) identity[x] = x;
  const auto p = IndexedPresentation::semidirect(s3, identity);
  auto t = task(TheoremKind::InjectiveRestriction, s3);
  t.presentation = p;
  t.subgroup = Subgroup::whole(s3);
  for (Element x = 0; x < 6; ++x) t.words.push_back(p->base_element_word(x));
  const auto r = run_theorem_task(t);
  EXPECT_EQ(r.count, 6u);
  EXPECT_EQ(r.divisor, 6u);
}

TEST(Tasks, ImageEquals) {
  const auto s3 = FiniteGroup::symmetric(3);
  auto t = task(TheoremKind::ImageEquals, s3);
  t.presentation = IndexedPresentation::free(2);
  t.subgroup = subgroup_closure(s3, {*s3.find_label("(1,2,3)")});
  t.words = {Word::generator(0)};
  const auto r = run_theorem_task(t);
  EXPECT_EQ(r.count, 2u * 6u);
  EXPECT_EQ(r.divisor, 1u);
}

TEST(Tasks, DivisorDividesAcrossCatalog) {
  for (const auto& [spec, g] : oracle::catalog()) {
    for (std::int64_t n = 1; n <= 2; ++n) {
      auto t = task(TheoremKind::GeneratingTuples, g);
      t.n = n;
      const auto r = run_theorem_task(t);
      EXPECT_TRUE(r.divisible) << spec;
      EXPECT_EQ(r.divisor, oracle::derived_order(g)) << spec;
      for (const auto& s : r.supplementary) EXPECT_TRUE(s.divisible) << spec;
    }
  }
}

TEST(Tasks, HarnessAttachedWhenEnabled) {
  const auto s3 = FiniteGroup::symmetric(3);
  auto t = task(TheoremKind::GeneratingTuples, s3);
  t.n = 2;
  t.harness.enabled = true;
  const auto r = run_theorem_task(t);
  ASSERT_TRUE(r.harness);
  EXPECT_EQ(r.harness->classes.size(), 6u);
  EXPECT_TRUE(r.harness->conditions_I_holds && r.harness->conditions_II_holds);
  t.harness.max_homs = 5;
  const auto capped = run_theorem_task(t);
  EXPECT_FALSE(capped.harness);
  EXPECT_FALSE(capped.harness_note.empty());
}
