#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "homdiv/ring_equations.hpp"
#include "homdiv/specs.hpp"
#include "oracles.hpp"

using namespace homdiv;

namespace {

const std::vector<std::string> kMixedSystem{"x0*x0 - x0*x1 + 3*x1^-100*x0^2", "x0*x1 + x1*x0 = 0"};

std::uint64_t count_units(const FiniteRing& ring, const std::vector<std::string>& eqs, std::size_t unknowns,
                          const RingConstants& constants = {}, unsigned workers = 1) {
  const auto u = units_group(ring);
  const auto s = parse_ring_system(eqs, unknowns, ring, constants);
  return count_unit_solutions(u, Subgroup::whole(u.group), s, {}, workers).count;
}

}  // namespace

TEST(RingParser, RoundTrip) {
  const auto r = FiniteRing::modular(7);
  const auto s = parse_ring_system(kMixedSystem, 2, r);
  ASSERT_EQ(s.equations.size(), 2u);
  EXPECT_EQ(s.equations[0].monomials.size(), 3u);
  EXPECT_TRUE(s.equations[0].monomials[1].negated);
  for (const auto& eq : s.equations) {
    const auto again = parse_ring_equation(format_equation(eq), 2, r);
    EXPECT_EQ(format_equation(again), format_equation(eq));
  }
}

TEST(RingParser, Errors) {
  const auto r = FiniteRing::modular(7);
  EXPECT_THROW(parse_ring_equation("", 1, r), ParseError);
  EXPECT_THROW(parse_ring_equation("x0 = 1", 1, r), ParseError);
  EXPECT_THROW(parse_ring_equation("x3", 2, r), ParseError);
  EXPECT_THROW(parse_ring_equation("x0*q", 1, r), ParseError);
  EXPECT_THROW(parse_ring_equation("x0^", 1, r), ParseError);
  EXPECT_THROW(parse_ring_system({"x0"}, 0, r), ParseError);
  EXPECT_NO_THROW(parse_ring_equation("x0^-2 - q*x0", 1, r, {{"q", r.from_integer(2)}}));
}

TEST(Homogeneity, MixedSystemMatrices) {
  const auto s = parse_ring_system(kMixedSystem, 2, FiniteRing::modular(7));
  const auto h = analyze_homogeneity(s);
  EXPECT_EQ(h.matrices.per_equation[0].rows, (std::vector<IntVector>{{2, 0}, {1, 1}, {2, -100}}));
  EXPECT_EQ(h.matrices.per_equation[1].rows, (std::vector<IntVector>{{1, 1}, {1, 1}}));
  EXPECT_EQ(h.matrices.stacked.rows, (std::vector<IntVector>{{0, 0}, {-1, 1}, {0, -100}, {0, 0}, {0, 0}}));
  EXPECT_EQ(h.rank, 2u);
  EXPECT_FALSE(h.assignment);
}

TEST(Homogeneity, Examples) {
  const auto r = FiniteRing::modular(7);
  EXPECT_FALSE(homogeneity_check(parse_ring_system({"x0^2 + x0"}, 1, r)));
  const auto pyth = homogeneity_check(parse_ring_system({"x0^2 + x1^2 - x2^2"}, 3, r));
  ASSERT_TRUE(pyth);
  EXPECT_EQ(pyth->degrees, (IntVector{1, 1, 1}));
  EXPECT_EQ(pyth->equation_degrees, (std::vector<std::int64_t>{2}));
  const auto mixed = homogeneity_check(parse_ring_system({"x0^2*x1 - x1^3*x0^-1"}, 2, r));
  ASSERT_TRUE(mixed);
  const auto degs = monomial_degrees(parse_ring_equation("x0^2*x1 - x1^3*x0^-1", 2, r), mixed->degrees);
  EXPECT_EQ(degs[0], degs[1]);
}

TEST(Homogeneity, PropositionBoundImpliesHomogeneous) {
  std::mt19937 rng(7);
  const auto r = FiniteRing::modular(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    RingSystem s;
    s.unknowns = n;
    std::size_t budget = n - 1;
    while (budget > 0 || s.equations.empty()) {
      const std::size_t extra = std::min<std::size_t>(budget, rng() % 3);
      RingEquation eq;
      for (std::size_t m = 0; m <= extra; ++m) {
        RingMonomial mono;
        for (int f = 0; f < 3; ++f) mono.factors.push_back(PowerFactor{rng() % n, std::int64_t(rng() % 9) - 4});
        eq.monomials.push_back(mono);
      }
      s.equations.push_back(eq);
      budget -= extra;
      if (extra == 0 && rng() % 2) break;
    }
    ASSERT_TRUE(proposition_bound_holds(s));
    EXPECT_TRUE(homogeneity_check(s));
  }
}

TEST(RingPowers, NegativeAndReduced) {
  const auto r = FiniteRing::modular(13);
  for (std::int64_t a = 1; a < 13; ++a) {
    EXPECT_EQ(ring_pow(r, r.from_integer(a), 2018), r.from_integer(oracle::powmod(a, 2018, 13)));
    EXPECT_EQ(r.mul(ring_pow(r, r.from_integer(a), -3), ring_pow(r, r.from_integer(a), 3)), r.one());
  }
  EXPECT_THROW(ring_pow(FiniteRing::modular(6), FiniteRing::modular(6).from_integer(2), -1), NonInvertibleBase);
  EXPECT_EQ(ring_pow(FiniteRing::modular(6), FiniteRing::modular(6).from_integer(2), 0), FiniteRing::modular(6).one());
}

TEST(RingCounts, PythagoreanModular) {
  const std::vector<std::string> pyth{"x0^2 + x1^2 - x2^2"};
  EXPECT_EQ(count_units(FiniteRing::modular(5), pyth, 3), 0u);
  EXPECT_EQ(count_units(FiniteRing::modular(7), pyth, 3), 24u);
  for (std::int64_t n = 2; n <= 20; ++n) {
    const auto u = units_group(FiniteRing::modular(n));
    const auto s = parse_ring_system(pyth, 3, u.ring);
    const auto rep = count_unit_solutions(u, Subgroup::whole(u.group), s);
    EXPECT_EQ(rep.count, oracle::pythagorean_units(n)) << n;
    EXPECT_TRUE(rep.divisible) << n;
    EXPECT_EQ(rep.divisor, oracle::euler_phi(std::uint64_t(n))) << n;
  }
}

TEST(RingCounts, PythagoreanMatrices) {
  const auto u = units_group(FiniteRing::matrix(2, 2));
  const auto rep =
      count_unit_solutions(u, Subgroup::whole(u.group), parse_ring_system({"x0^2 + x1^2 - x2^2"}, 3, u.ring));
  EXPECT_EQ(rep.count, oracle::pythagorean_mat2(2));
  EXPECT_EQ(rep.divisor, 6u);
  EXPECT_TRUE(rep.divisible);
}

TEST(RingCounts, CoefficientsShrinkDivisor) {
  const auto u = units_group(FiniteRing::matrix(2, 2));
  const RingConstants c{{"e", RingElement{1, 0, 0, 0}}};
  const auto s = parse_ring_system({"x0*e - e*x0"}, 1, u.ring, c);
  const auto rep = count_unit_solutions(u, Subgroup::whole(u.group), s);
  EXPECT_EQ(rep.divisor, 1u);
  std::uint64_t brute = 0;
  for (const auto& x : u.to_ring) brute += u.ring.mul(x, c.at("e")) == u.ring.mul(c.at("e"), x);
  EXPECT_EQ(rep.count, brute);
}

TEST(RingCounts, InvariantUnderReorderingAndWorkers) {
  const auto r = FiniteRing::modular(21);
  const std::vector<std::string> a{"x0^2 + x1^2 - x2^2", "x0*x1 - x2^2*x1^-1*x0"};
  const std::vector<std::string> b{"x1*x0 - x0*x2^2*x1^-1", "-x2^2 + x1^2 + x0^2"};
  const auto base = count_units(r, a, 3);
  EXPECT_EQ(count_units(r, b, 3), base);
  EXPECT_EQ(count_units(r, a, 3, {}, 4), base);
}

TEST(Lemma1, GroupInstances) {
  std::mt19937 rng(3);
  const auto g = FiniteGroup::symmetric(4);
  const GroupMonoid m{g};
  std::size_t checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Lemma1Instance<GroupMonoid> inst;
    inst.a = Element(rng() % g.order());
    inst.h = Element(rng() % g.order());
    std::vector<Element> conj;
    for (std::uint64_t s = 0; s < g.element_order(inst.a); ++s) conj.push_back(g.conj(inst.h, g.pow(inst.a, std::int64_t(s))));
    const auto c = centralizer(g, conj);
    const std::size_t len = rng() % 4;
    for (std::size_t i = 0; i < len; ++i) inst.exponents.push_back(std::int64_t(rng() % 7) - 3);
    for (std::size_t i = 0; i <= len; ++i) inst.b.push_back(c.elements()[rng() % c.order()]);
    EXPECT_TRUE(lemma1_verify(m, inst));
    ++checked;
  }
  EXPECT_EQ(checked, 300u);
}

TEST(Lemma1, RingInstancesAndViolation) {
  const auto r = FiniteRing::matrix(2, 3);
  const RingMonoid m{r};
  Lemma1Instance<RingMonoid> inst;
  inst.a = RingElement{1, 1, 0, 1};
  inst.h = r.from_integer(2);
  inst.exponents = {2, -1};
  inst.b = {RingElement{1, 2, 0, 0}, RingElement{0, 0, 0, 0}, RingElement{2, 1, 1, 1}};
  EXPECT_TRUE(lemma1_verify(m, inst));
  inst.h = RingElement{0, 1, 1, 0};
  EXPECT_THROW(lemma1_verify(m, inst), HypothesisViolated);
  inst.h = RingElement{1, 0, 0, 0};
  EXPECT_THROW(lemma1_verify(m, inst), HypothesisViolated);
}
