#include <gtest/gtest.h>

#include "homdiv/ring.hpp"
#include "homdiv/specs.hpp"
#include "oracles.hpp"

using namespace homdiv;

namespace {

// Two-sided inverse by exhaustive search.
std::optional<RingElement> search_inverse(const FiniteRing& r, const RingElement& a) {
  for (std::uint64_t i = 0; i < r.cardinality(); ++i) {
    const auto b = r.element_at(i);
    if (r.mul(a, b) == r.one() && r.mul(b, a) == r.one()) return b;
  }
  return std::nullopt;
}

}  // namespace

TEST(RingSpecs, Cardinalities) {
  EXPECT_EQ(build_ring("zmod:6").cardinality(), 6u);
  EXPECT_EQ(build_ring("mat:2:zmod:2").cardinality(), 16u);
  const auto p = build_ring("prod:zmod:2;zmod:3");
  EXPECT_EQ(p.cardinality(), 6u);
  EXPECT_EQ(p.format(p.one()), "[1,1]");
  EXPECT_EQ(build_ring("prod:(prod:zmod:2;zmod:2);zmod:3").describe(), "prod:(prod:zmod:2;zmod:2);zmod:3");
  EXPECT_THROW(build_ring("mat:3:zmod:4"), CardinalityBoundExceeded);
  EXPECT_NO_THROW(build_ring("mat:3:zmod:4", 1u << 20));
  EXPECT_THROW(build_ring("zmod"), ParseError);
  EXPECT_THROW(build_ring("mat:2:zmd:2"), ParseError);
  EXPECT_THROW(build_ring("prod:zmod:2"), ParseError);
}

TEST(RingArithmetic, Inverses) {
  const auto z7 = FiniteRing::modular(7);
  EXPECT_EQ(*z7.try_inverse(z7.from_integer(3)), z7.from_integer(5));
  const auto z6 = FiniteRing::modular(6);
  EXPECT_FALSE(z6.try_inverse(z6.from_integer(2)));
  const auto m = FiniteRing::matrix(2, 2);
  const RingElement u{1, 1, 0, 1};
  EXPECT_EQ(*m.try_inverse(u), u);
}

TEST(RingArithmetic, InverseMatchesSearch) {
  for (const auto* spec : {"zmod:1", "zmod:12", "mat:2:zmod:2", "mat:2:zmod:3", "prod:zmod:4;zmod:3", "prod:zmod:2;mat:2:zmod:2"}) {
    const auto r = build_ring(spec);
    for (std::uint64_t i = 0; i < r.cardinality(); ++i) {
      const auto a = r.element_at(i);
      const auto fast = r.try_inverse(a);
      EXPECT_EQ(fast, search_inverse(r, a)) << spec << " " << r.format(a);
      if (fast) {
        EXPECT_EQ(r.mul(a, *fast), r.one());
      }
    }
  }
}

TEST(RingArithmetic, MatrixMultiplication) {
  const auto m = FiniteRing::matrix(2, 5);
  const RingElement a{1, 2, 3, 4}, b{0, 1, 1, 0};
  EXPECT_EQ(m.mul(a, b), (RingElement{2, 1, 4, 3}));
  EXPECT_EQ(m.mul(b, a), (RingElement{3, 4, 1, 2}));
  EXPECT_EQ(m.format(a), "[[1,2],[3,4]]");
}

TEST(UnitGroups, SpecExamples) {
  const auto z8 = units_group(FiniteRing::modular(8));
  EXPECT_EQ(z8.group.order(), 4u);
  EXPECT_EQ(z8.group.exponent(), 2u);
  const auto z7 = units_group(FiniteRing::modular(7));
  EXPECT_EQ(z7.group.order(), 6u);
  EXPECT_TRUE(z7.group.is_abelian());
  EXPECT_EQ(z7.group.element_order(*z7.from_ring(z7.ring.from_integer(3))), 6u);
  const auto gl = units_group(FiniteRing::matrix(2, 2));
  EXPECT_EQ(gl.group.order(), 6u);
  EXPECT_FALSE(gl.group.is_abelian());
  EXPECT_EQ(gl.to_ring[0], gl.ring.one());
}

TEST(UnitGroups, EmbeddingAndTotient) {
  for (std::int64_t n = 1; n <= 40; ++n) {
    const auto u = units_group(FiniteRing::modular(n));
    EXPECT_EQ(u.group.order(), oracle::euler_phi(std::uint64_t(n))) << n;
  }
  for (const auto* spec : {"mat:2:zmod:3", "prod:zmod:4;zmod:9", "prod:zmod:2;mat:2:zmod:2"}) {
    const auto u = units_group(build_ring(spec));
    EXPECT_NO_THROW(FiniteGroup::from_table(u.group.order(), std::vector<Element>(u.group.table().begin(), u.group.table().end())));
    for (Element a = 0; a < u.group.order(); ++a)
      for (Element b = 0; b < u.group.order(); ++b)
        EXPECT_EQ(u.to_ring[u.group.mul(a, b)], u.ring.mul(u.to_ring[a], u.to_ring[b]));
  }
  EXPECT_EQ(units_group(FiniteRing::matrix(2, 3)).group.order(), 48u);
}

TEST(UnitGroups, CardinalityBound) {
  EXPECT_THROW(units_group(FiniteRing::matrix(3, 3)), CardinalityBoundExceeded);
}

TEST(Centralizer, Examples) {
  const auto gl = units_group(FiniteRing::matrix(2, 2));
  const auto whole = Subgroup::whole(gl.group);
  const std::vector<RingElement> e11{{1, 0, 0, 0}};
  EXPECT_EQ(multiplicative_centralizer(gl, e11, whole).order(), 1u);
  EXPECT_EQ(multiplicative_centralizer(gl, {}, whole).order(), 6u);
  const std::vector<RingElement> central{gl.ring.from_integer(1), gl.ring.from_integer(0)};
  EXPECT_EQ(multiplicative_centralizer(gl, central, whole).order(), 6u);
}

TEST(Centralizer, MonotoneInCoefficients) {
  const auto gl = units_group(FiniteRing::matrix(2, 3));
  const auto whole = Subgroup::whole(gl.group);
  std::vector<RingElement> coeffs;
  std::size_t last = whole.order();
  for (std::uint64_t i : {5u, 17u, 40u, 71u}) {
    coeffs.push_back(gl.ring.element_at(i));
    const auto c = multiplicative_centralizer(gl, coeffs, whole);
    EXPECT_LE(c.order(), last);
    last = c.order();
  }
}
