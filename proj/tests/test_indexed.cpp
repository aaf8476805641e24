#include <gtest/gtest.h>

#include <random>

#include "homdiv/homomorphisms.hpp"
#include "homdiv/integer_matrix.hpp"
#include "homdiv/presentation.hpp"
#include "homdiv/specs.hpp"
#include "oracles.hpp"

using namespace homdiv;

namespace {

// Word value by repeated multiplication, one letter power at a time.
Element naive_eval(const FiniteGroup& g, const std::vector<Element>& images, const Word& w) {
  Element acc = 0;
  for (const auto& l : w.letters) {
    const Element base = l.exponent < 0 ? g.inv(images[l.generator]) : images[l.generator];
    for (std::int64_t k = 0; k < (l.exponent < 0 ? -l.exponent : l.exponent); ++k) acc = g.mul(acc, base);
  }
  return acc;
}

std::uint64_t naive_hom_count(const Presentation& p, const FiniteGroup& g) {
  std::uint64_t count = 0;
  oracle::for_each_tuple(g.order(), p.generator_count(), [&](const std::vector<Element>& t) {
    for (std::size_t i = 0; i < p.generator_count(); ++i)
      if (p.is_fixed(i) && t[i] != *p.fixed_images[i]) return;
    for (const auto& r : p.relators)
      if (naive_eval(g, t, r) != 0) return;
    ++count;
  });
  return count;
}

}  // namespace

TEST(IntegerMatrix, RankAndKernel) {
  const auto worked = integer_rank_and_kernel(IntMatrix{2, {{0, 0}, {0, -1}, {0, -100}, {0, 0}, {0, 0}}});
  EXPECT_EQ(worked.rank, 1u);
  ASSERT_TRUE(worked.kernel);
  EXPECT_EQ(*worked.kernel, (IntVector{1, 0}));

  const auto zero = integer_rank_and_kernel(IntMatrix{3, {{0, 0, 0}}});
  EXPECT_EQ(zero.rank, 0u);
  EXPECT_EQ(*zero.kernel, (IntVector{1, 0, 0}));

  const auto id = integer_rank_and_kernel(IntMatrix{2, {{1, 0}, {0, 1}}});
  EXPECT_EQ(id.rank, 2u);
  EXPECT_FALSE(id.kernel);

  const auto k = integer_rank_and_kernel(IntMatrix{3, {{2, 4, 6}, {1, 1, 1}}});
  EXPECT_EQ(k.rank, 2u);
  ASSERT_TRUE(k.kernel);
  EXPECT_EQ(*k.kernel, (IntVector{1, -2, 1}));
}

TEST(IntegerMatrix, RandomKernelsAreKernels) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9), dim(1, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t cols = std::size_t(dim(rng)), rows = std::size_t(dim(rng));
    IntMatrix m{cols, {}};
    for (std::size_t r = 0; r < rows; ++r) {
      IntVector row(cols);
      for (auto& x : row) x = entry(rng);
      m.rows.push_back(row);
    }
    const auto rk = integer_rank_and_kernel(m);
    EXPECT_LE(rk.rank, std::min(rows, cols));
    EXPECT_EQ(rk.kernel.has_value(), rk.rank < cols);
    if (!rk.kernel) continue;
    EXPECT_EQ(detail::content(*rk.kernel), 1);
    for (const auto& row : m.rows) {
      std::int64_t dot = 0;
      for (std::size_t j = 0; j < cols; ++j) dot += row[j] * (*rk.kernel)[j];
      EXPECT_EQ(dot, 0);
    }
  }
}

TEST(IntegerMatrix, ExtendedGcdAndOverflow) {
  const auto [g, u, v] = extended_gcd(240, 46);
  EXPECT_EQ(g, 2);
  EXPECT_EQ(240 * u + 46 * v, 2);
  EXPECT_THROW(detail::checked_mul(INT64_MAX, 2), ArithmeticOverflow);
}

TEST(Words, ParseFormatRoundTrip) {
  const std::vector<std::string> names{"x", "y", "a"};
  const auto w = parse_word("x^2 y^-1 a", names);
  EXPECT_EQ(w.letters.size(), 3u);
  EXPECT_EQ(format_word(w, names), "x^2 y^-1 a");
  EXPECT_EQ(format_word(parse_word("1", names), names), "1");
  EXPECT_EQ(parse_word("x*y*x^-1", names).letters.size(), 3u);
  EXPECT_THROW(parse_word("z", names), ParseError);
  EXPECT_THROW(parse_word("x^0", names), ParseError);
  EXPECT_EQ(w.exponent_sums(3), (IntVector{2, -1, 1}));
  EXPECT_EQ((w * w.inverse()).reduced().letters.size(), 0u);
}

TEST(Words, DegreeAdditivity) {
  std::mt19937 rng(3);
  const IntVector d{2, -3, 1};
  for (int trial = 0; trial < 200; ++trial) {
    Word a, b;
    for (int i = 0; i < 5; ++i) {
      a.letters.push_back({std::size_t(rng() % 3), std::int64_t(rng() % 7) - 3});
      b.letters.push_back({std::size_t(rng() % 3), std::int64_t(rng() % 7) - 3});
    }
    EXPECT_EQ((a * b).degree(d), a.degree(d) + b.degree(d));
  }
}

TEST(Presentations, DegreeDerivation) {
  const auto f2 = IndexedPresentation::free(2);
  EXPECT_EQ(f2->degrees(), (IntVector{1, 0}));
  Presentation p;
  p.generators = {"x", "y"};
  p.relators = {parse_word("x y x^-1 y^-1", p.generators)};
  EXPECT_EQ(IndexedPresentation::derive(p)->degrees(), (IntVector{1, 0}));
  p.relators = {parse_word("x^2 y^-3", p.generators)};
  const auto d = IndexedPresentation::derive(p)->degrees();
  EXPECT_EQ(d, (IntVector{3, 2}));
  p.relators = {parse_word("x", p.generators), parse_word("y", p.generators)};
  EXPECT_THROW(IndexedPresentation::derive(p), NotIndexable);
}

TEST(Presentations, DegreeOneWordAndKernelGenerators) {
  const IntVector d{6, 10, 15};
  const auto t = degree_one_word(d);
  EXPECT_EQ(t.degree(d), 1);
  for (const auto& z : kernel_generator_words(d, t)) EXPECT_EQ(z.degree(d), 0);
  EXPECT_THROW(degree_one_word(IntVector{2, 4}), NotIndexable);
}

TEST(Presentations, FixedImageNeedsDegreeZero) {
  const auto g = FiniteGroup::symmetric(3);
  Presentation p;
  p.generators = {"x", "c"};
  p.fixed_images = {std::nullopt, Element(1)};
  p.coefficient_group = g;
  EXPECT_THROW(IndexedPresentation::create(p, {1, 1}), NotIndexable);
  EXPECT_EQ(IndexedPresentation::derive(p)->degrees(), (IntVector{1, 0}));
}

TEST(Enumeration, FreeGroupGivesAllTuples) {
  const auto g = FiniteGroup::symmetric(3);
  EXPECT_EQ(count_images(IndexedPresentation::free(3)->presentation(), g), 216u);
}

TEST(Enumeration, MatchesNaiveCounts) {
  const auto c4 = FiniteGroup::cyclic(4);
  const auto c3 = FiniteGroup::cyclic(3);
  const auto aut = std::vector<Element>{0, 2, 1};
  std::vector<std::pair<Presentation, FiniteGroup>> cases;
  Presentation comm;
  comm.generators = {"x", "y"};
  comm.relators = {parse_word("x y x^-1 y^-1", comm.generators)};
  Presentation bs;
  bs.generators = {"x", "y"};
  bs.relators = {parse_word("y^-1 x y x^-2", bs.generators)};
  for (const auto& [spec, g] : oracle::catalog()) {
    if (g.order() > 12) continue;
    EXPECT_EQ(count_images(comm, g), naive_hom_count(comm, g)) << spec;
    EXPECT_EQ(count_images(comm, g), oracle::commuting_pairs(g)) << spec;
    EXPECT_EQ(count_images(bs, g), naive_hom_count(bs, g)) << spec;
  }
  const auto sd = IndexedPresentation::semidirect(c3, aut);
  EXPECT_EQ(count_images(sd->presentation(), c4), naive_hom_count(sd->presentation(), c4));
}

TEST(Enumeration, PruneFilterAndWorkersAgree) {
  const auto g = FiniteGroup::symmetric(3);
  Presentation p;
  p.generators = {"x", "y", "z"};
  p.relators = {parse_word("x y x^-1 y^-1", p.generators), parse_word("z^2", p.generators)};
  const auto h = subgroup_closure(g, {*g.find_label("(1,2,3)")});
  const ConstraintSet c{SubsetInSubgroup{{parse_word("x", p.generators)}, h}};
  const auto filter = enumerate_images(p, g, c, {EnumerationMode::Filter, 1});
  const auto prune = enumerate_images(p, g, c, {EnumerationMode::Prune, 1});
  const auto threaded = enumerate_images(p, g, c, {EnumerationMode::Prune, 4});
  EXPECT_EQ(filter, prune);
  EXPECT_EQ(filter, threaded);
  EXPECT_TRUE(std::is_sorted(filter.begin(), filter.end()));
  for (const auto& t : filter) {
    EXPECT_TRUE(h.contains(t[0]));
    for (const auto& r : p.relators) EXPECT_EQ(naive_eval(g, t, r), 0u);
  }
}

TEST(Enumeration, Constraints) {
  const auto g = FiniteGroup::symmetric(3);
  const auto f1 = IndexedPresentation::free(1)->presentation();
  const auto h = subgroup_closure(g, {*g.find_label("(1,2)")});
  const ConstraintSet dc{SubsetInDoubleCosets{{{Word::generator(0), h, *g.find_label("(1,2,3)")}}}};
  EXPECT_EQ(count_images(f1, g, dc), 4u);
  const auto mask = double_coset_mask(h, *g.find_label("(1,2,3)"));
  EXPECT_EQ(std::count(mask.begin(), mask.end(), 1), 4);
  const auto f2 = IndexedPresentation::free(2)->presentation();
  EXPECT_EQ(count_images(f2, g, {Surjective{}}), 18u);
  const ConstraintSet inj{InjectiveOnElements{{Word::generator(0), Word::generator(1)}}};
  EXPECT_EQ(count_images(f2, g, inj), 30u);
}

TEST(Enumeration, ImpossibleFixedImage) {
  const auto g = FiniteGroup::symmetric(3);
  Presentation p;
  p.generators = {"c"};
  p.relators = {parse_word("c", p.generators)};
  p.fixed_images = {Element(1)};
  p.coefficient_group = g;
  EXPECT_THROW(count_images(p, g), ImpossibleFixedImage);
}

TEST(Homs, MakeAndKernelImage) {
  const auto g = FiniteGroup::symmetric(3);
  Presentation p;
  p.generators = {"x", "y"};
  p.relators = {parse_word("x y x^-1 y^-1", p.generators)};
  const auto ip = IndexedPresentation::derive(p);
  const auto a = *g.find_label("(1,2)"), b = *g.find_label("(1,2,3)");
  EXPECT_THROW(Hom::make(ip, g, {a, b}), RelatorViolation);
  const auto phi = Hom::make(ip, g, {b, g.inv(b)});
  EXPECT_EQ(image_subgroup(phi).order(), 3u);
  EXPECT_EQ(kernel_image(phi).order(), 3u);
}

TEST(Homs, KernelImageNormalInImage) {
  // phi(ker deg) is normal in phi(F) and the quotient is cyclic, generated by phi(t).
  for (const auto& [spec, g] : oracle::catalog()) {
    if (g.order() > 12) continue;
    for (const auto& phi : enumerate_homs(IndexedPresentation::free(2, {1, 1}), g)) {
      const auto img = image_subgroup(phi);
      const auto ker = kernel_image(phi);
      ASSERT_TRUE(ker.is_subset_of(img));
      for (Element x : img.elements())
        for (Element k : ker.elements()) ASSERT_TRUE(ker.contains(g.conj(k, x)));
      EXPECT_EQ(g.element_order(phi.of_degree_one()) % (img.order() / ker.order()), 0u) << spec;
    }
  }
}

TEST(Semidirect, KernelImageIsBaseClosure) {
  const auto k = FiniteGroup::symmetric(3);
  // Conjugation by (1,2) as the automorphism.
  const auto s = *k.find_label("(1,2)");
  std::vector<Element> aut(k.order());
  for (Element x = 0; x < k.order(); ++x) aut[x] = k.conj(x, s);
  const auto p = IndexedPresentation::semidirect(k, aut);
  ASSERT_TRUE(p->semidirect_data());
  for (Element x = 0; x < k.order(); ++x) EXPECT_EQ(p->base_element_word(x).degree(p->degrees()), 0);
  const auto homs = enumerate_homs(p, k);
  EXPECT_FALSE(homs.empty());
  for (const auto& phi : homs) {
    std::vector<Element> base_images(phi.images().begin() + 1, phi.images().end());
    EXPECT_EQ(kernel_image(phi), subgroup_closure(k, base_images));
  }
  EXPECT_THROW(IndexedPresentation::semidirect(k, {0, 1, 2, 3, 4, 4}), ParseError);
}
