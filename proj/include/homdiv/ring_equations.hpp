#pragma once

/**
 * @file ring_equations.hpp
 * @brief Generalized homogeneous systems over finite rings: parsing,
 *        homogeneity testing by integer rank, unit-solution counting, and a
 *        checker for the power-prefix identity of words u(ah).
 *
 * An equation is a sum of monomials equated to zero. A monomial is a product
 * of constants and integer powers of unknowns in any interleaving. The system
 * is homogeneous when some nonzero integer degree assignment gives every
 * monomial of an equation the same total degree.
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/harness.hpp"
#include "homdiv/homomorphisms.hpp"
#include "homdiv/integer_matrix.hpp"
#include "homdiv/presentation.hpp"
#include "homdiv/ring.hpp"
#include "homdiv/theorems.hpp"

namespace homdiv {

struct ConstFactor {
  std::string name;
  RingElement value;
};

struct PowerFactor {
  std::size_t unknown = 0;
  std::int64_t exponent = 1;
};

using RingFactor = std::variant<ConstFactor, PowerFactor>;

struct RingMonomial {
  bool negated = false;
  std::vector<RingFactor> factors;
};

struct RingEquation {
  std::vector<RingMonomial> monomials;
};

struct RingSystem {
  std::size_t unknowns = 1;
  std::vector<RingEquation> equations;

  /// Every constant occurring in the system, in order of appearance.
  std::vector<RingElement> constants() const {
    std::vector<RingElement> out;
    for (const auto& eq : equations)
      for (const auto& m : eq.monomials)
        for (const auto& f : m.factors)
          if (const auto* c = std::get_if<ConstFactor>(&f)) out.push_back(c->value);
    return out;
  }
};

using RingConstants = std::map<std::string, RingElement>;

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::int64_t parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + text + "' in " + context);
  }
}

inline RingFactor parse_factor(const std::string& text, std::size_t unknowns, const FiniteRing& ring,
                               const RingConstants& constants, const std::string& context) {
  if (text.empty()) throw ParseError("empty factor in " + context);
  if (text.size() > 1 && text[0] == 'x' && std::isdigit(static_cast<unsigned char>(text[1]))) {
    const auto caret = text.find('^');
    const std::string index = text.substr(1, caret == std::string::npos ? std::string::npos : caret - 1);
    const auto u = parse_int(index, context);
    if (u < 0 || std::size_t(u) >= unknowns)
      throw ParseError("unknown x" + index + " out of range (system has " + std::to_string(unknowns) + " unknowns)");
    std::int64_t k = 1;
    if (caret != std::string::npos) k = parse_int(text.substr(caret + 1), context);
    if (k == 0) throw ParseError("zero exponent in " + context);
    return PowerFactor{std::size_t(u), k};
  }
  if (std::isdigit(static_cast<unsigned char>(text[0])))
    return ConstFactor{text, ring.from_integer(parse_int(text, context))};
  auto it = constants.find(text);
  if (it == constants.end()) throw ParseError("undefined constant '" + text + "' in " + context);
  return ConstFactor{text, it->second};
}

}  // namespace detail

/// Parses `x0*d*x1 - x1*x0^2 + 3*x0^-1 = 0`. The trailing `= 0` is optional.
inline RingEquation parse_ring_equation(std::string_view text, std::size_t unknowns, const FiniteRing& ring,
                                        const RingConstants& constants = {}) {
  const std::string context = "equation \"" + std::string(text) + "\"";
  std::string body(text);
  if (auto eq = body.find('='); eq != std::string::npos) {
    if (detail::trim(std::string_view(body).substr(eq + 1)) != "0")
      throw ParseError("right-hand side must be 0 in " + context);
    body = body.substr(0, eq);
  }
  RingEquation out;
  bool negated = false;
  std::string current;
  bool started = false;
  auto flush = [&] {
    const std::string mono = detail::trim(current);
    if (mono.empty()) {
      if (started) throw ParseError("empty monomial in " + context);
      return;
    }
    RingMonomial m;
    m.negated = negated;
    std::size_t start = 0;
    while (true) {
      const auto star = mono.find('*', start);
      const std::string factor = detail::trim(std::string_view(mono).substr(start, star == std::string::npos ? std::string::npos : star - start));
      m.factors.push_back(detail::parse_factor(factor, unknowns, ring, constants, context));
      if (star == std::string::npos) break;
      start = star + 1;
    }
    out.monomials.push_back(std::move(m));
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    const bool sign = (c == '+' || c == '-') && !(i > 0 && body[i - 1] == '^');
    if (sign) {
      flush();
      started = true;
      negated = c == '-';
      current.clear();
    } else {
      current += c;
    }
  }
  flush();
  if (out.monomials.empty()) throw ParseError("equation has no monomials: " + context);
  return out;
}

inline RingSystem parse_ring_system(const std::vector<std::string>& equations, std::size_t unknowns,
                                    const FiniteRing& ring, const RingConstants& constants = {}) {
  if (unknowns < 1) throw ParseError("a ring system needs at least one unknown");
  RingSystem s;
  s.unknowns = unknowns;
  for (const auto& e : equations) s.equations.push_back(parse_ring_equation(e, unknowns, ring, constants));
  return s;
}

inline std::string format_monomial(const RingMonomial& m) {
  std::string out;
  for (const auto& f : m.factors) {
    if (!out.empty()) out += '*';
    if (const auto* c = std::get_if<ConstFactor>(&f)) {
      out += c->name;
    } else {
      const auto& p = std::get<PowerFactor>(f);
      out += "x" + std::to_string(p.unknown);
      if (p.exponent != 1) out += "^" + std::to_string(p.exponent);
    }
  }
  return out;
}

inline std::string format_equation(const RingEquation& eq) {
  std::string out;
  for (std::size_t i = 0; i < eq.monomials.size(); ++i) {
    const auto& m = eq.monomials[i];
    if (i == 0) out += m.negated ? "-" : "";
    else out += m.negated ? " - " : " + ";
    out += format_monomial(m);
  }
  return out + " = 0";
}

// ---------------------------------------------------------------------------
// Homogeneity

struct HomogeneityMatrices {
  /// A_v: one row per monomial, entry = exponent sum of the unknown.
  std::vector<IntMatrix> per_equation;
  /// A'_v: A_v minus its first row.
  std::vector<IntMatrix> differences;
  /// A': all A'_v stacked.
  IntMatrix stacked;
};

inline IntVector monomial_exponents(const RingMonomial& m, std::size_t unknowns) {
  IntVector row(unknowns, 0);
  for (const auto& f : m.factors)
    if (const auto* p = std::get_if<PowerFactor>(&f)) row[p->unknown] += p->exponent;
  return row;
}

inline HomogeneityMatrices homogeneity_matrices(const RingSystem& s) {
  HomogeneityMatrices out;
  out.stacked.columns = s.unknowns;
  for (const auto& eq : s.equations) {
    IntMatrix a{s.unknowns, {}};
    for (const auto& m : eq.monomials) a.rows.push_back(monomial_exponents(m, s.unknowns));
    IntMatrix d = a;
    for (auto& row : d.rows)
      for (std::size_t j = 0; j < s.unknowns; ++j) row[j] -= a.rows.front()[j];
    out.stacked.rows.insert(out.stacked.rows.end(), d.rows.begin(), d.rows.end());
    out.per_equation.push_back(std::move(a));
    out.differences.push_back(std::move(d));
  }
  return out;
}

struct DegreeAssignment {
  IntVector degrees;
  /// Common total degree of the monomials of each equation.
  std::vector<std::int64_t> equation_degrees;
};

struct HomogeneityResult {
  HomogeneityMatrices matrices;
  std::size_t rank = 0;
  std::optional<DegreeAssignment> assignment;
};

/// Total degree of each monomial of `eq` under `d`; all equal iff `eq` is
/// homogeneous for `d`.
inline std::vector<std::int64_t> monomial_degrees(const RingEquation& eq, const IntVector& d) {
  std::vector<std::int64_t> out;
  for (const auto& m : eq.monomials) {
    const auto row = monomial_exponents(m, d.size());
    std::int64_t total = 0;
    for (std::size_t j = 0; j < d.size(); ++j) total += row[j] * d[j];
    out.push_back(total);
  }
  return out;
}

inline HomogeneityResult analyze_homogeneity(const RingSystem& s) {
  HomogeneityResult r;
  r.matrices = homogeneity_matrices(s);
  const auto rk = integer_rank_and_kernel(r.matrices.stacked);
  r.rank = rk.rank;
  if (!rk.kernel) return r;
  DegreeAssignment a;
  a.degrees = *rk.kernel;
  for (const auto& eq : s.equations) {
    const auto degs = monomial_degrees(eq, a.degrees);
    if (std::adjacent_find(degs.begin(), degs.end(), std::not_equal_to<>()) != degs.end())
      throw std::logic_error("kernel vector does not equalize monomial degrees");
    a.equation_degrees.push_back(degs.front());
  }
  r.assignment = std::move(a);
  return r;
}

inline std::optional<DegreeAssignment> homogeneity_check(const RingSystem& s) {
  return analyze_homogeneity(s).assignment;
}

/// Sum over equations of (monomial count - 1) < unknowns.
inline bool proposition_bound_holds(const RingSystem& s) {
  std::size_t sum = 0;
  for (const auto& eq : s.equations) sum += eq.monomials.size() - 1;
  return sum < s.unknowns;
}

// ---------------------------------------------------------------------------
// Evaluation and counting

/// Multiplicative order of a unit (smallest s > 0 with r^s = 1).
inline std::uint64_t multiplicative_order(const FiniteRing& ring, const RingElement& r) {
  const auto one = ring.one();
  RingElement x = r;
  std::uint64_t s = 1;
  while (x != one) {
    x = ring.mul(x, r);
    if (++s > ring.cardinality()) throw NonInvertibleBase("element has no multiplicative order");
  }
  return s;
}

/// r^k by repeated squaring. Negative k needs a unit; for a unit base the
/// exponent is first reduced modulo its multiplicative order.
inline RingElement ring_pow(const FiniteRing& ring, RingElement base, std::int64_t k) {
  const auto inverse = ring.try_inverse(base);
  if (k < 0) {
    if (!inverse) throw NonInvertibleBase("negative exponent on non-invertible element " + ring.format(base));
    base = *inverse;
    k = -k;
  }
  if (inverse) k = std::int64_t(std::uint64_t(k) % multiplicative_order(ring, base));
  RingElement result = ring.one();
  while (k > 0) {
    if (k & 1) result = ring.mul(result, base);
    base = ring.mul(base, base);
    k >>= 1;
  }
  return result;
}

inline RingElement evaluate_equation(const FiniteRing& ring, const RingEquation& eq,
                                     const std::vector<RingElement>& assignment) {
  RingElement sum = ring.zero();
  for (const auto& m : eq.monomials) {
    RingElement prod = ring.one();
    for (const auto& f : m.factors) {
      if (const auto* c = std::get_if<ConstFactor>(&f)) prod = ring.mul(prod, c->value);
      else {
        const auto& p = std::get<PowerFactor>(f);
        prod = ring.mul(prod, ring_pow(ring, assignment.at(p.unknown), p.exponent));
      }
    }
    sum = m.negated ? ring.sub(sum, prod) : ring.add(sum, prod);
  }
  return sum;
}

namespace detail {

// Evaluates a system on unit-group tuples with precomputed powers.
class UnitSystemEvaluator {
 public:
  UnitSystemEvaluator(const UnitGroup& units, const RingSystem& s) : units_(units), system_(s) {
    const auto& g = units.group;
    for (const auto& eq : s.equations)
      for (const auto& m : eq.monomials)
        for (const auto& f : m.factors)
          if (const auto* p = std::get_if<PowerFactor>(&f); p && !powers_.count(p->exponent)) {
            std::vector<RingElement> table(g.order());
            for (Element x = 0; x < g.order(); ++x) table[x] = units.to_ring[g.pow(x, p->exponent)];
            powers_.emplace(p->exponent, std::move(table));
          }
  }

  bool solves(std::span<const Element> tuple) const {
    const auto& ring = units_.ring;
    for (const auto& eq : system_.equations) {
      RingElement sum = ring.zero();
      for (const auto& m : eq.monomials) {
        RingElement prod = ring.one();
        for (const auto& f : m.factors) {
          if (const auto* c = std::get_if<ConstFactor>(&f)) prod = ring.mul(prod, c->value);
          else {
            const auto& p = std::get<PowerFactor>(f);
            prod = ring.mul(prod, powers_.at(p.exponent)[tuple[p.unknown]]);
          }
        }
        sum = m.negated ? ring.sub(sum, prod) : ring.add(sum, prod);
      }
      if (!ring.is_zero(sum)) return false;
    }
    return true;
  }

 private:
  const UnitGroup& units_;
  const RingSystem& system_;
  std::map<std::int64_t, std::vector<RingElement>> powers_;
};

}  // namespace detail

/// All solutions in G^n, lexicographic in the unit-group indices.
inline std::vector<std::vector<Element>> unit_solutions(const UnitGroup& units, const Subgroup& g, const RingSystem& s,
                                                        unsigned workers = 1) {
  if (!g.parent().same_as(units.group)) throw ForeignSubgroup("subgroup is not a subgroup of this unit group");
  const detail::UnitSystemEvaluator eval(units, s);
  const auto elems = g.elements();
  const std::size_t n = s.unknowns;
  auto scan = [&](std::size_t first, std::vector<std::vector<Element>>& out) {
    std::vector<std::size_t> pos(n, 0);
    pos[0] = first;
    std::vector<Element> tuple(n);
    while (true) {
      for (std::size_t i = 0; i < n; ++i) tuple[i] = elems[pos[i]];
      if (eval.solves(tuple)) out.push_back(tuple);
      std::size_t i = n;
      while (i-- > 1) {
        if (++pos[i] < elems.size()) break;
        pos[i] = 0;
      }
      if (i == 0) break;
    }
  };
  std::vector<std::vector<std::vector<Element>>> parts(elems.size());
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(workers, elems.size()));
  if (w == 1) {
    for (std::size_t f = 0; f < elems.size(); ++f) scan(f, parts[f]);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < w; ++t)
      threads.emplace_back([&, t] {
        for (std::size_t f = t; f < elems.size(); f += w) scan(f, parts[f]);
      });
    for (auto& t : threads) t.join();
  }
  std::vector<std::vector<Element>> out;
  for (auto& part : parts)
    for (auto& v : part) out.push_back(std::move(v));
  return out;
}

/// Solutions in G^n; divisor |G intersect C(coefficients)|. With the harness
/// enabled, Phi is the solution set seen as homomorphisms from the free group
/// on the unknowns with the computed degrees.
inline DivisibilityReport count_unit_solutions(const UnitGroup& units, const Subgroup& g, const RingSystem& s,
                                               HarnessOptions harness = {}, unsigned workers = 1) {
  const auto constants = s.constants();
  const Subgroup h = multiplicative_centralizer(units, constants, g);
  const auto assignment = homogeneity_check(s);
  const auto solutions = unit_solutions(units, g, s, workers);
  auto report = make_report(solutions.size(), h.order(), "|G intersect C(coefficients)|", assignment.has_value());
  if (harness.enabled) {
    if (!assignment) {
      report.harness_note = "skipped: system is not generalized homogeneous";
    } else if (solutions.size() > harness.max_homs) {
      report.harness_note = "skipped: " + std::to_string(solutions.size()) + " solutions exceed the cap of " +
                            std::to_string(harness.max_homs);
    } else {
      auto p = IndexedPresentation::free(s.unknowns, assignment->degrees);
      std::vector<Hom> homs;
      for (const auto& t : solutions) homs.push_back(Hom::make(p, units.group, t));
      report.harness = run_harness(homs, h);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Prefix identity for u(ah)

/// Multiplicative monoid of a Cayley-table group.
struct GroupMonoid {
  using Value = Element;
  FiniteGroup group;
  Value one() const { return 0; }
  Value mul(Value a, Value b) const { return group.mul(a, b); }
  std::optional<Value> inverse(Value a) const { return group.inv(a); }
};

/// Multiplicative monoid of a finite ring.
struct RingMonoid {
  using Value = RingElement;
  FiniteRing ring;
  Value one() const { return ring.one(); }
  Value mul(const Value& a, const Value& b) const { return ring.mul(a, b); }
  std::optional<Value> inverse(const Value& a) const { return ring.try_inverse(a); }
};

/// u(t) = b_0 t^n_1 b_1 ... t^n_l b_l with invertible a, h.
template <class Monoid>
struct Lemma1Instance {
  std::vector<std::int64_t> exponents;
  /// exponents.size() + 1 entries.
  std::vector<typename Monoid::Value> b;
  typename Monoid::Value a;
  typename Monoid::Value h;
};

namespace detail {

template <class Monoid>
typename Monoid::Value monoid_pow(const Monoid& m, typename Monoid::Value x, std::int64_t k) {
  if (k < 0) {
    auto inv = m.inverse(x);
    if (!inv) throw NonInvertibleBase("negative power of a non-invertible element");
    x = *inv;
    k = -k;
  }
  auto result = m.one();
  while (k > 0) {
    if (k & 1) result = m.mul(result, x);
    x = m.mul(x, x);
    k >>= 1;
  }
  return result;
}

}  // namespace detail

template <class Monoid>
typename Monoid::Value lemma1_word(const Monoid& m, const Lemma1Instance<Monoid>& inst,
                                   const typename Monoid::Value& t) {
  auto acc = inst.b.at(0);
  for (std::size_t i = 0; i < inst.exponents.size(); ++i)
    acc = m.mul(m.mul(acc, detail::monoid_pow(m, t, inst.exponents[i])), inst.b.at(i + 1));
  return acc;
}

/// True iff u(ah) equals the prefix form: for k = sum of exponents,
/// k > 0: h^(a^-1) ... h^(a^-k) u(a); k < 0: h^-1 h^(-a) ... h^(-a^(-1-k)) u(a);
/// k = 0: u(a). Throws HypothesisViolated unless every a^-s h a^s commutes
/// with every b_i (s ranging over one period of a).
template <class Monoid>
bool lemma1_verify(const Monoid& m, const Lemma1Instance<Monoid>& inst) {
  using V = typename Monoid::Value;
  if (inst.b.size() != inst.exponents.size() + 1) throw ParseError("Lemma shape needs one more b than exponents");
  const auto a_inv = m.inverse(inst.a);
  const auto h_inv = m.inverse(inst.h);
  if (!a_inv || !h_inv) throw HypothesisViolated("a and h must be invertible");
  const V one = m.one();
  std::vector<V> conjugates;
  V power = one, power_inv = one;
  do {
    conjugates.push_back(m.mul(m.mul(power_inv, inst.h), power));
    power = m.mul(power, inst.a);
    power_inv = m.mul(power_inv, *a_inv);
  } while (!(power == one));
  for (const auto& c : conjugates)
    for (const auto& b : inst.b)
      if (!(m.mul(c, b) == m.mul(b, c))) throw HypothesisViolated("a^-s h a^s does not commute with every b_i");

  std::int64_t k = 0;
  for (auto e : inst.exponents) k += e;
  const V lhs = lemma1_word(m, inst, m.mul(inst.a, inst.h));
  V prefix = one;
  if (k > 0) {
    for (std::int64_t j = 1; j <= k; ++j)
      prefix = m.mul(prefix, m.mul(m.mul(detail::monoid_pow(m, inst.a, j), inst.h), detail::monoid_pow(m, inst.a, -j)));
  } else if (k < 0) {
    for (std::int64_t j = 0; j <= -1 - k; ++j)
      prefix = m.mul(prefix, m.mul(m.mul(detail::monoid_pow(m, inst.a, -j), *h_inv), detail::monoid_pow(m, inst.a, j)));
  }
  const V rhs = m.mul(prefix, lemma1_word(m, inst, inst.a));
  return lhs == rhs;
}

}  // namespace homdiv
