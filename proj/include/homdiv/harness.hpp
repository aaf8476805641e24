#pragma once

/**
 * @file harness.hpp
 * @brief Empirical verifier for the divisibility machinery on finite
 *        instances: phi-cores, conjugation and twisting of homomorphisms,
 *        tail comparison and similarity classes.
 *
 * Orientation. Condition I closes a set under f -> h^-1 phi(f) h
 * (conjugate_hom). Similarity uses psi(f) = h phi(f) h^-1, i.e.
 * psi = conjugate_hom(phi, h^-1). Both quantify over all of H, so the
 * resulting partitions coincide; tails_conjugate uses the second form.
 *
 * Tail comparison. The zero part (restriction to ker deg) is compared on the
 * generators z_i^(t^k), k = 0..E-1, E the exponent of the target: both sides
 * are homomorphisms on ker deg and the conjugate sequences have period
 * dividing E. The coset part psi(f)H = h phi(f)H for all f is decided by a
 * reachability search over states psi(f)^-1 h phi(f), which must all lie in H.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "homdiv/errors.hpp"
#include "homdiv/group.hpp"
#include "homdiv/homomorphisms.hpp"
#include "homdiv/subgroups.hpp"

namespace homdiv {

struct SimilarityClass {
  std::size_t members = 0;
  std::size_t tail_classes = 0;
  /// Members per tail class, ascending.
  std::vector<std::size_t> fiber_sizes;
  /// |H_phi| and |H : H_phi| for the class representative.
  std::size_t core_order = 0;
  std::size_t core_index = 0;
};

struct HarnessReport {
  std::size_t hom_count = 0;
  std::size_t subgroup_order = 0;
  /// Sorted ascending by member count.
  std::vector<SimilarityClass> classes;
  bool conditions_I_holds = false;
  bool conditions_II_holds = false;
  bool all_classes_size_H = false;
  /// members = tail classes x fiber, fiber = |H_phi|, tail classes = |H : H_phi|
  /// for every class.
  bool class_structure_holds = false;
};

namespace detail {

inline void require_target(const Hom& phi, const Subgroup& h) {
  if (!h.parent().same_as(phi.target())) throw ForeignSubgroup("subgroup is not in the target group of the homomorphism");
}

inline void require_uniform(std::span<const Hom> homs) {
  for (const auto& psi : homs)
    if (!psi.compatible_with(homs.front())) throw MixedPresentations("homomorphisms differ in presentation or target");
}

}  // namespace detail

/// H_phi = {h in H : k h k^-1 in H for all k in phi(F), h centralizes phi(ker deg)}.
inline Subgroup phi_core(const Hom& phi, const Subgroup& h) {
  detail::require_target(phi, h);
  const auto& g = phi.target();
  const Subgroup image = image_subgroup(phi);
  const Subgroup kernel = kernel_image(phi);
  std::vector<Element> out;
  for (Element x : h.elements()) {
    bool keep = true;
    for (Element k : kernel.elements())
      if (g.mul(x, k) != g.mul(k, x)) {
        keep = false;
        break;
      }
    if (!keep) continue;
    for (Element k : image.elements())
      if (!h.contains(g.mul(g.mul(k, x), g.inv(k)))) {
        keep = false;
        break;
      }
    if (keep) out.push_back(x);
  }
  return Subgroup::trusted(g, std::move(out));
}

/// f -> h^-1 phi(f) h.
inline Hom conjugate_hom(const Hom& phi, Element h) {
  const auto& g = phi.target();
  g.check_index(h);
  std::vector<Element> images(phi.images().size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = g.conj(phi.images()[i], h);
  return unchecked_hom(phi.presentation(), g, std::move(images));
}

/// Images psi(x_i) = (phi(t) g)^d_i phi(t)^-d_i phi(x_i), without any check.
inline std::vector<Element> twist_images(const Hom& phi, Element g) {
  const auto& G = phi.target();
  G.check_index(g);
  const Element t = phi.of_degree_one();
  const Element tg = G.mul(t, g);
  const auto& d = phi.presentation()->degrees();
  std::vector<Element> images(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    images[i] = G.mul(G.mul(G.pow(tg, d[i]), G.pow(t, -d[i])), phi.images()[i]);
  return images;
}

/// The homomorphism agreeing with phi on ker deg and sending t to phi(t) g.
/// Requires g to centralize phi(ker deg).
inline Hom twist_hom(const Hom& phi, Element g) {
  const auto& G = phi.target();
  G.check_index(g);
  const Subgroup kernel = kernel_image(phi);
  for (Element k : kernel.elements())
    if (G.mul(g, k) != G.mul(k, g)) throw NotCentralizing("element does not centralize the image of the degree kernel");
  auto images = twist_images(phi, g);
  if (!satisfies_relators(*phi.presentation(), G, images))
    throw RelatorViolation("twisted images violate a relator");
  return unchecked_hom(phi.presentation(), G, std::move(images));
}

/// Values of phi on z_i^(t^k), k = 0..E-1, in a fixed order.
inline std::vector<Element> zero_part_values(const Hom& phi) {
  const auto& g = phi.target();
  const Element t = phi.of_degree_one();
  const std::uint64_t e = g.exponent();
  std::vector<Element> out;
  for (const auto& z : phi.presentation()->kernel_generator_words()) {
    Element u = phi.evaluate(z);
    for (std::uint64_t k = 0; k < e; ++k) {
      out.push_back(u);
      u = g.conj(u, t);
    }
  }
  return out;
}

namespace detail {

// Every state psi(f)^-1 h phi(f) reachable from h lies in H.
inline bool cosets_match(const Hom& phi, const Hom& psi, Element h, const Subgroup& sub) {
  const auto& g = phi.target();
  if (!sub.contains(h)) return false;
  std::vector<char> seen(g.order(), 0);
  std::vector<Element> queue{h};
  seen[h] = 1;
  const auto& a = phi.images();
  const auto& b = psi.images();
  for (std::size_t cursor = 0; cursor < queue.size(); ++cursor) {
    const Element s = queue[cursor];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Element next[2] = {g.mul(g.mul(g.inv(b[i]), s), a[i]), g.mul(g.mul(b[i], s), g.inv(a[i]))};
      for (Element x : next) {
        if (seen[x]) continue;
        if (!sub.contains(x)) return false;
        seen[x] = 1;
        queue.push_back(x);
      }
    }
  }
  return true;
}

inline bool zero_parts_match(const FiniteGroup& g, std::span<const Element> phi_zero, std::span<const Element> psi_zero,
                             Element h) {
  for (std::size_t i = 0; i < phi_zero.size(); ++i)
    if (psi_zero[i] != g.mul(g.mul(h, phi_zero[i]), g.inv(h))) return false;
  return true;
}

}  // namespace detail

/// psi(u) = h phi(u) h^-1 on ker deg, and psi(f)H = h phi(f)H for all f.
inline bool tails_conjugate(const Hom& phi, const Hom& psi, Element h, const Subgroup& sub) {
  detail::require_target(phi, sub);
  if (!phi.compatible_with(psi)) throw MixedPresentations("homomorphisms differ in presentation or target");
  phi.target().check_index(h);
  const auto a = zero_part_values(phi), b = zero_part_values(psi);
  return detail::zero_parts_match(phi.target(), a, b, h) && detail::cosets_match(phi, psi, h, sub);
}

/// Smallest h in H (by index) conjugating the tail of phi to that of psi.
inline std::optional<Element> similar(const Hom& phi, const Hom& psi, const Subgroup& sub) {
  detail::require_target(phi, sub);
  if (!phi.compatible_with(psi)) throw MixedPresentations("homomorphisms differ in presentation or target");
  const auto a = zero_part_values(phi), b = zero_part_values(psi);
  for (Element h : sub.elements())
    if (detail::zero_parts_match(phi.target(), a, b, h) && detail::cosets_match(phi, psi, h, sub)) return h;
  return std::nullopt;
}

/// Similarity classes of `homs` (an equivalence relation, so each element is
/// compared against class representatives only) and, inside each class, tail
/// classes under h = identity.
inline HarnessReport partition_classes(std::span<const Hom> homs, const Subgroup& sub) {
  if (homs.empty()) throw MixedPresentations("harness needs at least one homomorphism");
  detail::require_uniform(homs);
  detail::require_target(homs.front(), sub);
  const auto& g = homs.front().target();

  std::vector<std::vector<Element>> zero(homs.size());
  for (std::size_t i = 0; i < homs.size(); ++i) zero[i] = zero_part_values(homs[i]);
  auto similar_idx = [&](std::size_t i, std::size_t j) {
    for (Element h : sub.elements())
      if (detail::zero_parts_match(g, zero[i], zero[j], h) && detail::cosets_match(homs[i], homs[j], h, sub)) return true;
    return false;
  };
  auto same_tail = [&](std::size_t i, std::size_t j) {
    return zero[i] == zero[j] && detail::cosets_match(homs[i], homs[j], 0, sub);
  };

  std::vector<std::size_t> reps;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < homs.size(); ++i) {
    std::size_t c = 0;
    while (c < reps.size() && !similar_idx(reps[c], i)) ++c;
    if (c == reps.size()) {
      reps.push_back(i);
      members.emplace_back();
    }
    members[c].push_back(i);
  }

  HarnessReport report;
  report.hom_count = homs.size();
  report.subgroup_order = sub.order();
  report.all_classes_size_H = true;
  report.class_structure_holds = true;
  for (std::size_t c = 0; c < reps.size(); ++c) {
    std::vector<std::size_t> tail_reps, tail_sizes;
    for (std::size_t i : members[c]) {
      std::size_t t = 0;
      while (t < tail_reps.size() && !same_tail(tail_reps[t], i)) ++t;
      if (t == tail_reps.size()) {
        tail_reps.push_back(i);
        tail_sizes.push_back(0);
      }
      ++tail_sizes[t];
    }
    SimilarityClass cls;
    cls.members = members[c].size();
    cls.tail_classes = tail_reps.size();
    cls.fiber_sizes = tail_sizes;
    std::sort(cls.fiber_sizes.begin(), cls.fiber_sizes.end());
    const Subgroup core = phi_core(homs[reps[c]], sub);
    cls.core_order = core.order();
    cls.core_index = sub.order() / core.order();
    if (cls.members != sub.order()) report.all_classes_size_H = false;
    const bool fibers_uniform = std::all_of(cls.fiber_sizes.begin(), cls.fiber_sizes.end(),
                                            [&](std::size_t f) { return f == cls.core_order; });
    if (!fibers_uniform || cls.tail_classes != cls.core_index || cls.members != cls.tail_classes * cls.core_order)
      report.class_structure_holds = false;
    report.classes.push_back(std::move(cls));
  }
  std::stable_sort(report.classes.begin(), report.classes.end(),
                   [](const SimilarityClass& a, const SimilarityClass& b) { return a.members < b.members; });
  return report;
}

struct ConditionFlags {
  bool condition_I = false;
  bool condition_II = false;
};

/// Closed-world check of Conditions I and II: membership means list membership.
inline ConditionFlags verify_conditions(std::span<const Hom> homs, const Subgroup& sub) {
  if (homs.empty()) return {true, true};
  detail::require_uniform(homs);
  detail::require_target(homs.front(), sub);
  std::set<std::vector<Element>> members;
  for (const auto& phi : homs) members.insert(phi.images());
  ConditionFlags flags{true, true};
  for (const auto& phi : homs) {
    if (flags.condition_I)
      for (Element h : sub.elements())
        if (!members.count(conjugate_hom(phi, h).images())) {
          flags.condition_I = false;
          break;
        }
    if (flags.condition_II) {
      const Subgroup core = phi_core(phi, sub);
      for (Element g : core.elements())
        if (!members.count(twist_hom(phi, g).images())) {
          flags.condition_II = false;
          break;
        }
    }
    if (!flags.condition_I && !flags.condition_II) break;
  }
  return flags;
}

/// Both checks in one report.
inline HarnessReport run_harness(std::span<const Hom> homs, const Subgroup& sub) {
  HarnessReport report;
  if (homs.empty()) {
    report.subgroup_order = sub.order();
    report.all_classes_size_H = true;
    report.class_structure_holds = true;
  } else {
    report = partition_classes(homs, sub);
  }
  const auto flags = verify_conditions(homs, sub);
  report.conditions_I_holds = flags.condition_I;
  report.conditions_II_holds = flags.condition_II;
  return report;
}

}  // namespace homdiv
