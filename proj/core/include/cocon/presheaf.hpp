#pragma once

// Finite-model calculator for the categorical preliminaries: Yoneda
// embedding, the flat comonad, finite products and exponentials. All
// validations are exhaustive over the finite data, never sampled.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cocon/errors.hpp"

namespace cocon {

struct FiniteCategory {
  struct Mor {
    std::string name;
    std::size_t src, tgt;
  };
  struct Product {
    std::size_t obj, pi1, pi2;
  };
  struct Exponential {
    std::size_t obj, eval;
  };

  std::vector<std::string> objects;
  std::vector<Mor> morphisms;                // identities included
  std::vector<std::size_t> identity;         // per object
  // compose[g][f] = g . f when tgt(f) == src(g)
  std::vector<std::vector<std::optional<std::size_t>>> compose_table;
  std::optional<std::size_t> terminal;
  std::map<std::pair<std::size_t, std::size_t>, Product> products;
  std::map<std::pair<std::size_t, std::size_t>, Exponential> exponentials;

  std::size_t object(const std::string& name) const;
  std::size_t compose(std::size_t g, std::size_t f) const;  // g after f
  std::vector<std::size_t> hom(std::size_t a, std::size_t b) const;

  // identity, associativity and terminal laws; throws LawViolation with the
  // offending pair or triple
  void validate() const;
};

// Line-oriented category file:
//   object a
//   terminal t
//   mor f : a -> b
//   compose g f = h
//   product a b = p with pi1 f1 pi2 f2
//   exp a b = e with eval m
FiniteCategory load_category(const std::string& text);

struct FinitePresheaf {
  const FiniteCategory* cat = nullptr;
  std::vector<std::size_t> carrier;                // size per object
  // action[m] maps F(tgt m) -> F(src m) (contravariant)
  std::vector<std::vector<std::size_t>> action;

  void validate() const;  // exhaustive functor laws
};

struct NatTrans {
  std::vector<std::vector<std::size_t>> components;  // per object F(o) -> G(o)
  bool operator==(const NatTrans&) const = default;
};

bool natural(const FinitePresheaf& F, const FinitePresheaf& G, const NatTrans& t);

FinitePresheaf yoneda(const FiniteCategory& c, std::size_t obj);
FinitePresheaf constant_presheaf(const FiniteCategory& c, std::size_t size);
FinitePresheaf coproduct(const FinitePresheaf& F, const FinitePresheaf& G);
FinitePresheaf product(const FinitePresheaf& F, const FinitePresheaf& G);

// exhaustive enumeration in deterministic (lexicographic) order
std::vector<NatTrans> nat_transformations(const FinitePresheaf& F, const FinitePresheaf& G);

FinitePresheaf flat(const FinitePresheaf& F);
NatTrans counit(const FinitePresheaf& F);

struct LawReport {
  struct Line {
    std::string law;
    bool pass;
  };
  std::vector<Line> lines;
  bool all() const {
    for (auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
};

LawReport check_comonad_laws(const FiniteCategory& c,
                             const std::vector<FinitePresheaf>& samples);

// (F => G)(X) := nat(yX x F, G), action by precomposition
FinitePresheaf exponential(const FinitePresheaf& F, const FinitePresheaf& G);

// y is full and faithful: f |-> f_Psi(id) is a bijection, checked by
// constructing the explicit inverse on every pair of objects
bool yoneda_full_faithful(const FiniteCategory& c);

// random presheaf built as a coproduct of representables and constants,
// functorial by construction
FinitePresheaf random_presheaf(const FiniteCategory& c, std::mt19937& rng,
                               std::size_t max_carrier);

}  // namespace cocon
