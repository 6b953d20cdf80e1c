#include "doctest.h"

#include <random>

#include "cocon/presheaf.hpp"

using namespace cocon;

namespace {

// diamond poset bot < a, b < top: a meet-semilattice with implication
const char* kDiamond = R"(
object bot
object a
object b
object top
terminal top
mor ba : bot -> a
mor bb : bot -> b
mor bt : bot -> top
mor at : a -> top
mor bt2 : b -> top
compose at ba = bt
compose bt2 bb = bt
product a b = bot with pi1 ba pi2 bb
product a top = a with pi1 id_a pi2 at
product top a = a with pi1 at pi2 id_a
product b top = b with pi1 id_b pi2 bt2
product top b = b with pi1 bt2 pi2 id_b
product top top = top with pi1 id_top pi2 id_top
product a a = a with pi1 id_a pi2 id_a
product b b = b with pi1 id_b pi2 id_b
product bot bot = bot with pi1 id_bot pi2 id_bot
product bot a = bot with pi1 id_bot pi2 ba
product a bot = bot with pi1 ba pi2 id_bot
exp a b = b with eval bb
exp b a = a with eval ba
exp a a = top with eval at
exp top a = a with eval at
)";

const char* kTwoChain = R"(
object zero
object one
terminal one
mor f : zero -> one
)";

}  // namespace

TEST_CASE("category validation rejects bad composition") {
  const char* bad = R"(
object x
object y
mor f : x -> y
mor g : y -> x
mor h : x -> x
compose g f = h
compose f g = id_y
)";
  // h . h is missing from the table
  try {
    load_category(bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LawViolation);
  }
}

TEST_CASE("yoneda carriers are hom-sets") {
  FiniteCategory two = load_category(kTwoChain);
  FinitePresheaf y1 = yoneda(two, two.object("one"));
  CHECK(y1.carrier[two.object("zero")] == 1);
  y1.validate();

  // y(top) is a singleton everywhere
  FiniteCategory d = load_category(kDiamond);
  FinitePresheaf ytop = yoneda(d, *d.terminal);
  for (auto s : ytop.carrier) CHECK(s == 1);

  // discrete 3-object category: y(a)(b) empty off the diagonal
  FiniteCategory disc = load_category("object p\nobject q\nobject r\n");
  FinitePresheaf yp = yoneda(disc, 0);
  CHECK(yp.carrier[0] == 1);
  CHECK(yp.carrier[1] == 0);
  CHECK(yp.carrier[2] == 0);
}

TEST_CASE("nat counts match hom counts on every pair") {
  FiniteCategory d = load_category(kDiamond);
  for (std::size_t a = 0; a < d.objects.size(); a++)
    for (std::size_t b = 0; b < d.objects.size(); b++) {
      FinitePresheaf ya = yoneda(d, a), yb = yoneda(d, b);
      CHECK(nat_transformations(ya, yb).size() == d.hom(a, b).size());
    }
}

TEST_CASE("nat counts between constants") {
  FiniteCategory d = load_category(kDiamond);
  FinitePresheaf f2 = constant_presheaf(d, 2);
  FinitePresheaf f3 = constant_presheaf(d, 3);
  // the diamond is connected, so a transformation is one function
  CHECK(nat_transformations(f2, f3).size() == 9);  // 3^2
  // nat(F, F) contains the identity
  auto nats = nat_transformations(f2, f2);
  bool has_id = false;
  for (auto& t : nats) {
    bool id = true;
    for (auto& comp : t.components)
      for (std::size_t i = 0; i < comp.size(); i++)
        if (comp[i] != i) id = false;
    if (id) has_id = true;
  }
  CHECK(has_id);
}

TEST_CASE("flat comonad") {
  FiniteCategory d = load_category(kDiamond);
  std::mt19937 rng(6161);
  std::vector<FinitePresheaf> samples;
  for (int i = 0; i < 10; i++) {
    FinitePresheaf F = random_presheaf(d, rng, 4);
    F.validate();
    samples.push_back(F);
    FinitePresheaf fF = flat(F);
    FinitePresheaf ffF = flat(fF);
    CHECK(fF.carrier == ffF.carrier);
  }
  LawReport rep = check_comonad_laws(d, samples);
  for (auto& l : rep.lines) {
    CAPTURE(l.law);
    CHECK(l.pass);
  }
  // counit at a constant presheaf has bijective components
  FinitePresheaf con = constant_presheaf(d, 3);
  NatTrans eps = counit(con);
  for (auto& comp : eps.components) {
    std::vector<bool> hit(3, false);
    for (auto v : comp) hit[v] = true;
    for (bool h : hit) CHECK(h);
  }
}

TEST_CASE("products and the currying bijection") {
  FiniteCategory d = load_category(kDiamond);
  std::mt19937 rng(717);
  // F x 1 has the carriers of F
  FinitePresheaf one = constant_presheaf(d, 1);
  for (int i = 0; i < 4; i++) {
    FinitePresheaf F = random_presheaf(d, rng, 3);
    FinitePresheaf FX = product(F, one);
    CHECK(FX.carrier == F.carrier);
  }
  for (int i = 0; i < 5; i++) {
    FinitePresheaf F = random_presheaf(d, rng, 2);
    FinitePresheaf G = random_presheaf(d, rng, 2);
    FinitePresheaf H = random_presheaf(d, rng, 2);
    FinitePresheaf GH = exponential(G, H);
    GH.validate();
    std::size_t lhs = nat_transformations(product(F, G), H).size();
    std::size_t rhs = nat_transformations(F, GH).size();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("yoneda preserves chosen products") {
  FiniteCategory d = load_category(kDiamond);
  std::size_t a = d.object("a"), b = d.object("b");
  auto p = d.products.at({a, b});
  FinitePresheaf lhs = yoneda(d, p.obj);
  FinitePresheaf rhs = product(yoneda(d, a), yoneda(d, b));
  CHECK(lhs.carrier == rhs.carrier);
  // a natural isomorphism exists: some pair of transformations composes to
  // the identity both ways
  auto fwd = nat_transformations(lhs, rhs);
  auto bwd = nat_transformations(rhs, lhs);
  bool iso = false;
  for (auto& f : fwd)
    for (auto& g : bwd) {
      bool ok = true;
      for (std::size_t o = 0; o < d.objects.size() && ok; o++) {
        for (std::size_t x = 0; x < lhs.carrier[o]; x++)
          if (g.components[o][f.components[o][x]] != x) ok = false;
        for (std::size_t x = 0; x < rhs.carrier[o] && ok; x++)
          if (f.components[o][g.components[o][x]] != x) ok = false;
      }
      if (ok) iso = true;
    }
  CHECK(iso);
}

TEST_CASE("yoneda is full and faithful") {
  CHECK(yoneda_full_faithful(load_category(kDiamond)));
  CHECK(yoneda_full_faithful(load_category(kTwoChain)));
}

TEST_CASE("flat requires a terminal") {
  FiniteCategory disc = load_category("object p\nobject q\n");
  FinitePresheaf F = constant_presheaf(disc, 2);
  try {
    flat(F);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoTerminal);
  }
}
