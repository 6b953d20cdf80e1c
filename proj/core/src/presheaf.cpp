#include "cocon/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cocon {

std::size_t FiniteCategory::object(const std::string& name) const {
  for (std::size_t i = 0; i < objects.size(); i++)
    if (objects[i] == name) return i;
  fail(Errc::UnknownObject, "unknown object '" + name + "'");
}

std::size_t FiniteCategory::compose(std::size_t g, std::size_t f) const {
  if (morphisms[f].tgt != morphisms[g].src)
    fail(Errc::LawViolation, "composing non-composable morphisms " + morphisms[g].name +
                                 " . " + morphisms[f].name);
  auto& c = compose_table[g][f];
  if (!c)
    fail(Errc::LawViolation, "missing composite " + morphisms[g].name + " . " +
                                 morphisms[f].name);
  return *c;
}

std::vector<std::size_t> FiniteCategory::hom(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < morphisms.size(); i++)
    if (morphisms[i].src == a && morphisms[i].tgt == b) out.push_back(i);
  return out;
}

void FiniteCategory::validate() const {
  for (std::size_t f = 0; f < morphisms.size(); f++) {
    std::size_t ida = identity[morphisms[f].src];
    std::size_t idb = identity[morphisms[f].tgt];
    if (compose(f, ida) != f || compose(idb, f) != f)
      fail(Errc::LawViolation, "identity law fails at " + morphisms[f].name);
  }
  for (std::size_t f = 0; f < morphisms.size(); f++)
    for (std::size_t g = 0; g < morphisms.size(); g++) {
      if (morphisms[f].tgt != morphisms[g].src) continue;
      for (std::size_t h = 0; h < morphisms.size(); h++) {
        if (morphisms[g].tgt != morphisms[h].src) continue;
        if (compose(h, compose(g, f)) != compose(compose(h, g), f))
          fail(Errc::LawViolation, "associativity fails at (" + morphisms[h].name + ", " +
                                       morphisms[g].name + ", " + morphisms[f].name + ")");
      }
    }
  if (terminal) {
    for (std::size_t a = 0; a < objects.size(); a++)
      if (hom(a, *terminal).size() != 1)
        fail(Errc::LawViolation,
             "terminal object admits " + std::to_string(hom(a, *terminal).size()) +
                 " morphisms from " + objects[a]);
  }
}

FiniteCategory load_category(const std::string& text) {
  FiniteCategory c;
  std::map<std::string, std::size_t> mor_by_name;
  auto lookup_mor = [&](const std::string& n) -> std::size_t {
    auto it = mor_by_name.find(n);
    if (it == mor_by_name.end()) fail(Errc::UnknownObject, "unknown morphism '" + n + "'");
    return it->second;
  };

  // passes: objects and identities first, then declared morphisms, then the
  // structure lines, so any line may reference id_<object>
  for (int pass = 0; pass < 3; pass++) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      lineno++;
      std::istringstream ls(line);
      std::string kw;
      if (!(ls >> kw)) continue;
      if (kw[0] == '#') continue;
      if (pass == 0 && kw == "object") {
        std::string name;
        ls >> name;
        c.objects.push_back(name);
      } else if (pass == 1 && kw == "mor") {
        std::string name, colon, a, arrow, b;
        ls >> name >> colon >> a >> arrow >> b;
        if (colon != ":" || arrow != "->")
          fail(Errc::SyntaxError, "bad mor line", Span{lineno, 1});
        mor_by_name[name] = c.morphisms.size();
        c.morphisms.push_back({name, c.object(a), c.object(b)});
      } else if (pass == 2) {
        if (kw == "terminal") {
          std::string name;
          ls >> name;
          c.terminal = c.object(name);
        } else if (kw == "compose") {
          std::string g, f, eq, h;
          ls >> g >> f >> eq >> h;
          if (eq != "=") fail(Errc::SyntaxError, "bad compose line", Span{lineno, 1});
          c.compose_table[lookup_mor(g)][lookup_mor(f)] = lookup_mor(h);
        } else if (kw == "product") {
          std::string a, b, eq, p, with, pi1kw, f1, pi2kw, f2;
          ls >> a >> b >> eq >> p >> with >> pi1kw >> f1 >> pi2kw >> f2;
          c.products[{c.object(a), c.object(b)}] =
              FiniteCategory::Product{c.object(p), lookup_mor(f1), lookup_mor(f2)};
        } else if (kw == "exp") {
          std::string a, b, eq, e, with, evkw, m;
          ls >> a >> b >> eq >> e >> with >> evkw >> m;
          c.exponentials[{c.object(a), c.object(b)}] =
              FiniteCategory::Exponential{c.object(e), lookup_mor(m)};
        } else if (kw != "object" && kw != "mor") {
          fail(Errc::SyntaxError, "unknown directive '" + kw + "'", Span{lineno, 1});
        }
      }
    }
    if (pass == 0) {
      for (std::size_t o = 0; o < c.objects.size(); o++) {
        c.identity.push_back(c.morphisms.size());
        mor_by_name["id_" + c.objects[o]] = c.morphisms.size();
        c.morphisms.push_back({"id_" + c.objects[o], o, o});
      }
    }
    if (pass == 1) {
      c.compose_table.assign(c.morphisms.size(),
                             std::vector<std::optional<std::size_t>>(c.morphisms.size()));
      for (std::size_t f = 0; f < c.morphisms.size(); f++) {
        c.compose_table[f][c.identity[c.morphisms[f].src]] = f;
        c.compose_table[c.identity[c.morphisms[f].tgt]][f] = f;
      }
    }
  }
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Presheaves

void FinitePresheaf::validate() const {
  const FiniteCategory& c = *cat;
  for (std::size_t o = 0; o < c.objects.size(); o++) {
    std::size_t idm = c.identity[o];
    for (std::size_t x = 0; x < carrier[o]; x++)
      if (action[idm][x] != x)
        fail(Errc::LawViolation, "presheaf identity law fails at " + c.objects[o]);
  }
  for (std::size_t f = 0; f < c.morphisms.size(); f++)
    for (std::size_t g = 0; g < c.morphisms.size(); g++) {
      if (c.morphisms[f].tgt != c.morphisms[g].src) continue;
      std::size_t gf = c.compose(g, f);
      for (std::size_t x = 0; x < carrier[c.morphisms[g].tgt]; x++)
        if (action[gf][x] != action[f][action[g][x]])
          fail(Errc::LawViolation, "presheaf composition law fails at (" +
                                       c.morphisms[g].name + ", " + c.morphisms[f].name + ")");
    }
}

bool natural(const FinitePresheaf& F, const FinitePresheaf& G, const NatTrans& t) {
  const FiniteCategory& c = *F.cat;
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
    for (std::size_t x = 0; x < F.carrier[b]; x++) {
      // t_a(F(m)(x)) == G(m)(t_b(x))
      if (t.components[a][F.action[m][x]] != G.action[m][t.components[b][x]]) return false;
    }
  }
  return true;
}

FinitePresheaf yoneda(const FiniteCategory& c, std::size_t obj) {
  if (obj >= c.objects.size()) fail(Errc::UnknownObject, "yoneda of an unknown object");
  FinitePresheaf F;
  F.cat = &c;
  // carrier at a: hom(a, obj); action of m : a -> b precomposes
  std::vector<std::vector<std::size_t>> homs(c.objects.size());
  for (std::size_t a = 0; a < c.objects.size(); a++) homs[a] = c.hom(a, obj);
  F.carrier.resize(c.objects.size());
  for (std::size_t a = 0; a < c.objects.size(); a++) F.carrier[a] = homs[a].size();
  F.action.resize(c.morphisms.size());
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
    F.action[m].resize(homs[b].size());
    for (std::size_t i = 0; i < homs[b].size(); i++) {
      std::size_t composed = c.compose(homs[b][i], m);
      auto it = std::find(homs[a].begin(), homs[a].end(), composed);
      F.action[m][i] = static_cast<std::size_t>(it - homs[a].begin());
    }
  }
  return F;
}

FinitePresheaf constant_presheaf(const FiniteCategory& c, std::size_t size) {
  FinitePresheaf F;
  F.cat = &c;
  F.carrier.assign(c.objects.size(), size);
  F.action.resize(c.morphisms.size());
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    F.action[m].resize(size);
    for (std::size_t x = 0; x < size; x++) F.action[m][x] = x;
  }
  return F;
}

FinitePresheaf coproduct(const FinitePresheaf& F, const FinitePresheaf& G) {
  FinitePresheaf H;
  H.cat = F.cat;
  const FiniteCategory& c = *F.cat;
  H.carrier.resize(c.objects.size());
  for (std::size_t o = 0; o < c.objects.size(); o++)
    H.carrier[o] = F.carrier[o] + G.carrier[o];
  H.action.resize(c.morphisms.size());
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
    H.action[m].resize(H.carrier[b]);
    for (std::size_t x = 0; x < F.carrier[b]; x++) H.action[m][x] = F.action[m][x];
    for (std::size_t x = 0; x < G.carrier[b]; x++)
      H.action[m][F.carrier[b] + x] = F.carrier[a] + G.action[m][x];
  }
  return H;
}

FinitePresheaf product(const FinitePresheaf& F, const FinitePresheaf& G) {
  FinitePresheaf H;
  H.cat = F.cat;
  const FiniteCategory& c = *F.cat;
  H.carrier.resize(c.objects.size());
  for (std::size_t o = 0; o < c.objects.size(); o++)
    H.carrier[o] = F.carrier[o] * G.carrier[o];
  H.action.resize(c.morphisms.size());
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
    H.action[m].resize(H.carrier[b]);
    for (std::size_t x = 0; x < F.carrier[b]; x++)
      for (std::size_t y = 0; y < G.carrier[b]; y++) {
        std::size_t idx = x * G.carrier[b] + y;
        H.action[m][idx] = F.action[m][x] * G.carrier[a] + G.action[m][y];
      }
  }
  return H;
}

std::vector<NatTrans> nat_transformations(const FinitePresheaf& F, const FinitePresheaf& G) {
  const FiniteCategory& c = *F.cat;
  std::size_t n = c.objects.size();
  std::vector<NatTrans> out;
  NatTrans cur;
  cur.components.assign(n, {});

  // check naturality for all morphisms whose endpoints are both assigned
  auto consistent = [&](std::size_t assigned) {
    for (std::size_t m = 0; m < c.morphisms.size(); m++) {
      std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
      if (a >= assigned || b >= assigned) continue;
      for (std::size_t x = 0; x < F.carrier[b]; x++)
        if (cur.components[a][F.action[m][x]] != G.action[m][cur.components[b][x]])
          return false;
    }
    return true;
  };

  std::function<void(std::size_t)> go = [&](std::size_t o) {
    if (o == n) {
      out.push_back(cur);
      return;
    }
    std::size_t fo = F.carrier[o];
    if (G.carrier[o] == 0 && fo > 0) return;
    std::vector<std::size_t> fn(fo, 0);
    while (true) {
      cur.components[o] = fn;
      // incremental pruning on the newly assigned object only
      bool ok = true;
      for (std::size_t m = 0; m < c.morphisms.size() && ok; m++) {
        std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
        if ((a != o && b != o) || a > o || b > o) continue;
        for (std::size_t x = 0; x < F.carrier[b] && ok; x++)
          if (cur.components[a][F.action[m][x]] != G.action[m][cur.components[b][x]])
            ok = false;
      }
      if (ok) go(o + 1);
      // next function, lexicographically
      std::size_t i = 0;
      while (i < fo) {
        if (++fn[i] < G.carrier[o]) break;
        fn[i] = 0;
        i++;
      }
      if (i == fo || fo == 0) break;
    }
    cur.components[o].clear();
  };
  go(0);
  (void)consistent;
  return out;
}

FinitePresheaf flat(const FinitePresheaf& F) {
  const FiniteCategory& c = *F.cat;
  if (!c.terminal) fail(Errc::NoTerminal, "flat requires a designated terminal object");
  return constant_presheaf(c, F.carrier[*c.terminal]);
}

NatTrans counit(const FinitePresheaf& F) {
  const FiniteCategory& c = *F.cat;
  if (!c.terminal) fail(Errc::NoTerminal, "counit requires a designated terminal object");
  NatTrans t;
  t.components.resize(c.objects.size());
  for (std::size_t o = 0; o < c.objects.size(); o++) {
    std::size_t bang = c.hom(o, *c.terminal).at(0);
    t.components[o] = F.action[bang];  // F(!) : F(top) -> F(o)
  }
  return t;
}

LawReport check_comonad_laws(const FiniteCategory& c,
                             const std::vector<FinitePresheaf>& samples) {
  LawReport rep;
  for (std::size_t i = 0; i < samples.size(); i++) {
    const FinitePresheaf& F = samples[i];
    std::string tag = "presheaf " + std::to_string(i) + ": ";
    FinitePresheaf fF = flat(F);
    FinitePresheaf ffF = flat(fF);
    rep.lines.push_back({tag + "flat is idempotent (carriers)", fF.carrier == ffF.carrier});
    rep.lines.push_back({tag + "flat is idempotent (actions)", fF.action == ffF.action});
    NatTrans eps = counit(F);
    rep.lines.push_back({tag + "counit is natural", natural(fF, F, eps)});
    // comultiplication is the identity; both comonad laws collapse to
    // counit-of-flat being the identity on flat carriers
    NatTrans eps_flat = counit(fF);
    bool idlaw = true;
    for (std::size_t o = 0; o < c.objects.size(); o++)
      for (std::size_t x = 0; x < fF.carrier[o]; x++)
        if (eps_flat.components[o][x] != x) idlaw = false;
    rep.lines.push_back({tag + "counit . comultiplication = id", idlaw});
  }
  return rep;
}

FinitePresheaf exponential(const FinitePresheaf& F, const FinitePresheaf& G) {
  const FiniteCategory& c = *F.cat;
  FinitePresheaf H;
  H.cat = &c;
  std::vector<std::vector<NatTrans>> elems(c.objects.size());
  std::vector<FinitePresheaf> ybase(c.objects.size());
  for (std::size_t o = 0; o < c.objects.size(); o++) {
    ybase[o] = yoneda(c, o);
    elems[o] = nat_transformations(product(ybase[o], F), G);
  }
  H.carrier.resize(c.objects.size());
  for (std::size_t o = 0; o < c.objects.size(); o++) H.carrier[o] = elems[o].size();
  H.action.resize(c.morphisms.size());
  for (std::size_t m = 0; m < c.morphisms.size(); m++) {
    std::size_t a = c.morphisms[m].src, b = c.morphisms[m].tgt;
    H.action[m].resize(H.carrier[b]);
    for (std::size_t i = 0; i < elems[b].size(); i++) {
      // precompose: eta'_X(f : X -> a, x) = eta_X(m . f, x)
      const NatTrans& eta = elems[b][i];
      NatTrans pre;
      pre.components.resize(c.objects.size());
      for (std::size_t xo = 0; xo < c.objects.size(); xo++) {
        auto homs_a = c.hom(xo, a);
        auto homs_b = c.hom(xo, b);
        std::size_t fc = F.carrier[xo];
        pre.components[xo].resize(homs_a.size() * fc);
        for (std::size_t fi = 0; fi < homs_a.size(); fi++) {
          std::size_t mf = c.compose(m, homs_a[fi]);
          auto it = std::find(homs_b.begin(), homs_b.end(), mf);
          std::size_t bi = static_cast<std::size_t>(it - homs_b.begin());
          for (std::size_t x = 0; x < fc; x++)
            pre.components[xo][fi * fc + x] = eta.components[xo][bi * fc + x];
        }
      }
      auto it = std::find(elems[a].begin(), elems[a].end(), pre);
      if (it == elems[a].end())
        fail(Errc::LawViolation, "precomposed transformation escaped the enumeration");
      H.action[m][i] = static_cast<std::size_t>(it - elems[a].begin());
    }
  }
  return H;
}

bool yoneda_full_faithful(const FiniteCategory& c) {
  for (std::size_t a = 0; a < c.objects.size(); a++) {
    FinitePresheaf ya = yoneda(c, a);
    auto homs_aa = c.hom(a, a);
    std::size_t id_pos =
        static_cast<std::size_t>(std::find(homs_aa.begin(), homs_aa.end(), c.identity[a]) -
                                 homs_aa.begin());
    for (std::size_t b = 0; b < c.objects.size(); b++) {
      FinitePresheaf yb = yoneda(c, b);
      std::vector<NatTrans> nats = nat_transformations(ya, yb);
      auto hom_ab = c.hom(a, b);
      if (nats.size() != hom_ab.size()) return false;
      // the explicit inverse: eta |-> eta_a(id_a); it must be a bijection and
      // its inverse (postcomposition) must reproduce eta
      std::vector<bool> hit(hom_ab.size(), false);
      for (auto& eta : nats) {
        std::size_t f = c.hom(a, b)[eta.components[a][id_pos]];
        auto it = std::find(hom_ab.begin(), hom_ab.end(), f);
        if (it == hom_ab.end()) return false;
        std::size_t fi = static_cast<std::size_t>(it - hom_ab.begin());
        if (hit[fi]) return false;
        hit[fi] = true;
        // rebuild eta from f by postcomposition and compare
        NatTrans rebuilt;
        rebuilt.components.resize(c.objects.size());
        for (std::size_t xo = 0; xo < c.objects.size(); xo++) {
          auto homs_xa = c.hom(xo, a);
          auto homs_xb = c.hom(xo, b);
          rebuilt.components[xo].resize(homs_xa.size());
          for (std::size_t gi = 0; gi < homs_xa.size(); gi++) {
            std::size_t fg = c.compose(f, homs_xa[gi]);
            auto jt = std::find(homs_xb.begin(), homs_xb.end(), fg);
            rebuilt.components[xo][gi] =
                static_cast<std::size_t>(jt - homs_xb.begin());
          }
        }
        if (!(rebuilt == eta)) return false;
      }
      for (bool h : hit)
        if (!h) return false;
    }
  }
  return true;
}

FinitePresheaf random_presheaf(const FiniteCategory& c, std::mt19937& rng,
                               std::size_t max_carrier) {
  // coproducts of representables and constants are functorial by construction
  FinitePresheaf F = constant_presheaf(c, 0);
  auto max_of = [&](const FinitePresheaf& p) {
    std::size_t m = 0;
    for (auto s : p.carrier) m = std::max(m, s);
    return m;
  };
  int guard = 0;
  while (guard++ < 16) {
    FinitePresheaf next;
    if (rng() % 2 == 0)
      next = yoneda(c, rng() % c.objects.size());
    else
      next = constant_presheaf(c, 1 + rng() % 2);
    FinitePresheaf sum = coproduct(F, next);
    if (max_of(sum) > max_carrier) break;
    F = sum;
    if (rng() % 3 == 0) break;
  }
  if (max_of(F) == 0) F = constant_presheaf(c, 1);
  return F;
}

}  // namespace cocon
