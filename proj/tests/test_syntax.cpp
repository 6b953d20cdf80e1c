#include "doctest.h"

#include <map>
#include <random>

#include "cocon/syntax.hpp"

using namespace cocon;

TEST_CASE("shift adjusts free variables only") {
  // single free variable
  CHECK(equal(shift_dom(dm_var(0), 0, 1), dm_var(1)));
  // bound variable untouched
  CHECK(equal(shift_dom(dm_lam(dm_var(0)), 0, 5), dm_lam(dm_var(0))));
  // hand-check against named-variable weakening: in context x0,x1,x2 the term
  // (x2 x0) weakened below x1 renumbers only indices >= 1
  CHECK(equal(shift_dom(dm_app(dm_var(0), dm_var(2)), 1, 1),
              dm_app(dm_var(0), dm_var(3))));
}

TEST_CASE("shift reports NegativeIndex") {
  CHECK_THROWS_AS(shift_dom(dm_var(0), 0, -1), Error);
  try {
    shift_dom(dm_var(0), 0, -1);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NegativeIndex);
  }
}

TEST_CASE("shift composes additively") {
  auto t = dm_app(dm_lam(dm_app(dm_var(0), dm_var(3))), dm_var(1));
  for (std::int64_t a = 0; a <= 3; a++)
    for (std::int64_t b = 0; b <= 3; b++)
      CHECK(equal(shift_dom(shift_dom(t, 1, a), 1, b), shift_dom(t, 1, a + b)));
}

TEST_CASE("substitution: single variable") {
  // [.,M](app x x) where x is the sole variable -> app M M
  auto m = dm_app(dm_const(DomConst::Lam), dm_lam(dm_var(0)));
  auto body = dm_app(dm_app(dm_const(DomConst::App), dm_var(0)), dm_var(0));
  auto s = ds_snoc(ds_empty(), m);
  auto out = subst_dom(body, s);
  CHECK(equal(out, dm_app(dm_app(dm_const(DomConst::App), m), m)));
}

TEST_CASE("identity substitution is a fixpoint") {
  auto t = dm_lam(dm_app(dm_var(0), dm_app(dm_var(1), dm_var(2))));
  CHECK(equal(subst_dom(t, ds_id()), t));
}

TEST_CASE("substitution shorter than the context fails") {
  auto s = ds_snoc(ds_empty(), dm_var(0));
  try {
    subst_dom(dm_var(1), s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ArityMismatch);
  }
}

// ---------------------------------------------------------------------------
// Composition law against a named-variable oracle.
//
// The oracle represents terms with explicit names and performs naive
// capture-avoiding substitution, entirely independent of the de Bruijn path.

namespace {

struct NTerm;
using NPtr = std::shared_ptr<NTerm>;
struct NTerm {
  enum Kind { Var, Lam, App } kind;
  std::string name;  // Var and Lam
  NPtr a, b;         // Lam body / App parts
};

NPtr nvar(std::string n) { return std::make_shared<NTerm>(NTerm{NTerm::Var, std::move(n), nullptr, nullptr}); }
NPtr nlam(std::string n, NPtr b) { return std::make_shared<NTerm>(NTerm{NTerm::Lam, std::move(n), std::move(b), nullptr}); }
NPtr napp(NPtr f, NPtr a) { return std::make_shared<NTerm>(NTerm{NTerm::App, "", std::move(f), std::move(a)}); }

int fresh_counter = 0;
std::string gensym() { return "#g" + std::to_string(fresh_counter++); }

NPtr nsubst(const NPtr& t, const std::map<std::string, NPtr>& sub) {
  switch (t->kind) {
    case NTerm::Var: {
      auto it = sub.find(t->name);
      return it == sub.end() ? t : it->second;
    }
    case NTerm::Lam: {
      // rename the binder to something fresh to avoid capture
      std::string nn = gensym();
      auto sub2 = sub;
      sub2[t->name] = nvar(nn);
      return nlam(nn, nsubst(t->a, sub2));
    }
    case NTerm::App:
      return napp(nsubst(t->a, sub), nsubst(t->b, sub));
  }
  return t;
}

bool nalpha(const NPtr& x, const NPtr& y, std::map<std::string, std::string>& ren) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NTerm::Var: {
      auto it = ren.find(x->name);
      return it == ren.end() ? x->name == y->name : it->second == y->name;
    }
    case NTerm::Lam: {
      auto saved = ren;
      ren[x->name] = y->name;
      bool r = nalpha(x->a, y->a, ren);
      ren = saved;
      return r;
    }
    case NTerm::App: {
      return nalpha(x->a, y->a, ren) && nalpha(x->b, y->b, ren);
    }
  }
  return false;
}

bool nalpha(const NPtr& x, const NPtr& y) {
  std::map<std::string, std::string> ren;
  return nalpha(x, y, ren);
}

// de Bruijn -> named, with ctx[i] the name of variable i
NPtr to_named(const DomTermPtr& t, std::vector<std::string>& ctx) {
  if (auto* v = std::get_if<DomTerm::Var>(&t->v)) return nvar(ctx[ctx.size() - 1 - v->index]);
  if (auto* l = std::get_if<DomTerm::Lam>(&t->v)) {
    std::string n = gensym();
    ctx.push_back(n);
    NPtr b = to_named(l->body, ctx);
    ctx.pop_back();
    return nlam(n, b);
  }
  auto& a = std::get<DomTerm::App>(t->v);
  return napp(to_named(a.fun, ctx), to_named(a.arg, ctx));
}

DomTermPtr gen_term(std::mt19937& rng, std::size_t ctx, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 2);
  switch (ctx == 0 && depth <= 0 ? 1 : pick(rng)) {
    case 0: {
      if (ctx == 0) return dm_lam(gen_term(rng, 1, depth - 1));
      std::uniform_int_distribution<std::size_t> v(0, ctx - 1);
      return dm_var(v(rng));
    }
    case 1:
      return dm_lam(gen_term(rng, ctx + 1, depth - 1));
    default:
      return dm_app(gen_term(rng, ctx, depth - 1), gen_term(rng, ctx, depth - 1));
  }
}

}  // namespace

TEST_CASE("substitution composition law against the named oracle") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 50; trial++) {
    const std::size_t n = 2;  // terms over x0, x1
    DomTermPtr t = gen_term(rng, n, 4);
    // delta maps the two variables of t to terms over y0, y1
    DomTermPtr d0 = gen_term(rng, n, 3), d1 = gen_term(rng, n, 3);
    DomSubstPtr delta = ds_snoc(ds_snoc(ds_empty(), d1), d0);
    // sigma maps y0, y1 to closed terms
    DomTermPtr s0 = gen_term(rng, 0, 3), s1 = gen_term(rng, 0, 3);
    DomSubstPtr sigma = ds_snoc(ds_snoc(ds_empty(), s1), s0);

    DomTermPtr lhs = subst_dom(subst_dom(t, delta), sigma);
    DomTermPtr rhs = subst_dom(t, compose_dom(ElabDomSubst::from(sigma), delta).to_subst());

    std::vector<std::string> names0;
    CHECK(equal(lhs, rhs));

    // and both agree with the named-variable oracle
    std::vector<std::string> xs = {"x1", "x0"};
    NPtr nt = to_named(t, xs);
    std::vector<std::string> ys = {"y1", "y0"};
    std::map<std::string, NPtr> ndelta = {{"x0", to_named(d0, ys)}, {"x1", to_named(d1, ys)}};
    std::vector<std::string> none;
    std::map<std::string, NPtr> nsigma = {{"y0", to_named(s0, none)}, {"y1", to_named(s1, none)}};
    NPtr oracle = nsubst(nsubst(nt, ndelta), nsigma);
    std::vector<std::string> empty_ctx;
    CHECK(nalpha(oracle, to_named(lhs, empty_ctx)));
  }
}

TEST_CASE("computation-level substitution") {
  // [Psi/psi](psi |- tm) -> (Psi |- tm): variable for variable at head
  auto boxT = ct_box(CtxKind::Term, dc_var(0), dt_tm());
  auto psi_val = CompArg(dc_snoc(dc_empty(), dt_tm()));
  auto out = subst_comp(boxT, psi_val);
  CHECK(equal(out, ct_box(CtxKind::Term, dc_snoc(dc_empty(), dt_tm()), dt_tm())));

  // [t/y](unbox y sigma) -> unbox t sigma, derived via the substitution definition
  auto t_val = cm_box({}, dm_app(dm_const(DomConst::Lam), dm_lam(dm_var(0))));
  auto body = dm_unbox(cm_var(0), ds_id());
  auto out2 = subst_comp(body, CompArg(t_val));
  CHECK(equal(out2, dm_unbox(t_val, ds_id())));

  // [s/y]tau with y unused -> tau
  auto tau = ct_fn(ann_ctx(), ct_box(CtxKind::Term, dc_var(0), dt_tm()));
  CHECK(equal(subst_comp(tau, CompArg(t_val)), tau));
}

TEST_CASE("open_comp instantiates motive binders") {
  // tau scoped under (psi, y): BoxT(psi |- tm) with psi at index 1
  auto tau = ct_box(CtxKind::Term, dc_var(1), dt_tm());
  auto out = open_comp(tau, {CompArg(cm_var(7)), CompArg(dc_snoc(dc_empty(), dt_tm()))}, 0);
  CHECK(equal(out, ct_box(CtxKind::Term, dc_snoc(dc_empty(), dt_tm()), dt_tm())));
  // gamma shift moves ambient references
  auto tau2 = ct_box(CtxKind::Term, dc_var(2), dt_tm());  // ambient var 0
  auto out2 = open_comp(tau2, {CompArg(cm_var(0)), CompArg(dc_empty())}, 3);
  CHECK(equal(out2, ct_box(CtxKind::Term, dc_var(3), dt_tm())));
}
