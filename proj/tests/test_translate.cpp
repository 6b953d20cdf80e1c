#include "doctest.h"

#include <random>

#include "cocon/surface.hpp"
#include "cocon/translate.hpp"

using namespace cocon;

namespace {

struct Pipeline {
  SourceFile file;
  DeclTable table;
  CheckState st;
  Checker chk;
  Translator tr;
  InternalChecker ichk;

  explicit Pipeline(Mode mode, const std::string& src)
      : file(parse(src, mode)), table(decl_table(file)),
        st{file.mode, kDefaultFuel, RedexOrder::LeftFirst, &table}, chk(st), tr(st),
        ichk(signature_for(file.mode)) {
    for (auto& d : file.decls) chk.check_decl(d.ascription, d.body);
  }

  TranslationOutput run(std::size_t i) const {
    CompCtx g;
    return tr.translate(g, std::get<CompTermPtr>(file.decls[i].body),
                        file.decls[i].ascription.type);
  }
};

}  // namespace

TEST_CASE("context and weakening clauses follow the figures") {
  CheckState st{Mode::Simple};
  Translator tr(st);
  CompCtx g;
  // [| x:tm, y:tm |] = times (times unit tm) tm
  DomCtxPtr psi = dc_snoc(dc_snoc(dc_empty(), dt_tm()), dt_tm());
  ITermPtr e = tr.tr_dom_ctx(g, psi);
  ITermPtr want = it_const(
      "times", {it_const("times", {it_const("unit"), it_const("tm")}), it_const("tm")});
  CHECK(iequal_syntax(e, want));

  // [| wk over one declaration |] = fn u. fst u
  ITermPtr wk = tr.tr_dom_subst(g, psi, ds_weaken(1), dc_snoc(dc_empty(), dt_tm()));
  ITermPtr want_wk = it_lam(it_const(
      "fst", {it_const("times", {it_const("unit"), it_const("tm")}), it_const("tm"),
              it_ovar(0)}));
  CHECK(iequal_syntax(wk, want_wk));

  // [| ctx |] = Obj
  CHECK(iequal_syntax(tr.translate_ann_type(g, ann_ctx()), ity_const("Obj")));
}

TEST_CASE("context variables translate to crisp variables") {
  CheckState st{Mode::Dep};
  Translator tr(st);
  CompCtx g;
  g.entries.push_back(ann_ctx());
  CHECK(iequal_syntax(tr.tr_dom_ctx(g, dc_var(0)), it_cvar(0)));
}

TEST_CASE("dep unbox clause emits let-box with a substitution action") {
  Pipeline p(Mode::Dep,
             "def use : (z:[. |- ty]) => [a0:ty |- ty] = fn z. box(a0 |- unbox(z; .));");
  TranslationOutput out = p.run(0);
  // cfn z. box(letbox u = z in u{...})
  auto* cl = std::get_if<ITerm::CrispLam>(&out.term->v);
  REQUIRE(cl);
  auto* bx = std::get_if<ITerm::Box>(&cl->body->v);
  REQUIRE(bx);
  auto* lb = std::get_if<ITerm::LetBox>(&bx->body->v);
  REQUIRE(lb);
  auto* sub = std::get_if<ITerm::Const>(&lb->body->v);
  REQUIRE(sub);
  CHECK(sub->name == "tmsub");
}

TEST_CASE("dep lam constant supplies App(e'{p}, v)") {
  Pipeline p(Mode::Dep, "def l : [. |- trm (arr o o)] = box(|- lam o o (\\x. x));");
  TranslationOutput out = p.run(0);
  auto* bx = std::get_if<ITerm::Box>(&out.term->v);
  REQUIRE(bx);
  auto* lam = std::get_if<ITerm::Const>(&bx->body->v);
  REQUIRE(lam);
  CHECK(lam->name == "lam");
  auto* app = std::get_if<ITerm::Const>(&lam->args[3]->v);
  REQUIRE(app);
  CHECK(app->name == "App");
  // function part is e'{p}
  auto* sub = std::get_if<ITerm::Const>(&app->args[3]->v);
  REQUIRE(sub);
  CHECK(sub->name == "tmsub");
  auto* vv = std::get_if<ITerm::Const>(&app->args[4]->v);
  REQUIRE(vv);
  CHECK(vv->name == "v");
}

TEST_CASE("typing soundness on small programs") {
  const char* simple_srcs[] = {
      "def d : [. |- tm] = box(|- lam \\x. x);",
      "def d : [x:tm, y:tm |- tm] = box(x, y |- app (lam \\w. app x w) y);",
      "def d : (p:ctx) => (y:[p |- tm]) => [p |- tm] = fn p. fn y. y;",
      "def d : (p:ctx) => (y:[p |- tm]) => [p, z:tm |- tm] = fn p. fn y. box(z |- "
      "unbox(y; wk 1));",
      "def d : (y:[x:tm |- tm]) => [. |- tm] = fn y. box(|- unbox(y; ., lam \\w. w));",
      "def d : [x:tm |-# tm] = box(x |- x);",
      "def copy : (p0:ctx) => (y:[p0 |- tm]) => [p0 |- tm] =\n"
      "  fn p0. fn y. rec<(q:ctx) => (z:[q |- tm]) => [q |- tm]>(\n"
      "    (q, p -> box(|- unbox(p; wk 0)));\n"
      "    (q, m, n, fm, fn1 -> box(|- app (unbox(fm; wk 0)) (unbox(fn1; wk 0))));\n"
      "    (q, m, fm -> box(|- lam \\x. unbox(fm; wk 0)))) p0 y;",
  };
  for (auto* src : simple_srcs) {
    CAPTURE(src);
    Pipeline p(Mode::Simple, src);
    for (std::size_t i = 0; i < p.file.decls.size(); i++) {
      TranslationOutput out = p.run(i);
      CHECK_NOTHROW(p.ichk.check_type(out.crisp_ctx, {}, out.type));
      CHECK_NOTHROW(p.ichk.check(out.crisp_ctx, {}, out.term, out.type));
    }
  }

  const char* dep_srcs[] = {
      "def d : [. |- ty] = box(|- arr o o);",
      "def d : [. |- trm (arr o o)] = box(|- lam o o (\\x. x));",
      "def d : [a0:ty, x:trm a0 |- trm a0] = box(a0, x |- x);",
      "def d : [a0:ty, x:trm a0 |-# trm a0] = box(a0, x |- x);",
      "def d : (z:[. |- ty]) => [. |- ty] = fn z. box(|- arr (unbox(z; .)) (unbox(z; .)));",
      "def d : [c:trm o, f:Pi x:trm o. trm o |- trm o] = box(c, f |- f c);",
      "def d : (y:[a0:ty, x:trm a0 |- trm a0]) => [w:trm o |- trm o] = fn y. box(w |- "
      "unbox(y; ., o, w));",
      "def swap : (p0:ctx) => (y:[p0 |- ty]) => [p0 |- ty] =\n"
      "  fn p0. fn y. rec<(q:ctx) => (z:[q |- ty]) => [q |- ty]>(\n"
      "    (q -> box(|- o));\n"
      "    (q, m, n, fm, fn1 -> box(|- arr (unbox(fn1; wk 0)) (unbox(fm; wk 0))))) p0 y;",
      "def copy_trm : (p0:ctx) => (z:[. |- ty]) => (y:[p0 |- trm (unbox(z; .))]) => "
      "[p0 |- trm (unbox(z; .))] =\n"
      "  fn p0. fn z. fn y. rec<(q:ctx) => (w:[. |- ty]) => (u:[q |- trm (unbox(w; .))]) "
      "=> [q |- trm (unbox(w; .))]>(\n"
      "    (q, a, t -> box(|- unbox(t; wk 0)));\n"
      "    (q, a, b, m, fm -> box(|- lam (unbox(a; .)) (unbox(b; .)) (\\x. unbox(fm; wk "
      "0))));\n"
      "    (q, a, b, m, n, fm, fn1 -> box(|- app (unbox(a; .)) (unbox(b; .)) (unbox(fm; wk "
      "0)) (unbox(fn1; wk 0))))) p0 z y;",
  };
  for (auto* src : dep_srcs) {
    CAPTURE(src);
    Pipeline p(Mode::Dep, src);
    for (std::size_t i = 0; i < p.file.decls.size(); i++) {
      TranslationOutput out = p.run(i);
      CHECK_NOTHROW(p.ichk.check_type(out.crisp_ctx, {}, out.type));
      CHECK_NOTHROW(p.ichk.check(out.crisp_ctx, {}, out.term, out.type));
    }
  }
}

TEST_CASE("beta soundness: unbox of a box against the substituted body") {
  // translate both sides of unbox(box(x |- app x x); (., M)) == app M M over y:tm
  Pipeline p(Mode::Simple,
             "def lhs : [y:tm |- tm] = box(y |- unbox(box(x |- app x x); ., y));\n"
             "def rhs : [y:tm |- tm] = box(y |- app y y);\n");
  TranslationOutput lhs = p.run(0), rhs = p.run(1);
  auto eq = p.ichk.equal({}, {}, lhs.term, rhs.term, lhs.type);
  REQUIRE(eq.has_value());
  CHECK(*eq);
}

TEST_CASE("eta soundness: t equals box(unbox t wk)") {
  Pipeline p(Mode::Simple,
             "def lhs : (t:[x:tm |- tm]) => [x:tm |- tm] = fn t. t;\n"
             "def rhs : (t:[x:tm |- tm]) => [x:tm |- tm] = fn t. box(x |- unbox(t; wk 0));\n");
  TranslationOutput lhs = p.run(0), rhs = p.run(1);
  auto eq = p.ichk.equal({}, {}, lhs.term, rhs.term, lhs.type);
  REQUIRE(eq.has_value());
  CHECK(*eq);
}

TEST_CASE("compositionality: subterms translate the same standalone") {
  Pipeline p(Mode::Simple, "def whole : [. |- tm] = box(|- app (lam \\x. x) (lam \\x. x));");
  TranslationOutput whole = p.run(0);
  // the inner (lam \x. x) : tm, translated on its own judgment
  CheckState st{Mode::Simple};
  Translator tr(st);
  CompCtx g;
  ITermPtr inner = tr.tr_dom_term(g, dc_empty(),
                                  dm_app(dm_const(DomConst::Lam), dm_lam(dm_var(0))), dt_tm());
  // locate it inside the whole translation: box(fn u. arrow-e(_, _, App(e1,u), App(e2,u)))
  auto* bx = std::get_if<ITerm::Box>(&whole.term->v);
  REQUIRE(bx);
  auto* lam = std::get_if<ITerm::Lam>(&bx->body->v);
  REQUIRE(lam);
  auto* ae = std::get_if<ITerm::Const>(&lam->body->v);
  REQUIRE(ae);
  CHECK(ae->name == "arrow-e");
  // the translation reduces administrative redexes, so compare semantically:
  // the subterm slot equals the standalone translation applied to u
  ICtx ord = {ity_const("El", {it_const("unit")})};
  auto eq = p.ichk.equal({}, ord, ae->args[3],
                         it_app(ishift(inner, IZone::Ordinary, 0, 1), it_ovar(0)),
                         ity_const("El", {it_const("tm")}));
  REQUIRE(eq.has_value());
  CHECK(*eq);
}

TEST_CASE("substitution commutation on generated simple instances") {
  // [| [s/x]M |]  ==  fn u. [|M|] (pair u ([|s|] u))   over psi = x:tm
  std::mt19937 rng(31007);
  CheckState st{Mode::Simple};
  Translator tr(st);
  Checker chk(st);
  InternalChecker ichk(simple_signature());
  CompCtx g;

  std::function<DomTermPtr(std::size_t, int)> gen = [&](std::size_t n, int depth) -> DomTermPtr {
    int pick = static_cast<int>(rng() % (depth <= 0 ? 2 : 4));
    if (pick == 0 && n > 0) return dm_var(rng() % n);
    if (pick <= 1)
      return dm_app(dm_const(DomConst::Lam), dm_lam(gen(n + 1, depth - 1)));
    return dm_app(dm_app(dm_const(DomConst::App), gen(n, depth - 1)), gen(n, depth - 1));
  };

  int checked = 0;
  for (int i = 0; i < 40; i++) {
    DomTermPtr m = gen(1, 3);
    DomTermPtr s = gen(0, 2);
    DomCtxPtr one = dc_snoc(dc_empty(), dt_tm());
    chk.check_dom_term(g, one, m, dt_tm());
    chk.check_dom_term(g, dc_empty(), s, dt_tm());

    ITermPtr em = tr.tr_dom_term(g, one, m, dt_tm());
    ITermPtr es = tr.tr_dom_term(g, dc_empty(), s, dt_tm());
    ITermPtr esub = tr.tr_dom_term(g, dc_empty(), subst_dom_one(m, s), dt_tm());
    // fn u. em (pair u (es u)) at El unit -> El tm
    ITermPtr rhs = it_lam(it_app(
        ishift(em, IZone::Ordinary, 0, 1),
        it_const("pair", {it_const("unit"), it_const("tm"), it_ovar(0),
                          it_app(ishift(es, IZone::Ordinary, 0, 1), it_ovar(0))})));
    ITypePtr at = ity_fn(ity_const("El", {it_const("unit")}),
                         ity_const("El", {it_const("tm")}));
    auto eq = ichk.equal({}, {}, esub, rhs, at);
    REQUIRE(eq.has_value());
    CHECK(*eq);
    checked++;
  }
  CHECK(checked == 40);
}
