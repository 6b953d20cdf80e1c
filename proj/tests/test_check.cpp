#include "doctest.h"

#include <random>

#include "cocon/check.hpp"
#include "cocon/surface.hpp"

using namespace cocon;

namespace {

Errc run_decl(Mode mode, const std::string& src) {
  // returns the error class, or UsageError to mean "checked fine"
  try {
    SourceFile f = parse(src, mode);
    DeclTable table = decl_table(f);
    Checker chk(CheckState{f.mode, kDefaultFuel, RedexOrder::LeftFirst, &table});
    for (auto& d : f.decls) chk.check_decl(d.ascription, d.body);
    return Errc::UsageError;
  } catch (const Error& e) {
    return e.code();
  }
}

struct Checked {
  SourceFile file;
  DeclTable table;
  Checker chk;
  explicit Checked(Mode mode, const std::string& src)
      : file(parse(src, mode)), table(decl_table(file)),
        chk(CheckState{file.mode, kDefaultFuel, RedexOrder::LeftFirst, &table}) {
    for (auto& d : file.decls) chk.check_decl(d.ascription, d.body);
  }
  const CompTermPtr& term(std::size_t i) const {
    return std::get<CompTermPtr>(file.decls[i].body);
  }
};

const char* kCopy =
    "def copy : (p0:ctx) => (y:[p0 |- tm]) => [p0 |- tm] =\n"
    "  fn p0. fn y. rec<(q:ctx) => (z:[q |- tm]) => [q |- tm]>(\n"
    "    (q, p -> box(|- unbox(p; wk 0)));\n"
    "    (q, m, n, fm, fn1 -> box(|- app (unbox(fm; wk 0)) (unbox(fn1; wk 0))));\n"
    "    (q, m, fm -> box(|- lam \\x. unbox(fm; wk 0)))) p0 y;\n";

const char* kSwap =
    "def swap : (p0:ctx) => (y:[p0 |- ty]) => [p0 |- ty] =\n"
    "  fn p0. fn y. rec<(q:ctx) => (z:[q |- ty]) => [q |- ty]>(\n"
    "    (q -> box(|- o));\n"
    "    (q, m, n, fm, fn1 -> box(|- arr (unbox(fn1; wk 0)) (unbox(fm; wk 0))))) p0 y;\n";

}  // namespace

TEST_CASE("domain context formation") {
  Checker chk(Mode::Simple);
  CompCtx g;
  g.entries.push_back(ann_ctx());
  // Γ with psi:ctx |- (psi, x:tm) ok — derivation via the third rule
  CHECK_NOTHROW(chk.check_dom_ctx(g, dc_snoc(dc_var(0), dt_tm())));
  // |- . ok in any Γ
  CHECK_NOTHROW(chk.check_dom_ctx(g, dc_empty()));
  CHECK_NOTHROW(chk.check_dom_ctx(CompCtx{}, dc_empty()));

  // referent of psi not annotated ctx
  Checker dep(Mode::Dep);
  CompCtx g2;
  g2.entries.push_back(ann(ct_box(CtxKind::Term, dc_empty(), dt_ty())));
  try {
    dep.check_dom_ctx(g2, dc_var(0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotCtxKind);
  }
  try {
    dep.check_dom_ctx(CompCtx{}, dc_var(3));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnboundCtxVar);
  }
  // (psi, x:trm y) with y out of scope: IllFormedType from the kernel
  CompCtx g3;
  g3.entries.push_back(ann_ctx());
  try {
    dep.check_dom_ctx(g3, dc_snoc(dc_var(0), dt_trm(dm_var(5))));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IllFormedType);
  }
}

TEST_CASE("domain type formation in dep mode") {
  Checker dep(Mode::Dep);
  CompCtx g;
  DomCtxPtr psi = dc_snoc(dc_empty(), dt_ty());
  // trm o ok: ty-constant rule then trm rule
  CHECK_NOTHROW(dep.check_dom_type(g, psi, dt_trm(dm_const(DomConst::O))));
  // ty ok: axiom
  CHECK_NOTHROW(dep.check_dom_type(g, psi, dt_ty()));
  // trm (lam ...) fails at the premise M : ty
  auto bad = dt_trm(dm_const(DomConst::DLam, {dm_const(DomConst::O), dm_const(DomConst::O),
                                              dm_lam(dm_var(0))}));
  try {
    dep.check_dom_type(g, psi, bad);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TypeMismatch);
  }
}

TEST_CASE("domain term inference") {
  Checker chk(Mode::Simple);
  CompCtx g;
  DomCtxPtr psi = dc_snoc(dc_empty(), dt_tm());
  // infer(app x x) -> tm: the app constant rule twice
  auto t = dm_app(dm_app(dm_const(DomConst::App), dm_var(0)), dm_var(0));
  CHECK(equal(chk.infer_dom_term(g, psi, t), dt_tm()));
  // infer(lam) -> (tm -> tm) -> tm in any context
  CHECK(equal(chk.infer_dom_term(g, dc_empty(), dm_const(DomConst::Lam)),
              dt_arrow(dt_arrow(dt_tm(), dt_tm()), dt_tm())));
  // x x: head not of arrow type
  try {
    chk.infer_dom_term(g, psi, dm_app(dm_var(0), dm_var(0)));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotAFunction);
  }
}

TEST_CASE("dep-mode constants") {
  Checker dep(Mode::Dep);
  CompCtx g;
  // check(lam o o (\x. x), trm (arr o o)) ok
  auto o = dm_const(DomConst::O);
  auto lam_id = dm_const(DomConst::DLam, {o, o, dm_lam(dm_var(0))});
  CHECK_NOTHROW(dep.check_dom_term(g, dc_empty(), lam_id,
                                   dt_trm(dm_const(DomConst::Arr, {o, o}))));
}

TEST_CASE("domain substitution typing") {
  Checker chk(Mode::Simple);
  CompCtx g;
  DomCtxPtr phi = dc_snoc(dc_empty(), dt_tm());
  DomCtxPtr psi = dc_snoc(phi, dt_tm());
  // wk 1 : psi -> phi via the weakening rule
  CHECK_NOTHROW(chk.check_dom_subst(g, psi, ds_weaken(1), phi));
  // empty rule
  CHECK_NOTHROW(chk.check_dom_subst(g, psi, ds_empty(), dc_empty()));
  try {
    chk.check_dom_subst(g, psi, ds_weaken(1), dc_empty());
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::WeakenShapeMismatch);
  }

  // dep: (., M) : (x: trm a) checks M against the substituted type
  Checker dep(Mode::Dep);
  auto o = dm_const(DomConst::O);
  DomCtxPtr target = dc_snoc(dc_empty(), dt_trm(o));
  // no closed inhabitant of trm o exists, so check failure is the TypeMismatch path
  try {
    dep.check_dom_subst(g, dc_empty(), ds_snoc(ds_empty(), o), target);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TypeMismatch);
  }
  // and a well-typed instance via a ty-entry target
  DomCtxPtr target2 = dc_snoc(dc_empty(), dt_ty());
  CHECK_NOTHROW(dep.check_dom_subst(g, dc_empty(), ds_snoc(ds_empty(), o), target2));
}

TEST_CASE("contextual objects") {
  CHECK(run_decl(Mode::Simple,
                 "def d : [x:tm, y:tm |- tm] = box(x, y |- app (lam \\w. app x w) y);") ==
        Errc::UsageError);
  CHECK(run_decl(Mode::Simple, "def d : [x:tm |-# tm] = box(x |- x);") == Errc::UsageError);
  CHECK(run_decl(Mode::Simple, "def d : [x:tm |-# tm] = box(x |- lam \\y. y);") ==
        Errc::NotAVariable);
}

TEST_CASE("computation typing") {
  CHECK(run_decl(Mode::Simple,
                 "def d : (p:ctx) => (y:[p |- tm]) => [p |- tm] = fn p. fn y. y;") ==
        Errc::UsageError);
  CHECK(run_decl(Mode::Simple, "def d : [. |- tm] = box(|- lam \\x. x);") == Errc::UsageError);
  // kind clash: ctx-expecting function applied to a boxed term
  CHECK(run_decl(Mode::Simple,
                 "def f : (p:ctx) => [. |- tm] = fn p. box(|- lam \\x. x);\n"
                 "def d : [. |- tm] = f (box(|- lam \\x. x));") == Errc::AnnKindMismatch);
}

TEST_CASE("recursor typing") {
  CHECK(run_decl(Mode::Simple, kCopy) == Errc::UsageError);
  CHECK(run_decl(Mode::Dep, kSwap) == Errc::UsageError);
  // missing lam branch
  CHECK(run_decl(Mode::Simple,
                 "def d : (p0:ctx) => (y:[p0 |- tm]) => [p0 |- tm] =\n"
                 "  fn p0. fn y. rec<(q:ctx) => (z:[q |- tm]) => [q |- tm]>(\n"
                 "    (q, p -> box(|- unbox(p; wk 0)));\n"
                 "    (q, m, n, fm, fn1 -> box(|- app (unbox(fm; wk 0)) (unbox(fn1; wk 0)))))"
                 " p0 y;") == Errc::BranchCountMismatch);
  // dep-mode trm recursor requires a closed type scrutinee
  CHECK(run_decl(Mode::Dep,
                 "def d : (p0:ctx) => (z:[p0 |- ty]) => (y:[p0 |- trm (unbox(z; wk 0))]) "
                 "=> [. |- ty] =\n"
                 "  fn p0. fn z. fn y. rec<(q:ctx) => (w:[. |- ty]) => "
                 "(u:[q |- trm (unbox(w; .))]) => [. |- ty]>(\n"
                 "    (q, a, t -> a);\n"
                 "    (q, a, b, m, fm -> a);\n"
                 "    (q, a, b, m, n, fm, fn1 -> a)) p0 z y;") == Errc::NotClosed);
}

TEST_CASE("normalization: unbox beta") {
  Checker chk(Mode::Simple);
  CompCtx g;
  // unbox(box(x |- app x x); (., M)) ->* app M M
  auto m = dm_app(dm_const(DomConst::Lam), dm_lam(dm_var(0)));
  auto boxed = cm_box({"x"}, dm_app(dm_app(dm_const(DomConst::App), dm_var(0)), dm_var(0)));
  auto t = dm_unbox(boxed, ds_snoc(ds_empty(), m));
  auto nf = chk.normalize_dom(g, t);
  CHECK(equal(nf, dm_app(dm_app(dm_const(DomConst::App), m), m)));
}

TEST_CASE("box eta holds definitionally") {
  Checker chk(Mode::Simple);
  CompCtx g;
  g.entries.push_back(ann(ct_box(CtxKind::Term, dc_snoc(dc_empty(), dt_tm()), dt_tm())));
  auto t = cm_var(0);
  auto expanded = cm_box({"x"}, dm_unbox(cm_var(0), ds_id()));
  CHECK(chk.equal_comp(g, t, expanded));
}

TEST_CASE("recursor reduction and stuckness") {
  Checked c(Mode::Simple,
            std::string(kCopy) +
                "def arg : [. |- tm] = box(|- app (lam \\x. x) (lam \\x. app x x));\n"
                "def run : [. |- tm] = copy . arg;\n");
  CompCtx g;
  // the copy function rebuilds its input
  CHECK(c.chk.equal_comp(g, c.term(2), c.term(1)));

  // a neutral scrutinee is stuck
  Checked c2(Mode::Simple, std::string(kCopy) +
                               "def stuck : (y:[. |- tm]) => [. |- tm] = fn y. copy . y;\n");
  auto nf = c2.chk.normalize_comp(g, c2.term(1));
  auto* fn = std::get_if<CompTerm::Fn>(&nf->v);
  REQUIRE(fn);
  CHECK(std::holds_alternative<CompTerm::Rec>(fn->body->v));
}

TEST_CASE("rec steps into the app branch with hypotheses instantiated") {
  Checked c(Mode::Simple,
            std::string(kCopy) +
                "def a1 : [. |- tm] = box(|- lam \\x. x);\n"
                "def a2 : [. |- tm] = box(|- lam \\x. app x x);\n"
                "def both : [. |- tm] = box(|- app (unbox(a1; .)) (unbox(a2; .)));\n"
                "def run : [. |- tm] = copy . both;\n"
                "def direct : [. |- tm] = box(|- app (unbox(copy . a1; .)) "
                "(unbox(copy . a2; .)));\n");
  CompCtx g;
  CHECK(c.chk.equal_comp(g, c.term(4), c.term(5)));
}

TEST_CASE("swap-arr evaluates") {
  Checked c(Mode::Dep, std::string(kSwap) +
                           "def t1 : [. |- ty] = box(|- arr o (arr o o));\n"
                           "def run : [. |- ty] = swap . t1;\n"
                           "def want : [. |- ty] = box(|- arr (arr o o) o);\n");
  CompCtx g;
  CHECK(c.chk.equal_comp(g, c.term(2), c.term(3)));
}

TEST_CASE("dep trm recursor: copy over trm") {
  const char* copy_trm =
      "def copy_trm : (p0:ctx) => (z:[. |- ty]) => (y:[p0 |- trm (unbox(z; .))]) => "
      "[p0 |- trm (unbox(z; .))] =\n"
      "  fn p0. fn z. fn y. rec<(q:ctx) => (w:[. |- ty]) => (u:[q |- trm (unbox(w; .))]) "
      "=> [q |- trm (unbox(w; .))]>(\n"
      "    (q, a, t -> box(|- unbox(t; wk 0)));\n"
      "    (q, a, b, m, fm -> box(|- lam (unbox(a; .)) (unbox(b; .)) (\\x. unbox(fm; wk 0))));\n"
      "    (q, a, b, m, n, fm, fn1 -> box(|- app (unbox(a; .)) (unbox(b; .)) "
      "(unbox(fm; wk 0)) (unbox(fn1; wk 0))))) p0 z y;\n";
  Checked c(Mode::Dep, std::string(copy_trm) +
                           "def oo : [. |- ty] = box(|- arr o o);\n"
                           "def idt : [. |- trm (arr o o)] = box(|- lam o o (\\x. x));\n"
                           "def run : [. |- trm (arr o o)] = copy_trm . oo idt;\n");
  CompCtx g;
  CHECK(c.chk.equal_comp(g, c.term(3), c.term(2)));
}

TEST_CASE("determinacy: redex order does not change normal forms") {
  SourceFile f = parse(std::string(kCopy) +
                           "def arg : [. |- tm] = box(|- app (lam \\x. app x x) "
                           "(app (lam \\x. x) (lam \\y. lam \\x. app x y)));\n"
                           "def run : [. |- tm] = copy . arg;\n",
                       Mode::Simple);
  DeclTable table = decl_table(f);
  Checker left(CheckState{Mode::Simple, kDefaultFuel, RedexOrder::LeftFirst, &table});
  Checker right(CheckState{Mode::Simple, kDefaultFuel, RedexOrder::RightFirst, &table});
  CompCtx g;
  for (auto& d : f.decls) {
    if (auto* t = std::get_if<CompTermPtr>(&d.body))
      CHECK(alpha_equal(left.normalize_comp(g, *t), right.normalize_comp(g, *t)));
  }
}

TEST_CASE("fuel exhaustion is reported") {
  Checker tiny(CheckState{Mode::Simple, 3, RedexOrder::LeftFirst, nullptr});
  CompCtx g;
  // nest enough redexes to exceed the bound
  DomTermPtr t = dm_var(0);
  for (int i = 0; i < 10; i++) t = dm_app(dm_lam(t), dm_var(0));
  try {
    tiny.normalize_dom(g, dm_lam(t));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FuelExhausted);
  }
}

// ---------------------------------------------------------------------------
// Properties

namespace {

DomTermPtr gen_simple_term(std::mt19937& rng, std::size_t ctx, int depth) {
  // well-typed by construction at type tm over a context of tm's
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 3);
  switch (ctx == 0 && depth <= 0 ? 1 : pick(rng)) {
    case 0: {
      if (ctx == 0) return dm_app(dm_const(DomConst::Lam), dm_lam(gen_simple_term(rng, 1, 0)));
      std::uniform_int_distribution<std::size_t> v(0, ctx - 1);
      return dm_var(v(rng));
    }
    case 1:
      return dm_app(dm_const(DomConst::Lam), dm_lam(gen_simple_term(rng, ctx + 1, depth - 1)));
    default:
      return dm_app(dm_app(dm_const(DomConst::App), gen_simple_term(rng, ctx, depth - 1)),
                    gen_simple_term(rng, ctx, depth - 1));
  }
}

DomCtxPtr tm_ctx(std::size_t n) {
  DomCtxPtr c = dc_empty();
  for (std::size_t i = 0; i < n; i++) c = dc_snoc(c, dt_tm());
  return c;
}

}  // namespace

TEST_CASE("subject reduction on random well-typed terms") {
  Checker chk(Mode::Simple);
  CompCtx g;
  std::mt19937 rng(7771);
  for (int i = 0; i < 100; i++) {
    std::size_t n = rng() % 3;
    DomTermPtr t = gen_simple_term(rng, n, 4);
    DomCtxPtr psi = tm_ctx(n);
    chk.check_dom_term(g, psi, t, dt_tm());
    DomTermPtr nf = chk.normalize_dom(g, t);
    CHECK_NOTHROW(chk.check_dom_term(g, psi, nf, dt_tm()));
  }
}

TEST_CASE("domain substitution lemma on generated instances") {
  // Γ;Ψ,x:A ⊢ t:B and Γ;Ψ ⊢ s:A imply Γ;Ψ ⊢ [s/x]t : [s/x]B
  Checker chk(Mode::Simple);
  CompCtx g;
  std::mt19937 rng(7772);
  for (int i = 0; i < 100; i++) {
    std::size_t n = rng() % 2 + 1;
    DomTermPtr t = gen_simple_term(rng, n, 3);
    DomTermPtr s = gen_simple_term(rng, n - 1, 3);
    chk.check_dom_term(g, tm_ctx(n), t, dt_tm());
    chk.check_dom_term(g, tm_ctx(n - 1), s, dt_tm());
    DomTermPtr out = subst_dom_one(t, s);
    CHECK_NOTHROW(chk.check_dom_term(g, tm_ctx(n - 1), out, dt_tm()));
  }
}

TEST_CASE("equality is an equivalence and a congruence") {
  Checker chk(Mode::Simple);
  CompCtx g;
  std::mt19937 rng(7773);
  std::vector<DomTermPtr> samples;
  for (int i = 0; i < 12; i++) samples.push_back(gen_simple_term(rng, 1, 3));
  for (auto& a : samples) CHECK(chk.equal_dom(g, a, a));
  for (auto& a : samples)
    for (auto& b : samples) {
      bool ab = chk.equal_dom(g, a, b);
      CHECK(ab == chk.equal_dom(g, b, a));
      if (ab) {
        // congruence under app with a shared argument
        auto ca = dm_app(dm_app(dm_const(DomConst::App), a), dm_var(0));
        auto cb = dm_app(dm_app(dm_const(DomConst::App), b), dm_var(0));
        CHECK(chk.equal_dom(g, ca, cb));
      }
    }
  for (auto& a : samples)
    for (auto& b : samples)
      for (auto& c : samples)
        if (chk.equal_dom(g, a, b) && chk.equal_dom(g, b, c)) CHECK(chk.equal_dom(g, a, c));
}
