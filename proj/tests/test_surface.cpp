#include "doctest.h"

#include <random>

#include "cocon/surface.hpp"

using namespace cocon;

TEST_CASE("box elaboration") {
  auto t = parse_comp_term("box(x, y |- app x y)", Mode::Simple);
  auto* b = std::get_if<CompTerm::BoxC>(&t->v);
  REQUIRE(b);
  CHECK(b->names == std::vector<std::string>{"x", "y"});
  auto want = dm_app(dm_app(dm_const(DomConst::App), dm_var(1)), dm_var(0));
  CHECK(equal(b->body, want));
}

TEST_CASE("identity function") {
  auto t = parse_comp_term("fn y. y", Mode::Simple);
  CHECK(equal(t, cm_fn(cm_var(0))));
}

TEST_CASE("unbox with weakening substitution") {
  auto t = parse_comp_term("fn t. box(x |- unbox(t; wk 1))", Mode::Simple);
  auto* f = std::get_if<CompTerm::Fn>(&t->v);
  REQUIRE(f);
  auto* b = std::get_if<CompTerm::BoxC>(&f->body->v);
  REQUIRE(b);
  CHECK(equal(b->body, dm_unbox(cm_var(0), ds_weaken(1))));
}

TEST_CASE("printer round-trips canonical forms") {
  CHECK(print_comp_term(cm_fn(cm_var(0)), Mode::Simple) == "fn y0. y0");
}

TEST_CASE("scope errors carry the offending name") {
  try {
    parse_comp_term("box(x |- app x z)", Mode::Simple);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ScopeError);
    CHECK(std::string(e.what()).find("'z'") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse("def x : [. |- tm] = box(|- lam \\y. );", Mode::Simple);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SyntaxError);
    CHECK(e.span().line == 1);
    CHECK(e.span().col > 30);
  }
}

TEST_CASE("declarations may reference earlier ones") {
  auto f = parse("def idt : [. |- tm] = box(|- lam \\x. x);\n"
                 "def use : [. |- tm] = idt;\n",
                 Mode::Simple);
  REQUIRE(f.decls.size() == 2);
  auto* b = std::get_if<CompTermPtr>(&f.decls[1].body);
  REQUIRE(b);
  auto* r = std::get_if<CompTerm::Ref>(&(*b)->v);
  REQUIRE(r);
  CHECK(r->name == "idt");
  // and the reference prints back as the name
  CHECK(print_comp_term(*b, Mode::Simple) == "idt");
}

TEST_CASE("directives attach to declarations") {
  auto f = parse("-- mode: dep\n"
                 "--expect: type-error NotAVariable\n"
                 "def bad : [a:ty |-# ty] = box(a |- o);\n"
                 "def fine : [. |- ty] = box(|- o); --expect: eval: box(|- o)\n",
                 Mode::Simple);
  CHECK(f.mode == Mode::Dep);
  REQUIRE(f.decls.size() == 2);
  CHECK(f.decls[0].expect.kind == Expectation::Kind::TypeError);
  CHECK(f.decls[0].expect.error_class == "NotAVariable");
  CHECK(f.decls[1].expect.kind == Expectation::Kind::Eval);
  REQUIRE(f.decls[1].expect.eval_term);
}

TEST_CASE("dep-mode constants are fully applied") {
  auto t = parse_comp_term("box(|- lam o o (\\x. x))", Mode::Dep);
  auto* b = std::get_if<CompTerm::BoxC>(&t->v);
  REQUIRE(b);
  auto* c = std::get_if<DomTerm::Const>(&b->body->v);
  REQUIRE(c);
  CHECK(c->name == DomConst::DLam);
  CHECK(c->args.size() == 3);

  try {
    parse_comp_term("box(|- arr o)", Mode::Dep);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ArityMismatch);
  }
}

TEST_CASE("recursor syntax") {
  const char* src =
      "fn p0. fn y. rec<(q:ctx) => (z:[q |- tm]) => [q |- tm]>("
      "(q, p -> box(|- unbox(p; wk 0)));"
      "(q, m, n, fm, fn1 -> box(|- app (unbox(fm; wk 0)) (unbox(fn1; wk 0))));"
      "(q, m, fm -> box(|- lam \\x. unbox(fm; wk 0)))) p0 y";
  auto t = parse_comp_term(src, Mode::Simple);
  auto* f1 = std::get_if<CompTerm::Fn>(&t->v);
  REQUIRE(f1);
  auto* f2 = std::get_if<CompTerm::Fn>(&f1->body->v);
  REQUIRE(f2);
  auto* r = std::get_if<CompTerm::Rec>(&f2->body->v);
  REQUIRE(r);
  CHECK(r->branches.size() == 3);
  CHECK(r->scrut_ty == nullptr);
  CHECK(equal(r->scrut, cm_var(0)));
}

// ---------------------------------------------------------------------------
// Round-trip properties

namespace {

DomTermPtr gen_dom(std::mt19937& rng, std::size_t ctx, std::size_t comp, int depth);

DomSubstPtr gen_subst(std::mt19937& rng, std::size_t ctx, std::size_t comp, int depth) {
  std::uniform_int_distribution<int> n(0, 2);
  DomSubstPtr s = rng() % 2 == 0 ? ds_empty() : ds_weaken(rng() % 3);
  int count = n(rng);
  for (int i = 0; i < count; i++) s = ds_snoc(s, gen_dom(rng, ctx, comp, depth - 1));
  return s;
}

DomTermPtr gen_dom(std::mt19937& rng, std::size_t ctx, std::size_t comp, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  switch (pick(rng)) {
    case 0:
      if (ctx > 0) return dm_var(rng() % ctx);
      return dm_const(DomConst::Lam);
    case 1:
      return dm_const(rng() % 2 ? DomConst::Lam : DomConst::App);
    case 2:
      return dm_lam(gen_dom(rng, ctx + 1, comp, depth - 1));
    case 3:
      if (comp > 0)
        return dm_unbox(cm_var(rng() % comp), gen_subst(rng, ctx, comp, depth - 1));
      [[fallthrough]];
    default:
      return dm_app(gen_dom(rng, ctx, comp, depth - 1), gen_dom(rng, ctx, comp, depth - 1));
  }
}

CompTypePtr gen_comp_ty(std::mt19937& rng, std::size_t comp, int depth) {
  if (depth <= 0 || rng() % 2 == 0) {
    DomCtxPtr c = dc_empty();
    for (std::size_t i = 0; i < rng() % 3; i++) c = dc_snoc(c, dt_tm());
    return ct_box(rng() % 4 ? CtxKind::Term : CtxKind::Variable, c, dt_tm());
  }
  bool isctx = rng() % 3 == 0;
  return ct_fn(isctx ? ann_ctx() : ann(gen_comp_ty(rng, comp, depth - 1)),
               gen_comp_ty(rng, comp + 1, depth - 1));
}

CompTermPtr gen_comp(std::mt19937& rng, std::size_t comp, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 4);
  switch (pick(rng)) {
    case 0:
      if (comp > 0) return cm_var(rng() % comp);
      [[fallthrough]];
    case 1: {
      std::size_t n = rng() % 3;
      std::vector<std::string> names;
      for (std::size_t i = 0; i < n; i++) names.push_back("v" + std::to_string(i));
      return cm_box(std::move(names), gen_dom(rng, n, comp, depth - 1));
    }
    case 2:
      return cm_fn(gen_comp(rng, comp + 1, depth - 1));
    case 3: {
      CompArg arg = rng() % 3 == 0
                        ? CompArg(dc_empty())
                        : CompArg(gen_comp(rng, comp, depth - 1));
      return cm_app(gen_comp(rng, comp, depth - 1), std::move(arg));
    }
    default: {
      CompTypePtr motive =
          ct_fn(ann_ctx(), ct_fn(ann(ct_box(CtxKind::Term, dc_var(0), dt_tm())),
                                 gen_comp_ty(rng, comp + 2, 1)));
      std::vector<RecBranch> bs;
      bs.push_back(RecBranch{2, gen_comp(rng, comp + 2, depth - 1)});
      bs.push_back(RecBranch{5, gen_comp(rng, comp + 5, depth - 1)});
      bs.push_back(RecBranch{3, gen_comp(rng, comp + 3, depth - 1)});
      return cm_rec(motive, std::move(bs), dc_empty(), nullptr,
                    gen_comp(rng, comp, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("parse . print is the identity on random well-scoped terms") {
  std::mt19937 rng(991);
  for (int i = 0; i < 200; i++) {
    CompTermPtr t = gen_comp(rng, 0, 4);
    std::string s = print_comp_term(t, Mode::Simple);
    CAPTURE(s);
    CompTermPtr u = parse_comp_term(s, Mode::Simple);
    CHECK(equal(t, u));
  }
}

TEST_CASE("parse . print on computation types") {
  std::mt19937 rng(992);
  for (int i = 0; i < 100; i++) {
    CompTypePtr t = gen_comp_ty(rng, 0, 3);
    std::string s = print_comp_type(t, Mode::Simple);
    CAPTURE(s);
    // reparse via a checked ascription
    SourceFile f = parse("def probe : " + s + " = fn y. y;", Mode::Simple);
    REQUIRE(f.decls.size() == 1);
    CHECK(equal(f.decls[0].ascription.type, t));
  }
}

TEST_CASE("nested Pi prints with explicit parentheses and reparses") {
  auto inner = dt_pi(dt_ty(), dt_trm(dm_var(0)));
  auto ty = dt_pi(inner, dt_pi(dt_ty(), dt_trm(dm_var(0))));
  std::string s = print_dom_type(ty, Mode::Dep);
  SourceFile f = parse("def probe : [. |- " + s + "] = box(|- o);", Mode::Dep);
  auto* bt = std::get_if<CompType::BoxT>(&f.decls[0].ascription.type->v);
  REQUIRE(bt);
  CHECK(equal(bt->ct.type, ty));
}
