#include <benchmark/benchmark.h>

#include "cocon/presheaf.hpp"
#include "cocon/surface.hpp"
#include "cocon/translate.hpp"

using namespace cocon;

namespace {

const char* kCopySrc =
    "def copy : (p0:ctx) => (y:[p0 |- tm]) => [p0 |- tm] =\n"
    "  fn p0. fn y. rec<(q:ctx) => (z:[q |- tm]) => [q |- tm]>(\n"
    "    (q, p -> box(|- unbox(p; wk 0)));\n"
    "    (q, m, n, fm, fn1 -> box(|- app (unbox(fm; wk 0)) (unbox(fn1; wk 0))));\n"
    "    (q, m, fm -> box(|- lam \\x. unbox(fm; wk 0)))) p0 y;\n";

DomTermPtr church(int n) {
  // lam f. lam x. f (f (... x))
  DomTermPtr body = dm_var(0);
  for (int i = 0; i < n; i++)
    body = dm_app(dm_app(dm_const(DomConst::App), dm_var(1)), body);
  return dm_app(dm_const(DomConst::Lam),
                dm_lam(dm_app(dm_const(DomConst::Lam), dm_lam(body))));
}

void bench_check(benchmark::State& state) {
  SourceFile f = parse(kCopySrc, Mode::Simple);
  DeclTable table = decl_table(f);
  CheckState st{Mode::Simple, kDefaultFuel, RedexOrder::LeftFirst, &table};
  for (auto _ : state) {
    Checker chk(st);
    for (auto& d : f.decls) chk.check_decl(d.ascription, d.body);
  }
}
BENCHMARK(bench_check);

void bench_copy_eval(benchmark::State& state) {
  SourceFile f = parse(kCopySrc, Mode::Simple);
  DeclTable table = decl_table(f);
  CheckState st{Mode::Simple, kDefaultFuel, RedexOrder::LeftFirst, &table};
  Checker chk(st);
  for (auto& d : f.decls) chk.check_decl(d.ascription, d.body);
  CompCtx g;
  CompTermPtr run = cm_app(cm_app(cm_ref("copy"), CompArg(dc_empty())),
                           CompArg(cm_box({}, church(static_cast<int>(state.range(0))))));
  for (auto _ : state) benchmark::DoNotOptimize(chk.normalize_comp(g, run));
}
BENCHMARK(bench_copy_eval)->Arg(4)->Arg(16)->Arg(64);

void bench_translate(benchmark::State& state) {
  SourceFile f = parse(kCopySrc, Mode::Simple);
  DeclTable table = decl_table(f);
  CheckState st{Mode::Simple, kDefaultFuel, RedexOrder::LeftFirst, &table};
  Checker chk(st);
  for (auto& d : f.decls) chk.check_decl(d.ascription, d.body);
  Translator tr(st);
  CompCtx g;
  auto& copy_fn = std::get<CompTermPtr>(f.decls[0].body);
  for (auto _ : state)
    benchmark::DoNotOptimize(tr.translate(g, copy_fn, f.decls[0].ascription.type));
}
BENCHMARK(bench_translate);

void bench_icheck_translated(benchmark::State& state) {
  SourceFile f = parse(kCopySrc, Mode::Simple);
  DeclTable table = decl_table(f);
  CheckState st{Mode::Simple, kDefaultFuel, RedexOrder::LeftFirst, &table};
  Checker chk(st);
  for (auto& d : f.decls) chk.check_decl(d.ascription, d.body);
  Translator tr(st);
  CompCtx g;
  auto& copy_fn = std::get<CompTermPtr>(f.decls[0].body);
  TranslationOutput out = tr.translate(g, copy_fn, f.decls[0].ascription.type);
  InternalChecker ichk(simple_signature());
  for (auto _ : state) ichk.check(out.crisp_ctx, {}, out.term, out.type);
}
BENCHMARK(bench_icheck_translated);

void bench_nat_enumeration(benchmark::State& state) {
  const char* diamond =
      "object bot\nobject a\nobject b\nobject top\nterminal top\n"
      "mor ba : bot -> a\nmor bb : bot -> b\nmor bt : bot -> top\n"
      "mor at : a -> top\nmor bt2 : b -> top\n"
      "compose at ba = bt\ncompose bt2 bb = bt\n";
  FiniteCategory cat = load_category(diamond);
  FinitePresheaf F = constant_presheaf(cat, 3);
  FinitePresheaf G = coproduct(yoneda(cat, 1), constant_presheaf(cat, 2));
  for (auto _ : state) benchmark::DoNotOptimize(nat_transformations(F, G));
}
BENCHMARK(bench_nat_enumeration);

}  // namespace

BENCHMARK_MAIN();
