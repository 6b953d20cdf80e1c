#include "cocon/internal.hpp"

#include <algorithm>
#include <functional>

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const ITerm::Const* as_const(const ITermPtr& t, const char* name) {
  auto* c = std::get_if<ITerm::Const>(&t->v);
  return (c && c->name == name) ? c : nullptr;
}

bool is_crisp_var0(const ITermPtr& t) {
  auto* v = std::get_if<ITerm::Var>(&t->v);
  return v && v->zone == IZone::Crisp && v->index == 0;
}

std::size_t rec_binders(IRecKind k) { return k == IRecKind::DepTrm ? 3 : 2; }

std::size_t rec_arity(IRecKind k) {
  switch (k) {
    case IRecKind::SimpleTm: return 5;  // tv ta tl c x
    case IRecKind::DepTy: return 4;     // bo barr psi y
    case IRecKind::DepTrm: return 6;    // bv bl ba psi a y
  }
  return 0;
}

using OptCtx = std::vector<std::optional<ITypePtr>>;

// Pushing a crisp binder renumbers the crisp variables that ordinary-context
// entry types refer to.
ICtx crisp_bumped(const ICtx& ord) {
  ICtx out;
  out.reserve(ord.size());
  for (auto& t : ord) out.push_back(ishift(t, IZone::Crisp, 0, 1));
  return out;
}
OptCtx crisp_bumped(const OptCtx& ord) {
  OptCtx out;
  out.reserve(ord.size());
  for (auto& t : ord)
    out.push_back(t ? std::optional<ITypePtr>(ishift(*t, IZone::Crisp, 0, 1)) : std::nullopt);
  return out;
}

OptCtx opt_of(const ICtx& c) {
  OptCtx out;
  out.reserve(c.size());
  for (auto& t : c) out.emplace_back(t);
  return out;
}

std::optional<ITypePtr> opt_lookup(const OptCtx& env, std::size_t idx, IZone zone) {
  if (idx >= env.size()) return std::nullopt;
  auto& e = env[env.size() - 1 - idx];
  if (!e) return std::nullopt;
  return ishift(*e, zone, 0, static_cast<std::int64_t>(idx) + 1);
}

// Is the body of a box a canonical variable: a projection spine (simple) or
// a v-spine (dep)?
bool is_proj_spine(const ITermPtr& t) {
  if (auto* sn = as_const(t, "snd")) {
    const ITermPtr* cur = &sn->args[2];
    while (auto* f = as_const(*cur, "fst")) cur = &f->args[2];
    auto* v = std::get_if<ITerm::Var>(&(*cur)->v);
    return v && v->zone == IZone::Ordinary && v->index == 0;
  }
  return false;
}

bool is_v_spine(const ITermPtr& t,
                const std::function<bool(const ITermPtr&)>& head_is_var = nullptr) {
  if (as_const(t, "v")) return true;
  if (head_is_var && head_is_var(t)) return true;
  if (auto* ms = as_const(t, "tmsub")) {
    if (!as_const(ms->args[3], "v") && !(head_is_var && head_is_var(ms->args[3])))
      return false;
    // spine substitution must be a p-composite
    std::function<bool(const ITermPtr&)> pchain = [&](const ITermPtr& s) -> bool {
      if (as_const(s, "p")) return true;
      if (auto* l = std::get_if<ITerm::Lam>(&s->v)) {
        const ITermPtr* cur = &l->body;
        while (auto* ap = std::get_if<ITerm::App>(&(*cur)->v)) {
          if (!as_const(ap->fun, "p")) return false;
          cur = &ap->arg;
        }
        auto* v = std::get_if<ITerm::Var>(&(*cur)->v);
        return v && v->zone == IZone::Ordinary && v->index == 0;
      }
      return false;
    };
    return pchain(ms->args[4]);
  }
  return false;
}

// variable-ness driven by the scrutinee's type
bool boxed_variable_type(const ITypePtr& t) {
  if (auto* b = std::get_if<IType::BoxT>(&t->v)) {
    if (std::holds_alternative<IType::VFn>(b->body->v)) return true;
    if (auto* c = std::get_if<IType::Const>(&b->body->v)) return c->name == "TmV";
  }
  return false;
}

// Rebase a closed-by-typing ty-term from Tm(Psi, ty') to Tm(top, ty).
std::optional<ITermPtr> rebase_ty(const ITermPtr& m) {
  if (auto* ms = as_const(m, "tmsub")) {
    if (as_const(ms->args[1], "top")) return ms->args[3];
    return std::nullopt;
  }
  if (as_const(m, "o")) return it_const("o", {it_const("top")});
  if (auto* ar = as_const(m, "arr")) {
    auto a = rebase_ty(ar->args[1]);
    auto b = rebase_ty(ar->args[2]);
    if (a && b) return it_const("arr", {it_const("top"), *a, *b});
    return std::nullopt;
  }
  return std::nullopt;
}

ITermPtr d_trm_at2(const ITermPtr& phi, const ITermPtr& a) {
  return it_const(
      "tysub", {phi, it_const("comp", {it_const("top"), it_const("ty")}), it_const("trm"),
                it_const("ext", {phi, it_const("top"), it_const("ty"),
                                 it_const("bang", {phi}), a})});
}

// Unfold a boxed-helper constant regardless of its literal-box guard; used
// when deciding equality, where expansion is always safe.
std::optional<ITermPtr> force_unfold_const(Mode mode, const ITerm::Const& c) {
  if (c.name == "lift") {
    ITermPtr a1 = ishift(c.args[0], IZone::Crisp, 0, 1);
    ITermPtr psi1 = ishift(c.args[1], IZone::Crisp, 0, 1);
    return it_letbox(c.args[2],
                     it_const("tmsub", {psi1, it_const("top"), a1, it_cvar(0),
                                        it_const("bang", {psi1})}));
  }
  if (c.name == "arr'" && mode == Mode::Dep) {
    return it_letbox(
        c.args[0],
        it_letbox(ishift(c.args[1], IZone::Crisp, 0, 1),
                  it_box(it_const("arr", {it_const("top"), it_cvar(1), it_cvar(0)}))));
  }
  if (c.name == "lam'" && mode == Mode::Dep) {
    ITermPtr psi = ishift(c.args[0], IZone::Crisp, 0, 1);
    ITermPtr a = ishift(c.args[1], IZone::Crisp, 0, 1);
    ITermPtr b = ishift(c.args[2], IZone::Crisp, 0, 1);
    return it_letbox(c.args[3], it_box(it_const("lam", {psi, a, b, it_cvar(0)})));
  }
  if (c.name == "app'" && mode == Mode::Dep) {
    ITermPtr psi = ishift(c.args[0], IZone::Crisp, 0, 2);
    ITermPtr a = ishift(c.args[1], IZone::Crisp, 0, 2);
    ITermPtr b = ishift(c.args[2], IZone::Crisp, 0, 2);
    return it_letbox(
        c.args[3],
        it_letbox(ishift(c.args[4], IZone::Crisp, 0, 1),
                  it_box(it_const("app", {psi, a, b, it_cvar(1), it_cvar(0)}))));
  }
  if (c.name == "app'" && mode == Mode::Simple) {
    return it_letbox(
        c.args[1],
        it_letbox(ishift(c.args[2], IZone::Crisp, 0, 1),
                  it_box(it_lam(it_const("app", {it_app(it_cvar(1), it_ovar(0)),
                                                 it_app(it_cvar(0), it_ovar(0))})))));
  }
  if (c.name == "lam'" && mode == Mode::Simple) {
    ITermPtr cc = ishift(ishift(c.args[0], IZone::Crisp, 0, 1), IZone::Ordinary, 0, 2);
    return it_letbox(
        c.args[1],
        it_box(it_lam(it_const(
            "lam", {it_lam(it_app(it_cvar(0),
                                  it_const("pair", {cc, it_const("tm"), it_ovar(1),
                                                    it_ovar(0)})))}))));
  }
  return std::nullopt;
}

// deterministic structural order used to canonicalize let-box chains
int term_cmp(const ITermPtr& a, const ITermPtr& b);

int type_cmp(const ITypePtr& a, const ITypePtr& b) {
  if (a->v.index() != b->v.index())
    return a->v.index() < b->v.index() ? -1 : 1;
  return std::visit(
      overloaded{
          [&](const IType::Fn& x) {
            auto& y = std::get<IType::Fn>(b->v);
            int c = type_cmp(x.dom, y.dom);
            return c ? c : type_cmp(x.cod, y.cod);
          },
          [&](const IType::VFn& x) {
            auto& y = std::get<IType::VFn>(b->v);
            int c = type_cmp(x.dom, y.dom);
            return c ? c : type_cmp(x.cod, y.cod);
          },
          [&](const IType::CrispFn& x) {
            auto& y = std::get<IType::CrispFn>(b->v);
            int c = type_cmp(x.dom, y.dom);
            return c ? c : type_cmp(x.cod, y.cod);
          },
          [&](const IType::BoxT& x) { return type_cmp(x.body, std::get<IType::BoxT>(b->v).body); },
          [&](const IType::Const& x) {
            auto& y = std::get<IType::Const>(b->v);
            if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
            if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (int c = term_cmp(x.args[i], y.args[i])) return c;
            return 0;
          }},
      a->v);
}

int term_cmp(const ITermPtr& a, const ITermPtr& b) {
  if (a->v.index() != b->v.index())
    return a->v.index() < b->v.index() ? -1 : 1;
  return std::visit(
      overloaded{
          [&](const ITerm::Var& x) {
            auto& y = std::get<ITerm::Var>(b->v);
            if (x.zone != y.zone) return x.zone == IZone::Crisp ? -1 : 1;
            if (x.index != y.index) return x.index < y.index ? -1 : 1;
            return 0;
          },
          [&](const ITerm::Lam& x) { return term_cmp(x.body, std::get<ITerm::Lam>(b->v).body); },
          [&](const ITerm::CrispLam& x) {
            return term_cmp(x.body, std::get<ITerm::CrispLam>(b->v).body);
          },
          [&](const ITerm::App& x) {
            auto& y = std::get<ITerm::App>(b->v);
            int c = term_cmp(x.fun, y.fun);
            return c ? c : term_cmp(x.arg, y.arg);
          },
          [&](const ITerm::CrispApp& x) {
            auto& y = std::get<ITerm::CrispApp>(b->v);
            int c = term_cmp(x.fun, y.fun);
            return c ? c : term_cmp(x.arg, y.arg);
          },
          [&](const ITerm::Box& x) { return term_cmp(x.body, std::get<ITerm::Box>(b->v).body); },
          [&](const ITerm::LetBox& x) {
            auto& y = std::get<ITerm::LetBox>(b->v);
            int c = term_cmp(x.scrut, y.scrut);
            return c ? c : term_cmp(x.body, y.body);
          },
          [&](const ITerm::Const& x) {
            auto& y = std::get<ITerm::Const>(b->v);
            if (int c = x.name.compare(y.name)) return c < 0 ? -1 : 1;
            if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (int c = term_cmp(x.args[i], y.args[i])) return c;
            return 0;
          },
          [&](const ITerm::Rec& x) {
            auto& y = std::get<ITerm::Rec>(b->v);
            if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
            if (int c = type_cmp(x.motive, y.motive)) return c;
            if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (int c = term_cmp(x.args[i], y.args[i])) return c;
            return 0;
          }},
      a->v);
}

struct INorm {
  const ISignature& sig;
  long fuel;
  // comparison mode: unfold the guarded helper constants unconditionally
  bool force_helpers = false;
  // normalization is environment-independent on recursor-free subtrees, and
  // rewriting shares subterms heavily, so cache per node; cached keys hold a
  // reference so addresses cannot be recycled under us
  std::map<const ITerm*, std::pair<ITermPtr, ITermPtr>> memo;
  std::map<const ITerm*, std::pair<ITermPtr, bool>> recfree;

  bool rec_free(const ITermPtr& t) {
    auto it = recfree.find(t.get());
    if (it != recfree.end()) return it->second.second;
    bool out = std::visit(
        overloaded{[&](const ITerm::Rec&) { return false; },
                   [&](const ITerm::Var&) { return true; },
                   [&](const ITerm::Lam& x) { return rec_free(x.body); },
                   [&](const ITerm::CrispLam& x) { return rec_free(x.body); },
                   [&](const ITerm::App& x) { return rec_free(x.fun) && rec_free(x.arg); },
                   [&](const ITerm::CrispApp& x) {
                     return rec_free(x.fun) && rec_free(x.arg);
                   },
                   [&](const ITerm::Box& x) { return rec_free(x.body); },
                   [&](const ITerm::LetBox& x) {
                     return rec_free(x.scrut) && rec_free(x.body);
                   },
                   [&](const ITerm::Const& x) {
                     for (auto& a : x.args)
                       if (!rec_free(a)) return false;
                     return true;
                   }},
        t->v);
    recfree.emplace(t.get(), std::make_pair(t, out));
    return out;
  }

  ITermPtr term(OptCtx& denv, OptCtx& oenv, const ITermPtr& t) {
    if (rec_free(t)) {
      auto it = memo.find(t.get());
      if (it != memo.end()) return it->second.second;
      ITermPtr out = term_raw(denv, oenv, t);
      memo.emplace(t.get(), std::make_pair(t, out));
      return out;
    }
    return term_raw(denv, oenv, t);
  }

  void spend() {
    if (--fuel < 0) fail(Errc::FuelExhausted, "step bound exceeded during normalization");
  }

  ITermPtr term_raw(OptCtx& denv, OptCtx& oenv, const ITermPtr& t) {
    return std::visit(
        overloaded{
            [&](const ITerm::Var&) { return t; },
            [&](const ITerm::Lam& x) -> ITermPtr {
              oenv.emplace_back(std::nullopt);
              ITermPtr b = term(denv, oenv, x.body);
              oenv.pop_back();
              // a let-box whose scrutinee ignores the binder commutes out;
              // the zones are independent, so the body is unchanged
              if (auto* lb = std::get_if<ITerm::LetBox>(&b->v)) {
                if (!uses_var(lb->scrut, IZone::Ordinary, 0)) {
                  spend();
                  return term(denv, oenv,
                              it_letbox(ishift(lb->scrut, IZone::Ordinary, 0, -1),
                                        it_lam(lb->body)));
                }
              }
              // eta-contract fn x. f x so substitution composites expose
              // their ext/bang/p structure to the rewrite rules
              if (auto* ap = std::get_if<ITerm::App>(&b->v)) {
                if (auto* v = std::get_if<ITerm::Var>(&ap->arg->v)) {
                  if (v->zone == IZone::Ordinary && v->index == 0 &&
                      !uses_var(ap->fun, IZone::Ordinary, 0)) {
                    spend();
                    return ishift(ap->fun, IZone::Ordinary, 0, -1);
                  }
                }
              }
              return it_lam(b);
            },
            [&](const ITerm::CrispLam& x) -> ITermPtr {
              denv.emplace_back(std::nullopt);
              OptCtx oenv2 = crisp_bumped(oenv);
              ITermPtr b = term(denv, oenv2, x.body);
              denv.pop_back();
              if (auto* lb = std::get_if<ITerm::LetBox>(&b->v)) {
                if (!uses_var(lb->scrut, IZone::Crisp, 0)) {
                  spend();
                  ITermPtr swapped =
                      iopen(lb->body, IZone::Crisp, {it_cvar(1), it_cvar(0)}, 2);
                  return term(denv, oenv,
                              it_letbox(ishift(lb->scrut, IZone::Crisp, 0, -1),
                                        it_clam(swapped)));
                }
              }
              if (auto* ap = std::get_if<ITerm::CrispApp>(&b->v)) {
                if (auto* v = std::get_if<ITerm::Var>(&ap->arg->v)) {
                  if (v->zone == IZone::Crisp && v->index == 0 &&
                      !uses_var(ap->fun, IZone::Crisp, 0)) {
                    spend();
                    return ishift(ap->fun, IZone::Crisp, 0, -1);
                  }
                }
              }
              return it_clam(b);
            },
            [&](const ITerm::App& x) -> ITermPtr {
              ITermPtr f = term(denv, oenv, x.fun);
              ITermPtr a = term(denv, oenv, x.arg);
              if (auto* l = std::get_if<ITerm::Lam>(&f->v)) {
                spend();
                return term(denv, oenv, isubst(l->body, IZone::Ordinary, a));
              }
              if (auto* lb = std::get_if<ITerm::LetBox>(&f->v)) {
                spend();
                return term(denv, oenv,
                            it_letbox(lb->scrut,
                                      it_app(lb->body, ishift(a, IZone::Crisp, 0, 1))));
              }
              if (auto* lb = std::get_if<ITerm::LetBox>(&a->v)) {
                spend();
                return term(denv, oenv,
                            it_letbox(lb->scrut,
                                      it_app(ishift(f, IZone::Crisp, 0, 1), lb->body)));
              }
              // p applied to an ext-application collapses pointwise
              if (as_const(f, "p")) {
                if (auto* inner = std::get_if<ITerm::App>(&a->v)) {
                  if (auto* e = as_const(inner->fun, "ext")) {
                    spend();
                    return term(denv, oenv, it_app(e->args[3], inner->arg));
                  }
                }
              }
              return it_app(f, a);
            },
            [&](const ITerm::CrispApp& x) -> ITermPtr {
              ITermPtr f = term(denv, oenv, x.fun);
              ITermPtr a = term(denv, oenv, x.arg);
              if (auto* l = std::get_if<ITerm::CrispLam>(&f->v)) {
                spend();
                return term(denv, oenv, isubst(l->body, IZone::Crisp, a));
              }
              if (auto* lb = std::get_if<ITerm::LetBox>(&f->v)) {
                spend();
                return term(denv, oenv,
                            it_letbox(lb->scrut,
                                      it_capp(lb->body, ishift(a, IZone::Crisp, 0, 1))));
              }
              if (auto* lb = std::get_if<ITerm::LetBox>(&a->v)) {
                spend();
                return term(denv, oenv,
                            it_letbox(lb->scrut,
                                      it_capp(ishift(f, IZone::Crisp, 0, 1), lb->body)));
              }
              return it_capp(f, a);
            },
            [&](const ITerm::Box& x) -> ITermPtr {
              ITermPtr b = term(denv, oenv, x.body);
              if (auto* lb = std::get_if<ITerm::LetBox>(&b->v)) {
                spend();
                // idempotency: box(letbox u = t in u) is t
                if (is_crisp_var0(lb->body)) return lb->scrut;
                return term(denv, oenv, it_letbox(lb->scrut, it_box(lb->body)));
              }
              return it_box(b);
            },
            [&](const ITerm::LetBox& x) -> ITermPtr {
              ITermPtr s = term(denv, oenv, x.scrut);
              if (auto* bx = std::get_if<ITerm::Box>(&s->v)) {
                spend();
                return term(denv, oenv, isubst(x.body, IZone::Crisp, bx->body));
              }
              if (auto* lb = std::get_if<ITerm::LetBox>(&s->v)) {
                spend();
                return term(denv, oenv,
                            it_letbox(lb->scrut,
                                      it_letbox(lb->body,
                                                ishift(x.body, IZone::Crisp, 1, 1))));
              }
              std::optional<ITypePtr> st;
              if (auto it = try_infer_box(denv, oenv, s)) st = *it;
              denv.push_back(st);
              OptCtx oenv2 = crisp_bumped(oenv);
              ITermPtr b = term(denv, oenv2, x.body);
              denv.pop_back();
              if (auto* bx = std::get_if<ITerm::Box>(&b->v)) {
                if (is_crisp_var0(bx->body)) {
                  spend();
                  return s;
                }
              }
              if (auto* inner = std::get_if<ITerm::LetBox>(&b->v)) {
                // share duplicate bindings of the same scrutinee
                if (iequal_syntax(inner->scrut, ishift(s, IZone::Crisp, 0, 1))) {
                  spend();
                  return term(denv, oenv,
                              it_letbox(s, isubst(inner->body, IZone::Crisp, it_cvar(0))));
                }
                // order independent adjacent bindings canonically
                if (!uses_var(inner->scrut, IZone::Crisp, 0)) {
                  ITermPtr s2 = ishift(inner->scrut, IZone::Crisp, 0, -1);
                  if (term_cmp(s2, s) < 0) {
                    spend();
                    ITermPtr swapped =
                        iopen(inner->body, IZone::Crisp, {it_cvar(1), it_cvar(0)}, 2);
                    return term(denv, oenv,
                                it_letbox(s2, it_letbox(ishift(s, IZone::Crisp, 0, 1),
                                                        swapped)));
                  }
                }
              }
              return it_letbox(s, b);
            },
            [&](const ITerm::Const& x) -> ITermPtr {
              std::vector<ITermPtr> args(x.args.size());
              for (std::size_t i = 0; i < x.args.size(); i++)
                args[i] = term(denv, oenv, x.args[i]);
              // hoist a let-box out of the leftmost argument position
              for (std::size_t i = 0; i < args.size(); i++) {
                if (auto* lb = std::get_if<ITerm::LetBox>(&args[i]->v)) {
                  spend();
                  std::vector<ITermPtr> shifted(args.size());
                  for (std::size_t j = 0; j < args.size(); j++)
                    shifted[j] = j == i ? lb->body : ishift(args[j], IZone::Crisp, 0, 1);
                  return term(denv, oenv,
                              it_letbox(lb->scrut, it_const(x.name, std::move(shifted))));
                }
              }
              ITerm::Const node{x.name, std::move(args)};
              auto rw = sig.rewrites.find(x.name);
              if (rw != sig.rewrites.end()) {
                if (auto next = rw->second(node)) {
                  spend();
                  return term(denv, oenv, *next);
                }
              }
              if (force_helpers) {
                if (auto next = force_unfold_const(sig.mode, node)) {
                  spend();
                  return term(denv, oenv, *next);
                }
              }
              return std::make_shared<ITerm>(ITerm{std::move(node)});
            },
            [&](const ITerm::Rec& x) -> ITermPtr {
              std::size_t k = rec_binders(x.kind);
              for (std::size_t i = 0; i < k; i++) denv.emplace_back(std::nullopt);
              ITypePtr motive = type(denv, oenv, x.motive);
              for (std::size_t i = 0; i < k; i++) denv.pop_back();
              std::vector<ITermPtr> args(x.args.size());
              for (std::size_t i = 0; i < x.args.size(); i++)
                args[i] = term(denv, oenv, x.args[i]);
              for (std::size_t i = 0; i < args.size(); i++) {
                if (auto* lb = std::get_if<ITerm::LetBox>(&args[i]->v)) {
                  spend();
                  std::vector<ITermPtr> shifted(args.size());
                  for (std::size_t j = 0; j < args.size(); j++)
                    shifted[j] = j == i ? lb->body : ishift(args[j], IZone::Crisp, 0, 1);
                  return term(denv, oenv,
                              it_letbox(lb->scrut,
                                        it_rec(x.kind, ishift(motive, IZone::Crisp, k, 1),
                                               std::move(shifted))));
                }
              }
              ITerm::Rec node{x.kind, motive, std::move(args)};
              if (auto stepped = rec_step(denv, oenv, node)) {
                spend();
                return term(denv, oenv, *stepped);
              }
              return std::make_shared<ITerm>(ITerm{std::move(node)});
            }},
        t->v);
  }

  ITypePtr type(OptCtx& denv, OptCtx& oenv, const ITypePtr& t) {
    return std::visit(
        overloaded{[&](const IType::Fn& x) {
                     ITypePtr d = type(denv, oenv, x.dom);
                     oenv.emplace_back(std::nullopt);
                     ITypePtr c = type(denv, oenv, x.cod);
                     oenv.pop_back();
                     return ity_fn(d, c);
                   },
                   [&](const IType::VFn& x) {
                     return ity_vfn(type(denv, oenv, x.dom), type(denv, oenv, x.cod));
                   },
                   [&](const IType::CrispFn& x) {
                     ITypePtr d = type(denv, oenv, x.dom);
                     denv.emplace_back(std::nullopt);
                     OptCtx oenv2 = crisp_bumped(oenv);
                     ITypePtr c = type(denv, oenv2, x.cod);
                     denv.pop_back();
                     return ity_cfn(d, c);
                   },
                   [&](const IType::BoxT& x) { return ity_box(type(denv, oenv, x.body)); },
                   [&](const IType::Const& x) {
                     std::vector<ITermPtr> args(x.args.size());
                     for (std::size_t i = 0; i < x.args.size(); i++)
                       args[i] = term(denv, oenv, x.args[i]);
                     return ity_const(x.name, std::move(args));
                   }},
        t->v);
  }

  // Best-effort type of a normal term; used for variable-kind promotion only.
  std::optional<ITypePtr> try_infer_box(OptCtx& denv, OptCtx& oenv, const ITermPtr& t) {
    auto ty = try_infer(denv, oenv, t);
    if (!ty) return std::nullopt;
    if (auto* b = std::get_if<IType::BoxT>(&(*ty)->v)) return b->body;
    return std::nullopt;
  }

  std::optional<ITypePtr> try_infer(OptCtx& denv, OptCtx& oenv, const ITermPtr& t) {
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) -> std::optional<ITypePtr> {
              return opt_lookup(x.zone == IZone::Crisp ? denv : oenv, x.index, x.zone);
            },
            [&](const ITerm::App& x) -> std::optional<ITypePtr> {
              auto f = try_infer(denv, oenv, x.fun);
              if (!f) return std::nullopt;
              if (auto* fn = std::get_if<IType::Fn>(&(*f)->v))
                return isubst(fn->cod, IZone::Ordinary, x.arg);
              if (auto* vf = std::get_if<IType::VFn>(&(*f)->v)) return vf->cod;
              return std::nullopt;
            },
            [&](const ITerm::CrispApp& x) -> std::optional<ITypePtr> {
              auto f = try_infer(denv, oenv, x.fun);
              if (!f) return std::nullopt;
              if (auto* fn = std::get_if<IType::CrispFn>(&(*f)->v))
                return isubst(fn->cod, IZone::Crisp, x.arg);
              return std::nullopt;
            },
            [&](const ITerm::Const& x) -> std::optional<ITypePtr> {
              auto it = sig.terms.find(x.name);
              if (it == sig.terms.end()) return std::nullopt;
              std::vector<ITermPtr> rev(x.args.rbegin(), x.args.rend());
              return iopen(it->second.result, IZone::Ordinary, rev);
            },
            [&](const auto&) -> std::optional<ITypePtr> { return std::nullopt; }},
        t->v);
  }

  bool scrutinee_is_variable(OptCtx& denv, OptCtx& oenv, const ITermPtr& x, bool dep) {
    if (auto* bx = std::get_if<ITerm::Box>(&x->v)) {
      if (!dep) {
        if (auto* l = std::get_if<ITerm::Lam>(&bx->body->v)) return is_proj_spine(l->body);
        // eta-contracted neutral body of variable type
        auto ty = try_infer(denv, oenv, bx->body);
        return ty && std::holds_alternative<IType::VFn>((*ty)->v);
      }
      auto head_is_var = [&](const ITermPtr& h) {
        auto ht = try_infer(denv, oenv, h);
        if (!ht) return false;
        if (auto* hc = std::get_if<IType::Const>(&(*ht)->v)) return hc->name == "TmV";
        return false;
      };
      return is_v_spine(bx->body, head_is_var);
    }
    auto ty = try_infer(denv, oenv, x);
    return ty && boxed_variable_type(*ty);
  }

  std::optional<ITermPtr> rec_step(OptCtx& denv, OptCtx& oenv, const ITerm::Rec& r) {
    switch (r.kind) {
      case IRecKind::SimpleTm: {
        const ITermPtr& tv = r.args[0];
        const ITermPtr& ta = r.args[1];
        const ITermPtr& tl = r.args[2];
        const ITermPtr& c = r.args[3];
        const ITermPtr& x = r.args[4];
        if (scrutinee_is_variable(denv, oenv, x, false))
          return it_capp(it_capp(tv, c), x);
        auto* bx = std::get_if<ITerm::Box>(&x->v);
        if (!bx) return std::nullopt;
        auto* l = std::get_if<ITerm::Lam>(&bx->body->v);
        if (!l) return std::nullopt;
        if (auto* ap = as_const(l->body, "app")) {
          ITermPtr m = it_box(it_lam(ap->args[0]));
          ITermPtr n = it_box(it_lam(ap->args[1]));
          ITermPtr fm = it_rec(r.kind, r.motive, {tv, ta, tl, c, m});
          ITermPtr fn = it_rec(r.kind, r.motive, {tv, ta, tl, c, n});
          return it_capp(it_capp(it_capp(it_capp(it_capp(ta, c), m), n), fm), fn);
        }
        if (auto* lm = as_const(l->body, "lam")) {
          // rebind the HOAS body over El(times c tm)
          ITermPtr f = lm->args[0];
          ITermPtr cu = ishift(c, IZone::Ordinary, 0, 1);
          ITermPtr f1 = ishift(f, IZone::Ordinary, 1, 1);
          ITermPtr fu = isubst(f1, IZone::Ordinary,
                               it_const("fst", {cu, it_const("tm"), it_ovar(0)}), 0);
          ITermPtr body = it_app(fu, it_const("snd", {cu, it_const("tm"), it_ovar(0)}));
          ITermPtr m = it_box(it_lam(body));
          ITermPtr ext = it_const("times", {c, it_const("tm")});
          ITermPtr fm = it_rec(r.kind, r.motive, {tv, ta, tl, ext, m});
          return it_capp(it_capp(it_capp(tl, c), m), fm);
        }
        return std::nullopt;
      }
      case IRecKind::DepTy: {
        const ITermPtr& bo = r.args[0];
        const ITermPtr& ba = r.args[1];
        const ITermPtr& psi = r.args[2];
        const ITermPtr& y = r.args[3];
        auto* bx = std::get_if<ITerm::Box>(&y->v);
        if (!bx) return std::nullopt;
        if (as_const(bx->body, "o")) return it_capp(bo, psi);
        if (auto* ar = as_const(bx->body, "arr")) {
          ITermPtr m = it_box(ar->args[1]);
          ITermPtr n = it_box(ar->args[2]);
          ITermPtr fm = it_rec(r.kind, r.motive, {bo, ba, psi, m});
          ITermPtr fn = it_rec(r.kind, r.motive, {bo, ba, psi, n});
          return it_capp(it_capp(it_capp(it_capp(it_capp(ba, psi), m), n), fm), fn);
        }
        return std::nullopt;
      }
      case IRecKind::DepTrm: {
        const ITermPtr& bv = r.args[0];
        const ITermPtr& bl = r.args[1];
        const ITermPtr& ba = r.args[2];
        const ITermPtr& psi = r.args[3];
        const ITermPtr& a = r.args[4];
        const ITermPtr& y = r.args[5];
        if (scrutinee_is_variable(denv, oenv, y, true))
          return it_capp(it_capp(it_capp(bv, psi), a), y);
        auto* bx = std::get_if<ITerm::Box>(&y->v);
        if (!bx) return std::nullopt;
        if (auto* lm = as_const(bx->body, "lam")) {
          auto a0 = rebase_ty(lm->args[1]);
          auto b0 = rebase_ty(lm->args[2]);
          if (!a0 || !b0) return std::nullopt;
          ITermPtr av = it_box(*a0);
          ITermPtr bv2 = it_box(*b0);
          ITermPtr m = it_box(lm->args[3]);
          ITermPtr ext = it_const("comp", {psi, d_trm_at2(psi, lm->args[1])});
          ITermPtr fm = it_rec(r.kind, r.motive, {bv, bl, ba, ext, bv2, m});
          return it_capp(it_capp(it_capp(it_capp(it_capp(bl, psi), av), bv2), m), fm);
        }
        if (auto* ap = as_const(bx->body, "app")) {
          auto a0 = rebase_ty(ap->args[1]);
          auto b0 = rebase_ty(ap->args[2]);
          if (!a0 || !b0) return std::nullopt;
          ITermPtr av = it_box(*a0);
          ITermPtr bv2 = it_box(*b0);
          ITermPtr m = it_box(ap->args[3]);
          ITermPtr n = it_box(ap->args[4]);
          ITermPtr arr0 = it_box(it_const("arr", {it_const("top"), *a0, *b0}));
          ITermPtr fm = it_rec(r.kind, r.motive, {bv, bl, ba, psi, arr0, m});
          ITermPtr fn = it_rec(r.kind, r.motive, {bv, bl, ba, psi, av, n});
          return it_capp(
              it_capp(it_capp(it_capp(it_capp(it_capp(it_capp(ba, psi), av), bv2), m), n),
                      fm),
              fn);
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Type-directed comparison of normal forms

struct ICompare {
  const ISignature& sig;
  INorm& norm;
  OptCtx denv, oenv;
  std::map<std::pair<const ITerm*, const ITerm*>, std::tuple<ITermPtr, ITermPtr, bool>> umemo;

  ITermPtr renorm(const ITermPtr& t) { return norm.term(denv, oenv, t); }

  bool terms(const ITypePtr& at, const ITermPtr& a, const ITermPtr& b) {
    if (iequal_syntax(a, b)) return true;
    if (at) {
      if (auto* fn = std::get_if<IType::Fn>(&at->v)) {
        ITermPtr ea = renorm(it_app(ishift(a, IZone::Ordinary, 0, 1), it_ovar(0)));
        ITermPtr eb = renorm(it_app(ishift(b, IZone::Ordinary, 0, 1), it_ovar(0)));
        oenv.emplace_back(fn->dom);
        bool r = terms(fn->cod, ea, eb);
        oenv.pop_back();
        return r;
      }
      if (auto* vf = std::get_if<IType::VFn>(&at->v)) {
        ITermPtr ea = renorm(it_app(ishift(a, IZone::Ordinary, 0, 1), it_ovar(0)));
        ITermPtr eb = renorm(it_app(ishift(b, IZone::Ordinary, 0, 1), it_ovar(0)));
        oenv.emplace_back(vf->dom);
        bool r = terms(ishift(vf->cod, IZone::Ordinary, 0, 1), ea, eb);
        oenv.pop_back();
        return r;
      }
      if (auto* cf = std::get_if<IType::CrispFn>(&at->v)) {
        ITermPtr ea = renorm(it_capp(ishift(a, IZone::Crisp, 0, 1), it_cvar(0)));
        ITermPtr eb = renorm(it_capp(ishift(b, IZone::Crisp, 0, 1), it_cvar(0)));
        denv.emplace_back(cf->dom);
        OptCtx saved = oenv;
        oenv = crisp_bumped(oenv);
        bool r = terms(cf->cod, ea, eb);
        oenv = std::move(saved);
        denv.pop_back();
        return r;
      }
      if (auto* bt = std::get_if<IType::BoxT>(&at->v)) {
        auto* ba = std::get_if<ITerm::Box>(&a->v);
        auto* bb = std::get_if<ITerm::Box>(&b->v);
        if (ba && bb) return terms(bt->body, ba->body, bb->body);
        return untyped(a, b);
      }
      if (auto* ct = std::get_if<IType::Const>(&at->v)) {
        // every element of the terminal's decoding is equal
        if (sig.mode == Mode::Simple && ct->name == "El" &&
            as_const(ct->args[0], "unit"))
          return true;
        if (sig.mode == Mode::Dep && ct->name == "El" && as_const(ct->args[0], "top"))
          return true;
        if (sig.mode == Mode::Simple && ct->name == "El") {
          // surjective pairing at product objects
          if (auto* tms = as_const(ct->args[0], "times")) {
            const ITermPtr& cobj = tms->args[0];
            const ITermPtr& dobj = tms->args[1];
            ITermPtr fa = renorm(it_const("fst", {cobj, dobj, a}));
            ITermPtr fb = renorm(it_const("fst", {cobj, dobj, b}));
            ITermPtr sa = renorm(it_const("snd", {cobj, dobj, a}));
            ITermPtr sb = renorm(it_const("snd", {cobj, dobj, b}));
            return terms(ity_const("El", {cobj}), fa, fb) &&
                   terms(ity_const("El", {dobj}), sa, sb);
          }
        }
      }
    }
    return untyped(a, b);
  }

  bool untyped(const ITermPtr& a, const ITermPtr& b) {
    if (iequal_syntax(a, b)) return true;
    auto key = std::make_pair(a.get(), b.get());
    auto hit = umemo.find(key);
    if (hit != umemo.end()) return std::get<2>(hit->second);
    bool out = untyped_raw(a, b);
    umemo.emplace(key, std::make_tuple(a, b, out));
    return out;
  }

  bool untyped_raw(const ITermPtr& a, const ITermPtr& b) {
    auto* la = std::get_if<ITerm::Lam>(&a->v);
    auto* lb = std::get_if<ITerm::Lam>(&b->v);
    if (la || lb) {
      ITermPtr ea = la ? la->body
                       : renorm(it_app(ishift(a, IZone::Ordinary, 0, 1), it_ovar(0)));
      ITermPtr eb = lb ? lb->body
                       : renorm(it_app(ishift(b, IZone::Ordinary, 0, 1), it_ovar(0)));
      oenv.emplace_back(std::nullopt);
      bool r = untyped(ea, eb);
      oenv.pop_back();
      return r;
    }
    auto* ca = std::get_if<ITerm::CrispLam>(&a->v);
    auto* cb = std::get_if<ITerm::CrispLam>(&b->v);
    if (ca || cb) {
      ITermPtr ea = ca ? ca->body
                       : renorm(it_capp(ishift(a, IZone::Crisp, 0, 1), it_cvar(0)));
      ITermPtr eb = cb ? cb->body
                       : renorm(it_capp(ishift(b, IZone::Crisp, 0, 1), it_cvar(0)));
      denv.emplace_back(std::nullopt);
      OptCtx saved = oenv;
      oenv = crisp_bumped(oenv);
      bool r = untyped(ea, eb);
      oenv = std::move(saved);
      denv.pop_back();
      return r;
    }
    auto* ba = std::get_if<ITerm::Box>(&a->v);
    auto* bb = std::get_if<ITerm::Box>(&b->v);
    if (ba && bb) return untyped(ba->body, bb->body);
    if (ba || bb) {
      // box against a neutral or a let-box: compare the body with the
      // unboxing of the other side (box eta)
      const ITermPtr& boxed = ba ? a : b;
      const ITermPtr& other = ba ? b : a;
      ITermPtr unboxing = renorm(it_letbox(other, it_cvar(0)));
      return untyped(std::get<ITerm::Box>(boxed->v).body, unboxing);
    }
    auto* lba = std::get_if<ITerm::LetBox>(&a->v);
    auto* lbb = std::get_if<ITerm::LetBox>(&b->v);
    if ((lba || lbb) && !(lba && lbb)) {
      const ITermPtr& lb = lba ? a : b;
      const ITermPtr& other = lba ? b : a;
      // box-typed neutrals expand into let-box form (box eta); the gate is
      // that the let-box side visibly rebuilds a box
      const ITerm::LetBox& l = lba ? *lba : *lbb;
      if (std::holds_alternative<ITerm::Box>(l.body->v)) {
        ITermPtr expanded = it_letbox(other, it_box(it_cvar(0)));
        return lba ? untyped(lb, expanded) : untyped(expanded, lb);
      }
      // otherwise the binder must be irrelevant
      if (!uses_var(l.body, IZone::Crisp, 0)) {
        ITermPtr dropped = ishift(l.body, IZone::Crisp, 0, -1);
        return lba ? untyped(dropped, other) : untyped(other, dropped);
      }
      return false;
    }
    if (a->v.index() != b->v.index()) return false;
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) {
              auto& y = std::get<ITerm::Var>(b->v);
              return x.zone == y.zone && x.index == y.index;
            },
            [&](const ITerm::Lam&) { return false; },
            [&](const ITerm::CrispLam&) { return false; },
            [&](const ITerm::App& x) {
              auto& y = std::get<ITerm::App>(b->v);
              return untyped(x.fun, y.fun) && untyped(x.arg, y.arg);
            },
            [&](const ITerm::CrispApp& x) {
              auto& y = std::get<ITerm::CrispApp>(b->v);
              return untyped(x.fun, y.fun) && untyped(x.arg, y.arg);
            },
            [&](const ITerm::Box&) { return false; },
            [&](const ITerm::LetBox& x) {
              auto& y = std::get<ITerm::LetBox>(b->v);
              if (!untyped(x.scrut, y.scrut)) return false;
              auto st = norm.try_infer_box(denv, oenv, x.scrut);
              denv.push_back(st ? std::optional<ITypePtr>(*st) : std::nullopt);
              OptCtx saved = oenv;
              oenv = crisp_bumped(oenv);
              bool r = untyped(x.body, y.body);
              oenv = std::move(saved);
              denv.pop_back();
              return r;
            },
            [&](const ITerm::Const& x) {
              auto& y = std::get<ITerm::Const>(b->v);
              if (x.name != y.name || x.args.size() != y.args.size()) return false;
              auto it = sig.terms.find(x.name);
              if (it != sig.terms.end()) {
                // telescope-directed comparison
                for (std::size_t i = 0; i < x.args.size(); i++) {
                  std::vector<ITermPtr> rev(x.args.begin(), x.args.begin() + i);
                  std::reverse(rev.begin(), rev.end());
                  ITypePtr at = iopen(it->second.telescope[i], IZone::Ordinary, rev);
                  if (!terms(norm.type(denv, oenv, at), x.args[i], y.args[i])) return false;
                }
                return true;
              }
              for (std::size_t i = 0; i < x.args.size(); i++)
                if (!untyped(x.args[i], y.args[i])) return false;
              return true;
            },
            [&](const ITerm::Rec& x) {
              auto& y = std::get<ITerm::Rec>(b->v);
              if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
              if (!types(x.motive, y.motive)) return false;
              for (std::size_t i = 0; i < x.args.size(); i++)
                if (!untyped(x.args[i], y.args[i])) return false;
              return true;
            }},
        a->v);
  }

  bool types(const ITypePtr& a, const ITypePtr& b) {
    if (a->v.index() != b->v.index()) return false;
    return std::visit(
        overloaded{
            [&](const IType::Fn& x) {
              auto& y = std::get<IType::Fn>(b->v);
              if (!types(x.dom, y.dom)) return false;
              oenv.emplace_back(x.dom);
              bool r = types(x.cod, y.cod);
              oenv.pop_back();
              return r;
            },
            [&](const IType::VFn& x) {
              auto& y = std::get<IType::VFn>(b->v);
              return types(x.dom, y.dom) && types(x.cod, y.cod);
            },
            [&](const IType::CrispFn& x) {
              auto& y = std::get<IType::CrispFn>(b->v);
              if (!types(x.dom, y.dom)) return false;
              denv.emplace_back(x.dom);
              OptCtx saved = oenv;
              oenv = crisp_bumped(oenv);
              bool r = types(x.cod, y.cod);
              oenv = std::move(saved);
              denv.pop_back();
              return r;
            },
            [&](const IType::BoxT& x) { return types(x.body, std::get<IType::BoxT>(b->v).body); },
            [&](const IType::Const& x) {
              auto& y = std::get<IType::Const>(b->v);
              if (x.name != y.name || x.args.size() != y.args.size()) return false;
              auto it = sig.types.find(x.name);
              for (std::size_t i = 0; i < x.args.size(); i++) {
                ITypePtr at;
                if (it != sig.types.end()) {
                  std::vector<ITermPtr> rev(x.args.begin(), x.args.begin() + i);
                  std::reverse(rev.begin(), rev.end());
                  at = norm.type(denv, oenv,
                                 iopen(it->second.telescope[i], IZone::Ordinary, rev));
                }
                if (!terms(at, x.args[i], y.args[i])) return false;
              }
              return true;
            }},
        a->v);
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Public normalization / equality

ITermPtr InternalChecker::normalize(const ICtx& crisp, const ICtx& ord, const ITermPtr& m) const {
  INorm n{sig_, fuel_};
  OptCtx denv = opt_of(crisp), oenv = opt_of(ord);
  return n.term(denv, oenv, m);
}
ITypePtr InternalChecker::normalize_type(const ICtx& crisp, const ICtx& ord,
                                         const ITypePtr& t) const {
  INorm n{sig_, fuel_};
  OptCtx denv = opt_of(crisp), oenv = opt_of(ord);
  return n.type(denv, oenv, t);
}

std::optional<bool> InternalChecker::equal(const ICtx& crisp, const ICtx& ord,
                                           const ITermPtr& a, const ITermPtr& b,
                                           const ITypePtr& at) const {
  try {
    INorm n{sig_, fuel_, true};
    OptCtx denv = opt_of(crisp), oenv = opt_of(ord);
    ITermPtr na = n.term(denv, oenv, a);
    ITermPtr nb = n.term(denv, oenv, b);
    ITypePtr nt = at ? n.type(denv, oenv, at) : nullptr;
    ICompare cmp{sig_, n, denv, oenv};
    return cmp.terms(nt, na, nb);
  } catch (const Error& e) {
    if (e.code() == Errc::FuelExhausted) return std::nullopt;
    throw;
  }
}

std::optional<bool> InternalChecker::equal_types(const ICtx& crisp, const ICtx& ord,
                                                 const ITypePtr& a, const ITypePtr& b) const {
  try {
    INorm n{sig_, fuel_, true};
    OptCtx denv = opt_of(crisp), oenv = opt_of(ord);
    ITypePtr na = n.type(denv, oenv, a);
    ITypePtr nb = n.type(denv, oenv, b);
    ICompare cmp{sig_, n, denv, oenv};
    return cmp.types(na, nb);
  } catch (const Error& e) {
    if (e.code() == Errc::FuelExhausted) return std::nullopt;
    throw;
  }
}

bool InternalChecker::local_joins(const ICtx& crisp, const ICtx& ord, const ITermPtr& t) const {
  // Collect subterm positions where more than one top-level rule applies and
  // check that the one-step reducts share a normal form. Overlaps here are
  // between a constant rewrite and the let-box hoisting of its arguments.
  std::function<bool(const ITermPtr&)> walk = [&](const ITermPtr& u) -> bool {
    bool ok = true;
    std::visit(
        overloaded{
            [&](const ITerm::Const& x) {
              std::vector<ITermPtr> reducts;
              for (std::size_t i = 0; i < x.args.size(); i++) {
                if (auto* lb = std::get_if<ITerm::LetBox>(&x.args[i]->v)) {
                  std::vector<ITermPtr> shifted(x.args.size());
                  for (std::size_t j = 0; j < x.args.size(); j++)
                    shifted[j] =
                        j == i ? lb->body : ishift(x.args[j], IZone::Crisp, 0, 1);
                  reducts.push_back(
                      it_letbox(lb->scrut, it_const(x.name, std::move(shifted))));
                }
              }
              auto rw = sig_.rewrites.find(x.name);
              if (rw != sig_.rewrites.end()) {
                if (auto next = rw->second(x)) reducts.push_back(*next);
              }
              if (reducts.size() > 1) {
                ITermPtr first = normalize(crisp, ord, reducts[0]);
                for (std::size_t i = 1; i < reducts.size(); i++) {
                  auto eq = equal(crisp, ord, first, reducts[i]);
                  if (!eq || !*eq) ok = false;
                }
              }
              for (auto& a : x.args) ok = walk(a) && ok;
            },
            [&](const ITerm::Lam& x) { ok = walk(x.body); },
            [&](const ITerm::CrispLam& x) { ok = walk(x.body); },
            [&](const ITerm::App& x) { ok = walk(x.fun) && walk(x.arg); },
            [&](const ITerm::CrispApp& x) { ok = walk(x.fun) && walk(x.arg); },
            [&](const ITerm::Box& x) { ok = walk(x.body); },
            [&](const ITerm::LetBox& x) { ok = walk(x.scrut) && walk(x.body); },
            [&](const ITerm::Rec& x) {
              for (auto& a : x.args) ok = walk(a) && ok;
            },
            [&](const ITerm::Var&) {}},
        u->v);
    return ok;
  };
  return walk(t);
}

// ---------------------------------------------------------------------------
// Checking

namespace {

struct IProof {
  const ISignature& sig;
  const InternalChecker& chk;
  enum class Emptied { No, Box, CrispArg };

  [[noreturn]] void wrong(Errc c, const std::string& m) const { fail(c, m); }

  void check_type(const ICtx& crisp, const ICtx& ord, const ITypePtr& t) const {
    std::visit(
        overloaded{
            [&](const IType::Fn& x) {
              check_type(crisp, ord, x.dom);
              ICtx ord2 = ord;
              ord2.push_back(x.dom);
              check_type(crisp, ord2, x.cod);
            },
            [&](const IType::VFn& x) {
              check_type(crisp, ord, x.dom);
              check_type(crisp, ord, x.cod);
            },
            [&](const IType::CrispFn& x) {
              check_type(crisp, ord, x.dom);
              ICtx crisp2 = crisp;
              crisp2.push_back(x.dom);
              check_type(crisp2, crisp_bumped(ord), x.cod);
            },
            [&](const IType::BoxT& x) { check_type(crisp, {}, x.body); },
            [&](const IType::Const& x) {
              auto it = sig.types.find(x.name);
              if (it == sig.types.end())
                wrong(Errc::UnknownConstant, "unknown type constant " + x.name);
              if (x.args.size() != it->second.telescope.size())
                wrong(Errc::ArityMismatch, "type constant " + x.name + " arity");
              check_args(crisp, ord, it->second.telescope, x.args, Emptied::No);
            }},
        t->v);
  }

  void check_args(const ICtx& crisp, const ICtx& ord, const std::vector<ITypePtr>& tele,
                  const std::vector<ITermPtr>& args, Emptied em) const {
    for (std::size_t i = 0; i < args.size(); i++) {
      std::vector<ITermPtr> rev(args.begin(), args.begin() + i);
      std::reverse(rev.begin(), rev.end());
      check(crisp, ord, args[i], iopen(tele[i], IZone::Ordinary, rev), em);
    }
  }

  ITypePtr infer(const ICtx& crisp, const ICtx& ord, const ITermPtr& m, Emptied em) const {
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) -> ITypePtr {
              if (x.zone == IZone::Crisp) {
                if (x.index >= crisp.size())
                  wrong(Errc::ScopeError, "crisp variable out of scope");
                return ishift(crisp[crisp.size() - 1 - x.index], IZone::Crisp, 0,
                              static_cast<std::int64_t>(x.index) + 1);
              }
              if (x.index >= ord.size()) {
                if (em == Emptied::Box)
                  wrong(Errc::OrdinaryVarUnderBox, "ordinary variable used under box");
                if (em == Emptied::CrispArg)
                  wrong(Errc::OpenCrispArgument,
                        "crisp application argument uses an ordinary variable");
                wrong(Errc::ScopeError, "ordinary variable out of scope");
              }
              return ishift(ord[ord.size() - 1 - x.index], IZone::Ordinary, 0,
                            static_cast<std::int64_t>(x.index) + 1);
            },
            [&](const ITerm::Lam&) -> ITypePtr {
              wrong(Errc::CannotInfer, "fn requires a type annotation");
            },
            [&](const ITerm::CrispLam&) -> ITypePtr {
              wrong(Errc::CannotInfer, "cfn requires a type annotation");
            },
            [&](const ITerm::App& x) -> ITypePtr {
              ITypePtr f = chk.normalize_type(crisp, ord, infer(crisp, ord, x.fun, em));
              if (auto* fn = std::get_if<IType::Fn>(&f->v)) {
                check(crisp, ord, x.arg, fn->dom, em);
                return isubst(fn->cod, IZone::Ordinary, x.arg);
              }
              if (auto* vf = std::get_if<IType::VFn>(&f->v)) {
                check(crisp, ord, x.arg, vf->dom, em);
                return vf->cod;
              }
              wrong(Errc::NotAFunction, "application head is not of function type");
            },
            [&](const ITerm::CrispApp& x) -> ITypePtr {
              ITypePtr f = chk.normalize_type(crisp, ord, infer(crisp, ord, x.fun, em));
              auto* cf = std::get_if<IType::CrispFn>(&f->v);
              if (!cf) wrong(Errc::NotAFunction, "crisp application of a non-crisp function");
              // the argument is necessarily closed: its local context is empty
              check(crisp, {}, x.arg, cf->dom, Emptied::CrispArg);
              return isubst(cf->cod, IZone::Crisp, x.arg);
            },
            [&](const ITerm::Box&) -> ITypePtr {
              wrong(Errc::CannotInfer, "box requires a type annotation");
            },
            [&](const ITerm::LetBox& x) -> ITypePtr {
              ITypePtr st = chk.normalize_type(crisp, ord, infer(crisp, ord, x.scrut, em));
              auto* bt = std::get_if<IType::BoxT>(&st->v);
              if (!bt) wrong(Errc::BoxExpected, "let-box scrutinee is not boxed");
              ICtx crisp2 = crisp;
              crisp2.push_back(bt->body);
              ITypePtr rt = infer(crisp2, crisp_bumped(ord), x.body, em);
              if (uses_var(rt, IZone::Crisp, 0))
                wrong(Errc::TypeMismatch, "let-box result type depends on the bound variable");
              return ishift(rt, IZone::Crisp, 0, -1);
            },
            [&](const ITerm::Const& x) -> ITypePtr {
              auto it = sig.terms.find(x.name);
              if (it == sig.terms.end())
                wrong(Errc::UnknownConstant, "unknown constant " + x.name);
              if (x.args.size() != it->second.telescope.size())
                wrong(Errc::ArityMismatch, "constant " + x.name + " arity");
              check_args(crisp, ord, it->second.telescope, x.args, em);
              std::vector<ITermPtr> rev(x.args.rbegin(), x.args.rend());
              return iopen(it->second.result, IZone::Ordinary, rev);
            },
            [&](const ITerm::Rec& x) -> ITypePtr { return check_rec(crisp, ord, x, em); }},
        m->v);
  }

  void check(const ICtx& crisp, const ICtx& ord, const ITermPtr& m, const ITypePtr& want,
             Emptied em) const {
    ITypePtr w = chk.normalize_type(crisp, ord, want);
    if (auto* l = std::get_if<ITerm::Lam>(&m->v)) {
      if (auto* fn = std::get_if<IType::Fn>(&w->v)) {
        ICtx ord2 = ord;
        ord2.push_back(fn->dom);
        check(crisp, ord2, l->body, fn->cod, em);
        return;
      }
      if (auto* vf = std::get_if<IType::VFn>(&w->v)) {
        check_vfn_lam(crisp, ord, l->body, *vf, em);
        return;
      }
      wrong(Errc::TypeMismatch, "fn checked against a non-function type");
    }
    if (auto* cl = std::get_if<ITerm::CrispLam>(&m->v)) {
      auto* cf = std::get_if<IType::CrispFn>(&w->v);
      if (!cf) wrong(Errc::TypeMismatch, "cfn checked against a non-crisp-function type");
      ICtx crisp2 = crisp;
      crisp2.push_back(cf->dom);
      check(crisp2, crisp_bumped(ord), cl->body, cf->cod, em);
      return;
    }
    if (auto* bx = std::get_if<ITerm::Box>(&m->v)) {
      auto* bt = std::get_if<IType::BoxT>(&w->v);
      if (!bt) wrong(Errc::TypeMismatch, "box checked against a non-box type");
      check(crisp, {}, bx->body, bt->body, Emptied::Box);
      return;
    }
    if (auto* lb = std::get_if<ITerm::LetBox>(&m->v)) {
      ITypePtr st = chk.normalize_type(crisp, ord, infer(crisp, ord, lb->scrut, em));
      auto* bt = std::get_if<IType::BoxT>(&st->v);
      if (!bt) wrong(Errc::BoxExpected, "let-box scrutinee is not boxed");
      ICtx crisp2 = crisp;
      crisp2.push_back(bt->body);
      check(crisp2, crisp_bumped(ord), lb->body, ishift(w, IZone::Crisp, 0, 1), em);
      return;
    }
    if (auto* wc = std::get_if<IType::Const>(&w->v); wc && wc->name == "TmV") {
      // canonical inhabitants of the variable space are v-spines or
      // neutrals that already carry the marked type
      ITypePtr got = infer(crisp, ord, m, em);
      if (subsumes(crisp, ord, got, w)) return;
      ITypePtr full = ity_const("Tm", wc->args);
      if (!subsumes(crisp, ord, got, full))
        wrong(Errc::TypeMismatch,
              "expected " + print_itype(w) + ", got " +
                  print_itype(chk.normalize_type(crisp, ord, got)));
      ITermPtr nm = chk.normalize(crisp, ord, m);
      auto head_is_var = [&](const ITermPtr& h) {
        try {
          ITypePtr ht = chk.normalize_type(crisp, ord, infer(crisp, ord, h, em));
          if (auto* hc = std::get_if<IType::Const>(&ht->v)) return hc->name == "TmV";
        } catch (const Error&) {
        }
        return false;
      };
      if (!is_v_spine(nm, head_is_var))
        wrong(Errc::NotAVariable, "term is not a canonical variable");
      return;
    }
    ITypePtr got = infer(crisp, ord, m, em);
    if (!subsumes(crisp, ord, got, w))
      wrong(Errc::TypeMismatch,
            "expected " + print_itype(w) + ", got " +
                print_itype(chk.normalize_type(crisp, ord, got)));
  }

  // canonical inhabitants of the variable function space
  void check_vfn_lam(const ICtx& crisp, const ICtx& ord, const ITermPtr& body,
                     const IType::VFn& vf, Emptied em) const {
    ICtx ord2 = ord;
    ord2.push_back(vf.dom);
    check(crisp, ord2, body, ishift(vf.cod, IZone::Ordinary, 0, 1), em);
    // shape: snd (fst^k x0), or h x0 for h of variable type
    const ITermPtr* cur = &body;
    if (auto* sn = std::get_if<ITerm::Const>(&(*cur)->v); sn && sn->name == "snd") {
      cur = &sn->args[2];
      while (true) {
        auto* f = std::get_if<ITerm::Const>(&(*cur)->v);
        if (f && f->name == "fst") {
          cur = &f->args[2];
          continue;
        }
        break;
      }
      auto* v = std::get_if<ITerm::Var>(&(*cur)->v);
      if (v && v->zone == IZone::Ordinary && v->index == 0) return;
    }
    if (auto* ap = std::get_if<ITerm::App>(&body->v)) {
      auto* v = std::get_if<ITerm::Var>(&ap->arg->v);
      if (v && v->zone == IZone::Ordinary && v->index == 0) {
        ITypePtr ht = chk.normalize_type(crisp, ord2, infer(crisp, ord2, ap->fun, em));
        if (std::holds_alternative<IType::VFn>(ht->v)) return;
      }
    }
    wrong(Errc::NotAVariable, "body is not a canonical variable projection");
  }

  bool subsumes(const ICtx& crisp, const ICtx& ord, const ITypePtr& got,
                const ITypePtr& want) const {
    auto eq = chk.equal_types(crisp, ord, got, want);
    if (eq && *eq) return true;
    ITypePtr g = chk.normalize_type(crisp, ord, got);
    ITypePtr w = chk.normalize_type(crisp, ord, want);
    // the variable space embeds in the full space
    if (auto* gv = std::get_if<IType::Const>(&g->v)) {
      if (gv->name == "TmV") {
        if (auto* wv = std::get_if<IType::Const>(&w->v)) {
          if (wv->name == "Tm") {
            auto e = chk.equal_types(crisp, ord, ity_const("Tm", gv->args), w);
            if (e && *e) return true;
          }
        }
      }
    }
    if (auto* gf = std::get_if<IType::VFn>(&g->v)) {
      if (auto* wf = std::get_if<IType::Fn>(&w->v)) {
        if (!uses_var(wf->cod, IZone::Ordinary, 0)) {
          auto e1 = chk.equal_types(crisp, ord, gf->dom, wf->dom);
          auto e2 = chk.equal_types(crisp, ord, gf->cod,
                                    ishift(wf->cod, IZone::Ordinary, 0, -1));
          if (e1 && *e1 && e2 && *e2) return true;
        }
      }
    }
    // boxed variants of the above
    if (auto* gb = std::get_if<IType::BoxT>(&g->v)) {
      if (auto* wb = std::get_if<IType::BoxT>(&w->v))
        return subsumes(crisp, ord, gb->body, wb->body);
    }
    return false;
  }

  // --- recursor checking ---

  ITypePtr check_rec(const ICtx& crisp, const ICtx& ord, const ITerm::Rec& r, Emptied em) const {
    if (r.args.size() != rec_arity(r.kind))
      wrong(Errc::ArityMismatch, "recursor applied to the wrong number of arguments");
    std::size_t k = rec_binders(r.kind);
    ICtx crisp_m = crisp;
    std::vector<ITypePtr> binders = motive_binders(r.kind);
    for (auto& b : binders) crisp_m.push_back(b);
    check_type(crisp_m, {}, r.motive);

    auto open_motive = [&](const std::vector<ITermPtr>& values, std::size_t gshift) {
      return iopen(r.motive, IZone::Crisp, values, gshift);
    };

    switch (r.kind) {
      case IRecKind::SimpleTm: {
        ITypePtr obj = ity_const("Obj");
        ITypePtr eltm = ity_const("El", {it_const("tm")});
        auto el = [](ITermPtr e) { return ity_const("El", {std::move(e)}); };
        auto bfull = [&](ITermPtr c) {
          return ity_box(ity_fn(el(c), ishift(eltm, IZone::Ordinary, 0, 1)));
        };
        auto bvar = [&](ITermPtr c) { return ity_box(ity_vfn(el(c), eltm)); };
        // X_var
        ITypePtr xvar = ity_cfn(obj, ity_cfn(bvar(it_cvar(0)), open_motive({it_cvar(0), it_cvar(1)}, 2)));
        // X_app
        ITypePtr xapp = ity_cfn(
            obj,
            ity_cfn(bfull(it_cvar(0)),
                    ity_cfn(bfull(it_cvar(1)),
                            ity_cfn(open_motive({it_cvar(1), it_cvar(2)}, 3),
                                    ity_cfn(open_motive({it_cvar(1), it_cvar(3)}, 4),
                                            open_motive(
                                                {it_const("app'", {it_cvar(4), it_cvar(3),
                                                                   it_cvar(2)}),
                                                 it_cvar(4)},
                                                5))))));
        // X_lam
        ITermPtr times_c = it_const("times", {it_cvar(0), it_const("tm")});
        ITermPtr times_c1 = it_const("times", {it_cvar(1), it_const("tm")});
        ITypePtr xlam = ity_cfn(
            obj, ity_cfn(bfull(times_c),
                         ity_cfn(open_motive({it_cvar(0), times_c1}, 2),
                                 open_motive({it_const("lam'", {it_cvar(2), it_cvar(1)}),
                                              it_cvar(2)},
                                             3))));
        check(crisp, ord, r.args[0], xvar, em);
        check(crisp, ord, r.args[1], xapp, em);
        check(crisp, ord, r.args[2], xlam, em);
        check(crisp, ord, r.args[3], obj, em);
        check(crisp, ord, r.args[4], bfull(r.args[3]), em);
        return open_motive({r.args[4], r.args[3]}, 0);
      }
      case IRecKind::DepTy: {
        ITypePtr ctx = ity_const("Ctx");
        auto btm = [&](ITermPtr c) {
          return ity_box(ity_const(
              "Tm", {c, it_const("tysub", {c, it_const("top"), it_const("ty"),
                                           it_const("bang", {c})})}));
        };
        auto boxed_o = [](ITermPtr c) { return it_box(it_const("o", {std::move(c)})); };
        auto boxed_arr = [](ITermPtr c, ITermPtr m, ITermPtr n) {
          ITermPtr c2 = ishift(c, IZone::Crisp, 0, 2);
          return it_letbox(
              m, it_letbox(ishift(n, IZone::Crisp, 0, 1),
                           it_box(it_const("arr", {c2, it_cvar(1), it_cvar(0)}))));
        };
        ITypePtr bo = ity_cfn(ctx, open_motive({boxed_o(it_cvar(0)), it_cvar(0)}, 1));
        ITypePtr barr = ity_cfn(
            ctx,
            ity_cfn(btm(it_cvar(0)),
                    ity_cfn(btm(it_cvar(1)),
                            ity_cfn(open_motive({it_cvar(1), it_cvar(2)}, 3),
                                    ity_cfn(open_motive({it_cvar(1), it_cvar(3)}, 4),
                                            open_motive(
                                                {boxed_arr(it_cvar(4), it_cvar(3),
                                                           it_cvar(2)),
                                                 it_cvar(4)},
                                                5))))));
        check(crisp, ord, r.args[0], bo, em);
        check(crisp, ord, r.args[1], barr, em);
        check(crisp, ord, r.args[2], ctx, em);
        check(crisp, ord, r.args[3], btm(r.args[2]), em);
        return open_motive({r.args[3], r.args[2]}, 0);
      }
      case IRecKind::DepTrm: {
        ITypePtr ctx = ity_const("Ctx");
        ITypePtr bty = ity_box(ity_const("Tm", {it_const("top"), it_const("ty")}));
        auto lift = [](ITermPtr psi, ITermPtr t) {
          return it_const("lift", {it_const("ty"), std::move(psi), std::move(t)});
        };
        auto trm_at = [&](ITermPtr psi, ITermPtr a) { return d_trm_at2(psi, a); };
        auto btrm = [&](ITermPtr psi, ITermPtr a) {
          return ity_box(ity_const("Tm", {psi, trm_at(psi, lift(psi, a))}));
        };
        auto btrmv = [&](ITermPtr psi, ITermPtr a) {
          return ity_box(ity_const("TmV", {psi, trm_at(psi, lift(psi, a))}));
        };
        ITypePtr bv = ity_cfn(
            ctx, ity_cfn(bty, ity_cfn(btrmv(it_cvar(1), it_cvar(0)),
                                      open_motive({it_cvar(0), it_cvar(1), it_cvar(2)}, 3))));
        // lam branch
        auto ext_ctx = [&](ITermPtr psi, ITermPtr a) {
          return it_const("comp", {psi, trm_at(psi, lift(psi, a))});
        };
        ITypePtr bl = ity_cfn(
            ctx,
            ity_cfn(
                bty,
                ity_cfn(
                    bty,
                    ity_cfn(
                        ity_box(ity_const(
                            "Tm", {ext_ctx(it_cvar(2), it_cvar(1)),
                                   trm_at(ext_ctx(it_cvar(2), it_cvar(1)),
                                          lift(ext_ctx(it_cvar(2), it_cvar(1)),
                                               it_cvar(0)))})),
                        ity_cfn(open_motive({it_cvar(0), it_cvar(1),
                                             ext_ctx(it_cvar(3), it_cvar(2))},
                                            4),
                                open_motive(
                                    {it_const("lam'",
                                              {it_cvar(4), lift(it_cvar(4), it_cvar(3)),
                                               lift(it_cvar(4), it_cvar(2)), it_cvar(1)}),
                                     it_const("arr'", {it_cvar(3), it_cvar(2)}),
                                     it_cvar(4)},
                                    5))))));
        // app branch
        ITypePtr ba = ity_cfn(
            ctx,
            ity_cfn(
                bty,
                ity_cfn(
                    bty,
                    ity_cfn(
                        ity_box(ity_const(
                            "Tm",
                            {it_cvar(2),
                             trm_at(it_cvar(2),
                                    it_const("arr", {it_cvar(2), lift(it_cvar(2), it_cvar(1)),
                                                     lift(it_cvar(2), it_cvar(0))}))})),
                        ity_cfn(
                            btrm(it_cvar(3), it_cvar(2)),
                            ity_cfn(
                                open_motive({it_cvar(1),
                                             it_const("arr'", {it_cvar(3), it_cvar(2)}),
                                             it_cvar(4)},
                                            5),
                                ity_cfn(open_motive({it_cvar(1), it_cvar(4), it_cvar(5)}, 6),
                                        open_motive(
                                            {it_const("app'",
                                                      {it_cvar(6), lift(it_cvar(6), it_cvar(5)),
                                                       lift(it_cvar(6), it_cvar(4)), it_cvar(3),
                                                       it_cvar(2)}),
                                             it_cvar(4), it_cvar(6)},
                                            7))))))));
        check(crisp, ord, r.args[0], bv, em);
        check(crisp, ord, r.args[1], bl, em);
        check(crisp, ord, r.args[2], ba, em);
        check(crisp, ord, r.args[3], ctx, em);
        check(crisp, ord, r.args[4], bty, em);
        check(crisp, ord, r.args[5], btrm(r.args[3], r.args[4]), em);
        return open_motive({r.args[5], r.args[4], r.args[3]}, 0);
      }
    }
    wrong(Errc::IllFormedType, "unreachable");
  }

  std::vector<ITypePtr> motive_binders(IRecKind k) const {
    switch (k) {
      case IRecKind::SimpleTm:
        return {ity_const("Obj"),
                ity_box(ity_fn(ity_const("El", {it_cvar(0)}),
                               ity_const("El", {it_const("tm")})))};
      case IRecKind::DepTy:
        return {ity_const("Ctx"),
                ity_box(ity_const(
                    "Tm", {it_cvar(0),
                           it_const("tysub", {it_cvar(0), it_const("top"), it_const("ty"),
                                              it_const("bang", {it_cvar(0)})})}))};
      case IRecKind::DepTrm:
        return {ity_const("Ctx"), ity_box(ity_const("Tm", {it_const("top"), it_const("ty")})),
                ity_box(ity_const(
                    "Tm", {it_cvar(1),
                           d_trm_at2(it_cvar(1),
                                     it_const("lift", {it_const("ty"), it_cvar(1),
                                                       it_cvar(0)}))}))};
    }
    return {};
  }
};

}  // namespace

void InternalChecker::check_type(const ICtx& crisp, const ICtx& ord, const ITypePtr& t) const {
  IProof{sig_, *this}.check_type(crisp, ord, t);
}
ITypePtr InternalChecker::infer(const ICtx& crisp, const ICtx& ord, const ITermPtr& m) const {
  return IProof{sig_, *this}.infer(crisp, ord, m, IProof::Emptied::No);
}
void InternalChecker::check(const ICtx& crisp, const ICtx& ord, const ITermPtr& m,
                            const ITypePtr& t) const {
  IProof{sig_, *this}.check(crisp, ord, m, t, IProof::Emptied::No);
}

}  // namespace cocon
