#include "cocon/check.hpp"

#include <functional>
#include <map>

#include "cocon/surface.hpp"

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Normalization environment: computation binders whose annotations are
// unknown (crossed fn binders) are nullopt. Only the variable-kind promotion
// in the recursor needs annotations at all.
using NormEnv = std::vector<std::optional<AnnType>>;

NormEnv env_of(const CompCtx& g) {
  NormEnv env;
  env.reserve(g.entries.size());
  for (auto& e : g.entries) env.emplace_back(e);
  return env;
}

std::optional<AnnType> env_lookup(const NormEnv& env, std::size_t idx) {
  if (idx >= env.size()) return std::nullopt;
  auto& e = env[env.size() - 1 - idx];
  if (!e) return std::nullopt;
  // re-scope the annotation to the full environment
  if (e->is_ctx()) return ann_ctx();
  return ann(shift_comp(e->type, 0, static_cast<std::int64_t>(idx) + 1));
}

// Recursor classification shared by the checker and the normalizer.
enum class RecKind { SimpleTm, DepTy, DepTrm };

struct RecParts {
  RecKind kind;
  CompTypePtr tau;  // motive body, under 2 (SimpleTm/DepTy) or 3 (DepTrm) binders
  const RecBranch* var_b = nullptr;
  const RecBranch* app_b = nullptr;
  const RecBranch* lam_b = nullptr;
  const RecBranch* o_b = nullptr;
  const RecBranch* arr_b = nullptr;
};

const RecBranch* pick_branch(const std::vector<RecBranch>& bs, std::size_t binders) {
  const RecBranch* found = nullptr;
  for (auto& b : bs) {
    if (b.binders == binders) {
      if (found) fail(Errc::BranchCountMismatch, "duplicate branch shape");
      found = &b;
    }
  }
  return found;
}

RecKind classify_rec(Mode mode, const CompTerm::Rec& r) {
  if (mode == Mode::Simple) {
    if (r.scrut_ty || r.branches.size() != 3)
      fail(Errc::BranchCountMismatch, "simple-mode recursor takes three branches");
    return RecKind::SimpleTm;
  }
  if (r.scrut_ty) {
    if (r.branches.size() != 3)
      fail(Errc::BranchCountMismatch, "trm recursor takes three branches");
    return RecKind::DepTrm;
  }
  if (r.branches.size() != 2)
    fail(Errc::BranchCountMismatch, "ty recursor takes two branches");
  return RecKind::DepTy;
}

bool is_empty_ctx(const DomCtxPtr& c) { return std::holds_alternative<DomCtx::Empty>(c->v); }

bool is_ctx_var_at(const DomCtxPtr& c, std::size_t idx) {
  auto* v = std::get_if<DomCtx::CtxVar>(&c->v);
  return v && v->comp_index == idx;
}

bool is_dom_ty(const DomTypePtr& t, Mode mode) {
  if (mode == Mode::Simple) return std::holds_alternative<DomType::Tm>(t->v);
  return std::holds_alternative<DomType::Ty>(t->v);
}

// Motive shape validation; returns tau still scoped under the motive binders.
RecParts dissect_motive(Mode mode, const CompTerm::Rec& r) {
  RecParts out;
  out.kind = classify_rec(mode, r);
  auto* f1 = std::get_if<CompType::Fn>(&r.motive->v);
  if (!f1 || !f1->param.is_ctx())
    fail(Errc::IllFormedType, "recursor motive must start with a ctx binder");
  auto* f2 = std::get_if<CompType::Fn>(&f1->result->v);
  if (!f2 || f2->param.is_ctx())
    fail(Errc::IllFormedType, "recursor motive is missing its scrutinee binder");

  auto scrut_box = [&](const CompTypePtr& t) -> const CompType::BoxT* {
    return std::get_if<CompType::BoxT>(&t->v);
  };

  switch (out.kind) {
    case RecKind::SimpleTm: {
      auto* b = scrut_box(f2->param.type);
      if (!b || b->ct.kind != CtxKind::Term || !is_ctx_var_at(b->ct.ctx, 0) ||
          !std::holds_alternative<DomType::Tm>(b->ct.type->v))
        fail(Errc::IllFormedType, "simple recursor motive scrutinee must be [psi |- tm]");
      out.tau = f2->result;
      out.var_b = pick_branch(r.branches, 2);
      out.app_b = pick_branch(r.branches, 5);
      out.lam_b = pick_branch(r.branches, 3);
      if (!out.var_b || !out.app_b || !out.lam_b)
        fail(Errc::BranchCountMismatch, "expected variable, app and lam branches");
      break;
    }
    case RecKind::DepTy: {
      auto* b = scrut_box(f2->param.type);
      if (!b || b->ct.kind != CtxKind::Term || !is_ctx_var_at(b->ct.ctx, 0) ||
          !std::holds_alternative<DomType::Ty>(b->ct.type->v))
        fail(Errc::IllFormedType, "ty recursor motive scrutinee must be [psi |- ty]");
      out.tau = f2->result;
      out.o_b = pick_branch(r.branches, 1);
      out.arr_b = pick_branch(r.branches, 5);
      if (!out.o_b || !out.arr_b)
        fail(Errc::BranchCountMismatch, "expected o and arr branches");
      break;
    }
    case RecKind::DepTrm: {
      auto* bz = scrut_box(f2->param.type);
      if (!bz || bz->ct.kind != CtxKind::Term || !is_empty_ctx(bz->ct.ctx) ||
          !std::holds_alternative<DomType::Ty>(bz->ct.type->v))
        fail(Errc::IllFormedType, "trm recursor motive needs a [. |- ty] binder");
      auto* f3 = std::get_if<CompType::Fn>(&f2->result->v);
      if (!f3 || f3->param.is_ctx())
        fail(Errc::IllFormedType, "trm recursor motive is missing its term binder");
      auto* by = scrut_box(f3->param.type);
      bool shape_ok = false;
      if (by && by->ct.kind == CtxKind::Term && is_ctx_var_at(by->ct.ctx, 1)) {
        if (auto* trm = std::get_if<DomType::Trm>(&by->ct.type->v)) {
          if (auto* ub = std::get_if<DomTerm::Unbox>(&trm->body->v)) {
            auto* zv = std::get_if<CompTerm::Var>(&ub->comp->v);
            shape_ok = zv && zv->index == 0 &&
                       std::holds_alternative<DomSubst::Empty>(ub->subst->v);
          }
        }
      }
      if (!shape_ok)
        fail(Errc::IllFormedType,
             "trm recursor motive term binder must be [psi |- trm (unbox(z; .))]");
      out.tau = f3->result;
      out.var_b = pick_branch(r.branches, 3);
      out.lam_b = pick_branch(r.branches, 5);
      out.app_b = pick_branch(r.branches, 7);
      if (!out.var_b || !out.lam_b || !out.app_b)
        fail(Errc::BranchCountMismatch, "expected variable, lam and app branches");
      break;
    }
  }
  return out;
}

// Convenience term builders used by the recursor rules.
DomTermPtr unbox_id(std::size_t comp_idx) { return dm_unbox(cm_var(comp_idx), ds_id()); }
DomTermPtr unbox_empty(std::size_t comp_idx) { return dm_unbox(cm_var(comp_idx), ds_empty()); }

CompTermPtr boxed_simple_app(std::size_t m_idx, std::size_t n_idx) {
  return cm_box({}, dm_app(dm_app(dm_const(DomConst::App), unbox_id(m_idx)), unbox_id(n_idx)));
}
CompTermPtr boxed_simple_lam(std::size_t m_idx) {
  return cm_box({}, dm_app(dm_const(DomConst::Lam), dm_lam(unbox_id(m_idx))));
}
CompTermPtr boxed_dep_arr(std::size_t m_idx, std::size_t n_idx) {
  return cm_box({}, dm_const(DomConst::Arr, {unbox_id(m_idx), unbox_id(n_idx)}));
}
CompTermPtr boxed_closed_arr(std::size_t a_idx, std::size_t b_idx) {
  return cm_box({}, dm_const(DomConst::Arr, {unbox_empty(a_idx), unbox_empty(b_idx)}));
}
CompTermPtr boxed_dep_lam(std::size_t a_idx, std::size_t b_idx, std::size_t m_idx) {
  return cm_box({}, dm_const(DomConst::DLam, {unbox_empty(a_idx), unbox_empty(b_idx),
                                              dm_lam(unbox_id(m_idx))}));
}
CompTermPtr boxed_dep_app(std::size_t a_idx, std::size_t b_idx, std::size_t m_idx,
                          std::size_t n_idx) {
  return cm_box({}, dm_const(DomConst::DApp, {unbox_empty(a_idx), unbox_empty(b_idx),
                                              unbox_id(m_idx), unbox_id(n_idx)}));
}

// Closedness scan for dep-mode recursor type arguments: no free domain
// variables and no weakening substitutions that reach the ambient context.
bool closed_dom(const DomTermPtr& t, std::size_t depth);

bool closed_subst(const DomSubstPtr& s, std::size_t depth) {
  return std::visit(
      overloaded{[&](const DomSubst::Empty&) { return true; },
                 [&](const DomSubst::Weaken&) { return false; },
                 [&](const DomSubst::Snoc& x) {
                   return closed_subst(x.prefix, depth) && closed_dom(x.term, depth);
                 }},
      s->v);
}

bool closed_dom(const DomTermPtr& t, std::size_t depth) {
  return std::visit(
      overloaded{[&](const DomTerm::Var& x) { return x.index < depth; },
                 [&](const DomTerm::Lam& x) { return closed_dom(x.body, depth + 1); },
                 [&](const DomTerm::App& x) {
                   return closed_dom(x.fun, depth) && closed_dom(x.arg, depth);
                 },
                 [&](const DomTerm::Const& x) {
                   for (auto& a : x.args)
                     if (!closed_dom(a, depth)) return false;
                   return true;
                 },
                 [&](const DomTerm::Unbox& x) { return closed_subst(x.subst, depth); }},
      t->v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Normalizer

namespace {

struct Norm {
  Mode mode;
  RedexOrder order;
  long fuel;
  const DeclTable* decls = nullptr;

  void spend() {
    if (--fuel < 0) fail(Errc::FuelExhausted, "step bound exceeded during normalization");
  }

  DomTermPtr dom(NormEnv& env, const DomTermPtr& t) {
    return std::visit(
        overloaded{
            [&](const DomTerm::Var&) { return t; },
            [&](const DomTerm::Lam& x) { return dm_lam(dom(env, x.body)); },
            [&](const DomTerm::App& x) -> DomTermPtr {
              DomTermPtr f, a;
              if (order == RedexOrder::LeftFirst) {
                f = dom(env, x.fun);
                a = dom(env, x.arg);
              } else {
                a = dom(env, x.arg);
                f = dom(env, x.fun);
              }
              if (auto* l = std::get_if<DomTerm::Lam>(&f->v)) {
                spend();
                return dom(env, subst_dom_one(l->body, a));
              }
              return dm_app(f, a);
            },
            [&](const DomTerm::Const& x) {
              std::vector<DomTermPtr> args(x.args.size());
              if (order == RedexOrder::LeftFirst) {
                for (std::size_t i = 0; i < x.args.size(); i++) args[i] = dom(env, x.args[i]);
              } else {
                for (std::size_t i = x.args.size(); i > 0; i--)
                  args[i - 1] = dom(env, x.args[i - 1]);
              }
              return dm_const(x.name, std::move(args));
            },
            [&](const DomTerm::Unbox& x) -> DomTermPtr {
              CompTermPtr c = comp(env, x.comp);
              DomSubstPtr s = subst(env, x.subst);
              if (auto* b = std::get_if<CompTerm::BoxC>(&c->v)) {
                spend();
                return dom(env, subst_dom(b->body, s));
              }
              return dm_unbox(c, s);
            }},
        t->v);
  }

  DomSubstPtr subst(NormEnv& env, const DomSubstPtr& s) {
    return std::visit(
        overloaded{[&](const DomSubst::Empty&) { return s; },
                   [&](const DomSubst::Weaken&) { return s; },
                   [&](const DomSubst::Snoc& x) {
                     DomSubstPtr p = subst(env, x.prefix);
                     DomTermPtr m = dom(env, x.term);
                     // surjective pairing: (wk k+1, Var k) is wk k
                     if (auto* w = std::get_if<DomSubst::Weaken>(&p->v)) {
                       if (auto* v = std::get_if<DomTerm::Var>(&m->v)) {
                         if (w->count == v->index + 1) return ds_weaken(v->index);
                       }
                     }
                     return ds_snoc(p, m);
                   }},
        s->v);
  }

  DomTypePtr dom_ty(NormEnv& env, const DomTypePtr& a) {
    return std::visit(
        overloaded{[&](const DomType::Tm&) { return a; },
                   [&](const DomType::Arrow& x) {
                     return dt_arrow(dom_ty(env, x.dom), dom_ty(env, x.cod));
                   },
                   [&](const DomType::Ty&) { return a; },
                   [&](const DomType::Trm& x) { return dt_trm(dom(env, x.body)); },
                   [&](const DomType::Pi& x) {
                     return dt_pi(dom_ty(env, x.dom), dom_ty(env, x.cod));
                   }},
        a->v);
  }

  DomCtxPtr dom_ctx(NormEnv& env, const DomCtxPtr& c) {
    return std::visit(
        overloaded{[&](const DomCtx::Empty&) { return c; },
                   [&](const DomCtx::CtxVar&) { return c; },
                   [&](const DomCtx::Snoc& x) {
                     return dc_snoc(dom_ctx(env, x.prefix), dom_ty(env, x.type));
                   }},
        c->v);
  }

  CompTypePtr comp_ty(NormEnv& env, const CompTypePtr& t) {
    return std::visit(
        overloaded{[&](const CompType::BoxT& x) {
                     return ct_box(x.ct.kind, dom_ctx(env, x.ct.ctx), dom_ty(env, x.ct.type));
                   },
                   [&](const CompType::Fn& x) {
                     AnnType p = x.param.is_ctx() ? ann_ctx() : ann(comp_ty(env, x.param.type));
                     env.push_back(std::nullopt);
                     CompTypePtr r = comp_ty(env, x.result);
                     env.pop_back();
                     return ct_fn(std::move(p), r);
                   }},
        t->v);
  }

  CompTermPtr comp(NormEnv& env, const CompTermPtr& t) {
    return std::visit(
        overloaded{
            [&](const CompTerm::Var&) { return t; },
            [&](const CompTerm::Ref& x) -> CompTermPtr {
              if (decls) {
                auto it = decls->find(x.name);
                if (it != decls->end()) {
                  if (auto* body = std::get_if<CompTermPtr>(&it->second.body)) {
                    spend();
                    return comp(env, *body);
                  }
                }
              }
              return t;
            },
            [&](const CompTerm::BoxC& x) { return cm_box(x.names, dom(env, x.body)); },
            [&](const CompTerm::Fn& x) {
              env.push_back(std::nullopt);
              CompTermPtr b = comp(env, x.body);
              env.pop_back();
              return cm_fn(b);
            },
            [&](const CompTerm::App& x) -> CompTermPtr {
              CompTermPtr f;
              CompArg a;
              if (order == RedexOrder::LeftFirst) {
                f = comp(env, x.fun);
                a = arg(env, x.arg);
              } else {
                a = arg(env, x.arg);
                f = comp(env, x.fun);
              }
              if (auto* l = std::get_if<CompTerm::Fn>(&f->v)) {
                spend();
                return comp(env, subst_comp(l->body, a));
              }
              return cm_app(f, std::move(a));
            },
            [&](const CompTerm::Rec& x) { return rec(env, x); }},
        t->v);
  }

  CompArg arg(NormEnv& env, const CompArg& a) {
    return std::visit(
        overloaded{[&](const CompTermPtr& y) { return CompArg(comp(env, y)); },
                   [&](const DomCtxPtr& y) { return CompArg(dom_ctx(env, y)); }},
        a);
  }

  // Fires one recursor step when the scrutinee is canonical, else rebuilds.
  CompTermPtr rec(NormEnv& env, const CompTerm::Rec& r) {
    RecKind kind = classify_rec(mode, r);
    CompTypePtr motive = comp_ty(env, r.motive);
    DomCtxPtr ctx_arg = dom_ctx(env, r.ctx_arg);
    CompTermPtr scrut_ty = r.scrut_ty ? comp(env, r.scrut_ty) : nullptr;
    CompTermPtr scrut = comp(env, r.scrut);
    std::vector<RecBranch> bs;
    bs.reserve(r.branches.size());
    for (auto& b : r.branches) {
      for (std::size_t i = 0; i < b.binders; i++) env.push_back(std::nullopt);
      bs.push_back(RecBranch{b.binders, comp(env, b.body)});
      for (std::size_t i = 0; i < b.binders; i++) env.pop_back();
    }

    CompTerm::Rec nr{motive, std::move(bs), ctx_arg, scrut_ty, scrut};
    if (auto stepped = try_rec_step(env, kind, nr)) {
      spend();
      return comp(env, *stepped);
    }
    return std::make_shared<CompTerm>(CompTerm{std::move(nr)});
  }

  // Rebuilds a recursor applied to a different scrutinee (recursive calls).
  static CompTermPtr rec_call(const CompTerm::Rec& r, DomCtxPtr ctx, CompTermPtr sty,
                              CompTermPtr s) {
    return cm_rec(r.motive, r.branches, std::move(ctx), std::move(sty), std::move(s));
  }

  static CompTermPtr fire(const RecBranch& b, std::vector<CompArg> values) {
    // values are given outermost-first; open_comp wants innermost-first
    std::vector<CompArg> rev(values.rbegin(), values.rend());
    return open_comp(b.body, rev, 0);
  }

  bool scrut_is_variable(NormEnv& env, const DomTermPtr& body) {
    if (std::holds_alternative<DomTerm::Var>(body->v)) return true;
    if (auto* ub = std::get_if<DomTerm::Unbox>(&body->v)) {
      if (!std::holds_alternative<DomSubst::Weaken>(ub->subst->v)) return false;
      if (auto* v = std::get_if<CompTerm::Var>(&ub->comp->v)) {
        auto a = env_lookup(env, v->index);
        if (a && !a->is_ctx()) {
          if (auto* bt = std::get_if<CompType::BoxT>(&a->type->v))
            return bt->ct.kind == CtxKind::Variable;
        }
      }
    }
    return false;
  }

  std::optional<CompTermPtr> try_rec_step(NormEnv& env, RecKind kind, const CompTerm::Rec& r) {
    auto* box = std::get_if<CompTerm::BoxC>(&r.scrut->v);
    if (!box) return std::nullopt;
    RecParts parts;
    // branch lookup only; the motive was validated when the term was checked
    switch (kind) {
      case RecKind::SimpleTm:
        parts.var_b = pick_branch(r.branches, 2);
        parts.app_b = pick_branch(r.branches, 5);
        parts.lam_b = pick_branch(r.branches, 3);
        break;
      case RecKind::DepTy:
        parts.o_b = pick_branch(r.branches, 1);
        parts.arr_b = pick_branch(r.branches, 5);
        break;
      case RecKind::DepTrm:
        parts.var_b = pick_branch(r.branches, 3);
        parts.lam_b = pick_branch(r.branches, 5);
        parts.app_b = pick_branch(r.branches, 7);
        break;
    }

    const DomTermPtr& body = box->body;
    switch (kind) {
      case RecKind::SimpleTm: {
        if (scrut_is_variable(env, body))
          return fire(*parts.var_b, {CompArg(r.ctx_arg), CompArg(r.scrut)});
        // app M N is App(App(app, M), N); lam M is App(lam, M)
        if (auto* a1 = std::get_if<DomTerm::App>(&body->v)) {
          if (auto* a2 = std::get_if<DomTerm::App>(&a1->fun->v)) {
            auto* c = std::get_if<DomTerm::Const>(&a2->fun->v);
            if (c && c->name == DomConst::App) {
              CompTermPtr m = cm_box(box->names, a2->arg);
              CompTermPtr n = cm_box(box->names, a1->arg);
              CompTermPtr fm = rec_call(r, r.ctx_arg, nullptr, m);
              CompTermPtr fn = rec_call(r, r.ctx_arg, nullptr, n);
              return fire(*parts.app_b, {CompArg(r.ctx_arg), CompArg(m), CompArg(n),
                                         CompArg(fm), CompArg(fn)});
            }
          }
          auto* c = std::get_if<DomTerm::Const>(&a1->fun->v);
          if (c && c->name == DomConst::Lam) {
            DomTermPtr inner;
            if (auto* l = std::get_if<DomTerm::Lam>(&a1->arg->v)) inner = l->body;
            else inner = dm_app(shift_dom(a1->arg, 0, 1), dm_var(0));
            std::vector<std::string> names = box->names;
            names.push_back("x");
            CompTermPtr m = cm_box(std::move(names), inner);
            DomCtxPtr ext = dc_snoc(r.ctx_arg, dt_tm());
            CompTermPtr fm = rec_call(r, ext, nullptr, m);
            return fire(*parts.lam_b, {CompArg(ext), CompArg(m), CompArg(fm)});
          }
        }
        return std::nullopt;
      }
      case RecKind::DepTy: {
        if (auto* c = std::get_if<DomTerm::Const>(&body->v)) {
          if (c->name == DomConst::O) return fire(*parts.o_b, {CompArg(r.ctx_arg)});
          if (c->name == DomConst::Arr) {
            CompTermPtr m = cm_box(box->names, c->args[0]);
            CompTermPtr n = cm_box(box->names, c->args[1]);
            CompTermPtr fm = rec_call(r, r.ctx_arg, nullptr, m);
            CompTermPtr fn = rec_call(r, r.ctx_arg, nullptr, n);
            return fire(*parts.arr_b, {CompArg(r.ctx_arg), CompArg(m), CompArg(n),
                                       CompArg(fm), CompArg(fn)});
          }
        }
        return std::nullopt;
      }
      case RecKind::DepTrm: {
        if (scrut_is_variable(env, body))
          return fire(*parts.var_b,
                      {CompArg(r.ctx_arg), CompArg(r.scrut_ty), CompArg(r.scrut)});
        auto* c = std::get_if<DomTerm::Const>(&body->v);
        if (!c) return std::nullopt;
        if (c->name == DomConst::DLam) {
          if (!closed_dom(c->args[0], 0) || !closed_dom(c->args[1], 0)) return std::nullopt;
          CompTermPtr a = cm_box({}, c->args[0]);
          CompTermPtr b = cm_box({}, c->args[1]);
          DomTermPtr inner;
          if (auto* l = std::get_if<DomTerm::Lam>(&c->args[2]->v)) inner = l->body;
          else inner = dm_app(shift_dom(c->args[2], 0, 1), dm_var(0));
          std::vector<std::string> names = box->names;
          names.push_back("x");
          CompTermPtr m = cm_box(std::move(names), inner);
          DomCtxPtr ext = dc_snoc(r.ctx_arg, dt_trm(c->args[0]));
          CompTermPtr fm = rec_call(r, ext, b, m);
          return fire(*parts.lam_b,
                      {CompArg(r.ctx_arg), CompArg(a), CompArg(b), CompArg(m), CompArg(fm)});
        }
        if (c->name == DomConst::DApp) {
          if (!closed_dom(c->args[0], 0) || !closed_dom(c->args[1], 0)) return std::nullopt;
          CompTermPtr a = cm_box({}, c->args[0]);
          CompTermPtr b = cm_box({}, c->args[1]);
          CompTermPtr m = cm_box(box->names, c->args[2]);
          CompTermPtr n = cm_box(box->names, c->args[3]);
          CompTermPtr arrab =
              cm_box({}, dm_const(DomConst::Arr, {c->args[0], c->args[1]}));
          CompTermPtr fm = rec_call(r, r.ctx_arg, arrab, m);
          CompTermPtr fn = rec_call(r, r.ctx_arg, a, n);
          return fire(*parts.app_b, {CompArg(r.ctx_arg), CompArg(a), CompArg(b), CompArg(m),
                                     CompArg(n), CompArg(fm), CompArg(fn)});
        }
        return std::nullopt;
      }
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Eta/alpha comparison of normal forms

bool eq_nf(const DomTermPtr& a, const DomTermPtr& b);
bool eq_nf(const CompTermPtr& a, const CompTermPtr& b);

bool eq_nf_subst(const DomSubstPtr& a, const DomSubstPtr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{[&](const DomSubst::Empty&) { return true; },
                 [&](const DomSubst::Weaken& x) {
                   return x.count == std::get<DomSubst::Weaken>(b->v).count;
                 },
                 [&](const DomSubst::Snoc& x) {
                   auto& y = std::get<DomSubst::Snoc>(b->v);
                   return eq_nf_subst(x.prefix, y.prefix) && eq_nf(x.term, y.term);
                 }},
      a->v);
}

bool eq_nf(const DomTermPtr& a, const DomTermPtr& b) {
  auto* la = std::get_if<DomTerm::Lam>(&a->v);
  auto* lb = std::get_if<DomTerm::Lam>(&b->v);
  if (la && lb) return eq_nf(la->body, lb->body);
  if (la) return eq_nf(la->body, dm_app(shift_dom(b, 0, 1), dm_var(0)));
  if (lb) return eq_nf(dm_app(shift_dom(a, 0, 1), dm_var(0)), lb->body);
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) { return x.index == std::get<DomTerm::Var>(b->v).index; },
          [&](const DomTerm::Lam&) { return false; },  // unreachable
          [&](const DomTerm::App& x) {
            auto& y = std::get<DomTerm::App>(b->v);
            return eq_nf(x.fun, y.fun) && eq_nf(x.arg, y.arg);
          },
          [&](const DomTerm::Const& x) {
            auto& y = std::get<DomTerm::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!eq_nf(x.args[i], y.args[i])) return false;
            return true;
          },
          [&](const DomTerm::Unbox& x) {
            auto& y = std::get<DomTerm::Unbox>(b->v);
            return eq_nf(x.comp, y.comp) && eq_nf_subst(x.subst, y.subst);
          }},
      a->v);
}

bool eq_nf_arg(const CompArg& a, const CompArg& b) {
  // a bare computation variable and the corresponding context variable
  // stand for the same argument
  auto as_ctx_index = [](const CompArg& x) -> std::optional<std::size_t> {
    if (auto* c = std::get_if<DomCtxPtr>(&x)) {
      if (auto* v = std::get_if<DomCtx::CtxVar>(&(*c)->v)) return v->comp_index;
      return std::nullopt;
    }
    auto& t = std::get<CompTermPtr>(x);
    if (auto* v = std::get_if<CompTerm::Var>(&t->v)) return v->index;
    return std::nullopt;
  };
  if (a.index() != b.index()) {
    auto ia = as_ctx_index(a), ib = as_ctx_index(b);
    return ia && ib && *ia == *ib;
  }
  if (auto* t = std::get_if<CompTermPtr>(&a)) return eq_nf(*t, std::get<CompTermPtr>(b));
  return alpha_equal(std::get<DomCtxPtr>(a), std::get<DomCtxPtr>(b));
}

bool eq_nf(const CompTermPtr& a, const CompTermPtr& b) {
  auto* fa = std::get_if<CompTerm::Fn>(&a->v);
  auto* fb = std::get_if<CompTerm::Fn>(&b->v);
  if (fa && fb) return eq_nf(fa->body, fb->body);
  if (fa) return eq_nf(fa->body, cm_app(shift_comp(b, 0, 1), CompArg(cm_var(0))));
  if (fb) return eq_nf(cm_app(shift_comp(a, 0, 1), CompArg(cm_var(0))), fb->body);
  auto* ba = std::get_if<CompTerm::BoxC>(&a->v);
  auto* bb = std::get_if<CompTerm::BoxC>(&b->v);
  if (ba && !bb) return eq_nf(ba->body, dm_unbox(b, ds_id()));
  if (bb && !ba) return eq_nf(dm_unbox(a, ds_id()), bb->body);
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const CompTerm::Var& x) { return x.index == std::get<CompTerm::Var>(b->v).index; },
          [&](const CompTerm::Ref& x) { return x.name == std::get<CompTerm::Ref>(b->v).name; },
          [&](const CompTerm::BoxC& x) { return eq_nf(x.body, std::get<CompTerm::BoxC>(b->v).body); },
          [&](const CompTerm::Fn&) { return false; },  // unreachable
          [&](const CompTerm::App& x) {
            auto& y = std::get<CompTerm::App>(b->v);
            return eq_nf(x.fun, y.fun) && eq_nf_arg(x.arg, y.arg);
          },
          [&](const CompTerm::Rec& x) {
            auto& y = std::get<CompTerm::Rec>(b->v);
            if (!alpha_equal(x.motive, y.motive)) return false;
            if (x.branches.size() != y.branches.size()) return false;
            for (std::size_t i = 0; i < x.branches.size(); i++) {
              if (x.branches[i].binders != y.branches[i].binders) return false;
              if (!eq_nf(x.branches[i].body, y.branches[i].body)) return false;
            }
            if (!alpha_equal(x.ctx_arg, y.ctx_arg)) return false;
            if ((x.scrut_ty == nullptr) != (y.scrut_ty == nullptr)) return false;
            if (x.scrut_ty && !eq_nf(x.scrut_ty, y.scrut_ty)) return false;
            return eq_nf(x.scrut, y.scrut);
          }},
      a->v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Checker

void Checker::check_comp_ctx(const CompCtx& g) const {
  CompCtx prefix;
  for (auto& e : g.entries) {
    check_ann_type(prefix, e);
    prefix.entries.push_back(e);
  }
}

void Checker::check_ann_type(const CompCtx& g, const AnnType& t) const {
  if (t.is_ctx()) return;
  check_comp_type(g, t.type);
}

void Checker::check_comp_type(const CompCtx& g, const CompTypePtr& t) const {
  std::visit(
      overloaded{[&](const CompType::BoxT& x) {
                   check_dom_ctx(g, x.ct.ctx);
                   check_dom_type(g, x.ct.ctx, x.ct.type);
                 },
                 [&](const CompType::Fn& x) {
                   check_ann_type(g, x.param);
                   check_comp_type(g.extended(x.param), x.result);
                   if (st_.mode == Mode::Simple && !x.param.is_ctx() &&
                       uses_comp_var(x.result, 0))
                     fail(Errc::IllFormedType,
                          "simple-mode function result may depend only on ctx binders");
                 }},
      t->v);
}

void Checker::check_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const {
  std::visit(
      overloaded{[&](const DomCtx::Empty&) {},
                 [&](const DomCtx::CtxVar& x) {
                   if (x.comp_index >= g.size())
                     fail(Errc::UnboundCtxVar, "context variable out of scope");
                   if (!g.lookup(x.comp_index).is_ctx())
                     fail(Errc::NotCtxKind, "variable is not of ctx kind");
                 },
                 [&](const DomCtx::Snoc& x) {
                   check_dom_ctx(g, x.prefix);
                   check_dom_type(g, x.prefix, x.type);
                 }},
      psi->v);
}

void Checker::check_dom_type(const CompCtx& g, const DomCtxPtr& psi, const DomTypePtr& a) const {
  std::visit(
      overloaded{[&](const DomType::Tm&) {
                   if (st_.mode != Mode::Simple)
                     fail(Errc::IllFormedType, "tm is not a dep-mode type");
                 },
                 [&](const DomType::Arrow& x) {
                   if (st_.mode != Mode::Simple)
                     fail(Errc::IllFormedType, "-> is not a dep-mode type former");
                   check_dom_type(g, psi, x.dom);
                   check_dom_type(g, psi, x.cod);
                 },
                 [&](const DomType::Ty&) {
                   if (st_.mode != Mode::Dep)
                     fail(Errc::IllFormedType, "ty is not a simple-mode type");
                 },
                 [&](const DomType::Trm& x) {
                   if (st_.mode != Mode::Dep)
                     fail(Errc::IllFormedType, "trm is not a simple-mode type former");
                   check_dom_term(g, psi, x.body, dt_ty());
                 },
                 [&](const DomType::Pi& x) {
                   if (st_.mode != Mode::Dep)
                     fail(Errc::IllFormedType, "Pi is not a simple-mode type former");
                   check_dom_type(g, psi, x.dom);
                   check_dom_type(g, dc_snoc(psi, x.dom), x.cod);
                 }},
      a->v);
}

DomTypePtr Checker::infer_dom_term(const CompCtx& g, const DomCtxPtr& psi,
                                   const DomTermPtr& m) const {
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) -> DomTypePtr {
            const DomType* entry = dom_ctx_entry(psi, x.index);
            if (!entry) fail(Errc::IllFormedType, "domain variable out of scope");
            return shift_dom_ty(std::make_shared<DomType>(*entry), 0,
                                static_cast<std::int64_t>(x.index) + 1);
          },
          [&](const DomTerm::Lam&) -> DomTypePtr {
            fail(Errc::CannotInfer, "lambda requires a type annotation");
          },
          [&](const DomTerm::App& x) -> DomTypePtr {
            DomTypePtr fun_ty = normalize_dom_ty(g, infer_dom_term(g, psi, x.fun));
            if (auto* arr = std::get_if<DomType::Arrow>(&fun_ty->v)) {
              check_dom_term(g, psi, x.arg, arr->dom);
              return arr->cod;
            }
            if (auto* pi = std::get_if<DomType::Pi>(&fun_ty->v)) {
              check_dom_term(g, psi, x.arg, pi->dom);
              return subst_dom_ty_one(pi->cod, x.arg);
            }
            fail(Errc::NotAFunction, "application head is not of function type");
          },
          [&](const DomTerm::Const& x) -> DomTypePtr {
            int arity = dom_const_arity(st_.mode, x.name);
            if (arity < 0) fail(Errc::UnknownConstant, "constant not available in this mode");
            if (static_cast<int>(x.args.size()) != arity)
              fail(Errc::ArityMismatch, "constant applied to the wrong number of arguments");
            switch (x.name) {
              case DomConst::Lam:
                return dt_arrow(dt_arrow(dt_tm(), dt_tm()), dt_tm());
              case DomConst::App:
                return dt_arrow(dt_tm(), dt_arrow(dt_tm(), dt_tm()));
              case DomConst::O:
                return dt_ty();
              case DomConst::Arr:
                check_dom_term(g, psi, x.args[0], dt_ty());
                check_dom_term(g, psi, x.args[1], dt_ty());
                return dt_ty();
              case DomConst::DLam: {
                check_dom_term(g, psi, x.args[0], dt_ty());
                check_dom_term(g, psi, x.args[1], dt_ty());
                DomTypePtr fn_ty =
                    dt_pi(dt_trm(x.args[0]), dt_trm(shift_dom(x.args[1], 0, 1)));
                check_dom_term(g, psi, x.args[2], fn_ty);
                return dt_trm(dm_const(DomConst::Arr, {x.args[0], x.args[1]}));
              }
              case DomConst::DApp: {
                check_dom_term(g, psi, x.args[0], dt_ty());
                check_dom_term(g, psi, x.args[1], dt_ty());
                check_dom_term(g, psi, x.args[2],
                               dt_trm(dm_const(DomConst::Arr, {x.args[0], x.args[1]})));
                check_dom_term(g, psi, x.args[3], dt_trm(x.args[0]));
                return dt_trm(x.args[1]);
              }
            }
            fail(Errc::UnknownConstant, "unreachable");
          },
          [&](const DomTerm::Unbox& x) -> DomTypePtr {
            // a literal box is typed through its substitution
            if (auto ct = reconstruct_unbox(g, psi, x)) {
              check_ctx_obj(g, std::get<CompTerm::BoxC>(x.comp->v), *ct);
              check_dom_subst(g, psi, x.subst, ct->ctx);
              return subst_dom_ty(ct->type, x.subst);
            }
            CompTypePtr t = infer_comp(g, x.comp);
            auto* bt = std::get_if<CompType::BoxT>(&t->v);
            if (!bt) fail(Errc::BoxExpected, "unbox of a non-boxed computation");
            check_dom_subst(g, psi, x.subst, bt->ct.ctx);
            return subst_dom_ty(bt->ct.type, x.subst);
          }},
      m->v);
}

std::optional<ContextualType> Checker::reconstruct_unbox(const CompCtx& g, const DomCtxPtr& psi,
                                                         const DomTerm::Unbox& u) const {
  auto* box = std::get_if<CompTerm::BoxC>(&u.comp->v);
  if (!box) return std::nullopt;
  // rebuild the target context from the substitution's shape
  std::vector<DomTermPtr> entries;  // snoc'd terms, outermost snoc first
  const DomSubst* cur = u.subst.get();
  while (auto* sn = std::get_if<DomSubst::Snoc>(&cur->v)) {
    entries.push_back(sn->term);
    cur = sn->prefix.get();
  }
  DomCtxPtr phi;
  if (auto* w = std::get_if<DomSubst::Weaken>(&cur->v)) {
    phi = dom_ctx_prefix(psi, w->count);
  } else {
    phi = dc_empty();
  }
  // entries were collected from the innermost snoc outwards; inference of an
  // entry type over psi stands in for the type over the prefix, which is
  // exact for closed entry types (the redex forms this rule is for)
  for (std::size_t i = entries.size(); i > 0; i--) {
    DomTypePtr ty = infer_dom_term(g, psi, entries[i - 1]);
    phi = dc_snoc(phi, ty);
  }
  DomTypePtr a = infer_dom_term(g, phi, box->body);
  return ContextualType{CtxKind::Term, phi, a};
}

void Checker::check_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m,
                             const DomTypePtr& a) const {
  if (auto* l = std::get_if<DomTerm::Lam>(&m->v)) {
    DomTypePtr want = normalize_dom_ty(g, a);
    if (auto* arr = std::get_if<DomType::Arrow>(&want->v)) {
      check_dom_term(g, dc_snoc(psi, arr->dom), l->body, shift_dom_ty(arr->cod, 0, 1));
      return;
    }
    if (auto* pi = std::get_if<DomType::Pi>(&want->v)) {
      check_dom_term(g, dc_snoc(psi, pi->dom), l->body, pi->cod);
      return;
    }
    fail(Errc::TypeMismatch, "lambda checked against a non-function type");
  }
  DomTypePtr got = infer_dom_term(g, psi, m);
  if (!equal_dom_ty(g, got, a))
    fail(Errc::TypeMismatch,
         "expected " + print_dom_type(normalize_dom_ty(g, a), st_.mode) + ", got " +
             print_dom_type(normalize_dom_ty(g, got), st_.mode));
}

void Checker::check_dom_subst(const CompCtx& g, const DomCtxPtr& psi, const DomSubstPtr& s,
                              const DomCtxPtr& phi) const {
  std::visit(
      overloaded{
          [&](const DomSubst::Empty&) {
            if (!is_empty_ctx(phi))
              fail(Errc::TypeMismatch, "empty substitution into a non-empty context");
          },
          [&](const DomSubst::Weaken& x) {
            if (dom_ctx_length(psi) < x.count)
              fail(Errc::WeakenShapeMismatch, "weakening drops more entries than available");
            DomCtxPtr rest = dom_ctx_prefix(psi, x.count);
            if (!equal_dom_ctx(g, rest, phi))
              fail(Errc::WeakenShapeMismatch,
                   "weakening source does not extend the target context");
          },
          [&](const DomSubst::Snoc& x) {
            auto* sn = std::get_if<DomCtx::Snoc>(&phi->v);
            if (!sn)
              fail(Errc::TypeMismatch, "substitution longer than the target context");
            check_dom_subst(g, psi, x.prefix, sn->prefix);
            check_dom_term(g, psi, x.term, subst_dom_ty(sn->type, x.prefix));
          }},
      s->v);
}

void Checker::check_ctx_obj(const CompCtx& g, const CompTerm::BoxC& c,
                            const ContextualType& t) const {
  if (c.names.size() != dom_ctx_length(t.ctx))
    fail(Errc::TypeMismatch, "erased context length does not match the contextual type");
  if (t.kind == CtxKind::Term) {
    check_dom_term(g, t.ctx, c.body, t.type);
    return;
  }
  // variable objects: a declared variable, or a promoted variable from Γ
  if (auto* v = std::get_if<DomTerm::Var>(&c.body->v)) {
    const DomType* entry = dom_ctx_entry(t.ctx, v->index);
    if (!entry) fail(Errc::IllFormedType, "domain variable out of scope");
    DomTypePtr got = shift_dom_ty(std::make_shared<DomType>(*entry), 0,
                                  static_cast<std::int64_t>(v->index) + 1);
    if (!equal_dom_ty(g, got, t.type))
      fail(Errc::TypeMismatch, "variable has the wrong type for this contextual type");
    return;
  }
  if (auto* ub = std::get_if<DomTerm::Unbox>(&c.body->v)) {
    auto* w = std::get_if<DomSubst::Weaken>(&ub->subst->v);
    auto* xv = std::get_if<CompTerm::Var>(&ub->comp->v);
    if (w && xv) {
      if (xv->index >= g.size()) fail(Errc::ScopeError, "computation variable out of scope");
      const AnnType& a = g.lookup(xv->index);
      if (!a.is_ctx()) {
        CompTypePtr at = shift_comp(a.type, 0, static_cast<std::int64_t>(xv->index) + 1);
        if (auto* bt = std::get_if<CompType::BoxT>(&at->v)) {
          if (bt->ct.kind == CtxKind::Variable) {
            check_dom_subst(g, t.ctx, ub->subst, bt->ct.ctx);
            DomTypePtr got = subst_dom_ty(bt->ct.type, ub->subst);
            if (!equal_dom_ty(g, got, t.type))
              fail(Errc::TypeMismatch, "promoted variable has the wrong type");
            return;
          }
        }
      }
    }
    fail(Errc::NotAVariable, "unbox body is not a variable of a variable contextual type");
  }
  fail(Errc::NotAVariable, "contextual object is not a variable");
}

CompTypePtr Checker::infer_comp(const CompCtx& g, const CompTermPtr& t) const {
  return std::visit(
      overloaded{
          [&](const CompTerm::Var& x) -> CompTypePtr {
            if (x.index >= g.size())
              fail(Errc::ScopeError, "computation variable out of scope");
            const AnnType& a = g.lookup(x.index);
            if (a.is_ctx())
              fail(Errc::AnnKindMismatch, "context variable used as a term");
            return shift_comp(a.type, 0, static_cast<std::int64_t>(x.index) + 1);
          },
          [&](const CompTerm::Ref& x) -> CompTypePtr {
            if (!st_.decls)
              fail(Errc::ScopeError, "reference '" + x.name + "' without a declaration table");
            auto it = st_.decls->find(x.name);
            if (it == st_.decls->end())
              fail(Errc::ScopeError, "unknown declaration '" + x.name + "'");
            if (it->second.type.is_ctx())
              fail(Errc::AnnKindMismatch, "ctx declaration used as a term");
            return it->second.type.type;
          },
          [&](const CompTerm::BoxC&) -> CompTypePtr {
            fail(Errc::CannotInfer, "box requires a type annotation");
          },
          [&](const CompTerm::Fn&) -> CompTypePtr {
            fail(Errc::CannotInfer, "fn requires a type annotation");
          },
          [&](const CompTerm::App& x) -> CompTypePtr {
            CompTypePtr fun_ty = normalize_comp_ty(g, infer_comp(g, x.fun));
            auto* fn = std::get_if<CompType::Fn>(&fun_ty->v);
            if (!fn) fail(Errc::NotAFunction, "application head is not of function type");
            if (fn->param.is_ctx()) {
              DomCtxPtr ctx;
              if (auto* c = std::get_if<DomCtxPtr>(&x.arg)) {
                ctx = *c;
              } else {
                auto& tm = std::get<CompTermPtr>(x.arg);
                auto* v = std::get_if<CompTerm::Var>(&tm->v);
                if (!v)
                  fail(Errc::AnnKindMismatch, "function expects a context argument");
                ctx = dc_var(v->index);
              }
              check_dom_ctx(g, ctx);
              return subst_comp(fn->result, CompArg(ctx));
            }
            auto* tm = std::get_if<CompTermPtr>(&x.arg);
            if (!tm) fail(Errc::AnnKindMismatch, "function expects a term argument");
            check_comp(g, *tm, fn->param.type);
            return subst_comp(fn->result, CompArg(*tm));
          },
          [&](const CompTerm::Rec& x) -> CompTypePtr { return check_recursor(g, x); }},
      t->v);
}

void Checker::check_comp(const CompCtx& g, const CompTermPtr& t, const CompTypePtr& tau) const {
  if (auto* f = std::get_if<CompTerm::Fn>(&t->v)) {
    CompTypePtr want = normalize_comp_ty(g, tau);
    auto* fn = std::get_if<CompType::Fn>(&want->v);
    if (!fn) fail(Errc::TypeMismatch, "fn checked against a non-function type");
    check_comp(g.extended(fn->param), f->body, fn->result);
    return;
  }
  if (auto* b = std::get_if<CompTerm::BoxC>(&t->v)) {
    CompTypePtr want = normalize_comp_ty(g, tau);
    auto* bt = std::get_if<CompType::BoxT>(&want->v);
    if (!bt) fail(Errc::TypeMismatch, "box checked against a non-box type");
    check_ctx_obj(g, *b, bt->ct);
    return;
  }
  CompTypePtr got = infer_comp(g, t);
  if (!equal_comp_ty(g, got, tau))
    fail(Errc::TypeMismatch,
         "expected " + print_comp_type(normalize_comp_ty(g, tau), st_.mode) + ", got " +
             print_comp_type(normalize_comp_ty(g, got), st_.mode));
}

CompTypePtr Checker::check_recursor(const CompCtx& g, const CompTerm::Rec& r) const {
  check_comp_type(g, r.motive);
  RecParts parts = dissect_motive(st_.mode, r);
  if (st_.mode == Mode::Simple && uses_comp_var(parts.tau, 0))
    fail(Errc::IllFormedType, "simple-mode motive cannot depend on the scrutinee");
  check_dom_ctx(g, r.ctx_arg);

  auto inst2 = [&](const CompArg& psi, const CompArg& y, std::size_t gshift) {
    return open_comp(parts.tau, {y, psi}, gshift);
  };
  auto inst3 = [&](const CompArg& psi, const CompArg& z, const CompArg& y,
                   std::size_t gshift) {
    return open_comp(parts.tau, {y, z, psi}, gshift);
  };

  switch (parts.kind) {
    case RecKind::SimpleTm: {
      check_comp(g, r.scrut, ct_box(CtxKind::Term, r.ctx_arg, dt_tm()));
      // variable branch: psi, p
      {
        CompCtx gb = g.extended(ann_ctx())
                         .extended(ann(ct_box(CtxKind::Variable, dc_var(0), dt_tm())));
        check_comp(gb, parts.var_b->body, inst2(CompArg(dc_var(1)), CompArg(cm_var(0)), 2));
      }
      // app branch: psi, m, n, f_m, f_n
      {
        CompCtx gb = g.extended(ann_ctx())
                         .extended(ann(ct_box(CtxKind::Term, dc_var(0), dt_tm())))
                         .extended(ann(ct_box(CtxKind::Term, dc_var(1), dt_tm())))
                         .extended(ann(inst2(CompArg(dc_var(2)), CompArg(cm_var(1)), 3)))
                         .extended(ann(inst2(CompArg(dc_var(3)), CompArg(cm_var(1)), 4)));
        check_comp(gb, parts.app_b->body,
                   inst2(CompArg(dc_var(4)), CompArg(boxed_simple_app(3, 2)), 5));
      }
      // lam branch: psi, m, f_m
      {
        CompCtx gb =
            g.extended(ann_ctx())
                .extended(ann(ct_box(CtxKind::Term, dc_snoc(dc_var(0), dt_tm()), dt_tm())))
                .extended(ann(inst2(CompArg(dc_snoc(dc_var(1), dt_tm())), CompArg(cm_var(0)), 2)));
        check_comp(gb, parts.lam_b->body,
                   inst2(CompArg(dc_var(2)), CompArg(boxed_simple_lam(1)), 3));
      }
      return inst2(CompArg(r.ctx_arg), CompArg(r.scrut), 0);
    }
    case RecKind::DepTy: {
      check_comp(g, r.scrut, ct_box(CtxKind::Term, r.ctx_arg, dt_ty()));
      {
        CompCtx gb = g.extended(ann_ctx());
        check_comp(gb, parts.o_b->body,
                   inst2(CompArg(dc_var(0)), CompArg(cm_box({}, dm_const(DomConst::O))), 1));
      }
      {
        CompCtx gb = g.extended(ann_ctx())
                         .extended(ann(ct_box(CtxKind::Term, dc_var(0), dt_ty())))
                         .extended(ann(ct_box(CtxKind::Term, dc_var(1), dt_ty())))
                         .extended(ann(inst2(CompArg(dc_var(2)), CompArg(cm_var(1)), 3)))
                         .extended(ann(inst2(CompArg(dc_var(3)), CompArg(cm_var(1)), 4)));
        check_comp(gb, parts.arr_b->body,
                   inst2(CompArg(dc_var(4)), CompArg(boxed_dep_arr(3, 2)), 5));
      }
      return inst2(CompArg(r.ctx_arg), CompArg(r.scrut), 0);
    }
    case RecKind::DepTrm: {
      // the type scrutinee must be closed
      if (auto* bx = std::get_if<CompTerm::BoxC>(&r.scrut_ty->v)) {
        if (!bx->names.empty())
          fail(Errc::NotClosed, "trm recursor type scrutinee must live in the empty context");
      } else {
        CompTypePtr zt = normalize_comp_ty(g, infer_comp(g, r.scrut_ty));
        if (auto* bt = std::get_if<CompType::BoxT>(&zt->v)) {
          if (!is_empty_ctx(bt->ct.ctx))
            fail(Errc::NotClosed, "trm recursor type scrutinee must live in the empty context");
        }
      }
      CompTypePtr closed_ty = ct_box(CtxKind::Term, dc_empty(), dt_ty());
      check_comp(g, r.scrut_ty, closed_ty);
      check_comp(g, r.scrut,
                 ct_box(CtxKind::Term, r.ctx_arg, dt_trm(dm_unbox(r.scrut_ty, ds_empty()))));
      // variable branch: psi, a, t
      {
        CompCtx gb = g.extended(ann_ctx())
                         .extended(ann(closed_ty))
                         .extended(ann(ct_box(CtxKind::Variable, dc_var(1),
                                              dt_trm(unbox_empty(0)))));
        check_comp(gb, parts.var_b->body,
                   inst3(CompArg(dc_var(2)), CompArg(cm_var(1)), CompArg(cm_var(0)), 3));
      }
      // lam branch: psi, a, b, m, f_m
      {
        CompCtx gb =
            g.extended(ann_ctx())
                .extended(ann(closed_ty))
                .extended(ann(closed_ty))
                .extended(ann(ct_box(CtxKind::Term, dc_snoc(dc_var(2), dt_trm(unbox_empty(1))),
                                     dt_trm(unbox_empty(0)))))
                .extended(ann(inst3(CompArg(dc_snoc(dc_var(3), dt_trm(unbox_empty(2)))),
                                    CompArg(cm_var(1)), CompArg(cm_var(0)), 4)));
        check_comp(gb, parts.lam_b->body,
                   inst3(CompArg(dc_var(4)), CompArg(boxed_closed_arr(3, 2)),
                         CompArg(boxed_dep_lam(3, 2, 1)), 5));
      }
      // app branch: psi, a, b, m, n, f_m, f_n
      {
        CompCtx gb =
            g.extended(ann_ctx())
                .extended(ann(closed_ty))
                .extended(ann(closed_ty))
                .extended(ann(ct_box(CtxKind::Term, dc_var(2),
                                     dt_trm(dm_const(DomConst::Arr,
                                                     {unbox_empty(1), unbox_empty(0)})))))
                .extended(ann(ct_box(CtxKind::Term, dc_var(3), dt_trm(unbox_empty(2)))))
                .extended(ann(inst3(CompArg(dc_var(4)), CompArg(boxed_closed_arr(3, 2)),
                                    CompArg(cm_var(1)), 5)))
                .extended(ann(inst3(CompArg(dc_var(5)), CompArg(cm_var(4)),
                                    CompArg(cm_var(1)), 6)));
        check_comp(gb, parts.app_b->body,
                   inst3(CompArg(dc_var(6)), CompArg(cm_var(4)),
                         CompArg(boxed_dep_app(5, 4, 3, 2)), 7));
      }
      return inst3(CompArg(r.ctx_arg), CompArg(r.scrut_ty), CompArg(r.scrut), 0);
    }
  }
  fail(Errc::IllFormedType, "unreachable");
}

void Checker::check_decl(const AnnType& ascription, const CompArg& body) const {
  CompCtx empty;
  check_ann_type(empty, ascription);
  if (ascription.is_ctx()) {
    auto* c = std::get_if<DomCtxPtr>(&body);
    if (!c) fail(Errc::AnnKindMismatch, "ctx declaration requires a context body");
    check_dom_ctx(empty, *c);
    return;
  }
  auto* t = std::get_if<CompTermPtr>(&body);
  if (!t) fail(Errc::AnnKindMismatch, "term declaration requires a term body");
  check_comp(empty, *t, ascription.type);
}

// ---------------------------------------------------------------------------
// Normalization entry points

DomTermPtr Checker::normalize_dom(const CompCtx& g, const DomTermPtr& m) const {
  Norm n{st_.mode, st_.order, st_.fuel, st_.decls};
  NormEnv env = env_of(g);
  return n.dom(env, m);
}
DomTypePtr Checker::normalize_dom_ty(const CompCtx& g, const DomTypePtr& a) const {
  Norm n{st_.mode, st_.order, st_.fuel, st_.decls};
  NormEnv env = env_of(g);
  return n.dom_ty(env, a);
}
CompTermPtr Checker::normalize_comp(const CompCtx& g, const CompTermPtr& t) const {
  Norm n{st_.mode, st_.order, st_.fuel, st_.decls};
  NormEnv env = env_of(g);
  return n.comp(env, t);
}
CompTypePtr Checker::normalize_comp_ty(const CompCtx& g, const CompTypePtr& t) const {
  Norm n{st_.mode, st_.order, st_.fuel, st_.decls};
  NormEnv env = env_of(g);
  return n.comp_ty(env, t);
}

bool Checker::equal_dom(const CompCtx& g, const DomTermPtr& m, const DomTermPtr& n) const {
  return eq_nf(normalize_dom(g, m), normalize_dom(g, n));
}

bool Checker::equal_dom_ty(const CompCtx& g, const DomTypePtr& a, const DomTypePtr& b) const {
  DomTypePtr na = normalize_dom_ty(g, a), nb = normalize_dom_ty(g, b);
  // types have rigid heads; compare embedded terms up to eta
  std::function<bool(const DomTypePtr&, const DomTypePtr&)> go =
      [&](const DomTypePtr& x, const DomTypePtr& y) -> bool {
    if (x->v.index() != y->v.index()) return false;
    return std::visit(
        overloaded{[&](const DomType::Tm&) { return true; },
                   [&](const DomType::Arrow& a1) {
                     auto& b1 = std::get<DomType::Arrow>(y->v);
                     return go(a1.dom, b1.dom) && go(a1.cod, b1.cod);
                   },
                   [&](const DomType::Ty&) { return true; },
                   [&](const DomType::Trm& a1) {
                     return eq_nf(a1.body, std::get<DomType::Trm>(y->v).body);
                   },
                   [&](const DomType::Pi& a1) {
                     auto& b1 = std::get<DomType::Pi>(y->v);
                     return go(a1.dom, b1.dom) && go(a1.cod, b1.cod);
                   }},
        x->v);
  };
  return go(na, nb);
}

bool Checker::equal_dom_ctx(const CompCtx& g, const DomCtxPtr& a, const DomCtxPtr& b) const {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{[&](const DomCtx::Empty&) { return true; },
                 [&](const DomCtx::CtxVar& x) {
                   return x.comp_index == std::get<DomCtx::CtxVar>(b->v).comp_index;
                 },
                 [&](const DomCtx::Snoc& x) {
                   auto& y = std::get<DomCtx::Snoc>(b->v);
                   return equal_dom_ctx(g, x.prefix, y.prefix) &&
                          equal_dom_ty(g, x.type, y.type);
                 }},
      a->v);
}

bool Checker::equal_comp(const CompCtx& g, const CompTermPtr& t1, const CompTermPtr& t2) const {
  return eq_nf(normalize_comp(g, t1), normalize_comp(g, t2));
}

bool Checker::equal_comp_ty(const CompCtx& g, const CompTypePtr& t1, const CompTypePtr& t2) const {
  CompTypePtr a = normalize_comp_ty(g, t1), b = normalize_comp_ty(g, t2);
  std::function<bool(const CompTypePtr&, const CompTypePtr&)> go =
      [&](const CompTypePtr& x, const CompTypePtr& y) -> bool {
    if (x->v.index() != y->v.index()) return false;
    return std::visit(
        overloaded{[&](const CompType::BoxT& a1) {
                     auto& b1 = std::get<CompType::BoxT>(y->v);
                     if (a1.ct.kind != b1.ct.kind) return false;
                     if (!equal_dom_ctx(g, a1.ct.ctx, b1.ct.ctx)) return false;
                     return equal_dom_ty(g, a1.ct.type, b1.ct.type);
                   },
                   [&](const CompType::Fn& a1) {
                     auto& b1 = std::get<CompType::Fn>(y->v);
                     if (a1.param.is_ctx() != b1.param.is_ctx()) return false;
                     if (!a1.param.is_ctx() && !go(a1.param.type, b1.param.type)) return false;
                     return go(a1.result, b1.result);
                   }},
        x->v);
  };
  return go(a, b);
}

}  // namespace cocon
