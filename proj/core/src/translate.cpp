#include "cocon/translate.hpp"

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ITermPtr top() { return it_const("top"); }
ITermPtr idsub() { return it_lam(it_ovar(0)); }

// administrative beta step: translated domain-level functions are literal
// lambda forms (possibly under the let-boxes an unbox emits), so applying
// them is resolved at emission time
ITermPtr letbox_or_beta(const ITermPtr& scrut, const ITermPtr& body) {
  if (auto* bx = std::get_if<ITerm::Box>(&scrut->v))
    return isubst(body, IZone::Crisp, bx->body);
  return it_letbox(scrut, body);
}

ITermPtr app_beta(const ITermPtr& f, const ITermPtr& a) {
  if (auto* l = std::get_if<ITerm::Lam>(&f->v)) return isubst(l->body, IZone::Ordinary, a);
  if (auto* lb = std::get_if<ITerm::LetBox>(&f->v))
    return it_letbox(lb->scrut, app_beta(lb->body, ishift(a, IZone::Crisp, 0, 1)));
  return it_app(f, a);
}

// inlining a definition may expose let-boxes over literal boxes; resolve
// them so the output stays bidirectionally checkable
ITermPtr admin_reduce(const ITermPtr& t);

ITermPtr capp_beta(const ITermPtr& f, const ITermPtr& a) {
  if (auto* l = std::get_if<ITerm::CrispLam>(&f->v))
    return admin_reduce(isubst(l->body, IZone::Crisp, a));
  return it_capp(f, a);
}

ITermPtr admin_reduce(const ITermPtr& t) {
  return std::visit(
      overloaded{
          [&](const ITerm::Var&) { return t; },
          [&](const ITerm::Lam& x) { return it_lam(admin_reduce(x.body)); },
          [&](const ITerm::CrispLam& x) { return it_clam(admin_reduce(x.body)); },
          [&](const ITerm::App& x) -> ITermPtr {
            ITermPtr f = admin_reduce(x.fun);
            ITermPtr a = admin_reduce(x.arg);
            if (std::holds_alternative<ITerm::Lam>(f->v) ||
                std::holds_alternative<ITerm::LetBox>(f->v))
              return admin_reduce(app_beta(f, a));
            return it_app(f, a);
          },
          [&](const ITerm::CrispApp& x) -> ITermPtr {
            ITermPtr f = admin_reduce(x.fun);
            ITermPtr a = admin_reduce(x.arg);
            if (auto* l = std::get_if<ITerm::CrispLam>(&f->v))
              return admin_reduce(isubst(l->body, IZone::Crisp, a));
            return it_capp(f, a);
          },
          [&](const ITerm::Box& x) { return it_box(admin_reduce(x.body)); },
          [&](const ITerm::LetBox& x) -> ITermPtr {
            ITermPtr s = admin_reduce(x.scrut);
            if (auto* bx = std::get_if<ITerm::Box>(&s->v))
              return admin_reduce(isubst(x.body, IZone::Crisp, bx->body));
            return it_letbox(s, admin_reduce(x.body));
          },
          [&](const ITerm::Const& x) {
            std::vector<ITermPtr> args;
            args.reserve(x.args.size());
            for (auto& a : x.args) args.push_back(admin_reduce(a));
            return it_const(x.name, std::move(args));
          },
          [&](const ITerm::Rec& x) {
            std::vector<ITermPtr> args;
            args.reserve(x.args.size());
            for (auto& a : x.args) args.push_back(admin_reduce(a));
            return it_rec(x.kind, x.motive, std::move(args));
          }},
      t->v);
}

ITermPtr d_comp(ITermPtr c, ITermPtr a) { return it_const("comp", {std::move(c), std::move(a)}); }
ITermPtr d_bang(ITermPtr c) { return it_const("bang", {std::move(c)}); }
ITermPtr d_p(ITermPtr c, ITermPtr a) { return it_const("p", {std::move(c), std::move(a)}); }
ITermPtr d_v(ITermPtr c, ITermPtr a) { return it_const("v", {std::move(c), std::move(a)}); }
ITermPtr d_tysub(ITermPtr f, ITermPtr p2, ITermPtr a, ITermPtr s) {
  return it_const("tysub", {std::move(f), std::move(p2), std::move(a), std::move(s)});
}
ITermPtr d_tmsub(ITermPtr f, ITermPtr p2, ITermPtr a, ITermPtr m, ITermPtr s) {
  return it_const("tmsub", {std::move(f), std::move(p2), std::move(a), std::move(m), std::move(s)});
}
ITermPtr d_ext(ITermPtr f, ITermPtr p2, ITermPtr a, ITermPtr s, ITermPtr m) {
  return it_const("ext", {std::move(f), std::move(p2), std::move(a), std::move(s), std::move(m)});
}
ITermPtr d_typ(ITermPtr phi) { return d_tysub(phi, top(), it_const("ty"), d_bang(phi)); }
ITermPtr d_trm_at(ITermPtr phi, ITermPtr a) {
  return d_tysub(phi, d_comp(top(), it_const("ty")), it_const("trm"),
                 d_ext(phi, top(), it_const("ty"), d_bang(phi), std::move(a)));
}

}  // namespace

void Translator::note(const std::string& s) const {
  if (trace_) trace_->push_back(s);
}

// ---------------------------------------------------------------------------
// Domain level

ITermPtr Translator::tr_dom_type(const CompCtx& g, const DomCtxPtr& psi,
                                 const DomTypePtr& a) const {
  return std::visit(
      overloaded{
          [&](const DomType::Tm&) -> ITermPtr {
            note("dom-type/tm");
            return it_const("tm");
          },
          [&](const DomType::Arrow& x) -> ITermPtr {
            note("dom-type/arrow");
            return it_const("arrow", {tr_dom_type(g, psi, x.dom), tr_dom_type(g, psi, x.cod)});
          },
          [&](const DomType::Ty&) -> ITermPtr {
            note("dom-type/ty");
            return d_typ(tr_dom_ctx(g, psi));
          },
          [&](const DomType::Trm& x) -> ITermPtr {
            note("dom-type/trm");
            return d_trm_at(tr_dom_ctx(g, psi), tr_dom_term(g, psi, x.body, dt_ty()));
          },
          [&](const DomType::Pi& x) -> ITermPtr {
            note("dom-type/pi");
            ITermPtr ea = tr_dom_type(g, psi, x.dom);
            ITermPtr eb = tr_dom_type(g, dc_snoc(psi, x.dom), x.cod);
            return it_const("Pi", {tr_dom_ctx(g, psi), ea, eb});
          }},
      a->v);
}

ITermPtr Translator::tr_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const {
  return std::visit(
      overloaded{
          [&](const DomCtx::Empty&) -> ITermPtr {
            return st_.mode == Mode::Simple ? it_const("unit") : top();
          },
          [&](const DomCtx::CtxVar& x) -> ITermPtr { return it_cvar(x.comp_index); },
          [&](const DomCtx::Snoc& x) -> ITermPtr {
            ITermPtr pre = tr_dom_ctx(g, x.prefix);
            ITermPtr ty = tr_dom_type(g, x.prefix, x.type);
            return st_.mode == Mode::Simple ? it_const("times", {pre, ty})
                                            : d_comp(pre, ty);
          }},
      psi->v);
}

namespace {

// the object encodings of a context's prefixes, outermost first;
// objs[i] encodes the prefix keeping i entries stripped from the right
struct CtxDecomp {
  std::vector<ITermPtr> objs;   // objs[0] = whole context
  std::vector<ITermPtr> types;  // types[i] = entry i from the right, over its prefix
};

CtxDecomp decompose(const Translator& tr, const CompCtx& g, const DomCtxPtr& psi,
                    std::size_t upto) {
  CtxDecomp out;
  DomCtxPtr cur = psi;
  out.objs.push_back(tr.tr_dom_ctx(g, cur));
  for (std::size_t i = 0; i < upto; i++) {
    auto* sn = std::get_if<DomCtx::Snoc>(&cur->v);
    if (!sn) fail(Errc::IllFormedType, "context too short during translation");
    out.types.push_back(tr.tr_dom_type(g, sn->prefix, sn->type));
    cur = sn->prefix;
    out.objs.push_back(tr.tr_dom_ctx(g, cur));
  }
  return out;
}

}  // namespace

ITermPtr Translator::tr_dom_subst(const CompCtx& g, const DomCtxPtr& psi, const DomSubstPtr& s,
                                  const DomCtxPtr& phi) const {
  if (st_.mode == Mode::Simple) {
    return std::visit(
        overloaded{
            [&](const DomSubst::Empty&) -> ITermPtr {
              note("subst/empty");
              return it_lam(it_const("terminal"));
            },
            [&](const DomSubst::Weaken& x) -> ITermPtr {
              note("subst/wk " + std::to_string(x.count));
              CtxDecomp d = decompose(*this, g, psi, x.count);
              ITermPtr body = it_ovar(0);
              for (std::size_t i = 0; i < x.count; i++)
                body = it_const("fst", {d.objs[i + 1], d.types[i], body});
              return it_lam(body);
            },
            [&](const DomSubst::Snoc& x) -> ITermPtr {
              note("subst/snoc");
              auto* sn = std::get_if<DomCtx::Snoc>(&phi->v);
              if (!sn) fail(Errc::IllFormedType, "substitution target too short");
              ITermPtr e1 = tr_dom_subst(g, psi, x.prefix, sn->prefix);
              ITermPtr e2 = tr_dom_term(g, psi, x.term, sn->type);
              ITermPtr c = tr_dom_ctx(g, sn->prefix);
              ITermPtr dty = tr_dom_type(g, sn->prefix, sn->type);
              return it_lam(it_const("pair", {c, dty,
                                              app_beta(ishift(e1, IZone::Ordinary, 0, 1), it_ovar(0)),
                                              app_beta(ishift(e2, IZone::Ordinary, 0, 1), it_ovar(0))}));
            }},
        s->v);
  }
  // dep mode: substitutions are morphisms between decoded contexts
  return std::visit(
      overloaded{
          [&](const DomSubst::Empty&) -> ITermPtr {
            note("subst/empty");
            return d_bang(tr_dom_ctx(g, psi));
          },
          [&](const DomSubst::Weaken& x) -> ITermPtr {
            note("subst/wk " + std::to_string(x.count));
            CtxDecomp d = decompose(*this, g, psi, x.count);
            if (x.count == 0) return idsub();
            if (x.count == 1) return d_p(d.objs[1], d.types[0]);
            ITermPtr body = it_ovar(0);
            for (std::size_t i = 0; i < x.count; i++)
              body = it_app(d_p(d.objs[i + 1], d.types[i]), body);
            return it_lam(body);
          },
          [&](const DomSubst::Snoc& x) -> ITermPtr {
            note("subst/snoc");
            auto* sn = std::get_if<DomCtx::Snoc>(&phi->v);
            if (!sn) fail(Errc::IllFormedType, "substitution target too short");
            ITermPtr e1 = tr_dom_subst(g, psi, x.prefix, sn->prefix);
            DomTypePtr entry_ty = subst_dom_ty(sn->type, x.prefix);
            ITermPtr e2 = tr_dom_term(g, psi, x.term, entry_ty);
            return d_ext(tr_dom_ctx(g, psi), tr_dom_ctx(g, sn->prefix),
                         tr_dom_type(g, sn->prefix, sn->type), e1, e2);
          }},
      s->v);
}

ITermPtr Translator::tr_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m,
                                 const DomTypePtr& a) const {
  if (st_.mode == Mode::Simple) {
    ITermPtr epsi = tr_dom_ctx(g, psi);
    return std::visit(
        overloaded{
            [&](const DomTerm::Var& x) -> ITermPtr {
              note("dom/var " + std::to_string(x.index));
              CtxDecomp d = decompose(*this, g, psi, x.index + 1);
              ITermPtr body = it_ovar(0);
              for (std::size_t i = 0; i < x.index; i++)
                body = it_const("fst", {d.objs[i + 1], d.types[i], body});
              body = it_const("snd", {d.objs[x.index + 1], d.types[x.index], body});
              return it_lam(body);
            },
            [&](const DomTerm::Lam& x) -> ITermPtr {
              note("dom/lam");
              DomTypePtr want = chk_.normalize_dom_ty(g, a);
              auto* arr = std::get_if<DomType::Arrow>(&want->v);
              if (!arr) fail(Errc::TypeMismatch, "lambda at a non-arrow type");
              ITermPtr ea = tr_dom_type(g, psi, arr->dom);
              ITermPtr eb = tr_dom_type(g, psi, arr->cod);
              ITermPtr eprime = tr_dom_term(g, dc_snoc(psi, arr->dom), x.body,
                                            shift_dom_ty(arr->cod, 0, 1));
              // fn u. arrow-i (fn w. e' (pair u w))
              ITermPtr inner = app_beta(ishift(eprime, IZone::Ordinary, 0, 2),
                                        it_const("pair", {ishift(epsi, IZone::Ordinary, 0, 2),
                                                          ishift(ea, IZone::Ordinary, 0, 2),
                                                          it_ovar(1), it_ovar(0)}));
              return it_lam(it_const("arrow-i", {ishift(ea, IZone::Ordinary, 0, 1),
                                                 ishift(eb, IZone::Ordinary, 0, 1),
                                                 it_lam(inner)}));
            },
            [&](const DomTerm::App& x) -> ITermPtr {
              note("dom/app");
              DomTypePtr fun_ty = chk_.normalize_dom_ty(g, chk_.infer_dom_term(g, psi, x.fun));
              auto* arr = std::get_if<DomType::Arrow>(&fun_ty->v);
              if (!arr) fail(Errc::NotAFunction, "application head during translation");
              ITermPtr e1 = tr_dom_term(g, psi, x.fun, fun_ty);
              ITermPtr e2 = tr_dom_term(g, psi, x.arg, arr->dom);
              ITermPtr ea = tr_dom_type(g, psi, arr->dom);
              ITermPtr eb = tr_dom_type(g, psi, arr->cod);
              return it_lam(it_const(
                  "arrow-e", {ishift(ea, IZone::Ordinary, 0, 1), ishift(eb, IZone::Ordinary, 0, 1),
                              app_beta(ishift(e1, IZone::Ordinary, 0, 1), it_ovar(0)),
                              app_beta(ishift(e2, IZone::Ordinary, 0, 1), it_ovar(0))}));
            },
            [&](const DomTerm::Const& x) -> ITermPtr {
              if (x.name == DomConst::App) {
                note("dom/const-app");
                // fn u. arrow-i (fn m. arrow-i (fn n. app m n))
                return it_lam(it_const(
                    "arrow-i",
                    {it_const("tm"), it_const("arrow", {it_const("tm"), it_const("tm")}),
                     it_lam(it_const(
                         "arrow-i",
                         {it_const("tm"), it_const("tm"),
                          it_lam(it_const("app", {it_ovar(1), it_ovar(0)}))}))}));
              }
              note("dom/const-lam");
              // fn u. arrow-i (fn f. lam (fn w. arrow-e f w))
              return it_lam(it_const(
                  "arrow-i",
                  {it_const("arrow", {it_const("tm"), it_const("tm")}), it_const("tm"),
                   it_lam(it_const(
                       "lam", {it_lam(it_const("arrow-e", {it_const("tm"), it_const("tm"),
                                                           it_ovar(1), it_ovar(0)}))}))}));
            },
            [&](const DomTerm::Unbox& x) -> ITermPtr {
              note("dom/unbox");
              ITermPtr e1;
              ContextualType ct;
              if (auto rc = chk_.reconstruct_unbox(g, psi, x)) {
                ct = *rc;
                e1 = tr_comp(g, x.comp, ct_box(ct));
              } else {
                auto [e, t_ty] = tr_comp_infer(g, x.comp);
                CompTypePtr nty = chk_.normalize_comp_ty(g, t_ty);
                auto* bt = std::get_if<CompType::BoxT>(&nty->v);
                if (!bt) fail(Errc::BoxExpected, "unbox during translation");
                e1 = e;
                ct = bt->ct;
              }
              ITermPtr e2 = tr_dom_subst(g, psi, x.subst, ct.ctx);
              if (auto* bx = std::get_if<ITerm::Box>(&e1->v)) {
                return it_lam(app_beta(ishift(bx->body, IZone::Ordinary, 0, 1),
                                       app_beta(ishift(e2, IZone::Ordinary, 0, 1),
                                                it_ovar(0))));
              }
              return it_letbox(
                  e1, it_lam(it_app(it_cvar(0),
                                    app_beta(ishift(ishift(e2, IZone::Crisp, 0, 1),
                                                    IZone::Ordinary, 0, 1),
                                             it_ovar(0)))));
            }},
        m->v);
  }

  // dep mode
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) -> ITermPtr {
            note("dom/var " + std::to_string(x.index));
            CtxDecomp d = decompose(*this, g, psi, x.index + 1);
            ITermPtr phi0 = d.objs[x.index + 1];
            ITermPtr a0 = d.types[x.index];
            ITermPtr v = d_v(phi0, a0);
            if (x.index == 0) return v;
            ITermPtr chain = it_ovar(0);
            for (std::size_t i = 0; i < x.index; i++)
              chain = it_app(d_p(d.objs[i + 1], d.types[i]), chain);
            ITermPtr pk = x.index == 0 ? idsub() : it_lam(chain);
            ITermPtr vty = d_tysub(d_comp(phi0, a0), phi0, a0, d_p(phi0, a0));
            return d_tmsub(d.objs[0], d_comp(phi0, a0), vty, v, pk);
          },
          [&](const DomTerm::Lam& x) -> ITermPtr {
            note("dom/lam");
            DomTypePtr want = chk_.normalize_dom_ty(g, a);
            auto* pi = std::get_if<DomType::Pi>(&want->v);
            if (!pi) fail(Errc::TypeMismatch, "lambda at a non-Pi type");
            ITermPtr ea = tr_dom_type(g, psi, pi->dom);
            ITermPtr eb = tr_dom_type(g, dc_snoc(psi, pi->dom), pi->cod);
            ITermPtr e = tr_dom_term(g, dc_snoc(psi, pi->dom), x.body, pi->cod);
            return it_const("Lam", {tr_dom_ctx(g, psi), ea, eb, e});
          },
          [&](const DomTerm::App& x) -> ITermPtr {
            note("dom/app");
            DomTypePtr fun_ty = chk_.normalize_dom_ty(g, chk_.infer_dom_term(g, psi, x.fun));
            auto* pi = std::get_if<DomType::Pi>(&fun_ty->v);
            if (!pi) fail(Errc::NotAFunction, "application head during translation");
            ITermPtr e1 = tr_dom_term(g, psi, x.fun, fun_ty);
            ITermPtr e2 = tr_dom_term(g, psi, x.arg, pi->dom);
            ITermPtr ea = tr_dom_type(g, psi, pi->dom);
            ITermPtr eb = tr_dom_type(g, dc_snoc(psi, pi->dom), pi->cod);
            return it_const("App", {tr_dom_ctx(g, psi), ea, eb, e1, e2});
          },
          [&](const DomTerm::Const& x) -> ITermPtr {
            ITermPtr phi = tr_dom_ctx(g, psi);
            switch (x.name) {
              case DomConst::O:
                note("dom/const-o");
                return it_const("o", {phi});
              case DomConst::Arr: {
                note("dom/const-arr");
                ITermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                ITermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                return it_const("arr", {phi, ea, eb});
              }
              case DomConst::DLam: {
                note("dom/const-lam");
                ITermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                ITermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                DomTypePtr fn_ty =
                    dt_pi(dt_trm(x.args[0]), dt_trm(shift_dom(x.args[1], 0, 1)));
                ITermPtr eprime = tr_dom_term(g, psi, x.args[2], fn_ty);
                // m-slot: App(e'{p}, v) over Phi.trm[a]
                ITermPtr ta = d_trm_at(phi, ea);
                ITermPtr ext_ctx = d_comp(phi, ta);
                ITermPtr p = d_p(phi, ta);
                ITermPtr pi_ty = it_const("Pi", {phi, ta,
                                                 d_trm_at(ext_ctx,
                                                          d_tmsub(ext_ctx, phi, d_typ(phi),
                                                                  eb, p))});
                ITermPtr eprime_p = d_tmsub(ext_ctx, phi, pi_ty, eprime, p);
                ITermPtr ta_p = d_tysub(ext_ctx, phi, ta, p);
                ITermPtr tb_q = d_trm_at(d_comp(ext_ctx, ta_p),
                                         d_tmsub(d_comp(ext_ctx, ta_p), ext_ctx,
                                                 d_typ(ext_ctx),
                                                 d_tmsub(ext_ctx, phi, d_typ(phi), eb, p),
                                                 d_p(ext_ctx, ta_p)));
                ITermPtr msub = it_const("App", {ext_ctx, ta_p, tb_q, eprime_p,
                                                 d_v(phi, ta)});
                return it_const("lam", {phi, ea, eb, msub});
              }
              case DomConst::DApp: {
                note("dom/const-app");
                ITermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                ITermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                ITermPtr em = tr_dom_term(g, psi, x.args[2],
                                          dt_trm(dm_const(DomConst::Arr, {x.args[0], x.args[1]})));
                ITermPtr en = tr_dom_term(g, psi, x.args[3], dt_trm(x.args[0]));
                return it_const("app", {phi, ea, eb, em, en});
              }
              default:
                fail(Errc::UnknownConstant, "constant not available in dep mode");
            }
          },
          [&](const DomTerm::Unbox& x) -> ITermPtr {
            note("dom/unbox");
            ITermPtr e1;
            ContextualType ct;
            if (auto rc = chk_.reconstruct_unbox(g, psi, x)) {
              ct = *rc;
              e1 = tr_comp(g, x.comp, ct_box(ct));
            } else {
              auto [e, t_ty] = tr_comp_infer(g, x.comp);
              CompTypePtr nty = chk_.normalize_comp_ty(g, t_ty);
              auto* bt = std::get_if<CompType::BoxT>(&nty->v);
              if (!bt) fail(Errc::BoxExpected, "unbox during translation");
              e1 = e;
              ct = bt->ct;
            }
            ITermPtr e2 = tr_dom_subst(g, psi, x.subst, ct.ctx);
            ITermPtr phi = tr_dom_ctx(g, ct.ctx);
            ITermPtr aterm = tr_dom_type(g, ct.ctx, ct.type);
            auto up = [](const ITermPtr& t) { return ishift(t, IZone::Crisp, 0, 1); };
            return letbox_or_beta(e1, d_tmsub(up(tr_dom_ctx(g, psi)), up(phi), up(aterm),
                                              it_cvar(0), up(e2)));
          }},
      m->v);
}

// ---------------------------------------------------------------------------
// Computation level

ITypePtr Translator::translate_comp_type(const CompCtx& g, const CompTypePtr& tau) const {
  return std::visit(
      overloaded{
          [&](const CompType::BoxT& x) -> ITypePtr {
            note("comp-type/box");
            ITermPtr ectx = tr_dom_ctx(g, x.ct.ctx);
            if (st_.mode == Mode::Simple) {
              ITermPtr ea = tr_dom_type(g, x.ct.ctx, x.ct.type);
              ITypePtr dom = ity_const("El", {ectx});
              ITypePtr cod = ity_const("El", {ea});
              if (x.ct.kind == CtxKind::Variable) return ity_box(ity_vfn(dom, cod));
              return ity_box(ity_fn(dom, ishift(cod, IZone::Ordinary, 0, 1)));
            }
            ITermPtr ea = tr_dom_type(g, x.ct.ctx, x.ct.type);
            const char* name = x.ct.kind == CtxKind::Variable ? "TmV" : "Tm";
            return ity_box(ity_const(name, {ectx, ea}));
          },
          [&](const CompType::Fn& x) -> ITypePtr {
            note("comp-type/fn");
            ITypePtr dom = translate_ann_type(g, x.param);
            ITypePtr cod = translate_comp_type(g.extended(x.param), x.result);
            return ity_cfn(dom, cod);
          }},
      tau->v);
}

ITypePtr Translator::translate_ann_type(const CompCtx& g, const AnnType& a) const {
  if (a.is_ctx()) {
    note("comp-type/ctx");
    return st_.mode == Mode::Simple ? ity_const("Obj") : ity_const("Ctx");
  }
  return translate_comp_type(g, a.type);
}

ICtx Translator::translate_comp_ctx(const CompCtx& g) const {
  ICtx out;
  CompCtx prefix;
  for (auto& e : g.entries) {
    out.push_back(translate_ann_type(prefix, e));
    prefix.entries.push_back(e);
  }
  return out;
}

std::pair<ITermPtr, CompTypePtr> Translator::tr_comp_infer(const CompCtx& g,
                                                           const CompTermPtr& t) const {
  return std::visit(
      overloaded{
          [&](const CompTerm::Var& x) -> std::pair<ITermPtr, CompTypePtr> {
            note("comp/var");
            const AnnType& a = g.lookup(x.index);
            if (a.is_ctx()) fail(Errc::AnnKindMismatch, "context variable used as a term");
            return {it_cvar(x.index),
                    shift_comp(a.type, 0, static_cast<std::int64_t>(x.index) + 1)};
          },
          [&](const CompTerm::Ref& x) -> std::pair<ITermPtr, CompTypePtr> {
            note("comp/ref " + x.name);
            if (!st_.decls) fail(Errc::ScopeError, "reference without a declaration table");
            auto it = st_.decls->find(x.name);
            if (it == st_.decls->end()) fail(Errc::ScopeError, "unknown declaration " + x.name);
            auto* body = std::get_if<CompTermPtr>(&it->second.body);
            if (!body || it->second.type.is_ctx())
              fail(Errc::AnnKindMismatch, "ctx declaration used as a term");
            CompCtx empty;
            return {tr_comp(empty, *body, it->second.type.type), it->second.type.type};
          },
          [&](const CompTerm::App& x) -> std::pair<ITermPtr, CompTypePtr> {
            note("comp/app");
            auto [e1, fun_ty] = tr_comp_infer(g, x.fun);
            CompTypePtr nty = chk_.normalize_comp_ty(g, fun_ty);
            auto* fn = std::get_if<CompType::Fn>(&nty->v);
            if (!fn) fail(Errc::NotAFunction, "application head during translation");
            if (fn->param.is_ctx()) {
              DomCtxPtr ctx;
              if (auto* c = std::get_if<DomCtxPtr>(&x.arg)) ctx = *c;
              else {
                auto& tmarg = std::get<CompTermPtr>(x.arg);
                auto* v = std::get_if<CompTerm::Var>(&tmarg->v);
                if (!v) fail(Errc::AnnKindMismatch, "expected a context argument");
                ctx = dc_var(v->index);
              }
              ITermPtr e2 = tr_dom_ctx(g, ctx);
              return {capp_beta(e1, e2), subst_comp(fn->result, CompArg(ctx))};
            }
            auto* tmarg = std::get_if<CompTermPtr>(&x.arg);
            if (!tmarg) fail(Errc::AnnKindMismatch, "expected a term argument");
            ITermPtr e2 = tr_comp(g, *tmarg, fn->param.type);
            return {capp_beta(e1, e2), subst_comp(fn->result, CompArg(*tmarg))};
          },
          [&](const CompTerm::Rec& x) -> std::pair<ITermPtr, CompTypePtr> {
            note("comp/rec");
            CompTypePtr ty = chk_.check_recursor(g, x);
            return {tr_rec(g, x), ty};
          },
          [&](const auto&) -> std::pair<ITermPtr, CompTypePtr> {
            fail(Errc::CannotInfer, "translation requires an annotation here");
          }},
      t->v);
}

ITermPtr Translator::tr_comp(const CompCtx& g, const CompTermPtr& t,
                             const CompTypePtr& tau) const {
  if (auto* f = std::get_if<CompTerm::Fn>(&t->v)) {
    note("comp/fn");
    CompTypePtr nty = chk_.normalize_comp_ty(g, tau);
    auto* fn = std::get_if<CompType::Fn>(&nty->v);
    if (!fn) fail(Errc::TypeMismatch, "fn at a non-function type during translation");
    return it_clam(tr_comp(g.extended(fn->param), f->body, fn->result));
  }
  if (auto* b = std::get_if<CompTerm::BoxC>(&t->v)) {
    note("comp/box");
    CompTypePtr nty = chk_.normalize_comp_ty(g, tau);
    auto* bt = std::get_if<CompType::BoxT>(&nty->v);
    if (!bt) fail(Errc::TypeMismatch, "box at a non-box type during translation");
    return it_box(tr_dom_term(g, bt->ct.ctx, b->body, bt->ct.type));
  }
  auto [e, got] = tr_comp_infer(g, t);
  return e;
}

// ---------------------------------------------------------------------------
// Recursor

ITermPtr Translator::tr_rec(const CompCtx& g, const CompTerm::Rec& r) const {
  // motive tail: the fn-structure was validated by check_recursor
  auto* f1 = std::get_if<CompType::Fn>(&r.motive->v);
  auto* f2 = std::get_if<CompType::Fn>(&f1->result->v);
  const RecBranch* b2 = nullptr;
  const RecBranch* b5 = nullptr;
  const RecBranch* b1 = nullptr;
  const RecBranch* b3 = nullptr;
  const RecBranch* b7 = nullptr;
  for (auto& b : r.branches) {
    if (b.binders == 1) b1 = &b;
    if (b.binders == 2) b2 = &b;
    if (b.binders == 3) b3 = &b;
    if (b.binders == 5) b5 = &b;
    if (b.binders == 7) b7 = &b;
  }

  auto clam_n = [](std::size_t n, ITermPtr body) {
    for (std::size_t i = 0; i < n; i++) body = it_clam(std::move(body));
    return body;
  };

  if (st_.mode == Mode::Simple) {
    CompTypePtr tau = f2->result;
    // motive under (psi :: Obj, y :: Box(El psi -> El tm))
    CompCtx gm = g.extended(ann_ctx()).extended(ann(f2->param.type));
    ITypePtr motive = translate_comp_type(gm, tau);

    // variable branch: psi, p
    CompCtx gv = g.extended(ann_ctx())
                     .extended(ann(ct_box(CtxKind::Variable, dc_var(0), dt_tm())));
    ITermPtr ev = clam_n(2, tr_comp(gv, b2->body,
                                    open_comp(tau, {CompArg(cm_var(0)), CompArg(dc_var(1))}, 2)));
    // app branch: psi, m, n, f_m, f_n
    CompCtx ga = g.extended(ann_ctx())
                     .extended(ann(ct_box(CtxKind::Term, dc_var(0), dt_tm())))
                     .extended(ann(ct_box(CtxKind::Term, dc_var(1), dt_tm())))
                     .extended(ann(open_comp(tau, {CompArg(cm_var(1)), CompArg(dc_var(2))}, 3)))
                     .extended(ann(open_comp(tau, {CompArg(cm_var(1)), CompArg(dc_var(3))}, 4)));
    CompTermPtr app_val =
        cm_box({}, dm_app(dm_app(dm_const(DomConst::App), dm_unbox(cm_var(3), ds_id())),
                          dm_unbox(cm_var(2), ds_id())));
    ITermPtr ea = clam_n(
        5, tr_comp(ga, b5->body, open_comp(tau, {CompArg(app_val), CompArg(dc_var(4))}, 5)));
    // lam branch: psi, m, f_m
    CompCtx gl =
        g.extended(ann_ctx())
            .extended(ann(ct_box(CtxKind::Term, dc_snoc(dc_var(0), dt_tm()), dt_tm())))
            .extended(ann(open_comp(tau, {CompArg(cm_var(0)),
                                          CompArg(dc_snoc(dc_var(1), dt_tm()))},
                                    2)));
    CompTermPtr lam_val =
        cm_box({}, dm_app(dm_const(DomConst::Lam), dm_lam(dm_unbox(cm_var(1), ds_id()))));
    ITermPtr el = clam_n(
        3, tr_comp(gl, b3->body, open_comp(tau, {CompArg(lam_val), CompArg(dc_var(2))}, 3)));

    ITermPtr ec = tr_dom_ctx(g, r.ctx_arg);
    ITermPtr es = tr_comp(g, r.scrut, ct_box(CtxKind::Term, r.ctx_arg, dt_tm()));
    return it_rec(IRecKind::SimpleTm, motive, {ev, ea, el, ec, es});
  }

  if (!r.scrut_ty) {
    // ty recursor
    CompTypePtr tau = f2->result;
    CompCtx gm = g.extended(ann_ctx()).extended(ann(f2->param.type));
    ITypePtr motive = translate_comp_type(gm, tau);

    CompCtx go = g.extended(ann_ctx());
    CompTermPtr o_val = cm_box({}, dm_const(DomConst::O));
    ITermPtr eo = clam_n(
        1, tr_comp(go, b1->body, open_comp(tau, {CompArg(o_val), CompArg(dc_var(0))}, 1)));

    CompCtx ga = g.extended(ann_ctx())
                     .extended(ann(ct_box(CtxKind::Term, dc_var(0), dt_ty())))
                     .extended(ann(ct_box(CtxKind::Term, dc_var(1), dt_ty())))
                     .extended(ann(open_comp(tau, {CompArg(cm_var(1)), CompArg(dc_var(2))}, 3)))
                     .extended(ann(open_comp(tau, {CompArg(cm_var(1)), CompArg(dc_var(3))}, 4)));
    CompTermPtr arr_val =
        cm_box({}, dm_const(DomConst::Arr, {dm_unbox(cm_var(3), ds_id()),
                                            dm_unbox(cm_var(2), ds_id())}));
    ITermPtr earr = clam_n(
        5, tr_comp(ga, b5->body, open_comp(tau, {CompArg(arr_val), CompArg(dc_var(4))}, 5)));

    ITermPtr ec = tr_dom_ctx(g, r.ctx_arg);
    ITermPtr es = tr_comp(g, r.scrut, ct_box(CtxKind::Term, r.ctx_arg, dt_ty()));
    return it_rec(IRecKind::DepTy, motive, {eo, earr, ec, es});
  }

  // trm recursor
  auto* f3 = std::get_if<CompType::Fn>(&f2->result->v);
  CompTypePtr tau = f3->result;
  CompTypePtr closed_ty = ct_box(CtxKind::Term, dc_empty(), dt_ty());
  CompCtx gm = g.extended(ann_ctx()).extended(ann(closed_ty)).extended(ann(f3->param.type));
  ITypePtr motive = translate_comp_type(gm, tau);

  auto unbox_empty = [](std::size_t i) { return dm_unbox(cm_var(i), ds_empty()); };

  // variable branch: psi, a, t
  CompCtx gv = g.extended(ann_ctx())
                   .extended(ann(closed_ty))
                   .extended(ann(ct_box(CtxKind::Variable, dc_var(1), dt_trm(unbox_empty(0)))));
  ITermPtr ev = clam_n(
      3, tr_comp(gv, b3->body,
                 open_comp(tau, {CompArg(cm_var(0)), CompArg(cm_var(1)), CompArg(dc_var(2))},
                           3)));
  // lam branch: psi, a, b, m, f_m
  CompCtx gl =
      g.extended(ann_ctx())
          .extended(ann(closed_ty))
          .extended(ann(closed_ty))
          .extended(ann(ct_box(CtxKind::Term, dc_snoc(dc_var(2), dt_trm(unbox_empty(1))),
                               dt_trm(unbox_empty(0)))))
          .extended(ann(open_comp(tau,
                                  {CompArg(cm_var(0)), CompArg(cm_var(1)),
                                   CompArg(dc_snoc(dc_var(3), dt_trm(unbox_empty(2))))},
                                  4)));
  CompTermPtr arr_ab =
      cm_box({}, dm_const(DomConst::Arr, {unbox_empty(3), unbox_empty(2)}));
  CompTermPtr lam_val =
      cm_box({}, dm_const(DomConst::DLam, {unbox_empty(3), unbox_empty(2),
                                           dm_lam(dm_unbox(cm_var(1), ds_id()))}));
  ITermPtr elam = clam_n(
      5, tr_comp(gl, b5->body,
                 open_comp(tau, {CompArg(lam_val), CompArg(arr_ab), CompArg(dc_var(4))}, 5)));
  // app branch: psi, a, b, m, n, f_m, f_n
  CompCtx ga =
      g.extended(ann_ctx())
          .extended(ann(closed_ty))
          .extended(ann(closed_ty))
          .extended(ann(ct_box(CtxKind::Term, dc_var(2),
                               dt_trm(dm_const(DomConst::Arr,
                                               {unbox_empty(1), unbox_empty(0)})))))
          .extended(ann(ct_box(CtxKind::Term, dc_var(3), dt_trm(unbox_empty(2)))))
          .extended(ann(open_comp(
              tau,
              {CompArg(cm_var(1)),
               CompArg(cm_box({}, dm_const(DomConst::Arr, {unbox_empty(3), unbox_empty(2)}))),
               CompArg(dc_var(4))},
              5)))
          .extended(ann(open_comp(tau, {CompArg(cm_var(1)), CompArg(cm_var(4)),
                                        CompArg(dc_var(5))},
                                  6)));
  CompTermPtr app_val =
      cm_box({}, dm_const(DomConst::DApp, {unbox_empty(5), unbox_empty(4),
                                           dm_unbox(cm_var(3), ds_id()),
                                           dm_unbox(cm_var(2), ds_id())}));
  ITermPtr eapp = clam_n(
      7, tr_comp(ga, b7->body,
                 open_comp(tau, {CompArg(app_val), CompArg(cm_var(4)), CompArg(dc_var(6))},
                           7)));

  ITermPtr ec = tr_dom_ctx(g, r.ctx_arg);
  ITermPtr et = tr_comp(g, r.scrut_ty, closed_ty);
  ITermPtr es = tr_comp(
      g, r.scrut, ct_box(CtxKind::Term, r.ctx_arg, dt_trm(dm_unbox(r.scrut_ty, ds_empty()))));
  return it_rec(IRecKind::DepTrm, motive, {ev, elam, eapp, ec, et, es});
}

// ---------------------------------------------------------------------------
// Entry point

TranslationOutput Translator::translate(const CompCtx& g, const CompTermPtr& t,
                                        const CompTypePtr& tau) const {
  TranslationOutput out;
  trace_ = &out.trace;
  try {
    out.crisp_ctx = translate_comp_ctx(g);
    if (tau) {
      chk_.check_comp(g, t, tau);
      out.term = tr_comp(g, t, tau);
      out.type = translate_comp_type(g, tau);
    } else {
      auto [e, ty] = tr_comp_infer(g, t);
      out.term = e;
      out.type = translate_comp_type(g, ty);
    }
  } catch (...) {
    trace_ = nullptr;
    throw;
  }
  trace_ = nullptr;
  return out;
}

}  // namespace cocon
