#include "cocon/syntax.hpp"

#include <algorithm>

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t shifted_index(std::size_t i, std::size_t cutoff, std::int64_t amount) {
  if (i < cutoff) return i;
  std::int64_t j = static_cast<std::int64_t>(i) + amount;
  if (j < 0) fail(Errc::NegativeIndex, "index would become negative under shift");
  return static_cast<std::size_t>(j);
}

}  // namespace

std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::NegativeIndex: return "NegativeIndex";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::ScopeError: return "ScopeError";
    case Errc::UnboundCtxVar: return "UnboundCtxVar";
    case Errc::NotCtxKind: return "NotCtxKind";
    case Errc::IllFormedType: return "IllFormedType";
    case Errc::TypeMismatch: return "TypeMismatch";
    case Errc::NotAFunction: return "NotAFunction";
    case Errc::BoxExpected: return "BoxExpected";
    case Errc::WeakenShapeMismatch: return "WeakenShapeMismatch";
    case Errc::NotAVariable: return "NotAVariable";
    case Errc::AnnKindMismatch: return "AnnKindMismatch";
    case Errc::BranchCountMismatch: return "BranchCountMismatch";
    case Errc::NotClosed: return "NotClosed";
    case Errc::CannotInfer: return "CannotInfer";
    case Errc::FuelExhausted: return "FuelExhausted";
    case Errc::OrdinaryVarUnderBox: return "OrdinaryVarUnderBox";
    case Errc::OpenCrispArgument: return "OpenCrispArgument";
    case Errc::UnknownConstant: return "UnknownConstant";
    case Errc::VariableBehindLock: return "VariableBehindLock";
    case Errc::LockInResidue: return "LockInResidue";
    case Errc::RecursorPresent: return "RecursorPresent";
    case Errc::UnknownObject: return "UnknownObject";
    case Errc::NoTerminal: return "NoTerminal";
    case Errc::LawViolation: return "LawViolation";
    case Errc::UsageError: return "UsageError";
    case Errc::IoError: return "IoError";
  }
  return "Error";
}

int dom_const_arity(Mode mode, DomConst c) {
  switch (c) {
    case DomConst::Lam:
    case DomConst::App:
      return mode == Mode::Simple ? 0 : -1;
    case DomConst::O: return mode == Mode::Dep ? 0 : -1;
    case DomConst::Arr: return mode == Mode::Dep ? 2 : -1;
    case DomConst::DLam: return mode == Mode::Dep ? 3 : -1;
    case DomConst::DApp: return mode == Mode::Dep ? 4 : -1;
  }
  return -1;
}

std::string_view dom_const_name(DomConst c) {
  switch (c) {
    case DomConst::Lam: return "lam";
    case DomConst::App: return "app";
    case DomConst::O: return "o";
    case DomConst::Arr: return "arr";
    case DomConst::DLam: return "lam";
    case DomConst::DApp: return "app";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Constructors

DomTypePtr dt_tm() { return std::make_shared<DomType>(DomType{DomType::Tm{}}); }
DomTypePtr dt_arrow(DomTypePtr a, DomTypePtr b) {
  return std::make_shared<DomType>(DomType{DomType::Arrow{std::move(a), std::move(b)}});
}
DomTypePtr dt_ty() { return std::make_shared<DomType>(DomType{DomType::Ty{}}); }
DomTypePtr dt_trm(DomTermPtr m) {
  return std::make_shared<DomType>(DomType{DomType::Trm{std::move(m)}});
}
DomTypePtr dt_pi(DomTypePtr a, DomTypePtr b) {
  return std::make_shared<DomType>(DomType{DomType::Pi{std::move(a), std::move(b)}});
}

DomTermPtr dm_var(std::size_t i) {
  return std::make_shared<DomTerm>(DomTerm{DomTerm::Var{i}});
}
DomTermPtr dm_lam(DomTermPtr body) {
  return std::make_shared<DomTerm>(DomTerm{DomTerm::Lam{std::move(body)}});
}
DomTermPtr dm_app(DomTermPtr f, DomTermPtr a) {
  return std::make_shared<DomTerm>(DomTerm{DomTerm::App{std::move(f), std::move(a)}});
}
DomTermPtr dm_const(DomConst c, std::vector<DomTermPtr> args) {
  return std::make_shared<DomTerm>(DomTerm{DomTerm::Const{c, std::move(args)}});
}
DomTermPtr dm_unbox(CompTermPtr t, DomSubstPtr s) {
  return std::make_shared<DomTerm>(DomTerm{DomTerm::Unbox{std::move(t), std::move(s)}});
}

DomCtxPtr dc_empty() { return std::make_shared<DomCtx>(DomCtx{DomCtx::Empty{}}); }
DomCtxPtr dc_var(std::size_t i) {
  return std::make_shared<DomCtx>(DomCtx{DomCtx::CtxVar{i}});
}
DomCtxPtr dc_snoc(DomCtxPtr prefix, DomTypePtr type) {
  return std::make_shared<DomCtx>(DomCtx{DomCtx::Snoc{std::move(prefix), std::move(type)}});
}

DomSubstPtr ds_empty() { return std::make_shared<DomSubst>(DomSubst{DomSubst::Empty{}}); }
DomSubstPtr ds_weaken(std::size_t k) {
  return std::make_shared<DomSubst>(DomSubst{DomSubst::Weaken{k}});
}
DomSubstPtr ds_snoc(DomSubstPtr prefix, DomTermPtr m) {
  return std::make_shared<DomSubst>(DomSubst{DomSubst::Snoc{std::move(prefix), std::move(m)}});
}
DomSubstPtr ds_id() { return ds_weaken(0); }

CompTypePtr ct_box(ContextualType t) {
  return std::make_shared<CompType>(CompType{CompType::BoxT{std::move(t)}});
}
CompTypePtr ct_box(CtxKind k, DomCtxPtr ctx, DomTypePtr ty) {
  return ct_box(ContextualType{k, std::move(ctx), std::move(ty)});
}
CompTypePtr ct_fn(AnnType param, CompTypePtr result) {
  return std::make_shared<CompType>(CompType{CompType::Fn{std::move(param), std::move(result)}});
}
AnnType ann_ctx() { return AnnType{nullptr}; }
AnnType ann(CompTypePtr t) { return AnnType{std::move(t)}; }

CompTermPtr cm_var(std::size_t i) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::Var{i}});
}
CompTermPtr cm_ref(std::string name) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::Ref{std::move(name)}});
}
CompTermPtr cm_box(std::vector<std::string> names, DomTermPtr body) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::BoxC{std::move(names), std::move(body)}});
}
CompTermPtr cm_fn(CompTermPtr body) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::Fn{std::move(body)}});
}
CompTermPtr cm_app(CompTermPtr f, CompArg a) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::App{std::move(f), std::move(a)}});
}
CompTermPtr cm_rec(CompTypePtr motive, std::vector<RecBranch> branches,
                   DomCtxPtr ctx_arg, CompTermPtr scrut_ty, CompTermPtr scrut) {
  return std::make_shared<CompTerm>(CompTerm{CompTerm::Rec{
      std::move(motive), std::move(branches), std::move(ctx_arg),
      std::move(scrut_ty), std::move(scrut)}});
}

// ---------------------------------------------------------------------------
// Context inspection

std::size_t dom_ctx_length(const DomCtxPtr& c) {
  std::size_t n = 0;
  const DomCtx* cur = c.get();
  while (auto* s = std::get_if<DomCtx::Snoc>(&cur->v)) {
    n++;
    cur = s->prefix.get();
  }
  return n;
}

std::optional<std::size_t> dom_ctx_head_var(const DomCtxPtr& c) {
  const DomCtx* cur = c.get();
  while (auto* s = std::get_if<DomCtx::Snoc>(&cur->v)) cur = s->prefix.get();
  if (auto* v = std::get_if<DomCtx::CtxVar>(&cur->v)) return v->comp_index;
  return std::nullopt;
}

const DomType* dom_ctx_entry(const DomCtxPtr& c, std::size_t index) {
  const DomCtx* cur = c.get();
  std::size_t skip = index;
  while (auto* s = std::get_if<DomCtx::Snoc>(&cur->v)) {
    if (skip == 0) return s->type.get();
    skip--;
    cur = s->prefix.get();
  }
  return nullptr;
}

DomCtxPtr dom_ctx_prefix(const DomCtxPtr& c, std::size_t drop) {
  DomCtxPtr cur = c;
  while (drop > 0) {
    auto* s = std::get_if<DomCtx::Snoc>(&cur->v);
    if (!s) fail(Errc::WeakenShapeMismatch, "context too short for weakening");
    cur = s->prefix;
    drop--;
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Equality

namespace {

bool eq_names(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return a == b;
}

bool eq(const DomTypePtr&, const DomTypePtr&, bool names);
bool eq(const DomTermPtr&, const DomTermPtr&, bool names);
bool eq(const DomCtxPtr&, const DomCtxPtr&, bool names);
bool eq(const DomSubstPtr&, const DomSubstPtr&, bool names);
bool eq(const CompTypePtr&, const CompTypePtr&, bool names);
bool eq(const CompTermPtr&, const CompTermPtr&, bool names);

bool eq(const DomTypePtr& a, const DomTypePtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const DomType::Tm&) { return true; },
          [&](const DomType::Arrow& x) {
            auto& y = std::get<DomType::Arrow>(b->v);
            return eq(x.dom, y.dom, names) && eq(x.cod, y.cod, names);
          },
          [&](const DomType::Ty&) { return true; },
          [&](const DomType::Trm& x) {
            return eq(x.body, std::get<DomType::Trm>(b->v).body, names);
          },
          [&](const DomType::Pi& x) {
            auto& y = std::get<DomType::Pi>(b->v);
            return eq(x.dom, y.dom, names) && eq(x.cod, y.cod, names);
          }},
      a->v);
}

bool eq(const DomTermPtr& a, const DomTermPtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) {
            return x.index == std::get<DomTerm::Var>(b->v).index;
          },
          [&](const DomTerm::Lam& x) {
            return eq(x.body, std::get<DomTerm::Lam>(b->v).body, names);
          },
          [&](const DomTerm::App& x) {
            auto& y = std::get<DomTerm::App>(b->v);
            return eq(x.fun, y.fun, names) && eq(x.arg, y.arg, names);
          },
          [&](const DomTerm::Const& x) {
            auto& y = std::get<DomTerm::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!eq(x.args[i], y.args[i], names)) return false;
            return true;
          },
          [&](const DomTerm::Unbox& x) {
            auto& y = std::get<DomTerm::Unbox>(b->v);
            return eq(x.comp, y.comp, names) && eq(x.subst, y.subst, names);
          }},
      a->v);
}

bool eq(const DomCtxPtr& a, const DomCtxPtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const DomCtx::Empty&) { return true; },
          [&](const DomCtx::CtxVar& x) {
            return x.comp_index == std::get<DomCtx::CtxVar>(b->v).comp_index;
          },
          [&](const DomCtx::Snoc& x) {
            auto& y = std::get<DomCtx::Snoc>(b->v);
            return eq(x.prefix, y.prefix, names) && eq(x.type, y.type, names);
          }},
      a->v);
}

bool eq(const DomSubstPtr& a, const DomSubstPtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const DomSubst::Empty&) { return true; },
          [&](const DomSubst::Weaken& x) {
            return x.count == std::get<DomSubst::Weaken>(b->v).count;
          },
          [&](const DomSubst::Snoc& x) {
            auto& y = std::get<DomSubst::Snoc>(b->v);
            return eq(x.prefix, y.prefix, names) && eq(x.term, y.term, names);
          }},
      a->v);
}

bool eq_ann(const AnnType& a, const AnnType& b, bool names) {
  if (a.is_ctx() != b.is_ctx()) return false;
  if (a.is_ctx()) return true;
  return eq(a.type, b.type, names);
}

bool eq(const CompTypePtr& a, const CompTypePtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const CompType::BoxT& x) {
            auto& y = std::get<CompType::BoxT>(b->v);
            return x.ct.kind == y.ct.kind && eq(x.ct.ctx, y.ct.ctx, names) &&
                   eq(x.ct.type, y.ct.type, names);
          },
          [&](const CompType::Fn& x) {
            auto& y = std::get<CompType::Fn>(b->v);
            return eq_ann(x.param, y.param, names) && eq(x.result, y.result, names);
          }},
      a->v);
}

bool eq(const CompTermPtr& a, const CompTermPtr& b, bool names) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const CompTerm::Var& x) {
            return x.index == std::get<CompTerm::Var>(b->v).index;
          },
          [&](const CompTerm::Ref& x) {
            return x.name == std::get<CompTerm::Ref>(b->v).name;
          },
          [&](const CompTerm::BoxC& x) {
            auto& y = std::get<CompTerm::BoxC>(b->v);
            if (names && !eq_names(x.names, y.names)) return false;
            return eq(x.body, y.body, names);
          },
          [&](const CompTerm::Fn& x) {
            return eq(x.body, std::get<CompTerm::Fn>(b->v).body, names);
          },
          [&](const CompTerm::App& x) {
            auto& y = std::get<CompTerm::App>(b->v);
            if (!eq(x.fun, y.fun, names)) return false;
            if (x.arg.index() != y.arg.index()) return false;
            if (auto* t = std::get_if<CompTermPtr>(&x.arg))
              return eq(*t, std::get<CompTermPtr>(y.arg), names);
            return eq(std::get<DomCtxPtr>(x.arg), std::get<DomCtxPtr>(y.arg), names);
          },
          [&](const CompTerm::Rec& x) {
            auto& y = std::get<CompTerm::Rec>(b->v);
            if (!eq(x.motive, y.motive, names)) return false;
            if (x.branches.size() != y.branches.size()) return false;
            for (std::size_t i = 0; i < x.branches.size(); i++) {
              if (x.branches[i].binders != y.branches[i].binders) return false;
              if (!eq(x.branches[i].body, y.branches[i].body, names)) return false;
            }
            if (!eq(x.ctx_arg, y.ctx_arg, names)) return false;
            if ((x.scrut_ty == nullptr) != (y.scrut_ty == nullptr)) return false;
            if (x.scrut_ty && !eq(x.scrut_ty, y.scrut_ty, names)) return false;
            return eq(x.scrut, y.scrut, names);
          }},
      a->v);
}

}  // namespace

bool equal(const DomTypePtr& a, const DomTypePtr& b) { return eq(a, b, true); }
bool equal(const DomTermPtr& a, const DomTermPtr& b) { return eq(a, b, true); }
bool equal(const DomCtxPtr& a, const DomCtxPtr& b) { return eq(a, b, true); }
bool equal(const DomSubstPtr& a, const DomSubstPtr& b) { return eq(a, b, true); }
bool equal(const CompTypePtr& a, const CompTypePtr& b) { return eq(a, b, true); }
bool equal(const CompTermPtr& a, const CompTermPtr& b) { return eq(a, b, true); }

bool alpha_equal(const DomTermPtr& a, const DomTermPtr& b) { return eq(a, b, false); }
bool alpha_equal(const DomTypePtr& a, const DomTypePtr& b) { return eq(a, b, false); }
bool alpha_equal(const DomCtxPtr& a, const DomCtxPtr& b) { return eq(a, b, false); }
bool alpha_equal(const DomSubstPtr& a, const DomSubstPtr& b) { return eq(a, b, false); }
bool alpha_equal(const CompTypePtr& a, const CompTypePtr& b) { return eq(a, b, false); }
bool alpha_equal(const CompTermPtr& a, const CompTermPtr& b) { return eq(a, b, false); }

// ---------------------------------------------------------------------------
// Domain-level shift

DomTermPtr shift_dom(const DomTermPtr& t, std::size_t cutoff, std::int64_t amount) {
  if (amount == 0) return t;
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) { return dm_var(shifted_index(x.index, cutoff, amount)); },
          [&](const DomTerm::Lam& x) { return dm_lam(shift_dom(x.body, cutoff + 1, amount)); },
          [&](const DomTerm::App& x) {
            return dm_app(shift_dom(x.fun, cutoff, amount), shift_dom(x.arg, cutoff, amount));
          },
          [&](const DomTerm::Const& x) {
            std::vector<DomTermPtr> args;
            args.reserve(x.args.size());
            for (auto& a : x.args) args.push_back(shift_dom(a, cutoff, amount));
            return dm_const(x.name, std::move(args));
          },
          [&](const DomTerm::Unbox& x) {
            // the computation has no free domain variables
            return dm_unbox(x.comp, shift_dom_subst(x.subst, cutoff, amount));
          }},
      t->v);
}

DomTypePtr shift_dom_ty(const DomTypePtr& a, std::size_t cutoff, std::int64_t amount) {
  if (amount == 0) return a;
  return std::visit(
      overloaded{
          [&](const DomType::Tm&) { return a; },
          [&](const DomType::Arrow& x) {
            return dt_arrow(shift_dom_ty(x.dom, cutoff, amount),
                            shift_dom_ty(x.cod, cutoff, amount));
          },
          [&](const DomType::Ty&) { return a; },
          [&](const DomType::Trm& x) { return dt_trm(shift_dom(x.body, cutoff, amount)); },
          [&](const DomType::Pi& x) {
            return dt_pi(shift_dom_ty(x.dom, cutoff, amount),
                         shift_dom_ty(x.cod, cutoff + 1, amount));
          }},
      a->v);
}

DomSubstPtr shift_dom_subst(const DomSubstPtr& s, std::size_t cutoff, std::int64_t amount) {
  if (amount == 0) return s;
  return std::visit(
      overloaded{
          [&](const DomSubst::Empty&) { return s; },
          [&](const DomSubst::Weaken& x) {
            if (x.count >= cutoff) {
              std::int64_t k = static_cast<std::int64_t>(x.count) + amount;
              if (k < 0) fail(Errc::NegativeIndex, "weakening offset would become negative");
              return ds_weaken(static_cast<std::size_t>(k));
            }
            // images below the cutoff stay put, the rest shift
            ElabDomSubst e;
            for (std::size_t i = x.count; i < cutoff; i++) e.front.push_back(dm_var(i));
            std::int64_t k = static_cast<std::int64_t>(x.count) + amount;
            if (k < 0) fail(Errc::NegativeIndex, "weakening offset would become negative");
            e.weaken = static_cast<std::size_t>(k);
            return e.to_subst();
          },
          [&](const DomSubst::Snoc& x) {
            return ds_snoc(shift_dom_subst(x.prefix, cutoff, amount),
                           shift_dom(x.term, cutoff, amount));
          }},
      s->v);
}

// ---------------------------------------------------------------------------
// Domain-level substitution

ElabDomSubst ElabDomSubst::from(const DomSubstPtr& s) {
  ElabDomSubst out;
  std::vector<DomTermPtr> rev;
  const DomSubst* cur = s.get();
  while (auto* sn = std::get_if<DomSubst::Snoc>(&cur->v)) {
    rev.push_back(sn->term);
    cur = sn->prefix.get();
  }
  out.front = std::move(rev); // Snoc order: last extension replaces var 0
  if (auto* w = std::get_if<DomSubst::Weaken>(&cur->v)) out.weaken = w->count;
  return out;
}

DomSubstPtr ElabDomSubst::to_subst() const {
  DomSubstPtr tail = weaken ? ds_weaken(*weaken) : ds_empty();
  for (std::size_t i = front.size(); i > 0; i--) tail = ds_snoc(tail, front[i - 1]);
  return tail;
}

DomTermPtr ElabDomSubst::apply_var(std::size_t index) const {
  if (index < front.size()) return front[index];
  if (!weaken)
    fail(Errc::ArityMismatch, "substitution shorter than the context of the term");
  return dm_var(index - front.size() + *weaken);
}

ElabDomSubst ElabDomSubst::lift() const {
  ElabDomSubst out;
  out.front.reserve(front.size() + 1);
  out.front.push_back(dm_var(0));
  for (auto& t : front) out.front.push_back(shift_dom(t, 0, 1));
  out.weaken = weaken ? std::optional<std::size_t>(*weaken + 1) : std::nullopt;
  return out;
}

ElabDomSubst compose_dom(const ElabDomSubst& outer, const DomSubstPtr& inner) {
  return std::visit(
      overloaded{
          [&](const DomSubst::Empty&) { return ElabDomSubst{}; },
          [&](const DomSubst::Weaken& w) {
            ElabDomSubst out;
            if (w.count < outer.front.size()) {
              out.front.assign(outer.front.begin() + static_cast<std::ptrdiff_t>(w.count),
                               outer.front.end());
              out.weaken = outer.weaken;
            } else {
              if (outer.weaken)
                out.weaken = *outer.weaken + (w.count - outer.front.size());
              else
                out.weaken = std::nullopt;
            }
            return out;
          },
          [&](const DomSubst::Snoc& sn) {
            ElabDomSubst out = compose_dom(outer, sn.prefix);
            out.front.insert(out.front.begin(), subst_dom(sn.term, outer));
            return out;
          }},
      inner->v);
}

DomTermPtr subst_dom(const DomTermPtr& t, const ElabDomSubst& s) {
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) { return s.apply_var(x.index); },
          [&](const DomTerm::Lam& x) { return dm_lam(subst_dom(x.body, s.lift())); },
          [&](const DomTerm::App& x) {
            return dm_app(subst_dom(x.fun, s), subst_dom(x.arg, s));
          },
          [&](const DomTerm::Const& x) {
            std::vector<DomTermPtr> args;
            args.reserve(x.args.size());
            for (auto& a : x.args) args.push_back(subst_dom(a, s));
            return dm_const(x.name, std::move(args));
          },
          [&](const DomTerm::Unbox& x) {
            return dm_unbox(x.comp, compose_dom(s, x.subst).to_subst());
          }},
      t->v);
}

DomTypePtr subst_dom_ty(const DomTypePtr& a, const ElabDomSubst& s) {
  return std::visit(
      overloaded{
          [&](const DomType::Tm&) { return a; },
          [&](const DomType::Arrow& x) {
            return dt_arrow(subst_dom_ty(x.dom, s), subst_dom_ty(x.cod, s));
          },
          [&](const DomType::Ty&) { return a; },
          [&](const DomType::Trm& x) { return dt_trm(subst_dom(x.body, s)); },
          [&](const DomType::Pi& x) {
            return dt_pi(subst_dom_ty(x.dom, s), subst_dom_ty(x.cod, s.lift()));
          }},
      a->v);
}

DomTermPtr subst_dom(const DomTermPtr& t, const DomSubstPtr& s) {
  return subst_dom(t, ElabDomSubst::from(s));
}
DomTypePtr subst_dom_ty(const DomTypePtr& a, const DomSubstPtr& s) {
  return subst_dom_ty(a, ElabDomSubst::from(s));
}

DomTermPtr subst_dom_one(const DomTermPtr& t, const DomTermPtr& n) {
  ElabDomSubst s;
  s.front.push_back(n);
  s.weaken = 0;
  return subst_dom(t, s);
}
DomTypePtr subst_dom_ty_one(const DomTypePtr& a, const DomTermPtr& n) {
  ElabDomSubst s;
  s.front.push_back(n);
  s.weaken = 0;
  return subst_dom_ty(a, s);
}

// ---------------------------------------------------------------------------
// Computation-level shift

namespace {

struct CompShift {
  std::int64_t amount;

  DomTermPtr on(const DomTermPtr& t, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const DomTerm::Var&) { return t; },
            [&](const DomTerm::Lam& x) { return dm_lam(on(x.body, c)); },
            [&](const DomTerm::App& x) { return dm_app(on(x.fun, c), on(x.arg, c)); },
            [&](const DomTerm::Const& x) {
              std::vector<DomTermPtr> args;
              for (auto& a : x.args) args.push_back(on(a, c));
              return dm_const(x.name, std::move(args));
            },
            [&](const DomTerm::Unbox& x) {
              return dm_unbox(on(x.comp, c), on(x.subst, c));
            }},
        t->v);
  }

  DomTypePtr on(const DomTypePtr& a, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const DomType::Tm&) { return a; },
            [&](const DomType::Arrow& x) { return dt_arrow(on(x.dom, c), on(x.cod, c)); },
            [&](const DomType::Ty&) { return a; },
            [&](const DomType::Trm& x) { return dt_trm(on(x.body, c)); },
            [&](const DomType::Pi& x) { return dt_pi(on(x.dom, c), on(x.cod, c)); }},
        a->v);
  }

  DomCtxPtr on(const DomCtxPtr& d, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const DomCtx::Empty&) { return d; },
            [&](const DomCtx::CtxVar& x) {
              return dc_var(shifted_index(x.comp_index, c, amount));
            },
            [&](const DomCtx::Snoc& x) { return dc_snoc(on(x.prefix, c), on(x.type, c)); }},
        d->v);
  }

  DomSubstPtr on(const DomSubstPtr& s, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const DomSubst::Empty&) { return s; },
            [&](const DomSubst::Weaken&) { return s; },
            [&](const DomSubst::Snoc& x) { return ds_snoc(on(x.prefix, c), on(x.term, c)); }},
        s->v);
  }

  CompTypePtr on(const CompTypePtr& t, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const CompType::BoxT& x) {
              return ct_box(x.ct.kind, on(x.ct.ctx, c), on(x.ct.type, c));
            },
            [&](const CompType::Fn& x) {
              AnnType p = x.param.is_ctx() ? ann_ctx() : ann(on(x.param.type, c));
              return ct_fn(std::move(p), on(x.result, c + 1));
            }},
        t->v);
  }

  CompTermPtr on(const CompTermPtr& t, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const CompTerm::Var& x) {
              return cm_var(shifted_index(x.index, c, amount));
            },
            [&](const CompTerm::Ref&) { return t; },
            [&](const CompTerm::BoxC& x) { return cm_box(x.names, on(x.body, c)); },
            [&](const CompTerm::Fn& x) { return cm_fn(on(x.body, c + 1)); },
            [&](const CompTerm::App& x) {
              CompArg a = std::visit(
                  overloaded{[&](const CompTermPtr& y) { return CompArg(on(y, c)); },
                             [&](const DomCtxPtr& y) { return CompArg(on(y, c)); }},
                  x.arg);
              return cm_app(on(x.fun, c), std::move(a));
            },
            [&](const CompTerm::Rec& x) {
              std::vector<RecBranch> bs;
              for (auto& b : x.branches)
                bs.push_back(RecBranch{b.binders, on(b.body, c + b.binders)});
              return cm_rec(on(x.motive, c), std::move(bs), on(x.ctx_arg, c),
                            x.scrut_ty ? on(x.scrut_ty, c) : nullptr, on(x.scrut, c));
            }},
        t->v);
  }
};

}  // namespace

DomTermPtr shift_comp(const DomTermPtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
DomTypePtr shift_comp(const DomTypePtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
DomCtxPtr shift_comp(const DomCtxPtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
DomSubstPtr shift_comp(const DomSubstPtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
CompTypePtr shift_comp(const CompTypePtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
CompTermPtr shift_comp(const CompTermPtr& t, std::size_t c, std::int64_t a) {
  return a == 0 ? t : CompShift{a}.on(t, c);
}
CompArg shift_comp(const CompArg& t, std::size_t c, std::int64_t a) {
  return std::visit(
      overloaded{[&](const CompTermPtr& y) { return CompArg(shift_comp(y, c, a)); },
                 [&](const DomCtxPtr& y) { return CompArg(shift_comp(y, c, a)); }},
      t);
}

// ---------------------------------------------------------------------------
// Computation-level substitution: open k binders simultaneously.
// A single-variable substitution is the k=1 case applied at a given depth.

namespace {

struct CompOpen {
  // values[0] is the innermost binder; target indices i >= base + k map to
  // i - k + gamma_shift.
  const std::vector<CompArg>& values;
  std::size_t base;          // substitution starts at this depth
  std::size_t gamma_shift;

  std::size_t k() const { return values.size(); }

  CompTermPtr term_at(std::size_t j, std::size_t depth) const {
    auto* t = std::get_if<CompTermPtr>(&values[j]);
    if (!t) fail(Errc::KindMismatch, "context value used in term position");
    return shift_comp(*t, 0, static_cast<std::int64_t>(depth));
  }
  DomCtxPtr ctx_at(std::size_t j, std::size_t depth) const {
    if (auto* c = std::get_if<DomCtxPtr>(&values[j]))
      return shift_comp(*c, 0, static_cast<std::int64_t>(depth));
    // a computation variable of ctx kind may stand for a context
    auto& t = std::get<CompTermPtr>(values[j]);
    if (auto* v = std::get_if<CompTerm::Var>(&t->v))
      return shift_comp(dc_var(v->index), 0, static_cast<std::int64_t>(depth));
    fail(Errc::KindMismatch, "term value used in context position");
  }

  std::optional<std::size_t> renumber(std::size_t i, std::size_t depth) const {
    // returns the new index for variables not replaced by a value
    std::size_t lo = base + depth;
    if (i < lo) return i;
    if (i < lo + k()) return std::nullopt; // replaced
    return i - k() + gamma_shift;
  }

  DomTermPtr on(const DomTermPtr& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const DomTerm::Var&) { return t; },
            [&](const DomTerm::Lam& x) { return dm_lam(on(x.body, d)); },
            [&](const DomTerm::App& x) { return dm_app(on(x.fun, d), on(x.arg, d)); },
            [&](const DomTerm::Const& x) {
              std::vector<DomTermPtr> args;
              for (auto& a : x.args) args.push_back(on(a, d));
              return dm_const(x.name, std::move(args));
            },
            [&](const DomTerm::Unbox& x) {
              return dm_unbox(on(x.comp, d), on(x.subst, d));
            }},
        t->v);
  }

  DomTypePtr on(const DomTypePtr& a, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const DomType::Tm&) { return a; },
            [&](const DomType::Arrow& x) { return dt_arrow(on(x.dom, d), on(x.cod, d)); },
            [&](const DomType::Ty&) { return a; },
            [&](const DomType::Trm& x) { return dt_trm(on(x.body, d)); },
            [&](const DomType::Pi& x) { return dt_pi(on(x.dom, d), on(x.cod, d)); }},
        a->v);
  }

  DomCtxPtr on(const DomCtxPtr& c, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const DomCtx::Empty&) { return c; },
            [&](const DomCtx::CtxVar& x) {
              if (auto i = renumber(x.comp_index, d)) return dc_var(*i);
              return ctx_at(x.comp_index - base - d, d);
            },
            [&](const DomCtx::Snoc& x) { return dc_snoc(on(x.prefix, d), on(x.type, d)); }},
        c->v);
  }

  DomSubstPtr on(const DomSubstPtr& s, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const DomSubst::Empty&) { return s; },
            [&](const DomSubst::Weaken&) { return s; },
            [&](const DomSubst::Snoc& x) { return ds_snoc(on(x.prefix, d), on(x.term, d)); }},
        s->v);
  }

  CompTypePtr on(const CompTypePtr& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const CompType::BoxT& x) {
              return ct_box(x.ct.kind, on(x.ct.ctx, d), on(x.ct.type, d));
            },
            [&](const CompType::Fn& x) {
              AnnType p = x.param.is_ctx() ? ann_ctx() : ann(on(x.param.type, d));
              return ct_fn(std::move(p), on(x.result, d + 1));
            }},
        t->v);
  }

  CompTermPtr on(const CompTermPtr& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const CompTerm::Var& x) -> CompTermPtr {
              if (auto i = renumber(x.index, d)) return cm_var(*i);
              return term_at(x.index - base - d, d);
            },
            [&](const CompTerm::Ref&) { return t; },
            [&](const CompTerm::BoxC& x) { return cm_box(x.names, on(x.body, d)); },
            [&](const CompTerm::Fn& x) { return cm_fn(on(x.body, d + 1)); },
            [&](const CompTerm::App& x) {
              CompArg a = std::visit(
                  overloaded{
                      [&](const CompTermPtr& y) -> CompArg {
                        // a bare variable in argument position may become a
                        // context value under substitution
                        if (auto* vv = std::get_if<CompTerm::Var>(&y->v)) {
                          if (!renumber(vv->index, d)) {
                            std::size_t j = vv->index - base - d;
                            if (std::holds_alternative<DomCtxPtr>(values[j]))
                              return CompArg(ctx_at(j, d));
                          }
                        }
                        return CompArg(on(y, d));
                      },
                      [&](const DomCtxPtr& y) { return CompArg(on(y, d)); }},
                  x.arg);
              return cm_app(on(x.fun, d), std::move(a));
            },
            [&](const CompTerm::Rec& x) {
              std::vector<RecBranch> bs;
              for (auto& b : x.branches)
                bs.push_back(RecBranch{b.binders, on(b.body, d + b.binders)});
              return cm_rec(on(x.motive, d), std::move(bs), on(x.ctx_arg, d),
                            x.scrut_ty ? on(x.scrut_ty, d) : nullptr, on(x.scrut, d));
            }},
        t->v);
  }
};

}  // namespace

CompTermPtr subst_comp(const CompTermPtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}
CompTypePtr subst_comp(const CompTypePtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}
DomTermPtr subst_comp(const DomTermPtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}
DomTypePtr subst_comp(const DomTypePtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}
DomCtxPtr subst_comp(const DomCtxPtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}
DomSubstPtr subst_comp(const DomSubstPtr& body, const CompArg& arg, std::size_t index) {
  std::vector<CompArg> vals{arg};
  return CompOpen{vals, index, 0}.on(body, 0);
}

CompTypePtr open_comp(const CompTypePtr& t, const std::vector<CompArg>& values,
                      std::size_t gamma_shift) {
  return CompOpen{values, 0, gamma_shift}.on(t, 0);
}
CompTermPtr open_comp(const CompTermPtr& t, const std::vector<CompArg>& values,
                      std::size_t gamma_shift) {
  return CompOpen{values, 0, gamma_shift}.on(t, 0);
}

bool uses_comp_var(const CompTypePtr& t, std::size_t index) {
  // substitute a sentinel and compare is wasteful; do a direct scan
  struct Scan {
    std::size_t idx;
    bool found = false;
    void var(std::size_t i, std::size_t d) {
      if (i == idx + d) found = true;
    }
    void on(const DomTermPtr& t, std::size_t d) {
      std::visit(overloaded{[&](const DomTerm::Var&) {},
                            [&](const DomTerm::Lam& x) { on(x.body, d); },
                            [&](const DomTerm::App& x) { on(x.fun, d); on(x.arg, d); },
                            [&](const DomTerm::Const& x) {
                              for (auto& a : x.args) on(a, d);
                            },
                            [&](const DomTerm::Unbox& x) { on(x.comp, d); on(x.subst, d); }},
                 t->v);
    }
    void on(const DomTypePtr& a, std::size_t d) {
      std::visit(overloaded{[&](const DomType::Tm&) {}, [&](const DomType::Ty&) {},
                            [&](const DomType::Arrow& x) { on(x.dom, d); on(x.cod, d); },
                            [&](const DomType::Trm& x) { on(x.body, d); },
                            [&](const DomType::Pi& x) { on(x.dom, d); on(x.cod, d); }},
                 a->v);
    }
    void on(const DomCtxPtr& c, std::size_t d) {
      std::visit(overloaded{[&](const DomCtx::Empty&) {},
                            [&](const DomCtx::CtxVar& x) { var(x.comp_index, d); },
                            [&](const DomCtx::Snoc& x) { on(x.prefix, d); on(x.type, d); }},
                 c->v);
    }
    void on(const DomSubstPtr& s, std::size_t d) {
      std::visit(overloaded{[&](const DomSubst::Empty&) {}, [&](const DomSubst::Weaken&) {},
                            [&](const DomSubst::Snoc& x) { on(x.prefix, d); on(x.term, d); }},
                 s->v);
    }
    void on(const CompTypePtr& t, std::size_t d) {
      std::visit(overloaded{[&](const CompType::BoxT& x) {
                              on(x.ct.ctx, d);
                              on(x.ct.type, d);
                            },
                            [&](const CompType::Fn& x) {
                              if (!x.param.is_ctx()) on(x.param.type, d);
                              on(x.result, d + 1);
                            }},
                 t->v);
    }
    void on(const CompTermPtr& t, std::size_t d) {
      std::visit(overloaded{[&](const CompTerm::Var& x) { var(x.index, d); },
                            [&](const CompTerm::Ref&) {},
                            [&](const CompTerm::BoxC& x) { on(x.body, d); },
                            [&](const CompTerm::Fn& x) { on(x.body, d + 1); },
                            [&](const CompTerm::App& x) {
                              on(x.fun, d);
                              std::visit(overloaded{[&](const CompTermPtr& y) { on(y, d); },
                                                    [&](const DomCtxPtr& y) { on(y, d); }},
                                         x.arg);
                            },
                            [&](const CompTerm::Rec& x) {
                              on(x.motive, d);
                              for (auto& b : x.branches) on(b.body, d + b.binders);
                              on(x.ctx_arg, d);
                              if (x.scrut_ty) on(x.scrut_ty, d);
                              on(x.scrut, d);
                            }},
                 t->v);
    }
  };
  Scan s{index};
  s.on(t, 0);
  return s.found;
}

}  // namespace cocon
