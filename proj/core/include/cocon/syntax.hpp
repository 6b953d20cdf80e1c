#pragma once

// Abstract syntax for both Cocon variants. Variables at every level are
// de Bruijn indices counted from the right end of their context; all values
// are immutable after construction and freely shareable.

#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cocon/errors.hpp"

namespace cocon {

enum class Mode { Simple, Dep };

struct DomType;
struct DomTerm;
struct DomCtx;
struct DomSubst;
struct CompType;
struct CompTerm;

using DomTypePtr = std::shared_ptr<const DomType>;
using DomTermPtr = std::shared_ptr<const DomTerm>;
using DomCtxPtr = std::shared_ptr<const DomCtx>;
using DomSubstPtr = std::shared_ptr<const DomSubst>;
using CompTypePtr = std::shared_ptr<const CompType>;
using CompTermPtr = std::shared_ptr<const CompTerm>;

// ---------------------------------------------------------------------------
// Domain level

struct DomType {
  struct Tm {};                                  // simple mode
  struct Arrow { DomTypePtr dom, cod; };         // simple mode
  struct Ty {};                                  // dep mode
  struct Trm { DomTermPtr body; };               // dep mode; body : ty
  struct Pi { DomTypePtr dom; DomTypePtr cod; }; // dep mode; cod binds one var
  std::variant<Tm, Arrow, Ty, Trm, Pi> v;
};

// Domain constants. Simple mode: lam/app are curried and take no node
// arguments. Dep mode: constructors are fully applied, arg counts fixed.
enum class DomConst { Lam, App, O, Arr, DLam, DApp };
int dom_const_arity(Mode mode, DomConst c);
std::string_view dom_const_name(DomConst c);

struct DomTerm {
  struct Var { std::size_t index; };
  struct Lam { DomTermPtr body; };
  struct App { DomTermPtr fun, arg; };
  struct Const { DomConst name; std::vector<DomTermPtr> args; };
  struct Unbox { CompTermPtr comp; DomSubstPtr subst; };
  std::variant<Var, Lam, App, Const, Unbox> v;
};

struct DomCtx {
  struct Empty {};
  struct CtxVar { std::size_t comp_index; }; // index into Γ, annotation ctx
  struct Snoc { DomCtxPtr prefix; DomTypePtr type; };
  std::variant<Empty, CtxVar, Snoc> v;
};

struct DomSubst {
  struct Empty {};
  struct Weaken { std::size_t count; }; // number of trailing declarations dropped
  struct Snoc { DomSubstPtr prefix; DomTermPtr term; };
  std::variant<Empty, Weaken, Snoc> v;
};

// ---------------------------------------------------------------------------
// Computation level

enum class CtxKind { Term, Variable }; // ⌜Ψ ⊢ A⌝ vs ⌜Ψ ⊢# A⌝

struct ContextualType {
  CtxKind kind;
  DomCtxPtr ctx;
  DomTypePtr type;
};

// Domain of discourse for binders: a computation type, or the ctx schema.
struct AnnType {
  CompTypePtr type; // null means ctx
  bool is_ctx() const { return type == nullptr; }
};

struct CompType {
  struct BoxT { ContextualType ct; };
  struct Fn { AnnType param; CompTypePtr result; }; // result binds one var
  std::variant<BoxT, Fn> v;
};

// App arguments are terms or domain contexts; a bare variable is stored as a
// term and resolved against the function type's annotation kind by the checker.
using CompArg = std::variant<CompTermPtr, DomCtxPtr>;

struct RecBranch {
  std::size_t binders; // number of computation variables bound by the branch
  CompTermPtr body;
};

struct CompTerm {
  struct Var { std::size_t index; };
  // reference to an earlier (closed) declaration, unfolded on demand
  struct Ref { std::string name; };
  struct BoxC { std::vector<std::string> names; DomTermPtr body; };
  struct Fn { CompTermPtr body; }; // binds one var
  struct App { CompTermPtr fun; CompArg arg; };
  // Recursor. scrut_ty is the closed type scrutinee of the dep-mode trm
  // recursor and null otherwise; the eliminated sort is recovered from the
  // branch count and scrut_ty during checking.
  struct Rec {
    CompTypePtr motive;
    std::vector<RecBranch> branches;
    DomCtxPtr ctx_arg;
    CompTermPtr scrut_ty;
    CompTermPtr scrut;
  };
  std::variant<Var, Ref, BoxC, Fn, App, Rec> v;
};

// Top-level declarations in scope: name -> (ascription, closed body).
struct DeclDef {
  AnnType type;
  CompArg body;
};
using DeclTable = std::map<std::string, DeclDef>;

struct CompCtx {
  std::vector<AnnType> entries; // entries.back() is the most recent binder

  std::size_t size() const { return entries.size(); }
  // de Bruijn lookup; the returned annotation is scoped over the prefix
  // preceding the entry (shift by index+1 to move it under the full context).
  const AnnType& lookup(std::size_t index) const {
    assert(index < entries.size());
    return entries[entries.size() - 1 - index];
  }
  CompCtx extended(AnnType t) const {
    CompCtx out = *this;
    out.entries.push_back(std::move(t));
    return out;
  }
};

// ---------------------------------------------------------------------------
// Construction helpers

DomTypePtr dt_tm();
DomTypePtr dt_arrow(DomTypePtr a, DomTypePtr b);
DomTypePtr dt_ty();
DomTypePtr dt_trm(DomTermPtr m);
DomTypePtr dt_pi(DomTypePtr a, DomTypePtr b);

DomTermPtr dm_var(std::size_t i);
DomTermPtr dm_lam(DomTermPtr body);
DomTermPtr dm_app(DomTermPtr f, DomTermPtr a);
DomTermPtr dm_const(DomConst c, std::vector<DomTermPtr> args = {});
DomTermPtr dm_unbox(CompTermPtr t, DomSubstPtr s);

DomCtxPtr dc_empty();
DomCtxPtr dc_var(std::size_t comp_index);
DomCtxPtr dc_snoc(DomCtxPtr prefix, DomTypePtr type);

DomSubstPtr ds_empty();
DomSubstPtr ds_weaken(std::size_t k);
DomSubstPtr ds_snoc(DomSubstPtr prefix, DomTermPtr m);
DomSubstPtr ds_id(); // wk 0

CompTypePtr ct_box(ContextualType t);
CompTypePtr ct_box(CtxKind k, DomCtxPtr ctx, DomTypePtr ty);
CompTypePtr ct_fn(AnnType param, CompTypePtr result);
AnnType ann_ctx();
AnnType ann(CompTypePtr t);

CompTermPtr cm_var(std::size_t i);
CompTermPtr cm_ref(std::string name);
CompTermPtr cm_box(std::vector<std::string> names, DomTermPtr body);
CompTermPtr cm_fn(CompTermPtr body);
CompTermPtr cm_app(CompTermPtr f, CompArg a);
CompTermPtr cm_rec(CompTypePtr motive, std::vector<RecBranch> branches,
                   DomCtxPtr ctx_arg, CompTermPtr scrut_ty, CompTermPtr scrut);

// ---------------------------------------------------------------------------
// Structural inspection

std::size_t dom_ctx_length(const DomCtxPtr& c);        // declared entries
std::optional<std::size_t> dom_ctx_head_var(const DomCtxPtr& c);
// nth entry counted from the right (0 = innermost); type scoped over prefix
const DomType* dom_ctx_entry(const DomCtxPtr& c, std::size_t index);
DomCtxPtr dom_ctx_prefix(const DomCtxPtr& c, std::size_t drop);

// Structural equality. Equality on BoxC is name-sensitive; alpha_equal
// variants ignore the stored name lists.
bool equal(const DomTypePtr&, const DomTypePtr&);
bool equal(const DomTermPtr&, const DomTermPtr&);
bool equal(const DomCtxPtr&, const DomCtxPtr&);
bool equal(const DomSubstPtr&, const DomSubstPtr&);
bool equal(const CompTypePtr&, const CompTypePtr&);
bool equal(const CompTermPtr&, const CompTermPtr&);

bool alpha_equal(const DomTermPtr&, const DomTermPtr&);
bool alpha_equal(const DomTypePtr&, const DomTypePtr&);
bool alpha_equal(const DomCtxPtr&, const DomCtxPtr&);
bool alpha_equal(const DomSubstPtr&, const DomSubstPtr&);
bool alpha_equal(const CompTypePtr&, const CompTypePtr&);
bool alpha_equal(const CompTermPtr&, const CompTermPtr&);

// ---------------------------------------------------------------------------
// Domain-level shifting and substitution

// Adjusts free domain indices >= cutoff by amount; bound structure unchanged.
DomTermPtr shift_dom(const DomTermPtr& t, std::size_t cutoff, std::int64_t amount);
DomTypePtr shift_dom_ty(const DomTypePtr& a, std::size_t cutoff, std::int64_t amount);
DomSubstPtr shift_dom_subst(const DomSubstPtr& s, std::size_t cutoff, std::int64_t amount);

// A domain substitution resolved to lookup form: variable i maps to
// front[i] when i < |front|, and to Var(i - |front| + *weaken) past it.
// weaken == nullopt means the substitution ends in the empty substitution
// and has no mapping past the front (ArityMismatch on lookup).
struct ElabDomSubst {
  std::vector<DomTermPtr> front;
  std::optional<std::size_t> weaken;

  static ElabDomSubst from(const DomSubstPtr& s);
  DomSubstPtr to_subst() const;

  DomTermPtr apply_var(std::size_t index) const;
  ElabDomSubst lift() const;       // push under one domain binder
  std::size_t domain_floor() const { return front.size(); }
};

DomTermPtr subst_dom(const DomTermPtr& t, const ElabDomSubst& s);
DomTypePtr subst_dom_ty(const DomTypePtr& a, const ElabDomSubst& s);
DomTermPtr subst_dom(const DomTermPtr& t, const DomSubstPtr& s);
DomTypePtr subst_dom_ty(const DomTypePtr& a, const DomSubstPtr& s);
// [N/0], remaining indices shifted down
DomTermPtr subst_dom_one(const DomTermPtr& t, const DomTermPtr& n);
DomTypePtr subst_dom_ty_one(const DomTypePtr& a, const DomTermPtr& n);
// σ ∘ δ as substitutions: apply σ to every image of δ
ElabDomSubst compose_dom(const ElabDomSubst& outer, const DomSubstPtr& inner);

// ---------------------------------------------------------------------------
// Computation-level shifting and substitution (indices into Γ)

DomTermPtr shift_comp(const DomTermPtr&, std::size_t cutoff, std::int64_t amount);
DomTypePtr shift_comp(const DomTypePtr&, std::size_t cutoff, std::int64_t amount);
DomCtxPtr shift_comp(const DomCtxPtr&, std::size_t cutoff, std::int64_t amount);
DomSubstPtr shift_comp(const DomSubstPtr&, std::size_t cutoff, std::int64_t amount);
CompTypePtr shift_comp(const CompTypePtr&, std::size_t cutoff, std::int64_t amount);
CompTermPtr shift_comp(const CompTermPtr&, std::size_t cutoff, std::int64_t amount);
CompArg shift_comp(const CompArg&, std::size_t cutoff, std::int64_t amount);

// Substitutes arg for computation variable `index`; variables above it shift
// down by one. KindMismatch when a context value meets a term position or
// vice versa.
CompTermPtr subst_comp(const CompTermPtr& body, const CompArg& arg, std::size_t index = 0);
CompTypePtr subst_comp(const CompTypePtr& body, const CompArg& arg, std::size_t index = 0);
DomTermPtr subst_comp(const DomTermPtr& body, const CompArg& arg, std::size_t index = 0);
DomTypePtr subst_comp(const DomTypePtr& body, const CompArg& arg, std::size_t index = 0);
DomCtxPtr subst_comp(const DomCtxPtr& body, const CompArg& arg, std::size_t index = 0);
DomSubstPtr subst_comp(const DomSubstPtr& body, const CompArg& arg, std::size_t index = 0);

bool uses_comp_var(const CompTypePtr& t, std::size_t index);

// Simultaneous opening of a value scoped under k extra binders (k =
// values.size(), values[0] = innermost binder). Binder j is replaced by
// values[j], scoped in the target context; remaining free variables i >= k
// are renumbered to i - k + gamma_shift.
CompTypePtr open_comp(const CompTypePtr& t, const std::vector<CompArg>& values,
                      std::size_t gamma_shift);
CompTermPtr open_comp(const CompTermPtr& t, const std::vector<CompArg>& values,
                      std::size_t gamma_shift);

}  // namespace cocon
