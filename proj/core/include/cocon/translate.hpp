#pragma once

// The two interpretations of Cocon into the internal modal type theory,
// emitted as concrete terms and types and re-checked after emission.
// Translation is judgment-directed: it runs alongside the checker on
// well-typed input and consults it for the typing facts each clause needs.

#include "cocon/check.hpp"
#include "cocon/internal.hpp"

namespace cocon {

struct TranslationOutput {
  ITermPtr term;
  ITypePtr type;
  ICtx crisp_ctx;                   // image of Γ
  std::vector<std::string> trace;   // per-node figure case, emission order
};

class Translator {
public:
  Translator(CheckState st) : st_(st), chk_(st) {}

  // Γ ⊢ t : τ (τ required for non-inferable heads; may be null otherwise).
  TranslationOutput translate(const CompCtx& g, const CompTermPtr& t,
                              const CompTypePtr& tau) const;

  ICtx translate_comp_ctx(const CompCtx& g) const;
  ITypePtr translate_comp_type(const CompCtx& g, const CompTypePtr& tau) const;
  ITypePtr translate_ann_type(const CompCtx& g, const AnnType& a) const;

  // Exposed sub-translators (domain level), mainly for tests.
  ITermPtr tr_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const;
  ITermPtr tr_dom_type(const CompCtx& g, const DomCtxPtr& psi, const DomTypePtr& a) const;
  ITermPtr tr_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m,
                       const DomTypePtr& a) const;
  ITermPtr tr_dom_subst(const CompCtx& g, const DomCtxPtr& psi, const DomSubstPtr& s,
                        const DomCtxPtr& phi) const;

private:
  CheckState st_;
  Checker chk_;
  mutable std::vector<std::string>* trace_ = nullptr;

  void note(const std::string& s) const;
  ITermPtr tr_comp(const CompCtx& g, const CompTermPtr& t, const CompTypePtr& tau) const;
  std::pair<ITermPtr, CompTypePtr> tr_comp_infer(const CompCtx& g, const CompTermPtr& t) const;
  ITermPtr tr_rec(const CompCtx& g, const CompTerm::Rec& r) const;

  friend struct TrImpl;
};

}  // namespace cocon
