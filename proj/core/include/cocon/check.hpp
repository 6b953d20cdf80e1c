#pragma once

// Bidirectional type checker and normalizer for both Cocon modes. The checker
// is a pure function of (mode, context, term); normalization is fuel-bounded
// and reports FuelExhausted rather than looping.

#include "cocon/syntax.hpp"

namespace cocon {

inline constexpr long kDefaultFuel = 1000000;

// Redex selection order for the determinacy property: subterms of an
// application (and recursor arguments) are reduced left-to-right or
// right-to-left. Results must agree up to alpha.
enum class RedexOrder { LeftFirst, RightFirst };

struct CheckState {
  Mode mode = Mode::Simple;
  long fuel = kDefaultFuel;
  RedexOrder order = RedexOrder::LeftFirst;
  const DeclTable* decls = nullptr;
};

class Checker {
public:
  explicit Checker(CheckState st) : st_(st) {}
  explicit Checker(Mode mode) : st_{mode} {}

  const CheckState& state() const { return st_; }

  // --- well-formedness ---
  void check_comp_ctx(const CompCtx& g) const;
  void check_ann_type(const CompCtx& g, const AnnType& t) const;
  void check_comp_type(const CompCtx& g, const CompTypePtr& t) const;
  void check_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const;
  void check_dom_type(const CompCtx& g, const DomCtxPtr& psi, const DomTypePtr& a) const;

  // --- domain level ---
  DomTypePtr infer_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m) const;
  void check_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m,
                      const DomTypePtr& a) const;
  void check_dom_subst(const CompCtx& g, const DomCtxPtr& psi, const DomSubstPtr& s,
                       const DomCtxPtr& phi) const;

  // --- contextual objects ---
  void check_ctx_obj(const CompCtx& g, const CompTerm::BoxC& c, const ContextualType& t) const;

  // Contextual type of the boxed computation in unbox(box(...), s): the
  // context is reconstructed from the substitution, the type inferred from
  // the body. Returns nullopt when the computation is not a literal box.
  std::optional<ContextualType> reconstruct_unbox(const CompCtx& g, const DomCtxPtr& psi,
                                                  const DomTerm::Unbox& u) const;

  // --- computation level ---
  CompTypePtr infer_comp(const CompCtx& g, const CompTermPtr& t) const;
  void check_comp(const CompCtx& g, const CompTermPtr& t, const CompTypePtr& tau) const;
  CompTypePtr check_recursor(const CompCtx& g, const CompTerm::Rec& r) const;

  // Checks a whole declaration body against its ascription (ctx bodies too).
  void check_decl(const AnnType& ascription, const CompArg& body) const;

  // --- normalization and definitional equality ---
  DomTermPtr normalize_dom(const CompCtx& g, const DomTermPtr& m) const;
  DomTypePtr normalize_dom_ty(const CompCtx& g, const DomTypePtr& a) const;
  CompTermPtr normalize_comp(const CompCtx& g, const CompTermPtr& t) const;
  CompTypePtr normalize_comp_ty(const CompCtx& g, const CompTypePtr& t) const;

  bool equal_dom(const CompCtx& g, const DomTermPtr& m, const DomTermPtr& n) const;
  bool equal_dom_ty(const CompCtx& g, const DomTypePtr& a, const DomTypePtr& b) const;
  bool equal_dom_ctx(const CompCtx& g, const DomCtxPtr& a, const DomCtxPtr& b) const;
  bool equal_comp(const CompCtx& g, const CompTermPtr& t1, const CompTermPtr& t2) const;
  bool equal_comp_ty(const CompCtx& g, const CompTypePtr& t1, const CompTypePtr& t2) const;

private:
  CheckState st_;
};

}  // namespace cocon
