#pragma once

// Checker for the Fitch-style dependent modal type theory (locks, box/unbox)
// and the interpretation of recursor-free dependent Cocon into it.

#include "cocon/check.hpp"

namespace cocon {

struct FTerm;
struct FType;
using FTermPtr = std::shared_ptr<const FTerm>;
using FTypePtr = std::shared_ptr<const FType>;

struct FTerm {
  struct Var { std::size_t index; };  // counts type entries from the right
  struct Lam { FTermPtr body; };
  struct App { FTermPtr fun, arg; };
  struct BoxIntro { FTermPtr body; };
  struct Unbox { FTermPtr body; };
  struct UnitTuple {};
  struct Pair { FTermPtr fst, snd; };
  struct Proj { int which; FTermPtr body; };  // 1 or 2
  struct Const { std::string name; std::vector<FTermPtr> args; };
  std::variant<Var, Lam, App, BoxIntro, Unbox, UnitTuple, Pair, Proj, Const> v;
};

struct FType {
  struct Pi { FTypePtr dom, cod; };  // cod binds one variable
  struct BoxT { FTypePtr body; };
  struct El { FTermPtr code; };      // decoding of a universe code
  struct Univ {};                    // the sort of codes
  std::variant<Pi, BoxT, El, Univ> v;
};

FTermPtr ft_var(std::size_t i);
FTermPtr ft_lam(FTermPtr body);
FTermPtr ft_app(FTermPtr f, FTermPtr a);
FTermPtr ft_box(FTermPtr body);
FTermPtr ft_unbox(FTermPtr body);
FTermPtr ft_unit();
FTermPtr ft_pair(FTermPtr a, FTermPtr b);
FTermPtr ft_proj(int which, FTermPtr body);
FTermPtr ft_const(std::string name, std::vector<FTermPtr> args = {});
FTypePtr fty_pi(FTypePtr dom, FTypePtr cod);
FTypePtr fty_box(FTypePtr body);
FTypePtr fty_el(FTermPtr code);
FTypePtr fty_univ();

bool fequal_syntax(const FTermPtr& a, const FTermPtr& b);
FTermPtr fshift(const FTermPtr& t, std::size_t cutoff, std::int64_t amount);
FTypePtr fshift(const FTypePtr& t, std::size_t cutoff, std::int64_t amount);
FTermPtr fsubst(const FTermPtr& body, const FTermPtr& value, std::size_t index = 0);
FTypePtr fsubst(const FTypePtr& body, const FTermPtr& value, std::size_t index = 0);

// Lock-bearing context: entries are types or locks; variables are resolved
// against type entries only and may not look across a lock.
struct FCtx {
  struct Lock {};
  using Entry = std::variant<FTypePtr, Lock>;
  std::vector<Entry> entries;

  FCtx extended(FTypePtr t) const {
    FCtx out = *this;
    out.entries.emplace_back(std::move(t));
    return out;
  }
  FCtx locked() const {
    FCtx out = *this;
    out.entries.emplace_back(Lock{});
    return out;
  }
};

class FitchChecker {
public:
  explicit FitchChecker(long fuel = 1000000) : fuel_(fuel) {}

  FTypePtr infer(const FCtx& g, const FTermPtr& m) const;
  void check(const FCtx& g, const FTermPtr& m, const FTypePtr& t) const;
  void check_type(const FCtx& g, const FTypePtr& t) const;

  // Direct rule instance for the unbox side condition: strip `strip` entries
  // from the right; the boundary entry must be a lock and the residue must be
  // lock-free (LockInResidue otherwise).
  FTypePtr check_unbox_at(const FCtx& g, std::size_t strip, const FTermPtr& m) const;

  FTermPtr normalize(const FTermPtr& t) const;
  bool equal(const FTermPtr& a, const FTermPtr& b) const;
  bool equal_types(const FTypePtr& a, const FTypePtr& b) const;

private:
  long fuel_;
};

// Independent lock-discipline scan: true when every variable occurrence
// resolves without crossing a lock.
bool lock_scan(const FCtx& g, const FTermPtr& m);

struct FitchOutput {
  FTermPtr term;
  FTypePtr type;
  std::vector<FTypePtr> ctx;  // image of Γ (lock-free)
};

// Interpretation of recursor-free dependent Cocon. RecursorPresent when the
// input contains a recursor.
class FitchTranslator {
public:
  explicit FitchTranslator(CheckState st) : st_(st), chk_(st) {}

  FitchOutput translate(const CompCtx& g, const CompTermPtr& t, const CompTypePtr& tau) const;

  FTypePtr tr_comp_type(const CompCtx& g, const CompTypePtr& tau) const;
  FTypePtr tr_ann_type(const CompCtx& g, const AnnType& a) const;
  FTermPtr tr_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const;
  FTermPtr tr_dom_type(const CompCtx& g, const DomCtxPtr& psi, const DomTypePtr& a) const;
  FTermPtr tr_dom_term(const CompCtx& g, const DomCtxPtr& psi, const DomTermPtr& m,
                       const DomTypePtr& a) const;
  FTermPtr tr_dom_subst(const CompCtx& g, const DomCtxPtr& psi, const DomSubstPtr& s,
                        const DomCtxPtr& phi) const;

private:
  CheckState st_;
  Checker chk_;

  FTermPtr tr_comp(const CompCtx& g, const CompTermPtr& t, const CompTypePtr& tau) const;
  std::pair<FTermPtr, CompTypePtr> tr_comp_infer(const CompCtx& g, const CompTermPtr& t) const;
};

std::string print_fterm(const FTermPtr& t);
std::string print_ftype(const FTypePtr& t);

}  // namespace cocon
