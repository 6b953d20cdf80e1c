#pragma once

// The target internal modal dependent type theory: dual-context judgments
// Δ | Θ ⊢ m : T with box/let-box, crisp functions, and the universe of
// representables (simple mode: Obj/El and the cartesian closed structure;
// dep mode: the CwF universe Ctx/El/Ty/Tm with Π and the object-level
// constants). Definitional equality is decided by bounded rewriting plus
// type-directed eta comparison; a fuel miss surfaces as FuelExhausted.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cocon/errors.hpp"
#include "cocon/syntax.hpp"  // Mode

namespace cocon {

struct ITerm;
struct IType;
using ITermPtr = std::shared_ptr<const ITerm>;
using ITypePtr = std::shared_ptr<const IType>;

enum class IZone { Crisp, Ordinary };

enum class IRecKind { SimpleTm, DepTy, DepTrm };

struct IType {
  struct Fn { ITypePtr dom; ITypePtr cod; };       // cod binds one ordinary var
  struct VFn { ITypePtr dom; ITypePtr cod; };      // variable subtype; non-dependent
  struct CrispFn { ITypePtr dom; ITypePtr cod; };  // cod binds one crisp var
  struct BoxT { ITypePtr body; };
  struct Const { std::string name; std::vector<ITermPtr> args; };
  std::variant<Fn, VFn, CrispFn, BoxT, Const> v;
};

struct ITerm {
  struct Var { IZone zone; std::size_t index; };
  struct Lam { ITermPtr body; };
  struct CrispLam { ITermPtr body; };
  struct App { ITermPtr fun, arg; };
  struct CrispApp { ITermPtr fun, arg; };
  struct Box { ITermPtr body; };
  struct LetBox { ITermPtr scrut, body; };  // body binds one crisp var
  struct Const { std::string name; std::vector<ITermPtr> args; };  // fully applied
  // Fully applied recursor; the motive is scoped under extra crisp binders
  // (SimpleTm: c, x — DepTy: Psi, y — DepTrm: Psi, a, y).
  struct Rec { IRecKind kind; ITypePtr motive; std::vector<ITermPtr> args; };
  std::variant<Var, Lam, CrispLam, App, CrispApp, Box, LetBox, Const, Rec> v;
};

ITypePtr ity_fn(ITypePtr dom, ITypePtr cod);
ITypePtr ity_vfn(ITypePtr dom, ITypePtr cod);
ITypePtr ity_cfn(ITypePtr dom, ITypePtr cod);
ITypePtr ity_box(ITypePtr body);
ITypePtr ity_const(std::string name, std::vector<ITermPtr> args = {});

ITermPtr it_var(IZone z, std::size_t i);
ITermPtr it_ovar(std::size_t i);
ITermPtr it_cvar(std::size_t i);
ITermPtr it_lam(ITermPtr body);
ITermPtr it_clam(ITermPtr body);
ITermPtr it_app(ITermPtr f, ITermPtr a);
ITermPtr it_capp(ITermPtr f, ITermPtr a);
ITermPtr it_box(ITermPtr body);
ITermPtr it_letbox(ITermPtr scrut, ITermPtr body);
ITermPtr it_const(std::string name, std::vector<ITermPtr> args = {});
ITermPtr it_rec(IRecKind kind, ITypePtr motive, std::vector<ITermPtr> args);

bool iequal_syntax(const ITermPtr& a, const ITermPtr& b);
bool iequal_syntax(const ITypePtr& a, const ITypePtr& b);

// Shift/substitution on one index family; the other is untouched.
ITermPtr ishift(const ITermPtr& t, IZone zone, std::size_t cutoff, std::int64_t amount);
ITypePtr ishift(const ITypePtr& t, IZone zone, std::size_t cutoff, std::int64_t amount);
ITermPtr isubst(const ITermPtr& body, IZone zone, const ITermPtr& value, std::size_t index = 0);
ITypePtr isubst(const ITypePtr& body, IZone zone, const ITermPtr& value, std::size_t index = 0);
// Simultaneous opening of k binders of one zone (values[0] innermost);
// remaining free variables i >= k of that zone become i - k + gamma_shift.
ITermPtr iopen(const ITermPtr& t, IZone zone, const std::vector<ITermPtr>& values,
               std::size_t gamma_shift = 0);
ITypePtr iopen(const ITypePtr& t, IZone zone, const std::vector<ITermPtr>& values,
               std::size_t gamma_shift = 0);

bool uses_var(const ITermPtr& t, IZone zone, std::size_t index);
bool uses_var(const ITypePtr& t, IZone zone, std::size_t index);

// ---------------------------------------------------------------------------
// Signature

struct SigTermEntry {
  std::vector<ITypePtr> telescope;  // entry i scoped over entries 0..i-1 (ordinary vars)
  ITypePtr result;                  // scoped over the whole telescope
};
struct SigTypeEntry {
  std::vector<ITypePtr> telescope;
};

struct ISignature {
  Mode mode;
  std::map<std::string, SigTermEntry> terms;
  std::map<std::string, SigTypeEntry> types;
  // constant-headed rewrite rules, keyed by head constant
  using Rewrite = std::function<std::optional<ITermPtr>(const ITerm::Const&)>;
  std::map<std::string, Rewrite> rewrites;
};

const ISignature& simple_signature();
const ISignature& dep_signature();
const ISignature& signature_for(Mode mode);

// ---------------------------------------------------------------------------
// Checking, normalization, equality

using ICtx = std::vector<ITypePtr>;  // innermost binder last

class InternalChecker {
public:
  InternalChecker(const ISignature& sig, long fuel = 1000000) : sig_(sig), fuel_(fuel) {}

  const ISignature& sig() const { return sig_; }

  void check_type(const ICtx& crisp, const ICtx& ord, const ITypePtr& t) const;
  ITypePtr infer(const ICtx& crisp, const ICtx& ord, const ITermPtr& m) const;
  void check(const ICtx& crisp, const ICtx& ord, const ITermPtr& m, const ITypePtr& t) const;

  ITermPtr normalize(const ICtx& crisp, const ICtx& ord, const ITermPtr& m) const;
  ITypePtr normalize_type(const ICtx& crisp, const ICtx& ord, const ITypePtr& t) const;

  // Tri-state equality: nullopt means the comparison ran out of fuel
  // (reported as Unknown rather than false).
  std::optional<bool> equal(const ICtx& crisp, const ICtx& ord, const ITermPtr& a,
                            const ITermPtr& b, const ITypePtr& at = nullptr) const;
  std::optional<bool> equal_types(const ICtx& crisp, const ICtx& ord, const ITypePtr& a,
                                  const ITypePtr& b) const;

  // Joinability probe for the confluence smoke test: one-step results of all
  // top-level rule matches inside t must normalize to the same term.
  bool local_joins(const ICtx& crisp, const ICtx& ord, const ITermPtr& t) const;

private:
  const ISignature& sig_;
  long fuel_;
};

std::string print_iterm(const ITermPtr& t);
std::string print_itype(const ITypePtr& t);

}  // namespace cocon
