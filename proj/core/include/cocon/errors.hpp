#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cocon {

// Machine-matchable failure classes. Test directives and the CLI report
// refer to these by name, so the spelling is part of the tool's interface.
enum class Errc {
  // syntax / substitution machinery
  NegativeIndex,
  ArityMismatch,
  KindMismatch,
  // surface
  SyntaxError,
  ScopeError,
  // checker
  UnboundCtxVar,
  NotCtxKind,
  IllFormedType,
  TypeMismatch,
  NotAFunction,
  BoxExpected,
  WeakenShapeMismatch,
  NotAVariable,
  AnnKindMismatch,
  BranchCountMismatch,
  NotClosed,
  CannotInfer,
  FuelExhausted,
  // internal type theory
  OrdinaryVarUnderBox,
  OpenCrispArgument,
  UnknownConstant,
  // fitch
  VariableBehindLock,
  LockInResidue,
  RecursorPresent,
  // presheaf lab
  UnknownObject,
  NoTerminal,
  LawViolation,
  // cli
  UsageError,
  IoError,
};

std::string_view errc_name(Errc c);

struct Span {
  int line = 0;  // 1-based; 0 = unknown
  int col = 0;
};

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string msg, Span span = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code), span_(span) {}

  Errc code() const { return code_; }
  Span span() const { return span_; }

private:
  Errc code_;
  Span span_;
};

[[noreturn]] inline void fail(Errc code, std::string msg, Span span = {}) {
  throw Error(code, std::move(msg), span);
}

}  // namespace cocon
