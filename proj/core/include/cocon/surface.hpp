#pragma once

// Concrete syntax: lexer, parser and scope checker (names to indices), and a
// pretty-printer satisfying parse(print(x)) == x.

#include <string>
#include <vector>

#include "cocon/syntax.hpp"

namespace cocon {

struct Expectation {
  enum class Kind { Ok, TypeError, Eval };
  Kind kind = Kind::Ok;
  std::string error_class;  // optional Errc name for TypeError
  CompTermPtr eval_term;    // expected normal form for Eval
};

struct Declaration {
  std::string name;
  Span span;
  AnnType ascription;
  CompArg body;  // a DomCtx body when the ascription is ctx
  Expectation expect;
};

struct SourceFile {
  Mode mode = Mode::Simple;
  bool mode_explicit = false;  // a --mode directive was present
  std::vector<Declaration> decls;
};

SourceFile parse(const std::string& text, Mode default_mode = Mode::Simple);

// Declaration table for checking and normalization (delta-unfolding).
DeclTable decl_table(const SourceFile& f);

std::string print(const SourceFile& f);
std::string print_comp_term(const CompTermPtr& t, Mode mode);
std::string print_comp_type(const CompTypePtr& t, Mode mode);
std::string print_ann_type(const AnnType& t, Mode mode);
std::string print_dom_term(const DomTermPtr& t, Mode mode);
std::string print_dom_type(const DomTypePtr& t, Mode mode);
std::string print_dom_ctx(const DomCtxPtr& c, Mode mode);

// Parse helpers for tests and directives: a single closed computation term.
CompTermPtr parse_comp_term(const std::string& text, Mode mode);

}  // namespace cocon
