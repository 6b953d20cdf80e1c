#include "cocon/surface.hpp"

#include <map>
#include <set>
#include <sstream>

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  Ident, Number,
  LParen, RParen, LBracket, RBracket, LAngle, RAngle,
  Semi, Colon, Comma, Dot, Lambda, Equals,
  FatArrow, Turnstile, TurnstileHash, BranchArrow,
  KwDef, KwMode, KwTm, KwTy, KwTrm, KwPi, KwCtx, KwBox, KwUnbox, KwFn, KwRec, KwWk,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

struct Directive {
  std::string key;    // "expect" or "mode"
  std::string value;  // remainder of the comment
  Span span;
};

struct LexOutput {
  std::vector<Token> tokens;
  std::vector<std::pair<std::size_t, Directive>> directives; // keyed by token position
};

const std::map<std::string, Tok, std::less<>> kKeywords = {
    {"def", Tok::KwDef}, {"mode", Tok::KwMode}, {"tm", Tok::KwTm},
    {"ty", Tok::KwTy},   {"trm", Tok::KwTrm},   {"Pi", Tok::KwPi},
    {"ctx", Tok::KwCtx}, {"box", Tok::KwBox},   {"unbox", Tok::KwUnbox},
    {"fn", Tok::KwFn},   {"rec", Tok::KwRec},   {"wk", Tok::KwWk},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

LexOutput lex(const std::string& src) {
  LexOutput out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto here = [&] { return Span{line, col}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; k++) {
      if (src[i] == '\n') { line++; col = 1; } else col++;
      i++;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      Span s = here();
      std::size_t j = i;
      while (j < src.size() && src[j] != '\n') j++;
      std::string comment = src.substr(i + 2, j - i - 2);
      advance(j - i);
      // directive comments: --key: value
      std::size_t p = comment.find_first_not_of(' ');
      if (p != std::string::npos) {
        std::size_t q = comment.find(':', p);
        if (q != std::string::npos) {
          std::string key = comment.substr(p, q - p);
          if (key == "expect" || key == "mode") {
            std::string value = comment.substr(q + 1);
            std::size_t a = value.find_first_not_of(' ');
            std::size_t b = value.find_last_not_of(" \t");
            value = a == std::string::npos ? "" : value.substr(a, b - a + 1);
            out.directives.emplace_back(out.tokens.size(), Directive{key, value, s});
          }
        }
      }
      continue;
    }
    Span s = here();
    auto push1 = [&](Tok k, std::size_t n) {
      out.tokens.push_back(Token{k, src.substr(i, n), s});
      advance(n);
    };
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) j++;
      std::string word = src.substr(i, j - i);
      auto it = kKeywords.find(word);
      out.tokens.push_back(Token{it == kKeywords.end() ? Tok::Ident : it->second, word, s});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) j++;
      out.tokens.push_back(Token{Tok::Number, src.substr(i, j - i), s});
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': push1(Tok::LParen, 1); continue;
      case ')': push1(Tok::RParen, 1); continue;
      case '[': push1(Tok::LBracket, 1); continue;
      case ']': push1(Tok::RBracket, 1); continue;
      case '<': push1(Tok::LAngle, 1); continue;
      case '>': push1(Tok::RAngle, 1); continue;
      case ';': push1(Tok::Semi, 1); continue;
      case ':': push1(Tok::Colon, 1); continue;
      case ',': push1(Tok::Comma, 1); continue;
      case '.': push1(Tok::Dot, 1); continue;
      case '\\': push1(Tok::Lambda, 1); continue;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') { push1(Tok::BranchArrow, 2); continue; }
        fail(Errc::SyntaxError, "stray '-'", s);
      case '=':
        if (i + 1 < src.size() && src[i + 1] == '>') { push1(Tok::FatArrow, 2); continue; }
        push1(Tok::Equals, 1);
        continue;
      case '|':
        if (i + 1 < src.size() && src[i + 1] == '-') {
          if (i + 2 < src.size() && src[i + 2] == '#') { push1(Tok::TurnstileHash, 3); continue; }
          push1(Tok::Turnstile, 2);
          continue;
        }
        fail(Errc::SyntaxError, "stray '|'", s);
      default:
        fail(Errc::SyntaxError, std::string("unexpected character '") + c + "'", s);
    }
  }
  out.tokens.push_back(Token{Tok::End, "", here()});
  return out;
}

// Function arrows lex as BranchArrow; domain types reuse the same token.

// ---------------------------------------------------------------------------
// Parser + scope checker

struct ScopeEntry {
  std::string name;
  enum class Level { Comp, Dom } level;
};

struct DeclValue {
  AnnType ascription;
  CompArg body;
};

struct Parser {
  const std::vector<Token>& ts;
  std::size_t pos = 0;
  Mode mode;
  std::vector<std::string> comp_scope; // computation binders, innermost last
  std::vector<std::string> dom_scope;  // domain binders, innermost last
  const std::map<std::string, DeclValue>* decls = nullptr;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t p = pos + ahead;
    return p < ts.size() ? ts[p] : ts.back();
  }
  const Token& next() { return ts[pos < ts.size() - 1 ? pos++ : pos]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(Errc::SyntaxError, std::string("expected ") + what, peek().span);
    return next();
  }

  [[noreturn]] void scope_error(const std::string& name, Span s) {
    fail(Errc::ScopeError, "unbound name '" + name + "'", s);
  }

  std::optional<std::size_t> lookup_comp(const std::string& name) const {
    for (std::size_t i = comp_scope.size(); i > 0; i--)
      if (comp_scope[i - 1] == name) return comp_scope.size() - i;
    return std::nullopt;
  }
  std::optional<std::size_t> lookup_dom(const std::string& name) const {
    for (std::size_t i = dom_scope.size(); i > 0; i--)
      if (dom_scope[i - 1] == name) return dom_scope.size() - i;
    return std::nullopt;
  }

  std::optional<DomConst> dom_const(const std::string& name) const {
    if (mode == Mode::Simple) {
      if (name == "lam") return DomConst::Lam;
      if (name == "app") return DomConst::App;
    } else {
      if (name == "o") return DomConst::O;
      if (name == "arr") return DomConst::Arr;
      if (name == "lam") return DomConst::DLam;
      if (name == "app") return DomConst::DApp;
    }
    return std::nullopt;
  }

  // --- domain types ---

  DomTypePtr parse_dom_type() {
    DomTypePtr lhs = parse_dom_type_atom();
    if (eat(Tok::BranchArrow)) return dt_arrow(lhs, parse_dom_type());
    return lhs;
  }

  DomTypePtr parse_dom_type_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwTm:
        next();
        return dt_tm();
      case Tok::KwTy:
        next();
        return dt_ty();
      case Tok::KwTrm: {
        next();
        return dt_trm(parse_dom_atom());
      }
      case Tok::KwPi: {
        next();
        Token name = expect(Tok::Ident, "binder name");
        expect(Tok::Colon, "':'");
        DomTypePtr dom = parse_dom_type();
        expect(Tok::Dot, "'.'");
        dom_scope.push_back(name.text);
        DomTypePtr cod = parse_dom_type();
        dom_scope.pop_back();
        return dt_pi(dom, cod);
      }
      case Tok::LParen: {
        next();
        DomTypePtr inner = parse_dom_type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(Errc::SyntaxError, "expected a domain type", t.span);
    }
  }

  // --- domain terms ---

  DomTermPtr parse_dom_term() {
    DomTermPtr head = parse_dom_head();
    while (dom_atom_ahead()) head = dm_app(head, parse_dom_atom());
    return head;
  }

  bool dom_atom_ahead() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Lambda:
      case Tok::KwUnbox:
      case Tok::LParen:
        return true;
      default:
        return false;
    }
  }

  // parses an atom; a dep-mode constant head consumes its argument atoms
  DomTermPtr parse_dom_head() {
    if (at(Tok::Ident)) {
      const Token& t = peek();
      if (!lookup_dom(t.text)) {
        if (auto c = dom_const(t.text)) {
          next();
          int arity = dom_const_arity(mode, *c);
          std::vector<DomTermPtr> args;
          for (int k = 0; k < arity && dom_atom_ahead(); k++) args.push_back(parse_dom_atom());
          if (static_cast<int>(args.size()) != arity)
            fail(Errc::ArityMismatch,
                 "constant '" + t.text + "' expects " + std::to_string(arity) + " arguments",
                 t.span);
          return dm_const(*c, std::move(args));
        }
      }
    }
    return parse_dom_atom();
  }

  DomTermPtr parse_dom_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        if (auto i = lookup_dom(t.text)) return dm_var(*i);
        if (auto c = dom_const(t.text)) {
          if (dom_const_arity(mode, *c) == 0) return dm_const(*c);
          fail(Errc::ArityMismatch, "constant '" + t.text + "' must be fully applied", t.span);
        }
        scope_error(t.text, t.span);
      }
      case Tok::Lambda: {
        next();
        Token name = expect(Tok::Ident, "binder name");
        expect(Tok::Dot, "'.'");
        dom_scope.push_back(name.text);
        DomTermPtr body = parse_dom_term();
        dom_scope.pop_back();
        return dm_lam(body);
      }
      case Tok::KwUnbox: {
        next();
        expect(Tok::LParen, "'('");
        CompTermPtr comp = parse_comp_term();
        expect(Tok::Semi, "';'");
        DomSubstPtr s = parse_dom_subst();
        expect(Tok::RParen, "')'");
        return dm_unbox(comp, s);
      }
      case Tok::LParen: {
        next();
        DomTermPtr inner = parse_dom_term();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(Errc::SyntaxError, "expected a domain term", t.span);
    }
  }

  DomSubstPtr parse_dom_subst() {
    DomSubstPtr s;
    if (eat(Tok::Dot)) {
      s = ds_empty();
    } else if (eat(Tok::KwWk)) {
      Token n = expect(Tok::Number, "weakening offset");
      s = ds_weaken(static_cast<std::size_t>(std::stoull(n.text)));
    } else {
      fail(Errc::SyntaxError, "expected '.' or 'wk' to start a substitution", peek().span);
    }
    while (eat(Tok::Comma)) s = ds_snoc(s, parse_dom_term());
    return s;
  }

  // --- domain contexts ---

  // Parses a context expression and pushes its entries onto dom_scope
  // (pop count returned). Heads can be '.' or a ctx-annotated name; a leading
  // declaration "x:A" stands for an empty head.
  DomCtxPtr parse_dom_ctx(std::size_t& pushed) {
    DomCtxPtr c;
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon) {
      Token name = next();
      next();  // colon
      DomTypePtr ty = parse_dom_type();
      c = dc_snoc(dc_empty(), ty);
      dom_scope.push_back(name.text);
      pushed++;
    } else {
      c = parse_dom_ctx_head(pushed);
    }
    while (eat(Tok::Comma)) {
      Token name = expect(Tok::Ident, "variable name");
      expect(Tok::Colon, "':'");
      DomTypePtr ty = parse_dom_type();
      c = dc_snoc(c, ty);
      dom_scope.push_back(name.text);
      pushed++;
    }
    return c;
  }

  DomCtxPtr parse_dom_ctx_head(std::size_t& pushed) {
    const Token& t = peek();
    if (eat(Tok::Dot)) return dc_empty();
    if (at(Tok::LParen)) {
      next();
      DomCtxPtr inner = parse_dom_ctx(pushed);
      expect(Tok::RParen, "')'");
      // entries stay in scope for the caller's trailing extensions
      return inner;
    }
    if (at(Tok::Ident)) {
      next();
      if (auto i = lookup_comp(t.text)) return dc_var(*i);
      if (decls) {
        auto it = decls->find(t.text);
        if (it != decls->end() && std::holds_alternative<DomCtxPtr>(it->second.body))
          return std::get<DomCtxPtr>(it->second.body);
      }
      scope_error(t.text, t.span);
    }
    fail(Errc::SyntaxError, "expected a domain context", t.span);
  }

  DomCtxPtr parse_dom_ctx_scoped() {
    std::size_t pushed = 0;
    DomCtxPtr c = parse_dom_ctx(pushed);
    for (std::size_t i = 0; i < pushed; i++) dom_scope.pop_back();
    return c;
  }

  // --- computation types ---

  CompTypePtr parse_comp_type() {
    const Token& t = peek();
    if (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      next();
      Token name = next();
      next(); // colon
      AnnType param = parse_ann_type();
      expect(Tok::RParen, "')'");
      expect(Tok::FatArrow, "'=>'");
      comp_scope.push_back(name.text);
      CompTypePtr result = parse_comp_type();
      comp_scope.pop_back();
      return ct_fn(param, result);
    }
    if (at(Tok::LBracket)) {
      next();
      std::size_t pushed = 0;
      DomCtxPtr ctx = parse_dom_ctx(pushed);
      CtxKind kind;
      if (eat(Tok::Turnstile)) kind = CtxKind::Term;
      else if (eat(Tok::TurnstileHash)) kind = CtxKind::Variable;
      else fail(Errc::SyntaxError, "expected '|-' or '|-#'", peek().span);
      DomTypePtr ty = parse_dom_type();
      for (std::size_t i = 0; i < pushed; i++) dom_scope.pop_back();
      expect(Tok::RBracket, "']'");
      return ct_box(kind, ctx, ty);
    }
    if (at(Tok::LParen)) {
      next();
      CompTypePtr inner = parse_comp_type();
      expect(Tok::RParen, "')'");
      return inner;
    }
    fail(Errc::SyntaxError, "expected a computation type", t.span);
  }

  AnnType parse_ann_type() {
    if (eat(Tok::KwCtx)) return ann_ctx();
    return ann(parse_comp_type());
  }

  // --- computation terms ---

  CompTermPtr parse_comp_term() {
    CompTermPtr head = parse_comp_head();
    while (comp_atom_ahead()) {
      if (at(Tok::Dot)) {
        next();
        head = cm_app(head, CompArg(dc_empty()));
        continue;
      }
      if (at(Tok::LParen)) {
        auto arg = parse_paren_term_or_ctx();
        head = cm_app(head, std::move(arg));
        continue;
      }
      head = cm_app(head, CompArg(parse_comp_atom()));
    }
    return head;
  }

  bool comp_atom_ahead() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::KwBox:
      case Tok::LParen:
      case Tok::Dot:
        return true;
      default:
        return false;
    }
  }

  CompTermPtr parse_comp_head() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwFn: {
        next();
        Token name = expect(Tok::Ident, "binder name");
        expect(Tok::Dot, "'.'");
        comp_scope.push_back(name.text);
        CompTermPtr body = parse_comp_term();
        comp_scope.pop_back();
        return cm_fn(body);
      }
      case Tok::KwRec:
        return parse_rec();
      default:
        return parse_comp_atom();
    }
  }

  CompTermPtr parse_comp_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: {
        next();
        if (auto i = lookup_comp(t.text)) return cm_var(*i);
        if (decls) {
          auto it = decls->find(t.text);
          if (it != decls->end() && std::holds_alternative<CompTermPtr>(it->second.body))
            return cm_ref(t.text);
        }
        scope_error(t.text, t.span);
      }
      case Tok::KwBox: {
        next();
        expect(Tok::LParen, "'('");
        std::vector<std::string> names;
        if (!at(Tok::Turnstile)) {
          names.push_back(expect(Tok::Ident, "variable name").text);
          while (eat(Tok::Comma)) names.push_back(expect(Tok::Ident, "variable name").text);
        }
        expect(Tok::Turnstile, "'|-'");
        for (auto& n : names) dom_scope.push_back(n);
        DomTermPtr body = parse_dom_term();
        for (std::size_t i = 0; i < names.size(); i++) dom_scope.pop_back();
        expect(Tok::RParen, "')'");
        return cm_box(std::move(names), body);
      }
      case Tok::LParen: {
        auto arg = parse_paren_term_or_ctx();
        if (auto* tm = std::get_if<CompTermPtr>(&arg)) return *tm;
        fail(Errc::SyntaxError, "context expression not allowed here", t.span);
      }
      default:
        fail(Errc::SyntaxError, "expected a computation term", t.span);
    }
  }

  // After '(', decide between a parenthesized term and a context argument.
  CompArg parse_paren_term_or_ctx() {
    expect(Tok::LParen, "'('");
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon) {
      DomCtxPtr c = parse_dom_ctx_scoped();
      expect(Tok::RParen, "')'");
      return CompArg(c);
    }
    if (at(Tok::Dot)) {
      next();
      DomCtxPtr c = dc_empty();
      std::size_t pushed = 0;
      while (eat(Tok::Comma)) {
        Token name = expect(Tok::Ident, "variable name");
        expect(Tok::Colon, "':'");
        c = dc_snoc(c, parse_dom_type());
        dom_scope.push_back(name.text);
        pushed++;
      }
      for (std::size_t i = 0; i < pushed; i++) dom_scope.pop_back();
      expect(Tok::RParen, "')'");
      return CompArg(c);
    }
    CompTermPtr tm = parse_comp_term();
    if (at(Tok::Comma)) {
      auto* v = std::get_if<CompTerm::Var>(&tm->v);
      if (!v) fail(Errc::SyntaxError, "expected a context variable before ','", peek().span);
      DomCtxPtr c = dc_var(v->index);
      std::size_t pushed = 0;
      while (eat(Tok::Comma)) {
        Token name = expect(Tok::Ident, "variable name");
        expect(Tok::Colon, "':'");
        c = dc_snoc(c, parse_dom_type());
        dom_scope.push_back(name.text);
        pushed++;
      }
      for (std::size_t i = 0; i < pushed; i++) dom_scope.pop_back();
      expect(Tok::RParen, "')'");
      return CompArg(c);
    }
    expect(Tok::RParen, "')'");
    return CompArg(tm);
  }

  CompTermPtr parse_rec() {
    expect(Tok::KwRec, "'rec'");
    expect(Tok::LAngle, "'<'");
    CompTypePtr motive = parse_comp_type();
    expect(Tok::RAngle, "'>'");
    expect(Tok::LParen, "'('");
    std::vector<RecBranch> branches;
    while (true) {
      branches.push_back(parse_branch());
      if (!eat(Tok::Semi)) break;
    }
    expect(Tok::RParen, "')'");
    DomCtxPtr ctx_arg = parse_ctx_atom();
    CompTermPtr first = parse_comp_atom();
    CompTermPtr scrut_ty, scrut;
    if (mode == Mode::Dep && branches.size() == 3) {
      scrut_ty = first;
      scrut = parse_comp_atom();
    } else {
      scrut = first;
    }
    return cm_rec(motive, std::move(branches), ctx_arg, scrut_ty, scrut);
  }

  RecBranch parse_branch() {
    expect(Tok::LParen, "'('");
    std::vector<std::string> binders;
    binders.push_back(expect(Tok::Ident, "binder name").text);
    while (eat(Tok::Comma)) binders.push_back(expect(Tok::Ident, "binder name").text);
    expect(Tok::BranchArrow, "'->'");
    for (auto& b : binders) comp_scope.push_back(b);
    CompTermPtr body = parse_comp_term();
    for (std::size_t i = 0; i < binders.size(); i++) comp_scope.pop_back();
    expect(Tok::RParen, "')'");
    return RecBranch{binders.size(), body};
  }

  DomCtxPtr parse_ctx_atom() {
    if (eat(Tok::Dot)) return dc_empty();
    if (at(Tok::Ident)) {
      Token t = next();
      if (auto i = lookup_comp(t.text)) return dc_var(*i);
      if (decls) {
        auto it = decls->find(t.text);
        if (it != decls->end() && std::holds_alternative<DomCtxPtr>(it->second.body))
          return std::get<DomCtxPtr>(it->second.body);
      }
      scope_error(t.text, t.span);
    }
    if (at(Tok::LParen)) {
      next();
      DomCtxPtr c = parse_dom_ctx_scoped();
      expect(Tok::RParen, "')'");
      return c;
    }
    fail(Errc::SyntaxError, "expected a context", peek().span);
  }
};

Expectation parse_expectation(const Directive& d, Parser& p) {
  Expectation e;
  const std::string& v = d.value;
  if (v == "ok") {
    e.kind = Expectation::Kind::Ok;
  } else if (v.rfind("type-error", 0) == 0) {
    e.kind = Expectation::Kind::TypeError;
    std::size_t sp = v.find_first_of(" \t", 10);
    if (sp != std::string::npos) {
      std::size_t a = v.find_first_not_of(" \t", sp);
      if (a != std::string::npos) e.error_class = v.substr(a);
    }
  } else if (v.rfind("eval:", 0) == 0) {
    e.kind = Expectation::Kind::Eval;
    std::string term_src = v.substr(5);
    LexOutput sub = lex(term_src);
    Parser sp{sub.tokens, 0, p.mode};
    sp.decls = p.decls;
    e.eval_term = sp.parse_comp_term();
    if (!sp.at(Tok::End))
      fail(Errc::SyntaxError, "trailing input in eval expectation", d.span);
  } else {
    fail(Errc::SyntaxError, "unknown expectation '" + v + "'", d.span);
  }
  return e;
}

}  // namespace

SourceFile parse(const std::string& text, Mode default_mode) {
  LexOutput lx = lex(text);
  SourceFile out;
  out.mode = default_mode;

  // mode directives apply to the whole file
  for (auto& [at, d] : lx.directives) {
    if (d.key == "mode") {
      if (d.value == "simple") out.mode = Mode::Simple;
      else if (d.value == "dep") out.mode = Mode::Dep;
      else fail(Errc::SyntaxError, "unknown mode '" + d.value + "'", d.span);
      out.mode_explicit = true;
    }
  }

  Parser p{lx.tokens, 0, out.mode};
  std::map<std::string, DeclValue> decl_table;
  p.decls = &decl_table;

  // expectation directives attach to the declaration they precede, or to
  // the one whose last line they share
  std::size_t dir_idx = 0;
  auto pending_expectation = [&](std::size_t start_pos, int end_line)
      -> std::optional<Directive> {
    std::optional<Directive> found;
    while (dir_idx < lx.directives.size()) {
      auto& [tokpos, d] = lx.directives[dir_idx];
      bool before = tokpos <= start_pos;
      bool same_line = tokpos <= p.pos && d.span.line == end_line;
      if (!before && !same_line) break;
      if (d.key == "expect") found = d;
      dir_idx++;
    }
    return found;
  };

  while (!p.at(Tok::End)) {
    std::size_t start_pos = p.pos;
    Token kw = p.expect(Tok::KwDef, "'def'");
    Token name = p.expect(Tok::Ident, "declaration name");
    if (decl_table.count(name.text))
      fail(Errc::ScopeError, "duplicate declaration '" + name.text + "'", name.span);
    p.expect(Tok::Colon, "':'");
    AnnType asc = p.parse_ann_type();
    p.expect(Tok::Equals, "'='");
    CompArg body = asc.is_ctx() ? CompArg(p.parse_dom_ctx_scoped())
                                : CompArg(p.parse_comp_term());
    Token semi = p.expect(Tok::Semi, "';'");

    Declaration d;
    d.name = name.text;
    d.span = kw.span;
    d.ascription = asc;
    d.body = body;
    if (auto dir = pending_expectation(start_pos, semi.span.line))
      d.expect = parse_expectation(*dir, p);
    decl_table[name.text] = DeclValue{asc, body};
    out.decls.push_back(std::move(d));
  }
  return out;
}

DeclTable decl_table(const SourceFile& f) {
  DeclTable out;
  for (auto& d : f.decls) out[d.name] = DeclDef{d.ascription, d.body};
  return out;
}

CompTermPtr parse_comp_term(const std::string& text, Mode mode) {
  LexOutput lx = lex(text);
  Parser p{lx.tokens, 0, mode};
  CompTermPtr t = p.parse_comp_term();
  if (!p.at(Tok::End)) fail(Errc::SyntaxError, "trailing input", p.peek().span);
  return t;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

struct Printer {
  Mode mode;
  std::vector<std::string> comp_names;
  std::vector<std::string> dom_names;
  std::set<std::string> used;
  int counter = 0;

  void reserve_refs(const CompTermPtr& t) {
    std::visit(overloaded{[&](const CompTerm::Ref& x) { used.insert(x.name); },
                          [&](const CompTerm::BoxC& x) { reserve_refs_dom(x.body); },
                          [&](const CompTerm::Fn& x) { reserve_refs(x.body); },
                          [&](const CompTerm::App& x) {
                            reserve_refs(x.fun);
                            if (auto* y = std::get_if<CompTermPtr>(&x.arg)) reserve_refs(*y);
                          },
                          [&](const CompTerm::Rec& x) {
                            for (auto& b : x.branches) reserve_refs(b.body);
                            if (x.scrut_ty) reserve_refs(x.scrut_ty);
                            reserve_refs(x.scrut);
                          },
                          [&](const CompTerm::Var&) {}},
               t->v);
  }
  void reserve_refs_dom(const DomTermPtr& t) {
    std::visit(overloaded{[&](const DomTerm::Lam& x) { reserve_refs_dom(x.body); },
                          [&](const DomTerm::App& x) {
                            reserve_refs_dom(x.fun);
                            reserve_refs_dom(x.arg);
                          },
                          [&](const DomTerm::Const& x) {
                            for (auto& a : x.args) reserve_refs_dom(a);
                          },
                          [&](const DomTerm::Unbox& x) { reserve_refs(x.comp); },
                          [&](const DomTerm::Var&) {}},
               t->v);
  }

  std::string fresh(const char* base) {
    while (true) {
      std::string cand = base + std::to_string(counter++);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
  }

  void push_comp(const std::string& n) { comp_names.push_back(n); used.insert(n); }
  void pop_comp() { comp_names.pop_back(); }
  void push_dom(const std::string& n) { dom_names.push_back(n); used.insert(n); }
  void pop_dom() { dom_names.pop_back(); }

  std::string comp_name(std::size_t idx) const {
    if (idx < comp_names.size()) return comp_names[comp_names.size() - 1 - idx];
    return "?y" + std::to_string(idx);
  }
  std::string dom_name(std::size_t idx) const {
    if (idx < dom_names.size()) return dom_names[dom_names.size() - 1 - idx];
    return "?x" + std::to_string(idx);
  }

  // --- domain types ---
  std::string dom_type(const DomTypePtr& a, bool atom) {
    return std::visit(
        overloaded{
            [&](const DomType::Tm&) -> std::string { return "tm"; },
            [&](const DomType::Arrow& x) {
              std::string s = dom_type(x.dom, true) + " -> " + dom_type(x.cod, false);
              return atom ? "(" + s + ")" : s;
            },
            [&](const DomType::Ty&) -> std::string { return "ty"; },
            [&](const DomType::Trm& x) {
              std::string s = "trm " + dom_term(x.body, true);
              return atom ? "(" + s + ")" : s;
            },
            [&](const DomType::Pi& x) {
              std::string n = fresh("x");
              std::string dom = dom_type(x.dom, false);
              push_dom(n);
              std::string cod = dom_type(x.cod, false);
              pop_dom();
              std::string s = "Pi " + n + ":" + dom + ". " + cod;
              return atom ? "(" + s + ")" : s;
            }},
        a->v);
  }

  // --- domain terms ---
  std::string dom_term(const DomTermPtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const DomTerm::Var& x) { return dom_name(x.index); },
            [&](const DomTerm::Lam& x) {
              std::string n = fresh("x");
              push_dom(n);
              std::string body = dom_term(x.body, false);
              pop_dom();
              std::string s = "\\" + n + ". " + body;
              return atom ? "(" + s + ")" : s;
            },
            [&](const DomTerm::App& x) {
              std::string s = dom_term(x.fun, false);
              // the head must not be a lambda without parens
              if (std::holds_alternative<DomTerm::Lam>(x.fun->v))
                s = "(" + s + ")";
              s += " " + dom_term(x.arg, true);
              return atom ? "(" + s + ")" : s;
            },
            [&](const DomTerm::Const& x) {
              std::string s{dom_const_name(x.name)};
              for (auto& a : x.args) s += " " + dom_term(a, true);
              return (atom && !x.args.empty()) ? "(" + s + ")" : s;
            },
            [&](const DomTerm::Unbox& x) {
              return "unbox(" + comp_term(x.comp, false) + "; " + dom_subst(x.subst) + ")";
            }},
        t->v);
  }

  std::string dom_subst(const DomSubstPtr& s) {
    return std::visit(
        overloaded{
            [&](const DomSubst::Empty&) -> std::string { return "."; },
            [&](const DomSubst::Weaken& x) { return "wk " + std::to_string(x.count); },
            [&](const DomSubst::Snoc& x) {
              return dom_subst(x.prefix) + ", " + dom_term(x.term, false);
            }},
        s->v);
  }

  // --- contexts; returns entry names pushed onto dom scope ---
  std::string dom_ctx(const DomCtxPtr& c, std::size_t& pushed) {
    return std::visit(
        overloaded{
            [&](const DomCtx::Empty&) -> std::string { return "."; },
            [&](const DomCtx::CtxVar& x) { return comp_name(x.comp_index); },
            [&](const DomCtx::Snoc& x) {
              std::string prefix = dom_ctx(x.prefix, pushed);
              std::string ty = dom_type(x.type, false);
              std::string n = fresh("x");
              push_dom(n);
              pushed++;
              return prefix + ", " + n + ":" + ty;
            }},
        c->v);
  }

  std::string dom_ctx_scoped(const DomCtxPtr& c) {
    std::size_t pushed = 0;
    std::string s = dom_ctx(c, pushed);
    for (std::size_t i = 0; i < pushed; i++) pop_dom();
    return s;
  }

  // --- computation types ---
  std::string comp_type(const CompTypePtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const CompType::BoxT& x) {
              std::size_t pushed = 0;
              std::string ctx = dom_ctx(x.ct.ctx, pushed);
              std::string ty = dom_type(x.ct.type, false);
              for (std::size_t i = 0; i < pushed; i++) pop_dom();
              const char* sep = x.ct.kind == CtxKind::Term ? " |- " : " |-# ";
              return "[" + ctx + sep + ty + "]";
            },
            [&](const CompType::Fn& x) {
              std::string n = fresh("y");
              std::string param = x.param.is_ctx() ? "ctx" : comp_type(x.param.type, false);
              push_comp(n);
              std::string result = comp_type(x.result, false);
              pop_comp();
              std::string s = "(" + n + ":" + param + ") => " + result;
              return atom ? "(" + s + ")" : s;
            }},
        t->v);
  }

  // --- computation terms ---
  std::string comp_term(const CompTermPtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const CompTerm::Var& x) { return comp_name(x.index); },
            [&](const CompTerm::Ref& x) { return x.name; },
            [&](const CompTerm::BoxC& x) {
              std::string names;
              for (std::size_t i = 0; i < x.names.size(); i++) {
                if (i) names += ", ";
                names += x.names[i];
              }
              for (auto& n : x.names) push_dom(n);
              std::string body = dom_term(x.body, false);
              for (std::size_t i = 0; i < x.names.size(); i++) pop_dom();
              return "box(" + names + " |- " + body + ")";
            },
            [&](const CompTerm::Fn& x) {
              std::string n = fresh("y");
              push_comp(n);
              std::string body = comp_term(x.body, false);
              pop_comp();
              std::string s = "fn " + n + ". " + body;
              return atom ? "(" + s + ")" : s;
            },
            [&](const CompTerm::App& x) {
              std::string fun = comp_term(x.fun, false);
              if (std::holds_alternative<CompTerm::Fn>(x.fun->v) ||
                  std::holds_alternative<CompTerm::Rec>(x.fun->v))
                fun = "(" + fun + ")";
              std::string arg = std::visit(
                  overloaded{[&](const CompTermPtr& y) { return comp_term(y, true); },
                             [&](const DomCtxPtr& y) {
                               std::string s = dom_ctx_scoped(y);
                               if (std::holds_alternative<DomCtx::Snoc>(y->v))
                                 s = "(" + s + ")";
                               return s;
                             }},
                  x.arg);
              std::string s = fun + " " + arg;
              return atom ? "(" + s + ")" : s;
            },
            [&](const CompTerm::Rec& x) {
              std::string s = "rec<" + comp_type(x.motive, false) + ">(";
              for (std::size_t i = 0; i < x.branches.size(); i++) {
                if (i) s += "; ";
                s += branch(x.branches[i]);
              }
              s += ") ";
              std::string ctx = dom_ctx_scoped(x.ctx_arg);
              if (std::holds_alternative<DomCtx::Snoc>(x.ctx_arg->v)) ctx = "(" + ctx + ")";
              s += ctx;
              if (x.scrut_ty) s += " " + comp_term(x.scrut_ty, true);
              s += " " + comp_term(x.scrut, true);
              return atom ? "(" + s + ")" : s;
            }},
        t->v);
  }

  std::string branch(const RecBranch& b) {
    std::vector<std::string> names;
    std::string s = "(";
    for (std::size_t i = 0; i < b.binders; i++) {
      std::string n = fresh("y");
      names.push_back(n);
      if (i) s += ", ";
      s += n;
    }
    for (auto& n : names) push_comp(n);
    s += " -> " + comp_term(b.body, false) + ")";
    for (std::size_t i = 0; i < b.binders; i++) pop_comp();
    return s;
  }
};

}  // namespace

std::string print_comp_term(const CompTermPtr& t, Mode mode) {
  Printer p{mode};
  p.reserve_refs(t);
  return p.comp_term(t, false);
}
std::string print_comp_type(const CompTypePtr& t, Mode mode) {
  Printer p{mode};
  return p.comp_type(t, false);
}
std::string print_ann_type(const AnnType& t, Mode mode) {
  if (t.is_ctx()) return "ctx";
  return print_comp_type(t.type, mode);
}
std::string print_dom_term(const DomTermPtr& t, Mode mode) {
  Printer p{mode};
  return p.dom_term(t, false);
}
std::string print_dom_type(const DomTypePtr& t, Mode mode) {
  Printer p{mode};
  return p.dom_type(t, false);
}
std::string print_dom_ctx(const DomCtxPtr& c, Mode mode) {
  Printer p{mode};
  return p.dom_ctx_scoped(c);
}

std::string print(const SourceFile& f) {
  std::ostringstream os;
  os << "-- mode: " << (f.mode == Mode::Simple ? "simple" : "dep") << "\n";
  for (auto& d : f.decls) {
    Printer p{f.mode};
    if (auto* t0 = std::get_if<CompTermPtr>(&d.body)) p.reserve_refs(*t0);
    os << "def " << d.name << " : " << print_ann_type(d.ascription, f.mode) << " =\n  ";
    if (auto* t = std::get_if<CompTermPtr>(&d.body)) os << p.comp_term(*t, false);
    else os << p.dom_ctx_scoped(std::get<DomCtxPtr>(d.body));
    os << ";\n";
  }
  return os.str();
}

}  // namespace cocon
