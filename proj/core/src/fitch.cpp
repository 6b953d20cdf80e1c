#include "cocon/fitch.hpp"

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

FTermPtr ft_var(std::size_t i) { return std::make_shared<FTerm>(FTerm{FTerm::Var{i}}); }
FTermPtr ft_lam(FTermPtr body) { return std::make_shared<FTerm>(FTerm{FTerm::Lam{std::move(body)}}); }
FTermPtr ft_app(FTermPtr f, FTermPtr a) {
  return std::make_shared<FTerm>(FTerm{FTerm::App{std::move(f), std::move(a)}});
}
FTermPtr ft_box(FTermPtr body) {
  return std::make_shared<FTerm>(FTerm{FTerm::BoxIntro{std::move(body)}});
}
FTermPtr ft_unbox(FTermPtr body) {
  return std::make_shared<FTerm>(FTerm{FTerm::Unbox{std::move(body)}});
}
FTermPtr ft_unit() { return std::make_shared<FTerm>(FTerm{FTerm::UnitTuple{}}); }
FTermPtr ft_pair(FTermPtr a, FTermPtr b) {
  return std::make_shared<FTerm>(FTerm{FTerm::Pair{std::move(a), std::move(b)}});
}
FTermPtr ft_proj(int which, FTermPtr body) {
  return std::make_shared<FTerm>(FTerm{FTerm::Proj{which, std::move(body)}});
}
FTermPtr ft_const(std::string name, std::vector<FTermPtr> args) {
  return std::make_shared<FTerm>(FTerm{FTerm::Const{std::move(name), std::move(args)}});
}
FTypePtr fty_pi(FTypePtr dom, FTypePtr cod) {
  return std::make_shared<FType>(FType{FType::Pi{std::move(dom), std::move(cod)}});
}
FTypePtr fty_box(FTypePtr body) {
  return std::make_shared<FType>(FType{FType::BoxT{std::move(body)}});
}
FTypePtr fty_el(FTermPtr code) {
  return std::make_shared<FType>(FType{FType::El{std::move(code)}});
}
FTypePtr fty_univ() { return std::make_shared<FType>(FType{FType::Univ{}}); }

// ---------------------------------------------------------------------------
// Structural operations

bool fequal_syntax(const FTermPtr& a, const FTermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const FTerm::Var& x) { return x.index == std::get<FTerm::Var>(b->v).index; },
          [&](const FTerm::Lam& x) { return fequal_syntax(x.body, std::get<FTerm::Lam>(b->v).body); },
          [&](const FTerm::App& x) {
            auto& y = std::get<FTerm::App>(b->v);
            return fequal_syntax(x.fun, y.fun) && fequal_syntax(x.arg, y.arg);
          },
          [&](const FTerm::BoxIntro& x) {
            return fequal_syntax(x.body, std::get<FTerm::BoxIntro>(b->v).body);
          },
          [&](const FTerm::Unbox& x) {
            return fequal_syntax(x.body, std::get<FTerm::Unbox>(b->v).body);
          },
          [&](const FTerm::UnitTuple&) { return true; },
          [&](const FTerm::Pair& x) {
            auto& y = std::get<FTerm::Pair>(b->v);
            return fequal_syntax(x.fst, y.fst) && fequal_syntax(x.snd, y.snd);
          },
          [&](const FTerm::Proj& x) {
            auto& y = std::get<FTerm::Proj>(b->v);
            return x.which == y.which && fequal_syntax(x.body, y.body);
          },
          [&](const FTerm::Const& x) {
            auto& y = std::get<FTerm::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!fequal_syntax(x.args[i], y.args[i])) return false;
            return true;
          }},
      a->v);
}

namespace {

// Index traversals track lock frames: a box opens a frame, and an unbox body
// lives in the frame before the last lock, so binders of the innermost frame
// do not contribute to indices inside it.
struct Frames {
  std::vector<std::size_t> fs{0};
  std::size_t depth() const {
    std::size_t d = 0;
    for (auto f : fs) d += f;
    return d;
  }
};

FTermPtr funbox_node(FTermPtr body) {
  // unbox of a literal box is resolved on the spot
  if (auto* bx = std::get_if<FTerm::BoxIntro>(&body->v)) return bx->body;
  return ft_unbox(std::move(body));
}

struct FShift {
  std::int64_t amount;
  std::size_t cutoff;
  FTermPtr on(const FTermPtr& t, Frames& fr) const {
    return std::visit(
        overloaded{
            [&](const FTerm::Var& x) -> FTermPtr {
              std::size_t c = cutoff + fr.depth();
              if (x.index < c) return t;
              std::int64_t j = static_cast<std::int64_t>(x.index) + amount;
              if (j < 0) fail(Errc::NegativeIndex, "fitch index would become negative");
              return ft_var(static_cast<std::size_t>(j));
            },
            [&](const FTerm::Lam& x) {
              fr.fs.back()++;
              FTermPtr b = on(x.body, fr);
              fr.fs.back()--;
              return ft_lam(b);
            },
            [&](const FTerm::App& x) { return ft_app(on(x.fun, fr), on(x.arg, fr)); },
            [&](const FTerm::BoxIntro& x) {
              fr.fs.push_back(0);
              FTermPtr b = on(x.body, fr);
              fr.fs.pop_back();
              return ft_box(b);
            },
            [&](const FTerm::Unbox& x) -> FTermPtr {
              if (fr.fs.size() == 1) return funbox_node(on(x.body, fr));
              std::size_t saved = fr.fs.back();
              fr.fs.pop_back();
              FTermPtr b = on(x.body, fr);
              fr.fs.push_back(saved);
              return funbox_node(b);
            },
            [&](const FTerm::UnitTuple&) { return t; },
            [&](const FTerm::Pair& x) { return ft_pair(on(x.fst, fr), on(x.snd, fr)); },
            [&](const FTerm::Proj& x) { return ft_proj(x.which, on(x.body, fr)); },
            [&](const FTerm::Const& x) {
              std::vector<FTermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, fr));
              return ft_const(x.name, std::move(args));
            }},
        t->v);
  }
  FTypePtr on_ty(const FTypePtr& t, Frames& fr) const {
    return std::visit(
        overloaded{[&](const FType::Pi& x) {
                     FTypePtr d = on_ty(x.dom, fr);
                     fr.fs.back()++;
                     FTypePtr c = on_ty(x.cod, fr);
                     fr.fs.back()--;
                     return fty_pi(d, c);
                   },
                   [&](const FType::BoxT& x) {
                     fr.fs.push_back(0);
                     FTypePtr b = on_ty(x.body, fr);
                     fr.fs.pop_back();
                     return fty_box(b);
                   },
                   [&](const FType::El& x) { return fty_el(on(x.code, fr)); },
                   [&](const FType::Univ&) { return t; }},
        t->v);
  }
};

struct FSubst {
  const FTermPtr& value;
  std::size_t index;
  FTermPtr on(const FTermPtr& t, Frames& fr) const {
    return std::visit(
        overloaded{
            [&](const FTerm::Var& x) -> FTermPtr {
              std::size_t lo = index + fr.depth();
              if (x.index < lo) return t;
              if (x.index == lo)
                return fshift(value, 0, static_cast<std::int64_t>(fr.depth()));
              return ft_var(x.index - 1);
            },
            [&](const FTerm::Lam& x) {
              fr.fs.back()++;
              FTermPtr b = on(x.body, fr);
              fr.fs.back()--;
              return ft_lam(b);
            },
            [&](const FTerm::App& x) { return ft_app(on(x.fun, fr), on(x.arg, fr)); },
            [&](const FTerm::BoxIntro& x) {
              fr.fs.push_back(0);
              FTermPtr b = on(x.body, fr);
              fr.fs.pop_back();
              return ft_box(b);
            },
            [&](const FTerm::Unbox& x) -> FTermPtr {
              if (fr.fs.size() == 1) return funbox_node(on(x.body, fr));
              std::size_t saved = fr.fs.back();
              fr.fs.pop_back();
              FTermPtr b = on(x.body, fr);
              fr.fs.push_back(saved);
              return funbox_node(b);
            },
            [&](const FTerm::UnitTuple&) { return t; },
            [&](const FTerm::Pair& x) { return ft_pair(on(x.fst, fr), on(x.snd, fr)); },
            [&](const FTerm::Proj& x) { return ft_proj(x.which, on(x.body, fr)); },
            [&](const FTerm::Const& x) {
              std::vector<FTermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, fr));
              return ft_const(x.name, std::move(args));
            }},
        t->v);
  }
  FTypePtr on_ty(const FTypePtr& t, Frames& fr) const {
    return std::visit(
        overloaded{[&](const FType::Pi& x) {
                     FTypePtr d = on_ty(x.dom, fr);
                     fr.fs.back()++;
                     FTypePtr c = on_ty(x.cod, fr);
                     fr.fs.back()--;
                     return fty_pi(d, c);
                   },
                   [&](const FType::BoxT& x) {
                     fr.fs.push_back(0);
                     FTypePtr b = on_ty(x.body, fr);
                     fr.fs.pop_back();
                     return fty_box(b);
                   },
                   [&](const FType::El& x) { return fty_el(on(x.code, fr)); },
                   [&](const FType::Univ&) { return t; }},
        t->v);
  }
};

}  // namespace

FTermPtr fshift(const FTermPtr& t, std::size_t cutoff, std::int64_t amount) {
  if (amount == 0) return t;
  Frames fr;
  return FShift{amount, cutoff}.on(t, fr);
}
FTypePtr fshift(const FTypePtr& t, std::size_t cutoff, std::int64_t amount) {
  if (amount == 0) return t;
  Frames fr;
  return FShift{amount, cutoff}.on_ty(t, fr);
}
FTermPtr fsubst(const FTermPtr& body, const FTermPtr& value, std::size_t index) {
  Frames fr;
  return FSubst{value, index}.on(body, fr);
}
FTypePtr fsubst(const FTypePtr& body, const FTermPtr& value, std::size_t index) {
  Frames fr;
  return FSubst{value, index}.on_ty(body, fr);
}

// ---------------------------------------------------------------------------
// Signature of codes

namespace {

struct FSigEntry {
  std::vector<FTypePtr> tele;  // entry i scoped over entries 0..i-1
  FTypePtr result;
};

const std::map<std::string, FSigEntry>& fitch_sig() {
  static const std::map<std::string, FSigEntry> sig = [] {
    std::map<std::string, FSigEntry> s;
    auto el = [](FTermPtr c) { return fty_el(std::move(c)); };
    s["Ctx"] = {{}, fty_univ()};
    s["top"] = {{}, el(ft_const("Ctx"))};
    s["ext"] = {{el(ft_const("Ctx")), fty_pi(el(ft_var(0)), fty_univ())},
                el(ft_const("Ctx"))};
    s["pi"] = {{fty_univ(), fty_pi(el(ft_var(0)), fty_univ())}, fty_univ()};
    // base bridge mirroring the dep-mode signature
    s["ty"] = {{}, fty_univ()};
    s["trm"] = {{el(ft_const("ty"))}, fty_univ()};
    s["o"] = {{}, el(ft_const("ty"))};
    s["arr"] = {{el(ft_const("ty")), el(ft_const("ty"))}, el(ft_const("ty"))};
    s["lam"] = {{el(ft_const("ty")), el(ft_const("ty")),
                 fty_pi(el(ft_const("trm", {ft_var(1)})), el(ft_const("trm", {ft_var(1)})))},
                el(ft_const("trm", {ft_const("arr", {ft_var(2), ft_var(1)})}))};
    s["app"] = {{el(ft_const("ty")), el(ft_const("ty")),
                 el(ft_const("trm", {ft_const("arr", {ft_var(1), ft_var(0)})})),
                 el(ft_const("trm", {ft_var(2)}))},
                el(ft_const("trm", {ft_var(2)}))};
    return s;
  }();
  return sig;
}

FTypePtr fopen(const FTypePtr& t, const std::vector<FTermPtr>& prefix_args) {
  // substitute telescope references: prefix_args[0] is the nearest entry
  FTypePtr out = t;
  for (auto& a : prefix_args) out = fsubst(out, a, 0);
  return out;
}

struct FNorm {
  long fuel;
  void spend() {
    if (--fuel < 0) fail(Errc::FuelExhausted, "step bound exceeded during normalization");
  }
  FTermPtr term(const FTermPtr& t) {
    return std::visit(
        overloaded{
            [&](const FTerm::Var&) { return t; },
            [&](const FTerm::Lam& x) -> FTermPtr {
              FTermPtr b = term(x.body);
              // eta
              if (auto* ap = std::get_if<FTerm::App>(&b->v)) {
                if (auto* v = std::get_if<FTerm::Var>(&ap->arg->v)) {
                  if (v->index == 0) {
                    // check the function part ignores the binder
                    try {
                      FTermPtr f0 = fshift(ap->fun, 0, -1);
                      if (fequal_syntax(fshift(f0, 0, 1), ap->fun)) {
                        spend();
                        return f0;
                      }
                    } catch (const Error&) {
                    }
                  }
                }
              }
              return ft_lam(b);
            },
            [&](const FTerm::App& x) -> FTermPtr {
              FTermPtr f = term(x.fun);
              FTermPtr a = term(x.arg);
              if (auto* l = std::get_if<FTerm::Lam>(&f->v)) {
                spend();
                return term(fsubst(l->body, a));
              }
              return ft_app(f, a);
            },
            [&](const FTerm::BoxIntro& x) { return ft_box(term(x.body)); },
            [&](const FTerm::Unbox& x) -> FTermPtr {
              FTermPtr b = term(x.body);
              if (auto* bx = std::get_if<FTerm::BoxIntro>(&b->v)) {
                spend();
                return bx->body;
              }
              return ft_unbox(b);
            },
            [&](const FTerm::UnitTuple&) { return t; },
            [&](const FTerm::Pair& x) { return ft_pair(term(x.fst), term(x.snd)); },
            [&](const FTerm::Proj& x) -> FTermPtr {
              FTermPtr b = term(x.body);
              if (auto* p = std::get_if<FTerm::Pair>(&b->v)) {
                spend();
                return x.which == 1 ? p->fst : p->snd;
              }
              return ft_proj(x.which, b);
            },
            [&](const FTerm::Const& x) {
              std::vector<FTermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(term(a));
              return ft_const(x.name, std::move(args));
            }},
        t->v);
  }
  FTypePtr type(const FTypePtr& t) {
    return std::visit(
        overloaded{[&](const FType::Pi& x) { return fty_pi(type(x.dom), type(x.cod)); },
                   [&](const FType::BoxT& x) { return fty_box(type(x.body)); },
                   [&](const FType::El& x) { return fty_el(term(x.code)); },
                   [&](const FType::Univ&) { return t; }},
        t->v);
  }
};

bool eq_nf(const FTermPtr& a, const FTermPtr& b) {
  if (fequal_syntax(a, b)) return true;
  auto* la = std::get_if<FTerm::Lam>(&a->v);
  auto* lb = std::get_if<FTerm::Lam>(&b->v);
  if (la && lb) return eq_nf(la->body, lb->body);
  if (la) return eq_nf(la->body, ft_app(fshift(b, 0, 1), ft_var(0)));
  if (lb) return eq_nf(ft_app(fshift(a, 0, 1), ft_var(0)), lb->body);
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const FTerm::Var& x) { return x.index == std::get<FTerm::Var>(b->v).index; },
          [&](const FTerm::Lam&) { return false; },
          [&](const FTerm::App& x) {
            auto& y = std::get<FTerm::App>(b->v);
            return eq_nf(x.fun, y.fun) && eq_nf(x.arg, y.arg);
          },
          [&](const FTerm::BoxIntro& x) {
            return eq_nf(x.body, std::get<FTerm::BoxIntro>(b->v).body);
          },
          [&](const FTerm::Unbox& x) { return eq_nf(x.body, std::get<FTerm::Unbox>(b->v).body); },
          [&](const FTerm::UnitTuple&) { return true; },
          [&](const FTerm::Pair& x) {
            auto& y = std::get<FTerm::Pair>(b->v);
            return eq_nf(x.fst, y.fst) && eq_nf(x.snd, y.snd);
          },
          [&](const FTerm::Proj& x) {
            auto& y = std::get<FTerm::Proj>(b->v);
            return x.which == y.which && eq_nf(x.body, y.body);
          },
          [&](const FTerm::Const& x) {
            auto& y = std::get<FTerm::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!eq_nf(x.args[i], y.args[i])) return false;
            return true;
          }},
      a->v);
}

bool eq_nf_ty(const FTypePtr& a, const FTypePtr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{[&](const FType::Pi& x) {
                   auto& y = std::get<FType::Pi>(b->v);
                   return eq_nf_ty(x.dom, y.dom) && eq_nf_ty(x.cod, y.cod);
                 },
                 [&](const FType::BoxT& x) {
                   return eq_nf_ty(x.body, std::get<FType::BoxT>(b->v).body);
                 },
                 [&](const FType::El& x) { return eq_nf(x.code, std::get<FType::El>(b->v).code); },
                 [&](const FType::Univ&) { return true; }},
      a->v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Checker

FTermPtr FitchChecker::normalize(const FTermPtr& t) const {
  FNorm n{fuel_};
  return n.term(t);
}
bool FitchChecker::equal(const FTermPtr& a, const FTermPtr& b) const {
  FNorm n{fuel_};
  return eq_nf(n.term(a), n.term(b));
}
bool FitchChecker::equal_types(const FTypePtr& a, const FTypePtr& b) const {
  FNorm n{fuel_};
  return eq_nf_ty(n.type(a), n.type(b));
}

void FitchChecker::check_type(const FCtx& g, const FTypePtr& t) const {
  std::visit(overloaded{[&](const FType::Pi& x) {
                          check_type(g, x.dom);
                          check_type(g.extended(x.dom), x.cod);
                        },
                        [&](const FType::BoxT& x) { check_type(g.locked(), x.body); },
                        [&](const FType::El& x) {
                          // codes live in the universe proper or in the
                          // context sub-universe
                          try {
                            check(g, x.code, fty_univ());
                          } catch (const Error&) {
                            check(g, x.code, fty_el(ft_const("Ctx")));
                          }
                        },
                        [&](const FType::Univ&) {}},
             t->v);
}

FTypePtr FitchChecker::infer(const FCtx& g, const FTermPtr& m) const {
  return std::visit(
      overloaded{
          [&](const FTerm::Var& x) -> FTypePtr {
            std::size_t seen = 0;
            for (std::size_t i = g.entries.size(); i > 0; i--) {
              if (std::holds_alternative<FCtx::Lock>(g.entries[i - 1]))
                fail(Errc::VariableBehindLock,
                     "variable lookup crosses a lock");
              const FTypePtr& ty = std::get<FTypePtr>(g.entries[i - 1]);
              if (seen == x.index)
                return fshift(ty, 0, static_cast<std::int64_t>(seen) + 1);
              seen++;
            }
            fail(Errc::ScopeError, "fitch variable out of scope");
          },
          [&](const FTerm::Lam&) -> FTypePtr {
            fail(Errc::CannotInfer, "lambda requires a type annotation");
          },
          [&](const FTerm::App& x) -> FTypePtr {
            FNorm n{fuel_};
            FTypePtr f = n.type(infer(g, x.fun));
            if (auto* el = std::get_if<FType::El>(&f->v)) {
              // Russell-style decoding of pi codes
              if (auto* c = std::get_if<FTerm::Const>(&el->code->v)) {
                if (c->name == "pi") {
                  check(g, x.arg, fty_el(c->args[0]));
                  return fty_el(ft_app(c->args[1], x.arg));
                }
              }
            }
            auto* pi = std::get_if<FType::Pi>(&f->v);
            if (!pi) fail(Errc::NotAFunction, "application head is not of function type");
            check(g, x.arg, pi->dom);
            return fsubst(pi->cod, x.arg);
          },
          [&](const FTerm::BoxIntro&) -> FTypePtr {
            fail(Errc::CannotInfer, "box requires a type annotation");
          },
          [&](const FTerm::Unbox& x) -> FTypePtr {
            // strip back to the rightmost lock
            std::size_t strip = 0;
            bool found = false;
            for (std::size_t i = g.entries.size(); i > 0; i--) {
              strip++;
              if (std::holds_alternative<FCtx::Lock>(g.entries[i - 1])) {
                found = true;
                break;
              }
            }
            if (!found)
              fail(Errc::LockInResidue, "unbox requires a lock in the context");
            return check_unbox_at(g, strip, x.body);
          },
          [&](const FTerm::UnitTuple&) -> FTypePtr { return fty_el(ft_const("top")); },
          [&](const FTerm::Pair&) -> FTypePtr {
            fail(Errc::CannotInfer, "pair requires a type annotation");
          },
          [&](const FTerm::Proj& x) -> FTypePtr {
            FNorm n{fuel_};
            // a projection of a literal pair reduces away first
            FTermPtr whole = n.term(m);
            if (!std::holds_alternative<FTerm::Proj>(whole->v)) return infer(g, whole);
            FTypePtr bt = n.type(infer(g, x.body));
            auto* el = std::get_if<FType::El>(&bt->v);
            const FTerm::Const* ext = nullptr;
            if (el) {
              if (auto* c = std::get_if<FTerm::Const>(&el->code->v))
                if (c->name == "ext") ext = c;
            }
            if (!ext) fail(Errc::TypeMismatch, "projection from a non-extension context");
            if (x.which == 1) return fty_el(ext->args[0]);
            return fty_el(ft_app(ext->args[1], ft_proj(1, x.body)));
          },
          [&](const FTerm::Const& x) -> FTypePtr {
            auto it = fitch_sig().find(x.name);
            if (it == fitch_sig().end())
              fail(Errc::UnknownConstant, "unknown fitch constant " + x.name);
            if (x.args.size() != it->second.tele.size())
              fail(Errc::ArityMismatch, "fitch constant " + x.name + " arity");
            for (std::size_t i = 0; i < x.args.size(); i++) {
              std::vector<FTermPtr> prefix(x.args.begin(), x.args.begin() + i);
              std::reverse(prefix.begin(), prefix.end());
              check(g, x.args[i], fopen(it->second.tele[i], prefix));
            }
            std::vector<FTermPtr> all(x.args.rbegin(), x.args.rend());
            return fopen(it->second.result, all);
          }},
      m->v);
}

FTypePtr FitchChecker::check_unbox_at(const FCtx& g, std::size_t strip, const FTermPtr& m) const {
  if (strip == 0 || strip > g.entries.size())
    fail(Errc::LockInResidue, "unbox boundary out of range");
  // residue must be lock-free and the boundary a lock
  for (std::size_t i = g.entries.size() - strip + 1; i < g.entries.size(); i++)
    if (std::holds_alternative<FCtx::Lock>(g.entries[i]))
      fail(Errc::LockInResidue, "a lock occurs after the unbox boundary");
  if (!std::holds_alternative<FCtx::Lock>(g.entries[g.entries.size() - strip]))
    fail(Errc::LockInResidue, "unbox boundary is not a lock");
  FCtx prefix;
  prefix.entries.assign(g.entries.begin(), g.entries.end() - static_cast<std::ptrdiff_t>(strip));
  FNorm n{fuel_};
  FTypePtr bt = n.type(infer(prefix, m));
  auto* box = std::get_if<FType::BoxT>(&bt->v);
  if (!box) fail(Errc::BoxExpected, "unbox of a non-boxed term");
  // re-index into the residue: the stripped entries minus the lock bind vars
  std::size_t rebind = 0;
  for (std::size_t i = g.entries.size() - strip + 1; i < g.entries.size(); i++)
    if (std::holds_alternative<FTypePtr>(g.entries[i])) rebind++;
  return fshift(box->body, 0, static_cast<std::int64_t>(rebind));
}

void FitchChecker::check(const FCtx& g, const FTermPtr& m, const FTypePtr& want) const {
  FNorm n{fuel_};
  FTypePtr w = n.type(want);
  if (auto* l = std::get_if<FTerm::Lam>(&m->v)) {
    if (auto* el = std::get_if<FType::El>(&w->v)) {
      if (auto* c = std::get_if<FTerm::Const>(&el->code->v)) {
        if (c->name == "pi") {
          check(g.extended(fty_el(c->args[0])), l->body,
                fty_el(ft_app(fshift(c->args[1], 0, 1), ft_var(0))));
          return;
        }
      }
    }
    auto* pi = std::get_if<FType::Pi>(&w->v);
    if (!pi) fail(Errc::TypeMismatch, "lambda checked against a non-function type");
    check(g.extended(pi->dom), l->body, pi->cod);
    return;
  }
  if (auto* bx = std::get_if<FTerm::BoxIntro>(&m->v)) {
    auto* bt = std::get_if<FType::BoxT>(&w->v);
    if (!bt) fail(Errc::TypeMismatch, "box checked against a non-box type");
    check(g.locked(), bx->body, bt->body);
    return;
  }
  if (auto* pr = std::get_if<FTerm::Pair>(&m->v)) {
    auto* el = std::get_if<FType::El>(&w->v);
    const FTerm::Const* ext = nullptr;
    if (el) {
      if (auto* c = std::get_if<FTerm::Const>(&el->code->v))
        if (c->name == "ext") ext = c;
    }
    if (!ext) fail(Errc::TypeMismatch, "pair checked against a non-extension context");
    check(g, pr->fst, fty_el(ext->args[0]));
    check(g, pr->snd, fty_el(ft_app(ext->args[1], pr->fst)));
    return;
  }
  FTypePtr got = infer(g, m);
  if (!equal_types(got, w)) {
    FNorm n2{fuel_};
    fail(Errc::TypeMismatch,
         "expected " + print_ftype(w) + ", got " + print_ftype(n2.type(got)));
  }
}

// ---------------------------------------------------------------------------
// Lock-discipline scan

bool lock_scan(const FCtx& g, const FTermPtr& m) {
  return std::visit(
      overloaded{
          [&](const FTerm::Var& x) {
            std::size_t seen = 0;
            for (std::size_t i = g.entries.size(); i > 0; i--) {
              if (std::holds_alternative<FCtx::Lock>(g.entries[i - 1])) return false;
              if (seen == x.index) return true;
              seen++;
            }
            return false;
          },
          [&](const FTerm::Lam& x) {
            return lock_scan(g.extended(fty_univ()), x.body);
          },
          [&](const FTerm::App& x) { return lock_scan(g, x.fun) && lock_scan(g, x.arg); },
          [&](const FTerm::BoxIntro& x) { return lock_scan(g.locked(), x.body); },
          [&](const FTerm::Unbox& x) {
            // scan the body in the prefix before the last lock
            FCtx prefix;
            std::size_t cut = g.entries.size();
            while (cut > 0 && !std::holds_alternative<FCtx::Lock>(g.entries[cut - 1])) cut--;
            if (cut == 0) return false;
            prefix.entries.assign(g.entries.begin(),
                                  g.entries.begin() + static_cast<std::ptrdiff_t>(cut - 1));
            return lock_scan(prefix, x.body);
          },
          [&](const FTerm::UnitTuple&) { return true; },
          [&](const FTerm::Pair& x) { return lock_scan(g, x.fst) && lock_scan(g, x.snd); },
          [&](const FTerm::Proj& x) { return lock_scan(g, x.body); },
          [&](const FTerm::Const& x) {
            for (auto& a : x.args)
              if (!lock_scan(g, a)) return false;
            return true;
          }},
      m->v);
}

// ---------------------------------------------------------------------------
// Translation of recursor-free dependent Cocon

namespace {

// administrative reductions at emission, as in the internal translation:
// inlining definitions exposes beta, unbox-box and projection redexes that
// the bidirectional checker cannot re-infer
FTermPtr fadmin(const FTermPtr& t);

FTermPtr fapp_beta(const FTermPtr& f, const FTermPtr& a) {
  if (auto* l = std::get_if<FTerm::Lam>(&f->v)) return fadmin(fsubst(l->body, a));
  return ft_app(f, a);
}

FTermPtr funbox_beta(const FTermPtr& t) {
  if (auto* bx = std::get_if<FTerm::BoxIntro>(&t->v)) return bx->body;
  return ft_unbox(t);
}

FTermPtr fadmin(const FTermPtr& t) {
  return std::visit(
      overloaded{
          [&](const FTerm::Var&) { return t; },
          [&](const FTerm::Lam& x) { return ft_lam(fadmin(x.body)); },
          [&](const FTerm::App& x) -> FTermPtr {
            FTermPtr f = fadmin(x.fun);
            FTermPtr a = fadmin(x.arg);
            if (std::holds_alternative<FTerm::Lam>(f->v)) return fadmin(fsubst(std::get<FTerm::Lam>(f->v).body, a));
            return ft_app(f, a);
          },
          [&](const FTerm::BoxIntro& x) { return ft_box(fadmin(x.body)); },
          [&](const FTerm::Unbox& x) -> FTermPtr {
            FTermPtr b = fadmin(x.body);
            if (auto* bx = std::get_if<FTerm::BoxIntro>(&b->v)) return fadmin(bx->body);
            return ft_unbox(b);
          },
          [&](const FTerm::UnitTuple&) { return t; },
          [&](const FTerm::Pair& x) { return ft_pair(fadmin(x.fst), fadmin(x.snd)); },
          [&](const FTerm::Proj& x) -> FTermPtr {
            FTermPtr b = fadmin(x.body);
            if (auto* p = std::get_if<FTerm::Pair>(&b->v))
              return x.which == 1 ? p->fst : p->snd;
            return ft_proj(x.which, b);
          },
          [&](const FTerm::Const& x) {
            std::vector<FTermPtr> args;
            args.reserve(x.args.size());
            for (auto& a : x.args) args.push_back(fadmin(a));
            return ft_const(x.name, std::move(args));
          }},
      t->v);
}

}  // namespace

FTermPtr FitchTranslator::tr_dom_ctx(const CompCtx& g, const DomCtxPtr& psi) const {
  return std::visit(
      overloaded{[&](const DomCtx::Empty&) -> FTermPtr { return ft_const("top"); },
                 [&](const DomCtx::CtxVar& x) -> FTermPtr { return ft_unbox(ft_var(x.comp_index)); },
                 [&](const DomCtx::Snoc& x) -> FTermPtr {
                   FTermPtr pre = tr_dom_ctx(g, x.prefix);
                   FTermPtr fam = tr_dom_type(g, x.prefix, x.type);
                   return ft_const("ext", {pre, fam});
                 }},
      psi->v);
}

FTermPtr FitchTranslator::tr_dom_type(const CompCtx& g, const DomCtxPtr& psi,
                                      const DomTypePtr& a) const {
  // a code family over El([|psi|]): fn u. <code>
  return std::visit(
      overloaded{
          [&](const DomType::Ty&) -> FTermPtr { return ft_lam(ft_const("ty")); },
          [&](const DomType::Trm& x) -> FTermPtr {
            FTermPtr em = tr_dom_term(g, psi, x.body, dt_ty());
            return ft_lam(ft_const("trm", {fapp_beta(fshift(em, 0, 1), ft_var(0))}));
          },
          [&](const DomType::Pi& x) -> FTermPtr {
            FTermPtr ea = tr_dom_type(g, psi, x.dom);
            FTermPtr eb = tr_dom_type(g, dc_snoc(psi, x.dom), x.cod);
            // fn u. pi (ea u) (fn w. eb (u, w))
            return ft_lam(ft_const(
                "pi", {fapp_beta(fshift(ea, 0, 1), ft_var(0)),
                       ft_lam(fapp_beta(fshift(eb, 0, 2), ft_pair(ft_var(1), ft_var(0))))}));
          },
          [&](const auto&) -> FTermPtr {
            fail(Errc::IllFormedType, "simple-mode type in the fitch translation");
          }},
      a->v);
}

FTermPtr FitchTranslator::tr_dom_subst(const CompCtx& g, const DomCtxPtr& psi,
                                       const DomSubstPtr& s, const DomCtxPtr& phi) const {
  return std::visit(
      overloaded{
          [&](const DomSubst::Empty&) -> FTermPtr { return ft_lam(ft_unit()); },
          [&](const DomSubst::Weaken& x) -> FTermPtr {
            FTermPtr body = ft_var(0);
            for (std::size_t i = 0; i < x.count; i++) body = ft_proj(1, body);
            return ft_lam(body);
          },
          [&](const DomSubst::Snoc& x) -> FTermPtr {
            auto* sn = std::get_if<DomCtx::Snoc>(&phi->v);
            if (!sn) fail(Errc::IllFormedType, "substitution target too short");
            FTermPtr e1 = tr_dom_subst(g, psi, x.prefix, sn->prefix);
            DomTypePtr entry_ty = subst_dom_ty(sn->type, x.prefix);
            FTermPtr e2 = tr_dom_term(g, psi, x.term, entry_ty);
            return ft_lam(ft_pair(fapp_beta(fshift(e1, 0, 1), ft_var(0)),
                                  fapp_beta(fshift(e2, 0, 1), ft_var(0))));
          }},
      s->v);
}

FTermPtr FitchTranslator::tr_dom_term(const CompCtx& g, const DomCtxPtr& psi,
                                      const DomTermPtr& m, const DomTypePtr& a) const {
  return std::visit(
      overloaded{
          [&](const DomTerm::Var& x) -> FTermPtr {
            FTermPtr body = ft_var(0);
            for (std::size_t i = 0; i < x.index; i++) body = ft_proj(1, body);
            return ft_lam(ft_proj(2, body));
          },
          [&](const DomTerm::Lam& x) -> FTermPtr {
            DomTypePtr want = chk_.normalize_dom_ty(g, a);
            auto* pi = std::get_if<DomType::Pi>(&want->v);
            if (!pi) fail(Errc::TypeMismatch, "lambda at a non-Pi type");
            FTermPtr e = tr_dom_term(g, dc_snoc(psi, pi->dom), x.body, pi->cod);
            return ft_lam(ft_lam(fapp_beta(fshift(e, 0, 2), ft_pair(ft_var(1), ft_var(0)))));
          },
          [&](const DomTerm::App& x) -> FTermPtr {
            DomTypePtr fun_ty = chk_.normalize_dom_ty(g, chk_.infer_dom_term(g, psi, x.fun));
            auto* pi = std::get_if<DomType::Pi>(&fun_ty->v);
            if (!pi) fail(Errc::NotAFunction, "application head during translation");
            FTermPtr e1 = tr_dom_term(g, psi, x.fun, fun_ty);
            FTermPtr e2 = tr_dom_term(g, psi, x.arg, pi->dom);
            return ft_lam(ft_app(fapp_beta(fshift(e1, 0, 1), ft_var(0)),
                                 fapp_beta(fshift(e2, 0, 1), ft_var(0))));
          },
          [&](const DomTerm::Const& x) -> FTermPtr {
            switch (x.name) {
              case DomConst::O:
                return ft_lam(ft_const("o"));
              case DomConst::Arr: {
                FTermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                FTermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                return ft_lam(ft_const("arr", {fapp_beta(fshift(ea, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(eb, 0, 1), ft_var(0))}));
              }
              case DomConst::DLam: {
                FTermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                FTermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                DomTypePtr fn_ty =
                    dt_pi(dt_trm(x.args[0]), dt_trm(shift_dom(x.args[1], 0, 1)));
                FTermPtr em = tr_dom_term(g, psi, x.args[2], fn_ty);
                return ft_lam(ft_const("lam", {fapp_beta(fshift(ea, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(eb, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(em, 0, 1), ft_var(0))}));
              }
              case DomConst::DApp: {
                FTermPtr ea = tr_dom_term(g, psi, x.args[0], dt_ty());
                FTermPtr eb = tr_dom_term(g, psi, x.args[1], dt_ty());
                FTermPtr em = tr_dom_term(
                    g, psi, x.args[2], dt_trm(dm_const(DomConst::Arr, {x.args[0], x.args[1]})));
                FTermPtr en = tr_dom_term(g, psi, x.args[3], dt_trm(x.args[0]));
                return ft_lam(ft_const("app", {fapp_beta(fshift(ea, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(eb, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(em, 0, 1), ft_var(0)),
                                               fapp_beta(fshift(en, 0, 1), ft_var(0))}));
              }
              default:
                fail(Errc::UnknownConstant, "constant not available in dep mode");
            }
          },
          [&](const DomTerm::Unbox& x) -> FTermPtr {
            FTermPtr e1;
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
            FTermPtr e2 = tr_dom_subst(g, psi, x.subst, ct.ctx);
            return ft_lam(ft_app(funbox_beta(e1),
                                 fapp_beta(fshift(e2, 0, 1), ft_var(0))));
          }},
      m->v);
}

FTypePtr FitchTranslator::tr_comp_type(const CompCtx& g, const CompTypePtr& tau) const {
  return std::visit(
      overloaded{
          [&](const CompType::BoxT& x) -> FTypePtr {
            FTermPtr ectx = tr_dom_ctx(g, x.ct.ctx);
            FTermPtr ea = tr_dom_type(g, x.ct.ctx, x.ct.type);
            return fty_box(fty_pi(fty_el(ectx),
                                  fty_el(fapp_beta(fshift(ea, 0, 1), ft_var(0)))));
          },
          [&](const CompType::Fn& x) -> FTypePtr {
            FTypePtr dom = tr_ann_type(g, x.param);
            FTypePtr cod = tr_comp_type(g.extended(x.param), x.result);
            return fty_pi(dom, cod);
          }},
      tau->v);
}

FTypePtr FitchTranslator::tr_ann_type(const CompCtx& g, const AnnType& a) const {
  if (a.is_ctx()) return fty_box(fty_el(ft_const("Ctx")));
  return tr_comp_type(g, a.type);
}

std::pair<FTermPtr, CompTypePtr> FitchTranslator::tr_comp_infer(const CompCtx& g,
                                                                const CompTermPtr& t) const {
  return std::visit(
      overloaded{
          [&](const CompTerm::Var& x) -> std::pair<FTermPtr, CompTypePtr> {
            const AnnType& a = g.lookup(x.index);
            if (a.is_ctx()) fail(Errc::AnnKindMismatch, "context variable used as a term");
            return {ft_var(x.index),
                    shift_comp(a.type, 0, static_cast<std::int64_t>(x.index) + 1)};
          },
          [&](const CompTerm::Ref& x) -> std::pair<FTermPtr, CompTypePtr> {
            if (!st_.decls) fail(Errc::ScopeError, "reference without a declaration table");
            auto it = st_.decls->find(x.name);
            if (it == st_.decls->end()) fail(Errc::ScopeError, "unknown declaration " + x.name);
            auto* body = std::get_if<CompTermPtr>(&it->second.body);
            if (!body || it->second.type.is_ctx())
              fail(Errc::AnnKindMismatch, "ctx declaration used as a term");
            CompCtx empty;
            return {tr_comp(empty, *body, it->second.type.type), it->second.type.type};
          },
          [&](const CompTerm::App& x) -> std::pair<FTermPtr, CompTypePtr> {
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
              // context arguments are boxed context codes
              FTermPtr e2 = ft_box(tr_dom_ctx(g, ctx));
              return {fapp_beta(e1, e2), subst_comp(fn->result, CompArg(ctx))};
            }
            auto* tmarg = std::get_if<CompTermPtr>(&x.arg);
            if (!tmarg) fail(Errc::AnnKindMismatch, "expected a term argument");
            FTermPtr e2 = tr_comp(g, *tmarg, fn->param.type);
            return {fapp_beta(e1, e2), subst_comp(fn->result, CompArg(*tmarg))};
          },
          [&](const CompTerm::Rec&) -> std::pair<FTermPtr, CompTypePtr> {
            fail(Errc::RecursorPresent,
                 "the fitch-style interpretation does not cover recursors");
          },
          [&](const auto&) -> std::pair<FTermPtr, CompTypePtr> {
            fail(Errc::CannotInfer, "translation requires an annotation here");
          }},
      t->v);
}

FTermPtr FitchTranslator::tr_comp(const CompCtx& g, const CompTermPtr& t,
                                  const CompTypePtr& tau) const {
  if (auto* f = std::get_if<CompTerm::Fn>(&t->v)) {
    CompTypePtr nty = chk_.normalize_comp_ty(g, tau);
    auto* fn = std::get_if<CompType::Fn>(&nty->v);
    if (!fn) fail(Errc::TypeMismatch, "fn at a non-function type during translation");
    return ft_lam(tr_comp(g.extended(fn->param), f->body, fn->result));
  }
  if (auto* b = std::get_if<CompTerm::BoxC>(&t->v)) {
    CompTypePtr nty = chk_.normalize_comp_ty(g, tau);
    auto* bt = std::get_if<CompType::BoxT>(&nty->v);
    if (!bt) fail(Errc::TypeMismatch, "box at a non-box type during translation");
    return ft_box(tr_dom_term(g, bt->ct.ctx, b->body, bt->ct.type));
  }
  auto [e, got] = tr_comp_infer(g, t);
  return e;
}

FitchOutput FitchTranslator::translate(const CompCtx& g, const CompTermPtr& t,
                                       const CompTypePtr& tau) const {
  FitchOutput out;
  chk_.check_comp(g, t, tau);
  CompCtx prefix;
  for (auto& e : g.entries) {
    out.ctx.push_back(tr_ann_type(prefix, e));
    prefix.entries.push_back(e);
  }
  out.term = tr_comp(g, t, tau);
  out.type = tr_comp_type(g, tau);
  return out;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

struct FPrinter {
  std::vector<std::string> names;
  int counter = 0;
  std::string fresh() { return "x" + std::to_string(counter++); }

  std::string term(const FTermPtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const FTerm::Var& x) -> std::string {
              if (x.index < names.size()) return names[names.size() - 1 - x.index];
              return "?x" + std::to_string(x.index);
            },
            [&](const FTerm::Lam& x) {
              std::string n = fresh();
              names.push_back(n);
              std::string b = term(x.body, false);
              names.pop_back();
              std::string s = "fn " + n + ". " + b;
              return atom ? "(" + s + ")" : s;
            },
            [&](const FTerm::App& x) {
              std::string s = term(x.fun, true) + " " + term(x.arg, true);
              return atom ? "(" + s + ")" : s;
            },
            [&](const FTerm::BoxIntro& x) { return "box(" + term(x.body, false) + ")"; },
            [&](const FTerm::Unbox& x) { return "unbox(" + term(x.body, false) + ")"; },
            [&](const FTerm::UnitTuple&) -> std::string { return "()"; },
            [&](const FTerm::Pair& x) {
              return "(" + term(x.fst, false) + ", " + term(x.snd, false) + ")";
            },
            [&](const FTerm::Proj& x) {
              return (x.which == 1 ? "pi1 " : "pi2 ") + term(x.body, true);
            },
            [&](const FTerm::Const& x) {
              if (x.args.empty()) return x.name;
              std::string s = x.name + "(";
              for (std::size_t i = 0; i < x.args.size(); i++) {
                if (i) s += ", ";
                s += term(x.args[i], false);
              }
              return s + ")";
            }},
        t->v);
  }

  std::string type(const FTypePtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const FType::Pi& x) {
              std::string n = fresh();
              std::string d = type(x.dom, true);
              names.push_back(n);
              std::string c = type(x.cod, false);
              names.pop_back();
              std::string s = "(" + n + " : " + d + ") -> " + c;
              return atom ? "(" + s + ")" : s;
            },
            [&](const FType::BoxT& x) { return "Box(" + type(x.body, false) + ")"; },
            [&](const FType::El& x) { return "El(" + term(x.code, false) + ")"; },
            [&](const FType::Univ&) -> std::string { return "Type"; }},
        t->v);
  }
};

}  // namespace

std::string print_fterm(const FTermPtr& t) {
  FPrinter p;
  return p.term(t, false);
}
std::string print_ftype(const FTypePtr& t) {
  FPrinter p;
  return p.type(t, false);
}

}  // namespace cocon
