#include "cocon/internal.hpp"

#include <sstream>

namespace cocon {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

ITypePtr ity_fn(ITypePtr dom, ITypePtr cod) {
  return std::make_shared<IType>(IType{IType::Fn{std::move(dom), std::move(cod)}});
}
ITypePtr ity_vfn(ITypePtr dom, ITypePtr cod) {
  return std::make_shared<IType>(IType{IType::VFn{std::move(dom), std::move(cod)}});
}
ITypePtr ity_cfn(ITypePtr dom, ITypePtr cod) {
  return std::make_shared<IType>(IType{IType::CrispFn{std::move(dom), std::move(cod)}});
}
ITypePtr ity_box(ITypePtr body) {
  return std::make_shared<IType>(IType{IType::BoxT{std::move(body)}});
}
ITypePtr ity_const(std::string name, std::vector<ITermPtr> args) {
  return std::make_shared<IType>(IType{IType::Const{std::move(name), std::move(args)}});
}

ITermPtr it_var(IZone z, std::size_t i) {
  return std::make_shared<ITerm>(ITerm{ITerm::Var{z, i}});
}
ITermPtr it_ovar(std::size_t i) { return it_var(IZone::Ordinary, i); }
ITermPtr it_cvar(std::size_t i) { return it_var(IZone::Crisp, i); }
ITermPtr it_lam(ITermPtr body) { return std::make_shared<ITerm>(ITerm{ITerm::Lam{std::move(body)}}); }
ITermPtr it_clam(ITermPtr body) {
  return std::make_shared<ITerm>(ITerm{ITerm::CrispLam{std::move(body)}});
}
ITermPtr it_app(ITermPtr f, ITermPtr a) {
  return std::make_shared<ITerm>(ITerm{ITerm::App{std::move(f), std::move(a)}});
}
ITermPtr it_capp(ITermPtr f, ITermPtr a) {
  return std::make_shared<ITerm>(ITerm{ITerm::CrispApp{std::move(f), std::move(a)}});
}
ITermPtr it_box(ITermPtr body) { return std::make_shared<ITerm>(ITerm{ITerm::Box{std::move(body)}}); }
ITermPtr it_letbox(ITermPtr scrut, ITermPtr body) {
  return std::make_shared<ITerm>(ITerm{ITerm::LetBox{std::move(scrut), std::move(body)}});
}
ITermPtr it_const(std::string name, std::vector<ITermPtr> args) {
  return std::make_shared<ITerm>(ITerm{ITerm::Const{std::move(name), std::move(args)}});
}
ITermPtr it_rec(IRecKind kind, ITypePtr motive, std::vector<ITermPtr> args) {
  return std::make_shared<ITerm>(ITerm{ITerm::Rec{kind, std::move(motive), std::move(args)}});
}

// ---------------------------------------------------------------------------
// Syntactic equality

bool iequal_syntax(const ITermPtr& a, const ITermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const ITerm::Var& x) {
            auto& y = std::get<ITerm::Var>(b->v);
            return x.zone == y.zone && x.index == y.index;
          },
          [&](const ITerm::Lam& x) { return iequal_syntax(x.body, std::get<ITerm::Lam>(b->v).body); },
          [&](const ITerm::CrispLam& x) {
            return iequal_syntax(x.body, std::get<ITerm::CrispLam>(b->v).body);
          },
          [&](const ITerm::App& x) {
            auto& y = std::get<ITerm::App>(b->v);
            return iequal_syntax(x.fun, y.fun) && iequal_syntax(x.arg, y.arg);
          },
          [&](const ITerm::CrispApp& x) {
            auto& y = std::get<ITerm::CrispApp>(b->v);
            return iequal_syntax(x.fun, y.fun) && iequal_syntax(x.arg, y.arg);
          },
          [&](const ITerm::Box& x) { return iequal_syntax(x.body, std::get<ITerm::Box>(b->v).body); },
          [&](const ITerm::LetBox& x) {
            auto& y = std::get<ITerm::LetBox>(b->v);
            return iequal_syntax(x.scrut, y.scrut) && iequal_syntax(x.body, y.body);
          },
          [&](const ITerm::Const& x) {
            auto& y = std::get<ITerm::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!iequal_syntax(x.args[i], y.args[i])) return false;
            return true;
          },
          [&](const ITerm::Rec& x) {
            auto& y = std::get<ITerm::Rec>(b->v);
            if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
            if (!iequal_syntax(x.motive, y.motive)) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!iequal_syntax(x.args[i], y.args[i])) return false;
            return true;
          }},
      a->v);
}

bool iequal_syntax(const ITypePtr& a, const ITypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      overloaded{
          [&](const IType::Fn& x) {
            auto& y = std::get<IType::Fn>(b->v);
            return iequal_syntax(x.dom, y.dom) && iequal_syntax(x.cod, y.cod);
          },
          [&](const IType::VFn& x) {
            auto& y = std::get<IType::VFn>(b->v);
            return iequal_syntax(x.dom, y.dom) && iequal_syntax(x.cod, y.cod);
          },
          [&](const IType::CrispFn& x) {
            auto& y = std::get<IType::CrispFn>(b->v);
            return iequal_syntax(x.dom, y.dom) && iequal_syntax(x.cod, y.cod);
          },
          [&](const IType::BoxT& x) {
            return iequal_syntax(x.body, std::get<IType::BoxT>(b->v).body);
          },
          [&](const IType::Const& x) {
            auto& y = std::get<IType::Const>(b->v);
            if (x.name != y.name || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); i++)
              if (!iequal_syntax(x.args[i], y.args[i])) return false;
            return true;
          }},
      a->v);
}

// ---------------------------------------------------------------------------
// Shift / substitution

namespace {

std::size_t izshift(std::size_t i, std::size_t cutoff, std::int64_t amount) {
  if (i < cutoff) return i;
  std::int64_t j = static_cast<std::int64_t>(i) + amount;
  if (j < 0) fail(Errc::NegativeIndex, "internal index would become negative");
  return static_cast<std::size_t>(j);
}

struct IShift {
  IZone zone;
  std::int64_t amount;
  // rewriting shares subterms heavily; keep results per (node, cutoff) and
  // hold the keys alive so addresses are not recycled
  mutable std::map<std::pair<const ITerm*, std::size_t>, std::pair<ITermPtr, ITermPtr>> tmemo;
  mutable std::map<std::pair<const IType*, std::size_t>, std::pair<ITypePtr, ITypePtr>> ymemo;

  ITermPtr on(const ITermPtr& t, std::size_t c) const {
    auto key = std::make_pair(t.get(), c);
    auto hit = tmemo.find(key);
    if (hit != tmemo.end()) return hit->second.second;
    ITermPtr out = on_raw(t, c);
    tmemo.emplace(key, std::make_pair(t, out));
    return out;
  }

  ITermPtr on_raw(const ITermPtr& t, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) {
              if (x.zone != zone) return t;
              return it_var(x.zone, izshift(x.index, c, amount));
            },
            [&](const ITerm::Lam& x) {
              return it_lam(on(x.body, c + (zone == IZone::Ordinary ? 1 : 0)));
            },
            [&](const ITerm::CrispLam& x) {
              return it_clam(on(x.body, c + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const ITerm::App& x) { return it_app(on(x.fun, c), on(x.arg, c)); },
            [&](const ITerm::CrispApp& x) { return it_capp(on(x.fun, c), on(x.arg, c)); },
            [&](const ITerm::Box& x) { return it_box(on(x.body, c)); },
            [&](const ITerm::LetBox& x) {
              return it_letbox(on(x.scrut, c),
                               on(x.body, c + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const ITerm::Const& x) {
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, c));
              return it_const(x.name, std::move(args));
            },
            [&](const ITerm::Rec& x) {
              std::size_t k = x.kind == IRecKind::DepTrm ? 3 : 2;
              ITypePtr m = on_ty(x.motive, c + (zone == IZone::Crisp ? k : 0));
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, c));
              return it_rec(x.kind, m, std::move(args));
            }},
        t->v);
  }

  ITypePtr on_ty(const ITypePtr& t, std::size_t c) const {
    auto key = std::make_pair(t.get(), c);
    auto hit = ymemo.find(key);
    if (hit != ymemo.end()) return hit->second.second;
    ITypePtr out = on_ty_raw(t, c);
    ymemo.emplace(key, std::make_pair(t, out));
    return out;
  }

  ITypePtr on_ty_raw(const ITypePtr& t, std::size_t c) const {
    return std::visit(
        overloaded{
            [&](const IType::Fn& x) {
              return ity_fn(on_ty(x.dom, c),
                            on_ty(x.cod, c + (zone == IZone::Ordinary ? 1 : 0)));
            },
            [&](const IType::VFn& x) { return ity_vfn(on_ty(x.dom, c), on_ty(x.cod, c)); },
            [&](const IType::CrispFn& x) {
              return ity_cfn(on_ty(x.dom, c),
                             on_ty(x.cod, c + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const IType::BoxT& x) { return ity_box(on_ty(x.body, c)); },
            [&](const IType::Const& x) {
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, c));
              return ity_const(x.name, std::move(args));
            }},
        t->v);
  }
};

struct IOpen {
  IZone zone;
  const std::vector<ITermPtr>& values;  // innermost first
  std::size_t base;
  std::size_t gamma_shift;
  mutable std::map<std::pair<const ITerm*, std::size_t>, std::pair<ITermPtr, ITermPtr>> tmemo;
  mutable std::map<std::pair<const IType*, std::size_t>, std::pair<ITypePtr, ITypePtr>> ymemo;

  std::size_t k() const { return values.size(); }

  ITermPtr value_at(std::size_t j, std::size_t d) const {
    ITermPtr v = values[j];
    if (d > 0) v = IShift{zone, static_cast<std::int64_t>(d)}.on(v, 0);
    return v;
  }

  std::optional<std::size_t> renumber(std::size_t i, std::size_t d) const {
    std::size_t lo = base + d;
    if (i < lo) return i;
    if (i < lo + k()) return std::nullopt;
    return i - k() + gamma_shift;
  }

  ITermPtr on(const ITermPtr& t, std::size_t d) const {
    auto key = std::make_pair(t.get(), d);
    auto hit = tmemo.find(key);
    if (hit != tmemo.end()) return hit->second.second;
    ITermPtr out = on_raw(t, d);
    tmemo.emplace(key, std::make_pair(t, out));
    return out;
  }

  ITermPtr on_raw(const ITermPtr& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) -> ITermPtr {
              if (x.zone != zone) return t;
              if (auto i = renumber(x.index, d)) return it_var(x.zone, *i);
              return value_at(x.index - base - d, d);
            },
            [&](const ITerm::Lam& x) {
              return it_lam(on(x.body, d + (zone == IZone::Ordinary ? 1 : 0)));
            },
            [&](const ITerm::CrispLam& x) {
              return it_clam(on(x.body, d + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const ITerm::App& x) { return it_app(on(x.fun, d), on(x.arg, d)); },
            [&](const ITerm::CrispApp& x) { return it_capp(on(x.fun, d), on(x.arg, d)); },
            [&](const ITerm::Box& x) { return it_box(on(x.body, d)); },
            [&](const ITerm::LetBox& x) {
              return it_letbox(on(x.scrut, d),
                               on(x.body, d + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const ITerm::Const& x) {
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, d));
              return it_const(x.name, std::move(args));
            },
            [&](const ITerm::Rec& x) {
              std::size_t kk = x.kind == IRecKind::DepTrm ? 3 : 2;
              ITypePtr m = on_ty(x.motive, d + (zone == IZone::Crisp ? kk : 0));
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, d));
              return it_rec(x.kind, m, std::move(args));
            }},
        t->v);
  }

  ITypePtr on_ty(const ITypePtr& t, std::size_t d) const {
    auto key = std::make_pair(t.get(), d);
    auto hit = ymemo.find(key);
    if (hit != ymemo.end()) return hit->second.second;
    ITypePtr out = on_ty_raw(t, d);
    ymemo.emplace(key, std::make_pair(t, out));
    return out;
  }

  ITypePtr on_ty_raw(const ITypePtr& t, std::size_t d) const {
    return std::visit(
        overloaded{
            [&](const IType::Fn& x) {
              return ity_fn(on_ty(x.dom, d),
                            on_ty(x.cod, d + (zone == IZone::Ordinary ? 1 : 0)));
            },
            [&](const IType::VFn& x) { return ity_vfn(on_ty(x.dom, d), on_ty(x.cod, d)); },
            [&](const IType::CrispFn& x) {
              return ity_cfn(on_ty(x.dom, d),
                             on_ty(x.cod, d + (zone == IZone::Crisp ? 1 : 0)));
            },
            [&](const IType::BoxT& x) { return ity_box(on_ty(x.body, d)); },
            [&](const IType::Const& x) {
              std::vector<ITermPtr> args;
              args.reserve(x.args.size());
              for (auto& a : x.args) args.push_back(on(a, d));
              return ity_const(x.name, std::move(args));
            }},
        t->v);
  }
};

struct IScan {
  IZone zone;
  std::size_t idx;
  bool found = false;

  void var(const ITerm::Var& x, std::size_t d) {
    if (x.zone == zone && x.index == idx + d) found = true;
  }
  void on(const ITermPtr& t, std::size_t d) {
    std::visit(
        overloaded{[&](const ITerm::Var& x) { var(x, d); },
                   [&](const ITerm::Lam& x) {
                     on(x.body, d + (zone == IZone::Ordinary ? 1 : 0));
                   },
                   [&](const ITerm::CrispLam& x) {
                     on(x.body, d + (zone == IZone::Crisp ? 1 : 0));
                   },
                   [&](const ITerm::App& x) { on(x.fun, d); on(x.arg, d); },
                   [&](const ITerm::CrispApp& x) { on(x.fun, d); on(x.arg, d); },
                   [&](const ITerm::Box& x) { on(x.body, d); },
                   [&](const ITerm::LetBox& x) {
                     on(x.scrut, d);
                     on(x.body, d + (zone == IZone::Crisp ? 1 : 0));
                   },
                   [&](const ITerm::Const& x) {
                     for (auto& a : x.args) on(a, d);
                   },
                   [&](const ITerm::Rec& x) {
                     std::size_t k = x.kind == IRecKind::DepTrm ? 3 : 2;
                     on_ty(x.motive, d + (zone == IZone::Crisp ? k : 0));
                     for (auto& a : x.args) on(a, d);
                   }},
        t->v);
  }
  void on_ty(const ITypePtr& t, std::size_t d) {
    std::visit(overloaded{[&](const IType::Fn& x) {
                            on_ty(x.dom, d);
                            on_ty(x.cod, d + (zone == IZone::Ordinary ? 1 : 0));
                          },
                          [&](const IType::VFn& x) { on_ty(x.dom, d); on_ty(x.cod, d); },
                          [&](const IType::CrispFn& x) {
                            on_ty(x.dom, d);
                            on_ty(x.cod, d + (zone == IZone::Crisp ? 1 : 0));
                          },
                          [&](const IType::BoxT& x) { on_ty(x.body, d); },
                          [&](const IType::Const& x) {
                            for (auto& a : x.args) on(a, d);
                          }},
               t->v);
  }
};

}  // namespace

ITermPtr ishift(const ITermPtr& t, IZone zone, std::size_t cutoff, std::int64_t amount) {
  return amount == 0 ? t : IShift{zone, amount}.on(t, cutoff);
}
ITypePtr ishift(const ITypePtr& t, IZone zone, std::size_t cutoff, std::int64_t amount) {
  return amount == 0 ? t : IShift{zone, amount}.on_ty(t, cutoff);
}
ITermPtr isubst(const ITermPtr& body, IZone zone, const ITermPtr& value, std::size_t index) {
  std::vector<ITermPtr> vals{value};
  return IOpen{zone, vals, index, 0}.on(body, 0);
}
ITypePtr isubst(const ITypePtr& body, IZone zone, const ITermPtr& value, std::size_t index) {
  std::vector<ITermPtr> vals{value};
  return IOpen{zone, vals, index, 0}.on_ty(body, 0);
}
ITermPtr iopen(const ITermPtr& t, IZone zone, const std::vector<ITermPtr>& values,
               std::size_t gamma_shift) {
  return IOpen{zone, values, 0, gamma_shift}.on(t, 0);
}
ITypePtr iopen(const ITypePtr& t, IZone zone, const std::vector<ITermPtr>& values,
               std::size_t gamma_shift) {
  return IOpen{zone, values, 0, gamma_shift}.on_ty(t, 0);
}
bool uses_var(const ITermPtr& t, IZone zone, std::size_t index) {
  IScan s{zone, index};
  s.on(t, 0);
  return s.found;
}
bool uses_var(const ITypePtr& t, IZone zone, std::size_t index) {
  IScan s{zone, index};
  s.on_ty(t, 0);
  return s.found;
}

// ---------------------------------------------------------------------------
// Signatures

namespace {

// shared shorthands for signature construction; ordinary de Bruijn variables
// reference earlier telescope entries (0 = previous entry)
ITermPtr ov(std::size_t i) { return it_ovar(i); }

ITypePtr t_obj() { return ity_const("Obj"); }
ITypePtr t_el(ITermPtr e) { return ity_const("El", {std::move(e)}); }
ITypePtr t_ctx() { return ity_const("Ctx"); }
ITypePtr t_ty(ITermPtr c) { return ity_const("Ty", {std::move(c)}); }
ITypePtr t_tm(ITermPtr c, ITermPtr a) { return ity_const("Tm", {std::move(c), std::move(a)}); }
ITypePtr t_tmv(ITermPtr c, ITermPtr a) { return ity_const("TmV", {std::move(c), std::move(a)}); }

// non-dependent ordinary function space
ITypePtr fn0(ITypePtr a, ITypePtr b) {
  return ity_fn(std::move(a), ishift(b, IZone::Ordinary, 0, 1));
}

ITermPtr id_sub() { return it_lam(it_ovar(0)); }

bool is_id_sub(const ITermPtr& t) {
  if (auto* l = std::get_if<ITerm::Lam>(&t->v)) {
    if (auto* v = std::get_if<ITerm::Var>(&l->body->v))
      return v->zone == IZone::Ordinary && v->index == 0;
  }
  return false;
}

const ITerm::Const* as_const(const ITermPtr& t, const char* name) {
  auto* c = std::get_if<ITerm::Const>(&t->v);
  return (c && c->name == name) ? c : nullptr;
}

// dep-mode abbreviations
ITermPtr d_top() { return it_const("top"); }
ITermPtr d_comp(ITermPtr c, ITermPtr a) { return it_const("comp", {std::move(c), std::move(a)}); }
ITermPtr d_bang(ITermPtr c) { return it_const("bang", {std::move(c)}); }
ITermPtr d_p(ITermPtr c, ITermPtr a) { return it_const("p", {std::move(c), std::move(a)}); }
ITermPtr d_v(ITermPtr c, ITermPtr a) { return it_const("v", {std::move(c), std::move(a)}); }
ITermPtr d_ty() { return it_const("ty"); }
ITermPtr d_trm() { return it_const("trm"); }
ITermPtr d_tysub(ITermPtr phi, ITermPtr psi, ITermPtr a, ITermPtr s) {
  return it_const("tysub", {std::move(phi), std::move(psi), std::move(a), std::move(s)});
}
ITermPtr d_tmsub(ITermPtr phi, ITermPtr psi, ITermPtr a, ITermPtr m, ITermPtr s) {
  return it_const("tmsub",
                  {std::move(phi), std::move(psi), std::move(a), std::move(m), std::move(s)});
}
ITermPtr d_ext(ITermPtr phi, ITermPtr psi, ITermPtr a, ITermPtr s, ITermPtr m) {
  return it_const("ext",
                  {std::move(phi), std::move(psi), std::move(a), std::move(s), std::move(m)});
}
// ty' at Phi and trm[a] at Phi
ITermPtr d_typ(ITermPtr phi) { return d_tysub(phi, d_top(), d_ty(), d_bang(phi)); }
ITermPtr d_trm_at(ITermPtr phi, ITermPtr a) {
  return d_tysub(std::move(phi), d_comp(d_top(), d_ty()), d_trm(),
                 d_ext(phi, d_top(), d_ty(), d_bang(phi), std::move(a)));
}

ISignature build_simple() {
  ISignature sig;
  sig.mode = Mode::Simple;
  sig.types["Obj"] = SigTypeEntry{{}};
  sig.types["El"] = SigTypeEntry{{t_obj()}};
  sig.types["bool"] = SigTypeEntry{{}};

  sig.terms["tm"] = SigTermEntry{{}, t_obj()};
  sig.terms["true"] = SigTermEntry{{}, ity_const("bool")};
  sig.terms["false"] = SigTermEntry{{}, ity_const("bool")};
  sig.terms["unit"] = SigTermEntry{{}, t_obj()};
  sig.terms["times"] = SigTermEntry{{t_obj(), t_obj()}, t_obj()};
  sig.terms["arrow"] = SigTermEntry{{t_obj(), t_obj()}, t_obj()};
  sig.terms["terminal"] = SigTermEntry{{}, t_el(it_const("unit"))};
  sig.terms["fst"] =
      SigTermEntry{{t_obj(), t_obj(), t_el(it_const("times", {ov(1), ov(0)}))}, t_el(ov(2))};
  sig.terms["snd"] =
      SigTermEntry{{t_obj(), t_obj(), t_el(it_const("times", {ov(1), ov(0)}))}, t_el(ov(1))};
  sig.terms["pair"] = SigTermEntry{{t_obj(), t_obj(), t_el(ov(1)), t_el(ov(1))},
                                   t_el(it_const("times", {ov(3), ov(2)}))};
  sig.terms["arrow-i"] = SigTermEntry{{t_obj(), t_obj(), fn0(t_el(ov(1)), t_el(ov(0)))},
                                      t_el(it_const("arrow", {ov(2), ov(1)}))};
  sig.terms["arrow-e"] =
      SigTermEntry{{t_obj(), t_obj(), t_el(it_const("arrow", {ov(1), ov(0)})), t_el(ov(2))},
                   t_el(ov(2))};
  sig.terms["app"] =
      SigTermEntry{{t_el(it_const("tm")), t_el(it_const("tm"))}, t_el(it_const("tm"))};
  sig.terms["lam"] =
      SigTermEntry{{fn0(t_el(it_const("tm")), t_el(it_const("tm")))}, t_el(it_const("tm"))};
  // contextual constructors (Sect. on contextual objects); unfold to let-box form
  sig.terms["app'"] =
      SigTermEntry{{t_obj(), ity_box(fn0(t_el(ov(0)), t_el(it_const("tm")))),
                    ity_box(fn0(t_el(ov(1)), t_el(it_const("tm"))))},
                   ity_box(fn0(t_el(ov(2)), t_el(it_const("tm"))))};
  sig.terms["lam'"] = SigTermEntry{
      {t_obj(),
       ity_box(fn0(t_el(it_const("times", {ov(0), it_const("tm")})), t_el(it_const("tm"))))},
      ity_box(fn0(t_el(ov(1)), t_el(it_const("tm"))))};

  sig.rewrites["fst"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (auto* pr = as_const(c.args[2], "pair")) return pr->args[2];
    return std::nullopt;
  };
  sig.rewrites["snd"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (auto* pr = as_const(c.args[2], "pair")) return pr->args[3];
    return std::nullopt;
  };
  sig.rewrites["arrow-e"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (auto* ai = as_const(c.args[2], "arrow-i")) return it_app(ai->args[2], c.args[3]);
    return std::nullopt;
  };
  sig.rewrites["arrow-i"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    // arrow-i (\y. arrow-e f y) -> f when y is not free in f
    if (auto* l = std::get_if<ITerm::Lam>(&c.args[2]->v)) {
      if (auto* ae = as_const(l->body, "arrow-e")) {
        if (auto* y = std::get_if<ITerm::Var>(&ae->args[3]->v)) {
          if (y->zone == IZone::Ordinary && y->index == 0 &&
              !uses_var(ae->args[2], IZone::Ordinary, 0))
            return ishift(ae->args[2], IZone::Ordinary, 0, -1);
        }
      }
    }
    return std::nullopt;
  };
  sig.rewrites["app'"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[1]->v) ||
        !std::holds_alternative<ITerm::Box>(c.args[2]->v))
      return std::nullopt;
    // letbox m = x in letbox n = y in box(fn u. app (m u) (n u))
    return it_letbox(
        c.args[1],
        it_letbox(ishift(c.args[2], IZone::Crisp, 0, 1),
                  it_box(it_lam(it_const("app", {it_app(it_cvar(1), it_ovar(0)),
                                                 it_app(it_cvar(0), it_ovar(0))})))));
  };
  sig.rewrites["lam'"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[1]->v)) return std::nullopt;
    // letbox m = x in box(fn u. lam (fn w. m (pair u w)))
    ITermPtr cc = ishift(ishift(c.args[0], IZone::Crisp, 0, 1), IZone::Ordinary, 0, 2);
    return it_letbox(
        c.args[1],
        it_box(it_lam(it_const(
            "lam", {it_lam(it_app(it_cvar(0),
                                  it_const("pair", {cc, it_const("tm"), it_ovar(1),
                                                    it_ovar(0)})))}))));
  };
  return sig;
}

ISignature build_dep() {
  ISignature sig;
  sig.mode = Mode::Dep;
  sig.types["Ctx"] = SigTypeEntry{{}};
  sig.types["El"] = SigTypeEntry{{t_ctx()}};
  sig.types["Ty"] = SigTypeEntry{{t_ctx()}};
  sig.types["Tm"] = SigTypeEntry{{t_ctx(), t_ty(ov(0))}};
  sig.types["TmV"] = SigTypeEntry{{t_ctx(), t_ty(ov(0))}};

  sig.terms["top"] = SigTermEntry{{}, t_ctx()};
  sig.terms["comp"] = SigTermEntry{{t_ctx(), t_ty(ov(0))}, t_ctx()};
  sig.terms["bang"] = SigTermEntry{{t_ctx()}, fn0(t_el(ov(0)), t_el(d_top()))};
  sig.terms["p"] =
      SigTermEntry{{t_ctx(), t_ty(ov(0))}, fn0(t_el(d_comp(ov(1), ov(0))), t_el(ov(1)))};
  sig.terms["v"] = SigTermEntry{
      {t_ctx(), t_ty(ov(0))},
      t_tm(d_comp(ov(1), ov(0)),
           d_tysub(d_comp(ov(1), ov(0)), ov(1), ov(0), d_p(ov(1), ov(0))))};
  sig.terms["tysub"] = SigTermEntry{
      {t_ctx(), t_ctx(), t_ty(ov(0)), fn0(t_el(ov(2)), t_el(ov(1)))}, t_ty(ov(3))};
  sig.terms["tmsub"] = SigTermEntry{
      {t_ctx(), t_ctx(), t_ty(ov(0)), t_tm(ov(1), ov(0)), fn0(t_el(ov(3)), t_el(ov(2)))},
      t_tm(ov(4), d_tysub(ov(4), ov(3), ov(2), ov(0)))};
  sig.terms["ext"] = SigTermEntry{
      {t_ctx(), t_ctx(), t_ty(ov(0)), fn0(t_el(ov(2)), t_el(ov(1))),
       t_tm(ov(3), d_tysub(ov(3), ov(2), ov(1), ov(0)))},
      fn0(t_el(ov(4)), t_el(d_comp(ov(3), ov(2))))};
  sig.terms["Pi"] =
      SigTermEntry{{t_ctx(), t_ty(ov(0)), t_ty(d_comp(ov(1), ov(0)))}, t_ty(ov(2))};
  sig.terms["Lam"] = SigTermEntry{
      {t_ctx(), t_ty(ov(0)), t_ty(d_comp(ov(1), ov(0))), t_tm(d_comp(ov(2), ov(1)), ov(0))},
      t_tm(ov(3), it_const("Pi", {ov(3), ov(2), ov(1)}))};
  sig.terms["App"] = SigTermEntry{
      {t_ctx(), t_ty(ov(0)), t_ty(d_comp(ov(1), ov(0))),
       t_tm(ov(2), it_const("Pi", {ov(2), ov(1), ov(0)})), t_tm(ov(3), ov(2))},
      t_tm(ov(4), d_tysub(ov(4), d_comp(ov(4), ov(3)), ov(2),
                          d_ext(ov(4), ov(4), ov(3), id_sub(), ov(0))))};
  sig.terms["ty"] = SigTermEntry{{}, t_ty(d_top())};
  sig.terms["trm"] = SigTermEntry{{}, t_ty(d_comp(d_top(), d_ty()))};
  sig.terms["o"] = SigTermEntry{{t_ctx()}, t_tm(ov(0), d_typ(ov(0)))};
  sig.terms["arr"] = SigTermEntry{{t_ctx(), t_tm(ov(0), d_typ(ov(0))),
                                   t_tm(ov(1), d_typ(ov(1)))},
                                  t_tm(ov(2), d_typ(ov(2)))};
  sig.terms["lam"] = SigTermEntry{
      {t_ctx(), t_tm(ov(0), d_typ(ov(0))), t_tm(ov(1), d_typ(ov(1))),
       t_tm(d_comp(ov(2), d_trm_at(ov(2), ov(1))),
            d_trm_at(d_comp(ov(2), d_trm_at(ov(2), ov(1))),
                     d_tmsub(d_comp(ov(2), d_trm_at(ov(2), ov(1))), ov(2), d_typ(ov(2)),
                             ov(0), d_p(ov(2), d_trm_at(ov(2), ov(1))))))},
      t_tm(ov(3), d_trm_at(ov(3), it_const("arr", {ov(3), ov(2), ov(1)})))};
  sig.terms["app"] = SigTermEntry{
      {t_ctx(), t_tm(ov(0), d_typ(ov(0))), t_tm(ov(1), d_typ(ov(1))),
       t_tm(ov(2), d_trm_at(ov(2), it_const("arr", {ov(2), ov(1), ov(0)}))),
       t_tm(ov(3), d_trm_at(ov(3), ov(2)))},
      t_tm(ov(4), d_trm_at(ov(4), ov(2)))};
  // helpers easing the boxed operations
  sig.terms["lift"] = SigTermEntry{
      {t_ty(d_top()), t_ctx(), ity_box(t_tm(d_top(), ov(1)))},
      t_tm(ov(1), d_tysub(ov(1), d_top(), ov(2), d_bang(ov(1))))};
  sig.terms["arr'"] = SigTermEntry{
      {ity_box(t_tm(d_top(), d_ty())), ity_box(t_tm(d_top(), d_ty()))},
      ity_box(t_tm(d_top(), d_ty()))};
  sig.terms["lam'"] = SigTermEntry{
      {t_ctx(), t_tm(ov(0), d_typ(ov(0))), t_tm(ov(1), d_typ(ov(1))),
       ity_box(t_tm(d_comp(ov(2), d_trm_at(ov(2), ov(1))),
                    d_trm_at(d_comp(ov(2), d_trm_at(ov(2), ov(1))),
                             d_tmsub(d_comp(ov(2), d_trm_at(ov(2), ov(1))), ov(2),
                                     d_typ(ov(2)), ov(0),
                                     d_p(ov(2), d_trm_at(ov(2), ov(1)))))))},
      ity_box(t_tm(ov(3), d_trm_at(ov(3), it_const("arr", {ov(3), ov(2), ov(1)}))))};
  sig.terms["app'"] = SigTermEntry{
      {t_ctx(), t_tm(ov(0), d_typ(ov(0))), t_tm(ov(1), d_typ(ov(1))),
       ity_box(t_tm(ov(2), d_trm_at(ov(2), it_const("arr", {ov(2), ov(1), ov(0)})))),
       ity_box(t_tm(ov(3), d_trm_at(ov(3), ov(2))))},
      ity_box(t_tm(ov(4), d_trm_at(ov(4), ov(2))))};

  // --- rewrite rules ---
  // smart composition keeping ext/bang/p structure visible
  static const std::function<ITermPtr(ITermPtr, ITermPtr, ITermPtr)> compose =
      [](ITermPtr phi_new, ITermPtr s, ITermPtr d) -> ITermPtr {
    if (is_id_sub(s)) return d;
    if (is_id_sub(d)) return s;
    if (as_const(s, "bang")) return d_bang(std::move(phi_new));
    if (auto* e = as_const(s, "ext")) {
      ITermPtr inner = compose(phi_new, e->args[3], d);
      ITermPtr m = d_tmsub(phi_new, e->args[0], d_tysub(e->args[0], e->args[1], e->args[2],
                                                        e->args[3]),
                           e->args[4], d);
      return d_ext(phi_new, e->args[1], e->args[2], inner, m);
    }
    if (as_const(s, "p")) {
      if (auto* e = as_const(d, "ext")) return e->args[3];
    }
    ITermPtr su = ishift(s, IZone::Ordinary, 0, 1);
    ITermPtr du = ishift(d, IZone::Ordinary, 0, 1);
    return it_lam(it_app(su, it_app(du, it_ovar(0))));
  };

  auto q_sub = [](ITermPtr phi, ITermPtr psi, ITermPtr a, ITermPtr s) -> ITermPtr {
    // q(sigma, A) = <sigma o p(A{sigma}), v(A{sigma})>
    ITermPtr asub = d_tysub(phi, psi, a, s);
    ITermPtr pp = d_p(phi, asub);
    ITermPtr comp_sp = compose(d_comp(phi, asub), s, pp);
    return d_ext(d_comp(phi, asub), psi, a, comp_sp, d_v(phi, asub));
  };

  sig.rewrites["tysub"] = [q_sub](const ITerm::Const& c) -> std::optional<ITermPtr> {
    const ITermPtr& phi = c.args[0];
    const ITermPtr& psi = c.args[1];
    const ITermPtr& a = c.args[2];
    const ITermPtr& s = c.args[3];
    if (is_id_sub(s)) return a;
    if (as_const(psi, "top")) {
      if (as_const(phi, "top")) return a;
      if (!as_const(s, "bang")) return d_tysub(phi, psi, a, d_bang(phi));
    }
    if (auto* inner = as_const(a, "tysub"))
      return d_tysub(phi, inner->args[1], inner->args[2],
                     compose(phi, inner->args[3], s));
    if (auto* pi = as_const(a, "Pi")) {
      ITermPtr a1 = pi->args[1], b1 = pi->args[2];
      ITermPtr a1s = d_tysub(phi, psi, a1, s);
      return it_const("Pi", {phi, a1s,
                             d_tysub(d_comp(phi, a1s), d_comp(psi, a1), b1,
                                     q_sub(phi, psi, a1, s))});
    }
    return std::nullopt;
  };
  sig.rewrites["tmsub"] = [q_sub](const ITerm::Const& c) -> std::optional<ITermPtr> {
    const ITermPtr& phi = c.args[0];
    const ITermPtr& psi = c.args[1];
    const ITermPtr& aty = c.args[2];
    const ITermPtr& m = c.args[3];
    const ITermPtr& s = c.args[4];
    if (is_id_sub(s)) return m;
    if (as_const(psi, "top")) {
      if (as_const(phi, "top")) return m;
      if (!as_const(s, "bang")) return d_tmsub(phi, psi, aty, m, d_bang(phi));
    }
    if (auto* inner = as_const(m, "tmsub"))
      return d_tmsub(phi, inner->args[1], inner->args[2], inner->args[3],
                     compose(phi, inner->args[4], s));
    if (as_const(m, "v")) {
      if (auto* e = as_const(s, "ext")) return e->args[4];
    }
    if (auto* l = as_const(m, "Lam")) {
      ITermPtr a1 = l->args[1], b1 = l->args[2], m1 = l->args[3];
      ITermPtr a1s = d_tysub(phi, psi, a1, s);
      ITermPtr q = q_sub(phi, psi, a1, s);
      return it_const("Lam", {phi, a1s,
                              d_tysub(d_comp(phi, a1s), d_comp(psi, a1), b1, q),
                              d_tmsub(d_comp(phi, a1s), d_comp(psi, a1), b1, m1, q)});
    }
    if (auto* ap = as_const(m, "App")) {
      ITermPtr a1 = ap->args[1], b1 = ap->args[2];
      ITermPtr a1s = d_tysub(phi, psi, a1, s);
      ITermPtr q = q_sub(phi, psi, a1, s);
      return it_const("App",
                      {phi, a1s, d_tysub(d_comp(phi, a1s), d_comp(psi, a1), b1, q),
                       d_tmsub(phi, psi, it_const("Pi", {psi, a1, b1}), ap->args[3], s),
                       d_tmsub(phi, psi, a1, ap->args[4], s)});
    }
    if (as_const(m, "o")) return it_const("o", {phi});
    if (auto* ar = as_const(m, "arr"))
      return it_const("arr", {phi, d_tmsub(phi, psi, d_typ(psi), ar->args[1], s),
                              d_tmsub(phi, psi, d_typ(psi), ar->args[2], s)});
    if (auto* lm = as_const(m, "lam")) {
      ITermPtr a1 = lm->args[1], b1 = lm->args[2], m1 = lm->args[3];
      ITermPtr typ = d_typ(psi);
      ITermPtr a1s = d_tmsub(phi, psi, typ, a1, s);
      ITermPtr b1s = d_tmsub(phi, psi, typ, b1, s);
      ITermPtr q = q_sub(phi, psi, d_trm_at(psi, a1), s);
      ITermPtr body_ty = d_trm_at(d_comp(psi, d_trm_at(psi, a1)),
                                  d_tmsub(d_comp(psi, d_trm_at(psi, a1)), psi, typ, b1,
                                          d_p(psi, d_trm_at(psi, a1))));
      return it_const("lam", {phi, a1s, b1s,
                              d_tmsub(d_comp(phi, d_trm_at(phi, a1s)),
                                      d_comp(psi, d_trm_at(psi, a1)), body_ty, m1, q)});
    }
    if (auto* apc = as_const(m, "app")) {
      ITermPtr a1 = apc->args[1], b1 = apc->args[2];
      ITermPtr typ = d_typ(psi);
      ITermPtr a1s = d_tmsub(phi, psi, typ, a1, s);
      ITermPtr b1s = d_tmsub(phi, psi, typ, b1, s);
      return it_const(
          "app", {phi, a1s, b1s,
                  d_tmsub(phi, psi, d_trm_at(psi, it_const("arr", {psi, a1, b1})),
                          apc->args[3], s),
                  d_tmsub(phi, psi, d_trm_at(psi, a1), apc->args[4], s)});
    }
    return std::nullopt;
  };
  sig.rewrites["App"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    // App(Lam(M), N) -> M{<id, N>}
    if (auto* l = as_const(c.args[3], "Lam")) {
      const ITermPtr& phi = c.args[0];
      const ITermPtr& a = c.args[1];
      const ITermPtr& b = c.args[2];
      return d_tmsub(phi, d_comp(phi, a), b, l->args[3],
                     d_ext(phi, phi, a, id_sub(), c.args[4]));
    }
    return std::nullopt;
  };
  sig.rewrites["ext"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    // <p, v> -> id  and  <p o s, v{s}> -> s
    const ITermPtr& phi = c.args[0];
    const ITermPtr& psi = c.args[1];
    const ITermPtr& a = c.args[2];
    const ITermPtr& s1 = c.args[3];
    const ITermPtr& m = c.args[4];
    if (as_const(s1, "p") && as_const(m, "v")) {
      if (auto* cp = as_const(phi, "comp")) {
        if (iequal_syntax(cp->args[0], psi) && iequal_syntax(cp->args[1], a))
          return id_sub();
      }
    }
    if (auto* ms = as_const(m, "tmsub")) {
      if (as_const(ms->args[3], "v")) {
        const ITermPtr& s2 = ms->args[4];
        // s1 must be p o s2
        if (auto* comp_lam = std::get_if<ITerm::Lam>(&s1->v)) {
          if (auto* outer = std::get_if<ITerm::App>(&comp_lam->body->v)) {
            if (as_const(outer->fun, "p")) {
              if (auto* innerapp = std::get_if<ITerm::App>(&outer->arg->v)) {
                if (auto* vv = std::get_if<ITerm::Var>(&innerapp->arg->v)) {
                  if (vv->zone == IZone::Ordinary && vv->index == 0 &&
                      !uses_var(innerapp->fun, IZone::Ordinary, 0) &&
                      iequal_syntax(ishift(innerapp->fun, IZone::Ordinary, 0, -1), s2))
                    return s2;
                }
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  };
  sig.rewrites["lift"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[2]->v)) return std::nullopt;
    ITermPtr a1 = ishift(c.args[0], IZone::Crisp, 0, 1);
    ITermPtr psi1 = ishift(c.args[1], IZone::Crisp, 0, 1);
    return it_letbox(c.args[2], d_tmsub(psi1, d_top(), a1, it_cvar(0), d_bang(psi1)));
  };
  sig.rewrites["arr'"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[0]->v) ||
        !std::holds_alternative<ITerm::Box>(c.args[1]->v))
      return std::nullopt;
    return it_letbox(c.args[0],
                     it_letbox(ishift(c.args[1], IZone::Crisp, 0, 1),
                               it_box(it_const("arr", {d_top(), it_cvar(1), it_cvar(0)}))));
  };
  sig.rewrites["lam'"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[3]->v)) return std::nullopt;
    ITermPtr psi = ishift(c.args[0], IZone::Crisp, 0, 1);
    ITermPtr a = ishift(c.args[1], IZone::Crisp, 0, 1);
    ITermPtr b = ishift(c.args[2], IZone::Crisp, 0, 1);
    return it_letbox(c.args[3], it_box(it_const("lam", {psi, a, b, it_cvar(0)})));
  };
  sig.rewrites["app'"] = [](const ITerm::Const& c) -> std::optional<ITermPtr> {
    if (!std::holds_alternative<ITerm::Box>(c.args[3]->v) ||
        !std::holds_alternative<ITerm::Box>(c.args[4]->v))
      return std::nullopt;
    ITermPtr psi = ishift(c.args[0], IZone::Crisp, 0, 2);
    ITermPtr a = ishift(c.args[1], IZone::Crisp, 0, 2);
    ITermPtr b = ishift(c.args[2], IZone::Crisp, 0, 2);
    return it_letbox(
        c.args[3],
        it_letbox(ishift(c.args[4], IZone::Crisp, 0, 1),
                  it_box(it_const("app", {psi, a, b, it_cvar(1), it_cvar(0)}))));
  };
  return sig;
}

}  // namespace

const ISignature& simple_signature() {
  static const ISignature sig = build_simple();
  return sig;
}
const ISignature& dep_signature() {
  static const ISignature sig = build_dep();
  return sig;
}
const ISignature& signature_for(Mode mode) {
  return mode == Mode::Simple ? simple_signature() : dep_signature();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

struct IPrinter {
  std::vector<std::string> onames, cnames;
  int counter = 0;

  std::string fresh(const char* base) { return base + std::to_string(counter++); }

  std::string term(const ITermPtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const ITerm::Var& x) -> std::string {
              auto& pool = x.zone == IZone::Ordinary ? onames : cnames;
              if (x.index < pool.size()) return pool[pool.size() - 1 - x.index];
              return (x.zone == IZone::Ordinary ? "?x" : "?u") + std::to_string(x.index);
            },
            [&](const ITerm::Lam& x) {
              std::string n = fresh("x");
              onames.push_back(n);
              std::string b = term(x.body, false);
              onames.pop_back();
              std::string s = "fn " + n + ". " + b;
              return atom ? "(" + s + ")" : s;
            },
            [&](const ITerm::CrispLam& x) {
              std::string n = fresh("u");
              cnames.push_back(n);
              std::string b = term(x.body, false);
              cnames.pop_back();
              std::string s = "cfn " + n + ". " + b;
              return atom ? "(" + s + ")" : s;
            },
            [&](const ITerm::App& x) {
              std::string s = term(x.fun, true) + " " + term(x.arg, true);
              return atom ? "(" + s + ")" : s;
            },
            [&](const ITerm::CrispApp& x) {
              std::string s = term(x.fun, true) + " $ " + term(x.arg, true);
              return atom ? "(" + s + ")" : s;
            },
            [&](const ITerm::Box& x) { return "box(" + term(x.body, false) + ")"; },
            [&](const ITerm::LetBox& x) {
              std::string n = fresh("u");
              std::string sc = term(x.scrut, false);
              cnames.push_back(n);
              std::string b = term(x.body, false);
              cnames.pop_back();
              std::string s = "letbox " + n + " = " + sc + " in " + b;
              return atom ? "(" + s + ")" : s;
            },
            [&](const ITerm::Const& x) {
              if (x.args.empty()) return x.name;
              std::string s = x.name + "(";
              for (std::size_t i = 0; i < x.args.size(); i++) {
                if (i) s += ", ";
                s += term(x.args[i], false);
              }
              return s + ")";
            },
            [&](const ITerm::Rec& x) {
              std::string s;
              switch (x.kind) {
                case IRecKind::SimpleTm: s = "rec"; break;
                case IRecKind::DepTy: s = "rec_ty"; break;
                case IRecKind::DepTrm: s = "rec_trm"; break;
              }
              std::size_t k = x.kind == IRecKind::DepTrm ? 3 : 2;
              std::vector<std::string> ns;
              for (std::size_t i = 0; i < k; i++) {
                ns.push_back(fresh("u"));
                cnames.push_back(ns.back());
              }
              s += "{";
              for (std::size_t i = 0; i < k; i++) s += (i ? " " : "") + ns[i];
              s += ". " + type(x.motive, false) + "}(";
              for (std::size_t i = 0; i < k; i++) cnames.pop_back();
              for (std::size_t i = 0; i < x.args.size(); i++) {
                if (i) s += ", ";
                s += term(x.args[i], false);
              }
              return s + ")";
            }},
        t->v);
  }

  std::string type(const ITypePtr& t, bool atom) {
    return std::visit(
        overloaded{
            [&](const IType::Fn& x) {
              std::string n = fresh("x");
              std::string d = type(x.dom, true);
              onames.push_back(n);
              std::string cd = type(x.cod, false);
              onames.pop_back();
              std::string s = "(" + n + " : " + d + ") -> " + cd;
              return atom ? "(" + s + ")" : s;
            },
            [&](const IType::VFn& x) {
              std::string s = type(x.dom, true) + " ->v " + type(x.cod, false);
              return atom ? "(" + s + ")" : s;
            },
            [&](const IType::CrispFn& x) {
              std::string n = fresh("u");
              std::string d = type(x.dom, true);
              cnames.push_back(n);
              std::string cd = type(x.cod, false);
              cnames.pop_back();
              std::string s = "(" + n + " :: " + d + ") ->b " + cd;
              return atom ? "(" + s + ")" : s;
            },
            [&](const IType::BoxT& x) { return "Box(" + type(x.body, false) + ")"; },
            [&](const IType::Const& x) {
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
};

}  // namespace

std::string print_iterm(const ITermPtr& t) {
  IPrinter p;
  return p.term(t, false);
}
std::string print_itype(const ITypePtr& t) {
  IPrinter p;
  return p.type(t, false);
}

}  // namespace cocon
