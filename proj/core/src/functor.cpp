#include "hace/functor.hpp"

#include <mutex>
#include <optional>
#include <unordered_map>

#include "hace/config.hpp"
#include "hace/error.hpp"
#include "hace/setops.hpp"

namespace hace {

struct SetFunctor::Impl {
  CatPtr              domain;
  bool                table = false;
  std::vector<FinSet> fibers;
  std::vector<FinFn>  actions;
  FiberFn             fiber_fn;
  ActFn               act_fn;

  std::mutex                                  mu;
  std::unordered_map<std::size_t, FinSet> fiber_cache;
  std::unordered_map<std::size_t, FinFn>  act_cache;
};

SetFunctor SetFunctor::tables(CatPtr              domain,
                              std::vector<FinSet> fibers,
                              std::vector<FinFn>  actions) {
  if (fibers.size() != domain->num_objects()
      || actions.size() != domain->num_morphisms()) {
    throw Error(ErrorKind::ShapeMismatch,
                "functor tables do not match the domain " + domain->name());
  }
  SetFunctor f;
  f._impl          = std::make_shared<Impl>();
  f._impl->domain  = std::move(domain);
  f._impl->table   = true;
  f._impl->fibers  = std::move(fibers);
  f._impl->actions = std::move(actions);
  return f;
}

SetFunctor SetFunctor::lazy(CatPtr domain, FiberFn fiber, ActFn act) {
  SetFunctor f;
  f._impl           = std::make_shared<Impl>();
  f._impl->domain   = std::move(domain);
  f._impl->fiber_fn = std::move(fiber);
  f._impl->act_fn   = std::move(act);
  return f;
}

CatPtr const& SetFunctor::domain() const {
  return _impl->domain;
}

bool SetFunctor::is_table() const {
  return _impl->table;
}

FinSet const& SetFunctor::fiber(std::size_t a) const {
  if (_impl->table) {
    return _impl->fibers[a];
  }
  {
    std::lock_guard<std::mutex> lock(_impl->mu);
    auto                        it = _impl->fiber_cache.find(a);
    if (it != _impl->fiber_cache.end()) {
      return it->second;
    }
  }
  FinSet                      s = _impl->fiber_fn(a);
  std::lock_guard<std::mutex> lock(_impl->mu);
  return _impl->fiber_cache.emplace(a, std::move(s)).first->second;
}

FinFn const& SetFunctor::act(std::size_t f) const {
  if (_impl->table) {
    return _impl->actions[f];
  }
  {
    std::lock_guard<std::mutex> lock(_impl->mu);
    auto                        it = _impl->act_cache.find(f);
    if (it != _impl->act_cache.end()) {
      return it->second;
    }
  }
  FinFn                       fn = _impl->act_fn(f);
  std::lock_guard<std::mutex> lock(_impl->mu);
  return _impl->act_cache.emplace(f, std::move(fn)).first->second;
}

namespace {
  constexpr std::size_t kMaxReported = 20;

  void report(std::vector<std::string>& v, std::string msg) {
    if (v.size() < kMaxReported) {
      v.push_back(std::move(msg));
    }
  }
}  // namespace

std::vector<std::string> check_set_functor(SetFunctor const& F) {
  std::vector<std::string> v;
  auto const&              C  = *F.domain();
  std::size_t const        no = C.num_objects(), nm = C.num_morphisms();
  std::vector<std::vector<std::size_t>> ins(no), outs(no);
  for (std::size_t f = 0; f < nm; ++f) {
    FinFn const& Ff = F.act(f);
    if (Ff.dom() != F.fiber(C.src(f)).size()
        || Ff.cod() != F.fiber(C.tgt(f)).size()) {
      report(v, "action of " + C.morphism_name(f) + " has the wrong shape");
    }
    ins[C.tgt(f)].push_back(f);
    outs[C.src(f)].push_back(f);
  }
  if (!v.empty()) {
    return v;
  }
  for (std::size_t a = 0; a < no; ++a) {
    if (!F.act(C.identity(a)).is_identity()) {
      report(v, "identity of " + C.object_name(a) + " not sent to identity");
    }
  }
  for (std::size_t b = 0; b < no; ++b) {
    for (auto g : outs[b]) {
      for (auto f : ins[b]) {
        if (F.act(C.compose(g, f)) != compose(F.act(g), F.act(f))) {
          report(v, "composite " + C.morphism_name(g) + " . "
                        + C.morphism_name(f) + " not preserved");
        }
      }
    }
  }
  return v;
}

void validate_set_functor(SetFunctor const& F) {
  auto v = check_set_functor(F);
  if (!v.empty()) {
    std::string msg = "functor on " + F.domain()->name() + " is invalid:";
    for (auto const& s : v) {
      msg += "\n  " + s;
    }
    throw Error(ErrorKind::NotFunctorial, msg);
  }
}

////////////////////////////////////////////////////////////////////////
// SetFunctorPQ
////////////////////////////////////////////////////////////////////////

SetFunctorPQ::SetFunctorPQ(CatPtr base, VarianceSig sig, SetFunctor f)
    : _base(std::move(base)), _sig(sig), _f(std::move(f)) {}

SetFunctorPQ SetFunctorPQ::lazy(CatPtr       base,
                                VarianceSig  sig,
                                TupleFiberFn fiber,
                                TupleActFn   act) {
  CatPtr            dom = power_pq(base, sig);
  std::size_t const no = base->num_objects(), nm = base->num_morphisms();
  std::size_t const n = sig.arity();
  auto              f = SetFunctor::lazy(
      dom,
      [fiber = std::move(fiber), no, n](std::size_t a) {
        return fiber(tuple_decode(a, no, n));
      },
      [act = std::move(act), nm, n](std::size_t m) {
        return act(tuple_decode(m, nm, n));
      });
  return SetFunctorPQ(std::move(base), sig, std::move(f));
}

FinSet const& SetFunctorPQ::fiber(Tuple const& t) const {
  return _f.fiber(obj_code(t));
}

FinFn const& SetFunctorPQ::act(Tuple const& m) const {
  return _f.act(mor_code(m));
}

std::size_t SetFunctorPQ::obj_code(Tuple const& t) const {
  return tuple_code(t, _base->num_objects());
}

std::size_t SetFunctorPQ::mor_code(Tuple const& m) const {
  return tuple_code(m, _base->num_morphisms());
}

Tuple SetFunctorPQ::diag_tuple(std::size_t a, std::size_t b) const {
  Tuple t(_sig.arity());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = i < _sig.p ? a : b;
  }
  return t;
}

std::size_t SetFunctorPQ::diag(std::size_t a, std::size_t b) const {
  return obj_code(diag_tuple(a, b));
}

std::size_t SetFunctorPQ::diag_mor(std::size_t f, std::size_t g) const {
  return mor_code(diag_tuple(f, g));
}

Tuple SetFunctorPQ::mor_src(Tuple const& m) const {
  Tuple t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    t[i] = i < _sig.p ? _base->tgt(m[i]) : _base->src(m[i]);
  }
  return t;
}

Tuple SetFunctorPQ::mor_tgt(Tuple const& m) const {
  Tuple t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    t[i] = i < _sig.p ? _base->src(m[i]) : _base->tgt(m[i]);
  }
  return t;
}

std::vector<std::string> check_functor_pq(SetFunctorPQ const& F) {
  return check_set_functor(F.functor());
}

void validate_functor_pq(SetFunctorPQ const& F) {
  validate_set_functor(F.functor());
}

////////////////////////////////////////////////////////////////////////
// functor_from_slots
////////////////////////////////////////////////////////////////////////

namespace {

  std::string tuple_names(FinCat const& c, Tuple const& t) {
    std::vector<std::string> parts;
    for (auto a : t) {
      parts.push_back(c.object_name(a));
    }
    return tuple_label(parts);
  }

}  // namespace

SetFunctorPQ functor_from_slots(CatPtr                         base,
                                VarianceSig                    sig,
                                std::vector<FinSet>            fibers,
                                std::vector<SlotAction> const& actions) {
  auto const&       C  = *base;
  std::size_t const n  = sig.arity();
  std::size_t const no = C.num_objects(), nm = C.num_morphisms();
  std::uint64_t     num_tuples = pow_sat(no, n);
  check_cap(num_tuples, "object tuples");
  if (fibers.size() != num_tuples) {
    throw Error(ErrorKind::ShapeMismatch,
                "expected " + std::to_string(num_tuples) + " fibers, got "
                    + std::to_string(fibers.size()));
  }
  auto slot_src = [&](std::size_t i, std::size_t m) {
    return i < sig.p ? C.tgt(m) : C.src(m);
  };
  auto slot_tgt = [&](std::size_t i, std::size_t m) {
    return i < sig.p ? C.src(m) : C.tgt(m);
  };
  auto code = [&](Tuple const& t) { return tuple_code(t, no); };
  // context code: tuple with slot i zeroed
  auto ctx_of = [&](Tuple t, std::size_t i) {
    t[i] = 0;
    return code(t);
  };
  // table[i][ctx][m]
  std::vector<std::unordered_map<std::size_t, std::vector<std::optional<FinFn>>>>
      table(n);
  auto slot_entry = [&](std::size_t i, std::size_t ctx)
      -> std::vector<std::optional<FinFn>>& {
    auto& e = table[i][ctx];
    if (e.empty()) {
      e.resize(nm);
    }
    return e;
  };

  for (auto const& a : actions) {
    if (a.slot >= n || a.morphism >= nm || a.at.size() != n) {
      throw Error(ErrorKind::ShapeMismatch, "slot action out of range");
    }
    Tuple s      = a.at;
    s[a.slot]    = slot_src(a.slot, a.morphism);
    Tuple t      = s;
    t[a.slot]    = slot_tgt(a.slot, a.morphism);
    if (a.fn.dom() != fibers[code(s)].size()
        || a.fn.cod() != fibers[code(t)].size()) {
      throw Error(ErrorKind::NonFunctorialSlot,
                  "action of " + C.morphism_name(a.morphism) + " in slot "
                      + std::to_string(a.slot + 1) + " at "
                      + tuple_names(C, s) + " has the wrong shape");
    }
    auto& e = slot_entry(a.slot, ctx_of(s, a.slot))[a.morphism];
    if (e && *e != a.fn) {
      throw Error(ErrorKind::NonFunctorialSlot,
                  "action of " + C.morphism_name(a.morphism) + " in slot "
                      + std::to_string(a.slot + 1) + " at "
                      + tuple_names(C, s) + " given twice");
    }
    e = a.fn;
  }

  std::vector<std::pair<std::size_t, std::size_t>> composable;
  for (std::size_t g = 0; g < nm; ++g) {
    for (std::size_t f = 0; f < nm; ++f) {
      if (C.tgt(f) == C.src(g)) {
        composable.emplace_back(g, f);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t ctx = 0; ctx < num_tuples; ++ctx) {
      Tuple t = tuple_decode(ctx, no, n);
      if (t[i] != 0) {
        continue;
      }
      auto& e     = slot_entry(i, ctx);
      auto  where = [&](std::size_t m) {
        Tuple s = t;
        s[i]    = slot_src(i, m);
        return "slot " + std::to_string(i + 1) + " at " + tuple_names(C, s);
      };
      for (std::size_t a = 0; a < no; ++a) {
        std::size_t id = C.identity(a);
        Tuple       s  = t;
        s[i]           = a;
        FinFn idfn     = FinFn::identity(fibers[code(s)].size());
        if (e[id] && *e[id] != idfn) {
          throw Error(ErrorKind::NonFunctorialSlot,
                      "identity " + C.morphism_name(id)
                          + " does not act as the identity in " + where(id));
        }
        e[id] = idfn;
      }
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto [g, f] : composable) {
          if (!e[g] || !e[f]) {
            continue;
          }
          FinFn h = i < sig.p ? compose(*e[f], *e[g]) : compose(*e[g], *e[f]);
          std::size_t gf = C.compose(g, f);
          if (!e[gf]) {
            e[gf]   = std::move(h);
            changed = true;
          } else if (*e[gf] != h) {
            throw Error(ErrorKind::NonFunctorialSlot,
                        "composite " + C.morphism_name(g) + " . "
                            + C.morphism_name(f) + " not preserved in "
                            + where(f));
          }
        }
      }
      for (std::size_t m = 0; m < nm; ++m) {
        if (!e[m]) {
          throw Error(ErrorKind::NonFunctorialSlot,
                      "no action given or derivable for "
                          + C.morphism_name(m) + " in " + where(m));
        }
      }
    }
  }

  auto slot_act = [&](std::size_t i, std::size_t m, Tuple const& s)
      -> FinFn const& { return *table[i].at(ctx_of(s, i))[m]; };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t sc = 0; sc < num_tuples; ++sc) {
        Tuple s = tuple_decode(sc, no, n);
        for (std::size_t mi = 0; mi < nm; ++mi) {
          if (slot_src(i, mi) != s[i] || C.is_identity(mi)) {
            continue;
          }
          for (std::size_t mj = 0; mj < nm; ++mj) {
            if (slot_src(j, mj) != s[j] || C.is_identity(mj)) {
              continue;
            }
            Tuple si = s, sj = s;
            si[i]    = slot_tgt(i, mi);
            sj[j]    = slot_tgt(j, mj);
            FinFn a  = compose(slot_act(j, mj, si), slot_act(i, mi, s));
            FinFn b  = compose(slot_act(i, mi, sj), slot_act(j, mj, s));
            if (a != b) {
              throw Error(ErrorKind::InterchangeFailure,
                          "slots " + std::to_string(i + 1) + " and "
                              + std::to_string(j + 1) + " do not commute for ("
                              + C.morphism_name(mi) + ","
                              + C.morphism_name(mj) + ") at "
                              + tuple_names(C, s));
            }
          }
        }
      }
    }
  }

  std::uint64_t num_mor = pow_sat(nm, n);
  check_cap(num_mor, "morphism tuples");
  CatPtr             dom = power_pq(base, sig);
  std::vector<FinFn> acts;
  acts.reserve(num_mor);
  for (std::size_t mc = 0; mc < num_mor; ++mc) {
    Tuple m   = tuple_decode(mc, nm, n);
    Tuple cur = Tuple(n);
    for (std::size_t i = 0; i < n; ++i) {
      cur[i] = slot_src(i, m[i]);
    }
    FinFn fn = FinFn::identity(fibers[code(cur)].size());
    for (std::size_t i = 0; i < n; ++i) {
      fn     = compose(slot_act(i, m[i], cur), fn);
      cur[i] = slot_tgt(i, m[i]);
    }
    acts.push_back(std::move(fn));
  }
  return SetFunctorPQ(
      base, sig, SetFunctor::tables(dom, std::move(fibers), std::move(acts)));
}

////////////////////////////////////////////////////////////////////////
// Standard functors
////////////////////////////////////////////////////////////////////////

SetFunctorPQ constant_functor(CatPtr base, VarianceSig sig, FinSet value) {
  std::size_t n = value.size();
  return SetFunctorPQ::lazy(
      std::move(base),
      sig,
      [value](Tuple const&) { return value; },
      [n](Tuple const&) { return FinFn::identity(n); });
}

SetFunctorPQ point_functor(CatPtr base, VarianceSig sig) {
  return constant_functor(std::move(base), sig, FinSet({"*"}));
}

namespace {
  FinSet hom_fiber(FinCat const& c, std::size_t a, std::size_t b) {
    std::vector<std::string> labels;
    for (auto f : c.hom(a, b)) {
      labels.push_back(c.morphism_name(f));
    }
    return FinSet(std::move(labels));
  }

  std::size_t position(std::vector<std::size_t> const& v, std::size_t x) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == x) {
        return i;
      }
    }
    throw Error(ErrorKind::ShapeMismatch, "morphism not in hom-set");
  }
}  // namespace

SetFunctorPQ hom_functor(CatPtr base) {
  CatPtr c = base;
  return SetFunctorPQ::lazy(
      base,
      {1, 1},
      [c](Tuple const& t) { return hom_fiber(*c, t[0], t[1]); },
      [c](Tuple const& m) {
        // (f, g) : (tgt f, src g) -> (src f, tgt g), h |-> g h f
        auto from = c->hom(c->tgt(m[0]), c->src(m[1]));
        auto to   = c->hom(c->src(m[0]), c->tgt(m[1]));
        std::vector<std::size_t> table;
        for (auto h : from) {
          table.push_back(position(to, c->compose(m[1], c->compose(h, m[0]))));
        }
        return FinFn(to.size(), std::move(table));
      });
}

SetFunctorPQ covariant_representable(CatPtr base, std::size_t a) {
  CatPtr c = base;
  return SetFunctorPQ::lazy(
      base,
      {0, 1},
      [c, a](Tuple const& t) { return hom_fiber(*c, a, t[0]); },
      [c, a](Tuple const& m) {
        auto from = c->hom(a, c->src(m[0]));
        auto to   = c->hom(a, c->tgt(m[0]));
        std::vector<std::size_t> table;
        for (auto h : from) {
          table.push_back(position(to, c->compose(m[0], h)));
        }
        return FinFn(to.size(), std::move(table));
      });
}

SetFunctorPQ contravariant_representable(CatPtr base, std::size_t a) {
  CatPtr c = base;
  return SetFunctorPQ::lazy(
      base,
      {1, 0},
      [c, a](Tuple const& t) { return hom_fiber(*c, t[0], a); },
      [c, a](Tuple const& m) {
        auto from = c->hom(c->tgt(m[0]), a);
        auto to   = c->hom(c->src(m[0]), a);
        std::vector<std::size_t> table;
        for (auto h : from) {
          table.push_back(position(to, c->compose(h, m[0])));
        }
        return FinFn(to.size(), std::move(table));
      });
}

SetFunctorPQ restrict_diagonal(SetFunctorPQ const& F) {
  return SetFunctorPQ::lazy(
      F.base(),
      {1, 1},
      [F](Tuple const& t) { return F.fiber(F.diag(t[0], t[1])); },
      [F](Tuple const& m) { return F.act(F.diag_mor(m[0], m[1])); });
}

SetFunctorPQ mute_extend(SetFunctorPQ const& F, std::size_t r, std::size_t s) {
  VarianceSig sig = F.sig();
  auto        drop = [sig, r](Tuple const& t) {
    Tuple u;
    for (std::size_t i = 0; i < sig.p; ++i) {
      u.push_back(t[i]);
    }
    for (std::size_t i = 0; i < sig.q; ++i) {
      u.push_back(t[sig.p + r + i]);
    }
    return u;
  };
  return SetFunctorPQ::lazy(
      F.base(),
      {sig.p + r, sig.q + s},
      [F, drop](Tuple const& t) { return F.fiber(drop(t)); },
      [F, drop](Tuple const& m) { return F.act(drop(m)); });
}

SetFunctorPQ tabulate(SetFunctorPQ const& F) {
  auto const&         D = *F.domain();
  check_cap(D.num_morphisms(), "morphism tuples");
  std::vector<FinSet> fibers;
  std::vector<FinFn>  acts;
  for (std::size_t a = 0; a < D.num_objects(); ++a) {
    fibers.push_back(F.fiber(a));
  }
  for (std::size_t f = 0; f < D.num_morphisms(); ++f) {
    acts.push_back(F.act(f));
  }
  return SetFunctorPQ(
      F.base(),
      F.sig(),
      SetFunctor::tables(F.domain(), std::move(fibers), std::move(acts)));
}

////////////////////////////////////////////////////////////////////////
// Natural transformations
////////////////////////////////////////////////////////////////////////

std::vector<std::string> check_natural(NatTransf const& a) {
  std::vector<std::string> v;
  auto const&              C = *a.source.domain();
  if (a.components.size() != C.num_objects()) {
    v.push_back("wrong number of components");
    return v;
  }
  for (std::size_t x = 0; x < C.num_objects(); ++x) {
    if (a.components[x].dom() != a.source.fiber(x).size()
        || a.components[x].cod() != a.target.fiber(x).size()) {
      report(v, "component at " + C.object_name(x) + " has the wrong shape");
    }
  }
  if (!v.empty()) {
    return v;
  }
  for (std::size_t u = 0; u < C.num_morphisms(); ++u) {
    if (C.is_identity(u)) {
      continue;
    }
    auto lhs = compose(a.target.act(u), a.components[C.src(u)]);
    auto rhs = compose(a.components[C.tgt(u)], a.source.act(u));
    if (lhs != rhs) {
      report(v, "naturality fails at " + C.morphism_name(u));
    }
  }
  return v;
}

NatTransf identity_nat(SetFunctor const& F) {
  NatTransf a{F, F, {}};
  for (std::size_t x = 0; x < F.domain()->num_objects(); ++x) {
    a.components.push_back(FinFn::identity(F.fiber(x).size()));
  }
  return a;
}

NatTransf compose(NatTransf const& b, NatTransf const& a) {
  NatTransf c{a.source, b.target, {}};
  for (std::size_t x = 0; x < a.components.size(); ++x) {
    c.components.push_back(compose(b.components[x], a.components[x]));
  }
  return c;
}

namespace {

  struct NatProblem {
    std::vector<std::size_t>  offset;
    std::vector<std::size_t>  sizes;
    std::vector<EqConstraint> constraints;
  };

  NatProblem nat_problem(SetFunctor const& F, SetFunctor const& G) {
    auto const& C = *F.domain();
    if (C.num_objects() != G.domain()->num_objects()) {
      throw Error(ErrorKind::ShapeMismatch, "functors on different domains");
    }
    NatProblem pr;
    for (std::size_t x = 0; x < C.num_objects(); ++x) {
      pr.offset.push_back(pr.sizes.size());
      for (std::size_t e = 0; e < F.fiber(x).size(); ++e) {
        pr.sizes.push_back(G.fiber(x).size());
      }
    }
    for (std::size_t u = 0; u < C.num_morphisms(); ++u) {
      if (C.is_identity(u)) {
        continue;
      }
      std::size_t  a = C.src(u), b = C.tgt(u);
      FinFn const& Fu = F.act(u);
      FinFn const& Gu = G.act(u);
      FinFn        idb = FinFn::identity(G.fiber(b).size());
      for (std::size_t e = 0; e < F.fiber(a).size(); ++e) {
        pr.constraints.push_back(
            {pr.offset[b] + Fu(e), idb, pr.offset[a] + e, Gu});
      }
    }
    return pr;
  }

}  // namespace

std::vector<NatTransf> enumerate_nat(SetFunctor const& F, SetFunctor const& G) {
  auto        pr   = nat_problem(F, G);
  auto        sols = enumerate_families(pr.sizes, pr.constraints);
  auto const& C    = *F.domain();
  std::vector<NatTransf> result;
  result.reserve(sols.size());
  for (auto const& s : sols) {
    NatTransf a{F, G, {}};
    for (std::size_t x = 0; x < C.num_objects(); ++x) {
      std::vector<std::size_t> t(s.begin() + pr.offset[x],
                                 s.begin() + pr.offset[x] + F.fiber(x).size());
      a.components.emplace_back(G.fiber(x).size(), std::move(t));
    }
    result.push_back(std::move(a));
  }
  return result;
}

std::size_t count_nat(SetFunctor const& F, SetFunctor const& G) {
  auto pr = nat_problem(F, G);
  return enumerate_families(pr.sizes, pr.constraints).size();
}

SetFunctor precompose(SetFunctor const& F, Functor const& K) {
  return SetFunctor::lazy(
      K.source,
      [F, K](std::size_t a) { return F.fiber(K.on_objects[a]); },
      [F, K](std::size_t f) { return F.act(K.on_morphisms[f]); });
}

}  // namespace hace
