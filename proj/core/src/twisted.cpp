#include "hace/twisted.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "hace/config.hpp"
#include "hace/error.hpp"

namespace hace {

ElementsCat category_of_elements(SetFunctor const& W) {
  auto const&       C  = *W.domain();
  std::size_t const no = C.num_objects(), nm = C.num_morphisms();
  ElementsCat       el;
  std::vector<std::string> objects;
  for (std::size_t t = 0; t < no; ++t) {
    el.obj_offset.push_back(objects.size());
    auto const& F = W.fiber(t);
    for (std::size_t w = 0; w < F.size(); ++w) {
      el.obj_base.push_back(t);
      el.obj_elem.push_back(w);
      objects.push_back(tuple_label({C.object_name(t), F.label(w)}));
    }
  }
  check_cap(objects.size(), "category of elements");
  std::vector<Morphism> morphisms;
  for (std::size_t m = 0; m < nm; ++m) {
    el.mor_offset.push_back(morphisms.size());
    auto const&  F  = W.fiber(C.src(m));
    FinFn const& Wm = W.act(m);
    for (std::size_t w = 0; w < F.size(); ++w) {
      el.mor_base.push_back(m);
      el.mor_elem.push_back(w);
      morphisms.push_back({tuple_label({C.morphism_name(m), F.label(w)}),
                           el.object_of(C.src(m), w),
                           el.object_of(C.tgt(m), Wm(w))});
    }
    check_cap(morphisms.size(), "category of elements");
  }
  std::size_t const k = morphisms.size();
  check_cap(mul_sat(k, k), "category of elements composition");
  std::vector<std::vector<std::size_t>> outs(no);
  for (std::size_t m = 0; m < nm; ++m) {
    outs[C.src(m)].push_back(m);
  }
  std::vector<std::size_t> comp(k * k, FinCat::npos);
  for (std::size_t k1 = 0; k1 < k; ++k1) {
    std::size_t m1 = el.mor_base[k1], w1 = el.mor_elem[k1];
    std::size_t w2 = W.act(m1)(w1);
    for (auto m2 : outs[C.tgt(m1)]) {
      std::size_t k2                = el.morphism_of(m2, w2);
      comp[k2 * k + k1] = el.morphism_of(C.compose(m2, m1), w1);
    }
  }
  std::vector<std::size_t> ids;
  for (std::size_t o = 0; o < el.obj_base.size(); ++o) {
    ids.push_back(el.morphism_of(C.identity(el.obj_base[o]), el.obj_elem[o]));
  }
  el.total = std::make_shared<FinCat>("el(" + C.name() + ")",
                                      std::move(objects),
                                      std::move(morphisms),
                                      std::move(ids),
                                      std::move(comp));
  el.projection = Functor{el.total, W.domain(), el.obj_base, el.mor_base};
  return el;
}

Diagram elements_diagram(SetFunctor const& W, SetFunctor const& D) {
  auto const&              C = *W.domain();
  Diagram                  d;
  std::vector<std::size_t> offset;
  for (std::size_t t = 0; t < C.num_objects(); ++t) {
    offset.push_back(d.sets.size());
    for (auto const& l : W.fiber(t).labels()) {
      d.names.push_back("(" + C.object_name(t) + "," + l + ")");
      d.sets.push_back(D.fiber(t));
    }
  }
  check_cap(d.sets.size(), "elements diagram");
  for (std::size_t m = 0; m < C.num_morphisms(); ++m) {
    if (C.is_identity(m)) {
      continue;
    }
    FinFn const& Wm = W.act(m);
    for (std::size_t w = 0; w < Wm.dom(); ++w) {
      d.arrows.push_back(
          {offset[C.src(m)] + w, offset[C.tgt(m)] + Wm(w), D.act(m)});
    }
  }
  return d;
}

Diagram elements_op_diagram(SetFunctor const& W, SetFunctor const& D) {
  auto const&              C = *D.domain();
  Diagram                  d;
  std::vector<std::size_t> offset;
  for (std::size_t t = 0; t < C.num_objects(); ++t) {
    offset.push_back(d.sets.size());
    for (auto const& l : W.fiber(t).labels()) {
      d.names.push_back("(" + C.object_name(t) + "," + l + ")");
      d.sets.push_back(D.fiber(t));
    }
  }
  check_cap(d.sets.size(), "elements diagram");
  for (std::size_t m = 0; m < C.num_morphisms(); ++m) {
    if (C.is_identity(m)) {
      continue;
    }
    FinFn const& Wm = W.act(m);  // W(tgt m) -> W(src m)
    for (std::size_t w = 0; w < Wm.dom(); ++w) {
      d.arrows.push_back(
          {offset[C.src(m)] + Wm(w), offset[C.tgt(m)] + w, D.act(m)});
    }
  }
  return d;
}

namespace {

  std::size_t position(std::vector<std::size_t> const& sorted, std::size_t x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    if (it == sorted.end() || *it != x) {
      throw Error(ErrorKind::ShapeMismatch, "morphism not in hom-set");
    }
    return static_cast<std::size_t>(it - sorted.begin());
  }

  std::string join(FinCat const& c, Tuple const& ms, std::size_t from,
                   std::size_t to) {
    std::string s;
    for (std::size_t i = from; i < to; ++i) {
      s += (i == from ? "" : ",") + c.morphism_name(ms[i]);
    }
    return s;
  }

  // Iterates all tuples with the given radices in lexicographic order.
  template <typename Fn>
  void for_each_digits(std::vector<std::size_t> const& radix, Fn&& fn) {
    for (auto r : radix) {
      if (r == 0) {
        return;
      }
    }
    std::vector<std::size_t> d(radix.size(), 0);
    while (true) {
      fn(d);
      std::size_t i = d.size();
      while (i-- > 0) {
        if (++d[i] < radix[i]) {
          break;
        }
        d[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) {
        return;
      }
    }
  }

}  // namespace

SetFunctorPQ hom_pi(CatPtr c, VarianceSig sig) {
  auto homs = [c, sig](Tuple const& t) {
    std::vector<std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < sig.p; ++i) {
      for (std::size_t j = 0; j < sig.q; ++j) {
        cells.push_back(c->hom(t[i], t[sig.p + j]));
      }
    }
    return cells;
  };
  auto fiber = [c, sig, homs](Tuple const& t) {
    auto                     cells = homs(t);
    std::vector<std::size_t> radix;
    for (auto const& h : cells) {
      radix.push_back(h.size());
    }
    std::vector<std::string> labels;
    for_each_digits(radix, [&](std::vector<std::size_t> const& d) {
      if (cells.size() == 1) {
        labels.push_back(c->morphism_name(cells[0][d[0]]));
        return;
      }
      std::string s = "[";
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (k > 0) {
          s += (k % sig.q == 0) ? ";" : ",";
        }
        s += c->morphism_name(cells[k][d[k]]);
      }
      labels.push_back(s + "]");
    });
    return FinSet(std::move(labels));
  };
  CatPtr base = c;
  return SetFunctorPQ::lazy(
      base, sig, fiber, [c, sig, homs](Tuple const& m) {
        Tuple s(m.size()), t(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
          s[i] = i < sig.p ? c->tgt(m[i]) : c->src(m[i]);
          t[i] = i < sig.p ? c->src(m[i]) : c->tgt(m[i]);
        }
        auto                     from = homs(s), to = homs(t);
        std::vector<std::size_t> rf, rt;
        for (auto const& h : from) {
          rf.push_back(h.size());
        }
        for (auto const& h : to) {
          rt.push_back(h.size());
        }
        std::vector<std::size_t> table;
        for_each_digits(rf, [&](std::vector<std::size_t> const& d) {
          std::vector<std::size_t> e(d.size());
          for (std::size_t i = 0; i < sig.p; ++i) {
            for (std::size_t j = 0; j < sig.q; ++j) {
              std::size_t k = i * sig.q + j;
              std::size_t f = from[k][d[k]];
              std::size_t g = c->compose(m[sig.p + j], c->compose(f, m[i]));
              e[k]          = position(to[k], g);
            }
          }
          table.push_back(encode(e, rt));
        });
        std::uint64_t n = 1;
        for (auto r : rt) {
          n *= r;
        }
        return FinFn(n, std::move(table));
      });
}

////////////////////////////////////////////////////////////////////////
// FactorizationWeight
////////////////////////////////////////////////////////////////////////

struct FactorizationWeight::Impl {
  struct Fiber {
    std::vector<std::size_t>              offset;  // per X
    std::vector<std::vector<std::size_t>> radix;   // per X
    std::vector<std::vector<std::vector<std::size_t>>> legs;  // per X, leg
    std::vector<std::size_t>              class_of;
    std::vector<std::size_t>              rep;
    std::vector<std::size_t>              rep_x;
    FinSet                                set;
  };

  CatPtr      c;
  VarianceSig sig;
  std::mutex  mu;
  std::unordered_map<std::size_t, std::shared_ptr<Fiber const>> cache;

  std::vector<std::vector<std::size_t>> leg_homs(Tuple const& t,
                                                 std::size_t  x) const {
    std::vector<std::vector<std::size_t>> legs;
    for (std::size_t i = 0; i < sig.p; ++i) {
      legs.push_back(c->hom(t[i], x));
    }
    for (std::size_t j = 0; j < sig.q; ++j) {
      legs.push_back(c->hom(x, t[sig.p + j]));
    }
    return legs;
  }

  std::shared_ptr<Fiber const> get(Tuple const& t) {
    std::size_t code = tuple_code(t, c->num_objects());
    {
      std::lock_guard<std::mutex> lock(mu);
      auto                        it = cache.find(code);
      if (it != cache.end()) {
        return it->second;
      }
    }
    auto        fb = std::make_shared<Fiber>();
    auto const& C  = *c;
    std::size_t total = 0;
    for (std::size_t x = 0; x < C.num_objects(); ++x) {
      fb->offset.push_back(total);
      fb->legs.push_back(leg_homs(t, x));
      std::vector<std::size_t> r;
      std::uint64_t            n = 1;
      for (auto const& h : fb->legs.back()) {
        r.push_back(h.size());
        n = mul_sat(n, h.size());
      }
      fb->radix.push_back(std::move(r));
      total += n;
      check_cap(total, "factorisation fiber");
    }
    UnionFind   uf(total);
    std::size_t n = sig.arity();
    for (std::size_t u = 0; u < C.num_morphisms(); ++u) {
      if (C.is_identity(u)) {
        continue;
      }
      std::size_t x = C.src(u), y = C.tgt(u);
      // in-legs into x, out-legs from y
      std::vector<std::size_t> r(n);
      for (std::size_t i = 0; i < sig.p; ++i) {
        r[i] = fb->radix[x][i];
      }
      for (std::size_t j = sig.p; j < n; ++j) {
        r[j] = fb->radix[y][j];
      }
      for_each_digits(r, [&](std::vector<std::size_t> const& d) {
        std::vector<std::size_t> dx(n), dy(n);
        for (std::size_t i = 0; i < sig.p; ++i) {
          dx[i] = d[i];
          dy[i] = position(fb->legs[y][i],
                           C.compose(u, fb->legs[x][i][d[i]]));
        }
        for (std::size_t j = sig.p; j < n; ++j) {
          dy[j] = d[j];
          dx[j] = position(fb->legs[x][j],
                           C.compose(fb->legs[y][j][d[j]], u));
        }
        uf.unite(fb->offset[x] + encode(dx, fb->radix[x]),
                 fb->offset[y] + encode(dy, fb->radix[y]));
      });
    }
    fb->class_of = uf.class_index();
    fb->rep.assign(uf.num_classes(), FinCat::npos);
    fb->rep_x.assign(uf.num_classes(), FinCat::npos);
    std::vector<std::string> labels(fb->rep.size());
    for (std::size_t x = 0; x < C.num_objects(); ++x) {
      std::size_t end = x + 1 < C.num_objects() ? fb->offset[x + 1] : total;
      for (std::size_t k = fb->offset[x]; k < end; ++k) {
        std::size_t cl = fb->class_of[k];
        if (fb->rep[cl] != FinCat::npos) {
          continue;
        }
        fb->rep[cl]   = k;
        fb->rep_x[cl] = x;
        auto  d     = decode(k - fb->offset[x], fb->radix[x]);
        Tuple ms(n);
        for (std::size_t l = 0; l < n; ++l) {
          ms[l] = fb->legs[x][l][d[l]];
        }
        labels[cl] = "⟦" + C.object_name(x) + "|" + join(C, ms, 0, sig.p)
                     + "|" + join(C, ms, sig.p, n) + "⟧";
      }
    }
    fb->set = FinSet(std::move(labels));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(code, std::move(fb)).first->second;
  }

  // (x, leg morphisms) of the representative of a class.
  std::pair<std::size_t, Tuple> rep_of(Fiber const& fb, std::size_t cls) const {
    std::size_t k = fb.rep[cls], x = fb.rep_x[cls];
    auto        d = decode(k - fb.offset[x], fb.radix[x]);
    Tuple       ms(d.size());
    for (std::size_t l = 0; l < d.size(); ++l) {
      ms[l] = fb.legs[x][l][d[l]];
    }
    return {x, ms};
  }

  std::size_t class_in(Fiber const& fb, std::size_t x, Tuple const& ms) const {
    std::vector<std::size_t> d(ms.size());
    for (std::size_t l = 0; l < ms.size(); ++l) {
      d[l] = position(fb.legs[x][l], ms[l]);
    }
    return fb.class_of[fb.offset[x] + encode(d, fb.radix[x])];
  }
};

FactorizationWeight::FactorizationWeight(CatPtr c, VarianceSig sig)
    : _impl(std::make_shared<Impl>()) {
  _impl->c   = c;
  _impl->sig = sig;
  auto impl  = _impl;
  _functor   = SetFunctorPQ::lazy(
      c,
      sig,
      [impl](Tuple const& t) { return impl->get(t)->set; },
      [impl](Tuple const& m) {
        auto const& C = *impl->c;
        VarianceSig sg = impl->sig;
        Tuple       s(m.size()), t(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
          s[i] = i < sg.p ? C.tgt(m[i]) : C.src(m[i]);
          t[i] = i < sg.p ? C.src(m[i]) : C.tgt(m[i]);
        }
        auto                     from = impl->get(s);
        auto                     to   = impl->get(t);
        std::vector<std::size_t> table;
        for (std::size_t cl = 0; cl < from->set.size(); ++cl) {
          auto [x, ms] = impl->rep_of(*from, cl);
          for (std::size_t i = 0; i < sg.p; ++i) {
            ms[i] = C.compose(ms[i], m[i]);
          }
          for (std::size_t j = sg.p; j < m.size(); ++j) {
            ms[j] = C.compose(m[j], ms[j]);
          }
          table.push_back(impl->class_in(*to, x, ms));
        }
        return FinFn(to->set.size(), std::move(table));
      });
}

std::size_t FactorizationWeight::class_of(Tuple const& t, std::size_t x,
                                          Tuple const& legs) const {
  return _impl->class_in(*_impl->get(t), x, legs);
}

std::size_t FactorizationWeight::identity_class(std::size_t a) const {
  Tuple t(_impl->sig.arity(), a);
  Tuple legs(_impl->sig.arity(), _impl->c->identity(a));
  return class_of(t, a, legs);
}

Tuple FactorizationWeight::grid_of(Tuple const& t, std::size_t cls) const {
  auto        fb     = _impl->get(t);
  auto [x, ms]       = _impl->rep_of(*fb, cls);
  VarianceSig sig    = _impl->sig;
  Tuple       grid;
  for (std::size_t i = 0; i < sig.p; ++i) {
    for (std::size_t j = 0; j < sig.q; ++j) {
      grid.push_back(_impl->c->compose(ms[sig.p + j], ms[i]));
    }
  }
  (void)x;
  return grid;
}

ElementsCat tw_pq(FactorizationWeight const& w) {
  return category_of_elements(w.functor().functor());
}

ElementsCat tw_pq(CatPtr c, VarianceSig sig) {
  return tw_pq(FactorizationWeight(std::move(c), sig));
}

ElementsCat twisted_arrow(CatPtr c) {
  return category_of_elements(hom_functor(std::move(c)).functor());
}

Functor sigma_pq(ElementsCat const& tw, CatPtr c, VarianceSig sig) {
  CatPtr            target = power_pq(c, sig);
  std::size_t const no = c->num_objects(), nm = c->num_morphisms();
  Functor           s{tw.total, target, {}, {}};
  for (auto t : tw.obj_base) {
    auto ab = tuple_decode(t, no, 2);
    Tuple d(sig.arity());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = i < sig.p ? ab[0] : ab[1];
    }
    s.on_objects.push_back(tuple_code(d, no));
  }
  for (auto m : tw.mor_base) {
    auto  uv = tuple_decode(m, nm, 2);
    Tuple d(sig.arity());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = i < sig.p ? uv[0] : uv[1];
    }
    s.on_morphisms.push_back(tuple_code(d, nm));
  }
  return s;
}

Functor tw11_to_classical(FactorizationWeight const& w11,
                          ElementsCat const&         tw11,
                          ElementsCat const&         tw) {
  auto const&       C  = *w11.functor().base();
  std::size_t const no = C.num_objects();
  Functor           F{tw11.total, tw.total, {}, {}};
  auto image = [&](std::size_t t, std::size_t cls) {
    Tuple       ab   = tuple_decode(t, no, 2);
    Tuple       grid = w11.grid_of(ab, cls);
    auto        hom  = C.hom(ab[0], ab[1]);
    std::size_t e    = position(hom, grid.at(0));
    return e;
  };
  for (std::size_t k = 0; k < tw11.obj_base.size(); ++k) {
    std::size_t t = tw11.obj_base[k];
    F.on_objects.push_back(tw.object_of(t, image(t, tw11.obj_elem[k])));
  }
  for (std::size_t k = 0; k < tw11.mor_base.size(); ++k) {
    std::size_t m   = tw11.mor_base[k];
    std::size_t src = tw11.projection.source->src(k);
    std::size_t t   = tw11.obj_base[src];
    F.on_morphisms.push_back(
        tw.morphism_of(m, image(t, tw11.obj_elem[src])));
  }
  return F;
}

SetFunctorPQ tw_j_functor(CatPtr c, std::size_t a, std::size_t b) {
  auto homs = [c, a, b](std::size_t x, std::size_t y) {
    return std::vector<std::vector<std::size_t>>{
        c->hom(a, b), c->hom(a, y), c->hom(x, b), c->hom(x, y)};
  };
  auto fiber = [c, homs](Tuple const& t) {
    std::vector<FinSet> parts;
    for (auto const& h : homs(t[0], t[1])) {
      std::vector<std::string> names;
      for (auto f : h) {
        names.push_back(c->morphism_name(f));
      }
      parts.emplace_back(std::move(names));
    }
    return product(parts);
  };
  CatPtr base = c;
  return SetFunctorPQ::lazy(base, {1, 1}, fiber, [c, homs](Tuple const& m) {
    std::size_t u = m[0], v = m[1];
    auto        from = homs(c->tgt(u), c->src(v));
    auto        to   = homs(c->src(u), c->tgt(v));
    std::vector<std::size_t> rf, rt;
    for (auto const& h : from) {
      rf.push_back(h.size());
    }
    for (auto const& h : to) {
      rt.push_back(h.size());
    }
    std::vector<std::size_t> table;
    for_each_digits(rf, [&](std::vector<std::size_t> const& d) {
      std::size_t g = from[0][d[0]], psi = from[1][d[1]];
      std::size_t phi = from[2][d[2]], f = from[3][d[3]];
      std::vector<std::size_t> e{
          position(to[0], g),
          position(to[1], c->compose(v, psi)),
          position(to[2], c->compose(phi, u)),
          position(to[3], c->compose(v, c->compose(f, u)))};
      table.push_back(encode(e, rt));
    });
    std::size_t n = rt[0] * rt[1] * rt[2] * rt[3];
    return FinFn(n, std::move(table));
  });
}

ElementsCat tw_j(CatPtr c, std::size_t a, std::size_t b) {
  return category_of_elements(tw_j_functor(std::move(c), a, b).functor());
}

Functor tw_embedding(ElementsCat const& tw, ElementsCat const& twj, CatPtr c,
                     std::size_t a, std::size_t b) {
  auto const& C  = *c;
  auto        ps = enumerate_nat(point_functor(c, {0, 1}).functor(),
                          covariant_representable(c, a).functor());
  auto        ph = enumerate_nat(point_functor(c, {1, 0}).functor(),
                          contravariant_representable(c, b).functor());
  if (ps.empty()) {
    throw Error(ErrorKind::NoFactorization,
                C.object_name(a) + " admits no natural family into C(" +
                    C.object_name(a) + ",-)");
  }
  if (ph.empty()) {
    throw Error(ErrorKind::NoFactorization,
                C.object_name(b) + " admits no natural family into C(-," +
                    C.object_name(b) + ")");
  }
  std::size_t const no = C.num_objects();
  auto              psi = [&](std::size_t x) {
    return C.hom(a, x)[ps.front().components[x](0)];
  };
  auto phi = [&](std::size_t x) {
    return C.hom(x, b)[ph.front().components[x](0)];
  };
  auto image = [&](std::size_t t, std::size_t e) {
    Tuple       xy = tuple_decode(t, no, 2);
    std::size_t x = xy[0], y = xy[1];
    std::size_t f = C.hom(x, y)[e];
    std::vector<std::size_t> d{
        position(C.hom(a, b), C.compose(phi(x), psi(x))),
        position(C.hom(a, y), C.compose(f, psi(x))),
        position(C.hom(x, b), phi(x)),
        position(C.hom(x, y), f)};
    std::vector<std::size_t> r{C.hom(a, b).size(), C.hom(a, y).size(),
                               C.hom(x, b).size(), C.hom(x, y).size()};
    return encode(d, r);
  };
  Functor F{tw.total, twj.total, {}, {}};
  for (std::size_t k = 0; k < tw.obj_base.size(); ++k) {
    F.on_objects.push_back(
        twj.object_of(tw.obj_base[k], image(tw.obj_base[k], tw.obj_elem[k])));
  }
  for (std::size_t k = 0; k < tw.mor_base.size(); ++k) {
    std::size_t src = tw.total->src(k);
    F.on_morphisms.push_back(twj.morphism_of(
        tw.mor_base[k], image(tw.obj_base[src], tw.obj_elem[src])));
  }
  return F;
}

bool is_injective_on_objects(Functor const& f) {
  auto v = f.on_objects;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool is_injective_on_morphisms(Functor const& f) {
  auto v = f.on_morphisms;
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace hace
