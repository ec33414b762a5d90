#include "hace/apps.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "hace/config.hpp"
#include "hace/dinat.hpp"
#include "hace/error.hpp"
#include "util.hpp"

namespace hace {

using detail::hom_labels;
using detail::hom_position;
using detail::tuple_src;
using detail::tuple_tgt;

namespace {

  Tuple pick(Tuple const& t, std::vector<std::size_t> const& slots) {
    Tuple r;
    r.reserve(slots.size());
    for (auto s : slots) {
      r.push_back(t[s]);
    }
    return r;
  }

  std::uint64_t product_size(std::vector<std::size_t> const& radix) {
    std::uint64_t n = 1;
    for (auto r : radix) {
      n = mul_sat(n, r);
    }
    return n;
  }

  void check_slots(CatPtr const& base, VarianceSig sig,
                   std::vector<Slotted> const& fs, bool flipped) {
    for (auto const& f : fs) {
      if (f.F.base()->num_objects() != base->num_objects()
          || f.F.base()->num_morphisms() != base->num_morphisms()) {
        throw Error(ErrorKind::ShapeMismatch, "integrand factor over another base");
      }
      if (f.slots.size() != f.F.sig().arity()) {
        throw Error(ErrorKind::ShapeMismatch, "integrand factor slot count");
      }
      for (std::size_t i = 0; i < f.slots.size(); ++i) {
        if (f.slots[i] >= sig.arity()) {
          throw Error(ErrorKind::ShapeMismatch, "integrand slot out of range");
        }
        bool contra_f = i < f.F.sig().p;
        bool contra_s = f.slots[i] < sig.p;
        if ((contra_f == contra_s) == flipped) {
          throw Error(ErrorKind::ShapeMismatch, "integrand slot variance");
        }
      }
    }
  }

  std::vector<std::size_t> radix_at(std::vector<Slotted> const& fs,
                                    Tuple const&                t) {
    std::vector<std::size_t> r;
    for (auto const& f : fs) {
      r.push_back(f.F.fiber(pick(t, f.slots)).size());
    }
    return r;
  }

  FinSet product_at(std::vector<Slotted> const& fs, Tuple const& t) {
    std::vector<FinSet> parts;
    for (auto const& f : fs) {
      parts.push_back(f.F.fiber(pick(t, f.slots)));
    }
    return product(parts);
  }

  // Applies fns[k] digitwise from a product of radix r1 to one of radix r2.
  FinFn digitwise(std::vector<std::size_t> const& r1,
                  std::vector<std::size_t> const& r2,
                  std::vector<FinFn> const&       fns) {
    std::vector<std::size_t> table;
    detail::for_each_digits(r1, [&](Tuple const& d) {
      Tuple e(d.size());
      for (std::size_t k = 0; k < d.size(); ++k) {
        e[k] = fns[k](d[k]);
      }
      table.push_back(encode(e, r2));
    });
    return FinFn(product_size(r2), std::move(table));
  }

  FinFn replace_digit(std::vector<std::size_t> const& r1,
                      std::vector<std::size_t> const& r2, std::size_t k,
                      FinFn const& fk) {
    std::vector<FinFn> fns;
    for (std::size_t i = 0; i < r1.size(); ++i) {
      fns.push_back(i == k ? fk : FinFn::identity(r1[i]));
    }
    return digitwise(r1, r2, fns);
  }

  // phi |-> phi . rho on the function set Set(dom, cod).
  FinFn precompose_all(FinFn const& rho, std::size_t ncod) {
    std::uint64_t n = pow_sat(ncod, rho.cod());
    check_cap(n, "function set");
    std::vector<std::size_t> table;
    for (std::size_t k = 0; k < n; ++k) {
      table.push_back(
          index_of_function(compose(function_at(k, rho.cod(), ncod), rho)));
    }
    return FinFn(pow_sat(ncod, rho.dom()), std::move(table));
  }

  SetFunctorPQ cov_pq(CatPtr const& c, SetFunctor const& F) {
    return SetFunctorPQ::lazy(
        c,
        {0, 1},
        [F](Tuple const& t) { return F.fiber(t[0]); },
        [F](Tuple const& m) { return F.act(m[0]); });
  }

  SetFunctorPQ const_pq(CatPtr const& c, FinSet const& x) {
    return constant_functor(c, {0, 0}, x);
  }

  std::size_t k_object(Functor const& K, std::size_t x, std::size_t y,
                       std::size_t no) {
    return K.on_objects[tuple_code(Tuple{x, y}, no)];
  }

  // (y ; x) |-> B(K(x,y), d)
  SetFunctorPQ k_hom_into(CatPtr const& c, Functor const& K, std::size_t d) {
    std::size_t const no = c->num_objects(), nm = c->num_morphisms();
    return SetFunctorPQ::lazy(
        c,
        {1, 1},
        [K, d, no](Tuple const& t) {
          return hom_labels(*K.target, k_object(K, t[1], t[0], no), d);
        },
        [c, K, d, no, nm](Tuple const& m) {
          auto const& B  = *K.target;
          Tuple       s  = tuple_src(*c, {1, 1}, m);
          Tuple       t  = tuple_tgt(*c, {1, 1}, m);
          std::size_t ks = k_object(K, s[1], s[0], no);
          std::size_t kt = k_object(K, t[1], t[0], no);
          std::size_t KM = K.on_morphisms[tuple_code(Tuple{m[1], m[0]}, nm)];
          std::vector<std::size_t> table;
          for (auto g : B.hom(ks, d)) {
            table.push_back(hom_position(B, kt, d, B.compose(g, KM)));
          }
          return FinFn(B.hom(kt, d).size(), std::move(table));
        });
  }

  // (x ; y) |-> B(d, K(x,y))
  SetFunctorPQ k_hom_from(CatPtr const& c, Functor const& K, std::size_t d) {
    std::size_t const no = c->num_objects(), nm = c->num_morphisms();
    return SetFunctorPQ::lazy(
        c,
        {1, 1},
        [K, d, no](Tuple const& t) {
          return hom_labels(*K.target, d, k_object(K, t[0], t[1], no));
        },
        [c, K, d, no, nm](Tuple const& m) {
          auto const& B  = *K.target;
          Tuple       s  = tuple_src(*c, {1, 1}, m);
          Tuple       t  = tuple_tgt(*c, {1, 1}, m);
          std::size_t ks = k_object(K, s[0], s[1], no);
          std::size_t kt = k_object(K, t[0], t[1], no);
          std::size_t KM = K.on_morphisms[tuple_code(m, nm)];
          std::vector<std::size_t> table;
          for (auto g : B.hom(d, ks)) {
            table.push_back(hom_position(B, d, kt, B.compose(KM, g)));
          }
          return FinFn(B.hom(d, kt).size(), std::move(table));
        });
  }

  // z |-> B(K z, d) of sig (1,0), and z |-> B(d, K z) of sig (0,1).
  SetFunctorPQ k1_hom_into(CatPtr const& c, Functor const& K, std::size_t d) {
    return SetFunctorPQ::lazy(
        c,
        {1, 0},
        [K, d](Tuple const& t) {
          return hom_labels(*K.target, K.on_objects[t[0]], d);
        },
        [c, K, d](Tuple const& m) {
          auto const& B = *K.target;
          std::size_t u = m[0];
          std::size_t s = K.on_objects[c->tgt(u)], t = K.on_objects[c->src(u)];
          std::vector<std::size_t> table;
          for (auto g : B.hom(s, d)) {
            table.push_back(
                hom_position(B, t, d, B.compose(g, K.on_morphisms[u])));
          }
          return FinFn(B.hom(t, d).size(), std::move(table));
        });
  }

  SetFunctorPQ k1_hom_from(CatPtr const& c, Functor const& K, std::size_t d) {
    return SetFunctorPQ::lazy(
        c,
        {0, 1},
        [K, d](Tuple const& t) {
          return hom_labels(*K.target, d, K.on_objects[t[0]]);
        },
        [c, K, d](Tuple const& m) {
          auto const& B = *K.target;
          std::size_t u = m[0];
          std::size_t s = K.on_objects[c->src(u)], t = K.on_objects[c->tgt(u)];
          std::vector<std::size_t> table;
          for (auto g : B.hom(d, s)) {
            table.push_back(
                hom_position(B, d, t, B.compose(K.on_morphisms[u], g)));
          }
          return FinFn(B.hom(d, t).size(), std::move(table));
        });
  }

  // Post- and precomposition with v : d -> d' on B(e, d) and B(d', e).
  FinFn post_with(FinCat const& B, std::size_t v, std::size_t e) {
    std::size_t d = B.src(v), d2 = B.tgt(v);
    std::vector<std::size_t> table;
    for (auto g : B.hom(e, d)) {
      table.push_back(hom_position(B, e, d2, B.compose(v, g)));
    }
    return FinFn(B.hom(e, d2).size(), std::move(table));
  }

  FinFn pre_with(FinCat const& B, std::size_t v, std::size_t e) {
    std::size_t d = B.src(v), d2 = B.tgt(v);
    std::vector<std::size_t> table;
    for (auto g : B.hom(d2, e)) {
      table.push_back(hom_position(B, d, e, B.compose(g, v)));
    }
    return FinFn(B.hom(d, e).size(), std::move(table));
  }

  // A family of integrands H_b over an index category, with the maps
  // H_b(A..;A..) -> H_b'(A..;A..) induced by v : b -> b'.
  struct Family {
    CatPtr                                             index;
    std::function<SetFunctorPQ(std::size_t)>           at;
    std::function<FinFn(std::size_t, std::size_t)>     along;
  };

  // Integrands built from slotted factors where one factor depends on b.
  struct ParamSpec {
    CatPtr                                          base;
    VarianceSig                                     sig;
    bool                                            function = false;
    std::function<std::vector<Slotted>(std::size_t)> dom;
    std::function<std::vector<Slotted>(std::size_t)> cod;
    std::size_t                                     k = 0;  // parameter factor
    // product: factor map at b -> at b'; function (parameter in dom): the
    // reverse direction.
    std::function<FinFn(std::size_t v, std::size_t a)> fk;
  };

  Family family_of(CatPtr index, ParamSpec spec) {
    Family f;
    f.index = index;
    f.at    = [spec](std::size_t b) {
      if (spec.function) {
        return function_integrand(spec.base, spec.sig, spec.dom(b), spec.cod(b));
      }
      return product_integrand(spec.base, spec.sig, spec.cod(b));
    };
    f.along = [spec, index](std::size_t v, std::size_t a) {
      std::size_t b = index->src(v), b2 = index->tgt(v);
      Tuple       diag(spec.sig.arity(), a);
      if (!spec.function) {
        return replace_digit(radix_at(spec.cod(b), diag),
                             radix_at(spec.cod(b2), diag), spec.k,
                             spec.fk(v, a));
      }
      FinFn rho = replace_digit(radix_at(spec.dom(b2), diag),
                                radix_at(spec.dom(b), diag), spec.k,
                                spec.fk(v, a));
      std::size_t ncod = product_at(spec.cod(b), diag).size();
      return precompose_all(rho, ncod);
    };
    return f;
  }

  struct FamilyCache {
    Family                                              fam;
    std::recursive_mutex                                mu;
    std::map<std::size_t, SetFunctorPQ>                 H;
    std::map<std::size_t, CoendPQ>                      Q;
    std::map<std::size_t, EndPQ>                        E;
    std::map<std::size_t, std::map<Tuple, std::size_t>> idx;

    SetFunctorPQ const& integrand(std::size_t b) {
      std::lock_guard<std::recursive_mutex> lock(mu);
      auto                                  it = H.find(b);
      if (it == H.end()) {
        it = H.emplace(b, fam.at(b)).first;
      }
      return it->second;
    }
    CoendPQ const& coend(std::size_t b) {
      std::lock_guard<std::recursive_mutex> lock(mu);
      auto                                  it = Q.find(b);
      if (it == Q.end()) {
        it = Q.emplace(b, coend_pq(integrand(b))).first;
      }
      return it->second;
    }
    EndPQ const& end(std::size_t b) {
      std::lock_guard<std::recursive_mutex> lock(mu);
      auto                                  it = E.find(b);
      if (it == E.end()) {
        it         = E.emplace(b, end_pq(integrand(b))).first;
        auto& m    = idx[b];
        auto  fams = it->second.families();
        for (std::size_t k = 0; k < fams.size(); ++k) {
          m.emplace(fams[k], k);
        }
      }
      return it->second;
    }
  };

  SetFunctor coend_functor(std::shared_ptr<FamilyCache> fc) {
    return SetFunctor::lazy(
        fc->fam.index,
        [fc](std::size_t b) { return fc->coend(b).carrier.carrier; },
        [fc](std::size_t v) {
          auto const&    I  = *fc->fam.index;
          CoendPQ const& Q1 = fc->coend(I.src(v));
          CoendPQ const& Q2 = fc->coend(I.tgt(v));
          std::size_t    n  = Q1.carrier.carrier.size();
          std::vector<std::size_t> table(n, 0);
          std::vector<bool>        done(n, false);
          for (std::size_t a = 0; a < Q1.carrier.legs.size(); ++a) {
            FinFn const& leg = Q1.carrier.legs[a];
            if (leg.dom() == 0) {
              continue;
            }
            FinFn f = fc->fam.along(v, a);
            for (std::size_t x = 0; x < leg.dom(); ++x) {
              if (!done[leg(x)]) {
                done[leg(x)]  = true;
                table[leg(x)] = Q2.carrier.legs[a](f(x));
              }
            }
          }
          return FinFn(Q2.carrier.carrier.size(), std::move(table));
        });
  }

  SetFunctor end_functor(std::shared_ptr<FamilyCache> fc) {
    return SetFunctor::lazy(
        fc->fam.index,
        [fc](std::size_t b) { return fc->end(b).carrier.carrier; },
        [fc](std::size_t v) {
          auto const&  I  = *fc->fam.index;
          std::size_t  b2 = I.tgt(v);
          EndPQ const& E1 = fc->end(I.src(v));
          EndPQ const& E2 = fc->end(b2);
          std::vector<FinFn> maps;
          for (std::size_t a = 0; a < E1.carrier.legs.size(); ++a) {
            maps.push_back(fc->fam.along(v, a));
          }
          std::lock_guard<std::recursive_mutex> lock(fc->mu);
          auto const&                           ix = fc->idx.at(b2);
          std::vector<std::size_t>              table;
          for (std::size_t k = 0; k < E1.carrier.carrier.size(); ++k) {
            Tuple fam;
            for (std::size_t a = 0; a < maps.size(); ++a) {
              fam.push_back(maps[a](E1.carrier.legs[a](k)));
            }
            auto it = ix.find(fam);
            if (it == ix.end()) {
              throw Error(ErrorKind::NotFunctorial, "induced family leaves the end");
            }
            table.push_back(it->second);
          }
          return FinFn(E2.carrier.carrier.size(), std::move(table));
        });
  }

  std::shared_ptr<FamilyCache> cache_of(Family f) {
    auto c = std::make_shared<FamilyCache>();
    c->fam = std::move(f);
    return c;
  }

  std::size_t pos_of_identity(FinCat const& B, std::size_t d) {
    return hom_position(B, d, d, B.identity(d));
  }

}  // namespace

////////////////////////////////////////////////////////////////////////
// Integrand builders
////////////////////////////////////////////////////////////////////////

SetFunctorPQ product_integrand(CatPtr base, VarianceSig sig,
                               std::vector<Slotted> factors) {
  check_slots(base, sig, factors, false);
  auto fs = std::make_shared<std::vector<Slotted> const>(std::move(factors));
  CatPtr c = base;
  return SetFunctorPQ::lazy(
      base,
      sig,
      [fs](Tuple const& t) {
        check_cap(product_size(radix_at(*fs, t)), "integrand fiber");
        return product_at(*fs, t);
      },
      [fs, c, sig](Tuple const& m) {
        Tuple              s = tuple_src(*c, sig, m);
        Tuple              t = tuple_tgt(*c, sig, m);
        std::vector<FinFn> fns;
        for (auto const& f : *fs) {
          fns.push_back(f.F.act(pick(m, f.slots)));
        }
        return digitwise(radix_at(*fs, s), radix_at(*fs, t), fns);
      });
}

SetFunctorPQ function_integrand(CatPtr base, VarianceSig sig,
                                std::vector<Slotted> dom,
                                std::vector<Slotted> cod) {
  check_slots(base, sig, dom, true);
  check_slots(base, sig, cod, false);
  auto ds = std::make_shared<std::vector<Slotted> const>(std::move(dom));
  auto cs = std::make_shared<std::vector<Slotted> const>(std::move(cod));
  CatPtr c = base;
  return SetFunctorPQ::lazy(
      base,
      sig,
      [ds, cs](Tuple const& t) {
        std::uint64_t nd = product_size(radix_at(*ds, t));
        std::uint64_t nc = product_size(radix_at(*cs, t));
        check_cap(pow_sat(nc, nd), "function integrand fiber");
        return hom_set(product_at(*ds, t), product_at(*cs, t));
      },
      [ds, cs, c, sig](Tuple const& m) {
        Tuple              s = tuple_src(*c, sig, m);
        Tuple              t = tuple_tgt(*c, sig, m);
        std::vector<FinFn> rf, kf;
        for (auto const& f : *ds) {
          rf.push_back(f.F.act(pick(m, f.slots)));
        }
        for (auto const& f : *cs) {
          kf.push_back(f.F.act(pick(m, f.slots)));
        }
        FinFn rho   = digitwise(radix_at(*ds, t), radix_at(*ds, s), rf);
        FinFn kappa = digitwise(radix_at(*cs, s), radix_at(*cs, t), kf);
        std::uint64_t n = pow_sat(kappa.dom(), rho.cod());
        check_cap(n, "function integrand action");
        std::vector<std::size_t> table;
        for (std::size_t k = 0; k < n; ++k) {
          FinFn phi = function_at(k, rho.cod(), kappa.dom());
          table.push_back(index_of_function(compose(kappa, compose(phi, rho))));
        }
        return FinFn(pow_sat(kappa.cod(), rho.dom()), std::move(table));
      });
}

////////////////////////////////////////////////////////////////////////
// Weighted co/ends
////////////////////////////////////////////////////////////////////////

SetFunctorPQ weighted_end_integrand(std::vector<SetFunctorPQ> const& Ws,
                                    SetFunctorPQ const&              D) {
  std::size_t const    n = Ws.size();
  std::vector<Slotted> dom;
  for (std::size_t k = 0; k < n; ++k) {
    dom.push_back({Ws[k], {n + 1 + k, k}});
  }
  return function_integrand(D.base(), {n + 1, n + 1}, dom, {{D, {n, 2 * n + 1}}});
}

SetFunctorPQ weighted_coend_integrand(std::vector<SetFunctorPQ> const& Ws,
                                      SetFunctorPQ const&              D) {
  std::size_t const    n = Ws.size();
  std::vector<Slotted> fs;
  for (std::size_t k = 0; k < n; ++k) {
    fs.push_back({Ws[k], {k, n + 1 + k}});
  }
  fs.push_back({D, {n, 2 * n + 1}});
  return product_integrand(D.base(), {n + 1, n + 1}, fs);
}

SetFunctorPQ weighted_end_integrand(SetFunctorPQ const& W, SetFunctorPQ const& D) {
  return weighted_end_integrand(std::vector<SetFunctorPQ>{W}, D);
}

SetFunctorPQ weighted_coend_integrand(SetFunctorPQ const& W,
                                      SetFunctorPQ const& D) {
  return weighted_coend_integrand(std::vector<SetFunctorPQ>{W}, D);
}

EndPQ weighted_end(SetFunctorPQ const& W, SetFunctorPQ const& D) {
  return end_pq(weighted_end_integrand(W, D));
}

CoendPQ weighted_coend(SetFunctorPQ const& W, SetFunctorPQ const& D) {
  return coend_pq(weighted_coend_integrand(W, D));
}

EndPQ weighted_end(std::vector<SetFunctorPQ> const& Ws, SetFunctorPQ const& D) {
  return end_pq(weighted_end_integrand(Ws, D));
}

CoendPQ weighted_coend(std::vector<SetFunctorPQ> const& Ws,
                       SetFunctorPQ const&              D) {
  return coend_pq(weighted_coend_integrand(Ws, D));
}

CountCheck weighted_end_vs_dinat(SetFunctorPQ const& W, SetFunctorPQ const& D) {
  CountCheck  r;
  std::size_t e = weighted_end(W, D).carrier.carrier.size();
  for (std::size_t nx = 1; nx <= 2; ++nx) {
    SetFunctorPQ G = function_integrand(D.base(), {1, 1},
                                        {{const_pq(D.base(), FinSet::range(nx)), {}}},
                                        {{D, {0, 1}}});
    std::size_t lhs = pow_sat(e, nx);
    std::size_t rhs = count_dinat(W, G);
    r.counts.push_back(lhs);
    r.counts.push_back(rhs);
    if (lhs != rhs) {
      r.failures.push_back("|Set(" + std::to_string(nx) + ", weighted end)| = "
                           + std::to_string(lhs) + " but DiNat has "
                           + std::to_string(rhs));
    }
  }
  r.ok = r.failures.empty();
  return r;
}

CountCheck weighted_coend_vs_dinat(SetFunctorPQ const& W, SetFunctorPQ const& D) {
  CountCheck  r;
  std::size_t e = weighted_coend(W, D).carrier.carrier.size();
  for (std::size_t ny = 1; ny <= 2; ++ny) {
    SetFunctorPQ G = function_integrand(D.base(), {1, 1}, {{D, {1, 0}}},
                                        {{const_pq(D.base(), FinSet::range(ny)), {}}});
    std::size_t lhs = pow_sat(ny, e);
    std::size_t rhs = count_dinat(W, G);
    r.counts.push_back(lhs);
    r.counts.push_back(rhs);
    if (lhs != rhs) {
      r.failures.push_back("|Set(weighted coend, " + std::to_string(ny) + ")| = "
                           + std::to_string(lhs) + " but DiNat has "
                           + std::to_string(rhs));
    }
  }
  r.ok = r.failures.empty();
  return r;
}

CountCheck doubly_weighted_check(SetFunctorPQ const& W1, SetFunctorPQ const& W2,
                                 SetFunctorPQ const& D) {
  CountCheck   r;
  CatPtr const c  = D.base();
  EndPQ        E2 = weighted_end({W1, W2}, D);
  SetFunctorPQ H  = weighted_end_integrand(W2, D);
  SetFunctorPQ Hc = function_integrand(c, {3, 3}, {{W1, {3, 0}}},
                                       {{H, {1, 2, 4, 5}}});
  EndPQ              Ec = end_pq(Hc);
  std::set<std::size_t> image;
  bool                  found = true;
  for (std::size_t f = 0; f < Ec.carrier.carrier.size(); ++f) {
    Tuple fam;
    for (std::size_t a = 0; a < c->num_objects(); ++a) {
      std::size_t n1 = W1.fiber(W1.diag(a)).size();
      std::size_t n2 = W2.fiber(W2.diag(a)).size();
      std::size_t nd = D.fiber(D.diag(a)).size();
      FinFn       phi = function_at(Ec.carrier.legs[a](f), n1, pow_sat(nd, n2));
      std::vector<std::size_t> table;
      for (std::size_t w1 = 0; w1 < n1; ++w1) {
        FinFn inner = function_at(phi(w1), n2, nd);
        for (std::size_t w2 = 0; w2 < n2; ++w2) {
          table.push_back(inner(w2));
        }
      }
      fam.push_back(index_of_function(FinFn(nd, std::move(table))));
    }
    auto j = find_family(E2, fam);
    if (!j) {
      found = false;
    } else {
      image.insert(*j);
    }
  }
  r.counts = {E2.carrier.carrier.size(), Ec.carrier.carrier.size()};
  if (!found || image.size() != Ec.carrier.carrier.size()
      || image.size() != E2.carrier.carrier.size()) {
    r.failures.push_back("doubly weighted end has "
                         + std::to_string(E2.carrier.carrier.size())
                         + " elements, the curried form "
                         + std::to_string(Ec.carrier.carrier.size()));
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Weighted Kan extensions
////////////////////////////////////////////////////////////////////////

namespace {

  std::shared_ptr<FamilyCache> weighted_kan_cache(SetFunctor const& F,
                                                  Functor const&    K,
                                                  SetFunctorPQ const& W,
                                                  KanSide             side) {
    CatPtr       c  = K.source;
    SetFunctorPQ Fp = cov_pq(c, F);
    ParamSpec    s;
    s.base = c;
    s.sig  = {2, 2};
    if (side == KanSide::left) {
      s.cod = [c, K, W, Fp](std::size_t d) {
        return std::vector<Slotted>{{W, {0, 2}}, {k1_hom_into(c, K, d), {1}},
                                    {Fp, {3}}};
      };
      s.k  = 1;
      s.fk = [K](std::size_t v, std::size_t a) {
        return post_with(*K.target, v, K.on_objects[a]);
      };
    } else {
      s.function = true;
      s.dom      = [c, K, W](std::size_t d) {
        return std::vector<Slotted>{{W, {2, 0}}, {k1_hom_from(c, K, d), {1}}};
      };
      s.cod = [Fp](std::size_t) { return std::vector<Slotted>{{Fp, {3}}}; };
      s.k   = 1;
      s.fk  = [K](std::size_t v, std::size_t a) {
        return pre_with(*K.target, v, K.on_objects[a]);
      };
    }
    return cache_of(family_of(K.target, s));
  }

}  // namespace

SetFunctor weighted_kan(SetFunctor const& F, Functor const& K,
                        SetFunctorPQ const& W, KanSide side) {
  auto fc = weighted_kan_cache(F, K, W, side);
  return side == KanSide::left ? coend_functor(fc) : end_functor(fc);
}

CountCheck weighted_kan_check(SetFunctor const& F, Functor const& K,
                              SetFunctorPQ const& W, SetFunctor const& G,
                              KanSide side) {
  CountCheck   r;
  CatPtr       c   = K.source;
  SetFunctor   ext = weighted_kan(F, K, W, side);
  SetFunctorPQ Fp  = cov_pq(c, F);
  SetFunctorPQ GK  = cov_pq(c, precompose(G, K));
  std::size_t  lhs, rhs;
  if (side == KanSide::left) {
    lhs = count_nat(ext, G);
    SetFunctorPQ T = function_integrand(c, {1, 1}, {{Fp, {0}}}, {{GK, {1}}});
    rhs            = weighted_end(W, T).carrier.carrier.size();
  } else {
    lhs = count_nat(G, ext);
    SetFunctorPQ T = function_integrand(c, {1, 1}, {{GK, {0}}}, {{Fp, {1}}});
    rhs            = weighted_end(W, T).carrier.carrier.size();
  }
  r.counts = {lhs, rhs};
  if (lhs != rhs) {
    r.failures.push_back("weighted Kan: Nat count " + std::to_string(lhs)
                         + " vs weighted Nat " + std::to_string(rhs));
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Diagonal Kan extensions
////////////////////////////////////////////////////////////////////////

namespace {

  std::shared_ptr<FamilyCache> diagonal_cache(SetFunctorPQ const& F,
                                              Functor const& K, KanSide side,
                                              SetFunctorPQ const* W) {
    CatPtr    c = F.base();
    ParamSpec s;
    s.base = c;
    if (side == KanSide::left) {
      if (W) {
        s.sig = {4, 4};
        SetFunctorPQ w = *W;
        s.cod          = [c, K, F, w](std::size_t d) {
          return std::vector<Slotted>{
              {w, {0, 1, 4, 5}}, {k_hom_into(c, K, d), {2, 6}}, {F, {3, 7}}};
        };
        s.k = 1;
      } else {
        s.sig = {2, 2};
        s.cod = [c, K, F](std::size_t d) {
          return std::vector<Slotted>{{k_hom_into(c, K, d), {0, 2}}, {F, {1, 3}}};
        };
        s.k = 0;
      }
      std::size_t const no = c->num_objects();
      s.fk                 = [K, no](std::size_t v, std::size_t a) {
        return post_with(*K.target, v, k_object(K, a, a, no));
      };
    } else {
      s.function = true;
      if (W) {
        s.sig          = {4, 4};
        SetFunctorPQ w = *W;
        s.dom          = [c, K, w](std::size_t d) {
          return std::vector<Slotted>{{w, {4, 5, 0, 1}},
                                      {k_hom_from(c, K, d), {6, 2}}};
        };
        s.cod = [F](std::size_t) { return std::vector<Slotted>{{F, {3, 7}}}; };
        s.k   = 1;
      } else {
        s.sig = {2, 2};
        s.dom = [c, K](std::size_t d) {
          return std::vector<Slotted>{{k_hom_from(c, K, d), {2, 0}}};
        };
        s.cod = [F](std::size_t) { return std::vector<Slotted>{{F, {1, 3}}}; };
        s.k   = 0;
      }
      std::size_t const no = c->num_objects();
      s.fk                 = [K, no](std::size_t v, std::size_t a) {
        return pre_with(*K.target, v, k_object(K, a, a, no));
      };
    }
    return cache_of(family_of(K.target, s));
  }

  using Tables = std::vector<std::vector<std::size_t>>;

  Tables tables_of(DinatPQ const& d) {
    Tables t;
    for (auto const& c : d.components) {
      t.push_back(c.table());
    }
    return t;
  }

}  // namespace

SetFunctor diagonal_kan(SetFunctorPQ const& F, Functor const& K, KanSide side) {
  auto fc = diagonal_cache(F, K, side, nullptr);
  return side == KanSide::left ? coend_functor(fc) : end_functor(fc);
}

SetFunctor weighted_diagonal_kan(SetFunctorPQ const& F, Functor const& K,
                                 SetFunctorPQ const& W, KanSide side) {
  auto fc = diagonal_cache(F, K, side, &W);
  return side == KanSide::left ? coend_functor(fc) : end_functor(fc);
}

SetFunctorPQ weighted_diagonal_integrand(SetFunctorPQ const& F, Functor const& K,
                                         SetFunctorPQ const& W, std::size_t d,
                                         KanSide side) {
  return diagonal_cache(F, K, side, &W)->fam.at(d);
}

CountCheck diagonal_kan_check(SetFunctorPQ const& F, Functor const& K,
                              SetFunctor const& G, KanSide side) {
  CountCheck        r;
  CatPtr            c  = F.base();
  auto const&       B  = *K.target;
  std::size_t const no = c->num_objects();
  auto              fc = diagonal_cache(F, K, side, nullptr);
  SetFunctorPQ      GK(c, {1, 1}, precompose(G, K));
  std::vector<DinatPQ> dinats;
  std::vector<NatTransf> nats;
  std::vector<DinatPQ>   images;
  if (side == KanSide::left) {
    SetFunctor ext = coend_functor(fc);
    dinats         = enumerate_dinat(F, GK);
    nats           = enumerate_nat(ext, G);
    // u_A : F(A;A) -> DiLan(K(A,A)), e |-> [A ; id ; e]
    std::vector<FinFn> u;
    for (std::size_t a = 0; a < no; ++a) {
      std::size_t    d  = k_object(K, a, a, no);
      CoendPQ const& Q  = fc->coend(d);
      std::size_t    ne = F.fiber(F.diag(a)).size();
      std::vector<std::size_t> radix{B.hom(d, d).size(), ne};
      std::vector<std::size_t> table;
      for (std::size_t e = 0; e < ne; ++e) {
        table.push_back(Q.carrier.legs[a](encode({pos_of_identity(B, d), e}, radix)));
      }
      u.emplace_back(Q.carrier.carrier.size(), std::move(table));
    }
    for (auto const& alpha : nats) {
      DinatPQ th{F, GK, {}};
      for (std::size_t a = 0; a < no; ++a) {
        th.components.push_back(
            compose(alpha.components[k_object(K, a, a, no)], u[a]));
      }
      images.push_back(th);
    }
  } else {
    SetFunctor ext = end_functor(fc);
    dinats         = enumerate_dinat(GK, F);
    nats           = enumerate_nat(G, ext);
    // eps_A : DiRan(K(A,A)) -> F(A;A), phi |-> phi_A(id)
    std::vector<FinFn> eps;
    for (std::size_t a = 0; a < no; ++a) {
      std::size_t  d  = k_object(K, a, a, no);
      EndPQ const& E  = fc->end(d);
      std::size_t  nf = F.fiber(F.diag(a)).size();
      std::size_t  nh = B.hom(d, d).size();
      std::vector<std::size_t> table;
      for (std::size_t k = 0; k < E.carrier.carrier.size(); ++k) {
        table.push_back(
            function_at(E.carrier.legs[a](k), nh, nf)(pos_of_identity(B, d)));
      }
      eps.emplace_back(nf, std::move(table));
    }
    for (auto const& beta : nats) {
      DinatPQ th{GK, F, {}};
      for (std::size_t a = 0; a < no; ++a) {
        th.components.push_back(
            compose(eps[a], beta.components[k_object(K, a, a, no)]));
      }
      images.push_back(th);
    }
  }
  std::set<Tables> want;
  for (auto const& d : dinats) {
    want.insert(tables_of(d));
  }
  std::set<Tables> got;
  for (auto const& th : images) {
    if (!check_dinatural(th).ok) {
      r.failures.push_back("composite with the universal family is not dinatural");
      break;
    }
    got.insert(tables_of(th));
  }
  r.counts = {nats.size(), dinats.size()};
  if (got.size() != images.size() || got != want) {
    r.failures.push_back("Nat has " + std::to_string(nats.size())
                         + " elements, DiNat has " + std::to_string(dinats.size()));
  }
  r.ok = r.failures.empty();
  return r;
}

CountCheck diagonal_vs_hom_weighted(SetFunctorPQ const& F, Functor const& K,
                                    KanSide side) {
  CountCheck   r;
  CatPtr       c   = F.base();
  SetFunctor   ext = diagonal_kan(F, K, side);
  SetFunctorPQ hom = hom_functor(c);
  for (std::size_t d = 0; d < K.target->num_objects(); ++d) {
    std::size_t lhs = ext.fiber(d).size(), rhs;
    if (side == KanSide::left) {
      SetFunctorPQ Dd = product_integrand(c, {1, 1},
                                          {{k_hom_into(c, K, d), {0, 1}}, {F, {0, 1}}});
      rhs = weighted_coend(hom, Dd).carrier.carrier.size();
    } else {
      SetFunctorPQ Dd = function_integrand(c, {1, 1}, {{k_hom_from(c, K, d), {1, 0}}},
                                           {{F, {0, 1}}});
      rhs = weighted_end(hom, Dd).carrier.carrier.size();
    }
    r.counts.push_back(lhs);
    r.counts.push_back(rhs);
    if (lhs != rhs) {
      r.failures.push_back("at " + K.target->object_name(d) + ": "
                           + std::to_string(lhs) + " vs hom-weighted "
                           + std::to_string(rhs));
    }
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Day convolution
////////////////////////////////////////////////////////////////////////

std::size_t MonoidalFinCat::tensor_objects(std::vector<std::size_t> const& xs) const {
  if (xs.empty()) {
    return unit;
  }
  std::size_t const no = base->num_objects();
  std::size_t       r  = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) {
    r = tensor.on_objects[tuple_code(Tuple{r, xs[i]}, no)];
  }
  return r;
}

std::size_t MonoidalFinCat::tensor_morphisms(
    std::vector<std::size_t> const& fs) const {
  if (fs.empty()) {
    return base->identity(unit);
  }
  std::size_t const nm = base->num_morphisms();
  std::size_t       r  = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) {
    r = tensor.on_morphisms[tuple_code(Tuple{r, fs[i]}, nm)];
  }
  return r;
}

MonoidalFinCat make_monoidal(CatPtr base, Functor tensor, std::size_t unit) {
  auto problems = check_functor(tensor);
  if (!problems.empty()) {
    throw Error(ErrorKind::NotStrictMonoidal, "tensor is not a functor: " + problems[0]);
  }
  MonoidalFinCat    M{base, std::move(tensor), unit};
  auto const&       C  = *base;
  std::size_t const no = C.num_objects(), nm = C.num_morphisms();
  if (M.tensor.source->num_objects() != no * no || unit >= no) {
    throw Error(ErrorKind::NotStrictMonoidal, "tensor has the wrong shape");
  }
  auto t = [&](std::size_t a, std::size_t b) {
    return M.tensor.on_objects[tuple_code(Tuple{a, b}, no)];
  };
  auto tm = [&](std::size_t f, std::size_t g) {
    return M.tensor.on_morphisms[tuple_code(Tuple{f, g}, nm)];
  };
  for (std::size_t a = 0; a < no; ++a) {
    if (t(unit, a) != a || t(a, unit) != a) {
      throw Error(ErrorKind::NotStrictMonoidal,
                  "unit law fails at " + C.object_name(a));
    }
    for (std::size_t b = 0; b < no; ++b) {
      for (std::size_t c = 0; c < no; ++c) {
        if (t(t(a, b), c) != t(a, t(b, c))) {
          throw Error(ErrorKind::NotStrictMonoidal,
                      "associativity fails at (" + C.object_name(a) + ","
                          + C.object_name(b) + "," + C.object_name(c) + ")");
        }
      }
    }
  }
  std::size_t const iu = C.identity(unit);
  for (std::size_t f = 0; f < nm; ++f) {
    if (tm(iu, f) != f || tm(f, iu) != f) {
      throw Error(ErrorKind::NotStrictMonoidal,
                  "unit law fails at " + C.morphism_name(f));
    }
    for (std::size_t g = 0; g < nm; ++g) {
      for (std::size_t h = 0; h < nm; ++h) {
        if (tm(tm(f, g), h) != tm(f, tm(g, h))) {
          throw Error(ErrorKind::NotStrictMonoidal,
                      "associativity fails at (" + C.morphism_name(f) + ","
                          + C.morphism_name(g) + "," + C.morphism_name(h) + ")");
        }
      }
    }
  }
  return M;
}

MonoidalFinCat trivial_monoidal() {
  CatPtr  c = terminal_category();
  Functor t{FinCat::product({c, c}), c, {0}, {0}};
  return make_monoidal(c, t, 0);
}

MonoidalFinCat monoid_monoidal(CatPtr monoid) {
  if (monoid->num_objects() != 1) {
    throw Error(ErrorKind::NotAMonoid, monoid->name() + " has more than one object");
  }
  std::size_t const nm = monoid->num_morphisms();
  Functor           t{FinCat::product({monoid, monoid}), monoid, {0}, {}};
  for (std::size_t f = 0; f < nm; ++f) {
    for (std::size_t g = 0; g < nm; ++g) {
      t.on_morphisms.push_back(monoid->compose(f, g));
    }
  }
  return make_monoidal(monoid, t, 0);
}

namespace {

  // B_1..B_n |-> C(x, B_1 .. B_n) of sig (0,n).
  SetFunctorPQ tensor_hom(MonoidalFinCat const& M, std::size_t n, std::size_t x) {
    CatPtr c = M.base;
    return SetFunctorPQ::lazy(
        c,
        {0, n},
        [M, x](Tuple const& t) {
          return hom_labels(*M.base, x, M.tensor_objects(t));
        },
        [M, x](Tuple const& m) {
          auto const& C = *M.base;
          Tuple       s, t;
          for (auto f : m) {
            s.push_back(C.src(f));
            t.push_back(C.tgt(f));
          }
          std::size_t ts = M.tensor_objects(s), tt = M.tensor_objects(t);
          std::size_t tm = M.tensor_morphisms(m);
          std::vector<std::size_t> table;
          for (auto g : C.hom(x, ts)) {
            table.push_back(hom_position(C, x, tt, C.compose(tm, g)));
          }
          return FinFn(C.hom(x, tt).size(), std::move(table));
        });
  }

  void check_presheaves(MonoidalFinCat const& M, std::vector<SetFunctorPQ> const& Fs) {
    if (Fs.empty()) {
      throw Error(ErrorKind::ShapeMismatch, "Day convolution of no presheaves");
    }
    for (auto const& F : Fs) {
      if (F.sig() != VarianceSig{1, 0}
          || F.base()->num_morphisms() != M.base->num_morphisms()) {
        throw Error(ErrorKind::ShapeMismatch, "Day convolution needs presheaves");
      }
    }
  }

}  // namespace

SetFunctorPQ day_integrand(MonoidalFinCat const& M,
                           std::vector<SetFunctorPQ> const& Fs, std::size_t x) {
  check_presheaves(M, Fs);
  std::size_t const    n = Fs.size();
  std::vector<Slotted> fs;
  for (std::size_t k = 0; k < n; ++k) {
    fs.push_back({Fs[k], {k}});
  }
  std::vector<std::size_t> cov;
  for (std::size_t k = 0; k < n; ++k) {
    cov.push_back(n + k);
  }
  fs.push_back({tensor_hom(M, n, x), cov});
  return product_integrand(M.base, {n, n}, fs);
}

SetFunctorPQ day_convolution(MonoidalFinCat const&            M,
                             std::vector<SetFunctorPQ> const& Fs) {
  check_presheaves(M, Fs);
  std::size_t const n     = Fs.size();
  CatPtr            index = power_pq(M.base, {1, 0});
  ParamSpec         s;
  s.base = M.base;
  s.sig  = {n, n};
  s.cod  = [M, Fs, n](std::size_t x) {
    std::vector<Slotted> fs;
    for (std::size_t k = 0; k < n; ++k) {
      fs.push_back({Fs[k], {k}});
    }
    std::vector<std::size_t> cov;
    for (std::size_t k = 0; k < n; ++k) {
      cov.push_back(n + k);
    }
    fs.push_back({tensor_hom(M, n, x), cov});
    return fs;
  };
  s.k  = n;
  // u : x' -> x in C runs from x to x' in the index category.
  s.fk = [M, n](std::size_t u, std::size_t a) {
    auto const& C  = *M.base;
    std::size_t an = M.tensor_objects(Tuple(n, a));
    std::vector<std::size_t> table;
    for (auto g : C.hom(C.tgt(u), an)) {
      table.push_back(hom_position(C, C.src(u), an, C.compose(g, u)));
    }
    return FinFn(C.hom(C.src(u), an).size(), std::move(table));
  };
  return SetFunctorPQ(M.base, {1, 0}, coend_functor(cache_of(family_of(index, s))));
}

SetFunctorPQ day_classical(MonoidalFinCat const& M, SetFunctorPQ const& F,
                           SetFunctorPQ const& G) {
  check_presheaves(M, {F, G});
  CatPtr const      C  = M.base;
  CatPtr const      P  = FinCat::product({C, C});
  std::size_t const no = C->num_objects(), nm = C->num_morphisms();
  Family            fam;
  fam.index = power_pq(C, {1, 0});
  fam.at    = [M, F, G, P, no, nm](std::size_t x) {
    auto parts = [F, G, M, x, no](Tuple const& t) {
      Tuple ab1 = tuple_decode(t[0], no, 2), ab2 = tuple_decode(t[1], no, 2);
      return std::vector<FinSet>{
          F.fiber(Tuple{ab1[0]}), G.fiber(Tuple{ab1[1]}),
          hom_labels(*M.base, x, M.tensor_objects({ab2[0], ab2[1]}))};
    };
    return SetFunctorPQ::lazy(
        P,
        {1, 1},
        [parts](Tuple const& t) { return product(parts(t)); },
        [parts, M, F, G, P, x, nm](Tuple const& m) {
          auto const& C  = *M.base;
          Tuple       s  = tuple_src(*P, {1, 1}, m);
          Tuple       t  = tuple_tgt(*P, {1, 1}, m);
          Tuple       fg1 = tuple_decode(m[0], nm, 2), fg2 = tuple_decode(m[1], nm, 2);
          std::size_t tm  = M.tensor_morphisms({fg2[0], fg2[1]});
          std::size_t src2 = M.tensor_objects({C.src(fg2[0]), C.src(fg2[1])});
          std::size_t tgt2 = M.tensor_objects({C.tgt(fg2[0]), C.tgt(fg2[1])});
          std::vector<std::size_t> table;
          for (auto g : C.hom(x, src2)) {
            table.push_back(hom_position(C, x, tgt2, C.compose(tm, g)));
          }
          std::vector<std::size_t> rs, rt;
          for (auto const& f : parts(s)) {
            rs.push_back(f.size());
          }
          for (auto const& f : parts(t)) {
            rt.push_back(f.size());
          }
          return digitwise(rs, rt,
                           {F.act(Tuple{fg1[0]}), G.act(Tuple{fg1[1]}),
                            FinFn(C.hom(x, tgt2).size(), std::move(table))});
        });
  };
  fam.along = [M, F, G, no](std::size_t u, std::size_t p) {
    auto const& C  = *M.base;
    Tuple       ab = tuple_decode(p, no, 2);
    std::size_t t  = M.tensor_objects({ab[0], ab[1]});
    std::vector<std::size_t> table;
    for (auto g : C.hom(C.tgt(u), t)) {
      table.push_back(hom_position(C, C.src(u), t, C.compose(g, u)));
    }
    std::size_t nf = F.fiber(Tuple{ab[0]}).size(), ng = G.fiber(Tuple{ab[1]}).size();
    return replace_digit({nf, ng, C.hom(C.tgt(u), t).size()},
                         {nf, ng, C.hom(C.src(u), t).size()}, 2,
                         FinFn(C.hom(C.src(u), t).size(), std::move(table)));
  };
  return SetFunctorPQ(M.base, {1, 0}, coend_functor(cache_of(std::move(fam))));
}

CountCheck day_coyoneda_check(MonoidalFinCat const& M, SetFunctorPQ const& F) {
  CountCheck  r;
  auto const& C = *M.base;
  for (std::size_t x = 0; x < C.num_objects(); ++x) {
    CoendPQ     Q  = coend_pq(day_integrand(M, {F}, x));
    std::size_t nq = Q.carrier.carrier.size();
    std::size_t nf = F.fiber(Tuple{x}).size();
    std::vector<std::size_t> value(nq, FinCat::npos);
    bool                     ok = true;
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      auto        homs = C.hom(x, a);
      std::size_t ne   = F.fiber(Tuple{a}).size();
      for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t k = 0; k < homs.size(); ++k) {
          std::size_t cls = Q.carrier.legs[a](encode({e, k}, {ne, homs.size()}));
          std::size_t v   = F.act(Tuple{homs[k]})(e);
          if (value[cls] != FinCat::npos && value[cls] != v) {
            ok = false;
          }
          value[cls] = v;
        }
      }
    }
    std::set<std::size_t> image(value.begin(), value.end());
    r.counts.push_back(nq);
    r.counts.push_back(nf);
    if (!ok || nq != nf || image.size() != nq || image.count(FinCat::npos) != 0) {
      r.failures.push_back("at " + C.object_name(x) + ": convolution has "
                           + std::to_string(nq) + " classes, F has "
                           + std::to_string(nf) + " elements");
    }
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Products in thin categories
////////////////////////////////////////////////////////////////////////

SetFunctorPQ product_hom(CatPtr c) {
  std::size_t const n = c->num_objects();
  auto le = [&c](std::size_t a, std::size_t b) { return !c->hom(a, b).empty(); };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (c->hom(a, b).size() > 1) {
        throw Error(ErrorKind::NotALattice, c->name() + " is not thin");
      }
    }
  }
  auto meets = std::make_shared<std::vector<std::size_t>>(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::optional<std::size_t> m;
      for (std::size_t x = 0; x < n && !m; ++x) {
        if (!le(x, a) || !le(x, b)) {
          continue;
        }
        bool greatest = true;
        for (std::size_t y = 0; y < n && greatest; ++y) {
          greatest = !(le(y, a) && le(y, b)) || le(y, x);
        }
        if (greatest) {
          m = x;
        }
      }
      if (!m) {
        throw Error(ErrorKind::NotALattice, "no meet of " + c->object_name(a) + " and "
                                                + c->object_name(b));
      }
      (*meets)[a * n + b] = *m;
    }
  }
  VarianceSig const sig{2, 1};
  auto fiber = [c, meets, n](Tuple const& t) {
    auto h = c->hom((*meets)[t[0] * n + t[1]], t[2]);
    return h.empty() ? FinSet() : FinSet({c->morphism_name(h[0])});
  };
  return SetFunctorPQ::lazy(
      c, sig, fiber, [c, sig, fiber](Tuple const& m) {
        std::size_t ns = fiber(tuple_src(*c, sig, m)).size();
        std::size_t nt = fiber(tuple_tgt(*c, sig, m)).size();
        return FinFn(nt, std::vector<std::size_t>(ns, 0));
      });
}

}  // namespace hace
