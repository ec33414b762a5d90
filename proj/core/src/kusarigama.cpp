#include "hace/kusarigama.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "hace/config.hpp"
#include "hace/error.hpp"
#include "hace/twisted.hpp"
#include "util.hpp"

namespace hace {

using detail::hom_labels;
using detail::hom_position;
using detail::tuple_src;
using detail::tuple_tgt;

namespace {

  std::vector<std::size_t> radix_of(std::vector<FinSet> const& factors) {
    std::vector<std::size_t> r;
    for (auto const& f : factors) {
      r.push_back(f.size());
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

  std::vector<std::vector<std::size_t>> all_tuples(std::size_t n,
                                                   std::size_t len) {
    std::vector<std::vector<std::size_t>> out;
    detail::for_each_digits(std::vector<std::size_t>(len, n),
                            [&](Tuple const& t) { out.push_back(t); });
    return out;
  }

}  // namespace

////////////////////////////////////////////////////////////////////////
// Cokusarigama
////////////////////////////////////////////////////////////////////////

struct CokusarigamaResult::Impl {
  SetFunctorPQ F;
  CatPtr       c;
  VarianceSig  sig;  // of F

  std::recursive_mutex                          mu;
  std::map<std::size_t, SetFunctorPQ>           integrands;
  std::map<std::size_t, CoendPQ>                coends;
  std::map<std::size_t, std::vector<Rep>>       reps;

  // T = (X_1..X_q ; Y_1..Y_p); integrand fiber at (A.. ; B..) is
  // prod C(A_i, Y_i) x prod C(X_j, B_j) x F(A.. ; B..).
  std::vector<FinSet> factors(Tuple const& T, Tuple const& ab) const {
    std::vector<FinSet> fs;
    for (std::size_t i = 0; i < sig.p; ++i) {
      fs.push_back(hom_labels(*c, ab[i], T[sig.q + i]));
    }
    for (std::size_t j = 0; j < sig.q; ++j) {
      fs.push_back(hom_labels(*c, T[j], ab[sig.p + j]));
    }
    fs.push_back(F.fiber(ab));
    return fs;
  }

  SetFunctorPQ const& integrand(Tuple const& T) {
    std::size_t                           code = tuple_code(T, c->num_objects());
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto                                  it = integrands.find(code);
    if (it != integrands.end()) {
      return it->second;
    }
    Impl* self = this;
    auto  K    = SetFunctorPQ::lazy(
        c,
        sig,
        [self, T](Tuple const& ab) {
          auto          fs = self->factors(T, ab);
          check_cap(product_size(radix_of(fs)), "cokusarigama integrand");
          return product(fs);
        },
        [self, T](Tuple const& m) {
          auto const& C  = *self->c;
          auto const  p  = self->sig.p, q = self->sig.q;
          Tuple       s  = tuple_src(C, self->sig, m);
          Tuple       t  = tuple_tgt(C, self->sig, m);
          auto        rs = radix_of(self->factors(T, s));
          auto        rt = radix_of(self->factors(T, t));
          FinFn const& Fm = self->F.act(m);
          std::vector<std::size_t> table;
          detail::for_each_digits(rs, [&](Tuple const& d) {
            Tuple e(d.size());
            for (std::size_t i = 0; i < p; ++i) {
              std::size_t h = C.hom(s[i], T[q + i])[d[i]];
              e[i] = hom_position(C, t[i], T[q + i], C.compose(h, m[i]));
            }
            for (std::size_t j = 0; j < q; ++j) {
              std::size_t k = C.hom(T[j], s[p + j])[d[p + j]];
              e[p + j] = hom_position(C, T[j], t[p + j], C.compose(m[p + j], k));
            }
            e[p + q] = Fm(d[p + q]);
            table.push_back(encode(e, rt));
          });
          return FinFn(product_size(rt), std::move(table));
        });
    return integrands.emplace(code, std::move(K)).first->second;
  }

  CoendPQ const& coend_at(Tuple const& T) {
    std::size_t                           code = tuple_code(T, c->num_objects());
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto                                  it = coends.find(code);
    if (it == coends.end()) {
      it = coends.emplace(code, coend_pq(integrand(T))).first;
    }
    return it->second;
  }

  std::size_t class_of(Tuple const& T, std::size_t a, Tuple const& legs,
                       std::size_t e) {
    SetFunctorPQ const& K  = integrand(T);
    Tuple               ab = K.diag_tuple(a, a);
    auto const          fs = factors(T, ab);
    Tuple               d(fs.size());
    for (std::size_t i = 0; i < sig.p; ++i) {
      d[i] = hom_position(*c, a, T[sig.q + i], legs[i]);
    }
    for (std::size_t j = 0; j < sig.q; ++j) {
      d[sig.p + j] = hom_position(*c, T[j], a, legs[sig.p + j]);
    }
    d.back() = e;
    return coend_at(T).carrier.legs[a](encode(d, radix_of(fs)));
  }

  Rep const& rep_of(Tuple const& T, std::size_t cls) {
    std::size_t                           code = tuple_code(T, c->num_objects());
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto                                  it = reps.find(code);
    if (it == reps.end()) {
      CoendPQ const&      Q = coend_at(T);
      SetFunctorPQ const& K = integrand(T);
      std::vector<Rep>    rs(Q.carrier.carrier.size());
      std::vector<bool>   done(rs.size(), false);
      for (std::size_t a = 0; a < c->num_objects(); ++a) {
        auto fs = factors(T, K.diag_tuple(a, a));
        auto rx = radix_of(fs);
        for (std::size_t x = 0; x < Q.carrier.legs[a].dom(); ++x) {
          std::size_t k = Q.carrier.legs[a](x);
          if (done[k]) {
            continue;
          }
          done[k] = true;
          auto  d = decode(x, rx);
          Tuple legs;
          for (std::size_t i = 0; i < sig.p; ++i) {
            legs.push_back(c->hom(a, T[sig.q + i])[d[i]]);
          }
          for (std::size_t j = 0; j < sig.q; ++j) {
            legs.push_back(c->hom(T[j], a)[d[sig.p + j]]);
          }
          rs[k] = {a, legs, d.back()};
        }
      }
      it = reps.emplace(code, std::move(rs)).first;
    }
    return it->second.at(cls);
  }
};

CokusarigamaResult::CokusarigamaResult(SetFunctorPQ F)
    : _impl(std::make_shared<Impl>()), _source(F) {
  _impl->F   = F;
  _impl->c   = F.base();
  _impl->sig = F.sig();
  auto              impl = _impl;
  VarianceSig const out  = F.sig().swapped();
  _functor               = SetFunctorPQ::lazy(
      F.base(),
      out,
      [impl](Tuple const& T) { return impl->coend_at(T).carrier.carrier; },
      [impl, out](Tuple const& M) {
        auto const& C = *impl->c;
        auto const  p = impl->sig.p, q = impl->sig.q;
        Tuple       S = tuple_src(C, out, M);
        Tuple       T = tuple_tgt(C, out, M);
        std::size_t n = impl->coend_at(S).carrier.carrier.size();
        std::vector<std::size_t> table;
        for (std::size_t k = 0; k < n; ++k) {
          Rep   r    = impl->rep_of(S, k);
          Tuple legs = r.legs;
          for (std::size_t i = 0; i < p; ++i) {
            legs[i] = C.compose(M[q + i], legs[i]);
          }
          for (std::size_t j = 0; j < q; ++j) {
            legs[p + j] = C.compose(legs[p + j], M[j]);
          }
          table.push_back(impl->class_of(T, r.a, legs, r.e));
        }
        return FinFn(impl->coend_at(T).carrier.carrier.size(),
                     std::move(table));
      });
  _unit = DinatPQ{F, _functor, {}};
  auto const& C = *F.base();
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    Tuple       T = _functor.diag_tuple(a, a);
    Tuple       ids(F.sig().arity(), C.identity(a));
    std::size_t n = F.fiber(F.diag(a)).size();
    std::vector<std::size_t> table;
    for (std::size_t e = 0; e < n; ++e) {
      table.push_back(_impl->class_of(T, a, ids, e));
    }
    _unit.components.emplace_back(_functor.fiber(T).size(), std::move(table));
  }
}

SetFunctorPQ const& CokusarigamaResult::integrand(Tuple const& t) const {
  return _impl->integrand(t);
}

CoendPQ const& CokusarigamaResult::coend_at(Tuple const& t) const {
  return _impl->coend_at(t);
}

std::size_t CokusarigamaResult::class_of(Tuple const& t, std::size_t a,
                                         Tuple const& legs,
                                         std::size_t  e) const {
  return _impl->class_of(t, a, legs, e);
}

CokusarigamaResult::Rep CokusarigamaResult::rep_of(Tuple const& t,
                                                   std::size_t  cls) const {
  return _impl->rep_of(t, cls);
}

CokusarigamaResult cokusarigama(SetFunctorPQ const& F) {
  return CokusarigamaResult(F);
}

////////////////////////////////////////////////////////////////////////
// Kusarigama
////////////////////////////////////////////////////////////////////////

struct KusarigamaResult::Impl {
  SetFunctorPQ G;
  CatPtr       c;
  VarianceSig  sig;  // of the result, (p,q); G has (q,p)

  std::recursive_mutex                                  mu;
  std::map<std::size_t, SetFunctorPQ>                   integrands;
  std::map<std::size_t, EndPQ>                          ends;
  std::map<std::size_t, std::map<Tuple, std::size_t>>   index;

  // Domain of the integrand's functions at (X.. ; Y..), for T = (A.. ; B..):
  // prod C(B_j, X_j) x prod C(Y_i, A_i).
  std::vector<FinSet> domain(Tuple const& T, Tuple const& xy) const {
    std::vector<FinSet> fs;
    for (std::size_t j = 0; j < sig.q; ++j) {
      fs.push_back(hom_labels(*c, T[sig.p + j], xy[j]));
    }
    for (std::size_t i = 0; i < sig.p; ++i) {
      fs.push_back(hom_labels(*c, xy[sig.q + i], T[i]));
    }
    return fs;
  }

  SetFunctorPQ const& integrand(Tuple const& T) {
    std::size_t code = tuple_code(T, c->num_objects());
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = integrands.find(code);
    if (it != integrands.end()) {
      return it->second;
    }
    Impl*             self = this;
    VarianceSig const gs   = sig.swapped();
    auto              L    = SetFunctorPQ::lazy(
        c,
        gs,
        [self, T](Tuple const& xy) {
          return hom_set(product(self->domain(T, xy)), self->G.fiber(xy));
        },
        [self, T, gs](Tuple const& M) {
          auto const& C = *self->c;
          auto const  p = self->sig.p, q = self->sig.q;
          Tuple       S = tuple_src(C, gs, M);
          Tuple       U = tuple_tgt(C, gs, M);
          auto        rs = radix_of(self->domain(T, S));
          auto        ru = radix_of(self->domain(T, U));
          // rho : dom(U) -> dom(S), (k', h') |-> (u k', h' v)
          std::vector<std::size_t> rho;
          detail::for_each_digits(ru, [&](Tuple const& d) {
            Tuple e(d.size());
            for (std::size_t j = 0; j < q; ++j) {
              std::size_t k = C.hom(T[p + j], U[j])[d[j]];
              e[j] = hom_position(C, T[p + j], S[j], C.compose(M[j], k));
            }
            for (std::size_t i = 0; i < p; ++i) {
              std::size_t h = C.hom(U[q + i], T[i])[d[q + i]];
              e[q + i] = hom_position(C, S[q + i], T[i], C.compose(h, M[q + i]));
            }
            rho.push_back(encode(e, rs));
          });
          FinFn        r(product_size(rs), std::move(rho));
          FinFn const& GM = self->G.act(M);
          std::size_t  ns = product_size(rs);
          std::uint64_t nf = pow_sat(GM.dom(), ns);
          check_cap(nf, "kusarigama integrand action");
          std::vector<std::size_t> table;
          for (std::size_t k = 0; k < nf; ++k) {
            FinFn phi = function_at(k, ns, GM.dom());
            table.push_back(index_of_function(compose(GM, compose(phi, r))));
          }
          return FinFn(pow_sat(GM.cod(), r.dom()), std::move(table));
        });
    return integrands.emplace(code, std::move(L)).first->second;
  }

  EndPQ const& end_at(Tuple const& T) {
    std::size_t code = tuple_code(T, c->num_objects());
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto it = ends.find(code);
    if (it == ends.end()) {
      it = ends.emplace(code, end_pq(integrand(T))).first;
      auto& idx  = index[code];
      auto  fams = it->second.families();
      for (std::size_t k = 0; k < fams.size(); ++k) {
        idx.emplace(fams[k], k);
      }
    }
    return it->second;
  }

  std::size_t lookup(Tuple const& T, Tuple const& fam) {
    end_at(T);
    std::lock_guard<std::recursive_mutex> lock(mu);
    auto const& idx = index[tuple_code(T, c->num_objects())];
    auto        it  = idx.find(fam);
    if (it == idx.end()) {
      throw Error(ErrorKind::NotFunctorial,
                  "kusarigama action leaves the end");
    }
    return it->second;
  }

  std::size_t evaluate(Tuple const& T, std::size_t family, std::size_t x,
                       Tuple const& legs) {
    EndPQ const& E  = end_at(T);
    Tuple        xy = Tuple(sig.q, x);
    xy.insert(xy.end(), sig.p, x);
    auto  fs = domain(T, xy);
    Tuple d(fs.size());
    for (std::size_t j = 0; j < sig.q; ++j) {
      d[j] = hom_position(*c, T[sig.p + j], x, legs[j]);
    }
    for (std::size_t i = 0; i < sig.p; ++i) {
      d[sig.q + i] = hom_position(*c, x, T[i], legs[sig.q + i]);
    }
    auto rx = radix_of(fs);
    FinFn phi = function_at(E.carrier.legs[x](family), product_size(rx),
                            G.fiber(xy).size());
    return phi(encode(d, rx));
  }
};

KusarigamaResult::KusarigamaResult(SetFunctorPQ G)
    : _impl(std::make_shared<Impl>()), _source(G) {
  _impl->G          = G;
  _impl->c          = G.base();
  _impl->sig        = G.sig().swapped();
  auto              impl = _impl;
  VarianceSig const out  = _impl->sig;
  std::size_t const no   = G.base()->num_objects();
  _functor               = SetFunctorPQ::lazy(
      G.base(),
      out,
      [impl](Tuple const& T) { return impl->end_at(T).carrier.carrier; },
      [impl, out, no](Tuple const& m) {
        auto const& C = *impl->c;
        auto const  p = out.p, q = out.q;
        Tuple       T = tuple_src(C, out, m);
        Tuple       U = tuple_tgt(C, out, m);
        EndPQ const& ET = impl->end_at(T);
        // rho_Z : dom_U(Z) -> dom_T(Z), (k', h') |-> (k' b, a h')
        std::vector<FinFn> rho;
        for (std::size_t z = 0; z < no; ++z) {
          Tuple xy(q, z);
          xy.insert(xy.end(), p, z);
          auto rt = radix_of(impl->domain(T, xy));
          auto ru = radix_of(impl->domain(U, xy));
          std::vector<std::size_t> table;
          detail::for_each_digits(ru, [&](Tuple const& d) {
            Tuple e(d.size());
            for (std::size_t j = 0; j < q; ++j) {
              std::size_t k = C.hom(U[p + j], z)[d[j]];
              e[j] = hom_position(C, T[p + j], z, C.compose(k, m[p + j]));
            }
            for (std::size_t i = 0; i < p; ++i) {
              std::size_t h = C.hom(z, U[i])[d[q + i]];
              e[q + i] = hom_position(C, z, T[i], C.compose(m[i], h));
            }
            table.push_back(encode(e, rt));
          });
          rho.emplace_back(product_size(rt), std::move(table));
        }
        std::vector<std::size_t> table;
        for (std::size_t f = 0; f < ET.carrier.carrier.size(); ++f) {
          Tuple fam(no);
          for (std::size_t z = 0; z < no; ++z) {
            Tuple xy(q, z);
            xy.insert(xy.end(), p, z);
            std::size_t ng  = impl->G.fiber(xy).size();
            FinFn       phi = function_at(ET.carrier.legs[z](f), rho[z].cod(), ng);
            fam[z]          = index_of_function(compose(phi, rho[z]));
          }
          table.push_back(impl->lookup(U, fam));
        }
        return FinFn(impl->end_at(U).carrier.carrier.size(), std::move(table));
      });
  _counit = DinatPQ{_functor, G, {}};
  auto const& C = *G.base();
  for (std::size_t a = 0; a < no; ++a) {
    Tuple       T = _functor.diag_tuple(a, a);
    Tuple       ids(out.arity(), C.identity(a));
    std::size_t n = _functor.fiber(T).size();
    std::vector<std::size_t> table;
    for (std::size_t f = 0; f < n; ++f) {
      table.push_back(_impl->evaluate(T, f, a, ids));
    }
    _counit.components.emplace_back(G.fiber(G.diag(a)).size(), std::move(table));
  }
}

SetFunctorPQ const& KusarigamaResult::integrand(Tuple const& t) const {
  return _impl->integrand(t);
}

EndPQ const& KusarigamaResult::end_at(Tuple const& t) const {
  return _impl->end_at(t);
}

std::size_t KusarigamaResult::evaluate(Tuple const& t, std::size_t family,
                                       std::size_t x, Tuple const& legs) const {
  return _impl->evaluate(t, family, x, legs);
}

KusarigamaResult kusarigama(SetFunctorPQ const& G) {
  return KusarigamaResult(G);
}

////////////////////////////////////////////////////////////////////////
// Factorisation through eta and eps
////////////////////////////////////////////////////////////////////////

namespace {

  using Tables = std::vector<std::vector<std::size_t>>;

  Tables tables_of(DinatPQ const& d) {
    Tables t;
    for (auto const& c : d.components) {
      t.push_back(c.table());
    }
    return t;
  }

  void match_all(std::vector<DinatPQ> const& images, std::set<Tables> const& want,
                 char const* via, LawReport& r) {
    std::map<Tables, std::size_t> hits;
    for (auto const& d : images) {
      Verdict v = check_dinatural(d);
      if (!v.ok) {
        r.failures.push_back(std::string(via) + ": composite fails the hexagon");
      }
      ++hits[tables_of(d)];
    }
    for (auto const& w : want) {
      auto it = hits.find(w);
      if (it == hits.end()) {
        r.failures.push_back(std::string("NoFactorization through ") + via);
      } else if (it->second > 1) {
        r.failures.push_back(std::string("NonUnique factorisation through ")
                             + via);
      }
    }
    for (auto const& [t, n] : hits) {
      if (!want.count(t)) {
        r.failures.push_back(std::string(via) + ": image is not a dinatural");
      }
    }
  }

}  // namespace

LawReport factorization_check(SetFunctorPQ const& F, SetFunctorPQ const& G) {
  LawReport r;
  auto      dinats = enumerate_dinat(F, G);
  std::set<Tables> want;
  for (auto const& d : dinats) {
    want.insert(tables_of(d));
  }
  CokusarigamaResult J     = cokusarigama(F);
  auto               natsJ = enumerate_nat(J.functor().functor(), G.functor());
  std::vector<DinatPQ> viaJ;
  for (auto const& a : natsJ) {
    viaJ.push_back(compose_nat_with(a, J.unit(), G));
  }
  match_all(viaJ, want, "eta", r);
  KusarigamaResult K     = kusarigama(G);
  auto             natsK = enumerate_nat(F.functor(), K.functor().functor());
  std::vector<DinatPQ> viaK;
  for (auto const& g : natsK) {
    viaK.push_back(compose_with_nat(K.counit(), g, F));
  }
  match_all(viaK, want, "eps", r);
  r.counts = {natsJ.size(), dinats.size(), natsK.size()};
  r.ok     = r.failures.empty() && natsJ.size() == dinats.size()
         && dinats.size() == natsK.size();
  if (!r.ok && r.failures.empty()) {
    r.failures.push_back("counts differ");
  }
  return r;
}

////////////////////////////////////////////////////////////////////////
// Kan extensions
////////////////////////////////////////////////////////////////////////

namespace {

  // Lan_K F (b) is the coend over a of B(K a, b) x F(a); elements (a, g, x).
  struct LanData {
    SetFunctor F;
    Functor    K;

    std::mutex                                     mu;
    std::map<std::size_t, QuotResult>              fibers;
    std::map<std::size_t, std::vector<std::size_t>> offsets;

    std::size_t index(std::size_t b, std::size_t a, std::size_t g,
                      std::size_t x) {
      auto const& B = *K.target;
      std::size_t ka = K.on_objects[a];
      return offsets.at(b)[a]
             + hom_position(B, ka, b, g) * F.fiber(a).size() + x;
    }

    QuotResult const& at(std::size_t b) {
      std::lock_guard<std::mutex> lock(mu);
      auto                        it = fibers.find(b);
      if (it != fibers.end()) {
        return it->second;
      }
      auto const& A = *K.source;
      auto const& B = *K.target;
      std::vector<std::size_t> off;
      std::vector<std::string> labels;
      for (std::size_t a = 0; a < A.num_objects(); ++a) {
        off.push_back(labels.size());
        for (auto g : B.hom(K.on_objects[a], b)) {
          for (auto const& x : F.fiber(a).labels()) {
            labels.push_back(A.object_name(a) + ":("
                             + B.morphism_name(g) + "," + x + ")");
          }
        }
        check_cap(labels.size(), "left Kan coproduct");
      }
      offsets[b] = off;
      UnionFind uf(labels.size());
      for (std::size_t u = 0; u < A.num_morphisms(); ++u) {
        if (A.is_identity(u)) {
          continue;
        }
        std::size_t  a = A.src(u), a2 = A.tgt(u);
        std::size_t  Ku = K.on_morphisms[u];
        FinFn const& Fu = F.act(u);
        for (auto g : B.hom(K.on_objects[a2], b)) {
          for (std::size_t x = 0; x < F.fiber(a).size(); ++x) {
            uf.unite(index(b, a, B.compose(g, Ku), x), index(b, a2, g, Fu(x)));
          }
        }
      }
      auto                     cls = uf.class_index();
      std::size_t              nc  = uf.num_classes();
      std::vector<std::string> reps(nc);
      std::vector<bool>        seen(nc, false);
      for (std::size_t k = 0; k < cls.size(); ++k) {
        if (!seen[cls[k]]) {
          seen[cls[k]] = true;
          reps[cls[k]] = "⟦" + labels[k] + "⟧";
        }
      }
      QuotResult q{FinSet(std::move(reps)), {FinFn(nc, std::move(cls))}};
      return fibers.emplace(b, std::move(q)).first->second;
    }

    std::size_t class_of(std::size_t b, std::size_t a, std::size_t g,
                         std::size_t x) {
      QuotResult const& q = at(b);
      std::lock_guard<std::mutex> lock(mu);
      return q.legs[0](index(b, a, g, x));
    }
  };

  SetFunctor lan_functor(std::shared_ptr<LanData> d) {
    return SetFunctor::lazy(
        d->K.target,
        [d](std::size_t b) { return d->at(b).carrier; },
        [d](std::size_t v) {
          auto const& A = *d->K.source;
          auto const& B = *d->K.target;
          std::size_t b = B.src(v), b2 = B.tgt(v);
          std::size_t n = d->at(b).carrier.size();
          std::vector<std::size_t> table(n, 0);
          std::vector<bool>        done(n, false);
          for (std::size_t a = 0; a < A.num_objects(); ++a) {
            for (auto g : B.hom(d->K.on_objects[a], b)) {
              for (std::size_t x = 0; x < d->F.fiber(a).size(); ++x) {
                std::size_t c = d->class_of(b, a, g, x);
                if (!done[c]) {
                  done[c]  = true;
                  table[c] = d->class_of(b2, a, B.compose(v, g), x);
                }
              }
            }
          }
          return FinFn(d->at(b2).carrier.size(), std::move(table));
        });
  }

  // Ran_K F (b) is the set of families phi_a : B(b, K a) -> F(a) with
  // F(u) phi_a = phi_a' (K(u) -).
  struct RanData {
    SetFunctor F;
    Functor    K;

    std::mutex                                           mu;
    std::map<std::size_t, SubResult>                     fibers;
    std::map<std::size_t, std::map<Tuple, std::size_t>>  index;
    std::map<std::size_t, std::vector<std::size_t>>      offsets;

    SubResult const& at(std::size_t b) {
      std::lock_guard<std::mutex> lock(mu);
      auto                        it = fibers.find(b);
      if (it != fibers.end()) {
        return it->second;
      }
      auto const& A = *K.source;
      auto const& B = *K.target;
      std::vector<std::size_t>  off, sizes;
      std::vector<std::string>  names;
      std::vector<FinSet>       sets;
      for (std::size_t a = 0; a < A.num_objects(); ++a) {
        off.push_back(sizes.size());
        for (auto g : B.hom(b, K.on_objects[a])) {
          sizes.push_back(F.fiber(a).size());
          sets.push_back(F.fiber(a));
          names.push_back(tuple_label({A.object_name(a), B.morphism_name(g)}));
        }
      }
      std::vector<EqConstraint> cs;
      for (std::size_t u = 0; u < A.num_morphisms(); ++u) {
        if (A.is_identity(u)) {
          continue;
        }
        std::size_t a = A.src(u), a2 = A.tgt(u);
        std::size_t Ku = K.on_morphisms[u];
        auto const  hs = B.hom(b, K.on_objects[a]);
        for (std::size_t i = 0; i < hs.size(); ++i) {
          std::size_t j = hom_position(B, b, K.on_objects[a2], B.compose(Ku, hs[i]));
          cs.push_back({off[a] + i, F.act(u), off[a2] + j,
                        FinFn::identity(F.fiber(a2).size())});
        }
      }
      auto sols = enumerate_families(sizes, cs);
      std::vector<std::string>              labels;
      std::vector<std::vector<std::size_t>> legs(sizes.size());
      auto&                                 idx = index[b];
      for (std::size_t k = 0; k < sols.size(); ++k) {
        std::vector<std::string> parts;
        for (std::size_t v = 0; v < sizes.size(); ++v) {
          parts.push_back(sets[v].label(sols[k][v]));
          legs[v].push_back(sols[k][v]);
        }
        labels.push_back(family_label(names, parts));
        idx.emplace(sols[k], k);
      }
      SubResult r{FinSet(std::move(labels)), {}};
      for (std::size_t v = 0; v < sizes.size(); ++v) {
        r.legs.emplace_back(sizes[v], std::move(legs[v]));
      }
      offsets[b] = off;
      return fibers.emplace(b, std::move(r)).first->second;
    }
  };

  SetFunctor ran_functor(std::shared_ptr<RanData> d) {
    return SetFunctor::lazy(
        d->K.target,
        [d](std::size_t b) { return d->at(b).carrier; },
        [d](std::size_t v) {
          auto const&      A  = *d->K.source;
          auto const&      B  = *d->K.target;
          std::size_t      b  = B.src(v), b2 = B.tgt(v);
          SubResult const& R  = d->at(b);
          SubResult const& R2 = d->at(b2);
          std::lock_guard<std::mutex> lock(d->mu);
          auto const& off  = d->offsets.at(b);
          auto const& off2 = d->offsets.at(b2);
          std::vector<std::size_t> table;
          for (std::size_t k = 0; k < R.carrier.size(); ++k) {
            Tuple fam;
            for (std::size_t a = 0; a < A.num_objects(); ++a) {
              std::size_t ka = d->K.on_objects[a];
              for (auto g2 : B.hom(b2, ka)) {
                std::size_t i = hom_position(B, b, ka, B.compose(g2, v));
                fam.push_back(R.legs[off[a] + i](k));
              }
            }
            (void)off2;
            auto const& idx = d->index.at(b2);
            auto        it  = idx.find(fam);
            if (it == idx.end()) {
              throw Error(ErrorKind::NotFunctorial, "right Kan action leaves the end");
            }
            table.push_back(it->second);
          }
          return FinFn(R2.carrier.size(), std::move(table));
        });
  }

}  // namespace

SetFunctor kan_extension(SetFunctor const& F, Functor const& K,
                         KanDirection dir) {
  auto const& dom = *F.domain();
  auto const& src = *K.source;
  if (dom.num_objects() != src.num_objects()
      || dom.num_morphisms() != src.num_morphisms()) {
    throw Error(ErrorKind::ShapeMismatch, "Kan extension: F is not defined on the source of K");
  }
  if (dir == KanDirection::left) {
    auto d = std::make_shared<LanData>();
    d->F   = F;
    d->K   = K;
    return lan_functor(d);
  }
  auto d = std::make_shared<RanData>();
  d->F   = F;
  d->K   = K;
  return ran_functor(d);
}

LawReport kan_adjunction_check(SetFunctor const& F, Functor const& K,
                               SetFunctor const& G) {
  LawReport  r;
  SetFunctor GK  = precompose(G, K);
  SetFunctor Lan = kan_extension(F, K, KanDirection::left);
  SetFunctor Ran = kan_extension(F, K, KanDirection::right);
  std::size_t a = count_nat(Lan, G), b = count_nat(F, GK);
  std::size_t c = count_nat(GK, F), d = count_nat(G, Ran);
  r.counts = {a, b, c, d};
  if (a != b) {
    r.failures.push_back("Nat(Lan F, G) has " + std::to_string(a)
                         + " elements, Nat(F, G K) has " + std::to_string(b));
  }
  if (c != d) {
    r.failures.push_back("Nat(G K, F) has " + std::to_string(c)
                         + " elements, Nat(G, Ran F) has " + std::to_string(d));
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// PK laws
////////////////////////////////////////////////////////////////////////

LawReport check_pk3(SetFunctorPQ const& F, FinSet const& S) {
  LawReport         r;
  VarianceSig const sig = F.sig();  // (p,q)
  VarianceSig const hs  = sig.swapped();
  auto const&       C   = *F.base();
  std::size_t const ns  = S.size();
  SetFunctorPQ      H   = SetFunctorPQ::lazy(
      F.base(),
      hs,
      [F, S, hs](Tuple const& t) { return hom_set(F.fiber(reslot(t, hs)), S); },
      [F, ns, hs](Tuple const& m) {
        FinFn const&  Fm = F.act(reslot(m, hs));
        std::uint64_t n  = pow_sat(ns, Fm.cod());
        std::vector<std::size_t> table;
        for (std::size_t k = 0; k < n; ++k) {
          table.push_back(
              index_of_function(compose(function_at(k, Fm.cod(), ns), Fm)));
        }
        return FinFn(pow_sat(ns, Fm.dom()), std::move(table));
      });
  CokusarigamaResult J = cokusarigama(F);
  KusarigamaResult   K = kusarigama(H);
  std::size_t const  no = C.num_objects();
  std::size_t        checked = 0;
  for (auto const& T : all_tuples(no, sig.arity())) {
    Tuple        JT = reslot(T, sig);  // (B.. ; A..)
    std::size_t  nj = J.functor().fiber(JT).size();
    EndPQ const& E  = K.end_at(T);
    std::uint64_t nmaps = pow_sat(ns, nj);
    check_cap(nmaps, "PK3 maps");
    std::set<std::size_t> image;
    for (std::size_t k = 0; k < nmaps; ++k) {
      FinFn psi = function_at(k, nj, ns);
      Tuple fam(no);
      for (std::size_t x = 0; x < no; ++x) {
        Tuple xy(sig.q, x);
        xy.insert(xy.end(), sig.p, x);
        // dom: prod C(B_j, x) then prod C(x, A_i)
        std::vector<std::size_t> radix;
        for (std::size_t j = 0; j < sig.q; ++j) {
          radix.push_back(C.hom(T[sig.p + j], x).size());
        }
        for (std::size_t i = 0; i < sig.p; ++i) {
          radix.push_back(C.hom(x, T[i]).size());
        }
        std::size_t nf = F.fiber(F.diag(x)).size();
        std::vector<std::size_t> values;
        detail::for_each_digits(radix, [&](Tuple const& d) {
          Tuple legs;  // h_i : x -> A_i, then k_j : B_j -> x
          for (std::size_t i = 0; i < sig.p; ++i) {
            legs.push_back(C.hom(x, T[i])[d[sig.q + i]]);
          }
          for (std::size_t j = 0; j < sig.q; ++j) {
            legs.push_back(C.hom(T[sig.p + j], x)[d[j]]);
          }
          std::vector<std::size_t> g;
          for (std::size_t e = 0; e < nf; ++e) {
            g.push_back(psi(J.class_of(JT, x, legs, e)));
          }
          values.push_back(index_of_function(FinFn(ns, std::move(g))));
        });
        fam[x] = index_of_function(FinFn(pow_sat(ns, nf), std::move(values)));
      }
      auto j = find_family(E, fam);
      if (!j) {
        r.failures.push_back("PK3: a map out of J(F) gives no end element");
        break;
      }
      image.insert(*j);
    }
    if (image.size() != nmaps || nmaps != E.carrier.carrier.size()) {
      r.failures.push_back("PK3: no bijection at a tuple");
    }
    ++checked;
  }
  r.counts = {checked};
  r.ok     = r.failures.empty();
  return r;
}

LawReport check_pk4(SetFunctorPQ const& F) {
  LawReport         r;
  auto const&       C  = *F.base();
  std::size_t const no = C.num_objects();
  EndPQ             E  = end_pq(F);
  KusarigamaResult  K  = kusarigama(F);
  SubResult         L  = limit(diagram_of(K.functor().functor()));
  std::set<std::size_t> image;
  for (std::size_t l = 0; l < L.carrier.size(); ++l) {
    Tuple fam(no);
    for (std::size_t a = 0; a < no; ++a) {
      fam[a] = K.counit().components[a](L.legs[K.functor().diag(a)](l));
    }
    auto j = find_family(E, fam);
    if (!j) {
      r.failures.push_back("PK4: a limit element is not an end element");
      continue;
    }
    image.insert(*j);
  }
  if (image.size() != L.carrier.size()
      || image.size() != E.carrier.carrier.size()) {
    r.failures.push_back("PK4: lim Gamma(F) has " + std::to_string(L.carrier.size())
                         + " elements, the end has "
                         + std::to_string(E.carrier.carrier.size()));
  }

  CoendPQ            Q = coend_pq(F);
  CokusarigamaResult J = cokusarigama(F);
  QuotResult         M = colimit(diagram_of(J.functor().functor()));
  std::vector<std::size_t> phi(Q.carrier.carrier.size(), FinCat::npos);
  for (std::size_t a = 0; a < no; ++a) {
    for (std::size_t x = 0; x < F.fiber(F.diag(a)).size(); ++x) {
      std::size_t c = M.legs[J.functor().diag(a)](J.unit().components[a](x));
      std::size_t k = Q.carrier.legs[a](x);
      if (phi[k] == FinCat::npos) {
        phi[k] = c;
      } else if (phi[k] != c) {
        r.failures.push_back("PK4: a coend class splits in colim J(F)");
      }
    }
  }
  std::set<std::size_t> cimg(phi.begin(), phi.end());
  if (cimg.size() != phi.size() || phi.size() != M.carrier.size()
      || cimg.count(FinCat::npos)) {
    r.failures.push_back("PK4: colim J(F) has " + std::to_string(M.carrier.size())
                         + " classes, the coend has " + std::to_string(phi.size()));
  }
  r.counts = {E.carrier.carrier.size(), L.carrier.size(), Q.carrier.carrier.size(),
              M.carrier.size()};
  r.ok     = r.failures.empty();
  return r;
}

LawReport check_pk5(SetFunctorPQ const& F) {
  LawReport          r;
  auto const&        C   = *F.base();
  VarianceSig const  sig = F.sig();
  std::size_t const  no = C.num_objects(), nm = C.num_morphisms();
  CokusarigamaResult J   = cokusarigama(F);
  CokusarigamaResult J1  = cokusarigama(restrict_diagonal(F));
  auto               lan = std::make_shared<LanData>();
  lan->F                 = J1.functor().functor();
  lan->K                 = diagonal_functor(F.base(), sig.swapped());
  std::size_t checked    = 0;
  for (auto const& T : all_tuples(no, sig.arity())) {
    CoendPQ const&      Q = J.coend_at(T);
    SetFunctorPQ const& K = J.integrand(T);
    std::size_t const   b = tuple_code(T, no);
    QuotResult const&   L = lan->at(b);
    std::vector<std::size_t> phi(Q.carrier.carrier.size(), FinCat::npos);
    bool                     ok = true;
    for (std::size_t a = 0; a < no; ++a) {
      Tuple ab = K.diag_tuple(a, a);
      std::vector<std::size_t> radix;
      for (std::size_t i = 0; i < sig.p; ++i) {
        radix.push_back(C.hom(a, T[sig.q + i]).size());
      }
      for (std::size_t j = 0; j < sig.q; ++j) {
        radix.push_back(C.hom(T[j], a).size());
      }
      radix.push_back(F.fiber(ab).size());
      std::size_t const aa = tuple_code(Tuple{a, a}, no);
      Tuple             ids{C.identity(a), C.identity(a)};
      detail::for_each_digits(radix, [&](Tuple const& d) {
        // g : Delta(a) -> T in C^(q,p) is (k_1..k_q ; h_1..h_p).
        Tuple g;
        for (std::size_t j = 0; j < sig.q; ++j) {
          g.push_back(C.hom(T[j], a)[d[sig.p + j]]);
        }
        for (std::size_t i = 0; i < sig.p; ++i) {
          g.push_back(C.hom(a, T[sig.q + i])[d[i]]);
        }
        std::size_t x  = J1.class_of(Tuple{a, a}, a, ids, d.back());
        std::size_t c  = lan->class_of(b, aa, tuple_code(g, nm), x);
        std::size_t k  = Q.carrier.legs[a](encode(d, radix));
        if (phi[k] == FinCat::npos) {
          phi[k] = c;
        } else if (phi[k] != c) {
          ok = false;
        }
      });
    }
    std::set<std::size_t> img(phi.begin(), phi.end());
    if (!ok || img.size() != phi.size() || img.count(FinCat::npos)
        || phi.size() != L.carrier.size()) {
      r.failures.push_back("PK5: no fiberwise bijection at a tuple");
    }
    ++checked;
  }
  r.counts = {checked};
  r.ok     = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// J(pt) and hom_Pi
////////////////////////////////////////////////////////////////////////

LawReport check_j_pt_hom_pi(CatPtr const& c, VarianceSig sig) {
  LawReport          r;
  auto const&        C  = *c;
  std::size_t const  no = C.num_objects();
  // J of pt of sig (q,p) has sig (p,q): at (X_1..X_p ; Y_1..Y_q) its
  // elements are [A ; h_j : A -> Y_j ; k_i : X_i -> A].
  CokusarigamaResult J  = cokusarigama(point_functor(c, sig.swapped()));
  SetFunctorPQ       HP = hom_pi(c, sig);
  VarianceSig const  js = sig.swapped();  // J's source signature
  std::size_t        checked = 0;
  for (auto const& T : all_tuples(no, sig.arity())) {
    CoendPQ const& Q = J.coend_at(T);
    std::vector<std::size_t> radix_hp;
    for (std::size_t i = 0; i < sig.p; ++i) {
      for (std::size_t j = 0; j < sig.q; ++j) {
        radix_hp.push_back(C.hom(T[i], T[sig.p + j]).size());
      }
    }
    std::vector<std::size_t> phi(Q.carrier.carrier.size(), FinCat::npos);
    bool                     ok = true;
    for (std::size_t a = 0; a < no; ++a) {
      std::vector<std::size_t> radix;
      for (std::size_t j = 0; j < js.p; ++j) {
        radix.push_back(C.hom(a, T[sig.p + j]).size());
      }
      for (std::size_t i = 0; i < js.q; ++i) {
        radix.push_back(C.hom(T[i], a).size());
      }
      radix.push_back(1);
      detail::for_each_digits(radix, [&](Tuple const& d) {
        Tuple grid;
        for (std::size_t i = 0; i < sig.p; ++i) {
          std::size_t k = C.hom(T[i], a)[d[js.p + i]];
          for (std::size_t j = 0; j < sig.q; ++j) {
            std::size_t h = C.hom(a, T[sig.p + j])[d[j]];
            grid.push_back(
                hom_position(C, T[i], T[sig.p + j], C.compose(h, k)));
          }
        }
        std::size_t g = encode(grid, radix_hp);
        std::size_t k = Q.carrier.legs[a](encode(d, radix));
        if (phi[k] == FinCat::npos) {
          phi[k] = g;
        } else if (phi[k] != g) {
          ok = false;
        }
      });
    }
    std::set<std::size_t> img(phi.begin(), phi.end());
    if (!ok || img.size() != phi.size() || img.count(FinCat::npos)
        || phi.size() != HP.fiber(T).size()) {
      std::vector<std::string> names;
      for (auto x : T) {
        names.push_back(C.object_name(x));
      }
      r.failures.push_back("J(pt) and hom_Pi differ at " + tuple_label(names)
                           + ": " + std::to_string(phi.size()) + " vs "
                           + std::to_string(HP.fiber(T).size()));
    }
    ++checked;
  }
  r.counts = {checked};
  r.ok     = r.failures.empty();
  return r;
}

LawReport check_sigma_21(CatPtr const& c) {
  return check_j_pt_hom_pi(c, {1, 2});
}

////////////////////////////////////////////////////////////////////////
// Tw_J
////////////////////////////////////////////////////////////////////////

TwJComparison cokusarigama_via_tw_j(SetFunctorPQ const& D, std::size_t a,
                                    std::size_t b) {
  if (D.sig() != VarianceSig{1, 1}) {
    throw Error(ErrorKind::ShapeMismatch, "Tw_J comparison needs a (1,1) functor");
  }
  TwJComparison     r;
  CatPtr const&     c  = D.base();
  auto const&       C  = *c;
  std::size_t const no = C.num_objects();

  auto node_index = [&](SetFunctorPQ const& W) {
    std::vector<std::size_t> off;
    std::size_t              k = 0;
    for (std::size_t t = 0; t < W.domain()->num_objects(); ++t) {
      off.push_back(k);
      k += W.fiber(t).size();
    }
    return off;
  };
  auto names_of = [&](SetFunctorPQ const& W) {
    std::vector<std::string> names;
    auto const&              dom = *W.domain();
    for (std::size_t t = 0; t < dom.num_objects(); ++t) {
      for (auto const& l : W.fiber(t).labels()) {
        names.push_back(tuple_label({dom.object_name(t), l}));
      }
    }
    return names;
  };
  auto twj_elem = [&](std::size_t x, std::size_t y, std::size_t ga,
                      std::size_t gb, std::size_t g, std::size_t psi,
                      std::size_t phi, std::size_t f) {
    std::vector<std::size_t> radix{C.hom(ga, gb).size(), C.hom(ga, y).size(),
                                   C.hom(x, gb).size(), C.hom(x, y).size()};
    return encode({hom_position(C, ga, gb, g), hom_position(C, ga, y, psi),
                   hom_position(C, x, gb, phi), hom_position(C, x, y, f)},
                  radix);
  };

  // Colimit side: el(tw_j(a,b))^op with D(Y;X) at (X,Y).
  {
    SetFunctorPQ W   = tw_j_functor(c, a, b);
    auto         off = node_index(W);
    Diagram      d;
    d.names = names_of(W);
    for (std::size_t t = 0; t < W.domain()->num_objects(); ++t) {
      Tuple xy = tuple_decode(t, no, 2);
      for (std::size_t w = 0; w < W.fiber(t).size(); ++w) {
        d.sets.push_back(D.fiber(Tuple{xy[1], xy[0]}));
      }
    }
    for (std::size_t mc = 0; mc < W.domain()->num_morphisms(); ++mc) {
      if (W.domain()->is_identity(mc)) {
        continue;
      }
      Tuple        M  = tuple_decode(mc, C.num_morphisms(), 2);
      std::size_t  s  = W.domain()->src(mc), t = W.domain()->tgt(mc);
      FinFn const& Wm = W.act(mc);
      FinFn const& Dm = D.act(Tuple{M[1], M[0]});
      for (std::size_t w = 0; w < W.fiber(s).size(); ++w) {
        d.arrows.push_back({off[t] + Wm(w), off[s] + w, Dm});
      }
    }
    QuotResult         colim = colimit(d);
    CokusarigamaResult J     = cokusarigama(D);
    Tuple              T{a, b};
    CoendPQ const&     Q = J.coend_at(T);
    r.j_fiber            = Q.carrier.carrier.size();
    r.colimit_size       = colim.carrier.size();
    std::vector<std::size_t> phi(r.j_fiber, FinCat::npos);
    bool                     ok = true;
    for (std::size_t z = 0; z < no; ++z) {
      std::vector<std::size_t> radix{C.hom(z, b).size(), C.hom(a, z).size(),
                                     D.fiber(D.diag(z)).size()};
      detail::for_each_digits(radix, [&](Tuple const& dg) {
        std::size_t h = C.hom(z, b)[dg[0]], k = C.hom(a, z)[dg[1]];
        std::size_t w = twj_elem(z, z, a, b, C.compose(h, k), k, h, C.identity(z));
        std::size_t node = off[tuple_code(Tuple{z, z}, no)] + w;
        std::size_t cls  = colim.legs[node](dg[2]);
        std::size_t k2   = Q.carrier.legs[z](encode(dg, radix));
        if (phi[k2] == FinCat::npos) {
          phi[k2] = cls;
        } else if (phi[k2] != cls) {
          ok = false;
        }
      });
    }
    std::set<std::size_t> img(phi.begin(), phi.end());
    if (!ok || img.size() != phi.size() || img.count(FinCat::npos)
        || phi.size() != colim.carrier.size()) {
      r.failures.push_back("J(D) fiber " + std::to_string(r.j_fiber)
                           + " vs Tw_J colimit "
                           + std::to_string(r.colimit_size));
    }
  }

  // Limit side: el(tw_j(b,a)) with D(X;Y) at (X,Y).
  {
    SetFunctorPQ W   = tw_j_functor(c, b, a);
    auto         off = node_index(W);
    Diagram      d;
    d.names = names_of(W);
    for (std::size_t t = 0; t < W.domain()->num_objects(); ++t) {
      for (std::size_t w = 0; w < W.fiber(t).size(); ++w) {
        d.sets.push_back(D.fiber(t));
      }
    }
    for (std::size_t mc = 0; mc < W.domain()->num_morphisms(); ++mc) {
      if (W.domain()->is_identity(mc)) {
        continue;
      }
      std::size_t  s  = W.domain()->src(mc), t = W.domain()->tgt(mc);
      FinFn const& Wm = W.act(mc);
      FinFn const& Dm = D.act(mc);
      for (std::size_t w = 0; w < W.fiber(s).size(); ++w) {
        d.arrows.push_back({off[s] + w, off[t] + Wm(w), Dm});
      }
    }
    SubResult        lim = limit(d);
    KusarigamaResult G   = kusarigama(D);
    Tuple            T{a, b};
    EndPQ const&     E = G.end_at(T);
    r.gamma_fiber      = E.carrier.carrier.size();
    r.limit_size       = lim.carrier.size();
    std::set<std::size_t> image;
    bool                  found_all = true;
    for (std::size_t l = 0; l < lim.carrier.size(); ++l) {
      Tuple fam(no);
      for (std::size_t z = 0; z < no; ++z) {
        // function on C(b, z) x C(z, a) into D(z;z)
        std::vector<std::size_t> radix{C.hom(b, z).size(), C.hom(z, a).size()};
        std::vector<std::size_t> vals;
        detail::for_each_digits(radix, [&](Tuple const& dg) {
          std::size_t k = C.hom(b, z)[dg[0]], h = C.hom(z, a)[dg[1]];
          std::size_t w = twj_elem(z, z, b, a, C.compose(h, k), k, h, C.identity(z));
          vals.push_back(lim.legs[off[tuple_code(Tuple{z, z}, no)] + w](l));
        });
        fam[z] = index_of_function(
            FinFn(D.fiber(D.diag(z)).size(), std::move(vals)));
      }
      auto j = find_family(E, fam);
      if (!j) {
        found_all = false;
        continue;
      }
      image.insert(*j);
    }
    if (!found_all || image.size() != lim.carrier.size()
        || image.size() != E.carrier.carrier.size()) {
      r.failures.push_back("Gamma(D) fiber " + std::to_string(r.gamma_fiber)
                           + " vs Tw_J limit " + std::to_string(r.limit_size));
    }
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Lattices
////////////////////////////////////////////////////////////////////////

bool Lattice::le(std::size_t a, std::size_t b) const {
  return !c->hom(a, b).empty();
}

std::size_t Lattice::join_of(std::vector<std::size_t> const& xs) const {
  std::size_t r = bottom;
  for (auto x : xs) {
    r = join[r * c->num_objects() + x];
  }
  return r;
}

std::size_t Lattice::meet_of(std::vector<std::size_t> const& xs) const {
  std::size_t r = top;
  for (auto x : xs) {
    r = meet[r * c->num_objects() + x];
  }
  return r;
}

Lattice as_lattice(CatPtr const& c) {
  auto const&       C = *c;
  std::size_t const n = C.num_objects();
  if (n == 0) {
    throw Error(ErrorKind::NotALattice, "empty category");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (C.hom(a, b).size() > 1
          || (a != b && !C.hom(a, b).empty() && !C.hom(b, a).empty())) {
        throw Error(ErrorKind::NotALattice, C.name() + " is not a poset");
      }
    }
  }
  Lattice L{c, 0, 0, std::vector<std::size_t>(n * n), std::vector<std::size_t>(n * n)};
  auto    le = [&](std::size_t a, std::size_t b) { return !C.hom(a, b).empty(); };
  auto    extremal = [&](std::vector<std::size_t> const& cands, bool least) {
    for (auto u : cands) {
      bool ok = true;
      for (auto v : cands) {
        ok = ok && (least ? le(u, v) : le(v, u));
      }
      if (ok) {
        return u;
      }
    }
    throw Error(ErrorKind::NotALattice, C.name() + " lacks a join or meet");
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> up, down;
      for (std::size_t u = 0; u < n; ++u) {
        if (le(a, u) && le(b, u)) {
          up.push_back(u);
        }
        if (le(u, a) && le(u, b)) {
          down.push_back(u);
        }
      }
      L.join[a * n + b] = extremal(up, true);
      L.meet[a * n + b] = extremal(down, false);
    }
  }
  std::vector<std::size_t> all(n);
  for (std::size_t a = 0; a < n; ++a) {
    all[a] = a;
  }
  L.top    = extremal(all, false);
  L.bottom = extremal(all, true);
  return L;
}

LawReport check_constant_kusarigama(CatPtr const& c, VarianceSig sig,
                                    FinSet const& E) {
  LawReport         r;
  Lattice const     L  = as_lattice(c);
  std::size_t const no = c->num_objects();
  std::size_t const ne = E.size();
  CokusarigamaResult J = cokusarigama(constant_functor(c, sig, E));
  KusarigamaResult   G = kusarigama(constant_functor(c, sig.swapped(), E));
  for (auto const& T : all_tuples(no, sig.arity())) {
    // J at (X_1..X_q ; Y_1..Y_p)
    Tuple xs(T.begin(), T.begin() + static_cast<std::ptrdiff_t>(sig.q));
    Tuple ys(T.begin() + static_cast<std::ptrdiff_t>(sig.q), T.end());
    bool  nonempty = L.le(L.join_of(xs), L.meet_of(ys));
    std::size_t want = nonempty ? ne : 0;
    CoendPQ const& Q = J.coend_at(T);
    // Each class is sent to its E-component; the map must be a bijection
    // onto E when the hom-set is inhabited.
    std::vector<std::size_t> phi(Q.carrier.carrier.size(), FinCat::npos);
    bool                     ok = Q.carrier.carrier.size() == want;
    for (std::size_t a = 0; a < no && ok; ++a) {
      FinFn const& leg = Q.carrier.legs[a];
      for (std::size_t x = 0; x < leg.dom(); ++x) {
        std::size_t e = x % std::max<std::size_t>(ne, 1);
        if (phi[leg(x)] == FinCat::npos) {
          phi[leg(x)] = e;
        } else if (phi[leg(x)] != e) {
          ok = false;
        }
      }
    }
    std::set<std::size_t> img(phi.begin(), phi.end());
    if (!ok || img.size() != phi.size()) {
      r.failures.push_back("J(E) fiber has " + std::to_string(Q.carrier.carrier.size())
                           + " elements, expected " + std::to_string(want));
    }
    // Gamma at (A_1..A_p ; B_1..B_q)
    Tuple as(T.begin(), T.begin() + static_cast<std::ptrdiff_t>(sig.p));
    Tuple bs(T.begin() + static_cast<std::ptrdiff_t>(sig.p), T.end());
    bool  inhabited = L.le(L.join_of(bs), L.meet_of(as));
    std::size_t gwant = inhabited ? ne : 1;
    std::size_t got   = G.end_at(T).carrier.carrier.size();
    if (got != gwant) {
      r.failures.push_back("Gamma(E) fiber has " + std::to_string(got)
                           + " elements, expected " + std::to_string(gwant));
    }
  }
  r.ok = r.failures.empty();
  return r;
}

LawReport check_identity_kusarigama(CatPtr const& c, VarianceSig sig) {
  LawReport         r;
  Lattice const     L  = as_lattice(c);
  auto const&       C  = *c;
  std::size_t const no = C.num_objects();
  std::size_t const p = sig.p, q = sig.q;
  std::size_t       checked = 0;
  // J(id) at (X_1..X_q ; Y_1..Y_p) in C^(p,q).
  for (auto const& T : all_tuples(no, sig.arity())) {
    Tuple xs(T.begin(), T.begin() + static_cast<std::ptrdiff_t>(q));
    Tuple ys(T.begin() + static_cast<std::ptrdiff_t>(q), T.end());
    // Copowers in C^op are powers in C, so contravariant components are
    // meets of the weighted terms and covariant ones are joins.
    std::size_t contra = L.top, co = L.bottom;
    for (std::size_t a = 0; a < no; ++a) {
      bool inhabited = true;
      for (auto y : ys) {
        inhabited = inhabited && L.le(a, y);
      }
      for (auto x : xs) {
        inhabited = inhabited && L.le(x, a);
      }
      contra = L.meet[contra * no + (inhabited ? a : L.top)];
      co     = L.join[co * no + (inhabited ? a : L.bottom)];
    }
    std::size_t jx = L.join_of(xs), my = L.meet_of(ys);
    bool        le = L.le(jx, my);
    std::size_t want_contra = le ? jx : L.top;
    std::size_t want_co     = le ? my : L.bottom;
    if ((p > 0 && contra != want_contra) || (q > 0 && co != want_co)) {
      r.failures.push_back("J(id) closed form fails");
    }
    ++checked;
  }
  // Gamma(id) at (A_1..A_p ; B_1..B_q) in C^(q,p).
  for (auto const& T : all_tuples(no, sig.arity())) {
    Tuple as(T.begin(), T.begin() + static_cast<std::ptrdiff_t>(p));
    Tuple bs(T.begin() + static_cast<std::ptrdiff_t>(p), T.end());
    std::size_t contra = L.bottom, co = L.top;
    for (std::size_t x = 0; x < no; ++x) {
      bool inhabited = true;
      for (auto b : bs) {
        inhabited = inhabited && L.le(b, x);
      }
      for (auto a : as) {
        inhabited = inhabited && L.le(x, a);
      }
      contra = L.join[contra * no + (inhabited ? x : L.bottom)];
      co     = L.meet[co * no + (inhabited ? x : L.top)];
    }
    std::size_t jb = L.join_of(bs), ma = L.meet_of(as);
    bool        le = L.le(jb, ma);
    std::size_t want_contra = le ? ma : L.bottom;
    std::size_t want_co     = le ? jb : L.top;
    if ((q > 0 && contra != want_contra) || (p > 0 && co != want_co)) {
      r.failures.push_back("Gamma(id) closed form fails");
    }
    ++checked;
  }
  r.counts = {checked};
  r.ok     = r.failures.empty();
  return r;
}

}  // namespace hace
