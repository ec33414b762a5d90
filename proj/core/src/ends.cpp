#include "hace/ends.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "hace/config.hpp"
#include "hace/error.hpp"
#include "hace/kusarigama.hpp"
#include "hace/twisted.hpp"
#include "util.hpp"

namespace hace {

using detail::concat;
using detail::identity_tuple;
using detail::object_names;
using detail::tuple_src;
using detail::tuple_tgt;

std::string to_string(EndMethod m) {
  switch (m) {
    case EndMethod::equalizer: return "equalizer";
    case EndMethod::restriction: return "restriction";
    case EndMethod::twisted: return "twisted";
    case EndMethod::weighted: return "weighted";
  }
  return "?";
}

std::optional<EndMethod> parse_end_method(std::string_view s) {
  for (auto m : all_end_methods()) {
    if (to_string(m) == s) {
      return m;
    }
  }
  return std::nullopt;
}

std::vector<EndMethod> all_end_methods() {
  return {EndMethod::equalizer, EndMethod::restriction, EndMethod::twisted,
          EndMethod::weighted};
}

WedgePQ EndPQ::wedge() const {
  return {carrier.carrier, carrier.legs};
}

std::vector<Tuple> EndPQ::families() const {
  std::vector<Tuple> out(carrier.carrier.size(), Tuple(carrier.legs.size()));
  for (std::size_t a = 0; a < carrier.legs.size(); ++a) {
    for (std::size_t e = 0; e < out.size(); ++e) {
      out[e][a] = carrier.legs[a](e);
    }
  }
  return out;
}

CowedgePQ CoendPQ::cowedge() const {
  return {carrier.carrier, carrier.legs};
}

EndPQ end_from_families(SetFunctorPQ const& D, std::vector<Tuple> families) {
  std::sort(families.begin(), families.end());
  if (std::adjacent_find(families.begin(), families.end())
      != families.end()) {
    throw Error(ErrorKind::BijectionFailure, "repeated end family");
  }
  auto const& C     = *D.base();
  auto const  names = object_names(C);
  std::size_t n     = C.num_objects();
  std::vector<std::string>              labels;
  std::vector<std::vector<std::size_t>> legs(n);
  for (auto const& fam : families) {
    std::vector<std::string> parts;
    for (std::size_t a = 0; a < n; ++a) {
      parts.push_back(D.fiber(D.diag(a)).label(fam[a]));
      legs[a].push_back(fam[a]);
    }
    labels.push_back(family_label(names, parts));
  }
  EndPQ e{{FinSet(std::move(labels)), {}}};
  for (std::size_t a = 0; a < n; ++a) {
    e.carrier.legs.emplace_back(D.fiber(D.diag(a)).size(), std::move(legs[a]));
  }
  return e;
}

CoendPQ coend_from_partition(SetFunctorPQ const&             D,
                             std::vector<std::size_t> const& class_of) {
  auto const& C = *D.base();
  std::map<std::size_t, std::size_t> renumber;
  std::vector<std::string>           labels;
  std::vector<std::vector<std::size_t>> legs(C.num_objects());
  std::size_t k = 0;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    auto const& X = D.fiber(D.diag(a));
    for (std::size_t x = 0; x < X.size(); ++x, ++k) {
      auto [it, fresh] = renumber.emplace(class_of.at(k), renumber.size());
      if (fresh) {
        labels.push_back("⟦" + C.object_name(a) + ":" + X.label(x) + "⟧");
      }
      legs[a].push_back(it->second);
    }
  }
  if (k != class_of.size()) {
    throw Error(ErrorKind::ShapeMismatch, "partition of the wrong size");
  }
  std::size_t nc = labels.size();
  CoendPQ     r{{FinSet(std::move(labels)), {}}};
  for (auto& l : legs) {
    r.carrier.legs.emplace_back(nc, std::move(l));
  }
  return r;
}

std::optional<std::size_t> find_family(EndPQ const& e, Tuple const& family) {
  auto const& legs = e.carrier.legs;
  if (family.size() != legs.size()) {
    return std::nullopt;
  }
  for (std::size_t k = 0; k < e.carrier.carrier.size(); ++k) {
    bool match = true;
    for (std::size_t a = 0; a < legs.size() && match; ++a) {
      match = legs[a](k) == family[a];
    }
    if (match) {
      return k;
    }
  }
  return std::nullopt;
}

Tuple reslot(Tuple const& t, VarianceSig sig) {
  Tuple u(t.begin() + static_cast<std::ptrdiff_t>(sig.p), t.end());
  u.insert(u.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(sig.p));
  return u;
}

SetFunctor reslot_weight(SetFunctorPQ const& W) {
  VarianceSig       sig = W.sig().swapped();
  std::size_t const no = W.base()->num_objects(), nm = W.base()->num_morphisms();
  std::size_t const n = sig.arity();
  return SetFunctor::lazy(
      power_pq(W.base(), sig),
      [W, sig, no, n](std::size_t code) {
        return W.fiber(reslot(tuple_decode(code, no, n), sig));
      },
      [W, sig, nm, n](std::size_t code) {
        return W.act(reslot(tuple_decode(code, nm, n), sig));
      });
}

bool hom_pi_is_weight(VarianceSig sig) {
  return sig.p >= 1 && sig.q >= 1 && std::min(sig.p, sig.q) == 1;
}

////////////////////////////////////////////////////////////////////////
// Ends
////////////////////////////////////////////////////////////////////////

namespace {

  std::vector<Tuple> end_equalizer(SetFunctorPQ const& D) {
    auto const&               C = *D.base();
    std::vector<std::size_t>  sizes;
    std::vector<EqConstraint> cs;
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      sizes.push_back(D.fiber(D.diag(a)).size());
    }
    for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
      if (C.is_identity(f)) {
        continue;
      }
      std::size_t a = C.src(f), b = C.tgt(f);
      cs.push_back({a, D.act(D.diag_mor(C.identity(a), f)), b,
                    D.act(D.diag_mor(f, C.identity(b)))});
    }
    return enumerate_families(sizes, cs);
  }

  // Ordinary end of the diagonal restriction, by scanning the product of
  // the diagonal fibers.
  std::vector<Tuple> end_restriction(SetFunctorPQ const& D) {
    SetFunctorPQ             R = restrict_diagonal(D);
    auto const&              C = *D.base();
    std::size_t const        n = C.num_objects();
    std::vector<std::size_t> radix;
    std::uint64_t            total = 1;
    for (std::size_t a = 0; a < n; ++a) {
      radix.push_back(R.fiber(Tuple{a, a}).size());
      total = mul_sat(total, radix.back());
    }
    check_cap(total, "product of diagonal fibers");
    struct Check {
      std::size_t  a, b;
      FinFn const* left;
      FinFn const* right;
    };
    std::vector<Check> checks;
    for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
      if (!C.is_identity(f)) {
        std::size_t a = C.src(f), b = C.tgt(f);
        checks.push_back({a, b, &R.act(Tuple{C.identity(a), f}),
                          &R.act(Tuple{f, C.identity(b)})});
      }
    }
    std::vector<Tuple> out;
    detail::for_each_digits(radix, [&](Tuple const& x) {
      for (auto const& c : checks) {
        if ((*c.left)(x[c.a]) != (*c.right)(x[c.b])) {
          return;
        }
      }
      out.push_back(x);
    });
    return out;
  }

  std::vector<std::size_t> fiber_offsets(SetFunctor const& W) {
    std::vector<std::size_t> off;
    std::size_t              k = 0;
    for (std::size_t t = 0; t < W.domain()->num_objects(); ++t) {
      off.push_back(k);
      k += W.fiber(t).size();
    }
    return off;
  }

  std::vector<Tuple> end_twisted(SetFunctorPQ const& D) {
    FactorizationWeight W(D.base(), D.sig());
    Diagram   d   = elements_diagram(W.functor().functor(), D.functor());
    SubResult lim = limit(d);
    auto      off = fiber_offsets(W.functor().functor());
    std::size_t const  n = D.base()->num_objects();
    std::vector<Tuple> out(lim.carrier.size(), Tuple(n));
    for (std::size_t a = 0; a < n; ++a) {
      FinFn const& leg = lim.legs[off[D.diag(a)] + W.identity_class(a)];
      for (std::size_t e = 0; e < out.size(); ++e) {
        out[e][a] = leg(e);
      }
    }
    return out;
  }

  std::vector<Tuple> end_weighted(SetFunctorPQ const& D) {
    auto J = cokusarigama(point_functor(D.base(), D.sig().swapped()));
    auto nats = enumerate_nat(J.functor().functor(), D.functor());
    std::size_t const  n = D.base()->num_objects();
    std::vector<Tuple> out;
    for (auto const& nat : nats) {
      Tuple fam(n);
      for (std::size_t a = 0; a < n; ++a) {
        fam[a] = nat.components[D.diag(a)](J.unit().components[a](0));
      }
      out.push_back(std::move(fam));
    }
    return out;
  }

}  // namespace

EndPQ end_pq(SetFunctorPQ const& D, EndMethod m) {
  switch (m) {
    case EndMethod::equalizer: return end_from_families(D, end_equalizer(D));
    case EndMethod::restriction:
      return end_from_families(D, end_restriction(D));
    case EndMethod::twisted: return end_from_families(D, end_twisted(D));
    case EndMethod::weighted: return end_from_families(D, end_weighted(D));
  }
  throw Error(ErrorKind::MethodUnavailable, "unknown end method");
}

////////////////////////////////////////////////////////////////////////
// Coends
////////////////////////////////////////////////////////////////////////

namespace {

  std::vector<std::size_t> diagonal_offsets(SetFunctorPQ const& D,
                                            std::size_t&        total) {
    std::vector<std::size_t> off;
    total = 0;
    for (std::size_t a = 0; a < D.base()->num_objects(); ++a) {
      off.push_back(total);
      total += D.fiber(D.diag(a)).size();
    }
    check_cap(total, "coproduct of diagonal fibers");
    return off;
  }

  std::vector<std::size_t> coend_union_find(SetFunctorPQ const& D) {
    auto const& C = *D.base();
    std::size_t total;
    auto        off = diagonal_offsets(D, total);
    UnionFind   uf(total);
    for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
      if (C.is_identity(f)) {
        continue;
      }
      std::size_t  a = C.src(f), b = C.tgt(f);
      FinFn const& lo = D.act(D.diag_mor(f, C.identity(a)));
      FinFn const& up = D.act(D.diag_mor(C.identity(b), f));
      for (std::size_t y = 0; y < D.fiber(D.diag(b, a)).size(); ++y) {
        uf.unite(off[a] + lo(y), off[b] + up(y));
      }
    }
    return uf.class_index();
  }

  // Coequaliser of the two maps out of the coproduct over non-identity f of
  // the restriction at (tgt f, src f).
  std::vector<std::size_t> coend_restriction(SetFunctorPQ const& D) {
    SetFunctorPQ R = restrict_diagonal(D);
    auto const&  C = *D.base();
    std::size_t  total;
    auto         off = diagonal_offsets(D, total);
    std::vector<std::size_t> f1, f2;
    for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
      if (C.is_identity(f)) {
        continue;
      }
      std::size_t  a = C.src(f), b = C.tgt(f);
      FinFn const& lo = R.act(Tuple{f, C.identity(a)});
      FinFn const& up = R.act(Tuple{C.identity(b), f});
      for (std::size_t y = 0; y < lo.dom(); ++y) {
        f1.push_back(off[a] + lo(y));
        f2.push_back(off[b] + up(y));
      }
      check_cap(f1.size(), "coequaliser domain");
    }
    QuotResult q = coequalizer(FinSet::range(total),
                               FinFn(total, std::move(f1)),
                               FinFn(total, std::move(f2)));
    return q.legs[0].table();
  }

  std::vector<std::size_t> partition_from(SetFunctorPQ const& D,
                                          QuotResult const&   q,
                                          auto&&              leg_at) {
    std::size_t              total;
    auto                     off = diagonal_offsets(D, total);
    std::vector<std::size_t> cls(total);
    std::vector<bool>        hit(q.carrier.size(), false);
    for (std::size_t a = 0; a < D.base()->num_objects(); ++a) {
      for (std::size_t x = 0; x < D.fiber(D.diag(a)).size(); ++x) {
        cls[off[a] + x] = leg_at(a, x);
        hit[cls[off[a] + x]] = true;
      }
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) {
      throw Error(ErrorKind::BijectionFailure,
                  "a class of the colimit misses the diagonal");
    }
    return cls;
  }

  std::vector<std::size_t> coend_twisted(SetFunctorPQ const& D) {
    FactorizationWeight W(D.base(), D.sig().swapped());
    SetFunctor          Wop = reslot_weight(W.functor());
    QuotResult q   = colimit(elements_op_diagram(Wop, D.functor()));
    auto       off = fiber_offsets(Wop);
    return partition_from(D, q, [&](std::size_t a, std::size_t x) {
      return q.legs[off[D.diag(a)] + W.identity_class(a)](x);
    });
  }

  std::vector<std::size_t> coend_weighted(SetFunctorPQ const& D) {
    auto       J   = cokusarigama(point_functor(D.base(), D.sig()));
    SetFunctor Wop = reslot_weight(J.functor());
    QuotResult q   = weighted_colimit(Wop, D.functor());
    return partition_from(D, q, [&](std::size_t a, std::size_t x) {
      std::size_t w  = J.unit().components[a](0);
      std::size_t nd = D.fiber(D.diag(a)).size();
      return q.legs[D.diag(a)](w * nd + x);
    });
  }

}  // namespace

CoendPQ coend_pq(SetFunctorPQ const& D, EndMethod m) {
  switch (m) {
    case EndMethod::equalizer:
      return coend_from_partition(D, coend_union_find(D));
    case EndMethod::restriction:
      return coend_from_partition(D, coend_restriction(D));
    case EndMethod::twisted:
      return coend_from_partition(D, coend_twisted(D));
    case EndMethod::weighted:
      return coend_from_partition(D, coend_weighted(D));
  }
  throw Error(ErrorKind::MethodUnavailable, "unknown coend method");
}

////////////////////////////////////////////////////////////////////////
// Universal property
////////////////////////////////////////////////////////////////////////

UniversalReport verify_universal_property(EndPQ const& e, SetFunctorPQ const& D,
                                          std::size_t max_apex) {
  UniversalReport r;
  Verdict         v = check_wedge(e.wedge(), D);
  if (!v.ok) {
    r.ok = false;
    r.failures.push_back("universal legs are not a wedge: "
                         + v.violations.front());
  }
  std::map<Tuple, std::size_t> multiplicity;
  for (auto const& fam : e.families()) {
    ++multiplicity[fam];
  }
  std::size_t const n = D.base()->num_objects();
  for (std::size_t k = 0; k <= max_apex; ++k) {
    ++r.apexes;
    FinSet X = FinSet::range(k, "x");
    for (auto const& w : enumerate_wedges(X, D)) {
      ++r.wedges;
      std::uint64_t count = 1;
      for (std::size_t x = 0; x < k; ++x) {
        Tuple fam(n);
        for (std::size_t a = 0; a < n; ++a) {
          fam[a] = w.legs[a](x);
        }
        auto it = multiplicity.find(fam);
        count *= it == multiplicity.end() ? 0 : it->second;
      }
      r.factorizations += count;
      if (count != 1) {
        r.ok = false;
        r.failures.push_back(
            std::string(count == 0 ? "NoFactorization" : "NonUnique")
            + " for a wedge from a set of size " + std::to_string(k));
      }
    }
  }
  return r;
}

UniversalReport verify_universal_property(CoendPQ const&      e,
                                          SetFunctorPQ const& D,
                                          std::size_t         max_apex) {
  UniversalReport r;
  Verdict         v = check_cowedge(e.cowedge(), D);
  if (!v.ok) {
    r.ok = false;
    r.failures.push_back("universal legs are not a cowedge: "
                         + v.violations.front());
  }
  std::size_t const n  = D.base()->num_objects();
  std::size_t const nc = e.carrier.carrier.size();
  for (std::size_t k = 0; k <= max_apex; ++k) {
    ++r.apexes;
    FinSet X = FinSet::range(k, "x");
    for (auto const& w : enumerate_cowedges(D, X)) {
      ++r.wedges;
      std::vector<std::set<std::size_t>> values(nc);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t x = 0; x < e.carrier.legs[a].dom(); ++x) {
          values[e.carrier.legs[a](x)].insert(w.legs[a](x));
        }
      }
      std::uint64_t count = 1;
      for (auto const& s : values) {
        count *= s.empty() ? k : (s.size() == 1 ? 1 : 0);
      }
      r.factorizations += count;
      if (count != 1) {
        r.ok = false;
        r.failures.push_back(
            std::string(count == 0 ? "NoFactorization" : "NonUnique")
            + " for a cowedge to a set of size " + std::to_string(k));
      }
    }
  }
  return r;
}

////////////////////////////////////////////////////////////////////////
// Fubini
////////////////////////////////////////////////////////////////////////

CatPtr fubini_domain(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                     VarianceSig sb) {
  std::vector<CatPtr> factors;
  CatPtr              aop = opposite(a), bop = opposite(b);
  factors.insert(factors.end(), sa.p, aop);
  factors.insert(factors.end(), sa.q, a);
  factors.insert(factors.end(), sb.p, bop);
  factors.insert(factors.end(), sb.q, b);
  return FinCat::product(std::move(factors));
}

namespace {

  // Codes in the Fubini domain of an A-tuple followed by a B-tuple.
  struct QCoder {
    std::vector<std::size_t> obj_radix;
    std::vector<std::size_t> mor_radix;

    QCoder(FinCat const& a, VarianceSig sa, FinCat const& b, VarianceSig sb) {
      obj_radix.assign(sa.arity(), a.num_objects());
      obj_radix.insert(obj_radix.end(), sb.arity(), b.num_objects());
      mor_radix.assign(sa.arity(), a.num_morphisms());
      mor_radix.insert(mor_radix.end(), sb.arity(), b.num_morphisms());
    }
    std::size_t obj(Tuple const& ta, Tuple const& tb) const {
      return encode(concat(ta, tb), obj_radix);
    }
    std::size_t mor(Tuple const& ma, Tuple const& mb) const {
      return encode(concat(ma, mb), mor_radix);
    }
  };

  // Splits a (p+r, q+s) tuple over A x B into its A- and B-tuples.
  std::pair<Tuple, Tuple> split_joint(Tuple const& t, VarianceSig sa,
                                      VarianceSig sb, std::size_t nb) {
    Tuple ta, tb;
    std::size_t const pr = sa.p + sb.p;
    for (std::size_t i = 0; i < sa.p; ++i) {
      ta.push_back(t[i] / nb);
    }
    for (std::size_t i = 0; i < sa.q; ++i) {
      ta.push_back(t[pr + i] / nb);
    }
    for (std::size_t i = 0; i < sb.p; ++i) {
      tb.push_back(t[sa.p + i] % nb);
    }
    for (std::size_t i = 0; i < sb.q; ++i) {
      tb.push_back(t[pr + sa.q + i] % nb);
    }
    return {ta, tb};
  }

}  // namespace

SetFunctorPQ fubini_joint(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                          VarianceSig sb, SetFunctor const& D) {
  CatPtr            ab = FinCat::product({a, b});
  QCoder            qc(*a, sa, *b, sb);
  std::size_t const nbo = b->num_objects(), nbm = b->num_morphisms();
  return SetFunctorPQ::lazy(
      ab,
      {sa.p + sb.p, sa.q + sb.q},
      [D, qc, sa, sb, nbo](Tuple const& t) {
        auto [ta, tb] = split_joint(t, sa, sb, nbo);
        return D.fiber(qc.obj(ta, tb));
      },
      [D, qc, sa, sb, nbm](Tuple const& m) {
        auto [ma, mb] = split_joint(m, sa, sb, nbm);
        return D.act(qc.mor(ma, mb));
      });
}

namespace {

  // One order of iteration: the inner co/end runs over `inner` for each
  // fixed tuple of `outer`.
  struct Iteration {
    CatPtr      outer, inner;
    VarianceSig so, si;
    bool        a_outer;
    SetFunctor  D;
    QCoder      qc;

    std::size_t qobj(Tuple const& to, Tuple const& ti) const {
      return a_outer ? qc.obj(to, ti) : qc.obj(ti, to);
    }
    std::size_t qmor(Tuple const& mo, Tuple const& mi) const {
      return a_outer ? qc.mor(mo, mi) : qc.mor(mi, mo);
    }
    SetFunctorPQ inner_functor(Tuple const& to) const {
      Iteration const self = *this;
      Tuple           id   = identity_tuple(*outer, to);
      return SetFunctorPQ::lazy(
          inner,
          si,
          [self, to](Tuple const& ti) {
            return self.D.fiber(self.qobj(to, ti));
          },
          [self, id](Tuple const& mi) {
            return self.D.act(self.qmor(id, mi));
          });
    }
  };

  struct InnerEnds {
    std::mutex                          mu;
    std::map<std::size_t, EndPQ>        ends;
    std::map<std::size_t, std::map<Tuple, std::size_t>> index;
    std::map<std::size_t, CoendPQ>      coends;
  };

  EndPQ const& inner_end(Iteration const& it, InnerEnds& cache,
                         Tuple const& to) {
    std::size_t                 code = tuple_code(to, it.outer->num_objects());
    std::lock_guard<std::mutex> lock(cache.mu);
    auto                        f = cache.ends.find(code);
    if (f == cache.ends.end()) {
      f = cache.ends.emplace(code, end_pq(it.inner_functor(to))).first;
      auto& idx = cache.index[code];
      auto  fams = f->second.families();
      for (std::size_t k = 0; k < fams.size(); ++k) {
        idx.emplace(fams[k], k);
      }
    }
    return f->second;
  }

  std::size_t inner_index(Iteration const& it, InnerEnds& cache,
                          Tuple const& to, Tuple const& fam) {
    inner_end(it, cache, to);
    std::size_t                 code = tuple_code(to, it.outer->num_objects());
    std::lock_guard<std::mutex> lock(cache.mu);
    auto const&                 idx = cache.index[code];
    auto                        f   = idx.find(fam);
    if (f == idx.end()) {
      throw Error(ErrorKind::BijectionFailure,
                  "inner end is not functorial in the outer variable");
    }
    return f->second;
  }

  CoendPQ const& inner_coend(Iteration const& it, InnerEnds& cache,
                             Tuple const& to) {
    std::size_t                 code = tuple_code(to, it.outer->num_objects());
    std::lock_guard<std::mutex> lock(cache.mu);
    auto                        f = cache.coends.find(code);
    if (f == cache.coends.end()) {
      f = cache.coends.emplace(code, coend_pq(it.inner_functor(to))).first;
    }
    return f->second;
  }

  SetFunctorPQ outer_end_functor(Iteration const&          it,
                                 std::shared_ptr<InnerEnds> cache) {
    std::size_t const ni = it.inner->num_objects();
    return SetFunctorPQ::lazy(
        it.outer,
        it.so,
        [it, cache](Tuple const& to) {
          return inner_end(it, *cache, to).carrier.carrier;
        },
        [it, cache, ni](Tuple const& mo) {
          Tuple        s  = tuple_src(*it.outer, it.so, mo);
          Tuple        t  = tuple_tgt(*it.outer, it.so, mo);
          EndPQ const& Es = inner_end(it, *cache, s);
          std::size_t  nt = inner_end(it, *cache, t).carrier.carrier.size();
          std::vector<std::size_t> table;
          for (std::size_t e = 0; e < Es.carrier.carrier.size(); ++e) {
            Tuple fam(ni);
            for (std::size_t k = 0; k < ni; ++k) {
              Tuple dk(it.si.arity(), it.inner->identity(k));
              fam[k] = it.D.act(it.qmor(mo, dk))(Es.carrier.legs[k](e));
            }
            table.push_back(inner_index(it, *cache, t, fam));
          }
          return FinFn(nt, std::move(table));
        });
  }

  SetFunctorPQ outer_coend_functor(Iteration const&          it,
                                   std::shared_ptr<InnerEnds> cache) {
    std::size_t const ni = it.inner->num_objects();
    return SetFunctorPQ::lazy(
        it.outer,
        it.so,
        [it, cache](Tuple const& to) {
          return inner_coend(it, *cache, to).carrier.carrier;
        },
        [it, cache, ni](Tuple const& mo) {
          Tuple          s  = tuple_src(*it.outer, it.so, mo);
          Tuple          t  = tuple_tgt(*it.outer, it.so, mo);
          CoendPQ const& Qs = inner_coend(it, *cache, s);
          CoendPQ const& Qt = inner_coend(it, *cache, t);
          std::size_t    nc = Qs.carrier.carrier.size();
          std::vector<std::size_t> table(nc, 0);
          std::vector<bool>        done(nc, false);
          for (std::size_t k = 0; k < ni; ++k) {
            Tuple dk(it.si.arity(), it.inner->identity(k));
            FinFn const& leg = Qs.carrier.legs[k];
            for (std::size_t x = 0; x < leg.dom(); ++x) {
              if (!done[leg(x)]) {
                done[leg(x)]  = true;
                table[leg(x)] = Qt.carrier.legs[k](it.D.act(it.qmor(mo, dk))(x));
              }
            }
          }
          return FinFn(Qt.carrier.carrier.size(), std::move(table));
        });
  }

  // Index of the joint object (a,b) from an (outer, inner) pair.
  std::size_t joint_object(Iteration const& it, std::size_t o, std::size_t k) {
    return it.a_outer ? o * it.inner->num_objects() + k
                      : k * it.outer->num_objects() + o;
  }

  void compare_ends(Iteration const& it, EndPQ const& joint,
                    SetFunctorPQ const& Djoint, std::size_t& size_out,
                    std::vector<std::string>& failures, char const* tag) {
    auto         cache = std::make_shared<InnerEnds>();
    SetFunctorPQ O     = outer_end_functor(it, cache);
    EndPQ        outer = end_pq(O);
    size_out           = outer.carrier.carrier.size();
    std::size_t const no = it.outer->num_objects(), ni = it.inner->num_objects();
    std::set<std::size_t> image;
    for (std::size_t e = 0; e < size_out; ++e) {
      Tuple fam(no * ni);
      for (std::size_t o = 0; o < no; ++o) {
        Tuple        d(it.so.arity(), o);
        EndPQ const& In = inner_end(it, *cache, d);
        std::size_t  i  = outer.carrier.legs[o](e);
        for (std::size_t k = 0; k < ni; ++k) {
          fam[joint_object(it, o, k)] = In.carrier.legs[k](i);
        }
      }
      auto j = find_family(joint, fam);
      if (!j) {
        failures.push_back(std::string(tag) + ": iterated family "
                           + outer.carrier.carrier.label(e)
                           + " is not a joint wedge element");
        continue;
      }
      image.insert(*j);
    }
    if (image.size() != size_out
        || image.size() != joint.carrier.carrier.size()) {
      failures.push_back(std::string(tag) + ": iterated end of size "
                         + std::to_string(size_out)
                         + " is not in bijection with the joint end of size "
                         + std::to_string(joint.carrier.carrier.size()));
    }
    (void)Djoint;
  }

  void compare_coends(Iteration const& it, CoendPQ const& joint,
                      SetFunctorPQ const& Djoint, std::size_t& size_out,
                      std::vector<std::string>& failures, char const* tag) {
    auto         cache = std::make_shared<InnerEnds>();
    SetFunctorPQ O     = outer_coend_functor(it, cache);
    CoendPQ      outer = coend_pq(O);
    size_out           = outer.carrier.carrier.size();
    std::size_t const no = it.outer->num_objects(), ni = it.inner->num_objects();
    std::size_t const nj = joint.carrier.carrier.size();
    std::vector<std::size_t> phi(nj, FinCat::npos);
    bool                     consistent = true;
    for (std::size_t o = 0; o < no; ++o) {
      Tuple          d(it.so.arity(), o);
      CoendPQ const& In = inner_coend(it, *cache, d);
      for (std::size_t k = 0; k < ni; ++k) {
        std::size_t  ab  = joint_object(it, o, k);
        FinFn const& jl  = joint.carrier.legs[ab];
        for (std::size_t x = 0; x < Djoint.fiber(Djoint.diag(ab)).size(); ++x) {
          std::size_t c = outer.carrier.legs[o](In.carrier.legs[k](x));
          if (phi[jl(x)] == FinCat::npos) {
            phi[jl(x)] = c;
          } else if (phi[jl(x)] != c) {
            consistent = false;
          }
        }
      }
    }
    if (!consistent) {
      failures.push_back(std::string(tag)
                         + ": joint classes split in the iterated coend");
    }
    std::set<std::size_t> image(phi.begin(), phi.end());
    if (image.size() != nj || nj != size_out || image.count(FinCat::npos)) {
      failures.push_back(std::string(tag) + ": iterated coend of size "
                         + std::to_string(size_out)
                         + " is not in bijection with the joint coend of size "
                         + std::to_string(nj));
    }
  }

}  // namespace

FubiniReport fubini_check(CatPtr const& a, VarianceSig sa, CatPtr const& b,
                          VarianceSig sb, SetFunctor const& D) {
  FubiniReport r;
  SetFunctorPQ J     = fubini_joint(a, sa, b, sb, D);
  EndPQ        jend  = end_pq(J);
  CoendPQ      jco   = coend_pq(J);
  r.joint_end        = jend.carrier.carrier.size();
  r.joint_coend      = jco.carrier.carrier.size();
  QCoder    qc(*a, sa, *b, sb);
  Iteration ia{a, b, sa, sb, true, D, qc};
  Iteration ib{b, a, sb, sa, false, D, qc};
  compare_ends(ia, jend, J, r.a_outer_end, r.failures, "A outside");
  compare_ends(ib, jend, J, r.b_outer_end, r.failures, "B outside");
  compare_coends(ia, jco, J, r.a_outer_coend, r.failures, "A outside");
  compare_coends(ib, jco, J, r.b_outer_coend, r.failures, "B outside");
  r.ok = r.failures.empty();
  return r;
}

ArityReport arity_comparison(SetFunctorPQ const& D, VarianceSig first) {
  VarianceSig const all = D.sig();
  if (first.p > all.p || first.q > all.q) {
    throw Error(ErrorKind::ShapeMismatch, "split larger than the signature");
  }
  VarianceSig const second{all.p - first.p, all.q - first.q};
  CatPtr const&     C  = D.base();
  std::size_t const n  = all.arity();
  std::size_t const no = C->num_objects(), nm = C->num_morphisms();
  // Fubini digits (A contra, A co, B contra, B co) to D's slot order.
  auto reorder = [first, second](Tuple const& q) {
    Tuple       t;
    std::size_t ac = 0, aq = first.p, bc = first.arity(),
                bq = first.arity() + second.p;
    for (std::size_t i = 0; i < first.p; ++i) t.push_back(q[ac + i]);
    for (std::size_t i = 0; i < second.p; ++i) t.push_back(q[bc + i]);
    for (std::size_t i = 0; i < first.q; ++i) t.push_back(q[aq + i]);
    for (std::size_t i = 0; i < second.q; ++i) t.push_back(q[bq + i]);
    return t;
  };
  SetFunctor Q = SetFunctor::lazy(
      fubini_domain(C, first, C, second),
      [D, reorder, no, n](std::size_t code) {
        return D.fiber(reorder(tuple_decode(code, no, n)));
      },
      [D, reorder, nm, n](std::size_t code) {
        return D.act(reorder(tuple_decode(code, nm, n)));
      });
  ArityReport r;
  r.joint  = end_pq(fubini_joint(C, first, C, second, Q)).carrier.carrier.size();
  r.single = end_pq(D).carrier.carrier.size();
  return r;
}

////////////////////////////////////////////////////////////////////////
// Dinaturality as an end
////////////////////////////////////////////////////////////////////////

SetFunctorPQ dinat_integrand(SetFunctorPQ const& F, SetFunctorPQ const& G) {
  VarianceSig const sig = F.sig();
  if (G.sig() != sig.swapped() || G.base() != F.base()) {
    throw Error(ErrorKind::ShapeMismatch, "integrand needs G of the swapped type");
  }
  VarianceSig const hs = sig.swapped();
  return SetFunctorPQ::lazy(
      F.base(),
      hs,
      [F, G, hs](Tuple const& t) {
        return hom_set(F.fiber(reslot(t, hs)), G.fiber(t));
      },
      [F, G, hs](Tuple const& m) {
        Tuple        s   = tuple_src(*F.base(), hs, m);
        Tuple        t   = tuple_tgt(*F.base(), hs, m);
        FinFn const& Fm  = F.act(reslot(m, hs));  // F(t~) -> F(s~)
        FinFn const& Gm  = G.act(m);
        std::size_t  nfs = F.fiber(reslot(s, hs)).size();
        std::size_t  ngs = G.fiber(s).size();
        std::size_t  nft = F.fiber(reslot(t, hs)).size();
        std::size_t  ngt = G.fiber(t).size();
        std::uint64_t nsrc = pow_sat(ngs, nfs);
        check_cap(nsrc, "integrand action");
        std::vector<std::size_t> table;
        table.reserve(nsrc);
        for (std::size_t k = 0; k < nsrc; ++k) {
          FinFn phi = function_at(k, nfs, ngs);
          table.push_back(index_of_function(compose(Gm, compose(phi, Fm))));
        }
        return FinFn(pow_sat(ngt, nft), std::move(table));
      });
}

WeightReport pt_dinat_vs_weight(SetFunctorPQ const& G, bool use_hom_pi) {
  WeightReport      r;
  CatPtr const&     C   = G.base();
  VarianceSig const sig = G.sig();
  std::size_t const n   = C->num_objects();
  auto dinats = enumerate_dinat(point_functor(C, sig.swapped()), G);
  r.dinat     = dinats.size();
  SetFunctorPQ W;
  Tuple        id_elem(n);
  if (use_hom_pi) {
    W = hom_pi(C, sig);
    for (std::size_t a = 0; a < n; ++a) {
      std::size_t cells = sig.p * sig.q;
      std::size_t pos   = detail::hom_position(*C, a, a, C->identity(a));
      id_elem[a]        = encode(std::vector<std::size_t>(cells, pos),
                                 std::vector<std::size_t>(cells, C->hom(a, a).size()));
    }
  } else {
    auto J = cokusarigama(point_functor(C, sig.swapped()));
    W      = J.functor();
    for (std::size_t a = 0; a < n; ++a) {
      id_elem[a] = J.unit().components[a](0);
    }
  }
  auto nats = enumerate_nat(W.functor(), G.functor());
  r.nat     = nats.size();
  std::set<Tuple> seen;
  std::set<Tuple> wanted;
  for (auto const& d : dinats) {
    Tuple fam(n);
    for (std::size_t a = 0; a < n; ++a) {
      fam[a] = d.components[a](0);
    }
    wanted.insert(fam);
  }
  for (auto const& nat : nats) {
    Tuple fam(n);
    for (std::size_t a = 0; a < n; ++a) {
      fam[a] = nat.components[G.diag(a)](id_elem[a]);
    }
    if (!wanted.count(fam)) {
      r.failures.push_back("a natural family is not a wedge from pt");
    }
    seen.insert(fam);
  }
  if (seen.size() != nats.size() || seen.size() != wanted.size()) {
    r.failures.push_back("DiNat(pt, G) has " + std::to_string(r.dinat)
                         + " elements but the weight gives "
                         + std::to_string(r.nat));
  }
  r.ok = r.failures.empty();
  return r;
}

DinatEndReport dinat_as_end(SetFunctorPQ const& F, SetFunctorPQ const& G) {
  DinatEndReport r;
  SetFunctorPQ   H = dinat_integrand(F, G);
  EndPQ          E = end_pq(H);
  auto           dinats = enumerate_dinat(F, G);
  r.dinat_count          = dinats.size();
  r.end_count            = E.carrier.carrier.size();
  std::size_t const n    = F.base()->num_objects();
  std::set<std::vector<std::vector<std::size_t>>> expected;
  for (auto const& d : dinats) {
    std::vector<std::vector<std::size_t>> t;
    for (auto const& c : d.components) {
      t.push_back(c.table());
    }
    expected.insert(std::move(t));
  }
  std::set<std::vector<std::vector<std::size_t>>> got;
  for (auto const& fam : E.families()) {
    DinatPQ d{F, G, {}};
    for (std::size_t a = 0; a < n; ++a) {
      d.components.push_back(function_at(fam[a], F.fiber(F.diag(a)).size(),
                                         G.fiber(G.diag(a)).size()));
    }
    Verdict v = check_dinatural(d);
    if (!v.ok) {
      r.failures.push_back("end family fails the hexagon: "
                           + v.violations.front());
    }
    std::vector<std::vector<std::size_t>> t;
    for (auto const& c : d.components) {
      t.push_back(c.table());
    }
    if (!expected.count(t)) {
      r.failures.push_back("end family is not an enumerated dinatural");
    }
    got.insert(std::move(t));
  }
  if (got.size() != r.end_count || got.size() != expected.size()) {
    r.failures.push_back("no bijection: " + std::to_string(r.end_count)
                         + " end elements, " + std::to_string(r.dinat_count)
                         + " dinaturals");
  }
  WeightReport w   = pt_dinat_vs_weight(G, false);
  r.pt_dinat_count = w.dinat;
  r.weight_nat     = w.nat;
  for (auto& f : w.failures) {
    r.failures.push_back("weight: " + f);
  }
  if (hom_pi_is_weight(G.sig())) {
    WeightReport h   = pt_dinat_vs_weight(G, true);
    r.hom_pi_checked = true;
    r.hom_pi_nat     = h.nat;
    for (auto& f : h.failures) {
      r.failures.push_back("hom_Pi: " + f);
    }
  }
  r.ok = r.failures.empty();
  return r;
}

////////////////////////////////////////////////////////////////////////
// PE laws
////////////////////////////////////////////////////////////////////////

namespace {

  SetFunctorPQ hom_from(FinSet const& S, SetFunctorPQ const& D) {
    std::size_t const ns = S.size();
    return SetFunctorPQ::lazy(
        D.base(),
        D.sig(),
        [S, D](Tuple const& t) { return hom_set(S, D.fiber(t)); },
        [D, ns](Tuple const& m) {
          FinFn const&  Dm  = D.act(m);
          std::uint64_t nsrc = pow_sat(Dm.dom(), ns);
          check_cap(nsrc, "power action");
          std::vector<std::size_t> table;
          for (std::size_t k = 0; k < nsrc; ++k) {
            table.push_back(
                index_of_function(compose(Dm, function_at(k, ns, Dm.dom()))));
          }
          return FinFn(pow_sat(Dm.cod(), ns), std::move(table));
        });
  }

}  // namespace

PeReport check_pe_laws(SetFunctorPQ const& D, std::size_t r, std::size_t s,
                       NatTransf const* alpha, SetFunctorPQ const* D2) {
  PeReport          rep;
  EndPQ             E = end_pq(D);
  std::size_t const n = D.base()->num_objects();

  if (alpha != nullptr && D2 != nullptr) {
    EndPQ   E2 = end_pq(*D2);
    WedgePQ w  = postcompose(*alpha, E.wedge(), *D2);
    Verdict v  = check_wedge(w, *D2);
    if (!v.ok) {
      rep.pe1 = false;
      rep.failures.push_back("PE1: pushed wedge fails: " + v.violations.front());
    }
    for (std::size_t e = 0; e < E.carrier.carrier.size(); ++e) {
      Tuple fam(n);
      for (std::size_t a = 0; a < n; ++a) {
        fam[a] = w.legs[a](e);
      }
      if (!find_family(E2, fam)) {
        rep.pe1 = false;
        rep.failures.push_back("PE1: no induced image for "
                               + E.carrier.carrier.label(e));
      }
    }
  }

  SetFunctorPQ M = mute_extend(D, r, s);
  if (end_pq(M).carrier.carrier != E.carrier.carrier
      || coend_pq(M).carrier.carrier != coend_pq(D).carrier.carrier) {
    rep.pe7 = false;
    rep.failures.push_back("PE7: mute slots change the co/end");
  }

  for (std::size_t k = 0; k <= 2; ++k) {
    FinSet S  = FinSet::range(k, "s");
    EndPQ  ES = end_pq(hom_from(S, D));
    std::size_t ne = E.carrier.carrier.size();
    std::uint64_t nmaps = pow_sat(ne, k);
    std::set<std::size_t> image;
    for (std::size_t i = 0; i < nmaps; ++i) {
      FinFn sigma = function_at(i, k, ne);
      Tuple fam(n);
      for (std::size_t a = 0; a < n; ++a) {
        fam[a] = index_of_function(compose(E.carrier.legs[a], sigma));
      }
      auto j = find_family(ES, fam);
      if (j) {
        image.insert(*j);
      }
    }
    if (image.size() != nmaps || nmaps != ES.carrier.carrier.size()) {
      rep.pe8 = false;
      rep.failures.push_back("PE8: Set(S, end) and end Set(S, -) differ for |S| = "
                             + std::to_string(k));
    }
  }
  return rep;
}

AdjunctionCount weight_adjunction_count(SetFunctorPQ const& D,
                                        FinSet const&       S) {
  AdjunctionCount c;
  auto            times_s = [&S](SetFunctorPQ const& W) {
    std::size_t ns = S.size();
    return SetFunctor::lazy(
        W.domain(),
        [W, S](std::size_t t) { return product({W.fiber(t), S}); },
        [W, ns](std::size_t m) {
          FinFn const&             Wm = W.act(m);
          std::vector<std::size_t> table;
          for (std::size_t w = 0; w < Wm.dom(); ++w) {
            for (std::size_t x = 0; x < ns; ++x) {
              table.push_back(Wm(w) * ns + x);
            }
          }
          return FinFn(Wm.cod() * ns, std::move(table));
        });
  };
  auto J       = cokusarigama(point_functor(D.base(), D.sig().swapped()));
  c.nat_weight = count_nat(times_s(J.functor()), D.functor());
  if (hom_pi_is_weight(D.sig())) {
    c.hom_pi     = true;
    c.nat_hom_pi = count_nat(times_s(hom_pi(D.base(), D.sig())), D.functor());
  }
  c.set_maps = pow_sat(end_pq(D).carrier.carrier.size(), S.size());
  return c;
}

}  // namespace hace
