#include "hace/dinat.hpp"

#include "hace/error.hpp"
#include "hace/setops.hpp"

namespace hace {

std::size_t hex_lower(SetFunctorPQ const& F, std::size_t f) {
  auto const& C = *F.base();
  return F.diag_mor(f, C.identity(C.src(f)));
}

std::size_t hex_upper(SetFunctorPQ const& F, std::size_t f) {
  auto const& C = *F.base();
  return F.diag_mor(C.identity(C.tgt(f)), f);
}

namespace {

  void check_types(SetFunctorPQ const& F, SetFunctorPQ const& G) {
    if (F.base()->num_objects() != G.base()->num_objects()
        || F.base()->num_morphisms() != G.base()->num_morphisms()
        || F.sig().swapped() != G.sig()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "dinatural needs F of type [p/q] and G of type [q/p] over "
                  "one base");
    }
  }

  // G(id_A..; f..) and G(f..; id_B..) for G of type [q/p].
  FinFn const& g_left(SetFunctorPQ const& G, std::size_t f) {
    auto const& C = *G.base();
    return G.act(G.diag_mor(C.identity(C.src(f)), f));
  }
  FinFn const& g_right(SetFunctorPQ const& G, std::size_t f) {
    auto const& C = *G.base();
    return G.act(G.diag_mor(f, C.identity(C.tgt(f))));
  }

}  // namespace

Verdict check_dinatural(DinatPQ const& alpha) {
  check_types(alpha.F, alpha.G);
  auto const& C = *alpha.F.base();
  Verdict     v;
  if (alpha.components.size() != C.num_objects()) {
    throw Error(ErrorKind::ShapeMismatch, "wrong number of components");
  }
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    auto const& c = alpha.components[a];
    if (c.dom() != alpha.F.fiber(alpha.F.diag(a)).size()
        || c.cod() != alpha.G.fiber(alpha.G.diag(a)).size()) {
      throw Error(ErrorKind::ShapeMismatch,
                  "component at " + C.object_name(a) + " has the wrong shape");
    }
  }
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) {
      continue;
    }
    std::size_t a = C.src(f), b = C.tgt(f);
    FinFn lhs = compose(g_left(alpha.G, f),
                        compose(alpha.components[a],
                                alpha.F.act(hex_lower(alpha.F, f))));
    FinFn rhs = compose(g_right(alpha.G, f),
                        compose(alpha.components[b],
                                alpha.F.act(hex_upper(alpha.F, f))));
    for (std::size_t y = 0; y < lhs.dom(); ++y) {
      if (lhs(y) != rhs(y)) {
        v.ok = false;
        v.violations.push_back(
            "hexagon fails at " + C.morphism_name(f) + " on "
            + alpha.F.fiber(alpha.F.diag(b, a)).label(y));
      }
    }
  }
  return v;
}

namespace {

  struct Problem {
    std::vector<std::size_t>  offset;
    std::vector<std::size_t>  sizes;
    std::vector<EqConstraint> constraints;
  };

  Problem dinat_problem(SetFunctorPQ const& F, SetFunctorPQ const& G) {
    check_types(F, G);
    auto const& C = *F.base();
    Problem     pr;
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      pr.offset.push_back(pr.sizes.size());
      std::size_t ng = G.fiber(G.diag(a)).size();
      for (std::size_t x = 0; x < F.fiber(F.diag(a)).size(); ++x) {
        pr.sizes.push_back(ng);
      }
    }
    for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
      if (C.is_identity(f)) {
        continue;
      }
      std::size_t  a = C.src(f), b = C.tgt(f);
      FinFn const& lo = F.act(hex_lower(F, f));
      FinFn const& up = F.act(hex_upper(F, f));
      for (std::size_t y = 0; y < lo.dom(); ++y) {
        pr.constraints.push_back({pr.offset[a] + lo(y),
                                  g_left(G, f),
                                  pr.offset[b] + up(y),
                                  g_right(G, f)});
      }
    }
    return pr;
  }

}  // namespace

std::vector<DinatPQ> enumerate_dinat(SetFunctorPQ const& F,
                                     SetFunctorPQ const& G) {
  auto                 pr   = dinat_problem(F, G);
  auto                 sols = enumerate_families(pr.sizes, pr.constraints);
  auto const&          C    = *F.base();
  std::vector<DinatPQ> out;
  out.reserve(sols.size());
  for (auto const& s : sols) {
    DinatPQ d{F, G, {}};
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      std::size_t              n = F.fiber(F.diag(a)).size();
      std::vector<std::size_t> t(s.begin() + pr.offset[a],
                                 s.begin() + pr.offset[a] + n);
      d.components.emplace_back(G.fiber(G.diag(a)).size(), std::move(t));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::size_t count_dinat(SetFunctorPQ const& F, SetFunctorPQ const& G) {
  auto pr = dinat_problem(F, G);
  return enumerate_families(pr.sizes, pr.constraints).size();
}

DinatPQ compose_with_nat(DinatPQ const&      theta,
                         NatTransf const&    alpha,
                         SetFunctorPQ const& F_prime) {
  check_types(F_prime, theta.G);
  auto const& C = *theta.F.base();
  DinatPQ     d{F_prime, theta.G, {}};
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    FinFn const& al = alpha.components[theta.F.diag(a)];
    if (al.cod() != theta.components[a].dom()) {
      throw Error(ErrorKind::ShapeMismatch, "natural does not end at F");
    }
    d.components.push_back(compose(theta.components[a], al));
  }
  return d;
}

DinatPQ compose_nat_with(NatTransf const&    beta,
                         DinatPQ const&      theta,
                         SetFunctorPQ const& G_prime) {
  check_types(theta.F, G_prime);
  auto const& C = *theta.F.base();
  DinatPQ     d{theta.F, G_prime, {}};
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    FinFn const& be = beta.components[theta.G.diag(a)];
    if (be.dom() != theta.components[a].cod()) {
      throw Error(ErrorKind::ShapeMismatch, "natural does not start at G");
    }
    d.components.push_back(compose(be, theta.components[a]));
  }
  return d;
}

DinatPQ identity_dinat(SetFunctorPQ const& F) {
  if (F.sig().p != F.sig().q) {
    throw Error(ErrorKind::IdentityUnavailable,
                "identity dinatural needs p == q, got "
                    + to_string(F.sig()));
  }
  DinatPQ d{F, F, {}};
  for (std::size_t a = 0; a < F.base()->num_objects(); ++a) {
    d.components.push_back(FinFn::identity(F.fiber(F.diag(a)).size()));
  }
  return d;
}

////////////////////////////////////////////////////////////////////////
// Wedges
////////////////////////////////////////////////////////////////////////

Verdict check_wedge(WedgePQ const& w, SetFunctorPQ const& D) {
  auto const& C = *D.base();
  Verdict     v;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    if (w.legs[a].dom() != w.apex.size()
        || w.legs[a].cod() != D.fiber(D.diag(a)).size()) {
      throw Error(ErrorKind::ShapeMismatch, "wedge leg has the wrong shape");
    }
  }
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) {
      continue;
    }
    std::size_t a = C.src(f), b = C.tgt(f);
    FinFn       lhs = compose(D.act(D.diag_mor(C.identity(a), f)), w.legs[a]);
    FinFn       rhs = compose(D.act(D.diag_mor(f, C.identity(b))), w.legs[b]);
    if (lhs != rhs) {
      v.ok = false;
      v.violations.push_back("wedge square fails at " + C.morphism_name(f));
    }
  }
  return v;
}

Verdict check_cowedge(CowedgePQ const& w, SetFunctorPQ const& D) {
  auto const& C = *D.base();
  Verdict     v;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    if (w.legs[a].cod() != w.apex.size()
        || w.legs[a].dom() != D.fiber(D.diag(a)).size()) {
      throw Error(ErrorKind::ShapeMismatch, "cowedge leg has the wrong shape");
    }
  }
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) {
      continue;
    }
    std::size_t a = C.src(f), b = C.tgt(f);
    FinFn       lhs = compose(w.legs[a], D.act(hex_lower(D, f)));
    FinFn       rhs = compose(w.legs[b], D.act(hex_upper(D, f)));
    if (lhs != rhs) {
      v.ok = false;
      v.violations.push_back("cowedge square fails at " + C.morphism_name(f));
    }
  }
  return v;
}

std::vector<WedgePQ> enumerate_wedges(FinSet const& x, SetFunctorPQ const& D) {
  auto const&               C = *D.base();
  std::size_t const         n = x.size();
  std::vector<std::size_t>  sizes;
  std::vector<EqConstraint> cs;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    for (std::size_t e = 0; e < n; ++e) {
      sizes.push_back(D.fiber(D.diag(a)).size());
    }
  }
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) {
      continue;
    }
    std::size_t a = C.src(f), b = C.tgt(f);
    for (std::size_t e = 0; e < n; ++e) {
      cs.push_back({a * n + e,
                    D.act(D.diag_mor(C.identity(a), f)),
                    b * n + e,
                    D.act(D.diag_mor(f, C.identity(b)))});
    }
  }
  auto                 sols = enumerate_families(sizes, cs);
  std::vector<WedgePQ> out;
  for (auto const& s : sols) {
    WedgePQ w{x, {}};
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      w.legs.emplace_back(
          D.fiber(D.diag(a)).size(),
          std::vector<std::size_t>(s.begin() + a * n, s.begin() + (a + 1) * n));
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<CowedgePQ> enumerate_cowedges(SetFunctorPQ const& D,
                                          FinSet const&       x) {
  auto const&               C = *D.base();
  std::vector<std::size_t>  offset, sizes;
  std::vector<EqConstraint> cs;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    offset.push_back(sizes.size());
    for (std::size_t e = 0; e < D.fiber(D.diag(a)).size(); ++e) {
      sizes.push_back(x.size());
    }
  }
  FinFn id = FinFn::identity(x.size());
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) {
      continue;
    }
    std::size_t  a = C.src(f), b = C.tgt(f);
    FinFn const& lo = D.act(hex_lower(D, f));
    FinFn const& up = D.act(hex_upper(D, f));
    for (std::size_t y = 0; y < lo.dom(); ++y) {
      cs.push_back({offset[a] + lo(y), id, offset[b] + up(y), id});
    }
  }
  auto                   sols = enumerate_families(sizes, cs);
  std::vector<CowedgePQ> out;
  for (auto const& s : sols) {
    CowedgePQ w{x, {}};
    for (std::size_t a = 0; a < C.num_objects(); ++a) {
      std::size_t n = D.fiber(D.diag(a)).size();
      w.legs.emplace_back(x.size(),
                          std::vector<std::size_t>(s.begin() + offset[a],
                                                   s.begin() + offset[a] + n));
    }
    out.push_back(std::move(w));
  }
  return out;
}

WedgePQ precompose(WedgePQ const& w, FinFn const& h, FinSet const& x_prime) {
  WedgePQ out{x_prime, {}};
  for (auto const& l : w.legs) {
    out.legs.push_back(compose(l, h));
  }
  return out;
}

WedgePQ postcompose(NatTransf const& alpha, WedgePQ const& w,
                    SetFunctorPQ const& D) {
  WedgePQ out{w.apex, {}};
  for (std::size_t a = 0; a < w.legs.size(); ++a) {
    out.legs.push_back(compose(alpha.components[D.diag(a)], w.legs[a]));
  }
  return out;
}

CowedgePQ postcompose(CowedgePQ const& w, FinFn const& h,
                      FinSet const& x_prime) {
  CowedgePQ out{x_prime, {}};
  for (auto const& l : w.legs) {
    out.legs.push_back(compose(h, l));
  }
  return out;
}

}  // namespace hace
