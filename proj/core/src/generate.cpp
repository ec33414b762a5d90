#include "hace/generate.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "hace/apps.hpp"
#include "hace/config.hpp"
#include "hace/error.hpp"
#include "hace/kusarigama.hpp"
#include "util.hpp"

namespace hace {

std::size_t draw(Rng& rng, std::size_t n) {
  return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

namespace {

  char const* const kNames[] = {"a", "b", "c", "d", "e", "f", "g", "h"};

  std::vector<std::string> names(std::size_t n, std::string const& prefix = "") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(prefix.empty() && i < 8 ? kNames[i] : prefix + std::to_string(i));
    }
    return out;
  }

  GeneratedCategory one(CatPtr c, std::string name, CategoryShape shape,
                        CategoryDecl d) {
    GeneratedCategory g;
    g.cat   = std::move(c);
    g.name  = std::move(name);
    g.shape = shape;
    g.decls.push_back(std::move(d));
    return g;
  }

  bool associative(std::vector<std::vector<std::size_t>> const& mul) {
    std::size_t const n = mul.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) {
          if (mul[mul[a][b]][c] != mul[a][mul[b][c]]) {
            return false;
          }
        }
      }
    }
    return true;
  }

}  // namespace

GeneratedCategory random_poset(Rng& rng, Profile const& prof, std::string name) {
  std::size_t  n = 1 + draw(rng, std::max<std::size_t>(prof.max_objects, 1));
  CategoryDecl d;
  d.name    = name;
  d.kind    = CategoryDecl::Kind::poset;
  d.objects = names(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (draw(rng, 3) == 0) {
        d.le.emplace_back(d.objects[i], d.objects[j]);
      }
    }
  }
  auto c = build_poset(name, PosetData{d.objects, d.le});
  return one(c, name, CategoryShape::poset, d);
}

GeneratedCategory random_monoid(Rng& rng, Profile const& prof, std::string name) {
  std::size_t n = 1 + draw(rng, std::min<std::size_t>(4, std::max<std::size_t>(prof.max_morphisms, 1)));
  std::vector<std::vector<std::size_t>> mul;
  bool                                  found = false;
  for (int attempt = 0; attempt < 200 && !found; ++attempt) {
    mul.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        mul[a][b] = a == 0 ? b : b == 0 ? a : draw(rng, n);
      }
    }
    found = associative(mul);
  }
  if (!found) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        mul[a][b] = (a + b) % n;
      }
    }
  }
  CategoryDecl d;
  d.name    = name;
  d.kind    = CategoryDecl::Kind::monoid;
  d.objects = {"e", "x", "y", "z"};
  d.objects.resize(n);
  d.unit = "e";
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::string> row{d.objects[a]};
    for (std::size_t b = 0; b < n; ++b) {
      row.push_back(d.objects[mul[a][b]]);
    }
    d.rows.push_back(std::move(row));
  }
  auto c = build_monoid(name, MonoidData{d.objects, d.unit, mul});
  return one(c, name, CategoryShape::monoid, d);
}

GeneratedCategory random_graph(Rng& rng, Profile const& prof, std::string name) {
  std::size_t  n = 1 + draw(rng, std::max<std::size_t>(prof.max_objects, 1));
  CategoryDecl d;
  d.name    = name;
  d.kind    = CategoryDecl::Kind::graph;
  d.objects = names(n);
  std::size_t k = n < 2 ? 0 : draw(rng, n + 2);
  for (std::size_t e = 0; e < k; ++e) {
    std::size_t i = draw(rng, n - 1);
    std::size_t j = i + 1 + draw(rng, n - 1 - i);
    d.arrows.push_back({"f" + std::to_string(e), d.objects[i], d.objects[j]});
  }
  while (true) {
    GraphData g{d.objects, {}};
    for (auto const& e : d.arrows) {
      g.edges.push_back({e.name, e.src, e.tgt});
    }
    auto c = build_free(name, g);
    if (c->num_morphisms() <= prof.max_morphisms || d.arrows.empty()) {
      return one(c, name, CategoryShape::graph, d);
    }
    d.arrows.pop_back();
  }
}

namespace {

  GeneratedCategory small_part(Rng& rng, std::string name) {
    Profile small;
    small.max_objects   = 2;
    small.max_morphisms = 3;
    return draw(rng, 2) == 0 ? random_poset(rng, small, std::move(name))
                             : random_monoid(rng, small, std::move(name));
  }

}  // namespace

GeneratedCategory random_category(Rng& rng, Profile const& prof, std::string name) {
  std::size_t kind = draw(rng, 5);
  if (kind >= 3 && (prof.max_objects < 2 || prof.max_morphisms < 4)) {
    kind = 0;
  }
  switch (kind) {
    case 0: return random_poset(rng, prof, name);
    case 1: return random_monoid(rng, prof, name);
    case 2: return random_graph(rng, prof, name);
    default: break;
  }
  for (int attempt = 0;; ++attempt) {
    auto a = small_part(rng, name + "_a");
    auto b = small_part(rng, name + "_b");
    bool prod = kind == 3;
    std::size_t no = prod ? a.cat->num_objects() * b.cat->num_objects()
                          : a.cat->num_objects() + b.cat->num_objects();
    std::size_t nm = prod ? a.cat->num_morphisms() * b.cat->num_morphisms()
                          : a.cat->num_morphisms() + b.cat->num_morphisms();
    if ((no > prof.max_objects || nm > prof.max_morphisms) && attempt < 32) {
      continue;
    }
    if (no > prof.max_objects || nm > prof.max_morphisms) {
      return random_poset(rng, prof, name);
    }
    GeneratedCategory g;
    g.name  = name;
    g.shape = prod ? CategoryShape::product : CategoryShape::coproduct;
    g.cat   = prod ? FinCat::product({a.cat, b.cat}, name)
                   : coproduct({a.cat, b.cat}, name);
    g.decls = {a.decls[0], b.decls[0]};
    CategoryDecl d;
    d.name  = name;
    d.kind  = prod ? CategoryDecl::Kind::product : CategoryDecl::Kind::coproduct;
    d.parts = {a.name, b.name};
    g.decls.push_back(d);
    return g;
  }
}

GeneratedCategory random_lattice(Rng& rng, std::size_t max_objects, std::string name) {
  for (int attempt = 0;; ++attempt) {
    std::size_t  inner = max_objects < 2 ? 0 : draw(rng, max_objects - 1);
    CategoryDecl d;
    d.name    = name;
    d.kind    = CategoryDecl::Kind::poset;
    d.objects = names(inner);
    d.objects.insert(d.objects.begin(), "bot");
    d.objects.push_back("top");
    for (std::size_t i = 1; i + 1 < d.objects.size(); ++i) {
      d.le.emplace_back("bot", d.objects[i]);
      d.le.emplace_back(d.objects[i], "top");
      for (std::size_t j = i + 1; j + 1 < d.objects.size(); ++j) {
        if (draw(rng, 3) == 0) {
          d.le.emplace_back(d.objects[i], d.objects[j]);
        }
      }
    }
    if (inner == 0) {
      d.le.emplace_back("bot", "top");
    }
    auto c = build_poset(name, PosetData{d.objects, d.le});
    try {
      as_lattice(c);
    } catch (Error const& e) {
      if (e.kind() != ErrorKind::NotALattice || attempt > 64) {
        throw;
      }
      continue;
    }
    return one(c, name, CategoryShape::poset, d);
  }
}

VarianceSig random_sig(Rng& rng, Profile const& prof) {
  if (prof.sig) {
    return *prof.sig;
  }
  std::size_t a = 1 + draw(rng, std::max<std::size_t>(prof.max_arity, 1));
  std::size_t p = draw(rng, a + 1);
  return {p, a - p};
}

////////////////////////////////////////////////////////////////////////
// Functors
////////////////////////////////////////////////////////////////////////

namespace {

  SetFunctorPQ sum_of(CatPtr const& c, VarianceSig sig,
                      std::vector<SetFunctorPQ> parts) {
    auto ps = std::make_shared<std::vector<SetFunctorPQ> const>(std::move(parts));
    return SetFunctorPQ::lazy(
        c,
        sig,
        [ps](Tuple const& t) {
          std::vector<std::string> labels;
          for (std::size_t k = 0; k < ps->size(); ++k) {
            for (auto const& l : (*ps)[k].fiber(t).labels()) {
              labels.push_back(std::to_string(k) + "." + l);
            }
          }
          return FinSet(std::move(labels));
        },
        [ps](Tuple const& m) {
          std::vector<std::size_t> table;
          std::size_t              off = 0;
          std::vector<FinFn>       fns;
          for (auto const& P : *ps) {
            fns.push_back(P.act(m));
          }
          for (auto const& f : fns) {
            for (std::size_t x = 0; x < f.dom(); ++x) {
              table.push_back(off + f(x));
            }
            off += f.cod();
          }
          return FinFn(off, std::move(table));
        });
  }

  SetFunctorPQ seed_functor(Rng& rng, CatPtr const& c, VarianceSig sig) {
    std::size_t const         no = c->num_objects();
    std::vector<SetFunctorPQ> blocks;
    std::size_t               nb = 1 + draw(rng, 2);
    for (std::size_t b = 0; b < nb; ++b) {
      std::vector<Slotted> pieces;
      std::size_t          np = 1 + draw(rng, 2);
      for (std::size_t k = 0; k < np; ++k) {
        std::size_t kind = draw(rng, 4);
        if (kind == 1 && sig.p > 0) {
          pieces.push_back({contravariant_representable(c, draw(rng, no)),
                            {draw(rng, sig.p)}});
        } else if (kind == 2 && sig.q > 0) {
          pieces.push_back({covariant_representable(c, draw(rng, no)),
                            {sig.p + draw(rng, sig.q)}});
        } else if (kind == 3 && sig.p > 0 && sig.q > 0) {
          pieces.push_back({hom_functor(c), {draw(rng, sig.p), sig.p + draw(rng, sig.q)}});
        } else {
          pieces.push_back(
              {constant_functor(c, {0, 0}, FinSet::range(1 + draw(rng, 2), "c")), {}});
        }
      }
      blocks.push_back(product_integrand(c, sig, pieces));
    }
    return blocks.size() == 1 ? blocks[0] : sum_of(c, sig, blocks);
  }

  struct Gen {
    std::size_t slot, morphism, src, tgt;  // src, tgt: tuple codes
    Tuple       at;
    FinFn       fn;
  };

  struct Find {
    std::vector<std::size_t> parent;
    std::size_t operator()(std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    }
    bool unite(std::size_t a, std::size_t b) {
      a = (*this)(a);
      b = (*this)(b);
      if (a == b) {
        return false;
      }
      if (b < a) {
        std::swap(a, b);
      }
      parent[b] = a;
      return true;
    }
  };

  SetFunctorPQ shrink(Rng& rng, SetFunctorPQ const& F, Profile const& prof) {
    CatPtr const&     c  = F.base();
    VarianceSig const sig = F.sig();
    std::size_t const n  = sig.arity();
    std::size_t const no = c->num_objects();
    std::uint64_t     nt = pow_sat(no, n);
    check_cap(nt, "object tuples");
    std::vector<FinSet>      fibers;
    std::vector<std::size_t> off{0};
    for (std::size_t code = 0; code < nt; ++code) {
      fibers.push_back(F.fiber(tuple_decode(code, no, n)));
      check_cap(off.back() + fibers.back().size(), "seed functor elements");
      off.push_back(off.back() + fibers.back().size());
    }
    std::size_t const total = off.back();
    std::vector<Gen>  gens;
    auto              gm = generating_morphisms(*c);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto m : gm) {
        std::size_t s = i < sig.p ? c->tgt(m) : c->src(m);
        for (std::size_t code = 0; code < nt; ++code) {
          Tuple t = tuple_decode(code, no, n);
          if (t[i] != s) {
            continue;
          }
          Tuple mt = detail::identity_tuple(*c, t);
          mt[i]    = m;
          Tuple tt = t;
          tt[i]    = i < sig.p ? c->src(m) : c->tgt(m);
          gens.push_back({i, m, code, tuple_code(tt, no), t, F.act(mt)});
        }
      }
    }

    // Random subfunctor: a random subset closed under the actions.
    std::vector<bool> kept(total, true);
    if (draw(rng, 4) == 0) {
      for (std::size_t x = 0; x < total; ++x) {
        kept[x] = draw(rng, 2) == 0;
      }
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto const& g : gens) {
          for (std::size_t x = 0; x < g.fn.dom(); ++x) {
            std::size_t y = off[g.tgt] + g.fn(x);
            if (kept[off[g.src] + x] && !kept[y]) {
              kept[y] = true;
              changed = true;
            }
          }
        }
      }
    }

    Find uf;
    uf.parent.resize(total);
    for (std::size_t x = 0; x < total; ++x) {
      uf.parent[x] = x;
    }
    auto close = [&] {
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto const& g : gens) {
          std::map<std::size_t, std::size_t> image_of;
          for (std::size_t x = 0; x < g.fn.dom(); ++x) {
            if (!kept[off[g.src] + x]) {
              continue;
            }
            std::size_t r = uf(off[g.src] + x);
            std::size_t y = off[g.tgt] + g.fn(x);
            auto [it, fresh] = image_of.emplace(r, y);
            if (!fresh && uf.unite(it->second, y)) {
              changed = true;
            }
          }
        }
      }
    };
    auto classes = [&](std::size_t code) {
      std::vector<std::size_t> reps;
      for (std::size_t x = off[code]; x < off[code + 1]; ++x) {
        if (kept[x] && uf(x) == x) {
          reps.push_back(x);
        }
      }
      return reps;
    };
    auto merge_in = [&](std::size_t code) {
      auto reps = classes(code);
      if (reps.size() < 2) {
        return;
      }
      std::size_t i = draw(rng, reps.size());
      std::size_t j = draw(rng, reps.size() - 1);
      if (j >= i) {
        ++j;
      }
      uf.unite(reps[i], reps[j]);
      close();
    };
    if (draw(rng, 3) == 0) {
      merge_in(draw(rng, nt));
    }
    while (true) {
      std::vector<std::size_t> big;
      for (std::size_t code = 0; code < nt; ++code) {
        if (classes(code).size() > prof.max_fiber) {
          big.push_back(code);
        }
      }
      if (big.empty()) {
        break;
      }
      merge_in(big[draw(rng, big.size())]);
    }

    std::vector<FinSet>      out;
    std::vector<std::size_t> index(total, 0);
    for (std::size_t code = 0; code < nt; ++code) {
      auto                     reps = classes(code);
      std::vector<std::string> labels;
      for (std::size_t k = 0; k < reps.size(); ++k) {
        labels.push_back(fibers[code].label(reps[k] - off[code]));
        index[reps[k]] = k;
      }
      out.push_back(FinSet(std::move(labels)));
    }
    std::vector<SlotAction> actions;
    for (auto const& g : gens) {
      std::vector<std::size_t> table;
      for (auto r : classes(g.src)) {
        table.push_back(index[uf(off[g.tgt] + g.fn(r - off[g.src]))]);
      }
      actions.push_back({g.slot, g.morphism, g.at, FinFn(out[g.tgt].size(), std::move(table))});
    }
    return functor_from_slots(c, sig, std::move(out), actions);
  }

}  // namespace

SetFunctorPQ random_functor(Rng& rng, CatPtr const& c, VarianceSig sig,
                            Profile const& prof) {
  for (std::size_t attempt = 0; attempt < prof.max_retries; ++attempt) {
    try {
      return shrink(rng, seed_functor(rng, c, sig), prof);
    } catch (Error const& e) {
      switch (e.kind()) {
        case ErrorKind::SizeCapExceeded:
        case ErrorKind::InterchangeFailure:
        case ErrorKind::NonFunctorialSlot: continue;
        default: throw;
      }
    }
  }
  throw Error(ErrorKind::GenerationExhausted,
              "no functor of sig " + to_string(sig) + " on " + c->name() + " after "
                  + std::to_string(prof.max_retries) + " attempts");
}

CatSpec generate(std::uint64_t seed, Profile const& prof) {
  Rng         rng(seed);
  auto        gc  = random_category(rng, prof, "C");
  VarianceSig sig = random_sig(rng, prof);
  auto        F   = random_functor(rng, gc.cat, sig, prof);
  auto        G   = random_functor(rng, gc.cat, sig.swapped(), prof);
  CatSpec     spec;
  for (auto const& d : gc.decls) {
    spec.add(d);
  }
  spec.add(export_functor(F, "F", gc.name));
  spec.add(export_functor(G, "G", gc.name));
  spec.add(JobDecl{"end", {"F"}, 0});
  spec.add(JobDecl{"coend", {"F"}, 0});
  spec.add(JobDecl{"dinat", {"F", "G"}, 0});
  spec.add(JobDecl{"kusarigama", {"F", "G"}, 0});
  spec.add(JobDecl{"check-all", {}, 0});
  return spec;
}

}  // namespace hace
