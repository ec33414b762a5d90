#include "hace/setops.hpp"

#include <algorithm>

#include "hace/config.hpp"
#include "hace/error.hpp"

namespace hace {

Diagram diagram_of(SetFunctor const& D) {
  auto const& C = *D.domain();
  Diagram     d;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    d.names.push_back(C.object_name(a));
    d.sets.push_back(D.fiber(a));
  }
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    if (!C.is_identity(f)) {
      d.arrows.push_back({C.src(f), C.tgt(f), D.act(f)});
    }
  }
  return d;
}

std::string family_label(std::vector<std::string> const& names,
                         std::vector<std::string> const& labels) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    s += (i == 0 ? "" : ", ") + names[i] + ":" + labels[i];
  }
  return s + "}";
}

SubResult equalizer(FinSet const& dom, FinFn const& f, FinFn const& g) {
  if (f.dom() != dom.size() || g.dom() != dom.size() || f.cod() != g.cod()) {
    throw Error(ErrorKind::ShapeMismatch, "equalizer of unparallel maps");
  }
  std::vector<std::string> labels;
  std::vector<std::size_t> incl;
  for (std::size_t x = 0; x < dom.size(); ++x) {
    if (f(x) == g(x)) {
      labels.push_back(dom.label(x));
      incl.push_back(x);
    }
  }
  return {FinSet(std::move(labels)), {FinFn(dom.size(), std::move(incl))}};
}

namespace {
  QuotResult quotient(UnionFind& uf, std::vector<std::string> const& labels,
                      std::vector<std::size_t> const& offsets,
                      std::vector<std::size_t> const& sizes) {
    auto                     cls = uf.class_index();
    std::size_t              nc  = uf.num_classes();
    std::vector<std::string> reps(nc);
    std::vector<bool>        seen(nc, false);
    for (std::size_t x = 0; x < cls.size(); ++x) {
      if (!seen[cls[x]]) {
        seen[cls[x]] = true;
        reps[cls[x]] = "⟦" + labels[x] + "⟧";
      }
    }
    QuotResult r{FinSet(std::move(reps)), {}};
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      std::vector<std::size_t> t(cls.begin() + offsets[j],
                                 cls.begin() + offsets[j] + sizes[j]);
      r.legs.emplace_back(nc, std::move(t));
    }
    return r;
  }
}  // namespace

QuotResult coequalizer(FinSet const& cod, FinFn const& f, FinFn const& g) {
  if (f.dom() != g.dom() || f.cod() != cod.size() || g.cod() != cod.size()) {
    throw Error(ErrorKind::ShapeMismatch, "coequalizer of unparallel maps");
  }
  UnionFind uf(cod.size());
  for (std::size_t x = 0; x < f.dom(); ++x) {
    uf.unite(f(x), g(x));
  }
  return quotient(uf, cod.labels(), {0}, {cod.size()});
}

SubResult limit(Diagram const& d) {
  std::size_t const         n = d.sets.size();
  std::vector<std::size_t>  sizes;
  std::vector<EqConstraint> cs;
  for (auto const& s : d.sets) {
    sizes.push_back(s.size());
  }
  for (auto const& a : d.arrows) {
    cs.push_back({a.tgt, FinFn::identity(d.sets[a.tgt].size()), a.src, a.fn});
  }
  auto                     sols = enumerate_families(sizes, cs);
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> legs(n);
  for (auto const& s : sols) {
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < n; ++j) {
      parts.push_back(d.sets[j].label(s[j]));
      legs[j].push_back(s[j]);
    }
    labels.push_back(family_label(d.names, parts));
  }
  SubResult r{FinSet(std::move(labels)), {}};
  for (std::size_t j = 0; j < n; ++j) {
    r.legs.emplace_back(d.sets[j].size(), std::move(legs[j]));
  }
  return r;
}

QuotResult colimit(Diagram const& d) {
  std::size_t const        n = d.sets.size();
  std::vector<std::size_t> offsets, sizes;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < n; ++j) {
    offsets.push_back(labels.size());
    sizes.push_back(d.sets[j].size());
    for (auto const& l : d.sets[j].labels()) {
      labels.push_back(d.names[j] + ":" + l);
    }
  }
  check_cap(labels.size(), "colimit coproduct");
  UnionFind uf(labels.size());
  for (auto const& a : d.arrows) {
    for (std::size_t x = 0; x < a.fn.dom(); ++x) {
      uf.unite(offsets[a.src] + x, offsets[a.tgt] + a.fn(x));
    }
  }
  return quotient(uf, labels, offsets, sizes);
}

SubResult weighted_limit(SetFunctor const& W, SetFunctor const& D) {
  auto const& C    = *W.domain();
  auto        nats = enumerate_nat(W, D);
  std::vector<std::string> names, labels;
  for (std::size_t j = 0; j < C.num_objects(); ++j) {
    names.push_back(C.object_name(j));
  }
  std::vector<FinSet>                   homs;
  std::vector<std::vector<std::size_t>> legs(C.num_objects());
  for (std::size_t j = 0; j < C.num_objects(); ++j) {
    homs.push_back(hom_set(W.fiber(j), D.fiber(j)));
  }
  for (auto const& a : nats) {
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < C.num_objects(); ++j) {
      std::size_t k = index_of_function(a.components[j]);
      parts.push_back(homs[j].label(k));
      legs[j].push_back(k);
    }
    labels.push_back(family_label(names, parts));
  }
  SubResult r{FinSet(std::move(labels)), {}};
  for (std::size_t j = 0; j < C.num_objects(); ++j) {
    r.legs.emplace_back(homs[j].size(), std::move(legs[j]));
  }
  return r;
}

QuotResult weighted_colimit(SetFunctor const& W, SetFunctor const& D) {
  auto const& C = *D.domain();
  if (W.domain()->num_objects() != C.num_objects()
      || W.domain()->num_morphisms() != C.num_morphisms()) {
    throw Error(ErrorKind::ShapeMismatch, "weight on a different domain");
  }
  std::vector<std::size_t> offsets, sizes;
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < C.num_objects(); ++j) {
    offsets.push_back(labels.size());
    std::size_t nw = W.fiber(j).size(), nd = D.fiber(j).size();
    check_cap(labels.size() + nw * nd, "weighted colimit coproduct");
    sizes.push_back(nw * nd);
    for (std::size_t w = 0; w < nw; ++w) {
      for (std::size_t x = 0; x < nd; ++x) {
        labels.push_back(C.object_name(j) + ":("
                         + W.fiber(j).label(w) + "," + D.fiber(j).label(x)
                         + ")");
      }
    }
  }
  UnionFind uf(labels.size());
  for (std::size_t u = 0; u < C.num_morphisms(); ++u) {
    if (C.is_identity(u)) {
      continue;
    }
    std::size_t  i = C.src(u), j = C.tgt(u);
    FinFn const& Wu = W.act(u);  // W(j) -> W(i)
    FinFn const& Du = D.act(u);  // D(i) -> D(j)
    std::size_t  ndi = D.fiber(i).size(), ndj = D.fiber(j).size();
    for (std::size_t w = 0; w < W.fiber(j).size(); ++w) {
      for (std::size_t x = 0; x < ndi; ++x) {
        uf.unite(offsets[i] + Wu(w) * ndi + x, offsets[j] + w * ndj + Du(x));
      }
    }
  }
  return quotient(uf, labels, offsets, sizes);
}

FinFn function_at(std::size_t index, std::size_t nx, std::size_t ny) {
  std::vector<std::size_t> t(nx);
  for (std::size_t i = nx; i-- > 0;) {
    t[i] = index % ny;
    index /= ny;
  }
  return FinFn(ny, std::move(t));
}

std::size_t index_of_function(FinFn const& f) {
  std::size_t k = 0;
  for (auto y : f.table()) {
    k = k * f.cod() + y;
  }
  return k;
}

FinSet hom_set(FinSet const& x, FinSet const& y) {
  std::uint64_t n = pow_sat(y.size(), x.size());
  check_cap(n, "function set");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    labels.push_back(to_string(function_at(k, x.size(), y.size()), x, y));
  }
  return FinSet(std::move(labels));
}

FinSet copower(FinSet const& s, FinSet const& x) {
  return product({s, x});
}

FinSet power(FinSet const& s, FinSet const& x) {
  return hom_set(s, x);
}

////////////////////////////////////////////////////////////////////////
// Family search
////////////////////////////////////////////////////////////////////////

namespace {

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  struct Side {
    std::size_t              self;
    std::size_t              other;
    FinFn const*             h_self;
    FinFn const*             h_other;
    std::vector<std::size_t> const* inv_other;  // null unless injective
  };

  class Search {
   public:
    Search(std::vector<std::size_t> const&  sizes,
           std::vector<EqConstraint> const& cs)
        : _sizes(sizes), _val(sizes.size(), kUnset), _touch(sizes.size()) {
      _inv.resize(cs.size() * 2);
      for (std::size_t k = 0; k < cs.size(); ++k) {
        auto const& c = cs[k];
        if (c.h1.dom() != sizes[c.v1] || c.h2.dom() != sizes[c.v2]
            || c.h1.cod() != c.h2.cod()) {
          throw Error(ErrorKind::ShapeMismatch, "ill-shaped constraint");
        }
        bool inj1 = make_inverse(c.h1, _inv[2 * k]);
        bool inj2 = make_inverse(c.h2, _inv[2 * k + 1]);
        _touch[c.v1].push_back(
            {c.v1, c.v2, &c.h1, &c.h2, inj2 ? &_inv[2 * k + 1] : nullptr});
        _touch[c.v2].push_back(
            {c.v2, c.v1, &c.h2, &c.h1, inj1 ? &_inv[2 * k] : nullptr});
      }
      _limit = size_cap();
    }

    std::vector<std::vector<std::size_t>> run() {
      recurse(0);
      return std::move(_out);
    }

   private:
    static bool make_inverse(FinFn const& h, std::vector<std::size_t>& inv) {
      inv.assign(h.cod(), kUnset);
      for (std::size_t x = 0; x < h.dom(); ++x) {
        if (inv[h(x)] != kUnset) {
          inv.clear();
          return false;
        }
        inv[h(x)] = x;
      }
      return true;
    }

    // Assigns v := x and propagates; records assignments on the trail.
    bool assign(std::size_t v, std::size_t x) {
      std::vector<std::size_t> queue{v};
      _val[v] = x;
      _trail.push_back(v);
      while (!queue.empty()) {
        std::size_t u = queue.back();
        queue.pop_back();
        for (auto const& s : _touch[u]) {
          std::size_t c = (*s.h_self)(_val[u]);
          if (_val[s.other] != kUnset) {
            if ((*s.h_other)(_val[s.other]) != c) {
              return false;
            }
          } else if (s.inv_other != nullptr) {
            std::size_t y = (*s.inv_other)[c];
            if (y == kUnset) {
              return false;
            }
            _val[s.other] = y;
            _trail.push_back(s.other);
            queue.push_back(s.other);
          }
        }
      }
      return true;
    }

    void undo(std::size_t mark) {
      while (_trail.size() > mark) {
        _val[_trail.back()] = kUnset;
        _trail.pop_back();
      }
    }

    void recurse(std::size_t from) {
      while (from < _val.size() && _val[from] != kUnset) {
        ++from;
      }
      if (from == _val.size()) {
        if (_out.size() >= _limit) {
          throw Error(ErrorKind::SizeCapExceeded,
                      "family enumeration exceeds the cap of "
                          + std::to_string(_limit));
        }
        _out.push_back(_val);
        return;
      }
      if (++_nodes > 64 * _limit) {
        throw Error(ErrorKind::SizeCapExceeded,
                    "family search exceeds its node budget");
      }
      for (std::size_t x = 0; x < _sizes[from]; ++x) {
        std::size_t mark = _trail.size();
        if (assign(from, x)) {
          recurse(from + 1);
        }
        undo(mark);
      }
    }

    std::vector<std::size_t> const&       _sizes;
    std::vector<std::size_t>              _val;
    std::vector<std::vector<Side>>        _touch;
    std::vector<std::vector<std::size_t>> _inv;
    std::vector<std::size_t>              _trail;
    std::vector<std::vector<std::size_t>> _out;
    std::uint64_t                         _limit = 0;
    std::uint64_t                         _nodes = 0;
  };

}  // namespace

std::vector<std::vector<std::size_t>>
enumerate_families(std::vector<std::size_t> const&  domain_sizes,
                   std::vector<EqConstraint> const& constraints) {
  Search s(domain_sizes, constraints);
  return s.run();
}

bool legs_form_cone(Diagram const& d, SubResult const& r) {
  for (auto const& a : d.arrows) {
    if (compose(a.fn, r.legs[a.src]) != r.legs[a.tgt]) {
      return false;
    }
  }
  return true;
}

bool legs_form_cocone(Diagram const& d, QuotResult const& r) {
  for (auto const& a : d.arrows) {
    if (compose(r.legs[a.tgt], a.fn) != r.legs[a.src]) {
      return false;
    }
  }
  return true;
}

}  // namespace hace
