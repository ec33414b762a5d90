#include "hace/fincat.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "hace/config.hpp"
#include "hace/finset.hpp"

namespace hace {

FinCat::FinCat(std::string              name,
               std::vector<std::string> objects,
               std::vector<Morphism>    morphisms,
               std::vector<std::size_t> identities,
               std::vector<std::size_t> composition)
    : _name(std::move(name)),
      _num_objects(objects.size()),
      _num_morphisms(morphisms.size()),
      _objects(std::move(objects)),
      _morphisms(std::move(morphisms)),
      _identities(std::move(identities)),
      _composition(std::move(composition)) {
  _hom.assign(_num_objects * _num_objects, {});
  for (std::size_t f = 0; f < _num_morphisms; ++f) {
    _hom[_morphisms[f].src * _num_objects + _morphisms[f].tgt].push_back(f);
  }
  for (std::size_t a = 0; a < _num_objects; ++a) {
    _object_index.emplace(_objects[a], a);
  }
  for (std::size_t f = 0; f < _num_morphisms; ++f) {
    _morphism_index.emplace(_morphisms[f].name, f);
  }
}

CatPtr FinCat::product(std::vector<CatPtr> factors, std::string name) {
  auto c = std::shared_ptr<FinCat>(new FinCat());
  std::uint64_t no = 1, nm = 1;
  for (auto const& f : factors) {
    c->_obj_radix.push_back(f->num_objects());
    c->_mor_radix.push_back(f->num_morphisms());
    no = mul_sat(no, f->num_objects());
    nm = mul_sat(nm, f->num_morphisms());
  }
  check_cap(nm, "product category morphisms");
  if (name.empty()) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      name += (i == 0 ? "" : "x") + factors[i]->name();
    }
    if (factors.empty()) {
      name = "pt";
    }
  }
  c->_name             = std::move(name);
  c->_num_objects      = no;
  c->_num_morphisms    = nm;
  c->_is_empty_product = factors.empty();
  c->_factors          = std::move(factors);
  return c;
}

std::vector<std::size_t> FinCat::obj_digits(std::size_t a) const {
  return decode(a, _obj_radix);
}

std::vector<std::size_t> FinCat::mor_digits(std::size_t f) const {
  return decode(f, _mor_radix);
}

std::string FinCat::object_name(std::size_t a) const {
  if (!is_product()) {
    return _objects[a];
  }
  auto                     d = obj_digits(a);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    parts.push_back(_factors[i]->object_name(d[i]));
  }
  return tuple_label(parts);
}

std::string FinCat::morphism_name(std::size_t f) const {
  if (!is_product()) {
    return _morphisms[f].name;
  }
  auto                     d = mor_digits(f);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < d.size(); ++i) {
    parts.push_back(_factors[i]->morphism_name(d[i]));
  }
  return tuple_label(parts);
}

std::size_t FinCat::src(std::size_t f) const {
  if (!is_product()) {
    return _morphisms[f].src;
  }
  auto d = mor_digits(f);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = _factors[i]->src(d[i]);
  }
  return encode(d, _obj_radix);
}

std::size_t FinCat::tgt(std::size_t f) const {
  if (!is_product()) {
    return _morphisms[f].tgt;
  }
  auto d = mor_digits(f);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = _factors[i]->tgt(d[i]);
  }
  return encode(d, _obj_radix);
}

std::size_t FinCat::identity(std::size_t a) const {
  if (!is_product()) {
    return _identities[a];
  }
  auto d = obj_digits(a);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = _factors[i]->identity(d[i]);
  }
  return encode(d, _mor_radix);
}

std::size_t FinCat::compose(std::size_t g, std::size_t f) const {
  if (!is_product()) {
    return _composition[g * _num_morphisms + f];
  }
  auto dg = mor_digits(g);
  auto df = mor_digits(f);
  for (std::size_t i = 0; i < dg.size(); ++i) {
    std::size_t h = _factors[i]->compose(dg[i], df[i]);
    if (h == npos) {
      return npos;
    }
    dg[i] = h;
  }
  return encode(dg, _mor_radix);
}

std::vector<std::size_t> FinCat::hom(std::size_t a, std::size_t b) const {
  if (!is_product()) {
    return _hom[a * _num_objects + b];
  }
  auto da = obj_digits(a);
  auto db = obj_digits(b);
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t i = 0; i < da.size(); ++i) {
    parts.push_back(_factors[i]->hom(da[i], db[i]));
    if (parts.back().empty()) {
      return {};
    }
  }
  std::vector<std::size_t> result;
  std::vector<std::size_t> idx(parts.size(), 0), digits(parts.size());
  while (true) {
    for (std::size_t i = 0; i < parts.size(); ++i) {
      digits[i] = parts[i][idx[i]];
    }
    result.push_back(encode(digits, _mor_radix));
    std::size_t i = parts.size();
    while (i-- > 0) {
      if (++idx[i] < parts[i].size()) {
        break;
      }
      idx[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) {
      break;
    }
  }
  return result;
}

std::optional<std::size_t> FinCat::find_object(std::string const& name) const {
  if (!is_product()) {
    auto it = _object_index.find(name);
    if (it == _object_index.end()) {
      return std::nullopt;
    }
    return it->second;
  }
  for (std::size_t a = 0; a < _num_objects; ++a) {
    if (object_name(a) == name) {
      return a;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t>
FinCat::find_morphism(std::string const& name) const {
  if (!is_product()) {
    auto it = _morphism_index.find(name);
    if (it == _morphism_index.end()) {
      return std::nullopt;
    }
    return it->second;
  }
  for (std::size_t f = 0; f < _num_morphisms; ++f) {
    if (morphism_name(f) == name) {
      return f;
    }
  }
  return std::nullopt;
}

CatPtr FinCat::materialize() const {
  check_cap(mul_sat(_num_morphisms, _num_morphisms), "composition table");
  std::vector<std::string> objects;
  for (std::size_t a = 0; a < _num_objects; ++a) {
    objects.push_back(object_name(a));
  }
  std::vector<Morphism> morphisms;
  for (std::size_t f = 0; f < _num_morphisms; ++f) {
    morphisms.push_back({morphism_name(f), src(f), tgt(f)});
  }
  std::vector<std::size_t> ids;
  for (std::size_t a = 0; a < _num_objects; ++a) {
    ids.push_back(identity(a));
  }
  std::vector<std::size_t> comp(_num_morphisms * _num_morphisms, npos);
  for (std::size_t g = 0; g < _num_morphisms; ++g) {
    for (std::size_t f = 0; f < _num_morphisms; ++f) {
      comp[g * _num_morphisms + f] = compose(g, f);
    }
  }
  return std::make_shared<FinCat>(_name,
                                  std::move(objects),
                                  std::move(morphisms),
                                  std::move(ids),
                                  std::move(comp));
}

bool FinCat::same_tables(FinCat const& that) const {
  if (_num_objects != that._num_objects
      || _num_morphisms != that._num_morphisms) {
    return false;
  }
  for (std::size_t a = 0; a < _num_objects; ++a) {
    if (object_name(a) != that.object_name(a)
        || identity(a) != that.identity(a)) {
      return false;
    }
  }
  for (std::size_t f = 0; f < _num_morphisms; ++f) {
    if (morphism_name(f) != that.morphism_name(f) || src(f) != that.src(f)
        || tgt(f) != that.tgt(f)) {
      return false;
    }
    for (std::size_t g = 0; g < _num_morphisms; ++g) {
      if (compose(g, f) != that.compose(g, f)) {
        return false;
      }
    }
  }
  return true;
}

////////////////////////////////////////////////////////////////////////
// Validation
////////////////////////////////////////////////////////////////////////

namespace {

  struct Resolved {
    std::vector<std::string> objects;
    std::vector<Morphism>    morphisms;
    std::vector<std::size_t> identities;
    std::vector<std::size_t> composition;
  };

  constexpr std::size_t npos = FinCat::npos;

  // Resolves names and fills the tables; returns violations found so far.
  std::vector<Violation> resolve(RawCategory const& raw, Resolved& out) {
    std::vector<Violation>             v;
    std::map<std::string, std::size_t> obj, mor;
    for (auto const& o : raw.objects) {
      if (!obj.emplace(o, out.objects.size()).second) {
        v.push_back({ErrorKind::DanglingId, "duplicate object " + o});
        continue;
      }
      out.objects.push_back(o);
    }
    for (auto const& m : raw.morphisms) {
      auto s = obj.find(m.src);
      auto t = obj.find(m.tgt);
      if (s == obj.end() || t == obj.end()) {
        v.push_back({ErrorKind::DanglingId,
                     "morphism " + m.name + " has unknown endpoint "
                         + (s == obj.end() ? m.src : m.tgt)});
        continue;
      }
      if (!mor.emplace(m.name, out.morphisms.size()).second) {
        v.push_back({ErrorKind::DanglingId, "duplicate morphism " + m.name});
        continue;
      }
      out.morphisms.push_back({m.name, s->second, t->second});
    }
    std::size_t const no = out.objects.size(), nm = out.morphisms.size();
    out.identities.assign(no, npos);
    for (auto const& [o, m] : raw.identities) {
      auto a = obj.find(o);
      auto f = mor.find(m);
      if (a == obj.end() || f == mor.end()) {
        v.push_back({ErrorKind::DanglingId,
                     "identity entry " + o + " = " + m + " names an unknown id"});
        continue;
      }
      auto const& mm = out.morphisms[f->second];
      if (mm.src != a->second || mm.tgt != a->second) {
        v.push_back({ErrorKind::MissingIdentity,
                     "identity of " + o + " given as " + m
                         + ", which is not an endomorphism of " + o});
        continue;
      }
      out.identities[a->second] = f->second;
    }
    for (std::size_t a = 0; a < no; ++a) {
      if (out.identities[a] == npos) {
        v.push_back({ErrorKind::MissingIdentity,
                     "object " + out.objects[a] + " has no identity"});
      }
    }
    out.composition.assign(nm * nm, npos);
    std::vector<bool> given(nm * nm, false);
    for (auto const& c : raw.composition) {
      auto g = mor.find(c.g), f = mor.find(c.f), h = mor.find(c.h);
      if (g == mor.end() || f == mor.end() || h == mor.end()) {
        v.push_back({ErrorKind::DanglingId,
                     "composite " + c.g + " . " + c.f + " = " + c.h
                         + " names an unknown morphism"});
        continue;
      }
      auto const& G = out.morphisms[g->second];
      auto const& F = out.morphisms[f->second];
      auto const& H = out.morphisms[h->second];
      if (F.tgt != G.src || H.src != F.src || H.tgt != G.tgt) {
        v.push_back({ErrorKind::IllTypedComposite,
                     "composite " + c.g + " . " + c.f + " = " + c.h
                         + " does not respect sources and targets"});
        continue;
      }
      std::size_t k = g->second * nm + f->second;
      if (given[k] && out.composition[k] != h->second) {
        v.push_back({ErrorKind::IllTypedComposite,
                     "composite " + c.g + " . " + c.f + " given twice"});
        continue;
      }
      given[k]            = true;
      out.composition[k] = h->second;
    }
    // Composites with identities may be omitted from the tables.
    for (std::size_t f = 0; f < nm; ++f) {
      auto const& F = out.morphisms[f];
      std::size_t ida = out.identities[F.src], idb = out.identities[F.tgt];
      if (idb != npos && !given[idb * nm + f]) {
        out.composition[idb * nm + f] = f;
        given[idb * nm + f]            = true;
      }
      if (ida != npos && !given[f * nm + ida]) {
        out.composition[f * nm + ida] = f;
        given[f * nm + ida]            = true;
      }
    }
    return v;
  }

  std::vector<Violation> check_laws(Resolved const& r, bool check_assoc) {
    std::vector<Violation> v;
    std::size_t const      nm = r.morphisms.size();
    auto name = [&](std::size_t f) { return r.morphisms[f].name; };
    for (std::size_t g = 0; g < nm; ++g) {
      for (std::size_t f = 0; f < nm; ++f) {
        if (r.morphisms[f].tgt == r.morphisms[g].src
            && r.composition[g * nm + f] == npos) {
          v.push_back({ErrorKind::IllTypedComposite,
                       "composite " + name(g) + " . " + name(f)
                           + " is missing"});
        }
      }
    }
    for (std::size_t f = 0; f < nm; ++f) {
      auto const& F   = r.morphisms[f];
      std::size_t ida = r.identities[F.src], idb = r.identities[F.tgt];
      if (idb != npos && r.composition[idb * nm + f] != f) {
        v.push_back({ErrorKind::MissingIdentity,
                     "unit law fails: " + name(idb) + " . " + name(f)
                         + " != " + name(f)});
      }
      if (ida != npos && r.composition[f * nm + ida] != f) {
        v.push_back({ErrorKind::MissingIdentity,
                     "unit law fails: " + name(f) + " . " + name(ida)
                         + " != " + name(f)});
      }
    }
    for (std::size_t h = 0; check_assoc && h < nm; ++h) {
      for (std::size_t g = 0; g < nm; ++g) {
        std::size_t hg = r.composition[h * nm + g];
        if (hg == npos) {
          continue;
        }
        for (std::size_t f = 0; f < nm; ++f) {
          std::size_t gf = r.composition[g * nm + f];
          if (gf == npos) {
            continue;
          }
          std::size_t lhs = r.composition[h * nm + gf];
          std::size_t rhs = r.composition[hg * nm + f];
          if (lhs != rhs) {
            v.push_back({ErrorKind::NonAssociative,
                         "(" + name(h) + "," + name(g) + "," + name(f)
                             + "): h.(g.f) != (h.g).f"});
          }
        }
      }
    }
    return v;
  }

}  // namespace

std::vector<Violation> check_category(RawCategory const& raw, bool check_assoc) {
  Resolved r;
  auto     v = resolve(raw, r);
  if (!v.empty()) {
    return v;
  }
  return check_laws(r, check_assoc);
}

CatPtr validate_category(RawCategory const& raw, bool check_assoc) {
  Resolved r;
  auto     v = resolve(raw, r);
  if (v.empty()) {
    v = check_laws(r, check_assoc);
  }
  if (!v.empty()) {
    std::string msg = "category " + raw.name + " is invalid:";
    for (auto const& x : v) {
      msg += "\n  " + std::string(to_string(x.kind)) + ": " + x.detail;
    }
    throw Error(v.front().kind, msg);
  }
  return std::make_shared<FinCat>(raw.name,
                                  std::move(r.objects),
                                  std::move(r.morphisms),
                                  std::move(r.identities),
                                  std::move(r.composition));
}

////////////////////////////////////////////////////////////////////////
// Builders
////////////////////////////////////////////////////////////////////////

CatPtr build_poset(std::string name, PosetData const& data) {
  std::size_t const                  n = data.elements.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!idx.emplace(data.elements[i], i).second) {
      throw Error(ErrorKind::NotAPoset,
                  "duplicate element " + data.elements[i]);
    }
  }
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    le[i][i] = true;
  }
  for (auto const& [a, b] : data.le) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end() || ib == idx.end()) {
      throw Error(ErrorKind::NotAPoset,
                  "relation " + a + " <= " + b + " names an unknown element");
    }
    le[ia->second][ib->second] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (le[i][k] && le[k][j]) {
          le[i][j] = true;
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (le[i][j] && le[j][i]) {
        throw Error(ErrorKind::NotAPoset,
                    "antisymmetry fails for " + data.elements[i] + " and "
                        + data.elements[j]);
      }
    }
  }
  std::vector<Morphism>                 morphisms;
  std::vector<std::vector<std::size_t>> id_of(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (le[i][j]) {
        id_of[i][j] = morphisms.size();
        morphisms.push_back({i == j ? "id_" + data.elements[i]
                                    : data.elements[i] + "<" + data.elements[j],
                             i,
                             j});
      }
    }
  }
  std::size_t const        nm = morphisms.size();
  std::vector<std::size_t> ids(n), comp(nm * nm, FinCat::npos);
  for (std::size_t i = 0; i < n; ++i) {
    ids[i] = id_of[i][i];
  }
  for (std::size_t g = 0; g < nm; ++g) {
    for (std::size_t f = 0; f < nm; ++f) {
      if (morphisms[f].tgt == morphisms[g].src) {
        comp[g * nm + f] = id_of[morphisms[f].src][morphisms[g].tgt];
      }
    }
  }
  return std::make_shared<FinCat>(std::move(name),
                                  data.elements,
                                  std::move(morphisms),
                                  std::move(ids),
                                  std::move(comp));
}

CatPtr build_monoid(std::string name, MonoidData const& data) {
  std::size_t const n = data.elements.size();
  auto              u = std::find(data.elements.begin(), data.elements.end(), data.unit);
  if (u == data.elements.end()) {
    throw Error(ErrorKind::NotAMonoid, "unit " + data.unit + " is not an element");
  }
  std::size_t e = u - data.elements.begin();
  if (data.mul.size() != n) {
    throw Error(ErrorKind::NotAMonoid, "multiplication table has wrong size");
  }
  for (auto const& row : data.mul) {
    if (row.size() != n) {
      throw Error(ErrorKind::NotAMonoid, "multiplication table has wrong size");
    }
    for (auto x : row) {
      if (x >= n) {
        throw Error(ErrorKind::NotAMonoid, "product out of range");
      }
    }
  }
  {
    std::set<std::string> seen(data.elements.begin(), data.elements.end());
    if (seen.size() != n) {
      throw Error(ErrorKind::NotAMonoid, "duplicate element");
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (data.mul[e][x] != x || data.mul[x][e] != x) {
      throw Error(ErrorKind::NotAMonoid,
                  "unit law fails at " + data.elements[x]);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        if (data.mul[data.mul[x][y]][z] != data.mul[x][data.mul[y][z]]) {
          throw Error(ErrorKind::NotAMonoid,
                      "associativity fails at (" + data.elements[x] + ","
                          + data.elements[y] + "," + data.elements[z] + ")");
        }
      }
    }
  }
  std::vector<Morphism> morphisms;
  for (std::size_t x = 0; x < n; ++x) {
    morphisms.push_back({data.elements[x], 0, 0});
  }
  std::vector<std::size_t> comp(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t f = 0; f < n; ++f) {
      comp[g * n + f] = data.mul[g][f];
    }
  }
  return std::make_shared<FinCat>(std::move(name),
                                  std::vector<std::string>{"*"},
                                  std::move(morphisms),
                                  std::vector<std::size_t>{e},
                                  std::move(comp));
}

CatPtr build_free(std::string name, GraphData const& data) {
  std::size_t const                  n = data.vertices.size();
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) {
    idx.emplace(data.vertices[i], i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (auto const& e : data.edges) {
    auto s = idx.find(e.src), t = idx.find(e.tgt);
    if (s == idx.end() || t == idx.end()) {
      throw Error(ErrorKind::DanglingId,
                  "edge " + e.name + " has an unknown endpoint");
    }
    edges.emplace_back(s->second, t->second);
  }
  // cycle detection by iterative removal of sources
  {
    std::vector<std::size_t> indeg(n, 0);
    for (auto const& [s, t] : edges) {
      ++indeg[t];
    }
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < n; ++v) {
      if (indeg[v] == 0) {
        stack.push_back(v);
      }
    }
    std::size_t removed = 0;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      ++removed;
      for (auto const& [s, t] : edges) {
        if (s == v && --indeg[t] == 0) {
          stack.push_back(t);
        }
      }
    }
    if (removed != n) {
      throw Error(ErrorKind::CyclicGraph, "graph " + name + " has a cycle");
    }
  }
  // paths as edge sequences, listed by length then lexicographically
  std::vector<std::vector<std::size_t>> paths;
  std::vector<Morphism>                 morphisms;
  for (std::size_t v = 0; v < n; ++v) {
    paths.push_back({});
    morphisms.push_back({"id_" + data.vertices[v], v, v});
  }
  std::vector<std::vector<std::size_t>> frontier;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    frontier.push_back({e});
  }
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (auto const& path : frontier) {
      check_cap(paths.size() + 1, "free category paths");
      std::string label;
      // path stored first edge first; name is last . ... . first
      for (std::size_t i = path.size(); i-- > 0;) {
        label += data.edges[path[i]].name + (i == 0 ? "" : ".");
      }
      morphisms.push_back(
          {label, edges[path.front()].first, edges[path.back()].second});
      paths.push_back(path);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].first == edges[path.back()].second) {
          auto p = path;
          p.push_back(e);
          next.push_back(std::move(p));
        }
      }
    }
    frontier = std::move(next);
  }
  std::size_t const                                nm = morphisms.size();
  std::map<std::vector<std::size_t>, std::size_t> path_index;
  for (std::size_t f = n; f < nm; ++f) {
    path_index.emplace(paths[f], f);
  }
  std::vector<std::size_t> ids(n), comp(nm * nm, FinCat::npos);
  for (std::size_t v = 0; v < n; ++v) {
    ids[v] = v;
  }
  for (std::size_t g = 0; g < nm; ++g) {
    for (std::size_t f = 0; f < nm; ++f) {
      if (morphisms[f].tgt != morphisms[g].src) {
        continue;
      }
      if (g < n) {
        comp[g * nm + f] = f;
      } else if (f < n) {
        comp[g * nm + f] = g;
      } else {
        auto p = paths[f];
        p.insert(p.end(), paths[g].begin(), paths[g].end());
        comp[g * nm + f] = path_index.at(p);
      }
    }
  }
  return std::make_shared<FinCat>(std::move(name),
                                  data.vertices,
                                  std::move(morphisms),
                                  std::move(ids),
                                  std::move(comp));
}

namespace {
  std::string op_name(std::string const& name) {
    static std::string const suffix = "^op";
    if (name.size() > suffix.size()
        && name.compare(name.size() - suffix.size(), suffix.size(), suffix)
               == 0) {
      return name.substr(0, name.size() - suffix.size());
    }
    return name + suffix;
  }
}  // namespace

CatPtr opposite(FinCat const& c) {
  if (c.is_product()) {
    std::vector<CatPtr> ops;
    for (auto const& f : c.factors()) {
      ops.push_back(opposite(*f));
    }
    return FinCat::product(std::move(ops), op_name(c.name()));
  }
  std::size_t const        no = c.num_objects(), nm = c.num_morphisms();
  std::vector<std::string> objects;
  for (std::size_t a = 0; a < no; ++a) {
    objects.push_back(c.object_name(a));
  }
  std::vector<Morphism> morphisms;
  for (std::size_t f = 0; f < nm; ++f) {
    morphisms.push_back({c.morphism_name(f), c.tgt(f), c.src(f)});
  }
  std::vector<std::size_t> ids(no), comp(nm * nm);
  for (std::size_t a = 0; a < no; ++a) {
    ids[a] = c.identity(a);
  }
  for (std::size_t g = 0; g < nm; ++g) {
    for (std::size_t f = 0; f < nm; ++f) {
      comp[g * nm + f] = c.compose(f, g);
    }
  }
  return std::make_shared<FinCat>(op_name(c.name()),
                                  std::move(objects),
                                  std::move(morphisms),
                                  std::move(ids),
                                  std::move(comp));
}

CatPtr opposite(CatPtr const& c) {
  return opposite(*c);
}

CatPtr discrete(std::string name, std::vector<std::string> objects) {
  std::size_t const     n = objects.size();
  std::vector<Morphism> morphisms;
  std::vector<std::size_t> ids(n), comp(n * n, FinCat::npos);
  for (std::size_t a = 0; a < n; ++a) {
    morphisms.push_back({"id_" + objects[a], a, a});
    ids[a]           = a;
    comp[a * n + a] = a;
  }
  return std::make_shared<FinCat>(std::move(name),
                                  std::move(objects),
                                  std::move(morphisms),
                                  std::move(ids),
                                  std::move(comp));
}

CatPtr coproduct(std::vector<CatPtr> const& parts, std::string name) {
  std::vector<std::string> objects;
  std::vector<Morphism>    morphisms;
  std::vector<std::size_t> ids, obase, mbase;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    auto const& c = *parts[k];
    obase.push_back(objects.size());
    mbase.push_back(morphisms.size());
    std::string const tag = std::to_string(k) + ".";
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
      objects.push_back(tag + c.object_name(a));
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
      morphisms.push_back({tag + c.morphism_name(f), obase[k] + c.src(f),
                           obase[k] + c.tgt(f)});
    }
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
      ids.push_back(mbase[k] + c.identity(a));
    }
  }
  std::size_t const        nm = morphisms.size();
  std::vector<std::size_t> comp(mul_sat(nm, nm), FinCat::npos);
  check_cap(comp.size(), "coproduct composition table");
  for (std::size_t k = 0; k < parts.size(); ++k) {
    auto const& c = *parts[k];
    for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
      for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
        std::size_t h = c.compose(g, f);
        if (h != FinCat::npos) {
          comp[(mbase[k] + g) * nm + mbase[k] + f] = mbase[k] + h;
        }
      }
    }
  }
  return std::make_shared<FinCat>(std::move(name), std::move(objects),
                                  std::move(morphisms), std::move(ids),
                                  std::move(comp));
}

CatPtr terminal_category() {
  static CatPtr const pt = discrete("pt", {"*"});
  return pt;
}

CatPtr walking_arrow() {
  static CatPtr const c = build_poset(
      "2",
      PosetData{std::vector<std::string>{"0", "1"},
                {std::pair<std::string, std::string>{"0", "1"}}});
  return c;
}

std::string to_string(VarianceSig sig) {
  return "(" + std::to_string(sig.p) + "," + std::to_string(sig.q) + ")";
}

CatPtr power_pq(CatPtr const& c, VarianceSig sig) {
  std::vector<CatPtr> factors;
  if (sig.p > 0) {
    CatPtr op = opposite(c);
    for (std::size_t i = 0; i < sig.p; ++i) {
      factors.push_back(op);
    }
  }
  for (std::size_t i = 0; i < sig.q; ++i) {
    factors.push_back(c);
  }
  return FinCat::product(std::move(factors),
                         c->name() + "^" + to_string(sig));
}

////////////////////////////////////////////////////////////////////////
// Functors
////////////////////////////////////////////////////////////////////////

std::vector<std::string> check_functor(Functor const& F) {
  std::vector<std::string> v;
  auto const&              S = *F.source;
  auto const&              T = *F.target;
  if (F.on_objects.size() != S.num_objects()
      || F.on_morphisms.size() != S.num_morphisms()) {
    v.push_back("functor tables have the wrong size");
    return v;
  }
  for (std::size_t a = 0; a < S.num_objects(); ++a) {
    if (F.on_objects[a] >= T.num_objects()) {
      v.push_back("object " + S.object_name(a) + " maps out of range");
    } else if (F.on_morphisms[S.identity(a)] != T.identity(F.on_objects[a])) {
      v.push_back("identity of " + S.object_name(a) + " not preserved");
    }
  }
  if (!v.empty()) {
    return v;
  }
  for (std::size_t f = 0; f < S.num_morphisms(); ++f) {
    std::size_t Ff = F.on_morphisms[f];
    if (Ff >= T.num_morphisms()) {
      v.push_back("morphism " + S.morphism_name(f) + " maps out of range");
      continue;
    }
    if (T.src(Ff) != F.on_objects[S.src(f)]
        || T.tgt(Ff) != F.on_objects[S.tgt(f)]) {
      v.push_back("morphism " + S.morphism_name(f)
                  + " maps to a morphism with wrong endpoints");
    }
  }
  if (!v.empty()) {
    return v;
  }
  for (std::size_t g = 0; g < S.num_morphisms(); ++g) {
    for (std::size_t f = 0; f < S.num_morphisms(); ++f) {
      std::size_t gf = S.compose(g, f);
      if (gf == FinCat::npos) {
        continue;
      }
      if (F.on_morphisms[gf]
          != T.compose(F.on_morphisms[g], F.on_morphisms[f])) {
        v.push_back("composite " + S.morphism_name(g) + " . "
                    + S.morphism_name(f) + " not preserved");
      }
    }
  }
  return v;
}

void validate_functor(Functor const& F) {
  auto v = check_functor(F);
  if (!v.empty()) {
    std::string msg = "functor " + F.source->name() + " -> " + F.target->name()
                      + " is invalid:";
    for (auto const& s : v) {
      msg += "\n  " + s;
    }
    throw Error(ErrorKind::NotFunctorial, msg);
  }
}

Functor compose(Functor const& G, Functor const& F) {
  Functor H{F.source, G.target, {}, {}};
  for (auto a : F.on_objects) {
    H.on_objects.push_back(G.on_objects[a]);
  }
  for (auto f : F.on_morphisms) {
    H.on_morphisms.push_back(G.on_morphisms[f]);
  }
  return H;
}

Functor identity_functor(CatPtr const& c) {
  Functor F{c, c, {}, {}};
  for (std::size_t a = 0; a < c->num_objects(); ++a) {
    F.on_objects.push_back(a);
  }
  for (std::size_t f = 0; f < c->num_morphisms(); ++f) {
    F.on_morphisms.push_back(f);
  }
  return F;
}

Functor to_terminal(CatPtr const& c) {
  return Functor{c,
                 terminal_category(),
                 std::vector<std::size_t>(c->num_objects(), 0),
                 std::vector<std::size_t>(c->num_morphisms(), 0)};
}

Functor diagonal_functor(CatPtr const& c, VarianceSig sig) {
  CatPtr            src = power_pq(c, {1, 1});
  CatPtr            tgt = power_pq(c, sig);
  Functor           D{src, tgt, {}, {}};
  std::size_t const no = c->num_objects(), nm = c->num_morphisms();
  Tuple             t(sig.arity());
  for (std::size_t a = 0; a < no; ++a) {
    for (std::size_t b = 0; b < no; ++b) {
      for (std::size_t i = 0; i < sig.arity(); ++i) {
        t[i] = i < sig.p ? a : b;
      }
      D.on_objects.push_back(tuple_code(t, no));
    }
  }
  for (std::size_t f = 0; f < nm; ++f) {
    for (std::size_t g = 0; g < nm; ++g) {
      for (std::size_t i = 0; i < sig.arity(); ++i) {
        t[i] = i < sig.p ? f : g;
      }
      D.on_morphisms.push_back(tuple_code(t, nm));
    }
  }
  return D;
}

std::size_t tuple_code(Tuple const& t, std::size_t radix) {
  std::size_t code = 0;
  for (auto x : t) {
    code = code * radix + x;
  }
  return code;
}

Tuple tuple_decode(std::size_t code, std::size_t radix, std::size_t len) {
  Tuple t(len);
  for (std::size_t i = len; i-- > 0;) {
    t[i] = code % radix;
    code /= radix;
  }
  return t;
}

}  // namespace hace
