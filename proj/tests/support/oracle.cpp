#include "oracle.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace oracle {

namespace {

  constexpr std::uint64_t kLimit = 4'000'000;

  struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) {
      std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
      while (parent[x] != x) {
        x = parent[x] = parent[parent[x]];
      }
      return x;
    }
    void join(std::size_t a, std::size_t b) {
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
    // Classes numbered by least member.
    std::pair<std::vector<std::size_t>, std::size_t> classes() {
      std::vector<std::size_t> id(parent.size(), 0), out(parent.size());
      std::size_t              k = 0;
      for (std::size_t i = 0; i < parent.size(); ++i) {
        std::size_t r = find(i);
        if (r == i) {
          id[i] = k++;
        }
        out[i] = id[r];
      }
      return {out, k};
    }
  };

  std::size_t code_of(Tuple const& t, std::size_t radix) {
    std::size_t c = 0;
    for (auto x : t) {
      c = c * radix + x;
    }
    return c;
  }

  std::size_t code_of_radix(Tuple const& t, std::vector<std::size_t> const& radix) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      c = c * radix[i] + t[i];
    }
    return c;
  }

  std::uint64_t power(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
      if (b != 0 && r > kLimit / b) {
        throw std::length_error("oracle enumeration too large");
      }
      r *= b;
    }
    return r;
  }

  std::size_t obj_tuple(SetFunctorPQ const& F, std::size_t first, std::size_t second) {
    Tuple t(F.sig().p, first);
    t.insert(t.end(), F.sig().q, second);
    return code_of(t, F.base()->num_objects());
  }

  std::size_t diag_size(SetFunctorPQ const& F, std::size_t a) {
    return F.fiber(obj_tuple(F, a, a)).size();
  }

  // Decodes function number k from an n-element set to an m-element set;
  // the first argument is the most significant digit.
  std::vector<std::size_t> function_table(std::uint64_t k, std::size_t n, std::size_t m) {
    std::vector<std::size_t> t(n);
    for (std::size_t i = n; i-- > 0;) {
      t[i] = k % m;
      k /= m;
    }
    return t;
  }

}  // namespace

bool next_digits(std::vector<std::size_t>& d, std::vector<std::size_t> const& radix) {
  for (std::size_t i = d.size(); i-- > 0;) {
    if (++d[i] < radix[i]) {
      return true;
    }
    d[i] = 0;
  }
  return false;
}

std::size_t mor_tuple(SetFunctorPQ const& F, std::size_t first, std::size_t second) {
  Tuple m(F.sig().p, first);
  m.insert(m.end(), F.sig().q, second);
  return code_of(m, F.base()->num_morphisms());
}

std::vector<Tuple> end_families(SetFunctorPQ const& D) {
  auto const&              C = *D.base();
  std::size_t const        n = C.num_objects();
  std::vector<std::size_t> radix;
  std::uint64_t            total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    radix.push_back(diag_size(D, a));
    total *= std::max<std::size_t>(radix.back(), 1);
    if (total > kLimit) {
      throw std::length_error("oracle enumeration too large");
    }
  }
  std::vector<Tuple> out;
  if (std::find(radix.begin(), radix.end(), 0) != radix.end()) {
    return out;
  }
  Tuple x(n, 0);
  do {
    bool ok = true;
    for (std::size_t f = 0; f < C.num_morphisms() && ok; ++f) {
      std::size_t a = C.src(f), b = C.tgt(f);
      std::size_t l = D.act(mor_tuple(D, C.identity(a), f))(x[a]);
      std::size_t r = D.act(mor_tuple(D, f, C.identity(b)))(x[b]);
      ok            = l == r;
    }
    if (ok) {
      out.push_back(x);
    }
  } while (next_digits(x, radix));
  std::sort(out.begin(), out.end());
  return out;
}

Partition coend_partition(SetFunctorPQ const& D) {
  auto const&       C = *D.base();
  std::size_t const n = C.num_objects();
  Partition         p;
  std::size_t       total = 0;
  for (std::size_t a = 0; a < n; ++a) {
    p.offset.push_back(total);
    total += diag_size(D, a);
  }
  Dsu dsu(total);
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    std::size_t   a = C.src(f), b = C.tgt(f);
    auto const&   y = D.fiber(obj_tuple(D, b, a));
    hace::FinFn const& lo = D.act(mor_tuple(D, f, C.identity(a)));
    hace::FinFn const& up = D.act(mor_tuple(D, C.identity(b), f));
    for (std::size_t e = 0; e < y.size(); ++e) {
      dsu.join(p.offset[a] + lo(e), p.offset[b] + up(e));
    }
  }
  std::tie(p.cls, p.classes) = dsu.classes();
  return p;
}

bool same_partition(std::vector<std::size_t> const& a, std::vector<std::size_t> const& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) {
        return false;
      }
    }
  }
  return true;
}

std::uint64_t count_dinat(SetFunctorPQ const& F, SetFunctorPQ const& G) {
  auto const&       C = *F.base();
  std::size_t const n = C.num_objects();
  std::vector<std::size_t> nf, ng;
  std::vector<std::size_t> radix;
  std::uint64_t            total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    nf.push_back(diag_size(F, a));
    ng.push_back(diag_size(G, a));
    std::uint64_t k = power(ng[a], nf[a]);
    if (k == 0) {
      return 0;
    }
    total *= k;
    if (total > kLimit) {
      throw std::length_error("oracle enumeration too large");
    }
    radix.push_back(static_cast<std::size_t>(k));
  }
  std::uint64_t count = 0;
  Tuple         pick(n, 0);
  do {
    std::vector<std::vector<std::size_t>> alpha;
    for (std::size_t a = 0; a < n; ++a) {
      alpha.push_back(function_table(pick[a], nf[a], ng[a]));
    }
    bool ok = true;
    for (std::size_t f = 0; f < C.num_morphisms() && ok; ++f) {
      std::size_t a = C.src(f), b = C.tgt(f);
      std::size_t ia = C.identity(a), ib = C.identity(b);
      auto const& y  = F.fiber(obj_tuple(F, b, a));
      auto const& Fl = F.act(mor_tuple(F, f, ia));
      auto const& Fu = F.act(mor_tuple(F, ib, f));
      auto const& Gl = G.act(mor_tuple(G, ia, f));
      auto const& Gu = G.act(mor_tuple(G, f, ib));
      for (std::size_t e = 0; e < y.size() && ok; ++e) {
        ok = Gl(alpha[a][Fl(e)]) == Gu(alpha[b][Fu(e)]);
      }
    }
    count += ok ? 1 : 0;
  } while (next_digits(pick, radix));
  return count;
}

std::uint64_t count_nat(SetFunctor const& F, SetFunctor const& G) {
  auto const&              C = *F.domain();
  std::vector<std::size_t> radix;
  std::uint64_t            total = 1;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    std::uint64_t k = power(G.fiber(a).size(), F.fiber(a).size());
    if (k == 0) {
      return 0;
    }
    total *= k;
    if (total > kLimit) {
      throw std::length_error("oracle enumeration too large");
    }
    radix.push_back(static_cast<std::size_t>(k));
  }
  std::uint64_t count = 0;
  Tuple         pick(C.num_objects(), 0);
  do {
    bool ok = true;
    for (std::size_t f = 0; f < C.num_morphisms() && ok; ++f) {
      std::size_t a = C.src(f), b = C.tgt(f);
      auto ta = function_table(pick[a], F.fiber(a).size(), G.fiber(a).size());
      auto tb = function_table(pick[b], F.fiber(b).size(), G.fiber(b).size());
      for (std::size_t e = 0; e < F.fiber(a).size() && ok; ++e) {
        ok = G.act(f)(ta[e]) == tb[F.act(f)(e)];
      }
    }
    count += ok ? 1 : 0;
  } while (next_digits(pick, radix));
  return count;
}

std::uint64_t count_wedges(SetFunctorPQ const& D, std::size_t x) {
  auto const&              C = *D.base();
  std::size_t const        n = C.num_objects();
  std::vector<std::size_t> nd, radix;
  std::uint64_t            total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    nd.push_back(diag_size(D, a));
    std::uint64_t k = power(nd[a], x);
    if (k == 0) {
      return 0;
    }
    total *= k;
    if (total > kLimit) {
      throw std::length_error("oracle enumeration too large");
    }
    radix.push_back(static_cast<std::size_t>(k));
  }
  std::uint64_t count = 0;
  Tuple         pick(n, 0);
  do {
    bool ok = true;
    for (std::size_t f = 0; f < C.num_morphisms() && ok; ++f) {
      std::size_t a = C.src(f), b = C.tgt(f);
      auto ta = function_table(pick[a], x, nd[a]);
      auto tb = function_table(pick[b], x, nd[b]);
      auto const& l = D.act(mor_tuple(D, C.identity(a), f));
      auto const& r = D.act(mor_tuple(D, f, C.identity(b)));
      for (std::size_t e = 0; e < x && ok; ++e) {
        ok = l(ta[e]) == r(tb[e]);
      }
    }
    count += ok ? 1 : 0;
  } while (next_digits(pick, radix));
  return count;
}

std::size_t limit_size(SetFunctor const& D) {
  auto const&              C = *D.domain();
  std::vector<std::size_t> radix;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    radix.push_back(D.fiber(a).size());
    if (radix.back() == 0) {
      return 0;
    }
  }
  std::size_t count = 0;
  Tuple       x(radix.size(), 0);
  do {
    bool ok = true;
    for (std::size_t f = 0; f < C.num_morphisms() && ok; ++f) {
      ok = D.act(f)(x[C.src(f)]) == x[C.tgt(f)];
    }
    count += ok ? 1 : 0;
  } while (next_digits(x, radix));
  return count;
}

std::size_t colimit_size(SetFunctor const& D) {
  auto const&              C = *D.domain();
  std::vector<std::size_t> off;
  std::size_t              total = 0;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    off.push_back(total);
    total += D.fiber(a).size();
  }
  Dsu dsu(total);
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    for (std::size_t e = 0; e < D.fiber(C.src(f)).size(); ++e) {
      dsu.join(off[C.src(f)] + e, off[C.tgt(f)] + D.act(f)(e));
    }
  }
  return dsu.classes().second;
}

std::size_t day_fiber(hace::MonoidalFinCat const& M, std::vector<SetFunctorPQ> const& Fs,
                      std::size_t x) {
  auto const&       C = *M.base;
  std::size_t const n = Fs.size();
  // Elements at A: digits (e_1..e_n, position of g in C(x, A^n)).
  auto radix_at = [&](std::size_t a) {
    std::vector<std::size_t> r;
    for (auto const& F : Fs) {
      r.push_back(F.fiber(a).size());
    }
    r.push_back(C.hom(x, M.tensor_objects(std::vector<std::size_t>(n, a))).size());
    return r;
  };
  auto size_of = [](std::vector<std::size_t> const& r) {
    std::size_t s = 1;
    for (auto k : r) {
      s *= k;
    }
    return s;
  };
  std::vector<std::size_t> off;
  std::size_t              total = 0;
  for (std::size_t a = 0; a < C.num_objects(); ++a) {
    off.push_back(total);
    total += size_of(radix_at(a));
  }
  Dsu dsu(total);
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    std::size_t a = C.src(f), b = C.tgt(f);
    // y in prod F_k(B) x C(x, A^n)
    std::vector<std::size_t> r;
    for (auto const& F : Fs) {
      r.push_back(F.fiber(b).size());
    }
    auto homA = C.hom(x, M.tensor_objects(std::vector<std::size_t>(n, a)));
    auto homB = C.hom(x, M.tensor_objects(std::vector<std::size_t>(n, b)));
    r.push_back(homA.size());
    if (size_of(r) == 0) {
      continue;
    }
    std::size_t fn = M.tensor_morphisms(std::vector<std::size_t>(n, f));
    Tuple       d(r.size(), 0);
    do {
      Tuple lo(d), up(d);
      for (std::size_t k = 0; k < n; ++k) {
        lo[k] = Fs[k].act(f)(d[k]);
      }
      std::size_t g  = homA[d[n]];
      std::size_t fg = C.compose(fn, g);
      up[n] = static_cast<std::size_t>(std::find(homB.begin(), homB.end(), fg) - homB.begin());
      dsu.join(off[a] + code_of_radix(lo, radix_at(a)), off[b] + code_of_radix(up, radix_at(b)));
    } while (next_digits(d, r));
  }
  return dsu.classes().second;
}

std::size_t day_classical_fiber(hace::MonoidalFinCat const& M, SetFunctorPQ const& F,
                                SetFunctorPQ const& G, std::size_t x) {
  auto const&       C  = *M.base;
  std::size_t const no = C.num_objects();
  auto hom_at = [&](std::size_t a, std::size_t b) {
    return C.hom(x, M.tensor_objects({a, b}));
  };
  std::vector<std::size_t> off(no * no);
  std::size_t              total = 0;
  for (std::size_t a = 0; a < no; ++a) {
    for (std::size_t b = 0; b < no; ++b) {
      off[a * no + b] = total;
      total += F.fiber(a).size() * G.fiber(b).size() * hom_at(a, b).size();
    }
  }
  auto index = [&](std::size_t a, std::size_t b, std::size_t u, std::size_t v,
                   std::size_t h) {
    return off[a * no + b] + (u * G.fiber(b).size() + v) * hom_at(a, b).size() + h;
  };
  Dsu dsu(total);
  for (std::size_t f = 0; f < C.num_morphisms(); ++f) {
    for (std::size_t g = 0; g < C.num_morphisms(); ++g) {
      std::size_t a = C.src(f), a2 = C.tgt(f), b = C.src(g), b2 = C.tgt(g);
      auto        hs = hom_at(a, b), ht = hom_at(a2, b2);
      std::size_t fg = M.tensor_morphisms({f, g});
      for (std::size_t u = 0; u < F.fiber(a2).size(); ++u) {
        for (std::size_t v = 0; v < G.fiber(b2).size(); ++v) {
          for (std::size_t h = 0; h < hs.size(); ++h) {
            std::size_t k  = C.compose(fg, hs[h]);
            std::size_t hk = static_cast<std::size_t>(std::find(ht.begin(), ht.end(), k) - ht.begin());
            dsu.join(index(a, b, F.act(f)(u), G.act(g)(v), h), index(a2, b2, u, v, hk));
          }
        }
      }
    }
  }
  return dsu.classes().second;
}

Tables tables_of(hace::FinCat const& c) {
  Tables            t;
  std::size_t const n = c.num_morphisms();
  t.objects           = c.num_objects();
  for (std::size_t f = 0; f < n; ++f) {
    t.src.push_back(c.src(f));
    t.tgt.push_back(c.tgt(f));
  }
  for (std::size_t a = 0; a < t.objects; ++a) {
    t.id.push_back(c.identity(a));
  }
  t.comp.resize(n * n);
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t f = 0; f < n; ++f) {
      t.comp[g * n + f] = c.compose(g, f);
    }
  }
  return t;
}

bool is_category(Tables const& t) {
  std::size_t const n    = t.src.size();
  std::size_t const npos = hace::FinCat::npos;
  for (std::size_t a = 0; a < t.objects; ++a) {
    if (t.id[a] >= n || t.src[t.id[a]] != a || t.tgt[t.id[a]] != a) {
      return false;
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t f = 0; f < n; ++f) {
      std::size_t h = t.comp[g * n + f];
      if ((t.tgt[f] == t.src[g]) != (h != npos)) {
        return false;
      }
      if (h != npos && (t.src[h] != t.src[f] || t.tgt[h] != t.tgt[g])) {
        return false;
      }
    }
    if (t.comp[g * n + t.id[t.src[g]]] != g || t.comp[t.id[t.tgt[g]] * n + g] != g) {
      return false;
    }
  }
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t g = 0; g < n; ++g) {
      if (t.src[h] != t.tgt[g]) {
        continue;
      }
      for (std::size_t f = 0; f < n; ++f) {
        if (t.src[g] != t.tgt[f]) {
          continue;
        }
        if (t.comp[h * n + t.comp[g * n + f]] != t.comp[t.comp[h * n + g] * n + f]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace oracle
