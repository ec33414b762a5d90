// Private helpers shared by the construction modules.
#ifndef HACE_SRC_UTIL_HPP_
#define HACE_SRC_UTIL_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "hace/error.hpp"
#include "hace/fincat.hpp"
#include "hace/finset.hpp"

namespace hace::detail {

// Index of f within the sorted hom-set C(a,b).
inline std::size_t hom_position(FinCat const& c, std::size_t a, std::size_t b,
                                std::size_t f) {
  auto const h  = c.hom(a, b);
  auto       it = std::lower_bound(h.begin(), h.end(), f);
  if (it == h.end() || *it != f) {
    throw Error(ErrorKind::ShapeMismatch,
                "morphism " + c.morphism_name(f) + " not in hom("
                    + c.object_name(a) + "," + c.object_name(b) + ")");
  }
  return static_cast<std::size_t>(it - h.begin());
}

inline FinSet hom_labels(FinCat const& c, std::size_t a, std::size_t b) {
  std::vector<std::string> labels;
  for (auto f : c.hom(a, b)) {
    labels.push_back(c.morphism_name(f));
  }
  return FinSet(std::move(labels));
}

inline std::vector<std::string> object_names(FinCat const& c) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < c.num_objects(); ++a) {
    names.push_back(c.object_name(a));
  }
  return names;
}

// Calls fn on every digit vector below radix, first digit slowest.
template <class Fn>
void for_each_digits(std::vector<std::size_t> const& radix, Fn&& fn) {
  for (auto r : radix) {
    if (r == 0) {
      return;
    }
  }
  std::vector<std::size_t> d(radix.size(), 0);
  while (true) {
    fn(static_cast<std::vector<std::size_t> const&>(d));
    std::size_t i = radix.size();
    while (i > 0) {
      --i;
      if (++d[i] < radix[i]) {
        break;
      }
      d[i] = 0;
      if (i == 0) {
        return;
      }
    }
    if (radix.empty()) {
      return;
    }
  }
}

// Source and target of a morphism tuple of C^(p,q).
inline Tuple tuple_src(FinCat const& c, VarianceSig sig, Tuple const& m) {
  Tuple t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    t[i] = i < sig.p ? c.tgt(m[i]) : c.src(m[i]);
  }
  return t;
}

inline Tuple tuple_tgt(FinCat const& c, VarianceSig sig, Tuple const& m) {
  Tuple t(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    t[i] = i < sig.p ? c.src(m[i]) : c.tgt(m[i]);
  }
  return t;
}

inline Tuple identity_tuple(FinCat const& c, Tuple const& t) {
  Tuple m(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    m[i] = c.identity(t[i]);
  }
  return m;
}

inline Tuple concat(Tuple a, Tuple const& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace hace::detail

#endif  // HACE_SRC_UTIL_HPP_
