#ifndef HACE_FINCAT_HPP_
#define HACE_FINCAT_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hace/error.hpp"

namespace hace {

class FinCat;
using CatPtr = std::shared_ptr<FinCat const>;

struct Morphism {
  std::string name;
  std::size_t src;
  std::size_t tgt;
};

// A finite category given by explicit tables, or a product of such
// categories whose structure is computed from the factors.  Objects and
// morphisms of a product are indexed in lexicographic (mixed radix) order.
class FinCat {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Tables are assumed valid; use validate_category for untrusted input.
  FinCat(std::string              name,
         std::vector<std::string> objects,
         std::vector<Morphism>    morphisms,
         std::vector<std::size_t> identities,
         std::vector<std::size_t> composition);

  static CatPtr product(std::vector<CatPtr> factors, std::string name = "");

  std::string const& name() const noexcept {
    return _name;
  }
  std::size_t num_objects() const noexcept {
    return _num_objects;
  }
  std::size_t num_morphisms() const noexcept {
    return _num_morphisms;
  }

  std::string object_name(std::size_t a) const;
  std::string morphism_name(std::size_t f) const;
  std::size_t src(std::size_t f) const;
  std::size_t tgt(std::size_t f) const;
  std::size_t identity(std::size_t a) const;
  bool        is_identity(std::size_t f) const {
    return identity(src(f)) == f;
  }
  // g after f, or npos when tgt(f) != src(g).
  std::size_t compose(std::size_t g, std::size_t f) const;
  std::vector<std::size_t> hom(std::size_t a, std::size_t b) const;

  std::optional<std::size_t> find_object(std::string const& name) const;
  std::optional<std::size_t> find_morphism(std::string const& name) const;

  bool is_product() const noexcept {
    return !_factors.empty() || _is_empty_product;
  }
  std::vector<CatPtr> const& factors() const noexcept {
    return _factors;
  }

  // Dense copy of a product category.  Subject to the size cap on |Mor|^2.
  CatPtr materialize() const;

  bool same_tables(FinCat const& that) const;

 private:
  FinCat() = default;

  std::vector<std::size_t> obj_digits(std::size_t a) const;
  std::vector<std::size_t> mor_digits(std::size_t f) const;

  std::string _name;
  std::size_t _num_objects   = 0;
  std::size_t _num_morphisms = 0;

  // dense storage
  std::vector<std::string>              _objects;
  std::vector<Morphism>                 _morphisms;
  std::vector<std::size_t>              _identities;
  std::vector<std::size_t>              _composition;  // g * |M| + f
  std::vector<std::vector<std::size_t>> _hom;          // a * |O| + b
  std::map<std::string, std::size_t>    _object_index;
  std::map<std::string, std::size_t>    _morphism_index;

  // product storage
  std::vector<CatPtr>      _factors;
  std::vector<std::size_t> _obj_radix;
  std::vector<std::size_t> _mor_radix;
  bool                     _is_empty_product = false;
};

// Raw, untrusted tables naming objects and morphisms by identifier.
struct RawCategory {
  struct Mor {
    std::string name;
    std::string src;
    std::string tgt;
  };
  struct Comp {
    std::string g;
    std::string f;
    std::string h;  // g after f = h
  };
  std::string                                      name;
  std::vector<std::string>                         objects;
  std::vector<Mor>                                 morphisms;
  std::vector<std::pair<std::string, std::string>> identities;
  std::vector<Comp>                                composition;
};

struct Violation {
  ErrorKind   kind;
  std::string detail;
};

// Every violated law with witnesses; empty iff the tables form a category.
// The associativity scan is cubic in |Mor| and may be skipped.
std::vector<Violation> check_category(RawCategory const& raw,
                                      bool               check_assoc = true);

// Throws Error whose kind is that of the first violation and whose message
// lists all of them.
CatPtr validate_category(RawCategory const& raw, bool check_assoc = true);

enum class BuildMode { poset, monoid, acyclic_graph };

struct PosetData {
  std::vector<std::string>                         elements;
  std::vector<std::pair<std::string, std::string>> le;  // need not be closed
};

struct MonoidData {
  std::vector<std::string> elements;
  std::string              unit;
  // mul[i][j] = element index of elements[i] * elements[j]
  std::vector<std::vector<std::size_t>> mul;
};

struct GraphData {
  std::vector<std::string> vertices;
  std::vector<RawCategory::Mor> edges;
};

// Reflexive-transitive closure of the given relation; rejects cycles.
CatPtr build_poset(std::string name, PosetData const& data);
// The one-object category of a monoid; composition g after f is g * f.
CatPtr build_monoid(std::string name, MonoidData const& data);
// Free category on an acyclic graph; morphisms are paths.
CatPtr build_free(std::string name, GraphData const& data);

CatPtr opposite(FinCat const& c);
CatPtr opposite(CatPtr const& c);

// Discrete category on n objects, used for terminal and tests.
CatPtr discrete(std::string name, std::vector<std::string> objects);
// Disjoint union; object and morphism k.x for x in the k-th part.
CatPtr coproduct(std::vector<CatPtr> const& parts, std::string name);
CatPtr terminal_category();
CatPtr walking_arrow();

struct VarianceSig {
  std::size_t p = 0;
  std::size_t q = 0;

  std::size_t arity() const noexcept {
    return p + q;
  }
  VarianceSig swapped() const noexcept {
    return {q, p};
  }
  bool operator==(VarianceSig const& o) const {
    return p == o.p && q == o.q;
  }
  bool operator!=(VarianceSig const& o) const {
    return !(*this == o);
  }
};

std::string to_string(VarianceSig sig);

// C^{(p,q)} = (C^op)^p x C^q.  The (0,0) case is the terminal category.
CatPtr power_pq(CatPtr const& c, VarianceSig sig);

// A functor between finite categories given by object and morphism maps.
struct Functor {
  CatPtr                   source;
  CatPtr                   target;
  std::vector<std::size_t> on_objects;
  std::vector<std::size_t> on_morphisms;
};

std::vector<std::string> check_functor(Functor const& f);
void                     validate_functor(Functor const& f);
Functor                  compose(Functor const& g, Functor const& f);
Functor                  identity_functor(CatPtr const& c);
Functor                  to_terminal(CatPtr const& c);

// Delta_{p,q} : C^op x C -> C^{(p,q)}.
Functor diagonal_functor(CatPtr const& c, VarianceSig sig);

// Mixed radix tuple helpers over a base category.
using Tuple = std::vector<std::size_t>;

std::size_t tuple_code(Tuple const& t, std::size_t radix);
Tuple       tuple_decode(std::size_t code, std::size_t radix, std::size_t len);

}  // namespace hace

#endif  // HACE_FINCAT_HPP_
