#ifndef HACE_CATSPEC_HPP_
#define HACE_CATSPEC_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hace/apps.hpp"
#include "hace/fincat.hpp"
#include "hace/functor.hpp"

namespace hace {

// Parsed CatSpec document.  Every stanza keeps its source line for error
// messages; lines are not part of equality.

struct CategoryDecl {
  enum class Kind {
    walking_arrow,
    terminal,
    discrete,
    product,
    coproduct,
    opposite,
    fubini,
    poset,
    monoid,
    graph,
    tables,
  };
  struct Arrow {
    std::string name, src, tgt;
    bool operator==(Arrow const&) const = default;
  };
  struct Composite {
    std::string g, f, h;
    bool operator==(Composite const&) const = default;
  };

  std::string name;
  Kind        kind = Kind::tables;
  std::vector<std::string> objects;  // discrete, poset, graph, tables; monoid elements
  std::vector<std::string> parts;    // product, coproduct, opposite, fubini
  std::vector<VarianceSig> sigs;     // fubini
  std::vector<std::pair<std::string, std::string>> le;  // poset
  std::string                           unit;          // monoid
  std::vector<std::vector<std::string>> rows;          // monoid: x * y
  std::vector<Arrow>                    arrows;        // graph edges, tables morphisms
  std::vector<std::pair<std::string, std::string>> identities;  // tables
  std::vector<Composite>                           composites;  // tables
  std::size_t line = 0;

  bool operator==(CategoryDecl const& o) const;
};

struct FunctorDecl {
  enum class Kind {
    explicit_tables,
    hom,
    point,
    constant,
    hom_pi,
    weight,
    covariant,
    contravariant,
  };
  struct Fiber {
    std::vector<std::string> at;
    std::vector<std::string> labels;
    bool operator==(Fiber const&) const = default;
  };
  // Slot numbers are 1-based.  `at` is the full source tuple.
  struct Act {
    std::size_t              slot = 1;
    std::string              morphism;
    std::vector<std::string> at;
    std::vector<std::string> image;
    bool operator==(Act const&) const = default;
  };

  std::string              name;
  std::string              category;
  VarianceSig              sig;
  Kind                     kind = Kind::explicit_tables;
  std::vector<std::string> args;  // constant labels, representing object
  std::vector<Fiber>       fibers;
  std::vector<Act>         acts;
  std::size_t              line = 0;

  bool operator==(FunctorDecl const& o) const;
};

struct MonoidalDecl {
  enum class Kind { trivial, monoid, tables };
  struct Entry {
    std::string a, b, c;  // a (x) b = c
    bool operator==(Entry const&) const = default;
  };
  std::string        name;
  std::string        category;
  Kind               kind = Kind::tables;
  std::string        unit;
  std::vector<Entry> objects;
  std::vector<Entry> morphisms;
  std::size_t        line = 0;

  bool operator==(MonoidalDecl const& o) const;
};

struct JobDecl {
  std::string              kind;  // end coend dinat kusarigama fubini day twisted weighted check-all
  std::vector<std::string> args;
  std::size_t              line = 0;

  bool operator==(JobDecl const& o) const;
};

struct CatSpec {
  // Stanzas in declaration order: (0 category | 1 functor | 2 monoidal |
  // 3 job, index into the matching vector).
  std::vector<std::pair<int, std::size_t>> order;
  std::vector<CategoryDecl>                categories;
  std::vector<FunctorDecl>                 functors;
  std::vector<MonoidalDecl>                monoidals;
  std::vector<JobDecl>                     jobs;

  bool operator==(CatSpec const& o) const;

  void add(CategoryDecl d);
  void add(FunctorDecl d);
  void add(MonoidalDecl d);
  void add(JobDecl d);
};

std::string to_string(CategoryDecl::Kind k);
std::string to_string(FunctorDecl::Kind k);

// Throws ParseError(line, col, expected).
CatSpec     parse_catspec(std::string const& text);
// Canonical form; parse_catspec(print_catspec(s)) == s.
std::string print_catspec(CatSpec const& spec);

// Tables stanza describing an arbitrary dense category.
CategoryDecl export_category(FinCat const& c, std::string name);
// Explicit stanza for F: every fiber, and the actions of a generating set
// of morphisms in every slot and context.
FunctorDecl export_functor(SetFunctorPQ const& F, std::string name,
                           std::string category);
// A greedy generating set: morphisms not already composites of earlier
// generators and identities, in index order.
std::vector<std::size_t> generating_morphisms(FinCat const& c);

struct FubiniShape {
  CatPtr      a, b;
  VarianceSig sa, sb;
};

// Validated objects built from a CatSpec.
struct Model {
  std::map<std::string, CatPtr>         categories;
  std::map<std::string, SetFunctorPQ>   functors;
  std::map<std::string, MonoidalFinCat> monoidals;
  std::map<std::string, FubiniShape>    fubini;
  std::vector<std::string>              category_order;
  std::vector<std::string>              functor_order;
  std::vector<std::string>              monoidal_order;
};

struct ResolveOptions {
  bool check_assoc = true;
};

// Builds and validates every declaration; throws ResolutionError for
// unknown or duplicate names, and the module validators' errors otherwise.
// Jobs are checked for resolvable arguments.
Model resolve(CatSpec const& spec, ResolveOptions const& opt = {});

}  // namespace hace

#endif  // HACE_CATSPEC_HPP_
