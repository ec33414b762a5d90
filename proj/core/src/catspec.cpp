#include "hace/catspec.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hace/config.hpp"
#include "hace/error.hpp"
#include "hace/ends.hpp"
#include "hace/twisted.hpp"
#include "util.hpp"

namespace hace {

namespace {

  struct Tok {
    std::string text;
    std::size_t col;
  };

  struct Line {
    std::size_t      no;
    std::size_t      end_col;
    std::vector<Tok> toks;
  };

  std::vector<Line> lex(std::string const& text) {
    std::vector<Line> out;
    std::size_t       no = 0;
    std::size_t       pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        nl = text.size();
      }
      std::string raw = text.substr(pos, nl - pos);
      pos             = nl + 1;
      ++no;
      if (!raw.empty() && raw.back() == '\r') {
        raw.pop_back();
      }
      Line l{no, raw.size() + 1, {}};
      std::size_t i = 0;
      while (i < raw.size()) {
        char ch = raw[i];
        if (ch == '#') {
          break;
        }
        if (ch == ' ' || ch == '\t') {
          ++i;
          continue;
        }
        std::size_t j = i;
        while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t' && raw[j] != '#') {
          ++j;
        }
        l.toks.push_back({raw.substr(i, j - i), i + 1});
        i = j;
      }
      if (!l.toks.empty()) {
        out.push_back(std::move(l));
      }
      if (nl == text.size()) {
        break;
      }
    }
    return out;
  }

  bool is_ident(std::string const& s) {
    if (s.empty() || s == "=") {
      return false;
    }
    for (unsigned char ch : s) {
      if (ch <= 0x20 || ch >= 0x7f || ch == '=' || ch == '#') {
        return false;
      }
    }
    return true;
  }

  class Parser {
   public:
    explicit Parser(std::vector<Line> lines) : _lines(std::move(lines)) {}

    CatSpec run() {
      CatSpec spec;
      while (_i < _lines.size()) {
        Line const& l = _lines[_i];
        std::string const& head = l.toks[0].text;
        if (head == "category") {
          spec.add(category());
        } else if (head == "functor") {
          spec.add(functor());
        } else if (head == "monoidal") {
          spec.add(monoidal());
        } else if (head == "job") {
          spec.add(job());
        } else {
          fail(l, 0, "'category', 'functor', 'monoidal' or 'job'");
        }
      }
      return spec;
    }

   private:
    [[noreturn]] void fail(Line const& l, std::size_t k, std::string what) {
      std::size_t col = k < l.toks.size() ? l.toks[k].col : l.end_col;
      throw ParseError(l.no, col, std::move(what));
    }

    std::string ident(Line const& l, std::size_t k, char const* what = "identifier") {
      if (k >= l.toks.size()) {
        fail(l, k, what);
      }
      if (!is_ident(l.toks[k].text)) {
        fail(l, k, std::string("ASCII ") + what);
      }
      return l.toks[k].text;
    }

    void keyword(Line const& l, std::size_t k, char const* kw) {
      if (k >= l.toks.size() || l.toks[k].text != kw) {
        fail(l, k, std::string("'") + kw + "'");
      }
    }

    std::size_t number(Line const& l, std::size_t k) {
      if (k >= l.toks.size()) {
        fail(l, k, "non-negative integer");
      }
      std::string const& s = l.toks[k].text;
      if (s.empty() || s.size() > 6
          || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        fail(l, k, "non-negative integer");
      }
      return static_cast<std::size_t>(std::stoul(s));
    }

    void done(Line const& l, std::size_t k) {
      if (k < l.toks.size()) {
        fail(l, k, "end of line");
      }
    }

    std::vector<std::string> idents_from(Line const& l, std::size_t k,
                                         std::size_t stop) {
      std::vector<std::string> out;
      for (; k < stop; ++k) {
        out.push_back(ident(l, k));
      }
      return out;
    }

    // Position of the "=" token at or after k, or the token count.
    std::size_t find_eq(Line const& l, std::size_t k) {
      for (; k < l.toks.size(); ++k) {
        if (l.toks[k].text == "=") {
          return k;
        }
      }
      return l.toks.size();
    }

    // Block body lines until "end"; returns them and consumes "end".
    std::vector<Line const*> body(Line const& head) {
      std::vector<Line const*> out;
      ++_i;
      while (true) {
        if (_i >= _lines.size()) {
          Line eof{_lines.empty() ? 1 : _lines.back().no + 1, 1, {}};
          fail(eof, 0, "'end' closing the stanza on line " + std::to_string(head.no));
        }
        Line const& l = _lines[_i];
        if (l.toks[0].text == "end") {
          done(l, 1);
          ++_i;
          return out;
        }
        out.push_back(&l);
        ++_i;
      }
    }

    CategoryDecl category() {
      Line const&  l = _lines[_i];
      CategoryDecl d;
      d.line = l.no;
      d.name = ident(l, 1, "category name");
      if (l.toks.size() > 2 && l.toks[2].text == "=") {
        std::string kind = ident(l, 3, "category constructor");
        if (kind == "walking_arrow") {
          d.kind = CategoryDecl::Kind::walking_arrow;
          done(l, 4);
        } else if (kind == "terminal") {
          d.kind = CategoryDecl::Kind::terminal;
          done(l, 4);
        } else if (kind == "discrete") {
          d.kind    = CategoryDecl::Kind::discrete;
          d.objects = idents_from(l, 4, l.toks.size());
        } else if (kind == "product" || kind == "coproduct") {
          d.kind  = kind == "product" ? CategoryDecl::Kind::product
                                      : CategoryDecl::Kind::coproduct;
          d.parts = idents_from(l, 4, l.toks.size());
          if (d.parts.empty()) {
            fail(l, 4, "category name");
          }
        } else if (kind == "opposite") {
          d.kind  = CategoryDecl::Kind::opposite;
          d.parts = {ident(l, 4, "category name")};
          done(l, 5);
        } else if (kind == "fubini") {
          d.kind  = CategoryDecl::Kind::fubini;
          d.parts = {ident(l, 4, "category name"), ident(l, 7, "category name")};
          d.sigs  = {{number(l, 5), number(l, 6)}, {number(l, 8), number(l, 9)}};
          done(l, 10);
        } else {
          fail(l, 3,
               "walking_arrow, terminal, discrete, product, coproduct, opposite "
               "or fubini");
        }
        ++_i;
        return d;
      }
      std::string kind = ident(l, 2, "'=' or category kind");
      done(l, 3);
      if (kind == "poset") {
        d.kind = CategoryDecl::Kind::poset;
        for (auto const* b : body(l)) {
          std::string const& h = b->toks[0].text;
          if (h == "objects") {
            auto xs = idents_from(*b, 1, b->toks.size());
            d.objects.insert(d.objects.end(), xs.begin(), xs.end());
          } else if (h == "le") {
            d.le.emplace_back(ident(*b, 1), ident(*b, 2));
            done(*b, 3);
          } else {
            fail(*b, 0, "'objects', 'le' or 'end'");
          }
        }
      } else if (kind == "monoid") {
        d.kind = CategoryDecl::Kind::monoid;
        for (auto const* b : body(l)) {
          std::string const& h = b->toks[0].text;
          if (h == "elements") {
            auto xs = idents_from(*b, 1, b->toks.size());
            d.objects.insert(d.objects.end(), xs.begin(), xs.end());
          } else if (h == "unit") {
            d.unit = ident(*b, 1);
            done(*b, 2);
          } else if (h == "row") {
            std::vector<std::string> row{ident(*b, 1)};
            keyword(*b, 2, "=");
            auto xs = idents_from(*b, 3, b->toks.size());
            row.insert(row.end(), xs.begin(), xs.end());
            d.rows.push_back(std::move(row));
          } else {
            fail(*b, 0, "'elements', 'unit', 'row' or 'end'");
          }
        }
      } else if (kind == "graph") {
        d.kind = CategoryDecl::Kind::graph;
        for (auto const* b : body(l)) {
          std::string const& h = b->toks[0].text;
          if (h == "objects") {
            auto xs = idents_from(*b, 1, b->toks.size());
            d.objects.insert(d.objects.end(), xs.begin(), xs.end());
          } else if (h == "edge") {
            d.arrows.push_back({ident(*b, 1), ident(*b, 2), ident(*b, 3)});
            done(*b, 4);
          } else {
            fail(*b, 0, "'objects', 'edge' or 'end'");
          }
        }
      } else if (kind == "tables") {
        d.kind = CategoryDecl::Kind::tables;
        for (auto const* b : body(l)) {
          std::string const& h = b->toks[0].text;
          if (h == "objects") {
            auto xs = idents_from(*b, 1, b->toks.size());
            d.objects.insert(d.objects.end(), xs.begin(), xs.end());
          } else if (h == "morphism") {
            d.arrows.push_back({ident(*b, 1), ident(*b, 2), ident(*b, 3)});
            done(*b, 4);
          } else if (h == "identity") {
            d.identities.emplace_back(ident(*b, 1), ident(*b, 2));
            done(*b, 3);
          } else if (h == "compose") {
            std::string g = ident(*b, 1), f = ident(*b, 2);
            keyword(*b, 3, "=");
            d.composites.push_back({g, f, ident(*b, 4)});
            done(*b, 5);
          } else {
            fail(*b, 0, "'objects', 'morphism', 'identity', 'compose' or 'end'");
          }
        }
      } else {
        fail(l, 2, "'=', 'poset', 'monoid', 'graph' or 'tables'");
      }
      return d;
    }

    FunctorDecl functor() {
      Line const& l = _lines[_i];
      FunctorDecl d;
      d.line     = l.no;
      d.name     = ident(l, 1, "functor name");
      keyword(l, 2, "on");
      d.category = ident(l, 3, "category name");
      keyword(l, 4, "sig");
      d.sig = {number(l, 5), number(l, 6)};
      if (l.toks.size() > 7) {
        keyword(l, 7, "=");
        std::string kind = ident(l, 8, "functor constructor");
        using K          = FunctorDecl::Kind;
        if (kind == "hom") {
          d.kind = K::hom;
          done(l, 9);
        } else if (kind == "point") {
          d.kind = K::point;
          done(l, 9);
        } else if (kind == "hom_pi") {
          d.kind = K::hom_pi;
          done(l, 9);
        } else if (kind == "weight") {
          d.kind = K::weight;
          done(l, 9);
        } else if (kind == "const") {
          d.kind = K::constant;
          d.args = idents_from(l, 9, l.toks.size());
        } else if (kind == "covariant" || kind == "contravariant") {
          d.kind = kind == "covariant" ? K::covariant : K::contravariant;
          d.args = {ident(l, 9, "object name")};
          done(l, 10);
        } else {
          fail(l, 8,
               "hom, point, hom_pi, weight, const, covariant or contravariant");
        }
        ++_i;
        return d;
      }
      d.kind               = FunctorDecl::Kind::explicit_tables;
      std::size_t const n  = d.sig.arity();
      for (auto const* b : body(l)) {
        std::string const& h = b->toks[0].text;
        if (h == "fiber") {
          std::size_t eq = find_eq(*b, 1);
          if (eq != 1 + n) {
            fail(*b, std::min(eq, 1 + n), std::to_string(n) + " object names then '='");
          }
          d.fibers.push_back({idents_from(*b, 1, eq),
                              idents_from(*b, eq + 1, b->toks.size())});
        } else if (h == "act") {
          FunctorDecl::Act a;
          a.slot = number(*b, 1);
          if (a.slot == 0 || a.slot > n) {
            fail(*b, 1, "slot number between 1 and " + std::to_string(n));
          }
          a.morphism = ident(*b, 2, "morphism name");
          keyword(*b, 3, "at");
          std::size_t eq = find_eq(*b, 4);
          if (eq != 4 + n) {
            fail(*b, std::min(eq, 4 + n), std::to_string(n) + " object names then '='");
          }
          a.at    = idents_from(*b, 4, eq);
          a.image = idents_from(*b, eq + 1, b->toks.size());
          d.acts.push_back(std::move(a));
        } else {
          fail(*b, 0, "'fiber', 'act' or 'end'");
        }
      }
      return d;
    }

    MonoidalDecl monoidal() {
      Line const&  l = _lines[_i];
      MonoidalDecl d;
      d.line = l.no;
      d.name = ident(l, 1, "monoidal name");
      if (l.toks.size() > 2 && l.toks[2].text == "=") {
        keyword(l, 3, "trivial");
        done(l, 4);
        d.kind = MonoidalDecl::Kind::trivial;
        ++_i;
        return d;
      }
      keyword(l, 2, "on");
      d.category = ident(l, 3, "category name");
      if (l.toks.size() > 4) {
        keyword(l, 4, "=");
        keyword(l, 5, "monoid");
        done(l, 6);
        d.kind = MonoidalDecl::Kind::monoid;
        ++_i;
        return d;
      }
      d.kind = MonoidalDecl::Kind::tables;
      for (auto const* b : body(l)) {
        std::string const& h = b->toks[0].text;
        if (h == "unit") {
          d.unit = ident(*b, 1);
          done(*b, 2);
        } else if (h == "obj" || h == "mor") {
          std::string a = ident(*b, 1), c = ident(*b, 2);
          keyword(*b, 3, "=");
          MonoidalDecl::Entry e{a, c, ident(*b, 4)};
          done(*b, 5);
          (h == "obj" ? d.objects : d.morphisms).push_back(e);
        } else {
          fail(*b, 0, "'unit', 'obj', 'mor' or 'end'");
        }
      }
      return d;
    }

    JobDecl job() {
      Line const& l = _lines[_i];
      JobDecl     d;
      d.line = l.no;
      d.kind = ident(l, 1, "job kind");
      d.args = idents_from(l, 2, l.toks.size());
      std::size_t const n = d.args.size();
      auto arity = [&](std::size_t lo, std::size_t hi) {
        if (n < lo) {
          fail(l, 2 + n, "argument to job " + d.kind);
        }
        if (n > hi) {
          fail(l, 2 + hi, "end of line");
        }
      };
      if (d.kind == "end" || d.kind == "coend" || d.kind == "fubini") {
        arity(1, 1);
      } else if (d.kind == "dinat" || d.kind == "weighted") {
        arity(2, 2);
      } else if (d.kind == "kusarigama") {
        arity(1, 2);
      } else if (d.kind == "day") {
        arity(2, 8);
      } else if (d.kind == "twisted") {
        arity(3, 3);
        number(l, 3);
        number(l, 4);
      } else if (d.kind == "check-all") {
        arity(0, 0);
      } else {
        fail(l, 1,
             "end, coend, dinat, kusarigama, fubini, day, twisted, weighted or "
             "check-all");
      }
      ++_i;
      return d;
    }

    std::vector<Line> _lines;
    std::size_t       _i = 0;
  };

  std::string join(std::vector<std::string> const& xs) {
    std::string out;
    for (auto const& x : xs) {
      out += " " + x;
    }
    return out;
  }

  std::string sig_text(VarianceSig s) {
    return std::to_string(s.p) + " " + std::to_string(s.q);
  }

}  // namespace

////////////////////////////////////////////////////////////////////////
// Document
////////////////////////////////////////////////////////////////////////

bool CategoryDecl::operator==(CategoryDecl const& o) const {
  return name == o.name && kind == o.kind && objects == o.objects
         && parts == o.parts && sigs == o.sigs && le == o.le && unit == o.unit
         && rows == o.rows && arrows == o.arrows && identities == o.identities
         && composites == o.composites;
}

bool FunctorDecl::operator==(FunctorDecl const& o) const {
  return name == o.name && category == o.category && sig == o.sig
         && kind == o.kind && args == o.args && fibers == o.fibers
         && acts == o.acts;
}

bool MonoidalDecl::operator==(MonoidalDecl const& o) const {
  return name == o.name && category == o.category && kind == o.kind
         && unit == o.unit && objects == o.objects && morphisms == o.morphisms;
}

bool JobDecl::operator==(JobDecl const& o) const {
  return kind == o.kind && args == o.args;
}

bool CatSpec::operator==(CatSpec const& o) const {
  return order == o.order && categories == o.categories
         && functors == o.functors && monoidals == o.monoidals && jobs == o.jobs;
}

void CatSpec::add(CategoryDecl d) {
  order.emplace_back(0, categories.size());
  categories.push_back(std::move(d));
}
void CatSpec::add(FunctorDecl d) {
  order.emplace_back(1, functors.size());
  functors.push_back(std::move(d));
}
void CatSpec::add(MonoidalDecl d) {
  order.emplace_back(2, monoidals.size());
  monoidals.push_back(std::move(d));
}
void CatSpec::add(JobDecl d) {
  order.emplace_back(3, jobs.size());
  jobs.push_back(std::move(d));
}

std::string to_string(CategoryDecl::Kind k) {
  using K = CategoryDecl::Kind;
  switch (k) {
    case K::walking_arrow: return "walking_arrow";
    case K::terminal: return "terminal";
    case K::discrete: return "discrete";
    case K::product: return "product";
    case K::coproduct: return "coproduct";
    case K::opposite: return "opposite";
    case K::fubini: return "fubini";
    case K::poset: return "poset";
    case K::monoid: return "monoid";
    case K::graph: return "graph";
    case K::tables: return "tables";
  }
  return "?";
}

std::string to_string(FunctorDecl::Kind k) {
  using K = FunctorDecl::Kind;
  switch (k) {
    case K::explicit_tables: return "tables";
    case K::hom: return "hom";
    case K::point: return "point";
    case K::constant: return "const";
    case K::hom_pi: return "hom_pi";
    case K::weight: return "weight";
    case K::covariant: return "covariant";
    case K::contravariant: return "contravariant";
  }
  return "?";
}

CatSpec parse_catspec(std::string const& text) {
  return Parser(lex(text)).run();
}

std::string print_catspec(CatSpec const& spec) {
  std::ostringstream out;
  bool               first = true;
  for (auto const& [what, k] : spec.order) {
    if (!first && what != 3) {
      out << "\n";
    }
    first = false;
    if (what == 0) {
      auto const& d = spec.categories[k];
      using K       = CategoryDecl::Kind;
      out << "category " << d.name;
      switch (d.kind) {
        case K::walking_arrow:
        case K::terminal: out << " = " << to_string(d.kind) << "\n"; break;
        case K::discrete: out << " = discrete" << join(d.objects) << "\n"; break;
        case K::product:
        case K::coproduct:
        case K::opposite:
          out << " = " << to_string(d.kind) << join(d.parts) << "\n";
          break;
        case K::fubini:
          out << " = fubini " << d.parts[0] << " " << sig_text(d.sigs[0]) << " "
              << d.parts[1] << " " << sig_text(d.sigs[1]) << "\n";
          break;
        case K::poset:
          out << " poset\n  objects" << join(d.objects) << "\n";
          for (auto const& [a, b] : d.le) {
            out << "  le " << a << " " << b << "\n";
          }
          out << "end\n";
          break;
        case K::monoid:
          out << " monoid\n  elements" << join(d.objects) << "\n";
          out << "  unit " << d.unit << "\n";
          for (auto const& r : d.rows) {
            out << "  row " << r[0] << " ="
                << join(std::vector<std::string>(r.begin() + 1, r.end())) << "\n";
          }
          out << "end\n";
          break;
        case K::graph:
          out << " graph\n  objects" << join(d.objects) << "\n";
          for (auto const& e : d.arrows) {
            out << "  edge " << e.name << " " << e.src << " " << e.tgt << "\n";
          }
          out << "end\n";
          break;
        case K::tables:
          out << " tables\n  objects" << join(d.objects) << "\n";
          for (auto const& e : d.arrows) {
            out << "  morphism " << e.name << " " << e.src << " " << e.tgt << "\n";
          }
          for (auto const& [a, f] : d.identities) {
            out << "  identity " << a << " " << f << "\n";
          }
          for (auto const& c : d.composites) {
            out << "  compose " << c.g << " " << c.f << " = " << c.h << "\n";
          }
          out << "end\n";
          break;
      }
    } else if (what == 1) {
      auto const& d = spec.functors[k];
      using K       = FunctorDecl::Kind;
      out << "functor " << d.name << " on " << d.category << " sig "
          << sig_text(d.sig);
      if (d.kind != K::explicit_tables) {
        out << " = " << to_string(d.kind) << join(d.args) << "\n";
      } else {
        out << "\n";
        for (auto const& f : d.fibers) {
          out << "  fiber" << join(f.at) << " =" << join(f.labels) << "\n";
        }
        for (auto const& a : d.acts) {
          out << "  act " << a.slot << " " << a.morphism << " at" << join(a.at)
              << " =" << join(a.image) << "\n";
        }
        out << "end\n";
      }
    } else if (what == 2) {
      auto const& d = spec.monoidals[k];
      out << "monoidal " << d.name;
      switch (d.kind) {
        case MonoidalDecl::Kind::trivial: out << " = trivial\n"; break;
        case MonoidalDecl::Kind::monoid:
          out << " on " << d.category << " = monoid\n";
          break;
        case MonoidalDecl::Kind::tables:
          out << " on " << d.category << "\n";
          out << "  unit " << d.unit << "\n";
          for (auto const& e : d.objects) {
            out << "  obj " << e.a << " " << e.b << " = " << e.c << "\n";
          }
          for (auto const& e : d.morphisms) {
            out << "  mor " << e.a << " " << e.b << " = " << e.c << "\n";
          }
          out << "end\n";
          break;
      }
    } else {
      auto const& d = spec.jobs[k];
      out << "job " << d.kind << join(d.args) << "\n";
    }
  }
  return out.str();
}

////////////////////////////////////////////////////////////////////////
// Export
////////////////////////////////////////////////////////////////////////

std::vector<std::size_t> generating_morphisms(FinCat const& c) {
  std::size_t const nm = c.num_morphisms();
  std::vector<bool> reach(nm, false);
  for (std::size_t a = 0; a < c.num_objects(); ++a) {
    reach[c.identity(a)] = true;
  }
  std::vector<std::size_t> gens;
  for (std::size_t m = 0; m < nm; ++m) {
    if (reach[m]) {
      continue;
    }
    gens.push_back(m);
    reach[m]     = true;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t f = 0; f < nm; ++f) {
        if (!reach[f]) {
          continue;
        }
        for (auto g : gens) {
          for (auto h : {c.compose(g, f), c.compose(f, g)}) {
            if (h != FinCat::npos && !reach[h]) {
              reach[h] = true;
              changed  = true;
            }
          }
        }
      }
    }
  }
  return gens;
}

CategoryDecl export_category(FinCat const& c, std::string name) {
  CategoryDecl d;
  d.name = std::move(name);
  d.kind = CategoryDecl::Kind::tables;
  for (std::size_t a = 0; a < c.num_objects(); ++a) {
    d.objects.push_back(c.object_name(a));
  }
  for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
    d.arrows.push_back(
        {c.morphism_name(f), c.object_name(c.src(f)), c.object_name(c.tgt(f))});
  }
  for (std::size_t a = 0; a < c.num_objects(); ++a) {
    d.identities.emplace_back(c.object_name(a), c.morphism_name(c.identity(a)));
  }
  for (std::size_t g = 0; g < c.num_morphisms(); ++g) {
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
      std::size_t h = c.compose(g, f);
      if (h != FinCat::npos && !c.is_identity(g) && !c.is_identity(f)) {
        d.composites.push_back(
            {c.morphism_name(g), c.morphism_name(f), c.morphism_name(h)});
      }
    }
  }
  return d;
}

namespace {

  std::vector<std::string> printable_labels(FinSet const& s) {
    std::set<std::string> seen;
    bool                  ok = true;
    for (auto const& l : s.labels()) {
      ok = ok && is_ident(l) && seen.insert(l).second;
    }
    if (ok) {
      return s.labels();
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      out.push_back("e" + std::to_string(i));
    }
    return out;
  }

  std::vector<std::string> names_of(FinCat const& c, Tuple const& t) {
    std::vector<std::string> out;
    for (auto a : t) {
      out.push_back(c.object_name(a));
    }
    return out;
  }

}  // namespace

FunctorDecl export_functor(SetFunctorPQ const& F, std::string name,
                           std::string category) {
  FunctorDecl d;
  d.name     = std::move(name);
  d.category = std::move(category);
  d.sig      = F.sig();
  d.kind     = FunctorDecl::Kind::explicit_tables;
  auto const&       C  = *F.base();
  std::size_t const n  = d.sig.arity();
  std::size_t const no = C.num_objects();
  std::uint64_t     nt = pow_sat(no, n);
  check_cap(nt, "object tuples");
  std::vector<std::vector<std::string>> labels(nt);
  for (std::size_t code = 0; code < nt; ++code) {
    Tuple t      = tuple_decode(code, no, n);
    labels[code] = printable_labels(F.fiber(t));
    d.fibers.push_back({names_of(C, t), labels[code]});
  }
  auto gens = generating_morphisms(C);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto m : gens) {
      std::size_t s = i < d.sig.p ? C.tgt(m) : C.src(m);
      for (std::size_t code = 0; code < nt; ++code) {
        Tuple t = tuple_decode(code, no, n);
        if (t[i] != s) {
          continue;
        }
        Tuple mt = detail::identity_tuple(C, t);
        mt[i]    = m;
        Tuple tt = t;
        tt[i]    = i < d.sig.p ? C.src(m) : C.tgt(m);
        FinFn fn = F.act(mt);
        FunctorDecl::Act a;
        a.slot     = i + 1;
        a.morphism = C.morphism_name(m);
        a.at       = names_of(C, t);
        for (std::size_t x = 0; x < fn.dom(); ++x) {
          a.image.push_back(labels[tuple_code(tt, no)][fn(x)]);
        }
        d.acts.push_back(std::move(a));
      }
    }
  }
  return d;
}

////////////////////////////////////////////////////////////////////////
// Resolution
////////////////////////////////////////////////////////////////////////

namespace {

  [[noreturn]] void unresolved(std::size_t line, std::string const& what) {
    throw Error(ErrorKind::ResolutionError,
                "line " + std::to_string(line) + ": " + what);
  }

  std::size_t object_of(FinCat const& c, std::string const& name,
                        std::size_t line) {
    if (auto a = c.find_object(name)) {
      return *a;
    }
    for (std::size_t a = 0; a < c.num_objects(); ++a) {
      if (c.object_name(a) == name) {
        return a;
      }
    }
    unresolved(line, "unknown object '" + name + "' in " + c.name());
  }

  std::size_t morphism_of(FinCat const& c, std::string const& name,
                          std::size_t line) {
    if (auto f = c.find_morphism(name)) {
      return *f;
    }
    for (std::size_t f = 0; f < c.num_morphisms(); ++f) {
      if (c.morphism_name(f) == name) {
        return f;
      }
    }
    unresolved(line, "unknown morphism '" + name + "' in " + c.name());
  }

  template <class Map>
  auto const& lookup(Map const& m, std::string const& name, char const* what,
                     std::size_t line) {
    auto it = m.find(name);
    if (it == m.end()) {
      unresolved(line, std::string("unknown ") + what + " '" + name + "'");
    }
    return it->second;
  }

  CatPtr build_category(CategoryDecl const& d, Model const& m,
                        ResolveOptions const& opt) {
    using K  = CategoryDecl::Kind;
    auto cat = [&](std::string const& n) {
      return lookup(m.categories, n, "category", d.line);
    };
    switch (d.kind) {
      case K::walking_arrow: return walking_arrow();
      case K::terminal: return terminal_category();
      case K::discrete: return discrete(d.name, d.objects);
      case K::product: {
        std::vector<CatPtr> ps;
        for (auto const& p : d.parts) {
          ps.push_back(cat(p));
        }
        return FinCat::product(ps, d.name);
      }
      case K::coproduct: {
        std::vector<CatPtr> ps;
        for (auto const& p : d.parts) {
          ps.push_back(cat(p));
        }
        return coproduct(ps, d.name);
      }
      case K::opposite: return opposite(cat(d.parts[0]));
      case K::fubini:
        return fubini_domain(cat(d.parts[0]), d.sigs[0], cat(d.parts[1]),
                             d.sigs[1]);
      case K::poset: return build_poset(d.name, PosetData{d.objects, d.le});
      case K::monoid: {
        MonoidData md{d.objects, d.unit, {}};
        std::map<std::string, std::size_t> idx;
        for (std::size_t i = 0; i < d.objects.size(); ++i) {
          idx.emplace(d.objects[i], i);
        }
        auto find = [&](std::string const& x) {
          auto it = idx.find(x);
          if (it == idx.end()) {
            unresolved(d.line, "unknown element '" + x + "' in monoid " + d.name);
          }
          return it->second;
        };
        md.mul.assign(d.objects.size(), {});
        std::vector<bool> seen(d.objects.size(), false);
        for (auto const& r : d.rows) {
          std::size_t x = find(r[0]);
          if (seen[x] || r.size() != d.objects.size() + 1) {
            throw Error(ErrorKind::NotAMonoid,
                        "row " + r[0] + " of monoid " + d.name
                            + " is repeated or has the wrong length");
          }
          seen[x] = true;
          for (std::size_t j = 1; j < r.size(); ++j) {
            md.mul[x].push_back(find(r[j]));
          }
        }
        for (std::size_t x = 0; x < seen.size(); ++x) {
          if (!seen[x]) {
            throw Error(ErrorKind::NotAMonoid,
                        "monoid " + d.name + " has no row for " + d.objects[x]);
          }
        }
        return build_monoid(d.name, md);
      }
      case K::graph: {
        GraphData g{d.objects, {}};
        for (auto const& e : d.arrows) {
          g.edges.push_back({e.name, e.src, e.tgt});
        }
        return build_free(d.name, g);
      }
      case K::tables: {
        RawCategory raw;
        raw.name    = d.name;
        raw.objects = d.objects;
        for (auto const& e : d.arrows) {
          raw.morphisms.push_back({e.name, e.src, e.tgt});
        }
        raw.identities = d.identities;
        for (auto const& c : d.composites) {
          raw.composition.push_back({c.g, c.f, c.h});
        }
        return validate_category(raw, opt.check_assoc);
      }
    }
    unresolved(d.line, "unsupported category kind");
  }

  void need_sig(FunctorDecl const& d, VarianceSig s) {
    if (d.sig != s) {
      throw Error(ErrorKind::ShapeMismatch,
                  "line " + std::to_string(d.line) + ": functor " + d.name
                      + " of kind " + to_string(d.kind) + " needs sig "
                      + to_string(s));
    }
  }

  SetFunctorPQ build_functor(FunctorDecl const& d, CatPtr const& c) {
    using K = FunctorDecl::Kind;
    switch (d.kind) {
      case K::hom: need_sig(d, {1, 1}); return hom_functor(c);
      case K::point: return point_functor(c, d.sig);
      case K::constant: return constant_functor(c, d.sig, FinSet(d.args));
      case K::hom_pi: return hom_pi(c, d.sig);
      case K::weight: return FactorizationWeight(c, d.sig).functor();
      case K::covariant:
        need_sig(d, {0, 1});
        return covariant_representable(c, object_of(*c, d.args[0], d.line));
      case K::contravariant:
        need_sig(d, {1, 0});
        return contravariant_representable(c, object_of(*c, d.args[0], d.line));
      case K::explicit_tables: break;
    }
    std::size_t const n  = d.sig.arity();
    std::size_t const no = c->num_objects();
    std::uint64_t     nt = pow_sat(no, n);
    check_cap(nt, "object tuples");
    auto tuple_of = [&](std::vector<std::string> const& names) {
      Tuple t;
      for (auto const& x : names) {
        t.push_back(object_of(*c, x, d.line));
      }
      return t;
    };
    std::vector<FinSet> fibers(nt);
    std::vector<bool>   given(nt, false);
    for (auto const& f : d.fibers) {
      std::size_t code = tuple_code(tuple_of(f.at), no);
      if (given[code]) {
        unresolved(d.line, "fiber of " + d.name + " at" + join(f.at) + " given twice");
      }
      std::set<std::string> distinct(f.labels.begin(), f.labels.end());
      if (distinct.size() != f.labels.size()) {
        throw Error(ErrorKind::ShapeMismatch,
                    "line " + std::to_string(d.line) + ": fiber of " + d.name
                        + " at" + join(f.at) + " repeats a label");
      }
      given[code]  = true;
      fibers[code] = FinSet(f.labels);
    }
    for (std::size_t code = 0; code < nt; ++code) {
      if (!given[code]) {
        std::vector<std::string> names;
        for (auto a : tuple_decode(code, no, n)) {
          names.push_back(c->object_name(a));
        }
        unresolved(d.line, "functor " + d.name + " has no fiber at" + join(names));
      }
    }
    std::vector<SlotAction> actions;
    for (auto const& a : d.acts) {
      std::size_t i = a.slot - 1;
      std::size_t m = morphism_of(*c, a.morphism, d.line);
      Tuple       s = tuple_of(a.at);
      s[i]          = i < d.sig.p ? c->tgt(m) : c->src(m);
      Tuple t       = s;
      t[i]          = i < d.sig.p ? c->src(m) : c->tgt(m);
      FinSet const& src = fibers[tuple_code(s, no)];
      FinSet const& tgt = fibers[tuple_code(t, no)];
      if (a.image.size() != src.size()) {
        throw Error(ErrorKind::NonFunctorialSlot,
                    "line " + std::to_string(d.line) + ": action of "
                        + a.morphism + " in slot " + std::to_string(a.slot)
                        + " of " + d.name + " lists "
                        + std::to_string(a.image.size()) + " images for "
                        + std::to_string(src.size()) + " elements");
      }
      std::vector<std::size_t> table;
      for (auto const& y : a.image) {
        auto k = tgt.find(y);
        if (!k) {
          unresolved(d.line, "'" + y + "' is not in the fiber of " + d.name
                                 + " at the target of " + a.morphism);
        }
        table.push_back(*k);
      }
      actions.push_back({i, m, s, FinFn(tgt.size(), std::move(table))});
    }
    return functor_from_slots(c, d.sig, std::move(fibers), actions);
  }

  MonoidalFinCat build_monoidal(MonoidalDecl const& d, Model const& m) {
    if (d.kind == MonoidalDecl::Kind::trivial) {
      return trivial_monoidal();
    }
    CatPtr c = lookup(m.categories, d.category, "category", d.line);
    if (d.kind == MonoidalDecl::Kind::monoid) {
      return monoid_monoidal(c);
    }
    std::size_t const no = c->num_objects(), nm = c->num_morphisms();
    Functor           t{FinCat::product({c, c}), c,
              std::vector<std::size_t>(no * no, FinCat::npos),
              std::vector<std::size_t>(nm * nm, FinCat::npos)};
    for (auto const& e : d.objects) {
      t.on_objects[tuple_code({object_of(*c, e.a, d.line), object_of(*c, e.b, d.line)}, no)] =
          object_of(*c, e.c, d.line);
    }
    for (auto const& e : d.morphisms) {
      t.on_morphisms[tuple_code({morphism_of(*c, e.a, d.line),
                                 morphism_of(*c, e.b, d.line)},
                                nm)] = morphism_of(*c, e.c, d.line);
    }
    for (std::size_t a = 0; a < no; ++a) {
      for (std::size_t b = 0; b < no; ++b) {
        std::size_t ab = t.on_objects[tuple_code({a, b}, no)];
        if (ab == FinCat::npos) {
          throw Error(ErrorKind::NotStrictMonoidal,
                      "tensor of " + d.name + " undefined on objects ("
                          + c->object_name(a) + "," + c->object_name(b) + ")");
        }
        std::size_t& idm =
            t.on_morphisms[tuple_code({c->identity(a), c->identity(b)}, nm)];
        if (idm == FinCat::npos) {
          idm = c->identity(ab);
        }
      }
    }
    for (std::size_t f = 0; f < nm; ++f) {
      for (std::size_t g = 0; g < nm; ++g) {
        if (t.on_morphisms[tuple_code({f, g}, nm)] == FinCat::npos) {
          throw Error(ErrorKind::NotStrictMonoidal,
                      "tensor of " + d.name + " undefined on morphisms ("
                          + c->morphism_name(f) + "," + c->morphism_name(g) + ")");
        }
      }
    }
    return make_monoidal(c, t, object_of(*c, d.unit, d.line));
  }

  void check_job(JobDecl const& j, Model const& m) {
    auto fun = [&](std::string const& n) -> SetFunctorPQ const& {
      return lookup(m.functors, n, "functor", j.line);
    };
    auto shape = [&](bool ok, std::string const& what) {
      if (!ok) {
        throw Error(ErrorKind::ShapeMismatch,
                    "line " + std::to_string(j.line) + ": job " + j.kind + " "
                        + what);
      }
    };
    if (j.kind == "end" || j.kind == "coend") {
      fun(j.args[0]);
    } else if (j.kind == "dinat") {
      auto const& F = fun(j.args[0]);
      auto const& G = fun(j.args[1]);
      shape(F.base() == G.base() && G.sig() == F.sig().swapped(),
            "needs functors of swapped signatures on one category");
    } else if (j.kind == "kusarigama") {
      auto const& F = fun(j.args[0]);
      if (j.args.size() == 2) {
        auto const& G = fun(j.args[1]);
        shape(F.base() == G.base() && G.sig() == F.sig().swapped(),
              "needs functors of swapped signatures on one category");
      }
    } else if (j.kind == "fubini") {
      auto const& D = fun(j.args[0]);
      std::string cat;
      for (auto const& [name, c] : m.categories) {
        if (c == D.base()) {
          cat = name;
        }
      }
      shape(m.fubini.count(cat) != 0 && D.sig() == VarianceSig{0, 1},
            "needs a (0,1) functor on a fubini category");
    } else if (j.kind == "day") {
      auto const& M = lookup(m.monoidals, j.args[0], "monoidal", j.line);
      for (std::size_t k = 1; k < j.args.size(); ++k) {
        auto const& F = fun(j.args[k]);
        shape(F.sig() == VarianceSig{1, 0} && F.base()->same_tables(*M.base),
              "needs presheaves of sig (1,0) on the monoidal base");
      }
    } else if (j.kind == "twisted") {
      lookup(m.categories, j.args[0], "category", j.line);
    } else if (j.kind == "weighted") {
      auto const& W = fun(j.args[0]);
      auto const& D = fun(j.args[1]);
      shape(W.base() == D.base() && W.sig() == VarianceSig{1, 1}
                && D.sig() == VarianceSig{1, 1},
            "needs two (1,1) functors on one category");
    }
  }

}  // namespace

Model resolve(CatSpec const& spec, ResolveOptions const& opt) {
  Model m;
  std::set<std::string> names;
  auto fresh = [&](std::string const& n, std::size_t line) {
    if (!names.insert(n).second) {
      unresolved(line, "name '" + n + "' declared twice");
    }
  };
  for (auto const& [what, k] : spec.order) {
    if (what == 0) {
      auto const& d = spec.categories[k];
      fresh(d.name, d.line);
      m.categories.emplace(d.name, build_category(d, m, opt));
      m.category_order.push_back(d.name);
      if (d.kind == CategoryDecl::Kind::fubini) {
        m.fubini.emplace(d.name,
                         FubiniShape{m.categories.at(d.parts[0]), m.categories.at(d.parts[1]),
                                     d.sigs[0], d.sigs[1]});
      }
    } else if (what == 1) {
      auto const& d = spec.functors[k];
      fresh(d.name, d.line);
      CatPtr c = lookup(m.categories, d.category, "category", d.line);
      m.functors.emplace(d.name, build_functor(d, c));
      m.functor_order.push_back(d.name);
    } else if (what == 2) {
      auto const& d = spec.monoidals[k];
      fresh(d.name, d.line);
      m.monoidals.emplace(d.name, build_monoidal(d, m));
      m.monoidal_order.push_back(d.name);
    }
  }
  for (auto const& j : spec.jobs) {
    check_job(j, m);
  }
  return m;
}

}  // namespace hace
