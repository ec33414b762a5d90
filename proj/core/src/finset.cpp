#include "hace/finset.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "hace/config.hpp"
#include "hace/error.hpp"

namespace hace {

FinSet::FinSet(std::vector<std::string> labels)
    : _labels(std::move(labels)),
      _index(std::make_shared<std::unordered_map<std::string, std::size_t>>()) {
  _index->reserve(_labels.size());
  for (std::size_t i = 0; i < _labels.size(); ++i) {
    if (!_index->emplace(_labels[i], i).second) {
      throw Error(ErrorKind::ShapeMismatch,
                  "duplicate label in finite set: " + _labels[i]);
    }
  }
}

FinSet FinSet::range(std::size_t n, std::string const& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(prefix + std::to_string(i));
  }
  return FinSet(std::move(labels));
}

std::optional<std::size_t> FinSet::find(std::string const& label) const {
  if (!_index) {
    return std::nullopt;
  }
  auto it = _index->find(label);
  if (it == _index->end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t FinSet::index_of(std::string const& label) const {
  auto i = find(label);
  if (!i) {
    throw Error(ErrorKind::ShapeMismatch, "no element labelled " + label);
  }
  return *i;
}

FinFn::FinFn(std::size_t cod, std::vector<std::size_t> table)
    : _cod(cod), _table(std::move(table)) {
  for (auto y : _table) {
    if (y >= _cod) {
      throw Error(ErrorKind::ShapeMismatch, "function value out of range");
    }
  }
}

FinFn FinFn::identity(std::size_t n) {
  std::vector<std::size_t> t(n);
  std::iota(t.begin(), t.end(), 0);
  return FinFn(n, std::move(t));
}

FinFn FinFn::constant(std::size_t dom, std::size_t cod, std::size_t value) {
  return FinFn(cod, std::vector<std::size_t>(dom, value));
}

bool FinFn::is_identity() const {
  if (_cod != _table.size()) {
    return false;
  }
  for (std::size_t i = 0; i < _table.size(); ++i) {
    if (_table[i] != i) {
      return false;
    }
  }
  return true;
}

bool FinFn::is_injective() const {
  std::vector<bool> seen(_cod, false);
  for (auto y : _table) {
    if (seen[y]) {
      return false;
    }
    seen[y] = true;
  }
  return true;
}

bool FinFn::is_surjective() const {
  std::vector<bool> seen(_cod, false);
  for (auto y : _table) {
    seen[y] = true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

FinFn compose(FinFn const& g, FinFn const& f) {
  if (f.cod() != g.dom()) {
    throw Error(ErrorKind::ShapeMismatch, "composing incompatible functions");
  }
  std::vector<std::size_t> t(f.dom());
  for (std::size_t x = 0; x < f.dom(); ++x) {
    t[x] = g(f(x));
  }
  return FinFn(g.cod(), std::move(t));
}

std::string to_string(FinFn const& f, FinSet const& dom, FinSet const& cod) {
  std::string out = "{";
  for (std::size_t x = 0; x < f.dom(); ++x) {
    if (x != 0) {
      out += ", ";
    }
    out += dom.label(x) + "->" + cod.label(f(x));
  }
  return out + "}";
}

UnionFind::UnionFind(std::size_t n) : _parent(n) {
  std::iota(_parent.begin(), _parent.end(), 0);
}

std::size_t UnionFind::find(std::size_t x) {
  std::size_t root = x;
  while (_parent[root] != root) {
    root = _parent[root];
  }
  while (_parent[x] != root) {
    std::size_t next = _parent[x];
    _parent[x]       = root;
    x                = next;
  }
  return root;
}

bool UnionFind::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) {
    return false;
  }
  // keep the smaller index as root so roots are least members
  if (y < x) {
    std::swap(x, y);
  }
  _parent[y] = x;
  return true;
}

std::vector<std::size_t> UnionFind::class_index() {
  std::vector<std::size_t> result(_parent.size());
  std::vector<std::size_t> root_to_class(_parent.size(), SIZE_MAX);
  std::size_t              next = 0;
  for (std::size_t x = 0; x < _parent.size(); ++x) {
    std::size_t r = find(x);
    if (root_to_class[r] == SIZE_MAX) {
      root_to_class[r] = next++;
    }
    result[x] = root_to_class[r];
  }
  return result;
}

std::size_t UnionFind::num_classes() {
  std::size_t n = 0;
  for (std::size_t x = 0; x < _parent.size(); ++x) {
    if (find(x) == x) {
      ++n;
    }
  }
  return n;
}

std::string tuple_label(std::vector<std::string> const& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) {
      out += ",";
    }
    out += parts[i];
  }
  return out + ")";
}

FinSet product(std::vector<FinSet> const& factors) {
  std::uint64_t n = 1;
  for (auto const& f : factors) {
    n = mul_sat(n, f.size());
  }
  check_cap(n, "product");
  std::vector<std::string> labels;
  labels.reserve(n);
  std::vector<std::size_t> digits(factors.size(), 0);
  std::vector<std::string> parts(factors.size());
  for (std::uint64_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      parts[i] = factors[i].label(digits[i]);
    }
    labels.push_back(tuple_label(parts));
    for (std::size_t i = factors.size(); i-- > 0;) {
      if (++digits[i] < factors[i].size()) {
        break;
      }
      digits[i] = 0;
    }
  }
  return FinSet(std::move(labels));
}

std::size_t encode(std::vector<std::size_t> const& digits,
                   std::vector<std::size_t> const& radix) {
  std::size_t code = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    code = code * radix[i] + digits[i];
  }
  return code;
}

std::vector<std::size_t> decode(std::size_t                     code,
                                std::vector<std::size_t> const& radix) {
  std::vector<std::size_t> digits(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    digits[i] = code % radix[i];
    code /= radix[i];
  }
  return digits;
}

}  // namespace hace
