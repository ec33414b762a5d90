#ifndef HACE_FINSET_HPP_
#define HACE_FINSET_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hace {

// A finite set is an ordered list of distinct labels; elements are indices.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<std::string> labels);

  static FinSet range(std::size_t n, std::string const& prefix = "");

  std::size_t size() const noexcept {
    return _labels.size();
  }
  bool empty() const noexcept {
    return _labels.empty();
  }
  std::string const& label(std::size_t i) const {
    return _labels[i];
  }
  std::vector<std::string> const& labels() const noexcept {
    return _labels;
  }
  std::optional<std::size_t> find(std::string const& label) const;
  std::size_t                index_of(std::string const& label) const;

  bool operator==(FinSet const& that) const {
    return _labels == that._labels;
  }
  bool operator!=(FinSet const& that) const {
    return !(*this == that);
  }

 private:
  std::vector<std::string>                                      _labels;
  std::shared_ptr<std::unordered_map<std::string, std::size_t>> _index;
};

// A total function between finite sets of the given sizes.
class FinFn {
 public:
  FinFn() = default;
  FinFn(std::size_t cod, std::vector<std::size_t> table);

  static FinFn identity(std::size_t n);
  static FinFn constant(std::size_t dom, std::size_t cod, std::size_t value);

  std::size_t dom() const noexcept {
    return _table.size();
  }
  std::size_t cod() const noexcept {
    return _cod;
  }
  std::size_t operator()(std::size_t x) const {
    return _table[x];
  }
  std::vector<std::size_t> const& table() const noexcept {
    return _table;
  }
  bool is_identity() const;
  bool is_injective() const;
  bool is_surjective() const;

  bool operator==(FinFn const& that) const {
    return _cod == that._cod && _table == that._table;
  }
  bool operator!=(FinFn const& that) const {
    return !(*this == that);
  }

 private:
  std::size_t              _cod = 0;
  std::vector<std::size_t> _table;
};

// g after f
FinFn compose(FinFn const& g, FinFn const& f);

std::string to_string(FinFn const& f, FinSet const& dom, FinSet const& cod);

// Union-find with path compression; classes() re-canonicalises so that every
// class is labelled by its least member.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0);

  std::size_t size() const noexcept {
    return _parent.size();
  }
  std::size_t find(std::size_t x);
  // Returns true if two distinct classes were merged.
  bool unite(std::size_t x, std::size_t y);

  // class_of[x] = index of x's class, classes ordered by least member.
  std::vector<std::size_t> class_index();
  std::size_t              num_classes();

 private:
  std::vector<std::size_t> _parent;
};

// Label of a tuple "(a,b,c)".
std::string tuple_label(std::vector<std::string> const& parts);

// Cartesian product in lexicographic order; the first factor varies slowest.
FinSet product(std::vector<FinSet> const& factors);

// Mixed-radix helpers for product indices.
std::size_t encode(std::vector<std::size_t> const& digits,
                   std::vector<std::size_t> const& radix);
std::vector<std::size_t> decode(std::size_t                     code,
                                std::vector<std::size_t> const& radix);

}  // namespace hace

#endif  // HACE_FINSET_HPP_
