#ifndef HACE_TESTS_FIXTURES_HPP_
#define HACE_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "hace/catspec.hpp"
#include "hace/generate.hpp"

namespace fixtures {

using hace::CatPtr;
using hace::SetFunctorPQ;

// 0 < 1 < .. < n-1
CatPtr chain(std::size_t n);
// The cyclic group of order n as a one-object category.
CatPtr cyclic(std::size_t n);
// bottom < x, y < top
CatPtr diamond();

// A generated spec, resolved, with its two functors.
struct Instance {
  std::uint64_t seed = 0;
  hace::CatSpec spec;
  hace::Model   model;
  CatPtr        c;
  SetFunctorPQ  F;  // profile signature
  SetFunctorPQ  G;  // swapped
};
Instance instance(std::uint64_t seed, hace::Profile const& prof = {});

std::string read_file(std::string const& path);
// Corpus file stems in sorted order.
std::vector<std::string> corpus_names();
std::string              corpus_path(std::string const& stem, std::string const& ext);

}  // namespace fixtures

#endif  // HACE_TESTS_FIXTURES_HPP_
