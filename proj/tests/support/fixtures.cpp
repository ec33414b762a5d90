#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef HACE_CORPUS_DIR
#define HACE_CORPUS_DIR "corpus"
#endif

namespace fixtures {

CatPtr chain(std::size_t n) {
  hace::PosetData d;
  for (std::size_t i = 0; i < n; ++i) {
    d.elements.push_back(std::to_string(i));
    if (i > 0) {
      d.le.emplace_back(std::to_string(i - 1), std::to_string(i));
    }
  }
  return hace::build_poset("chain" + std::to_string(n), d);
}

CatPtr cyclic(std::size_t n) {
  hace::MonoidData d;
  for (std::size_t i = 0; i < n; ++i) {
    d.elements.push_back(i == 0 ? "e" : "g" + std::to_string(i));
  }
  d.unit = "e";
  d.mul.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d.mul[i][j] = (i + j) % n;
    }
  }
  return hace::build_monoid("Z" + std::to_string(n), d);
}

CatPtr diamond() {
  return hace::build_poset("diamond",
                           {{"0", "x", "y", "1"}, {{"0", "x"}, {"0", "y"}, {"x", "1"}, {"y", "1"}}});
}

Instance instance(std::uint64_t seed, hace::Profile const& prof) {
  Instance in;
  in.seed  = seed;
  in.spec  = hace::generate(seed, prof);
  in.model = hace::resolve(in.spec);
  in.F     = in.model.functors.at("F");
  in.G     = in.model.functors.at("G");
  in.c     = in.F.base();
  return in;
}

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (auto const& e : std::filesystem::directory_iterator(HACE_CORPUS_DIR)) {
    if (e.path().extension() == ".cat") {
      out.push_back(e.path().stem().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string corpus_path(std::string const& stem, std::string const& ext) {
  if (ext == ".cat") {
    return std::string(HACE_CORPUS_DIR) + "/" + stem + ext;
  }
  return std::string(HACE_CORPUS_DIR) + "/golden/" + stem + ext;
}

}  // namespace fixtures
