#include "hace/config.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

#include "hace/error.hpp"

namespace hace {

namespace {
  std::uint64_t initial_cap() {
    if (char const* env = std::getenv("HACE_CAP")) {
      char*              end = nullptr;
      unsigned long long v   = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) {
        return v;
      }
    }
    return 1'000'000;
  }

  std::atomic<std::uint64_t>& cap_ref() {
    static std::atomic<std::uint64_t> cap{initial_cap()};
    return cap;
  }
}  // namespace

std::uint64_t size_cap() {
  return cap_ref().load();
}

void set_size_cap(std::uint64_t cap) {
  cap_ref().store(cap);
}

void check_cap(std::uint64_t n, char const* what) {
  if (n > size_cap()) {
    throw Error(ErrorKind::SizeCapExceeded,
                std::string(what) + " needs " + std::to_string(n)
                    + " elements, cap is " + std::to_string(size_cap()));
  }
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    r = mul_sat(r, base);
  }
  return r;
}

}  // namespace hace
