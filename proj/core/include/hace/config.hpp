#ifndef HACE_CONFIG_HPP_
#define HACE_CONFIG_HPP_

#include <cstdint>

namespace hace {

// Upper bound on the number of elements of any set the engine materialises.
// Defaults to 10^6; HACE_CAP in the environment overrides the default.
std::uint64_t size_cap();
void          set_size_cap(std::uint64_t cap);

// Throws Error(SizeCapExceeded) when n exceeds the cap.
void check_cap(std::uint64_t n, char const* what);

// Saturating arithmetic for size estimates.
std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_sat(std::uint64_t base, std::uint64_t exp);

}  // namespace hace

#endif  // HACE_CONFIG_HPP_
