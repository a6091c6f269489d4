#pragma once

#include <cstddef>

namespace cpslat::limits {

// Brute-force concept enumeration and exhaustive cover search are
// 2^min(|O|,|A|); 25 keeps the worst case around 3.3e7 closures.
inline constexpr std::size_t default_max_objects = 25;

// Bijection search bound for the composite-function isomorphism check.
inline constexpr std::size_t max_graph_nodes = 10;

/// Effective guard for the exact enumerations: default_max_objects, or the
/// value of CPS_LATTICE_MAX_OBJECTS when that variable is set.
std::size_t max_objects();

} // namespace cpslat::limits
