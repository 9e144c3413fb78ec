#pragma once

#include <vector>

#include "semialg/finite_module.hpp"

namespace semialg {

// All commutative monoids with at most max_size elements, up to isomorphism,
// as (addition table) FiniteModules over NAT.
std::vector<FModPtr> enumerate_monoids(int max_size);

// All semimodules over a finite (or NAT) base with at most max_size elements,
// up to isomorphism. Left and right actions coincide. max_size <= 5.
std::vector<FModPtr> enumerate_modules(const SemiringPtr& base, int max_size);

}  // namespace semialg
