#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "semialg/finite_module.hpp"

namespace semialg {

inline constexpr std::size_t kDefaultBudget = 1000000;

// M (right module) tensor N (left module) over their common base, computed
// by enumerating the commutative monoid presented by pure-tensor symbols and
// the bilinearity/balancing relations. Node budget exceeded -> Undecided.
struct SaturatedTensor {
    FModPtr left, right;
    FModPtr result;
    std::vector<Index> pure;  // pure[m * |N| + n] = class of m (x) n
    // For each class a shortest list of pure tensors adding up to it.
    std::vector<std::vector<std::pair<Index, Index>>> normal_form;
    std::size_t nodes_used = 0;

    Index pure_of(Index m, Index n) const { return pure[m * right->size() + n]; }
};

SaturatedTensor saturate_tensor(const FModPtr& m, const FModPtr& n, std::size_t budget = kDefaultBudget);

// f (x) g between two saturated tensors; throws std::logic_error when the
// relations are not respected (which would indicate a bug).
FiniteMap saturated_tensor_map(const SaturatedTensor& src, const SaturatedTensor& dst, const FiniteMap& f,
                               const FiniteMap& g);

// Image of (iota_K (x) N) inside M (x) N, i.e. the submodule generated by
// pure tensors k (x) n with k in K and n in N' (both given as subsets).
Subset pure_span(const SaturatedTensor& t, const Subset& left_part, const Subset& right_part);

}  // namespace semialg
