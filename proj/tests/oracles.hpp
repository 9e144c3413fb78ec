#pragma once

// Brute-force reference computations, deliberately independent of the
// library algorithms they are compared against.

#include <map>
#include <utility>
#include <vector>

#include "semialg/finite_module.hpp"

namespace oracle {

using semialg::FiniteModule;
using semialg::Index;
using semialg::Scalar;

// M (x) N as a set of classes of partial matchings {(m_k, n_k)}: rows and
// columns pairwise distinct, no zero entries. Reductions merge two symbols
// sharing a row or a column; the equivalence is closed under adding a symbol.
struct TensorOracle {
    using State = std::vector<std::pair<Index, Index>>;
    std::vector<State> states;
    std::map<State, int> id;
    std::vector<int> cls;  // class per state
    int classes = 0;

    int state_of_symbol(Index m, Index n) const;  // {(m,n)} or the empty state
    int class_of_symbol(Index m, Index n) const { return cls[state_of_symbol(m, n)]; }
    // class of a sum of classes
    int add(int c1, int c2) const;

    std::vector<int> sum_table;  // classes x classes
};

TensorOracle tensor_oracle(const FiniteModule& m, const FiniteModule& n);

// Subtractive closure by the definition {g : g + l' = l'' for l', l'' in L}.
std::vector<char> closure(const FiniteModule& m, const std::vector<char>& in);

// All functions M -> N (as index vectors) that are additive and respect the
// action, by exhaustive enumeration of |N|^|M| candidates.
std::vector<std::vector<Index>> all_linear_maps(const FiniteModule& m, const FiniteModule& n);

// Congruence m1 ~ m2 iff m1 + l1 + x = m2 + l2 + x for some l1, l2 in L, x in M.
std::vector<int> bracket_classes(const FiniteModule& m, const std::vector<char>& in);

// A coalgebra on a free module with basis 0..k-1 given by coefficients:
// Δ(e_g) = Σ d[g][i][j] e_i⊗e_j and ε(e_g) = eps[g]. Axioms are checked by
// expanding the sums directly.
struct FreeCoring {
    std::vector<std::vector<std::vector<Scalar>>> d;
    std::vector<Scalar> eps;
};
bool free_coring_valid(const semialg::Semiring& s, const FreeCoring& c);

}  // namespace oracle
