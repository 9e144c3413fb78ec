#pragma once

// Helpers shared by the unit tests and the acceptance gate.

#include <functional>
#include <optional>
#include <vector>
#include <string>

#include "oracles.hpp"
#include "semialg/coring.hpp"
#include "semialg/enumerate.hpp"
#include "semialg/module.hpp"

namespace support {

using namespace semialg;

// Builds phi: t.result -> s.result from pure tensors and checks it is a
// well-defined additive bijection with phi(m (x) n) = m (x) n. s must be the
// saturation of the tabulated factors of t. Returns a witness on failure.
std::optional<std::string> pure_iso(const TensorProduct& t, const SaturatedTensor& s);

// Same comparison against the brute-force oracle.
std::optional<std::string> oracle_iso(const oracle::TensorOracle& o, const SaturatedTensor& s);

// phi(m (x) n) = f(m, n) extended additively over s; checks that phi is a
// well-defined additive bijection onto q.
std::optional<std::string> symbol_iso(const SaturatedTensor& s, const FiniteModule& q,
                                      const std::function<Index(Index, Index)>& f);

struct Sweep {
    int cases = 0;
    std::string failure;  // first failing case, empty when all agree
    bool ok() const { return failure.empty(); }
};

// Rule tensor against saturation for every atom pair instantiated with at
// most max_size elements: named NAT atoms and NAT tables, REGULAR over every
// finite builtin of that size, REGULAR over NAT through its monogenic
// quotients, and QMODZ through its cyclic stages.
Sweep rule_vs_saturation(int max_size, int table_size);

// Saturation against the brute-force oracle for all pairs of enumerated
// modules over base with at most max_size elements, plus the swap symmetry.
Sweep saturation_vs_oracle(const SemiringPtr& base, int max_size);

std::vector<SemiringPtr> finite_builtins(int max_size);

// ϑ^r: M⊗S → M and ϑ^l: S⊗M → M are inverse to m ↦ m⊗1 and m ↦ 1⊗m, and
// the map M⊠S → c(M) induced by ϑ^r is a well-defined bijection. Checked on
// all elements when M is finite, on generators and small sums otherwise.
std::optional<std::string> unit_laws(const ModPtr& m);
// Gallery carriers plus the named atoms over NAT.
std::vector<ModPtr> gallery_modules();

// Over all modules of size <= max_size: 0 → L̄ → M → M/L → 0 is exact for
// every L ≤ M; 0 → X → Y is exact iff f is injective; Y → Z → 0 is exact iff
// g is surjective; 0 → X → Y → Z → 0 is exact iff f induces X ≅ Ker(g) and
// g induces Coker(f) ≅ Z (for every composable f, g).
struct ExactSweep {
    Sweep first_iso, item1, item2, item5;
    std::size_t sequences = 0, exact_sequences = 0;
    bool ok() const { return first_iso.ok() && item1.ok() && item2.ok() && item5.ok(); }
};
ExactSweep exactness_sweep(const SemiringPtr& base, int max_size);

// Ker(π_K⊗π_M) equals the closure of Im(ι_K̄⊗N) + Im(L⊗ι_M̄) in L⊗N and the
// sequence ending in L/K⊗N/M is exact, for all K ≤ L, M ≤ N of size <= max_size.
// Images are computed through the tensor maps and compared to pure_span.
Sweep bou_sweep(const SemiringPtr& base, int max_size);

// Coefficients of a coring whose carrier is free over a finite base.
std::optional<oracle::FreeCoring> free_coefficients(const Semicoring& c);

// Single-entry mutants that are known violations: counit-visible ones, and
// on free carriers every one the coefficient oracle rejects.
struct Classified {
    Mutation mutation;
    bool expected_invalid = false;
    bool oracle_decided = false;  // free carrier: verdict known both ways
};
std::vector<Classified> classify_mutations(const Semicoring& c);

}  // namespace support
