#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semialg/module.hpp"

namespace semialg {

// A semicoring over a commutative base A. The carrier is a structured
// module; Δ and ε are given by their values on the atom generators (one per
// monogenic atom, one per element of a TABLE atom), the format of
// map_from_images. C ⊗ C is computed once by the tensor rules.
struct Semicoring {
    std::string name;
    SemiringPtr base;
    ModPtr carrier;
    TensorPtr cc;
    std::vector<std::vector<Elem>> delta_images;  // into cc->result
    std::vector<std::vector<Elem>> eps_images;    // into regular(base)
    ModPtr scalars;                               // regular(base)
    std::vector<std::string> labels;              // basis names for free carriers
    LinearMap delta, eps;

    // Generators in the order of delta_images (atom by atom).
    std::vector<Elem> generators() const;
    Scalar eps_of(const Elem& c) const;
    std::string show(const Elem& c) const;
    std::string show_tensor(const Elem& t) const;  // element of cc->result
};

using CoringPtr = std::shared_ptr<const Semicoring>;

// Throws InputError when an image is not an element of its target.
CoringPtr make_semicoring(std::string name, const ModPtr& carrier, std::vector<std::vector<Elem>> delta_images,
                          std::vector<std::vector<Elem>> eps_images, std::vector<std::string> labels = {},
                          std::size_t budget = kDefaultBudget);
// Same carrier and C ⊗ C as c, new structure maps.
CoringPtr with_structure(const Semicoring& c, std::string name, std::vector<std::vector<Elem>> delta_images,
                         std::vector<std::vector<Elem>> eps_images);

// Linearity of Δ and ε, coassociativity (compared in (C⊗C)⊗C) and both
// counit laws, each checked on every generator. Witnesses name a generator.
Report check_semicoring(const Semicoring& c, std::size_t budget = kDefaultBudget);

// ---- gallery ------------------------------------------------------------------

CoringPtr sweedler_identity(const SemiringPtr& a);  // A ⊗_A A = A, Δ(1) = 1⊗1
// Carrier A ⊕ M, Δ(a,m) = (a,0)⊗(1,0) + (1,0)⊗(0,m) + (0,m)⊗(1,0), ε(a,m) = a.
CoringPtr trivial_coextension(const ModPtr& m);
CoringPtr grouplike(const SemiringPtr& s, const std::vector<std::string>& xs);
enum class PolyVariant { GrouplikePowers, Binomial };
CoringPtr polynomial(const SemiringPtr& s, int d, PolyVariant v);
// Words over {x,y} of length <= L over BOOL. 1: w ↦ w⊗w, 2: deconcatenation,
// 3: Δ(x) = 1⊗x + x⊗1 extended multiplicatively.
CoringPtr words(int length, int variant);
// NAT ⊕ CYCLIC(n) over NAT.
CoringPtr counterexample(int n);

struct GalleryEntry {
    std::string key;  // name used by the text format
    CoringPtr coring;
};
std::vector<GalleryEntry> gallery();

// ---- mutations ----------------------------------------------------------------

struct Mutation {
    std::string description;
    CoringPtr coring;
    // The change moves (ε⊗C)Δ or (C⊗ε)Δ off the identity on some generator,
    // so the mutant violates a counit law whatever the checker says.
    bool counit_visible = false;
};
// Every single-entry change of ε on a generator and of a Δ coordinate.
// Some of these are again semicorings.
std::vector<Mutation> single_entry_mutations(const Semicoring& c);
// The counit-visible ones: violations known before any check runs.
std::vector<Mutation> mutation_corpus(const Semicoring& c);

// ---- duals ----------------------------------------------------------------------

enum class DualSide { Left, Right, Two };
const char* dual_side_name(DualSide s);

struct DualSemiring {
    CoringPtr origin;
    DualSide side = DualSide::Left;
    std::vector<std::vector<std::vector<Elem>>> homs;  // images per atom, into regular(base)
    std::vector<LinearMap> maps;
    SemiringTables tables;  // pointwise sum, convolution product, unit ε
    SemiringPtr semiring;
    int unit = 0;
    int index_of(const LinearMap& f) const;
};

// Throws Unsupported for an infinite base or more than max_homs functionals.
DualSemiring dual_semiring(const CoringPtr& c, DualSide side, std::size_t max_homs = 4096);
// Associativity and two-sided unit ε, exhaustively.
Report check_dual(const DualSemiring& d);

// Brute-force search over bijections preserving zero (sizes up to 8).
std::optional<SemiringMorphism> find_semiring_isomorphism(const SemiringPtr& a, const SemiringPtr& b);

// ---- morphisms and coideals ----------------------------------------------------

Report check_coring_morphism(const LinearMap& f, const Semicoring& src, const Semicoring& dst);

struct CoidealVerdict {
    bool uniform = false;
    bool delta_condition = false;
    bool counit_condition = false;
    bool applicable = false;  // K uniform
    bool is_coideal = false;  // condition on Δ(K) and ε(K)
    bool quotient_ok = false;  // C/K is a semicoring and π_K a morphism
    std::string witness;
    CoringPtr quotient;
    std::optional<LinearMap> projection;
};
// K given as a subset of the tabulated carrier.
CoidealVerdict coideal_check(const CoringPtr& c, const std::vector<Elem>& k);

}  // namespace semialg
