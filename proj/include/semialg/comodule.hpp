#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semialg/coring.hpp"

namespace semialg {

// A right C-semicomodule: carrier M over the base of C with ρ: M → M ⊗ C.
struct Semicomodule {
    std::string name;
    CoringPtr coring;
    ModPtr carrier;
    TensorPtr mc;  // M ⊗ C
    LinearMap rho;

    std::string show_tensor(const Elem& t) const;  // element of mc->result, C part in coring labels
};

using ComodulePtr = std::shared_ptr<const Semicomodule>;

// Images of the carrier generators (map_from_images format). Throws
// InputError when an image is not an element of M ⊗ C.
ComodulePtr make_comodule(std::string name, const CoringPtr& c, const ModPtr& carrier,
                          std::vector<std::vector<Elem>> images, std::size_t budget = kDefaultBudget);
// For carriers with a QMODZ atom.
ComodulePtr make_comodule_fn(std::string name, const CoringPtr& c, const ModPtr& carrier,
                             std::function<Elem(const TensorProduct&, const Elem&)> rho,
                             std::size_t budget = kDefaultBudget);
ComodulePtr regular_comodule(const CoringPtr& c);  // (C, Δ)
// (X ⊗ C, X ⊗ Δ) followed by the associator.
ComodulePtr cofree_comodule(const ModPtr& x, const CoringPtr& c, std::size_t budget = kDefaultBudget);

// Linearity of ρ, coassociativity in (M⊗C)⊗C, the counit law and the
// retraction ϑ∘(M⊗ε) of ρ. Checked on carrier generators (sampled for QMODZ).
Report check_comodule(const Semicomodule& m, std::size_t budget = kDefaultBudget);

// The retraction ϑ∘(M⊗ε): M ⊗ C → M.
LinearMap counit_retraction(const Semicomodule& m);

// (f ⊗ C)∘ρ_M = ρ_N∘f on the generators of M.
Report comodule_hom_check(const LinearMap& f, const Semicomodule& m, const Semicomodule& n);
bool is_colinear(const LinearMap& f, const Semicomodule& m, const Semicomodule& n);
// All colinear maps between comodules with finite carriers.
std::vector<LinearMap> colinear_maps(const Semicomodule& m, const Semicomodule& n);

// Hom^C(Y, X⊗C) → Hom_A(Y, X), f ↦ ϑ∘(X⊗ε)∘f, and back g ↦ (g⊗C)∘ρ_Y.
struct AdjunctionReport {
    std::size_t colinear = 0, linear = 0;
    Report report;
};
AdjunctionReport check_cofree_adjunction(const Semicomodule& y, const ModPtr& x, std::size_t budget = kDefaultBudget);

// The comodule restricted to a subset of its (finite) carrier: ρ(s) has to
// come from S ⊗ C. Empty with a witness otherwise.
struct Restriction {
    ComodulePtr comodule;
    std::optional<LinearMap> inclusion;
    std::string witness;
};
Restriction restrict_comodule(const Semicomodule& m, const std::vector<Elem>& subset, const std::string& name);

// ---- the counterexample --------------------------------------------------------

struct TwoCoactions {
    CoringPtr coring;  // counterexample(n)
    ComodulePtr rho1, rho2, qmodz;
    LinearMap iota;    // CYCLIC(n) → QMODZ, r ↦ r/n
    FlatnessCertificate mono_flat;
    Report report;
};
TwoCoactions two_coactions_counterexample(int n);

// ---- pairings ------------------------------------------------------------------

// A left pairing (V, W) over a commutative base: one functional ⟨v,-⟩: W → A
// per listed v. When V is null it is the free module on the listed v's;
// otherwise the list is V's elements in index order.
struct Pairing {
    std::string name;
    SemiringPtr base;
    ModPtr V;
    ModPtr W;
    std::vector<std::string> v_names;
    std::vector<LinearMap> eval;
};

struct AlphaVerdict {
    bool injective = true, subtractive = true;
    std::string injective_witness, subtractive_witness;
    std::string module;
    bool ok() const { return injective && subtractive; }
};
// α_M: M ⊗ W → Hom_A(V, M), Σ mᵢ⊗wᵢ ↦ [v ↦ Σ mᵢ⟨v,wᵢ⟩]. M ⊗ W must be finite.
AlphaVerdict alpha_check(const Pairing& p, const ModPtr& m, std::size_t budget = kDefaultBudget);

struct AlphaCertificate {
    bool ok = true;
    std::vector<AlphaVerdict> members;
    std::string witness;
};
AlphaCertificate certify_alpha(const Pairing& p, const std::vector<ModPtr>& family, std::size_t budget = kDefaultBudget);
// All modules of size <= 4 over the base, plus CYCLIC(2..4) and BOOLEAN over NAT.
std::vector<ModPtr> default_alpha_family(const SemiringPtr& base);

// The canonical pairing of a free module A^n with its coordinate functionals.
Pairing free_pairing(const SemiringPtr& a, int n);
// (A, A) with ⟨1, 1⟩ = 1.
Pairing trivial_pairing(const SemiringPtr& a);
// (*W, W): V free on the given functionals.
Pairing functional_pairing(const ModPtr& w, std::vector<std::string> names, std::vector<LinearMap> functionals);
// (V′ ⊗ V, W ⊗ W′) with ⟨v′⊗v, w⊗w′⟩ = ⟨v,w⟩⟨v′,w′⟩.
Pairing pairing_tensor(const Pairing& p, const Pairing& q, std::size_t budget = kDefaultBudget);

// A measuring left pairing (𝒜, C): 𝒜 a finite A-semiring given by tables,
// its unit map η: A → 𝒜 and the evaluation ⟨a, g⟩ on the generators of C.
struct MeasuringPairing {
    std::string name;
    SemiringPtr algebra;
    CoringPtr coring;
    SemiringMorphism unit;
    std::vector<LinearMap> kappa;  // ⟨a,-⟩ per element of 𝒜

    ModPtr algebra_over_base() const;  // 𝒜 as an A-module along η
    Pairing as_pairing() const;        // (𝒜_A, C)
    FModPtr restrict(const FModPtr& m) const;  // an 𝒜-module as an A-module
};

// eval[a][k] = ⟨a, g_k⟩ for the generators g_k of C.
MeasuringPairing measuring_pairing(std::string name, const SemiringPtr& algebra, const CoringPtr& c,
                                   const SemiringMorphism& unit, const std::vector<std::vector<Scalar>>& eval);
// (*C, C) with ⟨f, c⟩ = f(c), for the ⋆_l dual.
MeasuringPairing dual_pairing(const DualSemiring& d);
// κ: 𝒜 → (*C, ⋆_l) is a semiring morphism and A-linear along η.
Report check_measuring(const MeasuringPairing& p);

// m·a = Σ m₀⟨a, m₁⟩ on a comodule with a finite carrier; element indices are
// those of carrier->tabulate(). 𝒜 has to be commutative (the module type
// stores a left action too).
FModPtr induced_action(const MeasuringPairing& p, const Semicomodule& m);

struct RationalPart {
    FModPtr ambient;  // over 𝒜
    Subset part;
    bool refused = false;
    std::string reason;
    // Representing tensor per member (in ambient_tensor, indexed like ambient).
    TensorPtr ambient_tensor;
    std::vector<std::optional<Elem>> representing;
    ComodulePtr comodule;  // the part with its coaction
    Report report;
};
// Refused unless the pairing passes alpha_check on the ambient module.
RationalPart rational_part(const MeasuringPairing& p, const FModPtr& m, std::size_t budget = kDefaultBudget);

// Items 1-5 of the closure lemma, and the membership criterion for K̄ ⊗ W.
Report rat_property_suite(const MeasuringPairing& p, const std::vector<FModPtr>& family,
                          std::size_t budget = kDefaultBudget);
// Σ lᵢ⊗wᵢ ∈ K̄ ⊗ W iff Σ lᵢ⟨v,wᵢ⟩ ∈ K̄ for all v, over all K ≤ L.
Report q2_criterion(const Pairing& p, const ModPtr& l, std::size_t budget = kDefaultBudget);

// 𝒜* = Hom_A(𝒜, A) with (φ·a)(b) = φ(ab), and χ: C → 𝒜*, c ↦ ⟨-, c⟩.
struct DualModule {
    FModPtr module;
    std::vector<Index> chi;  // per element of carrier->tabulate()
};
DualModule algebra_dual(const MeasuringPairing& p);
// Rat^C(𝒜*) is the image of χ, and χ is 𝒜-linear and injective.
Report rat_of_dual(const MeasuringPairing& p, std::size_t budget = kDefaultBudget);

// rational_part(induced_action(M)) is M with the same coaction.
Report rational_round_trip(const MeasuringPairing& p, const Semicomodule& m, std::size_t budget = kDefaultBudget);
// Colinear maps M → N are exactly the 𝒜-linear maps of the induced modules.
Report hom_comparison(const MeasuringPairing& p, const Semicomodule& m, const Semicomodule& n);
// (C*, ⋆_r) ≅ End^C(C), f ↦ [c ↦ Σ f(c₁)c₂], inverse g ↦ ε∘g.
Report end_isomorphism(const CoringPtr& c);

// ---- limits and colimits ---------------------------------------------------------

struct Coequalizer {
    ComodulePtr comodule;
    LinearMap projection;
    Report report;
};
// Formed in A-modules; the coaction is induced through π ⊗ C. Universal
// property checked against every colinear h: N → X (X in targets) with hf = hg.
Coequalizer comodule_coequalizer(const LinearMap& f, const LinearMap& g, const Semicomodule& m,
                                 const Semicomodule& n, const std::vector<ComodulePtr>& targets = {});

struct Equalizer {
    bool refused = false;
    std::string reason;
    ComodulePtr comodule;
    std::optional<LinearMap> inclusion;
    Report report;
};
// Refused unless the certificate says C is mono-flat on its family.
// flatness_probe of C against the inclusion of {m | f(m) = g(m)}.
FlatnessCertificate equalizer_certificate(const LinearMap& f, const LinearMap& g, const Semicomodule& m);
Equalizer comodule_equalizer(const LinearMap& f, const LinearMap& g, const Semicomodule& m, const Semicomodule& n,
                             const FlatnessCertificate& cert, const std::vector<ComodulePtr>& sources = {});

// Every submodule of the finite carrier is subtractive.
bool completely_subtractive(const Module& m, std::string* witness = nullptr);

struct FiniteClosure {
    bool applicable = true;
    std::string reason;
    std::vector<Elem> elements;  // N = Σ mᵢ𝒜
    std::vector<Elem> generators;
    ComodulePtr comodule;
};
FiniteClosure finiteness_closure(const MeasuringPairing& p, const Semicomodule& m, const std::vector<Elem>& f);

struct ColinearPair {
    LinearMap f, g;
};
struct CogeneratorVerdict {
    bool ok = true;
    std::vector<std::string> notes;
};
// For each pair (f, g: M → N) search h: N → Q ⊗ C colinear with hf != hg.
CogeneratorVerdict cogenerator_probe(const ModPtr& q, const Semicomodule& n, const std::vector<ColinearPair>& pairs);

}  // namespace semialg
