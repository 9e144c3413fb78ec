#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semialg/finite_module.hpp"
#include "semialg/saturation.hpp"

namespace semialg {

// Structured semimodules: a formal direct sum of atoms. The named atoms
// CYCLIC, BOOLEAN and QMODZ only exist over NAT; REGULAR is the base
// semiring acting on itself (NAT over NAT is REGULAR); TABLE wraps any
// FiniteModule over the same base.
enum class AtomKind { Regular, Cyclic, Boolean, QmodZ, Table };

struct Atom {
    AtomKind kind = AtomKind::Regular;
    int n = 0;      // CYCLIC(n)
    FModPtr table;  // TABLE
    std::string show() const;
    bool operator==(const Atom& o) const;
};

Atom regular_atom();
Atom cyclic_atom(int n);
Atom boolean_atom();
Atom qmodz_atom();
Atom table_atom(FModPtr m);

// One coordinate. QMODZ uses v/d reduced with 0 <= v < d; every other atom
// keeps d = 1 (REGULAR over a finite base and TABLE store an index).
struct Val {
    std::int64_t v = 0;
    std::int64_t d = 1;
    auto operator<=>(const Val&) const = default;
};
using Elem = std::vector<Val>;

class Module {
public:
    Module(SemiringPtr base, std::vector<Atom> atoms);

    const SemiringPtr& base() const { return base_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t rank() const { return atoms_.size(); }
    bool nat_base() const { return !base_->is_finite(); }

    bool finite() const;
    // Number of elements; only for finite modules (throws Unsupported past 2^24).
    std::size_t size() const;
    std::size_t atom_size(std::size_t i) const;  // finite atoms only
    // Finite with at most limit elements; never throws.
    bool at_most(std::size_t limit) const;

    Elem zero() const { return Elem(atoms_.size()); }
    bool is_zero(const Elem& x) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem ract(const Elem& m, Scalar s) const;
    Elem lact(Scalar s, const Elem& m) const;
    Elem multiple(const Elem& m, std::uint64_t k) const;

    Val atom_add(std::size_t i, Val a, Val b) const;
    Val atom_ract(std::size_t i, Val a, Scalar s) const;
    Val atom_lact(std::size_t i, Scalar s, Val a) const;
    Val atom_multiple(std::size_t i, Val a, std::uint64_t k) const;

    // The element with x in slot i and zero elsewhere.
    Elem inject(std::size_t i, Val x) const;
    Val atom_one(std::size_t i) const;  // generator of a monogenic atom

    // A generating set: atom generators of monogenic atoms, table generators,
    // and 1/k (k <= qmodz_sample) for QMODZ, in which case it is a sample.
    std::vector<Elem> generators() const;
    bool generators_sampled() const;

    // Finite modules: lexicographic enumeration (first atom most significant).
    std::vector<Elem> elements() const;
    std::size_t index_of(const Elem& x) const;
    Elem element_at(std::size_t idx) const;
    FModPtr tabulate() const;

    // Checks that every coordinate is a canonical value for its atom.
    bool valid(const Elem& x) const;
    std::string show(const Elem& x) const;
    std::string show_atom_value(std::size_t i, Val x) const;
    // Parses an element name as produced by show(); throws InputError.
    Elem parse(const std::string& text) const;

    std::string describe() const;
    bool operator==(const Module& o) const;

    static constexpr int qmodz_sample = 12;

private:
    SemiringPtr base_;
    std::vector<Atom> atoms_;
};

using ModPtr = std::shared_ptr<const Module>;

ModPtr make_module(SemiringPtr base, std::vector<Atom> atoms);
ModPtr regular(const SemiringPtr& base);  // S as a module over itself
ModPtr free_structured(const SemiringPtr& base, int rank);
ModPtr as_structured(const FModPtr& m);   // a single TABLE atom
ModPtr structured_sum(const std::vector<ModPtr>& parts);

Report check_module_axioms(const Module& m, std::size_t samples = 2000, std::uint64_t seed = 7);

// ---- linear maps ------------------------------------------------------------

struct LinearMap {
    ModPtr src, dst;
    std::function<Elem(const Elem&)> fn;
    Elem operator()(const Elem& x) const { return fn(x); }
};

// Per atom of src: one image (of the generator) for REGULAR/CYCLIC/BOOLEAN,
// one image per element for TABLE. QMODZ atoms need map_from_fn.
LinearMap map_from_images(const ModPtr& src, const ModPtr& dst, std::vector<std::vector<Elem>> images);
LinearMap map_from_fn(const ModPtr& src, const ModPtr& dst, std::function<Elem(const Elem&)> fn);
LinearMap map_identity(const ModPtr& m);
LinearMap map_zero(const ModPtr& m, const ModPtr& n);
LinearMap map_compose(const LinearMap& g, const LinearMap& f);  // g after f
LinearMap map_add(const LinearMap& f, const LinearMap& g);
LinearMap from_finite(const FiniteMap& f, const ModPtr& src, const ModPtr& dst);
FiniteMap to_finite(const LinearMap& f);  // both ends finite

// Exhaustive when src is finite, otherwise generators plus sampled pairs.
Report check_linear_map(const LinearMap& f, std::size_t samples = 500, std::uint64_t seed = 11);
bool maps_equal(const LinearMap& f, const LinearMap& g, std::string* witness = nullptr);

// ---- tensor products ----------------------------------------------------------

enum class TensorMode { Rules, Saturate };

class TensorProduct {
public:
    struct Component {
        int i = 0, j = 0;  // atom of left, atom of right
        int out = -1;      // atom of the result, -1 when the summand vanishes
        enum class Rule { RegularLeft, RegularRight, CyclicCyclic, BoolBool, Zero, Saturated } rule = Rule::Zero;
        std::shared_ptr<const SaturatedTensor> sat;
    };

    ModPtr left, right, result;
    std::vector<Component> comps;
    TensorMode mode = TensorMode::Rules;
    std::size_t nodes_used = 0;

    Elem pure(const Elem& m, const Elem& n) const;
    // Pure tensors adding up to t.
    std::vector<std::pair<Elem, Elem>> decompose(const Elem& t) const;

private:
    friend std::shared_ptr<const TensorProduct> tensor(const ModPtr&, const ModPtr&, std::size_t, TensorMode);
    std::shared_ptr<const SaturatedTensor> whole;  // Saturate mode
};

using TensorPtr = std::shared_ptr<const TensorProduct>;

// Rules: distribute over atoms and apply the atom rule table (TABLE pairs are
// saturated). Saturate: tabulate both factors and saturate the whole thing.
// Errors: Unsupported for QMODZ against QMODZ or a TABLE, Undecided when the
// node budget runs out.
TensorPtr tensor(const ModPtr& m, const ModPtr& n, std::size_t budget = kDefaultBudget,
                 TensorMode mode = TensorMode::Rules);

// Sum of pure tensors naming t, e.g. "1⊗(0,1)".
std::string tensor_element_name(const TensorProduct& t, const Elem& x);

// (f (x) g)(m (x) n) = f(m) (x) g(n), computed through decompositions.
LinearMap tensor_maps(const TensorPtr& src, const TensorPtr& dst, const LinearMap& f, const LinearMap& g);

// (M (x) N) (x) P  ->  M (x) (N (x) P) and back.
LinearMap associator(const TensorPtr& mn_p, const TensorPtr& mn, const TensorPtr& m_np, const TensorPtr& np);
LinearMap associator_inverse(const TensorPtr& m_np, const TensorPtr& np, const TensorPtr& mn_p,
                             const TensorPtr& mn);

// theta^r: M (x) S -> M and theta^l: S (x) M -> M.
LinearMap unit_right(const TensorPtr& m_s);
LinearMap unit_left(const TensorPtr& s_m);

// Cancellative reflection c(M) with its projection, computed per atom.
struct Reflection {
    ModPtr module;
    LinearMap proj;
};
Reflection cancellative_reflection(const ModPtr& m);
Reflection takahashi_tensor(const ModPtr& m, const ModPtr& n, std::size_t budget = kDefaultBudget,
                            TensorMode mode = TensorMode::Rules);

// ---- predicates on structured maps ---------------------------------------------

// Injectivity of f, decided by enumeration of a finite source.
bool structured_injective(const LinearMap& f, std::string* witness = nullptr);
// Whether every submodule of m is subtractive (all atoms are groups).
bool is_group(const Module& m);

struct FlatnessCertificate {
    bool mono_flat = true;
    bool uniformly_flat = true;
    bool undecided = false;
    std::string witness;
    std::vector<std::string> notes;  // one per family member
};

// f (x) M for every f in the family; certificate relative to the family.
FlatnessCertificate flatness_probe(const ModPtr& m, const std::vector<LinearMap>& family,
                                   std::size_t budget = kDefaultBudget);

// ---- dual bases and the interchange map -----------------------------------------

struct DualBasis {
    std::vector<Index> points;
    std::vector<FiniteMap> functionals;
};
// p = sum p_l f_l(p) for every p.
bool check_dual_basis(const FModPtr& p, const DualBasis& b, std::string* witness = nullptr);
// Searches families of at most `bound` pairs. nullopt = none up to the bound.
std::optional<DualBasis> search_dual_basis(const FModPtr& p, int bound);

struct Interchange {
    TensorPtr source;               // M (x) prod X
    std::vector<TensorPtr> targets;  // M (x) X_l
    ModPtr product_target;
    LinearMap phi;
    bool surjective = false, injective = false;
};
Interchange product_interchange(const ModPtr& m, const std::vector<ModPtr>& family,
                                std::size_t budget = kDefaultBudget, TensorMode mode = TensorMode::Saturate);

}  // namespace semialg
