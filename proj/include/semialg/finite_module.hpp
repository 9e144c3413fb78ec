#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semialg/semiring.hpp"

namespace semialg {

using Index = int;

// A semimodule with an enumerated carrier {0,...,n-1}; index 0 is the zero.
// Over a finite base both a right and a left action table are stored (they
// coincide for the commutative builtins). Over NAT the action is the
// iterated sum and no table is kept.
class FiniteModule {
public:
    FiniteModule(SemiringPtr base, std::vector<std::string> names, std::vector<Index> add,
                 std::vector<Index> ract, std::vector<Index> lact);

    const SemiringPtr& base() const { return base_; }
    std::size_t size() const { return n_; }
    bool nat_base() const { return !base_->is_finite(); }

    Index add(Index a, Index b) const { return add_[a * n_ + b]; }
    Index ract(Index m, Scalar s) const {
        return nat_base() ? multiple(m, s) : ract_[m * base_->size() + s];
    }
    Index lact(Scalar s, Index m) const {
        return nat_base() ? multiple(m, s) : lact_[s * n_ + m];
    }
    Index multiple(Index m, std::uint64_t k) const;

    const std::string& name(Index i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<Index> find(const std::string& name) const;

    // Scalars that have to be checked for closure/compatibility. Empty over
    // NAT, where every scalar multiple is a sum.
    std::vector<Scalar> scalars() const;

    const std::vector<Index>& add_table() const { return add_; }
    const std::vector<Index>& ract_table() const { return ract_; }
    const std::vector<Index>& lact_table() const { return lact_; }

    bool same_tables(const FiniteModule& o) const;

private:
    SemiringPtr base_;
    std::size_t n_;
    std::vector<std::string> names_;
    std::vector<Index> add_, ract_, lact_;
};

using FModPtr = std::shared_ptr<const FiniteModule>;

struct ModuleTables {
    std::vector<std::string> elements;
    std::vector<std::vector<int>> add;
    std::vector<std::vector<int>> ract;  // [element][scalar]
    std::vector<std::vector<int>> lact;  // [scalar][element]; empty means "same as ract"
    int zero = 0;
};

// Throws InputError on shape problems (missing row, entry out of range).
FModPtr module_from_tables(const SemiringPtr& base, const ModuleTables& t);
ModuleTables module_tables(const FiniteModule& m);

Report check_semimodule_axioms(const FiniteModule& m);

FModPtr zero_module(const SemiringPtr& base);
FModPtr regular_module(const SemiringPtr& base);
FModPtr free_module(const SemiringPtr& base, int rank);
// Index of the basis vector e_i in free_module(base, rank).
Index free_basis_element(const SemiringPtr& base, int rank, int i);
// Coordinates of an element of free_module(base, rank).
std::vector<Scalar> free_coordinates(const SemiringPtr& base, int rank, Index x);
Index free_element(const SemiringPtr& base, const std::vector<Scalar>& coords);

// NAT-modules with finite carriers.
FModPtr cyclic_module(int n);                 // Z/n
FModPtr boolean_monoid();                     // {0,1}, 1+1 = 1
FModPtr monogenic_module(int index, int period);  // N/(index ~ index+period)

struct FiniteMap {
    FModPtr src, dst;
    std::vector<Index> img;
    Index operator()(Index i) const { return img[i]; }
    bool operator==(const FiniteMap& o) const { return img == o.img; }
};

struct DirectSum {
    FModPtr sum;
    std::vector<FiniteMap> inj, proj;
};
DirectSum direct_sum(const std::vector<FModPtr>& parts);

// View an A-module as a B-module along phi: B -> A.
FModPtr restrict_scalars(const FModPtr& m, const SemiringMorphism& phi);

// ---- subobjects -----------------------------------------------------------

struct Subset {
    FModPtr ambient;
    std::vector<char> in;
    bool contains(Index i) const { return in[i] != 0; }
    std::vector<Index> elements() const;
    std::size_t count() const;
    bool operator==(const Subset& o) const { return in == o.in; }
    bool subset_of(const Subset& o) const;
};

Subset make_subset(const FModPtr& m, const std::vector<Index>& elems);
Subset generated(const FModPtr& m, const std::vector<Index>& gens);
Subset zero_sub(const FModPtr& m);
Subset full_sub(const FModPtr& m);
Subset sub_sum(const Subset& a, const Subset& b);
Subset sub_meet(const Subset& a, const Subset& b);
bool is_submodule(const Subset& s, std::string* witness = nullptr);
std::vector<Subset> all_submodules(const FModPtr& m);

Subset subtractive_closure(const Subset& l);
bool is_subtractive(const Subset& l);

struct SubModule {
    FModPtr module;
    FiniteMap incl;
};
SubModule as_module(const Subset& l);

// ---- congruences and quotients -------------------------------------------

struct Congruence {
    FModPtr ambient;
    std::vector<int> cls;  // class id per element; class of 0 is 0
    int classes = 0;
    std::string kind;
    bool related(Index a, Index b) const { return cls[a] == cls[b]; }
};

Congruence congruence_from_classes(const FModPtr& m, std::vector<int> cls, std::string kind);
Congruence congruence_mod(const Subset& l);      // m1 + l1 = m2 + l2
Congruence congruence_bracket(const Subset& l);  // m1 + l1 + m' = m2 + l2 + m'
Congruence congruence_generated(const FModPtr& m, const std::vector<std::pair<Index, Index>>& pairs);
Report check_congruence(const Congruence& c);

struct Quotient {
    FModPtr module;
    FiniteMap proj;
};
// Throws InputError (with witness) when c is not a congruence.
Quotient quotient(const Congruence& c);
Quotient quotient_by(const Subset& l);
Quotient cancellative_reflection(const FModPtr& m);
bool is_cancellative(const FiniteModule& m, std::string* witness = nullptr);

// ---- linear maps ------------------------------------------------------------

Report check_linear(const FiniteMap& f);
FiniteMap identity_map(const FModPtr& m);
FiniteMap zero_map(const FModPtr& m, const FModPtr& n);
FiniteMap compose(const FiniteMap& g, const FiniteMap& f);  // g after f
FiniteMap map_sum(const FiniteMap& f, const FiniteMap& g);

struct HomOptions {
    std::size_t limit = 0;     // stop after this many maps (0 = all)
    bool injective_only = false;
};
void hom_for_each(const FModPtr& m, const FModPtr& n, const HomOptions& opt,
                  const std::function<bool(const FiniteMap&)>& visit);
std::vector<FiniteMap> hom_enumerate(const FModPtr& m, const FModPtr& n, std::size_t limit = 0);
std::optional<FiniteMap> find_isomorphism(const FModPtr& m, const FModPtr& n);

// A generating set chosen greedily in index order.
std::vector<Index> module_generators(const FiniteModule& m);

struct MapPredicates {
    bool injective = true, surjective = true, i_uniform = true, k_uniform = true;
    std::string injective_witness, surjective_witness, i_uniform_witness, k_uniform_witness;
    bool uniform() const { return i_uniform && k_uniform; }
};
MapPredicates map_predicates(const FiniteMap& f);
bool is_k_uniform(const FiniteMap& f, std::string* witness = nullptr);
bool is_injective(const FiniteMap& f);
bool is_surjective(const FiniteMap& f);
bool is_isomorphism(const FiniteMap& f);

Subset kernel(const FiniteMap& f);
Subset image(const FiniteMap& f);
Subset preimage(const FiniteMap& f, const Subset& s);
Quotient cokernel(const FiniteMap& f);

// For a non-injective f, two maps g,h from the regular module with f g = f h
// and g != h (monomorphisms are injective). Empty when f is injective or the
// base is NAT.
std::optional<std::pair<FiniteMap, FiniteMap>> distinguishing_pair(const FiniteMap& f);

// Map M/Ker(f) -> f(M) induced by f; an isomorphism iff f is k-uniform.
struct InducedIso {
    Quotient coimage;
    SubModule img;
    FiniteMap map;
    bool well_defined = true;
};
InducedIso first_iso_map(const FiniteMap& f);

// ---- exact sequences ------------------------------------------------------

enum class ExactMode { Exact, Semi, Proper, Quasi };
const char* exact_mode_name(ExactMode m);

struct JointVerdict {
    bool ok = true;
    bool image_is_kernel = true;
    bool closure_is_kernel = true;
    bool k_uniform = true;
    std::string witness;
};
struct ExactnessResult {
    bool ok = true;
    std::vector<JointVerdict> joints;
};
ExactnessResult exactness_check(const std::vector<FiniteMap>& seq, ExactMode mode);

FiniteMap zero_into(const FModPtr& m);   // 0 -> M
FiniteMap zero_onto(const FModPtr& m);   // M -> 0

}  // namespace semialg
