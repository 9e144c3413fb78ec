#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semialg/report.hpp"

namespace semialg {

// For a finite semiring a Scalar is an element index (the zero is always
// index 0); for NAT it is the natural number itself.
using Scalar = std::int64_t;

struct SemiringTables {
    std::string name;
    std::vector<std::string> elements;
    std::vector<std::vector<int>> add;
    std::vector<std::vector<int>> mul;
    int zero = 0;
    int one = 1;
};

struct StructuralPredicates {
    bool commutative = true;
    bool cancellative = true;
    bool additively_idempotent = true;
    std::string commutative_witness;
    std::string cancellative_witness;
    std::string idempotent_witness;
    bool sampled = false;
};

class Semiring {
public:
    // Builds a finite semiring from tables, relabelling so that the zero
    // comes first. Throws InputError on non-closed or ragged tables. Axioms
    // are not enforced here; see check_semiring_axioms.
    static Semiring from_tables(const SemiringTables& t);
    static Semiring nat();

    bool is_finite() const { return !effective_; }
    std::size_t size() const { return n_; }
    const std::string& name() const { return name_; }

    Scalar add(Scalar a, Scalar b) const {
        return effective_ ? a + b : add_[a * n_ + b];
    }
    Scalar mul(Scalar a, Scalar b) const {
        return effective_ ? a * b : mul_[a * n_ + b];
    }
    Scalar zero() const { return 0; }
    Scalar one() const { return one_; }

    std::vector<Scalar> elements() const;
    std::string show(Scalar s) const;
    std::optional<Scalar> parse(const std::string& name) const;

    const StructuralPredicates& predicates() const { return preds_; }
    bool commutative() const { return preds_.commutative; }

    SemiringTables tables() const;

    // Scalar k * 1 computed by repeated addition inside the semiring.
    Scalar from_count(std::uint64_t k) const;

    bool operator==(const Semiring& o) const;

private:
    Semiring() = default;
    void compute_predicates();

    std::string name_;
    bool effective_ = false;
    std::size_t n_ = 0;
    std::vector<Scalar> add_, mul_;
    Scalar one_ = 1;
    std::vector<std::string> names_;
    StructuralPredicates preds_;
};

using SemiringPtr = std::shared_ptr<const Semiring>;

// tag is one of BOOL, ZMOD, NATCAP, TROPCAP, IDEALS, NAT; param is n or k.
SemiringPtr builtin_semiring(const std::string& tag, int param = 0);
SemiringPtr make_semiring(Semiring s);

// Componentwise product S^k (used for Sweedler examples and for comparing
// dual semirings with pointwise function semirings).
SemiringPtr product_semiring(const SemiringPtr& s, int k);

Report check_semiring_axioms(const SemiringTables& t);
Report check_semiring_axioms(const Semiring& s, std::size_t samples = 10000,
                             std::uint64_t seed = 1);

StructuralPredicates structural_predicates(const Semiring& s, std::size_t samples = 10000,
                                           std::uint64_t seed = 1);

struct SemiringMorphism {
    SemiringPtr source, target;
    std::vector<Scalar> map;  // finite source only
    Scalar operator()(Scalar s) const { return map.at(s); }
};

Report check_semiring_morphism(const SemiringMorphism& f);

bool same_semiring(const SemiringPtr& a, const SemiringPtr& b);

}  // namespace semialg
