#include "doctest.h"

#include "semialg/semiring.hpp"

using namespace semialg;

TEST_CASE("builtin semirings satisfy the axioms") {
    CHECK(check_semiring_axioms(*builtin_semiring("BOOL")).ok());
    for (int n = 2; n <= 7; ++n) CHECK(check_semiring_axioms(*builtin_semiring("ZMOD", n)).ok());
    for (int k = 1; k <= 8; ++k) CHECK(check_semiring_axioms(*builtin_semiring("NATCAP", k)).ok());
    for (int k = 1; k <= 5; ++k) CHECK(check_semiring_axioms(*builtin_semiring("TROPCAP", k)).ok());
    for (int n : {2, 4, 6, 12, 30}) CHECK(check_semiring_axioms(*builtin_semiring("IDEALS", n)).ok());

    auto nat = check_semiring_axioms(*builtin_semiring("NAT"));
    CHECK(nat.ok());
    CHECK(nat.sampled);
}

TEST_CASE("planted absorption failure is reported with its witness") {
    auto t = builtin_semiring("BOOL")->tables();
    t.mul[1][0] = 1;
    auto r = check_semiring_axioms(t);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.find("absorption") != nullptr);
    CHECK_FALSE(r.find("absorption")->ok);
    CHECK(r.find("absorption")->witness == "(1,0)");
}

TEST_CASE("non-closed tables are a format error, not an axiom failure") {
    auto t = builtin_semiring("BOOL")->tables();
    t.add[1][1] = 5;
    auto r = check_semiring_axioms(t);
    CHECK_FALSE(r.format_error.empty());
    CHECK(r.checks.empty());
}

TEST_CASE("Z/4 passes all 64 triples") {
    auto r = check_semiring_axioms(*builtin_semiring("ZMOD", 4));
    CHECK(r.ok());
    CHECK_FALSE(r.sampled);
}

TEST_CASE("structural predicates") {
    auto b = structural_predicates(*builtin_semiring("BOOL"));
    CHECK(b.commutative);
    CHECK_FALSE(b.cancellative);
    CHECK(b.additively_idempotent);
    CHECK(b.cancellative_witness == "1+0 = 1+1 but 0 != 1");

    for (int n = 2; n <= 6; ++n) {
        auto z = structural_predicates(*builtin_semiring("ZMOD", n));
        CHECK(z.commutative);
        CHECK(z.cancellative);
        CHECK_FALSE(z.additively_idempotent);
    }
    for (int k = 1; k <= 4; ++k) CHECK(structural_predicates(*builtin_semiring("TROPCAP", k)).additively_idempotent);
}

TEST_CASE("IDEALS(4) is the chain (0) < (2) < (1)") {
    auto s = builtin_semiring("IDEALS", 4);
    REQUIRE(s->size() == 3);
    CHECK(s->show(0) == "(0)");
    auto two = *s->parse("(2)");
    auto one = s->one();
    CHECK(s->show(one) == "(1)");
    CHECK(s->add(two, one) == one);
    CHECK(s->mul(two, one) == two);
    CHECK(s->mul(two, two) == two);
    CHECK(s->add(two, 0) == two);
}

TEST_CASE("NATCAP(1) is isomorphic to BOOL") {
    auto a = builtin_semiring("NATCAP", 1);
    auto b = builtin_semiring("BOOL");
    SemiringMorphism f{a, b, {0, 1}};
    CHECK(check_semiring_morphism(f).ok());
    SemiringMorphism g{b, a, {0, 1}};
    CHECK(check_semiring_morphism(g).ok());
}

TEST_CASE("parameters out of range are rejected") {
    CHECK_THROWS_AS(builtin_semiring("ZMOD", 1), InputError);
    CHECK_THROWS_AS(builtin_semiring("NATCAP", 0), InputError);
    CHECK_THROWS_AS(builtin_semiring("IDEALS", 1), InputError);
    CHECK_THROWS_AS(builtin_semiring("REALS"), InputError);
}

TEST_CASE("product semiring is pointwise") {
    auto b2 = product_semiring(builtin_semiring("BOOL"), 2);
    CHECK(b2->size() == 4);
    CHECK(check_semiring_axioms(*b2).ok());
    CHECK_FALSE(b2->predicates().cancellative);
}
