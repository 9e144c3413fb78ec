#include "doctest.h"

#include "support.hpp"

using namespace semialg;

namespace {

SemiringPtr B() { return builtin_semiring("BOOL"); }

Elem by_label(const Semicoring& c, const std::string& label) {
    for (std::size_t i = 0; i < c.labels.size(); ++i)
        if (c.labels[i] == label) return c.carrier->inject(i, c.carrier->atom_one(i));
    FAIL("no label " << label);
    return {};
}

}  // namespace

TEST_CASE("gallery corings pass the checker") {
    auto g = gallery();
    CHECK(g.size() == 10);
    for (const auto& e : g) {
        auto r = check_semicoring(*e.coring);
        INFO(e.coring->name);
        CHECK(r.ok());
        CHECK_FALSE((r.sampled && e.coring->carrier->finite()));
    }
}

TEST_CASE("grouplike with a changed counit value fails at x") {
    auto c = grouplike(B(), {"x", "y"});
    auto eps = c->eps_images;
    eps[0][0] = Elem{Val{0, 1}};
    auto bad = with_structure(*c, "planted", c->delta_images, eps);
    auto r = check_semicoring(*bad);
    REQUIRE_FALSE(r.ok());
    CHECK(r.find("left counit")->witness == "x");
    CHECK(r.find("coassociativity")->ok);
}

TEST_CASE("deconcatenation and unshuffle formulas") {
    auto w2 = words(2, 2);
    CHECK(w2->show_tensor(w2->delta(by_label(*w2, "xy"))) == "1⊗xy + x⊗y + xy⊗1");
    CHECK(w2->eps_of(by_label(*w2, "xy")) == 0);
    CHECK(w2->eps_of(by_label(*w2, "1")) == B()->one());
    auto w3 = words(2, 3);
    CHECK(w3->show_tensor(w3->delta(by_label(*w3, "xy"))) == "1⊗xy + x⊗y + y⊗x + xy⊗1");
    auto w1 = words(2, 1);
    CHECK(w1->show_tensor(w1->delta(by_label(*w1, "yx"))) == "yx⊗yx");
}

TEST_CASE("binomial coalgebra in characteristic 2") {
    auto p = polynomial(builtin_semiring("ZMOD", 2), 2, PolyVariant::Binomial);
    CHECK(p->show_tensor(p->delta(by_label(*p, "x^2"))) == "1⊗x^2 + x^2⊗1");
    CHECK(check_semicoring(*p).ok());
    auto p3 = polynomial(builtin_semiring("ZMOD", 3), 4, PolyVariant::Binomial);
    CHECK(check_semicoring(*p3).ok());
    auto q = polynomial(builtin_semiring("NATCAP", 3), 3, PolyVariant::Binomial);
    CHECK(check_semicoring(*q).ok());
}

TEST_CASE("counterexample coring") {
    auto c = counterexample(4);
    const Module& C = *c->carrier;
    const Elem e = C.inject(0, C.atom_one(0));
    const Elem z = C.inject(1, C.atom_one(1));
    CHECK(c->cc->result->describe() == "NAT ⊕ CYCLIC(4) ⊕ CYCLIC(4) ⊕ CYCLIC(4)");
    CHECK(c->show_tensor(c->delta(e)) == "(1,0)⊗(1,0)");
    Elem dz = c->delta(z);
    CHECK(dz[3].v == 1);  // CYCLIC(4) ⊗ CYCLIC(4) coordinate
    CHECK(check_semicoring(*c).ok());
    for (int n = 2; n <= 7; ++n) CHECK(check_semicoring(*counterexample(n)).ok());
}

TEST_CASE("other constructor instances") {
    CHECK(check_semicoring(*grouplike(builtin_semiring("ZMOD", 3), {"x", "y"})).ok());
    CHECK(check_semicoring(*grouplike(B(), {})).ok());
    CHECK(check_semicoring(*trivial_coextension(make_module(B(), {}))).ok());
    CHECK(check_semicoring(*trivial_coextension(free_structured(B(), 2))).ok());
    CHECK(check_semicoring(*trivial_coextension(as_structured(cyclic_module(3)))).ok());
    CHECK(check_semicoring(*sweedler_identity(builtin_semiring("TROPCAP", 2))).ok());
    for (int L = 0; L <= 3; ++L)
        for (int v = 1; v <= 3; ++v) CHECK(check_semicoring(*words(L, v)).ok());
}

TEST_CASE("coefficient oracle agrees with the gallery") {
    for (const auto& e : gallery()) {
        auto f = support::free_coefficients(*e.coring);
        if (!f) continue;
        INFO(e.coring->name);
        CHECK(oracle::free_coring_valid(*e.coring->base, *f));
    }
}

TEST_CASE("single-entry mutations: checker and oracle agree") {
    std::size_t invalid = 0, valid = 0;
    for (const auto& e : gallery())
        for (const auto& x : support::classify_mutations(*e.coring)) {
            auto r = check_semicoring(*x.mutation.coring);
            INFO(x.mutation.description);
            if (x.expected_invalid) {
                ++invalid;
                CHECK_FALSE(r.ok());
                REQUIRE(r.first_failure() != nullptr);
                CHECK_FALSE(r.first_failure()->witness.empty());
            } else if (x.oracle_decided) {
                ++valid;
                CHECK(r.ok());
            }
        }
    CHECK(invalid >= 20);
    CHECK(valid > 0);  // some single-entry changes give new corings
}

TEST_CASE("mutation corpus entries are all counit-visible") {
    for (const auto& m : mutation_corpus(*grouplike(B(), {"x", "y"}))) CHECK(m.counit_visible);
    CHECK(mutation_corpus(*grouplike(B(), {"x", "y"})).size() == 10);
}

TEST_CASE("dual semirings") {
    for (const auto& e : gallery()) {
        if (!e.coring->base->is_finite()) continue;
        for (auto side : {DualSide::Left, DualSide::Right, DualSide::Two}) {
            auto d = dual_semiring(e.coring, side);
            INFO(e.coring->name << " " << dual_side_name(side));
            CHECK(check_dual(d).ok());
        }
    }
    auto g = grouplike(B(), {"x", "y"});
    auto d = dual_semiring(g, DualSide::Left);
    auto iso = find_semiring_isomorphism(d.semiring, product_semiring(B(), 2));
    REQUIRE(iso.has_value());
    CHECK(check_semiring_morphism(*iso).ok());
    // cocommutative: left and right products agree
    CHECK(dual_semiring(g, DualSide::Right).tables.mul == d.tables.mul);
    auto p1 = polynomial(builtin_semiring("ZMOD", 2), 3, PolyVariant::GrouplikePowers);
    CHECK(dual_semiring(p1, DualSide::Right).tables.mul == dual_semiring(p1, DualSide::Left).tables.mul);
    // trivial coring: dual is A
    auto s = dual_semiring(sweedler_identity(builtin_semiring("ZMOD", 3)), DualSide::Left);
    CHECK(find_semiring_isomorphism(s.semiring, builtin_semiring("ZMOD", 3)).has_value());
    CHECK_THROWS_AS(dual_semiring(counterexample(4), DualSide::Left), Unsupported);
}

TEST_CASE("deconcatenation dual at L = 1 is truncated concatenation") {
    auto w = words(1, 2);
    auto d = dual_semiring(w, DualSide::Two);
    // indicator functionals of the words 1, x, y
    auto ind = [&](int k) {
        std::vector<Scalar> v(3, 0);
        v[k] = 1;
        for (std::size_t h = 0; h < d.maps.size(); ++h) {
            bool ok = true;
            for (int j = 0; j < 3; ++j) ok = ok && d.maps[h](w->carrier->inject(j, w->carrier->atom_one(j)))[0].v == v[j];
            if (ok) return static_cast<int>(h);
        }
        return -1;
    };
    const int one = ind(0), x = ind(1), y = ind(2);
    CHECK(d.unit == one);
    CHECK(d.tables.mul[x][y] == 0);  // xy has length 2
    CHECK(d.tables.mul[one][x] == x);
    CHECK(d.tables.mul[y][one] == y);
}

TEST_CASE("coideals") {
    auto c = trivial_coextension(regular(B()));
    const Module& C = *c->carrier;
    auto zero = coideal_check(c, {C.zero()});
    CHECK(zero.is_coideal);
    CHECK(zero.quotient_ok);
    auto whole = coideal_check(c, C.elements());
    CHECK_FALSE(whole.is_coideal);
    CHECK_FALSE(whole.quotient_ok);
    Elem m = C.inject(1, C.atom_one(1));
    auto km = coideal_check(c, {C.zero(), m});
    CHECK(km.applicable);
    CHECK(km.is_coideal);
    REQUIRE(km.quotient_ok);
    CHECK(km.quotient->carrier->size() == 2);

    // condition on Δ(K), ε(K) agrees with the quotient construction on every uniform K
    for (const auto& e : gallery()) {
        const auto& cc = e.coring;
        if (!cc->carrier->finite() || cc->carrier->size() > 8) continue;
        auto Cf = cc->carrier->tabulate();
        for (const auto& s : all_submodules(Cf)) {
            std::vector<Elem> ks;
            for (Index i : s.elements()) ks.push_back(cc->carrier->element_at(i));
            auto v = coideal_check(cc, ks);
            if (!v.applicable) continue;
            INFO(cc->name);
            CHECK(v.is_coideal == v.quotient_ok);
        }
    }
}

TEST_CASE("coring morphisms") {
    for (const auto& e : gallery()) CHECK(check_coring_morphism(map_identity(e.coring->carrier), *e.coring, *e.coring).ok());
    // ε as a morphism to the trivial coring on A
    for (const auto& e : gallery()) {
        auto triv = sweedler_identity(e.coring->base);
        CHECK(check_coring_morphism(e.coring->eps, *e.coring, *triv).ok());
    }
    auto c = grouplike(B(), {"x", "y"});
    auto swap = map_from_images(c->carrier, c->carrier,
                                {{c->carrier->inject(1, {1, 1})}, {c->carrier->inject(0, {1, 1})}});
    CHECK(check_coring_morphism(swap, *c, *c).ok());
    auto fold = map_from_images(c->carrier, c->carrier,
                                {{c->carrier->inject(0, {1, 1})}, {c->carrier->add(c->carrier->inject(0, {1, 1}), c->carrier->inject(1, {1, 1}))}});
    CHECK_FALSE(check_coring_morphism(fold, *c, *c).ok());
}
