#include "semialg/coring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace semialg {

namespace {

Elem scal(Scalar s) { return Elem{Val{s, 1}}; }

Elem basis(const Module& m, std::size_t i) { return m.inject(i, m.atom_one(i)); }

std::string show_scalar(const SemiringPtr& s, Scalar v) { return s->is_finite() ? s->show(v) : std::to_string(v); }

}  // namespace

std::vector<Elem> Semicoring::generators() const {
    std::vector<Elem> out;
    const Module& C = *carrier;
    for (std::size_t i = 0; i < C.rank(); ++i) {
        const auto& at = C.atoms()[i];
        if (at.kind == AtomKind::Table) {
            for (std::size_t e = 0; e < at.table->size(); ++e) out.push_back(C.inject(i, Val{static_cast<std::int64_t>(e), 1}));
        } else {
            out.push_back(basis(C, i));
        }
    }
    return out;
}

Scalar Semicoring::eps_of(const Elem& c) const { return eps(c)[0].v; }

std::string Semicoring::show(const Elem& c) const {
    if (labels.empty()) return carrier->show(c);
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].v == 0) continue;
        if (!out.empty()) out += "+";
        const bool unit = base->is_finite() ? c[i].v == base->one() : c[i].v == 1;
        if (!unit) out += show_scalar(base, c[i].v) + "·";
        out += labels[i];
    }
    return out.empty() ? "0" : out;
}

std::string Semicoring::show_tensor(const Elem& t) const {
    std::string out;
    for (const auto& [a, b] : cc->decompose(t)) {
        if (!out.empty()) out += " + ";
        out += show(a) + "⊗" + show(b);
    }
    return out.empty() ? "0" : out;
}

namespace {

CoringPtr assemble(std::string name, const ModPtr& carrier, TensorPtr cc, std::vector<std::vector<Elem>> delta_images,
                   std::vector<std::vector<Elem>> eps_images, std::vector<std::string> labels) {
    auto c = std::make_shared<Semicoring>();
    c->name = std::move(name);
    c->base = carrier->base();
    c->carrier = carrier;
    c->cc = std::move(cc);
    c->scalars = regular(c->base);
    c->labels = std::move(labels);
    c->delta = map_from_images(carrier, c->cc->result, delta_images);
    c->eps = map_from_images(carrier, c->scalars, eps_images);
    c->delta_images = std::move(delta_images);
    c->eps_images = std::move(eps_images);
    return c;
}

}  // namespace

CoringPtr make_semicoring(std::string name, const ModPtr& carrier, std::vector<std::vector<Elem>> delta_images,
                          std::vector<std::vector<Elem>> eps_images, std::vector<std::string> labels,
                          std::size_t budget) {
    if (!carrier->base()->commutative()) throw InputError("semicorings need a commutative base");
    auto cc = tensor(carrier, carrier, budget);
    return assemble(std::move(name), carrier, std::move(cc), std::move(delta_images), std::move(eps_images),
                    std::move(labels));
}

CoringPtr with_structure(const Semicoring& c, std::string name, std::vector<std::vector<Elem>> delta_images,
                         std::vector<std::vector<Elem>> eps_images) {
    return assemble(std::move(name), c.carrier, c.cc, std::move(delta_images), std::move(eps_images), c.labels);
}

Report check_semicoring(const Semicoring& c, std::size_t budget) {
    Report r;
    r.merge(check_linear_map(c.delta), "Δ ");
    r.merge(check_linear_map(c.eps), "ε ");
    if (!r.ok()) return r;
    const Module& C = *c.carrier;
    const auto gens = c.generators();

    auto ccl = tensor(c.cc->result, c.carrier, budget);  // (C⊗C)⊗C
    auto ccr = tensor(c.carrier, c.cc->result, budget);  // C⊗(C⊗C)
    auto id = map_identity(c.carrier);
    auto lhs = tensor_maps(c.cc, ccl, c.delta, id);
    auto rhs = map_compose(associator_inverse(ccr, c.cc, ccl, c.cc), tensor_maps(c.cc, ccr, id, c.delta));
    bool coassoc = true;
    std::string wc;
    for (const auto& g : gens) {
        const Elem d = c.delta(g);
        if (lhs(d) != rhs(d)) {
            coassoc = false;
            wc = c.show(g);
            break;
        }
    }
    r.add("coassociativity", coassoc, wc);

    bool left = true, right = true;
    std::string wl, wr;
    for (const auto& g : gens) {
        Elem l = C.zero(), rr = C.zero();
        for (const auto& [a, b] : c.cc->decompose(c.delta(g))) {
            l = C.add(l, C.lact(c.eps_of(a), b));
            rr = C.add(rr, C.ract(a, c.eps_of(b)));
        }
        if (left && l != g) {
            left = false;
            wl = c.show(g);
        }
        if (right && rr != g) {
            right = false;
            wr = c.show(g);
        }
    }
    r.add("left counit", left, wl);
    r.add("right counit", right, wr);
    return r;
}

// ---- gallery ------------------------------------------------------------------

CoringPtr sweedler_identity(const SemiringPtr& a) {
    auto C = regular(a);
    auto cc = tensor(C, C);
    const Elem one = basis(*C, 0);
    return assemble("sweedler(" + a->name() + ")", C, cc, {{cc->pure(one, one)}}, {{one}}, {"1"});
}

CoringPtr trivial_coextension(const ModPtr& m) {
    const auto& A = m->base();
    auto C = structured_sum({regular(A), m});
    auto cc = tensor(C, C);
    const Elem e = basis(*C, 0);
    const Elem one = scal(A->is_finite() ? A->one() : 1);
    std::vector<std::vector<Elem>> d{{cc->pure(e, e)}}, eps{{one}};
    for (std::size_t i = 1; i < C->rank(); ++i) {
        const auto& at = C->atoms()[i];
        std::vector<Elem> gs;
        if (at.kind == AtomKind::Table) {
            for (std::size_t k = 0; k < at.table->size(); ++k) gs.push_back(C->inject(i, Val{static_cast<std::int64_t>(k), 1}));
        } else {
            gs.push_back(basis(*C, i));
        }
        std::vector<Elem> di, ei;
        for (const auto& g : gs) {
            di.push_back(cc->result->add(cc->pure(e, g), cc->pure(g, e)));
            ei.push_back(scal(0));
        }
        d.push_back(std::move(di));
        eps.push_back(std::move(ei));
    }
    return assemble("coext(" + A->name() + "," + m->describe() + ")", C, cc, std::move(d), std::move(eps), {});
}

CoringPtr grouplike(const SemiringPtr& s, const std::vector<std::string>& xs) {
    if (!s->commutative()) throw InputError("grouplike needs a commutative semiring");
    auto C = free_structured(s, static_cast<int>(xs.size()));
    auto cc = tensor(C, C);
    std::vector<std::vector<Elem>> d, eps;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Elem x = basis(*C, i);
        d.push_back({cc->pure(x, x)});
        eps.push_back({scal(s->is_finite() ? s->one() : 1)});
    }
    std::string name = "grouplike(" + s->name() + ",{";
    for (std::size_t i = 0; i < xs.size(); ++i) name += (i ? "," : "") + xs[i];
    return assemble(name + "})", C, cc, std::move(d), std::move(eps), xs);
}

CoringPtr polynomial(const SemiringPtr& s, int d, PolyVariant v) {
    if (d < 0) throw InputError("polynomial coalgebra needs d >= 0");
    if (!s->commutative()) throw InputError("polynomial coalgebra needs a commutative semiring");
    std::vector<std::string> labels;
    for (int i = 0; i <= d; ++i) labels.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
    auto C = free_structured(s, d + 1);
    auto cc = tensor(C, C);
    const Scalar one = s->is_finite() ? s->one() : 1;
    // Pascal's triangle evaluated inside S
    std::vector<std::vector<Scalar>> binom(d + 1, std::vector<Scalar>(d + 1, 0));
    for (int i = 0; i <= d; ++i) {
        binom[i][0] = one;
        for (int j = 1; j <= i; ++j) binom[i][j] = s->add(binom[i - 1][j - 1], j <= i - 1 ? binom[i - 1][j] : 0);
    }
    std::vector<std::vector<Elem>> delta, eps;
    for (int i = 0; i <= d; ++i) {
        const Elem xi = basis(*C, i);
        if (v == PolyVariant::GrouplikePowers) {
            delta.push_back({cc->pure(xi, xi)});
            eps.push_back({scal(one)});
            continue;
        }
        Elem t = cc->result->zero();
        for (int j = 0; j <= i; ++j)
            t = cc->result->add(t, cc->pure(C->lact(binom[i][j], basis(*C, j)), basis(*C, i - j)));
        delta.push_back({t});
        eps.push_back({scal(i == 0 ? one : 0)});
    }
    std::string name = std::string(v == PolyVariant::GrouplikePowers ? "poly1(" : "poly2(") + s->name() + "," +
                       std::to_string(d) + ")";
    return assemble(name, C, cc, std::move(delta), std::move(eps), std::move(labels));
}

CoringPtr words(int length, int variant) {
    if (length < 0) throw InputError("words needs L >= 0");
    if (variant < 1 || variant > 3) throw InputError("words variant must be 1, 2 or 3");
    auto B = builtin_semiring("BOOL");
    std::vector<std::string> ws{""};
    for (int len = 1; len <= length; ++len)
        for (const auto& w : std::vector<std::string>(ws))
            if (static_cast<int>(w.size()) == len - 1) {
                ws.push_back(w + "x");
                ws.push_back(w + "y");
            }
    std::sort(ws.begin(), ws.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < ws.size(); ++i) idx[ws[i]] = i;
    std::vector<std::string> labels;
    for (const auto& w : ws) labels.push_back(w.empty() ? "1" : w);

    auto C = free_structured(B, static_cast<int>(ws.size()));
    auto cc = tensor(C, C);
    auto e = [&](const std::string& w) { return basis(*C, idx.at(w)); };
    std::vector<std::vector<Elem>> delta, eps;
    for (const auto& w : ws) {
        Elem t = cc->result->zero();
        if (variant == 1) {
            t = cc->pure(e(w), e(w));
        } else if (variant == 2) {
            for (std::size_t k = 0; k <= w.size(); ++k) t = cc->result->add(t, cc->pure(e(w.substr(0, k)), e(w.substr(k))));
        } else {
            // product of the Δ(letter): every split of the positions into two subwords
            const std::size_t n = w.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                std::string a, b;
                for (std::size_t p = 0; p < n; ++p) ((mask >> p) & 1 ? a : b) += w[p];
                t = cc->result->add(t, cc->pure(e(a), e(b)));
            }
        }
        delta.push_back({t});
        eps.push_back({scal(variant == 1 || w.empty() ? 1 : 0)});
    }
    return assemble("words" + std::to_string(variant) + "(L=" + std::to_string(length) + ")", C, cc, std::move(delta),
                    std::move(eps), std::move(labels));
}

CoringPtr counterexample(int n) {
    if (n < 2) throw InputError("counterexample needs n >= 2");
    auto C = make_module(builtin_semiring("NAT"), {regular_atom(), cyclic_atom(n)});
    auto cc = tensor(C, C);
    const Elem e = basis(*C, 0), z = basis(*C, 1);
    const auto& R = *cc->result;
    Elem dz = R.add(R.add(cc->pure(e, z), cc->pure(z, e)), cc->pure(z, z));
    return assemble("counterexample(" + std::to_string(n) + ")", C, cc, {{cc->pure(e, e)}, {dz}}, {{scal(1)}, {scal(0)}},
                    {});
}

std::vector<GalleryEntry> gallery() {
    auto B = builtin_semiring("BOOL");
    auto Z2 = builtin_semiring("ZMOD", 2);
    return {
        {"sweedler", sweedler_identity(B)},
        {"coext", trivial_coextension(regular(B))},
        {"coext", trivial_coextension(regular(Z2))},
        {"grouplike", grouplike(B, {"x", "y"})},
        {"poly1", polynomial(Z2, 3, PolyVariant::GrouplikePowers)},
        {"poly2", polynomial(Z2, 3, PolyVariant::Binomial)},
        {"words1", words(2, 1)},
        {"words2", words(2, 2)},
        {"words3", words(2, 3)},
        {"counterexample", counterexample(4)},
    };
}

// ---- mutations ----------------------------------------------------------------

namespace {

// Values an atom coordinate can be changed to.
std::vector<Val> alternatives(const Module& m, std::size_t i, Val cur) {
    std::vector<Val> out;
    const auto& at = m.atoms()[i];
    if (at.kind == AtomKind::Regular && m.nat_base()) {
        out.push_back({cur.v + 1, 1});
        return out;
    }
    if (at.kind == AtomKind::QmodZ) return out;
    const auto n = static_cast<std::int64_t>(m.atom_size(i));
    for (std::int64_t v = 0; v < n; ++v)
        if (v != cur.v) out.push_back({v, 1});
    return out;
}

std::pair<Elem, Elem> counit_sides(const Semicoring& c, const std::vector<std::pair<Elem, Elem>>& parts,
                                   const std::function<Scalar(const Elem&)>& eps) {
    const Module& C = *c.carrier;
    Elem l = C.zero(), r = C.zero();
    for (const auto& [a, b] : parts) {
        l = C.add(l, C.lact(eps(a), b));
        r = C.add(r, C.ract(a, eps(b)));
    }
    return {l, r};
}

}  // namespace

std::vector<Mutation> single_entry_mutations(const Semicoring& c) {
    std::vector<Mutation> out;
    const auto gens = c.generators();
    const Module& CC = *c.cc->result;
    auto eps = [&](const Elem& x) { return c.eps_of(x); };
    std::vector<std::vector<std::pair<Elem, Elem>>> parts;
    for (const auto& g : gens) parts.push_back(c.cc->decompose(c.delta(g)));
    std::size_t g = 0;
    for (std::size_t i = 0; i < c.delta_images.size(); ++i)
        for (std::size_t p = 0; p < c.delta_images[i].size(); ++p, ++g) {
            const std::string gname = c.show(gens[g]);
            for (Val v : alternatives(*c.scalars, 0, c.eps_images[i][p][0])) {
                auto e = c.eps_images;
                e[i][p] = Elem{v};
                auto m = with_structure(c, c.name + "/mutant", c.delta_images, e);
                bool visible = false;
                for (std::size_t h = 0; h < gens.size() && !visible; ++h)
                    visible = counit_sides(c, parts[h], [&](const Elem& x) { return m->eps_of(x); }) !=
                              std::make_pair(gens[h], gens[h]);
                out.push_back({c.name + ": ε(" + gname + ") " + show_scalar(c.base, c.eps_images[i][p][0].v) + " -> " +
                                   show_scalar(c.base, v.v),
                               m, visible});
            }
            const Elem orig = c.delta_images[i][p];
            for (std::size_t k = 0; k < CC.rank(); ++k)
                for (Val v : alternatives(CC, k, orig[k])) {
                    Elem t = orig;
                    t[k] = v;
                    const bool visible = counit_sides(c, c.cc->decompose(t), eps) != std::make_pair(gens[g], gens[g]);
                    auto d = c.delta_images;
                    d[i][p] = t;
                    out.push_back({c.name + ": Δ(" + gname + ") coordinate " + std::to_string(k) + " (" +
                                       c.show_tensor(CC.inject(k, CC.atom_one(k))) + ") " + CC.show_atom_value(k, orig[k]) +
                                       " -> " + CC.show_atom_value(k, v),
                                   with_structure(c, c.name + "/mutant", d, c.eps_images), visible});
                }
        }
    return out;
}

std::vector<Mutation> mutation_corpus(const Semicoring& c) {
    auto all = single_entry_mutations(c);
    std::vector<Mutation> out;
    for (auto& m : all)
        if (m.counit_visible) out.push_back(std::move(m));
    return out;
}

// ---- duals ----------------------------------------------------------------------

const char* dual_side_name(DualSide s) {
    switch (s) {
        case DualSide::Left: return "left";
        case DualSide::Right: return "right";
        case DualSide::Two: return "two";
    }
    return "?";
}

int DualSemiring::index_of(const LinearMap& f) const {
    const auto gens = origin->generators();
    for (std::size_t h = 0; h < maps.size(); ++h) {
        bool same = true;
        for (const auto& g : gens)
            if (maps[h](g) != f(g)) {
                same = false;
                break;
            }
        if (same) return static_cast<int>(h);
    }
    return -1;
}

DualSemiring dual_semiring(const CoringPtr& cp, DualSide side, std::size_t max_homs) {
    const Semicoring& c = *cp;
    const auto& A = c.base;
    if (!A->is_finite()) throw Unsupported("dual of a coring over an infinite base");
    const Module& C = *c.carrier;
    // per-atom choices of images
    std::vector<std::vector<std::vector<Elem>>> choices(C.rank());
    for (std::size_t i = 0; i < C.rank(); ++i) {
        const auto& at = C.atoms()[i];
        if (at.kind == AtomKind::Regular) {
            for (Scalar s = 0; s < static_cast<Scalar>(A->size()); ++s) choices[i].push_back({scal(s)});
        } else if (at.kind == AtomKind::Table) {
            const auto& T = *at.table;
            for (std::size_t x = 0; x < T.size(); ++x)
                for (Scalar s : T.scalars())
                    if (T.lact(s, static_cast<Index>(x)) != T.ract(static_cast<Index>(x), s))
                        throw Unsupported("dual of a carrier with distinct left and right actions");
            for (const auto& f : hom_enumerate(at.table, regular_module(A))) {
                std::vector<Elem> im;
                for (Index v : f.img) im.push_back(scal(v));
                choices[i].push_back(std::move(im));
            }
        } else {
            throw Unsupported("dual of atom " + at.show());
        }
    }
    double total = 1;
    for (const auto& ch : choices) total *= static_cast<double>(ch.size());
    if (total > static_cast<double>(max_homs)) throw Unsupported("dual too large: " + std::to_string(static_cast<long long>(total)) + " functionals");

    DualSemiring d;
    d.origin = cp;
    d.side = side;
    std::vector<std::size_t> pick(C.rank(), 0);
    const auto zero_first = [&]() {
        // choices start with the zero image for REGULAR; make it so for tables too
        for (auto& ch : choices)
            std::stable_partition(ch.begin(), ch.end(), [](const std::vector<Elem>& im) {
                return std::all_of(im.begin(), im.end(), [](const Elem& e) { return e[0].v == 0; });
            });
    };
    zero_first();
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == C.rank()) {
            std::vector<std::vector<Elem>> h;
            for (std::size_t k = 0; k < C.rank(); ++k) h.push_back(choices[k][pick[k]]);
            d.homs.push_back(h);
            return;
        }
        for (pick[i] = 0; pick[i] < choices[i].size(); ++pick[i]) rec(i + 1);
    };
    rec(0);
    for (const auto& h : d.homs) d.maps.push_back(map_from_images(c.carrier, c.scalars, h));

    const auto gens = c.generators();
    std::map<std::vector<Scalar>, int> key;
    std::vector<std::vector<Scalar>> vals(d.homs.size());
    for (std::size_t h = 0; h < d.maps.size(); ++h) {
        for (const auto& g : gens) vals[h].push_back(d.maps[h](g)[0].v);
        key.emplace(vals[h], static_cast<int>(h));
    }
    const std::size_t n = d.homs.size();
    auto ev = [&](std::size_t h, const Elem& x) { return d.maps[h](x)[0].v; };
    std::vector<std::vector<std::pair<Elem, Elem>>> parts;
    for (const auto& g : gens) parts.push_back(c.cc->decompose(c.delta(g)));

    auto& t = d.tables;
    t.name = std::string("dual_") + dual_side_name(side) + "(" + c.name + ")";
    t.add.assign(n, std::vector<int>(n));
    t.mul.assign(n, std::vector<int>(n));
    for (std::size_t h = 0; h < n; ++h) {
        std::string nm = "[";
        for (std::size_t k = 0; k < gens.size(); ++k)
            nm += (k ? "," : "") + c.show(gens[k]) + "↦" + A->show(vals[h][k]);
        t.elements.push_back(nm + "]");
    }
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t g = 0; g < n; ++g) {
            std::vector<Scalar> sum(gens.size()), prod(gens.size());
            for (std::size_t k = 0; k < gens.size(); ++k) {
                sum[k] = A->add(vals[f][k], vals[g][k]);
                Scalar acc = 0;
                for (const auto& [c1, c2] : parts[k]) {
                    Scalar v = 0;
                    switch (side) {
                        case DualSide::Left: v = ev(g, C.ract(c1, ev(f, c2))); break;    // g(c1 f(c2))
                        case DualSide::Right: v = ev(f, C.lact(ev(g, c1), c2)); break;   // f(g(c1) c2)
                        case DualSide::Two: v = A->mul(ev(g, c1), ev(f, c2)); break;     // g(c1) f(c2)
                    }
                    acc = A->add(acc, v);
                }
                prod[k] = acc;
            }
            auto si = key.find(sum);
            auto pi = key.find(prod);
            if (si == key.end() || pi == key.end()) throw std::logic_error("convolution left the hom set");
            t.add[f][g] = si->second;
            t.mul[f][g] = pi->second;
        }
    std::vector<Scalar> eps_vals;
    for (const auto& g : gens) eps_vals.push_back(c.eps_of(g));
    d.unit = key.at(eps_vals);
    t.zero = 0;
    t.one = d.unit;
    d.semiring = make_semiring(Semiring::from_tables(t));
    return d;
}

Report check_dual(const DualSemiring& d) { return check_semiring_axioms(d.tables); }

std::optional<SemiringMorphism> find_semiring_isomorphism(const SemiringPtr& a, const SemiringPtr& b) {
    if (!a->is_finite() || !b->is_finite() || a->size() != b->size()) return std::nullopt;
    const auto n = static_cast<Scalar>(a->size());
    if (n > 8) throw Unsupported("semiring isomorphism search is limited to 8 elements");
    std::vector<Scalar> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (perm[a->one()] != b->one()) continue;
        bool ok = true;
        for (Scalar x = 0; x < n && ok; ++x)
            for (Scalar y = 0; y < n && ok; ++y)
                ok = perm[a->add(x, y)] == b->add(perm[x], perm[y]) && perm[a->mul(x, y)] == b->mul(perm[x], perm[y]);
        if (ok) return SemiringMorphism{a, b, perm};
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return std::nullopt;
}

// ---- morphisms and coideals ----------------------------------------------------

Report check_coring_morphism(const LinearMap& f, const Semicoring& src, const Semicoring& dst) {
    Report r;
    r.merge(check_linear_map(f), "map ");
    if (!r.ok()) return r;
    auto ff = tensor_maps(src.cc, dst.cc, f, f);
    bool dsq = true, esq = true;
    std::string wd, we;
    for (const auto& g : src.generators()) {
        if (dsq && dst.delta(f(g)) != ff(src.delta(g))) {
            dsq = false;
            wd = src.show(g);
        }
        if (esq && dst.eps(f(g)) != src.eps(g)) {
            esq = false;
            we = src.show(g);
        }
    }
    r.add("comultiplication square", dsq, wd);
    r.add("counit triangle", esq, we);
    return r;
}

CoidealVerdict coideal_check(const CoringPtr& cp, const std::vector<Elem>& kel) {
    const Semicoring& c = *cp;
    const Module& C = *c.carrier;
    if (!C.finite() || C.size() > 4096) throw Unsupported("coideal check needs a small finite carrier");
    CoidealVerdict v;
    auto Cf = C.tabulate();
    std::vector<Index> kidx;
    for (const auto& k : kel) kidx.push_back(static_cast<Index>(C.index_of(k)));
    auto K = make_subset(Cf, kidx);
    std::string w;
    if (!is_submodule(K, &w)) throw InputError("K is not a subsemimodule: " + w);

    auto incl = as_module(K).incl;
    v.uniform = map_predicates(incl).uniform();
    v.applicable = v.uniform;

    v.counit_condition = true;
    for (Index k : K.elements())
        if (c.eps_of(C.element_at(k)) != 0) {
            v.counit_condition = false;
            if (v.witness.empty()) v.witness = "ε(" + c.show(C.element_at(k)) + ") != 0";
        }

    const Module& CC = *c.cc->result;
    if (!CC.finite() || CC.size() > (1u << 16)) throw Unsupported("coideal check needs a small C ⊗ C");
    auto CCf = CC.tabulate();
    std::vector<Index> span_gens;
    for (Index k : K.elements())
        for (std::size_t x = 0; x < C.size(); ++x) {
            const Elem ke = C.element_at(k), xe = C.element_at(x);
            span_gens.push_back(static_cast<Index>(CC.index_of(c.cc->pure(ke, xe))));
            span_gens.push_back(static_cast<Index>(CC.index_of(c.cc->pure(xe, ke))));
        }
    auto target = subtractive_closure(generated(CCf, span_gens));
    v.delta_condition = true;
    for (Index k : K.elements())
        if (!target.contains(static_cast<Index>(CC.index_of(c.delta(C.element_at(k)))))) {
            v.delta_condition = false;
            if (v.witness.empty()) v.witness = "Δ(" + c.show(C.element_at(k)) + ") outside the closure";
        }
    v.is_coideal = v.applicable && v.delta_condition && v.counit_condition;

    // quotient construction, independent of the condition above
    auto q = quotient_by(K);
    auto Q = as_structured(q.module);
    auto proj_fn = [q, Q, cp](const Elem& x) {
        Index i = q.proj(static_cast<Index>(cp->carrier->index_of(x)));
        return Q->element_at(static_cast<std::size_t>(i));
    };
    LinearMap pi{c.carrier, Q, proj_fn};
    auto qq = tensor(Q, Q);
    auto pipi = tensor_maps(c.cc, qq, pi, pi);
    std::vector<Elem> dbar(Q->size()), ebar(Q->size());
    std::vector<char> seen(Q->size(), 0);
    bool well_defined = true;
    for (std::size_t x = 0; x < C.size() && well_defined; ++x) {
        const Elem xe = C.element_at(x);
        const auto qi = Q->index_of(pi(xe));
        const Elem dx = pipi(c.delta(xe));
        const Elem ex = c.eps(xe);
        if (!seen[qi]) {
            seen[qi] = 1;
            dbar[qi] = dx;
            ebar[qi] = ex;
        } else if (dbar[qi] != dx || ebar[qi] != ex) {
            well_defined = false;
            if (v.witness.empty()) v.witness = "Δ or ε does not descend to C/K at " + c.show(xe);
        }
    }
    if (well_defined) {
        std::vector<std::vector<Elem>> di, ei;
        if (Q->rank() == 1) {
            di.push_back(dbar);
            ei.push_back(ebar);
        }
        auto qc = assemble(c.name + "/K", Q, qq, std::move(di), std::move(ei), {});
        const bool ok = check_semicoring(*qc).ok() && check_coring_morphism(pi, c, *qc).ok();
        v.quotient_ok = ok;
        v.quotient = qc;
        v.projection = pi;
    }
    return v;
}

}  // namespace semialg
