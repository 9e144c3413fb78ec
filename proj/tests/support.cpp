#include "support.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace support {

std::optional<std::string> pure_iso(const TensorProduct& t, const SaturatedTensor& s) {
    const Module& L = *t.left;
    const Module& R = *t.right;
    const Module& T = *t.result;
    const auto& S = *s.result;
    if (T.size() != S.size())
        return "sizes differ: " + std::to_string(T.size()) + " vs " + std::to_string(S.size());
    std::vector<Index> phi(T.size(), -1);
    for (std::size_t z = 0; z < T.size(); ++z) {
        Index acc = 0;
        for (const auto& [m, n] : t.decompose(T.element_at(z)))
            acc = S.add(acc, s.pure_of(static_cast<Index>(L.index_of(m)), static_cast<Index>(R.index_of(n))));
        phi[z] = acc;
    }
    for (std::size_t m = 0; m < L.size(); ++m)
        for (std::size_t n = 0; n < R.size(); ++n) {
            const Elem lm = L.element_at(m), rn = R.element_at(n);
            auto z = T.index_of(t.pure(lm, rn));
            if (phi[z] != s.pure_of(static_cast<Index>(m), static_cast<Index>(n)))
                return "pure tensor " + L.show(lm) + "⊗" + R.show(rn) + " not preserved";
        }
    std::vector<char> hit(S.size(), 0);
    for (std::size_t z = 0; z < T.size(); ++z) {
        if (hit[phi[z]]) return "not injective at " + T.show(T.element_at(z));
        hit[phi[z]] = 1;
        for (std::size_t w = 0; w < T.size(); ++w) {
            auto sum = T.index_of(T.add(T.element_at(z), T.element_at(w)));
            if (phi[sum] != S.add(phi[z], phi[w])) return "not additive";
        }
    }
    return std::nullopt;
}

std::optional<std::string> oracle_iso(const oracle::TensorOracle& o, const SaturatedTensor& s) {
    const auto& S = *s.result;
    if (static_cast<std::size_t>(o.classes) != S.size())
        return "sizes differ: oracle " + std::to_string(o.classes) + " vs " + std::to_string(S.size());
    std::vector<Index> phi(o.classes, -1);
    phi[o.cls[o.state_of_symbol(0, 0)]] = 0;
    for (Index m = 0; m < static_cast<Index>(s.left->size()); ++m)
        for (Index n = 0; n < static_cast<Index>(s.right->size()); ++n) {
            int c = o.class_of_symbol(m, n);
            Index v = s.pure_of(m, n);
            if (phi[c] >= 0 && phi[c] != v)
                return "symbol " + s.left->name(m) + "⊗" + s.right->name(n) + " disagrees";
            phi[c] = v;
        }
    // extend along sums; every class is a sum of symbols
    bool grew = true;
    while (grew) {
        grew = false;
        for (int a = 0; a < o.classes; ++a)
            for (int b = 0; b < o.classes; ++b) {
                if (phi[a] < 0 || phi[b] < 0) continue;
                int c = o.add(a, b);
                Index v = S.add(phi[a], phi[b]);
                if (phi[c] < 0) {
                    phi[c] = v;
                    grew = true;
                } else if (phi[c] != v) {
                    return "sums disagree";
                }
            }
    }
    std::vector<char> hit(S.size(), 0);
    for (int c = 0; c < o.classes; ++c) {
        if (phi[c] < 0) return "class not reached by symbols";
        if (hit[phi[c]]) return "not injective";
        hit[phi[c]] = 1;
    }
    return std::nullopt;
}

}  // namespace support

namespace support {

std::optional<std::string> symbol_iso(const SaturatedTensor& s, const FiniteModule& q,
                                      const std::function<Index(Index, Index)>& f) {
    const auto& S = *s.result;
    if (S.size() != q.size())
        return "sizes differ: " + std::to_string(S.size()) + " vs " + std::to_string(q.size());
    std::vector<Index> phi(S.size());
    for (std::size_t z = 0; z < S.size(); ++z) {
        Index acc = 0;
        for (auto [m, n] : s.normal_form[z]) acc = q.add(acc, f(m, n));
        phi[z] = acc;
    }
    for (Index m = 0; m < static_cast<Index>(s.left->size()); ++m)
        for (Index n = 0; n < static_cast<Index>(s.right->size()); ++n)
            if (phi[s.pure_of(m, n)] != f(m, n))
                return "symbol " + s.left->name(m) + "⊗" + s.right->name(n) + " disagrees";
    std::vector<char> hit(q.size(), 0);
    for (std::size_t a = 0; a < S.size(); ++a) {
        if (hit[phi[a]]) return "not injective";
        hit[phi[a]] = 1;
        for (std::size_t b = 0; b < S.size(); ++b)
            if (phi[S.add(static_cast<Index>(a), static_cast<Index>(b))] != q.add(phi[a], phi[b]))
                return "not additive";
    }
    return std::nullopt;
}

std::vector<SemiringPtr> finite_builtins(int max_size) {
    std::vector<SemiringPtr> out{builtin_semiring("BOOL")};
    for (int n = 2; n <= max_size; ++n) out.push_back(builtin_semiring("ZMOD", n));
    for (int k = 1; k + 1 <= max_size; ++k) out.push_back(builtin_semiring("NATCAP", k));
    for (int k = 1; k + 2 <= max_size; ++k) out.push_back(builtin_semiring("TROPCAP", k));
    for (int n = 2; n <= 64; ++n) {
        auto s = builtin_semiring("IDEALS", n);
        // one representative per divisor lattice shape is enough; keep the
        // prime powers and squarefree products that fit
        if (static_cast<int>(s->size()) <= max_size && (n == 4 || n == 6 || n == 8 || n == 12 || n == 16 || n == 30))
            out.push_back(s);
    }
    out.push_back(product_semiring(builtin_semiring("BOOL"), 2));
    return out;
}

namespace {

std::string subset_name(const Subset& s) {
    std::string out = "{";
    for (Index i : s.elements()) out += (out.size() > 1 ? "," : "") + s.ambient->name(i);
    return out + "}";
}

void run_case(Sweep& sw, const std::string& label, const std::function<std::optional<std::string>()>& f) {
    ++sw.cases;
    if (!sw.ok()) return;
    std::optional<std::string> err;
    try {
        err = f();
    } catch (const std::exception& e) {
        err = std::string("exception: ") + e.what();
    }
    if (err) sw.failure = label + ": " + *err;
}

std::optional<std::string> compare(const ModPtr& a, const ModPtr& b) {
    auto t = tensor(a, b);
    auto s = saturate_tensor(a->tabulate(), b->tabulate());
    return pure_iso(*t, s);
}

}  // namespace

Sweep rule_vs_saturation(int max_size, int table_size) {
    Sweep sw;
    auto nat = builtin_semiring("NAT");

    // named atoms and NAT tables
    std::vector<Atom> atoms;
    for (int n = 1; n <= max_size; ++n) atoms.push_back(cyclic_atom(n));
    atoms.push_back(boolean_atom());
    for (const auto& m : enumerate_monoids(table_size)) atoms.push_back(table_atom(m));
    for (const auto& a : atoms)
        for (const auto& b : atoms) {
            auto ma = make_module(nat, {a});
            auto mb = make_module(nat, {b});
            run_case(sw, a.show() + " ⊗ " + b.show(), [&] { return compare(ma, mb); });
        }
    // a two-atom sum distributes
    auto sum = make_module(nat, {cyclic_atom(4), boolean_atom()});
    auto sum2 = make_module(nat, {cyclic_atom(2), cyclic_atom(3)});
    run_case(sw, sum->describe() + " ⊗ " + sum2->describe(), [&] { return compare(sum, sum2); });

    // REGULAR over finite semirings against their modules
    for (const auto& S : finite_builtins(max_size)) {
        auto reg = regular(S);
        run_case(sw, reg->describe() + " ⊗ itself", [&] { return compare(reg, reg); });
        for (const auto& x : enumerate_modules(S, table_size)) {
            auto mx = as_structured(x);
            run_case(sw, reg->describe() + " ⊗ table", [&] { return compare(reg, mx); });
            run_case(sw, "table ⊗ " + reg->describe(), [&] { return compare(mx, reg); });
        }
    }

    // REGULAR over NAT through N/(i ~ i+p): the tensor with X is X/(i x ~ (i+p) x),
    // and equals the rule result X whenever that congruence is trivial
    for (const auto& x : enumerate_monoids(table_size))
        for (int i = 0; i < max_size; ++i)
            for (int p = 1; i + p <= max_size; ++p) {
                auto c = monogenic_module(i, p);
                run_case(sw, "N/(" + std::to_string(i) + "~" + std::to_string(i + p) + ") ⊗ table",
                         [&]() -> std::optional<std::string> {
                             std::vector<std::pair<Index, Index>> rel;
                             for (Index v = 0; v < static_cast<Index>(x->size()); ++v)
                                 rel.emplace_back(x->multiple(v, i), x->multiple(v, i + p));
                             auto cong = congruence_generated(x, rel);
                             auto q = quotient(cong);
                             auto s = saturate_tensor(c, x);
                             if (auto e = symbol_iso(s, *q.module, [&](Index k, Index v) {
                                     return q.proj(x->multiple(v, static_cast<std::uint64_t>(k)));
                                 }))
                                 return e;
                             if (cong.classes != static_cast<int>(x->size())) return std::nullopt;
                             auto t = tensor(regular(nat), as_structured(x));
                             const Module& T = *t->result;
                             return symbol_iso(s, *T.tabulate(), [&](Index k, Index v) {
                                 return static_cast<Index>(T.index_of(t->pure(Elem{Val{k, 1}}, Elem{Val{v, 1}})));
                             });
                         });
            }

    // QMODZ against CYCLIC(n) and BOOLEAN: a/m lives in the stage
    // (1/mn)Z/Z = CYCLIC(mn) as a*n, and every a*n (x) y vanishes there
    auto q = make_module(nat, {qmodz_atom()});
    for (int n = 1; n <= max_size; ++n)
        for (int m = 1; m * n <= 6 * max_size; ++m) {
            auto stage = make_module(nat, {cyclic_atom(m * n)});
            auto cyc = make_module(nat, {cyclic_atom(n)});
            auto boo = make_module(nat, {boolean_atom()});
            run_case(sw, "stage CYCLIC(" + std::to_string(m * n) + ") ⊗ CYCLIC(" + std::to_string(n) + ")",
                     [&]() -> std::optional<std::string> {
                         auto t = tensor(stage, cyc);
                         auto s = saturate_tensor(stage->tabulate(), cyc->tabulate());
                         for (std::int64_t a = 0; a < m; ++a)
                             for (std::int64_t y = 0; y < n; ++y) {
                                 if (!t->result->is_zero(t->pure({Val{a * n, 1}}, {Val{y, 1}})))
                                     return "rule keeps a stage element";
                                 if (s.pure_of(static_cast<Index>(a * n), static_cast<Index>(y)) != 0)
                                     return "saturation keeps a stage element";
                             }
                         return std::nullopt;
                     });
            run_case(sw, "stage CYCLIC(" + std::to_string(m * n) + ") ⊗ BOOLEAN",
                     [&]() -> std::optional<std::string> {
                         auto s = saturate_tensor(stage->tabulate(), boo->tabulate());
                         if (s.result->size() != 1) return "stage tensor BOOLEAN is not zero";
                         return std::nullopt;
                     });
        }
    for (const auto& other : {make_module(nat, {cyclic_atom(4)}), make_module(nat, {boolean_atom()})}) {
        run_case(sw, "QMODZ ⊗ " + other->describe(), [&]() -> std::optional<std::string> {
            if (tensor(q, other)->result->rank() != 0) return "rule result is not zero";
            if (tensor(other, q)->result->rank() != 0) return "rule result is not zero";
            return std::nullopt;
        });
    }
    return sw;
}

Sweep saturation_vs_oracle(const SemiringPtr& base, int max_size) {
    Sweep sw;
    auto mods = enumerate_modules(base, max_size);
    for (std::size_t i = 0; i < mods.size(); ++i)
        for (std::size_t j = 0; j < mods.size(); ++j) {
            const auto& a = mods[i];
            const auto& b = mods[j];
            run_case(sw, base->name() + " modules #" + std::to_string(i) + " ⊗ #" + std::to_string(j),
                     [&]() -> std::optional<std::string> {
                         auto s = saturate_tensor(a, b);
                         if (auto e = oracle_iso(oracle::tensor_oracle(*a, *b), s)) return e;
                         auto r = saturate_tensor(b, a);
                         return symbol_iso(s, *r.result, [&](Index m, Index n) { return r.pure_of(n, m); });
                     });
        }
    return sw;
}

std::optional<oracle::FreeCoring> free_coefficients(const Semicoring& c) {
    const Module& C = *c.carrier;
    if (!c.base->is_finite()) return std::nullopt;
    for (const auto& at : C.atoms())
        if (at.kind != AtomKind::Regular) return std::nullopt;
    const std::size_t k = C.rank();
    oracle::FreeCoring f;
    f.d.assign(k, std::vector<std::vector<Scalar>>(k, std::vector<Scalar>(k, 0)));
    for (std::size_t g = 0; g < k; ++g) {
        const Elem t = c.delta_images[g][0];
        for (const auto& comp : c.cc->comps)
            if (comp.out >= 0) f.d[g][comp.i][comp.j] = t[comp.out].v;
        f.eps.push_back(c.eps_images[g][0][0].v);
    }
    return f;
}

std::vector<Classified> classify_mutations(const Semicoring& c) {
    std::vector<Classified> out;
    for (auto& m : single_entry_mutations(c)) {
        Classified x{m, m.counit_visible, false};
        if (auto f = free_coefficients(*m.coring)) {
            x.oracle_decided = true;
            x.expected_invalid = !oracle::free_coring_valid(*c.base, *f);
        }
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace support

namespace support {

namespace {

std::vector<Elem> probe_points(const Module& m) {
    if (m.at_most(4096)) return m.elements();
    auto g = m.generators();
    std::vector<Elem> out = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.push_back(m.multiple(g[i], 2));
        out.push_back(m.multiple(g[i], 3));
        for (std::size_t j = i + 1; j < g.size(); ++j) out.push_back(m.add(g[i], g[j]));
    }
    return out;
}

}  // namespace

std::optional<std::string> unit_laws(const ModPtr& m) {
    const ModPtr S = regular(m->base());
    const Elem one = S->inject(0, S->atom_one(0));
    auto ms = tensor(m, S);
    auto sm = tensor(S, m);
    auto ur = unit_right(ms);
    auto ul = unit_left(sm);
    if (!check_linear_map(ur).ok()) return "ϑ^r is not linear";
    if (!check_linear_map(ul).ok()) return "ϑ^l is not linear";
    for (const auto& x : probe_points(*m)) {
        if (ur(ms->pure(x, one)) != x) return "ϑ^r(" + m->show(x) + "⊗1) ≠ " + m->show(x);
        if (ul(sm->pure(one, x)) != x) return "ϑ^l(1⊗" + m->show(x) + ") ≠ " + m->show(x);
    }
    for (const auto& t : probe_points(*ms->result))
        if (ms->pure(ur(t), one) != t) return "ϑ^r(t)⊗1 ≠ t for t = " + tensor_element_name(*ms, t);
    for (const auto& t : probe_points(*sm->result))
        if (sm->pure(one, ul(t)) != t) return "1⊗ϑ^l(t) ≠ t for t = " + tensor_element_name(*sm, t);

    auto tk = takahashi_tensor(m, S);
    auto cm = cancellative_reflection(m);
    if (!(*tk.proj.src == *ms->result)) return "M⊠S is not formed from M⊗S";
    if (!(*tk.module == *cm.module) && !(tk.module->at_most(4096) && cm.module->at_most(4096)))
        return "M⊠S = " + tk.module->describe() + " but c(M) = " + cm.module->describe();
    // the relation {(π(t), π_c(ϑ^r t))} must be a bijection
    std::map<Elem, Elem> fwd, bwd;
    for (const auto& t : probe_points(*ms->result)) {
        const Elem a = tk.proj(t), b = cm.proj(ur(t));
        auto [it, fresh] = fwd.emplace(a, b);
        if (!fresh && it->second != b) return "M⊠S → c(M) is not well defined at " + tk.module->show(a);
        auto [jt, fresh2] = bwd.emplace(b, a);
        if (!fresh2 && jt->second != a) return "M⊠S → c(M) is not injective at " + cm.module->show(b);
    }
    if (tk.module->at_most(4096) && (fwd.size() != tk.module->size() || bwd.size() != cm.module->size()))
        return "M⊠S → c(M) is not a bijection";
    return std::nullopt;
}

std::vector<ModPtr> gallery_modules() {
    std::vector<ModPtr> out;
    for (const auto& e : gallery()) out.push_back(e.coring->carrier);
    auto nat = builtin_semiring("NAT");
    for (int n : {1, 2, 4, 6}) out.push_back(make_module(nat, {cyclic_atom(n)}));
    out.push_back(make_module(nat, {boolean_atom()}));
    out.push_back(make_module(nat, {qmodz_atom()}));
    out.push_back(make_module(nat, {regular_atom(), qmodz_atom(), cyclic_atom(3), boolean_atom()}));
    return out;
}

namespace {

// Corestriction X → Ker(g) of f, when f lands there.
bool induces_kernel_iso(const FiniteMap& f, const FiniteMap& g) {
    auto k = kernel(g);
    for (Index x = 0; x < static_cast<Index>(f.src->size()); ++x)
        if (!k.contains(f(x))) return false;
    auto km = as_module(k);
    std::vector<Index> pos(f.dst->size(), -1);
    for (Index i = 0; i < static_cast<Index>(km.module->size()); ++i) pos[km.incl(i)] = i;
    FiniteMap co{f.src, km.module, std::vector<Index>(f.src->size())};
    for (Index x = 0; x < static_cast<Index>(f.src->size()); ++x) co.img[x] = pos[f(x)];
    return is_isomorphism(co);
}

// Coker(f) → Z induced by g, when it is well defined.
bool induces_cokernel_iso(const FiniteMap& f, const FiniteMap& g) {
    auto q = cokernel(f);
    std::vector<Index> h(q.module->size(), -1);
    for (Index y = 0; y < static_cast<Index>(g.src->size()); ++y) {
        Index& slot = h[q.proj(y)];
        if (slot >= 0 && slot != g(y)) return false;
        slot = g(y);
    }
    return is_isomorphism(FiniteMap{q.module, g.dst, h});
}

}  // namespace

ExactSweep exactness_sweep(const SemiringPtr& base, int max_size) {
    ExactSweep out;
    auto mods = enumerate_modules(base, max_size);
    const std::string tag = base->name() + " ";
    for (std::size_t i = 0; i < mods.size(); ++i)
        for (const auto& l : all_submodules(mods[i]))
            run_case(out.first_iso, tag + "module #" + std::to_string(i) + " L = " + subset_name(l),
                     [&]() -> std::optional<std::string> {
                         auto bar = as_module(subtractive_closure(l));
                         auto q = quotient_by(l);
                         std::vector<FiniteMap> seq{zero_into(bar.module), bar.incl, q.proj, zero_onto(q.module)};
                         auto r = exactness_check(seq, ExactMode::Exact);
                         if (r.ok) return std::nullopt;
                         for (const auto& j : r.joints)
                             if (!j.ok) return "not exact: " + j.witness;
                         return "not exact";
                     });

    // hom sets between all pairs, computed once
    std::vector<std::vector<std::vector<FiniteMap>>> hom(mods.size(), std::vector<std::vector<FiniteMap>>(mods.size()));
    for (std::size_t a = 0; a < mods.size(); ++a)
        for (std::size_t b = 0; b < mods.size(); ++b) hom[a][b] = hom_enumerate(mods[a], mods[b]);

    for (std::size_t a = 0; a < mods.size(); ++a)
        for (std::size_t b = 0; b < mods.size(); ++b)
            for (std::size_t k = 0; k < hom[a][b].size(); ++k) {
                const auto& f = hom[a][b][k];
                const std::string lf = tag + "#" + std::to_string(a) + "→#" + std::to_string(b) + " map " + std::to_string(k);
                run_case(out.item1, lf, [&]() -> std::optional<std::string> {
                    bool ex = exactness_check({zero_into(f.src), f}, ExactMode::Exact).ok;
                    if (ex != is_injective(f)) return std::string(ex ? "exact but not injective" : "injective but not exact");
                    return std::nullopt;
                });
                run_case(out.item2, lf, [&]() -> std::optional<std::string> {
                    bool ex = exactness_check({f, zero_onto(f.dst)}, ExactMode::Exact).ok;
                    if (ex != is_surjective(f)) return std::string(ex ? "exact but not surjective" : "surjective but not exact");
                    return std::nullopt;
                });
                for (std::size_t c = 0; c < mods.size(); ++c)
                    for (std::size_t k2 = 0; k2 < hom[b][c].size(); ++k2) {
                        const auto& g = hom[b][c][k2];
                        ++out.sequences;
                        run_case(out.item5, lf + " then →#" + std::to_string(c) + " map " + std::to_string(k2),
                                 [&]() -> std::optional<std::string> {
                                     bool ex = exactness_check({zero_into(f.src), f, g, zero_onto(g.dst)},
                                                               ExactMode::Exact).ok;
                                     bool iso = induces_kernel_iso(f, g) && induces_cokernel_iso(f, g);
                                     if (ex) ++out.exact_sequences;
                                     if (ex != iso)
                                         return std::string(ex ? "exact without the induced isomorphisms"
                                                               : "induced isomorphisms but not exact");
                                     return std::nullopt;
                                 });
                    }
            }
    return out;
}

Sweep bou_sweep(const SemiringPtr& base, int max_size) {
    Sweep sw;
    auto mods = enumerate_modules(base, max_size);
    const std::string tag = base->name() + " ";
    std::vector<std::vector<Subset>> subs;
    for (const auto& m : mods) subs.push_back(all_submodules(m));
    for (std::size_t a = 0; a < mods.size(); ++a)
        for (std::size_t b = 0; b < mods.size(); ++b) {
            const auto& L = mods[a];
            const auto& N = mods[b];
            auto ln = saturate_tensor(L, N);
            const auto idL = identity_map(L), idN = identity_map(N);
            for (const auto& K : subs[a])
                for (const auto& M : subs[b])
                    run_case(sw, tag + "L #" + std::to_string(a) + " K = " + subset_name(K) + ", N #" +
                                     std::to_string(b) + " M = " + subset_name(M),
                             [&]() -> std::optional<std::string> {
                                 auto kb = as_module(subtractive_closure(K));
                                 auto mb = as_module(subtractive_closure(M));
                                 auto qk = quotient_by(K);
                                 auto qm = quotient_by(M);
                                 auto kn = saturate_tensor(kb.module, N);
                                 auto lm = saturate_tensor(L, mb.module);
                                 auto qq = saturate_tensor(qk.module, qm.module);
                                 auto f1 = saturated_tensor_map(kn, ln, kb.incl, idN);
                                 auto f2 = saturated_tensor_map(lm, ln, idL, mb.incl);
                                 auto pp = saturated_tensor_map(ln, qq, qk.proj, qm.proj);
                                 auto i1 = image(f1), i2 = image(f2);
                                 if (!(i1 == pure_span(ln, subtractive_closure(K), full_sub(N))))
                                     return std::string("Im(ι_K̄⊗N) differs from the pure span");
                                 if (!(i2 == pure_span(ln, full_sub(L), subtractive_closure(M))))
                                     return std::string("Im(L⊗ι_M̄) differs from the pure span");
                                 auto sum = sub_sum(i1, i2);
                                 std::vector<char> cl = oracle::closure(*ln.result, sum.in);
                                 auto ker = kernel(pp);
                                 if (ker.in != cl)
                                     return "kernel has " + std::to_string(ker.count()) + " elements, closure " +
                                            std::to_string(std::count(cl.begin(), cl.end(), 1));
                                 auto km = as_module(ker);
                                 auto r = exactness_check({zero_into(km.module), km.incl, pp, zero_onto(qq.result)},
                                                          ExactMode::Exact);
                                 if (!r.ok) return std::string("sequence is not exact");
                                 return std::nullopt;
                             });
        }
    return sw;
}

}  // namespace support
