#include "semialg/comodule.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "semialg/enumerate.hpp"

namespace semialg {

namespace {

Elem scal(Scalar s) { return Elem{Val{s, 1}}; }

Scalar one_of(const SemiringPtr& a) { return a->is_finite() ? a->one() : 1; }

// Σ m·ε(c) over a decomposition of t ∈ M ⊗ C.
Elem apply_counit(const TensorProduct& mc, const Semicoring& c, const Elem& t) {
    const Module& M = *mc.left;
    Elem acc = M.zero();
    for (const auto& [m, x] : mc.decompose(t)) acc = M.add(acc, M.ract(m, c.eps_of(x)));
    return acc;
}

// Per-atom grouping of a flat list of generator images (map_from_images format).
std::vector<std::vector<Elem>> by_atom(const Module& m, const std::vector<Elem>& flat) {
    std::vector<std::vector<Elem>> out(m.rank());
    std::size_t k = 0;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const auto& at = m.atoms()[i];
        const std::size_t n = at.kind == AtomKind::Table ? at.table->size() : 1;
        for (std::size_t j = 0; j < n; ++j) out[i].push_back(flat.at(k++));
    }
    return out;
}

// The carrier generators as used by map_from_images, or the module's
// generating set (sampled for QMODZ).
std::vector<Elem> test_points(const Module& m) {
    bool q = false;
    for (const auto& at : m.atoms()) q = q || at.kind == AtomKind::QmodZ;
    if (q) return m.generators();
    std::vector<Elem> out;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const auto& at = m.atoms()[i];
        if (at.kind == AtomKind::Table) {
            for (std::size_t e = 0; e < at.table->size(); ++e) out.push_back(m.inject(i, Val{static_cast<std::int64_t>(e), 1}));
        } else {
            out.push_back(m.inject(i, m.atom_one(i)));
        }
    }
    return out;
}

// map_from_images wants no image list for the zero module.
std::vector<std::vector<Elem>> table_images(const Module& carrier, std::vector<Elem> imgs) {
    if (carrier.rank() == 0) return {};
    return {std::move(imgs)};
}

bool has_qmodz(const Module& m) {
    for (const auto& at : m.atoms())
        if (at.kind == AtomKind::QmodZ) return true;
    return false;
}

ComodulePtr assemble(std::string name, const CoringPtr& c, const ModPtr& carrier, TensorPtr mc, LinearMap rho) {
    auto m = std::make_shared<Semicomodule>();
    m->name = std::move(name);
    m->coring = c;
    m->carrier = carrier;
    m->mc = std::move(mc);
    m->rho = std::move(rho);
    return m;
}

std::vector<Index> table_of(const LinearMap& f) {
    const auto els = f.src->elements();
    std::vector<Index> img(els.size());
    for (std::size_t i = 0; i < els.size(); ++i) img[i] = static_cast<Index>(f.dst->index_of(f(els[i])));
    return img;
}

std::string show_vector(const FiniteModule& m, const std::vector<std::string>& keys, const std::vector<Index>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + keys[i] + "↦" + m.name(v[i]);
    return s + "]";
}

}  // namespace

std::string Semicomodule::show_tensor(const Elem& t) const {
    std::string out;
    for (const auto& [m, c] : mc->decompose(t)) {
        if (!out.empty()) out += " + ";
        out += carrier->show(m) + "⊗" + coring->show(c);
    }
    return out.empty() ? "0" : out;
}

ComodulePtr make_comodule(std::string name, const CoringPtr& c, const ModPtr& carrier,
                          std::vector<std::vector<Elem>> images, std::size_t budget) {
    if (carrier->base() != c->base && !same_semiring(carrier->base(), c->base))
        throw InputError("comodule carrier and coring have different bases");
    auto mc = tensor(carrier, c->carrier, budget);
    for (const auto& im : images)
        for (const auto& y : im)
            if (!mc->result->valid(y)) throw InputError("coaction image is not an element of M ⊗ C");
    auto rho = map_from_images(carrier, mc->result, std::move(images));
    return assemble(std::move(name), c, carrier, mc, std::move(rho));
}

ComodulePtr make_comodule_fn(std::string name, const CoringPtr& c, const ModPtr& carrier,
                             std::function<Elem(const TensorProduct&, const Elem&)> rho, std::size_t budget) {
    auto mc = tensor(carrier, c->carrier, budget);
    auto f = map_from_fn(carrier, mc->result, [mc, rho](const Elem& x) { return rho(*mc, x); });
    return assemble(std::move(name), c, carrier, mc, std::move(f));
}

ComodulePtr regular_comodule(const CoringPtr& c) { return assemble(c->name, c, c->carrier, c->cc, c->delta); }

ComodulePtr cofree_comodule(const ModPtr& x, const CoringPtr& c, std::size_t budget) {
    auto xc = tensor(x, c->carrier, budget);
    auto mc = tensor(xc->result, c->carrier, budget);
    auto x_cc = tensor(x, c->cc->result, budget);
    auto xd = tensor_maps(xc, x_cc, map_identity(x), c->delta);
    auto rho = map_compose(associator_inverse(x_cc, c->cc, mc, xc), xd);
    return assemble(x->describe() + " ⊗ " + c->name, c, xc->result, mc, std::move(rho));
}

LinearMap counit_retraction(const Semicomodule& m) {
    auto mc = m.mc;
    auto c = m.coring;
    return map_from_fn(mc->result, m.carrier, [mc, c](const Elem& t) { return apply_counit(*mc, *c, t); });
}

Report check_comodule(const Semicomodule& m, std::size_t budget) {
    Report r;
    const Semicoring& C = *m.coring;
    const Module& M = *m.carrier;
    const auto gens = test_points(M);
    r.sampled = has_qmodz(M);
    for (const auto& g : gens)
        if (!m.mc->result->valid(m.rho(g))) {
            r.format_error = "ρ(" + M.show(g) + ") is not an element of the computed M ⊗ C";
            return r;
        }
    r.merge(check_linear_map(m.rho), "ρ ");

    auto mcc = tensor(m.mc->result, C.carrier, budget);  // (M⊗C)⊗C
    auto m_cc = tensor(m.carrier, C.cc->result, budget);  // M⊗(C⊗C)
    auto lhs = tensor_maps(m.mc, mcc, m.rho, map_identity(C.carrier));
    auto rhs = map_compose(associator_inverse(m_cc, C.cc, mcc, m.mc),
                           tensor_maps(m.mc, m_cc, map_identity(m.carrier), C.delta));
    std::string wc, wu;
    for (const auto& g : gens) {
        const Elem t = m.rho(g);
        if (wc.empty() && lhs(t) != rhs(t)) wc = M.show(g);
        if (wu.empty() && apply_counit(*m.mc, C, t) != g) wu = M.show(g);
    }
    r.add("coassociativity", wc.empty(), wc);
    r.add("counit", wu.empty(), wu);
    auto ret = counit_retraction(m);
    Report rl = check_linear_map(ret);
    r.add("retraction ϑ∘(M⊗ε) is linear", rl.ok(), rl.first_failure() ? rl.first_failure()->witness : std::string{});
    r.sampled = r.sampled || rl.sampled;
    return r;
}

Report comodule_hom_check(const LinearMap& f, const Semicomodule& m, const Semicomodule& n) {
    Report r;
    auto fc = tensor_maps(m.mc, n.mc, f, map_identity(m.coring->carrier));
    std::string w;
    for (const auto& g : test_points(*m.carrier)) {
        if (fc(m.rho(g)) != n.rho(f(g))) {
            w = m.carrier->show(g);
            break;
        }
    }
    r.add("colinearity", w.empty(), w);
    return r;
}

bool is_colinear(const LinearMap& f, const Semicomodule& m, const Semicomodule& n) {
    return comodule_hom_check(f, m, n).ok();
}

std::vector<LinearMap> colinear_maps(const Semicomodule& m, const Semicomodule& n) {
    std::vector<LinearMap> out;
    auto mt = m.carrier->tabulate();
    auto nt = n.carrier->tabulate();
    const auto pts = test_points(*m.carrier);
    std::vector<Elem> rho_m;
    for (const auto& g : pts) rho_m.push_back(m.rho(g));
    for (const auto& f : hom_enumerate(mt, nt)) {
        auto lf = from_finite(f, m.carrier, n.carrier);
        auto fc = tensor_maps(m.mc, n.mc, lf, map_identity(m.coring->carrier));
        bool ok = true;
        for (std::size_t k = 0; k < pts.size() && ok; ++k) ok = fc(rho_m[k]) == n.rho(lf(pts[k]));
        if (ok) out.push_back(lf);
    }
    return out;
}

AdjunctionReport check_cofree_adjunction(const Semicomodule& y, const ModPtr& x, std::size_t budget) {
    AdjunctionReport out;
    const Semicoring& C = *y.coring;
    auto cof = cofree_comodule(x, y.coring, budget);
    auto xc = tensor(x, C.carrier, budget);
    auto colin = colinear_maps(y, *cof);
    auto lin = hom_enumerate(y.carrier->tabulate(), x->tabulate());
    out.colinear = colin.size();
    out.linear = lin.size();
    out.report.add("|Hom^C(Y, X⊗C)| = |Hom_A(Y, X)|", colin.size() == lin.size(),
                   std::to_string(colin.size()) + " vs " + std::to_string(lin.size()));

    auto down = [&](const LinearMap& f) {
        return map_compose(map_from_fn(xc->result, x, [xc, c = y.coring](const Elem& t) { return apply_counit(*xc, *c, t); }), f);
    };
    auto up = [&](const LinearMap& g) {
        return map_compose(tensor_maps(y.mc, xc, g, map_identity(C.carrier)), y.rho);
    };
    std::set<std::vector<Index>> images;
    std::string w_round, w_colin;
    for (const auto& f : colin) {
        auto g = down(f);
        images.insert(table_of(g));
        if (w_round.empty() && !maps_equal(up(g), f)) w_round = "f ↦ ϑ(X⊗ε)f ↦ back differs";
    }
    for (const auto& gf : lin) {
        auto g = from_finite(gf, y.carrier, x);
        auto f = up(g);
        if (w_colin.empty() && !is_colinear(f, y, *cof)) w_colin = "(g⊗C)ρ_Y not colinear";
        if (w_round.empty() && !maps_equal(down(f), g)) w_round = "g ↦ (g⊗C)ρ ↦ back differs";
    }
    out.report.add("f ↦ ϑ∘(X⊗ε)∘f is injective", images.size() == colin.size(), "two colinear maps with one image");
    out.report.add("(g⊗C)∘ρ_Y is colinear", w_colin.empty(), w_colin);
    out.report.add("the two assignments are inverse", w_round.empty(), w_round);
    return out;
}

Restriction restrict_comodule(const Semicomodule& m, const std::vector<Elem>& subset, const std::string& name) {
    Restriction out;
    const Module& M = *m.carrier;
    auto mt = M.tabulate();
    std::vector<Index> idx;
    for (const auto& e : subset) idx.push_back(static_cast<Index>(M.index_of(e)));
    auto s = make_subset(mt, idx);
    std::string w;
    if (!is_submodule(s, &w)) {
        out.witness = "not a submodule: " + w;
        return out;
    }
    auto sm = as_module(s);
    auto carrier = as_structured(sm.module);
    auto incl = from_finite(sm.incl, carrier, m.carrier);
    auto sc = tensor(carrier, m.coring->carrier);
    auto ic = tensor_maps(sc, m.mc, incl, map_identity(m.coring->carrier));
    std::map<Elem, std::vector<Elem>> pre;
    for (const auto& t : sc->result->elements()) pre[ic(t)].push_back(t);
    std::vector<Elem> lifts;
    for (Index k = 0; k < static_cast<Index>(sm.module->size()); ++k) {
        const Elem x = M.element_at(static_cast<std::size_t>(sm.incl(k)));
        const Elem t = m.rho(x);
        auto it = pre.find(t);
        if (it == pre.end()) {
            out.witness = "ρ(" + M.show(x) + ") = " + m.show_tensor(t) + " does not come from S ⊗ C";
            return out;
        }
        if (it->second.size() > 1) {
            out.witness = "ρ(" + M.show(x) + ") has " + std::to_string(it->second.size()) + " preimages in S ⊗ C";
            return out;
        }
        lifts.push_back(it->second[0]);
    }
    out.comodule = make_comodule(name, m.coring, carrier, table_images(*carrier, lifts));
    out.inclusion = incl;
    return out;
}

// ---- the counterexample --------------------------------------------------------

TwoCoactions two_coactions_counterexample(int n) {
    if (n < 2) throw InputError("two_coactions_counterexample needs n >= 2");
    auto nat = builtin_semiring("NAT");
    TwoCoactions out{counterexample(n), nullptr, nullptr, nullptr, {}, {}, {}};
    const auto& C = *out.coring;
    const Elem e = C.carrier->inject(0, C.carrier->atom_one(0));
    const Elem z = C.carrier->inject(1, C.carrier->atom_one(1));
    auto N = make_module(nat, {cyclic_atom(n)});
    auto nc = tensor(N, C.carrier);
    const Elem one = N->inject(0, N->atom_one(0));
    out.rho1 = make_comodule("ρ₁", out.coring, N, {{nc->pure(one, e)}});
    out.rho2 = make_comodule("ρ₂", out.coring, N, {{nc->result->add(nc->pure(one, e), nc->pure(one, z))}});
    auto Q = make_module(nat, {qmodz_atom()});
    out.qmodz = make_comodule_fn("ρ_Q", out.coring, Q, [e](const TensorProduct& t, const Elem& q) { return t.pure(q, e); });
    out.iota = map_from_images(N, Q, {{Q->inject(0, Val{1, n})}});

    auto& r = out.report;
    r.merge(check_comodule(*out.rho1), "ρ₁ ");
    r.merge(check_comodule(*out.rho2), "ρ₂ ");
    r.merge(check_comodule(*out.qmodz), "ρ_Q ");
    std::string w;
    if (out.rho1->rho(one) != out.rho2->rho(one))
        w = "ρ₁(1) = " + out.rho1->show_tensor(out.rho1->rho(one)) + ", ρ₂(1) = " + out.rho2->show_tensor(out.rho2->rho(one));
    r.add("ρ₁ ≠ ρ₂", !w.empty(), "ρ₁ and ρ₂ agree");
    if (r.checks.back().ok) r.checks.back().witness = w;
    r.merge(comodule_hom_check(out.iota, *out.rho1, *out.qmodz), "ι for ρ₁: ");
    r.merge(comodule_hom_check(out.iota, *out.rho2, *out.qmodz), "ι for ρ₂: ");
    auto qc = out.qmodz->mc;
    auto push = tensor_maps(nc, qc, out.iota, map_identity(C.carrier));
    const bool agree = push(out.rho1->rho(one)) == push(out.rho2->rho(one));
    r.add("(ι⊗C)ρ₁ = (ι⊗C)ρ₂", agree, "pushforwards differ");
    out.mono_flat = flatness_probe(C.carrier, {out.iota});
    r.add("mono-flat probe fails", !out.mono_flat.mono_flat && !out.mono_flat.undecided, "probe did not refute mono-flatness");
    if (r.checks.back().ok) r.checks.back().witness = out.mono_flat.witness;
    return out;
}

// ---- pairings ------------------------------------------------------------------

namespace {

struct AlphaTable {
    TensorPtr t;
    FModPtr mt;
    std::vector<Elem> elems;                // of t->result
    std::vector<std::vector<Index>> value;  // α(t)(v) as index of mt
};

AlphaTable alpha_table(const Pairing& p, const ModPtr& m, std::size_t budget) {
    AlphaTable a;
    if (!m->finite()) throw Unsupported("α needs a finite module, got " + m->describe());
    a.t = tensor(m, p.W, budget);
    if (!a.t->result->finite()) throw Unsupported("M ⊗ W is infinite");
    if (a.t->result->size() > (1u << 16)) throw Unsupported("M ⊗ W too large to enumerate");
    a.mt = m->tabulate();
    a.elems = a.t->result->elements();
    const Module& M = *m;
    for (const auto& x : a.elems) {
        const auto parts = a.t->decompose(x);
        std::vector<Index> row(p.eval.size());
        for (std::size_t v = 0; v < p.eval.size(); ++v) {
            Elem acc = M.zero();
            for (const auto& [mm, w] : parts) acc = M.add(acc, M.ract(mm, p.eval[v](w)[0].v));
            row[v] = static_cast<Index>(M.index_of(acc));
        }
        a.value.push_back(std::move(row));
    }
    return a;
}

// Hom_A(V, M) as value vectors over the listed v's.
std::vector<std::vector<Index>> hom_target(const Pairing& p, const FModPtr& mt) {
    std::vector<std::vector<Index>> out;
    const std::size_t k = p.eval.size();
    if (!p.V) {
        double total = 1;
        for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(mt->size());
        if (total > 1e6) throw Unsupported("Hom(V, M) too large to enumerate");
        std::vector<Index> cur(k, 0);
        while (true) {
            out.push_back(cur);
            std::size_t i = 0;
            while (i < k && ++cur[i] == static_cast<Index>(mt->size())) cur[i++] = 0;
            if (i == k) break;
        }
        return out;
    }
    for (const auto& f : hom_enumerate(p.V->tabulate(), mt)) out.push_back(f.img);
    return out;
}

}  // namespace

AlphaVerdict alpha_check(const Pairing& p, const ModPtr& m, std::size_t budget) {
    AlphaVerdict v;
    v.module = m->describe();
    auto a = alpha_table(p, m, budget);
    const auto& M = *a.mt;
    std::map<std::vector<Index>, std::size_t> seen;
    for (std::size_t i = 0; i < a.elems.size(); ++i) {
        auto [it, fresh] = seen.emplace(a.value[i], i);
        if (!fresh && v.injective) {
            v.injective = false;
            const Elem& other = a.elems[it->second];
            v.injective_witness = a.t->result->is_zero(other)
                                      ? tensor_element_name(*a.t, a.elems[i]) + " ↦ 0"
                                      : tensor_element_name(*a.t, other) + " and " + tensor_element_name(*a.t, a.elems[i]) +
                                            " ↦ " + show_vector(M, p.v_names, a.value[i]);
        }
    }
    const auto homs = hom_target(p, a.mt);
    for (const auto& h : homs) {
        if (seen.count(h)) continue;
        for (const auto& [l, _] : seen) {
            std::vector<Index> s(h.size());
            for (std::size_t k = 0; k < h.size(); ++k) s[k] = M.add(h[k], l[k]);
            if (seen.count(s)) {
                v.subtractive = false;
                v.subtractive_witness = show_vector(M, p.v_names, h) + " + " + show_vector(M, p.v_names, l) +
                                        " lies in the image, " + show_vector(M, p.v_names, h) + " does not";
                break;
            }
        }
        if (!v.subtractive) break;
    }
    return v;
}

AlphaCertificate certify_alpha(const Pairing& p, const std::vector<ModPtr>& family, std::size_t budget) {
    AlphaCertificate c;
    for (const auto& m : family) {
        auto v = alpha_check(p, m, budget);
        if (!v.ok() && c.ok) {
            c.ok = false;
            c.witness = v.module + ": " + (v.injective ? "not subtractive, " + v.subtractive_witness
                                                       : "not injective, " + v.injective_witness);
        }
        c.members.push_back(std::move(v));
    }
    return c;
}

std::vector<ModPtr> default_alpha_family(const SemiringPtr& base) {
    std::vector<ModPtr> out;
    for (const auto& m : enumerate_modules(base, 4)) out.push_back(as_structured(m));
    if (!base->is_finite()) {
        for (int n = 2; n <= 4; ++n) out.push_back(make_module(base, {cyclic_atom(n)}));
        out.push_back(make_module(base, {boolean_atom()}));
    }
    return out;
}

Pairing free_pairing(const SemiringPtr& a, int n) {
    Pairing p;
    p.name = "free(" + a->name() + "," + std::to_string(n) + ")";
    p.base = a;
    p.W = free_structured(a, n);
    auto s = regular(a);
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<Elem>> im;
        for (int j = 0; j < n; ++j) im.push_back({scal(i == j ? one_of(a) : 0)});
        p.v_names.push_back("e" + std::to_string(i + 1) + "*");
        p.eval.push_back(map_from_images(p.W, s, im));
    }
    return p;
}

Pairing trivial_pairing(const SemiringPtr& a) {
    auto p = free_pairing(a, 1);
    p.name = "(" + a->name() + "," + a->name() + ")";
    p.v_names = {"1"};
    return p;
}

Pairing functional_pairing(const ModPtr& w, std::vector<std::string> names, std::vector<LinearMap> functionals) {
    if (names.size() != functionals.size()) throw InputError("one name per functional");
    Pairing p;
    p.name = "(*W,W)";
    p.base = w->base();
    p.W = w;
    p.v_names = std::move(names);
    p.eval = std::move(functionals);
    return p;
}

namespace {

// V given explicitly: the free module on the listed v's with every element.
Pairing materialize(const Pairing& p) {
    if (p.V) return p;
    const auto& A = p.base;
    if (!A->is_finite()) throw Unsupported("explicit V over an infinite base");
    Pairing q = p;
    q.V = free_structured(A, static_cast<int>(p.eval.size()));
    q.v_names.clear();
    q.eval.clear();
    auto s = regular(A);
    for (const auto& v : q.V->elements()) {
        q.v_names.push_back(q.V->show(v));
        auto base = p.eval;
        q.eval.push_back(map_from_fn(p.W, s, [base, v, A](const Elem& w) {
            Scalar acc = 0;
            for (std::size_t i = 0; i < base.size(); ++i) acc = A->add(acc, A->mul(v[i].v, base[i](w)[0].v));
            return scal(acc);
        }));
    }
    return q;
}

}  // namespace

Pairing pairing_tensor(const Pairing& p, const Pairing& q, std::size_t budget) {
    if (!same_semiring(p.base, q.base)) throw InputError("pairings over different bases");
    const auto& A = p.base;
    Pairing out;
    out.name = p.name + " ⊗ " + q.name;
    out.base = A;
    auto ww = tensor(p.W, q.W, budget);
    out.W = ww->result;
    auto s = regular(A);
    auto ev = [A, ww](const LinearMap& pv, const LinearMap& qv) {
        return [A, ww, pv, qv](const Elem& x) {
            Scalar acc = 0;
            for (const auto& [w, w2] : ww->decompose(x)) acc = A->add(acc, A->mul(pv(w)[0].v, qv(w2)[0].v));
            return scal(acc);
        };
    };
    if (!p.V && !q.V) {
        for (std::size_t j = 0; j < q.eval.size(); ++j)
            for (std::size_t i = 0; i < p.eval.size(); ++i) {
                out.v_names.push_back(q.v_names[j] + "⊗" + p.v_names[i]);
                out.eval.push_back(map_from_fn(out.W, s, ev(p.eval[i], q.eval[j])));
            }
        return out;
    }
    const Pairing pm = materialize(p), qm = materialize(q);
    auto vv = tensor(qm.V, pm.V, budget);
    if (!vv->result->finite()) throw Unsupported("V′ ⊗ V is infinite");
    out.V = vv->result;
    for (const auto& y : vv->result->elements()) {
        out.v_names.push_back(vv->result->show(y));
        std::vector<std::pair<LinearMap, LinearMap>> terms;
        for (const auto& [v2, v] : vv->decompose(y))
            terms.emplace_back(pm.eval[pm.V->index_of(v)], qm.eval[qm.V->index_of(v2)]);
        out.eval.push_back(map_from_fn(out.W, s, [A, ww, terms](const Elem& x) {
            Scalar acc = 0;
            const auto parts = ww->decompose(x);
            for (const auto& [pv, qv] : terms)
                for (const auto& [w, w2] : parts) acc = A->add(acc, A->mul(pv(w)[0].v, qv(w2)[0].v));
            return scal(acc);
        }));
    }
    return out;
}

// ---- measuring pairings ------------------------------------------------------------

FModPtr MeasuringPairing::restrict(const FModPtr& m) const { return restrict_scalars(m, unit); }

ModPtr MeasuringPairing::algebra_over_base() const { return as_structured(restrict(regular_module(algebra))); }

Pairing MeasuringPairing::as_pairing() const {
    Pairing p;
    p.name = name;
    p.base = coring->base;
    p.V = algebra_over_base();
    p.W = coring->carrier;
    p.v_names = algebra->tables().elements;
    p.eval = kappa;
    return p;
}

MeasuringPairing measuring_pairing(std::string name, const SemiringPtr& algebra, const CoringPtr& c,
                                   const SemiringMorphism& unit, const std::vector<std::vector<Scalar>>& eval) {
    if (!algebra->is_finite()) throw Unsupported("measuring pairings need a finite semiring");
    if (eval.size() != algebra->size()) throw InputError("evaluation table needs one row per element of the semiring");
    MeasuringPairing p;
    p.name = std::move(name);
    p.algebra = algebra;
    p.coring = c;
    p.unit = unit;
    const std::size_t ng = c->generators().size();
    for (const auto& row : eval) {
        if (row.size() != ng) throw InputError("evaluation row needs one entry per generator of the coring");
        std::vector<Elem> flat;
        for (Scalar s : row) {
            if (c->base->is_finite() && (s < 0 || s >= static_cast<Scalar>(c->base->size())))
                throw InputError("evaluation entry out of range");
            flat.push_back(scal(s));
        }
        p.kappa.push_back(map_from_images(c->carrier, c->scalars, by_atom(*c->carrier, flat)));
    }
    return p;
}

MeasuringPairing dual_pairing(const DualSemiring& d) {
    if (d.side != DualSide::Left) throw InputError("the measuring pairing uses the left dual");
    MeasuringPairing p;
    p.name = "(*C," + d.origin->name + ")";
    p.algebra = d.semiring;
    p.coring = d.origin;
    p.kappa = d.maps;
    const auto& A = d.origin->base;
    p.unit.source = A;
    p.unit.target = d.semiring;
    auto c = d.origin;
    for (Scalar s : A->elements()) {
        auto f = map_from_fn(c->carrier, c->scalars, [c, s, A](const Elem& x) { return scal(A->mul(c->eps_of(x), s)); });
        const int h = d.index_of(f);
        if (h < 0) throw std::logic_error("ε·s is not in the dual");
        p.unit.map.push_back(h);
    }
    return p;
}

Report check_measuring(const MeasuringPairing& p) {
    Report r;
    r.merge(check_semiring_morphism(p.unit), "η ");
    auto d = dual_semiring(p.coring, DualSide::Left);
    const std::size_t n = p.algebra->size();
    std::vector<int> k(n);
    std::string wl;
    for (std::size_t a = 0; a < n; ++a) {
        if (!check_linear_map(p.kappa[a]).ok() && wl.empty()) wl = p.algebra->show(static_cast<Scalar>(a));
        k[a] = d.index_of(p.kappa[a]);
        if (k[a] < 0 && wl.empty()) wl = p.algebra->show(static_cast<Scalar>(a));
    }
    r.add("κ lands in *C", wl.empty(), wl);
    if (!wl.empty()) return r;
    const auto& A = *p.algebra;
    std::string ws, wm, wu;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto sa = static_cast<Scalar>(a), sb = static_cast<Scalar>(b);
            if (ws.empty() && k[A.add(sa, sb)] != d.tables.add[k[a]][k[b]]) ws = "(" + A.show(sa) + "," + A.show(sb) + ")";
            if (wm.empty() && k[A.mul(sa, sb)] != d.tables.mul[k[a]][k[b]]) wm = "(" + A.show(sa) + "," + A.show(sb) + ")";
        }
    r.add("κ additive", ws.empty() && k[0] == 0, ws.empty() ? "κ(0) != 0" : ws);
    r.add("κ multiplicative", wm.empty(), wm);
    r.add("κ(1) = ε", k[A.one()] == d.unit, "κ(1) = " + d.tables.elements[k[A.one()]]);
    const auto& B = *p.coring->base;
    for (Scalar s : B.elements()) {
        const auto& c = p.coring;
        auto f = map_from_fn(c->carrier, c->scalars, [c, s, &B](const Elem& x) { return scal(B.mul(c->eps_of(x), s)); });
        if (wu.empty() && !maps_equal(p.kappa[p.unit(s)], f)) wu = B.show(s);
    }
    r.add("κ∘η = ε·-", wu.empty(), wu);
    return r;
}

FModPtr induced_action(const MeasuringPairing& p, const Semicomodule& m) {
    if (!p.algebra->commutative()) throw Unsupported("induced action over a non-commutative semiring");
    const Module& M = *m.carrier;
    auto mt = M.tabulate();
    const auto els = M.elements();
    ModuleTables t;
    t.elements = mt->names();
    t.add.assign(els.size(), std::vector<int>(els.size()));
    for (std::size_t x = 0; x < els.size(); ++x)
        for (std::size_t y = 0; y < els.size(); ++y) t.add[x][y] = mt->add(static_cast<Index>(x), static_cast<Index>(y));
    const std::size_t q = p.algebra->size();
    t.ract.assign(els.size(), std::vector<int>(q));
    for (std::size_t x = 0; x < els.size(); ++x) {
        const auto parts = m.mc->decompose(m.rho(els[x]));
        for (std::size_t a = 0; a < q; ++a) {
            Elem acc = M.zero();
            for (const auto& [m0, m1] : parts) acc = M.add(acc, M.ract(m0, p.kappa[a](m1)[0].v));
            t.ract[x][a] = static_cast<int>(M.index_of(acc));
        }
    }
    return module_from_tables(p.algebra, t);
}

// ---- rational parts ------------------------------------------------------------

RationalPart rational_part(const MeasuringPairing& p, const FModPtr& m, std::size_t budget) {
    RationalPart out;
    out.ambient = m;
    out.part = zero_sub(m);
    out.representing.assign(m->size(), std::nullopt);
    auto ma = as_structured(p.restrict(m));
    const Pairing pr = p.as_pairing();
    auto alpha = alpha_check(pr, ma, budget);
    if (!alpha.ok()) {
        out.refused = true;
        out.reason = "α-condition fails on the ambient module: " +
                     (alpha.injective ? alpha.subtractive_witness : alpha.injective_witness);
        return out;
    }
    auto a = alpha_table(pr, ma, budget);
    out.ambient_tensor = a.t;
    std::map<std::vector<Index>, std::size_t> rep;
    for (std::size_t i = 0; i < a.elems.size(); ++i) rep.emplace(a.value[i], i);
    const std::size_t q = p.algebra->size();
    std::vector<Index> members;
    for (Index x = 0; x < static_cast<Index>(m->size()); ++x) {
        std::vector<Index> row(q);
        for (std::size_t s = 0; s < q; ++s) row[s] = m->ract(x, static_cast<Scalar>(s));
        auto it = rep.find(row);
        if (it == rep.end()) continue;
        out.part.in[x] = 1;
        out.representing[x] = a.elems[it->second];
        members.push_back(x);
    }
    std::string w;
    out.report.add("Rat is an 𝒜-submodule", is_submodule(out.part, &w), w);
    if (!out.report.ok()) return out;

    // the coaction on the part: lift the representing tensors into Rat ⊗ C
    const Module& MA = *ma;
    auto sm = as_module(make_subset(p.restrict(m), members));
    auto carrier = as_structured(sm.module);
    auto incl = from_finite(sm.incl, carrier, ma);
    auto sc = tensor(carrier, p.coring->carrier, budget);
    auto ic = tensor_maps(sc, a.t, incl, map_identity(p.coring->carrier));
    std::map<Elem, std::vector<Elem>> pre;
    for (const auto& t : sc->result->elements()) pre[ic(t)].push_back(t);
    std::vector<Elem> lifts;
    std::string wl;
    for (Index k = 0; k < static_cast<Index>(sm.module->size()); ++k) {
        const Index x = sm.incl(k);
        auto it = pre.find(*out.representing[x]);
        if (it == pre.end() || it->second.size() != 1) {
            if (wl.empty()) wl = MA.show(MA.element_at(static_cast<std::size_t>(x)));
            lifts.push_back(sc->result->zero());
        } else {
            lifts.push_back(it->second[0]);
        }
    }
    out.report.add("representing tensors lie in Rat ⊗ C", wl.empty(), wl);
    if (!wl.empty()) return out;
    out.comodule = make_comodule("Rat(" + p.name + ")", p.coring, carrier, table_images(*carrier, lifts), budget);
    out.report.merge(check_comodule(*out.comodule, budget), "Rat ");
    return out;
}

Report q2_criterion(const Pairing& p, const ModPtr& l, std::size_t budget) {
    Report r;
    auto a = alpha_table(p, l, budget);
    const auto& L = *a.mt;
    std::map<Elem, std::size_t> pos;
    for (std::size_t i = 0; i < a.elems.size(); ++i) pos.emplace(a.elems[i], i);
    std::string w;
    std::size_t pairs = 0;
    for (const auto& k : all_submodules(a.mt)) {
        const Subset kb = subtractive_closure(k);
        auto km = as_module(kb);
        auto ks = as_structured(km.module);
        auto tk = tensor(ks, p.W, budget);
        auto im = tensor_maps(tk, a.t, from_finite(km.incl, ks, l), map_identity(p.W));
        std::vector<char> in_image(a.elems.size(), 0);
        for (const auto& t : tk->result->elements()) in_image[pos.at(im(t))] = 1;
        for (std::size_t i = 0; i < a.elems.size(); ++i) {
            bool all_in = true;
            for (Index v : a.value[i]) all_in = all_in && kb.contains(v);
            ++pairs;
            if (w.empty() && all_in != static_cast<bool>(in_image[i])) {
                std::string ks_name;
                for (Index e : kb.elements()) ks_name += (ks_name.empty() ? "" : ",") + L.name(e);
                w = "K̄ = {" + ks_name + "}, t = " + tensor_element_name(*a.t, a.elems[i]) +
                    (all_in ? ": values in K̄ but t ∉ K̄⊗W" : ": t ∈ K̄⊗W but a value leaves K̄");
            }
        }
    }
    r.add("q-2 criterion on " + l->describe() + " (" + std::to_string(pairs) + " cases)", w.empty(), w);
    return r;
}

namespace {

// Rat(sub) as a subset of the ambient indices.
std::vector<char> rat_inside(const MeasuringPairing& p, const Subset& s, std::size_t budget, bool* refused) {
    auto sm = as_module(s);
    auto r = rational_part(p, sm.module, budget);
    std::vector<char> in(s.in.size(), 0);
    if (r.refused) {
        *refused = true;
        return in;
    }
    for (Index k = 0; k < static_cast<Index>(sm.module->size()); ++k)
        if (r.part.contains(k)) in[sm.incl(k)] = 1;
    return in;
}

std::string show_subset(const Subset& s) {
    std::string out;
    for (Index e : s.elements()) out += (out.empty() ? "" : ",") + s.ambient->name(e);
    return "{" + out + "}";
}

}  // namespace

Report rat_property_suite(const MeasuringPairing& p, const std::vector<FModPtr>& family, std::size_t budget) {
    Report r;
    std::string w_alpha, w_sub, w_closed, w_cl3, w_idem, w_fun, w_co, w_q2;
    std::vector<RationalPart> parts;
    for (const auto& m : family) parts.push_back(rational_part(p, m, budget));
    const Pairing pr = p.as_pairing();
    std::size_t maps = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& m = family[i];
        const auto& R = parts[i];
        const std::string tag = "module #" + std::to_string(i) + " (" + std::to_string(m->size()) + " elements)";
        if (R.refused) {
            if (w_alpha.empty()) w_alpha = tag + ": " + R.reason;
            continue;
        }
        if (w_co.empty() && !R.report.ok()) w_co = tag + ": " + R.report.first_failure()->name;
        std::string w;
        if (w_sub.empty() && !is_submodule(R.part, &w)) w_sub = tag + ": " + w;
        if (w_closed.empty() && !is_subtractive(R.part)) w_closed = tag + ": Rat = " + show_subset(R.part);
        bool refused = false;
        // item 3 on every closed submodule
        for (const auto& l : all_submodules(m)) {
            const Subset lb = subtractive_closure(l);
            auto in = rat_inside(p, lb, budget, &refused);
            for (Index x = 0; x < static_cast<Index>(m->size()); ++x)
                if (w_cl3.empty() && static_cast<bool>(in[x]) != (lb.contains(x) && R.part.contains(x)))
                    w_cl3 = tag + ": L̄ = " + show_subset(lb) + " at " + m->name(x);
        }
        // item 4
        auto in = rat_inside(p, R.part, budget, &refused);
        if (w_idem.empty() && in != R.part.in) w_idem = tag;
        if (refused && w_alpha.empty()) w_alpha = tag + ": a submodule fails the α-condition";
        // item 5
        for (std::size_t j = 0; j < family.size(); ++j) {
            if (parts[j].refused) continue;
            for (const auto& f : hom_enumerate(m, family[j])) {
                ++maps;
                for (Index x : R.part.elements())
                    if (w_fun.empty() && !parts[j].part.contains(f(x)))
                        w_fun = tag + " → module #" + std::to_string(j) + ": " + m->name(x) + " ↦ " + family[j]->name(f(x));
            }
        }
        auto q2 = q2_criterion(pr, as_structured(p.restrict(m)), budget);
        if (w_q2.empty() && !q2.ok()) w_q2 = tag + ": " + q2.first_failure()->witness;
    }
    r.add("α-condition on the family", w_alpha.empty(), w_alpha);
    r.add("Rat is an 𝒜-submodule", w_sub.empty(), w_sub);
    r.add("Rat is subtractive", w_closed.empty(), w_closed);
    r.add("Rat(L̄) = L̄ ∩ Rat(M)", w_cl3.empty(), w_cl3);
    r.add("Rat(Rat(M)) = Rat(M)", w_idem.empty(), w_idem);
    r.add("f(Rat(M)) ⊆ Rat(N) over " + std::to_string(maps) + " maps", w_fun.empty(), w_fun);
    r.add("Rat carries a coaction", w_co.empty(), w_co);
    r.add("q-2 criterion", w_q2.empty(), w_q2);
    return r;
}

DualModule algebra_dual(const MeasuringPairing& p) {
    if (!p.algebra->commutative()) throw Unsupported("𝒜* over a non-commutative semiring");
    const auto& S = *p.algebra;
    const auto& A = p.coring->base;
    auto v = p.restrict(regular_module(p.algebra));
    auto homs = hom_enumerate(v, regular_module(A));
    std::stable_partition(homs.begin(), homs.end(), [](const FiniteMap& f) {
        return std::all_of(f.img.begin(), f.img.end(), [](Index x) { return x == 0; });
    });
    std::map<std::vector<Index>, int> id;
    for (std::size_t h = 0; h < homs.size(); ++h) id.emplace(homs[h].img, static_cast<int>(h));
    const std::size_t n = homs.size(), q = S.size();
    ModuleTables t;
    for (const auto& f : homs) {
        std::string nm = "[";
        for (std::size_t b = 0; b < q; ++b) nm += (b ? "," : "") + S.show(static_cast<Scalar>(b)) + "↦" + A->show(f.img[b]);
        t.elements.push_back(nm + "]");
    }
    t.add.assign(n, std::vector<int>(n));
    t.ract.assign(n, std::vector<int>(q));
    for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t g = 0; g < n; ++g) {
            std::vector<Index> s(q);
            for (std::size_t b = 0; b < q; ++b) s[b] = static_cast<Index>(A->add(homs[f].img[b], homs[g].img[b]));
            t.add[f][g] = id.at(s);
        }
        for (std::size_t a = 0; a < q; ++a) {
            std::vector<Index> s(q);
            for (std::size_t b = 0; b < q; ++b) s[b] = homs[f].img[S.mul(static_cast<Scalar>(a), static_cast<Scalar>(b))];
            t.ract[f][a] = id.at(s);
        }
    }
    DualModule out;
    out.module = module_from_tables(p.algebra, t);
    for (const auto& c : p.coring->carrier->elements()) {
        std::vector<Index> s(q);
        for (std::size_t b = 0; b < q; ++b) s[b] = static_cast<Index>(p.kappa[b](c)[0].v);
        out.chi.push_back(id.at(s));
    }
    return out;
}

Report rat_of_dual(const MeasuringPairing& p, std::size_t budget) {
    Report r;
    auto d = algebra_dual(p);
    auto rat = rational_part(p, d.module, budget);
    if (rat.refused) {
        r.add("α-condition on 𝒜*", false, rat.reason);
        return r;
    }
    r.merge(rat.report);
    std::vector<char> img(d.module->size(), 0);
    for (Index x : d.chi) img[x] = 1;
    std::set<Index> distinct(d.chi.begin(), d.chi.end());
    r.add("χ injective", distinct.size() == d.chi.size(), "two elements of C with the same functional");
    r.add("Rat(𝒜*) = χ(C)", img == rat.part.in, "Rat(𝒜*) = " + show_subset(rat.part));
    auto cm = induced_action(p, *regular_comodule(p.coring));
    std::string w;
    for (Index c = 0; c < static_cast<Index>(cm->size()) && w.empty(); ++c)
        for (Scalar a : p.algebra->elements())
            if (d.chi[cm->ract(c, a)] != d.module->ract(d.chi[c], a)) {
                w = cm->name(c) + "·" + p.algebra->show(a);
                break;
            }
    r.add("χ is 𝒜-linear", w.empty(), w);
    return r;
}

Report rational_round_trip(const MeasuringPairing& p, const Semicomodule& m, std::size_t budget) {
    Report r;
    auto am = induced_action(p, m);
    r.merge(check_semimodule_axioms(*am), "induced ");
    auto mt = m.carrier->tabulate();
    r.add("η recovers the A-action", p.restrict(am)->same_tables(*mt), m.name);
    auto rat = rational_part(p, am, budget);
    if (rat.refused) {
        r.add("α-condition", false, rat.reason);
        return r;
    }
    r.add("Rat = M", rat.part == full_sub(am), "Rat = " + show_subset(rat.part));
    if (!r.ok()) return r;
    auto ma = rat.ambient_tensor->left;
    auto phi = map_from_fn(m.carrier, ma, [src = m.carrier](const Elem& x) {
        return Elem{Val{static_cast<std::int64_t>(src->index_of(x)), 1}};
    });
    auto push = tensor_maps(m.mc, rat.ambient_tensor, phi, map_identity(m.coring->carrier));
    std::string w;
    const auto els = m.carrier->elements();
    for (std::size_t x = 0; x < els.size() && w.empty(); ++x)
        if (push(m.rho(els[x])) != *rat.representing[x]) w = m.carrier->show(els[x]);
    r.add("recovered coaction equals ρ", w.empty(), w);
    return r;
}

Report hom_comparison(const MeasuringPairing& p, const Semicomodule& m, const Semicomodule& n) {
    Report r;
    std::set<std::vector<Index>> colin, lin;
    for (const auto& f : colinear_maps(m, n)) colin.insert(table_of(f));
    for (const auto& f : hom_enumerate(induced_action(p, m), induced_action(p, n))) lin.insert(f.img);
    std::string w;
    for (const auto& f : lin)
        if (!colin.count(f)) {
            w = "an 𝒜-linear map that is not colinear";
            break;
        }
    for (const auto& f : colin)
        if (w.empty() && !lin.count(f)) w = "a colinear map that is not 𝒜-linear";
    r.add("Hom^C = Hom_𝒜 (" + std::to_string(colin.size()) + " maps)", w.empty(), w);
    return r;
}

Report end_isomorphism(const CoringPtr& cp) {
    Report r;
    const Semicoring& c = *cp;
    const Module& C = *c.carrier;
    auto d = dual_semiring(cp, DualSide::Right);
    auto reg = regular_comodule(cp);
    std::map<std::vector<Index>, int> ends;
    for (const auto& f : colinear_maps(*reg, *reg)) ends.emplace(table_of(f), static_cast<int>(ends.size()));
    const auto els = C.elements();
    std::vector<std::vector<Index>> phi;
    for (const auto& f : d.maps) {
        std::vector<Index> img(els.size());
        for (std::size_t x = 0; x < els.size(); ++x) {
            Elem acc = C.zero();
            for (const auto& [c1, c2] : c.cc->decompose(c.delta(els[x]))) acc = C.add(acc, C.lact(f(c1)[0].v, c2));
            img[x] = static_cast<Index>(C.index_of(acc));
        }
        phi.push_back(std::move(img));
    }
    std::string w_in, w_inv;
    std::set<std::vector<Index>> seen;
    for (std::size_t h = 0; h < phi.size(); ++h) {
        if (w_in.empty() && !ends.count(phi[h])) w_in = d.tables.elements[h];
        seen.insert(phi[h]);
        for (std::size_t x = 0; x < els.size() && w_inv.empty(); ++x)
            if (c.eps_of(C.element_at(static_cast<std::size_t>(phi[h][x]))) != d.maps[h](els[x])[0].v)
                w_inv = d.tables.elements[h];
    }
    r.add("Φ(f) is colinear", w_in.empty(), w_in);
    r.add("Φ bijective onto End^C(C)", seen.size() == phi.size() && seen.size() == ends.size(),
          std::to_string(phi.size()) + " functionals, " + std::to_string(ends.size()) + " colinear endomorphisms");
    r.add("ε∘Φ(f) = f", w_inv.empty(), w_inv);
    std::string w_add, w_mul;
    const std::size_t n = phi.size();
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t g = 0; g < n; ++g) {
            const auto& s = phi[d.tables.add[f][g]];
            const auto& pr = phi[d.tables.mul[f][g]];
            for (std::size_t x = 0; x < els.size(); ++x) {
                if (w_add.empty() && static_cast<std::size_t>(s[x]) != C.index_of(C.add(C.element_at(phi[f][x]), C.element_at(phi[g][x]))))
                    w_add = d.tables.elements[f] + ", " + d.tables.elements[g];
                if (w_mul.empty() && pr[x] != phi[f][phi[g][x]]) w_mul = d.tables.elements[f] + ", " + d.tables.elements[g];
            }
        }
    r.add("Φ additive", w_add.empty(), w_add);
    r.add("Φ(f ⋆ g) = Φ(f)∘Φ(g)", w_mul.empty(), w_mul);
    std::vector<Index> id(els.size());
    for (std::size_t x = 0; x < els.size(); ++x) id[x] = static_cast<Index>(x);
    r.add("Φ(ε) = id", phi[d.unit] == id, "Φ(ε) is not the identity");
    return r;
}

// ---- limits and colimits ---------------------------------------------------------

Coequalizer comodule_coequalizer(const LinearMap& f, const LinearMap& g, const Semicomodule& m, const Semicomodule& n,
                                 const std::vector<ComodulePtr>& targets) {
    auto nt = n.carrier->tabulate();
    std::vector<std::pair<Index, Index>> rel;
    for (const auto& x : m.carrier->elements())
        rel.emplace_back(static_cast<Index>(n.carrier->index_of(f(x))), static_cast<Index>(n.carrier->index_of(g(x))));
    auto q = quotient(congruence_generated(nt, rel));
    auto carrier = as_structured(q.module);
    auto pi = from_finite(q.proj, n.carrier, carrier);
    auto qc = tensor(carrier, n.coring->carrier);
    auto pc = tensor_maps(n.mc, qc, pi, map_identity(n.coring->carrier));
    const std::size_t nq = q.module->size();
    std::vector<Elem> images(nq);
    std::vector<char> set(nq, 0);
    std::vector<Index> rep(nq, 0);
    std::string w_def;
    const auto nels = n.carrier->elements();
    for (std::size_t x = 0; x < nels.size(); ++x) {
        const Index k = q.proj(static_cast<Index>(x));
        const Elem t = pc(n.rho(nels[x]));
        if (!set[k]) {
            set[k] = 1;
            images[k] = t;
            rep[k] = static_cast<Index>(x);
        } else if (w_def.empty() && images[k] != t) {
            w_def = n.carrier->show(nels[rep[k]]) + " and " + n.carrier->show(nels[x]);
        }
    }
    Coequalizer out{make_comodule("Coeq", n.coring, carrier, table_images(*carrier, images)), pi, {}};
    auto& r = out.report;
    r.add("induced coaction well defined", w_def.empty(), w_def);
    r.merge(check_comodule(*out.comodule), "Coeq ");
    r.merge(comodule_hom_check(pi, n, *out.comodule), "π ");
    r.add("π∘f = π∘g", maps_equal(map_compose(pi, f), map_compose(pi, g)), "π∘f ≠ π∘g");

    std::size_t factored = 0;
    std::string w_uni;
    for (const auto& x : targets) {
        for (const auto& h : colinear_maps(n, *x)) {
            if (!maps_equal(map_compose(h, f), map_compose(h, g))) continue;
            std::vector<Elem> hb(nq);
            for (std::size_t k = 0; k < nq; ++k) hb[k] = h(nels[rep[k]]);
            bool ok = true;
            for (std::size_t y = 0; y < nels.size() && ok; ++y) ok = hb[q.proj(static_cast<Index>(y))] == h(nels[y]);
            if (ok) {
                auto hbar = map_from_images(carrier, x->carrier, table_images(*carrier, hb));
                ok = check_linear_map(hbar).ok() && is_colinear(hbar, *out.comodule, *x);
            }
            if (!ok && w_uni.empty()) w_uni = "a map into " + x->name + " does not factor";
            ++factored;
        }
    }
    r.add("universal property (" + std::to_string(factored) + " maps)", w_uni.empty(), w_uni);
    return out;
}

FlatnessCertificate equalizer_certificate(const LinearMap& f, const LinearMap& g, const Semicomodule& m) {
    std::vector<Index> idx;
    auto mt = m.carrier->tabulate();
    const auto els = m.carrier->elements();
    for (std::size_t x = 0; x < els.size(); ++x)
        if (f(els[x]) == g(els[x])) idx.push_back(static_cast<Index>(x));
    auto sm = as_module(make_subset(mt, idx));
    auto carrier = as_structured(sm.module);
    return flatness_probe(m.coring->carrier, {from_finite(sm.incl, carrier, m.carrier)});
}

Equalizer comodule_equalizer(const LinearMap& f, const LinearMap& g, const Semicomodule& m, const Semicomodule& n,
                             const FlatnessCertificate& cert, const std::vector<ComodulePtr>& sources) {
    Equalizer out;
    if (!cert.mono_flat || cert.undecided) {
        out.refused = true;
        out.reason = cert.undecided ? "flatness certificate undecided"
                                    : "C is not mono-flat on the certificate family: " + cert.witness;
        return out;
    }
    std::vector<Elem> eq;
    for (const auto& x : m.carrier->elements())
        if (f(x) == g(x)) eq.push_back(x);
    auto res = restrict_comodule(m, eq, "Eq");
    auto& r = out.report;
    r.add("coaction restricts to Eq", res.comodule != nullptr, res.witness);
    if (!res.comodule) return out;
    out.comodule = res.comodule;
    out.inclusion = res.inclusion;
    const auto& incl = *res.inclusion;
    r.merge(check_comodule(*res.comodule), "Eq ");
    r.merge(comodule_hom_check(incl, *res.comodule, m), "ι ");
    r.add("f∘ι = g∘ι", maps_equal(map_compose(f, incl), map_compose(g, incl)), "f∘ι ≠ g∘ι");
    (void)n;

    std::size_t factored = 0;
    std::string w_uni;
    const auto ecar = res.comodule->carrier;
    auto back = std::make_shared<std::map<Elem, Elem>>();
    for (const auto& e : ecar->elements()) (*back)[incl(e)] = e;
    for (const auto& x : sources) {
        for (const auto& h : colinear_maps(*x, m)) {
            if (!maps_equal(map_compose(f, h), map_compose(g, h))) continue;
            // h lands in Eq; its corestriction
            auto ht = map_from_fn(x->carrier, ecar, [h, back](const Elem& y) { return back->at(h(y)); });
            bool ok = maps_equal(map_compose(incl, ht), h) && check_linear_map(ht).ok() &&
                      is_colinear(ht, *x, *res.comodule);
            if (!ok && w_uni.empty()) w_uni = "a map from " + x->name + " does not factor";
            ++factored;
        }
    }
    r.add("universal property (" + std::to_string(factored) + " maps)", w_uni.empty(), w_uni);
    return out;
}

bool completely_subtractive(const Module& m, std::string* witness) {
    auto mt = m.tabulate();
    for (const auto& s : all_submodules(mt))
        if (!is_subtractive(s)) {
            if (witness) *witness = show_subset(s);
            return false;
        }
    return true;
}

FiniteClosure finiteness_closure(const MeasuringPairing& p, const Semicomodule& m, const std::vector<Elem>& f) {
    FiniteClosure out;
    std::string w;
    if (!completely_subtractive(*m.carrier, &w)) {
        out.applicable = false;
        out.reason = "hypothesis failed: " + w + " is not subtractive";
        return out;
    }
    auto am = induced_action(p, m);
    std::vector<Index> gens;
    for (const auto& x : f) gens.push_back(static_cast<Index>(m.carrier->index_of(x)));
    auto s = generated(am, gens);
    for (Index x : s.elements()) out.elements.push_back(m.carrier->element_at(static_cast<std::size_t>(x)));
    out.generators = f;
    auto res = restrict_comodule(m, out.elements, "N");
    if (!res.comodule) {
        out.applicable = false;
        out.reason = "the span is not a subcomodule: " + res.witness;
        return out;
    }
    out.comodule = res.comodule;
    return out;
}

CogeneratorVerdict cogenerator_probe(const ModPtr& q, const Semicomodule& n, const std::vector<ColinearPair>& pairs) {
    CogeneratorVerdict out;
    const auto& c = n.coring;
    auto cof = cofree_comodule(q, c);
    auto qc = tensor(q, c->carrier);
    std::vector<LinearMap> hs;
    for (const auto& k : hom_enumerate(n.carrier->tabulate(), q->tabulate())) {
        auto h = map_compose(tensor_maps(n.mc, qc, from_finite(k, n.carrier, q), map_identity(c->carrier)), n.rho);
        if (is_colinear(h, n, *cof)) hs.push_back(h);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [f, g] = pairs[i];
        const auto els = f.src->elements();
        bool distinct = false;
        for (const auto& x : els) distinct = distinct || f(x) != g(x);
        if (!distinct) {
            out.notes.push_back("pair " + std::to_string(i) + ": f = g");
            continue;
        }
        bool sep = false;
        for (const auto& h : hs) {
            for (const auto& x : els)
                if (h(f(x)) != h(g(x))) {
                    sep = true;
                    break;
                }
            if (sep) break;
        }
        out.notes.push_back("pair " + std::to_string(i) + (sep ? ": separated" : ": no separating map"));
        out.ok = out.ok && sep;
    }
    return out;
}

}  // namespace semialg
