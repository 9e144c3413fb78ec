#include "semialg/finite_module.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace semialg {

FiniteModule::FiniteModule(SemiringPtr base, std::vector<std::string> names, std::vector<Index> add,
                           std::vector<Index> ract, std::vector<Index> lact)
    : base_(std::move(base)),
      n_(names.size()),
      names_(std::move(names)),
      add_(std::move(add)),
      ract_(std::move(ract)),
      lact_(std::move(lact)) {
    if (n_ == 0) throw InputError("a semimodule needs at least the zero element");
    if (add_.size() != n_ * n_) throw InputError("addition table has wrong size");
    if (base_->is_finite()) {
        if (ract_.size() != n_ * base_->size() || lact_.size() != n_ * base_->size())
            throw InputError("action table has wrong size");
    }
}

Index FiniteModule::multiple(Index m, std::uint64_t k) const {
    Index acc = 0, p = m;
    while (k) {
        if (k & 1) acc = add(acc, p);
        p = add(p, p);
        k >>= 1;
    }
    return acc;
}

std::optional<Index> FiniteModule::find(const std::string& name) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (names_[i] == name) return static_cast<Index>(i);
    return std::nullopt;
}

std::vector<Scalar> FiniteModule::scalars() const {
    if (nat_base()) return {};
    return base_->elements();
}

bool FiniteModule::same_tables(const FiniteModule& o) const {
    return same_semiring(base_, o.base_) && add_ == o.add_ && ract_ == o.ract_ && lact_ == o.lact_;
}

FModPtr module_from_tables(const SemiringPtr& base, const ModuleTables& t) {
    const int n = static_cast<int>(t.elements.size());
    if (n == 0) throw InputError("module has no elements");
    if (t.zero < 0 || t.zero >= n) throw InputError("zero out of range");
    auto bad = [&](const std::string& what) { throw InputError(what); };
    if (static_cast<int>(t.add.size()) != n)
        bad("addition table has " + std::to_string(t.add.size()) + " rows, expected " + std::to_string(n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(t.add[i].size()) != n)
            bad("addition table row '" + t.elements[i] + "' has " + std::to_string(t.add[i].size()) +
                " entries, expected " + std::to_string(n));
        for (int v : t.add[i])
            if (v < 0 || v >= n) bad("addition table not closed in row '" + t.elements[i] + "'");
    }
    const int ns = base->is_finite() ? static_cast<int>(base->size()) : 0;
    if (ns > 0) {
        if (static_cast<int>(t.ract.size()) != n)
            bad("action table has " + std::to_string(t.ract.size()) + " rows, expected " + std::to_string(n));
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(t.ract[i].size()) != ns)
                bad("action table row '" + t.elements[i] + "' has " + std::to_string(t.ract[i].size()) +
                    " entries, expected " + std::to_string(ns));
            for (int v : t.ract[i])
                if (v < 0 || v >= n) bad("action table not closed in row '" + t.elements[i] + "'");
        }
        if (!t.lact.empty()) {
            if (static_cast<int>(t.lact.size()) != ns) bad("left action table has wrong number of rows");
            for (const auto& row : t.lact) {
                if (static_cast<int>(row.size()) != n) bad("left action table row has wrong length");
                for (int v : row)
                    if (v < 0 || v >= n) bad("left action table not closed");
            }
        }
    }
    // relabel so that zero is index 0
    std::vector<int> order{t.zero};
    for (int i = 0; i < n; ++i)
        if (i != t.zero) order.push_back(i);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::vector<std::string> names(n);
    std::vector<Index> add(n * n), ract(n * ns), lact(n * ns);
    for (int i = 0; i < n; ++i) {
        names[i] = t.elements[order[i]];
        for (int j = 0; j < n; ++j) add[i * n + j] = pos[t.add[order[i]][order[j]]];
        for (int s = 0; s < ns; ++s) {
            ract[i * ns + s] = pos[t.ract[order[i]][s]];
            lact[s * n + i] = pos[t.lact.empty() ? t.ract[order[i]][s] : t.lact[s][order[i]]];
        }
    }
    return std::make_shared<const FiniteModule>(base, std::move(names), std::move(add), std::move(ract),
                                                std::move(lact));
}

ModuleTables module_tables(const FiniteModule& m) {
    ModuleTables t;
    const int n = static_cast<int>(m.size());
    t.elements = m.names();
    t.add.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.add[i][j] = m.add(i, j);
    if (!m.nat_base()) {
        const int ns = static_cast<int>(m.base()->size());
        t.ract.assign(n, std::vector<int>(ns));
        bool same = true;
        for (int i = 0; i < n; ++i)
            for (int s = 0; s < ns; ++s) {
                t.ract[i][s] = m.ract(i, s);
                same = same && m.lact(s, i) == m.ract(i, s);
            }
        if (!same) {
            t.lact.assign(ns, std::vector<int>(n));
            for (int s = 0; s < ns; ++s)
                for (int i = 0; i < n; ++i) t.lact[s][i] = m.lact(s, i);
        }
    }
    return t;
}

Report check_semimodule_axioms(const FiniteModule& m) {
    Report r;
    const int n = static_cast<int>(m.size());
    const auto& S = *m.base();
    auto nm = [&](Index i) { return m.name(i); };
    std::string w_assoc, w_comm, w_unit;
    for (int a = 0; a < n; ++a) {
        if (w_unit.empty() && (m.add(a, 0) != a || m.add(0, a) != a)) w_unit = "(" + nm(a) + ")";
        for (int b = 0; b < n; ++b) {
            if (w_comm.empty() && m.add(a, b) != m.add(b, a)) w_comm = "(" + nm(a) + "," + nm(b) + ")";
            for (int c = 0; c < n; ++c)
                if (w_assoc.empty() && m.add(m.add(a, b), c) != m.add(a, m.add(b, c)))
                    w_assoc = "(" + nm(a) + "," + nm(b) + "," + nm(c) + ")";
        }
    }
    r.add("additive associativity", w_assoc.empty(), w_assoc);
    r.add("additive commutativity", w_comm.empty(), w_comm);
    r.add("additive identity", w_unit.empty(), w_unit);
    if (m.nat_base()) return r;  // the iterated-sum action satisfies the rest

    const auto ss = S.elements();
    std::string w_dm, w_ds, w_as, w_one, w_zero, w_ldm, w_lds, w_las, w_lone, w_lzero, w_bi;
    auto sc = [&](Scalar s) { return S.show(s); };
    for (int a = 0; a < n; ++a) {
        if (w_one.empty() && m.ract(a, S.one()) != a) w_one = "(" + nm(a) + ")";
        if (w_lone.empty() && m.lact(S.one(), a) != a) w_lone = "(" + nm(a) + ")";
        if (w_zero.empty() && m.ract(a, 0) != 0) w_zero = "(" + nm(a) + ")";
        if (w_lzero.empty() && m.lact(0, a) != 0) w_lzero = "(" + nm(a) + ")";
        for (Scalar s : ss) {
            if (w_zero.empty() && m.ract(0, s) != 0) w_zero = "(0," + sc(s) + ")";
            if (w_lzero.empty() && m.lact(s, 0) != 0) w_lzero = "(" + sc(s) + ",0)";
            for (int b = 0; b < n; ++b) {
                if (w_dm.empty() && m.ract(m.add(a, b), s) != m.add(m.ract(a, s), m.ract(b, s)))
                    w_dm = "(" + nm(a) + "," + nm(b) + "," + sc(s) + ")";
                if (w_ldm.empty() && m.lact(s, m.add(a, b)) != m.add(m.lact(s, a), m.lact(s, b)))
                    w_ldm = "(" + sc(s) + "," + nm(a) + "," + nm(b) + ")";
            }
            for (Scalar t : ss) {
                if (w_ds.empty() && m.ract(a, S.add(s, t)) != m.add(m.ract(a, s), m.ract(a, t)))
                    w_ds = "(" + nm(a) + "," + sc(s) + "," + sc(t) + ")";
                if (w_as.empty() && m.ract(a, S.mul(s, t)) != m.ract(m.ract(a, s), t))
                    w_as = "(" + nm(a) + "," + sc(s) + "," + sc(t) + ")";
                if (w_lds.empty() && m.lact(S.add(s, t), a) != m.add(m.lact(s, a), m.lact(t, a)))
                    w_lds = "(" + sc(s) + "," + sc(t) + "," + nm(a) + ")";
                if (w_las.empty() && m.lact(S.mul(s, t), a) != m.lact(s, m.lact(t, a)))
                    w_las = "(" + sc(s) + "," + sc(t) + "," + nm(a) + ")";
                if (w_bi.empty() && m.ract(m.lact(s, a), t) != m.lact(s, m.ract(a, t)))
                    w_bi = "(" + sc(s) + "," + nm(a) + "," + sc(t) + ")";
            }
        }
    }
    r.add("action distributes over module addition", w_dm.empty(), w_dm);
    r.add("action distributes over scalar addition", w_ds.empty(), w_ds);
    r.add("action associativity", w_as.empty(), w_as);
    r.add("unit acts trivially", w_one.empty(), w_one);
    r.add("zero absorption", w_zero.empty(), w_zero);
    r.add("left action distributes over module addition", w_ldm.empty(), w_ldm);
    r.add("left action distributes over scalar addition", w_lds.empty(), w_lds);
    r.add("left action associativity", w_las.empty(), w_las);
    r.add("left unit acts trivially", w_lone.empty(), w_lone);
    r.add("left zero absorption", w_lzero.empty(), w_lzero);
    r.add("left and right actions commute", w_bi.empty(), w_bi);
    return r;
}

FModPtr zero_module(const SemiringPtr& base) {
    const std::size_t ns = base->is_finite() ? base->size() : 0;
    return std::make_shared<const FiniteModule>(base, std::vector<std::string>{"0"}, std::vector<Index>{0},
                                                std::vector<Index>(ns, 0), std::vector<Index>(ns, 0));
}

FModPtr regular_module(const SemiringPtr& base) { return free_module(base, 1); }

namespace {

int ipow(int b, int e) {
    int r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

Index free_element(const SemiringPtr& base, const std::vector<Scalar>& coords) {
    const int q = static_cast<int>(base->size());
    Index x = 0;
    for (Scalar c : coords) x = x * q + static_cast<Index>(c);
    return x;
}

std::vector<Scalar> free_coordinates(const SemiringPtr& base, int rank, Index x) {
    const int q = static_cast<int>(base->size());
    std::vector<Scalar> c(rank);
    for (int i = rank - 1; i >= 0; --i) {
        c[i] = x % q;
        x /= q;
    }
    return c;
}

Index free_basis_element(const SemiringPtr& base, int rank, int i) {
    std::vector<Scalar> c(rank, 0);
    c[i] = base->one();
    return free_element(base, c);
}

FModPtr free_module(const SemiringPtr& base, int rank) {
    if (!base->is_finite()) throw Unsupported("free modules over NAT are structured, not tabled");
    if (rank < 0) throw InputError("negative rank");
    if (rank == 0) return zero_module(base);
    const auto& S = *base;
    const int q = static_cast<int>(S.size());
    const int n = ipow(q, rank);
    if (n > (1 << 22)) throw Unsupported("free module too large to tabulate");
    std::vector<std::string> names(n);
    std::vector<Index> add(static_cast<std::size_t>(n) * n), ract(n * q), lact(n * q);
    std::vector<std::vector<Scalar>> co(n);
    for (int x = 0; x < n; ++x) co[x] = free_coordinates(base, rank, x);
    for (int x = 0; x < n; ++x) {
        if (rank == 1) {
            names[x] = S.show(co[x][0]);
        } else {
            std::string s = "(";
            for (int i = 0; i < rank; ++i) s += (i ? "," : "") + S.show(co[x][i]);
            names[x] = s + ")";
        }
        std::vector<Scalar> tmp(rank);
        for (int y = 0; y < n; ++y) {
            for (int i = 0; i < rank; ++i) tmp[i] = S.add(co[x][i], co[y][i]);
            add[static_cast<std::size_t>(x) * n + y] = free_element(base, tmp);
        }
        for (int s = 0; s < q; ++s) {
            for (int i = 0; i < rank; ++i) tmp[i] = S.mul(co[x][i], s);
            ract[x * q + s] = free_element(base, tmp);
            for (int i = 0; i < rank; ++i) tmp[i] = S.mul(s, co[x][i]);
            lact[s * n + x] = free_element(base, tmp);
        }
    }
    return std::make_shared<const FiniteModule>(base, std::move(names), std::move(add), std::move(ract),
                                                std::move(lact));
}

FModPtr monogenic_module(int index, int period) {
    if (index < 0 || period < 1) throw InputError("monogenic module needs index >= 0, period >= 1");
    const int n = index + period;
    std::vector<std::string> names(n);
    std::vector<Index> add(n * n);
    auto reduce = [&](int v) { return v < n ? v : index + (v - index) % period; };
    for (int a = 0; a < n; ++a) {
        names[a] = std::to_string(a);
        for (int b = 0; b < n; ++b) add[a * n + b] = reduce(a + b);
    }
    return std::make_shared<const FiniteModule>(builtin_semiring("NAT"), std::move(names), std::move(add),
                                                std::vector<Index>{}, std::vector<Index>{});
}

FModPtr cyclic_module(int n) {
    if (n < 1) throw InputError("CYCLIC(n) needs n >= 1");
    return monogenic_module(0, n);
}

FModPtr boolean_monoid() { return monogenic_module(1, 1); }

DirectSum direct_sum(const std::vector<FModPtr>& parts) {
    if (parts.empty()) throw InputError("direct sum of an empty list needs a base; use zero_module");
    const auto base = parts[0]->base();
    for (const auto& p : parts)
        if (!same_semiring(p->base(), base)) throw InputError("direct sum: base semirings differ");
    std::vector<int> radix;
    long long total = 1;
    for (const auto& p : parts) {
        radix.push_back(static_cast<int>(p->size()));
        total *= static_cast<long long>(p->size());
        if (total > (1 << 22)) throw Unsupported("direct sum too large to tabulate");
    }
    const int n = static_cast<int>(total);
    const int k = static_cast<int>(parts.size());
    auto dec = [&](int x) {
        std::vector<int> d(k);
        for (int i = k - 1; i >= 0; --i) {
            d[i] = x % radix[i];
            x /= radix[i];
        }
        return d;
    };
    auto enc = [&](const std::vector<int>& d) {
        int x = 0;
        for (int i = 0; i < k; ++i) x = x * radix[i] + d[i];
        return x;
    };
    const int ns = base->is_finite() ? static_cast<int>(base->size()) : 0;
    std::vector<std::string> names(n);
    std::vector<Index> add(static_cast<std::size_t>(n) * n), ract(n * ns), lact(n * ns);
    std::vector<std::vector<int>> co(n);
    for (int x = 0; x < n; ++x) co[x] = dec(x);
    for (int x = 0; x < n; ++x) {
        std::string s = "(";
        for (int i = 0; i < k; ++i) s += (i ? "," : "") + parts[i]->name(co[x][i]);
        names[x] = s + ")";
        std::vector<int> tmp(k);
        for (int y = 0; y < n; ++y) {
            for (int i = 0; i < k; ++i) tmp[i] = parts[i]->add(co[x][i], co[y][i]);
            add[static_cast<std::size_t>(x) * n + y] = enc(tmp);
        }
        for (int s2 = 0; s2 < ns; ++s2) {
            for (int i = 0; i < k; ++i) tmp[i] = parts[i]->ract(co[x][i], s2);
            ract[x * ns + s2] = enc(tmp);
            for (int i = 0; i < k; ++i) tmp[i] = parts[i]->lact(s2, co[x][i]);
            lact[s2 * n + x] = enc(tmp);
        }
    }
    DirectSum ds;
    ds.sum = std::make_shared<const FiniteModule>(base, std::move(names), std::move(add), std::move(ract),
                                                  std::move(lact));
    for (int i = 0; i < k; ++i) {
        FiniteMap in{parts[i], ds.sum, {}}, pr{ds.sum, parts[i], {}};
        for (int v = 0; v < radix[i]; ++v) {
            std::vector<int> d(k, 0);
            d[i] = v;
            in.img.push_back(enc(d));
        }
        for (int x = 0; x < n; ++x) pr.img.push_back(co[x][i]);
        ds.inj.push_back(std::move(in));
        ds.proj.push_back(std::move(pr));
    }
    return ds;
}

FModPtr restrict_scalars(const FModPtr& m, const SemiringMorphism& phi) {
    if (!same_semiring(phi.target, m->base())) throw InputError("restrict_scalars: base mismatch");
    const auto& B = phi.source;
    if (!B->is_finite()) throw Unsupported("restriction to NAT");
    const int n = static_cast<int>(m->size());
    const int nb = static_cast<int>(B->size());
    std::vector<Index> add = m->add_table(), ract(n * nb), lact(n * nb);
    for (int x = 0; x < n; ++x)
        for (int b = 0; b < nb; ++b) {
            ract[x * nb + b] = m->ract(x, phi(b));
            lact[b * n + x] = m->lact(phi(b), x);
        }
    return std::make_shared<const FiniteModule>(B, m->names(), std::move(add), std::move(ract), std::move(lact));
}

// ---- subsets -------------------------------------------------------------

std::vector<Index> Subset::elements() const {
    std::vector<Index> v;
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i]) v.push_back(static_cast<Index>(i));
    return v;
}

std::size_t Subset::count() const {
    return static_cast<std::size_t>(std::count(in.begin(), in.end(), char(1)));
}

bool Subset::subset_of(const Subset& o) const {
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i] && !o.in[i]) return false;
    return true;
}

Subset make_subset(const FModPtr& m, const std::vector<Index>& elems) {
    Subset s{m, std::vector<char>(m->size(), 0)};
    for (Index e : elems) s.in.at(e) = 1;
    return s;
}

Subset generated(const FModPtr& m, const std::vector<Index>& gens) {
    Subset s{m, std::vector<char>(m->size(), 0)};
    std::vector<Index> members;
    auto push = [&](Index x) {
        if (!s.in[x]) {
            s.in[x] = 1;
            members.push_back(x);
        }
    };
    push(0);
    const auto sc = m->scalars();
    std::deque<Index> work;
    for (Index g : gens) {
        if (!s.in[g]) {
            push(g);
            work.push_back(g);
        }
    }
    while (!work.empty()) {
        Index x = work.front();
        work.pop_front();
        for (Scalar c : sc) {
            for (Index y : {m->ract(x, c), m->lact(c, x)})
                if (!s.in[y]) {
                    push(y);
                    work.push_back(y);
                }
        }
        const std::size_t cnt = members.size();
        for (std::size_t i = 0; i < cnt; ++i) {
            Index y = m->add(x, members[i]);
            if (!s.in[y]) {
                push(y);
                work.push_back(y);
            }
        }
    }
    return s;
}

Subset zero_sub(const FModPtr& m) { return make_subset(m, {0}); }

Subset full_sub(const FModPtr& m) { return Subset{m, std::vector<char>(m->size(), 1)}; }

Subset sub_sum(const Subset& a, const Subset& b) {
    auto ea = a.elements();
    auto eb = b.elements();
    ea.insert(ea.end(), eb.begin(), eb.end());
    return generated(a.ambient, ea);
}

Subset sub_meet(const Subset& a, const Subset& b) {
    Subset s = a;
    for (std::size_t i = 0; i < s.in.size(); ++i) s.in[i] = a.in[i] && b.in[i];
    return s;
}

bool is_submodule(const Subset& s, std::string* witness) {
    const auto& m = *s.ambient;
    if (!s.in[0]) {
        if (witness) *witness = "does not contain 0";
        return false;
    }
    const auto el = s.elements();
    for (Index a : el) {
        for (Index b : el)
            if (!s.in[m.add(a, b)]) {
                if (witness) *witness = m.name(a) + "+" + m.name(b);
                return false;
            }
        for (Scalar c : m.scalars())
            if (!s.in[m.ract(a, c)] || !s.in[m.lact(c, a)]) {
                if (witness) *witness = m.name(a) + "*" + m.base()->show(c);
                return false;
            }
    }
    return true;
}

std::vector<Subset> all_submodules(const FModPtr& m) {
    std::vector<Subset> out;
    std::set<std::vector<char>> seen;
    std::deque<Subset> work;
    Subset z = zero_sub(m);
    seen.insert(z.in);
    work.push_back(z);
    while (!work.empty()) {
        Subset cur = work.front();
        work.pop_front();
        out.push_back(cur);
        for (Index x = 0; x < static_cast<Index>(m->size()); ++x) {
            if (cur.in[x]) continue;
            auto g = cur.elements();
            g.push_back(x);
            Subset nxt = generated(m, g);
            if (seen.insert(nxt.in).second) work.push_back(nxt);
        }
    }
    std::sort(out.begin(), out.end(), [](const Subset& a, const Subset& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a.in > b.in;
    });
    return out;
}

Subset subtractive_closure(const Subset& l) {
    const auto& m = *l.ambient;
    const auto el = l.elements();
    Subset out = l;
    for (Index g = 0; g < static_cast<Index>(m.size()); ++g) {
        if (out.in[g]) continue;
        for (Index a : el) {
            if (l.in[m.add(g, a)]) {
                out.in[g] = 1;
                break;
            }
        }
    }
    return out;
}

bool is_subtractive(const Subset& l) { return subtractive_closure(l) == l; }

SubModule as_module(const Subset& l) {
    const auto& m = *l.ambient;
    const auto el = l.elements();
    const int n = static_cast<int>(el.size());
    std::vector<int> pos(m.size(), -1);
    for (int i = 0; i < n; ++i) pos[el[i]] = i;
    const int ns = m.nat_base() ? 0 : static_cast<int>(m.base()->size());
    std::vector<std::string> names(n);
    std::vector<Index> add(n * n), ract(n * ns), lact(n * ns);
    for (int i = 0; i < n; ++i) {
        names[i] = m.name(el[i]);
        for (int j = 0; j < n; ++j) {
            int v = pos[m.add(el[i], el[j])];
            if (v < 0) throw InputError("subset is not closed under addition");
            add[i * n + j] = v;
        }
        for (int s = 0; s < ns; ++s) {
            int v = pos[m.ract(el[i], s)], w = pos[m.lact(s, el[i])];
            if (v < 0 || w < 0) throw InputError("subset is not closed under the action");
            ract[i * ns + s] = v;
            lact[s * n + i] = w;
        }
    }
    SubModule out;
    out.module = std::make_shared<const FiniteModule>(m.base(), std::move(names), std::move(add),
                                                      std::move(ract), std::move(lact));
    out.incl = FiniteMap{out.module, l.ambient, el};
    return out;
}

// ---- congruences ---------------------------------------------------------

Congruence congruence_from_classes(const FModPtr& m, std::vector<int> cls, std::string kind) {
    // renumber classes in order of first appearance (class of 0 becomes 0)
    std::map<int, int> ren;
    for (int& c : cls) {
        auto it = ren.find(c);
        if (it == ren.end()) it = ren.emplace(c, static_cast<int>(ren.size())).first;
        c = it->second;
    }
    Congruence k{m, std::move(cls), 0, std::move(kind)};
    k.classes = static_cast<int>(ren.size());
    return k;
}

namespace {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) {
            p[x] = p[p[x]];
            x = p[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        p[b] = a;
        return true;
    }
};

std::vector<int> classes_of(UnionFind& uf, std::size_t n) {
    std::vector<int> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = uf.find(static_cast<int>(i));
    return cls;
}

}  // namespace

Congruence congruence_mod(const Subset& l) {
    const auto& m = *l.ambient;
    const int n = static_cast<int>(m.size());
    const auto el = l.elements();
    // translate sets m + L as bitmasks over elements
    std::vector<std::vector<char>> tr(n, std::vector<char>(n, 0));
    for (int a = 0; a < n; ++a)
        for (Index x : el) tr[a][m.add(a, x)] = 1;
    UnionFind uf(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (tr[a][c] && tr[b][c]) {
                    uf.unite(a, b);
                    break;
                }
    return congruence_from_classes(l.ambient, classes_of(uf, n), "modL");
}

Congruence congruence_bracket(const Subset& l) {
    const auto& m = *l.ambient;
    const int n = static_cast<int>(m.size());
    const auto el = l.elements();
    // m1 + l1 + m' = m2 + l2 + m' for some l1,l2 in L and m' in M
    UnionFind uf(n);
    std::vector<char> reach(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (uf.find(a) == uf.find(b)) continue;
            bool rel = false;
            for (int mp = 0; mp < n && !rel; ++mp) {
                std::fill(reach.begin(), reach.end(), 0);
                for (Index x : el) reach[m.add(m.add(a, x), mp)] = 1;
                for (Index y : el)
                    if (reach[m.add(m.add(b, y), mp)]) {
                        rel = true;
                        break;
                    }
            }
            if (rel) uf.unite(a, b);
        }
    return congruence_from_classes(l.ambient, classes_of(uf, n), "bracketL");
}

Congruence congruence_generated(const FModPtr& mp, const std::vector<std::pair<Index, Index>>& pairs) {
    const auto& m = *mp;
    const int n = static_cast<int>(m.size());
    UnionFind uf(n);
    std::deque<std::pair<Index, Index>> work(pairs.begin(), pairs.end());
    const auto sc = m.scalars();
    // Closure: a ~ b implies a+x ~ b+x and a s ~ b s, s a ~ s b.
    while (!work.empty()) {
        auto [a, b] = work.front();
        work.pop_front();
        if (!uf.unite(a, b)) continue;
        // re-derive consequences for every member pair is expensive; it is
        // enough to translate the generating pair by all elements/scalars.
        for (int x = 0; x < n; ++x) work.emplace_back(m.add(a, x), m.add(b, x));
        for (Scalar s : sc) {
            work.emplace_back(m.ract(a, s), m.ract(b, s));
            work.emplace_back(m.lact(s, a), m.lact(s, b));
        }
    }
    return congruence_from_classes(mp, classes_of(uf, n), "custom");
}

Report check_congruence(const Congruence& c) {
    Report r;
    const auto& m = *c.ambient;
    const int n = static_cast<int>(m.size());
    std::string wa, ws;
    for (int a = 0; a < n && wa.empty(); ++a)
        for (int b = 0; b < n && wa.empty(); ++b) {
            if (!c.related(a, b)) continue;
            for (int x = 0; x < n; ++x)
                if (!c.related(m.add(a, x), m.add(b, x))) {
                    wa = m.name(a) + " ~ " + m.name(b) + " but not after adding " + m.name(x);
                    break;
                }
        }
    for (int a = 0; a < n && ws.empty(); ++a)
        for (int b = 0; b < n && ws.empty(); ++b) {
            if (!c.related(a, b)) continue;
            for (Scalar s : m.scalars())
                if (!c.related(m.ract(a, s), m.ract(b, s)) || !c.related(m.lact(s, a), m.lact(s, b))) {
                    ws = m.name(a) + " ~ " + m.name(b) + " but not after scaling by " + m.base()->show(s);
                    break;
                }
        }
    r.add("compatible with addition", wa.empty(), wa);
    r.add("compatible with the action", ws.empty(), ws);
    return r;
}

Quotient quotient(const Congruence& c) {
    auto rep = check_congruence(c);
    if (!rep.ok()) throw InputError("not a congruence: " + rep.first_failure()->witness);
    const auto& m = *c.ambient;
    const int n = static_cast<int>(m.size());
    const int k = c.classes;
    std::vector<Index> repr(k, -1);
    for (int i = 0; i < n; ++i)
        if (repr[c.cls[i]] < 0) repr[c.cls[i]] = i;
    const int ns = m.nat_base() ? 0 : static_cast<int>(m.base()->size());
    std::vector<std::string> names(k);
    std::vector<Index> add(k * k), ract(k * ns), lact(k * ns);
    for (int i = 0; i < k; ++i) {
        names[i] = "[" + m.name(repr[i]) + "]";
        for (int j = 0; j < k; ++j) add[i * k + j] = c.cls[m.add(repr[i], repr[j])];
        for (int s = 0; s < ns; ++s) {
            ract[i * ns + s] = c.cls[m.ract(repr[i], s)];
            lact[s * k + i] = c.cls[m.lact(s, repr[i])];
        }
    }
    Quotient q;
    q.module = std::make_shared<const FiniteModule>(m.base(), std::move(names), std::move(add),
                                                    std::move(ract), std::move(lact));
    q.proj = FiniteMap{c.ambient, q.module, std::vector<Index>(c.cls.begin(), c.cls.end())};
    return q;
}

Quotient quotient_by(const Subset& l) { return quotient(congruence_mod(l)); }

Quotient cancellative_reflection(const FModPtr& m) { return quotient(congruence_bracket(zero_sub(m))); }

bool is_cancellative(const FiniteModule& m, std::string* witness) {
    const int n = static_cast<int>(m.size());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                if (m.add(a, b) == m.add(a, c)) {
                    if (witness)
                        *witness = m.name(a) + "+" + m.name(b) + " = " + m.name(a) + "+" + m.name(c);
                    return false;
                }
    return true;
}

// ---- maps ------------------------------------------------------------------

Report check_linear(const FiniteMap& f) {
    Report r;
    const auto& M = *f.src;
    const auto& N = *f.dst;
    if (f.img.size() != M.size()) {
        r.format_error = "map table has wrong length";
        return r;
    }
    for (Index v : f.img)
        if (v < 0 || v >= static_cast<Index>(N.size())) {
            r.format_error = "map value out of range";
            return r;
        }
    const int n = static_cast<int>(M.size());
    std::string wa, ws;
    for (int a = 0; a < n && wa.empty(); ++a)
        for (int b = 0; b < n; ++b)
            if (f(M.add(a, b)) != N.add(f(a), f(b))) {
                wa = "(" + M.name(a) + "," + M.name(b) + ")";
                break;
            }
    for (int a = 0; a < n && ws.empty(); ++a)
        for (Scalar s : M.scalars())
            if (f(M.ract(a, s)) != N.ract(f(a), s) || f(M.lact(s, a)) != N.lact(s, f(a))) {
                ws = "(" + M.name(a) + "," + M.base()->show(s) + ")";
                break;
            }
    r.add("additive", wa.empty(), wa);
    r.add("preserves zero", f(0) == 0, M.name(0));
    r.add("action-preserving", ws.empty(), ws);
    return r;
}

FiniteMap identity_map(const FModPtr& m) {
    FiniteMap f{m, m, std::vector<Index>(m->size())};
    std::iota(f.img.begin(), f.img.end(), 0);
    return f;
}

FiniteMap zero_map(const FModPtr& m, const FModPtr& n) {
    return FiniteMap{m, n, std::vector<Index>(m->size(), 0)};
}

FiniteMap compose(const FiniteMap& g, const FiniteMap& f) {
    FiniteMap h{f.src, g.dst, std::vector<Index>(f.img.size())};
    for (std::size_t i = 0; i < f.img.size(); ++i) h.img[i] = g(f(static_cast<Index>(i)));
    return h;
}

FiniteMap map_sum(const FiniteMap& f, const FiniteMap& g) {
    FiniteMap h{f.src, f.dst, std::vector<Index>(f.img.size())};
    for (std::size_t i = 0; i < f.img.size(); ++i) h.img[i] = f.dst->add(f.img[i], g.img[i]);
    return h;
}

std::vector<Index> module_generators(const FiniteModule& m) {
    // needs a shared pointer for generated(); wrap without ownership
    FModPtr self(std::shared_ptr<const FiniteModule>{}, &m);
    std::vector<Index> gens;
    Subset cur = zero_sub(self);
    for (Index x = 0; x < static_cast<Index>(m.size()); ++x) {
        if (cur.in[x]) continue;
        gens.push_back(x);
        cur = generated(self, gens);
    }
    return gens;
}

void hom_for_each(const FModPtr& mp, const FModPtr& np, const HomOptions& opt,
                  const std::function<bool(const FiniteMap&)>& visit) {
    const auto& M = *mp;
    const auto& N = *np;
    if (!same_semiring(M.base(), N.base())) throw InputError("hom: base semirings differ");
    const int n = static_cast<int>(M.size());
    const int nn = static_cast<int>(N.size());
    const auto gens = module_generators(M);
    const auto sc = M.scalars();
    std::size_t found = 0;
    bool stop = false;

    std::vector<Index> img(n, -1);
    std::vector<char> used(nn, 0);
    std::vector<Index> assigned;

    // Propagates consequences of assigning x; returns false on conflict.
    auto propagate = [&](std::vector<Index>& trail) -> bool {
        for (std::size_t qi = 0; qi < trail.size(); ++qi) {
            Index x = trail[qi];
            auto set = [&](Index y, Index v) -> bool {
                if (img[y] < 0) {
                    if (opt.injective_only && used[v]) return false;
                    img[y] = v;
                    if (opt.injective_only) used[v] = 1;
                    trail.push_back(y);
                    assigned.push_back(y);
                    return true;
                }
                return img[y] == v;
            };
            for (Scalar s : sc) {
                if (!set(M.ract(x, s), N.ract(img[x], s))) return false;
                if (!set(M.lact(s, x), N.lact(s, img[x]))) return false;
            }
            const std::size_t cnt = assigned.size();
            for (std::size_t i = 0; i < cnt; ++i) {
                Index y = assigned[i];
                if (!set(M.add(x, y), N.add(img[x], img[y]))) return false;
            }
        }
        return true;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t gi) {
        if (stop) return;
        if (gi == gens.size()) {
            FiniteMap f{mp, np, img};
            ++found;
            if (!visit(f) || (opt.limit && found >= opt.limit)) stop = true;
            return;
        }
        Index g = gens[gi];
        if (img[g] >= 0) {
            rec(gi + 1);
            return;
        }
        for (Index v = 0; v < nn && !stop; ++v) {
            if (opt.injective_only && used[v]) continue;
            const std::size_t mark = assigned.size();
            img[g] = v;
            if (opt.injective_only) used[v] = 1;
            assigned.push_back(g);
            std::vector<Index> trail{g};
            if (propagate(trail)) rec(gi + 1);
            // undo
            while (assigned.size() > mark) {
                Index y = assigned.back();
                assigned.pop_back();
                if (opt.injective_only) used[img[y]] = 0;
                img[y] = -1;
            }
        }
    };

    img[0] = 0;
    if (opt.injective_only) used[0] = 1;
    assigned.push_back(0);
    std::vector<Index> trail{0};
    if (!propagate(trail)) return;
    rec(0);
}

std::vector<FiniteMap> hom_enumerate(const FModPtr& m, const FModPtr& n, std::size_t limit) {
    std::vector<FiniteMap> out;
    HomOptions opt;
    opt.limit = limit;
    hom_for_each(m, n, opt, [&](const FiniteMap& f) {
        out.push_back(f);
        return true;
    });
    return out;
}

std::optional<FiniteMap> find_isomorphism(const FModPtr& m, const FModPtr& n) {
    if (m->size() != n->size()) return std::nullopt;
    std::optional<FiniteMap> out;
    HomOptions opt;
    opt.injective_only = true;
    opt.limit = 1;
    hom_for_each(m, n, opt, [&](const FiniteMap& f) {
        out = f;
        return false;
    });
    return out;
}

bool is_injective(const FiniteMap& f) {
    std::vector<char> seen(f.dst->size(), 0);
    for (Index v : f.img) {
        if (seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

bool is_surjective(const FiniteMap& f) {
    std::vector<char> seen(f.dst->size(), 0);
    for (Index v : f.img) seen[v] = 1;
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

bool is_isomorphism(const FiniteMap& f) { return is_injective(f) && is_surjective(f); }

Subset kernel(const FiniteMap& f) {
    Subset s{f.src, std::vector<char>(f.src->size(), 0)};
    for (std::size_t i = 0; i < f.img.size(); ++i) s.in[i] = f.img[i] == 0;
    return s;
}

Subset image(const FiniteMap& f) {
    Subset s{f.dst, std::vector<char>(f.dst->size(), 0)};
    for (Index v : f.img) s.in[v] = 1;
    return s;
}

Subset preimage(const FiniteMap& f, const Subset& t) {
    Subset s{f.src, std::vector<char>(f.src->size(), 0)};
    for (std::size_t i = 0; i < f.img.size(); ++i) s.in[i] = t.in[f.img[i]];
    return s;
}

Quotient cokernel(const FiniteMap& f) { return quotient_by(image(f)); }

bool is_k_uniform(const FiniteMap& f, std::string* witness) {
    const auto& M = *f.src;
    const int n = static_cast<int>(M.size());
    const auto ker = kernel(f).elements();
    std::vector<char> reach(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (f(a) != f(b)) continue;
            std::fill(reach.begin(), reach.end(), 0);
            for (Index k : ker) reach[M.add(a, k)] = 1;
            bool ok = false;
            for (Index k : ker)
                if (reach[M.add(b, k)]) {
                    ok = true;
                    break;
                }
            if (!ok) {
                if (witness)
                    *witness = "f(" + M.name(a) + ") = f(" + M.name(b) + ") with no kernel correction";
                return false;
            }
        }
    return true;
}

MapPredicates map_predicates(const FiniteMap& f) {
    MapPredicates p;
    const auto& M = *f.src;
    const auto& N = *f.dst;
    std::vector<Index> first(N.size(), -1);
    for (Index i = 0; i < static_cast<Index>(M.size()); ++i) {
        Index v = f(i);
        if (first[v] >= 0 && p.injective) {
            p.injective = false;
            p.injective_witness = "f(" + M.name(first[v]) + ") = f(" + M.name(i) + ")";
        }
        if (first[v] < 0) first[v] = i;
    }
    for (Index v = 0; v < static_cast<Index>(N.size()); ++v)
        if (first[v] < 0) {
            p.surjective = false;
            p.surjective_witness = N.name(v) + " not in image";
            break;
        }
    Subset im = image(f);
    Subset cl = subtractive_closure(im);
    if (!(cl == im)) {
        p.i_uniform = false;
        for (Index v = 0; v < static_cast<Index>(N.size()); ++v)
            if (cl.in[v] && !im.in[v]) {
                p.i_uniform_witness = N.name(v) + " in closure of image but not in image";
                break;
            }
    }
    p.k_uniform = is_k_uniform(f, &p.k_uniform_witness);
    return p;
}

std::optional<std::pair<FiniteMap, FiniteMap>> distinguishing_pair(const FiniteMap& f) {
    const auto& M = *f.src;
    if (M.nat_base()) return std::nullopt;
    const auto reg = regular_module(M.base());
    for (Index a = 0; a < static_cast<Index>(M.size()); ++a)
        for (Index b = a + 1; b < static_cast<Index>(M.size()); ++b) {
            if (f(a) != f(b)) continue;
            // maps S -> M determined by 1 |-> a and 1 |-> b
            FiniteMap g{reg, f.src, std::vector<Index>(reg->size())}, h = g;
            for (Scalar s = 0; s < static_cast<Scalar>(reg->size()); ++s) {
                g.img[s] = M.ract(a, s);
                h.img[s] = M.ract(b, s);
            }
            return std::make_pair(g, h);
        }
    return std::nullopt;
}

InducedIso first_iso_map(const FiniteMap& f) {
    InducedIso out;
    out.coimage = quotient_by(kernel(f));
    out.img = as_module(image(f));
    const auto& Q = *out.coimage.module;
    std::vector<int> pos(f.dst->size(), -1);
    for (std::size_t i = 0; i < out.img.incl.img.size(); ++i) pos[out.img.incl.img[i]] = static_cast<int>(i);
    out.map = FiniteMap{out.coimage.module, out.img.module, std::vector<Index>(Q.size(), -1)};
    for (Index x = 0; x < static_cast<Index>(f.src->size()); ++x) {
        Index c = out.coimage.proj(x);
        Index v = pos[f(x)];
        if (out.map.img[c] < 0) out.map.img[c] = v;
        else if (out.map.img[c] != v) out.well_defined = false;
    }
    return out;
}

// ---- exactness -------------------------------------------------------------

const char* exact_mode_name(ExactMode m) {
    switch (m) {
        case ExactMode::Exact: return "exact";
        case ExactMode::Semi: return "semi";
        case ExactMode::Proper: return "proper";
        case ExactMode::Quasi: return "quasi";
    }
    return "?";
}

ExactnessResult exactness_check(const std::vector<FiniteMap>& seq, ExactMode mode) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (seq[i].dst->size() != seq[i + 1].src->size() ||
            !seq[i].dst->same_tables(*seq[i + 1].src))
            throw InputError("sequence is not composable at position " + std::to_string(i + 1));
    ExactnessResult res;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const auto& f = seq[i];
        const auto& g = seq[i + 1];
        JointVerdict j;
        Subset im = image(f);
        Subset im_on_g{g.src, im.in};
        Subset ker = kernel(g);
        Subset cl = subtractive_closure(im_on_g);
        j.image_is_kernel = im_on_g == ker;
        j.closure_is_kernel = cl == ker;
        std::string kw;
        j.k_uniform = is_k_uniform(g, &kw);
        switch (mode) {
            case ExactMode::Exact: j.ok = j.image_is_kernel && j.k_uniform; break;
            case ExactMode::Semi: j.ok = j.closure_is_kernel; break;
            case ExactMode::Proper: j.ok = j.image_is_kernel; break;
            case ExactMode::Quasi: j.ok = j.closure_is_kernel && j.k_uniform; break;
        }
        if (!j.ok) {
            const auto& Y = *g.src;
            if ((mode == ExactMode::Exact || mode == ExactMode::Proper) && !j.image_is_kernel) {
                for (Index y = 0; y < static_cast<Index>(Y.size()); ++y)
                    if (im_on_g.in[y] != ker.in[y]) {
                        j.witness = Y.name(y) + (ker.in[y] ? " in kernel but not in image"
                                                           : " in image but not in kernel");
                        break;
                    }
            } else if ((mode == ExactMode::Semi || mode == ExactMode::Quasi) && !j.closure_is_kernel) {
                for (Index y = 0; y < static_cast<Index>(Y.size()); ++y)
                    if (cl.in[y] != ker.in[y]) {
                        j.witness = Y.name(y) + (ker.in[y] ? " in kernel but not in closure of image"
                                                           : " in closure of image but not in kernel");
                        break;
                    }
            } else {
                j.witness = kw;
            }
        }
        res.ok = res.ok && j.ok;
        res.joints.push_back(j);
    }
    return res;
}

FiniteMap zero_into(const FModPtr& m) { return FiniteMap{zero_module(m->base()), m, {0}}; }

FiniteMap zero_onto(const FModPtr& m) { return zero_map(m, zero_module(m->base())); }

}  // namespace semialg
