#include "semialg/module.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace semialg {

namespace {

using i128 = __int128;

Val frac(std::int64_t v, std::int64_t d) {
    v %= d;
    if (v < 0) v += d;
    if (v == 0) return {0, 1};
    std::int64_t g = std::gcd(v, d);
    return {v / g, d / g};
}

std::int64_t mod_mul(std::int64_t a, std::int64_t k, std::int64_t n) {
    return static_cast<std::int64_t>((static_cast<i128>(a) * (k % n)) % n);
}

// Splits "a,b,(c,d)" at top-level commas.
std::vector<std::string> split_top(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(' ');
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(' ');
    return s.substr(b, e - b + 1);
}

}  // namespace

// ---- atoms ------------------------------------------------------------------

Atom regular_atom() { return Atom{AtomKind::Regular, 0, nullptr}; }
Atom cyclic_atom(int n) {
    if (n < 1) throw InputError("CYCLIC(n) needs n >= 1");
    return Atom{AtomKind::Cyclic, n, nullptr};
}
Atom boolean_atom() { return Atom{AtomKind::Boolean, 0, nullptr}; }
Atom qmodz_atom() { return Atom{AtomKind::QmodZ, 0, nullptr}; }
Atom table_atom(FModPtr m) {
    if (!m) throw InputError("null table");
    return Atom{AtomKind::Table, 0, std::move(m)};
}

std::string Atom::show() const {
    switch (kind) {
        case AtomKind::Regular: return "REGULAR";
        case AtomKind::Cyclic: return "CYCLIC(" + std::to_string(n) + ")";
        case AtomKind::Boolean: return "BOOLEAN";
        case AtomKind::QmodZ: return "QMODZ";
        case AtomKind::Table: return "TABLE[" + std::to_string(table->size()) + "]";
    }
    return "?";
}

bool Atom::operator==(const Atom& o) const {
    if (kind != o.kind) return false;
    if (kind == AtomKind::Cyclic) return n == o.n;
    if (kind == AtomKind::Table) return table == o.table || table->same_tables(*o.table);
    return true;
}

// ---- Module -------------------------------------------------------------------

Module::Module(SemiringPtr base, std::vector<Atom> atoms) : base_(std::move(base)), atoms_(std::move(atoms)) {
    for (const auto& a : atoms_) {
        switch (a.kind) {
            case AtomKind::Cyclic:
            case AtomKind::Boolean:
            case AtomKind::QmodZ:
                if (base_->is_finite()) throw InputError(a.show() + " is only available over NAT");
                break;
            case AtomKind::Table:
                if (!same_semiring(a.table->base(), base_)) throw InputError("table atom over a different base");
                break;
            case AtomKind::Regular: break;
        }
    }
}

bool Module::finite() const {
    for (const auto& a : atoms_) {
        if (a.kind == AtomKind::QmodZ) return false;
        if (a.kind == AtomKind::Regular && nat_base()) return false;
    }
    return true;
}

std::size_t Module::atom_size(std::size_t i) const {
    const auto& a = atoms_[i];
    switch (a.kind) {
        case AtomKind::Regular:
            if (nat_base()) throw Unsupported("NAT is infinite");
            return base_->size();
        case AtomKind::Cyclic: return static_cast<std::size_t>(a.n);
        case AtomKind::Boolean: return 2;
        case AtomKind::QmodZ: throw Unsupported("QMODZ is infinite");
        case AtomKind::Table: return a.table->size();
    }
    return 0;
}

std::size_t Module::size() const {
    if (!finite()) throw Unsupported("module " + describe() + " is infinite");
    std::size_t n = 1;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        n *= atom_size(i);
        if (n > (std::size_t(1) << 24)) throw Unsupported("module " + describe() + " is too large to enumerate");
    }
    return n;
}

bool Module::at_most(std::size_t limit) const {
    if (!finite()) return false;
    std::size_t n = 1;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        n *= atom_size(i);
        if (n > limit) return false;
    }
    return true;
}

bool Module::is_zero(const Elem& x) const {
    for (const auto& v : x)
        if (v.v != 0) return false;
    return true;
}

Val Module::atom_add(std::size_t i, Val a, Val b) const {
    const auto& at = atoms_[i];
    switch (at.kind) {
        case AtomKind::Regular: return {base_->add(a.v, b.v), 1};
        case AtomKind::Cyclic: return {(a.v + b.v) % at.n, 1};
        case AtomKind::Boolean: return {a.v | b.v, 1};
        case AtomKind::QmodZ: {
            std::int64_t l = std::lcm(a.d, b.d);
            return frac(a.v * (l / a.d) + b.v * (l / b.d), l);
        }
        case AtomKind::Table: return {at.table->add(static_cast<Index>(a.v), static_cast<Index>(b.v)), 1};
    }
    return {};
}

Val Module::atom_multiple(std::size_t i, Val a, std::uint64_t k) const {
    const auto& at = atoms_[i];
    switch (at.kind) {
        case AtomKind::Regular:
            if (nat_base()) return {a.v * static_cast<std::int64_t>(k), 1};
            return {base_->mul(a.v, base_->from_count(k)), 1};
        case AtomKind::Cyclic: return {mod_mul(a.v, static_cast<std::int64_t>(k % at.n), at.n), 1};
        case AtomKind::Boolean: return {k ? a.v : 0, 1};
        case AtomKind::QmodZ: return frac(mod_mul(a.v, static_cast<std::int64_t>(k % a.d), a.d), a.d);
        case AtomKind::Table: return {at.table->multiple(static_cast<Index>(a.v), k), 1};
    }
    return {};
}

Val Module::atom_ract(std::size_t i, Val a, Scalar s) const {
    const auto& at = atoms_[i];
    if (nat_base()) return atom_multiple(i, a, static_cast<std::uint64_t>(s));
    if (at.kind == AtomKind::Regular) return {base_->mul(a.v, s), 1};
    return {at.table->ract(static_cast<Index>(a.v), s), 1};
}

Val Module::atom_lact(std::size_t i, Scalar s, Val a) const {
    const auto& at = atoms_[i];
    if (nat_base()) return atom_multiple(i, a, static_cast<std::uint64_t>(s));
    if (at.kind == AtomKind::Regular) return {base_->mul(s, a.v), 1};
    return {at.table->lact(s, static_cast<Index>(a.v)), 1};
}

Elem Module::add(const Elem& a, const Elem& b) const {
    Elem r(atoms_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = atom_add(i, a[i], b[i]);
    return r;
}

Elem Module::ract(const Elem& m, Scalar s) const {
    Elem r(atoms_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = atom_ract(i, m[i], s);
    return r;
}

Elem Module::lact(Scalar s, const Elem& m) const {
    Elem r(atoms_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = atom_lact(i, s, m[i]);
    return r;
}

Elem Module::multiple(const Elem& m, std::uint64_t k) const {
    Elem r(atoms_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = atom_multiple(i, m[i], k);
    return r;
}

Elem Module::inject(std::size_t i, Val x) const {
    Elem e = zero();
    e[i] = x;
    return e;
}

Val Module::atom_one(std::size_t i) const {
    const auto& at = atoms_[i];
    switch (at.kind) {
        case AtomKind::Regular: return {nat_base() ? 1 : base_->one(), 1};
        case AtomKind::Cyclic: return {at.n > 1 ? 1 : 0, 1};
        case AtomKind::Boolean: return {1, 1};
        default: throw InputError("atom " + at.show() + " is not monogenic");
    }
}

std::vector<Elem> Module::generators() const {
    std::vector<Elem> g;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const auto& at = atoms_[i];
        switch (at.kind) {
            case AtomKind::Regular:
            case AtomKind::Boolean: g.push_back(inject(i, atom_one(i))); break;
            case AtomKind::Cyclic:
                if (at.n > 1) g.push_back(inject(i, {1, 1}));
                break;
            case AtomKind::QmodZ:
                for (int k = 2; k <= qmodz_sample; ++k) g.push_back(inject(i, {1, k}));
                break;
            case AtomKind::Table:
                for (Index x : module_generators(*at.table)) g.push_back(inject(i, {x, 1}));
                break;
        }
    }
    return g;
}

bool Module::generators_sampled() const {
    return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.kind == AtomKind::QmodZ; });
}

std::vector<Elem> Module::elements() const {
    const std::size_t n = size();
    std::vector<Elem> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(element_at(k));
    return out;
}

std::size_t Module::index_of(const Elem& x) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) idx = idx * atom_size(i) + static_cast<std::size_t>(x[i].v);
    return idx;
}

Elem Module::element_at(std::size_t idx) const {
    Elem e(atoms_.size());
    for (std::size_t i = atoms_.size(); i-- > 0;) {
        const std::size_t s = atom_size(i);
        e[i] = {static_cast<std::int64_t>(idx % s), 1};
        idx /= s;
    }
    return e;
}

FModPtr Module::tabulate() const {
    const auto els = elements();
    const std::size_t n = els.size();
    std::vector<std::string> names(n);
    std::vector<Index> addt(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        names[x] = show(els[x]);
        for (std::size_t y = 0; y < n; ++y) addt[x * n + y] = static_cast<Index>(index_of(add(els[x], els[y])));
    }
    std::vector<Index> r, l;
    if (!nat_base()) {
        const std::size_t q = base_->size();
        r.resize(n * q);
        l.resize(n * q);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t s = 0; s < q; ++s) {
                r[x * q + s] = static_cast<Index>(index_of(ract(els[x], static_cast<Scalar>(s))));
                l[s * n + x] = static_cast<Index>(index_of(lact(static_cast<Scalar>(s), els[x])));
            }
    }
    return std::make_shared<const FiniteModule>(base_, std::move(names), std::move(addt), std::move(r),
                                                std::move(l));
}

bool Module::valid(const Elem& x) const {
    if (x.size() != atoms_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& at = atoms_[i];
        const Val v = x[i];
        if (v.v < 0) return false;
        if (at.kind == AtomKind::QmodZ) {
            if (v.d < 1 || v.v >= v.d || frac(v.v, v.d) != v) return false;
        } else {
            if (v.d != 1) return false;
            if (!(at.kind == AtomKind::Regular && nat_base()) && static_cast<std::size_t>(v.v) >= atom_size(i))
                return false;
        }
    }
    return true;
}

std::string Module::show_atom_value(std::size_t i, Val x) const {
    const auto& at = atoms_[i];
    switch (at.kind) {
        case AtomKind::Regular: return nat_base() ? std::to_string(x.v) : base_->show(x.v);
        case AtomKind::Cyclic:
        case AtomKind::Boolean: return std::to_string(x.v);
        case AtomKind::QmodZ: return x.v == 0 ? "0" : std::to_string(x.v) + "/" + std::to_string(x.d);
        case AtomKind::Table: return at.table->name(static_cast<Index>(x.v));
    }
    return "?";
}

std::string Module::show(const Elem& x) const {
    if (atoms_.size() == 1) return show_atom_value(0, x[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + show_atom_value(i, x[i]);
    return s + ")";
}

Elem Module::parse(const std::string& raw) const {
    std::string text = trim(raw);
    if (atoms_.empty()) {
        if (text == "0" || text == "()") return {};
        throw InputError("'" + raw + "' is not an element of the zero module");
    }
    std::vector<std::string> parts;
    if (atoms_.size() == 1) {
        parts = {text};
    } else {
        if (text.size() < 2 || text.front() != '(' || text.back() != ')')
            throw InputError("'" + raw + "' should be a tuple of " + std::to_string(atoms_.size()) + " coordinates");
        parts = split_top(text.substr(1, text.size() - 2));
        if (parts.size() != atoms_.size())
            throw InputError("'" + raw + "' has " + std::to_string(parts.size()) + " coordinates, expected " +
                             std::to_string(atoms_.size()));
    }
    Elem e(atoms_.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string p = trim(parts[i]);
        const auto& at = atoms_[i];
        auto as_int = [&](const std::string& s) -> std::int64_t {
            try {
                std::size_t pos = 0;
                long long v = std::stoll(s, &pos);
                if (pos != s.size()) throw InputError("");
                return v;
            } catch (...) {
                throw InputError("'" + s + "' is not an integer");
            }
        };
        switch (at.kind) {
            case AtomKind::Regular:
                if (nat_base()) {
                    e[i] = {as_int(p), 1};
                } else {
                    auto s = base_->parse(p);
                    if (!s) throw InputError("'" + p + "' is not an element of " + base_->name());
                    e[i] = {*s, 1};
                }
                break;
            case AtomKind::Cyclic: e[i] = {((as_int(p) % at.n) + at.n) % at.n, 1}; break;
            case AtomKind::Boolean: e[i] = {as_int(p) != 0 ? 1 : 0, 1}; break;
            case AtomKind::QmodZ: {
                auto slash = p.find('/');
                if (slash == std::string::npos) {
                    e[i] = frac(as_int(p), 1);
                } else {
                    std::int64_t d = as_int(p.substr(slash + 1));
                    if (d <= 0) throw InputError("bad denominator in '" + p + "'");
                    e[i] = frac(as_int(p.substr(0, slash)), d);
                }
                break;
            }
            case AtomKind::Table: {
                auto f = at.table->find(p);
                if (!f) throw InputError("'" + p + "' is not an element of the table");
                e[i] = {*f, 1};
                break;
            }
        }
    }
    if (!valid(e)) throw InputError("'" + raw + "' is out of range");
    return e;
}

std::string Module::describe() const {
    if (atoms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) s += " ⊕ ";
        s += atoms_[i].kind == AtomKind::Regular ? base_->name() : atoms_[i].show();
    }
    return s;
}

bool Module::operator==(const Module& o) const { return same_semiring(base_, o.base_) && atoms_ == o.atoms_; }

ModPtr make_module(SemiringPtr base, std::vector<Atom> atoms) {
    return std::make_shared<const Module>(std::move(base), std::move(atoms));
}

ModPtr regular(const SemiringPtr& base) { return make_module(base, {regular_atom()}); }

ModPtr free_structured(const SemiringPtr& base, int rank) {
    if (rank < 0) throw InputError("negative rank");
    return make_module(base, std::vector<Atom>(static_cast<std::size_t>(rank), regular_atom()));
}

ModPtr as_structured(const FModPtr& m) {
    if (m->size() == 1) return make_module(m->base(), {});
    return make_module(m->base(), {table_atom(m)});
}

ModPtr structured_sum(const std::vector<ModPtr>& parts) {
    if (parts.empty()) throw InputError("empty direct sum needs a base");
    std::vector<Atom> atoms;
    for (const auto& p : parts) {
        if (!same_semiring(p->base(), parts[0]->base())) throw InputError("direct sum: base semirings differ");
        atoms.insert(atoms.end(), p->atoms().begin(), p->atoms().end());
    }
    return make_module(parts[0]->base(), std::move(atoms));
}

namespace {

Elem random_elem(const Module& m, std::mt19937_64& rng) {
    Elem e(m.rank());
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const auto& at = m.atoms()[i];
        if (at.kind == AtomKind::QmodZ) {
            std::int64_t d = 1 + static_cast<std::int64_t>(rng() % 24);
            e[i] = frac(static_cast<std::int64_t>(rng() % d), d);
        } else if (at.kind == AtomKind::Regular && m.nat_base()) {
            e[i] = {static_cast<std::int64_t>(rng() % 64), 1};
        } else {
            e[i] = {static_cast<std::int64_t>(rng() % m.atom_size(i)), 1};
        }
    }
    return e;
}

Scalar random_scalar(const Module& m, std::mt19937_64& rng) {
    if (m.nat_base()) return static_cast<Scalar>(rng() % 40);
    return static_cast<Scalar>(rng() % m.base()->size());
}

}  // namespace

Report check_module_axioms(const Module& m, std::size_t samples, std::uint64_t seed) {
    if (m.at_most(4096)) return check_semimodule_axioms(*m.tabulate());
    Report r;
    r.sampled = true;
    std::mt19937_64 rng(seed);
    bool assoc = true, comm = true, ident = true, dist_m = true, dist_s = true, zero_act = true, compat = true;
    std::string wa, wc, wi, wdm, wds, wz, wco;
    const auto& S = *m.base();
    for (std::size_t k = 0; k < samples; ++k) {
        Elem a = random_elem(m, rng), b = random_elem(m, rng), c = random_elem(m, rng);
        Scalar s = random_scalar(m, rng), t = random_scalar(m, rng);
        if (assoc && m.add(m.add(a, b), c) != m.add(a, m.add(b, c))) {
            assoc = false;
            wa = "(" + m.show(a) + "," + m.show(b) + "," + m.show(c) + ")";
        }
        if (comm && m.add(a, b) != m.add(b, a)) {
            comm = false;
            wc = "(" + m.show(a) + "," + m.show(b) + ")";
        }
        if (ident && m.add(a, m.zero()) != a) {
            ident = false;
            wi = m.show(a);
        }
        if (dist_m && m.ract(m.add(a, b), s) != m.add(m.ract(a, s), m.ract(b, s))) {
            dist_m = false;
            wdm = "(" + m.show(a) + "," + m.show(b) + "," + std::to_string(s) + ")";
        }
        if (dist_s && m.ract(a, S.add(s, t)) != m.add(m.ract(a, s), m.ract(a, t))) {
            dist_s = false;
            wds = "(" + m.show(a) + "," + std::to_string(s) + "," + std::to_string(t) + ")";
        }
        if (compat && m.ract(m.ract(a, s), t) != m.ract(a, S.mul(s, t))) {
            compat = false;
            wco = "(" + m.show(a) + "," + std::to_string(s) + "," + std::to_string(t) + ")";
        }
        if (zero_act && (!m.is_zero(m.ract(a, 0)) || !m.is_zero(m.ract(m.zero(), s)))) {
            zero_act = false;
            wz = m.show(a);
        }
    }
    r.add("additive associativity", assoc, wa);
    r.add("additive commutativity", comm, wc);
    r.add("additive identity", ident, wi);
    r.add("action distributes over module addition", dist_m, wdm);
    r.add("action distributes over scalar addition", dist_s, wds);
    r.add("action is compatible with multiplication", compat, wco);
    r.add("zero actions", zero_act, wz);
    return r;
}

// ---- linear maps ----------------------------------------------------------------

LinearMap map_from_fn(const ModPtr& src, const ModPtr& dst, std::function<Elem(const Elem&)> fn) {
    return LinearMap{src, dst, std::move(fn)};
}

LinearMap map_from_images(const ModPtr& src, const ModPtr& dst, std::vector<std::vector<Elem>> images) {
    if (images.size() != src->rank()) throw InputError("map needs images for every atom of the source");
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& at = src->atoms()[i];
        if (at.kind == AtomKind::QmodZ) throw InputError("maps out of QMODZ need an explicit formula");
        const std::size_t want = at.kind == AtomKind::Table ? at.table->size() : 1;
        if (images[i].size() != want) throw InputError("wrong number of images for atom " + at.show());
        for (const auto& y : images[i])
            if (!dst->valid(y)) throw InputError("image is not an element of the target");
    }
    auto imgs = std::make_shared<const std::vector<std::vector<Elem>>>(std::move(images));
    auto fn = [imgs, S = src, D = dst](const Elem& x) {
        Elem acc = D->zero();
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i].v == 0) continue;
            const auto& at = S->atoms()[i];
            const auto& im = (*imgs)[i];
            Elem y;
            switch (at.kind) {
                case AtomKind::Regular:
                    y = S->nat_base() ? D->multiple(im[0], static_cast<std::uint64_t>(x[i].v))
                                      : D->ract(im[0], x[i].v);
                    break;
                case AtomKind::Cyclic: y = D->multiple(im[0], static_cast<std::uint64_t>(x[i].v)); break;
                case AtomKind::Boolean: y = im[0]; break;
                case AtomKind::Table: y = im[static_cast<std::size_t>(x[i].v)]; break;
                case AtomKind::QmodZ: break;
            }
            acc = D->add(acc, y);
        }
        return acc;
    };
    return LinearMap{src, dst, fn};
}

LinearMap map_identity(const ModPtr& m) {
    return LinearMap{m, m, [](const Elem& x) { return x; }};
}

LinearMap map_zero(const ModPtr& m, const ModPtr& n) {
    Elem z = n->zero();
    return LinearMap{m, n, [z](const Elem&) { return z; }};
}

LinearMap map_compose(const LinearMap& g, const LinearMap& f) {
    auto ff = f.fn;
    auto gg = g.fn;
    return LinearMap{f.src, g.dst, [ff, gg](const Elem& x) { return gg(ff(x)); }};
}

LinearMap map_add(const LinearMap& f, const LinearMap& g) {
    auto ff = f.fn;
    auto gg = g.fn;
    ModPtr d = f.dst;
    return LinearMap{f.src, f.dst, [ff, gg, d](const Elem& x) { return d->add(ff(x), gg(x)); }};
}

LinearMap from_finite(const FiniteMap& f, const ModPtr& src, const ModPtr& dst) {
    auto img = std::make_shared<const std::vector<Index>>(f.img);
    return LinearMap{src, dst, [img, src, dst](const Elem& x) {
                         return dst->element_at(static_cast<std::size_t>((*img)[src->index_of(x)]));
                     }};
}

FiniteMap to_finite(const LinearMap& f) {
    const auto els = f.src->elements();
    FiniteMap out{f.src->tabulate(), f.dst->tabulate(), std::vector<Index>(els.size())};
    for (std::size_t i = 0; i < els.size(); ++i) out.img[i] = static_cast<Index>(f.dst->index_of(f(els[i])));
    return out;
}

Report check_linear_map(const LinearMap& f, std::size_t samples, std::uint64_t seed) {
    Report r;
    const auto& M = *f.src;
    const auto& N = *f.dst;
    std::vector<Elem> pool;
    bool exhaustive = M.at_most(512);
    if (exhaustive) {
        pool = M.elements();
    } else {
        r.sampled = true;
        pool = M.generators();
        pool.push_back(M.zero());
        std::mt19937_64 rng(seed);
        for (std::size_t k = 0; k < samples; ++k) pool.push_back(random_elem(M, rng));
    }
    std::vector<Elem> img(pool.size());
    bool into = true;
    std::string wv;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        img[i] = f(pool[i]);
        if (into && !N.valid(img[i])) {
            into = false;
            wv = M.show(pool[i]);
        }
    }
    r.add("values lie in the target", into, wv);
    if (!into) return r;
    if (!exhaustive) {
        // sampling can miss wrap-around; test the defining relation of each
        // monogenic atom on its generator directly
        bool rel = true;
        std::string wr;
        for (std::size_t i = 0; i < M.rank() && rel; ++i) {
            const auto& at = M.atoms()[i];
            std::uint64_t a = 0, b = 0;
            if (at.kind == AtomKind::Cyclic) b = static_cast<std::uint64_t>(at.n);
            else if (at.kind == AtomKind::Boolean) a = 1, b = 2;
            else continue;
            Elem y = f(M.inject(i, M.atom_one(i)));
            if (N.multiple(y, a) != N.multiple(y, b)) {
                rel = false;
                wr = M.show(M.inject(i, M.atom_one(i)));
            }
        }
        r.add("atom relations respected", rel, wr);
    }
    r.add("zero preserved", N.is_zero(f(M.zero())), M.show(M.zero()));
    bool additive = true;
    std::string wa;
    const std::size_t lim = exhaustive ? pool.size() : std::min<std::size_t>(pool.size(), 120);
    for (std::size_t i = 0; i < lim && additive; ++i)
        for (std::size_t j = i; j < lim && additive; ++j)
            if (f(M.add(pool[i], pool[j])) != N.add(img[i], img[j])) {
                additive = false;
                wa = "(" + M.show(pool[i]) + "," + M.show(pool[j]) + ")";
            }
    r.add("additive", additive, wa);
    bool act = true;
    std::string ws;
    std::vector<Scalar> sc;
    if (M.nat_base()) {
        for (Scalar s = 0; s <= 7; ++s) sc.push_back(s);
    } else {
        sc = M.base()->elements();
    }
    for (std::size_t i = 0; i < pool.size() && act; ++i)
        for (Scalar s : sc) {
            if (f(M.ract(pool[i], s)) != N.ract(img[i], s) || f(M.lact(s, pool[i])) != N.lact(s, img[i])) {
                act = false;
                ws = "(" + M.show(pool[i]) + "," + (M.nat_base() ? std::to_string(s) : M.base()->show(s)) + ")";
                break;
            }
        }
    r.add("scalar action preserved", act, ws);
    return r;
}

bool maps_equal(const LinearMap& f, const LinearMap& g, std::string* witness) {
    std::vector<Elem> pool = f.src->at_most(4096) ? f.src->elements() : f.src->generators();
    for (const auto& x : pool)
        if (f(x) != g(x)) {
            if (witness) *witness = f.src->show(x);
            return false;
        }
    return true;
}

// ---- tensor products ----------------------------------------------------------

namespace {

FModPtr atom_as_table(const Atom& a, const SemiringPtr& base) {
    switch (a.kind) {
        case AtomKind::Table: return a.table;
        case AtomKind::Cyclic: return cyclic_module(a.n);
        case AtomKind::Boolean: return boolean_monoid();
        case AtomKind::Regular:
            if (base->is_finite()) return regular_module(base);
            break;
        default: break;
    }
    throw Unsupported("atom " + a.show() + " has no finite table");
}

}  // namespace

TensorPtr tensor(const ModPtr& mp, const ModPtr& np, std::size_t budget, TensorMode mode) {
    if (!same_semiring(mp->base(), np->base())) throw InputError("tensor: base semirings differ");
    auto t = std::make_shared<TensorProduct>();
    t->left = mp;
    t->right = np;
    t->mode = mode;
    const auto& base = mp->base();
    if (mode == TensorMode::Saturate) {
        auto sat = std::make_shared<const SaturatedTensor>(saturate_tensor(mp->tabulate(), np->tabulate(), budget));
        t->whole = sat;
        t->nodes_used = sat->nodes_used;
        t->result = as_structured(sat->result);
        return t;
    }
    using Rule = TensorProduct::Component::Rule;
    std::vector<Atom> out;
    for (std::size_t i = 0; i < mp->rank(); ++i)
        for (std::size_t j = 0; j < np->rank(); ++j) {
            const Atom& a = mp->atoms()[i];
            const Atom& b = np->atoms()[j];
            TensorProduct::Component c;
            c.i = static_cast<int>(i);
            c.j = static_cast<int>(j);
            auto emit = [&](Atom r, Rule rule) {
                c.rule = rule;
                c.out = static_cast<int>(out.size());
                out.push_back(std::move(r));
            };
            const bool zero_a = (a.kind == AtomKind::Cyclic && a.n == 1) ||
                                (a.kind == AtomKind::Table && a.table->size() == 1);
            const bool zero_b = (b.kind == AtomKind::Cyclic && b.n == 1) ||
                                (b.kind == AtomKind::Table && b.table->size() == 1);
            if (zero_a || zero_b) {
                c.rule = Rule::Zero;
            } else if (a.kind == AtomKind::Regular) {
                emit(b, Rule::RegularLeft);
            } else if (b.kind == AtomKind::Regular) {
                emit(a, Rule::RegularRight);
            } else if (a.kind == AtomKind::QmodZ && b.kind == AtomKind::QmodZ) {
                throw Unsupported("no rule for QMODZ ⊗ QMODZ");
            } else if ((a.kind == AtomKind::QmodZ && b.kind == AtomKind::Table) ||
                       (a.kind == AtomKind::Table && b.kind == AtomKind::QmodZ)) {
                throw Unsupported("no rule for QMODZ against a table atom");
            } else if (a.kind == AtomKind::QmodZ || b.kind == AtomKind::QmodZ) {
                c.rule = Rule::Zero;  // against CYCLIC or BOOL
            } else if (a.kind == AtomKind::Cyclic && b.kind == AtomKind::Cyclic) {
                int g = std::gcd(a.n, b.n);
                if (g == 1) c.rule = Rule::Zero;
                else emit(cyclic_atom(g), Rule::CyclicCyclic);
            } else if (a.kind == AtomKind::Boolean && b.kind == AtomKind::Boolean) {
                emit(boolean_atom(), Rule::BoolBool);
            } else if ((a.kind == AtomKind::Boolean && b.kind == AtomKind::Cyclic) ||
                       (a.kind == AtomKind::Cyclic && b.kind == AtomKind::Boolean)) {
                c.rule = Rule::Zero;
            } else {
                auto sat = std::make_shared<const SaturatedTensor>(
                    saturate_tensor(atom_as_table(a, base), atom_as_table(b, base), budget));
                t->nodes_used += sat->nodes_used;
                c.sat = sat;
                if (sat->result->size() == 1) c.rule = Rule::Zero;
                else emit(table_atom(sat->result), Rule::Saturated);
            }
            t->comps.push_back(std::move(c));
        }
    t->result = make_module(base, std::move(out));
    return t;
}

Elem TensorProduct::pure(const Elem& m, const Elem& n) const {
    if (whole) {
        Index x = whole->pure_of(static_cast<Index>(left->index_of(m)), static_cast<Index>(right->index_of(n)));
        return result->rank() ? Elem{Val{x, 1}} : Elem{};
    }
    using Rule = Component::Rule;
    Elem r = result->zero();
    for (const auto& c : comps) {
        if (c.out < 0) continue;
        const Val x = m[c.i], y = n[c.j];
        Val v;
        switch (c.rule) {
            case Rule::RegularLeft: v = right->atom_lact(c.j, x.v, y); break;
            case Rule::RegularRight: v = left->atom_ract(c.i, x, y.v); break;
            case Rule::CyclicCyclic: {
                const int g = result->atoms()[c.out].n;
                v = {(x.v % g) * (y.v % g) % g, 1};
                break;
            }
            case Rule::BoolBool: v = {x.v & y.v, 1}; break;
            case Rule::Saturated: v = {c.sat->pure_of(static_cast<Index>(x.v), static_cast<Index>(y.v)), 1}; break;
            case Rule::Zero: break;
        }
        r[c.out] = v;
    }
    return r;
}

std::vector<std::pair<Elem, Elem>> TensorProduct::decompose(const Elem& t) const {
    std::vector<std::pair<Elem, Elem>> out;
    if (whole) {
        if (result->rank() == 0) return out;
        for (auto [m, n] : whole->normal_form[static_cast<std::size_t>(t[0].v)])
            out.emplace_back(left->element_at(static_cast<std::size_t>(m)),
                             right->element_at(static_cast<std::size_t>(n)));
        return out;
    }
    using Rule = Component::Rule;
    for (const auto& c : comps) {
        if (c.out < 0) continue;
        const Val z = t[c.out];
        if (z.v == 0) continue;
        switch (c.rule) {
            case Rule::RegularLeft:
                out.emplace_back(left->inject(c.i, left->atom_one(c.i)), right->inject(c.j, z));
                break;
            case Rule::RegularRight:
                out.emplace_back(left->inject(c.i, z), right->inject(c.j, right->atom_one(c.j)));
                break;
            case Rule::CyclicCyclic:
                out.emplace_back(left->inject(c.i, z), right->inject(c.j, {1, 1}));
                break;
            case Rule::BoolBool: out.emplace_back(left->inject(c.i, {1, 1}), right->inject(c.j, {1, 1})); break;
            case Rule::Saturated:
                for (auto [m, n] : c.sat->normal_form[static_cast<std::size_t>(z.v)])
                    out.emplace_back(left->inject(c.i, {m, 1}), right->inject(c.j, {n, 1}));
                break;
            case Rule::Zero: break;
        }
    }
    return out;
}

LinearMap tensor_maps(const TensorPtr& src, const TensorPtr& dst, const LinearMap& f, const LinearMap& g) {
    auto ff = f.fn;
    auto gg = g.fn;
    return LinearMap{src->result, dst->result, [src, dst, ff, gg](const Elem& t) {
                         Elem acc = dst->result->zero();
                         for (const auto& [m, n] : src->decompose(t))
                             acc = dst->result->add(acc, dst->pure(ff(m), gg(n)));
                         return acc;
                     }};
}

LinearMap associator(const TensorPtr& mn_p, const TensorPtr& mn, const TensorPtr& m_np, const TensorPtr& np) {
    return LinearMap{mn_p->result, m_np->result, [=](const Elem& t) {
                         Elem acc = m_np->result->zero();
                         for (const auto& [u, p] : mn_p->decompose(t))
                             for (const auto& [m, n] : mn->decompose(u))
                                 acc = m_np->result->add(acc, m_np->pure(m, np->pure(n, p)));
                         return acc;
                     }};
}

LinearMap associator_inverse(const TensorPtr& m_np, const TensorPtr& np, const TensorPtr& mn_p,
                             const TensorPtr& mn) {
    return LinearMap{m_np->result, mn_p->result, [=](const Elem& t) {
                         Elem acc = mn_p->result->zero();
                         for (const auto& [m, u] : m_np->decompose(t))
                             for (const auto& [n, p] : np->decompose(u))
                                 acc = mn_p->result->add(acc, mn_p->pure(mn->pure(m, n), p));
                         return acc;
                     }};
}

LinearMap unit_right(const TensorPtr& m_s) {
    return LinearMap{m_s->result, m_s->left, [m_s](const Elem& t) {
                         Elem acc = m_s->left->zero();
                         for (const auto& [m, s] : m_s->decompose(t))
                             acc = m_s->left->add(acc, m_s->left->ract(m, s[0].v));
                         return acc;
                     }};
}

LinearMap unit_left(const TensorPtr& s_m) {
    return LinearMap{s_m->result, s_m->right, [s_m](const Elem& t) {
                         Elem acc = s_m->right->zero();
                         for (const auto& [s, m] : s_m->decompose(t))
                             acc = s_m->right->add(acc, s_m->right->lact(s[0].v, m));
                         return acc;
                     }};
}

Reflection cancellative_reflection(const ModPtr& mp) {
    const auto& M = *mp;
    // c(-) commutes with direct sums, so reflect atom by atom.
    std::vector<Atom> out;
    struct Slot {
        int out = -1;
        std::shared_ptr<const Quotient> q;
    };
    std::vector<Slot> slots(M.rank());
    for (std::size_t i = 0; i < M.rank(); ++i) {
        const auto& at = M.atoms()[i];
        const bool keep = at.kind == AtomKind::Cyclic || at.kind == AtomKind::QmodZ ||
                          (at.kind == AtomKind::Regular && M.nat_base());
        if (at.kind == AtomKind::Boolean) continue;
        if (keep) {
            slots[i].out = static_cast<int>(out.size());
            out.push_back(at);
            continue;
        }
        auto q = std::make_shared<const Quotient>(semialg::cancellative_reflection(atom_as_table(at, M.base())));
        if (q->module->size() == 1) continue;
        slots[i].out = static_cast<int>(out.size());
        if (q->module->size() == atom_as_table(at, M.base())->size()) {
            out.push_back(at);  // already cancellative
        } else {
            slots[i].q = q;
            out.push_back(table_atom(q->module));
        }
    }
    auto res = make_module(M.base(), std::move(out));
    auto fn = [slots, res](const Elem& x) {
        Elem y = res->zero();
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].out < 0) continue;
            y[slots[i].out] = slots[i].q ? Val{slots[i].q->proj(static_cast<Index>(x[i].v)), 1} : x[i];
        }
        return y;
    };
    return Reflection{res, LinearMap{mp, res, fn}};
}

Reflection takahashi_tensor(const ModPtr& m, const ModPtr& n, std::size_t budget, TensorMode mode) {
    return cancellative_reflection(tensor(m, n, budget, mode)->result);
}

// ---- predicates -----------------------------------------------------------------

bool structured_injective(const LinearMap& f, std::string* witness) {
    if (!f.src->finite()) throw Unsupported("injectivity needs a finite source");
    std::map<Elem, Elem> seen;
    for (const auto& x : f.src->elements()) {
        Elem y = f(x);
        auto [it, fresh] = seen.emplace(y, x);
        if (!fresh) {
            if (witness) *witness = f.src->show(it->second) + " and " + f.src->show(x) + " both map to " + f.dst->show(y);
            return false;
        }
    }
    return true;
}

bool is_group(const Module& m) {
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const auto& at = m.atoms()[i];
        switch (at.kind) {
            case AtomKind::Cyclic:
            case AtomKind::QmodZ: break;
            case AtomKind::Boolean: return false;
            case AtomKind::Regular: {
                if (m.nat_base()) return false;
                const auto& S = *m.base();
                for (Scalar a : S.elements()) {
                    bool inv = false;
                    for (Scalar b : S.elements()) inv = inv || S.add(a, b) == 0;
                    if (!inv) return false;
                }
                break;
            }
            case AtomKind::Table: {
                const auto& T = *at.table;
                for (Index a = 0; a < static_cast<Index>(T.size()); ++a) {
                    bool inv = false;
                    for (Index b = 0; b < static_cast<Index>(T.size()); ++b) inv = inv || T.add(a, b) == 0;
                    if (!inv) return false;
                }
                break;
            }
        }
    }
    return true;
}

namespace {

std::string show_tensor(const TensorProduct& t, const Elem& x) {
    auto parts = t.decompose(x);
    if (parts.empty()) return "0";
    std::string s;
    for (const auto& [m, n] : parts) {
        if (!s.empty()) s += "+";
        s += t.left->show(m) + "⊗" + t.right->show(n);
    }
    return s;
}

// Is the image of f (finite source) subtractive in the target?
std::optional<bool> image_subtractive(const LinearMap& f) {
    if (is_group(*f.dst)) return true;
    if (!f.dst->finite() || f.dst->size() > 4096) return std::nullopt;
    std::set<Elem> img;
    for (const auto& x : f.src->elements()) img.insert(f(x));
    for (const auto& g : f.dst->elements()) {
        if (img.count(g)) continue;
        for (const auto& l : img)
            if (img.count(f.dst->add(g, l))) return false;
    }
    return true;
}

}  // namespace

std::string tensor_element_name(const TensorProduct& t, const Elem& x) { return show_tensor(t, x); }

FlatnessCertificate flatness_probe(const ModPtr& m, const std::vector<LinearMap>& family, std::size_t budget) {
    FlatnessCertificate cert;
    for (const auto& f : family) {
        std::string label = f.src->describe() + " → " + f.dst->describe();
        try {
            auto tx = tensor(f.src, m, budget);
            auto ty = tensor(f.dst, m, budget);
            auto h = tensor_maps(tx, ty, f, map_identity(m));
            if (!tx->result->finite()) throw Unsupported("source tensor is infinite");
            std::map<Elem, Elem> seen;
            std::string w;
            for (const auto& x : tx->result->elements()) {
                Elem y = h(x);
                auto [it, fresh] = seen.emplace(y, x);
                if (!fresh) {
                    const Elem& a = it->second;
                    w = tx->result->is_zero(a) ? show_tensor(*tx, x) + " ↦ 0"
                                               : show_tensor(*tx, a) + " and " + show_tensor(*tx, x) + " collide";
                    break;
                }
            }
            const bool inj = w.empty();
            if (!inj) {
                cert.mono_flat = false;
                cert.uniformly_flat = false;
                if (cert.witness.empty()) cert.witness = label + ": " + w;
                cert.notes.push_back(label + ": not injective after tensoring (" + w + ")");
                continue;
            }
            auto fu = image_subtractive(f);
            if (fu && *fu) {
                auto hu = image_subtractive(h);
                if (!hu) {
                    cert.notes.push_back(label + ": injective; uniformity of the tensored map not decidable");
                    cert.undecided = true;
                    continue;
                }
                if (!*hu) {
                    cert.uniformly_flat = false;
                    if (cert.witness.empty()) cert.witness = label + ": image of the tensored map is not subtractive";
                }
            }
            cert.notes.push_back(label + ": injective after tensoring");
        } catch (const Undecided& e) {
            cert.undecided = true;
            cert.notes.push_back(label + ": undecided (" + std::string(e.what()) + ")");
        } catch (const Unsupported& e) {
            cert.undecided = true;
            cert.notes.push_back(label + ": unsupported (" + std::string(e.what()) + ")");
        }
    }
    return cert;
}

// ---- dual bases ----------------------------------------------------------------------

bool check_dual_basis(const FModPtr& pp, const DualBasis& b, std::string* witness) {
    const auto& P = *pp;
    if (P.nat_base()) {
        // functionals into NAT are not tabled; only the empty family is representable
        for (Index p = 0; p < static_cast<Index>(P.size()); ++p)
            if (p != 0 && b.points.empty()) {
                if (witness) *witness = P.name(p);
                return false;
            }
        return b.points.empty();
    }
    for (Index p = 0; p < static_cast<Index>(P.size()); ++p) {
        Index acc = 0;
        for (std::size_t l = 0; l < b.points.size(); ++l) acc = P.add(acc, P.ract(b.points[l], b.functionals[l](p)));
        if (acc != p) {
            if (witness) *witness = P.name(p);
            return false;
        }
    }
    return true;
}

std::optional<DualBasis> search_dual_basis(const FModPtr& pp, int bound) {
    const auto& P = *pp;
    if (P.size() == 1) return DualBasis{};
    // A finite monoid has k x = (k+p) x for some k, p, so its only map into
    // NAT is zero: no dual basis unless P = 0.
    if (P.nat_base()) return std::nullopt;
    auto reg = regular_module(P.base());
    auto dual = hom_enumerate(pp, reg);
    struct Cand {
        Index p;
        std::size_t f;
    };
    std::vector<Cand> cands;
    for (Index p = 1; p < static_cast<Index>(P.size()); ++p)
        for (std::size_t f = 0; f < dual.size(); ++f) {
            bool nonzero = std::any_of(dual[f].img.begin(), dual[f].img.end(), [](Index v) { return v != 0; });
            if (nonzero) cands.push_back({p, f});
        }
    std::vector<std::size_t> pick;
    std::optional<DualBasis> found;
    std::size_t visited = 0;
    std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
        if (found) return;
        if (++visited > 2000000) throw Undecided("dual basis search exceeded its budget");
        if (!pick.empty()) {
            DualBasis b;
            for (auto k : pick) {
                b.points.push_back(cands[k].p);
                b.functionals.push_back(dual[cands[k].f]);
            }
            if (check_dual_basis(pp, b)) {
                found = b;
                return;
            }
        }
        if (left == 0) return;
        for (std::size_t k = from; k < cands.size() && !found; ++k) {
            pick.push_back(k);
            rec(k, left - 1);
            pick.pop_back();
        }
    };
    rec(0, bound);
    return found;
}

Interchange product_interchange(const ModPtr& m, const std::vector<ModPtr>& family, std::size_t budget,
                                TensorMode mode) {
    if (family.empty()) throw InputError("interchange needs a non-empty family");
    Interchange ic;
    auto prod = structured_sum(family);
    ic.source = tensor(m, prod, budget, mode);
    std::vector<ModPtr> parts;
    for (const auto& x : family) {
        ic.targets.push_back(tensor(m, x, budget, mode));
        parts.push_back(ic.targets.back()->result);
    }
    ic.product_target = structured_sum(parts);
    auto src = ic.source;
    auto tg = ic.targets;
    auto fam = family;
    auto pt = ic.product_target;
    ic.phi = LinearMap{src->result, pt, [src, tg, fam, pt](const Elem& t) {
                           Elem acc = pt->zero();
                           for (const auto& [mm, x] : src->decompose(t)) {
                               Elem y;
                               std::size_t off = 0;
                               for (std::size_t l = 0; l < fam.size(); ++l) {
                                   Elem xl(x.begin() + static_cast<long>(off),
                                           x.begin() + static_cast<long>(off + fam[l]->rank()));
                                   off += fam[l]->rank();
                                   Elem yl = tg[l]->pure(mm, xl);
                                   y.insert(y.end(), yl.begin(), yl.end());
                               }
                               acc = pt->add(acc, y);
                           }
                           return acc;
                       }};
    if (src->result->finite() && pt->finite()) {
        ic.injective = structured_injective(ic.phi);
        std::set<Elem> img;
        for (const auto& x : src->result->elements()) img.insert(ic.phi(x));
        ic.surjective = img.size() == pt->size();
    }
    return ic;
}

}  // namespace semialg
