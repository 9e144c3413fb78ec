#include "semialg/semiring.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace semialg {

namespace {

std::string pair(const Semiring& s, Scalar a, Scalar b) {
    return "(" + s.show(a) + "," + s.show(b) + ")";
}

// Validates closure/shape and returns the permutation putting zero first.
std::vector<int> validate_shape(const SemiringTables& t, std::string& err) {
    const int n = static_cast<int>(t.elements.size());
    if (n == 0) {
        err = "semiring has no elements";
        return {};
    }
    auto table_ok = [&](const std::vector<std::vector<int>>& tab, const char* what) {
        if (static_cast<int>(tab.size()) != n) {
            err = std::string(what) + " table has " + std::to_string(tab.size()) +
                  " rows, expected " + std::to_string(n);
            return false;
        }
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(tab[i].size()) != n) {
                err = std::string(what) + " table row " + std::to_string(i) + " has " +
                      std::to_string(tab[i].size()) + " entries, expected " + std::to_string(n);
                return false;
            }
            for (int j = 0; j < n; ++j)
                if (tab[i][j] < 0 || tab[i][j] >= n) {
                    err = std::string(what) + " table not closed at (" + t.elements[i] + "," +
                          t.elements[j] + ")";
                    return false;
                }
        }
        return true;
    };
    if (!table_ok(t.add, "addition") || !table_ok(t.mul, "multiplication")) return {};
    if (t.zero < 0 || t.zero >= n || t.one < 0 || t.one >= n) {
        err = "zero or one out of range";
        return {};
    }
    std::vector<int> order;
    order.push_back(t.zero);
    for (int i = 0; i < n; ++i)
        if (i != t.zero) order.push_back(i);
    return order;
}

}  // namespace

Semiring Semiring::from_tables(const SemiringTables& t) {
    std::string err;
    auto order = validate_shape(t, err);
    if (!err.empty()) throw InputError(err);
    const std::size_t n = order.size();
    std::vector<int> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = static_cast<int>(i);
    Semiring s;
    s.name_ = t.name;
    s.n_ = n;
    s.add_.resize(n * n);
    s.mul_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            s.add_[i * n + j] = pos[t.add[order[i]][order[j]]];
            s.mul_[i * n + j] = pos[t.mul[order[i]][order[j]]];
        }
    s.one_ = pos[t.one];
    for (std::size_t i = 0; i < n; ++i) s.names_.push_back(t.elements[order[i]]);
    s.compute_predicates();
    return s;
}

Semiring Semiring::nat() {
    Semiring s;
    s.name_ = "NAT";
    s.effective_ = true;
    s.n_ = 0;
    s.one_ = 1;
    s.compute_predicates();
    return s;
}

std::vector<Scalar> Semiring::elements() const {
    if (effective_) throw Unsupported("NAT has no finite element list");
    std::vector<Scalar> v(n_);
    std::iota(v.begin(), v.end(), Scalar{0});
    return v;
}

std::string Semiring::show(Scalar s) const {
    if (effective_) return std::to_string(s);
    return names_.at(static_cast<std::size_t>(s));
}

std::optional<Scalar> Semiring::parse(const std::string& name) const {
    if (effective_) {
        if (name.empty() || !std::all_of(name.begin(), name.end(), ::isdigit)) return std::nullopt;
        return static_cast<Scalar>(std::stoll(name));
    }
    for (std::size_t i = 0; i < n_; ++i)
        if (names_[i] == name) return static_cast<Scalar>(i);
    return std::nullopt;
}

SemiringTables Semiring::tables() const {
    if (effective_) throw Unsupported("NAT has no tables");
    SemiringTables t;
    t.name = name_;
    t.elements = names_;
    t.add.assign(n_, std::vector<int>(n_));
    t.mul.assign(n_, std::vector<int>(n_));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            t.add[i][j] = static_cast<int>(add_[i * n_ + j]);
            t.mul[i][j] = static_cast<int>(mul_[i * n_ + j]);
        }
    t.zero = 0;
    t.one = static_cast<int>(one_);
    return t;
}

Scalar Semiring::from_count(std::uint64_t k) const {
    if (effective_) return static_cast<Scalar>(k);
    Scalar acc = 0;
    for (std::uint64_t i = 0; i < k; ++i) acc = add(acc, one_);
    return acc;
}

bool Semiring::operator==(const Semiring& o) const {
    return effective_ == o.effective_ && n_ == o.n_ && add_ == o.add_ && mul_ == o.mul_ &&
           one_ == o.one_;
}

void Semiring::compute_predicates() { preds_ = structural_predicates(*this); }

SemiringPtr make_semiring(Semiring s) { return std::make_shared<const Semiring>(std::move(s)); }

bool same_semiring(const SemiringPtr& a, const SemiringPtr& b) {
    return a == b || (a && b && *a == *b);
}

SemiringPtr builtin_semiring(const std::string& tag, int param) {
    SemiringTables t;
    auto square = [](int n) { return std::vector<std::vector<int>>(n, std::vector<int>(n)); };
    if (tag == "NAT") return make_semiring(Semiring::nat());
    if (tag == "BOOL") {
        t.name = "BOOL";
        t.elements = {"0", "1"};
        t.add = {{0, 1}, {1, 1}};
        t.mul = {{0, 0}, {0, 1}};
        t.zero = 0;
        t.one = 1;
    } else if (tag == "ZMOD") {
        if (param < 2) throw InputError("ZMOD(n) needs n >= 2");
        t.name = "ZMOD(" + std::to_string(param) + ")";
        t.add = square(param);
        t.mul = square(param);
        for (int i = 0; i < param; ++i) {
            t.elements.push_back(std::to_string(i));
            for (int j = 0; j < param; ++j) {
                t.add[i][j] = (i + j) % param;
                t.mul[i][j] = (i * j) % param;
            }
        }
        t.zero = 0;
        t.one = 1;
    } else if (tag == "NATCAP") {
        if (param < 1) throw InputError("NATCAP(k) needs k >= 1");
        const int n = param + 1;
        t.name = "NATCAP(" + std::to_string(param) + ")";
        t.add = square(n);
        t.mul = square(n);
        for (int i = 0; i < n; ++i) {
            t.elements.push_back(std::to_string(i));
            for (int j = 0; j < n; ++j) {
                t.add[i][j] = std::min(i + j, param);
                t.mul[i][j] = std::min(i * j, param);
            }
        }
        t.zero = 0;
        t.one = 1;
    } else if (tag == "TROPCAP") {
        if (param < 1) throw InputError("TROPCAP(k) needs k >= 1");
        // index 0 is infinity (the additive zero); index i+1 is the value i.
        const int n = param + 2;
        t.name = "TROPCAP(" + std::to_string(param) + ")";
        t.add = square(n);
        t.mul = square(n);
        t.elements.push_back("inf");
        for (int i = 0; i <= param; ++i) t.elements.push_back(std::to_string(i));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == 0) t.add[a][b] = b;
                else if (b == 0) t.add[a][b] = a;
                else t.add[a][b] = std::min(a, b);
                if (a == 0 || b == 0) t.mul[a][b] = 0;
                else t.mul[a][b] = std::min((a - 1) + (b - 1), param) + 1;
            }
        t.zero = 0;
        t.one = 1;
    } else if (tag == "IDEALS") {
        if (param < 2) throw InputError("IDEALS(n) needs n >= 2");
        // The ideal dZ/nZ for each divisor d of n; d = n is the zero ideal.
        std::vector<int> divs;
        for (int d = param; d >= 1; --d)
            if (param % d == 0) divs.push_back(d);
        const int n = static_cast<int>(divs.size());
        auto idx = [&](int d) {
            return static_cast<int>(std::find(divs.begin(), divs.end(), d) - divs.begin());
        };
        t.name = "IDEALS(" + std::to_string(param) + ")";
        t.add = square(n);
        t.mul = square(n);
        for (int i = 0; i < n; ++i) {
            t.elements.push_back(divs[i] == param ? "(0)" : "(" + std::to_string(divs[i]) + ")");
            for (int j = 0; j < n; ++j) {
                t.add[i][j] = idx(std::gcd(divs[i], divs[j]));
                t.mul[i][j] = idx(std::lcm(divs[i], divs[j]));
            }
        }
        t.zero = 0;
        t.one = idx(1);
    } else {
        throw InputError("unknown builtin semiring '" + tag + "'");
    }
    return make_semiring(Semiring::from_tables(t));
}

SemiringPtr product_semiring(const SemiringPtr& s, int k) {
    if (!s->is_finite()) throw Unsupported("product of an infinite semiring");
    if (k < 1) throw InputError("product semiring needs k >= 1");
    const int n = static_cast<int>(s->size());
    int total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    auto digits = [&](int x) {
        std::vector<int> d(k);
        for (int i = k - 1; i >= 0; --i) {
            d[i] = x % n;
            x /= n;
        }
        return d;
    };
    auto encode = [&](const std::vector<int>& d) {
        int x = 0;
        for (int v : d) x = x * n + v;
        return x;
    };
    SemiringTables t;
    t.name = s->name() + "^" + std::to_string(k);
    t.add.assign(total, std::vector<int>(total));
    t.mul.assign(total, std::vector<int>(total));
    for (int a = 0; a < total; ++a) {
        auto da = digits(a);
        std::string nm = "(";
        for (int i = 0; i < k; ++i) nm += (i ? "," : "") + s->show(da[i]);
        t.elements.push_back(nm + ")");
        for (int b = 0; b < total; ++b) {
            auto db = digits(b);
            std::vector<int> sa(k), sm(k);
            for (int i = 0; i < k; ++i) {
                sa[i] = static_cast<int>(s->add(da[i], db[i]));
                sm[i] = static_cast<int>(s->mul(da[i], db[i]));
            }
            t.add[a][b] = encode(sa);
            t.mul[a][b] = encode(sm);
        }
    }
    t.zero = 0;
    t.one = encode(std::vector<int>(k, static_cast<int>(s->one())));
    return make_semiring(Semiring::from_tables(t));
}

namespace {

template <class Add, class Mul, class Show>
void run_axioms(Report& r, const std::vector<Scalar>& xs, Scalar zero, Scalar one, Add add,
                Mul mul, Show show, bool all_triples, std::size_t samples, std::uint64_t seed) {
    auto tri = [&](Scalar a, Scalar b, Scalar c) {
        return "(" + show(a) + "," + show(b) + "," + show(c) + ")";
    };
    std::string w_addassoc, w_addcomm, w_addunit, w_mulassoc, w_mulunit, w_ldist, w_rdist, w_abs;
    auto check_triple = [&](Scalar a, Scalar b, Scalar c) {
        if (w_addassoc.empty() && add(add(a, b), c) != add(a, add(b, c))) w_addassoc = tri(a, b, c);
        if (w_mulassoc.empty() && mul(mul(a, b), c) != mul(a, mul(b, c))) w_mulassoc = tri(a, b, c);
        if (w_ldist.empty() && mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) w_ldist = tri(a, b, c);
        if (w_rdist.empty() && mul(add(a, b), c) != add(mul(a, c), mul(b, c))) w_rdist = tri(a, b, c);
    };
    auto check_pair = [&](Scalar a, Scalar b) {
        if (w_addcomm.empty() && add(a, b) != add(b, a))
            w_addcomm = "(" + show(a) + "," + show(b) + ")";
    };
    auto check_single = [&](Scalar a) {
        if (w_addunit.empty() && (add(a, zero) != a || add(zero, a) != a)) w_addunit = "(" + show(a) + ")";
        if (w_mulunit.empty() && (mul(a, one) != a || mul(one, a) != a)) w_mulunit = "(" + show(a) + ")";
        if (w_abs.empty()) {
            if (mul(a, zero) != zero) w_abs = "(" + show(a) + "," + show(zero) + ")";
            else if (mul(zero, a) != zero) w_abs = "(" + show(zero) + "," + show(a) + ")";
        }
    };
    if (all_triples) {
        for (Scalar a : xs) {
            check_single(a);
            for (Scalar b : xs) {
                check_pair(a, b);
                for (Scalar c : xs) check_triple(a, b, c);
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
        for (std::size_t i = 0; i < samples; ++i) {
            Scalar a = xs[pick(rng)], b = xs[pick(rng)], c = xs[pick(rng)];
            check_single(a);
            check_pair(a, b);
            check_triple(a, b, c);
        }
        r.sampled = true;
    }
    r.add("additive associativity", w_addassoc.empty(), w_addassoc);
    r.add("additive commutativity", w_addcomm.empty(), w_addcomm);
    r.add("additive identity", w_addunit.empty(), w_addunit);
    r.add("multiplicative associativity", w_mulassoc.empty(), w_mulassoc);
    r.add("multiplicative identity", w_mulunit.empty(), w_mulunit);
    r.add("left distributivity", w_ldist.empty(), w_ldist);
    r.add("right distributivity", w_rdist.empty(), w_rdist);
    r.add("absorption", w_abs.empty(), w_abs);
    r.add("one differs from zero", one != zero, "(" + show(one) + ")");
}

}  // namespace

Report check_semiring_axioms(const SemiringTables& t) {
    Report r;
    std::string err;
    validate_shape(t, err);
    if (!err.empty()) {
        r.format_error = err;
        return r;
    }
    std::vector<Scalar> xs(t.elements.size());
    std::iota(xs.begin(), xs.end(), Scalar{0});
    run_axioms(
        r, xs, t.zero, t.one, [&](Scalar a, Scalar b) { return Scalar(t.add[a][b]); },
        [&](Scalar a, Scalar b) { return Scalar(t.mul[a][b]); },
        [&](Scalar a) { return t.elements[a]; }, true, 0, 0);
    return r;
}

Report check_semiring_axioms(const Semiring& s, std::size_t samples, std::uint64_t seed) {
    Report r;
    auto add = [&](Scalar a, Scalar b) { return s.add(a, b); };
    auto mul = [&](Scalar a, Scalar b) { return s.mul(a, b); };
    auto show = [&](Scalar a) { return s.show(a); };
    if (s.is_finite()) {
        run_axioms(r, s.elements(), s.zero(), s.one(), add, mul, show, true, 0, 0);
    } else {
        // Elements of bounded size; small values are over-represented so
        // that 0 and 1 show up in a good share of the triples.
        std::vector<Scalar> xs;
        for (Scalar v = 0; v <= 64; ++v) xs.push_back(v);
        for (Scalar v = 65; v <= 100000; v = v * 3 / 2 + 7) xs.push_back(v);
        run_axioms(r, xs, s.zero(), s.one(), add, mul, show, false, samples, seed);
    }
    return r;
}

StructuralPredicates structural_predicates(const Semiring& s, std::size_t samples,
                                           std::uint64_t seed) {
    StructuralPredicates p;
    std::vector<Scalar> xs;
    if (s.is_finite()) {
        xs = s.elements();
    } else {
        p.sampled = true;
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<Scalar> pick(0, 1000);
        for (Scalar v = 0; v < 16; ++v) xs.push_back(v);
        while (xs.size() * xs.size() < samples) xs.push_back(pick(rng));
    }
    for (Scalar a : xs) {
        if (p.additively_idempotent && s.add(a, a) != a) {
            p.additively_idempotent = false;
            p.idempotent_witness = s.show(a) + "+" + s.show(a) + " = " + s.show(s.add(a, a));
        }
        for (Scalar b : xs) {
            if (p.commutative && s.mul(a, b) != s.mul(b, a)) {
                p.commutative = false;
                p.commutative_witness = s.show(a) + "*" + s.show(b) + " != " + s.show(b) + "*" + s.show(a);
            }
            if (p.cancellative && s.is_finite()) {
                for (Scalar c : xs) {
                    if (b != c && s.add(a, b) == s.add(a, c)) {
                        p.cancellative = false;
                        p.cancellative_witness = s.show(a) + "+" + s.show(b) + " = " + s.show(a) + "+" +
                                                 s.show(c) + " but " + s.show(b) + " != " + s.show(c);
                        break;
                    }
                }
            }
        }
    }
    return p;
}

Report check_semiring_morphism(const SemiringMorphism& f) {
    Report r;
    const auto& S = *f.source;
    const auto& T = *f.target;
    if (!S.is_finite()) throw Unsupported("morphism check needs a finite source");
    if (f.map.size() != S.size()) {
        r.format_error = "morphism table has wrong length";
        return r;
    }
    std::string wa, wm;
    for (Scalar a : S.elements())
        for (Scalar b : S.elements()) {
            if (wa.empty() && f(S.add(a, b)) != T.add(f(a), f(b))) wa = pair(S, a, b);
            if (wm.empty() && f(S.mul(a, b)) != T.mul(f(a), f(b))) wm = pair(S, a, b);
        }
    r.add("preserves addition", wa.empty(), wa);
    r.add("preserves multiplication", wm.empty(), wm);
    r.add("preserves zero", f(S.zero()) == T.zero(), S.show(S.zero()));
    r.add("preserves one", f(S.one()) == T.one(), S.show(S.one()));
    return r;
}

}  // namespace semialg
