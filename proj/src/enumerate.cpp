#include "semialg/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace semialg {

namespace {

using Table = std::vector<int>;  // n*n addition table

struct Raw {
    int n = 0;
    Table add;
    std::vector<Table> act;  // act[s][m] for every scalar s
};

// Lexicographically least relabelling over permutations fixing 0.
std::vector<int> canonical(const Raw& r) {
    std::vector<int> perm(r.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best;
    do {
        std::vector<int> inv(r.n);
        for (int i = 0; i < r.n; ++i) inv[perm[i]] = i;
        std::vector<int> code;
        code.reserve(r.n * r.n * (1 + r.act.size()));
        for (int a = 0; a < r.n; ++a)
            for (int b = 0; b < r.n; ++b) code.push_back(perm[r.add[inv[a] * r.n + inv[b]]]);
        for (const auto& t : r.act)
            for (int a = 0; a < r.n; ++a) code.push_back(perm[t[inv[a]]]);
        if (best.empty() || code < best) best = std::move(code);
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

std::vector<Raw> raw_monoids(int n) {
    std::vector<Raw> out;
    if (n == 1) {
        out.push_back(Raw{1, {0}, {}});
        return out;
    }
    std::vector<std::pair<int, int>> cells;
    for (int i = 1; i < n; ++i)
        for (int j = i; j < n; ++j) cells.emplace_back(i, j);
    Table t(n * n, 0);
    for (int i = 0; i < n; ++i) {
        t[i] = i;
        t[i * n] = i;
    }
    std::set<std::vector<int>> seen;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == cells.size()) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        if (t[t[a * n + b] * n + c] != t[a * n + t[b * n + c]]) return;
            Raw r{n, t, {}};
            if (seen.insert(canonical(r)).second) out.push_back(r);
            return;
        }
        auto [i, j] = cells[k];
        for (int v = 0; v < n; ++v) {
            t[i * n + j] = v;
            t[j * n + i] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

std::vector<Table> additive_endos(const Raw& r) {
    const int n = r.n;
    std::vector<Table> out;
    Table f(n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (f[r.add[a * n + b]] != r.add[f[a] * n + f[b]]) return;
            out.push_back(f);
            return;
        }
        for (int v = 0; v < n; ++v) {
            f[i] = v;
            rec(i + 1);
        }
    };
    f[0] = 0;
    rec(1);
    return out;
}

FModPtr build(const SemiringPtr& base, const Raw& r) {
    static const char* letters = "0abcdefgh";
    std::vector<std::string> names;
    for (int i = 0; i < r.n; ++i) names.push_back(std::string(1, letters[i]));
    std::vector<Index> ract, lact;
    if (base->is_finite()) {
        const int q = static_cast<int>(base->size());
        ract.resize(r.n * q);
        lact.resize(r.n * q);
        for (int m = 0; m < r.n; ++m)
            for (int s = 0; s < q; ++s) {
                ract[m * q + s] = r.act[s][m];
                lact[s * r.n + m] = r.act[s][m];
            }
    }
    return std::make_shared<const FiniteModule>(base, std::move(names), r.add, std::move(ract), std::move(lact));
}

}  // namespace

std::vector<FModPtr> enumerate_monoids(int max_size) {
    return enumerate_modules(builtin_semiring("NAT"), max_size);
}

std::vector<FModPtr> enumerate_modules(const SemiringPtr& base, int max_size) {
    if (max_size > 5) throw Unsupported("module enumeration is limited to 5 elements");
    std::vector<FModPtr> out;
    for (int n = 1; n <= max_size; ++n) {
        for (const Raw& mon : raw_monoids(n)) {
            if (!base->is_finite()) {
                out.push_back(build(base, mon));
                continue;
            }
            const auto& S = *base;
            const int q = static_cast<int>(S.size());
            const auto endos = additive_endos(mon);
            Table id(n), zero(n, 0);
            std::iota(id.begin(), id.end(), 0);
            std::vector<int> choice(q, -1);
            std::vector<Table> act(q);
            std::set<std::vector<int>> seen;
            // fixed values for 0 and 1, search the rest
            std::vector<Scalar> free_scalars;
            for (Scalar s = 0; s < q; ++s)
                if (s != 0 && s != S.one()) free_scalars.push_back(s);
            act[0] = zero;
            act[S.one()] = id;
            auto consistent = [&]() {
                // (m s) t = m (s t) and m (s + t) = m s + m t, for assigned scalars
                for (Scalar s = 0; s < q; ++s) {
                    if (act[s].empty()) continue;
                    for (Scalar t = 0; t < q; ++t) {
                        if (act[t].empty()) continue;
                        const auto& st = act[S.mul(s, t)];
                        const auto& sp = act[S.add(s, t)];
                        for (int m = 0; m < n; ++m) {
                            if (!st.empty() && act[t][act[s][m]] != st[m]) return false;
                            if (!sp.empty() && sp[m] != mon.add[act[s][m] * n + act[t][m]]) return false;
                        }
                    }
                }
                return true;
            };
            if (!consistent()) continue;
            std::function<void(std::size_t)> rec = [&](std::size_t k) {
                if (k == free_scalars.size()) {
                    Raw r{n, mon.add, act};
                    if (seen.insert(canonical(r)).second) {
                        auto m = build(base, r);
                        if (check_semimodule_axioms(*m).ok()) out.push_back(m);
                    }
                    return;
                }
                Scalar s = free_scalars[k];
                for (const auto& e : endos) {
                    act[s] = e;
                    if (consistent()) rec(k + 1);
                }
                act[s].clear();
            };
            rec(0);
        }
    }
    // the same module can arise from two monoid labellings; dedupe globally
    std::vector<FModPtr> uniq;
    std::set<std::vector<int>> keys;
    for (const auto& m : out) {
        Raw r{static_cast<int>(m->size()), m->add_table(), {}};
        if (base->is_finite()) {
            const int q = static_cast<int>(base->size());
            for (int s = 0; s < q; ++s) {
                Table t(r.n);
                for (int x = 0; x < r.n; ++x) t[x] = m->ract(x, s);
                r.act.push_back(t);
            }
        }
        if (keys.insert(canonical(r)).second) uniq.push_back(m);
    }
    return uniq;
}

}  // namespace semialg
