#include "semialg/saturation.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

namespace semialg {

namespace {

// Coset-style enumeration of a finitely presented commutative monoid.
// Nodes are elements, edges are "add generator g". Relations are pairs of
// words applied at every live node; coincidences are merged with a
// union-find and propagated along the edge table.
class Enumerator {
public:
    Enumerator(std::size_t gens, std::size_t budget) : g_(gens), budget_(budget) { new_node(); }

    void add_relation(std::vector<int> a, std::vector<int> b) { rels_.push_back({std::move(a), std::move(b)}); }

    void run() {
        for (std::size_t u = 0; u < parent_.size(); ++u) {
            if (find(static_cast<int>(u)) != static_cast<int>(u)) continue;
            for (const auto& [a, b] : rels_) {
                if (find(static_cast<int>(u)) != static_cast<int>(u)) break;
                int x = trace(static_cast<int>(u), a);
                int y = trace(static_cast<int>(u), b);
                coincide(x, y);
            }
            // make sure every generator edge exists from live nodes so that
            // the final table is complete
            for (std::size_t gi = 0; gi < g_; ++gi) {
                if (find(static_cast<int>(u)) != static_cast<int>(u)) break;
                step(static_cast<int>(u), static_cast<int>(gi));
            }
        }
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    int edge(int u, int gi) {
        int v = table_[static_cast<std::size_t>(u) * g_ + gi];
        return v < 0 ? -1 : find(v);
    }

    std::size_t nodes() const { return parent_.size(); }

private:
    int new_node() {
        if (parent_.size() >= budget_)
            throw Undecided("tensor saturation exceeded the node budget of " + std::to_string(budget_));
        int id = static_cast<int>(parent_.size());
        parent_.push_back(id);
        table_.resize(table_.size() + g_, -1);
        return id;
    }

    int step(int u, int gi) {
        u = find(u);
        int v = table_[static_cast<std::size_t>(u) * g_ + gi];
        if (v >= 0) return find(v);
        int w = new_node();
        table_[static_cast<std::size_t>(u) * g_ + gi] = w;
        return w;
    }

    int trace(int u, const std::vector<int>& word) {
        for (int gi : word) u = step(u, gi);
        return find(u);
    }

    void coincide(int a, int b) {
        std::deque<std::pair<int, int>> q{{a, b}};
        while (!q.empty()) {
            auto [x, y] = q.front();
            q.pop_front();
            x = find(x);
            y = find(y);
            if (x == y) continue;
            if (x > y) std::swap(x, y);
            parent_[y] = x;
            for (std::size_t gi = 0; gi < g_; ++gi) {
                int ty = table_[static_cast<std::size_t>(y) * g_ + gi];
                if (ty < 0) continue;
                int& tx = table_[static_cast<std::size_t>(x) * g_ + gi];
                if (tx < 0) tx = ty;
                else q.emplace_back(tx, ty);
            }
        }
    }

    std::size_t g_;
    std::size_t budget_;
    std::vector<int> parent_;
    std::vector<int> table_;
    std::vector<std::pair<std::vector<int>, std::vector<int>>> rels_;
};

}  // namespace

SaturatedTensor saturate_tensor(const FModPtr& mp, const FModPtr& np, std::size_t budget) {
    const auto& M = *mp;
    const auto& N = *np;
    if (!same_semiring(M.base(), N.base())) throw InputError("tensor: base semirings differ");
    const int a = static_cast<int>(M.size());
    const int b = static_cast<int>(N.size());

    // Only symbols g (x) n with g in a generating set of M are kept: every
    // m (x) n is rewritten through a fixed expression m = sum g_i s_i as
    // sum g_i (x) s_i n (a Tietze transformation of the full presentation).
    const auto gens = module_generators(M);
    const int ng = static_cast<int>(gens.size());
    std::vector<Scalar> sc = M.nat_base() ? std::vector<Scalar>{1} : M.scalars();
    sc.erase(std::remove(sc.begin(), sc.end(), Scalar{0}), sc.end());
    std::vector<std::vector<std::pair<int, Scalar>>> rep(a);
    {
        std::vector<char> seen(a, 0);
        std::vector<Index> queue{0};
        seen[0] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            Index x = queue[qi];
            for (int gi = 0; gi < ng; ++gi)
                for (Scalar s : sc) {
                    Index y = M.add(x, M.ract(gens[gi], s));
                    if (seen[y]) continue;
                    seen[y] = 1;
                    rep[y] = rep[x];
                    rep[y].emplace_back(gi, s);
                    queue.push_back(y);
                }
        }
    }
    auto act = [&](Scalar s, Index n) { return M.nat_base() ? n : N.lact(s, n); };
    auto sym = [&](int gi, Index n) { return gi * (b - 1) + (n - 1); };
    const int g = ng * (b - 1);
    auto word = [&](Index m, Index n) {
        std::vector<int> w;
        for (auto [gi, s] : rep[m]) {
            Index k = act(s, n);
            if (k != 0) w.push_back(sym(gi, k));
        }
        std::sort(w.begin(), w.end());
        return w;
    };

    SaturatedTensor out;
    out.left = mp;
    out.right = np;

    Enumerator en(static_cast<std::size_t>(g), budget);
    for (int x = 0; x < g; ++x)
        for (int y = x + 1; y < g; ++y) en.add_relation({x, y}, {y, x});
    for (Index x = 0; x < a; ++x)
        for (int gi = 0; gi < ng; ++gi)
            for (Scalar s : sc) {
                Index y = M.add(x, M.ract(gens[gi], s));
                for (Index n = 1; n < b; ++n) {
                    auto l = word(y, n);
                    auto r = word(x, n);
                    Index k = act(s, n);
                    if (k != 0) r.push_back(sym(gi, k));
                    std::sort(r.begin(), r.end());
                    if (l != r) en.add_relation(std::move(l), std::move(r));
                }
            }
    for (int gi = 0; gi < ng; ++gi)
        for (Index n = 1; n < b; ++n)
            for (Index n2 = n; n2 < b; ++n2) {
                Index k = N.add(n, n2);
                std::vector<int> l = k ? std::vector<int>{sym(gi, k)} : std::vector<int>{};
                en.add_relation(std::move(l), {sym(gi, n), sym(gi, n2)});
            }
    en.run();
    out.nodes_used = en.nodes();

    // Renumber live nodes breadth-first from 0; the BFS tree gives
    // shortlex-least words as normal forms.
    std::vector<int> id(en.nodes(), -1);
    std::vector<int> order;
    std::vector<std::vector<int>> words;
    id[en.find(0)] = 0;
    order.push_back(en.find(0));
    words.push_back({});
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int u = order[qi];
        for (int gi = 0; gi < g; ++gi) {
            int v = en.edge(u, gi);
            if (v < 0) throw std::logic_error("incomplete saturation table");
            if (id[v] < 0) {
                id[v] = static_cast<int>(order.size());
                order.push_back(v);
                auto w = words[qi];
                w.push_back(gi);
                words.push_back(std::move(w));
            }
        }
    }
    const int k = static_cast<int>(order.size());
    auto add_gen = [&](int cls, int gi) { return id[en.edge(order[cls], gi)]; };
    auto follow = [&](int cls, const std::vector<int>& w) {
        for (int gi : w) cls = add_gen(cls, gi);
        return cls;
    };
    auto unsym = [&](int x) { return std::make_pair(gens[x / (b - 1)], Index(x % (b - 1) + 1)); };

    out.normal_form.resize(k);
    std::vector<std::string> names(k);
    for (int c = 0; c < k; ++c) {
        std::string nm;
        for (int gi : words[c]) {
            auto [m, n] = unsym(gi);
            out.normal_form[c].emplace_back(m, n);
            if (!nm.empty()) nm += "+";
            nm += M.name(m) + "⊗" + N.name(n);
        }
        names[c] = nm.empty() ? "0" : nm;
    }
    std::vector<Index> add(static_cast<std::size_t>(k) * k);
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) add[static_cast<std::size_t>(x) * k + y] = follow(x, words[y]);

    out.pure.assign(static_cast<std::size_t>(a) * b, 0);
    for (Index m = 1; m < a; ++m)
        for (Index n = 1; n < b; ++n) out.pure[m * b + n] = follow(0, word(m, n));

    const int ns = M.nat_base() ? 0 : static_cast<int>(M.base()->size());
    std::vector<Index> ract(static_cast<std::size_t>(k) * ns), lact(static_cast<std::size_t>(k) * ns);
    for (int c = 0; c < k; ++c)
        for (int s = 0; s < ns; ++s) {
            Index r = 0, l = 0;
            for (auto [m, n] : out.normal_form[c]) {
                r = add[static_cast<std::size_t>(r) * k + out.pure[m * b + N.ract(n, s)]];
                l = add[static_cast<std::size_t>(l) * k + out.pure[M.lact(s, m) * b + n]];
            }
            ract[static_cast<std::size_t>(c) * ns + s] = r;
            lact[static_cast<std::size_t>(s) * k + c] = l;
        }
    out.result = std::make_shared<const FiniteModule>(M.base(), std::move(names), std::move(add), std::move(ract),
                                                      std::move(lact));
    return out;
}

FiniteMap saturated_tensor_map(const SaturatedTensor& src, const SaturatedTensor& dst, const FiniteMap& f,
                               const FiniteMap& g) {
    const auto& T = *dst.result;
    FiniteMap h{src.result, dst.result, std::vector<Index>(src.result->size(), 0)};
    for (std::size_t c = 0; c < src.normal_form.size(); ++c) {
        Index v = 0;
        for (auto [m, n] : src.normal_form[c]) v = T.add(v, dst.pure_of(f(m), g(n)));
        h.img[c] = v;
    }
    // well-definedness: every pure tensor must map consistently
    for (Index m = 0; m < static_cast<Index>(src.left->size()); ++m)
        for (Index n = 0; n < static_cast<Index>(src.right->size()); ++n)
            if (h.img[src.pure_of(m, n)] != dst.pure_of(f(m), g(n)))
                throw std::logic_error("tensor of maps is not well defined at " + src.left->name(m) + "⊗" +
                                       src.right->name(n));
    if (!check_linear(h).ok()) throw std::logic_error("tensor of maps is not additive");
    return h;
}

Subset pure_span(const SaturatedTensor& t, const Subset& left_part, const Subset& right_part) {
    std::vector<Index> gens;
    for (Index m : left_part.elements())
        for (Index n : right_part.elements()) gens.push_back(t.pure_of(m, n));
    return generated(t.result, gens);
}

}  // namespace semialg
