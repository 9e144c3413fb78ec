// Acceptance gate: one line per criterion, exit status 1 if any is red.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "semialg/comodule.hpp"
#include "semialg/enumerate.hpp"
#include "support.hpp"

using namespace semialg;
using namespace support;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool ok = true;
    std::string detail;
};

int failures = 0;

// limit_s = 0: exact criterion without a time bound
template <class F>
void criterion(int n, const char* title, double limit_s, F body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit_s == 0 || s < limit_s;
    if (!in_time) o.detail += (o.detail.empty() ? "" : "; ") + std::string("over the time limit");
    const bool ok = o.ok && in_time;
    failures += !ok;
    char t[64];
    if (limit_s > 0) std::snprintf(t, sizeof t, "%.1fs < %.0fs", s, limit_s);
    else std::snprintf(t, sizeof t, "%.1fs", s);
    std::cout << (ok ? "PASS" : "FAIL") << "  " << n << ". " << title << " [" << t << "] " << o.detail << std::endl;
}

SemiringPtr B() { return builtin_semiring("BOOL"); }
SemiringPtr Z(int n) { return builtin_semiring("ZMOD", n); }

void merge_sweep(Outcome& o, const Sweep& s, const std::string& label, int& cases) {
    cases += s.cases;
    if (!s.ok() && o.ok) o = {false, label + ": " + s.failure};
}

MeasuringPairing star_pairing(const CoringPtr& c) { return dual_pairing(dual_semiring(c, DualSide::Left)); }

struct Run {
    int status = -1;
    std::string out;
};

Run shell(const std::string& cmd) {
    Run r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string strip_time(const std::string& jsonl) {
    std::istringstream in(jsonl);
    std::string line, out;
    while (std::getline(in, line)) {
        auto j = nlohmann::ordered_json::parse(line);
        j.erase("time_ms");
        out += j.dump() + "\n";
    }
    return out;
}

}  // namespace

int main() {
    criterion(1, "gallery corings pass; single-entry mutants fail with witnesses", 60, [] {
        Outcome o;
        int corings = 0, killed = 0;
        for (const auto& e : gallery()) {
            ++corings;
            auto r = check_semicoring(*e.coring);
            if (!r.ok() && o.ok) o = {false, e.coring->name + ": " + r.first_failure()->name};
            for (const auto& x : classify_mutations(*e.coring)) {
                if (!x.expected_invalid) continue;
                auto m = check_semicoring(*x.mutation.coring);
                const Check* f = m.first_failure();
                if (!f || f->witness.empty()) {
                    if (o.ok) o = {false, x.mutation.description + " not caught"};
                    continue;
                }
                ++killed;
            }
        }
        if (killed < 20 && o.ok) o = {false, "only " + std::to_string(killed) + " mutants"};
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(corings) + " corings, " + std::to_string(killed) +
                   " mutants rejected";
        return o;
    });

    criterion(2, "rule tensor ≅ saturation at size ≤ 6; saturation ≅ oracle at |M|,|N| ≤ 4", 120, [] {
        Outcome o;
        int cases = 0;
        merge_sweep(o, rule_vs_saturation(6, 4), "rules", cases);
        for (const auto& s : {B(), Z(2), Z(3)}) merge_sweep(o, saturation_vs_oracle(s, 4), s->name(), cases);
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(cases) + " pairs";
        return o;
    });

    criterion(3, "M⊗S ≅ M ≅ S⊗M and M⊠S ≅ c(M) on gallery modules", 0, [] {
        Outcome o;
        int n = 0;
        for (const auto& m : gallery_modules()) {
            ++n;
            if (auto e = unit_laws(m); e && o.ok) o = {false, m->describe() + ": " + *e};
        }
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(n) + " modules";
        return o;
    });

    criterion(4, "exactness taxonomy over BOOL and ZMOD(2), |M| ≤ 4", 120, [] {
        Outcome o;
        std::size_t seqs = 0, exact = 0;
        int cases = 0;
        for (const auto& s : {B(), Z(2)}) {
            auto r = exactness_sweep(s, 4);
            seqs += r.sequences;
            exact += r.exact_sequences;
            merge_sweep(o, r.first_iso, s->name() + " 0→L̄→M→M/L→0", cases);
            merge_sweep(o, r.item1, s->name() + " item 1", cases);
            merge_sweep(o, r.item2, s->name() + " item 2", cases);
            merge_sweep(o, r.item5, s->name() + " item 5", cases);
        }
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(cases) + " cases, " + std::to_string(seqs) +
                   " sequences (" + std::to_string(exact) + " exact)";
        return o;
    });

    criterion(5, "Ker(π_K⊗π_M) closure formula, ≤ 4 elements per factor", 0, [] {
        Outcome o;
        int cases = 0;
        for (const auto& s : {B(), Z(2), Z(3), builtin_semiring("NAT")}) merge_sweep(o, bou_sweep(s, 4), s->name(), cases);
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(cases) + " instances";
        return o;
    });

    criterion(6, "gallery duals are semirings; *grouplike(BOOL,{x,y}) ≅ BOOL²", 0, [] {
        Outcome o;
        int duals = 0;
        for (const auto& e : gallery()) {
            if (!e.coring->base->is_finite()) continue;
            for (auto side : {DualSide::Left, DualSide::Right, DualSide::Two}) {
                ++duals;
                auto r = check_dual(dual_semiring(e.coring, side));
                if (!r.ok() && o.ok) o = {false, e.coring->name + " " + dual_side_name(side) + ": " + r.first_failure()->name};
            }
        }
        auto d = dual_semiring(grouplike(B(), {"x", "y"}), DualSide::Left);
        auto iso = find_semiring_isomorphism(d.semiring, product_semiring(B(), 2));
        std::string w;
        if (!iso || !check_semiring_morphism(*iso).ok()) {
            if (o.ok) o = {false, "no isomorphism onto BOOL²"};
        } else {
            for (std::size_t i = 0; i < d.tables.elements.size(); ++i)
                w += (i ? ", " : "") + d.tables.elements[i] + "↦" + iso->target->show((*iso)(static_cast<Scalar>(i)));
        }
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(duals) + " duals; witness " + w;
        return o;
    });

    criterion(7, "two coactions on ℕ₀⊕ℤ/4, mono-flat probe false", 10, [] {
        auto t = two_coactions_counterexample(4);
        Outcome o;
        if (!t.report.ok()) o = {false, t.report.first_failure()->name + ": " + t.report.first_failure()->witness};
        if (t.mono_flat.mono_flat && o.ok) o = {false, "probe returned mono-flat"};
        if (t.mono_flat.witness.empty() && o.ok) o = {false, "probe gave no witness"};
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(t.report.checks.size()) + " checks; witness " +
                   t.mono_flat.witness;
        return o;
    });

    criterion(8, "rational suite for (*C, C), C = grouplike(BOOL,{x,y})", 300, [] {
        Outcome o;
        auto c = grouplike(B(), {"x", "y"});
        auto p = star_pairing(c);
        auto family = enumerate_modules(p.algebra, 4);
        auto r = rat_property_suite(p, family);
        if (!r.ok()) o = {false, r.first_failure()->name + ": " + r.first_failure()->witness};
        std::size_t q2 = 0;
        for (const auto& m : family) {
            ++q2;
            auto q = q2_criterion(p.as_pairing(), as_structured(p.restrict(m)));
            if (!q.ok() && o.ok) o = {false, "q-2: " + q.first_failure()->witness};
        }
        auto d = rat_of_dual(p);
        if (!d.ok() && o.ok) o = {false, "Rat(𝒜*): " + d.first_failure()->name};
        std::vector<ComodulePtr> comodules{regular_comodule(c)};
        for (const auto& x : enumerate_modules(B(), 4)) comodules.push_back(cofree_comodule(as_structured(x), c));
        for (const auto& m : comodules) {
            auto rt = rational_round_trip(p, *m);
            if (!rt.ok() && o.ok) o = {false, "round trip " + m->name + ": " + rt.first_failure()->name};
        }
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(family.size()) + " 𝒜-modules, " +
                   std::to_string(r.checks.size()) + " suite checks, " + std::to_string(comodules.size()) +
                   " round trips";
        return o;
    });

    criterion(9, "coequalizers and equalizers of colinear pairs; refusal on the counterexample", 0, [] {
        Outcome o;
        int pairs = 0;
        for (const auto& e : gallery()) {
            const auto& c = e.coring;
            if (!c->carrier->at_most(64) || e.key == "counterexample") continue;
            auto reg = regular_comodule(c);
            std::vector<ComodulePtr> others{reg};
            for (const auto& x : enumerate_modules(c->base, 2)) others.push_back(cofree_comodule(as_structured(x), c));
            auto ends = colinear_maps(*reg, *reg);
            std::size_t used = 0;
            for (std::size_t i = 0; i < ends.size() && used < 16; ++i)
                for (std::size_t j = i; j < ends.size() && used < 16; ++j, ++used) {
                    ++pairs;
                    const auto& f = ends[i];
                    const auto& g = ends[j];
                    auto q = comodule_coequalizer(f, g, *reg, *reg, others);
                    if (!q.report.ok() && o.ok) o = {false, c->name + " coequalizer: " + q.report.first_failure()->name};
                    auto cert = equalizer_certificate(f, g, *reg);
                    if (!cert.mono_flat) {
                        if (o.ok) o = {false, c->name + ": certificate refused a flat pair"};
                        continue;
                    }
                    auto eq = comodule_equalizer(f, g, *reg, *reg, cert, others);
                    if ((eq.refused || !eq.report.ok()) && o.ok)
                        o = {false, c->name + " equalizer: " + (eq.refused ? eq.reason : eq.report.first_failure()->name)};
                }
        }
        if (pairs < 50 && o.ok) o = {false, "only " + std::to_string(pairs) + " pairs"};
        auto t = two_coactions_counterexample(4);
        auto id = map_identity(t.rho1->carrier);
        auto ref = comodule_equalizer(id, id, *t.rho1, *t.rho1, t.mono_flat);
        if (!ref.refused && o.ok) o = {false, "equalizer not refused for the counterexample"};
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(pairs) + " pairs; refusal: " + ref.reason;
        return o;
    });

    criterion(10, "CLI exit codes, witnesses and byte-stable reports", 0, [] {
        namespace fs = std::filesystem;
        const std::string cli = SEMIALG_CLI;
        const fs::path fx = SEMIALG_FIXTURES;
        Outcome o;
        auto g = shell(cli + " gallery --format jsonl");
        if (g.status != 0) o = {false, "gallery exited " + std::to_string(g.status)};
        int fixtures = 0;
        std::vector<fs::path> files;
        for (const auto& f : fs::directory_iterator(fx / "mutations")) files.push_back(f.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            ++fixtures;
            auto r = shell(cli + " report --format jsonl " + f.string());
            bool witness = false;
            std::istringstream in(r.out);
            for (std::string line; std::getline(in, line);) {
                const auto rec = nlohmann::json::parse(line);
                for (const auto& ch : rec["checks"])
                    witness = witness || (!ch["ok"].get<bool>() && !ch.value("witness", std::string{}).empty());
            }
            if ((r.status != 1 || !witness) && o.ok)
                o = {false, f.filename().string() + " exited " + std::to_string(r.status) + (witness ? "" : " without witness")};
        }
        if (fixtures < 20 && o.ok) o = {false, "only " + std::to_string(fixtures) + " mutation fixtures"};
        auto st = shell(cli + " --budget 10 report " + (fx / "starved_tensor.json").string());
        if (st.status != 2 && o.ok) o = {false, "starved tensor exited " + std::to_string(st.status)};
        const std::string doc = (fx / "gallery.json").string();
        auto a = shell(cli + " report --format jsonl " + doc), b = shell(cli + " report --format jsonl " + doc);
        if ((a.status != 0 || strip_time(a.out) != strip_time(b.out)) && o.ok) o = {false, "reports differ between runs"};
        auto g2 = shell(cli + " gallery --format jsonl");
        if (strip_time(g.out) != strip_time(g2.out) && o.ok) o = {false, "gallery reports differ between runs"};
        o.detail = (o.ok ? "" : o.detail + "; ") + std::to_string(fixtures) + " mutation fixtures";
        return o;
    });

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria pass")) << std::endl;
    return failures ? 1 : 0;
}
