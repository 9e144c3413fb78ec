#include "semialg/io.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace semialg::io {

DocumentError::DocumentError(std::vector<ParseError> e)
    : InputError(e.empty() ? "invalid document" : e.front().message), errors(std::move(e)) {}

std::string format_errors(const DocumentError& e, const std::string& source) {
    std::string out;
    for (const auto& x : e.errors)
        out += source + ":" + std::to_string(x.pos.line) + ":" + std::to_string(x.pos.column) + ": " + x.message + "\n";
    return out;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Semiring: return "semiring";
        case Kind::Module: return "module";
        case Kind::Map: return "map";
        case Kind::Coring: return "coring";
        case Kind::Comodule: return "comodule";
        case Kind::Pairing: return "pairing";
    }
    return "?";
}

bool Document::has(const std::string& name) const {
    for (const auto& [k, n] : order)
        if (n == name) return true;
    return false;
}

namespace {

// ---- JSON with positions ---------------------------------------------------------

// Records where the current token starts: the first character after the last
// SAX event that is not whitespace or punctuation.
struct Tracker {
    const char* begin = nullptr;
    std::size_t start = 0;
    bool armed = true;
};

class CountingIter {
public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    CountingIter() = default;
    CountingIter(const char* p, Tracker* t) : p_(p), t_(t) {}
    reference operator*() const { return *p_; }
    CountingIter& operator++() {
        const char c = *p_;
        if (t_->armed && c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != ',' && c != ':') {
            t_->start = static_cast<std::size_t>(p_ - t_->begin);
            t_->armed = false;
        }
        ++p_;
        return *this;
    }
    CountingIter operator++(int) {
        auto old = *this;
        ++*this;
        return old;
    }
    bool operator==(const CountingIter& o) const { return p_ == o.p_; }
    bool operator!=(const CountingIter& o) const { return p_ != o.p_; }

private:
    const char* p_ = nullptr;
    Tracker* t_ = nullptr;
};

Position position_of(std::string_view text, std::size_t offset) {
    Position p{1, 1};
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c == '\n') {
            ++p.line;
            p.column = 1;
        } else if ((c & 0xC0) != 0x80) {
            ++p.column;
        }
    }
    return p;
}

std::string escape_token(const std::string& k) {
    std::string out;
    for (char c : k) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

class PositionSax : public nlohmann::json_sax<Json> {
public:
    PositionSax(std::string_view text, Tracker& t, std::map<std::string, Position>& pos)
        : text_(text), t_(t), pos_(pos) {}

    Json root;
    std::optional<ParseError> error;

    bool null() override { return value(nullptr); }
    bool boolean(bool v) override { return value(v); }
    bool number_integer(number_integer_t v) override { return value(v); }
    bool number_unsigned(number_unsigned_t v) override { return value(v); }
    bool number_float(number_float_t v, const string_t&) override { return value(v); }
    bool string(string_t& v) override { return value(v); }
    bool binary(binary_t&) override { return value(nullptr); }
    bool start_object(std::size_t) override { return open(Json::object()); }
    bool key(string_t& k) override {
        key_ = k;
        t_.armed = true;
        return true;
    }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override { return open(Json::array()); }
    bool end_array() override { return close(); }
    bool parse_error(std::size_t at, const std::string&, const nlohmann::detail::exception& ex) override {
        std::string msg = ex.what();
        if (auto k = msg.find(": "); k != std::string::npos && msg.rfind("[json.exception", 0) == 0)
            msg = msg.substr(k + 2);
        error = ParseError{position_of(text_, at == 0 ? 0 : at - 1), "malformed JSON: " + msg};
        return false;
    }

private:
    std::pair<Json*, std::string> place(Json v) {
        Json* slot = nullptr;
        std::string ptr;
        if (stack_.empty()) {
            root = std::move(v);
            slot = &root;
        } else if (stack_.back()->is_array()) {
            stack_.back()->push_back(std::move(v));
            slot = &stack_.back()->back();
            ptr = paths_.back() + "/" + std::to_string(stack_.back()->size() - 1);
        } else {
            (*stack_.back())[key_] = std::move(v);
            slot = &(*stack_.back())[key_];
            ptr = paths_.back() + "/" + escape_token(key_);
        }
        pos_[ptr] = position_of(text_, t_.start);
        t_.armed = true;
        return {slot, ptr};
    }
    bool value(Json v) {
        place(std::move(v));
        return true;
    }
    bool open(Json v) {
        auto [slot, ptr] = place(std::move(v));
        stack_.push_back(slot);
        paths_.push_back(ptr);
        return true;
    }
    bool close() {
        stack_.pop_back();
        paths_.pop_back();
        t_.armed = true;
        return true;
    }

    std::string_view text_;
    Tracker& t_;
    std::map<std::string, Position>& pos_;
    std::vector<Json*> stack_;
    std::vector<std::string> paths_;
    std::string key_;
};

// ---- shared element plumbing -------------------------------------------------------

// Generators in map_from_images order: one per monogenic atom, every element of a TABLE.
std::vector<std::vector<Elem>> slots(const Module& m) {
    std::vector<std::vector<Elem>> out;
    for (std::size_t i = 0; i < m.rank(); ++i) {
        const auto& at = m.atoms()[i];
        std::vector<Elem> s;
        if (at.kind == AtomKind::QmodZ) throw Unsupported("QMODZ atoms have no finite list of generators");
        if (at.kind == AtomKind::Table) {
            for (std::size_t k = 0; k < at.table->size(); ++k) s.push_back(m.inject(i, Val{static_cast<std::int64_t>(k), 1}));
        } else {
            s.push_back(m.inject(i, m.atom_one(i)));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::size_t slot_count(const Module& m) {
    std::size_t n = 0;
    for (const auto& s : slots(m)) n += s.size();
    return n;
}

template <class T>
std::vector<std::vector<T>> nest(const Module& m, const std::vector<T>& flat) {
    std::vector<std::vector<T>> out;
    std::size_t k = 0;
    for (const auto& s : slots(m)) {
        out.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(k), flat.begin() + static_cast<std::ptrdiff_t>(k + s.size()));
        k += s.size();
    }
    return out;
}

Json scalar_json(const Semiring& s, Scalar x) {
    if (!s.is_finite()) return Json(x);
    return Json(s.show(x));
}

std::optional<Scalar> scalar_from(const Semiring& s, const Json& j) {
    if (j.is_number_integer()) {
        const auto v = j.get<std::int64_t>();
        if (!s.is_finite()) return v < 0 ? std::nullopt : std::optional<Scalar>(v);
        return s.parse(std::to_string(v));
    }
    if (j.is_string()) {
        if (!s.is_finite()) {
            try {
                std::size_t p = 0;
                long long v = std::stoll(j.get<std::string>(), &p);
                if (p == j.get<std::string>().size() && v >= 0) return v;
            } catch (...) {
            }
            return std::nullopt;
        }
        return s.parse(j.get<std::string>());
    }
    return std::nullopt;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

Elem parse_labeled(const Module& m, const std::vector<std::string>& labels, const std::string& text) {
    if (!labels.empty()) {
        const std::string t = trim(text);
        if (t == "0") return m.zero();
        // x, 2·x, x+y
        Elem acc = m.zero();
        bool all = true;
        std::size_t at = 0;
        while (at <= t.size()) {
            auto plus = t.find('+', at);
            const std::string part = trim(t.substr(at, plus == std::string::npos ? std::string::npos : plus - at));
            std::string coef, lab = part;
            const std::string dot = "·";
            if (auto d = part.find(dot); d != std::string::npos) {
                coef = trim(part.substr(0, d));
                lab = trim(part.substr(d + dot.size()));
            }
            auto it = std::find(labels.begin(), labels.end(), lab);
            if (it == labels.end()) {
                all = false;
                break;
            }
            const auto i = static_cast<std::size_t>(it - labels.begin());
            Elem e = m.inject(i, m.atom_one(i));
            if (!coef.empty()) {
                auto s = scalar_from(*m.base(), Json(coef));
                if (!s) {
                    all = false;
                    break;
                }
                e = m.ract(e, *s);
            }
            acc = m.add(acc, e);
            if (plus == std::string::npos) break;
            at = plus + 1;
        }
        if (all) return acc;
    }
    return m.parse(text);
}

// ---- the document builder ----------------------------------------------------------

struct Fail {
    std::string ptr;
    std::string message;
};
struct Skip {};

const std::set<std::string> kVerbs{"validate", "tensor", "dual", "coideal", "rational", "exact", "gallery"};

class Builder {
public:
    Builder(Document& d, const std::map<std::string, Position>& pos) : d_(d), pos_(pos) {}

    std::vector<ParseError> errors;

    void run(const Json& root) {
        if (root.is_object()) {
            declaration(root, "");
        } else if (root.is_array()) {
            for (std::size_t i = 0; i < root.size(); ++i) declaration(root[i], "/" + std::to_string(i));
        } else {
            errors.push_back({at(""), "a document is an array of declarations"});
        }
    }

private:
    Position at(const std::string& ptr) const {
        std::string p = ptr;
        while (true) {
            if (auto it = pos_.find(p); it != pos_.end()) return it->second;
            if (p.empty()) return {1, 1};
            p = p.substr(0, p.rfind('/'));
        }
    }

    [[noreturn]] static void fail(const std::string& ptr, std::string msg) { throw Fail{ptr, std::move(msg)}; }

    static std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + escape_token(key); }
    static std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

    const Json& need(const Json& o, const std::string& ptr, const std::string& key) {
        if (!o.contains(key)) fail(ptr, "missing \"" + key + "\"");
        return o.at(key);
    }
    std::string str(const Json& o, const std::string& ptr, const std::string& key) {
        const Json& v = need(o, ptr, key);
        if (!v.is_string()) fail(child(ptr, key), "\"" + key + "\" should be a string");
        return v.get<std::string>();
    }
    int integer(const Json& o, const std::string& ptr, const std::string& key, int lo, int hi) {
        const Json& v = need(o, ptr, key);
        if (!v.is_number_integer()) fail(child(ptr, key), "\"" + key + "\" should be an integer");
        const auto x = v.get<long long>();
        if (x < lo || x > hi)
            fail(child(ptr, key), "\"" + key + "\" out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(x);
    }
    const Json& array(const Json& o, const std::string& ptr, const std::string& key) {
        const Json& v = need(o, ptr, key);
        if (!v.is_array()) fail(child(ptr, key), "\"" + key + "\" should be an array");
        return v;
    }

    void check_kind(const std::string& name, Kind k, const std::string& ptr) {
        if (broken_.count(name)) throw Skip{};
        for (const auto& [kk, n] : d_.order)
            if (n == name) {
                if (kk != k) fail(ptr, "'" + name + "' is a " + kind_name(kk) + ", not a " + kind_name(k));
                return;
            }
        fail(ptr, std::string("unknown ") + kind_name(k) + " '" + name + "'");
    }
    SemiringPtr semiring_ref(const Json& o, const std::string& ptr, const std::string& key) {
        auto n = str(o, ptr, key);
        check_kind(n, Kind::Semiring, child(ptr, key));
        return d_.semirings.at(n);
    }
    ModPtr module_ref(const Json& o, const std::string& ptr, const std::string& key) {
        auto n = str(o, ptr, key);
        check_kind(n, Kind::Module, child(ptr, key));
        return d_.modules.at(n);
    }
    CoringPtr coring_ref(const Json& o, const std::string& ptr, const std::string& key) {
        auto n = str(o, ptr, key);
        check_kind(n, Kind::Coring, child(ptr, key));
        return d_.corings.at(n);
    }

    void declare(Kind k, const std::string& name, const std::string& ptr) {
        if (d_.has(name) || broken_.count(name)) fail(ptr, "'" + name + "' is declared twice");
        d_.order.emplace_back(k, name);
    }

    void declaration(const Json& decl, const std::string& ptr) {
        std::string name;
        try {
            if (!decl.is_object() || decl.size() != 1) fail(ptr, "a declaration is an object with a single key");
            const std::string key = decl.begin().key();
            const Json& body = decl.begin().value();
            const std::string bp = child(ptr, key);
            if (!body.is_object()) fail(bp, "\"" + key + "\" should be an object");
            if (key == "command") {
                command(body, bp);
                return;
            }
            name = str(body, bp, "name");
            if (name.empty()) fail(child(bp, "name"), "empty name");
            if (d_.has(name) || broken_.count(name)) fail(child(bp, "name"), "'" + name + "' is declared twice");
            try {
                if (key == "semiring") semiring(name, body, bp);
                else if (key == "module") module(name, body, bp);
                else if (key == "map") map(name, body, bp);
                else if (key == "coring") coring(name, body, bp);
                else if (key == "comodule") comodule(name, body, bp);
                else if (key == "pairing") pairing(name, body, bp);
                else fail(child(ptr, key), "unknown declaration \"" + key + "\"");
            } catch (const InputError& e) {
                fail(bp, e.what());
            } catch (const Unsupported& e) {
                fail(bp, e.what());
            } catch (const Undecided& e) {
                fail(bp, std::string("undecided: ") + e.what());
            }
        } catch (const Fail& f) {
            errors.push_back({at(f.ptr), f.message});
            if (!name.empty()) broken_.insert(name);
        } catch (const Skip&) {
            if (!name.empty()) broken_.insert(name);
        }
    }

    void semiring(const std::string& name, const Json& b, const std::string& ptr) {
        SemiringPtr s;
        if (b.contains("builtin")) {
            const auto tag = str(b, ptr, "builtin");
            int n = 0;
            if (b.contains("n")) n = integer(b, ptr, "n", 0, 1 << 20);
            try {
                s = builtin_semiring(tag, n);
            } catch (const InputError& e) {
                fail(child(ptr, "builtin"), e.what());
            }
        } else if (b.contains("product")) {
            auto base = semiring_ref(b, ptr, "product");
            s = product_semiring(base, integer(b, ptr, "k", 1, 8));
        } else if (b.contains("elements")) {
            SemiringTables t;
            t.name = name;
            t.elements = names(b, ptr, "elements");
            const int n = static_cast<int>(t.elements.size());
            if (n == 0) fail(child(ptr, "elements"), "no elements");
            auto lookup = [&](const Json& v, const std::string& p) {
                if (!v.is_string()) fail(p, "entries are element names");
                auto it = std::find(t.elements.begin(), t.elements.end(), v.get<std::string>());
                if (it == t.elements.end()) fail(p, "unknown element '" + v.get<std::string>() + "'");
                return static_cast<int>(it - t.elements.begin());
            };
            t.add = square(b, ptr, "add", n, n, lookup);
            t.mul = square(b, ptr, "mul", n, n, lookup);
            t.zero = b.contains("zero") ? lookup(b.at("zero"), child(ptr, "zero")) : 0;
            t.one = b.contains("one") ? lookup(b.at("one"), child(ptr, "one")) : std::min(1, n - 1);
            s = make_semiring(Semiring::from_tables(t));
        } else {
            fail(ptr, "a semiring needs \"builtin\", \"product\" or \"elements\"");
        }
        declare(Kind::Semiring, name, ptr);
        d_.semirings[name] = s;
    }

    std::vector<std::string> names(const Json& o, const std::string& ptr, const std::string& key) {
        const Json& a = array(o, ptr, key);
        std::vector<std::string> out;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_string()) fail(child(child(ptr, key), i), "expected a string");
            out.push_back(a[i].get<std::string>());
        }
        return out;
    }

    template <class F>
    std::vector<std::vector<int>> square(const Json& o, const std::string& ptr, const std::string& key, int rows,
                                         int cols, F lookup) {
        const Json& a = array(o, ptr, key);
        const std::string kp = child(ptr, key);
        if (static_cast<int>(a.size()) != rows)
            fail(kp, "\"" + key + "\" has " + std::to_string(a.size()) + " rows, expected " + std::to_string(rows));
        std::vector<std::vector<int>> out(rows);
        for (int r = 0; r < rows; ++r) {
            const Json& row = a[r];
            const std::string rp = child(kp, static_cast<std::size_t>(r));
            if (!row.is_array() || static_cast<int>(row.size()) != cols)
                fail(rp, "row " + std::to_string(r) + " of \"" + key + "\" should have " + std::to_string(cols) + " entries");
            for (int c = 0; c < cols; ++c) out[r].push_back(lookup(row[c], child(rp, static_cast<std::size_t>(c))));
        }
        return out;
    }

    Atom atom(const Json& v, const std::string& p, const SemiringPtr& base) {
        if (v.is_object()) {
            auto t = module_ref(v, p, "table");
            if (t->rank() != 1 || t->atoms()[0].kind != AtomKind::Table)
                fail(child(p, "table"), "'" + v.at("table").get<std::string>() + "' is not a table module");
            return t->atoms()[0];
        }
        if (!v.is_string()) fail(p, "an atom is a name or {\"table\": module}");
        std::string s = v.get<std::string>();
        for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (s == "REGULAR" || s == "NAT") {
            if (s == "NAT" && base->is_finite()) fail(p, "NAT atoms live over NAT");
            return regular_atom();
        }
        if (s == "BOOL" || s == "BOOLEAN") return boolean_atom();
        if (s == "QMODZ") return qmodz_atom();
        if (s.rfind("CYCLIC", 0) == 0) {
            std::string n = trim(s.substr(6));
            if (!n.empty() && n.front() == '(' && n.back() == ')') n = trim(n.substr(1, n.size() - 2));
            try {
                std::size_t q = 0;
                int k = std::stoi(n, &q);
                if (q == n.size() && k >= 1) return cyclic_atom(k);
            } catch (...) {
            }
            fail(p, "CYCLIC needs a positive order");
        }
        fail(p, "unknown atom '" + v.get<std::string>() + "'");
    }

    void module(const std::string& name, const Json& b, const std::string& ptr) {
        auto base = semiring_ref(b, ptr, "base");
        ModPtr m;
        if (b.contains("atoms")) {
            const Json& a = array(b, ptr, "atoms");
            std::vector<Atom> atoms;
            for (std::size_t i = 0; i < a.size(); ++i) atoms.push_back(atom(a[i], child(child(ptr, "atoms"), i), base));
            m = make_module(base, atoms);
        } else if (b.contains("free")) {
            m = free_structured(base, integer(b, ptr, "free", 0, 16));
        } else if (b.contains("elements")) {
            ModuleTables t;
            t.elements = names(b, ptr, "elements");
            const int n = static_cast<int>(t.elements.size());
            if (n == 0) fail(child(ptr, "elements"), "no elements");
            auto lookup = [&](const Json& v, const std::string& p) {
                if (!v.is_string()) fail(p, "entries are element names");
                auto it = std::find(t.elements.begin(), t.elements.end(), v.get<std::string>());
                if (it == t.elements.end()) fail(p, "unknown element '" + v.get<std::string>() + "'");
                return static_cast<int>(it - t.elements.begin());
            };
            t.add = square(b, ptr, "add", n, n, lookup);
            if (base->is_finite()) {
                const int k = static_cast<int>(base->size());
                t.ract = square(b, ptr, "act", n, k, lookup);
                if (b.contains("lact")) t.lact = square(b, ptr, "lact", k, n, lookup);
            }
            t.zero = b.contains("zero") ? lookup(b.at("zero"), child(ptr, "zero")) : 0;
            m = as_structured(module_from_tables(base, t));
        } else {
            fail(ptr, "a module needs \"atoms\", \"free\" or \"elements\"");
        }
        declare(Kind::Module, name, ptr);
        d_.modules[name] = m;
    }

    Elem element(const Module& m, const Json& v, const std::string& p, const std::vector<std::string>& labels = {}) {
        if (!v.is_string()) fail(p, "elements are written as strings");
        try {
            return parse_labeled(m, labels, v.get<std::string>());
        } catch (const InputError& e) {
            fail(p, e.what());
        }
    }

    void map(const std::string& name, const Json& b, const std::string& ptr) {
        auto src = module_ref(b, ptr, "src");
        auto dst = module_ref(b, ptr, "dst");
        const Json& im = array(b, ptr, "images");
        const std::string ip = child(ptr, "images");
        auto want = slots(*src);
        if (im.size() != want.size())
            fail(ip, "\"images\" needs one list per atom of the source (" + std::to_string(want.size()) + ")");
        std::vector<std::vector<Elem>> images;
        for (std::size_t i = 0; i < im.size(); ++i) {
            const std::string ap = child(ip, i);
            if (!im[i].is_array() || im[i].size() != want[i].size())
                fail(ap, "atom " + std::to_string(i) + " needs " + std::to_string(want[i].size()) + " images");
            std::vector<Elem> row;
            for (std::size_t k = 0; k < im[i].size(); ++k) row.push_back(element(*dst, im[i][k], child(ap, k)));
            images.push_back(std::move(row));
        }
        auto f = map_from_images(src, dst, std::move(images));
        declare(Kind::Map, name, ptr);
        d_.maps.emplace(name, f);
    }

    // [coefficient, [left, right]] terms
    Elem formal_sum(const TensorProduct& t, const Json& v, const std::string& p, const std::vector<std::string>& left_labels,
                    const std::vector<std::string>& right_labels) {
        if (!v.is_array()) fail(p, "a formal sum is an array of [coefficient, [left, right]]");
        const Module& L = *t.left;
        Elem acc = t.result->zero();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string tp = child(p, i);
            const Json& term = v[i];
            if (!term.is_array() || term.size() != 2 || !term[1].is_array() || term[1].size() != 2)
                fail(tp, "a term is [coefficient, [left, right]]");
            auto s = scalar_from(*L.base(), term[0]);
            if (!s) fail(child(tp, 0), "not a scalar of " + L.base()->name());
            Elem a = element(L, term[1][0], child(child(tp, 1), 0), left_labels);
            Elem b = element(*t.right, term[1][1], child(child(tp, 1), 1), right_labels);
            acc = t.result->add(acc, t.pure(L.ract(a, *s), b));
        }
        return acc;
    }

    void coring(const std::string& name, const Json& b, const std::string& ptr) {
        CoringPtr c;
        if (b.contains("builtin")) {
            const auto tag = str(b, ptr, "builtin");
            if (tag == "sweedler") c = sweedler_identity(semiring_ref(b, ptr, "base"));
            else if (tag == "coext") c = trivial_coextension(module_ref(b, ptr, "module"));
            else if (tag == "grouplike") c = grouplike(semiring_ref(b, ptr, "base"), names(b, ptr, "labels"));
            else if (tag == "poly1" || tag == "poly2")
                c = polynomial(semiring_ref(b, ptr, "base"), integer(b, ptr, "degree", 0, 12),
                               tag == "poly1" ? PolyVariant::GrouplikePowers : PolyVariant::Binomial);
            else if (tag == "words") c = words(integer(b, ptr, "length", 0, 4), integer(b, ptr, "variant", 1, 3));
            else if (tag == "counterexample") c = counterexample(integer(b, ptr, "n", 2, 1000));
            else fail(child(ptr, "builtin"), "unknown builtin coring '" + tag + "'");
        } else {
            auto carrier = module_ref(b, ptr, "carrier");
            std::vector<std::string> labels;
            if (b.contains("labels")) {
                labels = names(b, ptr, "labels");
                if (labels.size() != carrier->rank()) fail(child(ptr, "labels"), "one label per atom of the carrier");
            }
            const std::size_t n = slot_count(*carrier);
            const Json& dl = array(b, ptr, "delta");
            const Json& el = array(b, ptr, "eps");
            if (dl.size() != n) fail(child(ptr, "delta"), "\"delta\" needs " + std::to_string(n) + " formal sums");
            if (el.size() != n) fail(child(ptr, "eps"), "\"eps\" needs " + std::to_string(n) + " scalars");
            auto cc = tensor(carrier, carrier);
            auto scal = regular(carrier->base());
            std::vector<Elem> d, e;
            for (std::size_t i = 0; i < n; ++i) {
                d.push_back(formal_sum(*cc, dl[i], child(child(ptr, "delta"), i), labels, labels));
                auto s = scalar_from(*carrier->base(), el[i]);
                if (!s) fail(child(child(ptr, "eps"), i), "not a scalar of " + carrier->base()->name());
                e.push_back(Elem{Val{*s, 1}});
            }
            c = make_semicoring(name, carrier, nest(*carrier, d), nest(*carrier, e), labels);
        }
        declare(Kind::Coring, name, ptr);
        auto named = std::make_shared<Semicoring>(*c);
        named->name = name;
        d_.corings[name] = named;
    }

    void comodule(const std::string& name, const Json& b, const std::string& ptr) {
        ComodulePtr m;
        if (b.contains("builtin")) {
            const auto tag = str(b, ptr, "builtin");
            if (tag != "two_coactions") fail(child(ptr, "builtin"), "unknown builtin comodule '" + tag + "'");
            auto t = two_coactions_counterexample(integer(b, ptr, "n", 2, 1000));
            const auto which = str(b, ptr, "which");
            if (which == "rho1") m = t.rho1;
            else if (which == "rho2") m = t.rho2;
            else if (which == "qmodz") m = t.qmodz;
            else fail(child(ptr, "which"), "\"which\" is rho1, rho2 or qmodz");
            Json v = Json::object();
            v["name"] = name;
            v["builtin"] = tag;
            v["n"] = b.at("n");
            v["which"] = which;
            d_.verbatim[name] = Json{{"comodule", v}};
        } else {
            auto c = coring_ref(b, ptr, "coring");
            if (b.contains("regular")) {
                m = regular_comodule(c);
            } else if (b.contains("cofree")) {
                m = cofree_comodule(module_ref(b, ptr, "cofree"), c);
            } else {
                auto carrier = module_ref(b, ptr, "carrier");
                const std::size_t n = slot_count(*carrier);
                const Json& rl = array(b, ptr, "rho");
                if (rl.size() != n) fail(child(ptr, "rho"), "\"rho\" needs " + std::to_string(n) + " formal sums");
                auto mc = tensor(carrier, c->carrier);
                std::vector<Elem> imgs;
                for (std::size_t i = 0; i < n; ++i)
                    imgs.push_back(formal_sum(*mc, rl[i], child(child(ptr, "rho"), i), {}, c->labels));
                m = make_comodule(name, c, carrier, nest(*carrier, imgs));
            }
        }
        declare(Kind::Comodule, name, ptr);
        auto named = std::make_shared<Semicomodule>(*m);
        named->name = name;
        d_.comodules[name] = named;
    }

    void pairing(const std::string& name, const Json& b, const std::string& ptr) {
        auto c = coring_ref(b, ptr, "dual");
        auto p = dual_pairing(dual_semiring(c, DualSide::Left));
        p.name = name;
        declare(Kind::Pairing, name, ptr);
        d_.pairings.emplace(name, p);
    }

    void ref_arg(const Json& b, const std::string& ptr, const std::string& key, std::initializer_list<Kind> kinds) {
        const auto n = str(b, ptr, key);
        if (broken_.count(n)) throw Skip{};
        for (const auto& [k, nm] : d_.order)
            if (nm == n) {
                if (std::find(kinds.begin(), kinds.end(), k) == kinds.end())
                    fail(child(ptr, key), "'" + n + "' has the wrong kind (" + kind_name(k) + ")");
                return;
            }
        fail(child(ptr, key), "unknown name '" + n + "'");
    }

    void command(const Json& b, const std::string& ptr) {
        const auto verb = str(b, ptr, "verb");
        if (!kVerbs.count(verb)) fail(child(ptr, "verb"), "unknown verb '" + verb + "'");
        const auto all = {Kind::Semiring, Kind::Module, Kind::Map, Kind::Coring, Kind::Comodule, Kind::Pairing};
        if (verb == "validate" && b.contains("target")) ref_arg(b, ptr, "target", all);
        if (verb == "tensor") {
            ref_arg(b, ptr, "left", {Kind::Module});
            ref_arg(b, ptr, "right", {Kind::Module});
        }
        if (verb == "dual" || verb == "coideal") ref_arg(b, ptr, "coring", {Kind::Coring});
        if (verb == "coideal") {
            auto c = d_.corings.at(b.at("coring").get<std::string>());
            for (std::size_t i = 0; const auto& e : array(b, ptr, "subset"))
                element(*c->carrier, e, child(child(ptr, "subset"), i++), c->labels);
        }
        if (verb == "rational") {
            ref_arg(b, ptr, "pairing", {Kind::Pairing});
            if (b.contains("comodule")) ref_arg(b, ptr, "comodule", {Kind::Comodule});
            else ref_arg(b, ptr, "module", {Kind::Module});
        }
        if (verb == "exact") {
            const Json& ms = array(b, ptr, "maps");
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const auto p = child(child(ptr, "maps"), i);
                if (!ms[i].is_string()) fail(p, "map names are strings");
                const auto n = ms[i].get<std::string>();
                if (n == "0") continue;
                if (broken_.count(n)) throw Skip{};
                if (!d_.maps.count(n)) fail(p, "unknown map '" + n + "'");
            }
            if (b.contains("mode")) {
                const auto mode = str(b, ptr, "mode");
                if (mode != "exact" && mode != "semi" && mode != "proper" && mode != "quasi")
                    fail(child(ptr, "mode"), "mode is exact, semi, proper or quasi");
            }
        }
        Command c;
        c.verb = verb;
        c.args = b;
        c.args.erase("verb");
        c.pos = at(ptr);
        d_.commands.push_back(std::move(c));
    }

    Document& d_;
    const std::map<std::string, Position>& pos_;
    std::set<std::string> broken_;
};

}  // namespace

Elem parse_coring_element(const Semicoring& c, const std::string& text) {
    return parse_labeled(*c.carrier, c.labels, text);
}

Document parse_document(std::string_view text) {
    Tracker t;
    t.begin = text.data();
    std::map<std::string, Position> pos;
    PositionSax sax(text, t, pos);
    CountingIter first(text.data(), &t), last(text.data() + text.size(), &t);
    const bool ok = Json::sax_parse(first, last, &sax);
    if (!ok) {
        if (sax.error) throw DocumentError({*sax.error});
        throw DocumentError({{position_of(text, text.size()), "malformed JSON"}});
    }
    Document d;
    Builder b(d, pos);
    b.run(sax.root);
    if (!b.errors.empty()) throw DocumentError(b.errors);
    return d;
}

// ---- serialization -------------------------------------------------------------------

namespace {

std::optional<std::pair<std::string, int>> builtin_form(const SemiringPtr& s) {
    const std::string& n = s->name();
    std::string tag = n;
    int param = 0;
    if (auto k = n.find('('); k != std::string::npos && n.back() == ')') {
        tag = n.substr(0, k);
        try {
            param = std::stoi(n.substr(k + 1, n.size() - k - 2));
        } catch (...) {
            return std::nullopt;
        }
    }
    try {
        auto b = builtin_semiring(tag, param);
        if (*b == *s) return std::make_pair(tag, param);
    } catch (const InputError&) {
    }
    return std::nullopt;
}

template <class M, class Eq>
std::optional<std::string> find_name(const M& m, Eq eq) {
    for (const auto& [k, v] : m)
        if (eq(v)) return k;
    return std::nullopt;
}

std::string semiring_name(const Document& d, const SemiringPtr& s) {
    if (auto n = find_name(d.semirings, [&](const SemiringPtr& x) { return same_semiring(x, s); })) return *n;
    throw std::logic_error("semiring " + s->name() + " is not in the document");
}

std::string module_name(const Document& d, const ModPtr& m) {
    if (auto n = find_name(d.modules, [&](const ModPtr& x) { return x == m; })) return *n;
    if (auto n = find_name(d.modules, [&](const ModPtr& x) { return *x == *m; })) return *n;
    throw std::logic_error("module " + m->describe() + " is not in the document");
}

std::string coring_name(const Document& d, const CoringPtr& c) {
    if (auto n = find_name(d.corings, [&](const CoringPtr& x) { return x == c; })) return *n;
    throw std::logic_error("coring " + c->name + " is not in the document");
}

bool single_table(const Module& m) { return m.rank() == 1 && m.atoms()[0].kind == AtomKind::Table; }

Json sum_json(const TensorProduct& t, const Elem& x, const std::function<std::string(const Elem&)>& left,
              const std::function<std::string(const Elem&)>& right) {
    Json out = Json::array();
    const Json one = scalar_json(*t.left->base(), t.left->base()->one());
    for (const auto& [a, b] : t.decompose(x)) out.push_back(Json::array({one, Json::array({left(a), right(b)})}));
    return out;
}

Json semiring_json(const Document&, const std::string& name, const SemiringPtr& s) {
    Json b = Json::object();
    b["name"] = name;
    if (auto f = builtin_form(s)) {
        b["builtin"] = f->first;
        if (f->second) b["n"] = f->second;
    } else {
        auto t = s->tables();
        b["elements"] = t.elements;
        auto named = [&](const std::vector<std::vector<int>>& tab) {
            Json rows = Json::array();
            for (const auto& r : tab) {
                Json row = Json::array();
                for (int x : r) row.push_back(t.elements[x]);
                rows.push_back(row);
            }
            return rows;
        };
        b["add"] = named(t.add);
        b["mul"] = named(t.mul);
        b["zero"] = t.elements[t.zero];
        b["one"] = t.elements[t.one];
    }
    return Json{{"semiring", b}};
}

Json module_json(const Document& d, const std::string& name, const ModPtr& m) {
    Json b = Json::object();
    b["name"] = name;
    b["base"] = semiring_name(d, m->base());
    if (single_table(*m)) {
        const auto& fm = *m->atoms()[0].table;
        auto t = module_tables(fm);
        b["elements"] = t.elements;
        auto named = [&](const std::vector<std::vector<int>>& tab) {
            Json rows = Json::array();
            for (const auto& r : tab) {
                Json row = Json::array();
                for (int x : r) row.push_back(t.elements[x]);
                rows.push_back(row);
            }
            return rows;
        };
        b["add"] = named(t.add);
        if (!fm.nat_base()) {
            b["act"] = named(t.ract);
            if (!t.lact.empty()) b["lact"] = named(t.lact);
        }
        if (t.zero != 0) b["zero"] = t.elements[t.zero];
    } else {
        Json atoms = Json::array();
        for (const auto& a : m->atoms()) {
            if (a.kind == AtomKind::Table) {
                auto n = find_name(d.modules, [&](const ModPtr& x) { return single_table(*x) && x->atoms()[0] == a; });
                if (!n) throw std::logic_error("table atom of " + name + " is not in the document");
                atoms.push_back(Json{{"table", *n}});
            } else {
                atoms.push_back(a.show());
            }
        }
        b["atoms"] = atoms;
    }
    return Json{{"module", b}};
}

Json map_json(const Document& d, const std::string& name, const LinearMap& f) {
    Json b = Json::object();
    b["name"] = name;
    b["src"] = module_name(d, f.src);
    b["dst"] = module_name(d, f.dst);
    Json im = Json::array();
    for (const auto& s : slots(*f.src)) {
        Json row = Json::array();
        for (const auto& x : s) row.push_back(f.dst->show(f(x)));
        im.push_back(row);
    }
    b["images"] = im;
    return Json{{"map", b}};
}

Json coring_json(const Document& d, const std::string& name, const CoringPtr& c) {
    Json b = Json::object();
    b["name"] = name;
    b["carrier"] = module_name(d, c->carrier);
    if (!c->labels.empty()) b["labels"] = c->labels;
    Json dl = Json::array(), el = Json::array();
    auto show = [&](const Elem& x) { return c->show(x); };
    for (const auto& s : slots(*c->carrier))
        for (const auto& g : s) {
            dl.push_back(sum_json(*c->cc, c->delta(g), show, show));
            el.push_back(scalar_json(*c->base, c->eps_of(g)));
        }
    b["delta"] = dl;
    b["eps"] = el;
    return Json{{"coring", b}};
}

Json comodule_json(const Document& d, const std::string& name, const ComodulePtr& m) {
    if (auto it = d.verbatim.find(name); it != d.verbatim.end()) return it->second;
    Json b = Json::object();
    b["name"] = name;
    b["coring"] = coring_name(d, m->coring);
    b["carrier"] = module_name(d, m->carrier);
    Json rl = Json::array();
    auto left = [&](const Elem& x) { return m->carrier->show(x); };
    auto right = [&](const Elem& x) { return m->coring->show(x); };
    for (const auto& s : slots(*m->carrier))
        for (const auto& g : s) rl.push_back(sum_json(*m->mc, m->rho(g), left, right));
    b["rho"] = rl;
    return Json{{"comodule", b}};
}

Json pairing_json(const Document& d, const std::string& name, const MeasuringPairing& p) {
    Json b = Json::object();
    b["name"] = name;
    b["dual"] = coring_name(d, p.coring);
    return Json{{"pairing", b}};
}

std::string fresh(const Document& d, const std::string& stem) {
    if (!d.has(stem)) return stem;
    for (int i = 2;; ++i)
        if (!d.has(stem + std::to_string(i))) return stem + std::to_string(i);
}

}  // namespace

std::string serialize(const Document& d) {
    std::vector<std::string> lines;
    for (const auto& [k, n] : d.order) {
        Json j;
        switch (k) {
            case Kind::Semiring: j = semiring_json(d, n, d.semirings.at(n)); break;
            case Kind::Module: j = module_json(d, n, d.modules.at(n)); break;
            case Kind::Map: j = map_json(d, n, d.maps.at(n)); break;
            case Kind::Coring: j = coring_json(d, n, d.corings.at(n)); break;
            case Kind::Comodule: j = comodule_json(d, n, d.comodules.at(n)); break;
            case Kind::Pairing: j = pairing_json(d, n, d.pairings.at(n)); break;
        }
        lines.push_back(j.dump());
    }
    for (const auto& c : d.commands) {
        Json b = Json::object();
        b["verb"] = c.verb;
        for (const auto& [k, v] : c.args.items()) b[k] = v;
        lines.push_back(Json{{"command", b}}.dump());
    }
    std::string out = "[\n";
    for (std::size_t i = 0; i < lines.size(); ++i) out += "  " + lines[i] + (i + 1 < lines.size() ? ",\n" : "\n");
    return out + "]\n";
}

void add_semiring(Document& d, const std::string& name, const SemiringPtr& s) {
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    d.order.emplace_back(Kind::Semiring, name);
    d.semirings[name] = s;
}

void add_module(Document& d, const std::string& name, const ModPtr& m) {
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    if (!find_name(d.semirings, [&](const SemiringPtr& x) { return same_semiring(x, m->base()); }))
        add_semiring(d, fresh(d, name + ".base"), m->base());
    if (!single_table(*m))
        for (std::size_t i = 0; i < m->rank(); ++i) {
            const auto& a = m->atoms()[i];
            if (a.kind != AtomKind::Table) continue;
            if (!find_name(d.modules, [&](const ModPtr& x) { return single_table(*x) && x->atoms()[0] == a; }))
                add_module(d, fresh(d, name + ".t" + std::to_string(i)), as_structured(a.table));
        }
    d.order.emplace_back(Kind::Module, name);
    d.modules[name] = m;
}

namespace {
void ensure_module(Document& d, const std::string& stem, const ModPtr& m) {
    if (!find_name(d.modules, [&](const ModPtr& x) { return x == m || *x == *m; })) add_module(d, fresh(d, stem), m);
}
void ensure_coring(Document& d, const std::string& stem, const CoringPtr& c) {
    if (!find_name(d.corings, [&](const CoringPtr& x) { return x == c; })) add_coring(d, fresh(d, stem), c);
}
}  // namespace

void add_map(Document& d, const std::string& name, const LinearMap& f) {
    ensure_module(d, name + ".src", f.src);
    ensure_module(d, name + ".dst", f.dst);
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    d.order.emplace_back(Kind::Map, name);
    d.maps.emplace(name, f);
}

void add_coring(Document& d, const std::string& name, const CoringPtr& c) {
    ensure_module(d, name + ".carrier", c->carrier);
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    d.order.emplace_back(Kind::Coring, name);
    d.corings[name] = c;
}

void add_comodule(Document& d, const std::string& name, const ComodulePtr& m) {
    ensure_coring(d, name + ".coring", m->coring);
    ensure_module(d, name + ".carrier", m->carrier);
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    d.order.emplace_back(Kind::Comodule, name);
    d.comodules[name] = m;
}

void add_pairing(Document& d, const std::string& name, const MeasuringPairing& p) {
    ensure_coring(d, name + ".coring", p.coring);
    if (d.has(name)) throw InputError("'" + name + "' is declared twice");
    d.order.emplace_back(Kind::Pairing, name);
    d.pairings.emplace(name, p);
}

void add_command(Document& d, const std::string& verb, Json args) {
    Command c;
    c.verb = verb;
    c.args = std::move(args);
    d.commands.push_back(std::move(c));
}

Json tensor_json(const TensorProduct& t, std::size_t max_entries) {
    Json j = Json::object();
    j["left"] = t.left->describe();
    j["right"] = t.right->describe();
    j["result"] = t.result->describe();
    j["mode"] = t.mode == TensorMode::Rules ? "rules" : "saturate";
    const bool finite = t.left->at_most(max_entries) && t.right->at_most(max_entries) &&
                        t.left->size() * t.right->size() <= max_entries && t.result->at_most(max_entries);
    j["size"] = t.result->finite() && t.result->at_most(std::size_t{1} << 24) ? Json(t.result->size()) : Json("infinite");
    const auto ls = finite ? t.left->elements() : t.left->generators();
    const auto rs = finite ? t.right->elements() : t.right->generators();
    Json pure = Json::array();
    for (const auto& a : ls)
        for (const auto& b : rs) pure.push_back(Json::array({t.left->show(a), t.right->show(b), t.result->show(t.pure(a, b))}));
    j[finite ? "pure" : "pure_on_generators"] = pure;
    if (finite) {
        Json nf = Json::array();
        for (const auto& x : t.result->elements())
            nf.push_back(Json::array({t.result->show(x), tensor_element_name(t, x)}));
        j["normal_forms"] = nf;
    }
    return j;
}

// ---- running ---------------------------------------------------------------------------

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Undecided: return "undecided";
        case Verdict::InputError: return "input-error";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
Record timed(std::string verb, Json args, F body) {
    Record r;
    r.verb = std::move(verb);
    r.args = std::move(args);
    const auto t0 = Clock::now();
    try {
        body(r);
        if (r.verdict == Verdict::Pass && !r.report.ok()) r.verdict = Verdict::Fail;
    } catch (const Undecided& e) {
        r.verdict = Verdict::Undecided;
        r.note = std::string("budget exhausted: ") + e.what();
    } catch (const Unsupported& e) {
        r.verdict = Verdict::Undecided;
        r.note = std::string("unsupported: ") + e.what();
    } catch (const InputError& e) {
        r.verdict = Verdict::InputError;
        r.note = e.what();
    }
    r.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
    return r;
}

Record validate_one(const Document& d, Kind k, const std::string& n, const RunOptions& opt) {
    return timed("validate", Json{{"target", n}}, [&](Record& r) {
        r.data["kind"] = kind_name(k);
        switch (k) {
            case Kind::Semiring: r.report = check_semiring_axioms(*d.semirings.at(n)); break;
            case Kind::Module: r.report = check_module_axioms(*d.modules.at(n)); break;
            case Kind::Map: r.report = check_linear_map(d.maps.at(n)); break;
            case Kind::Coring: r.report = check_semicoring(*d.corings.at(n), opt.budget); break;
            case Kind::Comodule: r.report = check_comodule(*d.comodules.at(n), opt.budget); break;
            case Kind::Pairing: r.report = check_measuring(d.pairings.at(n)); break;
        }
        if (r.report.sampled) r.data["sampled"] = true;
    });
}

std::string arg(const Command& c, const std::string& key) { return c.args.at(key).get<std::string>(); }

ExactMode mode_of(const std::string& s) {
    if (s == "semi") return ExactMode::Semi;
    if (s == "proper") return ExactMode::Proper;
    if (s == "quasi") return ExactMode::Quasi;
    return ExactMode::Exact;
}

}  // namespace

std::vector<Record> validate_all(const Document& d, const RunOptions& opt) {
    std::vector<Record> out;
    for (const auto& [k, n] : d.order) out.push_back(validate_one(d, k, n, opt));
    return out;
}

Record run_command(const Document& d, const Command& c, const RunOptions& opt) {
    if (c.verb == "validate") {
        if (!c.args.contains("target")) throw InputError("validate without a target; use validate_all");
        const auto n = arg(c, "target");
        for (const auto& [k, nm] : d.order)
            if (nm == n) return validate_one(d, k, n, opt);
        throw InputError("unknown name '" + n + "'");
    }
    if (c.verb == "tensor")
        return timed("tensor", c.args, [&](Record& r) {
            auto t = tensor(d.modules.at(arg(c, "left")), d.modules.at(arg(c, "right")), opt.budget);
            r.data = tensor_json(*t);
        });
    if (c.verb == "dual")
        return timed("dual", c.args, [&](Record& r) {
            const std::string s = c.args.contains("side") ? arg(c, "side") : "left";
            DualSide side = s == "right" ? DualSide::Right : s == "two" ? DualSide::Two : DualSide::Left;
            if (s != "left" && s != "right" && s != "two") throw InputError("side is left, right or two");
            auto dual = dual_semiring(d.corings.at(arg(c, "coring")), side);
            r.report = check_dual(dual);
            r.data["side"] = dual_side_name(side);
            r.data["size"] = dual.tables.elements.size();
            r.data["elements"] = dual.tables.elements;
            r.data["unit"] = dual.tables.elements[dual.unit];
            Json mul = Json::array();
            for (const auto& row : dual.tables.mul) {
                Json jr = Json::array();
                for (int x : row) jr.push_back(dual.tables.elements[x]);
                mul.push_back(jr);
            }
            r.data["mul"] = mul;
        });
    if (c.verb == "coideal")
        return timed("coideal", c.args, [&](Record& r) {
            auto cor = d.corings.at(arg(c, "coring"));
            std::vector<Elem> k;
            for (const auto& e : c.args.at("subset")) k.push_back(parse_coring_element(*cor, e.get<std::string>()));
            auto v = coideal_check(cor, k);
            r.report.add("K is uniform", v.uniform, v.witness);
            r.report.add("Δ(K) lands in the closure", v.delta_condition, v.witness);
            r.report.add("ε(K) = 0", v.counit_condition, v.witness);
            if (v.applicable) r.report.add("C/K is a semicoring and π_K a morphism", v.quotient_ok, v.witness);
            r.data["is_coideal"] = v.is_coideal;
            if (v.quotient) r.data["quotient"] = v.quotient->carrier->describe();
        });
    if (c.verb == "rational")
        return timed("rational", c.args, [&](Record& r) {
            const auto& p = d.pairings.at(arg(c, "pairing"));
            if (!opt.family.empty()) {
                auto cert = certify_alpha(p.as_pairing(), opt.family, opt.budget);
                r.report.add("α-condition on the family (" + std::to_string(opt.family.size()) + " modules)", cert.ok,
                             cert.witness);
            }
            if (c.args.contains("comodule")) {
                const auto& m = *d.comodules.at(arg(c, "comodule"));
                r.report.merge(rational_round_trip(p, m, opt.budget));
                r.data["comodule"] = m.name;
                return;
            }
            const auto& mod = d.modules.at(arg(c, "module"));
            if (!single_table(*mod)) throw InputError("rational needs a table module over the pairing's algebra");
            auto fm = mod->atoms()[0].table;
            if (!same_semiring(fm->base(), p.algebra))
                throw InputError("module '" + arg(c, "module") + "' is not over the algebra of the pairing");
            auto rp = rational_part(p, fm, opt.budget);
            if (rp.refused) {
                r.report.add("α-condition on the module", false, rp.reason);
                return;
            }
            r.report.merge(rp.report);
            Json els = Json::array();
            for (Index i : rp.part.elements()) els.push_back(fm->name(i));
            r.data["rat"] = els;
            if (rp.comodule) {
                Json co = Json::array();
                const auto& cm = *rp.comodule;
                for (const auto& x : cm.carrier->elements())
                    co.push_back(Json::array({cm.carrier->show(x), tensor_element_name(*cm.mc, cm.rho(x))}));
                r.data["coaction"] = co;
            }
        });
    if (c.verb == "exact")
        return timed("exact", c.args, [&](Record& r) {
            std::vector<std::string> names;
            for (const auto& x : c.args.at("maps")) names.push_back(x.get<std::string>());
            std::vector<FiniteMap> seq;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (names[i] != "0") {
                    seq.push_back(to_finite(d.maps.at(names[i])));
                    continue;
                }
                // 0 → first source, or last target → 0
                if (i == 0 && names.size() > 1 && names[1] != "0")
                    seq.push_back(zero_into(d.maps.at(names[1]).src->tabulate()));
                else if (i > 0 && names[i - 1] != "0")
                    seq.push_back(zero_onto(d.maps.at(names[i - 1]).dst->tabulate()));
                else
                    throw InputError("a 0 needs a neighbouring map");
            }
            for (std::size_t i = 0; i + 1 < seq.size(); ++i)
                if (!seq[i].dst->same_tables(*seq[i + 1].src))
                    throw InputError("maps " + names[i] + " and " + names[i + 1] + " do not compose");
            const std::string ms = c.args.contains("mode") ? arg(c, "mode") : "exact";
            auto res = exactness_check(seq, mode_of(ms));
            for (std::size_t j = 0; j < res.joints.size(); ++j)
                r.report.add("joint " + std::to_string(j + 1) + " (" + names[j] + ", " + names[j + 1] + ") " + ms,
                             res.joints[j].ok, res.joints[j].witness);
        });
    if (c.verb == "gallery") {
        auto rs = run_gallery(opt);
        Record r;
        r.verb = "gallery";
        r.args = c.args;
        for (const auto& x : rs) {
            r.report.add(x.verb + " " + x.args.value("target", std::string{}), x.verdict == Verdict::Pass, x.note);
            r.time_ms += x.time_ms;
        }
        if (!r.report.ok()) r.verdict = Verdict::Fail;
        return r;
    }
    throw InputError("unknown verb '" + c.verb + "'");
}

std::vector<Record> run(const Document& d, const RunOptions& opt) {
    std::vector<Record> out;
    for (const auto& c : d.commands) {
        if (c.verb == "validate" && !c.args.contains("target")) {
            for (auto& r : validate_all(d, opt)) out.push_back(std::move(r));
            continue;
        }
        out.push_back(run_command(d, c, opt));
    }
    return out;
}

namespace {

std::vector<std::pair<std::string, CoringPtr>> named_gallery() {
    std::vector<std::pair<std::string, CoringPtr>> out;
    std::set<std::string> seen;
    for (const auto& e : gallery()) {
        std::string k = e.key;
        if (seen.count(k)) k += "_" + e.coring->base->name();
        if (k == "coext") k += "_" + e.coring->base->name();
        for (auto& ch : k)
            if (ch == '(' || ch == ')') ch = '_';
        while (!k.empty() && k.back() == '_') k.pop_back();
        seen.insert(e.key);
        out.emplace_back(k, e.coring);
    }
    return out;
}

}  // namespace

std::vector<Record> run_gallery(const RunOptions& opt) {
    std::vector<Record> out;
    for (const auto& [key, c] : named_gallery()) {
        out.push_back(timed("validate", Json{{"target", key}}, [&](Record& r) {
            r.report = check_semicoring(*c, opt.budget);
            r.data["coring"] = c->name;
            r.data["carrier"] = c->carrier->describe();
        }));
        out.push_back(timed("mutations", Json{{"target", key}}, [&](Record& r) {
            auto corpus = mutation_corpus(*c);
            r.data["count"] = corpus.size();
            Json caught = Json::array();
            for (const auto& m : corpus) {
                auto rep = check_semicoring(*m.coring, opt.budget);
                const Check* f = rep.first_failure();
                const bool ok = f && !f->witness.empty();
                r.report.add(m.description, ok, "mutant passed the checker");
                if (f) caught.push_back(Json::array({m.description, f->name, f->witness}));
            }
            r.data["caught"] = caught;
        }));
    }
    return out;
}

std::string render_md(const std::vector<Record>& rs) {
    std::ostringstream o;
    o << "# semialg report\n";
    for (const auto& r : rs) {
        o << "\n## " << r.verb;
        for (const auto& [k, v] : r.args.items()) o << " " << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
        o << ": " << verdict_name(r.verdict) << "\n";
        if (!r.note.empty()) o << "\n" << r.note << "\n";
        if (!r.report.checks.empty()) {
            o << "\n| check | result | witness |\n|---|---|---|\n";
            for (const auto& c : r.report.checks) o << "| " << c.name << " | " << (c.ok ? "ok" : "FAIL") << " | " << c.witness << " |\n";
        }
        if (!r.report.format_error.empty()) o << "\nformat error: " << r.report.format_error << "\n";
        if (!r.data.empty()) o << "\n```json\n" << r.data.dump(2) << "\n```\n";
        o << "\ntime: " << r.time_ms << " ms\n";
    }
    return o.str();
}

std::string render_jsonl(const std::vector<Record>& rs) {
    std::string out;
    for (const auto& r : rs) {
        Json j = Json::object();
        j["verb"] = r.verb;
        j["args"] = r.args;
        j["verdict"] = verdict_name(r.verdict);
        if (!r.note.empty()) j["note"] = r.note;
        Json checks = Json::array();
        for (const auto& c : r.report.checks) {
            Json x = Json::object();
            x["name"] = c.name;
            x["ok"] = c.ok;
            if (!c.ok) x["witness"] = c.witness;
            checks.push_back(x);
        }
        j["checks"] = checks;
        if (!r.report.format_error.empty()) j["format_error"] = r.report.format_error;
        j["data"] = r.data;
        j["time_ms"] = r.time_ms;
        out += j.dump() + "\n";
    }
    return out;
}

int exit_code(const std::vector<Record>& rs) {
    bool fail = false, undecided = false;
    for (const auto& r : rs) {
        if (r.verdict == Verdict::InputError) return 3;
        fail = fail || r.verdict == Verdict::Fail;
        undecided = undecided || r.verdict == Verdict::Undecided;
    }
    return fail ? 1 : undecided ? 2 : 0;
}

int emit_fixtures(const std::string& dir, int per_coring) {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "mutations");
    Document g;
    for (const auto& [key, c] : named_gallery()) {
        add_coring(g, key, c);
        add_command(g, "validate", Json{{"target", key}});
    }
    std::ofstream(fs::path(dir) / "gallery.json") << serialize(g);
    int count = 0;
    for (const auto& [key, c] : named_gallery()) {
        auto corpus = mutation_corpus(*c);
        for (int i = 0; i < per_coring && i < static_cast<int>(corpus.size()); ++i) {
            Document m;
            add_coring(m, "mutant", corpus[i].coring);
            add_command(m, "validate", Json{{"target", "mutant"}});
            char buf[64];
            std::snprintf(buf, sizeof buf, "%02d_%s.json", ++count, key.c_str());
            std::ofstream(fs::path(dir) / "mutations" / buf) << serialize(m);
        }
    }
    return count;
}

}  // namespace semialg::io
