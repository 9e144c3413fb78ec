#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semialg {

// Malformed input: tables not closed, dangling references, bad parameters.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation ran out of its node budget; the answer is unknown.
struct Undecided : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The request is well-formed but outside what the kernel can decide
// (no tensor rule for an atom pair, infinite hom sets, ...).
struct Unsupported : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Check {
    std::string name;
    bool ok = true;
    std::string witness;
};

struct Report {
    std::vector<Check> checks;
    std::string format_error;
    bool sampled = false;

    void add(std::string name, bool ok, std::string witness = {}) {
        checks.push_back({std::move(name), ok, ok ? std::string{} : std::move(witness)});
    }
    void merge(const Report& other, const std::string& prefix = {}) {
        for (const auto& c : other.checks)
            checks.push_back({prefix + c.name, c.ok, c.witness});
        if (format_error.empty()) format_error = other.format_error;
        sampled = sampled || other.sampled;
    }
    bool ok() const {
        if (!format_error.empty()) return false;
        for (const auto& c : checks)
            if (!c.ok) return false;
        return true;
    }
    const Check* first_failure() const {
        for (const auto& c : checks)
            if (!c.ok) return &c;
        return nullptr;
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

}  // namespace semialg
