#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semialg/comodule.hpp"

namespace semialg::io {

using Json = nlohmann::ordered_json;

struct Position {
    int line = 0, column = 0;  // 1-based; 0 when unknown
};

struct ParseError {
    Position pos;
    std::string message;
};

// Thrown by parse_document with every error found, in document order.
struct DocumentError : InputError {
    std::vector<ParseError> errors;
    explicit DocumentError(std::vector<ParseError> e);
};
std::string format_errors(const DocumentError& e, const std::string& source);

enum class Kind { Semiring, Module, Map, Coring, Comodule, Pairing };
const char* kind_name(Kind k);

struct Command {
    std::string verb;
    Json args;  // the command object minus "verb"
    Position pos;
};

// Declarations are kept in order; a name is declared once across all kinds.
struct Document {
    std::vector<std::pair<Kind, std::string>> order;
    std::map<std::string, SemiringPtr> semirings;
    std::map<std::string, ModPtr> modules;
    std::map<std::string, LinearMap> maps;
    std::map<std::string, CoringPtr> corings;
    std::map<std::string, ComodulePtr> comodules;
    std::map<std::string, MeasuringPairing> pairings;
    // Declarations without an explicit form (QMODZ carriers) are kept as written.
    std::map<std::string, Json> verbatim;
    std::vector<Command> commands;

    bool has(const std::string& name) const;
};

// A JSON array of declarations, or a single declaration. Each declaration is
// an object with one key: semiring, module, map, coring, comodule, pairing or
// command.
Document parse_document(std::string_view text);

// Canonical text: one declaration per line inside a JSON array.
std::string serialize(const Document& d);

// Adding a value also adds whatever it refers to (base, carrier, coring)
// under derived names when the document does not hold it yet.
void add_semiring(Document& d, const std::string& name, const SemiringPtr& s);
void add_module(Document& d, const std::string& name, const ModPtr& m);
void add_map(Document& d, const std::string& name, const LinearMap& f);
void add_coring(Document& d, const std::string& name, const CoringPtr& c);
void add_comodule(Document& d, const std::string& name, const ComodulePtr& m);
void add_pairing(Document& d, const std::string& name, const MeasuringPairing& p);
void add_command(Document& d, const std::string& verb, Json args);

// Canonical JSON of a single tensor product: factors, result and the table
// of pure tensors with their normal forms (finite factors only).
Json tensor_json(const TensorProduct& t, std::size_t max_entries = 4096);

// Coring elements: a label, a sum of labels "x+2·y", or a carrier element.
Elem parse_coring_element(const Semicoring& c, const std::string& text);

// ---- running commands -------------------------------------------------------------

enum class Verdict { Pass, Fail, Undecided, InputError };
const char* verdict_name(Verdict v);

struct Record {
    std::string verb;
    Json args = Json::object();
    Verdict verdict = Verdict::Pass;
    Report report;
    Json data = Json::object();
    std::string note;  // reason for undecided / input errors
    long long time_ms = 0;
};

struct RunOptions {
    std::size_t budget = kDefaultBudget;
    std::vector<ModPtr> family;  // --family: the α family for rational
};

Record run_command(const Document& d, const Command& c, const RunOptions& opt);
std::vector<Record> run(const Document& d, const RunOptions& opt);
// validate every declaration
std::vector<Record> validate_all(const Document& d, const RunOptions& opt);
// the gallery corings and, for each, its mutation corpus
std::vector<Record> run_gallery(const RunOptions& opt);

// Markdown and one JSON object per line; time is the only varying field.
std::string render_md(const std::vector<Record>& rs);
std::string render_jsonl(const std::vector<Record>& rs);

// 3 on input errors, else 1 on failures, else 2 on undecided, else 0.
int exit_code(const std::vector<Record>& rs);

// Gallery and mutation fixtures written to dir (gallery.json, mutations/*.json).
// Returns the number of mutation files.
int emit_fixtures(const std::string& dir, int per_coring);

}  // namespace semialg::io
