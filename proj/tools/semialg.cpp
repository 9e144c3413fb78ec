#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "semialg/io.hpp"

using namespace semialg;
using namespace semialg::io;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t env_budget() {
    if (const char* v = std::getenv("SEMIALG_BUDGET")) {
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (...) {
            std::cerr << "semialg: ignoring SEMIALG_BUDGET=" << v << "\n";
        }
    }
    return kDefaultBudget;
}

std::vector<ModPtr> load_family(const std::string& path) {
    std::vector<ModPtr> out;
    auto d = parse_document(slurp(path));
    for (const auto& [k, n] : d.order)
        if (k == Kind::Module) out.push_back(d.modules.at(n));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semialg: semirings, semimodules, semicorings and semicomodules"};
    app.require_subcommand(1);
    app.fallthrough();

    std::size_t budget = env_budget();
    std::string format = "md", family_path, file;
    app.add_option("--budget", budget, "work budget (default: SEMIALG_BUDGET or 1000000)");
    app.add_option("--format", format, "md or jsonl")->check(CLI::IsMember({"md", "jsonl"}));
    app.add_option("--family", family_path, "document whose modules form the α family");

    std::vector<std::string> names;
    std::string side = "left", mode = "exact", left, right, coring, pairing, target, emit_dir;
    int per_coring = 3;

    auto* validate = app.add_subcommand("validate", "check every declaration, or the named ones");
    validate->add_option("file", file)->required();
    validate->add_option("names", names);

    auto* tensor_cmd = app.add_subcommand("tensor", "tensor product of two modules");
    tensor_cmd->add_option("file", file)->required();
    tensor_cmd->add_option("left", left)->required();
    tensor_cmd->add_option("right", right)->required();

    auto* dual = app.add_subcommand("dual", "dual semiring of a coring");
    dual->add_option("file", file)->required();
    dual->add_option("coring", coring)->required();
    dual->add_option("--side", side)->check(CLI::IsMember({"left", "right", "two"}));

    auto* coideal = app.add_subcommand("coideal", "is a subset of a coring a coideal");
    coideal->add_option("file", file)->required();
    coideal->add_option("coring", coring)->required();
    coideal->add_option("elements", names)->required();

    auto* rational = app.add_subcommand("rational", "rational part of a module, or round trip of a comodule");
    rational->add_option("file", file)->required();
    rational->add_option("pairing", pairing)->required();
    rational->add_option("target", target)->required();

    auto* exact = app.add_subcommand("exact", "exactness of a sequence of maps (0 for the zero module)");
    exact->add_option("file", file)->required();
    exact->add_option("maps", names)->required();
    exact->add_option("--mode", mode)->check(CLI::IsMember({"exact", "semi", "proper", "quasi"}));

    auto* gallery_cmd = app.add_subcommand("gallery", "validate the gallery and its mutation corpus");
    gallery_cmd->add_option("--emit", emit_dir, "write fixtures to this directory instead");
    gallery_cmd->add_option("--per-coring", per_coring, "mutation fixtures per coring");

    auto* report = app.add_subcommand("report", "run the commands of a document");
    report->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    RunOptions opt;
    opt.budget = budget;
    std::vector<Record> records;
    try {
        if (!family_path.empty()) opt.family = load_family(family_path);
        if (gallery_cmd->parsed()) {
            if (!emit_dir.empty()) {
                const int n = emit_fixtures(emit_dir, per_coring);
                std::cout << "wrote " << emit_dir << "/gallery.json and " << n << " mutation fixtures\n";
                return 0;
            }
            records = run_gallery(opt);
        } else {
            const Document d = parse_document(slurp(file));
            auto one = [&](const std::string& verb, Json args) {
                Command c;
                c.verb = verb;
                c.args = std::move(args);
                auto check = [&](const std::string& n, Kind k) {
                    for (const auto& [kk, nm] : d.order)
                        if (nm == n && kk == k) return;
                    throw InputError(std::string("no ") + kind_name(k) + " named '" + n + "'");
                };
                if (verb == "tensor") check(left, Kind::Module), check(right, Kind::Module);
                if (verb == "dual" || verb == "coideal") check(coring, Kind::Coring);
                if (verb == "rational") check(pairing, Kind::Pairing);
                records.push_back(run_command(d, c, opt));
            };
            if (validate->parsed()) {
                if (names.empty()) records = validate_all(d, opt);
                for (const auto& n : names) one("validate", Json{{"target", n}});
            } else if (tensor_cmd->parsed()) {
                one("tensor", Json{{"left", left}, {"right", right}});
            } else if (dual->parsed()) {
                one("dual", Json{{"coring", coring}, {"side", side}});
            } else if (coideal->parsed()) {
                one("coideal", Json{{"coring", coring}, {"subset", names}});
            } else if (rational->parsed()) {
                const bool comodule = d.comodules.count(target) > 0;
                if (!comodule && !d.modules.count(target)) throw InputError("no module or comodule named '" + target + "'");
                one("rational", Json{{"pairing", pairing}, {comodule ? "comodule" : "module", target}});
            } else if (exact->parsed()) {
                for (const auto& n : names)
                    if (n != "0" && !d.maps.count(n)) throw InputError("no map named '" + n + "'");
                one("exact", Json{{"maps", names}, {"mode", mode}});
            } else if (report->parsed()) {
                records = run(d, opt);
            }
        }
    } catch (const DocumentError& e) {
        std::cerr << format_errors(e, file);
        return 3;
    } catch (const InputError& e) {
        std::cerr << "semialg: " << e.what() << "\n";
        return 3;
    }

    std::cout << (format == "jsonl" ? render_jsonl(records) : render_md(records));
    return exit_code(records);
}
