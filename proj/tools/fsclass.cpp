#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fsind/cli.hpp"

int main(int argc, char** argv) {
    using namespace fsind::cli;
    CLI::App app{"fsclass: Frobenius-Schur indicators and real/complex/quaternionic labels"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.threads = threads_from_env();
    std::string kind = "algebra";
    std::string format = "text";

    const std::map<std::string, std::string> help{
        {"verify", "check the axioms of the input and report what was verified"},
        {"irreps", "list the irreducible *-representations"},
        {"indicators", "indicators, sigma and labels per irreducible"},
        {"classify", "indicators plus real or quaternionic witnesses"},
        {"duality", "compare algebra-side and coalgebra-side indicators"}};
    for (const auto& [name, cmd] : command_names()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("input", cfg.input, "input JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--kind", kind, "input kind")->check(CLI::IsMember({"algebra", "group", "scheme", "groupoid", "double", "coalgebra"}));
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol-rank", cfg.tol.eps_rank, "rank tolerance");
        sub->add_option("--tol-round", cfg.tol.eps_round, "rounding band for indicators");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--output", cfg.output, "write the report here instead of stdout");
        sub->add_option("--anti-map", cfg.anti_map, "antimap.v1 file (S, or varsigma for coalgebras)")->check(CLI::ExistingFile);
        sub->add_option("--twist", cfg.twist, "involution.v1 file")->check(CLI::ExistingFile);
        sub->callback([&cfg, c = cmd] { cfg.command = c; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    cfg.kind = kind_names().at(kind);
    cfg.format = format_names().at(format);
    return run(cfg, std::cout, std::cerr);
}
