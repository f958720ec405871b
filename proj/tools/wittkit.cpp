// wittkit: exact computations with truncated Witt vectors, divided powers
// and square-zero deformations over small F_p-algebras.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "wittkit/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact Witt vector and deformation checks over small F_p-algebras"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a verification suite");
    std::string suite;
    run->add_option("suite", suite, "one of: witt-axioms, appendix-recursion, deformation, "
                                    "isogamma, tautological, all")
        ->required();
    wittkit::SuiteOptions opt;
    std::string algebra;
    std::string format = "md";
    std::string outfile;
    bool timings = false;
    run->add_option("--p", opt.p, "prime");
    run->add_option("--n", opt.n, "witt length");
    run->add_option("--d", opt.d, "dimension of the underlying space");
    run->add_option("--r", opt.r, "witt length of the twisting sheaf sections");
    run->add_option("--algebra", algebra, "algebra presentation, e.g. \"algebra F2[t]/(t^2+t)\"");
    run->add_option("--format", format, "report format: json or md")->check(CLI::IsMember({"json", "md"}));
    run->add_option("--seed", opt.seed, "seed for sampled checks");
    run->add_option("--guard", opt.guard, "enumeration guard (elements)");
    run->add_flag("--timings", timings, "include wall-clock timings (breaks byte determinism)");
    run->add_option("--out", outfile, "write the report to a file instead of stdout");

    // parse
    auto* parse = app.add_subcommand("parse", "parse a presentation and echo its normal form");
    std::string input;
    parse->add_option("input", input, "presentation text or a path to a file containing one")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!algebra.empty()) opt.algebra = algebra;
            wittkit::Report rep = wittkit::run_suite(suite, opt);
            std::string text = format == "json" ? rep.to_json(timings) : rep.to_markdown(timings);
            if (outfile.empty()) {
                std::cout << text;
            } else {
                std::ofstream of(outfile);
                of << text;
            }
            if (rep.rejected()) return 2;
            return rep.all_passed() ? 0 : 1;
        }
        if (parse->parsed()) {
            std::string text = input;
            std::ifstream f(input);
            if (f.good()) {
                text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
            }
            wittkit::Presentation pres = wittkit::parse_presentation(text);
            std::string formatted = wittkit::format_presentation(pres);
            // round trip through the formatter
            if (!(wittkit::parse_presentation(formatted) == pres)) {
                std::cerr << "internal error: formatter round trip failed\n";
                return 1;
            }
            std::cout << formatted << "\n";
            if (pres.kind == wittkit::PresentationKind::Algebra) {
                auto a = wittkit::algebra_from_presentation(pres);
                std::cout << "algebra of dimension " << a.dim << " over F" << a.p << "\n";
            } else {
                auto m = wittkit::module_from_presentation(pres);
                std::cout << "module of order " << m.size() << " over Z/" << m.mod.q << "\n";
            }
            return 0;
        }
    } catch (const wittkit::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
