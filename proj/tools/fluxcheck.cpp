#include "fluxcheck/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace fluxcheck;
    CLI::App app{"Exact verification of eleven-dimensional flux backgrounds"};
    std::string manifest_path;
    std::optional<std::string> only;
    std::optional<std::string> format;
    std::vector<std::string> sets;
    std::vector<std::string> evals;
    app.add_option("--manifest", manifest_path, "Manifest file (JSON)")->required();
    app.add_option("--only", only, "Run a single background");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--set", sets, "Override a setting, e.g. c=1/2");
    app.add_option("--eval", evals, "Evaluate residuals at a point, e.g. x1=1,x2=0");
    CLI11_PARSE(app, argc, argv);

    try {
        const cli::Manifest manifest = cli::parse_manifest(manifest_path);
        cli::RunOptions opts;
        opts.only = only;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || s.substr(0, eq) != "c") throw cli::ManifestError("--set: expected c=<rational>");
            try {
                opts.c = Rational::parse(s.substr(eq + 1));
            } catch (const ParseError& e) {
                throw cli::ManifestError(std::string("--set: ") + e.what());
            }
        }
        for (const auto& e : evals) opts.points.push_back(cli::parse_point(e));
        const cli::ReportDocument doc = cli::run(manifest, opts);
        const std::string fmt = format.value_or(manifest.settings.format);
        std::cout << (fmt == "json" ? cli::render_json(doc) : cli::render_text(doc));
        return cli::exit_code(doc);
    } catch (const Error& e) {
        std::cerr << "fluxcheck: " << e.what() << "\n";
        return 2;
    }
}
