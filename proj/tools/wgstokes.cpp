#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wgstokes/study.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Stabilizer-free weak Galerkin Stokes solver: manufactured-solution "
                 "convergence studies on polygonal meshes"};

    wgs::StudyConfig config;
    std::string levels = "3..5";
    std::string out_path;

    app.add_option("--k", config.k, "polynomial order of the interior velocity space (0..4)")
        ->capture_default_str();
    app.add_option("--grid", config.grid, "square | quad | polygon | file:<path>")
        ->capture_default_str();
    app.add_option("--levels", levels, "inclusive refinement range A..B (n = 2^level)")
        ->capture_default_str();
    app.add_option("--case", config.case_name, "s1 | linear | stream:<coeff-file>")
        ->capture_default_str();
    app.add_option("--quad-bump", config.quad_bump, "extra quadrature exactness degree")
        ->capture_default_str();
    app.add_option("--format", config.format, "markdown | csv | json")->capture_default_str();
    app.add_option("--tol", config.solver_tol, "solver relative residual tolerance")
        ->capture_default_str();
    app.add_option("--dump-system", config.dump_dir,
                   "directory for Matrix Market system dumps, one per level");
    app.add_flag("--diagnostics", config.diagnostics,
                 "add inf-sup and norm-equivalence diagnostics");
    app.add_option("--out", out_path, "write the report to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    const auto sep = levels.find("..");
    try {
        if (sep == std::string::npos) {
            config.level_min = config.level_max = std::stoi(levels);
        } else {
            config.level_min = std::stoi(levels.substr(0, sep));
            config.level_max = std::stoi(levels.substr(sep + 2));
        }
        wgs::validate(config);
        const wgs::ConvergenceReport report = wgs::run_study(config);
        const std::string text = wgs::emit(report, config, config.format);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            out << text;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
