#ifndef WGSTOKES_STUDY_HPP
#define WGSTOKES_STUDY_HPP

#include <string>

#include "wgstokes/analysis.hpp"

namespace wgs {

struct StudyConfig {
    int k = 1;
    std::string grid = "square"; // square | quad | polygon | file:<path>
    int level_min = 3;
    int level_max = 5;
    std::string case_name = "s1";
    int quad_bump = 0;
    std::string format = "markdown"; // markdown | csv | json
    double solver_tol = 1e-10;
    std::string dump_dir;    // Matrix Market dumps per level when nonempty
    bool diagnostics = false; // adds inf-sup and norm-equivalence checks
};

void validate(const StudyConfig& config);

PolyMesh make_grid(const std::string& grid, int level);

ConvergenceReport run_study(const StudyConfig& config);

std::string emit(const ConvergenceReport& report, const StudyConfig& config,
                 const std::string& format);

} // namespace wgs

#endif
