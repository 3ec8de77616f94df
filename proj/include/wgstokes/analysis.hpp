#ifndef WGSTOKES_ANALYSIS_HPP
#define WGSTOKES_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgstokes/manufactured.hpp"
#include "wgstokes/system.hpp"

namespace wgs {

using VectorFn = std::function<std::array<double, 2>(double, double)>;

/// Q_h u = {Q_0 u, Q_b u}: element-wise and edge-wise L2 projections of a
/// velocity field. `exact_degree` bounds the polynomial degree of `u`.
VelocityField project_velocity(const Discretization& d, const VectorFn& u, int exact_degree);
VelocityField project_velocity(const Discretization& d, const Polynomial& u1,
                               const Polynomial& u2);

/// Element-wise L2 projection onto P_{k+1}(T).
Eigen::VectorXd project_pressure(const Discretization& d, const Polynomial& p);

struct ErrorTriple {
    double l2_velocity = 0.0; // ||Q_0 u - u_0||
    double energy = 0.0;      // |||Q_h u - u_h|||
    double l2_pressure = 0.0; // ||p - p_h||
};

ErrorTriple compute_errors(const Discretization& d, const Solution& sol,
                           const ManufacturedCase& mc);

/// ||Q_h p - p_h||, the projected-pressure variant (diagnostic).
double projected_pressure_error(const Discretization& d, const Solution& sol,
                                const ManufacturedCase& mc);

struct ConvergenceLevel {
    int level = 0;
    int n = 0;
    double h = 0.0;
    int n_elements = 0;
    int n_dofs = 0;
    ErrorTriple errors;
    double divergence_residual = 0.0;
    double solver_residual = 0.0;
    std::optional<double> rate_l2_velocity;
    std::optional<double> rate_energy;
    std::optional<double> rate_l2_pressure;
    bool exact = false; // all errors at roundoff; rates reported as "exact"
    double time_ms = 0.0;
    // optional diagnostics (--diagnostics)
    std::optional<double> beta_h;                       // numerical inf-sup constant
    std::optional<double> norm_ratio_min, norm_ratio_max; // |||v||| / ||v||_{1,h} bracket
};

struct ConvergenceReport {
    std::string grid;
    std::string case_name;
    int k = 0;
    std::vector<ConvergenceLevel> levels;
};

/// Fill the rate columns: r = log(e_prev/e)/log(h_prev/h); a rate is left unset
/// when either error sits at roundoff level (guards against plateaus).
void compute_rates(ConvergenceReport& report);

} // namespace wgs

#endif
