#pragma once

#include "lnrg/grid.hpp"
#include "lnrg/potentials.hpp"
#include "lnrg/series.hpp"

#include <optional>
#include <vector>

namespace lnrg
{

struct Singularity
{
    bool exists = false;
    double R_modulus = 0.0;
    double rho_modulus = 0.0;
    int count = 0; // number of rotated copies for gamma = -1/n; 1 for generic gamma
};

struct FixedPointSolution
{
    double gamma = 0.0;
    std::optional<int> n; // set when gamma = -1/n
    std::vector<double> rho;
    std::vector<double> R;
    Singularity singularity;
};

/// Principal branch of R^(1 + 1/gamma) = R - rho on the given points (ascending,
/// starting at 0), by warm-started safeguarded Newton.
FixedPointSolution solve_fixed_point(double gamma, const std::vector<double> &rho_grid);

/// Single point of the principal branch.
double solve_fixed_point_at(double gamma, double rho);

/// Explicit n = 1, 2, 3 solutions of R^n - rho R^(n-1) - 1 = 0.
double closed_form(int n, double rho);

Singularity singularity(double gamma);

/// a_k = -gamma (1 + gamma (k-1))_(k-1) / k!, with a_0 = 1.
TruncatedSeries series_coeffs(double gamma, int K);

struct RadiusEstimate
{
    double ratio = 0.0;      // last ratio-test value
    double extrapolated = 0.0; // linear extrapolation in 1/k
};

/// Ratio-test radius from the coefficients, stepping by `period` (use n for
/// gamma = -1/n, whose singularities sit on n rays).
RadiusEstimate series_radius(const TruncatedSeries &s, int period);

/// |R(rho, gamma) - rho R(rho^(1/gamma), 1/gamma)^(-gamma)|
double duality_check(double gamma, double rho);

struct NonlinearH
{
    std::vector<double> rho;
    std::vector<double> h;
    std::vector<double> ode_residual; // -R h' + R' h + R - R R'
    double saddle_constraint = 0.0;   // 1 - h'(1) - R'(1)(1 - h(1)); NaN if 1 is off the grid
};

/// h = R [int_0^rho 1/R - ln R + ln R(0)] on a uniform grid starting at 0.
NonlinearH nonlinear_h(const RFunction &r, const UniformGrid &grid);

/// max |R^(1+1/gamma) - R + rho| over the solution.
double algebraic_residual(const FixedPointSolution &s);

/// max |R^(n-1) (R - rho) - 1| evaluated in long double; needs s.n.
double polynomial_residual(const FixedPointSolution &s);

/// n when gamma is -1/n to rounding, else nullopt.
std::optional<int> polynomial_index(double gamma);

/// Log-log slope of R - rho on [rho_lo, rho_hi] (expected 1 + 1/gamma).
double asymptotic_slope(double gamma, double rho_lo, double rho_hi, int points = 41);

} // namespace lnrg
