#pragma once

#include "lnrg/potentials.hpp"

#include <vector>

namespace lnrg
{

struct Domain
{
    double lo = 0.0;
    double hi = 10.0;
};

struct SaddleOptions
{
    int panels = 4096;
    double newton_tol = 1e-12;
    // relative size below which a Taylor coefficient of F counts as zero
    double order_threshold = 1e-6;
    int max_multiplicity = 8;
};

struct SaddleRoot
{
    double rho = 0.0;
    int multiplicity = 1; // of the zero of F = R - rho + rho_0
    int order_m = 2;      // multiplicity + 1
    double residual = 0.0;
};

struct SaddleReport
{
    std::vector<SaddleRoot> roots;
    std::vector<double> rho_c;
    int order_m = 0; // of the first root; 0 when there is none
    // two-term large-N free energy, filled for analytic VectorD0 R with a simple root
    double Z_leading = 0.0; // coefficient of N
    double Z_correction = 0.0;
};

/// All roots of R(rho) - rho + rho_0 on the domain, with criticality order.
SaddleReport solve_saddle(const RFunction &r, double rho_0, Domain domain, const SaddleOptions &opt = {});

/// N [1/2 - V(rho_c) + 1/2 ln rho_c] - 1/2 ln[2 rho_c^2 V''(rho_c) + 1].
double free_energy_largeN(const Potential &p, int N);

/// ln of N-normalised int d rho/rho exp(-N sigma), computed in the log domain.
double quadrature_Z(const Potential &p, int N);

struct CollapseRow
{
    int N = 0;
    double v = 0.0;
    double x = 0.0;
    double deltaZ = 0.0;
};

/// deltaZ = Z(V_c + v z^q) - Z(V_c) with z = 1 - rho/(m-1), x = v N^(1-q/m).
/// Rows ordered by (N, v).
std::vector<CollapseRow> scaling_collapse(int m, int q, const std::vector<double> &v_list, const std::vector<int> &N_list);

/// Same sweep with v chosen per N so that x runs over x_list exactly.
std::vector<CollapseRow> scaling_collapse_x(int m, int q, const std::vector<double> &x_list, const std::vector<int> &N_list);

struct CollapseQuality
{
    double defect = 0.0;  // max over N pairs of |deltaZ_i(x) - deltaZ_j(x)|
    double max_abs = 0.0; // max |deltaZ| over the window
};

/// Compare curves on a common x grid inside [x_lo, x_hi] by linear interpolation.
CollapseQuality collapse_quality(const std::vector<CollapseRow> &rows, double x_lo, double x_hi);

double scaling_exponent_d0(int m, int q);

struct OracleRow
{
    int N = 0;
    double Z_quad = 0.0;
    double Z_asym = 0.0;
    double diff = 0.0; // Z_quad - Z_asym
};

std::vector<OracleRow> oracle_table(const Potential &p, const std::vector<int> &N_list);

} // namespace lnrg
