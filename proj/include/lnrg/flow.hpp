#pragma once

#include "lnrg/grid.hpp"
#include "lnrg/potentials.hpp"
#include "lnrg/series.hpp"

#include <optional>
#include <span>
#include <vector>

namespace lnrg
{

/// R(rho) on a uniform grid at RG time tau = ln(lambda).
struct FlowState
{
    UniformGrid grid;
    std::vector<double> R;
    double tau = 0.0;
    double gamma = 0.0;
    std::optional<double> rho_c;
    double rho_0 = 0.0;
};

/// Builds a state and fills gamma and rho_c from the samples.
FlowState make_flow_state(UniformGrid grid, std::vector<double> R, double rho_0 = 0.0, double tau = 0.0);

/// -(R(0) + rho_0) R'(0) / R(0) with a one-sided 5-point R'(0); 0 when R(0) = 0.
double boundary_gamma(std::span<const double> R, double h, double rho_0);

/// First root of R(rho) = rho - rho_0 on the grid, if any.
std::optional<double> saddle_of(const FlowState &s);

/// gamma R - (1 + gamma) rho R' + (R + rho_0) R' with 4th-order R'.
std::vector<double> flow_rhs_R(const FlowState &state, std::optional<double> gamma_override = std::nullopt);

struct FlowOptions
{
    double cfl = 0.5;
    // Jameson-type smoothness sensor level above which upwinding switches on
    double sensor_threshold = 1e-3;
};

/// RK4 in tau with R(0) pinned; throws FlowError if R stops being positive.
FlowState evolve(const FlowState &state, double dtau, int steps, const FlowOptions &opt = {});

/// States after every `record_every` steps, starting with the initial one.
std::vector<FlowState> evolve_history(const FlowState &state, double dtau, int steps, int record_every = 1,
                                      const FlowOptions &opt = {});

/// N delta V about rho = 0 as a series, with gamma fixed by the model's
/// normalisation (delta V'(0) = 0; delta V''(0) = 0 for MatrixQM).
struct VFlowSeries
{
    double gamma = 0.0;
    TruncatedSeries dV; // N delta V
};
VFlowSeries flow_rhs_V_series(const Potential &p, double rho_0, int order);

struct VFlowGrid
{
    double gamma = 0.0;
    std::vector<double> values; // N delta V at the points
};
VFlowGrid flow_rhs_V(const Potential &p, std::span<const double> rho, double rho_0);

/// N delta V at the points for an explicitly supplied gamma.
std::vector<double> flow_rhs_V_with_gamma(const Potential &p, std::span<const double> rho, double rho_0, double gamma);

/// max |d/drho(N delta V) * dR/dV' - flow_rhs_R| over the grid for R built from
/// p. The R form uses its boundary gamma except for MatrixQM, whose gamma
/// comes from the V-form normalisation.
double vr_form_mismatch(const Potential &p, const UniformGrid &grid, double rho_0 = 0.0);

struct SaddleTrackRow
{
    double tau = 0.0;
    std::optional<double> rho_c;
    double gamma = 0.0;
};

struct DriftRow
{
    double tau_mid = 0.0;
    double dln_rho_dtau = 0.0;
    double gamma_mean = 0.0;
    double residual = 0.0;
};

struct SaddleTrack
{
    std::vector<SaddleTrackRow> rows;
    std::vector<DriftRow> drift;
    double max_drift_residual = 0.0;
    bool any_missing = false;
};

/// rho_c(tau) along a history and the check d ln rho_c / d tau = gamma.
SaddleTrack track_saddle(const std::vector<FlowState> &history);

/// Linear-approximation vector flow V_tau = V + [1 - (1+gamma) rho] V' - 1/2,
/// gamma = V''(0)/V'(0).
struct LinearFlowState
{
    UniformGrid grid;
    std::vector<double> V;
    double tau = 0.0;
};

std::vector<double> linear_flow_rhs(const LinearFlowState &s);
LinearFlowState evolve_linear_potential(const LinearFlowState &s, double dtau, int steps);

/// Least-squares slope of ln(norm) against tau.
double growth_exponent(const std::vector<double> &tau, const std::vector<double> &norm);

} // namespace lnrg
