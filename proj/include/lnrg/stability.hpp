#pragma once

#include "lnrg/potentials.hpp"
#include "lnrg/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lnrg
{

struct BetaFixedPoint
{
    double g_star = 0.0;
    double beta_prime = 0.0;
};

struct BetaReport
{
    TruncatedSeries beta_coeffs; // beta(g) = sum b_k g^k
    std::vector<BetaFixedPoint> fixed_points;
    std::optional<double> derived_exponent; // string susceptibility at the nontrivial zero
    std::optional<double> exact_g_c;        // known exact critical coupling, for comparison
};

/// beta(g) read off the rho^2 coefficient of the d = 0 vector V-form flow
/// for V = rho/2 + g rho^2/4.
BetaReport beta_vector(int order = 2);

/// Same for the matrix flow with V(mu) = mu^2/2 + g mu^4/4.
BetaReport beta_matrix(int order = 2);

/// 2 + 2/beta'.
double string_susceptibility(double beta_prime);

struct Eigenvalue
{
    int index = 0; // p (vector/matrix) or q (QM)
    double kappa = 0.0;
};

struct ExcludedEigenvalue
{
    double kappa = 0.0;
    std::string reason;
};

struct SpectrumReport
{
    ModelTag model;
    int m = 0;
    std::vector<Eigenvalue> eigenvalues; // decreasing
    int positive_count = 0;
    std::vector<ExcludedEigenvalue> excluded;
};

/// Linear-approximation spectrum; model VectorD0 (vector), Matrix, or VectorQM.
SpectrumReport spectrum(const ModelTag &model, int m, int count);

/// h = A u^m + B u^(m-1) + C u^e with u = 1 - rho/m (rho = mu^2/2 for matrix).
struct EigenvectorDescriptor
{
    ModelTag model;
    int m = 0;
    double kappa = 0.0;
    double normalization = 0.0; // delta gamma (vector) or delta g (matrix)
    double A = 0.0, B = 0.0, C = 0.0;
    double exponent = 0.0; // e = m (1 - kappa)
    bool regular = false;  // e a nonnegative integer

    double value(double rho) const;
    double derivative(double rho) const;
    /// Inhomogeneous term of the eigen equation, (1/2) delta gamma rho u^(m-1).
    double source(double rho) const;
};

EigenvectorDescriptor eigenvector(const ModelTag &model, int m, double kappa);

/// Residual of the linearised fixed-point equation at rho, gamma taken from the
/// potential's own normalisation:
///   VectorD0  V + [1 - (1+gamma) rho] V' - 1/2,         gamma = V''(0)/V'(0)
///   VectorQM  (1-gamma) V + [1/2 - (1+gamma) rho] V' - 1/4, gamma = V''(0)/(4 V'(0))
///   Matrix    V + [1 - (1+gamma) rho] V' - 1,           gamma = V''(0)/V'(0)
double linear_fixed_point_residual(const Potential &p, double rho);

struct QmExponents
{
    double alpha_exp = 0.0;
    double vq_exp = 0.0;
};

QmExponents scaling_exponents_qm(int m, int q);

struct DoubleScaling
{
    double gamma_str = 0.0;
    double kappa_exp = 0.0;
};

DoubleScaling double_scaling_matrix(int m);

} // namespace lnrg
