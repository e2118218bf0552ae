#pragma once

#include "lnrg/grid.hpp"
#include "lnrg/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lnrg
{

enum class ModelKind
{
    VectorD0,
    VectorQM,
    VectorField,
    Matrix,
    // large-N matrix quantum mechanics; variable is the eigenvalue mu
    MatrixQM,
};

struct ModelTag
{
    ModelKind kind = ModelKind::VectorD0;
    double dimension = 0.0; // only read for VectorField

    static ModelTag vector_d0() { return {ModelKind::VectorD0, 0.0}; }
    static ModelTag vector_qm() { return {ModelKind::VectorQM, 1.0}; }
    static ModelTag vector_field(double d);
    static ModelTag matrix() { return {ModelKind::Matrix, 0.0}; }
    static ModelTag matrix_qm() { return {ModelKind::MatrixQM, 1.0}; }

    bool is_vector() const noexcept { return kind == ModelKind::VectorD0 || kind == ModelKind::VectorQM || kind == ModelKind::VectorField; }
};

bool operator==(const ModelTag &a, const ModelTag &b);

std::string model_name(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

/// Polynomial V(rho) = sum_k c_k rho^k with its model convention.
///
/// Matrix potentials are stored in rho = mu^2/2, so that
/// V(mu) = mu^2/2 + g mu^4/4 becomes rho + g rho^2.
class Potential
{
public:
    Potential() = default;
    explicit Potential(std::vector<double> coeffs, ModelTag model = ModelTag::vector_d0());

    const std::vector<double> &coeffs() const noexcept { return m_coeffs; }
    const ModelTag &model() const noexcept { return m_model; }
    int degree() const noexcept { return static_cast<int>(m_coeffs.size()) - 1; }
    double coeff(int k) const { return k < static_cast<int>(m_coeffs.size()) ? m_coeffs[static_cast<std::size_t>(k)] : 0.0; }

    double value(double rho) const;
    double first(double rho) const;
    double second(double rho) const;

    /// Exact Taylor coefficients of V at x0 up to order K.
    TruncatedSeries taylor(double x0, int K) const;

    /// c_1 equals 1/2 (vector models) or 1 (matrix models).
    bool normalized() const;

    Potential with_model(ModelTag t) const { return Potential(m_coeffs, t); }
    Potential plus(const Potential &other) const;

private:
    std::vector<double> m_coeffs{0.0};
    ModelTag m_model;
};

double eval_V(const Potential &p, double rho);
double eval_dV(const Potential &p, double rho);
double eval_ddV(const Potential &p, double rho);

/// R as a function of V' for the given model: R = A (B V')^alpha.
double r_from_dV(const ModelTag &model, double dV);

/// dR/dV' at the given V'.
double r_jacobian(const ModelTag &model, double dV);

/// Inverse map, V' as a function of R.
double dV_from_r(const ModelTag &model, double R);

/// R(rho) for the potential; throws DomainError when V'(rho) <= 0.
double r_from_potential(const Potential &p, double rho);

/// Taylor coefficients of R at x0 (exact series composition).
TruncatedSeries r_taylor(const Potential &p, double x0, int K);

/// Gamma(1 - d/2) / (4 pi)^(d/2), for 0 < d < 4, d != 2.
double K_of_d(double d);

/// (2 K(d) / d) (2 V'(rho))^(d/2).
double local_determinant_density(const Potential &p, double d, double rho);

/// Degree m-1 polynomial whose saddle at rho = m-1 is of order m.
Potential multicritical_potential(int m);

/// Regular fixed point of the linearised flow, for VectorD0, VectorQM or Matrix.
Potential linear_fixed_potential(const ModelTag &model, int m);

/// The rescaling exponent that keeps the normalisation stationary.
double gamma_anomalous(const Potential &p, double rho_0 = 0.0);

/// `model=<tag> d=<real> coeffs=c0,c1,...`; d only for VectorField.
std::string format_potential(const Potential &p);
Potential parse_potential(std::string_view text);

/// R either computed from a potential or sampled on a grid, plus the
/// cutoff shift rho_0.
class RFunction
{
public:
    static RFunction analytic(Potential p, double rho_0 = 0.0);
    static RFunction sampled(GridFunction g, double rho_0 = 0.0);

    bool is_analytic() const noexcept { return m_potential.has_value(); }
    const Potential *potential() const noexcept { return m_potential ? &*m_potential : nullptr; }
    const GridFunction *samples() const noexcept { return m_samples ? &*m_samples : nullptr; }
    double rho_0() const noexcept { return m_rho0; }

    /// Throws DomainError where R is undefined.
    double value(double rho) const;
    std::optional<double> try_value(double rho) const;
    double derivative(double rho) const;

    /// Taylor coefficients c_0..c_K at x0 (K <= 5 for sampled data).
    std::vector<double> taylor(double x0, int K) const;

    /// Largest rho where samples exist (infinity for analytic R).
    double rho_max() const noexcept;

private:
    std::optional<Potential> m_potential;
    std::optional<GridFunction> m_samples;
    double m_rho0 = 0.0;
};

} // namespace lnrg
