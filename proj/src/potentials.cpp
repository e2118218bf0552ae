#include "lnrg/potentials.hpp"

#include "lnrg/error.hpp"
#include "lnrg/format.hpp"
#include "lnrg/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lnrg
{

ModelTag ModelTag::vector_field(double d)
{
    if (!(d > 0.0 && d < 4.0) || d == 2.0)
        throw DomainError("VectorField needs 0 < d < 4 and d != 2");
    return {ModelKind::VectorField, d};
}

bool operator==(const ModelTag &a, const ModelTag &b)
{
    if (a.kind != b.kind)
        return false;
    return a.kind != ModelKind::VectorField || a.dimension == b.dimension;
}

std::string model_name(ModelKind k)
{
    switch (k) {
    case ModelKind::VectorD0: return "VectorD0";
    case ModelKind::VectorQM: return "VectorQM";
    case ModelKind::VectorField: return "VectorField";
    case ModelKind::Matrix: return "Matrix";
    case ModelKind::MatrixQM: return "MatrixQM";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view s)
{
    for (auto k : {ModelKind::VectorD0, ModelKind::VectorQM, ModelKind::VectorField, ModelKind::Matrix, ModelKind::MatrixQM})
        if (s == model_name(k))
            return k;
    throw DomainError("unknown model tag '" + std::string(s) + "'");
}

Potential::Potential(std::vector<double> coeffs, ModelTag model) : m_coeffs(std::move(coeffs)), m_model(model)
{
    if (m_coeffs.empty())
        m_coeffs.push_back(0.0);
    if (m_model.kind == ModelKind::VectorField)
        ModelTag::vector_field(m_model.dimension); // validates d
}

double Potential::value(double rho) const
{
    double acc = 0.0;
    for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it)
        acc = acc * rho + *it;
    return acc;
}

double Potential::first(double rho) const
{
    double acc = 0.0;
    for (int k = degree(); k >= 1; --k)
        acc = acc * rho + k * m_coeffs[static_cast<std::size_t>(k)];
    return acc;
}

double Potential::second(double rho) const
{
    double acc = 0.0;
    for (int k = degree(); k >= 2; --k)
        acc = acc * rho + k * (k - 1) * m_coeffs[static_cast<std::size_t>(k)];
    return acc;
}

TruncatedSeries Potential::taylor(double x0, int K) const
{
    std::vector<double> c(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k <= K && k <= degree(); ++k) {
        double s = 0.0;
        double binom = 1.0; // C(j, k)
        double xp = 1.0;    // x0^(j-k)
        for (int j = k; j <= degree(); ++j) {
            s += binom * m_coeffs[static_cast<std::size_t>(j)] * xp;
            binom = binom * (j + 1) / (j + 1 - k);
            xp *= x0;
        }
        c[static_cast<std::size_t>(k)] = s;
    }
    return TruncatedSeries(std::move(c));
}

bool Potential::normalized() const
{
    switch (m_model.kind) {
    case ModelKind::VectorD0:
    case ModelKind::VectorQM:
    case ModelKind::VectorField: return coeff(1) == 0.5;
    case ModelKind::Matrix: return coeff(1) == 1.0;
    case ModelKind::MatrixQM: return true; // fixed by the kinetic term instead
    }
    return false;
}

Potential Potential::plus(const Potential &other) const
{
    std::vector<double> c(std::max(m_coeffs.size(), other.m_coeffs.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = coeff(static_cast<int>(k)) + other.coeff(static_cast<int>(k));
    return Potential(std::move(c), m_model);
}

double eval_V(const Potential &p, double rho) { return p.value(rho); }
double eval_dV(const Potential &p, double rho) { return p.first(rho); }
double eval_ddV(const Potential &p, double rho) { return p.second(rho); }

namespace
{

struct PowerMap
{
    double A, B, alpha; // R = A (B V')^alpha
};

PowerMap power_map(const ModelTag &m)
{
    switch (m.kind) {
    case ModelKind::VectorD0: return {1.0, 2.0, -1.0};
    case ModelKind::VectorQM: return {1.0, 8.0, -0.5};
    case ModelKind::VectorField: return {K_of_d(m.dimension), 2.0, m.dimension / 2.0 - 1.0};
    case ModelKind::Matrix: return {1.0, 1.0, -1.0};
    case ModelKind::MatrixQM: return {1.0, 2.0, -0.5};
    }
    throw DomainError("unknown model");
}

} // namespace

double r_from_dV(const ModelTag &model, double dV)
{
    if (!(dV > 0.0))
        throw DomainError("V' must be positive for the V -> R map");
    const auto pm = power_map(model);
    return pm.A * std::pow(pm.B * dV, pm.alpha);
}

double r_jacobian(const ModelTag &model, double dV)
{
    const auto pm = power_map(model);
    return pm.alpha * r_from_dV(model, dV) / dV;
}

double dV_from_r(const ModelTag &model, double R)
{
    const auto pm = power_map(model);
    const double q = R / pm.A;
    if (!(q > 0.0))
        throw DomainError("R has the wrong sign for this model");
    return std::pow(q, 1.0 / pm.alpha) / pm.B;
}

double r_from_potential(const Potential &p, double rho) { return r_from_dV(p.model(), p.first(rho)); }

TruncatedSeries r_taylor(const Potential &p, double x0, int K)
{
    const auto dV = p.taylor(x0, K + 1).derivative();
    if (!(dV[0] > 0.0))
        throw DomainError("V' must be positive for the V -> R map");
    const auto pm = power_map(p.model());
    return series_scale(series_pow(series_scale(dV, pm.B), pm.alpha), pm.A);
}

double K_of_d(double d)
{
    if (!(d > 0.0 && d < 4.0) || d == 2.0)
        throw DomainError("K(d) needs 0 < d < 4 and d != 2");
    return gamma_fn(1.0 - d / 2.0) / std::pow(4.0 * std::numbers::pi, d / 2.0);
}

double local_determinant_density(const Potential &p, double d, double rho)
{
    const double dV = p.first(rho);
    if (!(dV > 0.0))
        throw DomainError("V' must be positive");
    return 2.0 * K_of_d(d) / d * std::pow(2.0 * dV, d / 2.0);
}

namespace
{

// sign * C(n, j) * num^j / den, as a single rounding where the parts are exact
double binomial_term(int n, int j, double num_pow_base, double den)
{
    const double sign = (j % 2 == 1) ? 1.0 : -1.0; // (-1)^(j+1)
    return sign * static_cast<double>(binomial(n, j)) * std::pow(num_pow_base, j) / den;
}

} // namespace

Potential multicritical_potential(int m)
{
    if (m < 2)
        throw DomainError("multicritical_potential needs m >= 2");
    // V' = [1 - (1 - rho/(m-1))^(m-1)] / (2 rho); integrate term by term
    std::vector<double> c(static_cast<std::size_t>(m), 0.0);
    const double a = m - 1;
    for (int j = 1; j <= m - 1; ++j)
        c[static_cast<std::size_t>(j)] = binomial_term(m - 1, j, 1.0, 2.0 * j * std::pow(a, j));
    return Potential(std::move(c), ModelTag::vector_d0());
}

Potential linear_fixed_potential(const ModelTag &model, int m)
{
    if (m < 1)
        throw DomainError("linear_fixed_potential needs m >= 1");
    std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
    for (int j = 1; j <= m; ++j) {
        switch (model.kind) {
        case ModelKind::VectorD0: // 1/2 - 1/2 (1 - rho/m)^m
            c[static_cast<std::size_t>(j)] = binomial_term(m, j, 1.0, 2.0 * std::pow(m, j));
            break;
        case ModelKind::VectorQM: // (1+m)/(8m) [1 - (1 - 4 rho/(m+1))^m]
            c[static_cast<std::size_t>(j)] = binomial_term(m, j, 4.0, 8.0 * m * std::pow(m + 1, j) / (m + 1));
            break;
        case ModelKind::Matrix: // 1 - (1 - rho/m)^m
            c[static_cast<std::size_t>(j)] = binomial_term(m, j, 1.0, std::pow(m, j));
            break;
        default: throw DomainError("linear_fixed_potential: unsupported model " + model_name(model.kind));
        }
    }
    return Potential(std::move(c), model);
}

double gamma_anomalous(const Potential &p, double rho_0)
{
    if (p.model().kind == ModelKind::MatrixQM) {
        // delta V''(0) = 0 for (1-eta) V - (1+eta) mu V' + sqrt(2V') + rho_0 V'
        const double v1 = p.coeff(1), v2 = 2 * p.coeff(2), v3 = 6 * p.coeff(3);
        if (!(v1 > 0.0) || v2 == 0.0)
            throw DomainError("MatrixQM normalisation needs V'(0) > 0 and V''(0) != 0");
        const double s = std::sqrt(2 * v1);
        return (-v2 + v3 / s - v2 * v2 / (s * s * s) + rho_0 * v3) / (3 * v2);
    }
    const auto r = r_taylor(p, 0.0, 1);
    return -(r[0] + rho_0) * r[1] / r[0];
}

std::string format_potential(const Potential &p)
{
    std::ostringstream os;
    os << "model=" << model_name(p.model().kind);
    if (p.model().kind == ModelKind::VectorField)
        os << " d=" << fmt_double(p.model().dimension);
    os << " coeffs=";
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
        os << (k ? "," : "") << fmt_double(p.coeffs()[k]);
    return os.str();
}

Potential parse_potential(std::string_view text)
{
    std::optional<ModelKind> kind;
    std::optional<double> d;
    std::optional<std::vector<double>> coeffs;
    std::istringstream is{std::string(text)};
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw DomainError("potential: expected key=value, got '" + tok + "'");
        auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "model")
            kind = parse_model_kind(val);
        else if (key == "d")
            d = parse_double(val);
        else if (key == "coeffs")
            coeffs = parse_double_list(val);
        else
            throw DomainError("potential: unknown key '" + key + "'");
    }
    if (!coeffs)
        throw DomainError("potential: missing coeffs=");
    ModelTag tag{kind.value_or(ModelKind::VectorD0), 0.0};
    switch (tag.kind) {
    case ModelKind::VectorField:
        if (!d)
            throw DomainError("potential: VectorField needs d=");
        tag = ModelTag::vector_field(*d);
        break;
    case ModelKind::VectorQM:
    case ModelKind::MatrixQM: tag.dimension = 1.0; break;
    default: break;
    }
    return Potential(std::move(*coeffs), tag);
}

RFunction RFunction::analytic(Potential p, double rho_0)
{
    RFunction r;
    r.m_potential = std::move(p);
    r.m_rho0 = rho_0;
    return r;
}

RFunction RFunction::sampled(GridFunction g, double rho_0)
{
    RFunction r;
    r.m_samples = std::move(g);
    r.m_rho0 = rho_0;
    return r;
}

double RFunction::value(double rho) const
{
    if (m_potential)
        return r_from_potential(*m_potential, rho);
    return m_samples->interpolate(rho);
}

std::optional<double> RFunction::try_value(double rho) const
{
    if (m_potential) {
        const double dV = m_potential->first(rho);
        if (!(dV > 0.0))
            return std::nullopt;
        return r_from_dV(m_potential->model(), dV);
    }
    const auto &g = m_samples->grid();
    if (rho < g.lo || rho > g.hi)
        return std::nullopt;
    return m_samples->interpolate(rho);
}

double RFunction::derivative(double rho) const
{
    if (m_potential)
        return r_taylor(*m_potential, rho, 1)[1];
    return m_samples->local_taylor(rho, 1)[1];
}

std::vector<double> RFunction::taylor(double x0, int K) const
{
    if (m_potential) {
        const auto s = r_taylor(*m_potential, x0, K);
        return {s.coeffs().begin(), s.coeffs().end()};
    }
    return m_samples->local_taylor(x0, K);
}

double RFunction::rho_max() const noexcept
{
    if (m_potential)
        return std::numeric_limits<double>::infinity();
    return m_samples->grid().hi;
}

} // namespace lnrg
