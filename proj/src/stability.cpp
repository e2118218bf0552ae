#include "lnrg/stability.hpp"

#include "lnrg/error.hpp"
#include "lnrg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lnrg
{

namespace
{

// interpolate beta at integer nodes 0..order and return monomial coefficients
TruncatedSeries fit_polynomial(const std::function<double(double)> &f, int order)
{
    const int n = order + 1;
    std::vector<double> x(static_cast<std::size_t>(n)), dd(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // nodes symmetric around 0 keep the Vandermonde well scaled
        x[static_cast<std::size_t>(i)] = i - order / 2;
        dd[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
    }
    for (int k = 1; k < n; ++k)
        for (int i = n - 1; i >= k; --i)
            dd[static_cast<std::size_t>(i)] = (dd[static_cast<std::size_t>(i)] - dd[static_cast<std::size_t>(i - 1)]) /
                                              (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - k)]);
    std::vector<double> poly(static_cast<std::size_t>(n), 0.0);
    for (int k = n - 1; k >= 0; --k) {
        std::vector<double> next(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
            if (j + 1 < n)
                next[static_cast<std::size_t>(j + 1)] += poly[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(j)] -= x[static_cast<std::size_t>(k)] * poly[static_cast<std::size_t>(j)];
        }
        next[0] += dd[static_cast<std::size_t>(k)];
        poly = std::move(next);
    }
    return TruncatedSeries(std::move(poly));
}

std::vector<BetaFixedPoint> beta_zeros(const TruncatedSeries &b)
{
    // effective degree after dropping rounding-level tail
    double scale = 0.0;
    for (double c : b.coeffs())
        scale = std::max(scale, std::abs(c));
    int deg = b.order();
    while (deg > 0 && std::abs(b[deg]) <= 1e-12 * scale)
        --deg;
    if (deg > 2)
        throw DomainError("beta function of degree > 2 not handled");
    auto deriv = [&](double g) {
        double d = 0.0;
        for (int k = deg; k >= 1; --k)
            d = d * g + k * b[k];
        return d;
    };
    std::vector<double> roots;
    if (deg == 1)
        roots = {-b[0] / b[1]};
    else if (deg == 2) {
        const double A = b[2], B = b[1], C = b[0];
        const double disc = B * B - 4 * A * C;
        if (disc >= 0) {
            const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
            const double r1 = q / A;
            const double r2 = (q != 0.0) ? C / q : 0.0;
            roots = {r1, r2};
        }
    }
    std::sort(roots.begin(), roots.end(), [](double a, double c) { return a > c; });
    std::vector<BetaFixedPoint> fps;
    for (double g : roots)
        fps.push_back({g + 0.0, deriv(g)});
    return fps;
}

} // namespace

BetaReport beta_vector(int order)
{
    if (order < 2)
        throw DomainError("beta_vector: order >= 2");
    BetaReport rep;
    rep.beta_coeffs = fit_polynomial(
        [](double g) {
            const Potential p({0.0, 0.5, g / 4.0}, ModelTag::vector_d0());
            // flow of the rho^2/4 coefficient is -beta
            return -4.0 * flow_rhs_V_series(p, 0.0, 2).dV[2];
        },
        order);
    rep.fixed_points = beta_zeros(rep.beta_coeffs);
    rep.exact_g_c = -0.25;
    return rep;
}

BetaReport beta_matrix(int order)
{
    if (order < 2)
        throw DomainError("beta_matrix: order >= 2");
    BetaReport rep;
    rep.beta_coeffs = fit_polynomial(
        [](double g) {
            // mu^2/2 + g mu^4/4 in rho = mu^2/2
            const Potential p({0.0, 1.0, g}, ModelTag::matrix());
            return -flow_rhs_V_series(p, 0.0, 2).dV[2];
        },
        order);
    rep.fixed_points = beta_zeros(rep.beta_coeffs);
    rep.exact_g_c = -1.0 / 12.0;
    for (const auto &fp : rep.fixed_points)
        if (fp.g_star != 0.0 && fp.beta_prime != 0.0)
            rep.derived_exponent = string_susceptibility(fp.beta_prime);
    return rep;
}

double string_susceptibility(double beta_prime)
{
    if (beta_prime == 0.0)
        throw DomainError("string_susceptibility: beta' = 0");
    return 2.0 + 2.0 / beta_prime;
}

SpectrumReport spectrum(const ModelTag &model, int m, int count)
{
    if (m < 1)
        throw DomainError("spectrum: m >= 1");
    if (count < 1)
        throw DomainError("spectrum: count >= 1");
    SpectrumReport rep;
    rep.model = model;
    rep.m = m;
    switch (model.kind) {
    case ModelKind::VectorD0:
    case ModelKind::Matrix: {
        rep.excluded = {{0.0, "h0 + h1 vanishes (kappa = 0)"}, {1.0 / m, "h0 + h1 vanishes (kappa = 1/m)"}};
        for (int p = 0; static_cast<int>(rep.eigenvalues.size()) < count; ++p) {
            if (p == m || p == m - 1)
                continue;
            rep.eigenvalues.push_back({p, 1.0 - static_cast<double>(p) / m});
        }
        for (int p = 0; p < m - 1; ++p)
            ++rep.positive_count;
        break;
    }
    case ModelKind::VectorQM: {
        rep.excluded = {{0.0, "kappa = 0 (q = m) carries no regular eigenvector"}};
        for (int q = 0; static_cast<int>(rep.eigenvalues.size()) < count; ++q) {
            if (q == m)
                continue;
            rep.eigenvalues.push_back({q, 4.0 * (m - q) / (m + 1)});
        }
        rep.positive_count = m;
        break;
    }
    default: throw DomainError("spectrum: unsupported model " + model_name(model.kind));
    }
    std::stable_sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const Eigenvalue &a, const Eigenvalue &b) { return a.kappa > b.kappa; });
    return rep;
}

EigenvectorDescriptor eigenvector(const ModelTag &model, int m, double kappa)
{
    if (model.kind != ModelKind::VectorD0 && model.kind != ModelKind::Matrix)
        throw DomainError("eigenvector: vector or matrix model only");
    if (m < 1)
        throw DomainError("eigenvector: m >= 1");
    if (kappa == 0.0 || std::abs(m * kappa - 1.0) <= 1e-14)
        throw DomainError("eigenvector: kappa = 0 and kappa = 1/m are excluded");
    EigenvectorDescriptor e;
    e.model = model;
    e.m = m;
    e.kappa = kappa;
    // vector: delta gamma = 2/m; matrix: prefactor 2 m delta g = 1
    e.normalization = model.kind == ModelKind::VectorD0 ? 2.0 / m : 1.0 / (2.0 * m);
    e.A = 1.0 / kappa;
    e.B = m / (1.0 - m * kappa);
    // h'(0) = 0, equivalently h(0) = 0
    e.C = -1.0 / (kappa * (1.0 - m * kappa));
    e.exponent = m * (1.0 - kappa);
    const double r = std::round(e.exponent);
    e.regular = r >= 0.0 && std::abs(e.exponent - r) <= 1e-12 * std::max(1.0, std::abs(e.exponent));
    if (e.regular)
        e.exponent = r;
    return e;
}

double EigenvectorDescriptor::value(double rho) const
{
    const double u = 1.0 - rho / m;
    return A * std::pow(u, m) + B * std::pow(u, m - 1) + C * std::pow(u, exponent);
}

double EigenvectorDescriptor::derivative(double rho) const
{
    const double u = 1.0 - rho / m;
    auto dpow = [u](double k) { return k == 0.0 ? 0.0 : k * std::pow(u, k - 1); };
    return -(A * dpow(m) + B * dpow(m - 1) + C * dpow(exponent)) / m;
}

double EigenvectorDescriptor::source(double rho) const
{
    return rho * std::pow(1.0 - rho / m, m - 1) / m;
}

double linear_fixed_point_residual(const Potential &p, double rho)
{
    const double v1 = p.first(0.0), v2 = p.second(0.0);
    if (v1 == 0.0)
        throw DomainError("linear_fixed_point_residual: V'(0) = 0");
    const double V = p.value(rho), dV = p.first(rho);
    switch (p.model().kind) {
    case ModelKind::VectorD0: {
        const double g = v2 / v1;
        return V + (1.0 - (1.0 + g) * rho) * dV - 0.5;
    }
    case ModelKind::VectorQM: {
        const double g = v2 / (4.0 * v1);
        return (1.0 - g) * V + (0.5 - (1.0 + g) * rho) * dV - 0.25;
    }
    case ModelKind::Matrix: {
        const double g = v2 / v1;
        return V + (1.0 - (1.0 + g) * rho) * dV - 1.0;
    }
    default: throw DomainError("linear_fixed_point_residual: unsupported model " + model_name(p.model().kind));
    }
}

QmExponents scaling_exponents_qm(int m, int q)
{
    if (m < 3 || q < 1 || q > m)
        throw DomainError("scaling_exponents_qm: needs m >= 3 and 1 <= q <= m");
    return {static_cast<double>(m - 2) / (m + 2), -2.0 * (m - q) / (m + 2) + 0.0};
}

DoubleScaling double_scaling_matrix(int m)
{
    if (m < 2)
        throw DomainError("double_scaling_matrix: m >= 2");
    return {-1.0 / m, (2.0 + 1.0 / m) / 2.0};
}

} // namespace lnrg
