#include "lnrg/fixedpoint.hpp"

#include "lnrg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lnrg
{

std::optional<int> polynomial_index(double gamma)
{
    if (!(gamma < 0.0))
        return std::nullopt;
    const double n = std::round(-1.0 / gamma);
    if (n < 1.0 || n > 1e6)
        return std::nullopt;
    if (std::abs(gamma + 1.0 / n) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(gamma))
        return static_cast<int>(n);
    return std::nullopt;
}

namespace
{

using ld = long double;

ld ipow(ld x, int k)
{
    ld r = 1.0L;
    for (int i = 0; i < k; ++i)
        r *= x;
    return r;
}

// f(R) with f decreasing on the bracket, f(lo) >= 0 >= f(hi)
struct Equation
{
    std::optional<int> n;
    ld a;  // 1 + 1/gamma
    ld rho;

    void eval(ld R, ld &f, ld &df) const
    {
        if (n) {
            // -(R^(n-1) (R - rho) - 1)
            const int k = *n;
            const ld p1 = ipow(R, k - 1);
            const ld p2 = (k >= 2) ? ipow(R, k - 2) : 0.0L;
            f = -(p1 * (R - rho) - 1.0L);
            df = -((k - 1) * p2 * (R - rho) + p1);
        } else {
            const ld Ra = std::pow(R, a);
            f = Ra - R + rho;
            df = a * Ra / R - 1.0L;
        }
    }
};

double solve_point(double gamma, std::optional<int> n, double rho, double guess)
{
    if (rho == 0.0)
        return 1.0;
    const ld a = 1.0L + 1.0L / static_cast<ld>(gamma);
    Equation eq{n, a, static_cast<ld>(rho)};
    ld lo = 1.0L;
    ld hi = 1.0L + static_cast<ld>(rho) / (1.0L - std::max(a, 0.0L));
    if (n && *n == 1)
        return rho + 1.0;
    ld x = std::clamp(static_cast<ld>(guess), lo, hi);
    if (!(x > lo && x < hi))
        x = 0.5L * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        ld f, df;
        eq.eval(x, f, df);
        if (f == 0.0L)
            return static_cast<double>(x);
        if (f > 0.0L)
            lo = x;
        else
            hi = x;
        ld xn = (df != 0.0L) ? x - f / df : 0.5L * (lo + hi);
        if (!(xn > lo && xn < hi))
            xn = 0.5L * (lo + hi);
        const ld step = std::abs(xn - x);
        x = xn;
        if (step <= 4 * std::numeric_limits<ld>::epsilon() * x || hi - lo <= 4 * std::numeric_limits<ld>::epsilon() * x)
            return static_cast<double>(x);
    }
    throw ConvergenceError("solve_fixed_point: Newton/bisection did not converge");
}

} // namespace

double solve_fixed_point_at(double gamma, double rho)
{
    if (!(gamma < 0.0))
        throw DomainError("solve_fixed_point: gamma must be negative");
    if (!(rho >= 0.0))
        throw DomainError("solve_fixed_point: rho must be nonnegative");
    return solve_point(gamma, polynomial_index(gamma), rho, 1.0 + rho);
}

FixedPointSolution solve_fixed_point(double gamma, const std::vector<double> &rho_grid)
{
    if (!(gamma < 0.0))
        throw DomainError("solve_fixed_point: gamma must be negative");
    if (rho_grid.empty() || rho_grid.front() < 0.0)
        throw DomainError("solve_fixed_point: grid must start at rho >= 0");
    FixedPointSolution s;
    s.gamma = gamma;
    s.n = polynomial_index(gamma);
    s.rho = rho_grid;
    s.R.resize(rho_grid.size());
    double prev = 1.0;
    for (std::size_t i = 0; i < rho_grid.size(); ++i) {
        if (i > 0 && !(rho_grid[i] > rho_grid[i - 1]))
            throw DomainError("solve_fixed_point: grid must be increasing");
        // linear extrapolation of the previous two values as warm start
        double guess = prev;
        if (i >= 2)
            guess = s.R[i - 1] + (s.R[i - 1] - s.R[i - 2]) * (rho_grid[i] - rho_grid[i - 1]) / (rho_grid[i - 1] - rho_grid[i - 2]);
        s.R[i] = solve_point(gamma, s.n, rho_grid[i], guess);
        prev = s.R[i];
    }
    s.singularity = singularity(gamma);
    return s;
}

double closed_form(int n, double rho)
{
    switch (n) {
    case 1: return 1.0 + rho;
    case 2: return 0.5 * (rho + std::sqrt(rho * rho + 4.0));
    case 3: {
        const double r3 = rho * rho * rho / 27.0;
        const double A = r3 + 0.5 + 0.5 * std::sqrt(1.0 + 4.0 * r3);
        const double c = std::cbrt(A);
        return c + rho * rho / (9.0 * c) + rho / 3.0;
    }
    default: throw DomainError("closed_form: only n = 1, 2, 3");
    }
}

Singularity singularity(double gamma)
{
    if (!(gamma < 0.0))
        throw DomainError("singularity: gamma must be negative");
    Singularity s;
    const auto n = polynomial_index(gamma);
    if ((n && *n == 1) || gamma == -1.0)
        return s; // R = 1 + rho is entire
    const double g = std::abs(gamma), g1 = std::abs(1.0 + gamma);
    s.exists = true;
    s.R_modulus = std::pow(g / g1, gamma);
    s.rho_modulus = std::pow(g, gamma) / std::pow(g1, 1.0 + gamma);
    s.count = n ? *n : 1;
    return s;
}

TruncatedSeries series_coeffs(double gamma, int K)
{
    if (K < 0 || K > 64)
        throw DomainError("series_coeffs: need 0 <= K <= 64");
    std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0);
    a[0] = 1.0;
    for (int k = 1; k <= K; ++k) {
        // (x)_(k-1) / k! with x = 1 + gamma (k-1), divided factor by factor
        const double x = 1.0 + gamma * (k - 1);
        double t = -gamma / k;
        for (int i = 0; i < k - 1; ++i)
            t *= (x + i) / (i + 1);
        a[static_cast<std::size_t>(k)] = t + 0.0; // no -0 for vanishing terms
    }
    return TruncatedSeries(std::move(a));
}

RadiusEstimate series_radius(const TruncatedSeries &s, int period)
{
    if (period < 1)
        throw DomainError("series_radius: period must be positive");
    const int K = s.order();
    // residue class carrying the largest coefficients near the end
    int best = -1;
    double bestv = 0.0;
    for (int k = K; k > K - period && k >= 0; --k)
        if (std::abs(s[k]) > bestv) {
            bestv = std::abs(s[k]);
            best = k;
        }
    if (best < 0)
        throw DomainError("series_radius: vanishing tail");
    std::vector<std::pair<double, double>> ratios; // (k_mid, r)
    for (int k = best; k - period >= 1; k -= period) {
        const double hi = s[k], lo = s[k - period];
        if (hi == 0.0 || lo == 0.0)
            break;
        ratios.emplace_back(k - 0.5 * period, std::pow(std::abs(lo / hi), 1.0 / period));
        if (ratios.size() >= 2)
            break;
    }
    if (ratios.empty())
        throw DomainError("series_radius: not enough nonzero coefficients");
    RadiusEstimate r;
    r.ratio = ratios[0].second;
    r.extrapolated = r.ratio;
    if (ratios.size() == 2) {
        const auto [k1, r1] = ratios[0];
        const auto [k2, r2] = ratios[1];
        // r(k) = r_inf + c / k
        r.extrapolated = (k1 * r1 - k2 * r2) / (k1 - k2);
    }
    return r;
}

double duality_check(double gamma, double rho)
{
    if (!(rho > 0.0))
        throw DomainError("duality_check: rho must be positive");
    const double lhs = solve_fixed_point_at(gamma, rho);
    const double dual = solve_fixed_point_at(1.0 / gamma, std::pow(rho, 1.0 / gamma));
    const double rhs = rho * std::pow(dual, -gamma);
    return std::abs(lhs - rhs);
}

NonlinearH nonlinear_h(const RFunction &r, const UniformGrid &grid)
{
    if (std::abs(grid.lo) > 0.0)
        throw DomainError("nonlinear_h: grid must start at 0");
    const auto x = grid.points();
    const std::size_t n = x.size();
    std::vector<double> R(n), invR(n);
    for (std::size_t i = 0; i < n; ++i) {
        R[i] = r.value(x[i]);
        if (!(R[i] > 0.0))
            throw DomainError("nonlinear_h: R must be positive");
        invR[i] = 1.0 / R[i];
    }
    const double h = grid.step();
    const auto I = cumulative_integral(invR, h);
    NonlinearH out;
    out.rho = x;
    out.h.resize(n);
    const double lnR0 = std::log(R[0]);
    for (std::size_t i = 0; i < n; ++i)
        out.h[i] = R[i] * (I[i] - std::log(R[i]) + lnR0);
    const auto dR = derivative4(R, h);
    const auto dh = derivative4(out.h, h);
    out.ode_residual.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.ode_residual[i] = -R[i] * dh[i] + dR[i] * out.h[i] + R[i] - R[i] * dR[i];
    out.saddle_constraint = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(x[i] - 1.0) <= 1e-12)
            out.saddle_constraint = 1.0 - dh[i] - dR[i] * (1.0 - out.h[i]);
    return out;
}

double algebraic_residual(const FixedPointSolution &s)
{
    const double a = 1.0 + 1.0 / s.gamma;
    double m = 0.0;
    for (std::size_t i = 0; i < s.R.size(); ++i)
        m = std::max(m, std::abs(std::pow(s.R[i], a) - s.R[i] + s.rho[i]));
    return m;
}

double polynomial_residual(const FixedPointSolution &s)
{
    if (!s.n)
        throw DomainError("polynomial_residual: gamma is not -1/n");
    long double m = 0.0L;
    for (std::size_t i = 0; i < s.R.size(); ++i) {
        const long double R = s.R[i];
        m = std::max(m, std::abs(ipow(R, *s.n - 1) * (R - static_cast<long double>(s.rho[i])) - 1.0L));
    }
    return static_cast<double>(m);
}

double asymptotic_slope(double gamma, double rho_lo, double rho_hi, int points)
{
    if (!(rho_lo > 0.0 && rho_hi > rho_lo) || points < 2)
        throw DomainError("asymptotic_slope: bad range");
    const double a = 1.0 + 1.0 / gamma;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) {
        const double lx = std::log(rho_lo) + (std::log(rho_hi) - std::log(rho_lo)) * i / (points - 1);
        const double R = solve_fixed_point_at(gamma, std::exp(lx));
        // R - rho = R^a on the solution, without cancellation
        const double ly = a * std::log(R);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

} // namespace lnrg
