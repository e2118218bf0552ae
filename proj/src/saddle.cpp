#include "lnrg/saddle.hpp"

#include "lnrg/error.hpp"
#include "lnrg/special.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace lnrg
{

namespace
{

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// Taylor coefficients of F = R - rho + rho_0 at x
std::vector<double> f_taylor(const RFunction &r, double rho_0, double x, int K)
{
    auto c = r.taylor(x, K);
    c[0] += rho_0 - x;
    if (c.size() > 1)
        c[1] -= 1.0;
    return c;
}

int max_order(const RFunction &r, const SaddleOptions &opt)
{
    return r.is_analytic() ? opt.max_multiplicity + 1 : 5;
}

// number of leading Taylor coefficients that are zero at the tolerance
int multiplicity_at(const std::vector<double> &c, double x, const SaddleOptions &opt)
{
    const double s = 1.0 + std::abs(x);
    double scale = 1.0;
    const int K = static_cast<int>(c.size()) - 1;
    for (int k = 0; k <= K; ++k) {
        if (std::abs(c[static_cast<std::size_t>(k)]) * scale >= opt.order_threshold * s)
            return k;
        scale *= s;
    }
    return K;
}

// Newton on the j-th derivative of F, from its Taylor coefficients
bool newton_on_derivative(const RFunction &r, double rho_0, int j, double &x, double lo, double hi, const SaddleOptions &opt)
{
    const int K = std::min(j + 1, max_order(r, opt));
    if (j + 1 > K)
        return false;
    for (int it = 0; it < 60; ++it) {
        const auto c = f_taylor(r, rho_0, x, K);
        const double d1 = (j + 1) * c[static_cast<std::size_t>(j + 1)];
        if (d1 == 0.0)
            return false;
        const double step = c[static_cast<std::size_t>(j)] / d1;
        const double xn = x - step;
        if (!(xn >= lo && xn <= hi))
            return false;
        x = xn;
        if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * (1 + std::abs(x)))
            return true;
    }
    return true;
}

} // namespace

SaddleReport solve_saddle(const RFunction &r, double rho_0, Domain domain, const SaddleOptions &opt)
{
    if (rho_0 < 0.0)
        throw DomainError("solve_saddle: rho_0 must be nonnegative");
    const double lo = domain.lo;
    const double hi = std::min(domain.hi, r.rho_max());
    if (!(hi > lo))
        throw DomainError("solve_saddle: empty domain");
    const int P = opt.panels;
    const double h = (hi - lo) / P;
    std::vector<double> xs(static_cast<std::size_t>(P) + 1), F(xs.size());
    for (int i = 0; i <= P; ++i) {
        const double x = (i == P) ? hi : lo + i * h;
        xs[static_cast<std::size_t>(i)] = x;
        auto v = r.try_value(x);
        F[static_cast<std::size_t>(i)] = v ? *v - x + rho_0 : nan_v;
    }
    auto Fat = [&](double x) {
        auto v = r.try_value(x);
        if (!v)
            throw ConvergenceError("solve_saddle: R undefined inside bracket");
        return *v - x + rho_0;
    };

    std::vector<double> found;
    auto polish = [&](double x0, bool bracketed, double a, double b) {
        double x = x0;
        if (bracketed) {
            boost::uintmax_t iters = 200;
            auto tol = [](double u, double v) { return std::abs(u - v) <= 2 * std::numeric_limits<double>::epsilon() * (1 + std::abs(u)); };
            auto res = boost::math::tools::toms748_solve(Fat, a, b, tol, iters);
            x = 0.5 * (res.first + res.second);
        } else {
            // touching root: go to the nearby extremum of F
            if (!newton_on_derivative(r, rho_0, 1, x, std::max(lo, x0 - 3 * h), std::min(hi, x0 + 3 * h), opt))
                return;
        }
        // refine on the derivative matching the detected multiplicity
        const auto c = f_taylor(r, rho_0, x, max_order(r, opt));
        int mult = multiplicity_at(c, x, opt);
        if (mult == 0)
            return; // not a root
        for (int pass = 0; pass < 4 && mult > 1; ++pass) {
            double y = x;
            if (!newton_on_derivative(r, rho_0, mult - 1, y, std::max(lo, x - 3 * h), std::min(hi, x + 3 * h), opt))
                break;
            const int my = multiplicity_at(f_taylor(r, rho_0, y, max_order(r, opt)), y, opt);
            if (my < mult)
                break;
            const bool settled = (my == mult) && std::abs(y - x) <= 1e-15 * (1 + std::abs(x));
            x = y;
            mult = my;
            if (settled)
                break;
        }
        found.push_back(x);
    };

    for (int i = 0; i < P; ++i) {
        const double a = F[static_cast<std::size_t>(i)], b = F[static_cast<std::size_t>(i + 1)];
        if (std::isnan(a) || std::isnan(b))
            continue;
        if (a == 0.0)
            found.push_back(xs[static_cast<std::size_t>(i)]);
        if (a * b < 0.0)
            polish(0.5 * (xs[static_cast<std::size_t>(i)] + xs[static_cast<std::size_t>(i + 1)]), true, xs[static_cast<std::size_t>(i)],
                   xs[static_cast<std::size_t>(i + 1)]);
    }
    if (F[static_cast<std::size_t>(P)] == 0.0)
        found.push_back(xs[static_cast<std::size_t>(P)]);
    // even-multiplicity roots show up as local minima of |F| without a sign change
    for (int i = 1; i < P; ++i) {
        const double fm = F[static_cast<std::size_t>(i - 1)], f0 = F[static_cast<std::size_t>(i)], fp = F[static_cast<std::size_t>(i + 1)];
        if (std::isnan(fm) || std::isnan(f0) || std::isnan(fp) || f0 == 0.0)
            continue;
        if (fm * f0 <= 0.0 || f0 * fp <= 0.0)
            continue;
        if (std::abs(f0) > std::abs(fm) || std::abs(f0) > std::abs(fp))
            continue;
        const double var = std::max(std::abs(fm - f0), std::abs(fp - f0));
        if (std::abs(f0) > 4 * var)
            continue;
        polish(xs[static_cast<std::size_t>(i)], false, 0, 0);
    }

    std::sort(found.begin(), found.end());
    SaddleReport rep;
    for (double x : found) {
        if (!rep.roots.empty() && std::abs(x - rep.roots.back().rho) <= 1e-7 * (1 + std::abs(x)))
            continue;
        const auto c = f_taylor(r, rho_0, x, max_order(r, opt));
        SaddleRoot root;
        root.rho = x;
        root.multiplicity = std::max(1, multiplicity_at(c, x, opt));
        root.order_m = root.multiplicity + 1;
        root.residual = std::abs(Fat(x));
        if (root.multiplicity == 1 && root.residual > opt.newton_tol * (1 + std::abs(x))) {
            // one more Newton step on F itself
            double y = x;
            if (newton_on_derivative(r, rho_0, 0, y, lo, hi, opt) && std::abs(Fat(y)) < root.residual) {
                root.rho = y;
                root.residual = std::abs(Fat(y));
            }
            if (root.residual > opt.newton_tol * (1 + std::abs(x)))
                throw ConvergenceError("solve_saddle: Newton polish did not reach tolerance");
        }
        rep.roots.push_back(root);
        rep.rho_c.push_back(root.rho);
    }
    if (!rep.roots.empty())
        rep.order_m = rep.roots.front().order_m;

    const Potential *p = r.potential();
    if (p && p->model().kind == ModelKind::VectorD0 && rho_0 == 0.0 && rep.roots.size() == 1 && rep.order_m == 2) {
        const double rc = rep.roots[0].rho;
        const double arg = 2 * rc * rc * p->second(rc) + 1;
        rep.Z_leading = 0.5 - p->value(rc) + 0.5 * std::log(rc);
        rep.Z_correction = arg > 0 ? -0.5 * std::log(arg) : nan_v;
    } else {
        rep.Z_leading = nan_v;
        rep.Z_correction = nan_v;
    }
    return rep;
}

double free_energy_largeN(const Potential &p, int N)
{
    if (p.model().kind != ModelKind::VectorD0)
        throw DomainError("free_energy_largeN: only the VectorD0 integral");
    const auto rep = solve_saddle(RFunction::analytic(p), 0.0, {0.0, 64.0});
    if (rep.roots.size() != 1)
        throw DomainError("free_energy_largeN: needs a unique saddle in the domain");
    if (rep.order_m != 2)
        throw DomainError("free_energy_largeN: multicritical saddle (m > 2); Gaussian correction invalid");
    const double rc = rep.roots[0].rho;
    const double arg = 2 * rc * rc * p.second(rc) + 1;
    if (!(arg > 0))
        throw DomainError("free_energy_largeN: 2 rho_c^2 V'' + 1 must be positive");
    return N * (0.5 - p.value(rc) + 0.5 * std::log(rc)) - 0.5 * std::log(arg);
}

double quadrature_Z(const Potential &p, int N)
{
    if (N < 1 || N > 1000000)
        throw DomainError("quadrature_Z: need 1 <= N <= 1e6");
    int top = p.degree();
    while (top >= 1 && p.coeff(top) == 0.0)
        --top;
    if (top < 1 || p.coeff(top) < 0.0)
        throw DivergentIntegral("integral not convergent; potential unbounded below");

    const double Nd = N;
    // in u = ln rho the measure d rho / rho becomes du
    auto phi = [&](double u) { return -Nd * p.value(std::exp(u)) + 0.5 * Nd * u; };

    // coarse scan for the global maximum
    const double u_lo = -40.0;
    double u_hi = 4.0;
    while (u_hi < 40.0 && phi(u_hi) > phi(u_hi - 1.0) - 1.0)
        u_hi += 2.0;
    const int S = 4000;
    double best_u = u_lo, best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= S; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / S;
        const double f = phi(u);
        if (f > best) {
            best = f;
            best_u = u;
        }
    }
    const double du = (u_hi - u_lo) / S;
    auto mr = boost::math::tools::brent_find_minima([&](double u) { return -phi(u); }, best_u - du, best_u + du,
                                                    std::numeric_limits<double>::digits);
    double u_star = mr.first, phi_max = -mr.second;
    if (best > phi_max) {
        u_star = best_u;
        phi_max = best;
    }

    auto edge = [&](double dir) {
        double step = 0.01;
        double u = u_star;
        for (int it = 0; it < 200; ++it) {
            u += dir * step;
            if (phi(u) - phi_max < -80.0)
                return u;
            step *= 1.5;
        }
        throw DivergentIntegral("integral not convergent; potential unbounded below");
    };
    const double a = edge(-1.0), b = edge(1.0);

    auto integrand = [&](double u) { return std::exp(phi(u) - phi_max); };
    double err = 0.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 20, 1e-13, &err);
    if (!(I > 0.0) || !std::isfinite(I))
        throw ConvergenceError("quadrature_Z: quadrature failed");
    const double ln_norm = 0.5 * Nd * std::log(0.5 * Nd) - log_gamma(0.5 * Nd).log_abs;
    return phi_max + std::log(I) + ln_norm;
}

namespace
{

Potential perturbed_critical(int m, int q, double v)
{
    // v z^q with z = 1 - rho/(m-1)
    std::vector<double> c(static_cast<std::size_t>(q) + 1);
    for (int j = 0; j <= q; ++j)
        c[static_cast<std::size_t>(j)] = v * static_cast<double>(binomial(q, j)) * std::pow(-1.0 / (m - 1), j);
    return multicritical_potential(m).plus(Potential(std::move(c)));
}

void check_collapse_args(int m, int q)
{
    if (m % 2 != 0)
        throw DomainError("scaling_collapse: odd m needs the integral defined as a contour integral; not supported");
    if (m < 4)
        throw DomainError("scaling_collapse: needs even m >= 4");
    if (q < 1 || q > m - 2)
        throw DomainError("scaling_collapse: q must lie in [1, m-2]");
}

} // namespace

std::vector<CollapseRow> scaling_collapse(int m, int q, const std::vector<double> &v_list, const std::vector<int> &N_list)
{
    check_collapse_args(m, q);
    std::vector<int> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    std::vector<double> vs = v_list;
    std::sort(vs.begin(), vs.end());
    std::vector<CollapseRow> rows;
    for (int N : Ns) {
        const double z0 = quadrature_Z(multicritical_potential(m), N);
        for (double v : vs) {
            CollapseRow row;
            row.N = N;
            row.v = v;
            row.x = v * std::pow(static_cast<double>(N), 1.0 - static_cast<double>(q) / m);
            row.deltaZ = (v == 0.0) ? 0.0 : quadrature_Z(perturbed_critical(m, q, v), N) - z0;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<CollapseRow> scaling_collapse_x(int m, int q, const std::vector<double> &x_list, const std::vector<int> &N_list)
{
    check_collapse_args(m, q);
    std::vector<int> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    std::vector<double> xs = x_list;
    std::sort(xs.begin(), xs.end());
    std::vector<CollapseRow> rows;
    for (int N : Ns) {
        const double z0 = quadrature_Z(multicritical_potential(m), N);
        const double scale = std::pow(static_cast<double>(N), 1.0 - static_cast<double>(q) / m);
        for (double x : xs) {
            CollapseRow row;
            row.N = N;
            row.x = x;
            row.v = x / scale;
            row.deltaZ = (x == 0.0) ? 0.0 : quadrature_Z(perturbed_critical(m, q, row.v), N) - z0;
            rows.push_back(row);
        }
    }
    return rows;
}

CollapseQuality collapse_quality(const std::vector<CollapseRow> &rows, double x_lo, double x_hi)
{
    std::map<int, std::vector<std::pair<double, double>>> curves;
    for (const auto &r : rows)
        curves[r.N].emplace_back(r.x, r.deltaZ);
    CollapseQuality q;
    double lo = x_lo, hi = x_hi;
    for (auto &[N, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        if (pts.size() < 2)
            throw DomainError("collapse_quality: each N needs at least two points");
        lo = std::max(lo, pts.front().first);
        hi = std::min(hi, pts.back().first);
        for (const auto &[x, dz] : pts)
            if (x >= x_lo && x <= x_hi)
                q.max_abs = std::max(q.max_abs, std::abs(dz));
    }
    if (!(hi > lo))
        throw DomainError("collapse_quality: curves do not overlap on the window");
    auto interp = [](const std::vector<std::pair<double, double>> &pts, double x) {
        auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -std::numeric_limits<double>::infinity()));
        if (it == pts.begin())
            return it->second;
        if (it == pts.end())
            return pts.back().second;
        const auto &[x1, y1] = *it;
        const auto &[x0, y0] = *(it - 1);
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    };
    const int G = 401;
    std::vector<const std::vector<std::pair<double, double>> *> cs;
    for (auto &kv : curves)
        cs.push_back(&kv.second);
    for (int g = 0; g < G; ++g) {
        const double x = lo + (hi - lo) * g / (G - 1);
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j)
                q.defect = std::max(q.defect, std::abs(interp(*cs[i], x) - interp(*cs[j], x)));
    }
    return q;
}

double scaling_exponent_d0(int m, int q)
{
    if (m < 2 || q < 1)
        throw DomainError("scaling_exponent_d0: needs m >= 2 and q >= 1");
    return static_cast<double>(q) / m - 1.0;
}

std::vector<OracleRow> oracle_table(const Potential &p, const std::vector<int> &N_list)
{
    std::vector<int> Ns = N_list;
    std::sort(Ns.begin(), Ns.end());
    std::vector<OracleRow> rows;
    for (int N : Ns) {
        OracleRow r;
        r.N = N;
        r.Z_quad = quadrature_Z(p, N);
        r.Z_asym = free_energy_largeN(p, N);
        r.diff = r.Z_quad - r.Z_asym;
        rows.push_back(r);
    }
    return rows;
}

} // namespace lnrg
