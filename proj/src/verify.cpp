#include "lnrg/verify.hpp"

#include "lnrg/error.hpp"
#include "lnrg/fixedpoint.hpp"
#include "lnrg/flow.hpp"
#include "lnrg/format.hpp"
#include "lnrg/potentials.hpp"
#include "lnrg/saddle.hpp"
#include "lnrg/series.hpp"
#include "lnrg/stability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace lnrg
{

namespace
{

struct Suite
{
    std::vector<CheckResult> results;

    void add(const std::string &suite, const std::string &name, const std::function<std::pair<bool, std::string>()> &body)
    {
        CheckResult r{suite, name, false, {}};
        try {
            auto [ok, detail] = body();
            r.pass = ok;
            r.detail = std::move(detail);
        } catch (const std::exception &e) {
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
};

std::string below(double value, double bound)
{
    return fmt_double(value) + " < " + fmt_double(bound);
}

double max_coeff_diff(const TruncatedSeries &a, const TruncatedSeries &b)
{
    double d = 0.0;
    for (int k = 0; k <= std::min(a.order(), b.order()); ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

// coefficient difference relative to max(1, |a_k|, |b_k|); powers up to 8 make large coefficients
double scaled_coeff_diff(const TruncatedSeries &a, const TruncatedSeries &b)
{
    double d = 0.0;
    for (int k = 0; k <= std::min(a.order(), b.order()); ++k)
        d = std::max(d, std::abs(a[k] - b[k]) / std::max({1.0, std::abs(a[k]), std::abs(b[k])}));
    return d;
}

// a_0 = 1, |a_k| <= 1, orders 1..12, fixed seed
std::vector<TruncatedSeries> random_series(int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> ord(1, 12);
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < count; ++i) {
        std::vector<double> c(static_cast<std::size_t>(ord(rng)) + 1);
        c[0] = 1.0;
        for (std::size_t k = 1; k < c.size(); ++k)
            c[k] = coef(rng);
        out.emplace_back(std::move(c));
    }
    return out;
}

void series_checks(Suite &s)
{
    const auto family = random_series(40, 0x5eed);
    s.add("series", "pow(a, 1) == a", [&] {
        double worst = 0.0;
        for (const auto &a : family)
            worst = std::max(worst, max_coeff_diff(series_pow(a, 1.0), a));
        return std::pair{worst < 1e-14, below(worst, 1e-14)};
    });
    s.add("series", "exp(ln a) == a", [&] {
        double worst = 0.0;
        for (const auto &a : family)
            worst = std::max(worst, max_coeff_diff(series_exp(series_ln(a)), a));
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
    s.add("series", "pow(a, x + y) == pow(a, x) pow(a, y)", [&] {
        std::mt19937_64 rng(0xa1fa);
        std::uniform_real_distribution<double> ex(-4.0, 4.0);
        double worst = 0.0;
        for (const auto &a : family) {
            const double x = ex(rng), y = ex(rng);
            worst = std::max(worst, scaled_coeff_diff(series_pow(a, x + y), series_mul(series_pow(a, x), series_pow(a, y))));
        }
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
    s.add("series", "ln(a b) == ln a + ln b", [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < family.size(); i += 2) {
            const auto &a = family[i];
            const auto &b = family[i + 1];
            const int K = std::min(a.order(), b.order());
            const auto lhs = series_ln(series_mul(a.truncated(K), b.truncated(K)));
            const auto rhs = series_ln(a.truncated(K)) + series_ln(b.truncated(K));
            worst = std::max(worst, max_coeff_diff(lhs, rhs));
        }
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
}

void potential_checks(Suite &s)
{
    s.add("potentials", "VectorD0 round trip V' = 1/(2R)", [] {
        const Potential p({0.0, 0.5, 0.25, 0.05});
        const UniformGrid g(0.0, 8.0, 1025);
        double worst = 0.0;
        for (double x : g.points())
            worst = std::max(worst, std::abs(dV_from_r(p.model(), r_from_potential(p, x)) - p.first(x)));
        return std::pair{worst < 1e-14, below(worst, 1e-14)};
    });
    s.add("potentials", "multicritical R(rho_c) = rho_c (m = 2..8), R'(rho_c) = 1 (m >= 3)", [] {
        double worst = 0.0;
        for (int m = 2; m <= 8; ++m) {
            const auto r = r_taylor(multicritical_potential(m), m - 1.0, 1);
            worst = std::max(worst, std::abs(r[0] - (m - 1.0)));
            // m = 2 is the ordinary simple saddle, R = 1
            if (m >= 3)
                worst = std::max(worst, std::abs(r[1] - 1.0));
        }
        return std::pair{worst < 1e-10, below(worst, 1e-10)};
    });
    s.add("potentials", "linear fixed potentials solve the linearised equation (m = 1..8)", [] {
        double worst = 0.0;
        for (auto tag : {ModelTag::vector_d0(), ModelTag::vector_qm(), ModelTag::matrix()})
            for (int m = 1; m <= 8; ++m) {
                const auto p = linear_fixed_potential(tag, m);
                const double top = tag.kind == ModelKind::VectorQM ? (m + 1) / 4.0 : static_cast<double>(m);
                for (double x : UniformGrid(0.0, top, 201).points())
                    worst = std::max(worst, std::abs(linear_fixed_point_residual(p, x)));
            }
        return std::pair{worst < 1e-10, below(worst, 1e-10)};
    });
    s.add("potentials", "VectorD0 gamma = -R'(0) = 2 V''(0)", [] {
        std::mt19937_64 rng(0x9a11);
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Potential p({c(rng), 0.5, c(rng), c(rng), c(rng)});
            const double a = gamma_anomalous(p);
            const double b = -r_taylor(p, 0.0, 1)[1];
            worst = std::max({worst, std::abs(a - 2.0 * p.second(0.0)), std::abs(b - 2.0 * p.second(0.0))});
        }
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
}

void saddle_checks(Suite &s)
{
    s.add("saddle", "quartic g = 1: N |Z_quad - Z_asym| decreasing, N = 50..400", [] {
        const auto rows = oracle_table(Potential({0.0, 0.5, 0.25}), {50, 100, 200, 400});
        bool ok = true;
        std::ostringstream os;
        double prev = INFINITY;
        for (const auto &r : rows) {
            const double scaled = r.N * std::abs(r.diff);
            ok = ok && std::isfinite(scaled) && scaled < prev;
            os << (prev == INFINITY ? "" : ", ") << fmt_double(scaled);
            prev = scaled;
        }
        return std::pair{ok, os.str()};
    });
    s.add("saddle", "Gaussian |Z(rho/2, N)| < 1e-8, N = 10, 100, 1000", [] {
        double worst = 0.0;
        for (int N : {10, 100, 1000})
            worst = std::max(worst, std::abs(quadrature_Z(Potential({0.0, 0.5}), N)));
        return std::pair{worst < 1e-8, below(worst, 1e-8)};
    });
    s.add("saddle", "multicritical_potential(m) has order m (m = 2..5)", [] {
        std::ostringstream os;
        bool ok = true;
        for (int m = 2; m <= 5; ++m) {
            const auto rep = solve_saddle(RFunction::analytic(multicritical_potential(m)), 0.0, {0.0, 2.0 * m});
            const int got = rep.roots.empty() ? 0 : rep.order_m;
            ok = ok && got == m && rep.roots.size() == 1;
            os << (m > 2 ? " " : "") << got;
        }
        return std::pair{ok, "orders " + os.str()};
    });
    s.add("saddle", "collapse m = 4, q = 1, N = 400 vs 800 defect < 5%", [] {
        std::vector<double> xs;
        for (int i = 0; i <= 40; ++i)
            xs.push_back(-1.0 + 0.05 * i);
        const auto q = collapse_quality(scaling_collapse_x(4, 1, xs, {400, 800}), -1.0, 1.0);
        const double rel = q.defect / q.max_abs;
        return std::pair{rel < 0.05, below(rel, 0.05)};
    });
}

void fixedpoint_checks(Suite &s)
{
    const auto rho10 = UniformGrid(0.0, 10.0, 2001).points();
    s.add("fixedpoint", "|R^n - rho R^(n-1) - 1| < 1e-10, n = 1..6", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 6; ++n)
            worst = std::max(worst, polynomial_residual(solve_fixed_point(-1.0 / n, rho10)));
        return std::pair{worst < 1e-10, below(worst, 1e-10)};
    });
    s.add("fixedpoint", "solver matches closed forms, n = 1, 2, 3", [&] {
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const auto sol = solve_fixed_point(-1.0 / n, rho10);
            for (std::size_t i = 0; i < rho10.size(); ++i)
                worst = std::max(worst, std::abs(sol.R[i] - closed_form(n, rho10[i])));
        }
        return std::pair{worst < 1e-10, below(worst, 1e-10)};
    });
    s.add("fixedpoint", "ratio-test radius within 2% of singularity modulus, n = 2, 3, 4", [] {
        double worst = 0.0;
        for (int n = 2; n <= 4; ++n) {
            const auto est = series_radius(series_coeffs(-1.0 / n, 48), n);
            const double exact = singularity(-1.0 / n).rho_modulus;
            worst = std::max(worst, std::abs(est.extrapolated - exact) / exact);
        }
        return std::pair{worst < 0.02, below(worst, 0.02)};
    });
    s.add("fixedpoint", "no finite saddle: min(R - rho) > 0", [&] {
        double lowest = INFINITY;
        for (int n = 1; n <= 6; ++n) {
            const auto sol = solve_fixed_point(-1.0 / n, rho10);
            for (std::size_t i = 0; i < rho10.size(); ++i)
                lowest = std::min(lowest, sol.R[i] - rho10[i]);
        }
        return std::pair{lowest > 0.0, fmt_double(lowest) + " > 0"};
    });
    s.add("fixedpoint", "R - rho ~ rho^(1-n) on [1e2, 1e4] within 2%, n = 2, 3", [] {
        double worst = 0.0;
        for (int n = 2; n <= 3; ++n) {
            const double slope = asymptotic_slope(-1.0 / n, 1e2, 1e4);
            worst = std::max(worst, std::abs(slope - (1.0 - n)) / (n - 1.0));
        }
        return std::pair{worst < 0.02, below(worst, 0.02)};
    });
    s.add("fixedpoint", "nonlinear_h ODE residual < 1e-8 for R = 1 and R = 1 + rho", [] {
        const UniformGrid g(0.0, 4.0, 1601);
        double worst = 0.0;
        for (int which = 0; which < 2; ++which) {
            std::vector<double> R;
            for (double x : g.points())
                R.push_back(which == 0 ? 1.0 : 1.0 + x);
            const auto h = nonlinear_h(RFunction::sampled(GridFunction(g, R)), g);
            for (double r : h.ode_residual)
                worst = std::max(worst, std::abs(r));
        }
        return std::pair{worst < 1e-8, below(worst, 1e-8)};
    });
    s.add("fixedpoint", "n = 2 fixed point is stationary under the R flow", [] {
        const UniformGrid g(0.0, 10.0, 1024);
        const auto sol = solve_fixed_point(-0.5, g.points());
        const auto rhs = flow_rhs_R(make_flow_state(g, sol.R));
        double worst = 0.0;
        for (double r : rhs)
            worst = std::max(worst, std::abs(r));
        return std::pair{worst < 1e-8, below(worst, 1e-8)};
    });
}

double stationarity_drift(const UniformGrid &g, const std::vector<double> &R0, double dtau, int steps)
{
    const auto out = evolve(make_flow_state(g, R0), dtau, steps);
    double worst = 0.0;
    for (std::size_t i = 0; i < R0.size(); ++i)
        worst = std::max(worst, std::abs(out.R[i] - R0[i]));
    return worst;
}

void flow_checks(Suite &s)
{
    s.add("flow", "R = 1 and R = 1 + rho stationary over tau in [0, 1]", [] {
        const UniformGrid g(0.0, 8.0, 1024);
        double worst = 0.0;
        for (int which = 0; which < 2; ++which) {
            std::vector<double> R;
            for (double x : g.points())
                R.push_back(which == 0 ? 1.0 : 1.0 + x);
            worst = std::max(worst, stationarity_drift(g, R, 1e-3, 1000));
        }
        return std::pair{worst < 1e-8, below(worst, 1e-8)};
    });
    s.add("flow", "V form and R form agree, all model tags", [] {
        const std::vector<Potential> cases = {
            Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_d0()),
            Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_qm()),
            Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_field(3.0)),
            Potential({0.0, 1.0, 0.5, 0.1}, ModelTag::matrix()),
            Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::matrix_qm()),
        };
        bool ok = true;
        std::ostringstream os;
        for (const auto &p : cases) {
            const double coarse = vr_form_mismatch(p, UniformGrid(0.0, 4.0, 513));
            const double fine = vr_form_mismatch(p, UniformGrid(0.0, 4.0, 1025));
            // fourth-order stencils: the error must shrink by well over 2^3
            const bool pass = fine < 1e-7 && (fine < 1e-12 || coarse / fine >= 8.0);
            ok = ok && pass;
            os << model_name(p.model().kind) << " " << fmt_double(fine) << (pass ? "" : " (bad)") << "; ";
        }
        return std::pair{ok, os.str()};
    });
    s.add("flow", "stationarity residual shrinks >= 4x when rho and tau steps halve", [] {
        std::vector<double> drift;
        for (int n : {129, 257, 513}) {
            const UniformGrid g(0.0, 10.0, n);
            const double dt = 0.8 / (n - 1);
            drift.push_back(stationarity_drift(g, solve_fixed_point(-0.5, g.points()).R, dt, static_cast<int>(std::lround(0.5 / dt))));
        }
        const double r1 = drift[0] / drift[1], r2 = drift[1] / drift[2];
        return std::pair{r1 >= 4.0 && r2 >= 4.0, "ratios " + fmt_double(r1) + ", " + fmt_double(r2) + " >= 4"};
    });
    s.add("flow", "evolve rejects states with R <= 0", [] {
        const UniformGrid g(0.0, 4.0, 129);
        std::vector<double> R;
        for (double x : g.points())
            R.push_back(1.0 - 0.5 * x);
        try {
            evolve(make_flow_state(g, R), 1e-3, 1);
        } catch (const FlowError &) {
            return std::pair{true, std::string("FlowError raised")};
        }
        return std::pair{false, std::string("no error")};
    });
    s.add("flow", "evolved generic states stay positive", [] {
        const UniformGrid g(0.0, 4.0, 257);
        std::vector<double> R;
        for (double x : g.points())
            R.push_back(1.0 / (1.0 + x));
        const auto hist = evolve_history(make_flow_state(g, R), 0.01, 40, 10);
        double lowest = INFINITY;
        for (const auto &st : hist)
            for (double v : st.R)
                lowest = std::min(lowest, v);
        return std::pair{lowest > 0.0, "min R " + fmt_double(lowest)};
    });
}

void stability_checks(Suite &s)
{
    s.add("stability", "beta coefficients g + 3g^2 and g + 6g^2", [] {
        const auto v = beta_vector();
        const auto m = beta_matrix();
        const double worst = std::max({std::abs(v.beta_coeffs[0]), std::abs(v.beta_coeffs[1] - 1.0), std::abs(v.beta_coeffs[2] - 3.0),
                                       std::abs(m.beta_coeffs[0]), std::abs(m.beta_coeffs[1] - 1.0), std::abs(m.beta_coeffs[2] - 6.0)});
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
    s.add("stability", "beta zeros are roots of the fitted polynomial", [] {
        double worst = 0.0;
        for (const auto &rep : {beta_vector(), beta_matrix()})
            for (const auto &fp : rep.fixed_points)
                worst = std::max(worst, std::abs(rep.beta_coeffs.evaluate(fp.g_star)));
        return std::pair{worst < 1e-12, below(worst, 1e-12)};
    });
    s.add("stability", "positive eigenvalue count = m - 1 (vector, matrix; m = 1..8)", [] {
        bool ok = true;
        for (auto tag : {ModelTag::vector_d0(), ModelTag::matrix()})
            for (int m = 1; m <= 8; ++m) {
                const auto rep = spectrum(tag, m, 3 * m + 3);
                const auto positive = std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const Eigenvalue &e) { return e.kappa > 0.0; });
                ok = ok && positive == m - 1 && rep.positive_count == m - 1;
                ok = ok && std::is_sorted(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const Eigenvalue &a, const Eigenvalue &b) { return a.kappa > b.kappa; });
            }
        return std::pair{ok, std::string(ok ? "all m" : "mismatch")};
    });
    s.add("stability", "Omega h - kappa h = source for polynomial eigenvectors (m = 2, 3)", [] {
        double worst = 0.0;
        const double step = 1e-3;
        for (int m = 2; m <= 3; ++m)
            for (int p = 0; p <= 6; ++p) {
                if (p == m - 1 || p == m)
                    continue;
                const double kappa = 1.0 - static_cast<double>(p) / m;
                const auto e = eigenvector(ModelTag::vector_d0(), m, kappa);
                for (double x : UniformGrid(0.0, m, 101).points()) {
                    // 5-point central difference of h
                    const double dh = (e.value(x - 2 * step) - 8 * e.value(x - step) + 8 * e.value(x + step) - e.value(x + 2 * step)) / (12 * step);
                    const double omega = e.value(x) + (1.0 - x / m) * dh;
                    worst = std::max(worst, std::abs(omega - kappa * e.value(x) - e.source(x)));
                }
            }
        return std::pair{worst < 1e-9, below(worst, 1e-9)};
    });
    s.add("stability", "linear flow grows along the kappa = 1 eigenvector (m = 2)", [] {
        const auto e = eigenvector(ModelTag::vector_d0(), 2, 1.0);
        const auto Vs = linear_fixed_potential(ModelTag::vector_d0(), 2);
        const UniformGrid g(0.0, 2.0, 201);
        LinearFlowState st{g, {}, 0.0};
        std::vector<double> base;
        for (double x : g.points()) {
            base.push_back(Vs.value(x));
            st.V.push_back(Vs.value(x) + 1e-4 * e.value(x));
        }
        std::vector<double> ts, norms;
        for (int k = 0; k <= 20; ++k) {
            double m = 0.0;
            for (std::size_t i = 0; i < base.size(); ++i)
                m = std::max(m, std::abs(st.V[i] - base[i]));
            ts.push_back(st.tau);
            norms.push_back(m);
            st = evolve_linear_potential(st, 0.1, 1);
        }
        const double rate = growth_exponent(ts, norms);
        return std::pair{std::abs(rate - 1.0) <= 0.05, "exponent " + fmt_double(rate)};
    });
    s.add("stability", "string susceptibility at g* = -1/6 is 0", [] {
        const auto m = beta_matrix();
        double gs = 0.0;
        for (const auto &fp : m.fixed_points)
            if (fp.g_star < 0.0)
                gs = string_susceptibility(fp.beta_prime);
        return std::pair{gs == 0.0, "gamma_string " + fmt_double(gs)};
    });
    s.add("stability", "excluded kappa = 0 and 1/m listed (vector, matrix)", [] {
        bool ok = true;
        for (auto tag : {ModelTag::vector_d0(), ModelTag::matrix()})
            for (int m = 1; m <= 8; ++m) {
                const auto rep = spectrum(tag, m, 4);
                bool zero = false, inv = false;
                for (const auto &x : rep.excluded) {
                    zero = zero || x.kappa == 0.0;
                    inv = inv || x.kappa == 1.0 / m;
                }
                ok = ok && zero && inv;
            }
        return std::pair{ok, std::string(ok ? "present" : "missing")};
    });
}

} // namespace

std::vector<CheckResult> run_invariant_suite()
{
    Suite s;
    series_checks(s);
    potential_checks(s);
    saddle_checks(s);
    fixedpoint_checks(s);
    flow_checks(s);
    stability_checks(s);
    return s.results;
}

} // namespace lnrg
