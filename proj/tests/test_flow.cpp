#include "lnrg/error.hpp"
#include "lnrg/fixedpoint.hpp"
#include "lnrg/flow.hpp"
#include "lnrg/stability.hpp"

#include <doctest.h>

#include <cmath>

using namespace lnrg;

namespace
{

std::vector<double> sample(const UniformGrid &g, double (*f)(double))
{
    std::vector<double> v;
    for (double x : g.points())
        v.push_back(f(x));
    return v;
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

double drift_residual(double dt)
{
    const UniformGrid g(0.0, 4.0, 1025);
    const auto s = make_flow_state(g, sample(g, [](double x) { return 1.0 / (1.0 + x); }));
    const int steps = static_cast<int>(std::lround(0.4 / dt));
    return track_saddle(evolve_history(s, dt, steps, 1)).max_drift_residual;
}

} // namespace

TEST_CASE("derivative4 is exact on quartics, cumulative integral on cubics")
{
    const UniformGrid g(-1.0, 2.0, 31);
    const auto f = sample(g, [](double x) { return 1 - 2 * x + 3 * x * x - x * x * x + 0.5 * x * x * x * x; });
    const auto d = derivative4(f, g.step());
    const auto I = cumulative_integral(sample(g, [](double x) { return 1 - 2 * x + 3 * x * x - x * x * x; }), g.step());
    const auto x = g.points();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i];
        CHECK(d[i] == doctest::Approx(-2 + 6 * t - 3 * t * t + 2 * t * t * t).epsilon(1e-11));
        const double F = [](double s) { return s - s * s + s * s * s - s * s * s * s / 4; }(t) - [](double s) { return s - s * s + s * s * s - s * s * s * s / 4; }(-1.0);
        CHECK(I[i] == doctest::Approx(F).epsilon(1e-12));
    }
    CHECK_THROWS_AS(derivative4(std::vector<double>{1, 2, 3}, 0.1), DomainError);
}

TEST_CASE("grid interpolation and local Taylor are exact on quintics")
{
    const UniformGrid g(0.0, 1.0, 21);
    auto q = [](double x) { return 2 - x + 0.5 * x * x * x - x * x * x * x * x; };
    std::vector<double> v;
    for (double x : g.points())
        v.push_back(q(x));
    const GridFunction f(g, v);
    CHECK(f.interpolate(0.4321) == doctest::Approx(q(0.4321)).epsilon(1e-13));
    const auto t = f.local_taylor(0.3, 3);
    CHECK(t[0] == doctest::Approx(q(0.3)).epsilon(1e-13));
    CHECK(t[1] == doctest::Approx(-1 + 1.5 * 0.09 - 5 * std::pow(0.3, 4)).epsilon(1e-10));
    CHECK_THROWS_AS(f.interpolate(1.5), DomainError);
}

TEST_CASE("boundary gamma of R = 1/(1 + g rho) is g")
{
    const UniformGrid g(0.0, 2.0, 401);
    const auto R = sample(g, [](double x) { return 1.0 / (1.0 + 0.7 * x); });
    CHECK(boundary_gamma(R, g.step(), 0.0) == doctest::Approx(0.7).epsilon(1e-8));
    // rho_0 enters as -(R(0) + rho_0) R'(0) / R(0)
    CHECK(boundary_gamma(R, g.step(), 0.5) == doctest::Approx(1.5 * 0.7).epsilon(1e-8));
}

TEST_CASE("flow RHS of exp(-rho) matches the analytic expression")
{
    const UniformGrid g(0.0, 3.0, 601);
    const auto s = make_flow_state(g, sample(g, [](double x) { return std::exp(-x); }));
    CHECK(s.gamma == doctest::Approx(1.0).epsilon(1e-9));
    const auto rhs = flow_rhs_R(s, 1.0);
    const auto x = g.points();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double R = std::exp(-x[i]);
        CHECK(rhs[i] == doctest::Approx(R - 2 * x[i] * (-R) + R * (-R)).epsilon(1e-8));
    }
}

TEST_CASE("stationary profiles R = 1 and R = 1 + rho")
{
    const UniformGrid g(0.0, 8.0, 1024);
    for (auto f : {+[](double) { return 1.0; }, +[](double x) { return 1.0 + x; }}) {
        const auto R0 = sample(g, f);
        const auto out = evolve(make_flow_state(g, R0), 1e-3, 1000);
        CHECK(out.tau == doctest::Approx(1.0));
        CHECK(max_abs_diff(out.R, R0) < 1e-8);
    }
}

TEST_CASE("n = 2 fixed point is stationary")
{
    const UniformGrid g(0.0, 10.0, 1024);
    const auto sol = solve_fixed_point(-0.5, g.points());
    const auto s = make_flow_state(g, sol.R);
    CHECK(s.gamma == doctest::Approx(-0.5).epsilon(1e-8));
    double worst = 0.0;
    for (double r : flow_rhs_R(s))
        worst = std::max(worst, std::abs(r));
    CHECK(worst < 1e-8);
    CHECK_FALSE(s.rho_c.has_value());
}

TEST_CASE("stationarity residual converges under refinement")
{
    std::vector<double> drift;
    for (int n : {129, 257, 513}) {
        const UniformGrid g(0.0, 10.0, n);
        const auto R0 = solve_fixed_point(-0.5, g.points()).R;
        const double dt = 0.8 / (n - 1);
        drift.push_back(max_abs_diff(evolve(make_flow_state(g, R0), dt, static_cast<int>(std::lround(0.5 / dt))).R, R0));
    }
    CHECK(drift[0] / drift[1] >= 4.0);
    CHECK(drift[1] / drift[2] >= 4.0);
}

TEST_CASE("V form and R form agree for every model tag")
{
    for (const auto &p : {Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_d0()), Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_qm()),
                          Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::vector_field(3.0)), Potential({0.0, 0.5, 0.1}, ModelTag::vector_field(1.0)),
                          Potential({0.0, 1.0, 0.5, 0.1}, ModelTag::matrix()), Potential({0.0, 0.5, 0.25, 0.05}, ModelTag::matrix_qm())}) {
        CAPTURE(model_name(p.model().kind));
        const double coarse = vr_form_mismatch(p, UniformGrid(0.0, 4.0, 513));
        const double fine = vr_form_mismatch(p, UniformGrid(0.0, 4.0, 1025));
        CHECK(fine < 1e-7);
        CHECK((fine < 1e-12 || coarse / fine >= 8.0));
    }
}

TEST_CASE("V-form series of the quartic gives gamma = g and the beta coefficient")
{
    const double g = 0.3;
    const auto s = flow_rhs_V_series(Potential({0.0, 0.5, g / 4.0}), 0.0, 3);
    CHECK(s.gamma == doctest::Approx(g).epsilon(1e-14));
    CHECK(std::abs(s.dV[1]) < 1e-15);
    CHECK(-4.0 * s.dV[2] == doctest::Approx(g + 3 * g * g).epsilon(1e-14));
}

TEST_CASE("MatrixQM normalisation keeps delta V''(0) = 0")
{
    const Potential p({0.0, 0.5, 0.25, 0.05}, ModelTag::matrix_qm());
    const auto s = flow_rhs_V_series(p, 0.0, 3);
    CHECK(std::abs(s.dV[2]) < 1e-14);
    CHECK(s.gamma == doctest::Approx(gamma_anomalous(p)).epsilon(1e-12));
}

TEST_CASE("positivity is enforced")
{
    const UniformGrid g(0.0, 4.0, 129);
    const auto bad = sample(g, [](double x) { return 1.0 - 0.5 * x; });
    CHECK_THROWS_AS(evolve(make_flow_state(g, bad), 1e-3, 1), FlowError);
    const auto ok = sample(g, [](double x) { return 1.0 / (1.0 + x); });
    const auto out = evolve(make_flow_state(g, ok), 0.01, 50);
    for (double r : out.R)
        CHECK(r > 0.0);
    CHECK_THROWS_AS(evolve(make_flow_state(g, ok), -0.1, 1), DomainError);
}

TEST_CASE("history records every k steps")
{
    const UniformGrid g(0.0, 4.0, 129);
    const auto s = make_flow_state(g, sample(g, [](double x) { return 1.0 / (1.0 + x); }));
    const auto h = evolve_history(s, 0.01, 20, 5);
    REQUIRE(h.size() == 5);
    CHECK(h[0].tau == 0.0);
    CHECK(h[4].tau == doctest::Approx(0.2));
}

TEST_CASE("saddle drift law d ln rho_c / d tau = gamma converges at second order")
{
    const double r1 = drift_residual(0.02), r2 = drift_residual(0.01);
    CHECK(r2 < r1);
    CHECK(std::log2(r1 / r2) >= 1.8);
}

TEST_CASE("linear flow: fixed point is stationary and kappa = 1 grows at rate 1")
{
    const auto Vs = linear_fixed_potential(ModelTag::vector_d0(), 2);
    const UniformGrid g(0.0, 2.0, 201);
    LinearFlowState st{g, {}, 0.0};
    for (double x : g.points())
        st.V.push_back(Vs.value(x));
    double worst = 0.0;
    for (double r : linear_flow_rhs(st))
        worst = std::max(worst, std::abs(r));
    CHECK(worst < 1e-10);

    const auto e = eigenvector(ModelTag::vector_d0(), 2, 1.0);
    const auto base = st.V;
    for (std::size_t i = 0; i < st.V.size(); ++i)
        st.V[i] += 1e-4 * e.value(g.at(static_cast<int>(i)));
    std::vector<double> ts, ns;
    for (int k = 0; k <= 10; ++k) {
        ts.push_back(st.tau);
        ns.push_back(max_abs_diff(st.V, base));
        st = evolve_linear_potential(st, 0.2, 1);
    }
    CHECK(growth_exponent(ts, ns) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("growth exponent of an exact exponential")
{
    std::vector<double> t, n;
    for (int i = 0; i < 10; ++i) {
        t.push_back(0.1 * i);
        n.push_back(3.0 * std::exp(-1.5 * 0.1 * i));
    }
    CHECK(growth_exponent(t, n) == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK_THROWS_AS(growth_exponent({0.0}, {1.0}), DomainError);
}
