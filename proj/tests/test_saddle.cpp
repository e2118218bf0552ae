#include "lnrg/error.hpp"
#include "lnrg/saddle.hpp"

#include <doctest.h>

#include <cmath>

using namespace lnrg;

namespace
{

// ln of N-normalised int drho/rho exp(-N(V - ln(rho)/2)), trapezoid in u = ln rho.
// Independent of the library: plain lgamma, fixed wide window, no adaptivity.
double trapezoid_Z(const Potential &p, int N)
{
    const double lo = -30.0, hi = 6.0;
    const int n = 400000;
    const double h = (hi - lo) / n;
    std::vector<double> phi(n + 1);
    double top = -INFINITY;
    for (int i = 0; i <= n; ++i) {
        const double u = lo + i * h;
        phi[static_cast<std::size_t>(i)] = -N * p.value(std::exp(u)) + 0.5 * N * u;
        top = std::max(top, phi[static_cast<std::size_t>(i)]);
    }
    double s = 0.0;
    for (int i = 0; i <= n; ++i)
        s += (i == 0 || i == n ? 0.5 : 1.0) * std::exp(phi[static_cast<std::size_t>(i)] - top);
    return top + std::log(s * h) + 0.5 * N * std::log(0.5 * N) - std::lgamma(0.5 * N);
}

} // namespace

TEST_CASE("quartic saddle: g rho^2 + rho - 1 = 0")
{
    for (double g : {0.1, 1.0, 3.0}) {
        const Potential p({0.0, 0.5, g / 4.0});
        const auto rep = solve_saddle(RFunction::analytic(p), 0.0, {0.0, 10.0});
        REQUIRE(rep.roots.size() == 1);
        CHECK(rep.roots[0].rho == doctest::Approx((std::sqrt(1 + 4 * g) - 1) / (2 * g)).epsilon(1e-13));
        CHECK(rep.order_m == 2);
        CHECK(rep.roots[0].multiplicity == 1);
    }
}

TEST_CASE("rho_0 shifts the saddle condition to R = rho - rho_0")
{
    // R = 1: rho_c = 1 + rho_0
    const Potential p({0.0, 0.5});
    const auto rep = solve_saddle(RFunction::analytic(p, 0.25), 0.25, {0.0, 10.0});
    REQUIRE(rep.roots.size() == 1);
    CHECK(rep.roots[0].rho == doctest::Approx(1.25).epsilon(1e-14));
    CHECK_THROWS_AS(solve_saddle(RFunction::analytic(p), -1.0, {0.0, 10.0}), DomainError);
}

TEST_CASE("multicritical_potential(m) has one saddle of order m at m - 1")
{
    for (int m = 2; m <= 5; ++m) {
        const auto rep = solve_saddle(RFunction::analytic(multicritical_potential(m)), 0.0, {0.0, 2.0 * m});
        REQUIRE(rep.roots.size() == 1);
        CHECK(rep.order_m == m);
        CHECK(rep.roots[0].rho == doctest::Approx(m - 1.0).epsilon(1e-9));
    }
}

TEST_CASE("two simple saddles are both found")
{
    // sampled R(rho) = rho + (rho - 1)(rho - 3) / 4 has zeros of R - rho at 1 and 3
    const UniformGrid g(0.0, 5.0, 501);
    std::vector<double> R;
    for (double x : g.points())
        R.push_back(x + (x - 1) * (x - 3) / 4);
    const auto rep = solve_saddle(RFunction::sampled(GridFunction(g, R)), 0.0, {0.0, 5.0});
    REQUIRE(rep.roots.size() == 2);
    CHECK(rep.roots[0].rho == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.roots[1].rho == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("free energy matches its formula at the quartic saddle")
{
    const double g = 1.0;
    const Potential p({0.0, 0.5, g / 4.0});
    const double rc = (std::sqrt(5.0) - 1) / 2;
    for (int N : {10, 100}) {
        const double expect = N * (0.5 - p.value(rc) + 0.5 * std::log(rc)) - 0.5 * std::log(2 * rc * rc * p.second(rc) + 1);
        CHECK(free_energy_largeN(p, N) == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK_THROWS_AS(free_energy_largeN(multicritical_potential(4), 100), DomainError);
    CHECK_THROWS_AS(free_energy_largeN(p.with_model(ModelTag::matrix()), 100), DomainError);
}

TEST_CASE("Gaussian potential gives Z = 0")
{
    for (int N : {1, 10, 100, 1000, 100000})
        CHECK(std::abs(quadrature_Z(Potential({0.0, 0.5}), N)) < 1e-8);
}

TEST_CASE("quadrature agrees with a brute-force trapezoid")
{
    for (const auto &p : {Potential({0.0, 0.5, 0.25}), Potential({0.0, 0.5, 0.1, 0.02}), multicritical_potential(4)})
        for (int N : {4, 20, 200})
            CHECK(quadrature_Z(p, N) == doctest::Approx(trapezoid_Z(p, N)).epsilon(1e-9));
}

TEST_CASE("unbounded potentials are rejected")
{
    CHECK_THROWS_AS(quadrature_Z(Potential({0.0, 0.5, -0.25}), 10), DivergentIntegral);
    CHECK_THROWS_AS(quadrature_Z(Potential({0.0, 0.5, 0.25, -0.1}), 10), DivergentIntegral);
    CHECK_THROWS_AS(quadrature_Z(Potential({0.0, 0.5}), 0), DomainError);
}

TEST_CASE("oracle table: quadrature minus asymptotics is O(1/N)")
{
    const auto rows = oracle_table(Potential({0.0, 0.5, 0.25}), {400, 50, 200, 100});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].N == 50);
    CHECK(rows[3].N == 400);
    for (const auto &r : rows) {
        CHECK(r.diff == doctest::Approx(r.Z_quad - r.Z_asym));
        // bounded: N |diff| stays O(1)
        CHECK(r.N * std::abs(r.diff) < 0.1);
    }
}

TEST_CASE("collapse coordinates x = v N^(1 - q/m)")
{
    CHECK(scaling_exponent_d0(4, 1) == -0.75);
    const auto rows = scaling_collapse(4, 1, {-0.01, 0.0, 0.02}, {100, 50});
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].N == 50);
    for (const auto &r : rows) {
        CHECK(r.x == doctest::Approx(r.v * std::pow(r.N, 0.75)).epsilon(1e-14));
        if (r.v == 0.0) {
            CHECK(r.deltaZ == 0.0);
        }
    }
    const auto rx = scaling_collapse_x(4, 1, {-0.5, 0.5}, {100});
    REQUIRE(rx.size() == 2);
    CHECK(rx[1].x == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("collapse argument checks")
{
    CHECK_THROWS_AS(scaling_collapse(5, 1, {0.0}, {100}), DomainError);
    CHECK_THROWS_AS(scaling_collapse(4, 3, {0.0}, {100}), DomainError);
    CHECK_THROWS_AS(scaling_collapse(2, 1, {0.0}, {100}), DomainError);
}

TEST_CASE("collapse quality of identical curves is zero")
{
    std::vector<CollapseRow> rows;
    for (int N : {10, 20})
        for (int i = 0; i <= 10; ++i)
            rows.push_back({N, 0.0, -1.0 + 0.2 * i, std::sin(-1.0 + 0.2 * i)});
    const auto q = collapse_quality(rows, -1.0, 1.0);
    CHECK(q.defect < 1e-15);
    CHECK(q.max_abs == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("m = 4, q = 1 curves collapse within 5% for N = 400, 800")
{
    std::vector<double> xs;
    for (int i = 0; i <= 20; ++i)
        xs.push_back(-1.0 + 0.1 * i);
    const auto q = collapse_quality(scaling_collapse_x(4, 1, xs, {400, 800}), -1.0, 1.0);
    CHECK(q.defect < 0.05 * q.max_abs);
}
