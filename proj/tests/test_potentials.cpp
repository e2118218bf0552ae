#include "lnrg/error.hpp"
#include "lnrg/potentials.hpp"
#include "lnrg/stability.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lnrg;

TEST_CASE("V' -> R maps for every model")
{
    const double v = 0.7;
    CHECK(r_from_dV(ModelTag::vector_d0(), v) == doctest::Approx(1.0 / (2 * v)));
    CHECK(r_from_dV(ModelTag::vector_qm(), v) == doctest::Approx(1.0 / std::sqrt(8 * v)));
    CHECK(r_from_dV(ModelTag::matrix(), v) == doctest::Approx(1.0 / v));
    CHECK(r_from_dV(ModelTag::matrix_qm(), v) == doctest::Approx(1.0 / std::sqrt(2 * v)));
    // K(3) = Gamma(-1/2)/(4 pi)^(3/2) = -1/(4 pi)
    CHECK(r_from_dV(ModelTag::vector_field(3.0), v) == doctest::Approx(-std::sqrt(2 * v) / (4 * M_PI)));
    // K(1) = 1/2, R = (2V')^(-1/2) / 2
    CHECK(r_from_dV(ModelTag::vector_field(1.0), v) == doctest::Approx(0.5 / std::sqrt(2 * v)));
}

TEST_CASE("K(d) closed values")
{
    CHECK(K_of_d(1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(K_of_d(3.0) == doctest::Approx(-1.0 / (4 * M_PI)).epsilon(1e-14));
    CHECK_THROWS_AS(K_of_d(2.0), DomainError);
    CHECK_THROWS_AS(ModelTag::vector_field(4.0), DomainError);
}

TEST_CASE("local determinant density (2K/d)(2V')^(d/2)")
{
    const Potential p({0.0, 0.5, 0.25});
    // d = 1 at rho = 0: (2 * 1/2 / 1) * 1 = 1
    CHECK(local_determinant_density(p, 1.0, 0.0) == doctest::Approx(1.0));
    CHECK(local_determinant_density(p, 3.0, 1.0) == doctest::Approx(2 * K_of_d(3.0) / 3.0 * std::pow(2.0, 1.5)));
}

TEST_CASE("jacobian matches a centred difference, inverse map round trips")
{
    for (auto tag : {ModelTag::vector_d0(), ModelTag::vector_qm(), ModelTag::vector_field(1.0), ModelTag::vector_field(3.0), ModelTag::matrix(),
                     ModelTag::matrix_qm()}) {
        for (double v : {0.2, 0.5, 1.3}) {
            const double h = 1e-5;
            const double fd = (r_from_dV(tag, v + h) - r_from_dV(tag, v - h)) / (2 * h);
            CHECK(r_jacobian(tag, v) == doctest::Approx(fd).epsilon(1e-8));
            CHECK(dV_from_r(tag, r_from_dV(tag, v)) == doctest::Approx(v).epsilon(1e-14));
        }
    }
}

TEST_CASE("quartic R = 1/(1 + g rho): exact Taylor coefficients")
{
    const double g = 0.6;
    const Potential p({0.0, 0.5, g / 4.0});
    const auto t0 = r_taylor(p, 0.0, 6);
    for (int k = 0; k <= 6; ++k)
        CHECK(t0[k] == doctest::Approx(std::pow(-g, k)).epsilon(1e-14));
    const auto t1 = r_taylor(p, 1.0, 5);
    for (int k = 0; k <= 5; ++k)
        CHECK(t1[k] == doctest::Approx(std::pow(-g / (1 + g), k) / (1 + g)).epsilon(1e-14));
    CHECK(r_from_potential(p, 2.0) == doctest::Approx(1.0 / (1 + 2 * g)));
}

TEST_CASE("Potential taylor is an exact shift")
{
    const Potential p({1.0, -2.0, 0.5, 3.0});
    const auto t = p.taylor(2.0, 4);
    CHECK(t[0] == doctest::Approx(p.value(2.0)));
    CHECK(t[1] == doctest::Approx(p.first(2.0)));
    CHECK(t[2] == doctest::Approx(p.second(2.0) / 2));
    CHECK(t[3] == doctest::Approx(3.0));
    CHECK(t[4] == 0.0);
}

TEST_CASE("multicritical_potential(3) is the quartic with g = -1/4")
{
    const auto p = multicritical_potential(3);
    REQUIRE(p.degree() == 2);
    CHECK(p.coeff(1) == 0.5);
    CHECK(4.0 * p.coeff(2) == -0.25);
}

TEST_CASE("multicritical coefficients (-1)^(j+1) C(m-1,j) / (2 j (m-1)^j)")
{
    const auto p = multicritical_potential(5);
    // m - 1 = 4: 1/2, -6/(4*16), 4/(6*64), -1/(8*256)
    CHECK(p.coeff(1) == doctest::Approx(0.5));
    CHECK(p.coeff(2) == doctest::Approx(-6.0 / 64.0));
    CHECK(p.coeff(3) == doctest::Approx(4.0 / 384.0));
    CHECK(p.coeff(4) == doctest::Approx(-1.0 / 2048.0));
    CHECK_THROWS_AS(multicritical_potential(1), DomainError);
}

TEST_CASE("multicritical saddle: R(m-1) = m-1 with R' = 1 for m >= 3")
{
    for (int m = 2; m <= 8; ++m) {
        const auto r = r_taylor(multicritical_potential(m), m - 1.0, 3);
        CHECK(r[0] == doctest::Approx(m - 1.0).epsilon(1e-12));
        if (m >= 3) {
            CHECK(std::abs(r[1] - 1.0) < 1e-10);
        }
        if (m >= 4) {
            CHECK(std::abs(r[2]) < 1e-10);
        }
    }
}

TEST_CASE("linear fixed potentials")
{
    SUBCASE("vector gamma = 1/m - 1")
    {
        for (int m = 1; m <= 8; ++m)
            CHECK(gamma_anomalous(linear_fixed_potential(ModelTag::vector_d0(), m)) == doctest::Approx(1.0 / m - 1.0).epsilon(1e-14));
    }
    SUBCASE("matrix m = 2, 3 in mu: mu^2/2 - mu^4/16 and mu^2/2 - mu^4/12 + mu^6/216")
    {
        // rho = mu^2/2 so c_k rho^k contributes c_k / 2^k to mu^(2k)
        const auto p2 = linear_fixed_potential(ModelTag::matrix(), 2);
        CHECK(p2.coeff(1) / 2 == 0.5);
        CHECK(p2.coeff(2) / 4 == -1.0 / 16.0);
        const auto p3 = linear_fixed_potential(ModelTag::matrix(), 3);
        CHECK(p3.coeff(1) / 2 == 0.5);
        CHECK(p3.coeff(2) / 4 == -1.0 / 12.0);
        CHECK(p3.coeff(3) / 8 == 1.0 / 216.0);
    }
    SUBCASE("residual of the linearised equation")
    {
        for (auto tag : {ModelTag::vector_d0(), ModelTag::vector_qm(), ModelTag::matrix()})
            for (int m = 1; m <= 8; ++m) {
                const auto p = linear_fixed_potential(tag, m);
                for (int i = 0; i <= 50; ++i)
                    CHECK(std::abs(linear_fixed_point_residual(p, 0.1 * i)) < 1e-10 * std::max(1.0, std::abs(p.value(0.1 * i))));
            }
    }
    CHECK_THROWS_AS(linear_fixed_potential(ModelTag::vector_d0(), 0), DomainError);
}

TEST_CASE("gamma: -R'(0) = 2V''(0) for VectorD0, rho_0 generalisation")
{
    const Potential p({0.0, 0.5, 0.3, -0.1});
    CHECK(gamma_anomalous(p) == doctest::Approx(2 * p.second(0.0)).epsilon(1e-14));
    // -(R(0) + rho_0) R'(0) / R(0), R(0) = 1, R'(0) = -2 V''(0)
    CHECK(gamma_anomalous(p, 0.5) == doctest::Approx(1.5 * 2 * p.second(0.0)).epsilon(1e-14));
}

TEST_CASE("round trip V' = 1/(2R) on [0, 8]")
{
    const Potential p({0.0, 0.5, 0.25, 0.05});
    for (int i = 0; i <= 800; ++i) {
        const double x = 0.01 * i;
        CHECK(std::abs(1.0 / (2.0 * r_from_potential(p, x)) - p.first(x)) < 1e-14);
    }
}

TEST_CASE("V' <= 0 is outside the map")
{
    const Potential p({0.0, 0.5, -0.25});
    CHECK_THROWS_AS(r_from_potential(p, 2.0), DomainError);
    CHECK_THROWS_AS(r_from_dV(ModelTag::vector_d0(), 0.0), DomainError);
}

TEST_CASE("potential text round trip is bit exact")
{
    std::mt19937_64 rng(3u);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> c(5);
        for (auto &x : c)
            x = u(rng) * std::pow(10.0, static_cast<int>(u(rng)));
        const Potential p(c, i % 2 ? ModelTag::vector_field(0.5 + 0.01 * i) : ModelTag::matrix());
        const auto q = parse_potential(format_potential(p));
        CHECK(q.model() == p.model());
        CHECK(q.coeffs() == p.coeffs());
    }
    const auto q = parse_potential("model=VectorD0 coeffs=0,0.5,0.25");
    CHECK(q.coeff(2) == 0.25);
    CHECK(q.normalized());
}

TEST_CASE("malformed potential text")
{
    CHECK_THROWS_AS(parse_potential("model=VectorD0"), DomainError);
    CHECK_THROWS_AS(parse_potential("model=Nope coeffs=1"), DomainError);
    CHECK_THROWS_AS(parse_potential("model=VectorField coeffs=0,0.5"), DomainError);
    CHECK_THROWS_AS(parse_potential("model=VectorD0 coeffs=0,x"), DomainError);
    CHECK_THROWS_AS(parse_potential("model=VectorD0 colour=red coeffs=0"), DomainError);
}

TEST_CASE("sampled R agrees with analytic R")
{
    const Potential p({0.0, 0.5, 0.2});
    const UniformGrid g(0.0, 4.0, 401);
    std::vector<double> R;
    for (double x : g.points())
        R.push_back(r_from_potential(p, x));
    const auto a = RFunction::analytic(p);
    const auto s = RFunction::sampled(GridFunction(g, R));
    for (double x : {0.0, 0.333, 1.7, 3.99}) {
        CHECK(s.value(x) == doctest::Approx(a.value(x)).epsilon(1e-10));
        CHECK(s.derivative(x) == doctest::Approx(a.derivative(x)).epsilon(1e-7));
    }
    CHECK(s.rho_max() == 4.0);
    CHECK_FALSE(s.try_value(5.0).has_value());
}
