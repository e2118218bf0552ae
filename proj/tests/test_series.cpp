#include "lnrg/error.hpp"
#include "lnrg/series.hpp"
#include "lnrg/special.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lnrg;

namespace
{

double worst_diff(const TruncatedSeries &a, const TruncatedSeries &b)
{
    double d = 0.0;
    for (int k = 0; k <= std::min(a.order(), b.order()); ++k)
        d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

// generalized binomial C(alpha, k) by the product formula
double gen_binom(double alpha, int k)
{
    double c = 1.0;
    for (int j = 0; j < k; ++j)
        c *= (alpha - j) / (j + 1);
    return c;
}

std::vector<TruncatedSeries> family(int count, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> ord(1, 12);
    std::vector<TruncatedSeries> out;
    for (int i = 0; i < count; ++i) {
        std::vector<double> c(static_cast<std::size_t>(ord(rng)) + 1);
        c[0] = 1.0;
        for (std::size_t k = 1; k < c.size(); ++k)
            c[k] = u(rng);
        out.emplace_back(c);
    }
    return out;
}

} // namespace

TEST_CASE("product of polynomials truncates at the smaller order")
{
    const TruncatedSeries a({1.0, 1.0, 0.0, 0.0});
    const TruncatedSeries b({1.0, -1.0, 0.0});
    const auto p = series_mul(a, b);
    CHECK(p.order() == 2);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    CHECK(p[2] == -1.0);
}

TEST_CASE("ln(1 + x) has coefficients (-1)^(k+1)/k")
{
    const auto l = series_ln(TruncatedSeries({1.0, 1.0, 0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK(l[0] == 0.0);
    for (int k = 1; k <= 9; ++k)
        CHECK(l[k] == doctest::Approx((k % 2 ? 1.0 : -1.0) / k).epsilon(1e-15));
}

TEST_CASE("ln scales the constant term: ln(2 + 2x) = ln 2 + ln(1 + x)")
{
    const auto l = series_ln(TruncatedSeries({2.0, 2.0, 0, 0, 0}));
    CHECK(l[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(l[3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("exp(x) has coefficients 1/k!")
{
    const auto e = series_exp(TruncatedSeries::variable(12));
    double fact = 1.0;
    for (int k = 0; k <= 12; ++k) {
        if (k > 0)
            fact *= k;
        CHECK(e[k] == doctest::Approx(1.0 / fact).epsilon(1e-15));
    }
}

TEST_CASE("exp of a constant shifts only the constant term")
{
    const auto e = series_exp(TruncatedSeries({1.5, 1.0, 0, 0}));
    CHECK(e[0] == doctest::Approx(std::exp(1.5)));
    CHECK(e[3] == doctest::Approx(std::exp(1.5) / 6.0));
}

TEST_CASE("(1 + x)^alpha matches the generalized binomial series")
{
    for (double alpha : {-2.5, -1.0, -0.5, 1.0 / 3.0, 0.5, 2.0, 3.7}) {
        const auto p = series_pow(TruncatedSeries({1.0, 1.0, 0, 0, 0, 0, 0, 0, 0}), alpha);
        for (int k = 0; k <= 8; ++k)
            CHECK(p[k] == doctest::Approx(gen_binom(alpha, k)).epsilon(1e-13));
    }
}

TEST_CASE("(a0 + a1 x)^alpha carries a0^alpha")
{
    const auto p = series_pow(TruncatedSeries({4.0, 2.0, 0, 0}), 0.5);
    // 2 sqrt(1 + x/2) = 2 (1 + x/4 - x^2/32 + x^3/128)
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(p[2] == doctest::Approx(-1.0 / 16.0));
    CHECK(p[3] == doctest::Approx(1.0 / 64.0));
}

TEST_CASE("integer power agrees with repeated multiplication")
{
    const TruncatedSeries a({1.0, 0.3, -0.2, 0.7, 0.1, -0.4});
    const auto cube = series_mul(series_mul(a, a), a);
    CHECK(worst_diff(series_pow(a, 3.0), cube) < 1e-14);
}

TEST_CASE("derivative and integral")
{
    const TruncatedSeries a({5.0, 1.0, 3.0, 4.0});
    const auto d = a.derivative();
    CHECK(d.order() == 2);
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 6.0);
    CHECK(d[2] == 12.0);
    const auto i = d.integral();
    CHECK(i[0] == 0.0);
    CHECK(i[1] == 1.0);
    CHECK(i[2] == 3.0);
    CHECK(a.evaluate(2.0) == 5.0 + 2.0 + 12.0 + 32.0);
}

TEST_CASE("addition, scaling and constants")
{
    const TruncatedSeries a({1.0, 2.0, 3.0});
    const auto s = a + TruncatedSeries({0.5, 0.5});
    CHECK(s.order() == 1);
    CHECK(s[0] == 1.5);
    CHECK(series_add(a, 2.0)[0] == 3.0);
    CHECK((2.0 * a)[2] == 6.0);
    CHECK((a - a)[1] == 0.0);
    CHECK(TruncatedSeries::constant(7.0, 3).order() == 3);
    CHECK(TruncatedSeries::variable(3)[1] == 1.0);
    CHECK(a.truncated(5).order() == 5);
    CHECK(a.truncated(5)[4] == 0.0);
}

TEST_CASE("ln and pow reject a nonpositive constant term")
{
    CHECK_THROWS_AS(series_ln(TruncatedSeries({0.0, 1.0})), DomainError);
    CHECK_THROWS_AS(series_ln(TruncatedSeries({-1.0, 1.0})), DomainError);
    CHECK_THROWS_AS(series_pow(TruncatedSeries({0.0, 1.0}), 0.5), DomainError);
}

TEST_CASE("property: pow(a, 1) == a and exp(ln a) == a")
{
    for (const auto &a : family(200, 11u)) {
        CHECK(worst_diff(series_pow(a, 1.0), a) < 1e-14);
        CHECK(worst_diff(series_exp(series_ln(a)), a) < 1e-12);
    }
}

TEST_CASE("property: pow(a, x + y) == pow(a, x) pow(a, y)")
{
    std::mt19937_64 rng(12u);
    std::uniform_real_distribution<double> e(-4.0, 4.0);
    for (const auto &a : family(200, 13u)) {
        const double x = e(rng), y = e(rng);
        const auto lhs = series_pow(a, x + y);
        const auto rhs = series_mul(series_pow(a, x), series_pow(a, y));
        for (int k = 0; k <= a.order(); ++k)
            CHECK(std::abs(lhs[k] - rhs[k]) <= 1e-12 * std::max({1.0, std::abs(lhs[k]), std::abs(rhs[k])}));
    }
}

TEST_CASE("property: ln(a b) == ln a + ln b")
{
    const auto f = family(200, 14u);
    for (std::size_t i = 0; i + 1 < f.size(); i += 2) {
        const auto lhs = series_ln(series_mul(f[i], f[i + 1]));
        const auto rhs = series_ln(f[i]) + series_ln(f[i + 1]);
        CHECK(worst_diff(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("special functions")
{
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(log_gamma(-0.5).sign == -1);
    CHECK_THROWS_AS(log_gamma(-2.0), DomainError);
    CHECK(pochhammer(3.0, 0) == 1.0);
    CHECK(pochhammer(3.0, 4) == 3.0 * 4 * 5 * 6);
    CHECK(pochhammer(-2.0, 3) == 0.0);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(60, 30) == 118264581564861424LL);
    CHECK(binomial(5, 7) == 0);
}
