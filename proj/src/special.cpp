#include "lnrg/special.hpp"

#include "lnrg/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace lnrg
{

SignedLogGamma log_gamma(double x)
{
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("log_gamma: pole at nonpositive integer");
    int sign = 1;
    const double v = boost::math::lgamma(x, &sign);
    return {v, sign};
}

double gamma_fn(double x)
{
    const auto lg = log_gamma(x);
    return lg.sign * std::exp(lg.log_abs);
}

double pochhammer(double x, int k)
{
    double p = 1.0;
    for (int i = 0; i < k; ++i)
        p *= x + i;
    return p;
}

long long binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    if (n > 60)
        throw DomainError("binomial: n too large");
    k = std::min(k, n - k);
    long long c = 1;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

} // namespace lnrg
