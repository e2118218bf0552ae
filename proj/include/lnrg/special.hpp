#pragma once

namespace lnrg
{

struct SignedLogGamma
{
    double log_abs; // ln|Gamma(x)|
    int sign;       // sign of Gamma(x)
};

/// ln|Gamma(x)| and its sign; x must not be a nonpositive integer.
SignedLogGamma log_gamma(double x);

/// Gamma(x) off the poles, via log_gamma.
double gamma_fn(double x);

/// Rising factorial x (x+1) ... (x+k-1); P(x, 0) = 1.
double pochhammer(double x, int k);

/// Binomial coefficient C(n, k) as an exact integer (n <= 60).
long long binomial(int n, int k);

} // namespace lnrg
