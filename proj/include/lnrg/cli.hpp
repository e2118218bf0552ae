#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnrg
{

/// Bad command line or config file. code is 2, or 0 for --help.
struct UsageError : std::runtime_error
{
    int code;
    UsageError(const std::string &msg, int code_ = 2) : std::runtime_error(msg), code(code_) {}
};

/// Effective configuration after defaults, config file and flags are merged.
struct RunConfig
{
    std::string subcommand;
    std::string model;     // tag for saddle/quadrature/flow, family name for spectrum/beta/exponents
    std::string potential; // `model=... coeffs=...`; empty means the quartic built from g
    int m = 2;
    int n = 2;
    int q = 1; // 0 = every admissible q (exponents)
    double gamma = 0.0;
    bool gamma_set = false;
    double g = 1.0;
    double d = 3.0;
    double rho_0 = 0.0;
    std::vector<int> N_list;
    std::vector<double> v_list;
    std::vector<double> x_list;
    int n_grid = 1024;
    double rho_max = 8.0;
    double dtau = 1e-3;
    int steps = 100;
    int record_every = 10;
    int count = 8;
    int emit_series = -1; // K >= 0 switches fixed-point output to series coefficients
    double g_lo = -0.5;
    double g_hi = 0.5;
    int points = 101;
    std::string snapshots; // optional `tau,rho,R` file for flow
    std::string out;       // empty: stdout
    std::string format = "csv";
    bool quiet = false;
    std::string config_path;
};

/// args excludes the program name. Throws UsageError.
RunConfig parse_args(const std::vector<std::string> &args);

/// One-line `key=value` echo of every field, used as the output header.
std::string describe(const RunConfig &c);

/// Executes the subcommand; data goes to c.out (or `out`), summary to `out`.
/// Returns the exit status; module errors propagate as exceptions.
int run(const RunConfig &c, std::ostream &out);

/// parse_args + run with the 0/1/2 exit code policy.
int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace lnrg
