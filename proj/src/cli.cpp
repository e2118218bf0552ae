#include "lnrg/cli.hpp"

#include "lnrg/error.hpp"
#include "lnrg/fixedpoint.hpp"
#include "lnrg/flow.hpp"
#include "lnrg/format.hpp"
#include "lnrg/potentials.hpp"
#include "lnrg/saddle.hpp"
#include "lnrg/stability.hpp"
#include "lnrg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <variant>

namespace lnrg
{

namespace
{

using json = nlohmann::ordered_json;

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string join_doubles(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + fmt_double(v[i]);
    return s;
}

std::string join_ints(const std::vector<int> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// `key = value` lines with # comments, turned into flags placed ahead of argv
std::vector<std::string> config_file_args(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty() || key == "config")
            throw UsageError(path + ":" + std::to_string(lineno) + ": invalid key");
        if (key == "quiet") {
            if (value == "true" || value == "1" || value == "yes")
                out.push_back("--quiet");
            else if (!(value == "false" || value == "0" || value == "no"))
                throw UsageError(path + ":" + std::to_string(lineno) + ": quiet must be true or false");
            continue;
        }
        out.push_back("--" + key);
        out.push_back(value);
    }
    return out;
}

template <class T> std::vector<T> parse_list(const std::string &text, const char *what)
{
    std::vector<T> out;
    try {
        for (double v : parse_double_list(text)) {
            if constexpr (std::is_same_v<T, int>) {
                if (v != std::floor(v) || std::abs(v) > 1e9)
                    throw DomainError("not an integer");
                out.push_back(static_cast<int>(v));
            } else
                out.push_back(v);
        }
    } catch (const Error &e) {
        throw UsageError(std::string("invalid ") + what + " list '" + text + "': " + e.what());
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

Potential default_potential(const RunConfig &c)
{
    const ModelKind k = parse_model_kind(c.model);
    ModelTag tag{k, 0.0};
    if (k == ModelKind::VectorField)
        tag = ModelTag::vector_field(c.d);
    else if (k == ModelKind::VectorQM)
        tag = ModelTag::vector_qm();
    else if (k == ModelKind::MatrixQM)
        tag = ModelTag::matrix_qm();
    // mu^2/2 + g mu^4/4 for Matrix in rho = mu^2/2, rho/2 + g rho^2/4 otherwise
    if (k == ModelKind::Matrix)
        return Potential({0.0, 1.0, c.g}, tag);
    return Potential({0.0, 0.5, c.g / 4.0}, tag);
}

// ---------------------------------------------------------------- output

using Cell = std::variant<double, long long, std::string>;

struct Output
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string rows_key = "rows";
    json summary = json::object();
    std::vector<std::string> lines;
    int status = 0;
};

std::string csv_cell(const Cell &c)
{
    if (const auto *d = std::get_if<double>(&c))
        return fmt_double(*d);
    if (const auto *i = std::get_if<long long>(&c))
        return std::to_string(*i);
    const auto &s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s)
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

json json_cell(const Cell &c)
{
    if (const auto *d = std::get_if<double>(&c))
        return std::isfinite(*d) ? json(*d) : json(nullptr);
    if (const auto *i = std::get_if<long long>(&c))
        return *i;
    return std::get<std::string>(c);
}

json jnum(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

void write_data(const RunConfig &c, const Output &o, std::ostream &os)
{
    const std::string echo = describe(c);
    if (c.format == "json") {
        json j = json::object();
        j["_config"] = echo;
        for (const auto &[k, v] : o.summary.items())
            j[k] = v;
        json rows = json::array();
        for (const auto &r : o.rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < o.columns.size(); ++i)
                obj[o.columns[i]] = json_cell(r[i]);
            rows.push_back(std::move(obj));
        }
        j[o.rows_key] = std::move(rows);
        os << j.dump(2) << '\n';
        return;
    }
    CsvWriter w(os, echo, o.columns);
    for (const auto &r : o.rows) {
        std::vector<std::string> cells;
        for (const auto &cell : r)
            cells.push_back(csv_cell(cell));
        w.row_text(cells);
    }
}

void emit(const RunConfig &c, const Output &o, std::ostream &out)
{
    for (const auto &l : o.lines)
        out << l << '\n';
    if (c.out.empty()) {
        write_data(c, o, out);
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f)
        throw Error("cannot open output file " + c.out);
    write_data(c, o, f);
    if (!f)
        throw Error("failed writing " + c.out);
}

// ---------------------------------------------------------------- subcommands

Output run_saddle(const RunConfig &c)
{
    const Potential p = parse_potential(c.potential);
    const auto rep = solve_saddle(RFunction::analytic(p, c.rho_0), c.rho_0, {0.0, c.rho_max});
    Output o;
    o.columns = {"rho", "multiplicity", "order_m", "residual"};
    json roots = json::array();
    for (const auto &r : rep.roots) {
        o.rows.push_back({r.rho, static_cast<long long>(r.multiplicity), static_cast<long long>(r.order_m), r.residual});
        roots.push_back(r.rho);
    }
    o.summary["roots"] = roots;
    o.summary["order_m"] = rep.order_m;
    o.summary["Z_leading"] = jnum(rep.Z_leading);
    o.summary["Z_correction"] = jnum(rep.Z_correction);
    o.lines.push_back("saddle roots on [0, " + fmt_double(c.rho_max) + "]: " + std::to_string(rep.roots.size()));
    for (const auto &r : rep.roots)
        o.lines.push_back("  rho_c = " + fmt_double(r.rho) + "  order m = " + std::to_string(r.order_m));
    json fe = json::array();
    for (int N : c.N_list) {
        try {
            const double z = free_energy_largeN(p, N);
            fe.push_back({{"N", N}, {"Z_asym", jnum(z)}});
            o.lines.push_back("  large-N free energy N = " + std::to_string(N) + ": " + fmt_double(z));
        } catch (const DomainError &e) {
            o.lines.push_back(std::string("  large-N free energy unavailable: ") + e.what());
            break;
        }
    }
    o.summary["free_energy"] = fe;
    return o;
}

Output run_quadrature(const RunConfig &c)
{
    const Potential p = parse_potential(c.potential);
    std::vector<int> Ns = c.N_list;
    std::sort(Ns.begin(), Ns.end());
    Output o;
    o.columns = {"N", "Z_quad", "Z_asym", "diff"};
    std::string asym_note;
    for (int N : Ns) {
        const double zq = quadrature_Z(p, N);
        double za = nan_v;
        try {
            za = free_energy_largeN(p, N);
        } catch (const DomainError &e) {
            asym_note = e.what();
        }
        o.rows.push_back({static_cast<long long>(N), zq, za, zq - za});
        o.lines.push_back("N = " + std::to_string(N) + "  Z_quad = " + fmt_double(zq) + "  Z_asym = " + fmt_double(za));
    }
    if (!asym_note.empty())
        o.lines.push_back("large-N asymptotics unavailable: " + asym_note);
    return o;
}

Output run_collapse(const RunConfig &c)
{
    const auto rows = c.v_list.empty() ? scaling_collapse_x(c.m, c.q, c.x_list, c.N_list) : scaling_collapse(c.m, c.q, c.v_list, c.N_list);
    Output o;
    o.columns = {"N", "v", "x", "deltaZ"};
    double xlo = INFINITY, xhi = -INFINITY;
    for (const auto &r : rows) {
        o.rows.push_back({static_cast<long long>(r.N), r.v, r.x, r.deltaZ});
        xlo = std::min(xlo, r.x);
        xhi = std::max(xhi, r.x);
    }
    o.lines.push_back("scaling collapse m = " + std::to_string(c.m) + ", q = " + std::to_string(c.q) + ", x = v N^" +
                      fmt_double(-scaling_exponent_d0(c.m, c.q)));
    if (c.N_list.size() >= 2 && xhi > xlo) {
        // compare over the x range common to every curve
        for (int N : c.N_list) {
            double lo = INFINITY, hi = -INFINITY;
            for (const auto &r : rows)
                if (r.N == N) {
                    lo = std::min(lo, r.x);
                    hi = std::max(hi, r.x);
                }
            xlo = std::max(xlo, lo);
            xhi = std::min(xhi, hi);
        }
        if (xhi > xlo) {
            const auto q = collapse_quality(rows, xlo, xhi);
            o.summary["defect"] = jnum(q.defect);
            o.summary["max_abs_deltaZ"] = jnum(q.max_abs);
            o.lines.push_back("collapse defect on [" + fmt_double(xlo) + ", " + fmt_double(xhi) + "]: " + fmt_double(q.defect) +
                              " (max |deltaZ| " + fmt_double(q.max_abs) + ")");
        }
    }
    return o;
}

Output run_flow(const RunConfig &c)
{
    const Potential p = parse_potential(c.potential);
    const UniformGrid grid(0.0, c.rho_max, c.n_grid);
    std::vector<double> R;
    for (double x : grid.points())
        R.push_back(r_from_potential(p, x));
    const auto hist = evolve_history(make_flow_state(grid, R, c.rho_0), c.dtau, c.steps, c.record_every);
    const auto track = track_saddle(hist);
    Output o;
    o.columns = {"tau", "gamma", "rho_c", "residual"};
    for (std::size_t i = 0; i < track.rows.size(); ++i) {
        const auto &r = track.rows[i];
        const double resid = i > 0 && i - 1 < track.drift.size() ? track.drift[i - 1].residual : nan_v;
        o.rows.push_back({r.tau, r.gamma, r.rho_c.value_or(nan_v), resid});
    }
    const auto &last = hist.back();
    o.summary["tau_final"] = last.tau;
    o.summary["gamma_final"] = jnum(last.gamma);
    o.summary["rho_c_final"] = last.rho_c ? jnum(*last.rho_c) : json(nullptr);
    o.summary["max_drift_residual"] = jnum(track.max_drift_residual);
    o.lines.push_back("flow " + format_potential(p) + " to tau = " + fmt_double(last.tau));
    o.lines.push_back("  gamma = " + fmt_double(last.gamma) + "  rho_c = " + (last.rho_c ? fmt_double(*last.rho_c) : std::string("none")));
    o.lines.push_back("  max |d ln rho_c/dtau - gamma| = " + fmt_double(track.max_drift_residual));
    if (!c.snapshots.empty()) {
        std::ofstream f(c.snapshots, std::ios::binary);
        if (!f)
            throw Error("cannot open snapshot file " + c.snapshots);
        CsvWriter w(f, describe(c), {"tau", "rho", "R"});
        for (const auto &st : hist) {
            const auto x = st.grid.points();
            for (std::size_t i = 0; i < x.size(); ++i)
                w.row({st.tau, x[i], st.R[i]});
        }
    }
    return o;
}

Output run_fixed_point(const RunConfig &c)
{
    const double gamma = c.gamma_set ? c.gamma : -1.0 / c.n;
    const auto n = polynomial_index(gamma);
    Output o;
    o.summary["gamma"] = gamma;
    o.summary["n"] = n ? json(*n) : json(nullptr);
    if (c.emit_series >= 0) {
        const auto s = series_coeffs(gamma, c.emit_series);
        o.columns = {"k", "a_k"};
        for (int k = 0; k <= s.order(); ++k)
            o.rows.push_back({static_cast<long long>(k), s[k]});
        o.rows_key = "coefficients";
        o.lines.push_back("series of R(rho) about 0 for gamma = " + fmt_double(gamma) + " through order " + std::to_string(c.emit_series));
        return o;
    }
    const auto sol = solve_fixed_point(gamma, UniformGrid(0.0, c.rho_max, c.n_grid).points());
    o.columns = {"rho", "R", "residual"};
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.rho.size(); ++i) {
        double r;
        if (n) {
            const long double R = sol.R[i];
            r = static_cast<double>(std::fabs(std::pow(R, static_cast<long double>(*n - 1)) * (R - sol.rho[i]) - 1.0L));
        } else
            r = std::abs(std::pow(sol.R[i], 1.0 + 1.0 / gamma) - sol.R[i] + sol.rho[i]);
        worst = std::max(worst, r);
        o.rows.push_back({sol.rho[i], sol.R[i], r});
    }
    const auto sing = singularity(gamma);
    double slope = nan_v;
    try {
        slope = asymptotic_slope(gamma, 1e2, 1e4);
    } catch (const Error &) {
    }
    json dual = json::array();
    for (double rho : {0.25, 0.5, 1.0}) {
        double d = nan_v;
        try {
            d = duality_check(gamma, rho);
        } catch (const Error &) {
        }
        dual.push_back({{"rho", rho}, {"residual", jnum(d)}});
    }
    o.summary["singularity_modulus"] = sing.exists ? jnum(sing.rho_modulus) : json(nullptr);
    o.summary["asymptotic_slope"] = jnum(slope);
    o.summary["max_residual"] = worst;
    o.summary["duality"] = dual;
    o.lines.push_back("fixed point gamma = " + fmt_double(gamma) + (n ? " (n = " + std::to_string(*n) + ")" : std::string()) + " on [0, " +
                      fmt_double(c.rho_max) + "]");
    o.lines.push_back("  max residual " + fmt_double(worst));
    o.lines.push_back("  singularity |rho| = " + (sing.exists ? fmt_double(sing.rho_modulus) : std::string("none")));
    o.lines.push_back("  asymptotic slope of R - rho: " + fmt_double(slope));
    for (const auto &d : dual)
        o.lines.push_back("  duality residual at rho = " + fmt_double(d["rho"].get<double>()) + ": " +
                          (d["residual"].is_null() ? std::string("n/a") : fmt_double(d["residual"].get<double>())));
    return o;
}

ModelTag spectrum_tag(const std::string &family)
{
    if (family == "vector" || family == "VectorD0")
        return ModelTag::vector_d0();
    if (family == "matrix" || family == "Matrix")
        return ModelTag::matrix();
    if (family == "qm" || family == "VectorQM")
        return ModelTag::vector_qm();
    throw UsageError("spectrum model must be vector, matrix or qm");
}

Output run_spectrum(const RunConfig &c)
{
    const auto rep = spectrum(spectrum_tag(c.model), c.m, c.count);
    Output o;
    o.summary["model"] = c.model;
    o.summary["m"] = c.m;
    o.summary["positive_count"] = rep.positive_count;
    json ex = json::array();
    for (const auto &e : rep.excluded)
        ex.push_back({{"kappa", e.kappa}, {"reason", e.reason}});
    o.summary["excluded"] = ex;
    o.rows_key = "eigenvalues";
    o.columns = {"index", "kappa"};
    std::string list;
    for (const auto &e : rep.eigenvalues) {
        o.rows.push_back({static_cast<long long>(e.index), e.kappa});
        list += (list.empty() ? "" : ", ") + fmt_double(e.kappa);
    }
    o.lines.push_back(c.model + " m = " + std::to_string(c.m) + " eigenvalues: " + list);
    o.lines.push_back("  positive: " + std::to_string(rep.positive_count));
    for (const auto &e : rep.excluded)
        o.lines.push_back("  excluded kappa = " + fmt_double(e.kappa) + ": " + e.reason);
    return o;
}

std::string polynomial_text(const TruncatedSeries &b)
{
    double scale = 0.0;
    for (double v : b.coeffs())
        scale = std::max(scale, std::abs(v));
    std::string s;
    for (int k = 0; k <= b.order(); ++k) {
        const double v = b[k];
        if (std::abs(v) <= 1e-12 * scale)
            continue;
        const double a = std::abs(v);
        std::string term = k == 0 ? fmt_double(a) : (a == 1.0 ? "" : fmt_double(a)) + "g" + (k > 1 ? "^" + std::to_string(k) : "");
        if (s.empty())
            s = (v < 0 ? "-" : "") + term;
        else
            s += (v < 0 ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

Output run_beta(const RunConfig &c)
{
    if (c.model != "vector" && c.model != "matrix")
        throw UsageError("beta model must be vector or matrix");
    const auto rep = c.model == "vector" ? beta_vector() : beta_matrix();
    Output o;
    json coeffs = json::array();
    for (double v : rep.beta_coeffs.coeffs())
        coeffs.push_back(v);
    o.summary["beta_coeffs"] = coeffs;
    json fps = json::array();
    o.lines.push_back("beta(g) = " + polynomial_text(rep.beta_coeffs));
    for (const auto &fp : rep.fixed_points) {
        fps.push_back({{"g_star", fp.g_star}, {"beta_prime", fp.beta_prime}});
        o.lines.push_back("  g* = " + fmt_double(fp.g_star) + "  beta'(g*) = " + fmt_double(fp.beta_prime));
    }
    o.summary["fixed_points"] = fps;
    o.summary["derived_exponent"] = rep.derived_exponent ? jnum(*rep.derived_exponent) : json(nullptr);
    o.summary["exact_g_c"] = rep.exact_g_c ? jnum(*rep.exact_g_c) : json(nullptr);
    if (rep.derived_exponent)
        o.lines.push_back("  gamma_string = " + fmt_double(*rep.derived_exponent) + " (exact -1/2)");
    if (rep.exact_g_c)
        o.lines.push_back("  exact critical coupling g_c = " + fmt_double(*rep.exact_g_c));
    o.columns = {"g", "beta"};
    for (double g : linspace(c.g_lo, c.g_hi, c.points))
        o.rows.push_back({g, rep.beta_coeffs.evaluate(g)});
    return o;
}

Output run_exponents(const RunConfig &c)
{
    Output o;
    if (c.model == "d0") {
        o.columns = {"m", "q", "exponent"};
        const int q0 = c.q ? c.q : 1, q1 = c.q ? c.q : c.m - 1;
        for (int q = q0; q <= q1; ++q) {
            const double e = scaling_exponent_d0(c.m, q);
            o.rows.push_back({static_cast<long long>(c.m), static_cast<long long>(q), e});
            o.lines.push_back("d0 m = " + std::to_string(c.m) + ", q = " + std::to_string(q) + ": v ~ N^" + fmt_double(e));
        }
    } else if (c.model == "qm") {
        o.columns = {"m", "q", "alpha_exp", "vq_exp"};
        const int q0 = c.q ? c.q : 1, q1 = c.q ? c.q : c.m;
        for (int q = q0; q <= q1; ++q) {
            const auto e = scaling_exponents_qm(c.m, q);
            o.rows.push_back({static_cast<long long>(c.m), static_cast<long long>(q), e.alpha_exp, e.vq_exp});
            o.lines.push_back("qm m = " + std::to_string(c.m) + ", q = " + std::to_string(q) + ": alpha ~ (N z)^" + fmt_double(e.alpha_exp) +
                              ", v_q ~ N^" + fmt_double(e.vq_exp));
        }
    } else if (c.model == "matrix-double-scaling") {
        o.columns = {"m", "gamma_str", "kappa_exp"};
        const auto e = double_scaling_matrix(c.m);
        o.rows.push_back({static_cast<long long>(c.m), e.gamma_str, e.kappa_exp});
        o.lines.push_back("matrix m = " + std::to_string(c.m) + ": gamma_string = " + fmt_double(e.gamma_str) +
                          ", 1/kappa = N (g - g_c)^" + fmt_double(e.kappa_exp));
    } else
        throw UsageError("exponents model must be d0, qm or matrix-double-scaling");
    return o;
}

Output run_verify(const RunConfig &c)
{
    const auto results = run_invariant_suite();
    Output o;
    o.columns = {"suite", "name", "pass", "detail"};
    int failed = 0;
    for (const auto &r : results) {
        o.rows.push_back({r.suite, r.name, std::string(r.pass ? "true" : "false"), r.detail});
        if (!r.pass)
            ++failed;
        if (!c.quiet || !r.pass)
            o.lines.push_back(std::string(r.pass ? "PASS " : "FAIL ") + r.suite + ": " + r.name + " [" + r.detail + "]");
    }
    o.lines.push_back(std::to_string(results.size() - static_cast<std::size_t>(failed)) + "/" + std::to_string(results.size()) + " checks passed");
    o.summary["passed"] = static_cast<int>(results.size()) - failed;
    o.summary["failed"] = failed;
    o.status = failed ? 1 : 0;
    return o;
}

} // namespace

std::string describe(const RunConfig &c)
{
    std::ostringstream os;
    os << "lnrg " << c.subcommand << " model=" << c.model << " potential=\"" << c.potential << "\"" << " m=" << c.m << " n=" << c.n
       << " q=" << c.q << " gamma=" << (c.gamma_set ? fmt_double(c.gamma) : std::string("-1/n")) << " g=" << fmt_double(c.g)
       << " d=" << fmt_double(c.d) << " rho_0=" << fmt_double(c.rho_0) << " N=" << join_ints(c.N_list) << " v=" << join_doubles(c.v_list)
       << " x=" << join_doubles(c.x_list) << " n_grid=" << c.n_grid << " rho_max=" << fmt_double(c.rho_max) << " dtau=" << fmt_double(c.dtau)
       << " steps=" << c.steps << " record_every=" << c.record_every << " count=" << c.count << " emit_series=" << c.emit_series
       << " g_range=" << fmt_double(c.g_lo) << "," << fmt_double(c.g_hi) << " points=" << c.points << " format=" << c.format;
    return os.str();
}

RunConfig parse_args(const std::vector<std::string> &args)
{
    // config-file values go first so that later command-line values win
    std::vector<std::string> merged;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a path");
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        if (!path.empty()) {
            auto extra = config_file_args(path);
            merged.insert(merged.end(), extra.begin(), extra.end());
        }
    }
    merged.insert(merged.end(), args.begin(), args.end());

    RunConfig c;
    std::string N_text, v_text, x_text, g_range;
    CLI::App app{"Large-N renormalization group toolkit", "lnrg"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--config", c.config_path, "key = value file; command-line flags take precedence");
    auto *o_model = app.add_option("--model", c.model, "model tag or family");
    app.add_option("--potential", c.potential, "potential record `model=<tag> [d=<real>] coeffs=c0,c1,...`");
    auto *o_m = app.add_option("--m", c.m, "multicriticality order");
    app.add_option("--n", c.n, "fixed point index, gamma = -1/n");
    auto *o_q = app.add_option("--q", c.q, "perturbation index");
    auto *o_gamma = app.add_option("--gamma", c.gamma, "explicit gamma for fixed-point");
    app.add_option("--g", c.g, "quartic coupling of the default potential");
    app.add_option("--d", c.d, "dimension for VectorField");
    app.add_option("--rho-0,--rho_0", c.rho_0, "cutoff shift rho_0");
    auto *o_N = app.add_option("--N", N_text, "comma-separated N list");
    app.add_option("--v", v_text, "comma-separated v list (collapse)");
    auto *o_x = app.add_option("--x", x_text, "comma-separated x list (collapse)");
    app.add_option("--n-grid,--n_grid", c.n_grid, "grid points")->check(CLI::Range(8, 1 << 22));
    app.add_option("--rho-max,--rho_max", c.rho_max, "upper end of the rho grid")->check(CLI::PositiveNumber);
    app.add_option("--dtau", c.dtau, "RG time step")->check(CLI::PositiveNumber);
    app.add_option("--steps", c.steps, "number of RG time steps")->check(CLI::NonNegativeNumber);
    app.add_option("--record-every,--record_every", c.record_every, "record every k steps")->check(CLI::PositiveNumber);
    app.add_option("--count", c.count, "number of eigenvalues")->check(CLI::PositiveNumber);
    app.add_option("--emit-series,--emit_series", c.emit_series, "emit series coefficients through order K")->check(CLI::Range(0, 64));
    app.add_option("--g-range,--g_range", g_range, "beta sweep interval lo,hi");
    app.add_option("--points", c.points, "beta sweep points")->check(CLI::Range(1, 1000000));
    app.add_option("--snapshots", c.snapshots, "flow: also write tau,rho,R snapshots here");
    app.add_option("--out", c.out, "data file (default: standard output)");
    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--quiet", c.quiet, "suppress the human-readable summary");

    for (const char *name : {"saddle", "quadrature", "collapse", "flow", "fixed-point", "spectrum", "beta", "exponents", "verify"})
        app.add_subcommand(name)->fallthrough();
    app.get_subcommand("saddle")->description("roots of R(rho) = rho - rho_0 and the large-N free energy");
    app.get_subcommand("quadrature")->description("finite-N partition function by quadrature over an N list");
    app.get_subcommand("collapse")->description("finite-size scaling collapse near a multicritical point");
    app.get_subcommand("flow")->description("integrate the universal flow and track the saddle");
    app.get_subcommand("fixed-point")->description("fixed points R^(1+1/gamma) = R - rho, series and duality");
    app.get_subcommand("spectrum")->description("linear-approximation eigenvalues (vector|matrix|qm)");
    app.get_subcommand("beta")->description("beta function (vector|matrix)");
    app.get_subcommand("exponents")->description("scaling exponents (d0|qm|matrix-double-scaling)");
    app.get_subcommand("verify")->description("run every invariant check");

    try {
        std::vector<std::string> rev(merged.rbegin(), merged.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        throw UsageError(app.help(), 0);
    } catch (const CLI::CallForAllHelp &) {
        throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
    } catch (const CLI::ParseError &e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help());
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    c.gamma_set = o_gamma->count() > 0;
    const std::string &sc = c.subcommand;

    if (o_model->count() == 0) {
        if (sc == "spectrum" || sc == "beta")
            c.model = "vector";
        else if (sc == "exponents")
            c.model = "d0";
        else
            c.model = "VectorD0";
    }
    if (o_m->count() == 0)
        c.m = sc == "collapse" || sc == "exponents" ? 4 : 2;
    if (o_q->count() == 0)
        c.q = sc == "exponents" ? 0 : 1;
    if (o_N->count() == 0)
        N_text = sc == "collapse" ? "200,400,800" : sc == "saddle" ? "100" : "10,100,1000";
    c.N_list = parse_list<int>(N_text, "N");
    if (!v_text.empty())
        c.v_list = parse_list<double>(v_text, "v");
    if (o_x->count() > 0)
        c.x_list = parse_list<double>(x_text, "x");
    else if (sc == "collapse" && c.v_list.empty())
        c.x_list = linspace(-1.0, 1.0, 41);
    if (!g_range.empty()) {
        const auto r = parse_list<double>(g_range, "g-range");
        if (r.size() != 2 || !(r[0] < r[1]))
            throw UsageError("--g-range needs lo,hi with lo < hi");
        c.g_lo = r[0];
        c.g_hi = r[1];
    }
    for (int N : c.N_list)
        if (N < 1)
            throw UsageError("N values must be positive");
    if (sc == "fixed-point" && !c.gamma_set && c.n < 1)
        throw UsageError("--n must be >= 1");

    if (sc == "saddle" || sc == "quadrature" || sc == "flow") {
        try {
            const Potential p = c.potential.empty() ? default_potential(c) : parse_potential(c.potential);
            c.potential = format_potential(p);
            c.model = model_name(p.model().kind);
        } catch (const Error &e) {
            throw UsageError(std::string("invalid potential: ") + e.what());
        }
    }
    return c;
}

int run(const RunConfig &c, std::ostream &out)
{
    Output o;
    const std::string &sc = c.subcommand;
    if (sc == "saddle")
        o = run_saddle(c);
    else if (sc == "quadrature")
        o = run_quadrature(c);
    else if (sc == "collapse")
        o = run_collapse(c);
    else if (sc == "flow")
        o = run_flow(c);
    else if (sc == "fixed-point")
        o = run_fixed_point(c);
    else if (sc == "spectrum")
        o = run_spectrum(c);
    else if (sc == "beta")
        o = run_beta(c);
    else if (sc == "exponents")
        o = run_exponents(c);
    else if (sc == "verify")
        o = run_verify(c);
    else
        throw UsageError("unknown subcommand " + sc);
    if (c.quiet && sc != "verify")
        o.lines.clear();
    emit(c, o, out);
    return o.status;
}

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    RunConfig c;
    try {
        c = parse_args(args);
    } catch (const UsageError &e) {
        (e.code == 0 ? out : err) << e.what() << '\n';
        return e.code;
    }
    try {
        return run(c, out);
    } catch (const UsageError &e) {
        err << e.what() << '\n';
        return e.code;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lnrg
