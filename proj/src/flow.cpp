#include "lnrg/flow.hpp"

#include "lnrg/error.hpp"
#include "lnrg/saddle.hpp"

#include <algorithm>
#include <cmath>

namespace lnrg
{

double boundary_gamma(std::span<const double> R, double h, double rho_0)
{
    if (R.size() < 5)
        throw DomainError("boundary_gamma needs at least 5 samples");
    if (R[0] == 0.0)
        return 0.0; // unpinned: normalisation does not fix gamma
    const double d0 = (-25 * R[0] + 48 * R[1] - 36 * R[2] + 16 * R[3] - 3 * R[4]) / (12 * h);
    return -(R[0] + rho_0) * d0 / R[0];
}

std::optional<double> saddle_of(const FlowState &s)
{
    for (double v : s.R)
        if (!std::isfinite(v))
            return std::nullopt;
    const auto r = RFunction::sampled(GridFunction(s.grid, s.R), s.rho_0);
    SaddleOptions opt;
    opt.panels = std::min(4096, 4 * (s.grid.n - 1));
    try {
        const auto rep = solve_saddle(r, s.rho_0, {s.grid.lo, s.grid.hi}, opt);
        // rho = 0 is the boundary, not a saddle
        for (double x : rep.rho_c)
            if (x > 0.0)
                return x;
    } catch (const ConvergenceError &) {
    }
    return std::nullopt;
}

FlowState make_flow_state(UniformGrid grid, std::vector<double> R, double rho_0, double tau)
{
    if (static_cast<int>(R.size()) != grid.n)
        throw DomainError("flow state: size mismatch");
    FlowState s;
    s.grid = grid;
    s.R = std::move(R);
    s.tau = tau;
    s.rho_0 = rho_0;
    s.gamma = boundary_gamma(s.R, grid.step(), rho_0);
    s.rho_c = saddle_of(s);
    return s;
}

std::vector<double> flow_rhs_R(const FlowState &state, std::optional<double> gamma_override)
{
    const double h = state.grid.step();
    const double gamma = gamma_override ? *gamma_override : boundary_gamma(state.R, h, state.rho_0);
    const auto dR = derivative4(state.R, h);
    std::vector<double> out(state.R.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double rho = state.grid.at(static_cast<int>(i));
        out[i] = gamma * state.R[i] - (1 + gamma) * rho * dR[i] + (state.R[i] + state.rho_0) * dR[i];
    }
    return out;
}

namespace
{

class BlendedOperator
{
public:
    BlendedOperator(const UniformGrid &g, double rho_0, const FlowOptions &opt) : m_g(g), m_rho0(rho_0), m_opt(opt) {}

    double gamma(const std::vector<double> &R) const { return boundary_gamma(R, m_g.step(), m_rho0); }

    double max_speed(const std::vector<double> &R) const
    {
        const double gm = gamma(R);
        double m = 0.0;
        for (int i = 0; i < m_g.n; ++i)
            m = std::max(m, std::abs((1 + gm) * m_g.at(i) - R[static_cast<std::size_t>(i)] - m_rho0));
        return m;
    }

    void apply(const std::vector<double> &R, std::vector<double> &out) const
    {
        const int n = m_g.n;
        const double h = m_g.step();
        const double gm = gamma(R);
        const auto Dc = derivative4(R, h);
        std::vector<double> w(static_cast<std::size_t>(n), 0.0), nu(static_cast<std::size_t>(n), 0.0);
        for (int i = 1; i + 1 < n; ++i) {
            const double a = R[static_cast<std::size_t>(i - 1)], b = R[static_cast<std::size_t>(i)], c = R[static_cast<std::size_t>(i + 1)];
            const double den = std::abs(a) + 2 * std::abs(b) + std::abs(c);
            nu[static_cast<std::size_t>(i)] = den > 0 ? std::abs(a - 2 * b + c) / den : 0.0;
        }
        nu[0] = nu[1];
        nu[static_cast<std::size_t>(n - 1)] = nu[static_cast<std::size_t>(n - 2)];
        for (int i = 0; i < n; ++i) {
            double s = nu[static_cast<std::size_t>(i)];
            if (i > 0)
                s = std::max(s, nu[static_cast<std::size_t>(i - 1)]);
            if (i + 1 < n)
                s = std::max(s, nu[static_cast<std::size_t>(i + 1)]);
            w[static_cast<std::size_t>(i)] = std::clamp(s / m_opt.sensor_threshold - 1.0, 0.0, 1.0);
        }
        out.assign(static_cast<std::size_t>(n), 0.0);
        double c_last = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double c = (1 + gm) * m_g.at(i) - R[k] - m_rho0;
            double D = Dc[k];
            if (w[k] > 0.0) {
                double up;
                if (c > 0.0)
                    up = (i > 0) ? (R[k] - R[k - 1]) / h : (R[1] - R[0]) / h;
                else
                    up = (i + 1 < n) ? (R[k + 1] - R[k]) / h : (R[k] - R[k - 1]) / h;
                D = (1 - w[k]) * D + w[k] * up;
            }
            out[k] = gm * R[k] - c * D;
            c_last = c;
        }
        out[0] = 0.0; // R(0) is pinned
        if (c_last < 0.0 && n >= 3) // inflow: keep S = R - rho linear at the edge
            out[static_cast<std::size_t>(n - 1)] = 2 * out[static_cast<std::size_t>(n - 2)] - out[static_cast<std::size_t>(n - 3)];
    }

private:
    UniformGrid m_g;
    double m_rho0;
    FlowOptions m_opt;
};

void check_positive(const std::vector<double> &R)
{
    for (double v : R)
        if (!(v > 0.0) || !std::isfinite(v))
            throw FlowError("flow left positivity domain");
}

} // namespace

FlowState evolve(const FlowState &state, double dtau, int steps, const FlowOptions &opt)
{
    if (steps < 0 || !(dtau > 0.0) || !std::isfinite(dtau))
        throw DomainError("evolve: bad step parameters");
    check_positive(state.R);
    const BlendedOperator L(state.grid, state.rho_0, opt);
    const double h = state.grid.step();
    const double pin = state.R[0];
    std::vector<double> R = state.R, k1, k2, k3, k4, tmp(R.size());
    double tau = state.tau;
    for (int step = 0; step < steps; ++step) {
        const double speed = L.max_speed(R);
        const double dt_max = opt.cfl * h / std::max(speed, 1e-300);
        const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(dtau) / dt_max - 1e-12)));
        const double dt = dtau / sub;
        for (int s = 0; s < sub; ++s) {
            L.apply(R, k1);
            for (std::size_t i = 0; i < R.size(); ++i)
                tmp[i] = R[i] + 0.5 * dt * k1[i];
            tmp[0] = pin;
            L.apply(tmp, k2);
            for (std::size_t i = 0; i < R.size(); ++i)
                tmp[i] = R[i] + 0.5 * dt * k2[i];
            tmp[0] = pin;
            L.apply(tmp, k3);
            for (std::size_t i = 0; i < R.size(); ++i)
                tmp[i] = R[i] + dt * k3[i];
            tmp[0] = pin;
            L.apply(tmp, k4);
            for (std::size_t i = 0; i < R.size(); ++i)
                R[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            R[0] = pin;
            check_positive(R);
        }
        tau = state.tau + (step + 1) * dtau;
    }
    return make_flow_state(state.grid, std::move(R), state.rho_0, tau);
}

std::vector<FlowState> evolve_history(const FlowState &state, double dtau, int steps, int record_every, const FlowOptions &opt)
{
    if (record_every < 1)
        throw DomainError("evolve_history: record_every must be positive");
    std::vector<FlowState> hist{state};
    FlowState cur = state;
    int done = 0;
    while (done < steps) {
        const int k = std::min(record_every, steps - done);
        cur = evolve(cur, dtau, k, opt);
        done += k;
        cur.tau = state.tau + done * dtau; // no drift from repeated addition
        hist.push_back(cur);
    }
    return hist;
}

namespace
{

struct VModelForm
{
    double alpha0, alpha_slope; // alpha(gamma) = alpha0 + alpha_slope gamma
    int norm_index;             // coefficient forced to zero
};

VModelForm v_form(const ModelTag &m)
{
    switch (m.kind) {
    case ModelKind::VectorD0: return {1.0, 0.0, 1};
    case ModelKind::VectorQM: return {1.0, -1.0, 1};
    case ModelKind::VectorField: return {1.0, m.dimension / (m.dimension - 2.0), 1};
    case ModelKind::Matrix: return {1.0, 0.0, 1};
    case ModelKind::MatrixQM: return {1.0, -1.0, 2};
    }
    throw DomainError("unknown model");
}

// gamma-independent determinant term as a series in rho
TruncatedSeries determinant_series(const ModelTag &m, const TruncatedSeries &dV)
{
    switch (m.kind) {
    case ModelKind::VectorD0: return 0.5 * series_ln(2.0 * dV);
    case ModelKind::VectorQM: return series_add(0.5 * series_pow(2.0 * dV, 0.5), -0.5);
    case ModelKind::VectorField: return (K_of_d(m.dimension) / m.dimension) * series_pow(2.0 * dV, m.dimension / 2.0);
    case ModelKind::Matrix: return series_ln(dV);
    case ModelKind::MatrixQM: return series_pow(2.0 * dV, 0.5);
    }
    throw DomainError("unknown model");
}

double determinant_value(const ModelTag &m, double dV)
{
    if (!(dV > 0.0))
        throw DomainError("V-form flow needs V' > 0");
    switch (m.kind) {
    case ModelKind::VectorD0: return 0.5 * std::log(2 * dV);
    case ModelKind::VectorQM: return 0.5 * (std::sqrt(2 * dV) - 1.0);
    case ModelKind::VectorField: return K_of_d(m.dimension) / m.dimension * std::pow(2 * dV, m.dimension / 2.0);
    case ModelKind::Matrix: return std::log(dV);
    case ModelKind::MatrixQM: return std::sqrt(2 * dV);
    }
    throw DomainError("unknown model");
}

TruncatedSeries v_variation(const Potential &p, double rho_0, int K, double gamma, const TruncatedSeries &D)
{
    const auto f = v_form(p.model());
    const auto Vs = p.taylor(0.0, K + 1);
    const auto dV = Vs.derivative();
    const auto V = Vs.truncated(K);
    const auto x = TruncatedSeries::variable(K);
    return (f.alpha0 + f.alpha_slope * gamma) * V - (1 + gamma) * (x * dV) + D + rho_0 * dV;
}

} // namespace

VFlowSeries flow_rhs_V_series(const Potential &p, double rho_0, int order)
{
    const auto f = v_form(p.model());
    const int K = std::max(order, f.norm_index);
    const auto dV = p.taylor(0.0, K + 1).derivative();
    if (!(dV[0] > 0.0))
        throw DomainError("V-form flow needs V'(0) > 0");
    const auto D = determinant_series(p.model(), dV);
    // the variation is affine in gamma
    const auto v0 = v_variation(p, rho_0, K, 0.0, D);
    const auto v1 = v_variation(p, rho_0, K, 1.0, D);
    const double slope = v1[f.norm_index] - v0[f.norm_index];
    if (slope == 0.0)
        throw DomainError("normalisation does not fix gamma for this potential");
    VFlowSeries out;
    out.gamma = -v0[f.norm_index] / slope;
    out.dV = v_variation(p, rho_0, K, out.gamma, D).truncated(order);
    return out;
}

std::vector<double> flow_rhs_V_with_gamma(const Potential &p, std::span<const double> rho, double rho_0, double gamma)
{
    const auto f = v_form(p.model());
    std::vector<double> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double x = rho[i];
        const double dV = p.first(x);
        out[i] = (f.alpha0 + f.alpha_slope * gamma) * p.value(x) - (1 + gamma) * x * dV + determinant_value(p.model(), dV) + rho_0 * dV;
    }
    return out;
}

VFlowGrid flow_rhs_V(const Potential &p, std::span<const double> rho, double rho_0)
{
    VFlowGrid g;
    g.gamma = flow_rhs_V_series(p, rho_0, 3).gamma;
    g.values = flow_rhs_V_with_gamma(p, rho, rho_0, g.gamma);
    return g;
}

double vr_form_mismatch(const Potential &p, const UniformGrid &grid, double rho_0)
{
    const auto x = grid.points();
    const auto vg = flow_rhs_V(p, x, rho_0);
    const auto dVdot = derivative4(vg.values, grid.step());
    std::vector<double> R(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        R[i] = r_from_potential(p, x[i]);
    auto state = make_flow_state(grid, R, rho_0);
    std::optional<double> gamma;
    if (p.model().kind == ModelKind::MatrixQM)
        gamma = vg.gamma;
    const auto rhs = flow_rhs_R(state, gamma);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(r_jacobian(p.model(), p.first(x[i])) * dVdot[i] - rhs[i]));
    return worst;
}

SaddleTrack track_saddle(const std::vector<FlowState> &history)
{
    SaddleTrack t;
    for (const auto &s : history) {
        SaddleTrackRow row;
        row.tau = s.tau;
        row.gamma = s.gamma;
        row.rho_c = saddle_of(s);
        if (!row.rho_c)
            t.any_missing = true;
        t.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
        const auto &a = t.rows[i];
        const auto &b = t.rows[i + 1];
        if (!a.rho_c || !b.rho_c || b.tau == a.tau)
            continue;
        DriftRow d;
        d.tau_mid = 0.5 * (a.tau + b.tau);
        d.dln_rho_dtau = (std::log(*b.rho_c) - std::log(*a.rho_c)) / (b.tau - a.tau);
        d.gamma_mean = 0.5 * (a.gamma + b.gamma);
        d.residual = std::abs(d.dln_rho_dtau - d.gamma_mean);
        t.max_drift_residual = std::max(t.max_drift_residual, d.residual);
        t.drift.push_back(d);
    }
    return t;
}

namespace
{

double linear_gamma(const std::vector<double> &V, double h)
{
    const double d1 = (-25 * V[0] + 48 * V[1] - 36 * V[2] + 16 * V[3] - 3 * V[4]) / (12 * h);
    const double d2 = (45 * V[0] - 154 * V[1] + 214 * V[2] - 156 * V[3] + 61 * V[4] - 10 * V[5]) / (12 * h * h);
    return d2 / d1;
}

void linear_rhs(const UniformGrid &g, const std::vector<double> &V, std::vector<double> &out)
{
    const double h = g.step();
    const double gm = linear_gamma(V, h);
    const auto dV = derivative4(V, h);
    out.resize(V.size());
    for (int i = 0; i < g.n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = V[k] + (1 - (1 + gm) * g.at(i)) * dV[k] - 0.5;
    }
}

} // namespace

std::vector<double> linear_flow_rhs(const LinearFlowState &s)
{
    if (s.grid.n < 6)
        throw DomainError("linear flow needs at least 6 samples");
    std::vector<double> out;
    linear_rhs(s.grid, s.V, out);
    return out;
}

LinearFlowState evolve_linear_potential(const LinearFlowState &s, double dtau, int steps)
{
    if (s.grid.n < 6)
        throw DomainError("linear flow needs at least 6 samples");
    const double h = s.grid.step();
    std::vector<double> V = s.V, k1, k2, k3, k4, tmp(V.size());
    for (int step = 0; step < steps; ++step) {
        const double gm = linear_gamma(V, h);
        double speed = 0.0;
        for (int i = 0; i < s.grid.n; ++i)
            speed = std::max(speed, std::abs(1 - (1 + gm) * s.grid.at(i)));
        const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(dtau) * speed / (0.5 * h) - 1e-12)));
        const double dt = dtau / sub;
        for (int j = 0; j < sub; ++j) {
            linear_rhs(s.grid, V, k1);
            for (std::size_t i = 0; i < V.size(); ++i)
                tmp[i] = V[i] + 0.5 * dt * k1[i];
            linear_rhs(s.grid, tmp, k2);
            for (std::size_t i = 0; i < V.size(); ++i)
                tmp[i] = V[i] + 0.5 * dt * k2[i];
            linear_rhs(s.grid, tmp, k3);
            for (std::size_t i = 0; i < V.size(); ++i)
                tmp[i] = V[i] + dt * k3[i];
            linear_rhs(s.grid, tmp, k4);
            for (std::size_t i = 0; i < V.size(); ++i)
                V[i] += dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
    }
    return {s.grid, std::move(V), s.tau + steps * dtau};
}

double growth_exponent(const std::vector<double> &tau, const std::vector<double> &norm)
{
    if (tau.size() != norm.size() || tau.size() < 2)
        throw DomainError("growth_exponent: need matching series of length >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (!(norm[i] > 0.0))
            throw DomainError("growth_exponent: norms must be positive");
        const double y = std::log(norm[i]);
        sx += tau[i];
        sy += y;
        sxx += tau[i] * tau[i];
        sxy += tau[i] * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace lnrg
