#include "tdp/tdse.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "tdp/errors.hpp"

namespace tdp {

namespace {

double edge_amplitude(const std::vector<cplx>& v, int width = 8) {
    double m = 0.0;
    const int n = static_cast<int>(v.size());
    for (int j = 0; j < std::min(width, n); ++j) m = std::max({m, std::abs(v[j]), std::abs(v[n - 1 - j])});
    return m;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

// In-place LU solve of a pentadiagonal system, bands b[k][j] = A(j, j+k-2).
// The diagonal is overwritten with reciprocal pivots.
void solve_penta(std::array<std::vector<cplx>, 5>& b, std::vector<cplx>& rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int j = 0; j < n - 1; ++j) {
        const cplx inv = 1.0 / b[2][j];
        b[2][j] = inv;
        for (int r = 1; r <= 2 && j + r < n; ++r) {
            const cplx m = b[2 - r][j + r] * inv;
            for (int c = 1; c <= 2 && j + c < n; ++c) b[2 + c - r][j + r] -= m * b[2 + c][j];
            rhs[j + r] -= m * rhs[j];
        }
    }
    b[2][n - 1] = 1.0 / b[2][n - 1];
    for (int j = n - 1; j >= 0; --j) {
        cplx acc = rhs[j];
        for (int c = 1; c <= 2 && j + c < n; ++c) acc -= b[2 + c][j] * rhs[j + c];
        rhs[j] = acc * b[2][j];
    }
}

}  // namespace

GridFunction propagate(const GridFunction& psi0, const PotentialField& V, double t1, const PropagatorConfig& cfg,
                       const std::function<void(const GridFunction&)>& on_step, int every,
                       PropagationStats* stats) {
    const Grid& g = psi0.grid;
    const double t0 = psi0.t;
    const auto& win = V.ermakov()->window();
    if (!win.contains(t0) || !win.contains(t1)) throw RangeError("propagation interval outside the Ermakov window");
    double sig_min = V.sigma(t0);
    for (int k = 1; k <= 256; ++k) sig_min = std::min(sig_min, V.sigma(t0 + (t1 - t0) * k / 256.0));
    const double z_max = 1.01 * std::max(std::abs(g.x_min), std::abs(g.x_max())) / sig_min;
    std::shared_ptr<const PotentialField> field;
    if (V.covers(z_max)) {
        field = std::shared_ptr<const PotentialField>(&V, [](const PotentialField*) {});
    } else {
        auto local = std::make_shared<PotentialField>(V);
        local->tabulate(z_max);
        field = local;
    }
    GridPotential gp{[field, g](double t, std::vector<double>& out) { field->fill_V1(g, t, out); }, win};
    return propagate(psi0, gp, t1, cfg, on_step, every, stats);
}

GridPotential oscillator_potential(std::shared_ptr<const ErmakovSolution> sol, const Grid& g) {
    const Window w = sol->window();
    return {[sol, g](double t, std::vector<double>& out) {
                const double om = sol->omega2(t);
                out.resize(static_cast<size_t>(g.n));
                for (int j = 0; j < g.n; ++j) out[j] = om * g.x(j) * g.x(j);
            },
            w};
}

GridFunction propagate(const GridFunction& psi0, const GridPotential& V, double t1, const PropagatorConfig& cfg,
                       const std::function<void(const GridFunction&)>& on_step, int every,
                       PropagationStats* stats) {
    const Grid& g = psi0.grid;
    const int n = g.n;
    if (n < 16) throw DomainError("propagation grid needs at least 16 points");
    if (!(cfg.dt > 0.0)) throw DomainError("time step must be positive");
    const double t0 = psi0.t;
    if (!V.window.contains(t0) || !V.window.contains(t1))
        throw RangeError("propagation interval outside the Ermakov window");

    const double peak0 = max_abs(psi0.v);
    if (!(peak0 > 0.0)) throw DomainError("initial state vanishes");
    if (edge_amplitude(psi0.v) > cfg.initial_edge_tol * peak0)
        throw WindowError("initial state is not negligible at the grid edges");

    std::vector<double> pot;
    double vmax = 0.0;
    for (int k = 0; k <= 64; ++k) {
        V.fill(t0 + (t1 - t0) * k / 64.0, pot);
        for (double p : pot) vmax = std::max(vmax, std::abs(p));
    }
    const double span = t1 - t0;
    double dt = std::min(cfg.dt, cfg.max_phase_per_step / std::max(vmax, 1e-300));
    const int steps = span == 0.0 ? 0 : static_cast<int>(std::ceil(std::abs(span) / dt));
    dt = steps ? span / steps : 0.0;

    GridFunction psi = psi0;
    const double norm0 = psi0.norm();
    double drift = 0.0;

    // Fourth-order Laplacian (-1, 16, -30, 16, -1) / 12h^2 with zero exterior
    // values; H is real symmetric, so the Crank-Nicolson map is unitary.
    const double c0 = 30.0 / (12.0 * g.h * g.h), c1 = -16.0 / (12.0 * g.h * g.h), c2 = 1.0 / (12.0 * g.h * g.h);
    const cplx it(0.0, dt / 2.0);
    std::array<std::vector<cplx>, 5> band;
    for (auto& b : band) b.resize(static_cast<size_t>(n));
    std::vector<cplx> rhs(static_cast<size_t>(n));
    const double offd[5] = {c2, c1, 0.0, c1, c2};

    for (int s = 0; s < steps; ++s) {
        const double tm = t0 + (s + 0.5) * dt;
        V.fill(tm, pot);
        for (int j = 0; j < n; ++j) {
            cplx hv = (c0 + pot[j]) * psi.v[j];
            if (j >= 1) hv += c1 * psi.v[j - 1];
            if (j >= 2) hv += c2 * psi.v[j - 2];
            if (j + 1 < n) hv += c1 * psi.v[j + 1];
            if (j + 2 < n) hv += c2 * psi.v[j + 2];
            rhs[j] = psi.v[j] - it * hv;
            for (int k = 0; k < 5; ++k) band[k][j] = it * offd[k];
            band[2][j] = 1.0 + it * (c0 + pot[j]);
        }
        solve_penta(band, rhs);
        psi.v.swap(rhs);
        psi.t = (s + 1 == steps) ? t1 : t0 + (s + 1) * dt;

        if ((s + 1) % 100 == 0 || s + 1 == steps) {
            const double pk = max_abs(psi.v);
            if (edge_amplitude(psi.v) > cfg.edge_tol * pk)
                throw WindowError("wave packet reached the grid edge at t = " + std::to_string(psi.t));
            drift = std::max(drift, std::abs(psi.norm() - norm0) / norm0);
        }
        if (on_step && every > 0 && (s + 1) % every == 0 && s + 1 != steps) on_step(psi);
    }
    psi.t = t1;
    if (on_step) on_step(psi);
    if (stats) *stats = PropagationStats{steps, dt, vmax, drift};
    return psi;
}

double fidelity(const GridFunction& a, const GridFunction& b) {
    if (a.grid.n != b.grid.n) throw DomainError("fidelity of functions on different grids");
    return std::abs(inner(a, b)) / (a.norm() * b.norm());
}

double invariant_expectation(const GridFunction& psi, const SuperpotentialSet& S) {
    const GridFunction Ipsi = apply_I1(S, psi);
    return std::real(inner(psi, Ipsi)) / std::pow(psi.norm(), 2);
}

double invariant_drift(const std::vector<GridFunction>& trajectory, const SuperpotentialSet& S) {
    if (trajectory.empty()) return 0.0;
    const double e0 = invariant_expectation(trajectory.front(), S);
    const double scale = std::abs(e0) < 1e-8 ? 1.0 : std::abs(e0);
    double d = 0.0;
    for (const auto& p : trajectory) d = std::max(d, std::abs(invariant_expectation(p, S) - e0) / scale);
    return d;
}

}  // namespace tdp
