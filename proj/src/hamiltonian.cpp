#include "tdp/hamiltonian.hpp"

#include <cmath>

#include "tdp/errors.hpp"
#include "tdp/specfun.hpp"

namespace tdp {

double potential_V1(const SuperpotentialSet& S, const ErmakovSolution& sol, double x, double t) {
    if (!sol.window().contains(t)) throw RangeError("potential requested outside the Ermakov window");
    const double lam = S.lambda(), sig = sol.sigma(t).sigma, s2 = sig * sig;
    const double y = std::sqrt(lam) * x / sig;
    const auto [w, dw] = S.solution().w_dw(y);
    return (sol.omega2(t) + (lam * lam - 1.0) / (s2 * s2)) * x * x - lam / s2 * (dw - w * w - 2.0 * y * w + 1.0);
}

PotentialField::PotentialField(SuperpotentialSet S, std::shared_ptr<const ErmakovSolution> sol)
    : S_(std::move(S)), sol_(std::move(sol)) {
    if (!sol_) throw DomainError("potential field requires an Ermakov solution");
}

void PotentialField::check_time(double t) const {
    if (!sol_->window().contains(t)) throw RangeError("potential requested outside the Ermakov window");
}

double PotentialField::V1(double x, double t) const { return potential_V1(S_, *sol_, x, t); }

double PotentialField::R1(double z) const {
    if (table_ && table_->contains(z)) return (*table_)(z);
    return S_.R1(z);
}

double PotentialField::V1_from_R1(double x, double t) const {
    check_time(t);
    const double sig = sigma(t);
    return omega2(t) * x * x + S_.R1(x / sig) / (sig * sig);
}

double PotentialField::V2(double x, double t) const {
    check_time(t);
    const double sig = sigma(t);
    return omega2(t) * x * x + S_.R2(x / sig) / (sig * sig);
}

double PotentialField::V_osc(double x, double t) const {
    check_time(t);
    return omega2(t) * x * x;
}

void PotentialField::tabulate(double z_max, double dz) {
    const int intervals = std::max(16, static_cast<int>(std::ceil(2.0 * z_max / dz)));
    const SuperpotentialSet* sp = &S_;
    table_ = std::make_shared<const HermiteTable>(-z_max, z_max, intervals,
                                                  [sp](double z) { return sp->jets(z, 2).R1; });
}

void PotentialField::fill_V1(const Grid& g, double t, std::vector<double>& out) const {
    check_time(t);
    const double sig = sigma(t), om = omega2(t), inv = 1.0 / (sig * sig);
    out.resize(static_cast<size_t>(g.n));
    for (int j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        out[j] = om * x * x + R1(x / sig) * inv;
    }
}

SchrodingerState schrodinger_state(const GridFunction& mode, double Lambda, double t_ref) {
    if (!mode.sol) throw DomainError("mode has no associated Ermakov solution");
    SchrodingerState s;
    s.Lambda = Lambda;
    s.theta = Lambda == 0.0 ? 0.0 : phase_theta(*mode.sol, Lambda, mode.t, t_ref);
    s.psi = mode;
    const cplx ph = std::polar(1.0, s.theta);
    for (auto& v : s.psi.v) v *= ph;
    return s;
}

AnalyticMode oscillator_mode(int n) {
    if (n < 0) throw DomainError("oscillator level must be non-negative");
    const ExactPolynomial H = hermite(n);
    const double norm = 1.0 / std::sqrt(std::ldexp(std::tgamma(n + 1.0), n) * std::sqrt(M_PI));
    AnalyticMode m;
    m.K = [H, norm](double z0, int order) {
        const Taylor z = Taylor::variable(order, z0);
        return norm * H.taylor(z0, order) * exp(-0.5 * z * z);
    };
    m.Lambda = 2.0 * n + 1.0;
    m.label = "oscillator" + std::to_string(n);
    return m;
}

std::complex<double> oscillator_baseline(const ErmakovSolution& sol, int n, double x, double t, double t_ref) {
    const AnalyticMode m = oscillator_mode(n);
    const double z = x / sol.sigma(t).sigma;
    const double theta = phase_theta(sol, m.Lambda, t, t_ref);
    return gauge_factor(sol, x, t) * m.K(z, 0)[0] * std::polar(1.0, theta);
}

GridFunction oscillator_state(std::shared_ptr<const ErmakovSolution> sol, int n, const Grid& grid, double t,
                              double t_ref) {
    GridFunction g{grid, t, sol, std::vector<cplx>(static_cast<size_t>(grid.n))};
    const AnalyticMode m = oscillator_mode(n);
    const double sig = sol->sigma(t).sigma;
    const cplx ph = std::polar(1.0, phase_theta(*sol, m.Lambda, t, t_ref));
    for (int j = 0; j < grid.n; ++j) g.v[j] = gauge_factor(*sol, grid.x(j), t) * m.K(grid.x(j) / sig, 0)[0] * ph;
    return g;
}

std::vector<cplx> apply_I0(const ErmakovSolution& sol, const Grid& grid, double t, const std::vector<cplx>& v) {
    const SigmaPoint sp = sol.sigma(t);
    const double s = sp.sigma, ds = sp.dsigma;
    std::vector<cplx> chirp(v.size()), f(v.size());
    for (int j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        chirp[j] = std::polar(1.0, ds * x * x / (4.0 * s));
        f[j] = v[j] * std::conj(chirp[j]);
    }
    check_resolution(f);
    std::vector<cplx> r = fd_d2(grid, f);
    for (int j = 0; j < grid.n; ++j) {
        const double z = grid.x(j) / s;
        r[j] = (-s * s * r[j] + z * z * f[j]) * chirp[j];
    }
    return r;
}

}  // namespace tdp
