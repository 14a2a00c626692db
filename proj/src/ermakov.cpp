#include "tdp/ermakov.hpp"

#include <algorithm>
#include <array>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tdp/errors.hpp"
#include "tdp/specfun.hpp"

namespace tdp {

namespace {

struct OmegaVisitor {
    double t;
    double operator()(const ConstantFrequency& c) const { return c.omega2; }
    double operator()(const TanhFrequency& p) const { return 0.25 * (p.omega1 + p.omega2 * std::tanh(p.slope * t)); }
    double operator()(const TabulatedFrequency& p) const {
        if (p.spline) return (*p.spline)(t);
        return (*make_tabulated_frequency(p.t_start, p.dt, p.omega2).spline)(t);
    }
};

}  // namespace

TabulatedFrequency make_tabulated_frequency(double t_start, double dt, std::vector<double> omega2) {
    TabulatedFrequency tab{t_start, dt, std::move(omega2), nullptr};
    if (tab.omega2.size() < 4 || !(dt > 0.0)) return tab;
    auto sp = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
        tab.omega2.begin(), tab.omega2.end(), t_start, dt);
    tab.spline = std::make_shared<const std::function<double(double)>>([sp](double t) { return (*sp)(t); });
    return tab;
}

void validate(const FrequencyProfile& p) {
    if (auto c = std::get_if<ConstantFrequency>(&p)) {
        if (!(c->omega2 > 0.0)) throw DomainError("constant frequency: Omega^2 must be positive");
    } else if (auto t = std::get_if<TanhFrequency>(&p)) {
        if (!(t->omega1 > t->omega2 && t->omega2 > 0.0))
            throw DomainError("tanh frequency: requires Omega1 > Omega2 > 0");
        if (t->slope == 0.0) throw DomainError("tanh frequency: slope must be nonzero");
    } else {
        const auto& tab = std::get<TabulatedFrequency>(p);
        if (tab.omega2.size() < 4) throw DomainError("tabulated frequency: need at least 4 samples");
        if (!(tab.dt > 0.0)) throw DomainError("tabulated frequency: spacing must be positive");
        for (double v : tab.omega2)
            if (!(v > 0.0)) throw DomainError("tabulated frequency: non-positive Omega^2 sample");
    }
}

double omega2(const FrequencyProfile& p, double t) { return std::visit(OmegaVisitor{t}, p); }

TabulatedFrequency load_frequency_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open frequency table " + path);
    std::vector<double> ts, vs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        double t, v;
        if (!(is >> t >> v)) {
            if (ts.empty()) continue;  // header
            throw DomainError("malformed row in " + path + ": " + line);
        }
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() < 4) throw DomainError("frequency table " + path + " has fewer than 4 rows");
    const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    for (size_t k = 1; k < ts.size(); ++k)
        if (std::abs(ts[k] - ts[k - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw DomainError("frequency table " + path + " is not uniformly spaced");
    TabulatedFrequency tab = make_tabulated_frequency(ts.front(), dt, vs);
    validate(FrequencyProfile{tab});
    return tab;
}

namespace detail {

class BasisImpl {
public:
    virtual ~BasisImpl() = default;
    virtual BasisPoint at(double t) const = 0;
};

}  // namespace detail

namespace {

using detail::BasisImpl;
using State = std::array<double, 4>;  // q1, dq1, q2, dq2

class ConstantBasis : public BasisImpl {
public:
    ConstantBasis(double omega, double t0) : w_(omega), t0_(t0) {}
    BasisPoint at(double t) const override {
        const double c = std::cos(w_ * (t - t0_)), s = std::sin(w_ * (t - t0_));
        return {c, s, -w_ * s, w_ * c};
    }

private:
    double w_, t0_;
};

// Quintic Hermite interpolation of (q, q', q'') on uniform nodes.
class DenseBasis : public BasisImpl {
public:
    DenseBasis(double t_start, double h, std::vector<State> nodes, std::vector<double> om2)
        : t_start_(t_start), h_(h), nodes_(std::move(nodes)), om2_(std::move(om2)) {}

    BasisPoint at(double t) const override {
        const auto n = static_cast<long>(nodes_.size());
        const double u = (t - t_start_) / h_;
        long k = std::clamp(static_cast<long>(std::floor(u)), 0L, n - 2);
        const double s = u - k;
        const State& a = nodes_[k];
        const State& b = nodes_[k + 1];
        const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
        const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5, H1 = s - 6 * s3 + 8 * s4 - 3 * s5,
                     H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5), H3 = 10 * s3 - 15 * s4 + 6 * s5,
                     H4 = -4 * s3 + 7 * s4 - 3 * s5, H5 = 0.5 * (s3 - 2 * s4 + s5);
        const double D0 = -30 * s2 + 60 * s3 - 30 * s4, D1 = 1 - 18 * s2 + 32 * s3 - 15 * s4,
                     D2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4), D3 = -D0,
                     D4 = -12 * s2 + 28 * s3 - 15 * s4, D5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
        const double h = h_, h2 = h * h;
        auto interp = [&](int i) {
            const double fa = a[i], da = a[i + 1], ga = -4.0 * om2_[k] * fa;
            const double fb = b[i], db = b[i + 1], gb = -4.0 * om2_[k + 1] * fb;
            const double f = H0 * fa + h * H1 * da + h2 * H2 * ga + H3 * fb + h * H4 * db + h2 * H5 * gb;
            const double d = (D0 * fa + h * D1 * da + h2 * D2 * ga + D3 * fb + h * D4 * db + h2 * D5 * gb) / h;
            return std::pair{f, d};
        };
        auto [q1, dq1] = interp(0);
        auto [q2, dq2] = interp(2);
        return {q1, q2, dq1, dq2};
    }

private:
    double t_start_, h_;
    std::vector<State> nodes_;
    std::vector<double> om2_;
};

using OmegaFn = std::function<double(double)>;

// Integrates from t_from (state x0) to t_to, returning states on a uniform
// grid of spacing |h| starting at t_from.
std::vector<State> integrate_nodes(const OmegaFn& om2, double t_from, double t_to, State x0, double h) {
    namespace ode = boost::numeric::odeint;
    const double dir = t_to >= t_from ? 1.0 : -1.0;
    const auto steps = static_cast<long>(std::ceil(std::abs(t_to - t_from) / h - 1e-9));
    std::vector<double> taus(static_cast<size_t>(steps) + 1);
    for (long k = 0; k <= steps; ++k) taus[k] = k * h;
    auto rhs = [&](const State& x, State& dx, double tau) {
        const double w = 4.0 * om2(t_from + dir * tau);
        dx[0] = dir * x[1];
        dx[1] = -dir * w * x[0];
        dx[2] = dir * x[3];
        dx[3] = -dir * w * x[2];
    };
    std::vector<State> out;
    out.reserve(taus.size());
    auto stepper = ode::make_controlled(1e-14, 1e-13, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_times(stepper, rhs, x0, taus.begin(), taus.end(), h / 8,
                         [&](const State& x, double) { out.push_back(x); });
    return out;
}

double max_frequency(const FrequencyProfile& p) {
    if (auto c = std::get_if<ConstantFrequency>(&p)) return std::sqrt(c->omega2);
    if (auto t = std::get_if<TanhFrequency>(&p)) return 0.5 * std::sqrt(t->omega1 + std::abs(t->omega2));
    const auto& tab = std::get<TabulatedFrequency>(p);
    return std::sqrt(*std::max_element(tab.omega2.begin(), tab.omega2.end()));
}

// Node spacing giving at least 2000 nodes per period of q.
double node_spacing(const FrequencyProfile& p) {
    const double period = std::numbers::pi / max_frequency(p);
    return period / 2000.0;
}

// Dense basis on [w.t_min, w.t_max] from initial data at t_start.
std::shared_ptr<DenseBasis> dense_from(const OmegaFn& om2, double h, Window w, double t_start, State x0) {
    std::vector<State> back, fwd;
    if (w.t_min < t_start) back = integrate_nodes(om2, t_start, w.t_min, x0, h);
    fwd = integrate_nodes(om2, t_start, std::max(w.t_max, t_start + h), x0, h);
    std::vector<State> nodes;
    double first = t_start;
    if (!back.empty()) {
        nodes.assign(back.rbegin(), back.rend() - 1);
        first = t_start - static_cast<double>(back.size() - 1) * h;
    }
    nodes.insert(nodes.end(), fwd.begin(), fwd.end());
    std::vector<double> om(nodes.size());
    for (size_t k = 0; k < nodes.size(); ++k) om[k] = om2(first + static_cast<double>(k) * h);
    return std::make_shared<DenseBasis>(first, h, std::move(nodes), std::move(om));
}

// log(1 - tanh u), log(1 + tanh u) without cancellation.
double log1m_tanh(double u) {
    return u > 0 ? std::log(2.0) - 2 * u - std::log1p(std::exp(-2 * u)) : std::log(2.0) - std::log1p(std::exp(2 * u));
}
double log1p_tanh(double u) { return log1m_tanh(-u); }

class TanhBasis : public BasisImpl {
public:
    static constexpr double kSeriesLimit = 0.95;

    TanhBasis(const TanhFrequency& p, Window w) : p_(p) {
        const double k = p.slope;
        mu_ = std::sqrt(0.5 * (p.omega1 + std::sqrt(p.omega1 * p.omega1 - p.omega2 * p.omega2))) / std::abs(k);
        rp_ = mu_ + p.omega2 / (2 * k * k * mu_);
        rm_ = mu_ - p.omega2 / (2 * k * k * mu_);
        // x(t) = 1/(1 + e^{2kt}) crosses the series limit at t_s
        t_switch_ = std::log(1.0 / kSeriesLimit - 1.0) / (2 * k);
        const bool low_side = k > 0;  // x > limit for t < t_s when k > 0
        const bool needs = low_side ? w.t_min < t_switch_ : w.t_max > t_switch_;
        if (needs) {
            const BasisPoint s = closed(t_switch_);
            Window fw = low_side ? Window{w.t_min, t_switch_} : Window{t_switch_, w.t_max};
            OmegaFn om = [p](double t) { return omega2(FrequencyProfile{p}, t); };
            fallback_ = dense_from(om, node_spacing(FrequencyProfile{p}), fw, t_switch_, {s.q1, s.dq1, s.q2, s.dq2});
            low_side_ = low_side;
        }
    }

    bool uses_fallback() const { return fallback_ != nullptr; }

    BasisPoint at(double t) const override {
        if (fallback_ && (low_side_ ? t < t_switch_ : t > t_switch_)) return fallback_->at(t);
        return closed(t);
    }

    // q = (1-T)^{-i r+/2} (1+T)^{-i r-/2} 2F1(-i mu, 1 - i mu; 1 - i r+; (1-T)/2)
    BasisPoint closed(double t) const {
        const double k = p_.slope, u = k * t;
        const double T = std::tanh(u);
        const double x = 1.0 / (1.0 + std::exp(2 * u));
        const cplx I(0, 1);
        const cplx a = -I * mu_, b = 1.0 - I * mu_, c = 1.0 - I * rp_;
        const cplx pre = std::exp(-I * (0.5 * rp_) * log1m_tanh(u) - I * (0.5 * rm_) * log1p_tanh(u));
        const cplx F = hyp2f1(a, b, c, x);
        const cplx dF = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x);
        const cplx dpre = pre * (I * (0.5 * k)) * (rp_ * (1 + T) - rm_ * (1 - T));
        const cplx q = pre * F;
        const cplx dq = dpre * F + pre * dF * (-0.5 * k * (1 - T * T));
        return {q.real(), q.imag(), dq.real(), dq.imag()};
    }

private:
    TanhFrequency p_;
    double mu_, rp_, rm_, t_switch_;
    bool low_side_ = true;
    std::shared_ptr<DenseBasis> fallback_;
};

}  // namespace

LinearBasis::LinearBasis(std::shared_ptr<const detail::BasisImpl> impl, FrequencyProfile profile, double w0,
                         double t0, Window window, bool used_fallback)
    : impl_(std::move(impl)), profile_(std::move(profile)), w0_(w0), t0_(t0), window_(window),
      used_fallback_(used_fallback) {}

BasisPoint LinearBasis::at(double t) const {
    if (!window_.contains(t)) throw RangeError("time " + std::to_string(t) + " outside the working window");
    return impl_->at(t);
}

LinearBasis solve_linear_basis(const FrequencyProfile& profile, double t0, Window window) {
    validate(profile);
    if (!(window.t_max > window.t_min) || !std::isfinite(window.t_min) || !std::isfinite(window.t_max))
        throw DomainError("working window must be a finite, non-empty interval");
    if (auto c = std::get_if<ConstantFrequency>(&profile)) {
        const double w = 2.0 * std::sqrt(c->omega2);
        return LinearBasis(std::make_shared<ConstantBasis>(w, t0), profile, w, t0, window, false);
    }
    if (auto p = std::get_if<TanhFrequency>(&profile)) {
        auto impl = std::make_shared<TanhBasis>(*p, window);
        const BasisPoint b = impl->at(t0);
        const double w0 = b.q1 * b.dq2 - b.dq1 * b.q2;
        return LinearBasis(impl, profile, w0, t0, window, impl->uses_fallback());
    }
    const auto& tab = std::get<TabulatedFrequency>(profile);
    const double t_end = tab.t_start + tab.dt * static_cast<double>(tab.omega2.size() - 1);
    if (window.t_min < tab.t_start - 1e-12 || window.t_max > t_end + 1e-12 || !window.contains(t0))
        throw RangeError("working window exceeds the tabulated frequency range");
    const TabulatedFrequency spl =
        tab.spline ? tab : make_tabulated_frequency(tab.t_start, tab.dt, tab.omega2);
    OmegaFn om = *spl.spline;
    for (double t = window.t_min; t <= window.t_max; t += tab.dt / 4)
        if (!(om(t) > 0.0)) throw DomainError("tabulated frequency: interpolated Omega^2 not positive");
    const double w = 2.0 * std::sqrt(om(t0));
    auto dense = dense_from(om, node_spacing(profile), window, t0, {1.0, 0.0, 0.0, w});
    return LinearBasis(dense, FrequencyProfile{spl}, w, t0, window, true);
}

ErmakovSolution::ErmakovSolution(LinearBasis basis, double a, double b, double c)
    : basis_(std::move(basis)), a_(a), b_(b), c_(c) {
    if (!(a > 0.0 && c > 0.0)) throw ConstraintError("Ermakov coefficients a and c must be positive");
    const double w0 = basis_.W0();
    const double disc = b * b - 4 * a * c + 16.0 / (w0 * w0);
    if (std::abs(disc) > 1e-10 * (std::abs(4 * a * c) + 1.0))
        throw ConstraintError("Ermakov coefficients violate b^2 - 4ac = -16/W0^2");
}

SigmaPoint ErmakovSolution::sigma(double t) const {
    const BasisPoint p = basis_.at(t);
    const double S = a_ * p.q1 * p.q1 + b_ * p.q1 * p.q2 + c_ * p.q2 * p.q2;
    const double dS = 2 * a_ * p.q1 * p.dq1 + b_ * (p.dq1 * p.q2 + p.q1 * p.dq2) + 2 * c_ * p.q2 * p.dq2;
    const double s = std::sqrt(S);
    return {s, dS / (2 * s)};
}

double ErmakovSolution::sigma_ddot(double t) const {
    const BasisPoint p = basis_.at(t);
    const double S = a_ * p.q1 * p.q1 + b_ * p.q1 * p.q2 + c_ * p.q2 * p.q2;
    const double dS = 2 * a_ * p.q1 * p.dq1 + b_ * (p.dq1 * p.q2 + p.q1 * p.dq2) + 2 * c_ * p.q2 * p.dq2;
    const double ddS =
        2 * (a_ * p.dq1 * p.dq1 + b_ * p.dq1 * p.dq2 + c_ * p.dq2 * p.dq2) - 8 * basis_.omega2(t) * S;
    const double s = std::sqrt(S);
    return ddS / (2 * s) - dS * dS / (4 * s * s * s);
}

ErmakovSolution make_ermakov(const LinearBasis& basis, double a, double c, int sign_b) {
    if (!(a > 0.0 && c > 0.0)) throw ConstraintError("Ermakov coefficients a and c must be positive");
    const double w0 = basis.W0();
    const double rad = 4 * a * c - 16.0 / (w0 * w0);
    if (rad < -1e-14 * 4 * a * c)
        throw ConstraintError("Ermakov coefficients require a c >= 4/W0^2 (got a c = " + std::to_string(a * c) +
                              ", 4/W0^2 = " + std::to_string(4.0 / (w0 * w0)) + ")");
    const double b = (sign_b >= 0 ? 1.0 : -1.0) * std::sqrt(std::max(rad, 0.0));
    return ErmakovSolution(basis, a, b, c);
}

ErmakovSolution make_ermakov_conjugate(const LinearBasis& basis, double a) {
    const double w0 = basis.W0();
    const double bc = 2.0 * std::sqrt(a * a + 1.0 / (w0 * w0));
    if (!(bc - 2 * a > 0.0)) throw ConstraintError("conjugate Ermakov combination is not positive");
    return ErmakovSolution(basis, bc + 2 * a, 0.0, bc - 2 * a);
}

double phase_theta(const ErmakovSolution& sol, double lambda_eig, double t, double t_ref) {
    if (lambda_eig == 0.0 || t == t_ref) return 0.0;
    auto f = [&](double s) {
        const double sg = sol.sigma(s).sigma;
        return 1.0 / (sg * sg);
    };
    // split long intervals so each panel covers a few oscillations at most
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(t - t_ref) / 0.5)));
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double lo = t_ref + (t - t_ref) * k / panels, hi = t_ref + (t - t_ref) * (k + 1) / panels;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-15);
    }
    return -lambda_eig * total;
}

double phase_theta_closed_form(const ErmakovSolution& sol, double lambda_eig, double t, double t_ref) {
    const double w0 = sol.basis().W0();
    auto angle = [&](double s) {
        const BasisPoint p = sol.basis().at(s);
        return std::atan2(0.5 * w0 * (sol.c() * p.q2 + 0.5 * sol.b() * p.q1), p.q1);
    };
    // d(angle)/dt = 2/sigma^2; unwrap along small steps
    const double dir = t >= t_ref ? 1.0 : -1.0;
    double s = t_ref, prev = angle(t_ref), acc = 0.0;
    while (dir * (t - s) > 0) {
        const double sg = sol.sigma(s).sigma;
        const double step = std::min(0.25 * sg * sg, std::abs(t - s));
        s += dir * step;
        const double cur = angle(s);
        acc += std::remainder(cur - prev, 2 * std::numbers::pi);
        prev = cur;
    }
    return -lambda_eig * 0.5 * acc;
}

double ermakov_residual(const ErmakovSolution& sol, double t) {
    const SigmaPoint s = sol.sigma(t);
    return sol.sigma_ddot(t) + 4 * sol.omega2(t) * s.sigma - 4.0 / (s.sigma * s.sigma * s.sigma);
}

}  // namespace tdp
