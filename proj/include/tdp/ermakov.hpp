#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace tdp {

// Profiles of the frequency term Omega^2(t).
struct ConstantFrequency {
    double omega2;
};

// 4 Omega^2(t) = omega1 + omega2 tanh(slope t)
struct TanhFrequency {
    double omega1, omega2, slope;
};

// Omega^2 sampled on a uniform grid t_k = t_start + k dt, evaluated through
// a cubic B-spline (built by make_tabulated_frequency).
struct TabulatedFrequency {
    double t_start = 0.0, dt = 0.0;
    std::vector<double> omega2;
    std::shared_ptr<const std::function<double(double)>> spline;
};

TabulatedFrequency make_tabulated_frequency(double t_start, double dt, std::vector<double> omega2);

using FrequencyProfile = std::variant<ConstantFrequency, TanhFrequency, TabulatedFrequency>;

void validate(const FrequencyProfile& p);
double omega2(const FrequencyProfile& p, double t);
// Two-column (t, Omega^2) CSV with uniform spacing, optional header.
TabulatedFrequency load_frequency_csv(const std::string& path);

struct Window {
    double t_min, t_max;
    bool contains(double t) const { return t >= t_min - 1e-12 && t <= t_max + 1e-12; }
};

struct BasisPoint {
    double q1, q2, dq1, dq2;
};

namespace detail {
class BasisImpl;
}

// Two real solutions of q'' + 4 Omega^2 q = 0 with constant Wronskian W0.
class LinearBasis {
public:
    LinearBasis(std::shared_ptr<const detail::BasisImpl> impl, FrequencyProfile profile, double w0, double t0,
                Window window, bool used_fallback);

    BasisPoint at(double t) const;
    double W0() const { return w0_; }
    double t0() const { return t0_; }
    const Window& window() const { return window_; }
    const FrequencyProfile& profile() const { return profile_; }
    double omega2(double t) const { return tdp::omega2(profile_, t); }
    // True when part of the window had to be covered by numerical integration.
    bool used_fallback() const { return used_fallback_; }

private:
    std::shared_ptr<const detail::BasisImpl> impl_;
    FrequencyProfile profile_;
    double w0_, t0_;
    Window window_;
    bool used_fallback_;
};

LinearBasis solve_linear_basis(const FrequencyProfile& profile, double t0, Window window);

struct SigmaPoint {
    double sigma, dsigma;
};

// sigma^2 = a q1^2 + b q1 q2 + c q2^2 with b^2 - 4ac = -16/W0^2.
class ErmakovSolution {
public:
    ErmakovSolution(LinearBasis basis, double a, double b, double c);

    SigmaPoint sigma(double t) const;
    double sigma_ddot(double t) const;
    double omega2(double t) const { return basis_.omega2(t); }
    const LinearBasis& basis() const { return basis_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return c_; }
    const Window& window() const { return basis_.window(); }

private:
    LinearBasis basis_;
    double a_, b_, c_;
};

ErmakovSolution make_ermakov(const LinearBasis& basis, double a, double c, int sign_b);
// Real sigma from the complex pair (q, q*) with equal weights a = c; the
// result coincides with the closed form 2a Re q^2 + 2 sqrt(a^2 + 4/W0^2)|q|^2
// when q = q1 + i q2.
ErmakovSolution make_ermakov_conjugate(const LinearBasis& basis, double a);

// theta(t) = -Lambda int_{t_ref}^{t} dt'/sigma^2 by adaptive quadrature.
double phase_theta(const ErmakovSolution& sol, double lambda_eig, double t, double t_ref);
// Same integral from the arctan closed form, unwrapped across branches.
double phase_theta_closed_form(const ErmakovSolution& sol, double lambda_eig, double t, double t_ref);

// sigma'' + 4 Omega^2 sigma - 4/sigma^3
double ermakov_residual(const ErmakovSolution& sol, double t);

}  // namespace tdp
