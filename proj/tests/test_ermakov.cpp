#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "tdp/ermakov.hpp"
#include "tdp/errors.hpp"

using namespace tdp;
using std::numbers::pi;

namespace {

LinearBasis unit_basis(double t_min = 0.0, double t_max = 10.0) {
    return solve_linear_basis(ConstantFrequency{1.0}, 0.0, {t_min, t_max});
}

// classical RK4 for q'' = -4 Omega^2 q, returns (q, q') at t1
std::array<double, 2> rk4(const FrequencyProfile& p, double t0, double t1, double q, double dq, int steps) {
    const double h = (t1 - t0) / steps;
    auto f = [&](double t, double a, double b) { return std::array<double, 2>{b, -4.0 * omega2(p, t) * a}; };
    double t = t0;
    for (int k = 0; k < steps; ++k) {
        auto k1 = f(t, q, dq);
        auto k2 = f(t + h / 2, q + h / 2 * k1[0], dq + h / 2 * k1[1]);
        auto k3 = f(t + h / 2, q + h / 2 * k2[0], dq + h / 2 * k2[1]);
        auto k4 = f(t + h, q + h * k3[0], dq + h * k3[1]);
        q += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        dq += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        t += h;
    }
    return {q, dq};
}

// direct 2F1 power series in long double
std::complex<long double> series_2f1(std::complex<long double> a, std::complex<long double> b,
                                     std::complex<long double> c, long double x) {
    std::complex<long double> term = 1, sum = 1;
    for (int n = 0; n < 5000; ++n) {
        term *= (a + (long double)n) * (b + (long double)n) / ((c + (long double)n) * (long double)(n + 1)) * x;
        sum += term;
        if (std::abs(term) < 1e-22L) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("constant frequency basis") {
    const LinearBasis b = unit_basis();
    CHECK(b.W0() == 2.0);
    for (double t : {0.0, 0.3, 2.0, 7.7}) {
        const BasisPoint p = b.at(t);
        CHECK(p.q1 == doctest::Approx(std::cos(2 * t)).epsilon(1e-15));
        CHECK(p.q2 == doctest::Approx(std::sin(2 * t)).epsilon(1e-15));
    }
    double drift = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const BasisPoint p = b.at(0.01 * k);
        drift = std::max(drift, std::abs(p.q1 * p.dq2 - p.dq1 * p.q2 - 2.0));
    }
    CHECK(drift < 1e-12);
    CHECK_THROWS_AS(b.at(10.5), RangeError);
    CHECK_THROWS_AS(solve_linear_basis(ConstantFrequency{-1.0}, 0.0, {0, 1}), DomainError);
}

TEST_CASE("ermakov combinations on the unit oscillator") {
    const LinearBasis b = unit_basis();
    const ErmakovSolution one = make_ermakov(b, 1.0, 1.0, +1);
    for (double t : {0.0, 1.1, 4.0}) {
        const SigmaPoint s = one.sigma(t);
        CHECK(s.sigma == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(s.dsigma) < 1e-15);
    }
    const ErmakovSolution sol = make_ermakov(b, 2.0, 1.0, +1);
    CHECK(sol.sigma(0.0).sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    double res = 0.0, smin = 1e9;
    for (int k = 0; k < 1000; ++k) {
        const double t = 10.0 * k / 999.0;
        res = std::max(res, std::abs(ermakov_residual(sol, t)));
        smin = std::min(smin, sol.sigma(t).sigma);
    }
    CHECK(res < 1e-8);
    CHECK(smin > 0.0);
    CHECK_THROWS_AS(make_ermakov(b, 0.5, 1.0, +1), ConstraintError);
    CHECK_THROWS_AS(make_ermakov(b, -1.0, 1.0, +1), ConstraintError);
}

TEST_CASE("sigma period is pi/2") {
    const ErmakovSolution sol = make_ermakov(unit_basis(), 2.0, 1.0, -1);
    for (double t : {0.1, 0.9, 2.3, 5.0})
        CHECK(sol.sigma(t).sigma == doctest::Approx(sol.sigma(t + pi / 2).sigma).epsilon(1e-13));
}

TEST_CASE("tanh profile closed form against RK4") {
    const TanhFrequency p{15.0, 10.0, 0.5};
    const LinearBasis b = solve_linear_basis(p, 0.0, {-4.0, 4.0});
    CHECK(b.used_fallback());
    CHECK(std::abs(b.W0()) == doctest::Approx(0.5 * (std::sqrt((15 + std::sqrt(125.0)) / 2) / 0.5 +
                                                    10.0 / (2 * 0.25 * std::sqrt((15 + std::sqrt(125.0)) / 2) / 0.5)))
                                  .epsilon(1e-12));
    const BasisPoint s = b.at(0.0);
    double err = 0.0;
    for (double t1 : {-4.0, -2.5, -1.0, 1.0, 2.5, 4.0}) {
        const auto r1 = rk4(p, 0.0, t1, s.q1, s.dq1, 40000);
        const auto r2 = rk4(p, 0.0, t1, s.q2, s.dq2, 40000);
        const BasisPoint q = b.at(t1);
        err = std::max({err, std::abs(q.q1 - r1[0]), std::abs(q.q2 - r2[0])});
    }
    CHECK(err < 1e-8);
    double drift = 0.0;
    for (int k = 0; k <= 800; ++k) {
        const BasisPoint q = b.at(-4.0 + 0.01 * k);
        drift = std::max(drift, std::abs(q.q1 * q.dq2 - q.dq1 * q.q2 - b.W0()));
    }
    CHECK(drift < 1e-10 * std::abs(b.W0()));
}

TEST_CASE("tanh sigma matches the conjugate-pair formula") {
    const double k = 0.5, O1 = 15.0, O2 = 10.0, a = 0.5;
    const LinearBasis b = solve_linear_basis(TanhFrequency{O1, O2, k}, 0.0, {-4.0, 4.0});
    const ErmakovSolution sol = make_ermakov_conjugate(b, a);
    const long double mu = std::sqrt((O1 + std::sqrt(O1 * O1 - O2 * O2)) / 2) / k;
    const long double rp = mu + O2 / (2 * k * k * mu), rm = mu - O2 / (2 * k * k * mu);
    const std::complex<long double> I(0, 1);
    double err = 0.0, res = 0.0;
    for (double t = -1.0; t <= 4.0; t += 0.05) {
        const long double T = std::tanh((long double)(k * t));
        const auto q = std::pow(1.0L - T, -I * rp / 2.0L) * std::pow(1.0L + T, -I * rm / 2.0L) *
                       series_2f1(-I * mu, 1.0L - I * mu, 1.0L - I * rp, (1.0L - T) / 2);
        const long double s2 = 2 * a * std::real(q * q) + 2 * std::sqrt(a * a + 1 / (k * k * rp * rp)) * std::norm(q);
        const double sg = sol.sigma(t).sigma;
        err = std::max(err, std::abs(sg * sg - (double)s2));
    }
    for (int j = 0; j < 1000; ++j) res = std::max(res, std::abs(ermakov_residual(sol, -4.0 + 8.0 * j / 999)));
    CHECK(err < 1e-8);
    CHECK(res < 1e-8);
}

TEST_CASE("tabulated profile reproduces the constant oscillator") {
    std::vector<double> v(2001, 1.0);
    const auto tab = make_tabulated_frequency(-1.0, 0.01, v);
    const LinearBasis b = solve_linear_basis(tab, 0.0, {-1.0, 19.0});
    double err = 0.0;
    for (double t = -1.0; t <= 19.0; t += 0.137) err = std::max(err, std::abs(b.at(t).q1 - std::cos(2 * t)));
    CHECK(err < 1e-9);
    v[10] = -0.1;
    CHECK_THROWS_AS(solve_linear_basis(make_tabulated_frequency(-1.0, 0.01, v), 0.0, {-1.0, 1.0}), DomainError);
}

TEST_CASE("tabulated tanh profile agrees with the hypergeometric basis") {
    const TanhFrequency p{15.0, 10.0, 0.5};
    std::vector<double> v;
    for (int j = 0; j <= 2000; ++j) v.push_back(omega2(p, -5.0 + 0.005 * j));
    const LinearBasis num = solve_linear_basis(make_tabulated_frequency(-5.0, 0.005, v), 0.0, {-4.0, 4.0});
    const LinearBasis ref = solve_linear_basis(p, 0.0, {-4.0, 4.0});
    const ErmakovSolution s1 = make_ermakov(num, 1.0, 1.0, +1);
    double res = 0.0, wr = 0.0;
    for (int j = 0; j < 1000; ++j) {
        const double t = -4.0 + 8.0 * j / 999;
        res = std::max(res, std::abs(ermakov_residual(s1, t)));
        const BasisPoint q = num.at(t);
        wr = std::max(wr, std::abs(q.q1 * q.dq2 - q.dq1 * q.q2 - num.W0()));
    }
    CHECK(res < 1e-8);
    CHECK(wr < 1e-10 * num.W0());
    // same ODE: q1 of the numeric basis is a combination of the hypergeometric pair
    const BasisPoint r0 = ref.at(0.0);
    const double det = r0.q1 * r0.dq2 - r0.dq1 * r0.q2;
    const double A = r0.dq2 / det, B = -r0.dq1 / det;  // q1num = A q1 + B q2 with q1num(0)=1, q1num'(0)=0
    double err = 0.0;
    for (double t = -4.0; t <= 4.0; t += 0.25) {
        const BasisPoint r = ref.at(t);
        err = std::max(err, std::abs(num.at(t).q1 - (A * r.q1 + B * r.q2)));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("frequency tables load from CSV") {
    const std::string path = "test_ermakov_freq.csv";
    {
        std::ofstream out(path);
        out << "t,Omega2\n";
        for (int j = 0; j <= 100; ++j) out << 0.1 * j << "," << 1.0 + 0.01 * j << "\n";
    }
    const TabulatedFrequency tab = load_frequency_csv(path);
    CHECK(tab.omega2.size() == 101);
    CHECK(tab.dt == doctest::Approx(0.1));
    CHECK(omega2(tab, 5.05) == doctest::Approx(1.505).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("Lewis-Riesenfeld phase") {
    const LinearBasis b = unit_basis(-5.0, 10.0);
    const ErmakovSolution one = make_ermakov(b, 1.0, 1.0, +1);
    CHECK(phase_theta(one, 2.0, 3.0, 0.5) == doctest::Approx(-5.0).epsilon(1e-13));
    const ErmakovSolution sol = make_ermakov(b, 2.0, 1.0, +1);
    CHECK(phase_theta(sol, 0.0, 3.0, 0.0) == 0.0);
    for (double t : {0.3, 1.2, 3.9, 9.5, -4.0}) {
        const double q = phase_theta(sol, 1.0, t, 0.0);
        const double c = phase_theta_closed_form(sol, 1.0, t, 0.0);
        CHECK(std::abs(q - c) < 1e-9);
    }
    const double a13 = phase_theta(sol, 1.0, 7.0, 1.0);
    const double a12 = phase_theta(sol, 1.0, 2.5, 1.0), a23 = phase_theta(sol, 1.0, 7.0, 2.5);
    CHECK(std::abs(a13 - a12 - a23) < 1e-12);
    // one full sigma period advances the angle by exactly pi: integral of 1/sigma^2 = pi/2
    CHECK(phase_theta(sol, 1.0, pi / 2, 0.0) == doctest::Approx(-pi / 2).epsilon(1e-12));
}
