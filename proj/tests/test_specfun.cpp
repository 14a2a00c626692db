#include "doctest.h"

#include <cmath>

#include "tdp/errors.hpp"
#include "tdp/specfun.hpp"

using namespace tdp;

TEST_CASE("hermite recurrence values") {
    CHECK(hermite(0) == ExactPolynomial{1});
    CHECK(hermite(3) == ExactPolynomial{0, -12, 0, 8});
    CHECK(hermite(3)(mpq_class(1)) == -4);
}

TEST_CASE("hermite polynomials solve their ODE exactly") {
    for (int n : {1, 5, 10}) {
        const auto H = hermite(n);
        const auto lhs = H.derivative().derivative() - ExactPolynomial{0, 2} * H.derivative() + mpq_class(2 * n) * H;
        CHECK(lhs.is_zero());
    }
}

TEST_CASE("pseudo-hermite polynomials") {
    CHECK(pseudo_hermite(2) == ExactPolynomial{2, 0, 4});
    for (const auto& c : pseudo_hermite(4).coefficients()) CHECK(c >= 0);
    CHECK(pseudo_hermite(4).coeff(0) > 0);
    const auto h3 = pseudo_hermite(3);
    CHECK(real_root_count(h3) == 1);
    CHECK(h3(mpq_class(0)) == 0);
    for (int n = 0; n <= 10; ++n) CHECK(real_root_count(pseudo_hermite(n)) == n % 2);
}

TEST_CASE("pseudo-hermite equals (-i)^n H_n(i y)") {
    for (int n = 0; n <= 8; ++n) {
        const auto H = hermite(n), P = pseudo_hermite(n);
        for (int k = 0; k <= n; ++k) {
            // (-i)^n i^k is real: (-1)^{(n+k)/2}... only k with n-k even survive
            if ((n - k) % 2) {
                CHECK(H.coeff(k) == 0);
                continue;
            }
            const int sign = ((n - k) / 2) % 2 ? -1 : 1;
            CHECK(P.coeff(k) == sign * H.coeff(k));
        }
    }
}

TEST_CASE("okamoto polynomials") {
    CHECK(okamoto(0) == ExactPolynomial{1});
    CHECK(okamoto(1) == ExactPolynomial{1});
    CHECK(okamoto(2) == ExactPolynomial{3, 0, 2});
    CHECK(okamoto(3) == ExactPolynomial{135, 0, 90, 0, 60, 0, 8});
    CHECK(okamoto(4) == ExactPolynomial{127575, 0, 170100, 0, 56700, 0, 30240, 0, 9360, 0, 1344, 0, 64});
    for (int m = 0; m <= 8; ++m) CHECK(real_root_count(okamoto(m)) == 0);
    CHECK(okamoto(5).degree() == 20);
}

TEST_CASE("taylor shift of exact polynomials") {
    const auto q = okamoto(3);
    const Taylor t = q.taylor(0.7, 4);
    CHECK(t[0] == doctest::Approx(q.eval(0.7)).epsilon(1e-15));
    CHECK(t[1] == doctest::Approx(q.derivative().eval(0.7)).epsilon(1e-14));
    CHECK(t[2] == doctest::Approx(q.derivative().derivative().eval(0.7) / 2).epsilon(1e-14));
}

TEST_CASE("kummer 1F1 identities") {
    CHECK(std::abs(kummer_1F1({0.3, 0.1}, 1.7, 0.0) - 1.0) < 1e-15);
    for (double z : {-35.0, -3.0, -0.5, 0.4, 2.0, 20.0}) {
        const cplx v = kummer_1F1(1.25, 1.25, z);
        CHECK(std::abs(v - std::exp(z)) <= 1e-13 * std::exp(z));
    }
    for (double y : {0.0, 0.5, 1.7, 4.0, 9.0}) {
        const double expect = 1.0 + 2.0 * y * y;
        CHECK(std::abs(kummer_1F1(-1.0, 0.5, -y * y) - expect) <= 1e-14 * expect);
        CHECK(expect == doctest::Approx(pseudo_hermite(2).eval(y) / 2).epsilon(1e-15));
    }
    CHECK_THROWS_AS(kummer_1F1(1.0, -2.0, 1.0), PoleError);
}

TEST_CASE("kummer 1F1 satisfies its ODE") {
    // u' = a/b 1F1(a+1, b+1, z), u'' = a(a+1)/(b(b+1)) 1F1(a+2, b+2, z)
    for (auto [a, b] : {std::pair{0.3, 0.5}, std::pair{-1.5, 1.5}, std::pair{1.0, 0.5}})
        for (double z : {-40.0, -7.5, -1.0, 0.3, 5.0, 25.0}) {
            const cplx u = kummer_1F1(a, b, z);
            const cplx du = a / b * kummer_1F1(a + 1, b + 1, z);
            const cplx d2u = a * (a + 1) / (b * (b + 1)) * kummer_1F1(a + 2, b + 2, z);
            const cplx res = z * d2u + (b - z) * du - a * u;
            const double scale = std::abs(z * d2u) + std::abs((b - z) * du) + std::abs(a * u);
            CHECK(std::abs(res) <= 1e-9 * scale);
        }
}

TEST_CASE("kummer scaled representation beyond overflow") {
    const ScaledComplex s = kummer_1F1_scaled(0.5, 1.5, 900.0);
    // 1F1(1/2, 3/2, x) = sqrt(pi) erfi(sqrt(x)) / (2 sqrt(x)) ~ e^x / (2x)
    const double log_expect = 900.0 - std::log(2 * 900.0);
    CHECK(std::log(std::abs(s.mantissa)) + s.log_scale == doctest::Approx(log_expect).epsilon(1e-5));
}

TEST_CASE("gauss hypergeometric series") {
    for (double x : {0.0, 0.3, 0.9, 0.95}) {
        const cplx v = hyp2f1(1.0, 1.0, 2.0, x);
        const double expect = x == 0.0 ? 1.0 : -std::log1p(-x) / x;
        CHECK(std::abs(v - expect) < 1e-13 * expect);
        const cplx a(0.2, -1.3), b(1.0, 0.7);
        const cplx w = hyp2f1(a, b, b, x);
        CHECK(std::abs(w - std::pow(1.0 - x, -a)) < 1e-12);
    }
    CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.0), RangeError);
}

TEST_CASE("complementary error function") {
    CHECK(tdp::erfc(0.0) == 1.0);
    CHECK(tdp::erfc(40.0) == 0.0);
    CHECK(tdp::erfc(-40.0) == 2.0);
    CHECK(tdp::erfc(1.0) == doctest::Approx(0.157299207050285130658).epsilon(1e-15));
    for (int k = -60; k <= 60; ++k) {
        const double x = 0.1 * k;
        CHECK(std::abs(tdp::erfc(x) + tdp::erfc(-x) - 2.0) < 1e-14);
    }
}
