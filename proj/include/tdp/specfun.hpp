#pragma once

#include <complex>

#include "tdp/polynomial.hpp"

namespace tdp {

using cplx = std::complex<double>;

// Physicists' Hermite polynomial H_n.
ExactPolynomial hermite(int n);
// Pseudo-Hermite polynomial (-i)^n H_n(i y); real coefficients, all non-negative.
ExactPolynomial pseudo_hermite(int n);
// Okamoto polynomial Q_M from the nonlinear three-term recurrence, Q_0 = Q_1 = 1.
ExactPolynomial okamoto(int m);

// Value represented as mantissa * exp(log_scale); keeps series sums finite
// far beyond the double exponent range.
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    double log_scale = 0.0;
    cplx value() const;
};

// Confluent hypergeometric 1F1(a; b; z) for real z.
cplx kummer_1F1(cplx a, cplx b, double z);
ScaledComplex kummer_1F1_scaled(cplx a, cplx b, double z);

// Gauss hypergeometric 2F1(a, b; c; x) for 0 <= x < 1 by power series.
cplx hyp2f1(cplx a, cplx b, cplx c, double x);

double erfc(double x);

}  // namespace tdp
