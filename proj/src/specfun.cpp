#include "tdp/specfun.hpp"

#include <cmath>
#include <string>

#include "tdp/errors.hpp"

namespace tdp {

ExactPolynomial hermite(int n) {
    if (n < 0) throw DomainError("hermite: negative degree");
    ExactPolynomial prev{1}, cur{0, 2};
    if (n == 0) return prev;
    const ExactPolynomial two_y{0, 2};
    for (int k = 1; k < n; ++k) {
        ExactPolynomial next = two_y * cur - mpq_class(2 * k) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ExactPolynomial pseudo_hermite(int n) {
    if (n < 0) throw DomainError("pseudo_hermite: negative degree");
    ExactPolynomial prev{1}, cur{0, 2};
    if (n == 0) return prev;
    const ExactPolynomial two_y{0, 2};
    for (int k = 1; k < n; ++k) {
        ExactPolynomial next = two_y * cur + mpq_class(2 * k) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

ExactPolynomial okamoto(int m) {
    if (m < 0) throw DomainError("okamoto: negative index");
    ExactPolynomial prev{1}, cur{1};
    for (int k = 1; k < m; ++k) {
        const ExactPolynomial d1 = cur.derivative();
        const ExactPolynomial d2 = d1.derivative();
        ExactPolynomial num = mpq_class(9, 2) * (cur * d2 - d1 * d1) +
                              ExactPolynomial{3 * (2 * k - 1), 0, 2} * (cur * cur);
        auto [q, r] = divmod(num, prev);
        if (!r.is_zero())
            throw ConsistencyError("okamoto: recurrence division left a remainder at M=" + std::to_string(k + 1));
        prev = std::move(cur);
        cur = std::move(q);
    }
    return cur;
}

cplx ScaledComplex::value() const { return mantissa * std::exp(log_scale); }

namespace {

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
    double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;
    static void add(double& s, double& c, double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v)) c += (s - t) + v;
        else c += (v - t) + s;
        s = t;
    }
    void add(cplx v) {
        add(re, cre, v.real());
        add(im, cim, v.imag());
    }
    cplx total() const { return {re + cre, im + cim}; }
    void scale(double f) {
        re *= f;
        im *= f;
        cre *= f;
        cim *= f;
    }
};

bool is_nonpositive_integer(cplx v) {
    return v.imag() == 0.0 && v.real() <= 0.0 && v.real() == std::round(v.real());
}

constexpr double kRescale = 1e200;
constexpr int kMaxTerms = 200000;

// sum_k (a)_k/(b)_k z^k/k!, stopping after three consecutive negligible terms.
ScaledComplex kummer_series(cplx a, cplx b, double z) {
    CompensatedSum sum;
    cplx term = 1.0;
    double log_scale = 0.0;
    sum.add(term);
    int small = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const cplx ak = a + static_cast<double>(k);
        if (ak == 0.0) return {sum.total(), log_scale};
        term *= ak / (b + static_cast<double>(k)) * (z / (k + 1.0));
        sum.add(term);
        const double s = std::abs(sum.total());
        if (std::abs(term) <= 1e-18 * s) {
            if (++small >= 3) return {sum.total(), log_scale};
        } else {
            small = 0;
        }
        if (std::abs(term) > kRescale) {
            term /= kRescale;
            sum.scale(1.0 / kRescale);
            log_scale += std::log(kRescale);
        }
    }
    throw AccuracyError("kummer_1F1: series did not converge");
}

}  // namespace

ScaledComplex kummer_1F1_scaled(cplx a, cplx b, double z) {
    if (is_nonpositive_integer(b)) throw PoleError("kummer_1F1: b is a non-positive integer");
    if (z < 0.0 && !is_nonpositive_integer(a)) {
        ScaledComplex s = kummer_series(b - a, b, -z);
        s.log_scale += z;
        return s;
    }
    return kummer_series(a, b, z);
}

cplx kummer_1F1(cplx a, cplx b, double z) { return kummer_1F1_scaled(a, b, z).value(); }

cplx hyp2f1(cplx a, cplx b, cplx c, double x) {
    if (is_nonpositive_integer(c)) throw PoleError("hyp2f1: c is a non-positive integer");
    if (x < 0.0 || x >= 1.0) throw RangeError("hyp2f1: argument outside [0, 1)");
    CompensatedSum sum;
    cplx term = 1.0;
    sum.add(term);
    int small = 0;
    for (int k = 0; k < kMaxTerms; ++k) {
        const double dk = k;
        if (a + dk == 0.0 || b + dk == 0.0) return sum.total();
        term *= (a + dk) * (b + dk) / ((c + dk) * (dk + 1.0)) * x;
        sum.add(term);
        if (std::abs(term) <= 1e-18 * std::abs(sum.total())) {
            if (++small >= 3) return sum.total();
        } else {
            small = 0;
        }
    }
    throw AccuracyError("hyp2f1: series did not converge");
}

double erfc(double x) { return std::erfc(x); }

}  // namespace tdp
