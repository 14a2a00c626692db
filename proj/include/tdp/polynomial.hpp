#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "tdp/taylor.hpp"

namespace tdp {

// Polynomial with arbitrary-precision rational coefficients, ascending order.
class ExactPolynomial {
public:
    ExactPolynomial() = default;
    explicit ExactPolynomial(std::vector<mpq_class> coeffs);
    ExactPolynomial(std::initializer_list<long> coeffs);

    static ExactPolynomial monomial(int degree, const mpq_class& c = 1);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    mpq_class coeff(int k) const;
    const std::vector<mpq_class>& coefficients() const { return c_; }
    const mpq_class& leading() const { return c_.back(); }

    ExactPolynomial derivative() const;
    mpq_class operator()(const mpq_class& y) const;
    double eval(double y) const;
    // Taylor coefficients p^(k)(y0)/k!, k = 0..order.
    Taylor taylor(double y0, int order) const;

    ExactPolynomial& operator+=(const ExactPolynomial& o);
    ExactPolynomial& operator-=(const ExactPolynomial& o);
    ExactPolynomial& operator*=(const mpq_class& s);

    bool operator==(const ExactPolynomial& o) const { return c_ == o.c_; }

    std::string to_string(const std::string& var = "y") const;

private:
    void normalize();
    std::vector<mpq_class> c_;
    std::vector<double> d_;
};

ExactPolynomial operator+(ExactPolynomial a, const ExactPolynomial& b);
ExactPolynomial operator-(ExactPolynomial a, const ExactPolynomial& b);
ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b);
ExactPolynomial operator*(ExactPolynomial a, const mpq_class& s);
ExactPolynomial operator*(const mpq_class& s, ExactPolynomial a);

// Quotient and remainder of Euclidean division; throws on a zero divisor.
std::pair<ExactPolynomial, ExactPolynomial> divmod(const ExactPolynomial& a, const ExactPolynomial& b);

// Number of distinct real zeros (Sturm sequence).
int real_root_count(const ExactPolynomial& p);

}  // namespace tdp
