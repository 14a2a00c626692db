#pragma once

#include <vector>

namespace tdp {

// Truncated Taylor expansion f(x0 + h) = sum_k c[k] h^k, k = 0..order.
// Arithmetic between jets of different order truncates to the smaller one.
class Taylor {
public:
    Taylor() : c_(1, 0.0) {}
    explicit Taylor(int order, double value = 0.0);

    static Taylor variable(int order, double x0);
    static Taylor constant(int order, double v) { return Taylor(order, v); }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](int k) const { return c_[k]; }
    double& operator[](int k) { return c_[k]; }
    double value() const { return c_[0]; }
    // n-th derivative at x0.
    double derivative(int n) const;

    Taylor derivative() const;
    Taylor integral(double c0) const;
    Taylor truncated(int order) const;
    // Expansion of f(s * h) given that of f(h).
    Taylor scaled_argument(double s) const;

    Taylor& operator+=(const Taylor& o);
    Taylor& operator-=(const Taylor& o);
    Taylor& operator*=(const Taylor& o);
    Taylor& operator/=(const Taylor& o);
    Taylor& operator+=(double v) { c_[0] += v; return *this; }
    Taylor& operator-=(double v) { c_[0] -= v; return *this; }
    Taylor& operator*=(double v);
    Taylor& operator/=(double v);

    const std::vector<double>& coefficients() const { return c_; }

private:
    std::vector<double> c_;
};

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator-(Taylor a);
Taylor operator+(Taylor a, double v);
Taylor operator+(double v, Taylor a);
Taylor operator-(Taylor a, double v);
Taylor operator-(double v, const Taylor& a);
Taylor operator*(Taylor a, double v);
Taylor operator*(double v, Taylor a);
Taylor operator/(Taylor a, double v);
Taylor operator/(double v, const Taylor& a);

Taylor exp(const Taylor& f);
Taylor log(const Taylor& f);
Taylor sqrt(const Taylor& f);
Taylor erfc(const Taylor& f);
Taylor pow(const Taylor& f, int n);

}  // namespace tdp
