#include "tdp/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tdp {

Taylor::Taylor(int order, double value) : c_(static_cast<size_t>(std::max(order, 0)) + 1, 0.0) {
    c_[0] = value;
}

Taylor Taylor::variable(int order, double x0) {
    Taylor t(order, x0);
    if (order >= 1) t.c_[1] = 1.0;
    return t;
}

double Taylor::derivative(int n) const {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return c_[n] * f;
}

Taylor Taylor::derivative() const {
    Taylor d(std::max(order() - 1, 0));
    if (order() == 0) return d;
    for (int k = 1; k <= order(); ++k) d.c_[k - 1] = k * c_[k];
    return d;
}

Taylor Taylor::integral(double c0) const {
    Taylor r(order() + 1, c0);
    for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / (k + 1);
    return r;
}

Taylor Taylor::truncated(int n) const {
    Taylor r(n);
    for (int k = 0; k <= std::min(n, order()); ++k) r.c_[k] = c_[k];
    return r;
}

Taylor Taylor::scaled_argument(double s) const {
    Taylor r = *this;
    double p = 1.0;
    for (auto& v : r.c_) {
        v *= p;
        p *= s;
    }
    return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
    if (o.order() < order()) c_.resize(o.c_.size());
    for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
    if (o.order() < order()) c_.resize(o.c_.size());
    for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) {
    *this = *this * o;
    return *this;
}

Taylor& Taylor::operator/=(const Taylor& o) {
    *this = *this / o;
    return *this;
}

Taylor& Taylor::operator*=(double v) {
    for (auto& x : c_) x *= v;
    return *this;
}

Taylor& Taylor::operator/=(double v) {
    for (auto& x : c_) x /= v;
    return *this;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

Taylor operator*(const Taylor& a, const Taylor& b) {
    const int n = std::min(a.order(), b.order());
    Taylor r(n);
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
        r[k] = s;
    }
    return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
    const int n = std::min(a.order(), b.order());
    if (b[0] == 0.0) throw std::domain_error("Taylor division by a jet vanishing at the expansion point");
    Taylor q(n);
    for (int k = 0; k <= n; ++k) {
        double s = a[k];
        for (int j = 1; j <= k; ++j) s -= b[j] * q[k - j];
        q[k] = s / b[0];
    }
    return q;
}

Taylor operator-(Taylor a) { return a *= -1.0; }
Taylor operator+(Taylor a, double v) { return a += v; }
Taylor operator+(double v, Taylor a) { return a += v; }
Taylor operator-(Taylor a, double v) { return a -= v; }
Taylor operator-(double v, const Taylor& a) { return -a + v; }
Taylor operator*(Taylor a, double v) { return a *= v; }
Taylor operator*(double v, Taylor a) { return a *= v; }
Taylor operator/(Taylor a, double v) { return a /= v; }
Taylor operator/(double v, const Taylor& a) { return Taylor(a.order(), v) / a; }

Taylor exp(const Taylor& f) {
    const int n = f.order();
    Taylor e(n, std::exp(f[0]));
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * f[j] * e[k - j];
        e[k] = s / k;
    }
    return e;
}

Taylor log(const Taylor& f) {
    if (f[0] <= 0.0) throw std::domain_error("Taylor log of a non-positive jet");
    Taylor d = f.derivative() / f.truncated(std::max(f.order() - 1, 0));
    if (f.order() == 0) return Taylor(0, std::log(f[0]));
    return d.integral(std::log(f[0]));
}

Taylor sqrt(const Taylor& f) {
    if (f[0] <= 0.0) throw std::domain_error("Taylor sqrt of a non-positive jet");
    const int n = f.order();
    Taylor s(n, std::sqrt(f[0]));
    for (int k = 1; k <= n; ++k) {
        double acc = f[k];
        for (int j = 1; j < k; ++j) acc -= s[j] * s[k - j];
        s[k] = acc / (2.0 * s[0]);
    }
    return s;
}

Taylor erfc(const Taylor& f) {
    if (f.order() == 0) return Taylor(0, std::erfc(f[0]));
    // d/dh erfc(f) = -2/sqrt(pi) exp(-f^2) f'
    const Taylor g = f.truncated(f.order() - 1);
    const Taylor d = (-2.0 / std::sqrt(std::numbers::pi)) * exp(-(g * g)) * f.derivative();
    return d.integral(std::erfc(f[0]));
}

Taylor pow(const Taylor& f, int n) {
    if (n < 0) return 1.0 / pow(f, -n);
    Taylor r(f.order(), 1.0);
    Taylor base = f;
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return r;
}

}  // namespace tdp
