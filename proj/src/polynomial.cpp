#include "tdp/polynomial.hpp"

#include <sstream>

#include "tdp/errors.hpp"

namespace tdp {

ExactPolynomial::ExactPolynomial(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { normalize(); }

ExactPolynomial::ExactPolynomial(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
}

ExactPolynomial ExactPolynomial::monomial(int degree, const mpq_class& c) {
    std::vector<mpq_class> v(static_cast<size_t>(degree) + 1, mpq_class(0));
    v.back() = c;
    return ExactPolynomial(std::move(v));
}

void ExactPolynomial::normalize() {
    for (auto& v : c_) v.canonicalize();
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    d_.resize(c_.size());
    for (size_t k = 0; k < c_.size(); ++k) d_[k] = c_[k].get_d();
}

mpq_class ExactPolynomial::coeff(int k) const {
    if (k < 0 || k > degree()) return 0;
    return c_[k];
}

ExactPolynomial ExactPolynomial::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<mpq_class> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
    return ExactPolynomial(std::move(d));
}

mpq_class ExactPolynomial::operator()(const mpq_class& y) const {
    mpq_class s = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * y + *it;
    return s;
}

double ExactPolynomial::eval(double y) const {
    double s = 0.0;
    for (auto it = d_.rbegin(); it != d_.rend(); ++it) s = s * y + *it;
    return s;
}

Taylor ExactPolynomial::taylor(double y0, int order) const {
    Taylor t(order);
    if (d_.empty()) return t;
    std::vector<double> a = d_;
    const int n = degree();
    // repeated synthetic division (Taylor shift)
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) a[j] += y0 * a[j + 1];
    for (int k = 0; k <= std::min(order, n); ++k) t[k] = a[k];
    return t;
}

ExactPolynomial& ExactPolynomial::operator+=(const ExactPolynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
}

ExactPolynomial& ExactPolynomial::operator-=(const ExactPolynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpq_class(0));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
}

ExactPolynomial& ExactPolynomial::operator*=(const mpq_class& s) {
    for (auto& v : c_) v *= s;
    normalize();
    return *this;
}

std::string ExactPolynomial::to_string(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        if (c_[k] == 0) continue;
        mpq_class v = c_[k];
        if (!first) os << (v < 0 ? " - " : " + ");
        else if (v < 0) os << "-";
        v = abs(v);
        if (v != 1 || k == 0) os << v.get_str();
        if (k > 0) {
            if (v != 1) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

ExactPolynomial operator+(ExactPolynomial a, const ExactPolynomial& b) { return a += b; }
ExactPolynomial operator-(ExactPolynomial a, const ExactPolynomial& b) { return a -= b; }
ExactPolynomial operator*(ExactPolynomial a, const mpq_class& s) { return a *= s; }
ExactPolynomial operator*(const mpq_class& s, ExactPolynomial a) { return a *= s; }

ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<mpq_class> r(static_cast<size_t>(a.degree() + b.degree()) + 1, mpq_class(0));
    for (int i = 0; i <= a.degree(); ++i)
        for (int j = 0; j <= b.degree(); ++j) r[i + j] += a.coefficients()[i] * b.coefficients()[j];
    return ExactPolynomial(std::move(r));
}

std::pair<ExactPolynomial, ExactPolynomial> divmod(const ExactPolynomial& a, const ExactPolynomial& b) {
    if (b.is_zero()) throw PoleError("polynomial division by zero");
    std::vector<mpq_class> rem = a.coefficients();
    const int db = b.degree();
    if (a.degree() < db) return {ExactPolynomial{}, a};
    std::vector<mpq_class> q(static_cast<size_t>(a.degree() - db) + 1, mpq_class(0));
    for (int k = a.degree() - db; k >= 0; --k) {
        mpq_class f = rem[k + db] / b.leading();
        q[k] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.coefficients()[j];
    }
    rem.resize(static_cast<size_t>(db));
    return {ExactPolynomial(std::move(q)), ExactPolynomial(std::move(rem))};
}

namespace {

int sign_changes(const std::vector<int>& s) {
    int changes = 0, prev = 0;
    for (int v : s) {
        if (v == 0) continue;
        if (prev != 0 && v != prev) ++changes;
        prev = v;
    }
    return changes;
}

}  // namespace

int real_root_count(const ExactPolynomial& p) {
    if (p.degree() <= 0) return 0;
    std::vector<ExactPolynomial> seq{p, p.derivative()};
    while (!seq.back().is_zero() && seq.back().degree() > 0) {
        auto r = divmod(seq[seq.size() - 2], seq.back()).second;
        if (r.is_zero()) break;
        seq.push_back(r * mpq_class(-1));
    }
    std::vector<int> plus, minus;
    for (const auto& q : seq) {
        int s = sgn(q.leading());
        plus.push_back(s);
        minus.push_back(q.degree() % 2 ? -s : s);
    }
    return sign_changes(minus) - sign_changes(plus);
}

}  // namespace tdp
