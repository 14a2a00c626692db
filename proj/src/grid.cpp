#include "tdp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "tdp/errors.hpp"

namespace tdp {

Grid Grid::symmetric(double half_width, int points) {
    if (points < 16) throw DomainError("grid needs at least 16 points");
    if (!(half_width > 0.0)) throw DomainError("grid half-width must be positive");
    return {-half_width, 2.0 * half_width / (points - 1), points};
}

std::vector<double> Grid::points() const {
    std::vector<double> p(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) p[j] = x(j);
    return p;
}

double norm(const Grid& g, const std::vector<cplx>& a) {
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += (j == 0 || j == g.n - 1 ? 0.5 : 1.0) * std::norm(a[j]);
    return std::sqrt(s * g.h);
}

cplx inner(const Grid& g, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (int j = 0; j < g.n; ++j) s += (j == 0 || j == g.n - 1 ? 0.5 : 1.0) * std::conj(a[j]) * b[j];
    return s * g.h;
}

cplx inner(const GridFunction& a, const GridFunction& b) { return inner(a.grid, a.v, b.v); }

double GridFunction::norm() const { return tdp::norm(grid, v); }

void GridFunction::normalize() {
    const double nv = norm();
    if (!(nv > 0.0) || !std::isfinite(nv)) throw AccuracyError("cannot normalize a zero or non-finite grid function");
    for (auto& c : v) c /= nv;
}

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m) {
    const int n = static_cast<int>(nodes.size()) - 1;
    std::vector<std::vector<double>> c(static_cast<size_t>(n) + 1, std::vector<double>(static_cast<size_t>(m) + 1, 0.0));
    double c1 = 1.0, c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

namespace {

struct Stencils {
    std::vector<double> central;                // 7 points, offsets -3..3
    std::vector<std::vector<double>> left;      // rows j = 0..2, nodes 0..7
    std::vector<std::vector<double>> right;     // rows j = n-3..n-1, nodes n-8..n-1
};

Stencils make_stencils(int m) {
    Stencils s;
    s.central = fornberg_weights(0.0, {-3, -2, -1, 0, 1, 2, 3}, m);
    const std::vector<double> nodes{0, 1, 2, 3, 4, 5, 6, 7};
    for (int j = 0; j < 3; ++j) s.left.push_back(fornberg_weights(j, nodes, m));
    for (int j = 5; j < 8; ++j) s.right.push_back(fornberg_weights(j, nodes, m));
    return s;
}

std::vector<cplx> apply_stencil(const Grid& g, const std::vector<cplx>& f, const Stencils& s, double scale) {
    const int n = g.n;
    if (static_cast<int>(f.size()) != n) throw DomainError("grid function size does not match the grid");
    std::vector<cplx> d(static_cast<size_t>(n));
    for (int j = 3; j < n - 3; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < 7; ++k) acc += s.central[k] * f[j - 3 + k];
        d[j] = acc * scale;
    }
    for (int j = 0; j < 3; ++j) {
        cplx a = 0.0, b = 0.0;
        for (int k = 0; k < 8; ++k) {
            a += s.left[j][k] * f[k];
            b += s.right[j][k] * f[n - 8 + k];
        }
        d[j] = a * scale;
        d[n - 3 + j] = b * scale;
    }
    return d;
}

}  // namespace

std::vector<cplx> fd_d1(const Grid& g, const std::vector<cplx>& f) {
    static const Stencils s = make_stencils(1);
    return apply_stencil(g, f, s, 1.0 / g.h);
}

std::vector<cplx> fd_d2(const Grid& g, const std::vector<cplx>& f) {
    static const Stencils s = make_stencils(2);
    return apply_stencil(g, f, s, 1.0 / (g.h * g.h));
}

double resolution_indicator(const std::vector<cplx>& f) {
    static const double binom[9] = {1, -8, 28, -56, 70, -56, 28, -8, 1};
    double top = 0.0, diff = 0.0;
    for (const auto& v : f) top = std::max(top, std::abs(v));
    if (top == 0.0) return 0.0;
    for (size_t j = 0; j + 8 < f.size(); ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < 9; ++k) acc += binom[k] * f[j + k];
        diff = std::max(diff, std::abs(acc));
    }
    return diff / top;
}

void check_resolution(const std::vector<cplx>& f, double tol) {
    const double r = resolution_indicator(f);
    if (r > tol)
        throw ResolutionError("grid does not resolve the wavefunction (eighth-difference ratio " + std::to_string(r) +
                              "); increase the number of grid points");
}

HermiteTable::HermiteTable(double a, double b, int intervals, const std::function<Taylor(double)>& jet)
    : a_(a), b_(b), h_((b - a) / intervals) {
    for (int j = 0; j <= intervals; ++j) {
        const Taylor t = jet(a + j * h_);
        f_.push_back(t[0]);
        d_.push_back(t[1]);
        s_.push_back(2.0 * t[2]);
    }
}

double HermiteTable::operator()(double x) const {
    if (!contains(x)) throw RangeError("interpolation table queried outside its range");
    const auto n = static_cast<long>(f_.size());
    const double u = (x - a_) / h_;
    const long k = std::clamp(static_cast<long>(std::floor(u)), 0L, n - 2);
    const double s = u - k, s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5, H1 = s - 6 * s3 + 8 * s4 - 3 * s5,
                 H2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5), H3 = 10 * s3 - 15 * s4 + 6 * s5,
                 H4 = -4 * s3 + 7 * s4 - 3 * s5, H5 = 0.5 * (s3 - 2 * s4 + s5);
    const double h = h_, h2 = h * h;
    return H0 * f_[k] + h * H1 * d_[k] + h2 * H2 * s_[k] + H3 * f_[k + 1] + h * H4 * d_[k + 1] +
           h2 * H5 * s_[k + 1];
}

}  // namespace tdp
