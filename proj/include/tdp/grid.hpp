#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "tdp/taylor.hpp"

namespace tdp {

class ErmakovSolution;
using cplx = std::complex<double>;

// Uniform grid x_j = x_min + j h, j = 0..n-1.
struct Grid {
    double x_min = 0.0, h = 1.0;
    int n = 0;

    static Grid symmetric(double half_width, int points);
    double x(int j) const { return x_min + h * j; }
    double x_max() const { return x(n - 1); }
    std::vector<double> points() const;
};

struct GridFunction {
    Grid grid;
    double t = 0.0;
    std::shared_ptr<const ErmakovSolution> sol;
    std::vector<cplx> v;

    double norm() const;
    void normalize();
};

// Trapezoid quadrature of conj(a) b.
cplx inner(const GridFunction& a, const GridFunction& b);
cplx inner(const Grid& g, const std::vector<cplx>& a, const std::vector<cplx>& b);
double norm(const Grid& g, const std::vector<cplx>& a);

// Finite-difference weights for the m-th derivative at x0 on the given nodes.
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int m);

// Sixth-order first and second derivatives; one-sided closures near the ends.
std::vector<cplx> fd_d1(const Grid& g, const std::vector<cplx>& f);
std::vector<cplx> fd_d2(const Grid& g, const std::vector<cplx>& f);

// max |eighth difference| / max |f|; large values mean the grid does not
// resolve f.
double resolution_indicator(const std::vector<cplx>& f);
void check_resolution(const std::vector<cplx>& f, double tol = 1e-6);

// Quintic Hermite interpolant on a uniform grid from (f, f', f'') samples.
class HermiteTable {
public:
    HermiteTable() = default;
    // jet(x0) must return an expansion of order >= 2.
    HermiteTable(double a, double b, int intervals, const std::function<Taylor(double)>& jet);
    double operator()(double x) const;
    bool contains(double x) const { return x >= a_ && x <= b_; }

private:
    double a_ = 0.0, b_ = 0.0, h_ = 1.0;
    std::vector<double> f_, d_, s_;
};

}  // namespace tdp
