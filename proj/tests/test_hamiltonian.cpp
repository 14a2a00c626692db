#include <cmath>

#include "doctest.h"
#include "tdp/errors.hpp"
#include "tdp/hamiltonian.hpp"

using namespace tdp;

namespace {

std::shared_ptr<const ErmakovSolution> breathing() {
    static const auto sol = std::make_shared<const ErmakovSolution>(
        make_ermakov(solve_linear_basis(ConstantFrequency{1.0}, 0.0, {-0.1, 3.3}), 2.0, 1.0, +1));
    return sol;
}

std::shared_ptr<const ErmakovSolution> stationary() {
    static const auto sol = std::make_shared<const ErmakovSolution>(
        make_ermakov(solve_linear_basis(ConstantFrequency{1.0}, 0.0, {-0.1, 3.3}), 1.0, 1.0, +1));
    return sol;
}

std::vector<PainleveSolution> instances() {
    return {erfc_solution(0.3),
            pseudo_hermite_solution(1),
            pseudo_hermite_solution(2),
            okamoto_solution(2),
            okamoto_solution(2, 2.5),
            nonlinear_bound_solution(3, 0.44 / std::sqrt(6.0)),
            riccati_solution(physical_params(RiccatiGeneral{-1, 1.0, 0.5}, 1.0, 0.2), -1, 1.0, 0.5),
            riccati_solution(physical_params(RiccatiGeneral{+1, 1.0, 0.0}, 1.0, 0.0), +1, 1.0, 0.0)};
}

}  // namespace

TEST_CASE("potential routes agree") {
    for (const auto& p : instances()) {
        const PotentialField V(SuperpotentialSet(p), breathing());
        double worst = 0.0;
        for (double t : linspace(0.0, M_PI / 2, 7))
            for (double x : linspace(-6.0, 6.0, 121)) {
                const double a = V.V1(x, t), b = V.V1_from_R1(x, t);
                REQUIRE(std::isfinite(a));
                worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
            }
        INFO(hierarchy_name(p.hierarchy()));
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("tabulated potential") {
    PotentialField V(SuperpotentialSet(okamoto_solution(2)), breathing());
    V.tabulate(12.0);
    const Grid g = Grid::symmetric(10.0, 1001);
    std::vector<double> out;
    V.fill_V1(g, 0.4, out);
    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) worst = std::max(worst, std::abs(out[j] - V.V1(g.x(j), 0.4)));
    CHECK(worst < 1e-9);
}

TEST_CASE("stationary shape-invariant family") {
    const SuperpotentialSet S(riccati_solution(physical_params(RiccatiGeneral{+1, 1.0, 0.0}, 1.0, 0.0), +1, 1.0, 0.0));
    const PotentialField V(S, stationary());
    for (double t : {0.0, 1.0, 2.5}) {
        CHECK(V.sigma(t) == doctest::Approx(1.0).epsilon(1e-12));
        for (double x : linspace(-5.0, 5.0, 41)) CHECK(std::abs(V.V1(x, t) - (x * x + 3.0)) < 1e-9);
    }
    const PotentialField Vb(S, breathing());
    for (double t : linspace(0.0, M_PI / 2, 9)) {
        double lo = 1e300, hi = -1e300;
        for (double x : linspace(-6.0, 6.0, 121)) {
            const double d = Vb.V1(x, t) - Vb.V_osc(x, t);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        CHECK(hi - lo < 1e-9);
    }
}

TEST_CASE("potential is periodic for the breathing solution") {
    const PotentialField V(SuperpotentialSet(okamoto_solution(2, 2.5)), breathing());
    for (double t : {0.0, 0.3, 1.1})
        for (double x : {-3.0, 0.0, 0.7, 2.0}) CHECK(std::abs(V.V1(x, t) - V.V1(x, t + M_PI / 2)) < 1e-9);
    CHECK_THROWS_AS(V.V1(0.0, 5.0), RangeError);
}

TEST_CASE("schrodinger phase") {
    const Grid g = Grid::symmetric(10.0, 1024);
    const GridFunction phi = sample(oscillator_mode(0), stationary(), g, 1.0);
    const SchrodingerState s = schrodinger_state(phi, 2.0, 0.0);
    CHECK(s.theta == doctest::Approx(-2.0).epsilon(1e-10));
    const SchrodingerState z = schrodinger_state(phi, 0.0, 0.0);
    CHECK(z.theta == 0.0);
    const double th = phase_theta(*breathing(), 3.0, 1.0, 0.0);
    const GridFunction o1 = oscillator_state(breathing(), 1, g, 1.0, 0.0);
    const GridFunction b1 = sample(oscillator_mode(1), breathing(), g, 1.0);
    const cplx ov = inner(b1, o1);
    CHECK(std::abs(ov) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::remainder(std::arg(ov) - th, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("oscillator baseline") {
    const Grid g = Grid::symmetric(14.0, 4096);
    for (int n = 0; n <= 5; ++n)
        for (double t : {0.0, 0.5, 1.2}) {
            const GridFunction o = oscillator_state(breathing(), n, g, t, 0.0);
            CHECK(o.norm() == doctest::Approx(1.0).epsilon(1e-10));
            const auto r = apply_I0(*breathing(), g, t, o.v);
            std::vector<cplx> d(r.size());
            for (size_t j = 0; j < r.size(); ++j) d[j] = r[j] - (2.0 * n + 1.0) * o.v[j];
            CHECK(norm(g, d) < 1e-6);
        }
    const cplx v = oscillator_baseline(*breathing(), 0, 0.3, 0.7, 0.0);
    const GridFunction o = oscillator_state(breathing(), 0, Grid::symmetric(0.3, 16), 0.7, 0.0);
    CHECK(std::abs(v - o.v.back()) < 1e-14);
    CHECK_THROWS_AS(oscillator_mode(-1), DomainError);
}
