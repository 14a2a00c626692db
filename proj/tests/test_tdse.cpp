#include <cmath>

#include "doctest.h"
#include "tdp/errors.hpp"
#include "tdp/tdse.hpp"

using namespace tdp;

namespace {

std::shared_ptr<const ErmakovSolution> ermakov(double a, double c) {
    return std::make_shared<const ErmakovSolution>(
        make_ermakov(solve_linear_basis(ConstantFrequency{1.0}, 0.0, {-0.1, 3.3}), a, c, +1));
}

GridFunction rephase(GridFunction phi, double Lambda, double t_ref) {
    return schrodinger_state(phi, Lambda, t_ref).psi;
}

}  // namespace

TEST_CASE("stationary ground state") {
    const auto sol = ermakov(1.0, 1.0);
    const SuperpotentialSet S(riccati_solution(physical_params(RiccatiGeneral{+1, 1.0, 0.0}, 1.0, 0.0), +1, 1.0, 0.0));
    PotentialField V(S, sol);
    // With mu = +1, V1 = x^2 + 3: oscillator states shifted by 3.
    const Grid g = Grid::symmetric(12.0, 2048);
    const GridFunction psi0 = oscillator_state(sol, 0, g, 0.0, 0.0);
    PropagationStats st;
    const GridFunction psi = propagate(psi0, V, M_PI, {}, {}, 0, &st);
    GridFunction ref = oscillator_state(sol, 0, g, M_PI, 0.0);
    const cplx ov = inner(ref, psi);
    CHECK(std::abs(ov) > 1 - 1e-8);
    CHECK(std::remainder(std::arg(ov) + 3.0 * M_PI, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(st.norm_drift < 1e-9);
    CHECK(st.steps >= 31415);
}

TEST_CASE("erfc zero mode follows the analytic solution") {
    const auto sol = ermakov(2.0, 1.0);
    const SuperpotentialSet S(erfc_solution(0.3));
    PotentialField V(S, sol);
    V.tabulate(12.0);
    const Grid g = default_grid(*sol, 1.0, 10.0, 0.0, M_PI / 2, 4096);
    const ZeroModeSet zm = zero_modes(S, sol, g, 0.0);
    REQUIRE(zm.modes.size() >= 2);
    const AnalyticMode seed = zm.modes.back().analytic;  // Lambda = 2 lambda
    CHECK(seed.Lambda == doctest::Approx(2.0));
    const GridFunction psi0 = sample(seed, sol, g, 0.0);
    std::vector<GridFunction> traj;
    const GridFunction psi = propagate(psi0, V, M_PI / 2, {}, [&](const GridFunction& p) { traj.push_back(p); }, 1600);
    REQUIRE(traj.size() >= 10);
    double worst = 1.0, phase = 0.0;
    for (const auto& p : traj) {
        const GridFunction ref = rephase(sample(seed, sol, g, p.t), seed.Lambda, 0.0);
        const cplx ov = inner(ref, p);
        worst = std::min(worst, std::abs(ov));
        phase = std::max(phase, std::abs(std::arg(ov)));
    }
    CHECK(worst > 1 - 1e-4);
    CHECK(phase < 1e-3);
    traj.insert(traj.begin(), psi0);
    CHECK(invariant_drift(traj, S) < 1e-4);
}

TEST_CASE("window errors") {
    const auto sol = ermakov(2.0, 1.0);
    const SuperpotentialSet S(erfc_solution(0.3));
    const PotentialField V(S, sol);
    const Grid g = Grid::symmetric(3.0, 256);
    const GridFunction psi0 = sample(oscillator_mode(0), sol, g, 0.0);
    CHECK_THROWS_AS(propagate(psi0, V, 0.1), WindowError);
    const Grid g2 = Grid::symmetric(12.0, 512);
    const GridFunction p2 = sample(oscillator_mode(0), sol, g2, 0.0);
    CHECK_THROWS_AS(propagate(p2, V, 10.0), RangeError);
}

TEST_CASE("bound-state ladder under propagation") {
    const auto sol = ermakov(2.0, 1.0);
    const SuperpotentialSet S(nonlinear_bound_solution(3, 0.44 / std::sqrt(6.0)));
    const PotentialField V(S, sol);
    const Grid g = default_grid(*sol, 1.0, 10.0, 0.0, M_PI / 2, 4096);
    const ZeroModeSet zm = zero_modes(S, sol, g, 0.0);
    const Sequence seq = generate_sequence(S, zm.modes[0].analytic, sol, g, 0.0, 10);
    REQUIRE(seq.states.size() == 4);
    const double t1 = M_PI / 4;

    std::vector<GridFunction> before, after;
    for (const auto& st : seq.states) {
        before.push_back(st.psi);
        after.push_back(propagate(st.psi, V, t1));
    }
    const auto G0 = gram_matrix(before), G1 = gram_matrix(after);
    double worst = 0.0;
    for (size_t i = 0; i < G0.size(); ++i)
        for (size_t j = 0; j < G0.size(); ++j) worst = std::max(worst, std::abs(G1[i][j] - G0[i][j]));
    CHECK(worst < 1e-5);

    for (size_t i = 1; i < seq.states.size(); ++i) {
        const auto& st = seq.states[i];
        CHECK(eigen_residual(S, after[i], st.Lambda) < 1e-3);
        const GridFunction ref = rephase(sample(st.analytic, sol, g, t1), st.Lambda, 0.0);
        CHECK(fidelity(ref, after[i]) > 1 - 1e-4);
    }

    // The zero mode at Lambda = 0 and a superposition of two levels.
    std::vector<GridFunction> zero{before[0]}, mix;
    GridFunction sup = before[1];
    for (size_t j = 0; j < sup.v.size(); ++j) sup.v[j] = 0.6 * before[1].v[j] + cplx(0.3, 0.5) * before[2].v[j];
    sup.normalize();
    mix.push_back(sup);
    propagate(before[0], V, t1, {}, [&](const GridFunction& p) { zero.push_back(p); }, 800);
    propagate(sup, V, t1, {}, [&](const GridFunction& p) { mix.push_back(p); }, 800);
    REQUIRE(mix.size() >= 10);
    CHECK(invariant_drift(zero, S) < 1e-6);
    CHECK(invariant_drift(mix, S) < 1e-4);
}

TEST_CASE("breathing oscillator ground state") {
    const auto sol = ermakov(2.0, 1.0);
    const SuperpotentialSet S(riccati_solution(physical_params(RiccatiGeneral{+1, 1.0, 0.0}, 1.0, 0.0), +1, 1.0, 0.0));
    const PotentialField V(S, sol);
    const Grid g = default_grid(*sol, 1.0, 10.0, 0.0, M_PI / 2, 2048);
    // V1 = Omega^2 x^2 + 3/sigma^2 adds the phase -3 int dt/sigma^2.
    const GridFunction psi0 = oscillator_state(sol, 0, g, 0.0, 0.0);
    const GridFunction psi = propagate(psi0, V, M_PI / 2);
    GridFunction ref = oscillator_state(sol, 0, g, M_PI / 2, 0.0);
    const double extra = phase_theta(*sol, 3.0, M_PI / 2, 0.0);
    const cplx ov = inner(ref, psi);
    CHECK(std::abs(ov) > 1 - 1e-5);
    CHECK(std::remainder(std::arg(ov) - extra, 2 * M_PI) == doctest::Approx(0.0).epsilon(1e-3));
}
