#pragma once

#include <functional>
#include <vector>

#include "tdp/grid.hpp"
#include "tdp/hamiltonian.hpp"
#include "tdp/invariant.hpp"

namespace tdp {

// Crank-Nicolson for i psi_t = (-d^2/dx^2 + V1) psi with a five-point
// fourth-order Laplacian, V1 at the half step, zero Dirichlet ends.
struct PropagatorConfig {
    double dt = 1e-4;
    // dt is reduced so that dt max|V1| stays below this bound.
    double max_phase_per_step = 0.1;
    double initial_edge_tol = 1e-10;
    double edge_tol = 1e-6;
};

struct PropagationStats {
    int steps = 0;
    double dt = 0.0;
    double max_V = 0.0;
    double norm_drift = 0.0;  // max | ||psi|| - ||psi0|| | / ||psi0||
};

// Potential on the propagation grid: fill(t, out) writes V(x_j, t).
struct GridPotential {
    std::function<void(double t, std::vector<double>& out)> fill;
    Window window;
};

// on_step(psi) is called after every `every` steps (0: never) and at t1.
GridFunction propagate(const GridFunction& psi0, const GridPotential& V, double t1, const PropagatorConfig& cfg = {},
                       const std::function<void(const GridFunction&)>& on_step = {}, int every = 0,
                       PropagationStats* stats = nullptr);
// V1 of the field, tabulated over the z-range the grid reaches.
GridFunction propagate(const GridFunction& psi0, const PotentialField& V, double t1, const PropagatorConfig& cfg = {},
                       const std::function<void(const GridFunction&)>& on_step = {}, int every = 0,
                       PropagationStats* stats = nullptr);

// |<a|b>| / (||a|| ||b||)
double fidelity(const GridFunction& a, const GridFunction& b);

// Relative drift of <psi|I1 psi> along a trajectory; absolute when the
// initial expectation is below 1e-8.
double invariant_drift(const std::vector<GridFunction>& trajectory, const SuperpotentialSet& S);
double invariant_expectation(const GridFunction& psi, const SuperpotentialSet& S);

// Omega^2(t) x^2 alone.
GridPotential oscillator_potential(std::shared_ptr<const ErmakovSolution> sol, const Grid& g);

}  // namespace tdp
