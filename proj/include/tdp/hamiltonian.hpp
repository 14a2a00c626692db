#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "tdp/ermakov.hpp"
#include "tdp/grid.hpp"
#include "tdp/invariant.hpp"

namespace tdp {

// V1 = [Omega^2 + (lambda^2 - 1)/sigma^4] x^2 - (lambda/sigma^2)[w_y - w^2 - 2 y w + 1],
// y = sqrt(lambda) x / sigma.
double potential_V1(const SuperpotentialSet& S, const ErmakovSolution& sol, double x, double t);

class PotentialField {
public:
    PotentialField(SuperpotentialSet S, std::shared_ptr<const ErmakovSolution> sol);

    double V1(double x, double t) const;
    // Omega^2 x^2 + R1(x/sigma)/sigma^2
    double V1_from_R1(double x, double t) const;
    double V2(double x, double t) const;
    double V_osc(double x, double t) const;
    double omega2(double t) const { return sol_->omega2(t); }
    double sigma(double t) const { return sol_->sigma(t).sigma; }
    double R1(double z) const;

    // Tabulates R1 on [-z_max, z_max] for fast grid evaluation.
    void tabulate(double z_max, double dz = 2e-3);
    bool tabulated() const { return table_ != nullptr; }
    // True when the table spans [-z_max, z_max].
    bool covers(double z_max) const { return table_ && table_->contains(-z_max) && table_->contains(z_max); }
    // V1 on the grid at time t (table when available).
    void fill_V1(const Grid& g, double t, std::vector<double>& out) const;

    const SuperpotentialSet& superpotentials() const { return S_; }
    const std::shared_ptr<const ErmakovSolution>& ermakov() const { return sol_; }

private:
    void check_time(double t) const;
    SuperpotentialSet S_;
    std::shared_ptr<const ErmakovSolution> sol_;
    std::shared_ptr<const HermiteTable> table_;
};

struct SchrodingerState {
    GridFunction psi;
    double Lambda = 0.0;
    double theta = 0.0;
};

// psi = e^{i theta} phi with theta = -Lambda int_{t_ref}^{t} dt'/sigma^2.
SchrodingerState schrodinger_state(const GridFunction& mode, double Lambda, double t_ref);

// Parametric-oscillator eigenfunction of I0 = -D^2 + z^2: Lambda = 2n + 1.
AnalyticMode oscillator_mode(int n);
std::complex<double> oscillator_baseline(const ErmakovSolution& sol, int n, double x, double t, double t_ref);
GridFunction oscillator_state(std::shared_ptr<const ErmakovSolution> sol, int n, const Grid& grid, double t,
                              double t_ref);

// I0 psi = -sigma^2 psi_xx + i x sigma sigma' psi_x + R(x,t) psi on the grid.
std::vector<cplx> apply_I0(const ErmakovSolution& sol, const Grid& grid, double t, const std::vector<cplx>& v);

}  // namespace tdp
