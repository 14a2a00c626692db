#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tdp/ermakov.hpp"
#include "tdp/grid.hpp"
#include "tdp/painleve.hpp"
#include "tdp/polynomial.hpp"

namespace tdp {

// Expansions in z about z0 of the coefficient functions of the ladder
// operators, all of the same order.
struct SuperpotentialJets {
    Taylor z, G, Gz, W, B, R1, R2;
};

// G(z) = sqrt(lambda) w(sqrt(lambda) z) / 2 and everything derived from it.
class SuperpotentialSet {
public:
    explicit SuperpotentialSet(PainleveSolution sol);

    const PainleveSolution& solution() const { return sol_; }
    const PhysicalParams& phys() const { return sol_.hierarchy().phys; }
    double lambda() const { return phys().lambda; }
    double gamma() const { return phys().gamma; }
    // sqrt(-d); throws DomainError for d > 0.
    double root_d() const;
    double eps1() const { return gamma() - root_d(); }
    double eps2() const { return gamma() + root_d(); }

    SuperpotentialJets jets(double z0, int order) const;
    double G(double z) const;
    double W(double z) const;
    double B(double z) const;
    double R1(double z) const;
    double R2(double z) const;
    // W1,2 = -G +- (G_z - sqrt(-d)) / (2G); PoleError where G vanishes.
    Taylor W1_jet(double z0, int order) const;
    Taylor W2_jet(double z0, int order) const;
    double W1(double z) const { return W1_jet(z, 0)[0]; }
    double W2(double z) const { return W2_jet(z, 0)[0]; }

private:
    PainleveSolution sol_;
    double sl_;
};

// Gauge factor e^{i sigma' x^2 / (4 sigma)} / sqrt(sigma).
cplx gauge_factor(const ErmakovSolution& sol, double x, double t);

// Grid realization of the invariants and ladder operators at one time.
// Operators act on the gauge-stripped profile F = psi / gauge, where the
// z-derivative is sigma d/dx, and the result is mapped back.
class OperatorSet {
public:
    // With check_resolution every operator input is tested by the
    // eighth-difference indicator; composite outputs carry amplified
    // stencil round-off, so the check is meant for sampled states.
    OperatorSet(const SuperpotentialSet& S, const ErmakovSolution& sol, const Grid& grid, double t,
                bool check_resolution = false);

    const Grid& grid() const { return grid_; }
    double t() const { return t_; }
    double sigma() const { return sigma_; }
    double dsigma() const { return dsigma_; }
    const std::vector<double>& z() const { return z_; }

    using Vec = std::vector<cplx>;
    Vec I0(const Vec& v) const;
    Vec I1(const Vec& v) const;
    Vec I2(const Vec& v) const;
    // Auxiliary invariant M1 M1^dagger + eps1.
    Vec Iaux(const Vec& v) const;
    Vec Qdag(const Vec& v) const;
    Vec Q(const Vec& v) const;
    Vec M1dag(const Vec& v) const;
    Vec M1(const Vec& v) const;
    Vec M2dag(const Vec& v) const;
    Vec M2(const Vec& v) const;
    Vec M(const Vec& v) const;
    Vec Mdag(const Vec& v) const;
    Vec Adag(const Vec& v) const;
    Vec A(const Vec& v) const;

    // Throws ResolutionError when the gauge-stripped v is under-resolved.
    void check(const Vec& v) const;
    // || (I1 - Lambda) v || / || v ||
    double eigen_residual(const Vec& v, double Lambda) const;

private:
    Vec strip(const Vec& v) const;
    Vec dress(const Vec& f) const;
    Vec dz(const Vec& f) const;
    Vec dzz(const Vec& f) const;
    Vec first_order(const Vec& v, double sign, const std::vector<double>& F) const;
    Vec schrodinger_like(const Vec& v, const std::vector<double>& potential) const;
    void need_w12() const;

    const SuperpotentialSet* S_;
    Grid grid_;
    double t_, sigma_, dsigma_;
    bool check_;
    std::vector<double> z_, G_, Gz_, W_, B_, R1_, R2_;
    Vec chirp_;
    mutable std::vector<double> W1_, W2_, aux_;
};

GridFunction apply_I1(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_Qdag(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_Q(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_M1dag(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_M1(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_M2dag(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_M2(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_Adag(const SuperpotentialSet& S, const GridFunction& psi);
GridFunction apply_A(const SuperpotentialSet& S, const GridFunction& psi);
double eigen_residual(const SuperpotentialSet& S, const GridFunction& psi, double Lambda);

enum class ModeKind { AnnihilatedByA, AnnihilatedByAdag, Both, Neither };
std::string to_string(ModeKind k);

// Real z-profile K(z) of an invariant eigenfunction, phi = N gauge K(x/sigma).
struct AnalyticMode {
    std::function<Taylor(double z0, int order)> K;
    double Lambda = 0.0;
    std::string label;
    int level = 0;  // number of raising steps from the zero mode
};

// A^dagger K = Q^dagger (M K) and A K = M^dagger (Q K) on jets.
AnalyticMode raise(const SuperpotentialSet& S, const AnalyticMode& m);
AnalyticMode lower(const SuperpotentialSet& S, const AnalyticMode& m);

// Samples N gauge K(x/sigma) on the grid, unit-normalized.
GridFunction sample(const AnalyticMode& m, std::shared_ptr<const ErmakovSolution> sol, const Grid& grid, double t,
                    bool normalize = true);

struct ZeroMode {
    GridFunction psi;
    double Lambda = 0.0;
    ModeKind kind = ModeKind::Neither;
    int node_count = 0;
    double eigen_residual = 0.0;
    double residual_A = 0.0, residual_Adag = 0.0;  // ||A phi||/||phi||, ||A^dagger phi||/||phi||
    std::string label;
    AnalyticMode analytic;
};

struct ZeroModeSet {
    std::vector<ZeroMode> modes;          // finite norm, sorted by Lambda
    std::vector<std::string> infinite;    // rejected candidates
};

// Candidate zero modes of the hierarchy before the finite-norm filter.
std::vector<AnalyticMode> zero_mode_candidates(const SuperpotentialSet& S);
ZeroModeSet zero_modes(const SuperpotentialSet& S, std::shared_ptr<const ErmakovSolution> sol, const Grid& grid,
                       double t);

// Polynomial P with e^{-y^2/6} P / Q_{M+1} an eigenfunction at Lambda/lambda =
// (6M+2)/3 (upper = false) or (6M+4)/3 (upper = true).
ExactPolynomial okamoto_mode_numerator(int M, bool upper);

struct SequenceState {
    GridFunction psi;
    double Lambda = 0.0;
    double eigen_residual = 0.0;
    AnalyticMode analytic;
};

struct Sequence {
    std::vector<SequenceState> states;
    bool terminated = false;              // A^dagger annihilated the last state
    double termination_residual = 0.0;    // ||A^dagger phi_last|| / ||phi_last||
};

// Repeated raising from `mode`, at most `count` states including the first.
Sequence generate_sequence(const SuperpotentialSet& S, const AnalyticMode& mode,
                           std::shared_ptr<const ErmakovSolution> sol, const Grid& grid, double t, int count);

// Smooth localized functions (random quartic times a Gaussian in y, chirped).
std::vector<std::vector<cplx>> random_test_functions(const OperatorSet& ops, double lambda, int count, unsigned seed);
// max ||I1 A^dagger f - A^dagger (I1 + 2 lambda) f|| / ||A^dagger f|| over random test functions.
double shape_invariance_residual(const SuperpotentialSet& S, const OperatorSet& ops, int count = 20,
                                 unsigned seed = 7);

std::vector<std::vector<cplx>> gram_matrix(const std::vector<GridFunction>& states);
int node_count(const GridFunction& psi);
int node_count(const std::vector<double>& profile);

// Grid wide enough that |sqrt(lambda) x / sigma| reaches y_window at every
// time in [t0, t1].
Grid default_grid(const ErmakovSolution& sol, double lambda, double y_window, double t0, double t1, int points = 4096);
// y-window used for each hierarchy.
double hierarchy_y_window(const Hierarchy& h);
std::pair<double, double> sigma_range(const ErmakovSolution& sol, double t0, double t1, int samples = 2001);

}  // namespace tdp
