#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tdp/taylor.hpp"

namespace tdp {

struct PhysicalParams {
    double lambda = 1.0;
    double gamma = 0.0;
    double d = 0.0;
};

struct PainleveParams {
    double alpha, beta;
};

// alpha = gamma/lambda + 1, beta = 2 d / lambda^2
PainleveParams params_from_physical(const PhysicalParams& phys);

// w = -(1/mu) u'/u, u = ka u1 + kb u2 (confluent hypergeometric pair)
struct RiccatiGeneral {
    int mu = -1;
    double ka = 1.0, kb = 0.0;
};
struct Erfc {
    double k;
};
struct PseudoHermite {
    int N;
};
struct Okamoto {
    int M;
};
// k is the amplitude of the level-N state; the seed uses k sqrt(N!).
struct NonlinearBound {
    int N;
    double k;
};

using HierarchyVariant = std::variant<RiccatiGeneral, Erfc, PseudoHermite, Okamoto, NonlinearBound>;

struct Hierarchy {
    HierarchyVariant variant;
    PhysicalParams phys;
};

std::string hierarchy_name(const Hierarchy& h);

// Level-by-level jets of the bound-state chain at xi0: eta[n], the
// Backlund numerator P[n] = xi eta + 2 eta^3 - 2 eta' and radicand
// D[n] = n + 1 + 2 eta eta' - xi eta^2 - 2 eta^4. Level n has order
// order + N - n, so every entry reaches at least `order`.
struct BoundChainJets {
    std::vector<Taylor> eta, P, D;
};

// eta jet evaluator for one level of the chain.
struct EtaLevel {
    int n = 0;
    double k = 0.0;  // amplitude of this level
    std::function<Taylor(double xi0, int order)> eta;
};

// eta_0 = k e^{-xi^2/4} / sqrt(1 - sqrt(2 pi) k^2 erfc(xi / sqrt 2))
EtaLevel bound_state_seed(double k);
// eta_{n+1} = P / (2 sqrt D); radicand checked on [xi_min, xi_max] (branch error if not positive).
EtaLevel backlund_step(const EtaLevel& level, double xi_min = -8.5, double xi_max = 8.5);

namespace detail {
class SolutionImpl;
}

class PainleveSolution {
public:
    explicit PainleveSolution(std::shared_ptr<const detail::SolutionImpl> impl);

    const Hierarchy& hierarchy() const;
    PainleveParams params() const;

    // Taylor expansion of w about y0.
    Taylor jet(double y0, int order) const;
    double w(double y) const;
    std::pair<double, double> w_dw(double y) const;
    // L(y) = int w dy in closed form (free constant fixed per hierarchy).
    double log_weight(double y) const;
    Taylor log_weight_jet(double y0, int order) const;

    // Bound-state chain (NonlinearBound only; throws otherwise).
    BoundChainJets bound_chain(double xi0, int order) const;
    double seed_amplitude() const;

private:
    std::shared_ptr<const detail::SolutionImpl> impl_;
};

PainleveSolution riccati_solution(const PhysicalParams& phys, int mu, double ka, double kb);
PainleveSolution erfc_solution(double k, double lambda = 1.0);
PainleveSolution pseudo_hermite_solution(int N, double lambda = 1.0);
PainleveSolution okamoto_solution(int M, double lambda = 1.0);
PainleveSolution nonlinear_bound_solution(int N, double k, double lambda = 1.0);
// Dispatches on the variant; physical parameters are re-derived and
// checked against those supplied.
PainleveSolution make_solution(const Hierarchy& h);

// Physical parameters implied by a hierarchy at given lambda (and gamma for
// the general Riccati family).
PhysicalParams physical_params(const HierarchyVariant& v, double lambda, double gamma = 0.0);

// max |w'' - [(w')^2/2w + 3w^3/2 + 4yw^2 + 2(y^2 - alpha)w + beta/w]| over ys;
// jet2(y) returns an expansion of w of order >= 2.
double painleve_residual(const std::function<Taylor(double)>& jet2, const PainleveParams& p,
                         const std::vector<double>& ys);
double painleve_residual(const PainleveSolution& sol, double y_max = 6.0, int points = 1000);

std::vector<double> linspace(double a, double b, int n);

}  // namespace tdp
