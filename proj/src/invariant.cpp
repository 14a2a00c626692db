#include "tdp/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tdp/errors.hpp"
#include "tdp/specfun.hpp"

namespace tdp {

namespace {

constexpr double kCoreY = 8.0;           // |y| inside which candidate values must be finite
constexpr double kEigenTol = 1e-6;
constexpr double kRaiseTol = 1e-4;
constexpr double kTerminateTol = 1e-5;

}  // namespace

// ---------------------------------------------------------------- superpotentials

SuperpotentialSet::SuperpotentialSet(PainleveSolution sol) : sol_(std::move(sol)), sl_(std::sqrt(phys().lambda)) {
    if (!(phys().lambda > 0.0)) throw DomainError("superpotentials: lambda must be positive");
}

double SuperpotentialSet::root_d() const {
    const double d = phys().d;
    if (d > 1e-14 * (1.0 + std::abs(gamma()) * std::abs(gamma())))
        throw DomainError("factorization of M requires d <= 0 (d = " + std::to_string(d) + ")");
    return std::sqrt(std::max(0.0, -d));
}

SuperpotentialJets SuperpotentialSet::jets(double z0, int order) const {
    const double lam = lambda(), gam = gamma();
    const Taylor wz = sol_.jet(sl_ * z0, order + 1).scaled_argument(sl_);
    const Taylor G1 = 0.5 * sl_ * wz;
    const Taylor z1 = Taylor::variable(order + 1, z0);
    const Taylor W1full = -2.0 * G1 - lam * z1;

    SuperpotentialJets s;
    s.z = Taylor::variable(order, z0);
    s.G = G1.truncated(order);
    s.Gz = G1.derivative();
    s.W = W1full.truncated(order);
    s.B = -2.0 * s.G * s.G - s.Gz - 4.0 * lam * s.z * s.G - lam * lam * s.z * s.z + (lam + gam);
    s.R1 = W1full.derivative() + s.W * s.W - s.z * s.z;
    s.R2 = s.R1 + 4.0 * s.Gz;
    return s;
}

double SuperpotentialSet::G(double z) const { return 0.5 * sl_ * sol_.w(sl_ * z); }
double SuperpotentialSet::W(double z) const { return -2.0 * G(z) - lambda() * z; }
double SuperpotentialSet::B(double z) const { return jets(z, 0).B[0]; }
double SuperpotentialSet::R1(double z) const { return jets(z, 0).R1[0]; }
double SuperpotentialSet::R2(double z) const { return jets(z, 0).R2[0]; }

namespace {

Taylor w12_jet(const SuperpotentialSet& S, double z0, int order, double sign) {
    const double s = S.root_d();
    const SuperpotentialJets j = S.jets(z0, order);
    if (j.G[0] == 0.0) throw PoleError("W1, W2 undefined: G vanishes at z = " + std::to_string(z0));
    return -1.0 * j.G + sign * (j.Gz - s) / (2.0 * j.G);
}

}  // namespace

Taylor SuperpotentialSet::W1_jet(double z0, int order) const { return w12_jet(*this, z0, order, 1.0); }
Taylor SuperpotentialSet::W2_jet(double z0, int order) const { return w12_jet(*this, z0, order, -1.0); }

// ---------------------------------------------------------------- grid operators

cplx gauge_factor(const ErmakovSolution& sol, double x, double t) {
    const SigmaPoint s = sol.sigma(t);
    return std::polar(1.0 / std::sqrt(s.sigma), s.dsigma * x * x / (4.0 * s.sigma));
}

OperatorSet::OperatorSet(const SuperpotentialSet& S, const ErmakovSolution& sol, const Grid& grid, double t,
                         bool check_resolution)
    : S_(&S), grid_(grid), t_(t), check_(check_resolution) {
    if (!sol.window().contains(t)) throw RangeError("operator time outside the Ermakov window");
    const SigmaPoint sp = sol.sigma(t);
    sigma_ = sp.sigma;
    dsigma_ = sp.dsigma;
    const auto n = static_cast<size_t>(grid.n);
    z_.resize(n);
    G_.resize(n);
    Gz_.resize(n);
    W_.resize(n);
    B_.resize(n);
    R1_.resize(n);
    R2_.resize(n);
    chirp_.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const double x = grid.x(static_cast<int>(j));
        z_[j] = x / sigma_;
        const SuperpotentialJets s = S.jets(z_[j], 0);
        G_[j] = s.G[0];
        Gz_[j] = s.Gz[0];
        W_[j] = s.W[0];
        B_[j] = s.B[0];
        R1_[j] = s.R1[0];
        R2_[j] = s.R2[0];
        chirp_[j] = std::polar(1.0, dsigma_ * x * x / (4.0 * sigma_));
    }
}

OperatorSet::Vec OperatorSet::strip(const Vec& v) const {
    if (v.size() != chirp_.size()) throw DomainError("grid function size does not match the grid");
    Vec f(v.size());
    for (size_t j = 0; j < v.size(); ++j) f[j] = v[j] * std::conj(chirp_[j]);
    if (check_) check_resolution(f);
    return f;
}

void OperatorSet::check(const Vec& v) const {
    Vec f(v.size());
    for (size_t j = 0; j < v.size(); ++j) f[j] = v[j] * std::conj(chirp_[j]);
    check_resolution(f);
}

OperatorSet::Vec OperatorSet::dress(const Vec& f) const {
    Vec v(f.size());
    for (size_t j = 0; j < f.size(); ++j) v[j] = f[j] * chirp_[j];
    return v;
}

OperatorSet::Vec OperatorSet::dz(const Vec& f) const {
    Vec d = fd_d1(grid_, f);
    for (auto& c : d) c *= sigma_;
    return d;
}

OperatorSet::Vec OperatorSet::dzz(const Vec& f) const {
    Vec d = fd_d2(grid_, f);
    for (auto& c : d) c *= sigma_ * sigma_;
    return d;
}

OperatorSet::Vec OperatorSet::schrodinger_like(const Vec& v, const std::vector<double>& potential) const {
    const Vec f = strip(v);
    Vec r = dzz(f);
    for (size_t j = 0; j < f.size(); ++j) r[j] = -r[j] + potential[j] * f[j];
    return dress(r);
}

OperatorSet::Vec OperatorSet::first_order(const Vec& v, double sign, const std::vector<double>& F) const {
    const Vec f = strip(v);
    Vec r = dz(f);
    for (size_t j = 0; j < f.size(); ++j) r[j] = sign * r[j] + F[j] * f[j];
    return dress(r);
}

OperatorSet::Vec OperatorSet::I0(const Vec& v) const {
    std::vector<double> p(z_.size());
    for (size_t j = 0; j < p.size(); ++j) p[j] = z_[j] * z_[j];
    return schrodinger_like(v, p);
}

OperatorSet::Vec OperatorSet::I1(const Vec& v) const {
    std::vector<double> p(z_.size());
    for (size_t j = 0; j < p.size(); ++j) p[j] = z_[j] * z_[j] + R1_[j];
    return schrodinger_like(v, p);
}

OperatorSet::Vec OperatorSet::I2(const Vec& v) const {
    std::vector<double> p(z_.size());
    for (size_t j = 0; j < p.size(); ++j) p[j] = z_[j] * z_[j] + R2_[j];
    return schrodinger_like(v, p);
}

void OperatorSet::need_w12() const {
    if (!W1_.empty()) return;
    for (size_t j = 0; j < G_.size(); ++j)
        if (G_[j] == 0.0 || (j > 0 && (G_[j] > 0.0) != (G_[j - 1] > 0.0)))
            throw PoleError("M1, M2 undefined: G changes sign near z = " + std::to_string(z_[j]));
    const double e1 = S_->eps1();
    W1_.resize(G_.size());
    W2_.resize(G_.size());
    aux_.resize(G_.size());
    for (size_t j = 0; j < G_.size(); ++j) {
        const Taylor w1 = S_->W1_jet(z_[j], 1);
        W1_[j] = w1[0];
        W2_[j] = S_->W2_jet(z_[j], 0)[0];
        aux_[j] = w1[0] * w1[0] - w1[1] + e1;
    }
}

OperatorSet::Vec OperatorSet::Iaux(const Vec& v) const {
    need_w12();
    return schrodinger_like(v, aux_);
}

OperatorSet::Vec OperatorSet::Qdag(const Vec& v) const { return first_order(v, 1.0, W_); }
OperatorSet::Vec OperatorSet::Q(const Vec& v) const { return first_order(v, -1.0, W_); }
OperatorSet::Vec OperatorSet::M1dag(const Vec& v) const {
    need_w12();
    return first_order(v, 1.0, W1_);
}
OperatorSet::Vec OperatorSet::M1(const Vec& v) const {
    need_w12();
    return first_order(v, -1.0, W1_);
}
OperatorSet::Vec OperatorSet::M2dag(const Vec& v) const {
    need_w12();
    return first_order(v, 1.0, W2_);
}
OperatorSet::Vec OperatorSet::M2(const Vec& v) const {
    need_w12();
    return first_order(v, -1.0, W2_);
}

OperatorSet::Vec OperatorSet::M(const Vec& v) const {
    const Vec f = strip(v);
    Vec r = dzz(f);
    const Vec d = dz(f);
    for (size_t j = 0; j < f.size(); ++j) r[j] += 2.0 * G_[j] * d[j] + (B_[j] + 2.0 * Gz_[j]) * f[j];
    return dress(r);
}

OperatorSet::Vec OperatorSet::Mdag(const Vec& v) const {
    const Vec f = strip(v);
    Vec r = dzz(f);
    const Vec d = dz(f);
    for (size_t j = 0; j < f.size(); ++j) r[j] += -2.0 * G_[j] * d[j] + B_[j] * f[j];
    return dress(r);
}

OperatorSet::Vec OperatorSet::Adag(const Vec& v) const { return Qdag(M(v)); }
OperatorSet::Vec OperatorSet::A(const Vec& v) const { return Mdag(Q(v)); }

double OperatorSet::eigen_residual(const Vec& v, double Lambda) const {
    Vec r = I1(v);
    for (size_t j = 0; j < r.size(); ++j) r[j] -= Lambda * v[j];
    return norm(grid_, r) / norm(grid_, v);
}

namespace {

GridFunction apply_with(const SuperpotentialSet& S, const GridFunction& psi,
                        OperatorSet::Vec (OperatorSet::*op)(const OperatorSet::Vec&) const) {
    if (!psi.sol) throw DomainError("grid function has no associated Ermakov solution");
    const OperatorSet ops(S, *psi.sol, psi.grid, psi.t);
    ops.check(psi.v);
    GridFunction out{psi.grid, psi.t, psi.sol, (ops.*op)(psi.v)};
    return out;
}

}  // namespace

GridFunction apply_I1(const SuperpotentialSet& S, const GridFunction& psi) { return apply_with(S, psi, &OperatorSet::I1); }
GridFunction apply_Qdag(const SuperpotentialSet& S, const GridFunction& psi) {
    return apply_with(S, psi, &OperatorSet::Qdag);
}
GridFunction apply_Q(const SuperpotentialSet& S, const GridFunction& psi) { return apply_with(S, psi, &OperatorSet::Q); }
GridFunction apply_M1dag(const SuperpotentialSet& S, const GridFunction& psi) {
    return apply_with(S, psi, &OperatorSet::M1dag);
}
GridFunction apply_M1(const SuperpotentialSet& S, const GridFunction& psi) { return apply_with(S, psi, &OperatorSet::M1); }
GridFunction apply_M2dag(const SuperpotentialSet& S, const GridFunction& psi) {
    return apply_with(S, psi, &OperatorSet::M2dag);
}
GridFunction apply_M2(const SuperpotentialSet& S, const GridFunction& psi) { return apply_with(S, psi, &OperatorSet::M2); }
GridFunction apply_Adag(const SuperpotentialSet& S, const GridFunction& psi) {
    return apply_with(S, psi, &OperatorSet::Adag);
}
GridFunction apply_A(const SuperpotentialSet& S, const GridFunction& psi) { return apply_with(S, psi, &OperatorSet::A); }

double eigen_residual(const SuperpotentialSet& S, const GridFunction& psi, double Lambda) {
    if (!psi.sol) throw DomainError("grid function has no associated Ermakov solution");
    const OperatorSet ops(S, *psi.sol, psi.grid, psi.t);
    ops.check(psi.v);
    return ops.eigen_residual(psi.v, Lambda);
}

std::string to_string(ModeKind k) {
    switch (k) {
        case ModeKind::AnnihilatedByA: return "annihilated-by-A";
        case ModeKind::AnnihilatedByAdag: return "annihilated-by-A-dagger";
        case ModeKind::Both: return "both";
        default: return "neither";
    }
}

// ---------------------------------------------------------------- analytic modes

AnalyticMode raise(const SuperpotentialSet& S, const AnalyticMode& m) {
    const SuperpotentialSet* sp = &S;
    auto K = m.K;
    AnalyticMode r;
    r.K = [sp, K](double z0, int order) {
        const Taylor k = K(z0, order + 3);
        const SuperpotentialJets s = sp->jets(z0, order + 1);
        const Taylor k1 = k.derivative();
        const Taylor MK = k1.derivative() + 2.0 * s.G * k1 + (s.B + 2.0 * s.Gz) * k;
        return (MK.derivative() + s.W * MK).truncated(order);
    };
    r.Lambda = m.Lambda + 2.0 * S.lambda();
    r.label = m.label + "+";
    r.level = m.level + 1;
    return r;
}

AnalyticMode lower(const SuperpotentialSet& S, const AnalyticMode& m) {
    const SuperpotentialSet* sp = &S;
    auto K = m.K;
    AnalyticMode r;
    r.K = [sp, K](double z0, int order) {
        const Taylor k = K(z0, order + 3);
        const SuperpotentialJets s = sp->jets(z0, order + 2);
        const Taylor QK = -1.0 * k.derivative() + s.W * k;
        const Taylor d1 = QK.derivative();
        return (d1.derivative() - 2.0 * s.G * d1 + s.B * QK).truncated(order);
    };
    r.Lambda = m.Lambda - 2.0 * S.lambda();
    r.label = m.label + "-";
    r.level = m.level - 1;
    return r;
}

namespace {

// Value of K at z; values beyond the core region that cannot be represented
// are negligible and returned as 0. Inside the core a failure yields NaN.
double profile_value(const std::function<Taylor(double, int)>& K, double z, double lambda) {
    const bool core = std::abs(std::sqrt(lambda) * z) <= kCoreY;
    try {
        const double v = K(z, 0)[0];
        if (std::isfinite(v)) return v;
    } catch (const std::domain_error&) {
    } catch (const PoleError&) {
    }
    return core ? std::numeric_limits<double>::quiet_NaN() : 0.0;
}

std::vector<double> profile_on_grid(const AnalyticMode& m, const Grid& grid, double sigma, double lambda) {
    std::vector<double> k(static_cast<size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j) k[j] = profile_value(m.K, grid.x(j) / sigma, lambda);
    return k;
}

GridFunction dress_profile(const std::vector<double>& k, std::shared_ptr<const ErmakovSolution> sol, const Grid& grid,
                           double t) {
    GridFunction g{grid, t, sol, std::vector<cplx>(k.size())};
    for (int j = 0; j < grid.n; ++j) g.v[j] = gauge_factor(*sol, grid.x(j), t) * k[j];
    return g;
}

double profile_norm(const Grid& grid, const std::vector<double>& k, double sigma, double x_cut) {
    double s = 0.0;
    for (int j = 0; j < grid.n; ++j) {
        if (std::abs(grid.x(j)) > x_cut) continue;
        s += k[j] * k[j];
    }
    return std::sqrt(s * grid.h / sigma);
}

}  // namespace

GridFunction sample(const AnalyticMode& m, std::shared_ptr<const ErmakovSolution> sol, const Grid& grid, double t,
                    bool normalize) {
    if (!sol) throw DomainError("sampling requires an Ermakov solution");
    if (!sol->window().contains(t)) throw RangeError("sampling time outside the Ermakov window");
    // lambda only decides the core region; use the widest one available
    const double sigma = sol->sigma(t).sigma;
    std::vector<double> k(static_cast<size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j) {
        const double z = grid.x(j) / sigma;
        try {
            k[j] = m.K(z, 0)[0];
        } catch (const std::domain_error&) {
            k[j] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    GridFunction g = dress_profile(k, sol, grid, t);
    if (normalize) g.normalize();
    return g;
}

// ---------------------------------------------------------------- Okamoto numerators

ExactPolynomial okamoto_mode_numerator(int M, bool upper) {
    if (M < 1) throw DomainError("Okamoto zero modes: M must be at least 1");
    const ExactPolynomial A = okamoto(M), B = okamoto(M + 1);
    const ExactPolynomial dA = A.derivative(), d2A = dA.derivative(), dB = B.derivative();
    const ExactPolynomial y = ExactPolynomial::monomial(1);
    const mpq_class c = mpq_class(6 * M + (upper ? 4 : 2), 3);
    const ExactPolynomial drift = mpq_class(-1) * (y * A * B) - mpq_class(3) * (dB * A) + mpq_class(3) * (dA * B);

    const int D = (M + 1) * (M + 1) + 3;
    std::vector<ExactPolynomial> images;
    int rows = 0;
    for (int j = 0; j <= D; ++j) {
        const ExactPolynomial P = ExactPolynomial::monomial(j);
        const ExactPolynomial dP = P.derivative(), d2P = dP.derivative();
        const ExactPolynomial wr = dP * A - P * dA;
        ExactPolynomial e = mpq_class(3) * (B * ((d2P * A - P * d2A) * A - mpq_class(2) * (dA * wr))) +
                            mpq_class(2) * (drift * wr) + (mpq_class(3) * c) * (P * A * A * B);
        rows = std::max(rows, e.degree() + 1);
        images.push_back(std::move(e));
    }
    const int cols = D + 1;
    std::vector<std::vector<mpq_class>> m(static_cast<size_t>(rows), std::vector<mpq_class>(static_cast<size_t>(cols)));
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m[i][j] = images[j].coeff(i);

    std::vector<int> pivot_col;
    int r = 0;
    for (int col = 0; col < cols && r < rows; ++col) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][col] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(m[r], m[p]);
        const mpq_class inv = 1 / m[r][col];
        for (int k = col; k < cols; ++k) m[r][k] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][col] == 0) continue;
            const mpq_class f = m[i][col];
            for (int k = col; k < cols; ++k) m[i][k] -= f * m[r][k];
        }
        pivot_col.push_back(col);
        ++r;
    }
    if (cols - r != 1)
        throw ConsistencyError("Okamoto zero mode: nullspace dimension " + std::to_string(cols - r) + " (expected 1)");
    int free_col = 0;
    for (int col = 0, k = 0; col < cols; ++col) {
        if (k < static_cast<int>(pivot_col.size()) && pivot_col[k] == col) {
            ++k;
            continue;
        }
        free_col = col;
    }
    std::vector<mpq_class> coeffs(static_cast<size_t>(cols), 0);
    coeffs[free_col] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) coeffs[pivot_col[i]] = -m[i][free_col];

    // primitive integer polynomial with positive leading coefficient
    mpz_class den = 1, num = 0;
    for (const auto& q : coeffs)
        if (q != 0) den = lcm(den, mpz_class(q.get_den()));
    for (auto& q : coeffs) {
        q *= den;
        if (q != 0) num = gcd(num, mpz_class(q.get_num()));
    }
    ExactPolynomial P(coeffs);
    mpq_class scale = mpq_class(1) / mpq_class(num);
    if (P.leading() < 0) scale = -scale;
    return P * scale;
}

// ---------------------------------------------------------------- zero modes

namespace {

using Jet = std::function<Taylor(double, int)>;

// y-profile to z-profile
Jet in_z(double sl, Jet f) {
    return [sl, f](double z0, int order) { return f(sl * z0, order).scaled_argument(sl); };
}

AnalyticMode make_mode(Jet K, double Lambda, std::string label) {
    AnalyticMode m;
    m.K = std::move(K);
    m.Lambda = Lambda;
    m.label = std::move(label);
    return m;
}

// phi_{0;1} = e^{int W} and Phi_{0;3} = [eps2 + 2 lambda - 2G^2 - 2 lambda z G + G_z - s] e^{-int W}
// in the division-free form; int W dz = -L - y^2/2.
void add_common(const SuperpotentialSet& S, std::vector<AnalyticMode>& out) {
    const SuperpotentialSet* sp = &S;
    const double sl = std::sqrt(S.lambda()), lam = S.lambda();
    const PainleveSolution sol = S.solution();
    auto intW = [sol, sl, lam](double z0, int order) {
        const Taylor z = Taylor::variable(order, z0);
        return -1.0 * sol.log_weight_jet(sl * z0, order).scaled_argument(sl) - 0.5 * lam * z * z;
    };
    out.push_back(make_mode([intW](double z0, int o) { return exp(intW(z0, o)); }, 0.0, "phi0;1"));
    double s = 0.0, e2 = S.gamma();
    try {
        s = S.root_d();
        e2 = S.eps2();
    } catch (const DomainError&) {
        return;
    }
    out.push_back(make_mode(
        [sp, intW, s, e2, lam](double z0, int o) {
            const SuperpotentialJets j = sp->jets(z0, o);
            const Taylor pre = (e2 + 2.0 * lam - s) - 2.0 * j.G * j.G - 2.0 * lam * j.z * j.G + j.Gz;
            return pre * exp(-1.0 * intW(z0, o));
        },
        -2.0 * lam, "Phi0;3"));
}

// All six closed forms; requires G without real zeros.
void add_generic(const SuperpotentialSet& S, std::vector<AnalyticMode>& out) {
    const SuperpotentialSet* sp = &S;
    const double sl = std::sqrt(S.lambda()), lam = S.lambda();
    const double s = S.root_d(), e1 = S.eps1(), e2 = S.eps2();
    const PainleveSolution sol = S.solution();

    // I(z) = int_0^z dz'/G
    auto I = [sp, s](double z0, int order) {
        double base = 0.0;
        if (s != 0.0 && z0 != 0.0)
            base = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                [sp](double z) { return 1.0 / sp->G(z); }, 0.0, z0, 15, 1e-13);
        if (order == 0) return Taylor(0, base);
        return (1.0 / sp->jets(z0, order - 1).G).integral(base);
    };
    auto halfL = [sol, sl](double z0, int order) {
        return 0.5 * sol.log_weight_jet(sl * z0, order).scaled_argument(sl);
    };
    auto logG = [sp](double z0, int order) {
        const Taylor G = sp->jets(z0, order).G;
        return G[0] < 0.0 ? log(-1.0 * G) : log(G);
    };
    // int W1 = -L/2 + ln|G|/2 - s I/2,  int W2 = -L/2 - ln|G|/2 + s I/2
    auto intW1 = [=](double z0, int o) { return -1.0 * halfL(z0, o) + 0.5 * logG(z0, o) - 0.5 * s * I(z0, o); };
    auto intW2 = [=](double z0, int o) { return -1.0 * halfL(z0, o) - 0.5 * logG(z0, o) + 0.5 * s * I(z0, o); };
    auto intW = [=](double z0, int o) {
        const Taylor z = Taylor::variable(o, z0);
        return -2.0 * halfL(z0, o) - 0.5 * lam * z * z;
    };

    // W1 + W2 = -2G is used in place of the sum, which cancels badly in the tails
    out.push_back(make_mode([=](double z0, int o) { return exp(intW(z0, o)); }, 0.0, "phi0;1"));
    out.push_back(make_mode(
        [=](double z0, int o) { return (sp->jets(z0, o).W - sp->W2_jet(z0, o)) * exp(-1.0 * intW2(z0, o)); },
        e2 + 2.0 * lam, "phi0;2"));
    out.push_back(make_mode(
        [=](double z0, int o) {
            const SuperpotentialJets j = sp->jets(z0, o);
            const Taylor pre = 2.0 * j.G * j.G + 2.0 * lam * j.z * j.G - j.Gz - s;
            return pre * exp(-1.0 * intW1(z0, o));
        },
        e1 + 2.0 * lam, "phi0;3"));
    out.push_back(make_mode([=](double z0, int o) { return exp(intW1(z0, o)); }, e1, "Phi0;1"));
    out.push_back(make_mode([=](double z0, int o) { return -2.0 * sp->jets(z0, o).G * exp(intW2(z0, o)); }, e2,
                            "Phi0;2"));
    out.push_back(make_mode(
        [=](double z0, int o) {
            const SuperpotentialJets j = sp->jets(z0, o);
            const Taylor pre = (e2 + 2.0 * lam - s) - 2.0 * j.G * j.G - 2.0 * lam * j.z * j.G + j.Gz;
            return pre * exp(-1.0 * intW(z0, o));
        },
        -2.0 * lam, "Phi0;3"));
}

bool nodeless_w(const PainleveSolution& sol) {
    double prev = 0.0;
    for (double y : linspace(-12.0, 12.0, 2401)) {
        const double w = sol.w(y);
        if (w == 0.0 || (prev != 0.0 && (w > 0.0) != (prev > 0.0))) return false;
        prev = w;
    }
    return true;
}

}  // namespace

std::vector<AnalyticMode> zero_mode_candidates(const SuperpotentialSet& S) {
    std::vector<AnalyticMode> out;
    const double sl = std::sqrt(S.lambda()), lam = S.lambda(), gam = S.gamma();
    const PainleveSolution sol = S.solution();
    const HierarchyVariant& v = sol.hierarchy().variant;

    if (const auto* r = std::get_if<RiccatiGeneral>(&v); r && r->mu == 1)
        throw DomainError("zero modes are provided for the mu = -1 Riccati family only");

    if (std::holds_alternative<Erfc>(v) || (std::holds_alternative<RiccatiGeneral>(v) && nodeless_w(sol))) {
        add_generic(S, out);
        return out;
    }
    add_common(S, out);
    if (std::holds_alternative<RiccatiGeneral>(v) || std::holds_alternative<PseudoHermite>(v)) {
        // (w + 2y) e^{-y^2/2}
        out.push_back(make_mode(in_z(sl,
                                     [sol](double y0, int o) {
                                         const Taylor y = Taylor::variable(o, y0);
                                         return (sol.jet(y0, o) + 2.0 * y) * exp(-0.5 * y * y);
                                     }),
                                2.0 * (gam + lam), "phi0;2"));
    } else if (const auto* ok = std::get_if<Okamoto>(&v)) {
        const ExactPolynomial Bq = okamoto(ok->M + 1);
        for (bool upper : {false, true}) {
            const ExactPolynomial P = okamoto_mode_numerator(ok->M, upper);
            const double c = (6.0 * ok->M + (upper ? 4.0 : 2.0)) / 3.0;
            out.push_back(make_mode(in_z(sl,
                                         [P, Bq](double y0, int o) {
                                             const Taylor y = Taylor::variable(o, y0);
                                             return exp(-1.0 / 6.0 * y * y) * P.taylor(y0, o) / Bq.taylor(y0, o);
                                         }),
                                    c * lam, upper ? "phi0;2" : "phi0;3"));
        }
    } else if (const auto* nb = std::get_if<NonlinearBound>(&v)) {
        const int N = nb->N;
        const double r2 = std::sqrt(2.0);
        auto L = [sol](double y0, int o) { return sol.log_weight_jet(y0, o); };
        // e^{-L/2} eta_N(sqrt2 y)
        if (N > 0)
            out.push_back(make_mode(in_z(sl,
                                         [sol, L, N, r2](double y0, int o) {
                                             const BoundChainJets c = sol.bound_chain(r2 * y0, o);
                                             return exp(-0.5 * L(y0, o)) * c.eta[N].truncated(o).scaled_argument(r2);
                                         }),
                                    2.0 * lam * N, "Phi0;N"));
        // e^{L/2} P_N(sqrt2 y) / 2
        out.push_back(make_mode(in_z(sl,
                                     [sol, L, N, r2](double y0, int o) {
                                         const BoundChainJets c = sol.bound_chain(r2 * y0, o);
                                         return 0.5 * exp(0.5 * L(y0, o)) * c.P[N].truncated(o).scaled_argument(r2);
                                     }),
                                2.0 * lam * (N + 1), "phi0;N+1"));
    }
    return out;
}

ZeroModeSet zero_modes(const SuperpotentialSet& S, std::shared_ptr<const ErmakovSolution> sol, const Grid& grid,
                       double t) {
    if (!sol) throw DomainError("zero modes require an Ermakov solution");
    if (!sol->window().contains(t)) throw RangeError("zero-mode time outside the Ermakov window");
    const double sigma = sol->sigma(t).sigma, lam = S.lambda();
    const OperatorSet ops(S, *sol, grid, t);
    const double x_edge = std::min(-grid.x_min, grid.x_max());

    ZeroModeSet set;
    for (const AnalyticMode& cand : zero_mode_candidates(S)) {
        const std::vector<double> k = profile_on_grid(cand, grid, sigma, lam);
        bool finite = std::all_of(k.begin(), k.end(), [](double v) { return std::isfinite(v); });
        if (finite) {
            const double full = profile_norm(grid, k, sigma, x_edge), inner = profile_norm(grid, k, sigma, 0.8 * x_edge);
            finite = full > 0.0 && std::isfinite(full) && (full - inner) <= 1e-10 * full;
        }
        if (!finite) {
            set.infinite.push_back(cand.label);
            continue;
        }
        ZeroMode zm;
        zm.psi = dress_profile(k, sol, grid, t);
        zm.psi.normalize();
        ops.check(zm.psi.v);
        zm.Lambda = cand.Lambda;
        zm.label = cand.label;
        zm.analytic = cand;
        zm.node_count = node_count(k);
        zm.eigen_residual = ops.eigen_residual(zm.psi.v, zm.Lambda);
        if (!(zm.eigen_residual < kEigenTol))
            throw AccuracyError("zero mode " + cand.label + ": eigen-residual " + std::to_string(zm.eigen_residual) +
                                " exceeds " + std::to_string(kEigenTol) + "; refine the grid");

        // annihilation residuals from the analytic ladder actions
        const double knorm = profile_norm(grid, k, sigma, x_edge);
        const std::vector<double> a = profile_on_grid(lower(S, cand), grid, sigma, lam);
        const std::vector<double> ad = profile_on_grid(raise(S, cand), grid, sigma, lam);
        zm.residual_A = profile_norm(grid, a, sigma, x_edge) / knorm;
        zm.residual_Adag = profile_norm(grid, ad, sigma, x_edge) / knorm;
        const double tol = 1e-6 * std::pow(1.0 + std::abs(zm.Lambda) + 2.0 * lam, 1.5);
        const bool ka = zm.residual_A < tol, kad = zm.residual_Adag < tol;
        zm.kind = ka && kad ? ModeKind::Both : ka ? ModeKind::AnnihilatedByA : kad ? ModeKind::AnnihilatedByAdag
                                                                                   : ModeKind::Neither;

        // coincident candidates (degenerate factorization energies) are merged
        bool merged = false;
        for (ZeroMode& other : set.modes) {
            if (std::abs(other.Lambda - zm.Lambda) > 1e-9 * (1.0 + std::abs(zm.Lambda))) continue;
            if (std::abs(inner(other.psi, zm.psi)) > 1.0 - 1e-8) {
                other.label += "=" + zm.label;
                merged = true;
                break;
            }
        }
        if (!merged) set.modes.push_back(std::move(zm));
    }
    std::stable_sort(set.modes.begin(), set.modes.end(),
                     [](const ZeroMode& a, const ZeroMode& b) { return a.Lambda < b.Lambda; });
    return set;
}

// ---------------------------------------------------------------- sequences

Sequence generate_sequence(const SuperpotentialSet& S, const AnalyticMode& mode,
                           std::shared_ptr<const ErmakovSolution> sol, const Grid& grid, double t, int count) {
    if (count < 1) throw DomainError("sequence length must be positive");
    const OperatorSet ops(S, *sol, grid, t);
    const double sigma = sol->sigma(t).sigma, lam = S.lambda();
    const double x_edge = std::min(-grid.x_min, grid.x_max());

    Sequence seq;
    AnalyticMode cur = mode;
    std::vector<double> k = profile_on_grid(cur, grid, sigma, lam);
    for (int i = 0; i < count; ++i) {
        SequenceState st;
        st.psi = dress_profile(k, sol, grid, t);
        st.psi.normalize();
        ops.check(st.psi.v);
        st.Lambda = cur.Lambda;
        st.eigen_residual = ops.eigen_residual(st.psi.v, st.Lambda);
        st.analytic = cur;
        const double limit = i == 0 ? kEigenTol : kRaiseTol;
        if (!(st.eigen_residual < limit))
            throw AccuracyError("sequence level " + std::to_string(i) + ": eigen-residual " +
                                std::to_string(st.eigen_residual) + " exceeds " + std::to_string(limit) +
                                "; increase the number of grid points");
        seq.states.push_back(std::move(st));

        const AnalyticMode next = raise(S, cur);
        std::vector<double> kn = profile_on_grid(next, grid, sigma, lam);
        const double ratio = profile_norm(grid, kn, sigma, x_edge) / profile_norm(grid, k, sigma, x_edge);
        seq.termination_residual = ratio;
        if (ratio < kTerminateTol) {
            seq.terminated = true;
            break;
        }
        cur = next;
        k = std::move(kn);
    }
    return seq;
}

std::vector<std::vector<cplx>> random_test_functions(const OperatorSet& ops, double lambda, int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<cplx>> out;
    const double sl = std::sqrt(lambda);
    for (int c = 0; c < count; ++c) {
        cplx a[5];
        for (auto& v : a) v = cplx(u(rng), u(rng));
        const double y0 = u(rng), width = 0.8 + 0.4 * (u(rng) + 1.0) / 2.0;
        std::vector<cplx> f(static_cast<size_t>(ops.grid().n));
        for (int j = 0; j < ops.grid().n; ++j) {
            const double y = sl * ops.z()[j];
            cplx p = 0.0;
            for (int k = 4; k >= 0; --k) p = p * y + a[k];
            const double x = ops.grid().x(j);
            f[j] = p * std::exp(-0.5 * (y - y0) * (y - y0) / (width * width)) *
                   std::polar(1.0, ops.dsigma() * x * x / (4.0 * ops.sigma()));
        }
        out.push_back(std::move(f));
    }
    return out;
}

double shape_invariance_residual(const SuperpotentialSet& S, const OperatorSet& ops, int count, unsigned seed) {
    const double lam = S.lambda();
    const Grid& g = ops.grid();
    double worst = 0.0;
    for (const auto& f : random_test_functions(ops, lam, count, seed)) {
        const auto ad = ops.Adag(f);
        auto rhs = ops.I1(f);
        for (size_t j = 0; j < rhs.size(); ++j) rhs[j] += 2.0 * lam * f[j];
        const auto lhs = ops.I1(ad), r = ops.Adag(rhs);
        std::vector<cplx> d(lhs.size());
        for (size_t j = 0; j < d.size(); ++j) d[j] = lhs[j] - r[j];
        worst = std::max(worst, norm(g, d) / norm(g, ad));
    }
    return worst;
}

std::vector<std::vector<cplx>> gram_matrix(const std::vector<GridFunction>& states) {
    std::vector<std::vector<cplx>> g(states.size(), std::vector<cplx>(states.size()));
    for (size_t i = 0; i < states.size(); ++i)
        for (size_t j = 0; j < states.size(); ++j) g[i][j] = inner(states[i], states[j]);
    return g;
}

int node_count(const std::vector<double>& profile) {
    double top = 0.0;
    for (double v : profile) top = std::max(top, std::abs(v));
    if (top == 0.0) return 0;
    int nodes = 0, last = 0;
    for (double v : profile) {
        if (std::abs(v) < 1e-9 * top) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++nodes;
        last = s;
    }
    return nodes;
}

int node_count(const GridFunction& psi) {
    std::vector<cplx> f = psi.v;
    if (psi.sol)
        for (int j = 0; j < psi.grid.n; ++j) {
            const cplx g = gauge_factor(*psi.sol, psi.grid.x(j), psi.t);
            f[j] *= std::conj(g) / std::abs(g);
        }
    size_t jmax = 0;
    for (size_t j = 0; j < f.size(); ++j)
        if (std::abs(f[j]) > std::abs(f[jmax])) jmax = j;
    const cplx rot = f.empty() || f[jmax] == 0.0 ? cplx(1.0) : std::conj(f[jmax]) / std::abs(f[jmax]);
    std::vector<double> re(f.size());
    for (size_t j = 0; j < f.size(); ++j) re[j] = (f[j] * rot).real();
    return node_count(re);
}

std::pair<double, double> sigma_range(const ErmakovSolution& sol, double t0, double t1, int samples) {
    double lo = INFINITY, hi = 0.0;
    for (double t : linspace(t0, t1, samples)) {
        const double s = sol.sigma(t).sigma;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

double hierarchy_y_window(const Hierarchy& h) { return std::holds_alternative<Okamoto>(h.variant) ? 16.0 : 10.0; }

Grid default_grid(const ErmakovSolution& sol, double lambda, double y_window, double t0, double t1, int points) {
    const auto [lo, hi] = sigma_range(sol, t0, t1);
    (void)lo;
    return Grid::symmetric(y_window * hi / std::sqrt(lambda), points);
}

}  // namespace tdp
