#include "tdp/painleve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tdp/errors.hpp"
#include "tdp/specfun.hpp"

namespace tdp {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);
constexpr double kCertify = 1e-7;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

PainleveParams params_from_physical(const PhysicalParams& phys) {
    if (!(phys.lambda > 0.0)) throw DomainError("lambda must be positive");
    return {phys.gamma / phys.lambda + 1.0, 2.0 * phys.d / (phys.lambda * phys.lambda)};
}

std::string hierarchy_name(const Hierarchy& h) {
    std::ostringstream os;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RiccatiGeneral>) os << "riccati(mu=" << v.mu << ")";
            else if constexpr (std::is_same_v<T, Erfc>) os << "erfc(k=" << v.k << ")";
            else if constexpr (std::is_same_v<T, PseudoHermite>) os << "pseudo_hermite(N=" << v.N << ")";
            else if constexpr (std::is_same_v<T, Okamoto>) os << "okamoto(M=" << v.M << ")";
            else os << "nonlinear_bound(N=" << v.N << ", k=" << v.k << ")";
        },
        h.variant);
    return os.str();
}

PhysicalParams physical_params(const HierarchyVariant& v, double lambda, double gamma) {
    return std::visit(
        [&](const auto& h) -> PhysicalParams {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, RiccatiGeneral>) {
                const double s = lambda * (1 + h.mu) + h.mu * gamma;
                return {lambda, gamma, -s * s};
            } else if constexpr (std::is_same_v<T, Erfc>) {
                return {lambda, 0.0, 0.0};
            } else if constexpr (std::is_same_v<T, PseudoHermite>) {
                const double g = 2.0 * h.N * lambda;
                return {lambda, g, -g * g};
            } else if constexpr (std::is_same_v<T, Okamoto>) {
                return {lambda, (2.0 * h.M - 1.0) * lambda, -lambda * lambda / 9.0};
            } else {
                return {lambda, 2.0 * h.N * lambda, 0.0};
            }
        },
        v);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) v[j] = n == 1 ? a : a + (b - a) * j / (n - 1);
    return v;
}

double painleve_residual(const std::function<Taylor(double)>& jet2, const PainleveParams& p,
                         const std::vector<double>& ys) {
    double worst = 0.0;
    for (double y : ys) {
        const Taylor t = jet2(y);
        const double w = t[0], dw = t[1], d2w = 2.0 * t[2];
        const double num = dw * dw + 2.0 * p.beta;
        double singular;
        if (w == 0.0) {
            if (num != 0.0) throw PoleError("painleve residual: w vanishes at y = " + std::to_string(y));
            singular = 0.0;
        } else {
            singular = num / (2.0 * w);
        }
        const double rhs = singular + 1.5 * w * w * w + 4.0 * y * w * w + 2.0 * (y * y - p.alpha) * w;
        worst = std::max(worst, std::abs(d2w - rhs));
    }
    return worst;
}

namespace detail {

class SolutionImpl {
public:
    explicit SolutionImpl(Hierarchy h) : h_(std::move(h)), p_(params_from_physical(h_.phys)) {}
    virtual ~SolutionImpl() = default;
    virtual Taylor jet(double y0, int order) const = 0;
    virtual double log_weight(double y) const = 0;
    virtual BoundChainJets bound_chain(double, int) const {
        throw DomainError("bound-state chain requested for a non-bound-state hierarchy");
    }
    virtual double seed_amplitude() const { throw DomainError("seed amplitude requires a bound-state hierarchy"); }
    const Hierarchy& hierarchy() const { return h_; }
    const PainleveParams& params() const { return p_; }

private:
    Hierarchy h_;
    PainleveParams p_;
};

}  // namespace detail

namespace {

using detail::SolutionImpl;

// Real number m e^s for values beyond the double range.
struct Scaled {
    double m = 0.0, s = 0.0;
};

Scaled real_scaled(const ScaledComplex& c, double factor = 1.0) { return {c.mantissa.real() * factor, c.log_scale}; }

Scaled add(Scaled a, Scaled b) {
    if (a.m == 0.0) return b;
    if (b.m == 0.0) return a;
    const double s = std::max(a.s, b.s);
    return {a.m * std::exp(a.s - s) + b.m * std::exp(b.s - s), s};
}

Scaled scale(Scaled a, double f) { return {a.m * f, a.s}; }

class RiccatiImpl : public SolutionImpl {
public:
    RiccatiImpl(Hierarchy h, RiccatiGeneral r) : SolutionImpl(std::move(h)), r_(r) {
        c_ = hierarchy().phys.gamma / hierarchy().phys.lambda;
        if (r.mu != 1 && r.mu != -1) throw DomainError("riccati: mu must be +1 or -1");
        if (r.ka == 0.0 && r.kb == 0.0) throw DomainError("riccati: ka and kb cannot both vanish");
        // asymptotic sign test: u ~ |y|^p [ka g1 +- kb g2] at y -> +-infinity
        double g1, g2;
        if (r.mu == -1) {
            g1 = std::tgamma(0.5) / std::tgamma(0.5 * (1 + c_));
            g2 = std::tgamma(1.5) / std::tgamma(0.5 * (2 + c_));
        } else {
            g1 = std::tgamma(0.5) / std::tgamma(1 + 0.5 * c_);
            g2 = std::tgamma(1.5) / std::tgamma(0.5 * (3 + c_));
        }
        if (std::isfinite(g1) && std::isfinite(g2) && r.kb != 0.0) {
            const double right = r.ka * g1 + r.kb * g2, left = r.ka * g1 - r.kb * g2;
            if (right * left <= 0.0)
                throw ConstraintError("riccati: |ka/kb| violates the nodeless bound " + std::to_string(g2 / g1));
        }
        sign_ = u_and_du(0.0).first.m > 0 ? 1 : -1;
        for (double y : linspace(-6.0, 6.0, 2001))
            if (u_and_du(y).first.m * sign_ <= 0.0)
                throw SingularError("riccati: u has a real zero near y = " + std::to_string(y));
    }

    // u = ka u1 + kb u2 and u'
    std::pair<Scaled, Scaled> u_and_du(double y) const {
        const double y2 = y * y, c = c_;
        Scaled u1, u2, du1, du2;
        if (r_.mu == -1) {
            u1 = real_scaled(kummer_1F1_scaled(-0.5 * c, 0.5, -y2));
            du1 = real_scaled(kummer_1F1_scaled(1 - 0.5 * c, 1.5, -y2), 2 * c * y);
            const double a2 = 0.5 * (1 - c);
            const Scaled f = real_scaled(kummer_1F1_scaled(a2, 1.5, -y2));
            u2 = scale(f, y);
            du2 = add(f, real_scaled(kummer_1F1_scaled(a2 + 1, 2.5, -y2), -4.0 / 3.0 * a2 * y2));
        } else {
            u1 = real_scaled(kummer_1F1_scaled(1 + 0.5 * c, 0.5, y2));
            du1 = real_scaled(kummer_1F1_scaled(2 + 0.5 * c, 1.5, y2), 2 * (2 + c) * y);
            const double a2 = 0.5 * (3 + c);
            const Scaled f = real_scaled(kummer_1F1_scaled(a2, 1.5, y2));
            u2 = scale(f, y);
            du2 = add(f, real_scaled(kummer_1F1_scaled(a2 + 1, 2.5, y2), 2.0 / 3.0 * (3 + c) * y2));
        }
        return {add(scale(u1, r_.ka), scale(u2, r_.kb)), add(scale(du1, r_.ka), scale(du2, r_.kb))};
    }

    Scaled checked_u(double y, Scaled* du = nullptr) const {
        auto [u, d] = u_and_du(y);
        if (!(u.m * sign_ > 0.0)) throw SingularError("riccati: u vanishes at y = " + std::to_string(y));
        if (du) *du = d;
        return u;
    }

    Taylor jet(double y0, int order) const override {
        Scaled du;
        const Scaled u = checked_u(y0, &du);
        const double mu = r_.mu;
        Taylor w(order);
        w[0] = -(1.0 / mu) * (du.m / u.m) * std::exp(du.s - u.s);
        const double cst = -2.0 * (1.0 + params().alpha * mu);
        // (k+1) w_{k+1} = mu (w^2)_k + 2 mu (y w)_k + cst delta_k0
        for (int k = 0; k < order; ++k) {
            double sq = 0.0;
            for (int j = 0; j <= k; ++j) sq += w[j] * w[k - j];
            const double yw = y0 * w[k] + (k > 0 ? w[k - 1] : 0.0);
            w[k + 1] = (mu * sq + 2 * mu * yw + (k == 0 ? cst : 0.0)) / (k + 1);
        }
        return w;
    }

    double log_weight(double y) const override {
        const Scaled u = checked_u(y);
        const double lu = std::log(std::abs(u.m)) + u.s;
        return -lu / r_.mu;
    }

private:
    RiccatiGeneral r_;
    double c_;
    int sign_ = 1;
};

class ErfcImpl : public SolutionImpl {
public:
    ErfcImpl(Hierarchy h, double k) : SolutionImpl(std::move(h)), k2_(k * k) {
        if (!(k2_ > 0.0)) throw DomainError("erfc hierarchy: k must be nonzero");
        if (!(2.0 * kSqrt2Pi * k2_ < 1.0))
            throw ConstraintError("erfc hierarchy: requires 2 sqrt(2 pi) k^2 < 1 (got " +
                                  std::to_string(2.0 * kSqrt2Pi * k2_) + ")");
    }
    Taylor jet(double y0, int order) const override {
        const Taylor y = Taylor::variable(order, y0);
        return 2.0 * kSqrt2 * k2_ * exp(-(y * y)) / (1.0 - kSqrt2Pi * k2_ * erfc(y));
    }
    double log_weight(double y) const override { return std::log(1.0 - kSqrt2Pi * k2_ * std::erfc(y)); }

private:
    double k2_;
};

// w = lin y + B'/B - A'/A with polynomials A, B nodeless on the real line.
class RationalImpl : public SolutionImpl {
public:
    RationalImpl(Hierarchy h, ExactPolynomial A, ExactPolynomial B, double linear)
        : SolutionImpl(std::move(h)), A_(std::move(A)), B_(std::move(B)), lin_(linear) {
        if (real_root_count(A_) != 0 || real_root_count(B_) != 0)
            throw ConsistencyError("rational hierarchy: denominator polynomial has real zeros");
    }
    Taylor jet(double y0, int order) const override {
        const Taylor a = A_.taylor(y0, order + 1), b = B_.taylor(y0, order + 1);
        Taylor w = b.derivative() / b.truncated(order) - a.derivative() / a.truncated(order);
        w[0] += lin_ * y0;
        if (order >= 1) w[1] += lin_;
        return w;
    }
    double log_weight(double y) const override {
        return 0.5 * lin_ * y * y + std::log(std::abs(B_.eval(y))) - std::log(std::abs(A_.eval(y)));
    }

private:
    ExactPolynomial A_, B_;
    double lin_;
};

Taylor seed_eta_jet(double k, double xi0, int order) {
    const Taylor xi = Taylor::variable(order, xi0);
    return k * exp(-0.25 * (xi * xi)) / sqrt(1.0 - kSqrt2Pi * k * k * erfc(xi / kSqrt2));
}

// (eta, P, D) at level n from eta_n of order >= order + 1
void chain_step(const Taylor& eta_hi, int n, double xi0, Taylor& eta, Taylor& P, Taylor& D) {
    const int order = eta_hi.order() - 1;
    const Taylor de = eta_hi.derivative();
    eta = eta_hi.truncated(order);
    const Taylor xi = Taylor::variable(order, xi0);
    const Taylor e2 = eta * eta;
    P = xi * eta + 2.0 * e2 * eta - 2.0 * de;
    D = (n + 1.0) + 2.0 * eta * de - xi * e2 - 2.0 * e2 * e2;
    if (!(D[0] > 0.0))
        throw BranchError("backlund step: radicand not positive at xi = " + std::to_string(xi0) + " (level " +
                          std::to_string(n) + ")");
}

class BoundImpl : public SolutionImpl {
public:
    BoundImpl(Hierarchy h, int N, double k) : SolutionImpl(std::move(h)), N_(N) {
        if (N < 0) throw DomainError("nonlinear bound state: N must be non-negative");
        if (k == 0.0) throw DomainError("nonlinear bound state: k must be nonzero");
        const double bound = 1.0 / (2.0 * kSqrt2Pi * factorial(N));
        if (!(k * k < bound))
            throw BranchError("nonlinear bound state: k^2 = " + std::to_string(k * k) + " exceeds 1/(2 sqrt(2 pi) N!) = " +
                              std::to_string(bound));
        k0_ = k * std::sqrt(factorial(N));
        // radicand scan over the certification window
        for (double xi : linspace(-8.5, 8.5, 2001)) bound_chain(xi, 0);
    }

    BoundChainJets bound_chain(double xi0, int order) const override {
        BoundChainJets c;
        c.eta.resize(N_ + 1);
        c.P.resize(N_ + 1);
        c.D.resize(N_ + 1);
        Taylor hi = seed_eta_jet(k0_, xi0, order + N_ + 1);
        for (int n = 0; n <= N_; ++n) {
            chain_step(hi, n, xi0, c.eta[n], c.P[n], c.D[n]);
            if (n < N_) hi = c.P[n] / (2.0 * sqrt(c.D[n]));
        }
        return c;
    }

    double seed_amplitude() const override { return k0_; }

    Taylor jet(double y0, int order) const override {
        const BoundChainJets c = bound_chain(kSqrt2 * y0, order);
        const Taylor e = c.eta[N_].truncated(order).scaled_argument(kSqrt2);
        return 2.0 * kSqrt2 * e * e;
    }

    double log_weight(double y) const override {
        double L = std::log(1.0 - kSqrt2Pi * k0_ * k0_ * std::erfc(y));
        if (N_ > 0) {
            const BoundChainJets c = bound_chain(kSqrt2 * y, 0);
            for (int n = 0; n < N_; ++n) L += std::log(c.D[n][0]);
        }
        return L;
    }

private:
    int N_;
    double k0_;
};

PainleveSolution certified(std::shared_ptr<const SolutionImpl> impl) {
    PainleveSolution sol(std::move(impl));
    const double r = painleve_residual(sol);
    if (!(r < kCertify))
        throw AccuracyError(hierarchy_name(sol.hierarchy()) + ": Painleve IV residual " + std::to_string(r) +
                            " exceeds certification tolerance");
    return sol;
}

}  // namespace

PainleveSolution::PainleveSolution(std::shared_ptr<const detail::SolutionImpl> impl) : impl_(std::move(impl)) {}

const Hierarchy& PainleveSolution::hierarchy() const { return impl_->hierarchy(); }
PainleveParams PainleveSolution::params() const { return impl_->params(); }
Taylor PainleveSolution::jet(double y0, int order) const { return impl_->jet(y0, order); }
double PainleveSolution::w(double y) const { return impl_->jet(y, 0)[0]; }
std::pair<double, double> PainleveSolution::w_dw(double y) const {
    const Taylor t = impl_->jet(y, 1);
    return {t[0], t[1]};
}
double PainleveSolution::log_weight(double y) const { return impl_->log_weight(y); }
Taylor PainleveSolution::log_weight_jet(double y0, int order) const {
    if (order == 0) return Taylor(0, impl_->log_weight(y0));
    return impl_->jet(y0, order - 1).integral(impl_->log_weight(y0));
}
BoundChainJets PainleveSolution::bound_chain(double xi0, int order) const { return impl_->bound_chain(xi0, order); }
double PainleveSolution::seed_amplitude() const { return impl_->seed_amplitude(); }

double painleve_residual(const PainleveSolution& sol, double y_max, int points) {
    return painleve_residual([&](double y) { return sol.jet(y, 2); }, sol.params(), linspace(-y_max, y_max, points));
}

PainleveSolution riccati_solution(const PhysicalParams& phys, int mu, double ka, double kb) {
    const RiccatiGeneral r{mu, ka, kb};
    const PhysicalParams p = physical_params(r, phys.lambda, phys.gamma);
    params_from_physical(p);
    return certified(std::make_shared<RiccatiImpl>(Hierarchy{r, p}, r));
}

PainleveSolution erfc_solution(double k, double lambda) {
    const Erfc e{k};
    const PhysicalParams p = physical_params(e, lambda);
    params_from_physical(p);
    return certified(std::make_shared<ErfcImpl>(Hierarchy{e, p}, k));
}

PainleveSolution pseudo_hermite_solution(int N, double lambda) {
    if (N < 0) throw DomainError("pseudo-Hermite hierarchy: N must be non-negative");
    const PseudoHermite ph{N};
    const PhysicalParams p = physical_params(ph, lambda);
    params_from_physical(p);
    return certified(
        std::make_shared<RationalImpl>(Hierarchy{ph, p}, ExactPolynomial{1}, pseudo_hermite(2 * N), 0.0));
}

PainleveSolution okamoto_solution(int M, double lambda) {
    if (M < 1) throw DomainError("Okamoto hierarchy: M must be at least 1");
    const Okamoto o{M};
    const PhysicalParams p = physical_params(o, lambda);
    params_from_physical(p);
    return certified(std::make_shared<RationalImpl>(Hierarchy{o, p}, okamoto(M), okamoto(M + 1), -2.0 / 3.0));
}

PainleveSolution nonlinear_bound_solution(int N, double k, double lambda) {
    const NonlinearBound nb{N, k};
    const PhysicalParams p = physical_params(nb, lambda);
    params_from_physical(p);
    return certified(std::make_shared<BoundImpl>(Hierarchy{nb, p}, N, k));
}

PainleveSolution make_solution(const Hierarchy& h) {
    const PhysicalParams expect = physical_params(h.variant, h.phys.lambda, h.phys.gamma);
    if (!close(expect.gamma, h.phys.gamma) || !close(expect.d, h.phys.d))
        throw DomainError(hierarchy_name(h) + ": physical parameters inconsistent with the hierarchy (expected gamma = " +
                          std::to_string(expect.gamma) + ", d = " + std::to_string(expect.d) + ")");
    return std::visit(
        [&](const auto& v) -> PainleveSolution {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RiccatiGeneral>) return riccati_solution(h.phys, v.mu, v.ka, v.kb);
            else if constexpr (std::is_same_v<T, Erfc>) return erfc_solution(v.k, h.phys.lambda);
            else if constexpr (std::is_same_v<T, PseudoHermite>) return pseudo_hermite_solution(v.N, h.phys.lambda);
            else if constexpr (std::is_same_v<T, Okamoto>) return okamoto_solution(v.M, h.phys.lambda);
            else return nonlinear_bound_solution(v.N, v.k, h.phys.lambda);
        },
        h.variant);
}

EtaLevel bound_state_seed(double k) {
    if (k == 0.0) throw DomainError("bound-state seed: k must be nonzero");
    if (!(2.0 * kSqrt2Pi * k * k < 1.0)) throw BranchError("bound-state seed: requires k^2 < 1/(2 sqrt(2 pi))");
    return {0, k, [k](double xi0, int order) { return seed_eta_jet(k, xi0, order); }};
}

EtaLevel backlund_step(const EtaLevel& level, double xi_min, double xi_max) {
    const int n = level.n;
    auto prev = level.eta;
    auto next = [prev, n](double xi0, int order) {
        Taylor eta, P, D;
        chain_step(prev(xi0, order + 1), n, xi0, eta, P, D);
        return P / (2.0 * sqrt(D));
    };
    for (double xi : linspace(xi_min, xi_max, 2001)) next(xi, 0);
    return {n + 1, level.k / std::sqrt(n + 1.0), next};
}

}  // namespace tdp
