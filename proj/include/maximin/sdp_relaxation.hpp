/**
 * @file sdp_relaxation.hpp
 * @brief The semidefinite relaxation of the maximin dispersion problem, a
 * self-contained first-order solver for it, and the SDP-based rounding.
 *
 * Lifting x x^T to X gives
 *
 *     maximize   min_i  A_i . M,     M = [[X, x], [x^T, 1]]
 *     subject to M >= 0 (PSD),  sum_j X_jj^(p/2) <= 1,
 *
 * with A_i = w_i [[I, -x^i], [-(x^i)^T, ||x^i||^2]]. For p = inf the diagonal
 * constraint reads max_j X_jj <= 1.
 *
 * The solver ascends the softmin surrogate -mu log sum_i exp(-A_i.M / mu)
 * by accelerated projected gradient with backtracking, halving mu whenever
 * progress stalls. By default it works on (x, diag X) only, where the
 * feasible set has an exact projection; a lifted variant that projects the
 * whole matrix with Dykstra's alternating projections is kept for checks.
 */

#ifndef MAXIMIN_SDP_RELAXATION_HPP
#define MAXIMIN_SDP_RELAXATION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "maximin/core.hpp"
#include "maximin/linalg.hpp"
#include "maximin/sign_rounding.hpp"

namespace maximin {

/// Symmetric (n+1)x(n+1) matrix [[X, x], [x^T, corner]].
class LiftedMatrix {
public:
    LiftedMatrix() = default;
    explicit LiftedMatrix(std::size_t n) : m_(n + 1) { m_(n, n) = 1.0; }
    explicit LiftedMatrix(SymMatrix m) : m_(std::move(m)) {
        if (m_.dim() < 2) throw std::invalid_argument("LiftedMatrix: dimension must be at least 2");
    }

    /// [[x x^T, x], [x^T, 1]]
    static LiftedMatrix rank_one(std::span<const double> x) {
        LiftedMatrix l(x.size());
        const std::size_t n = x.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) l.m_.set_sym(i, j, x[i] * x[j]);
            l.m_.set_sym(i, n, x[i]);
        }
        return l;
    }

    std::size_t n() const { return m_.dim() - 1; }
    double X(std::size_t i, std::size_t j) const { return m_(i, j); }
    double x(std::size_t j) const { return m_(j, n()); }
    double corner() const { return m_(n(), n()); }

    Vector diagonal() const {
        Vector d(n());
        for (std::size_t j = 0; j < n(); ++j) d[j] = m_(j, j);
        return d;
    }
    Vector column() const {
        Vector c(n());
        for (std::size_t j = 0; j < n(); ++j) c[j] = m_(j, n());
        return c;
    }

    const SymMatrix& matrix() const { return m_; }
    SymMatrix& matrix() { return m_; }

private:
    SymMatrix m_;
};

/// One affine piece A_i . M of the relaxed objective; `matrix` includes the weight.
struct SdpForm {
    SymMatrix matrix;
    double weight;

    double evaluate(const LiftedMatrix& m) const { return inner(matrix, m.matrix()); }
};

inline std::vector<SdpForm> build_sdp_objective(const ProblemInstance& inst) {
    const std::size_t n = inst.n();
    std::vector<SdpForm> forms;
    forms.reserve(inst.m());
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const double w = inst.weight(i);
        const auto xi = inst.point(i);
        SymMatrix a(n + 1);
        for (std::size_t j = 0; j < n; ++j) {
            a(j, j) = w;
            a.set_sym(j, n, -w * xi[j]);
        }
        a(n, n) = w * inst.point_norm(i) * inst.point_norm(i);
        forms.push_back({std::move(a), w});
    }
    return forms;
}

namespace detail {

/// A_i . M without materializing A_i.
inline double form_value(const ProblemInstance& inst, std::size_t i, const SymMatrix& m) {
    const std::size_t n = inst.n();
    const auto xi = inst.point(i);
    double tr = 0.0;
    double cross = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        tr += m(j, j);
        cross += xi[j] * (m(j, n) + m(n, j));
    }
    const double r = inst.point_norm(i);
    return inst.weight(i) * (tr - cross + r * r * m(n, n));
}

/// Root of an increasing f on [lo, hi] with f(lo) <= 0 <= f(hi). `f` returns
/// {value, derivative}. A Newton step is replaced by bisection when it leaves
/// the bracket or fails to halve the step before last, so high powers such as
/// t^998 (slow linear Newton from above) and overflow to inf/NaN stay cheap.
template <typename F>
double increasing_root(F&& f, double lo, double hi, double start) {
    double t = start;
    double step_old = hi - lo;
    double step = step_old;
    for (int it = 0; it < 400; ++it) {
        const auto [v, dv] = f(t);
        if (v == 0.0) return t;
        if (v > 0.0) hi = t; else lo = t;
        if (hi - lo <= 1e-15 * hi) break;
        double next = t - v / dv;
        if (!(next > lo && next < hi) || std::abs(next - t) > 0.5 * std::abs(step_old)) next = 0.5 * (lo + hi);
        step_old = step;
        step = next - t;
        t = next;
    }
    return t;
}

/**
 * Multiplier lambda >= 0 for a decreasing excess(lambda) with excess(0) > 0:
 * returns a lambda on the feasible side (excess <= 0) within `tol` of zero,
 * found by Illinois false position in log(lambda).
 */
template <typename Excess>
double find_multiplier(Excess&& excess, double tol) {
    double hi = 0.0;  // log lambda
    double f_hi = excess(1.0);
    double lo = hi;
    double f_lo = f_hi;
    int guard = 0;
    if (f_hi > 0.0) {
        while (f_hi > 0.0) {
            if (++guard > 400) throw NumericalError("projection: cannot bracket multiplier");
            lo = hi;
            f_lo = f_hi;
            hi += 2.0;
            f_hi = excess(std::exp(hi));
        }
    } else {
        while (f_lo <= 0.0) {
            if (f_lo >= -tol) return std::exp(lo);
            if (++guard > 400) return 0.0;
            hi = lo;
            f_hi = f_lo;
            lo -= 2.0;
            f_lo = excess(std::exp(lo));
        }
    }
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        if (f_hi >= -tol) return std::exp(hi);
        double mid = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        const double f = excess(std::exp(mid));
        if (f <= 0.0) {
            hi = mid;
            f_hi = f;
            if (side == -1) f_lo *= 0.5;
            side = -1;
        } else {
            lo = mid;
            f_lo = f;
            if (side == 1) f_hi *= 0.5;
            side = 1;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) return std::exp(hi);
    }
    throw NumericalError("projection: multiplier search did not converge");
}

inline double power_sum(const Vector& d, double q) {
    double mx = 0.0;
    for (double v : d) mx = std::max(mx, v);
    if (mx == 0.0) return 0.0;
    return std::pow(lp_norm(d, NormExponent(q)), q);
}

/// argmin_{t >= 0} (t - c)^2 / 2 + lambda t^q
inline double shrink_coordinate(double c, double lambda, double q) {
    if (c <= 0.0) return 0.0;
    if (lambda == 0.0) return c;
    if (q == 1.0) return std::max(c - lambda, 0.0);
    return increasing_root(
        [&](double t) {
            return std::pair{t + lambda * q * std::pow(t, q - 1.0) - c,
                             1.0 + lambda * q * (q - 1.0) * std::pow(t, q - 2.0)};
        },
        0.0, c, c);
}

/**
 * Euclidean projection of c onto {d >= 0, sum_j d_j^q <= 1}, q = p/2 >= 1
 * (the box [0,1]^n for p = inf). On the support the KKT conditions read
 * d_j + lambda q d_j^(q-1) = c_j.
 */
inline Vector project_pball_diag(const Vector& c, NormExponent p) {
    Vector d(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) d[j] = std::max(c[j], 0.0);
    if (p.is_infinite()) {
        for (double& v : d) v = std::min(v, 1.0);
        return d;
    }
    const double q = 0.5 * p.value();
    if (power_sum(d, q) <= 1.0) return d;
    Vector trial(c.size());
    auto fill = [&](double lambda) {
        for (std::size_t j = 0; j < c.size(); ++j) trial[j] = shrink_coordinate(c[j], lambda, q);
    };
    const double lambda = find_multiplier(
        [&](double l) {
            fill(l);
            return power_sum(trial, q) - 1.0;
        },
        1e-12);
    fill(lambda);
    return trial;
}

/// argmin over {x^2 <= d} of (x - a)^2 / 2 + (d - b)^2 / 2 + lambda d^q.
inline std::pair<double, double> schur_coordinate(double a, double b, double lambda, double q) {
    const double d0 = shrink_coordinate(b, lambda, q);
    if (a * a <= d0) return {a, d0};
    // On the parabola d = s^2, s = |x|, with x = a / (1 + 2 nu):
    //   s^2 - b + lambda q s^(2q-2) - (|a|/s - 1) / 2 = 0, increasing in s.
    const double aa = std::abs(a);
    const double s = increasing_root(
        [&](double t) {
            const double pen = lambda * q * std::pow(t, 2.0 * q - 2.0);
            const double dpen = q == 1.0 ? 0.0 : lambda * q * (2.0 * q - 2.0) * std::pow(t, 2.0 * q - 3.0);
            return std::pair{t * t - b + pen - 0.5 * (aa / t - 1.0), 2.0 * t + dpen + 0.5 * aa / (t * t)};
        },
        std::sqrt(d0), aa, aa);
    return {std::copysign(s, a), s * s};
}

/**
 * Exact Euclidean projection of (x, d) onto {x_j^2 <= d_j, sum_j d_j^(p/2) <= 1}
 * ({x_j^2 <= d_j <= 1} for p = inf). Separable given the multiplier of the
 * ball constraint, which is found by find_multiplier.
 */
inline void project_schur_set(Vector& x, Vector& d, NormExponent p) {
    const std::size_t n = x.size();
    if (p.is_infinite()) {
        for (std::size_t j = 0; j < n; ++j) {
            auto [xj, dj] = schur_coordinate(x[j], d[j], 0.0, 1.0);
            if (dj > 1.0) {
                xj = std::clamp(x[j], -1.0, 1.0);
                dj = 1.0;
            }
            x[j] = xj;
            d[j] = dj;
        }
        return;
    }
    const double q = 0.5 * p.value();
    Vector tx(n), td(n);
    auto fill = [&](double lambda) {
        for (std::size_t j = 0; j < n; ++j) std::tie(tx[j], td[j]) = schur_coordinate(x[j], d[j], lambda, q);
    };
    fill(0.0);
    if (power_sum(td, q) > 1.0) {
        const double lambda = find_multiplier(
            [&](double l) {
                fill(l);
                return power_sum(td, q) - 1.0;
            },
            1e-12);
        fill(lambda);
    }
    x = std::move(tx);
    d = std::move(td);
}

}  // namespace detail

/**
 * @brief Projects the X-block diagonal onto {d >= 0, sum_j d_j^(p/2) <= 1}.
 * Off-diagonal entries and the lifted column are untouched.
 */
inline SymMatrix diag_pball_project(SymMatrix m, NormExponent p, std::size_t n) {
    Vector c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = m(j, j);
    const Vector d = detail::project_pball_diag(c, p);
    for (std::size_t j = 0; j < n; ++j) m(j, j) = d[j];
    return m;
}

/// Lifted-matrix overload: acts on the leading n x n block.
inline LiftedMatrix diag_pball_project(const LiftedMatrix& m, NormExponent p) {
    return LiftedMatrix(diag_pball_project(m.matrix(), p, m.n()));
}

/// sum_j X_jj^(p/2), or max_j X_jj for p = inf (negative entries count as 0).
inline double diag_constraint_value(const Vector& diag, NormExponent p) {
    Vector d(diag.size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = std::max(diag[j], 0.0);
    if (p.is_infinite()) return *std::max_element(d.begin(), d.end());
    return detail::power_sum(d, 0.5 * p.value());
}

/**
 * Reduced: optimize over (x, diag X) only, using that the objective sees M
 * through tr(X) and x alone and that, with corner 1, M >= 0 iff X >= x x^T.
 * Any (x, d) with d_j >= x_j^2 lifts to the feasible
 * X = x x^T + Diag(d - x o x), so optimal values and optimal diagonals match.
 *
 * Lifted: the same ascent on the full matrix, projecting with Dykstra over
 * {PSD} n {corner = 1} n {diagonal ball}. Exact but much slower; meant for
 * small n and cross-checks.
 */
enum class SdpMethod { Reduced, Lifted };

struct SdpOptions {
    SdpMethod method = SdpMethod::Reduced;
    double eps = 1e-6;           ///< relative softmin gain per window that ends the final phase
    double feas_tol = 1e-7;      ///< accepted PSD / diagonal residual
    int max_iters = 20000;       ///< ascent iterations
    double mu_init = 1.0;
    double mu_min = 1e-8;
    int stall_window = 50;
    double stall_tol = 1e-8;     ///< relative softmin gain per window that halves mu
    int dykstra_max_iters = 5000;
    double dykstra_tol = 1e-10;
};

struct SdpDiagnostics {
    int iterations = 0;
    bool converged = false;
    double final_mu = 0.0;
    double min_eigenvalue = 0.0;   ///< lambda_min of the lifted matrix
    double diag_constraint = 0.0;  ///< sum_j X_jj^(p/2) (max_j X_jj for p = inf)
    double infeasibility = 0.0;    ///< max(-lambda_min, diag_constraint - 1, |corner - 1|, 0)
    long long projections = 0;
    int dykstra_failures = 0;      ///< lifted method: projections that hit the cap
    long long dykstra_cycles = 0;
};

struct SdpSolution {
    LiftedMatrix lifted;
    double objective = 0.0;  ///< min_i A_i . M at the returned point
    double gamma1 = 0.0;
    Vector diag_sqrt;        ///< sqrt(X*_jj), the rounding scale
    SdpDiagnostics diagnostics;
};

/// max_j X_jj / sum_j X_jj.
inline double gamma1(const Vector& diag) {
    double sum = 0.0;
    double mx = 0.0;
    for (double d : diag) {
        sum += std::max(d, 0.0);
        mx = std::max(mx, d);
    }
    if (!(sum > 0.0)) throw std::invalid_argument("gamma1: diagonal has no positive mass");
    return mx / sum;
}

inline double gamma1(const SdpSolution& sdp) { return gamma1(sdp.lifted.diagonal()); }

/// (1 - sqrt(2 gamma1 ln(m/rho))) / 2, the ratio guaranteed for the SDP-based rounding.
inline double gamma1_ratio(double g1, std::size_t m, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("gamma1_ratio: rho must lie in (0,1)");
    return 0.5 * (1.0 - std::sqrt(2.0 * g1 * std::log(static_cast<double>(m) / rho)));
}

namespace detail {

struct SoftminValue {
    double value;     ///< -mu log sum_i exp(-g_i / mu)
    double hard_min;  ///< min_i g_i
    Vector weights;   ///< softmax weights, the gradient mixture
};

inline SoftminValue softmin(const Vector& g, double mu) {
    const double gmin = *std::min_element(g.begin(), g.end());
    Vector w(g.size());
    double z = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        w[i] = std::exp(-(g[i] - gmin) / mu);
        z += w[i];
    }
    for (double& v : w) v /= z;
    return {gmin - mu * std::log(z), gmin, std::move(w)};
}

struct AscentResult {
    Vector z;
    int iterations = 0;
    bool converged = false;
    double final_mu = 0.0;
    long long projections = 0;
};

/**
 * Accelerated projected gradient (FISTA with function-value restart) on the
 * softmin surrogate, with mu halved whenever the relative gain over
 * `stall_window` iterations drops below stall_tol; at mu_min the run ends on
 * a gain below eps. Returns the iterate with the best hard minimum.
 *
 * Problem must provide:
 *   Vector start();
 *   void forms(const Vector& z, Vector& g);     // g_i(z)
 *   void gradient(const Vector& pi, Vector& out); // sum_i pi_i grad g_i
 *   bool project(Vector& z);                    // false if unreliable
 *   double lipschitz();                         // max_i ||grad g_i||^2
 */
template <typename Problem>
AscentResult softmin_ascent(Problem& prob, std::size_t m, const SdpOptions& opt) {
    AscentResult res;
    Vector z = prob.start();
    Vector g(m);
    auto eval = [&](const Vector& v, double mu) {
        prob.forms(v, g);
        return softmin(g, mu);
    };

    double mu = opt.mu_init;
    double step = mu / prob.lipschitz();
    SoftminValue cur = eval(z, mu);
    Vector best = z;
    double best_value = cur.hard_min;

    Vector y = z;
    double momentum = 1.0;
    Vector grad(z.size());
    Vector trial;
    std::vector<double> history{cur.value};
    const std::size_t window = static_cast<std::size_t>(std::max(1, opt.stall_window));

    int it = 0;
    for (; it < opt.max_iters; ++it) {
        const SoftminValue at_y = eval(y, mu);
        prob.gradient(at_y.weights, grad);

        bool accepted = false;
        SoftminValue next{};
        for (int bt = 0; bt < 60; ++bt) {
            trial = y;
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += step * grad[k];
            ++res.projections;
            if (!prob.project(trial)) {
                step *= 0.5;
                continue;
            }
            next = eval(trial, mu);
            double lin = 0.0;
            double dist2 = 0.0;
            for (std::size_t k = 0; k < trial.size(); ++k) {
                const double dk = trial[k] - y[k];
                lin += grad[k] * dk;
                dist2 += dk * dk;
            }
            if (next.value >= at_y.value + lin - dist2 / (2.0 * step) - 1e-15 * std::abs(at_y.value)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        if (accepted && next.value >= cur.value) {
            const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            const double beta = (momentum - 1.0) / momentum_next;
            for (std::size_t k = 0; k < y.size(); ++k) y[k] = trial[k] + beta * (trial[k] - z[k]);
            momentum = momentum_next;
            z = trial;
            cur = std::move(next);
            step *= 1.1;
            if (cur.hard_min > best_value) {
                best_value = cur.hard_min;
                best = z;
            }
        } else {
            // Restart the momentum from the last accepted point.
            y = z;
            momentum = 1.0;
        }
        history.push_back(cur.value);

        if (history.size() > window) {
            const double old = history[history.size() - 1 - window];
            const double gain = (cur.value - old) / std::max(1.0, std::abs(cur.value));
            const bool at_floor = mu <= opt.mu_min;
            if (gain < (at_floor ? opt.eps : opt.stall_tol)) {
                if (at_floor) {
                    res.converged = true;
                    ++it;
                    break;
                }
                mu = std::max(0.5 * mu, opt.mu_min);
                cur = eval(z, mu);
                history.assign(1, cur.value);
                y = z;
                momentum = 1.0;
            }
        }
    }
    res.z = std::move(best);
    res.iterations = it;
    res.final_mu = mu;
    return res;
}

/// max_i w_i^2 * norm2(n, ||x^i||^2): a Lipschitz bound for the softmin gradient times mu.
template <typename Norm2>
double max_form_gradient_norm2(const ProblemInstance& inst, Norm2&& norm2) {
    double l = 0.0;
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const double r2 = inst.point_norm(i) * inst.point_norm(i);
        l = std::max(l, inst.weight(i) * inst.weight(i) * norm2(static_cast<double>(inst.n()), r2));
    }
    return l;
}

/// Variables z = (x, d) in R^(2n).
class ReducedProblem {
public:
    explicit ReducedProblem(const ProblemInstance& inst) : inst_(inst), n_(inst.n()) {}

    Vector start() const {
        Vector z(2 * n_, 0.0);
        const double s = inst_.p().inv_root(n_);
        for (std::size_t j = 0; j < n_; ++j) z[n_ + j] = s * s;
        return z;
    }

    void forms(const Vector& z, Vector& g) const {
        double tr = 0.0;
        for (std::size_t j = 0; j < n_; ++j) tr += z[n_ + j];
        const std::span<const double> x(z.data(), n_);
        for (std::size_t i = 0; i < inst_.m(); ++i) {
            const double r = inst_.point_norm(i);
            g[i] = inst_.weight(i) * (tr - 2.0 * dot(inst_.point(i), x) + r * r);
        }
    }

    void gradient(const Vector& pi, Vector& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        double mass = 0.0;
        for (std::size_t i = 0; i < inst_.m(); ++i) {
            const double c = pi[i] * inst_.weight(i);
            if (c == 0.0) continue;
            mass += c;
            const auto xi = inst_.point(i);
            for (std::size_t j = 0; j < n_; ++j) out[j] -= 2.0 * c * xi[j];
        }
        for (std::size_t j = 0; j < n_; ++j) out[n_ + j] = mass;
    }

    bool project(Vector& z) const {
        Vector x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n_));
        Vector d(z.begin() + static_cast<std::ptrdiff_t>(n_), z.end());
        project_schur_set(x, d, inst_.p());
        std::copy(x.begin(), x.end(), z.begin());
        std::copy(d.begin(), d.end(), z.begin() + static_cast<std::ptrdiff_t>(n_));
        return true;
    }

    double lipschitz() const {
        return max_form_gradient_norm2(inst_, [](double n, double r2) { return n + 4.0 * r2; });
    }

    /// [[x x^T + Diag(d - x o x), x], [x^T, 1]]
    LiftedMatrix lift(const Vector& z) const {
        LiftedMatrix l(n_);
        SymMatrix& m = l.matrix();
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) m.set_sym(i, j, z[i] * z[j]);
            m(i, i) = std::max(z[n_ + i], z[i] * z[i]);
            m.set_sym(i, n_, z[i]);
        }
        return l;
    }

private:
    const ProblemInstance& inst_;
    std::size_t n_;
};

/// Variables z = the (n+1)^2 entries of M.
class LiftedProblem {
public:
    LiftedProblem(const ProblemInstance& inst, const SdpOptions& opt) : inst_(inst), opt_(opt), dim_(inst.n() + 1) {}

    Vector start() const {
        Vector z(dim_ * dim_, 0.0);
        const double s = inst_.p().inv_root(inst_.n());
        for (std::size_t j = 0; j + 1 < dim_; ++j) z[j * dim_ + j] = s * s;
        z.back() = 1.0;
        return z;
    }

    void forms(const Vector& z, Vector& g) const {
        const std::size_t n = dim_ - 1;
        double tr = 0.0;
        for (std::size_t j = 0; j < n; ++j) tr += z[j * dim_ + j];
        for (std::size_t i = 0; i < inst_.m(); ++i) {
            const auto xi = inst_.point(i);
            double cross = 0.0;
            for (std::size_t j = 0; j < n; ++j) cross += xi[j] * (z[j * dim_ + n] + z[n * dim_ + j]);
            const double r = inst_.point_norm(i);
            g[i] = inst_.weight(i) * (tr - cross + r * r * z.back());
        }
    }

    void gradient(const Vector& pi, Vector& out) const {
        const std::size_t n = dim_ - 1;
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t i = 0; i < inst_.m(); ++i) {
            const double c = pi[i] * inst_.weight(i);
            if (c == 0.0) continue;
            const auto xi = inst_.point(i);
            for (std::size_t j = 0; j < n; ++j) {
                out[j * dim_ + j] += c;
                out[j * dim_ + n] -= c * xi[j];
                out[n * dim_ + j] -= c * xi[j];
            }
            out.back() += c * inst_.point_norm(i) * inst_.point_norm(i);
        }
    }

    bool project(Vector& z) {
        SymMatrix m(dim_);
        m.data() = std::move(z);
        const int cycles = dykstra(m);
        z = std::move(m.data());
        if (cycles < 0) {
            ++failures;
            cycles_total += opt_.dykstra_max_iters;
            return false;
        }
        cycles_total += cycles;
        return true;
    }

    double lipschitz() const {
        return max_form_gradient_norm2(inst_, [](double n, double r2) { return n + 2.0 * r2 + r2 * r2; });
    }

    /// Dykstra over PSD, corner = 1, and the diagonal ball. Returns the number
    /// of cycles, or -1 at the cap.
    int dykstra(SymMatrix& x) const {
        const std::size_t n = dim_ - 1;
        SymMatrix inc_psd(dim_), inc_corner(dim_), inc_diag(dim_);
        for (int k = 1; k <= opt_.dykstra_max_iters; ++k) {
            const SymMatrix prev = x;

            SymMatrix y = x + inc_psd;
            SymMatrix z = psd_project(y);
            inc_psd = y - z;
            x = std::move(z);

            y = x + inc_corner;
            z = y;
            z(n, n) = 1.0;
            inc_corner = y - z;
            x = std::move(z);

            y = x + inc_diag;
            z = diag_pball_project(y, inst_.p(), n);
            inc_diag = y - z;
            x = std::move(z);

            if ((x - prev).frobenius_norm() <= opt_.dykstra_tol * (1.0 + x.frobenius_norm())) return k;
        }
        return -1;
    }

    int failures = 0;
    long long cycles_total = 0;

private:
    const ProblemInstance& inst_;
    const SdpOptions& opt_;
    std::size_t dim_;
};

inline void finish_solution(const ProblemInstance& inst, SdpSolution& sol, const SdpOptions& opt) {
    const SymMatrix& m = sol.lifted.matrix();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < inst.m(); ++i) best = std::min(best, form_value(inst, i, m));
    sol.objective = best;
    SdpDiagnostics& d = sol.diagnostics;
    d.min_eigenvalue = min_eigenvalue(m);
    d.diag_constraint = diag_constraint_value(sol.lifted.diagonal(), inst.p());
    d.infeasibility = std::max({0.0, -d.min_eigenvalue, d.diag_constraint - 1.0, std::abs(sol.lifted.corner() - 1.0)});
    if (d.infeasibility > opt.feas_tol) d.converged = false;
    const Vector diag = sol.lifted.diagonal();
    sol.gamma1 = gamma1(diag);
    if (sol.diag_sqrt.empty()) {
        sol.diag_sqrt.resize(diag.size());
        for (std::size_t j = 0; j < diag.size(); ++j) sol.diag_sqrt[j] = std::sqrt(std::max(diag[j], 0.0));
    }
}

}  // namespace detail

/// The feasible point blockdiag(n^(-2/p) I, 1); its rounding scale is exactly n^(-1/p).
inline SdpSolution scalar_matrix_solution(const ProblemInstance& inst) {
    const std::size_t n = inst.n();
    const double s = inst.p().inv_root(n);
    SdpSolution sol;
    sol.lifted = LiftedMatrix(n);
    for (std::size_t j = 0; j < n; ++j) sol.lifted.matrix()(j, j) = s * s;
    sol.diag_sqrt.assign(n, s);
    sol.diagnostics.converged = true;
    detail::finish_solution(inst, sol, SdpOptions{});
    sol.gamma1 = 1.0 / static_cast<double>(n);
    return sol;
}

/**
 * @brief Solves the relaxation to a feasible near-optimal lifted matrix.
 *
 * Slow convergence is not an error: the best iterate comes back with
 * diagnostics.converged = false.
 */
inline SdpSolution solve_sdp(const ProblemInstance& inst, const SdpOptions& opt = {}) {
    if (!(inst.p().value() >= 2.0)) throw std::invalid_argument("solve_sdp: p must be >= 2");
    if (!(opt.mu_min > 0.0 && opt.mu_init >= opt.mu_min)) throw std::invalid_argument("solve_sdp: bad temperature range");
    if (opt.max_iters <= 0) throw std::invalid_argument("solve_sdp: max_iters must be positive");
    SdpSolution sol;
    detail::AscentResult run;
    if (opt.method == SdpMethod::Reduced) {
        detail::ReducedProblem prob(inst);
        run = detail::softmin_ascent(prob, inst.m(), opt);
        sol.lifted = prob.lift(run.z);
    } else {
        detail::LiftedProblem prob(inst, opt);
        run = detail::softmin_ascent(prob, inst.m(), opt);
        SymMatrix m(inst.n() + 1);
        m.data() = run.z;
        sol.lifted = LiftedMatrix(std::move(m));
        sol.diagnostics.dykstra_failures = prob.failures;
        sol.diagnostics.dykstra_cycles = prob.cycles_total;
    }
    sol.diagnostics.iterations = run.iterations;
    sol.diagnostics.converged = run.converged;
    sol.diagnostics.final_mu = run.final_mu;
    sol.diagnostics.projections = run.projections;
    detail::finish_solution(inst, sol, opt);
    return sol;
}

/// SDP-based rounding: b^i = sqrt(diag X*) o x^i, x~_j = sqrt(X*_jj) xi_j.
inline std::pair<Candidate, RoundingReport> sdp_rounding(const ProblemInstance& inst, const SdpSolution& sdp,
                                                         double rho, SignSampler& sampler) {
    return detail::rejection_round(inst, rho, sdp.diag_sqrt, sampler, Source::SdpRounding);
}

/// The SDP-based algorithm under its conventional name.
inline std::pair<Candidate, RoundingReport> algorithm1(const ProblemInstance& inst, const SdpSolution& sdp,
                                                       double rho, SignSampler& sampler) {
    return sdp_rounding(inst, sdp, rho, sampler);
}

}  // namespace maximin

#endif  // MAXIMIN_SDP_RELAXATION_HPP
