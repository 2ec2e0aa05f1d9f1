/**
 * @file oracle.hpp
 * @brief Brute-force estimation of v(P) for small n, the ground truth used by
 * the test and acceptance suites.
 *
 * grid_search enumerates the nodes -1 + k h of [-1,1]^n that lie in the unit
 * l_p-ball. The best node value is a lower bound on v(P). Rounding an optimal
 * x* toward zero lands on a feasible node within h sqrt(n) of it, and f is
 * locally Lipschitz, so v(P) <= value + envelope with
 *
 *     envelope = max_i w_i (2 D d + d^2),   d = h sqrt(n),
 *     D = n^(1/2 - 1/p) + max_i ||x^i||_2   (bound on ||x - x^i||_2).
 *
 * With dyadic h = 2^-k the grids are nested, so refining never lowers the
 * grid value.
 */

#ifndef MAXIMIN_ORACLE_HPP
#define MAXIMIN_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "maximin/core.hpp"

namespace maximin {

/// Raised when a brute-force request exceeds the oracle's size limits.
class CostGuardError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr std::size_t kOracleMaxDimension = 4;
inline constexpr double kOracleMaxNodes = 5e8;

struct OracleResult {
    double value = 0.0;       ///< f(argmax): a lower bound on v(P)
    Vector argmax;
    double grid_value = 0.0;  ///< best grid node, before polishing
    double grid_resolution = 0.0;
    double envelope = 0.0;    ///< v(P) <= grid_value + envelope
    bool polished = false;
    std::size_t nodes = 0;    ///< feasible nodes evaluated
};

/// The additive gap bound between the grid value at resolution h and v(P).
inline double oracle_envelope(const ProblemInstance& inst, double resolution) {
    const double nd = static_cast<double>(inst.n());
    double reach = 0.0;
    for (std::size_t i = 0; i < inst.m(); ++i) reach = std::max(reach, inst.point_norm(i));
    const double diam = std::sqrt(inst.p().holder_cap(inst.n())) + reach;
    const double delta = resolution * std::sqrt(nd);
    double eps = 0.0;
    for (std::size_t i = 0; i < inst.m(); ++i) eps = std::max(eps, inst.weight(i) * (2.0 * diam * delta + delta * delta));
    return eps;
}

namespace detail {

/// Scales x back onto the unit sphere when it left the ball.
inline void retract(Vector& x, NormExponent p) {
    const double r = lp_norm(x, p);
    if (r <= 1.0) return;
    for (double& v : x) v /= r;
    if (lp_norm(x, p) > 1.0)
        for (double& v : x) v *= 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
}

}  // namespace detail

/**
 * @brief Compass search from x0 with radial retraction onto the ball.
 *
 * Polls +-e_j and +-e_j +- e_k; a poll is accepted only if it raises f, so the
 * result never scores below x0 (an infeasible x0 is retracted first). The
 * step halves after an unsuccessful sweep; `iters` bounds the sweeps.
 */
inline Vector polish(const ProblemInstance& inst, Vector x0, int iters = 2000) {
    check_dimension(inst, x0);
    detail::retract(x0, inst.p());
    const std::size_t n = inst.n();
    constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;
    std::vector<Vector> dirs;
    for (std::size_t j = 0; j < n; ++j) {
        for (double s : {1.0, -1.0}) {
            Vector d(n, 0.0);
            d[j] = s;
            dirs.push_back(d);
        }
        for (std::size_t k = j + 1; k < n; ++k)
            for (double s : {1.0, -1.0})
                for (double t : {1.0, -1.0}) {
                    Vector d(n, 0.0);
                    d[j] = s * kHalfSqrt2;
                    d[k] = t * kHalfSqrt2;
                    dirs.push_back(d);
                }
    }

    Vector x = std::move(x0);
    double fx = objective(inst, x);
    double step = 0.25;
    Vector trial(n);
    for (int it = 0; it < iters && step > 1e-13; ++it) {
        bool improved = false;
        for (const Vector& d : dirs) {
            for (std::size_t j = 0; j < n; ++j) trial[j] = x[j] + step * d[j];
            detail::retract(trial, inst.p());
            const double ft = objective(inst, trial);
            if (ft > fx) {
                x = trial;
                fx = ft;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return x;
}

/**
 * @brief Best feasible node of the grid {-1, -1+h, ..., 1}^n, optionally
 * tightened by polish().
 *
 * Without polishing, value == grid_value. Node feasibility uses an exact
 * sum_j |c_j|^p <= 1 test on precomputed powers, the same for every grid.
 */
inline OracleResult grid_search(const ProblemInstance& inst, double resolution, bool with_polish = false) {
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw std::invalid_argument("grid_search: resolution must be positive");
    const std::size_t n = inst.n();
    if (n > kOracleMaxDimension)
        throw CostGuardError("grid_search: n = " + std::to_string(n) + " exceeds the oracle limit of " +
                             std::to_string(kOracleMaxDimension));
    const auto per_axis = static_cast<std::size_t>(std::floor(2.0 / resolution + 1e-9)) + 1;
    if (std::pow(static_cast<double>(per_axis), static_cast<double>(n)) > kOracleMaxNodes)
        throw CostGuardError("grid_search: too many grid nodes at this resolution");

    Vector coord(per_axis);
    Vector power(per_axis);
    const NormExponent p = inst.p();
    for (std::size_t k = 0; k < per_axis; ++k) {
        coord[k] = -1.0 + static_cast<double>(k) * resolution;
        power[k] = p.is_infinite() ? 0.0 : std::pow(std::abs(coord[k]), p.value());
    }

    OracleResult res;
    res.grid_resolution = resolution;
    res.envelope = oracle_envelope(inst, resolution);
    res.grid_value = -1.0;

    std::vector<std::size_t> idx(n, 0);
    Vector x(n);
    while (true) {
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) mass += power[idx[j]];
        if (mass <= 1.0) {
            for (std::size_t j = 0; j < n; ++j) x[j] = coord[idx[j]];
            ++res.nodes;
            const double f = objective(inst, x);
            if (f > res.grid_value) {
                res.grid_value = f;
                res.argmax = x;
            }
        }
        std::size_t j = 0;
        while (j < n && ++idx[j] == per_axis) idx[j++] = 0;
        if (j == n) break;
    }

    res.value = res.grid_value;
    if (with_polish) {
        Vector y = polish(inst, res.argmax);
        const double fy = objective(inst, y);
        res.polished = true;
        if (fy > res.value) {
            res.value = fy;
            res.argmax = std::move(y);
        }
    }
    return res;
}

}  // namespace maximin

#endif  // MAXIMIN_ORACLE_HPP
