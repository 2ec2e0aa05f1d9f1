/**
 * @file core.hpp
 * @brief Problem model for the weighted maximin dispersion problem over the
 * unit l_p-ball.
 *
 *   maximize_{||x||_p <= 1}  f(x) = min_i  w_i * ||x - x^i||_2^2
 *
 * Holds the instance data, l_p geometry helpers, the objective, and the
 * closed-form approximation constant (1 - sqrt(2 ln(m/rho) / n)) / 2.
 */

#ifndef MAXIMIN_CORE_HPP
#define MAXIMIN_CORE_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maximin {

using Vector = std::vector<double>;

/// Default tolerance on ||x||_p <= 1 for points produced by iterative code.
inline constexpr double kFeasibilityTol = 1e-9;

/// Raised when an iterative numerical routine cannot reach its target.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Norm exponent p in [1, +inf], with a distinguished infinity.
 *
 * All n-dependent factors use the limits n^(-1/inf) = 1 and
 * n^(1 - 2/inf) = n so the finite formulas degenerate cleanly.
 */
class NormExponent {
public:
    constexpr NormExponent() = default;
    constexpr explicit NormExponent(double p) : p_(p) {}

    static constexpr NormExponent infinity() {
        return NormExponent(std::numeric_limits<double>::infinity());
    }

    constexpr double value() const { return p_; }
    bool is_infinite() const { return std::isinf(p_); }

    /// n^(-1/p): the per-coordinate scale putting n^(-1/p) * xi on the unit sphere.
    double inv_root(std::size_t n) const {
        return is_infinite() ? 1.0 : std::pow(static_cast<double>(n), -1.0 / p_);
    }

    /// n^(1 - 2/p): the Holder cap on ||x||_2^2 over the unit l_p-ball.
    double holder_cap(std::size_t n) const {
        const double nd = static_cast<double>(n);
        return is_infinite() ? nd : std::pow(nd, 1.0 - 2.0 / p_);
    }

    std::string to_string() const {
        if (is_infinite()) return "inf";
        std::string s = std::to_string(p_);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    friend constexpr bool operator==(NormExponent, NormExponent) = default;

private:
    double p_ = 2.0;
};

/// Parses a number or "inf" / "infinity" (case-insensitive).
inline NormExponent parse_exponent(const std::string& text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return NormExponent::infinity();
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse norm exponent '" + text + "'");
    }
    if (used != text.size()) throw std::invalid_argument("cannot parse norm exponent '" + text + "'");
    return NormExponent(p);
}

/**
 * @brief l_p-norm with max-factoring, so large finite p (e.g. 1000) neither
 * overflows nor underflows.
 */
inline double lp_norm(std::span<const double> x, NormExponent p) {
    if (x.empty()) throw std::invalid_argument("lp_norm: empty vector");
    if (!(p.value() >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (p.is_infinite() || scale == 0.0) return scale;
    if (p.value() == 2.0) {
        double sum = 0.0;
        for (double v : x) sum += (v / scale) * (v / scale);
        return scale * std::sqrt(sum);
    }
    double sum = 0.0;
    for (double v : x) sum += std::pow(std::abs(v) / scale, p.value());
    return scale * std::pow(sum, 1.0 / p.value());
}

inline double squared_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

/**
 * @brief Immutable datum of one maximin instance: n, m, p, anchors, weights.
 *
 * Anchors are stored row-major (m rows of length n).
 */
class ProblemInstance {
public:
    ProblemInstance(std::size_t n, NormExponent p, std::vector<Vector> points, Vector weights)
        : n_(n), m_(points.size()), p_(p), weights_(std::move(weights)) {
        if (n_ == 0) throw std::invalid_argument("instance: n must be positive");
        if (m_ == 0) throw std::invalid_argument("instance: m must be positive");
        if (!(p.value() >= 2.0)) throw std::invalid_argument("instance: p must be >= 2 or inf");
        if (weights_.size() != m_) throw std::invalid_argument("instance: need one weight per point");
        points_.reserve(n_ * m_);
        for (const auto& pt : points) {
            if (pt.size() != n_) throw std::invalid_argument("instance: point length differs from n");
            for (double v : pt)
                if (!std::isfinite(v)) throw std::invalid_argument("instance: non-finite coordinate");
            points_.insert(points_.end(), pt.begin(), pt.end());
        }
        for (double w : weights_)
            if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("instance: weights must be positive");
        norms_.reserve(m_);
        for (std::size_t i = 0; i < m_; ++i) norms_.push_back(std::sqrt(squared_norm(point(i))));
    }

    /// Unit weights.
    ProblemInstance(std::size_t n, NormExponent p, std::vector<Vector> points)
        : ProblemInstance(n, p, points, Vector(points.size(), 1.0)) {}

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    NormExponent p() const { return p_; }

    std::span<const double> point(std::size_t i) const { return {points_.data() + i * n_, n_}; }
    double weight(std::size_t i) const { return weights_[i]; }
    const Vector& weights() const { return weights_; }
    /// ||x^i||_2
    double point_norm(std::size_t i) const { return norms_[i]; }
    double max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }

private:
    std::size_t n_;
    std::size_t m_;
    NormExponent p_;
    Vector points_;
    Vector weights_;
    Vector norms_;
};

struct ObjectiveValue {
    double value;
    std::size_t argmin;  ///< lowest index attaining the minimum
};

inline void check_dimension(const ProblemInstance& inst, std::span<const double> x) {
    if (x.size() != inst.n())
        throw std::invalid_argument("dimension mismatch: expected " + std::to_string(inst.n()) + ", got " +
                                    std::to_string(x.size()));
}

inline double weighted_sq_distance(const ProblemInstance& inst, std::size_t i, std::span<const double> x) {
    const auto xi = inst.point(i);
    double d = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double t = x[j] - xi[j];
        d += t * t;
    }
    return inst.weight(i) * d;
}

/// f(x) = min_i w_i ||x - x^i||_2^2 together with its argmin.
inline ObjectiveValue evaluate_objective(const ProblemInstance& inst, std::span<const double> x) {
    check_dimension(inst, x);
    ObjectiveValue best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t i = 0; i < inst.m(); ++i) {
        const double v = weighted_sq_distance(inst, i, x);
        if (v < best.value) best = {v, i};
    }
    return best;
}

inline double objective(const ProblemInstance& inst, std::span<const double> x) {
    return evaluate_objective(inst, x).value;
}

inline bool is_feasible(const ProblemInstance& inst, std::span<const double> x, double tol = kFeasibilityTol) {
    if (tol < 0.0) throw std::invalid_argument("is_feasible: negative tolerance");
    check_dimension(inst, x);
    return lp_norm(x, inst.p()) <= 1.0 + tol;
}

/// Holder: ||x||_2^2 <= n^(1-2/p) for every x in the unit l_p-ball.
inline bool holder_norm_cap(const ProblemInstance& inst, std::span<const double> x) {
    check_dimension(inst, x);
    return squared_norm(x) <= inst.p().holder_cap(inst.n()) + 1e-9;
}

/// alpha = sqrt(2 ln(m/rho)) and the guaranteed ratio (1 - alpha/sqrt(n)) / 2.
struct BoundConstant {
    double rho;
    double alpha;
    double ratio;  ///< may be negative for small n / large m
};

inline BoundConstant bound_constant(std::size_t n, std::size_t m, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("bound_constant: rho must lie in (0,1)");
    if (n == 0 || m == 0) throw std::invalid_argument("bound_constant: n and m must be positive");
    const double alpha = std::sqrt(2.0 * std::log(static_cast<double>(m) / rho));
    return {rho, alpha, 0.5 * (1.0 - alpha / std::sqrt(static_cast<double>(n)))};
}

enum class Source { SignRounding, SdpRounding, Oracle, External };

inline const char* to_string(Source s) {
    switch (s) {
        case Source::SignRounding: return "sign_rounding";
        case Source::SdpRounding: return "sdp_rounding";
        case Source::Oracle: return "oracle";
        case Source::External: return "external";
    }
    return "?";
}

/// A feasible point with its objective value and provenance.
struct Candidate {
    Vector x;
    double objective;
    Source source;

    static Candidate make(const ProblemInstance& inst, Vector x, Source source) {
        const double f = maximin::objective(inst, x);
        return {std::move(x), f, source};
    }
};

}  // namespace maximin

#endif  // MAXIMIN_CORE_HPP
