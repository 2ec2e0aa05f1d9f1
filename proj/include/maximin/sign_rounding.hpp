/**
 * @file sign_rounding.hpp
 * @brief Relaxation-free randomized rounding for the maximin dispersion
 * problem, plus the Rademacher tail-bound and bound-certificate helpers.
 *
 * The algorithm draws fair sign vectors xi in {-1,+1}^n until
 *
 *     (x^i)^T xi < alpha ||x^i||_2    for every anchor with ||x^i||_2 > 0,
 *
 * with alpha = sqrt(2 ln(m/rho)), and returns x~ = n^(-1/p) xi, a vertex of
 * the cube inscribed in the unit l_p-sphere. Every accepted x~ satisfies
 * f(x~) > (1 - alpha/sqrt(n))/2 * v(P) deterministically.
 *
 * The same rejection loop, driven by a per-coordinate scale sqrt(X*_jj),
 * also implements the SDP-based rounding (see sdp_relaxation.hpp).
 */

#ifndef MAXIMIN_SIGN_ROUNDING_HPP
#define MAXIMIN_SIGN_ROUNDING_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "maximin/core.hpp"
#include "maximin/rng.hpp"

namespace maximin {

using SignVector = std::vector<int>;

/// Raised when the rejection loop hits its trial budget.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(std::uint64_t trials)
        : std::runtime_error("rejection sampling: no acceptable sign vector after " + std::to_string(trials) +
                             " trials"),
          trials_(trials) {}

    std::uint64_t trials() const { return trials_; }

private:
    std::uint64_t trials_;
};

inline constexpr std::uint64_t kDefaultMaxTrials = 1'000'000;

/**
 * @brief Source of i.i.d. fair signs. Single-owner mutable state.
 *
 * Signs are peeled one bit at a time off 64-bit generator words, so a
 * sampler's stream depends only on its seed.
 */
class SignSampler {
public:
    explicit SignSampler(std::uint64_t seed = 0, std::uint64_t max_trials = kDefaultMaxTrials)
        : seed_(seed), max_trials_(max_trials), gen_(seed) {
        if (max_trials_ == 0) throw std::invalid_argument("SignSampler: max_trials must be positive");
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t max_trials() const { return max_trials_; }

    int next_sign() {
        if (bits_left_ == 0) {
            buffer_ = gen_();
            bits_left_ = 64;
        }
        const int s = (buffer_ & 1U) ? 1 : -1;
        buffer_ >>= 1;
        --bits_left_;
        return s;
    }

    void draw_signs(SignVector& out, std::size_t n) {
        out.resize(n);
        for (auto& s : out) s = next_sign();
    }

    SignVector draw_signs(std::size_t n) {
        SignVector xi;
        draw_signs(xi, n);
        return xi;
    }

private:
    std::uint64_t seed_;
    std::uint64_t max_trials_;
    Xoshiro256 gen_;
    std::uint64_t buffer_ = 0;
    int bits_left_ = 0;
};

/// Diagnostics of one accepted rejection-sampling run.
struct RoundingReport {
    SignVector xi;
    std::uint64_t trials = 0;
    double alpha = 0.0;
    /// alpha ||b^i|| - (b^i)^T xi per anchor (b^i = x^i for the relaxation-free
    /// rounding); 0 for skipped anchors.
    Vector margins;
    /// Anchors exempt from the test because ||x^i|| = 0.
    std::vector<std::size_t> zero_anchors;
    /// Anchors with ||x^i|| > 0 whose scaled vector b^i vanished.
    std::vector<std::size_t> degenerate_anchors;
    Vector x_tilde;
    double objective = 0.0;
};

namespace detail {

/**
 * Shared rejection loop. `scale[j]` multiplies xi_j in the output. With a
 * uniform scale the test is run on x^i directly (a positive common factor
 * drops out of (b^i)^T xi < alpha ||b^i||); otherwise on b^i = scale o x^i.
 */
inline std::pair<Candidate, RoundingReport> rejection_round(const ProblemInstance& inst, double rho,
                                                            std::span<const double> scale, SignSampler& sampler,
                                                            Source source) {
    const std::size_t n = inst.n();
    const std::size_t m = inst.m();
    if (scale.size() != n) throw std::invalid_argument("rounding: scale vector has wrong length");
    const double alpha = bound_constant(n, m, rho).alpha;

    bool uniform = true;
    for (double s : scale) uniform = uniform && (s == scale[0]);

    RoundingReport rep;
    rep.alpha = alpha;
    rep.margins.assign(m, 0.0);

    std::vector<std::size_t> tested;
    std::vector<Vector> b(m);
    Vector threshold(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (inst.point_norm(i) == 0.0) {
            rep.zero_anchors.push_back(i);
            continue;
        }
        const auto xi = inst.point(i);
        if (uniform) {
            b[i].assign(xi.begin(), xi.end());
            threshold[i] = alpha * inst.point_norm(i);
        } else {
            b[i].resize(n);
            for (std::size_t j = 0; j < n; ++j) b[i][j] = scale[j] * xi[j];
            const double bn = std::sqrt(squared_norm(b[i]));
            if (bn == 0.0) {
                rep.degenerate_anchors.push_back(i);
                continue;
            }
            threshold[i] = alpha * bn;
        }
        tested.push_back(i);
    }

    Vector signs(n);
    auto accepted = [&](const SignVector& xi) {
        for (std::size_t j = 0; j < n; ++j) signs[j] = xi[j];
        for (std::size_t i : tested)
            if (!(dot(b[i], signs) < threshold[i])) return false;
        return true;
    };

    SignVector xi;
    std::uint64_t trials = 0;
    while (true) {
        if (trials == sampler.max_trials()) throw BudgetExhausted(trials);
        sampler.draw_signs(xi, n);
        ++trials;
        if (accepted(xi)) break;
    }

    for (std::size_t i : tested) rep.margins[i] = threshold[i] - dot(b[i], signs);
    rep.xi = xi;
    rep.trials = trials;
    rep.x_tilde.resize(n);
    for (std::size_t j = 0; j < n; ++j) rep.x_tilde[j] = scale[j] * static_cast<double>(xi[j]);
    rep.objective = objective(inst, rep.x_tilde);
    return {Candidate{rep.x_tilde, rep.objective, source}, std::move(rep)};
}

}  // namespace detail

/// Relaxation-free rounding: x~ = n^(-1/p) xi.
inline std::pair<Candidate, RoundingReport> sign_rounding(const ProblemInstance& inst, double rho,
                                                          SignSampler& sampler) {
    const Vector scale(inst.n(), inst.p().inv_root(inst.n()));
    return detail::rejection_round(inst, rho, scale, sampler, Source::SignRounding);
}

/// The relaxation-free algorithm under its conventional name.
inline std::pair<Candidate, RoundingReport> algorithm2(const ProblemInstance& inst, double rho,
                                                       SignSampler& sampler) {
    return sign_rounding(inst, rho, sampler);
}

/// Whether the value handed to certify_bound is v(P) itself (or a lower
/// estimate of it) or only an upper bound such as the SDP optimum.
enum class ValueKind { Exact, UpperBound };

struct BoundCertificate {
    bool asserted;        ///< false when only an upper bound was available
    bool holds;           ///< f(x~) > ratio * v; vacuous for ratio <= 0
    double threshold;     ///< ratio * v
    double achieved_ratio;  ///< f(x~) / v
};

/**
 * With ValueKind::Exact, checks f(x~) > ratio * v(P). Passing a lower
 * estimate of v(P) (e.g. a grid-search value) keeps the check sound: it is
 * a consequence of the guarantee whenever ratio >= 0. With
 * ValueKind::UpperBound nothing is asserted and achieved_ratio is a lower
 * bound on f(x~)/v(P).
 */
inline BoundCertificate certify_bound(const RoundingReport& report, double value, double ratio,
                                      ValueKind kind = ValueKind::Exact) {
    if (value < 0.0 || report.objective < 0.0)
        throw std::invalid_argument("certify_bound: objective values must be non-negative");
    BoundCertificate c{};
    c.threshold = ratio * value;
    c.achieved_ratio = value > 0.0 ? report.objective / value : 0.0;
    if (kind == ValueKind::UpperBound) {
        c.asserted = false;
        c.holds = true;
        return c;
    }
    c.asserted = true;
    c.holds = ratio <= 0.0 || report.objective > c.threshold;
    return c;
}

/// Monte Carlo estimate of Pr(b^T xi >= alpha ||b||_2) for fair signs xi.
inline double tail_bound_estimate(std::span<const double> b, double alpha, std::uint64_t samples,
                                  SignSampler& sampler) {
    const double bn = std::sqrt(squared_norm(b));
    if (b.empty() || bn == 0.0) throw std::invalid_argument("tail_bound_estimate: b must be nonzero");
    if (samples == 0) throw std::invalid_argument("tail_bound_estimate: samples must be positive");
    const double threshold = alpha * bn;
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        double v = 0.0;
        for (double bj : b) v += bj * sampler.next_sign();
        if (v >= threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

/// Mean number of draws until acceptance over `runs` independent executions.
inline double expected_trials_check(const ProblemInstance& inst, double rho, std::uint64_t runs,
                                    SignSampler& sampler) {
    if (runs == 0) throw std::invalid_argument("expected_trials_check: runs must be positive");
    double total = 0.0;
    for (std::uint64_t r = 0; r < runs; ++r) total += static_cast<double>(sign_rounding(inst, rho, sampler).second.trials);
    return total / static_cast<double>(runs);
}

}  // namespace maximin

#endif  // MAXIMIN_SIGN_ROUNDING_HPP
