/**
 * @file linalg.hpp
 * @brief Small dense symmetric matrices and a cyclic Jacobi eigensolver.
 *
 * Sized for the lifted (n+1)x(n+1) matrices of the relaxation (n+1 <= 64).
 */

#ifndef MAXIMIN_LINALG_HPP
#define MAXIMIN_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "maximin/core.hpp"

namespace maximin {

/// Dense square matrix, row-major. Symmetry is the caller's contract.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim, double fill = 0.0) : dim_(dim), a_(dim * dim, fill) {}

    static SymMatrix identity(std::size_t dim) {
        SymMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t dim() const { return dim_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    /// Sets (i,j) and (j,i).
    void set_sym(std::size_t i, std::size_t j, double v) {
        (*this)(i, j) = v;
        (*this)(j, i) = v;
    }

    std::vector<double>& data() { return a_; }
    const std::vector<double>& data() const { return a_; }

    SymMatrix& operator+=(const SymMatrix& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    SymMatrix& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

    /// Frobenius inner product A . B = tr(A B^T).
    friend double inner(const SymMatrix& a, const SymMatrix& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.a_.size(); ++k) s += a.a_[k] * b.a_[k];
        return s;
    }

    double frobenius_norm() const { return std::sqrt(inner(*this, *this)); }

    double max_asymmetry() const {
        double r = 0.0;
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j) r = std::max(r, std::abs((*this)(i, j) - (*this)(j, i)));
        return r;
    }

    void symmetrize() {
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = i + 1; j < dim_; ++j) set_sym(i, j, 0.5 * ((*this)(i, j) + (*this)(j, i)));
    }

private:
    std::size_t dim_ = 0;
    std::vector<double> a_;
};

struct EigenDecomposition {
    std::vector<double> values;  ///< ascending
    SymMatrix vectors;           ///< column k is the eigenvector of values[k]
    int sweeps = 0;
};

inline constexpr int kJacobiMaxSweeps = 100;

/**
 * @brief Cyclic Jacobi eigendecomposition of a symmetric matrix.
 *
 * Sweeps row by row over the strict upper triangle, annihilating each
 * off-diagonal entry with a Rutishauser-stabilized rotation, until the
 * off-diagonal mass is negligible against the diagonal.
 */
inline EigenDecomposition jacobi_eigen(SymMatrix a, int max_sweeps = kJacobiMaxSweeps) {
    const std::size_t n = a.dim();
    EigenDecomposition out;
    out.vectors = SymMatrix::identity(n);
    SymMatrix& v = out.vectors;

    auto off_norm2 = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
        return s;
    };
    auto diag_norm2 = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) s += a(p, p) * a(p, p);
        return s;
    };

    int sweep = 0;
    for (;; ++sweep) {
        const double off = off_norm2();
        if (off == 0.0 || off <= 1e-30 * diag_norm2()) break;
        if (sweep == max_sweeps) throw NumericalError("jacobi_eigen: no convergence within sweep cap");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                // Skip entries already below rounding of both diagonal terms.
                if (sweep > 3 && std::abs(apq) * 1e18 < std::abs(app) && std::abs(apq) * 1e18 < std::abs(aqq)) {
                    a.set_sym(p, q, 0.0);
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a.set_sym(p, q, 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = a(r, p);
                        const double arq = a(r, q);
                        a.set_sym(r, p, arp - s * (arq + tau * arp));
                        a.set_sym(r, q, arq + s * (arp - tau * arq));
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    out.sweeps = sweep;

    // Sort ascending, permuting eigenvector columns along.
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    out.values.resize(n);
    SymMatrix sorted(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) sorted(r, k) = v(r, order[k]);
    }
    out.vectors = std::move(sorted);
    return out;
}

/// V diag(f(lambda)) V^T for a decomposition.
template <typename Fn>
SymMatrix reassemble(const EigenDecomposition& e, Fn&& f) {
    const std::size_t n = e.values.size();
    SymMatrix out(n);
    std::vector<double> lam(n);
    for (std::size_t k = 0; k < n; ++k) lam[k] = f(e.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                if (lam[k] != 0.0) s += e.vectors(i, k) * lam[k] * e.vectors(j, k);
            out.set_sym(i, j, s);
        }
    }
    return out;
}

inline double min_eigenvalue(const SymMatrix& m) { return jacobi_eigen(m).values.front(); }

/// Nearest PSD matrix in Frobenius norm: clamp negative eigenvalues to zero.
inline SymMatrix psd_project(const SymMatrix& m) {
    const auto e = jacobi_eigen(m);
    if (e.values.front() >= 0.0) return m;
    return reassemble(e, [](double l) { return l > 0.0 ? l : 0.0; });
}

}  // namespace maximin

#endif  // MAXIMIN_LINALG_HPP
