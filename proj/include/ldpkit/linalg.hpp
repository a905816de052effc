#pragma once

#include <ldpkit/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ldpkit {

struct SingularMatrix : std::runtime_error {
    SingularMatrix() : std::runtime_error("gram_solve: singular matrix") {}
};

using Vec = std::vector<Rational>;

/*
 * Small dense symmetric matrix over Rational. Used exclusively for
 * intersection matrices of curve configurations (orders rarely above 12),
 * so O(n^3) exact elimination is more than enough.
 */
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order) : n_(order), a_(order * order) {}

    std::size_t order() const { return n_; }

    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, const Rational& v) {
        a_[i * n_ + j] = v;
        a_[j * n_ + i] = v;
    }

    bool is_symmetric() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<Rational> a_;
};

namespace detail {

// Forward elimination on an augmented matrix; returns the number of row swaps
// (for the determinant sign) or -1 if a zero pivot column is hit.
inline int eliminate(std::vector<Vec>& m, std::size_t n) {
    int swaps = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv][k].is_zero()) ++piv;
        if (piv == n) return -1;
        if (piv != k) {
            std::swap(m[piv], m[k]);
            ++swaps;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            Rational f = m[i][k] / m[k][k];
            for (std::size_t j = k; j < m[i].size(); ++j) m[i][j] -= f * m[k][j];
        }
    }
    return swaps;
}

} // namespace detail

inline Rational det(const SymMatrix& M) {
    const std::size_t n = M.order();
    if (n == 0) return Rational(1);
    std::vector<Vec> m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = M(i, j);
    int swaps = detail::eliminate(m, n);
    if (swaps < 0) return Rational(0);
    Rational d(1);
    for (std::size_t k = 0; k < n; ++k) d *= m[k][k];
    return (swaps % 2) ? -d : d;
}

// Exact solve of M x = b. Throws SingularMatrix when det M = 0.
inline Vec gram_solve(const SymMatrix& M, const Vec& b) {
    const std::size_t n = M.order();
    if (b.size() != n) throw std::invalid_argument("gram_solve: dimension mismatch");
    if (n == 0) return {};
    std::vector<Vec> m(n, Vec(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = M(i, j);
        m[i][n] = b[i];
    }
    if (detail::eliminate(m, n) < 0) throw SingularMatrix{};
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = m[i][n];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }
    return x;
}

// A symmetric matrix is negative definite iff the leading principal minors
// alternate in sign starting negative: sign(minor_k) = (-1)^k.
inline bool is_negative_definite(const SymMatrix& M) {
    const std::size_t n = M.order();
    for (std::size_t k = 1; k <= n; ++k) {
        SymMatrix sub(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i; j < k; ++j) sub.set(i, j, M(i, j));
        Rational d = det(sub);
        int expect = (k % 2) ? -1 : 1;
        if (d.sign() != expect) return false;
    }
    return true;
}

} // namespace ldpkit
