#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcfk {

// Symmetric banded matrix in lower band storage: band k holds A(i+k, i).
// All system matrices in this project have half bandwidth 2 (NNN coupling
// straddles at most one repatom), but the width is kept generic.
template <typename Real>
class BandedMatrix {
public:
    BandedMatrix(std::size_t n, std::size_t half_bandwidth)
        : n_(n), bw_(half_bandwidth), band_((half_bandwidth + 1) * n, Real(0)) {}

    std::size_t size() const { return n_; }
    std::size_t half_bandwidth() const { return bw_; }

    Real get(std::size_t i, std::size_t j) const {
        const auto [lo, off] = split(i, j);
        return off > bw_ ? Real(0) : band_[off * n_ + lo];
    }

    void add(std::size_t i, std::size_t j, Real value) { entry(i, j) += value; }
    void set(std::size_t i, std::size_t j, Real value) { entry(i, j) = value; }

    std::vector<Real> apply(const std::vector<Real>& x) const {
        check_size(x.size(), "apply");
        std::vector<Real> y(n_, Real(0));
        for (std::size_t i = 0; i < n_; ++i) {
            Real acc = band_[i] * x[i];
            for (std::size_t k = 1; k <= bw_; ++k) {
                if (i >= k) acc += band_[k * n_ + (i - k)] * x[i - k];
                if (i + k < n_) acc += band_[k * n_ + i] * x[i + k];
            }
            y[i] = acc;
        }
        return y;
    }

    // b - A x, accumulated in long double so that iterative refinement sees
    // a meaningful residual even when b and A x nearly cancel.
    std::vector<Real> residual(const std::vector<Real>& b, const std::vector<Real>& x) const {
        check_size(x.size(), "residual");
        check_size(b.size(), "residual");
        std::vector<Real> r(n_, Real(0));
        for (std::size_t i = 0; i < n_; ++i) {
            long double acc = static_cast<long double>(b[i]);
            acc -= static_cast<long double>(band_[i]) * static_cast<long double>(x[i]);
            for (std::size_t k = 1; k <= bw_; ++k) {
                if (i >= k)
                    acc -= static_cast<long double>(band_[k * n_ + (i - k)]) *
                           static_cast<long double>(x[i - k]);
                if (i + k < n_)
                    acc -= static_cast<long double>(band_[k * n_ + i]) *
                           static_cast<long double>(x[i + k]);
            }
            r[i] = static_cast<Real>(acc);
        }
        return r;
    }

    // Contiguous principal submatrix starting at `first`, `count` rows.
    BandedMatrix principal_block(std::size_t first, std::size_t count) const {
        if (first + count > n_) throw std::out_of_range("BandedMatrix: principal block out of range");
        BandedMatrix out(count, bw_);
        for (std::size_t k = 0; k <= bw_; ++k)
            for (std::size_t i = 0; i + k < count; ++i)
                out.band_[k * count + i] = band_[k * n_ + (first + i)];
        return out;
    }

    template <typename Other>
    BandedMatrix<Other> cast() const {
        BandedMatrix<Other> out(n_, bw_);
        for (std::size_t k = 0; k <= bw_; ++k)
            for (std::size_t i = 0; i + k < n_; ++i)
                out.set(i + k, i, static_cast<Other>(band_[k * n_ + i]));
        return out;
    }

private:
    static std::pair<std::size_t, std::size_t> split(std::size_t i, std::size_t j) {
        return i >= j ? std::pair{j, i - j} : std::pair{i, j - i};
    }
    Real& entry(std::size_t i, std::size_t j) {
        const auto [lo, off] = split(i, j);
        if (off > bw_ || lo + off >= n_)
            throw std::out_of_range("BandedMatrix: entry outside band");
        return band_[off * n_ + lo];
    }
    void check_size(std::size_t m, const char* op) const {
        if (m != n_) throw std::invalid_argument(std::string("BandedMatrix: size mismatch in ") + op);
    }

    std::size_t n_, bw_;
    std::vector<Real> band_;
};

// Cholesky factorization A = L L^T of a banded SPD matrix.  A nonpositive
// pivot is reported as a coercivity defect; nothing is regularized.
template <typename Real>
class BandedCholesky {
public:
    explicit BandedCholesky(const BandedMatrix<Real>& a)
        : n_(a.size()), bw_(a.half_bandwidth()), l_((bw_ + 1) * n_, Real(0)) {
        for (std::size_t j = 0; j < n_; ++j) {
            Real diag = a.get(j, j);
            const std::size_t k0 = j > bw_ ? j - bw_ : 0;
            for (std::size_t k = k0; k < j; ++k) diag -= lo(j, k) * lo(j, k);
            if (!(diag > Real(0)))
                throw std::runtime_error("BandedCholesky: nonpositive pivot at row " +
                                         std::to_string(j) + " (matrix not coercive)");
            lo(j, j) = std::sqrt(diag);
            for (std::size_t i = j + 1; i <= j + bw_ && i < n_; ++i) {
                Real s = a.get(i, j);
                const std::size_t kk0 = i > bw_ ? i - bw_ : 0;
                for (std::size_t k = kk0; k < j; ++k) s -= lo(i, k) * lo(j, k);
                lo(i, j) = s / lo(j, j);
            }
        }
    }

    std::vector<Real> solve(std::vector<Real> b) const {
        if (b.size() != n_) throw std::invalid_argument("BandedCholesky: rhs size mismatch");
        for (std::size_t i = 0; i < n_; ++i) { // L z = b
            Real s = b[i];
            const std::size_t k0 = i > bw_ ? i - bw_ : 0;
            for (std::size_t k = k0; k < i; ++k) s -= lo(i, k) * b[k];
            b[i] = s / lo(i, i);
        }
        for (std::size_t ii = n_; ii-- > 0;) { // L^T x = z
            Real s = b[ii];
            for (std::size_t k = ii + 1; k <= ii + bw_ && k < n_; ++k) s -= lo(k, ii) * b[k];
            b[ii] = s / lo(ii, ii);
        }
        return b;
    }

private:
    Real& lo(std::size_t i, std::size_t j) { return l_[(i - j) * n_ + j]; }
    Real lo(std::size_t i, std::size_t j) const { return l_[(i - j) * n_ + j]; }

    std::size_t n_, bw_;
    std::vector<Real> l_;
};

} // namespace qcfk
