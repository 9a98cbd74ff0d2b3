#pragma once

// Central finite differences of a scalar field, used to cross-check the
// assembled quadratic energy against the raw atom-wise energy sums.

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "support/dense.hpp"

namespace testsupport {

using ScalarField = std::function<double(const std::vector<double>&)>;

inline std::vector<double> fd_gradient(const ScalarField& f, std::vector<double> y, double h) {
    std::vector<double> g(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        y[i] = yi + h;
        const double fp = f(y);
        y[i] = yi - h;
        const double fm = f(y);
        y[i] = yi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

inline DenseMatrix fd_hessian(const ScalarField& f, std::vector<double> y, double h) {
    const std::size_t n = y.size();
    DenseMatrix hess(n, n);
    const double f0 = f(y);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double yi = y[i];
            const double yj = y[j];
            double v;
            if (i == j) {
                y[i] = yi + h;
                const double fp = f(y);
                y[i] = yi - h;
                const double fm = f(y);
                v = (fp - 2.0 * f0 + fm) / (h * h);
            } else {
                y[i] = yi + h;
                y[j] = yj + h;
                const double fpp = f(y);
                y[j] = yj - h;
                const double fpm = f(y);
                y[i] = yi - h;
                y[j] = yj + h;
                const double fmp = f(y);
                y[j] = yj - h;
                const double fmm = f(y);
                v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
            y[i] = yi;
            y[j] = yj;
            hess.at(i, j) = v;
            hess.at(j, i) = v;
        }
    }
    return hess;
}

// The same differences evaluated in extended precision.  For a quadratic
// energy the central formulas carry no truncation error, so the only error
// left is roundoff of the energy itself; at step 1e-5 that floor sits near
// eps/h^2 ~ 1e-5 in double, far too big for a 1e-6 gate, while long double
// evaluation pushes it below 1e-8.
using ScalarFieldLD = std::function<long double(const std::vector<long double>&)>;

inline std::vector<double> fd_gradient_ld(const ScalarFieldLD& f, std::vector<long double> y,
                                          long double h) {
    std::vector<double> g(y.size(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const long double yi = y[i];
        y[i] = yi + h;
        const long double fp = f(y);
        y[i] = yi - h;
        const long double fm = f(y);
        y[i] = yi;
        g[i] = static_cast<double>((fp - fm) / (2.0L * h));
    }
    return g;
}

inline DenseMatrix fd_hessian_ld(const ScalarFieldLD& f, std::vector<long double> y,
                                 long double h) {
    const std::size_t n = y.size();
    DenseMatrix hess(n, n);
    const long double f0 = f(y);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const long double yi = y[i];
            const long double yj = y[j];
            long double v;
            if (i == j) {
                y[i] = yi + h;
                const long double fp = f(y);
                y[i] = yi - h;
                const long double fm = f(y);
                v = (fp - 2.0L * f0 + fm) / (h * h);
            } else {
                y[i] = yi + h;
                y[j] = yj + h;
                const long double fpp = f(y);
                y[j] = yj - h;
                const long double fpm = f(y);
                y[i] = yi - h;
                y[j] = yj + h;
                const long double fmp = f(y);
                y[j] = yj - h;
                const long double fmm = f(y);
                v = (fpp - fpm - fmp + fmm) / (4.0L * h * h);
            }
            y[i] = yi;
            y[j] = yj;
            hess.at(i, j) = static_cast<double>(v);
            hess.at(j, i) = static_cast<double>(v);
        }
    }
    return hess;
}

// Deterministic perturbed configurations around a base field.
inline std::vector<double> random_point(std::mt19937& rng, const std::vector<double>& base,
                                        double amplitude) {
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    std::vector<double> y = base;
    for (double& v : y) v += dist(rng);
    return y;
}

} // namespace testsupport
