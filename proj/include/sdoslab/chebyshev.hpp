#pragma once
// Chebyshev expansions of test functions on a spectral interval, with optional
// Jackson damping. These drive the kernel-polynomial functional calculus.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sdoslab/test_function.hpp"

namespace sdoslab {

enum class Damping { none, jackson };

inline std::vector<double> jackson_factors(int ncoeff) {
    // Standard KPM damping for a truncated series with ncoeff coefficients.
    std::vector<double> g(ncoeff);
    const double alpha = std::acos(-1.0) / (ncoeff + 1);
    const double cot = std::cos(alpha) / std::sin(alpha);
    for (int m = 0; m < ncoeff; ++m)
        g[m] = ((ncoeff - m + 1) * std::cos(m * alpha) + std::sin(m * alpha) * cot) /
               (ncoeff + 1);
    return g;
}

struct ChebExpansion {
    double lo = -1.0, hi = 1.0;
    std::vector<double> coeffs;  // c_0..c_M, damping already applied
    Damping damping = Damping::none;
    double recon_error = 0.0;  // sup |reconstruction - f| on a 1e3-point grid

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double to_unit(double lam) const { return (2.0 * lam - hi - lo) / (hi - lo); }

    double eval(double lam) const {
        const double x = to_unit(lam);
        double b1 = 0.0, b2 = 0.0;
        for (std::size_t m = coeffs.size() - 1; m > 0; --m) {
            const double t = b1;
            b1 = 2.0 * x * b1 - b2 + coeffs[m];
            b2 = t;
        }
        return x * b1 - b2 + coeffs[0];
    }
};

// Coefficients by Chebyshev-Gauss quadrature with 2(M+1) cosine nodes; the
// cos(m theta) factors come from the stable two-term trig recurrence.
template <class F>
ChebExpansion cheb_coeffs(const F& f, double lo, double hi, int M,
                          Damping damping = Damping::none) {
    if (!(hi > lo)) throw std::invalid_argument("cheb_coeffs: degenerate interval");
    if (M < 8) throw std::invalid_argument("cheb_coeffs: require degree M >= 8");
    ChebExpansion e;
    e.lo = lo;
    e.hi = hi;
    e.damping = damping;
    e.coeffs.assign(M + 1, 0.0);

    const int K = 2 * (M + 1);
    const double pi = std::acos(-1.0);
    const double c = 0.5 * (hi + lo), r = 0.5 * (hi - lo);
    for (int k = 0; k < K; ++k) {
        const double theta = (k + 0.5) * pi / K;
        const double fv = f(c + r * std::cos(theta));
        if (fv == 0.0) continue;
        // cos(m*theta) via recurrence.
        const double ct = std::cos(theta);
        double cm1 = 1.0, cm = ct;
        e.coeffs[0] += fv;
        if (M >= 1) e.coeffs[1] += fv * ct;
        for (int m = 2; m <= M; ++m) {
            const double cnew = 2.0 * ct * cm - cm1;
            cm1 = cm;
            cm = cnew;
            e.coeffs[m] += fv * cm;
        }
    }
    e.coeffs[0] /= K;
    for (int m = 1; m <= M; ++m) e.coeffs[m] *= 2.0 / K;

    if (damping == Damping::jackson) {
        const auto g = jackson_factors(M + 1);
        for (int m = 0; m <= M; ++m) e.coeffs[m] *= g[m];
    }

    double err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double lam = lo + (hi - lo) * (i + 0.5) / 1000.0;
        err = std::max(err, std::abs(e.eval(lam) - f(lam)));
    }
    e.recon_error = err;
    return e;
}

inline ChebExpansion cheb_coeffs(const TestFunction& f, double lo, double hi, int M,
                                 Damping damping = Damping::none) {
    return cheb_coeffs([&f](double x) { return f.eval(x); }, lo, hi, M, damping);
}

}  // namespace sdoslab
