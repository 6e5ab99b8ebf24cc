#pragma once
// Smooth compactly supported test functions f: three concrete C_0^inf families
// (plateau bump, smoothly windowed Gaussian, polynomial times bump).

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdoslab {

// C^inf transition 0 -> 1 on [0, 1] built from exp(-1/t).
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// exp(1 - 1/(1-t^2)) on (-1,1), zero outside; peak value 1 at t = 0.
inline double std_bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

struct TestFunction {
    enum class Kind { plateau_bump, gaussian_bump, polynomial_bump };

    Kind kind = Kind::gaussian_bump;
    double a = 0.0, b = 1.0;       // support [a, b]
    double p = 0.0, q = 0.0;       // plateau sub-interval (plateau_bump)
    double mu = 0.0, sigma = 1.0;  // gaussian_bump
    double shoulder = 1.0;         // gaussian_bump window width
    std::vector<double> coeffs;    // polynomial_bump, power basis

    double eval(double lam) const {
        if (lam <= a || lam >= b) return 0.0;
        switch (kind) {
            case Kind::plateau_bump: {
                if (lam >= p && lam <= q) return 1.0;
                if (lam < p) return smoothstep((lam - a) / (p - a));
                return smoothstep((b - lam) / (b - q));
            }
            case Kind::gaussian_bump: {
                const double g = std::exp(-0.5 * (lam - mu) * (lam - mu) / (sigma * sigma));
                return g * smoothstep((lam - a) / shoulder) * smoothstep((b - lam) / shoulder);
            }
            case Kind::polynomial_bump: {
                const double t = (2.0 * lam - a - b) / (b - a);
                double pv = 0.0;
                for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) pv = pv * t + *it;
                return pv * std_bump(t);
            }
        }
        return 0.0;
    }

    double operator()(double lam) const { return eval(lam); }

    static TestFunction plateau(double a, double p, double q, double b) {
        if (!(a < p && p <= q && q < b))
            throw std::invalid_argument("TestFunction: need a < p <= q < b");
        TestFunction f;
        f.kind = Kind::plateau_bump;
        f.a = a;
        f.p = p;
        f.q = q;
        f.b = b;
        return f;
    }

    static TestFunction gaussian(double mu, double sigma, double a, double b,
                                 double shoulder = 1.0) {
        if (!(a < b) || !(sigma > 0.0) || !(shoulder > 0.0))
            throw std::invalid_argument("TestFunction: bad gaussian parameters");
        TestFunction f;
        f.kind = Kind::gaussian_bump;
        f.mu = mu;
        f.sigma = sigma;
        f.a = a;
        f.b = b;
        f.shoulder = shoulder;
        return f;
    }

    static TestFunction polynomial(std::vector<double> coeffs, double a, double b) {
        if (!(a < b)) throw std::invalid_argument("TestFunction: bad support");
        TestFunction f;
        f.kind = Kind::polynomial_bump;
        f.coeffs = std::move(coeffs);
        f.a = a;
        f.b = b;
        return f;
    }
};

}  // namespace sdoslab
