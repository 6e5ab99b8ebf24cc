#pragma once
// Functional calculus f(H^h): dense eigendecomposition oracle, the Chebyshev
// (KPM) fast path, the exact free-lattice diagonal by Brillouin-zone
// quadrature, and the resolvent-polynomial approximation of f.

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#ifdef SDOSLAB_USE_LAPACKE
#include <lapacke.h>
#endif

#include "sdoslab/chebyshev.hpp"
#include "sdoslab/hamiltonian.hpp"
#include "sdoslab/parallel.hpp"
#include "sdoslab/quadrature.hpp"
#include "sdoslab/test_function.hpp"

namespace sdoslab {

inline constexpr std::size_t kDenseSiteCap = 5000;

// Full eigendecomposition of a symmetric operator; the oracle behind the
// dense functional-calculus path.
struct DenseEig {
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;  // columns

    static DenseEig compute(Eigen::MatrixXd A) {
        DenseEig e;
#ifdef SDOSLAB_USE_LAPACKE
        // Keep the BLAS single-threaded: determinism must not depend on the
        // backend's own pool (our parallelism is slot-indexed upstream).
        setenv("OPENBLAS_NUM_THREADS", "1", 0);
        const lapack_int n = static_cast<lapack_int>(A.rows());
        e.evals.resize(n);
        const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(),
                                               n, e.evals.data());
        if (info != 0) throw std::runtime_error("dsyevd failed, info != 0");
        e.evecs = std::move(A);
#else
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("eigendecomposition failed");
        e.evals = es.eigenvalues();
        e.evecs = es.eigenvectors();
#endif
        return e;
    }

    template <class F>
    Eigen::VectorXd column_of(const F& f, std::size_t k) const {
        Eigen::VectorXd fw(evals.size());
        for (Eigen::Index i = 0; i < evals.size(); ++i) fw[i] = f(evals[i]);
        return evecs * (fw.array() * evecs.row(k).transpose().array()).matrix();
    }

    // All diagonal entries of f(A): sum_i f(w_i) V_{ki}^2.
    template <class F>
    Eigen::VectorXd diagonal_of(const F& f) const {
        Eigen::VectorXd fw(evals.size());
        for (Eigen::Index i = 0; i < evals.size(); ++i) fw[i] = f(evals[i]);
        return (evecs.array().square().matrix() * fw);
    }
};

inline DenseEig dense_eig(const Hamiltonian& H) {
    if (H.size() > kDenseSiteCap)
        throw RefusalError("dense path refused: box exceeds " +
                           std::to_string(kDenseSiteCap) + " sites");
    return DenseEig::compute(H.dense());
}

// Chebyshev interval enclosing the spectrum, padded so the rescaled operator
// stays strictly inside [-1, 1].
inline std::pair<double, double> kpm_interval(const Hamiltonian& H, double pad = 0.5) {
    const auto si = H.spectral_interval();
    return {si[0] - pad, si[1] + pad};
}

// f(H) delta_k via the three-term Chebyshev recurrence; full column.
inline Eigen::VectorXd kpm_column(const Hamiltonian& H, const ChebExpansion& e,
                                  std::size_t k) {
    const std::size_t n = H.size();
    const double c = 0.5 * (e.hi + e.lo), r = 0.5 * (e.hi - e.lo);
    Eigen::VectorXd t0 = Eigen::VectorXd::Zero(n), t1(n), tmp(n);
    t0[k] = 1.0;
    H.matvec(t0.data(), t1.data());
    t1 = (t1 - c * t0) / r;
    Eigen::VectorXd acc = e.coeffs[0] * t0 + e.coeffs[1] * t1;
    for (int m = 2; m <= e.degree(); ++m) {
        H.matvec(t1.data(), tmp.data());
        tmp = 2.0 * ((tmp - c * t1) / r) - t0;
        t0.swap(t1);
        t1.swap(tmp);
        acc += e.coeffs[m] * t1;
    }
    return acc;
}

// <f(H) delta_k, delta_k> only; same recurrence, scalar accumulation.
inline double kpm_site_diag(const Hamiltonian& H, const ChebExpansion& e,
                            std::size_t k) {
    const std::size_t n = H.size();
    const double c = 0.5 * (e.hi + e.lo), r = 0.5 * (e.hi - e.lo);
    Eigen::VectorXd t0 = Eigen::VectorXd::Zero(n), t1(n), tmp(n);
    t0[k] = 1.0;
    H.matvec(t0.data(), t1.data());
    t1 = (t1 - c * t0) / r;
    double acc = e.coeffs[0] * t0[k] + e.coeffs[1] * t1[k];
    for (int m = 2; m <= e.degree(); ++m) {
        H.matvec(t1.data(), tmp.data());
        tmp = 2.0 * ((tmp - c * t1) / r) - t0;
        t0.swap(t1);
        t1.swap(tmp);
        acc += e.coeffs[m] * t1[k];
    }
    return acc;
}

enum class Method { dense, kpm };

struct FuncalcOptions {
    Method method = Method::dense;
    int degree = 2048;
    Damping damping = Damping::none;
    int threads = 1;
    double pad = 0.5;
};

// Degree heuristic: resolution must scale with spectral width over the width
// of f, otherwise accuracy silently degrades as h shrinks.
inline int default_kpm_degree(const Hamiltonian& H, const TestFunction& f,
                              double per_unit = 40.0, int cap = 16384) {
    const auto si = H.spectral_interval();
    const double fw = std::max(f.b - f.a, 1e-6);
    const int m = static_cast<int>(std::ceil(per_unit * (si[1] - si[0]) / fw));
    return std::min(cap, std::max(64, m));
}

// f(H) delta_k for one site.
inline Eigen::VectorXd f_of_H_column(const Hamiltonian& H, const TestFunction& f,
                                     std::size_t k, const FuncalcOptions& opt) {
    if (k >= H.size()) throw std::invalid_argument("f_of_H_column: site out of range");
    if (opt.method == Method::dense) {
        const auto e = dense_eig(H);
        return e.column_of([&f](double x) { return f.eval(x); }, k);
    }
    const auto iv = kpm_interval(H, opt.pad);
    const auto e = cheb_coeffs(f, iv.first, iv.second, opt.degree, opt.damping);
    return kpm_column(H, e, k);
}

// Diagonal of f(H) on a list of sites (all sites when empty), parallel over
// sites with slot-indexed writes.
inline Eigen::VectorXd f_of_H_diagonal(const Hamiltonian& H, const TestFunction& f,
                                       const std::vector<std::size_t>& targets,
                                       const FuncalcOptions& opt) {
    std::vector<std::size_t> all;
    const std::vector<std::size_t>* tg = &targets;
    if (targets.empty()) {
        all.resize(H.size());
        for (std::size_t i = 0; i < H.size(); ++i) all[i] = i;
        tg = &all;
    }
    Eigen::VectorXd out(tg->size());
    if (opt.method == Method::dense) {
        const auto e = dense_eig(H);
        const Eigen::VectorXd d = e.diagonal_of([&f](double x) { return f.eval(x); });
        for (std::size_t i = 0; i < tg->size(); ++i) out[i] = d[(*tg)[i]];
        return out;
    }
    const auto iv = kpm_interval(H, opt.pad);
    const auto e = cheb_coeffs(f, iv.first, iv.second, opt.degree, opt.damping);
    parallel_for(tg->size(), opt.threads,
                 [&](std::size_t i) { out[i] = kpm_site_diag(H, e, (*tg)[i]); });
    return out;
}

// (h/2pi)^d integral over the Brillouin zone of f(theta_h(xi)): the
// k-independent diagonal <f(-Delta^h) delta_hk, delta_hk> on the infinite
// lattice. Gauss-Legendre tensor quadrature, order doubled until stable.
inline double free_diagonal(const LatticeSpec& spec, const TestFunction& f, int Q = 64,
                            double tol = 1e-9) {
    spec.validate();
    if (Q < 16) throw std::invalid_argument("free_diagonal: Q >= 16 per axis");
    const int d = spec.dim();
    const double pih = std::acos(-1.0) / spec.h;
    double prev = 0.0;
    for (int round = 0;; ++round) {
        const auto gl = gauss_legendre(Q);
        std::vector<double> th(Q), w(Q);
        for (int i = 0; i < Q; ++i) {
            th[i] = symbol_axis(spec.h, pih * gl.x[i]);
            w[i] = gl.w[i] * pih;  // maps [-1,1] -> [-pi/h, pi/h]
        }
        // Tensor sum over d axes.
        std::vector<int> idx(d, 0);
        double s = 0.0;
        while (true) {
            double wp = 1.0, tsum = 0.0;
            for (int j = 0; j < d; ++j) {
                wp *= w[idx[j]];
                tsum += th[idx[j]];
            }
            s += wp * f.eval(tsum);
            int j = d - 1;
            while (j >= 0 && ++idx[j] == Q) idx[j--] = 0;
            if (j < 0) break;
        }
        const double val = s * std::pow(spec.h / (2.0 * std::acos(-1.0)), d);
        if (round > 0 && std::abs(val - prev) < tol) return val;
        if (round >= 3) return val;
        prev = val;
        Q *= 2;
    }
}

// Weierstrass device of the proofs: a polynomial g with
//   sup_{lambda >= -lambda0/2} |(lambda+lambda0)^{m0} f(lambda) - g((lambda+lambda0)^{-1})| < eps,
// realized as a Chebyshev polynomial in s = (lambda+lambda0)^{-1} on [0, 2/lambda0].
struct ResolventPolyApprox {
    double lambda0 = 1.0;
    int m0 = 2;
    ChebExpansion g;        // polynomial in s on [0, 2/lambda0]
    double sup_error = 0.0; // dense-grid sup of the weighted difference
    int degree = 0;

    // f_eps(lambda) = (lambda+lambda0)^{-m0} g((lambda+lambda0)^{-1})
    double eval(double lam) const {
        const double s = 1.0 / (lam + lambda0);
        return std::pow(s, m0) * g.eval(s);
    }
};

template <class F>
ResolventPolyApprox resolvent_poly_approx(const F& f, double lambda0, int m0, double eps,
                                          int max_degree = 4096) {
    if (!(lambda0 > 0.0)) throw std::invalid_argument("resolvent_poly_approx: lambda0 > 0");
    if (m0 < 1) throw std::invalid_argument("resolvent_poly_approx: m0 >= 1");
    const double smax = 2.0 / lambda0;
    //  F(s) = s^{-m0} f(1/s - lambda0) extended by 0 at s = 0.
    auto Fs = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double fv = f(1.0 / s - lambda0);
        if (fv == 0.0) return 0.0;
        return std::pow(s, -m0) * fv;
    };
    auto grid_err = [&](const ChebExpansion& g) {
        double err = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            // lambda grid on [-lambda0/2, lambda_hi] with a wide tail.
            const double lam = -0.5 * lambda0 + i * (40.0 + lambda0) / 4000.0;
            const double s = 1.0 / (lam + lambda0);
            err = std::max(err, std::abs(std::pow(lam + lambda0, m0) * f(lam) - g.eval(s)));
        }
        return err;
    };
    for (int deg = 16; deg <= max_degree; deg *= 2) {
        auto g = cheb_coeffs(Fs, 0.0, smax, deg, Damping::none);
        const double err = grid_err(g);
        if (err < eps) {
            ResolventPolyApprox out;
            out.lambda0 = lambda0;
            out.m0 = m0;
            out.g = std::move(g);
            out.sup_error = err;
            out.degree = deg;
            return out;
        }
    }
    throw std::runtime_error("resolvent_poly_approx: eps unreachable at max degree");
}

inline ResolventPolyApprox resolvent_poly_approx(const TestFunction& f, double lambda0,
                                                 int m0, double eps,
                                                 int max_degree = 4096) {
    return resolvent_poly_approx([&f](double x) { return f.eval(x); }, lambda0, m0, eps,
                                 max_degree);
}

}  // namespace sdoslab
