#pragma once
// Lattice Fourier transform F^h, spectral projections P^h_T on periodic boxes,
// and the Riemann-sum / decay diagnostics of the transform.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sdoslab/hamiltonian.hpp"
#include "sdoslab/lattice.hpp"
#include "sdoslab/quadrature.hpp"

namespace sdoslab {

// Uniform midpoint tensor grid on [-pi/h, pi/h)^d; weights sum to (2pi/h)^d.
struct MomentumGrid {
    double h = 1.0;
    int d = 1;
    int per_axis = 64;

    std::size_t size() const {
        std::size_t s = 1;
        for (int j = 0; j < d; ++j) s *= static_cast<std::size_t>(per_axis);
        return s;
    }
    double node(int i) const {
        const double pih = std::acos(-1.0) / h;
        return -pih + 2.0 * pih * (i + 0.5) / per_axis;
    }
    double weight() const {  // per node
        double w = 1.0;
        for (int j = 0; j < d; ++j) w *= 2.0 * std::acos(-1.0) / (h * per_axis);
        return w;
    }
    // Decode a flat lex index into per-axis node indices.
    void decode(std::size_t i, std::vector<int>& idx) const {
        idx.resize(d);
        for (int j = d - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(i % per_axis);
            i /= per_axis;
        }
    }
    void node_vec(std::size_t i, DVec& xi) const {
        std::vector<int> idx;
        decode(i, idx);
        xi.resize(d);
        for (int j = 0; j < d; ++j) xi[j] = node(idx[j]);
    }
};

// (F^h phi)(xi) = (h/2pi)^{d/2} sum_n e^{i h n . xi} phi(hn) at the grid nodes,
// lex-ordered to match MomentumGrid decoding.
inline Eigen::VectorXcd lattice_fourier(double h, const SiteIndex& sites,
                                        const Eigen::VectorXcd& field,
                                        const MomentumGrid& grid) {
    if (static_cast<std::size_t>(field.size()) != sites.size())
        throw std::invalid_argument("lattice_fourier: field size mismatch");
    if (grid.d != sites.dim())
        throw std::invalid_argument("lattice_fourier: grid dimension mismatch");
    const double pref = std::pow(h / (2.0 * std::acos(-1.0)), 0.5 * sites.dim());
    Eigen::VectorXcd out(grid.size());
    std::vector<int> idx;
    IVec k;
    DVec xi;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        grid.node_vec(g, xi);
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            if (field[i] == std::complex<double>(0.0)) continue;
            sites.decode(i, k);
            double phase = 0.0;
            for (int j = 0; j < sites.dim(); ++j) phase += h * k[j] * xi[j];
            s += field[i] * std::polar(1.0, phase);
        }
        out[g] = pref * s;
    }
    return out;
}

// A smooth compactly supported theta on R^d with a known support box.
struct SmoothCompactFn {
    int d = 1;
    DVec lo, hi;
    std::function<double(const DVec&)> fn;

    double operator()(const DVec& x) const { return fn(x); }
};

inline SmoothCompactFn radial_bump(int d, double halfwidth) {
    SmoothCompactFn f;
    f.d = d;
    f.lo.assign(d, -halfwidth);
    f.hi.assign(d, halfwidth);
    f.fn = [d, halfwidth](const DVec& x) {
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) r2 += (x[j] / halfwidth) * (x[j] / halfwidth);
        if (r2 >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - r2));
    };
    return f;
}

// Continuum transform (F theta)(xi) = (2pi)^{-d/2} int e^{i x.xi} theta(x) dx by
// iterated adaptive quadrature over the support box (real part; theta real even
// in the shipped diagnostics, but the imaginary part is integrated too).
inline std::complex<double> continuum_fourier(const SmoothCompactFn& theta,
                                              const DVec& xi, double tol = 1e-10) {
    const int d = theta.d;
    std::function<std::complex<double>(DVec&, int)> rec = [&](DVec& x,
                                                              int axis) -> std::complex<double> {
        if (axis == d) {
            double phase = 0.0;
            for (int j = 0; j < d; ++j) phase += x[j] * xi[j];
            return theta(x) * std::polar(1.0, phase);
        }
        const double re = integrate(
            [&](double t) {
                x[axis] = t;
                return rec(x, axis + 1).real();
            },
            theta.lo[axis], theta.hi[axis], tol);
        const double im = integrate(
            [&](double t) {
                x[axis] = t;
                return rec(x, axis + 1).imag();
            },
            theta.lo[axis], theta.hi[axis], tol);
        return {re, im};
    };
    DVec x(d);
    const double pref = std::pow(2.0 * std::acos(-1.0), -0.5 * d);
    return pref * rec(x, 0);
}

// Riemann-sum value h^{d/2} (F^h theta^h)(xi) = (2pi)^{-d/2} h^d sum e^{ihn.xi} theta(hn).
inline std::complex<double> lattice_fourier_riemann(const SmoothCompactFn& theta, double h,
                                                    const DVec& xi) {
    const int d = theta.d;
    std::vector<std::pair<int, int>> r;
    for (int j = 0; j < d; ++j)
        r.emplace_back(static_cast<int>(std::floor(theta.lo[j] / h)) - 1,
                       static_cast<int>(std::ceil(theta.hi[j] / h)) + 1);
    SiteIndex idx(r);
    std::complex<double> s = 0.0;
    IVec k;
    DVec x(d);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        idx.decode(i, k);
        for (int j = 0; j < d; ++j) x[j] = h * k[j];
        const double tv = theta(x);
        if (tv == 0.0) continue;
        double phase = 0.0;
        for (int j = 0; j < d; ++j) phase += x[j] * xi[j];
        s += tv * std::polar(1.0, phase);
    }
    return s * std::pow(h, d) * std::pow(2.0 * std::acos(-1.0), -0.5 * d);
}

// |h^{d/2}(F^h theta^h)(xi) - (F theta)(xi)|: the gap the Riemann-sum
// convergence statement controls as h -> 0.
inline double riemann_transform_gap(const SmoothCompactFn& theta, double h, const DVec& xi,
                                    double tol = 1e-10) {
    return std::abs(lattice_fourier_riemann(theta, h, xi) -
                    continuum_fourier(theta, xi, tol));
}

namespace detail {

// Unitary DFT along each axis of a fully periodic box; momenta 2 pi m / (n h)
// with m in [-n/2, n/2).
struct AxisDft {
    Eigen::MatrixXcd U;       // U(m, c): from site offset c to momentum slot m
    std::vector<double> xi;   // momentum per slot

    static AxisDft build(int n, double h, int lo) {
        AxisDft a;
        a.U.resize(n, n);
        a.xi.resize(n);
        const double twopi = 2.0 * std::acos(-1.0);
        const int mlo = -(n / 2);
        for (int s = 0; s < n; ++s) {
            const int m = mlo + s;
            a.xi[s] = twopi * m / (n * h);
            for (int c = 0; c < n; ++c) {
                const double x = h * (lo + c);
                a.U(s, c) = std::polar(1.0 / std::sqrt(double(n)), -a.xi[s] * x);
            }
        }
        return a;
    }
};

}  // namespace detail

// P^h_T on a fully periodic box: momentum components outside [-T, T)^d zeroed.
// Identity when T >= pi/h.
inline Eigen::VectorXcd project(double h, const SiteIndex& sites,
                                const std::vector<bool>& wrap,
                                const Eigen::VectorXcd& field, double T) {
    for (bool w : wrap)
        if (!w) throw std::invalid_argument("project: needs a fully periodic box");
    if (static_cast<std::size_t>(field.size()) != sites.size())
        throw std::invalid_argument("project: field size mismatch");
    const int d = sites.dim();
    std::vector<detail::AxisDft> dfts;
    for (int j = 0; j < d; ++j)
        dfts.push_back(detail::AxisDft::build(sites.extent(j), h, sites.lo(j)));

    Eigen::VectorXcd work = field;
    // Forward transform axis by axis, mask, then inverse.
    auto apply_axis = [&](int axis, bool inverse, bool mask) {
        const std::size_t stride = sites.stride(axis);
        const int n = sites.extent(axis);
        const std::size_t nblocks = sites.size() / static_cast<std::size_t>(n);
        Eigen::VectorXcd slice(n), tr(n);
        for (std::size_t b = 0; b < nblocks; ++b) {
            // Base flat index of this 1-d line.
            const std::size_t outer = b / stride, innr = b % stride;
            const std::size_t base = outer * stride * static_cast<std::size_t>(n) + innr;
            for (int c = 0; c < n; ++c) slice[c] = work[base + c * stride];
            if (!inverse) {
                tr = dfts[axis].U * slice;
                if (mask)
                    for (int s = 0; s < n; ++s) {
                        const double xi = dfts[axis].xi[s];
                        if (xi < -T || xi >= T) tr[s] = 0.0;
                    }
            } else {
                tr = dfts[axis].U.adjoint() * slice;
            }
            for (int c = 0; c < n; ++c) work[base + c * stride] = tr[c];
        }
    };
    for (int j = 0; j < d; ++j) apply_axis(j, false, true);
    for (int j = 0; j < d; ++j) apply_axis(j, true, false);
    return work;
}

}  // namespace sdoslab
