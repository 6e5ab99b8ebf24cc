#pragma once
// H^h = -Delta^h + V^h on a buffered finite box: matrix-free 2d+1-point stencil
// with Dirichlet or periodic truncation, the Fourier symbol of -Delta^h, and
// resolvent solves (conjugate gradients and the Neumann series in V R_0).

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdoslab/lattice.hpp"
#include "sdoslab/potential.hpp"

namespace sdoslab {

enum class Bc { dirichlet, periodic_x1, periodic_all };

// Refusals are numerical-contract errors (box too small, cube outside the safe
// region); the CLI maps them to their own exit status.
struct RefusalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbol of -Delta^h per axis term; the 4 sin^2 form keeps the sandwich
// bound (1/4)|xi|^2 <= theta_h(xi) <= |xi|^2 exact in floating point.
inline double symbol_axis(double h, double xi) {
    const double s = std::sin(0.5 * h * xi);
    return 4.0 * s * s / (h * h);
}

inline double symbol(const LatticeSpec& spec, const DVec& xi) {
    double s = 0.0;
    for (double x : xi) s += symbol_axis(spec.h, x);
    return s;
}

struct Hamiltonian {
    LatticeSpec spec;
    BoxSpec box;
    Bc bc = Bc::dirichlet;
    SiteIndex sites;  // buffered grid the operator lives on
    SiteIndex inner;  // requested box (safe region for traces)
    Eigen::VectorXd diag;  // v(hk) + 2d/h^2
    double hop = 0.0;      // -1/h^2
    double vmax = 0.0;     // max |v| over the buffered grid
    std::vector<bool> wrap;  // per-axis periodic flag

    std::size_t size() const { return sites.size(); }

    // [-||v||_inf, 4d/h^2 + ||v||_inf]; every Rayleigh quotient lies inside.
    std::array<double, 2> spectral_interval() const {
        const double top = 4.0 * spec.dim() / (spec.h * spec.h);
        return {-vmax, top + vmax};
    }

    void matvec(const double* in, double* out) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] * in[i];
        const int d = sites.dim();
        for (int j = 0; j < d; ++j) {
            const std::size_t s = sites.stride(j);
            const std::size_t ext = static_cast<std::size_t>(sites.extent(j));
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t c = (i / s) % ext;
                if (c + 1 < ext)
                    out[i] += hop * in[i + s];
                else if (wrap[j])
                    out[i] += hop * in[i - (ext - 1) * s];
                if (c > 0)
                    out[i] += hop * in[i - s];
                else if (wrap[j])
                    out[i] += hop * in[i + (ext - 1) * s];
            }
        }
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& in) const {
        Eigen::VectorXd out(in.size());
        matvec(in.data(), out.data());
        return out;
    }

    Eigen::MatrixXd dense() const {
        const std::size_t n = size();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col(n);
        for (std::size_t k = 0; k < n; ++k) {
            e[k] = 1.0;
            matvec(e.data(), col.data());
            A.col(k) = col;
            e[k] = 0.0;
        }
        return A;
    }
};

// Assemble H^h = -Delta^h + V^h on the box enlarged by `buffer` sites per side.
// periodic_x1 wraps the x1 axes (no buffer there); periodic_all wraps all axes.
inline Hamiltonian assemble(const LatticeSpec& spec, const BoxSpec& box,
                            const std::function<double(const DVec&)>& v, Bc bc) {
    spec.validate();
    box.validate();
    const int d = spec.dim();
    std::vector<std::pair<int, int>> inner_r, full_r;
    std::vector<bool> wrap(d, false);
    for (int j = 0; j < d; ++j) {
        const bool x1 = j < spec.d1;
        auto r = site_range(x1 ? -box.L : -box.Lp, x1 ? box.L : box.Lp, spec.h);
        inner_r.push_back(r);
        const bool periodic = bc == Bc::periodic_all || (bc == Bc::periodic_x1 && x1);
        wrap[j] = periodic;
        if (!periodic) {
            r.first -= box.buffer;
            r.second += box.buffer;
        }
        full_r.push_back(r);
    }
    Hamiltonian H;
    H.spec = spec;
    H.box = box;
    H.bc = bc;
    H.sites = SiteIndex(full_r);
    H.inner = SiteIndex(inner_r);
    H.wrap = wrap;
    H.hop = -1.0 / (spec.h * spec.h);
    if (H.sites.size() == 0) throw RefusalError("assemble: box contains no sites");
    const double diag0 = 2.0 * d / (spec.h * spec.h);
    H.diag.resize(H.sites.size());
    IVec k;
    DVec x(d);
    double vm = 0.0;
    for (std::size_t i = 0; i < H.sites.size(); ++i) {
        H.sites.decode(i, k);
        for (int j = 0; j < d; ++j) x[j] = spec.h * k[j];
        const double vi = v(x);
        vm = std::max(vm, std::abs(vi));
        H.diag[i] = diag0 + vi;
    }
    H.vmax = vm;
    return H;
}

// Assembly on an explicit site grid with per-axis wrap flags; the box-driven
// overloads funnel into the same operator shape.
inline Hamiltonian assemble_on_grid(const LatticeSpec& spec, const SiteIndex& grid,
                                    std::vector<bool> wrap,
                                    const std::function<double(const DVec&)>& v) {
    spec.validate();
    if (grid.dim() != spec.dim())
        throw std::invalid_argument("assemble_on_grid: dimension mismatch");
    if (grid.size() == 0) throw RefusalError("assemble_on_grid: box contains no sites");
    Hamiltonian H;
    H.spec = spec;
    H.bc = Bc::dirichlet;
    H.sites = grid;
    H.inner = grid;
    H.wrap = std::move(wrap);
    H.hop = -1.0 / (spec.h * spec.h);
    const int d = spec.dim();
    const double diag0 = 2.0 * d / (spec.h * spec.h);
    H.diag.resize(grid.size());
    IVec k;
    DVec x(d);
    double vm = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.decode(i, k);
        for (int j = 0; j < d; ++j) x[j] = spec.h * k[j];
        const double vi = v(x);
        vm = std::max(vm, std::abs(vi));
        H.diag[i] = diag0 + vi;
    }
    H.vmax = vm;
    return H;
}

inline Hamiltonian assemble(const LatticeSpec& spec, const BoxSpec& box,
                            const APPotential& p, Bc bc) {
    p.validate();
    if (p.d1 != spec.d1 || p.d2 != spec.d2)
        throw std::invalid_argument("assemble: potential/lattice dimension mismatch");
    return assemble(spec, box, [&p](const DVec& x) { return p.eval(x); }, bc);
}

inline Hamiltonian assemble_free(const LatticeSpec& spec, const BoxSpec& box, Bc bc) {
    return assemble(spec, box, [](const DVec&) { return 0.0; }, bc);
}

// -Delta^h applied to a field on an arbitrary site grid (Dirichlet outside,
// or wrapped on the flagged axes). Grid-level so the 1-d stencil checks can
// run below the d >= 2 LatticeSpec floor.
inline Eigen::VectorXd apply_laplacian_grid(double h, const SiteIndex& grid,
                                            const std::vector<bool>& wrap,
                                            const Eigen::VectorXd& field) {
    if (static_cast<std::size_t>(field.size()) != grid.size())
        throw std::invalid_argument("apply_laplacian: field/grid size mismatch");
    Hamiltonian tmp;
    tmp.spec = LatticeSpec{1, std::max(1, grid.dim() - 1), h};
    tmp.sites = grid;
    tmp.wrap = wrap;
    tmp.hop = -1.0 / (h * h);
    tmp.diag = Eigen::VectorXd::Constant(grid.size(), 2.0 * grid.dim() / (h * h));
    return tmp.apply(field);
}

inline Eigen::VectorXd apply_laplacian(const LatticeSpec& spec, const SiteIndex& grid,
                                       const std::vector<bool>& wrap,
                                       const Eigen::VectorXd& field) {
    spec.validate();
    if (grid.dim() != spec.dim())
        throw std::invalid_argument("apply_laplacian: dimension mismatch");
    return apply_laplacian_grid(spec.h, grid, wrap, field);
}

struct ResolventParams {
    double lambda0 = 1.0;
    enum class Method { neumann, cg } method = Method::cg;
    int terms = 20;      // Neumann truncation order N
    double tol = 1e-12;  // CG residual tolerance
};

struct ResolventOutcome {
    Eigen::VectorXd x;
    double residual = 0.0;  // ||(H + lambda0) x - rhs||
    int iterations = 0;
};

namespace detail {

// CG on A + lambda0 where A is any SPD-shifted stencil operator.
template <class MatVec>
ResolventOutcome cg_solve(const MatVec& mv, double lambda0, const Eigen::VectorXd& rhs,
                          double tol, std::size_t n) {
    ResolventOutcome out;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n), r = rhs, p = rhs, Ap(n);
    double rr = r.squaredNorm();
    const double stop2 = tol * tol * rhs.squaredNorm();
    int it = 0;
    const int max_it = static_cast<int>(10 * n + 100);
    while (rr > stop2 && it < max_it) {
        mv(p, Ap);
        Ap += lambda0 * p;
        const double alpha = rr / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
        ++it;
    }
    out.x = x;
    out.residual = std::sqrt(rr);
    out.iterations = it;
    return out;
}

}  // namespace detail

// Approximate (H^h + lambda0)^{-1} rhs.
//   cg      : conjugate gradients on the shifted operator (the oracle path).
//   neumann : R0 sum_{k<=N} (-V R0)^k rhs with R0 = (-Delta^h + lambda0)^{-1};
//             requires lambda0 >= 1 + 2 ||v||_inf so that ||V R0|| <= 1/2.
inline ResolventOutcome resolvent_apply(const Hamiltonian& H, const ResolventParams& prm,
                                        const Eigen::VectorXd& rhs) {
    const std::size_t n = H.size();
    if (static_cast<std::size_t>(rhs.size()) != n)
        throw std::invalid_argument("resolvent_apply: rhs size mismatch");
    auto mv = [&H](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        H.matvec(in.data(), out.data());
    };
    if (prm.method == ResolventParams::Method::cg)
        return detail::cg_solve(mv, prm.lambda0, rhs, prm.tol, n);

    if (prm.lambda0 < 1.0 + 2.0 * H.vmax)
        throw std::invalid_argument(
            "resolvent_apply: neumann needs lambda0 >= 1 + 2||v||_inf");
    // Free operator on the same grid.
    Hamiltonian H0 = H;
    H0.diag = Eigen::VectorXd::Constant(n, 2.0 * H.spec.dim() / (H.spec.h * H.spec.h));
    H0.vmax = 0.0;
    auto mv0 = [&H0](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        H0.matvec(in.data(), out.data());
    };
    const Eigen::VectorXd vdiag =
        H.diag - Eigen::VectorXd::Constant(n, 2.0 * H.spec.dim() / (H.spec.h * H.spec.h));
    ResolventOutcome out;
    Eigen::VectorXd u = detail::cg_solve(mv0, prm.lambda0, rhs, 1e-14, n).x;
    Eigen::VectorXd acc = u;
    int its = 0;
    for (int k = 1; k <= prm.terms; ++k) {
        Eigen::VectorXd w = -(vdiag.array() * u.array()).matrix();
        auto r = detail::cg_solve(mv0, prm.lambda0, w, 1e-14, n);
        u = r.x;
        its += r.iterations;
        acc += u;
    }
    Eigen::VectorXd res(n);
    H.matvec(acc.data(), res.data());
    res += prm.lambda0 * acc - rhs;
    out.x = acc;
    out.residual = res.norm();
    out.iterations = its;
    return out;
}

// Default shift from Prop-style hypotheses: smallest integer >= 1 + 2||v||_inf.
inline double default_lambda0(const Hamiltonian& H) {
    return std::ceil(1.0 + 2.0 * H.vmax);
}

}  // namespace sdoslab
