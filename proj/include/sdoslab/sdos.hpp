#pragma once
// Surface-density-of-states functionals N^{L'}_L(f, H^h), per-cube traces,
// Bohr means, parameter sweeps with fitted rates, and transverse decay scans.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdoslab/funcalc.hpp"
#include "sdoslab/hamiltonian.hpp"
#include "sdoslab/lattice.hpp"
#include "sdoslab/potential.hpp"

namespace sdoslab {

// Per-site difference diagonal <(f(H^h) - f(-Delta^h)) delta_hk, delta_hk> on a
// buffered box. The free reference is computed on the same box with the same
// method, so truncation effects cancel at first order and the zero-potential
// case annihilates bit-exactly.
struct DiffDiag {
    LatticeSpec spec;
    BoxSpec box;
    Bc bc = Bc::dirichlet;
    SiteIndex sites;        // buffered grid
    SiteIndex inner;        // requested box: the safe region for traces
    Eigen::VectorXd diff;   // per buffered-grid site
    Method method = Method::dense;
    int degree = 0;
    double cheb_recon_error = 0.0;
};

inline DiffDiag compute_diff_diag(const Hamiltonian& H, const Hamiltonian& Hfree,
                                  const TestFunction& f, const FuncalcOptions& opt) {
    DiffDiag dd;
    dd.spec = H.spec;
    dd.box = H.box;
    dd.bc = H.bc;
    dd.sites = H.sites;
    dd.inner = H.inner;
    dd.method = opt.method;
    dd.degree = opt.method == Method::kpm ? opt.degree : 0;
    if (opt.method == Method::dense) {
        const auto eH = dense_eig(H);
        const auto e0 = dense_eig(Hfree);
        auto fe = [&f](double x) { return f.eval(x); };
        dd.diff = eH.diagonal_of(fe) - e0.diagonal_of(fe);
        return dd;
    }
    // One expansion on H's enclosure serves both operators (it contains the
    // free spectrum), so v = 0 reproduces the free recursion exactly.
    const auto iv = kpm_interval(H, opt.pad);
    const auto e = cheb_coeffs(f, iv.first, iv.second, opt.degree, opt.damping);
    dd.cheb_recon_error = e.recon_error;
    const std::size_t n = H.size();
    dd.diff.resize(n);
    parallel_for(n, opt.threads, [&](std::size_t i) {
        dd.diff[i] = kpm_site_diag(H, e, i) - kpm_site_diag(Hfree, e, i);
    });
    return dd;
}

inline DiffDiag compute_diff_diag(const LatticeSpec& spec, const BoxSpec& box,
                                  const APPotential& pot, Bc bc, const TestFunction& f,
                                  const FuncalcOptions& opt) {
    const auto H = assemble(spec, box, pot, bc);
    const auto H0 = assemble_free(spec, box, bc);
    return compute_diff_diag(H, H0, f, opt);
}

// Trace of f(H^h) - f(-Delta^h) over the unit cube C(y). Refuses cubes that
// leave the safe region (distance >= buffer from the truncation boundary).
inline double cube_trace(const DiffDiag& dd, const DVec& y) {
    const auto ks = cube_sites(dd.spec, y);
    double s = 0.0;
    for (const auto& k : ks) {
        if (!dd.inner.contains(k)) {
            std::string msg = "cube_trace: cube (";
            for (std::size_t j = 0; j < y.size(); ++j)
                msg += (j ? "," : "") + std::to_string(y[j]);
            msg += ") leaves the safe region: its sites sit closer to the truncation "
                   "boundary than the buffer of " +
                   std::to_string(dd.box.buffer) + " sites";
            throw RefusalError(msg);
        }
        s += dd.diff[dd.sites.index(k)];
    }
    return s;
}

inline double cube_trace(const DiffDiag& dd, const IVec& y) {
    return cube_trace(dd, DVec(y.begin(), y.end()));
}

struct SdosResult {
    double value = 0.0;                // N^{L'}_L
    std::map<IVec, double> per_cube;   // lex-ordered cube traces over the box
    double free_diag = 0.0;            // exact Brillouin diagonal (metadata)
    Method method = Method::dense;
    int degree = 0;
    int buffer = 0;
    double L = 0.0, Lp = 0.0, h = 0.0;
    std::optional<double> stability_delta;  // |value - value at doubled buffer|
};

// N^{L'}_L = (2L)^{-d1} sum over box sites of the difference diagonal, with the
// per-cube breakdown. The value is the lex-ordered sum of per_cube divided by
// (2L)^{d1}, exactly as summed.
inline SdosResult surface_dos(const DiffDiag& dd, double L, double Lp) {
    if (L > dd.box.L || Lp > dd.box.Lp)
        throw RefusalError("surface_dos: requested box exceeds the assembled box");
    SdosResult res;
    res.method = dd.method;
    res.degree = dd.degree;
    res.buffer = dd.box.buffer;
    res.L = L;
    res.Lp = Lp;
    res.h = dd.spec.h;
    const SiteIndex want = box_index(dd.spec, L, Lp);
    IVec k;
    for (std::size_t i = 0; i < want.size(); ++i) {
        want.decode(i, k);
        res.per_cube[cube_anchor(dd.spec, k)] += dd.diff[dd.sites.index(k)];
    }
    double total = 0.0;
    for (const auto& [y, t] : res.per_cube) total += t;
    res.value = total / std::pow(2.0 * L, dd.spec.d1);
    return res;
}

inline SdosResult surface_dos(const DiffDiag& dd, double L, double Lp,
                              const TestFunction& f) {
    SdosResult res = surface_dos(dd, L, Lp);
    res.free_diag = free_diagonal(dd.spec, f);
    return res;
}

// Bohr mean (2L)^{-d1} sum_{y1 in {-L..L-1}^{d1}} e^{i y1 . gamma}; factorizes
// over axes.
inline std::complex<double> bohr_mean(const DVec& gamma, int L) {
    if (L < 1) throw std::invalid_argument("bohr_mean: L >= 1");
    std::complex<double> prod = 1.0;
    for (double g : gamma) {
        std::complex<double> s = 0.0;
        for (int nu = -L; nu <= L - 1; ++nu) s += std::polar(1.0, nu * g);
        prod *= s / (2.0 * L);
    }
    return prod;
}

// Least-squares slope of log(y) against log(x); samples below `floor` are
// excluded. Returns nullopt when fewer than two usable points remain.
inline std::optional<double> fit_loglog(const std::vector<double>& xs,
                                        const std::vector<double>& ys,
                                        double floor = 1e-14) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(ys[i] > floor) || !(xs[i] > 0.0)) continue;
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::nullopt;
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    return (n * sxy - sx * sy) / denom;
}

enum class SweepParameter { L, Lp, h };

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::L: return "L";
        case SweepParameter::Lp: return "Lp";
        case SweepParameter::h: return "h";
    }
    return "?";
}

struct ConvergenceReport {
    std::string parameter;
    std::vector<std::pair<double, double>> samples;  // (parameter value, functional)
    std::vector<double> cauchy_gaps;                 // successive |differences|
    std::optional<double> fitted_rate;               // log-log slope, last half
    std::optional<double> asymptote;                 // one Richardson step
    bool flagged = false;                            // non-monotone gap sequence
    std::string note;
};

// Rate and asymptote extraction shared by all sweeps: gaps between successive
// samples, log-log fit over the last half, one Richardson step with the
// fitted rate. Degenerate (sub-floor) gaps are excluded with a 1e-14 floor.
inline ConvergenceReport make_report(const std::string& parameter,
                                     std::vector<std::pair<double, double>> samples) {
    ConvergenceReport rep;
    rep.parameter = parameter;
    rep.samples = std::move(samples);
    const std::size_t n = rep.samples.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        rep.cauchy_gaps.push_back(
            std::abs(rep.samples[i + 1].second - rep.samples[i].second));
    for (std::size_t i = 0; i + 1 < rep.cauchy_gaps.size(); ++i)
        if (rep.cauchy_gaps[i + 1] > rep.cauchy_gaps[i]) rep.flagged = true;
    if (n >= 3) {
        std::vector<double> xs, ys;
        const std::size_t ng = rep.cauchy_gaps.size();
        const std::size_t start = ng >= 4 ? ng / 2 : 0;  // last half once there is one
        for (std::size_t i = start; i < ng; ++i) {
            xs.push_back(rep.samples[i].first);
            ys.push_back(rep.cauchy_gaps[i]);
        }
        rep.fitted_rate = fit_loglog(xs, ys);
        if (rep.fitted_rate) {
            // v(p) = A + B p^r from the last two samples and the fitted rate.
            const double r = *rep.fitted_rate;
            const auto& [p1, v1] = rep.samples[n - 2];
            const auto& [p2, v2] = rep.samples[n - 1];
            const double d = std::pow(p2, r) - std::pow(p1, r);
            if (d != 0.0) {
                const double B = (v2 - v1) / d;
                rep.asymptote = v2 - B * std::pow(p2, r);
            }
        }
    }
    return rep;
}

struct SweepSettings {
    LatticeSpec spec;
    APPotential pot;
    TestFunction f;
    Bc bc = Bc::dirichlet;
    FuncalcOptions fun;
    double L = 4.0, Lp = 4.0;  // the fixed half-widths
    int buffer = 6;
    // For h sweeps the buffer is a physical margin: sites = ceil(buffer / h).
    bool scale_buffer_with_h = true;
};

// Functional sweep over one parameter. L and Lp sweeps reuse a single
// difference diagonal on the largest box (the functional at smaller
// half-widths is a partial sum); h sweeps reassemble per value.
inline ConvergenceReport sweep(SweepParameter param, const std::vector<double>& values,
                               const SweepSettings& st) {
    if (values.size() < 3)
        throw std::invalid_argument("sweep: need at least 3 parameter values");
    // Values run from coarse to fine: ascending half-widths, descending h.
    const bool want_descending = param == SweepParameter::h;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const bool ok = want_descending ? values[i + 1] < values[i]
                                        : values[i + 1] > values[i];
        if (!ok)
            throw std::invalid_argument(
                "sweep: values must be sorted coarse-to-fine (ascending L/Lp, "
                "descending h)");
    }
    std::vector<std::pair<double, double>> samples;

    if (param == SweepParameter::h) {
        for (double h : values) {
            LatticeSpec spec = st.spec;
            spec.h = h;
            BoxSpec box{st.L, st.Lp,
                        st.scale_buffer_with_h
                            ? static_cast<int>(std::ceil(st.buffer / h))
                            : st.buffer};
            const auto dd = compute_diff_diag(spec, box, st.pot, st.bc, st.f, st.fun);
            samples.emplace_back(h, surface_dos(dd, st.L, st.Lp).value);
        }
        return make_report("h", std::move(samples));
    }

    const double Lmax = param == SweepParameter::L ? values.back() : st.L;
    const double Lpmax = param == SweepParameter::Lp ? values.back() : st.Lp;
    BoxSpec box{Lmax, Lpmax, st.buffer};
    const auto dd = compute_diff_diag(st.spec, box, st.pot, st.bc, st.f, st.fun);
    for (double v : values) {
        const double L = param == SweepParameter::L ? v : st.L;
        const double Lp = param == SweepParameter::Lp ? v : st.Lp;
        samples.emplace_back(v, surface_dos(dd, L, Lp).value);
    }
    return make_report(to_string(param), std::move(samples));
}

struct DecayScan {
    std::vector<std::pair<double, double>> points;  // (|y2|, |cube trace|)
    std::optional<double> exponent;                 // log-log slope, tail half
    bool flagged = false;                           // all magnitudes below floor
};

// |cube_trace| along the transverse axis at fixed y1: cubes (y1, t, 0, ...)
// for t in [y2_min, y2_max]; exponent fitted over the tail half of the range.
inline DecayScan decay_scan(const DiffDiag& dd, const IVec& y1, int y2_min, int y2_max) {
    if (static_cast<int>(y1.size()) != dd.spec.d1)
        throw std::invalid_argument("decay_scan: y1 length != d1");
    DecayScan out;
    for (int t = y2_min; t <= y2_max; ++t) {
        IVec y(y1);
        y.push_back(t);
        for (int j = 1; j < dd.spec.d2; ++j) y.push_back(0);
        out.points.emplace_back(static_cast<double>(t), std::abs(cube_trace(dd, y)));
    }
    bool all_tiny = true;
    for (const auto& [t, v] : out.points)
        if (v > 1e-14) all_tiny = false;
    if (all_tiny) {
        out.flagged = true;
        return out;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = out.points.size() / 2; i < out.points.size(); ++i) {
        xs.push_back(out.points[i].first);
        ys.push_back(out.points[i].second);
    }
    out.exponent = fit_loglog(xs, ys);
    return out;
}

}  // namespace sdoslab
