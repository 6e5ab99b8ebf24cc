#pragma once
// Potential model v(x1,x2) = Re sum_k profile_k(x2) e^{i gamma_k . x1}:
// finite almost-periodic mode lists with (H1)-decay metadata, translations,
// weighted sup gaps, trigonometric truncation and Bernstein profiles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sdoslab/lattice.hpp"
#include "sdoslab/test_function.hpp"

namespace sdoslab {

using Complex = std::complex<double>;

// One x2-profile. Three forms:
//   bump       amp * std_bump(|x2 - center| / width)
//   bernstein  amp * (tensor Bernstein polynomial on the box [blo, bhi]), 0 outside
//   algebraic  amp * (1+|x2|)^-(d2+delta0), or the smooth variant
//              amp * (1+|x2|^2)^-(d2+delta0)/2
struct Profile {
    enum class Kind { bump, bernstein, algebraic };

    Kind kind = Kind::bump;
    Complex amp = 1.0;
    int d2 = 1;

    DVec center;        // bump
    double width = 1.0; // bump

    int degree = 0;             // bernstein
    std::vector<double> values; // bernstein: w(nu/N) grid, lex order, (N+1)^d2 entries
    DVec blo, bhi;              // bernstein box
    double bern_sup_error = 0.0;

    double delta0 = 1.0;  // algebraic
    bool smooth = true;   // algebraic: use (1+|x2|^2)^{-p/2}

    Complex eval(const DVec& x2) const {
        switch (kind) {
            case Kind::bump: {
                double r2 = 0.0;
                for (int j = 0; j < d2; ++j) {
                    const double t = (x2[j] - center[j]) / width;
                    r2 += t * t;
                }
                if (r2 >= 1.0) return 0.0;
                return amp * std::exp(1.0 - 1.0 / (1.0 - r2));
            }
            case Kind::bernstein:
                return amp * bernstein_value(x2);
            case Kind::algebraic: {
                double r2 = 0.0;
                for (int j = 0; j < d2; ++j) r2 += x2[j] * x2[j];
                const double p = d2 + delta0;
                if (smooth) return amp * std::pow(1.0 + r2, -0.5 * p);
                return amp * std::pow(1.0 + std::sqrt(r2), -p);
            }
        }
        return 0.0;
    }

    // sup_x2 |profile|; exact for bump/algebraic (peak at center/origin),
    // grid estimate refined by construction for bernstein.
    double sup_norm() const {
        switch (kind) {
            case Kind::bump:
            case Kind::algebraic:
                return std::abs(amp);
            case Kind::bernstein: {
                double m = 0.0;
                for (double v : values) m = std::max(m, std::abs(v));
                return std::abs(amp) * m;  // Bernstein value is a convex combination
            }
        }
        return 0.0;
    }

    Profile conjugated() const {
        Profile p = *this;
        p.amp = std::conj(p.amp);
        return p;
    }

private:
    double bernstein_value(const DVec& x2) const {
        // Map into [0,1]^d2, zero outside the box, then de Casteljau per axis.
        DVec u(d2);
        for (int j = 0; j < d2; ++j) {
            u[j] = (x2[j] - blo[j]) / (bhi[j] - blo[j]);
            if (u[j] < 0.0 || u[j] > 1.0) return 0.0;
        }
        const int N = degree;
        std::vector<double> work = values;
        std::size_t block = work.size();
        for (int j = 0; j < d2; ++j) {
            block /= static_cast<std::size_t>(N + 1);
            // Collapse axis j: work has layout [collapsed axes... | N+1 | block].
            std::size_t groups = work.size() / (static_cast<std::size_t>(N + 1) * block);
            std::vector<double> next(groups * block);
            std::vector<double> tmp(N + 1);
            for (std::size_t g = 0; g < groups; ++g)
                for (std::size_t t = 0; t < block; ++t) {
                    for (int nu = 0; nu <= N; ++nu)
                        tmp[nu] = work[(g * (N + 1) + nu) * block + t];
                    for (int r = N; r >= 1; --r)
                        for (int nu = 0; nu < r; ++nu)
                            tmp[nu] = (1.0 - u[j]) * tmp[nu] + u[j] * tmp[nu + 1];
                    next[g * block + t] = tmp[0];
                }
            work.swap(next);
        }
        return work[0];
    }
};

struct Mode {
    DVec gamma;  // length d1
    Profile profile;
};

// Weighted sup estimate M_{delta,kappa,kappa'} of (1+|x2|)^delta |v - v'|.
struct PotentialGap {
    double delta = 0.0;
    double value = 0.0;
};

struct SampleGrid {
    double x1_extent = 10.0;
    int n1 = 32;  // per x1 axis
    double x2_extent = 10.0;
    int n2 = 32;  // per x2 axis

    bool empty() const { return n1 <= 0 || n2 <= 0; }
};

struct APPotential {
    int d1 = 1, d2 = 1;
    std::vector<Mode> modes;
    double C = 1.0;       // (H1) constant
    double delta0 = 1.0;  // (H1) decay exponent

    void validate() const {
        if (d1 < 1 || d2 < 1) throw std::invalid_argument("APPotential: bad dimensions");
        if (!(C > 0.0) || !(delta0 > 0.0))
            throw std::invalid_argument("APPotential: require C > 0 and delta0 > 0");
        for (const auto& m : modes) {
            if (static_cast<int>(m.gamma.size()) != d1)
                throw std::invalid_argument("APPotential: gamma length != d1");
        }
        validate_realness();
    }

    // Realness is structural: gamma = 0 modes carry real amplitudes, every other
    // mode has an exact partner at -gamma with conjugate amplitude and the same
    // shape parameters.
    void validate_realness() const {
        std::vector<bool> matched(modes.size(), false);
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (is_zero(modes[i].gamma)) {
                if (std::abs(modes[i].profile.amp.imag()) != 0.0)
                    throw std::invalid_argument(
                        "APPotential: gamma = 0 mode must have real amplitude");
                matched[i] = true;
            }
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (matched[i]) continue;
            bool found = false;
            for (std::size_t j = 0; j < modes.size(); ++j) {
                if (j == i || matched[j]) continue;
                if (is_negation(modes[i].gamma, modes[j].gamma) &&
                    same_shape(modes[i].profile, modes[j].profile) &&
                    modes[j].profile.amp == std::conj(modes[i].profile.amp)) {
                    matched[i] = matched[j] = true;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::invalid_argument(
                    "APPotential: mode lacks conjugate partner at -gamma");
        }
    }

    Complex eval_complex(const DVec& x) const {
        DVec x2(x.begin() + d1, x.end());
        Complex s = 0.0;
        for (const auto& m : modes) {
            double phase = 0.0;
            for (int j = 0; j < d1; ++j) phase += m.gamma[j] * x[j];
            s += m.profile.eval(x2) * std::polar(1.0, phase);
        }
        return s;
    }

    double eval(const DVec& x) const { return eval_complex(x).real(); }

    // v_z(x1, x2) = v(x1 + z, x2): multiply mode k by e^{i gamma_k . z}.
    APPotential translated(const DVec& z) const {
        if (static_cast<int>(z.size()) != d1)
            throw std::invalid_argument("translate: z length != d1");
        APPotential out = *this;
        for (auto& m : out.modes) {
            double phase = 0.0;
            for (int j = 0; j < d1; ++j) phase += m.gamma[j] * z[j];
            m.profile.amp *= std::polar(1.0, phase);
        }
        return out;
    }

    // Upper bound sum_k sup|profile_k| >= ||v||_inf.
    double sup_norm_bound() const {
        double s = 0.0;
        for (const auto& m : modes) s += m.profile.sup_norm();
        return s;
    }

    static bool is_zero(const DVec& g) {
        return std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; });
    }
    static bool is_negation(const DVec& a, const DVec& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t j = 0; j < a.size(); ++j)
            if (b[j] != -a[j]) return false;
        return true;
    }
    static bool same_shape(const Profile& p, const Profile& q) {
        return p.kind == q.kind && p.d2 == q.d2 && p.center == q.center &&
               p.width == q.width && p.degree == q.degree && p.values == q.values &&
               p.blo == q.blo && p.bhi == q.bhi && p.delta0 == q.delta0 &&
               p.smooth == q.smooth;
    }
};

namespace detail {

template <class F>
double grid_sup(const APPotential& ref, const SampleGrid& grid, const F& weighted_diff) {
    // Midpoint tensor grid over [-X1,X1]^{d1} x [-X2,X2]^{d2}.
    const int d1 = ref.d1, d2 = ref.d2, d = d1 + d2;
    std::vector<int> n(d);
    for (int j = 0; j < d1; ++j) n[j] = grid.n1;
    for (int j = d1; j < d; ++j) n[j] = grid.n2;
    std::vector<int> idx(d, 0);
    DVec x(d);
    double sup = 0.0;
    while (true) {
        for (int j = 0; j < d; ++j) {
            const double X = j < d1 ? grid.x1_extent : grid.x2_extent;
            x[j] = -X + 2.0 * X * (idx[j] + 0.5) / n[j];
        }
        sup = std::max(sup, weighted_diff(x));
        int j = d - 1;
        while (j >= 0 && ++idx[j] == n[j]) idx[j--] = 0;
        if (j < 0) break;
    }
    return sup;
}

}  // namespace detail

inline PotentialGap potential_gap(const APPotential& p1, const APPotential& p2,
                                  double delta, const SampleGrid& grid) {
    if (delta < 0.0) throw std::invalid_argument("potential_gap: delta >= 0 required");
    if (grid.empty()) throw std::invalid_argument("potential_gap: empty sampling grid");
    if (p1.d1 != p2.d1 || p1.d2 != p2.d2)
        throw std::invalid_argument("potential_gap: dimension mismatch");
    auto weighted = [&](const DVec& x) {
        double r2 = 0.0;
        for (int j = p1.d1; j < p1.d1 + p1.d2; ++j) r2 += x[j] * x[j];
        const double w = std::pow(1.0 + std::sqrt(r2), delta);
        return w * std::abs(p1.eval(x) - p2.eval(x));
    };
    // A grid sup is a lower estimate of the true sup.
    return PotentialGap{delta, detail::grid_sup(p1, grid, weighted)};
}

// Sampled sup of (1+|x2|)^{d2+delta0} |v| -- the (H1) certificate, to be
// compared against the declared constant C.
inline double h1_certificate(const APPotential& p, const SampleGrid& grid) {
    auto weighted = [&](const DVec& x) {
        double r2 = 0.0;
        for (int j = p.d1; j < p.d1 + p.d2; ++j) r2 += x[j] * x[j];
        const double w = std::pow(1.0 + std::sqrt(r2), p.d2 + p.delta0);
        return w * std::abs(p.eval(x));
    };
    return detail::grid_sup(p, grid, weighted);
}

struct TrigApproximation {
    APPotential potential;
    double bound = 0.0;  // sum of dropped profile sup norms >= sup|v - v_eps|
};

// Keep the largest modes, dropping conjugate pairs together, while the summed
// sup norms of everything dropped stay <= eps.
inline TrigApproximation trig_approximate(const APPotential& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("trig_approximate: eps > 0 required");
    const std::size_t n = p.modes.size();
    // Group indices into conjugate pairs / singletons.
    std::vector<int> group(n, -1);
    int ng = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (group[i] >= 0) continue;
        group[i] = ng;
        if (!APPotential::is_zero(p.modes[i].gamma)) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (group[j] < 0 &&
                    APPotential::is_negation(p.modes[i].gamma, p.modes[j].gamma) &&
                    APPotential::same_shape(p.modes[i].profile, p.modes[j].profile)) {
                    group[j] = ng;
                    break;
                }
            }
        }
        ++ng;
    }
    std::vector<double> gsup(ng, 0.0);
    for (std::size_t i = 0; i < n; ++i) gsup[group[i]] += p.modes[i].profile.sup_norm();

    std::vector<int> order(ng);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return gsup[a] < gsup[b]; });

    std::vector<bool> drop(ng, false);
    double cum = 0.0;
    for (int g : order) {
        if (cum + gsup[g] <= eps) {
            cum += gsup[g];
            drop[g] = true;
        } else {
            break;
        }
    }
    TrigApproximation out;
    out.potential = p;
    out.potential.modes.clear();
    for (std::size_t i = 0; i < n; ++i)
        if (!drop[group[i]]) out.potential.modes.push_back(p.modes[i]);
    out.bound = cum;
    return out;
}

// Tensor Bernstein polynomial B_N[w] of a scalar function on [0,1]^{d2},
// affinely carried onto the box [blo, bhi]. The classical formulas operate on
// the unit box; rescaling is the caller's business.
template <class W>
Profile bernstein_profile(const W& w, int N, int d2, DVec blo, DVec bhi) {
    if (N < 1) throw std::invalid_argument("bernstein_profile: N >= 1 required");
    Profile p;
    p.kind = Profile::Kind::bernstein;
    p.d2 = d2;
    p.degree = N;
    p.blo = std::move(blo);
    p.bhi = std::move(bhi);
    std::size_t total = 1;
    for (int j = 0; j < d2; ++j) total *= static_cast<std::size_t>(N + 1);
    p.values.resize(total);
    std::vector<int> nu(d2, 0);
    DVec u(d2);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        for (int j = d2 - 1; j >= 0; --j) {
            nu[j] = static_cast<int>(rem % (N + 1));
            rem /= (N + 1);
        }
        for (int j = 0; j < d2; ++j) u[j] = static_cast<double>(nu[j]) / N;
        p.values[i] = w(u);
    }
    // Reported sup-error from a dense grid comparison on the unit box.
    const int g = d2 == 1 ? 2001 : 101;
    std::vector<int> idx(d2, 0);
    double err = 0.0;
    while (true) {
        DVec uu(d2), xx(d2);
        for (int j = 0; j < d2; ++j) {
            uu[j] = static_cast<double>(idx[j]) / (g - 1);
            xx[j] = p.blo[j] + uu[j] * (p.bhi[j] - p.blo[j]);
        }
        err = std::max(err, std::abs(p.eval(xx).real() - w(uu)));
        int j = d2 - 1;
        while (j >= 0 && ++idx[j] == g) idx[j--] = 0;
        if (j < 0) break;
    }
    p.bern_sup_error = err;
    return p;
}

inline Profile bernstein_profile_1d(const std::function<double(double)>& w, int N,
                                    double lo = 0.0, double hi = 1.0) {
    return bernstein_profile([&w](const DVec& u) { return w(u[0]); }, N, 1, DVec{lo},
                             DVec{hi});
}

}  // namespace sdoslab
