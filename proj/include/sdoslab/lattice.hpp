#pragma once
// Lattice geometry: sites of h*Z^d, half-open boxes [-L;L)^{d1} x [-Lp;Lp)^{d2},
// unit cubes C(y) = y + [0,1)^d, and the dense site indexing used everywhere else.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdoslab {

using IVec = std::vector<int>;
using DVec = std::vector<double>;

// Dimension split d = d1 + d2 and lattice step h of h*Z^d.
struct LatticeSpec {
    int d1 = 1;
    int d2 = 1;
    double h = 1.0;

    int dim() const { return d1 + d2; }

    void validate() const {
        if (d1 < 1 || d2 < 1)
            throw std::invalid_argument("LatticeSpec: require d1 >= 1 and d2 >= 1");
        if (!(h > 0.0) || h > 1.0)
            throw std::invalid_argument("LatticeSpec: require 0 < h <= 1");
    }
};

// Half-widths of the x1/x2 box and the extra per-side site buffer used when
// truncating the infinite-lattice operator.
struct BoxSpec {
    double L = 1.0;
    double Lp = 1.0;
    int buffer = 0;

    void validate() const {
        if (!(L >= 1.0) || !(Lp >= 1.0))
            throw std::invalid_argument("BoxSpec: require L >= 1 and Lp >= 1");
        if (buffer < 0) throw std::invalid_argument("BoxSpec: require buffer >= 0");
    }
};

// Inclusive integer range of k with a <= k*h < b, resolved by the exact
// floating-point predicate so that membership is consistent everywhere.
inline std::pair<int, int> site_range(double a, double b, double h) {
    int lo = static_cast<int>(std::ceil(a / h));
    while (lo * h < a) ++lo;
    while ((lo - 1) * h >= a) --lo;
    int hi = static_cast<int>(std::floor(b / h));
    while (hi * h >= b) --hi;
    while ((hi + 1) * h < b) ++hi;
    return {lo, hi};  // empty when lo > hi
}

// Bidirectional map between integer vectors inside an axis-aligned product
// range and dense indices 0..n-1, ordered lexicographically (axis 0 most
// significant).
class SiteIndex {
public:
    SiteIndex() = default;

    // ranges: per-axis inclusive [lo, hi]; an empty axis yields size() == 0.
    explicit SiteIndex(std::vector<std::pair<int, int>> ranges) {
        const int d = static_cast<int>(ranges.size());
        lo_.resize(d);
        extent_.resize(d);
        stride_.assign(d, 0);
        size_ = 1;
        for (int j = 0; j < d; ++j) {
            lo_[j] = ranges[j].first;
            extent_[j] = ranges[j].second - ranges[j].first + 1;
            if (extent_[j] <= 0) {
                size_ = 0;
                extent_[j] = 0;
            }
        }
        if (size_ > 0) {
            std::size_t s = 1;
            for (int j = d - 1; j >= 0; --j) {
                stride_[j] = s;
                s *= static_cast<std::size_t>(extent_[j]);
            }
            size_ = s;
        }
    }

    int dim() const { return static_cast<int>(lo_.size()); }
    std::size_t size() const { return size_; }
    int lo(int axis) const { return lo_[axis]; }
    int hi(int axis) const { return lo_[axis] + extent_[axis] - 1; }
    int extent(int axis) const { return extent_[axis]; }
    std::size_t stride(int axis) const { return stride_[axis]; }

    bool contains(const IVec& k) const {
        for (int j = 0; j < dim(); ++j)
            if (k[j] < lo_[j] || k[j] >= lo_[j] + extent_[j]) return false;
        return true;
    }

    std::size_t index(const IVec& k) const {
        std::size_t i = 0;
        for (int j = 0; j < dim(); ++j) i += static_cast<std::size_t>(k[j] - lo_[j]) * stride_[j];
        return i;
    }

    void decode(std::size_t i, IVec& k) const {
        k.resize(dim());
        for (int j = 0; j < dim(); ++j) {
            k[j] = lo_[j] + static_cast<int>(i / stride_[j]);
            i %= stride_[j];
        }
    }

    IVec decode(std::size_t i) const {
        IVec k;
        decode(i, k);
        return k;
    }

    // Lexicographically ordered materialization.
    std::vector<IVec> sites() const {
        std::vector<IVec> out;
        out.reserve(size_);
        IVec k;
        for (std::size_t i = 0; i < size_; ++i) {
            decode(i, k);
            out.push_back(k);
        }
        return out;
    }

private:
    std::vector<int> lo_, extent_;
    std::vector<std::size_t> stride_;
    std::size_t size_ = 0;
};

// Site index of the box [-L;L)^{d1} x [-Lp;Lp)^{d2} on h*Z^d.
inline SiteIndex box_index(const LatticeSpec& spec, double L, double Lp) {
    spec.validate();
    std::vector<std::pair<int, int>> r;
    r.reserve(spec.dim());
    for (int j = 0; j < spec.d1; ++j) r.push_back(site_range(-L, L, spec.h));
    for (int j = 0; j < spec.d2; ++j) r.push_back(site_range(-Lp, Lp, spec.h));
    return SiteIndex(std::move(r));
}

// All k in Z^d with h*k inside the half-open box, lexicographically ordered.
inline std::vector<IVec> enumerate_box(const LatticeSpec& spec, double L, double Lp) {
    if (!(L > 0.0) || !(Lp > 0.0))
        throw std::invalid_argument("enumerate_box: require L > 0 and Lp > 0");
    return box_index(spec, L, Lp).sites();
}

// Sites h*k in the unit cube C(y) = y + [0,1)^d. Accepts a real anchor; the
// common case y in Z^d is what the trace functionals use.
inline std::vector<IVec> cube_sites(const LatticeSpec& spec, const DVec& y) {
    spec.validate();
    if (static_cast<int>(y.size()) != spec.dim())
        throw std::invalid_argument("cube_sites: anchor dimension mismatch");
    std::vector<std::pair<int, int>> r;
    r.reserve(y.size());
    for (double yj : y) r.push_back(site_range(yj, yj + 1.0, spec.h));
    return SiteIndex(std::move(r)).sites();
}

inline std::vector<IVec> cube_sites(const LatticeSpec& spec, const IVec& y) {
    return cube_sites(spec, DVec(y.begin(), y.end()));
}

// Anchor of the unique unit cube containing site h*k, i.e. floor(h*k)
// componentwise under the same floating-point arithmetic as site_range.
inline IVec cube_anchor(const LatticeSpec& spec, const IVec& k) {
    IVec y(k.size());
    for (std::size_t j = 0; j < k.size(); ++j)
        y[j] = static_cast<int>(std::floor(k[j] * spec.h));
    return y;
}

}  // namespace sdoslab
