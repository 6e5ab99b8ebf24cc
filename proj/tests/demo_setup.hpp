#pragma once
// Shared demo configuration used across the unit and acceptance suites:
// an almost-periodic potential with delta0 = 1 transverse decay on d = 2
// (frequencies {0, 2pi/3, sqrt(2)}) and a smoothly windowed Gaussian test
// function whose shoulders sit outside both spectra.

#include "sdoslab/potential.hpp"
#include "sdoslab/test_function.hpp"

namespace demo {

inline sdoslab::Profile algebraic_profile(double amp_re, double amp_im = 0.0) {
    sdoslab::Profile p;
    p.kind = sdoslab::Profile::Kind::algebraic;
    p.amp = {amp_re, amp_im};
    p.d2 = 1;
    p.delta0 = 1.0;
    p.smooth = true;  // (1 + x2^2)^{-1}
    return p;
}

// v(x1,x2) = [0.5 + 0.35 cos(2pi x1/3) + 0.03 cos(sqrt(2) x1)] / (1 + x2^2)
inline sdoslab::APPotential demo_potential() {
    using sdoslab::DVec;
    const double g1 = 2.0 * std::acos(-1.0) / 3.0;
    const double g2 = std::sqrt(2.0);
    sdoslab::APPotential p;
    p.d1 = 1;
    p.d2 = 1;
    p.delta0 = 1.0;
    p.C = 1.76;  // 2 * (0.5 + 0.35 + 0.03)
    p.modes.push_back({DVec{0.0}, algebraic_profile(0.5)});
    p.modes.push_back({DVec{g1}, algebraic_profile(0.175)});
    p.modes.push_back({DVec{-g1}, algebraic_profile(0.175)});
    p.modes.push_back({DVec{g2}, algebraic_profile(0.015)});
    p.modes.push_back({DVec{-g2}, algebraic_profile(0.015)});
    return p;
}

// 1-periodic-in-x1 potential for the periodic-bc covariance checks.
inline sdoslab::APPotential periodic_potential() {
    using sdoslab::DVec;
    const double g = 2.0 * std::acos(-1.0);
    sdoslab::APPotential p;
    p.d1 = 1;
    p.d2 = 1;
    p.delta0 = 1.0;
    p.C = 0.8;
    p.modes.push_back({DVec{g}, algebraic_profile(0.2)});
    p.modes.push_back({DVec{-g}, algebraic_profile(0.2)});
    return p;
}

inline sdoslab::APPotential zero_potential() {
    sdoslab::APPotential p;
    p.d1 = 1;
    p.d2 = 1;
    p.delta0 = 1.0;
    p.C = 1.0;
    return p;
}

inline sdoslab::TestFunction demo_f() {
    return sdoslab::TestFunction::gaussian(2.0, 1.5, -2.5, 9.0, 1.0);
}

}  // namespace demo
