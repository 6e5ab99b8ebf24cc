#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "demo_setup.hpp"
#include "sdoslab/funcalc.hpp"

using namespace sdoslab;

TEST_CASE("cheb_coeffs basics") {
    SECTION("zero function gives zero coefficients") {
        auto e = cheb_coeffs([](double) { return 0.0; }, -1.0, 9.0, 64);
        for (double c : e.coeffs) REQUIRE(c == 0.0);
        REQUIRE(e.recon_error == 0.0);
    }
    SECTION("plateau spanning the interval reconstructs to 1e-10 at the midpoint") {
        // support wider than the expansion interval, so f == 1 on all of it
        auto f = TestFunction::plateau(-10.0, -4.0, 12.0, 20.0);
        auto e = cheb_coeffs(f, -3.0, 11.0, 512);
        REQUIRE(std::abs(e.eval(4.0) - 1.0) <= 1e-10);
    }
    SECTION("error does not grow when the degree quadruples") {
        auto f = demo::demo_f();
        auto e256 = cheb_coeffs(f, -1.5, 9.5, 256);
        auto e1024 = cheb_coeffs(f, -1.5, 9.5, 1024);
        REQUIRE(e1024.recon_error <= e256.recon_error);
    }
    SECTION("degenerate interval refused") {
        REQUIRE_THROWS_AS(cheb_coeffs([](double) { return 1.0; }, 2.0, 2.0, 64),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(cheb_coeffs([](double) { return 1.0; }, 0.0, 1.0, 4),
                          std::invalid_argument);
    }
    SECTION("jackson factors damp monotonically from 1 to ~0") {
        const auto g = jackson_factors(257);
        REQUIRE(g[0] == Catch::Approx(1.0).epsilon(1e-12));
        for (std::size_t m = 1; m < g.size(); ++m) REQUIRE(g[m] < g[m - 1]);
        REQUIRE(g.back() < 1e-2);
    }
}

TEST_CASE("fully periodic free eigenvalues equal the symbol on the momentum grid") {
    LatticeSpec s{1, 1, 1.0};
    const auto H =
        assemble(s, BoxSpec{3.0, 2.0, 0}, demo::zero_potential(), Bc::periodic_all);
    const auto eig = dense_eig(H);
    std::vector<double> sym;
    const double twopi = 2.0 * std::acos(-1.0);
    for (int m1 = -3; m1 < 3; ++m1)
        for (int m2 = -2; m2 < 2; ++m2)
            sym.push_back(symbol(s, {twopi * m1 / 6.0, twopi * m2 / 4.0}));
    std::sort(sym.begin(), sym.end());
    REQUIRE(static_cast<std::size_t>(eig.evals.size()) == sym.size());
    for (std::size_t i = 0; i < sym.size(); ++i)
        REQUIRE(eig.evals[i] == Catch::Approx(sym[i]).margin(1e-10));
}

TEST_CASE("f_of_H_column") {
    LatticeSpec s{1, 1, 1.0};
    auto f = demo::demo_f();

    SECTION("single-site box: column is f(scalar) delta") {
        SiteIndex g({{0, 0}, {0, 0}});
        const auto H =
            assemble_on_grid(s, g, {false, false}, [](const DVec&) { return 0.3; });
        const auto col = f_of_H_column(H, f, 0, FuncalcOptions{Method::dense});
        REQUIRE(col[0] == Catch::Approx(f.eval(4.3)).epsilon(1e-13));
    }
    SECTION("plateau covering the whole spectral interval gives the identity") {
        const auto H =
            assemble(s, BoxSpec{3.0, 3.0, 0}, demo::demo_potential(), Bc::dirichlet);
        const auto si = H.spectral_interval();
        auto plat = TestFunction::plateau(si[0] - 3.0, si[0] - 1.0, si[1] + 1.0,
                                          si[1] + 3.0);
        FuncalcOptions kpm{Method::kpm, 2048, Damping::none, 1};
        const std::size_t k = H.sites.index({0, 0});
        const auto col = f_of_H_column(H, plat, k, kpm);
        Eigen::VectorXd expect = Eigen::VectorXd::Zero(H.size());
        expect[k] = 1.0;
        REQUIRE((col - expect).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
    SECTION("kpm column matches the dense oracle on a 20x20-site box") {
        const auto H = assemble(s, BoxSpec{10.0, 10.0, 0}, demo::demo_potential(),
                                Bc::dirichlet);
        const std::size_t k = H.sites.index({0, 0});
        const auto dense = f_of_H_column(H, f, k, FuncalcOptions{Method::dense});
        const auto kpm =
            f_of_H_column(H, f, k, FuncalcOptions{Method::kpm, 2048, Damping::none, 1});
        REQUIRE((dense - kpm).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
    SECTION("dense path refuses oversized boxes") {
        const auto H = assemble(s, BoxSpec{40.0, 40.0, 0}, demo::zero_potential(),
                                Bc::dirichlet);
        REQUIRE(H.size() > kDenseSiteCap);
        REQUIRE_THROWS_AS(f_of_H_column(H, f, 0, FuncalcOptions{Method::dense}),
                          RefusalError);
    }
}

TEST_CASE("functional calculus invariants on a small box") {
    LatticeSpec s{1, 1, 1.0};
    const auto H =
        assemble(s, BoxSpec{3.0, 3.0, 2}, demo::demo_potential(), Bc::dirichlet);
    const auto eig = dense_eig(H);
    auto f = demo::demo_f();
    auto g = TestFunction::gaussian(4.0, 1.0, 0.5, 7.5, 0.5);

    SECTION("linearity of the dense path") {
        const std::size_t k = H.sites.index({1, 0});
        auto fe = [&](double x) { return 2.0 * f.eval(x) - 0.7 * g.eval(x); };
        const Eigen::VectorXd combo = eig.column_of(fe, k);
        const Eigen::VectorXd parts =
            2.0 * eig.column_of([&](double x) { return f.eval(x); }, k) -
            0.7 * eig.column_of([&](double x) { return g.eval(x); }, k);
        REQUIRE((combo - parts).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
    SECTION("self-adjointness: <f(H)d_j, d_k> = <d_j, f(H)d_k>") {
        const std::size_t j = H.sites.index({0, 1}), k = H.sites.index({-2, -1});
        auto fe = [&](double x) { return f.eval(x); };
        REQUIRE(std::abs(eig.column_of(fe, j)[k] - eig.column_of(fe, k)[j]) <= 1e-12);
    }
    SECTION("nonnegative f has nonnegative diagonal") {
        const auto d = eig.diagonal_of([&](double x) { return f.eval(x); });
        for (Eigen::Index i = 0; i < d.size(); ++i) REQUIRE(d[i] >= -1e-10);
    }
    SECTION("kpm diagonal matches dense to 1e-6 (undamped, degree 2048)") {
        const auto dd = eig.diagonal_of([&](double x) { return f.eval(x); });
        const auto dk = f_of_H_diagonal(H, f, {},
                                        FuncalcOptions{Method::kpm, 2048, Damping::none, 2});
        REQUIRE((dd - dk).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
}

TEST_CASE("free_diagonal") {
    LatticeSpec s{1, 1, 1.0};

    SECTION("plateau over the whole free band integrates to 1") {
        auto plat = TestFunction::plateau(-1.0, -0.5, 8.5, 9.0);
        REQUIRE(free_diagonal(s, plat) == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("f supported below the band gives 0") {
        auto low = TestFunction::plateau(-5.0, -4.0, -2.0, -1.0);
        REQUIRE(free_diagonal(s, low) == 0.0);
    }
    SECTION("matches the dense periodic-box diagonal at 41x41 sites") {
        auto f = demo::demo_f();
        const double I = free_diagonal(s, f);
        // 41 sites per axis: half-open [-20.5, 20.5) at h = 1.
        SiteIndex g({{-20, 20}, {-20, 20}});
        const auto H =
            assemble_on_grid(s, g, {true, true}, [](const DVec&) { return 0.0; });
        const auto eig = dense_eig(H);
        const auto diag = eig.diagonal_of([&](double x) { return f.eval(x); });
        for (std::size_t k : {g.index({0, 0}), g.index({3, -7})})
            REQUIRE(std::abs(diag[k] - I) <= 1e-6);
    }
    SECTION("rejects tiny quadrature orders") {
        REQUIRE_THROWS_AS(free_diagonal(s, demo::demo_f(), 8), std::invalid_argument);
    }
}

TEST_CASE("resolvent_poly_approx") {
    const double lambda0 = 3.0;
    const int m0 = 2;

    SECTION("synthetic f(l) = (l+l0)^-(m0+k) is exact with g(s) = s^k") {
        const int kk = 3;
        auto f = [&](double lam) { return std::pow(lam + lambda0, -(m0 + kk)); };
        const auto a = resolvent_poly_approx(f, lambda0, m0, 1e-10);
        REQUIRE(a.sup_error <= 1e-12);
        // g really is s^k: check at a few s values
        for (double sv : {0.1, 0.3, 0.6}) {
            REQUIRE(a.g.eval(sv) == Catch::Approx(std::pow(sv, kk)).margin(1e-11));
        }
    }
    SECTION("grid error is nonincreasing as the degree doubles") {
        auto f = demo::demo_f();
        double prev = 1e300;
        for (int deg : {32, 64, 128}) {
            auto F = [&](double s) {
                if (s <= 0.0) return 0.0;
                const double fv = f.eval(1.0 / s - lambda0);
                return fv == 0.0 ? 0.0 : std::pow(s, -m0) * fv;
            };
            auto g = cheb_coeffs(F, 0.0, 2.0 / lambda0, deg);
            double err = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double lam = -0.5 * lambda0 + i * (30.0 / 2000.0);
                err = std::max(err, std::abs(std::pow(lam + lambda0, m0) * f.eval(lam) -
                                             g.eval(1.0 / (lam + lambda0))));
            }
            REQUIRE(err <= prev * (1.0 + 1e-12));
            prev = err;
        }
    }
    SECTION("weighted error transfers: |f - f_eps| <= eps (l+l0)^-m0 on the grid") {
        auto f = demo::demo_f();
        const double eps = 1e-6;
        const auto a = resolvent_poly_approx(f, lambda0, m0, eps);
        for (int i = 0; i <= 4000; ++i) {
            const double lam = -0.5 * lambda0 + i * (40.0 / 4000.0);
            const double w = std::pow(lam + lambda0, -m0);
            REQUIRE(std::abs(f.eval(lam) - a.eval(lam)) <= eps * w * (1.0 + 1e-9));
        }
    }
    SECTION("unreachable eps throws") {
        auto f = demo::demo_f();
        REQUIRE_THROWS_AS(resolvent_poly_approx(f, lambda0, m0, 1e-18, 64),
                          std::runtime_error);
    }
}

TEST_CASE("default kpm degree scales with the spectral width") {
    LatticeSpec s1{1, 1, 1.0}, s2{1, 1, 0.5};
    const auto H1 = assemble(s1, BoxSpec{2, 2, 1}, demo::demo_potential(), Bc::dirichlet);
    const auto H2 = assemble(s2, BoxSpec{2, 2, 1}, demo::demo_potential(), Bc::dirichlet);
    const auto f = demo::demo_f();
    REQUIRE(default_kpm_degree(H2, f) > 2 * default_kpm_degree(H1, f));
}
