#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatter/potential.hpp"

using namespace scatter;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

PotentialModel separable_gaussian(cplx amp, double hw = 1.0) {
    PotentialModel pot;
    pot.kind = SeparableY{make_cosine_window(amp, -0.5, 0.5),
                          [hw](double K) { return cplx{std::exp(-0.5 * K * K / (hw * hw)), 0.0}; }};
    pot.a_minus = -0.5;
    pot.a_plus = 0.5;
    return pot;
}

}  // namespace

TEST_CASE("vtilde: separable factorization and support clipping") {
    PotentialModel pot = separable_gaussian({2.0, 0.5});
    cplx g0 = std::get<SeparableY>(pot.kind).g(0.1);
    CHECK(std::abs(vtilde(pot, 0.1, 0.7) - g0 * std::exp(-0.5 * 0.49)) < 1e-14);
    CHECK(vtilde(pot, 0.9, 0.7) == cplx{0.0, 0.0});   // outside support
    CHECK(vtilde(pot, -0.7, 0.0) == cplx{0.0, 0.0});
}

TEST_CASE("HarmonicY acts as the exact spectral shift") {
    double k = 1.0, bp = 0.5;
    GridPtr grid = build_grid(Wavenumber(k), 48, 48, 6.0);
    PotentialModel pot;
    pot.kind = HarmonicY{make_box({1.0, 0.0}, -1.0, 1.0), bp};
    pot.a_minus = -1.0;
    pot.a_plus = 1.0;

    auto f = [](double p) { return cplx{std::exp(-0.3 * p * p), 0.2 * std::sin(p)}; };
    SpectralField in(grid);
    for (int i = 0; i < grid->size(); ++i) in.coeffs[i] = f(grid->p(i));
    SpectralField out = apply_V(pot, 0.0, in);
    for (int i = 0; i < grid->size(); ++i) {
        double p = grid->p(i);
        double target = p - bp;
        // stay away from band edges where the source lies outside any band
        if (std::abs(std::abs(target) - k) < 0.1 || std::abs(target) > 5.5) continue;
        CHECK(std::abs(out.coeffs[i] - f(target)) < 2e-5);
    }
}

TEST_CASE("SeparableY quadrature reproduces the Gaussian convolution closed form") {
    double k = 1.0;
    GridPtr grid = build_grid(Wavenumber(k), 48, 48, 8.0);
    PotentialModel pot = separable_gaussian({1.0, 0.0});
    cplx g0 = std::get<SeparableY>(pot.kind).g(0.2);

    SpectralField in(grid);
    for (int i = 0; i < grid->size(); ++i)
        in.coeffs[i] = std::exp(-0.5 * grid->p(i) * grid->p(i));
    SpectralField out = apply_V(pot, 0.2, in);
    // (1/2pi) int e^{-(p-q)^2/2} e^{-q^2/2} dq = e^{-p^2/4} / (2 sqrt(pi))
    for (int i = 0; i < grid->size(); ++i) {
        double p = grid->p(i);
        cplx expect = g0 * std::exp(-0.25 * p * p) / (2.0 * std::sqrt(kPi));
        CHECK(std::abs(out.coeffs[i] - expect) < 1e-7);
    }
}

TEST_CASE("apply is linear and apply_matrix matches columnwise apply") {
    double k = 1.0;
    GridPtr grid = build_grid(Wavenumber(k), 16, 8, 4.0);
    PotentialModel pot = separable_gaussian({0.7, -0.4});
    VApplier ap(pot, grid, VWeighting::inverse_varpi);
    const int n = grid->size();

    Eigen::MatrixXcd W = Eigen::MatrixXcd::Random(n, 3);
    Eigen::MatrixXcd out;
    ap.apply_matrix(0.1, W, out);
    for (int c = 0; c < 3; ++c) {
        std::vector<cplx> col(n), res(n);
        for (int i = 0; i < n; ++i) col[i] = W(i, c);
        ap.apply(0.1, col.data(), res.data());
        for (int i = 0; i < n; ++i) CHECK(std::abs(out(i, c) - res[i]) < 1e-12);
    }

    // linearity
    std::vector<cplx> f1(n), f2(n), fsum(n), o1(n), o2(n), osum(n);
    for (int i = 0; i < n; ++i) {
        f1[i] = {std::sin(0.3 * i), 0.1};
        f2[i] = {0.2, std::cos(0.5 * i)};
        fsum[i] = f1[i] + 2.0 * f2[i];
    }
    ap.apply(0.1, f1.data(), o1.data());
    ap.apply(0.1, f2.data(), o2.data());
    ap.apply(0.1, fsum.data(), osum.data());
    for (int i = 0; i < n; ++i) CHECK(std::abs(osum[i] - (o1[i] + 2.0 * o2[i])) < 1e-12);
}

TEST_CASE("apply_delta produces the sampled kernel column (and the shifted rung)") {
    double k = 1.0;
    GridPtr grid = build_grid(Wavenumber(k), 16, 8, 4.0);
    PotentialModel sep = separable_gaussian({1.0, 0.0});
    double p0 = 0.33;

    VApplier plain(sep, grid, VWeighting::plain);
    DeltaImage img = plain.apply_delta(0.0, p0);
    CHECK(img.deltas.empty());
    for (int i = 0; i < grid->size(); ++i) {
        cplx expect = vtilde(sep, 0.0, grid->p(i) - p0) / kTwoPi;
        CHECK(std::abs(img.smooth[i] - expect) < 1e-14);
    }

    VApplier invw(sep, grid, VWeighting::inverse_varpi);
    DeltaImage img2 = invw.apply_delta(0.0, p0);
    cplx coef = 1.0 / varpi(p0, k);
    for (int i = 0; i < grid->size(); ++i)
        CHECK(std::abs(img2.smooth[i] - img.smooth[i] * coef) < 1e-14);

    PotentialModel har;
    har.kind = HarmonicY{make_box({1.0, 0.0}, -1.0, 1.0), 2.1};
    har.a_minus = -1.0;
    har.a_plus = 1.0;
    VApplier hap(har, grid, VWeighting::plain);
    DeltaImage img3 = hap.apply_delta(0.3, p0);
    CHECK(img3.smooth.cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(img3.deltas.size() == 1);
    CHECK(img3.deltas[0].p0 == doctest::Approx(p0 + 2.1).epsilon(1e-14));
    CHECK(std::abs(img3.deltas[0].weight - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("GridSampled tabulation agrees with its separable source") {
    double k = 1.0;
    GridPtr grid = build_grid(Wavenumber(k), 24, 16, 4.0);
    PotentialModel sep = separable_gaussian({0.8, 0.2});

    GridSampled gs;
    for (double x = -0.5; x <= 0.5001; x += 0.02) gs.xs.push_back(x);
    for (double K = -8.5; K <= 8.5001; K += 0.02) gs.Ks.push_back(K);
    gs.vals.resize(static_cast<int>(gs.xs.size()), static_cast<int>(gs.Ks.size()));
    for (std::size_t i = 0; i < gs.xs.size(); ++i)
        for (std::size_t j = 0; j < gs.Ks.size(); ++j)
            gs.vals(i, j) = vtilde(sep, gs.xs[i], gs.Ks[j]);
    PotentialModel tab;
    tab.kind = std::move(gs);
    tab.a_minus = -0.5;
    tab.a_plus = 0.5;

    SpectralField in(grid);
    for (int i = 0; i < grid->size(); ++i)
        in.coeffs[i] = std::exp(-0.4 * grid->p(i) * grid->p(i));
    SpectralField a = apply_V(sep, 0.117, in);
    SpectralField b = apply_V(tab, 0.117, in);
    double worst = 0.0;
    for (int i = 0; i < grid->size(); ++i)
        worst = std::max(worst, std::abs(a.coeffs[i] - b.coeffs[i]));
    CHECK(worst < 1e-3);
}

TEST_CASE("zero potential maps everything to zero") {
    GridPtr grid = build_grid(Wavenumber(1.0), 8, 4, 4.0);
    SpectralField in(grid);
    in.coeffs.setOnes();
    in.deltas.push_back({0.2, {1.0, 0.0}});
    SpectralField out = apply_V(zero_potential(), 0.0, in);
    CHECK(out.coeffs.cwiseAbs().maxCoeff() == 0.0);
    CHECK(out.deltas.empty());
}

TEST_CASE("the quadrature path refuses delta potentials") {
    GridPtr grid = build_grid(Wavenumber(1.0), 8, 4, 4.0);
    PotentialModel pot;
    pot.kind = Delta2D{{1.0, 0.0}, 0.0, 0.0};
    CHECK_THROWS_AS(VApplier(pot, grid, VWeighting::plain), EngineError);
}
