#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatter/spectral.hpp"

using namespace scatter;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("varpi branches and identities") {
    double k = 1.3;
    // propagating: real, varpi^2 + p^2 = k^2
    for (double p : {0.0, 0.4, 0.9, 1.2999}) {
        cplx w = varpi(p, k);
        CHECK(w.imag() == 0.0);
        CHECK(std::abs(w.real() * w.real() + p * p - k * k) < 1e-12);
        CHECK(varpi_im(p, k) == 0.0);
    }
    // evanescent: purely imaginary, positive imaginary part
    for (double p : {1.3001, 2.0, 5.0}) {
        cplx w = varpi(p, k);
        CHECK(w.real() == 0.0);
        CHECK(w.imag() > 0.0);
        CHECK(std::abs(w.imag() - std::sqrt(p * p - k * k)) < 1e-12);
        CHECK(std::abs(varpi_im(p, k) - w.imag()) < 1e-15);
        CHECK(std::abs(varpi(-p, k) - w) < 1e-15);  // even in p
    }
    // continuity at the branch point
    CHECK(std::abs(varpi(k, k)) < 1e-12);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s0 = 0.0, s8 = 0.0;
    for (int i = 0; i < 8; ++i) {
        s0 += w[i];
        s8 += w[i] * std::pow(x[i], 8);
    }
    CHECK(std::abs(s0 - 2.0) < 1e-14);
    CHECK(std::abs(s8 - 2.0 / 9.0) < 1e-14);  // integral of x^8 over (-1,1)
}

TEST_CASE("grid quadrature: the singular-weight integral of 1/varpi is pi") {
    for (int n_prop : {16, 64}) {
        GridPtr g = build_grid(Wavenumber(1.7), n_prop, 16, 4 * 1.7);
        cplx s{0.0, 0.0};
        for (int i = 0; i < g->n_prop(); ++i) s += g->winv(i);
        // int_{-k}^{k} dq / sqrt(k^2 - q^2) = pi, exactly representable by
        // the theta-substituted rule.
        CHECK(std::abs(s - cplx{kPi, 0.0}) < 1e-12);
    }
}

TEST_CASE("grid quadrature: plain dp weights integrate smooth functions") {
    double k = 1.0;
    GridPtr g = build_grid(Wavenumber(k), 48, 48, 6.0);
    // int exp(-p^2) dp over (-6, 6) ~ sqrt(pi); both bands contribute.
    double s = 0.0;
    for (int i = 0; i < g->size(); ++i) s += g->w(i) * std::exp(-g->p(i) * g->p(i));
    CHECK(std::abs(s - std::sqrt(kPi)) < 1e-8);
}

TEST_CASE("grid node ordering and band membership") {
    GridPtr g = build_grid(Wavenumber(2.0), 24, 10, 8.0);
    CHECK(g->size() == 24 + 20);
    for (int i = 0; i < 24; ++i) {
        CHECK(g->is_prop(i));
        CHECK(std::abs(g->p(i)) < 2.0);
        if (i > 0) CHECK(g->p(i) > g->p(i - 1));  // ascending in theta
    }
    for (int i = 24; i < g->size(); ++i) {
        CHECK(!g->is_prop(i));
        CHECK(std::abs(g->p(i)) > 2.0);
        CHECK(std::abs(g->p(i)) < 8.0);
    }
}

TEST_CASE("band-local interpolation is accurate and never crosses |p| = k") {
    double k = 1.0;
    GridPtr g = build_grid(Wavenumber(k), 32, 24, 4.0);
    std::vector<cplx> vals(g->size());
    auto f = [](double p) { return cplx{std::cos(1.7 * p), std::sin(0.9 * p)}; };
    for (int i = 0; i < g->size(); ++i) vals[i] = f(g->p(i));

    for (double p : {0.05, -0.61, 0.93, 1.42, -2.8, 3.7}) {
        cplx got = g->interp(p, vals.data());
        CHECK(std::abs(got - f(p)) < 1e-6);
    }
    // outside the truncation: identically zero
    CHECK(std::abs(g->interp(4.5, vals.data())) == 0.0);
    CHECK(std::abs(g->interp(-7.0, vals.data())) == 0.0);

    // band locality: make the evanescent samples absurd, propagating
    // interpolation must not change.
    auto vals2 = vals;
    for (int i = g->n_prop(); i < g->size(); ++i) vals2[i] = {1e6, -1e6};
    CHECK(std::abs(g->interp(0.93, vals2.data()) - g->interp(0.93, vals.data())) == 0.0);
}

TEST_CASE("project_pk zeroes the evanescent band and drops evanescent deltas") {
    GridPtr g = build_grid(Wavenumber(1.0), 16, 8, 4.0);
    SpectralField f(g);
    for (int i = 0; i < g->size(); ++i) f.coeffs[i] = {1.0, 1.0};
    f.deltas.push_back({0.5, {1.0, 0.0}});
    f.deltas.push_back({2.5, {1.0, 0.0}});
    SpectralField pf = project_pk(f);
    for (int i = 0; i < g->size(); ++i) {
        if (g->is_prop(i))
            CHECK(pf.coeffs[i] == f.coeffs[i]);
        else
            CHECK(pf.coeffs[i] == cplx{0.0, 0.0});
    }
    REQUIRE(pf.deltas.size() == 1);
    CHECK(pf.deltas[0].p0 == 0.5);
    // idempotence
    SpectralField pf2 = project_pk(pf);
    for (int i = 0; i < g->size(); ++i) CHECK(pf2.coeffs[i] == pf.coeffs[i]);
    CHECK(pf2.deltas.size() == pf.deltas.size());
}

TEST_CASE("Fourier transform matches the Gaussian closed form and round-trips") {
    const int n = 256;
    const double L = 32.0, dy = L / n, y0 = -L / 2;
    std::vector<cplx> samples(n);
    for (int i = 0; i < n; ++i) {
        double y = y0 + i * dy;
        samples[i] = std::exp(-0.5 * y * y);
    }
    FourierData ft = fourier_y_to_p(samples, y0, dy);
    for (int m = 0; m < n; ++m) {
        double p = ft.freqs[m];
        cplx expect = std::sqrt(2.0 * kPi) * std::exp(-0.5 * p * p);
        CHECK(std::abs(ft.values[m] - expect) < 1e-12);
    }
    std::vector<cplx> back = fourier_p_to_y(ft, y0, dy);
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(back[i] - samples[i]));
    CHECK(m < 1e-10);
}

TEST_CASE("wavenumber and grid validation") {
    CHECK_THROWS_AS(Wavenumber(0.0), EngineError);
    CHECK_THROWS_AS(Wavenumber(-1.0), EngineError);
    SpectralField a(build_grid(Wavenumber(1.0), 8, 4, 4.0));
    SpectralField b(build_grid(Wavenumber(1.0), 8, 4, 4.0));
    CHECK_THROWS_AS(require_same_grid(a.grid, b.grid), EngineError);  // distinct objects
}
