#include "scatter/delta2d.hpp"

#include <cmath>
#include <numbers>

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kEulerGamma = 0.57721566490153286060;
constexpr double kSeriesAsymptoticSwitch = 12.0;
}

namespace {

// Ascending series for J0 and Y0; usable in double precision up to x ~ 12
// before cancellation erodes the last digits.
void j0y0_series(double x, double& j0, double& y0) {
    const double q = 0.25 * x * x;
    double term = 1.0, jsum = 1.0, ysum = 0.0, harm = 0.0;
    for (int m = 1; m <= 200; ++m) {
        term *= -q / (static_cast<double>(m) * m);
        harm += 1.0 / m;
        jsum += term;
        ysum -= term * harm;
        if (std::abs(term) < 1e-18 * (std::abs(jsum) + 1.0) && m > 4) break;
    }
    j0 = jsum;
    y0 = (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * jsum + ysum);
}

// Asymptotic (Hankel) expansion: H0 ~ sqrt(2/(pi x)) e^{i(x-pi/4)} S(x),
// S = sum_m i^m a_m / x^m with a_m = -a_{m-1} (2m-1)^2 / (8m). Truncated
// at the smallest term.
cplx h0_asymptotic(double x) {
    cplx s{1.0, 0.0};
    double a = 1.0;
    cplx ipow{1.0, 0.0};
    double prev = 1.0;
    for (int m = 1; m <= 30; ++m) {
        a *= -((2.0 * m - 1.0) * (2.0 * m - 1.0)) / (8.0 * m);
        ipow *= kI;
        double mag = std::abs(a) / std::pow(x, m);
        if (mag > prev) break;
        prev = mag;
        s += ipow * a / std::pow(x, static_cast<double>(m));
        if (mag < 1e-18) break;
    }
    double amp = std::sqrt(2.0 / (kPi * x));
    return amp * std::polar(1.0, x - 0.25 * kPi) * s;
}

}  // namespace

cplx hankel_h0(double x) {
    if (!(x > 0.0))
        throw EngineError(ErrorCode::validation, "hankel_h0 requires x > 0");
    if (x <= kSeriesAsymptoticSwitch) {
        double j0, y0;
        j0y0_series(x, j0, y0);
        return {j0, y0};
    }
    return h0_asymptotic(x);
}

cplx green2d(double r, double k) {
    if (r == 0.0)
        throw EngineError(ErrorCode::divergent_green,
                          "G(0) is logarithmically divergent; evaluating it is forbidden");
    if (!(r > 0.0) || !(k > 0.0))
        throw EngineError(ErrorCode::validation, "green2d requires r > 0 and k > 0");
    return -0.25 * kI * hankel_h0(k * r);
}

cplx green2d_reg0(double lambda, double k) {
    if (!(lambda > k))
        throw EngineError(ErrorCode::validation, "regularization cutoff must exceed k");
    return cplx{-std::log(lambda * lambda / (k * k) - 1.0) / (4.0 * kPi), -0.25};
}

cplx coupling_run(cplx z_ref, double k_ref, double k) {
    if (!(k > 0.0) || !(k_ref > 0.0))
        throw EngineError(ErrorCode::validation, "wavenumbers must be positive");
    if (z_ref == cplx{0.0, 0.0})
        throw EngineError(ErrorCode::validation, "reference coupling must be nonzero");
    cplx denom = 1.0 / z_ref - std::log(k / k_ref) / kTwoPi;
    if (std::abs(denom) < 1e-14)
        throw EngineError(ErrorCode::runaway_coupling, "running coupling diverges at this k");
    return 1.0 / denom;
}

cplx coupling_renormalize(cplx z_bare, double lambda, double k) {
    if (!(lambda > k))
        throw EngineError(ErrorCode::validation, "cutoff must exceed k");
    if (z_bare == cplx{0.0, 0.0}) return z_bare;
    cplx denom = 1.0 / z_bare + std::log(lambda * lambda / (k * k) - 1.0) / (4.0 * kPi);
    if (std::abs(denom) < 1e-14)
        throw EngineError(ErrorCode::runaway_coupling, "renormalized coupling diverges");
    return 1.0 / denom;
}

std::pair<double, double> incident_wavevector(const DeltaIncidence& inc) {
    double w = varpi(inc.p0, inc.k).real();
    double kx = inc.side == IncidenceSpec::Side::left ? w : -w;
    return {kx, inc.p0};
}

cplx ls_amplitude(cplx z, const DeltaIncidence& inc, double r0x, double r0y, double theta) {
    if (z == cplx{0.0, 0.0}) return {0.0, 0.0};
    // Renormalized Lippmann-Schwinger form: the coupling enters through
    // 4/z + i, the geometry through the momentum-transfer phase.
    cplx denom = 4.0 / z + kI;
    if (std::abs(denom) < 1e-14)
        throw EngineError(ErrorCode::spectral_singularity,
                          "delta-potential spectral singularity: 4/z + i = 0");
    auto [k0x, k0y] = incident_wavevector(inc);
    double kx = inc.k * std::cos(theta), ky = inc.k * std::sin(theta);
    cplx phase = std::polar(1.0, -((kx - k0x) * r0x + (ky - k0y) * r0y));
    return -std::sqrt(2.0 / kPi) * phase / denom;
}

cplx tm_delta_amplitude(cplx z, const DeltaIncidence& inc, double r0x, double r0y, double theta) {
    if (z == cplx{0.0, 0.0}) return {0.0, 0.0};
    // Transfer-matrix route: the terminating Dyson series yields the field
    // value at the delta site, c = e^{i k0.r0} / (1 + i z / 4), and the
    // amplitude follows as f = -z c e^{-i k rhat.r0} / (2 sqrt(2 pi)).
    cplx denom = 1.0 + 0.25 * kI * z;
    if (std::abs(denom) < 1e-14)
        throw EngineError(ErrorCode::spectral_singularity,
                          "delta-potential spectral singularity: z = 4i");
    auto [k0x, k0y] = incident_wavevector(inc);
    cplx c = std::polar(1.0, k0x * r0x + k0y * r0y) / denom;
    double kx = inc.k * std::cos(theta), ky = inc.k * std::sin(theta);
    return -z * c * std::polar(1.0, -(kx * r0x + ky * r0y)) / (2.0 * std::sqrt(kTwoPi));
}

namespace {

// Rank-one core R = Pi_k V_b Pi_k varpi^-1 on the propagating block:
// R_ij = e^{-i b p_i} (1/2pi) e^{i b p_j} winv_j.
Eigen::MatrixXcd delta_core(double b, const GridPtr& grid) {
    const int np = grid->n_prop();
    Eigen::VectorXcd u(np), v(np);
    for (int i = 0; i < np; ++i) {
        u[i] = std::polar(1.0, -b * grid->p(i));
        v[i] = std::polar(1.0, b * grid->p(i)) * grid->winv(i) / kTwoPi;
    }
    return u * v.transpose();
}

}  // namespace

TransferOperator tm_delta_fundamental(cplx z, double a, double b, const GridPtr& grid) {
    const int np = grid->n_prop();
    TransferOperator M = TransferOperator::identity(grid, OperatorScope::fundamental_prop);
    if (z == cplx{0.0, 0.0}) return M;
    Eigen::MatrixXcd R = (-0.5 * kI * z) * delta_core(b, grid);
    Eigen::VectorXcd ph(np);
    for (int i = 0; i < np; ++i) ph[i] = std::polar(1.0, a * grid->varpi_at(i).real());
    auto D = ph.asDiagonal();
    auto Dc = ph.conjugate().asDiagonal();
    M.m11 = Dc * (Eigen::MatrixXcd::Identity(np, np) + R) * D;
    M.m12 = Dc * R * Dc;
    M.m21 = D * (-R) * D;
    M.m22 = D * (Eigen::MatrixXcd::Identity(np, np) - R) * Dc;
    return M;
}

DeltaColumn tm_delta_column(cplx z, double a, double b, const GridPtr& grid,
                            const IncidenceSpec& inc) {
    const int np = grid->n_prop();
    const double k = grid->k();
    double w0 = varpi(inc.p0, k).real();
    DeltaColumn col;
    col.minus_smooth = VectorXcd::Zero(np);
    col.plus_smooth = VectorXcd::Zero(np);

    // Core action on the unit Dirac source: (R delta_{p0})(p) =
    // e^{-ibp} (1/2pi) e^{ibp0} / varpi(p0).
    cplx src = std::polar(1.0, b * inc.p0) / (kTwoPi * w0);
    cplx zz = -0.5 * kI * z;

    if (inc.side == IncidenceSpec::Side::left) {
        cplx inner = std::polar(1.0, a * w0);  // e^{+ia varpi(p0)} from the right phase factor
        for (int i = 0; i < np; ++i) {
            double wi = grid->varpi_at(i).real();
            cplx core = std::polar(1.0, -b * grid->p(i)) * src * zz * inner;
            col.minus_smooth[i] = std::polar(1.0, -a * wi) * core;
            col.plus_smooth[i] = -std::polar(1.0, a * wi) * core;
        }
        col.minus_deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    } else {
        cplx inner = std::polar(1.0, -a * w0);
        for (int i = 0; i < np; ++i) {
            double wi = grid->varpi_at(i).real();
            cplx core = std::polar(1.0, -b * grid->p(i)) * src * zz * inner;
            col.minus_smooth[i] = std::polar(1.0, -a * wi) * core;
            col.plus_smooth[i] = -std::polar(1.0, a * wi) * core;
        }
        col.plus_deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    }
    return col;
}

cplx tm_delta_c_constant(cplx z, double a, double b, const GridPtr& grid,
                         const IncidenceSpec& inc) {
    TransferOperator M = tm_delta_fundamental(z, a, b, grid);
    DeltaColumn col = tm_delta_column(z, a, b, grid, inc);
    ScatteringResult res = solve_boundary(M, col, inc);
    // c = psi(a, b), reconstructed from the side of the slab carrying a
    // single coefficient function: x < a for right incidence (B- only),
    // x > a for left incidence (A+ only). Delta terms enter analytically.
    const int np = grid->n_prop();
    const bool from_left = inc.side == IncidenceSpec::Side::right;
    const double xsgn = from_left ? -1.0 : 1.0;  // sign of a*varpi in the phase
    const SpectralField& smooth = from_left ? res.B_minus_smooth : res.A_plus_smooth;
    const auto& deltas = from_left ? res.B_minus_deltas : res.A_plus_deltas;
    cplx c{0.0, 0.0};
    for (int i = 0; i < np; ++i) {
        double q = grid->p(i);
        double wq = grid->varpi_at(i).real();
        c += grid->winv(i).real() * std::polar(1.0, b * q + xsgn * a * wq) * smooth.coeffs[i] /
             kTwoPi;
    }
    for (const auto& d : deltas) {
        double wq = varpi(d.p0, grid->k()).real();
        c += d.weight * std::polar(1.0, b * d.p0 + xsgn * a * wq) / (kTwoPi * wq);
    }
    return c;
}

}  // namespace scatter
