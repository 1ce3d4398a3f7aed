#pragma once

// Closed-form treatments of the 2D delta potential: the renormalized
// Lippmann-Schwinger route and the divergence-free transfer-matrix route.

#include "scatter/solver.hpp"

namespace scatter {

// Hankel function of the first kind, order zero (in-house evaluation:
// ascending series for small argument, asymptotic expansion beyond).
cplx hankel_h0(double x);

// Outgoing 2D Helmholtz Green's function G(r) = -(i/4) H0^(1)(kr), r > 0.
// r = 0 raises DivergentGreen: the value is logarithmically divergent.
cplx green2d(double r, double k);

// Cutoff-regularized value at the origin:
// G_Lambda(0) = -(1/4pi) ln(Lambda^2/k^2 - 1) - i/4, Lambda > k.
cplx green2d_reg0(double lambda, double k);

// Running coupling z(k) = [z(k_ref)^-1 - (1/2pi) ln(k/k_ref)]^-1.
cplx coupling_run(cplx z_ref, double k_ref, double k);

// Renormalized coupling from a bare (z, Lambda) pair:
// [z_bare^-1 + (1/4pi) ln(Lambda^2/k^2 - 1)]^-1.
cplx coupling_renormalize(cplx z_bare, double lambda, double k);

struct DeltaIncidence {
    IncidenceSpec::Side side = IncidenceSpec::Side::right;
    double k = 1.0;
    double p0 = 0.0;
};

// Incident wavevector (kx, ky) for the incidence data.
std::pair<double, double> incident_wavevector(const DeltaIncidence& inc);

// Lippmann-Schwinger closed form:
// f(theta) = -sqrt(2/pi) e^{-i r0.(k rhat - k0)} / (4 z^-1 + i).
// |f| is independent of theta. z is the (renormalized) coupling.
cplx ls_amplitude(cplx z, const DeltaIncidence& inc, double r0x, double r0y, double theta);

// Transfer-matrix closed form: identical expression with z read as the
// physical coupling constant.
cplx tm_delta_amplitude(cplx z, const DeltaIncidence& inc, double r0x, double r0y, double theta);

// Fundamental transfer matrix of z delta(x-a) delta(y-b) materialized on
// the grid (terminating Dyson series; rank-structured blocks).
TransferOperator tm_delta_fundamental(cplx z, double a, double b, const GridPtr& grid);

// Delta column for the materialized operator (action of M on the incident
// Dirac source), for use with solve_boundary.
DeltaColumn tm_delta_column(cplx z, double a, double b, const GridPtr& grid,
                            const IncidenceSpec& inc);

// The constant c = F^{-1}_{q,b}{varpi^-1 B-(q)} recovered from the grid
// linear solve; equals (1+iz/4)^-1 e^{i k0.r0} up to quadrature error.
cplx tm_delta_c_constant(cplx z, double a, double b, const GridPtr& grid,
                         const IncidenceSpec& inc);

}  // namespace scatter
