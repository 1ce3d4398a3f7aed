#pragma once

// Independent verification path: position-space Lippmann-Schwinger /
// Born-series solver on a uniform spatial grid with the outgoing 2D
// Green's function, plus far-field amplitude extraction.

#include "scatter/delta2d.hpp"
#include "scatter/solver.hpp"

namespace scatter {

using SpatialPotential = std::function<cplx(double, double)>;

struct SpatialGrid {
    double x0 = 0.0, y0 = 0.0;  // first sample (cell centers)
    double hx = 0.0, hy = 0.0;
    int nx = 0, ny = 0;

    VectorXcd v;  // row-major: v[i * ny + j] = v(x_i, y_j)

    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    int size() const { return nx * ny; }
};

// Samples v at cell centers over [x_lo, x_hi] x [y_lo, y_hi]. Enforces
// at least 8 points per wavelength 2 pi / k in each direction.
SpatialGrid make_spatial_grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny,
                              const SpatialPotential& v, double k);

struct OracleSolution {
    VectorXcd psi;                 // total field on the grid
    VectorXcd psi_inc;
    double contraction = 0.0;      // power-iteration estimate of ||G v||
    std::vector<double> residuals; // successive-difference norms per term
};

// Picard iteration psi <- psi_inc + G * (v psi), n_terms applications.
// Refuses (NonContractive) when the power-iteration estimate of the
// iteration operator's spectral radius reaches 1.
OracleSolution born_series_solve(const SpatialGrid& grid, const IncidenceSpec& inc, double k,
                                 int n_terms);

// Far-field amplitude on the solver's detector-angle set:
// f(theta) = -(1 / (2 sqrt(2 pi))) sum e^{-i k rhat.r} v(r) psi(r) hx hy.
std::vector<AmplitudeSample> far_field(const SpatialGrid& grid, const VectorXcd& psi, double k,
                                       int n_angles = 721);

}  // namespace scatter
