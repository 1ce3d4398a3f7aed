#pragma once

// Transverse-momentum discretization: dispersion functions, quadrature
// grids over the propagating disk and a truncated evanescent band,
// band-local barycentric interpolation, and the y<->p Fourier transform.

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "scatter/errors.hpp"

namespace scatter {

using cplx = std::complex<double>;
using Eigen::VectorXcd;
// Row-major so that operator rows are contiguous for the vector kernels.
using RowMatrixXcd =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Positive wavenumber; grids record it and refuse mixing.
struct Wavenumber {
    double value;
    explicit Wavenumber(double k) : value(k) {
        if (!(k > 0.0))
            throw EngineError(ErrorCode::validation, "wavenumber must be positive");
    }
};

// Axial dispersion: sqrt(k^2-p^2) on the propagating band, i*sqrt(p^2-k^2)
// on the evanescent band, continuous (value 0) at |p| = k.
cplx varpi(double p, double k);
double varpi_im(double p, double k);

// Gauss-Legendre nodes/weights on (-1, 1).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Barycentric Lagrange interpolation on a fixed node set.
class BarycentricInterp {
  public:
    BarycentricInterp() = default;
    explicit BarycentricInterp(std::vector<double> nodes);
    // Cardinal weights L_j(t): row such that sum_j row[j] f(t_j) ~ f(t).
    void cardinal_row(double t, std::vector<double>& row) const;
    cplx eval(double t, const cplx* values) const;
    const std::vector<double>& nodes() const { return nodes_; }

  private:
    std::vector<double> nodes_;
    std::vector<double> bary_;
};

struct GridNode {
    double p;       // transverse momentum
    double w;       // quadrature weight for integrals dp
    double winv;    // weight for integrals dp/varpi(p), the 1/varpi absorbed
                    // analytically on the propagating band (winv is real there;
                    // on the evanescent band the full complex weight is w/varpi)
};

// Quadrature grid for a fixed wavenumber. Node order: propagating band
// (p = k sin(theta), theta ascending), then evanescent band (positive
// p in (k, p_max] ascending, then their mirrors -p in the same order).
class MomentumGrid {
  public:
    MomentumGrid(Wavenumber k, int n_prop, int n_evan, double p_max);

    double k() const { return k_; }
    double p_max() const { return p_max_; }
    int n_prop() const { return n_prop_; }
    int n_evan() const { return 2 * n_evan_half_; }
    int size() const { return n_prop_ + 2 * n_evan_half_; }

    double p(int i) const { return p_[i]; }
    double w(int i) const { return w_[i]; }
    cplx winv(int i) const { return winv_[i]; }
    cplx varpi_at(int i) const { return varpi_[i]; }
    bool is_prop(int i) const { return i < n_prop_; }

    const std::vector<double>& p_all() const { return p_; }
    const std::vector<double>& w_all() const { return w_; }
    const std::vector<cplx>& winv_all() const { return winv_; }
    const std::vector<cplx>& varpi_all() const { return varpi_; }

    // Interpolation row over the whole grid for an off-node momentum;
    // band-local (never interpolates across |p| = k). Zero outside
    // (-p_max, p_max). Returns entries added into `row` (size() long).
    void interp_row(double p, std::vector<double>& row) const;
    cplx interp(double p, const cplx* values) const;

  private:
    double k_;
    double p_max_;
    int n_prop_;
    int n_evan_half_;
    std::vector<double> p_, w_;
    std::vector<cplx> winv_, varpi_;
    BarycentricInterp prop_interp_;   // in theta = asin(p/k)
    BarycentricInterp evan_interp_;   // in p on (k, p_max)
};

using GridPtr = std::shared_ptr<const MomentumGrid>;

GridPtr build_grid(Wavenumber k, int n_prop, int n_evan, double p_max);

// A Dirac term c * delta(p - p0) carried symbolically, never sampled.
struct DeltaTerm {
    double p0;
    cplx weight;
};

// Complex coefficient vector over a MomentumGrid plus symbolic delta terms.
struct SpectralField {
    GridPtr grid;
    VectorXcd coeffs;
    std::vector<DeltaTerm> deltas;

    explicit SpectralField(GridPtr g)
        : grid(std::move(g)), coeffs(VectorXcd::Zero(grid->size())) {}
    SpectralField() = default;
};

SpectralField zero_field(const GridPtr& g);

// Projection onto the propagating band: zeroes evanescent coefficients,
// drops delta terms with |p0| >= k.
SpectralField project_pk(const SpectralField& f);

// Discrete inner product sum_i w_i conj(f_i) g_i.
cplx inner(const SpectralField& f, const SpectralField& g);

struct TwoComponentField {
    SpectralField minus;
    SpectralField plus;
};

void require_same_grid(const GridPtr& a, const GridPtr& b);

// Fourier transform of uniformly sampled f(y), convention
// forward: ftilde(p) = integral dy e^{-ipy} f(y), inverse carries 1/(2pi).
// Sample count must be a power of two. Returns values on the DFT momentum
// set p_m = 2 pi m / (n dy), m = -n/2..n/2-1 (stored in wrapped DFT order).
struct FourierData {
    std::vector<cplx> values;
    std::vector<double> freqs;
};
FourierData fourier_y_to_p(const std::vector<cplx>& samples, double y0, double dy);
std::vector<cplx> fourier_p_to_y(const FourierData& data, double y0, double dy);

}  // namespace scatter
