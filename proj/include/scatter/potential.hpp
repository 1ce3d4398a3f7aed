#pragma once

// Potential representations v(x,y) and the mode-coupling operator V(x)
// acting on spectral fields through its transverse Fourier transform
// vtilde(x, K).

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "scatter/spectral.hpp"

namespace scatter {

using Profile = std::function<cplx(double)>;

// Closed-form profile catalog used by config files.
Profile make_gaussian(cplx amplitude, double center, double sigma);
Profile make_box(cplx amplitude, double lo, double hi);
Profile make_cosine_window(cplx amplitude, double lo, double hi);
// exp-shifted: amplitude * e^{i beta t} (one-sided transverse spectrum).
Profile make_exp_shifted(cplx amplitude, double beta);

// v(x,y) = g(x) h(y) with hp(K) the transform of h: vtilde = g(x) hp(K).
struct SeparableY {
    Profile g;
    Profile hp;
};

// v(x,y) = g(x) e^{i beta' y}: vtilde(x,K) = 2 pi g(x) delta(K - beta').
// Acts on spectral fields as the exact shift (Vf)(p) = g(x) f(p - beta').
struct HarmonicY {
    Profile g;
    double beta_prime;
};

// Tabulated vtilde(x_j, K_m), bilinear interpolation.
struct GridSampled {
    std::vector<double> xs;   // ascending
    std::vector<double> Ks;   // ascending
    RowMatrixXcd vals;    // rows: x, cols: K
    bool zero_fill_outside = true;
};

// v = z delta(x-a) delta(y-b). Never flows through the generic quadrature
// path; handled by the closed-form delta engine.
struct Delta2D {
    cplx z;
    double a;
    double b;
};

struct PotentialModel {
    std::variant<SeparableY, HarmonicY, GridSampled, Delta2D> kind;
    double a_minus = 0.0;
    double a_plus = 0.0;
    // Lower bound beta of the transverse spectral support when the
    // potential is a one-sided (invisibility) design; 0 means none.
    double spectral_lower_bound = 0.0;

    bool is_delta() const { return std::holds_alternative<Delta2D>(kind); }
    bool in_support(double x) const { return x >= a_minus && x <= a_plus; }
};

PotentialModel zero_potential();

// vtilde(x, K). For Delta2D returns the y-factor z e^{-iKb}; the axial
// delta(x-a) marker is pot.is_delta() and is consumed only by the
// delta-specialized engine path.
cplx vtilde(const PotentialModel& pot, double x, double K);

// Weighting of the quadrature inside the kernel matrix: `plain` uses the
// dp weights (the apply_V contract); `inverse_varpi` absorbs the 1/varpi
// of the effective Hamiltonian into the weight analytically.
enum class VWeighting { plain, inverse_varpi };

struct DeltaImage {
    VectorXcd smooth;              // sampled contribution on the grid
    std::vector<DeltaTerm> deltas; // shifted symbolic terms (HarmonicY)
};

// Precomputed action of V(x) on a fixed grid.
class VApplier {
  public:
    VApplier(const PotentialModel& pot, GridPtr grid, VWeighting weighting);

    const GridPtr& grid() const { return grid_; }

    // out = (V(x) f), f = plain function values on grid nodes. With
    // inverse_varpi weighting the operand is interpreted as f/varpi with
    // the division folded into the quadrature weight (HarmonicY, which has
    // no quadrature, divides pointwise; the grid guards |varpi| away from 0).
    void apply(double x, const cplx* f, cplx* out) const;

    // out = V(x) * W column-wise (dense gemm path for operator assembly).
    void apply_matrix(double x, const Eigen::MatrixXcd& W, Eigen::MatrixXcd& out) const;

    // Action on a symbolic Dirac term of weight 1 at p0 (with the same
    // weighting convention: operand is delta/varpi(p0) for inverse_varpi).
    DeltaImage apply_delta(double x, double p0) const;

    // Dense matrix of the x-independent part when the potential factorizes
    // as g(x) * Kmat (SeparableY and HarmonicY); empty for GridSampled.
    const RowMatrixXcd& kernel_matrix() const { return kmat_; }
    cplx g_at(double x) const;

  private:
    PotentialModel pot_;
    GridPtr grid_;
    VWeighting weighting_;
    RowMatrixXcd kmat_;                  // separable kernel (weights folded)
    std::vector<RowMatrixXcd> slices_;   // GridSampled: one kernel per x node
    mutable std::vector<cplx> scratch_;
};

// apply_V over SpectralField: quadrature convolution plus delta-term
// contributions; output generally has evanescent components.
SpectralField apply_V(const PotentialModel& pot, double x, const SpectralField& f);

}  // namespace scatter
