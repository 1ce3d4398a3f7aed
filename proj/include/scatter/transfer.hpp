#pragma once

// Effective-Hamiltonian evolution of the auxiliary transfer matrix, its
// projection to the fundamental transfer matrix, slab composition, and
// the 1D specialization.

#include <Eigen/Dense>

#include "scatter/potential.hpp"
#include "scatter/spectral.hpp"

namespace scatter {

struct EffectiveHamiltonianSpec {
    PotentialModel pot;
    GridPtr grid;
};

enum class OperatorScope { auxiliary_full, fundamental_prop };

// 2x2 block matrix of dense complex operators on a MomentumGrid.
struct TransferOperator {
    GridPtr grid;
    OperatorScope scope = OperatorScope::auxiliary_full;
    Eigen::MatrixXcd m11, m12, m21, m22;

    int block_size() const { return static_cast<int>(m11.rows()); }
    static TransferOperator identity(GridPtr grid, OperatorScope scope);
};

// max-norm distance between two operators (blockwise).
double operator_distance(const TransferOperator& a, const TransferOperator& b);
double deviation_from_identity(const TransferOperator& m);

struct EvolveScheme {
    enum class Kind { rk4, dyson } kind = Kind::rk4;
    double dx = 0.0;     // 0: auto = width/256
    int n_max = 1;       // dyson truncation order
    static EvolveScheme rk4(double dx = 0.0) { return {Kind::rk4, dx, 0}; }
    static EvolveScheme dyson(int n_max, double dx = 0.0) { return {Kind::dyson, dx, n_max}; }
};

struct EvolveOptions {
    double conditioning_limit = 1e12;  // refuse when exp(p_max * reach) exceeds it
    bool enforce_conditioning = true;
};

// Action of the effective Hamiltonian on a two-component field (one x).
TwoComponentField apply_H(const EffectiveHamiltonianSpec& spec, double x,
                          const TwoComponentField& phi);

// Auxiliary transfer matrix as the x-ordered exponential over [x0, x1].
TransferOperator evolve_aux(const EffectiveHamiltonianSpec& spec, double x0, double x1,
                            const EvolveScheme& scheme, const EvolveOptions& opts = {});

// Evolve a single two-component field (smooth part plus symbolic delta
// terms; delta ladders stay symbolic throughout).
TwoComponentField evolve_field(const EffectiveHamiltonianSpec& spec, double x0, double x1,
                               const TwoComponentField& phi0, const EvolveScheme& scheme,
                               const EvolveOptions& opts = {});

// M = Pi_k * Maux * Pi_k: restriction of every block to propagating nodes.
TransferOperator fundamental_from_aux(const TransferOperator& aux);

// Ordered slab product m2 * m1 (m1 acts first). Full-grid scope only;
// fundamental composition is deliberately rejected.
TransferOperator compose(const TransferOperator& m2, const TransferOperator& m1);

// Evolution in the alternative gauge whose generator carries the
// -i*varpi_i*sigma3 drift; usable only on narrow slabs (secular growth),
// kept as an equivalence check against the main path.
TransferOperator evolve_aux_drift_gauge(const EffectiveHamiltonianSpec& spec, double x0,
                                        double x1, double dx);

// ---- 1D specialization -------------------------------------------------

// Transfer matrix of a smooth 1D potential sampled by callback, RK4.
Eigen::Matrix2cd tm1d_evolve(const std::function<cplx(double)>& v, double a0, double a1,
                             double k, double dx);

// Exact single-delta transfer matrix M = I - (i z / 2k) e^{-ika s3} K e^{ika s3}.
Eigen::Matrix2cd tm1d_delta(cplx z, double k, double a);

}  // namespace scatter
