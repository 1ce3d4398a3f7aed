#pragma once

// Boundary-coefficient solves for left/right incidence, scattering
// amplitude assembly, and 1D reflection/transmission extraction.

#include "scatter/transfer.hpp"

namespace scatter {

struct IncidenceSpec {
    enum class Side { left, right };
    Side side = Side::left;
    double p0 = 0.0;  // transverse momentum, |p0| < k strictly

    static IncidenceSpec from_angle(Side side, double k, double theta0) {
        return {side, k * std::sin(theta0)};
    }
};

// Result of the transfer operator acting on a unit Dirac source placed in
// one component: smooth block vectors plus surviving (propagating) delta
// terms. The block length matches the operator the column is solved
// against: full grid for the engine path, propagating block for point
// interactions and first-Born columns.
struct DeltaColumn {
    VectorXcd minus_smooth;
    VectorXcd plus_smooth;
    std::vector<DeltaTerm> minus_deltas;
    std::vector<DeltaTerm> plus_deltas;
};

// Engine path: build the column by evolving the symbolic delta through
// the auxiliary evolution and projecting.
DeltaColumn delta_column(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                         const EvolveScheme& scheme, const EvolveOptions& opts = {});

struct AmplitudeSample {
    double theta;  // detector angle in (-pi, pi], 0 = forward (+x)
    cplx f;
};

struct ScatteringResult {
    IncidenceSpec incidence;
    GridPtr grid;
    SpectralField B_minus_smooth;  // full-grid when solved on the auxiliary operator:
    SpectralField A_plus_smooth;   // evanescent entries are near-field coefficients
    std::vector<DeltaTerm> B_minus_deltas;
    std::vector<DeltaTerm> A_plus_deltas;
    cplx forward_delta_weight{0.0, 0.0};
    std::vector<AmplitudeSample> f_samples;
    bool forward_sample_flagged = false;  // smooth f sampled at theta0 (see docs)
};

struct SolverOptions {
    double singularity_condition_limit = 1e12;
    int n_angles = 721;
};

// Solve the linear boundary equations given a transfer operator and the
// delta column of the incidence; fills the boundary fields only. The exact
// engine path passes the full auxiliary operator: the left-side evanescent
// near field is part of the unknown B- and feeds back into the propagating
// output beyond first order. Propagating-block operators are accepted for
// cases where that feedback is absent by construction.
ScatteringResult solve_boundary(const TransferOperator& M, const DeltaColumn& col,
                                const IncidenceSpec& inc, const SolverOptions& opts = {});

// Sample f(theta) from the solved boundary fields (smooth parts only;
// the incident forward delta never enters the samples).
void assemble_amplitude(ScatteringResult& result, const SolverOptions& opts = {});

// Convenience: full engine chain for a non-delta potential.
ScatteringResult solve_scattering(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                                  const EvolveScheme& scheme, const EvolveOptions& eopts = {},
                                  const SolverOptions& sopts = {});

// As above but reusing a precomputed full auxiliary operator.
ScatteringResult solve_scattering_with_M(const EffectiveHamiltonianSpec& spec,
                                         const TransferOperator& M_aux,
                                         const IncidenceSpec& inc, const EvolveScheme& scheme,
                                         const EvolveOptions& eopts = {},
                                         const SolverOptions& sopts = {});

// 1D amplitudes from a 2x2 transfer matrix: Rl = -M21/M22, Rr = M12/M22,
// T = 1/M22.
struct RT1D {
    cplx Rl, Rr, Tl, Tr;
};
RT1D rt_1d(const Eigen::Matrix2cd& M);

}  // namespace scatter
