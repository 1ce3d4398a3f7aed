#include "scatter/solver.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

DeltaColumn delta_column(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                         const EvolveScheme& scheme, const EvolveOptions& opts) {
    const GridPtr& grid = spec.grid;
    const double k = grid->k();
    if (!(std::abs(inc.p0) < k))
        throw EngineError(ErrorCode::validation, "incidence requires |p0| < k");

    TwoComponentField phi{SpectralField(grid), SpectralField(grid)};
    if (inc.side == IncidenceSpec::Side::left)
        phi.minus.deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    else
        phi.plus.deltas.push_back({inc.p0, cplx{1.0, 0.0}});

    TwoComponentField out =
        evolve_field(spec, spec.pot.a_minus, spec.pot.a_plus, phi, scheme, opts);

    DeltaColumn col;
    col.minus_smooth = out.minus.coeffs;
    col.plus_smooth = out.plus.coeffs;
    for (const auto& d : out.minus.deltas)
        if (std::abs(d.p0) < k) col.minus_deltas.push_back(d);
    for (const auto& d : out.plus.deltas)
        if (std::abs(d.p0) < k) col.plus_deltas.push_back(d);
    return col;
}

namespace {

// Splits the surviving delta terms of a column into the incident seed
// (p ~ p0) and any extra propagating diffraction orders.
void split_seed(const std::vector<DeltaTerm>& deltas, double p0, cplx& seed_weight,
                std::vector<DeltaTerm>& extra) {
    seed_weight = {0.0, 0.0};
    for (const auto& d : deltas) {
        if (std::abs(d.p0 - p0) < 1e-9)
            seed_weight += d.weight;
        else
            extra.push_back(d);
    }
}

Eigen::PartialPivLU<Eigen::MatrixXcd> checked_lu(const Eigen::MatrixXcd& m22, double limit) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m22);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > limit)
        throw EngineError(ErrorCode::spectral_singularity,
                          "M22 block numerically singular (condition estimate exceeds limit); "
                          "spectral singularity / lasing threshold");
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(m22);
}

SpectralField block_field(const GridPtr& grid, const VectorXcd& values) {
    SpectralField f(grid);
    f.coeffs.head(values.size()) = values;
    return f;
}

}  // namespace

ScatteringResult solve_boundary(const TransferOperator& M, const DeltaColumn& col,
                                const IncidenceSpec& inc, const SolverOptions& opts) {
    // The boundary equations close exactly only on the full grid: the
    // left-side near field has evanescent B- components that feed back into
    // the propagating output beyond first order. A propagating-block
    // operator is accepted for cases where that feedback is absent by
    // construction (point interactions, first-Born columns).
    const GridPtr& grid = M.grid;
    const Eigen::Index nb = M.m22.rows();
    if (col.minus_smooth.size() != nb || col.plus_smooth.size() != nb)
        throw EngineError(ErrorCode::validation,
                          "delta column block size does not match the transfer operator");
    const double k = grid->k();
    const double w = kTwoPi * varpi(inc.p0, k).real();

    ScatteringResult res;
    res.incidence = inc;
    res.grid = grid;

    cplx seed_minus, seed_plus;
    std::vector<DeltaTerm> extra_minus, extra_plus;
    split_seed(col.minus_deltas, inc.p0, seed_minus, extra_minus);
    split_seed(col.plus_deltas, inc.p0, seed_plus, extra_plus);
    if (!extra_minus.empty() || !extra_plus.empty())
        throw EngineError(ErrorCode::validation,
                          "propagating diffraction orders in the boundary solve are unsupported");

    auto lu = checked_lu(M.m22, opts.singularity_condition_limit);

    if (inc.side == IncidenceSpec::Side::left) {
        // M22 B- = -w M21 delta; A+ = M12 B- + w M11 delta.
        VectorXcd rhs = -w * col.plus_smooth;
        VectorXcd b_minus = lu.solve(rhs);
        res.B_minus_smooth = block_field(grid, b_minus);
        VectorXcd a_plus = M.m12 * b_minus + w * col.minus_smooth;
        res.A_plus_smooth = block_field(grid, a_plus);
        res.forward_delta_weight = w * seed_minus;
        res.A_plus_deltas.push_back({inc.p0, res.forward_delta_weight});
    } else {
        // B- = w delta + s with M22 s = -w (M22 delta)_smooth; A+ = M12 B-.
        VectorXcd rhs = -w * col.plus_smooth;
        VectorXcd s = lu.solve(rhs);
        res.B_minus_smooth = block_field(grid, s);
        res.forward_delta_weight = w * seed_plus;
        res.B_minus_deltas.push_back({inc.p0, res.forward_delta_weight});
        VectorXcd a_plus = M.m12 * s + w * col.minus_smooth;
        res.A_plus_smooth = block_field(grid, a_plus);
    }
    return res;
}

void assemble_amplitude(ScatteringResult& result, const SolverOptions& opts) {
    const GridPtr& grid = result.grid;
    const double k = grid->k();
    result.f_samples.clear();
    const int n = opts.n_angles;
    const cplx pref = -kI / std::sqrt(kTwoPi);
    for (int i = 0; i < n; ++i) {
        double theta = -kPi + (i + 1) * (2.0 * kPi / n);
        double c = std::cos(theta);
        if (c == 0.0) continue;  // grazing: branch split degenerates, reported as a gap
        double p = k * std::sin(theta);
        const SpectralField& branch = c > 0.0 ? result.A_plus_smooth : result.B_minus_smooth;
        cplx f = pref * grid->interp(p, branch.coeffs.data());
        result.f_samples.push_back({theta, f});
    }
    result.forward_sample_flagged = true;
}

ScatteringResult solve_scattering_with_M(const EffectiveHamiltonianSpec& spec,
                                         const TransferOperator& M_aux,
                                         const IncidenceSpec& inc, const EvolveScheme& scheme,
                                         const EvolveOptions& eopts, const SolverOptions& sopts) {
    if (M_aux.scope != OperatorScope::auxiliary_full)
        throw EngineError(ErrorCode::validation,
                          "solve_scattering_with_M expects the full auxiliary operator");
    DeltaColumn col = delta_column(spec, inc, scheme, eopts);
    ScatteringResult res = solve_boundary(M_aux, col, inc, sopts);
    assemble_amplitude(res, sopts);
    return res;
}

ScatteringResult solve_scattering(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                                  const EvolveScheme& scheme, const EvolveOptions& eopts,
                                  const SolverOptions& sopts) {
    TransferOperator aux = evolve_aux(spec, spec.pot.a_minus, spec.pot.a_plus, scheme, eopts);
    return solve_scattering_with_M(spec, aux, inc, scheme, eopts, sopts);
}

RT1D rt_1d(const Eigen::Matrix2cd& M) {
    double scale = M.cwiseAbs().maxCoeff();
    if (std::abs(M(1, 1)) < 1e-12 * scale)
        throw EngineError(ErrorCode::spectral_singularity, "1D spectral singularity: |M22| ~ 0");
    RT1D rt;
    rt.Rl = -M(1, 0) / M(1, 1);
    rt.Rr = M(0, 1) / M(1, 1);
    rt.Tl = 1.0 / M(1, 1);
    rt.Tr = rt.Tl;
    return rt;
}

}  // namespace scatter
