#include "scatter/invisibility.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kLeakageTol = 1e-12;
// Half-width (in units of 1/sigma) at which the Gaussian window spectrum
// drops to the leakage tolerance: exp(-d^2/2) = 1e-12.
const double kSpectralReach = std::sqrt(-2.0 * std::log(kLeakageTol));
}

AxialProfile cosine_axial(cplx amplitude, double lo, double hi) {
    AxialProfile ap;
    ap.g = make_cosine_window(amplitude, lo, hi);
    ap.a_minus = lo;
    ap.a_plus = hi;
    ap.peak = std::abs(amplitude);
    return ap;
}

double packet_leakage(double sigma_y, double carrier, double beta) {
    if (!(sigma_y > 0.0))
        throw EngineError(ErrorCode::validation, "window width must be positive");
    // The spectrum is a monotone Gaussian tail below the carrier, so the
    // worst point at or below beta is beta itself (or the peak if the
    // carrier sits below the claimed bound).
    if (carrier <= beta) return 1.0;
    double u = sigma_y * (carrier - beta);
    return std::exp(-0.5 * u * u);
}

namespace {

InvisibilityDesign build_design(double alpha, double beta, const AxialProfile& g,
                                EnvelopeShape shape, double sigma_y, double carrier_offset) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw EngineError(ErrorCode::validation, "alpha and beta must be positive");
    if (!(g.a_minus < g.a_plus))
        throw EngineError(ErrorCode::validation, "axial profile needs a nonempty support");

    InvisibilityDesign d;
    d.alpha = alpha;
    d.beta = beta;
    d.v_peak = g.peak;

    PotentialModel pot;
    pot.a_minus = g.a_minus;
    pot.a_plus = g.a_plus;
    pot.spectral_lower_bound = beta;

    if (shape == EnvelopeShape::harmonic) {
        // h(y) = e^{i beta y}: the spectrum is a single line at beta.
        d.beta_prime = beta;
        pot.kind = HarmonicY{g.g, beta};
    } else {
        // h(y) = e^{i beta' y} w(y), Gaussian window of width sigma_y.
        // hhat(K) = sqrt(2 pi) sigma exp(-sigma^2 (K - beta')^2 / 2);
        // by default the carrier sits comfortably above the certified
        // bound (1.25x the reach at which the tail hits tolerance).
        if (!(sigma_y > 0.0))
            throw EngineError(ErrorCode::validation, "window width must be positive");
        if (carrier_offset == 0.0) carrier_offset = 1.25 * kSpectralReach / sigma_y;
        double carrier = beta + carrier_offset;
        if (packet_leakage(sigma_y, carrier, beta) > kLeakageTol)
            throw EngineError(ErrorCode::validation,
                              "envelope spectral leakage below the certified bound exceeds "
                              "tolerance; widen the window or raise the carrier");
        double hpeak = std::sqrt(2.0 * kPi) * sigma_y;
        d.beta_prime = carrier;
        double s = sigma_y;
        Profile hp = [s, carrier, hpeak](double K) -> cplx {
            double u = s * (K - carrier);
            return hpeak * std::exp(-0.5 * u * u);
        };
        pot.kind = SeparableY{g.g, hp};
        // The window peaks at |h| = 1, so the axial peak carries ||v||_inf.
    }
    d.pot = std::move(pot);
    return d;
}

}  // namespace

InvisibilityDesign make_invisible(double alpha, double margin, const AxialProfile& g,
                                  EnvelopeShape shape, double sigma_y, double carrier_offset) {
    if (!(margin > 0.0))
        throw EngineError(ErrorCode::validation,
                          "margin must be strictly positive: the boundary case K = 2 alpha "
                          "is not strictly inside the hypothesis");
    double beta = 2.0 * alpha * (1.0 + margin);
    return build_design(alpha, beta, g, shape, sigma_y, carrier_offset);
}

InvisibilityDesign make_gap_design(double alpha, double beta, const AxialProfile& g,
                                   EnvelopeShape shape, double sigma_y, double carrier_offset) {
    return build_design(alpha, beta, g, shape, sigma_y, carrier_offset);
}

int dyson_truncation_order(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw EngineError(ErrorCode::validation, "alpha and beta must be positive");
    if (beta >= 2.0 * alpha) return 0;
    double x = 2.0 * alpha / beta - 1.0;
    return static_cast<int>(std::ceil(x - 1e-12));
}

TransferOperator truncated_M(const InvisibilityDesign& design, const GridPtr& grid, double dx) {
    int n_max = dyson_truncation_order(design.alpha, design.beta);
    if (n_max == 0)
        return TransferOperator::identity(grid, OperatorScope::fundamental_prop);
    EffectiveHamiltonianSpec spec{design.pot, grid};
    TransferOperator aux = evolve_aux(spec, design.pot.a_minus, design.pot.a_plus,
                                      EvolveScheme::dyson(n_max, dx));
    return fundamental_from_aux(aux);
}

namespace {

std::vector<double> incidence_angles(int n) {
    // n values strictly inside (-80 deg, 80 deg), symmetric, includes 0
    // for odd n.
    std::vector<double> out(n);
    double span = 160.0 * kPi / 180.0;
    for (int i = 0; i < n; ++i) out[i] = -span / 2.0 + span * (i + 0.5) / n;
    return out;
}

double max_abs_f(const ScatteringResult& res) {
    double m = 0.0;
    for (const auto& s : res.f_samples) m = std::max(m, std::abs(s.f));
    return m;
}

}  // namespace

CertifyReport certify_invisibility(const InvisibilityDesign& design, double k,
                                   const CertifyOptions& opts) {
    GridPtr grid = build_grid(Wavenumber(k), opts.n_prop, opts.n_evan, opts.p_max_factor * k);
    EffectiveHamiltonianSpec spec{design.pot, grid};
    EvolveScheme scheme = EvolveScheme::rk4(opts.dx);
    TransferOperator aux = evolve_aux(spec, design.pot.a_minus, design.pot.a_plus, scheme);
    TransferOperator M = fundamental_from_aux(aux);

    CertifyReport rep;
    rep.k = k;
    rep.tol = opts.tol_factor * design.scale();
    rep.m_deviation = deviation_from_identity(M);

    if (opts.with_amplitudes) {
        for (double th0 : incidence_angles(opts.n_incidence)) {
            IncidenceSpec inc = IncidenceSpec::from_angle(IncidenceSpec::Side::left, k, th0);
            ScatteringResult res = solve_scattering_with_M(spec, aux, inc, scheme);
            rep.f_max = std::max(rep.f_max, max_abs_f(res));
        }
    }
    rep.pass = rep.m_deviation <= rep.tol && rep.f_max <= rep.tol;
    return rep;
}

namespace {

// Delta column truncated to first order: col = delta_seed + (-i) int dx H(x)
// applied to the frozen seed, composite-Simpson in x.
DeltaColumn born_delta_column(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                              double dx) {
    const GridPtr& grid = spec.grid;
    const double k = grid->k();
    if (!(std::abs(inc.p0) < k))
        throw EngineError(ErrorCode::validation, "incidence requires |p0| < k");
    const int n = grid->size();

    TwoComponentField seed{SpectralField(grid), SpectralField(grid)};
    if (inc.side == IncidenceSpec::Side::left)
        seed.minus.deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    else
        seed.plus.deltas.push_back({inc.p0, cplx{1.0, 0.0}});

    double x0 = spec.pot.a_minus, x1 = spec.pot.a_plus;
    double width = x1 - x0;
    if (dx <= 0.0) dx = width / 256.0;
    int half = std::max(1, static_cast<int>(std::ceil(width / dx / 2.0)));
    int N = 2 * half;  // Simpson panels
    double h = width / N;

    VectorXcd acc_minus = VectorXcd::Zero(n), acc_plus = VectorXcd::Zero(n);
    std::map<double, cplx> dmap_minus, dmap_plus;
    for (int s = 0; s <= N; ++s) {
        double x = x0 + s * h;
        double wgt = (s == 0 || s == N) ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0);
        wgt *= h / 3.0;
        TwoComponentField img = apply_H(spec, x, seed);
        acc_minus += wgt * img.minus.coeffs;
        acc_plus += wgt * img.plus.coeffs;
        for (const auto& d : img.minus.deltas) dmap_minus[d.p0] += wgt * d.weight;
        for (const auto& d : img.plus.deltas) dmap_plus[d.p0] += wgt * d.weight;
    }

    DeltaColumn col;
    const int np = grid->n_prop();
    col.minus_smooth = (-kI) * acc_minus.head(np);
    col.plus_smooth = (-kI) * acc_plus.head(np);
    if (inc.side == IncidenceSpec::Side::left)
        col.minus_deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    else
        col.plus_deltas.push_back({inc.p0, cplx{1.0, 0.0}});
    for (const auto& [p0, w] : dmap_minus)
        if (std::abs(p0) < k) col.minus_deltas.push_back({p0, -kI * w});
    for (const auto& [p0, w] : dmap_plus)
        if (std::abs(p0) < k) col.plus_deltas.push_back({p0, -kI * w});
    return col;
}

}  // namespace

ScatteringResult born_amplitude(const EffectiveHamiltonianSpec& spec, const IncidenceSpec& inc,
                                double dx, const SolverOptions& sopts) {
    TransferOperator aux = evolve_aux(spec, spec.pot.a_minus, spec.pot.a_plus,
                                      EvolveScheme::dyson(1, dx));
    TransferOperator M = fundamental_from_aux(aux);
    DeltaColumn col = born_delta_column(spec, inc, dx);
    ScatteringResult res = solve_boundary(M, col, inc, sopts);
    assemble_amplitude(res, sopts);
    return res;
}

BornCheckReport born_vs_full(const PotentialModel& pot, double k, const CertifyOptions& opts) {
    GridPtr grid = build_grid(Wavenumber(k), opts.n_prop, opts.n_evan, opts.p_max_factor * k);
    EffectiveHamiltonianSpec spec{pot, grid};
    EvolveScheme full_scheme = EvolveScheme::rk4(opts.dx);

    TransferOperator aux_full = evolve_aux(spec, pot.a_minus, pot.a_plus, full_scheme);
    TransferOperator aux_born = evolve_aux(spec, pot.a_minus, pot.a_plus,
                                           EvolveScheme::dyson(1, opts.dx));
    TransferOperator M_born = fundamental_from_aux(aux_born);

    BornCheckReport rep;
    rep.k = k;
    for (double th0 : incidence_angles(opts.n_incidence)) {
        IncidenceSpec inc = IncidenceSpec::from_angle(IncidenceSpec::Side::left, k, th0);
        ScatteringResult full = solve_scattering_with_M(spec, aux_full, inc, full_scheme);
        DeltaColumn bcol = born_delta_column(spec, inc, opts.dx);
        ScatteringResult born = solve_boundary(M_born, bcol, inc);
        assemble_amplitude(born);
        if (full.f_samples.size() != born.f_samples.size())
            throw EngineError(ErrorCode::validation, "amplitude sample sets diverged");
        for (size_t i = 0; i < full.f_samples.size(); ++i) {
            rep.f_scale = std::max(rep.f_scale, std::abs(full.f_samples[i].f));
            rep.max_abs_dev = std::max(
                rep.max_abs_dev, std::abs(full.f_samples[i].f - born.f_samples[i].f));
        }
    }
    rep.rel_dev = rep.f_scale > 0.0 ? rep.max_abs_dev / rep.f_scale : 0.0;
    return rep;
}

BornCheckReport born_exactness_check(const InvisibilityDesign& design, double k,
                                     const CertifyOptions& opts) {
    return born_vs_full(design.pot, k, opts);
}

}  // namespace scatter
