#include "scatter/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace scatter {

using Eigen::MatrixXcd;
using Eigen::Matrix2cd;

namespace {

constexpr cplx kI{0.0, 1.0};

// Assembles -i*H(x) applications for the auxiliary evolution. The block
// structure H = 1/2 [D-; -D+] V(x) [D+, D-] is exploited: one V gemm per
// application, diagonal phase factors elsewhere. The 1/varpi sits inside
// the quadrature weight of the V kernel (inverse_varpi weighting).
class HamAction {
  public:
    HamAction(const EffectiveHamiltonianSpec& spec)
        : applier_(spec.pot, spec.grid, VWeighting::inverse_varpi),
          pot_(spec.pot),
          grid_(spec.grid),
          n_(spec.grid->size()) {}

    const GridPtr& grid() const { return grid_; }
    int n() const { return n_; }
    const VApplier& applier() const { return applier_; }

    void phases(double x, std::vector<cplx>& plus, std::vector<cplx>& minus) const {
        plus.resize(n_);
        minus.resize(n_);
        for (int i = 0; i < n_; ++i) {
            cplx e = std::exp(kI * x * grid_->varpi_at(i));
            plus[i] = e;
            minus[i] = 1.0 / e;
        }
    }

    // out = -i H(x) U, U is (2n x m).
    void deriv(double x, const MatrixXcd& U, MatrixXcd& out) const {
        out.setZero(U.rows(), U.cols());
        if (!pot_.in_support(x)) return;
        std::vector<cplx> ep, em;
        phases(x, ep, em);
        MatrixXcd W(n_, U.cols());
        for (int i = 0; i < n_; ++i)
            W.row(i) = ep[i] * U.row(i) + em[i] * U.row(n_ + i);
        MatrixXcd AW;
        applier_.apply_matrix(x, W, AW);
        for (int i = 0; i < n_; ++i) {
            out.row(i) = (-kI * 0.5) * em[i] * AW.row(i);
            out.row(n_ + i) = (kI * 0.5) * ep[i] * AW.row(i);
        }
    }

  private:
    VApplier applier_;
    PotentialModel pot_;
    GridPtr grid_;
    int n_;
};

int step_count(double x0, double x1, double dx) {
    double width = x1 - x0;
    if (dx <= 0.0) dx = width / 256.0;
    return std::max(1, static_cast<int>(std::ceil(width / dx)));
}

void check_conditioning(const EffectiveHamiltonianSpec& spec, double x0, double x1,
                        const EvolveOptions& opts) {
    if (!opts.enforce_conditioning) return;
    double reach = std::max(std::abs(x0), std::abs(x1));
    double growth = spec.grid->p_max() * reach;
    if (growth > std::log(opts.conditioning_limit))
        throw EngineError(ErrorCode::conditioning,
                          "evanescent-channel growth estimate exp(" + std::to_string(growth) +
                              ") exceeds the conditioning limit; reduce p_max or slab reach");
}

// One RK4 step of U' = f(x, U) for linear f given by HamAction::deriv.
void rk4_step(const HamAction& ham, double x, double h, MatrixXcd& U, MatrixXcd& k1,
              MatrixXcd& k2, MatrixXcd& k3, MatrixXcd& k4, MatrixXcd& tmp) {
    ham.deriv(x, U, k1);
    tmp = U + (0.5 * h) * k1;
    ham.deriv(x + 0.5 * h, tmp, k2);
    tmp = U + (0.5 * h) * k2;
    ham.deriv(x + 0.5 * h, tmp, k3);
    tmp = U + h * k3;
    ham.deriv(x + h, tmp, k4);
    U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TransferOperator blocks_from_matrix(const GridPtr& grid, const MatrixXcd& U) {
    const int n = grid->size();
    TransferOperator op;
    op.grid = grid;
    op.scope = OperatorScope::auxiliary_full;
    op.m11 = U.topLeftCorner(n, n);
    op.m12 = U.topRightCorner(n, n);
    op.m21 = U.bottomLeftCorner(n, n);
    op.m22 = U.bottomRightCorner(n, n);
    return op;
}

}  // namespace

TransferOperator TransferOperator::identity(GridPtr grid, OperatorScope scope) {
    const int n = scope == OperatorScope::auxiliary_full ? grid->size() : grid->n_prop();
    TransferOperator op;
    op.grid = std::move(grid);
    op.scope = scope;
    op.m11 = MatrixXcd::Identity(n, n);
    op.m22 = MatrixXcd::Identity(n, n);
    op.m12 = MatrixXcd::Zero(n, n);
    op.m21 = MatrixXcd::Zero(n, n);
    return op;
}

double operator_distance(const TransferOperator& a, const TransferOperator& b) {
    double d = 0.0;
    d = std::max(d, (a.m11 - b.m11).cwiseAbs().maxCoeff());
    d = std::max(d, (a.m12 - b.m12).cwiseAbs().maxCoeff());
    d = std::max(d, (a.m21 - b.m21).cwiseAbs().maxCoeff());
    d = std::max(d, (a.m22 - b.m22).cwiseAbs().maxCoeff());
    return d;
}

double deviation_from_identity(const TransferOperator& m) {
    return operator_distance(m, TransferOperator::identity(m.grid, m.scope));
}

TwoComponentField apply_H(const EffectiveHamiltonianSpec& spec, double x,
                          const TwoComponentField& phi) {
    require_same_grid(spec.grid, phi.minus.grid);
    require_same_grid(spec.grid, phi.plus.grid);
    HamAction ham(spec);
    const int n = ham.n();
    TwoComponentField out{SpectralField(spec.grid), SpectralField(spec.grid)};
    if (!spec.pot.in_support(x)) return out;

    std::vector<cplx> ep, em;
    ham.phases(x, ep, em);
    std::vector<cplx> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = ep[i] * phi.minus.coeffs[i] + em[i] * phi.plus.coeffs[i];
    std::vector<cplx> aw(n);
    ham.applier().apply(x, w.data(), aw.data());

    for (int i = 0; i < n; ++i) {
        out.minus.coeffs[i] = 0.5 * em[i] * aw[i];
        out.plus.coeffs[i] = -0.5 * ep[i] * aw[i];
    }

    // Delta terms: symbolic all the way through V.
    auto add_delta = [&](const DeltaTerm& d, bool minus_component) {
        double k = spec.grid->k();
        cplx phase = std::exp(kI * x * varpi(d.p0, k));
        cplx q = minus_component ? phase * d.weight : d.weight / phase;
        DeltaImage img = ham.applier().apply_delta(x, d.p0);
        for (int i = 0; i < n; ++i) {
            out.minus.coeffs[i] += 0.5 * em[i] * q * img.smooth[i];
            out.plus.coeffs[i] -= 0.5 * ep[i] * q * img.smooth[i];
        }
        for (const auto& dd : img.deltas) {
            cplx ph2 = std::exp(kI * x * varpi(dd.p0, k));
            out.minus.deltas.push_back({dd.p0, 0.5 * q * dd.weight / ph2});
            out.plus.deltas.push_back({dd.p0, -0.5 * q * dd.weight * ph2});
        }
    };
    for (const auto& d : phi.minus.deltas) add_delta(d, true);
    for (const auto& d : phi.plus.deltas) add_delta(d, false);
    return out;
}

TransferOperator evolve_aux(const EffectiveHamiltonianSpec& spec, double x0, double x1,
                            const EvolveScheme& scheme, const EvolveOptions& opts) {
    if (!(x0 < x1))
        throw EngineError(ErrorCode::validation, "evolve_aux requires x0 < x1");
    const GridPtr& grid = spec.grid;
    const int n = grid->size();

    // Zero slabs contribute the exact identity; clip to the support.
    double c0 = std::max(x0, spec.pot.a_minus);
    double c1 = std::min(x1, spec.pot.a_plus);
    if (!(c0 < c1))
        return TransferOperator::identity(grid, OperatorScope::auxiliary_full);
    check_conditioning(spec, c0, c1, opts);

    HamAction ham(spec);
    const int steps = step_count(c0, c1, scheme.dx);
    const double h = (c1 - c0) / steps;

    if (scheme.kind == EvolveScheme::Kind::rk4) {
        MatrixXcd U = MatrixXcd::Identity(2 * n, 2 * n);
        MatrixXcd k1, k2, k3, k4, tmp;
        for (int s = 0; s < steps; ++s)
            rk4_step(ham, c0 + s * h, h, U, k1, k2, k3, k4, tmp);
        return blocks_from_matrix(grid, U);
    }

    // Dyson partial sum via the Picard hierarchy U_l' = -i H U_{l-1},
    // U_0 = I, each level integrated with RK4 accuracy.
    const int nmax = std::max(1, scheme.n_max);
    std::vector<MatrixXcd> U(nmax, MatrixXcd::Zero(2 * n, 2 * n));
    std::vector<MatrixXcd> k1(nmax), k2(nmax), k3(nmax), k4(nmax);
    MatrixXcd stage, deriv_in;
    const MatrixXcd I2n = MatrixXcd::Identity(2 * n, 2 * n);
    auto level_deriv = [&](double x, const std::vector<MatrixXcd>& Y,
                           std::vector<MatrixXcd>& K) {
        for (int l = 0; l < nmax; ++l) {
            const MatrixXcd& lower = l == 0 ? I2n : Y[l - 1];
            ham.deriv(x, lower, K[l]);
        }
    };
    std::vector<MatrixXcd> Y(nmax);
    for (int s = 0; s < steps; ++s) {
        double x = c0 + s * h;
        level_deriv(x, U, k1);
        for (int l = 0; l < nmax; ++l) Y[l] = U[l] + (0.5 * h) * k1[l];
        level_deriv(x + 0.5 * h, Y, k2);
        for (int l = 0; l < nmax; ++l) Y[l] = U[l] + (0.5 * h) * k2[l];
        level_deriv(x + 0.5 * h, Y, k3);
        for (int l = 0; l < nmax; ++l) Y[l] = U[l] + h * k3[l];
        level_deriv(x + h, Y, k4);
        for (int l = 0; l < nmax; ++l)
            U[l] += (h / 6.0) * (k1[l] + 2.0 * k2[l] + 2.0 * k3[l] + k4[l]);
    }
    MatrixXcd total = I2n;
    for (int l = 0; l < nmax; ++l) total += U[l];
    return blocks_from_matrix(grid, total);
}

namespace {

// Ladder of symbolic Dirac rungs used while evolving delta sources. For
// smooth potentials the ladder is the seed alone (its weight is constant);
// a HarmonicY potential raises rung n to rung n+1.
struct DeltaLadder {
    std::vector<double> positions;             // ascending in p
    std::map<double, int> index;
    int find(double p) const {
        auto it = index.lower_bound(p - 1e-9);
        if (it != index.end() && std::abs(it->first - p) < 1e-9) return it->second;
        return -1;
    }
};

DeltaLadder build_ladder(const PotentialModel& pot, const GridPtr& grid,
                         const std::vector<double>& seeds) {
    DeltaLadder lad;
    const auto* har = std::get_if<HarmonicY>(&pot.kind);
    for (double s : seeds) {
        double p = s;
        int guard = 0;
        while (true) {
            if (lad.find(p) < 0) {
                lad.index[p] = -1;  // placeholder
            }
            if (!har) break;
            if (p > grid->p_max() + har->beta_prime || ++guard > 64) break;
            p += har->beta_prime;
        }
    }
    for (auto& [p, idx] : lad.index) {
        idx = static_cast<int>(lad.positions.size());
        lad.positions.push_back(p);
    }
    return lad;
}

}  // namespace

TwoComponentField evolve_field(const EffectiveHamiltonianSpec& spec, double x0, double x1,
                               const TwoComponentField& phi0, const EvolveScheme& scheme,
                               const EvolveOptions& opts) {
    if (!(x0 < x1))
        throw EngineError(ErrorCode::validation, "evolve_field requires x0 < x1");
    require_same_grid(spec.grid, phi0.minus.grid);
    const GridPtr& grid = spec.grid;
    const int n = grid->size();
    const double k = grid->k();

    double c0 = std::max(x0, spec.pot.a_minus);
    double c1 = std::min(x1, spec.pot.a_plus);
    if (!(c0 < c1)) return phi0;
    check_conditioning(spec, c0, c1, opts);

    std::vector<double> seeds;
    for (const auto& d : phi0.minus.deltas) seeds.push_back(d.p0);
    for (const auto& d : phi0.plus.deltas) seeds.push_back(d.p0);
    DeltaLadder lad = build_ladder(spec.pot, grid, seeds);
    const int L = static_cast<int>(lad.positions.size());

    // State layout: smooth minus (n), smooth plus (n), rung weights minus
    // (L), rung weights plus (L).
    VectorXcd state = VectorXcd::Zero(2 * n + 2 * L);
    state.head(n) = phi0.minus.coeffs;
    state.segment(n, n) = phi0.plus.coeffs;
    for (const auto& d : phi0.minus.deltas) state[2 * n + lad.find(d.p0)] += d.weight;
    for (const auto& d : phi0.plus.deltas) state[2 * n + L + lad.find(d.p0)] += d.weight;

    HamAction ham(spec);
    std::vector<cplx> ep, em, w(n), aw(n);

    auto deriv = [&](double x, const VectorXcd& y, VectorXcd& dy) {
        dy.setZero(y.size());
        if (!spec.pot.in_support(x)) return;
        ham.phases(x, ep, em);
        for (int i = 0; i < n; ++i) w[i] = ep[i] * y[i] + em[i] * y[n + i];
        ham.applier().apply(x, w.data(), aw.data());
        for (int i = 0; i < n; ++i) {
            dy[i] = -kI * 0.5 * em[i] * aw[i];
            dy[n + i] = kI * 0.5 * ep[i] * aw[i];
        }
        for (int l = 0; l < L; ++l) {
            cplx wm = y[2 * n + l], wp = y[2 * n + L + l];
            if (wm == cplx{0.0, 0.0} && wp == cplx{0.0, 0.0}) continue;
            double p0 = lad.positions[l];
            cplx phase = std::exp(kI * x * varpi(p0, k));
            cplx q = phase * wm + wp / phase;
            if (q == cplx{0.0, 0.0}) continue;
            DeltaImage img = ham.applier().apply_delta(x, p0);
            for (int i = 0; i < n; ++i) {
                dy[i] += -kI * 0.5 * em[i] * q * img.smooth[i];
                dy[n + i] += kI * 0.5 * ep[i] * q * img.smooth[i];
            }
            for (const auto& dd : img.deltas) {
                int tgt = lad.find(dd.p0);
                if (tgt < 0) continue;  // beyond the tracked band
                cplx ph2 = std::exp(kI * x * varpi(dd.p0, k));
                dy[2 * n + tgt] += -kI * 0.5 * q * dd.weight / ph2;
                dy[2 * n + L + tgt] += kI * 0.5 * q * dd.weight * ph2;
            }
        }
    };

    const int steps = step_count(c0, c1, scheme.dx);
    const double h = (c1 - c0) / steps;
    VectorXcd k1v(state.size()), k2v(state.size()), k3v(state.size()), k4v(state.size()),
        tmp(state.size());
    for (int s = 0; s < steps; ++s) {
        double x = c0 + s * h;
        deriv(x, state, k1v);
        tmp = state + (0.5 * h) * k1v;
        deriv(x + 0.5 * h, tmp, k2v);
        tmp = state + (0.5 * h) * k2v;
        deriv(x + 0.5 * h, tmp, k3v);
        tmp = state + h * k3v;
        deriv(x + h, tmp, k4v);
        state += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }

    TwoComponentField out{SpectralField(grid), SpectralField(grid)};
    out.minus.coeffs = state.head(n);
    out.plus.coeffs = state.segment(n, n);
    for (int l = 0; l < L; ++l) {
        cplx wm = state[2 * n + l], wp = state[2 * n + L + l];
        if (wm != cplx{0.0, 0.0}) out.minus.deltas.push_back({lad.positions[l], wm});
        if (wp != cplx{0.0, 0.0}) out.plus.deltas.push_back({lad.positions[l], wp});
    }
    return out;
}

TransferOperator fundamental_from_aux(const TransferOperator& aux) {
    if (aux.scope != OperatorScope::auxiliary_full)
        throw EngineError(ErrorCode::validation, "fundamental_from_aux expects full-grid scope");
    const int np = aux.grid->n_prop();
    TransferOperator out;
    out.grid = aux.grid;
    out.scope = OperatorScope::fundamental_prop;
    out.m11 = aux.m11.topLeftCorner(np, np);
    out.m12 = aux.m12.topLeftCorner(np, np);
    out.m21 = aux.m21.topLeftCorner(np, np);
    out.m22 = aux.m22.topLeftCorner(np, np);
    return out;
}

TransferOperator compose(const TransferOperator& m2, const TransferOperator& m1) {
    if (m2.scope != OperatorScope::auxiliary_full || m1.scope != OperatorScope::auxiliary_full)
        throw EngineError(ErrorCode::validation,
                          "composition is defined for the auxiliary (full-grid) scope only");
    require_same_grid(m2.grid, m1.grid);
    TransferOperator out;
    out.grid = m1.grid;
    out.scope = OperatorScope::auxiliary_full;
    out.m11 = m2.m11 * m1.m11 + m2.m12 * m1.m21;
    out.m12 = m2.m11 * m1.m12 + m2.m12 * m1.m22;
    out.m21 = m2.m21 * m1.m11 + m2.m22 * m1.m21;
    out.m22 = m2.m21 * m1.m12 + m2.m22 * m1.m22;
    return out;
}

TransferOperator evolve_aux_drift_gauge(const EffectiveHamiltonianSpec& spec, double x0,
                                        double x1, double dx) {
    if (!(x0 < x1))
        throw EngineError(ErrorCode::validation, "evolve requires x0 < x1");
    const GridPtr& grid = spec.grid;
    const int n = grid->size();
    HamAction ham(spec);

    std::vector<double> vi(n);
    for (int i = 0; i < n; ++i) vi[i] = varpi_im(grid->p(i), grid->k());

    auto deriv = [&](double x, const MatrixXcd& U, MatrixXcd& out) {
        // -i Hdrift U = -i e^{-vi s3 x} Hcal e^{vi s3 x} U - vi s3 U
        MatrixXcd W = U;
        for (int i = 0; i < n; ++i) {
            W.row(i) *= std::exp(vi[i] * x);
            W.row(n + i) *= std::exp(-vi[i] * x);
        }
        ham.deriv(x, W, out);
        for (int i = 0; i < n; ++i) {
            out.row(i) *= std::exp(-vi[i] * x);
            out.row(n + i) *= std::exp(vi[i] * x);
        }
        for (int i = 0; i < n; ++i) {
            out.row(i) -= vi[i] * U.row(i);
            out.row(n + i) += vi[i] * U.row(n + i);
        }
    };

    const int steps = step_count(x0, x1, dx);
    const double h = (x1 - x0) / steps;
    MatrixXcd U = MatrixXcd::Identity(2 * n, 2 * n);
    MatrixXcd k1, k2, k3, k4, tmp;
    for (int s = 0; s < steps; ++s) {
        double x = x0 + s * h;
        deriv(x, U, k1);
        tmp = U + (0.5 * h) * k1;
        deriv(x + 0.5 * h, tmp, k2);
        tmp = U + (0.5 * h) * k2;
        deriv(x + 0.5 * h, tmp, k3);
        tmp = U + h * k3;
        deriv(x + h, tmp, k4);
        U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return blocks_from_matrix(grid, U);
}

Eigen::Matrix2cd tm1d_evolve(const std::function<cplx(double)>& v, double a0, double a1,
                             double k, double dx) {
    auto H = [&](double x) {
        cplx c = v(x) / (2.0 * k);
        Matrix2cd h;
        h << c, c * std::exp(-2.0 * kI * k * x), -c * std::exp(2.0 * kI * k * x), -c;
        return h;
    };
    auto f = [&](double x, const Matrix2cd& M) -> Matrix2cd { return -kI * (H(x) * M); };
    const int steps = step_count(a0, a1, dx);
    const double h = (a1 - a0) / steps;
    Matrix2cd M = Matrix2cd::Identity();
    for (int s = 0; s < steps; ++s) {
        double x = a0 + s * h;
        Matrix2cd k1 = f(x, M);
        Matrix2cd k2 = f(x + 0.5 * h, M + 0.5 * h * k1);
        Matrix2cd k3 = f(x + 0.5 * h, M + 0.5 * h * k2);
        Matrix2cd k4 = f(x + h, M + h * k3);
        M += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return M;
}

Eigen::Matrix2cd tm1d_delta(cplx z, double k, double a) {
    Matrix2cd M = Matrix2cd::Identity();
    cplx c = kI * z / (2.0 * k);
    M(0, 0) -= c;
    M(0, 1) -= c * std::exp(-2.0 * kI * k * a);
    M(1, 0) += c * std::exp(2.0 * kI * k * a);
    M(1, 1) += c;
    return M;
}

}  // namespace scatter
