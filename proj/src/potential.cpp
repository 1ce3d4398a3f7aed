#include "scatter/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scatter/kernels.hpp"

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Profile make_gaussian(cplx amplitude, double center, double sigma) {
    return [=](double t) { return amplitude * std::exp(-0.5 * (t - center) * (t - center) / (sigma * sigma)); };
}

Profile make_box(cplx amplitude, double lo, double hi) {
    return [=](double t) { return (t >= lo && t <= hi) ? amplitude : cplx{0.0, 0.0}; };
}

Profile make_cosine_window(cplx amplitude, double lo, double hi) {
    return [=](double t) -> cplx {
        if (t < lo || t > hi) return {0.0, 0.0};
        double u = (t - lo) / (hi - lo);
        return amplitude * 0.5 * (1.0 - std::cos(kTwoPi * u));
    };
}

Profile make_exp_shifted(cplx amplitude, double beta) {
    return [=](double t) { return amplitude * std::polar(1.0, beta * t); };
}

PotentialModel zero_potential() {
    PotentialModel p;
    p.kind = SeparableY{[](double) { return cplx{0.0, 0.0}; },
                        [](double) { return cplx{0.0, 0.0}; }};
    p.a_minus = 0.0;
    p.a_plus = 0.0;
    return p;
}

namespace {

cplx grid_sampled_vtilde(const GridSampled& gs, double x, double K) {
    auto locate = [](const std::vector<double>& v, double t) {
        auto it = std::upper_bound(v.begin(), v.end(), t);
        return static_cast<int>(it - v.begin()) - 1;
    };
    if (x < gs.xs.front() || x > gs.xs.back()) return {0.0, 0.0};
    if (K < gs.Ks.front() || K > gs.Ks.back()) {
        if (gs.zero_fill_outside) return {0.0, 0.0};
        throw EngineError(ErrorCode::validation, "GridSampled query outside K range");
    }
    int i = std::clamp(locate(gs.xs, x), 0, static_cast<int>(gs.xs.size()) - 2);
    int j = std::clamp(locate(gs.Ks, K), 0, static_cast<int>(gs.Ks.size()) - 2);
    double tx = (x - gs.xs[i]) / (gs.xs[i + 1] - gs.xs[i]);
    double tK = (K - gs.Ks[j]) / (gs.Ks[j + 1] - gs.Ks[j]);
    return (1 - tx) * ((1 - tK) * gs.vals(i, j) + tK * gs.vals(i, j + 1)) +
           tx * ((1 - tK) * gs.vals(i + 1, j) + tK * gs.vals(i + 1, j + 1));
}

}  // namespace

cplx vtilde(const PotentialModel& pot, double x, double K) {
    if (!pot.is_delta() && !pot.in_support(x)) return {0.0, 0.0};
    return std::visit(
        [&](const auto& kind) -> cplx {
            using T = std::decay_t<decltype(kind)>;
            if constexpr (std::is_same_v<T, SeparableY>) {
                return kind.g(x) * kind.hp(K);
            } else if constexpr (std::is_same_v<T, HarmonicY>) {
                // 2 pi g(x) delta(K - beta'): only sensible pointwise value
                // is away from the spike.
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<T, GridSampled>) {
                return grid_sampled_vtilde(kind, x, K);
            } else {
                // Delta2D: the y-factor; the axial delta marker is is_delta().
                return kind.z * std::polar(1.0, -K * kind.b);
            }
        },
        pot.kind);
}

VApplier::VApplier(const PotentialModel& pot, GridPtr grid, VWeighting weighting)
    : pot_(pot), grid_(std::move(grid)), weighting_(weighting) {
    if (pot.is_delta())
        throw EngineError(ErrorCode::validation,
                          "delta potentials use the closed-form delta engine, not the quadrature path");
    const int n = grid_->size();
    scratch_.resize(n);
    auto wt = [&](int j) {
        return weighting_ == VWeighting::plain ? cplx{grid_->w(j), 0.0} : grid_->winv(j);
    };

    if (const auto* sep = std::get_if<SeparableY>(&pot_.kind)) {
        kmat_.resize(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                kmat_(i, j) = sep->hp(grid_->p(i) - grid_->p(j)) * wt(j) / kTwoPi;
    } else if (const auto* har = std::get_if<HarmonicY>(&pot_.kind)) {
        // Exact spectral shift; no quadrature. inverse_varpi divides
        // pointwise (grid nodes keep |varpi| well away from zero).
        kmat_ = RowMatrixXcd::Zero(n, n);
        std::vector<double> row;
        for (int i = 0; i < n; ++i) {
            grid_->interp_row(grid_->p(i) - har->beta_prime, row);
            for (int j = 0; j < n; ++j) {
                if (row[j] == 0.0) continue;
                cplx c{row[j], 0.0};
                if (weighting_ == VWeighting::inverse_varpi) c /= grid_->varpi_at(j);
                kmat_(i, j) = c;
            }
        }
    } else if (const auto* gs = std::get_if<GridSampled>(&pot_.kind)) {
        slices_.reserve(gs->xs.size());
        for (std::size_t m = 0; m < gs->xs.size(); ++m) {
            RowMatrixXcd K(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    K(i, j) = grid_sampled_vtilde(*gs, gs->xs[m], grid_->p(i) - grid_->p(j)) *
                              wt(j) / kTwoPi;
            slices_.push_back(std::move(K));
        }
    }
}

cplx VApplier::g_at(double x) const {
    if (!pot_.in_support(x)) return {0.0, 0.0};
    if (const auto* sep = std::get_if<SeparableY>(&pot_.kind)) return sep->g(x);
    if (const auto* har = std::get_if<HarmonicY>(&pot_.kind)) return har->g(x);
    throw EngineError(ErrorCode::validation, "potential does not factorize in x");
}

void VApplier::apply(double x, const cplx* f, cplx* out) const {
    const int n = grid_->size();
    std::fill(out, out + n, cplx{0.0, 0.0});
    if (!pot_.in_support(x)) return;

    if (!slices_.empty()) {
        const auto& gs = std::get<GridSampled>(pot_.kind);
        if (x < gs.xs.front() || x > gs.xs.back()) return;
        auto it = std::upper_bound(gs.xs.begin(), gs.xs.end(), x);
        int m = std::clamp(static_cast<int>(it - gs.xs.begin()) - 1, 0,
                           static_cast<int>(gs.xs.size()) - 2);
        double t = (x - gs.xs[m]) / (gs.xs[m + 1] - gs.xs[m]);
        const auto& K0 = slices_[m];
        const auto& K1 = slices_[m + 1];
        for (int i = 0; i < n; ++i) {
            cplx a = kernels::zdotu(n, K0.data() + static_cast<std::size_t>(i) * n, f);
            cplx b = kernels::zdotu(n, K1.data() + static_cast<std::size_t>(i) * n, f);
            out[i] = (1.0 - t) * a + t * b;
        }
        return;
    }

    cplx g = g_at(x);
    if (g == cplx{0.0, 0.0}) return;
    for (int i = 0; i < n; ++i)
        out[i] = g * kernels::zdotu(n, kmat_.data() + static_cast<std::size_t>(i) * n, f);
}

void VApplier::apply_matrix(double x, const Eigen::MatrixXcd& W, Eigen::MatrixXcd& out) const {
    out.setZero(W.rows(), W.cols());
    if (!pot_.in_support(x)) return;
    if (!slices_.empty()) {
        const auto& gs = std::get<GridSampled>(pot_.kind);
        if (x < gs.xs.front() || x > gs.xs.back()) return;
        auto it = std::upper_bound(gs.xs.begin(), gs.xs.end(), x);
        int m = std::clamp(static_cast<int>(it - gs.xs.begin()) - 1, 0,
                           static_cast<int>(gs.xs.size()) - 2);
        double t = (x - gs.xs[m]) / (gs.xs[m + 1] - gs.xs[m]);
        out.noalias() = (1.0 - t) * (slices_[m] * W);
        out.noalias() += t * (slices_[m + 1] * W);
        return;
    }
    cplx g = g_at(x);
    if (g == cplx{0.0, 0.0}) return;
    out.noalias() = g * (kmat_ * W);
}

DeltaImage VApplier::apply_delta(double x, double p0) const {
    const int n = grid_->size();
    DeltaImage img;
    img.smooth = VectorXcd::Zero(n);
    if (!pot_.in_support(x)) return img;

    cplx coef{1.0, 0.0};
    if (weighting_ == VWeighting::inverse_varpi) coef /= varpi(p0, grid_->k());

    if (const auto* har = std::get_if<HarmonicY>(&pot_.kind)) {
        cplx g = har->g(x);
        if (g != cplx{0.0, 0.0})
            img.deltas.push_back({p0 + har->beta_prime, g * coef});
        return img;
    }
    for (int i = 0; i < n; ++i)
        img.smooth[i] = vtilde(pot_, x, grid_->p(i) - p0) * coef / kTwoPi;
    return img;
}

SpectralField apply_V(const PotentialModel& pot, double x, const SpectralField& f) {
    SpectralField out(f.grid);
    if (!pot.in_support(x)) return out;
    VApplier applier(pot, f.grid, VWeighting::plain);
    applier.apply(x, f.coeffs.data(), out.coeffs.data());
    for (const auto& d : f.deltas) {
        DeltaImage img = applier.apply_delta(x, d.p0);
        out.coeffs += d.weight * img.smooth;
        for (auto dd : img.deltas) {
            dd.weight *= d.weight;
            out.deltas.push_back(dd);
        }
    }
    return out;
}

}  // namespace scatter
