#include "scatter/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx varpi(double p, double k) {
    if (std::abs(p) < k) return {std::sqrt(k * k - p * p), 0.0};
    return {0.0, std::sqrt(p * p - k * k)};
}

double varpi_im(double p, double k) {
    if (std::abs(p) < k) return 0.0;
    return std::sqrt(p * p - k * k);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev estimate.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

BarycentricInterp::BarycentricInterp(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    const int n = static_cast<int>(nodes_.size());
    bary_.assign(n, 1.0);
    double lo = *std::min_element(nodes_.begin(), nodes_.end());
    double hi = *std::max_element(nodes_.begin(), nodes_.end());
    double c = 4.0 / std::max(hi - lo, 1e-300);  // rescale to avoid under/overflow
    for (int j = 0; j < n; ++j) {
        double prod = 1.0;
        for (int m = 0; m < n; ++m)
            if (m != j) prod *= c * (nodes_[j] - nodes_[m]);
        bary_[j] = 1.0 / prod;
    }
}

void BarycentricInterp::cardinal_row(double t, std::vector<double>& row) const {
    const int n = static_cast<int>(nodes_.size());
    row.assign(n, 0.0);
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = t - nodes_[j];
        if (d == 0.0) {
            row.assign(n, 0.0);
            row[j] = 1.0;
            return;
        }
        row[j] = bary_[j] / d;
        denom += row[j];
    }
    for (int j = 0; j < n; ++j) row[j] /= denom;
}

cplx BarycentricInterp::eval(double t, const cplx* values) const {
    const int n = static_cast<int>(nodes_.size());
    cplx num{0.0, 0.0};
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = t - nodes_[j];
        if (d == 0.0) return values[j];
        double c = bary_[j] / d;
        num += c * values[j];
        denom += c;
    }
    return num / denom;
}

MomentumGrid::MomentumGrid(Wavenumber kw, int n_prop, int n_evan, double p_max)
    : k_(kw.value), p_max_(p_max), n_prop_(n_prop), n_evan_half_(n_evan) {
    if (n_prop < 2)
        throw EngineError(ErrorCode::validation, "n_prop must be >= 2");
    if (!(p_max > k_))
        throw EngineError(ErrorCode::validation, "p_max must exceed k");

    std::vector<double> gx, gw;
    gauss_legendre(n_prop, gx, gw);

    // Propagating band: p = k sin(theta), theta Gauss-Legendre on
    // (-pi/2, pi/2). dp = k cos(theta) dtheta and varpi = k cos(theta),
    // so the 1/varpi weight is the raw theta weight.
    std::vector<double> thetas(n_prop);
    for (int j = 0; j < n_prop; ++j) {
        double theta = 0.5 * kPi * gx[j];
        double wt = 0.5 * kPi * gw[j];
        thetas[j] = theta;
        p_.push_back(k_ * std::sin(theta));
        w_.push_back(wt * k_ * std::cos(theta));
        winv_.push_back(cplx{wt, 0.0});
    }
    prop_interp_ = BarycentricInterp(thetas);

    // Evanescent band: plain Gauss-Legendre on (k, p_max), mirrored.
    if (n_evan > 0) {
        gauss_legendre(n_evan, gx, gw);
        std::vector<double> pe(n_evan);
        for (int j = 0; j < n_evan; ++j) {
            double p = k_ + 0.5 * (p_max - k_) * (gx[j] + 1.0);
            double wt = 0.5 * (p_max - k_) * gw[j];
            pe[j] = p;
            p_.push_back(p);
            w_.push_back(wt);
            winv_.push_back(wt / varpi(p, k_));
        }
        for (int j = 0; j < n_evan; ++j) {
            p_.push_back(-pe[j]);
            w_.push_back(w_[n_prop + j]);
            winv_.push_back(winv_[n_prop + j]);
        }
        evan_interp_ = BarycentricInterp(pe);
    }

    varpi_.reserve(p_.size());
    for (double p : p_) varpi_.push_back(varpi(p, k_));
}

void MomentumGrid::interp_row(double p, std::vector<double>& row) const {
    row.assign(size(), 0.0);
    std::vector<double> band;
    if (std::abs(p) < k_) {
        prop_interp_.cardinal_row(std::asin(p / k_), band);
        for (int j = 0; j < n_prop_; ++j) row[j] = band[j];
    } else if (p > k_ && p < p_max_ && n_evan_half_ > 0) {
        evan_interp_.cardinal_row(p, band);
        for (int j = 0; j < n_evan_half_; ++j) row[n_prop_ + j] = band[j];
    } else if (p < -k_ && p > -p_max_ && n_evan_half_ > 0) {
        evan_interp_.cardinal_row(-p, band);
        for (int j = 0; j < n_evan_half_; ++j) row[n_prop_ + n_evan_half_ + j] = band[j];
    }
    // |p| in {k} or beyond p_max: row stays zero.
}

cplx MomentumGrid::interp(double p, const cplx* values) const {
    if (std::abs(p) < k_)
        return prop_interp_.eval(std::asin(p / k_), values);
    if (p > k_ && p < p_max_ && n_evan_half_ > 0)
        return evan_interp_.eval(p, values + n_prop_);
    if (p < -k_ && p > -p_max_ && n_evan_half_ > 0)
        return evan_interp_.eval(-p, values + n_prop_ + n_evan_half_);
    return {0.0, 0.0};
}

GridPtr build_grid(Wavenumber k, int n_prop, int n_evan, double p_max) {
    return std::make_shared<MomentumGrid>(k, n_prop, n_evan, p_max);
}

SpectralField zero_field(const GridPtr& g) { return SpectralField(g); }

SpectralField project_pk(const SpectralField& f) {
    SpectralField out = f;
    for (int i = f.grid->n_prop(); i < f.grid->size(); ++i) out.coeffs[i] = 0.0;
    out.deltas.clear();
    for (const auto& d : f.deltas)
        if (std::abs(d.p0) < f.grid->k()) out.deltas.push_back(d);
    return out;
}

cplx inner(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid, g.grid);
    cplx s{0.0, 0.0};
    for (int i = 0; i < f.grid->size(); ++i)
        s += f.grid->w(i) * std::conj(f.coeffs[i]) * g.coeffs[i];
    return s;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get())
        throw EngineError(ErrorCode::validation, "momentum grid mismatch");
}

namespace {

// Iterative radix-2 FFT, sign = -1 forward.
void fft_radix2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw EngineError(ErrorCode::validation, "FFT length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * kPi / static_cast<double>(len);
        cplx wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

FourierData fourier_y_to_p(const std::vector<cplx>& samples, double y0, double dy) {
    if (!(dy > 0.0))
        throw EngineError(ErrorCode::validation, "sample spacing must be positive");
    const std::size_t n = samples.size();
    FourierData out;
    out.values = samples;
    fft_radix2(out.values, -1);
    out.freqs.resize(n);
    const double dp = 2.0 * kPi / (static_cast<double>(n) * dy);
    for (std::size_t m = 0; m < n; ++m) {
        double p = dp * (m < n / 2 ? static_cast<double>(m)
                                   : static_cast<double>(m) - static_cast<double>(n));
        out.freqs[m] = p;
        out.values[m] *= dy * std::polar(1.0, -p * y0);
    }
    return out;
}

std::vector<cplx> fourier_p_to_y(const FourierData& data, double y0, double dy) {
    const std::size_t n = data.values.size();
    std::vector<cplx> a(n);
    for (std::size_t m = 0; m < n; ++m)
        a[m] = data.values[m] * std::polar(1.0, data.freqs[m] * y0);
    fft_radix2(a, +1);
    for (auto& v : a) v /= static_cast<double>(n) * dy;
    return a;
}

}  // namespace scatter
