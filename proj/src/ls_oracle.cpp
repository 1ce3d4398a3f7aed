#include "scatter/ls_oracle.hpp"

#include <cmath>
#include <numbers>

#include "scatter/parallel.hpp"

namespace scatter {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kEulerGamma = 0.57721566490153286060;
}

SpatialGrid make_spatial_grid(double x_lo, double x_hi, double y_lo, double y_hi, int nx, int ny,
                              const SpatialPotential& v, double k) {
    if (!(x_lo < x_hi) || !(y_lo < y_hi) || nx < 2 || ny < 2)
        throw EngineError(ErrorCode::validation, "spatial grid needs a nonempty box");
    if (!(k > 0.0)) throw EngineError(ErrorCode::validation, "k must be positive");
    SpatialGrid g;
    g.nx = nx;
    g.ny = ny;
    g.hx = (x_hi - x_lo) / nx;
    g.hy = (y_hi - y_lo) / ny;
    double lambda = kTwoPi / k;
    if (g.hx > lambda / 8.0 || g.hy > lambda / 8.0)
        throw EngineError(ErrorCode::validation,
                          "spatial grid under-resolved: need >= 8 points per wavelength");
    g.x0 = x_lo + 0.5 * g.hx;
    g.y0 = y_lo + 0.5 * g.hy;
    g.v = VectorXcd(nx * ny);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) g.v[i * ny + j] = v(g.x(i), g.y(j));
    return g;
}

namespace {

// Tabulated G(r_i - r_j) * hx * hy over all displacements. The log-singular
// self cell is integrated analytically over an equal-area disc of radius
// R = h / sqrt(pi): int_cell G = (R^2/2)(ln(kR/2) + gamma - 1/2) - (i/4) h^2.
struct GreenTable {
    std::vector<cplx> g;
    int nx, ny;

    GreenTable(const SpatialGrid& grid, double k) : nx(grid.nx), ny(grid.ny) {
        g.resize((2 * nx - 1) * (2 * ny - 1));
        double area = grid.hx * grid.hy;
        for (int di = -(nx - 1); di <= nx - 1; ++di) {
            for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
                cplx val;
                if (di == 0 && dj == 0) {
                    double h = std::sqrt(area);
                    double R = h / std::sqrt(kPi);
                    val = cplx{0.5 * R * R * (std::log(0.5 * k * R) + kEulerGamma - 0.5),
                               -0.25 * h * h};
                } else {
                    double r = std::hypot(di * grid.hx, dj * grid.hy);
                    val = green2d(r, k) * area;
                }
                g[(di + nx - 1) * (2 * ny - 1) + (dj + ny - 1)] = val;
            }
        }
    }

    cplx at(int di, int dj) const { return g[(di + nx - 1) * (2 * ny - 1) + (dj + ny - 1)]; }
};

// out = G * (v .* f), direct convolution, parallel over target rows.
void apply_gv(const GreenTable& gt, const SpatialGrid& grid, const VectorXcd& f, VectorXcd& out) {
    const int nx = grid.nx, ny = grid.ny;
    VectorXcd vf = grid.v.cwiseProduct(f);
    out.resize(nx * ny);
    parallel_for(nx, [&](int i) {
        for (int j = 0; j < ny; ++j) {
            cplx acc{0.0, 0.0};
            for (int ii = 0; ii < nx; ++ii) {
                const cplx* grow = &gt.g[(i - ii + nx - 1) * (2 * ny - 1) + (ny - 1)];
                const cplx* vrow = &vf[ii * ny];
                for (int jj = 0; jj < ny; ++jj) acc += grow[j - jj] * vrow[jj];
            }
            out[i * ny + j] = acc;
        }
    });
}

}  // namespace

OracleSolution born_series_solve(const SpatialGrid& grid, const IncidenceSpec& inc, double k,
                                 int n_terms) {
    if (n_terms < 1) throw EngineError(ErrorCode::validation, "need at least one term");
    GreenTable gt(grid, k);

    // Power iteration on G v to estimate the contraction factor.
    const int N = grid.size();
    VectorXcd u(N), w;
    for (int i = 0; i < N; ++i)
        u[i] = std::polar(1.0, 2.399963 * i);  // fixed pseudo-random phases
    double ratio = 0.0;
    double nu = u.norm();
    for (int it = 0; it < 20; ++it) {
        apply_gv(gt, grid, u, w);
        double nw = w.norm();
        if (nw == 0.0) {
            ratio = 0.0;
            break;
        }
        ratio = nw / nu;
        u = w / nw;
        nu = 1.0;
    }
    if (ratio >= 1.0)
        throw EngineError(ErrorCode::non_contractive,
                          "Born series not contractive (estimate " + std::to_string(ratio) +
                              "); oracle is restricted to weak potentials");

    OracleSolution sol;
    sol.contraction = ratio;
    double w0 = varpi(inc.p0, k).real();
    double kx = inc.side == IncidenceSpec::Side::left ? w0 : -w0;
    sol.psi_inc.resize(N);
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j)
            sol.psi_inc[i * grid.ny + j] = std::polar(1.0, kx * grid.x(i) + inc.p0 * grid.y(j));

    sol.psi = sol.psi_inc;
    VectorXcd prev;
    for (int t = 0; t < n_terms; ++t) {
        prev = sol.psi;
        apply_gv(gt, grid, sol.psi, w);
        sol.psi = sol.psi_inc + w;
        sol.residuals.push_back((sol.psi - prev).norm());
    }
    return sol;
}

std::vector<AmplitudeSample> far_field(const SpatialGrid& grid, const VectorXcd& psi, double k,
                                       int n_angles) {
    if (psi.size() != grid.size())
        throw EngineError(ErrorCode::validation, "field size does not match the grid");
    VectorXcd vpsi = grid.v.cwiseProduct(psi) * (grid.hx * grid.hy);
    std::vector<AmplitudeSample> out;
    const cplx pref = -1.0 / (2.0 * std::sqrt(kTwoPi));
    for (int a = 0; a < n_angles; ++a) {
        double theta = -kPi + (a + 1) * (2.0 * kPi / n_angles);
        double c = std::cos(theta);
        if (c == 0.0) continue;  // matches the solver's grazing-angle gap
        double kxx = k * c, kyy = k * std::sin(theta);
        cplx acc{0.0, 0.0};
        for (int i = 0; i < grid.nx; ++i) {
            for (int j = 0; j < grid.ny; ++j) {
                cplx t = vpsi[i * grid.ny + j];
                if (t == cplx{0.0, 0.0}) continue;
                acc += std::polar(1.0, -(kxx * grid.x(i) + kyy * grid.y(j))) * t;
            }
        }
        out.push_back({theta, pref * acc});
    }
    return out;
}

}  // namespace scatter
