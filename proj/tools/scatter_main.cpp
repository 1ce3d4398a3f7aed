// Command-line front end: subcommands map onto ExperimentConfig keys;
// flags override values loaded from --config.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scatter/config.hpp"

namespace {

using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    double k = -1.0;
    int n_prop = -1;
    int n_evan = -1;
    int n_angles = -1;
    double dx = -1.0;
    std::string side;
    std::vector<double> theta0;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config_path, "JSON config file (flags override it)");
    sub->add_option("--out", f.out_dir, "output directory");
    sub->add_option("--k", f.k, "wavenumber");
    sub->add_option("--n-prop", f.n_prop, "propagating-band nodes");
    sub->add_option("--n-evan", f.n_evan, "evanescent-band nodes (per side)");
    sub->add_option("--n-angles", f.n_angles, "detector angles");
    sub->add_option("--dx", f.dx, "axial step (0 = auto)");
    sub->add_option("--side", f.side, "incidence side: left|right");
    sub->add_option("--theta0", f.theta0, "incidence angles in degrees");
}

json load_base(const CommonFlags& f) {
    if (f.config_path.empty()) return json::object();
    std::ifstream in(f.config_path);
    if (!in) {
        std::cerr << json{{"error",
                           {{"code", "validation"},
                            {"exit", 2},
                            {"message", "cannot open config file " + f.config_path}}}}
                         .dump()
                  << "\n";
        std::exit(2);
    }
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        std::cerr << json{{"error",
                           {{"code", "validation"}, {"exit", 2}, {"message", e.what()}}}}
                         .dump()
                  << "\n";
        std::exit(2);
    }
    return j;
}

void fold_common(json& cfg, const CommonFlags& f) {
    if (!f.out_dir.empty()) cfg["output"]["dir"] = f.out_dir;
    if (f.k > 0.0) cfg["incidence"]["k"] = f.k;
    if (f.n_prop > 0) cfg["numerics"]["n_prop"] = f.n_prop;
    if (f.n_evan >= 0) cfg["numerics"]["n_evan"] = f.n_evan;
    if (f.n_angles > 0) cfg["numerics"]["n_angles"] = f.n_angles;
    if (f.dx >= 0.0) cfg["numerics"]["dx"] = f.dx;
    if (!f.side.empty()) cfg["incidence"]["side"] = f.side;
    if (!f.theta0.empty()) cfg["incidence"]["theta0_deg"] = f.theta0;
}

std::pair<double, double> parse_pair(const std::string& s) {
    std::stringstream ss(s);
    double a = 0.0, b = 0.0;
    char comma = 0;
    ss >> a >> comma >> b;
    return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scatter: momentum-space transfer-matrix scattering in 2D"};
    app.require_subcommand(1);

    CommonFlags solve_f, delta_f, design_f, certify_f, born_f, oracle_f, sweep_f;
    std::string z_str = "4+0i", r0_str = "0,0";
    double alpha = 1.0, margin = 0.05, beta = 0.0, sigma_y = 8.0;
    std::string envelope = "harmonic";
    std::vector<double> k_sweep;

    CLI::App* solve = app.add_subcommand("solve", "solve one scattering configuration");
    add_common(solve, solve_f);

    CLI::App* dc = app.add_subcommand("delta-compare",
                                      "delta potential: transfer-matrix vs Lippmann-Schwinger");
    add_common(dc, delta_f);
    dc->add_option("--z", z_str, "coupling, e.g. \"4+0i\"");
    dc->add_option("--r0", r0_str, "delta position a,b");

    CLI::App* idg = app.add_subcommand("invis-design", "build an invisible design");
    add_common(idg, design_f);
    idg->add_option("--alpha", alpha, "invisibility ceiling");
    idg->add_option("--margin", margin, "strict margin above 2*alpha");
    idg->add_option("--sigma-y", sigma_y, "wave-packet window width");
    idg->add_option("--envelope", envelope, "harmonic|wave_packet");

    CLI::App* ic = app.add_subcommand("invis-certify", "certify omnidirectional invisibility");
    add_common(ic, certify_f);
    ic->add_option("--alpha", alpha, "invisibility ceiling");
    ic->add_option("--margin", margin, "strict margin above 2*alpha");
    ic->add_option("--sigma-y", sigma_y, "wave-packet window width");
    ic->add_option("--envelope", envelope, "harmonic|wave_packet");

    CLI::App* bc = app.add_subcommand("born-check", "first-Born exactness for a gapped design");
    add_common(bc, born_f);
    bc->add_option("--alpha", alpha, "spectral cutoff alpha");
    bc->add_option("--beta", beta, "transverse spectral lower bound");
    bc->add_option("--sigma-y", sigma_y, "wave-packet window width");

    CLI::App* oc = app.add_subcommand("oracle-compare",
                                      "engine vs position-space Born-series oracle");
    add_common(oc, oracle_f);

    CLI::App* sw = app.add_subcommand("sweep", "solve over a wavenumber sweep");
    add_common(sw, sweep_f);
    sw->add_option("--k-sweep", k_sweep, "wavenumber list");

    CLI11_PARSE(app, argc, argv);

    json cfg;
    if (solve->parsed()) {
        cfg = load_base(solve_f);
        cfg["task"] = "solve";
        fold_common(cfg, solve_f);
    } else if (dc->parsed()) {
        cfg = load_base(delta_f);
        cfg["task"] = "delta-compare";
        fold_common(cfg, delta_f);
        auto [a, b] = parse_pair(r0_str);
        cfg["potential"]["type"] = "delta";
        cfg["potential"]["z"] = z_str;
        cfg["potential"]["r0"] = {a, b};
    } else if (idg->parsed() || ic->parsed()) {
        const CommonFlags& f = idg->parsed() ? design_f : certify_f;
        cfg = load_base(f);
        cfg["task"] = idg->parsed() ? "invis-design" : "invis-certify";
        fold_common(cfg, f);
        cfg["invisibility"]["alpha"] = alpha;
        cfg["invisibility"]["margin"] = margin;
        cfg["invisibility"]["sigma_y"] = sigma_y;
        cfg["invisibility"]["envelope"] = envelope;
    } else if (bc->parsed()) {
        cfg = load_base(born_f);
        cfg["task"] = "born-check";
        fold_common(cfg, born_f);
        cfg["invisibility"]["alpha"] = alpha;
        cfg["invisibility"]["beta"] = beta;
        cfg["invisibility"]["sigma_y"] = sigma_y;
    } else if (oc->parsed()) {
        cfg = load_base(oracle_f);
        cfg["task"] = "oracle-compare";
        fold_common(cfg, oracle_f);
    } else if (sw->parsed()) {
        cfg = load_base(sweep_f);
        cfg["task"] = "sweep";
        fold_common(cfg, sweep_f);
        if (!k_sweep.empty()) cfg["incidence"]["k_sweep"] = k_sweep;
    }

    return scatter::run_experiment(cfg, std::cout, std::cerr);
}
