#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcwave/acceptance.hpp"
#include "bcwave/csv.hpp"
#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/intervals.hpp"
#include "bcwave/inverse.hpp"
#include "bcwave/potential.hpp"
#include "bcwave/sl_core.hpp"
#include "bcwave/spectral.hpp"
#include "bcwave/spectral_data.hpp"
#include "bcwave/wave_dynamics.hpp"
#include "bcwave/wave_model.hpp"

namespace {

using bcwave::format_double;
using nlohmann::json;

int log_level() {
    const char* v = std::getenv("BCWAVE_LOG");
    if (!v) return 0;
    const std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[bcwave] " << msg << "\n";
}

// FNV-1a, enough to pin input identity in the manifest
std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "missing";
    unsigned long long h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

struct Manifest {
    std::string command;
    json config = json::object();
    json input_hashes = json::object();
    std::vector<std::string> output_paths;
    json diagnostics = json::object();

    void add_input(const std::string& path) { input_hashes[path] = file_hash(path); }
    void write(const std::string& anchor_out) const {
        json m;
        m["command"] = command;
        m["config"] = config;
        m["input_hashes"] = input_hashes;
        m["output_paths"] = output_paths;
        m["diagnostics"] = diagnostics;
        const std::string path = anchor_out + ".manifest.json";
        std::ofstream out(path);
        out << m.dump(2) << "\n";
        log_info("manifest written to " + path);
    }
};

bcwave::Potential load_potential(const std::string& spec, double X, double h) {
    if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv")
        return bcwave::Potential::load_csv(spec);
    return bcwave::Potential::named(spec, X, h);
}

bcwave::Control load_control(const std::string& path) {
    const bcwave::CsvTable t = bcwave::read_csv(path);
    if (t.rows.size() < 2) throw bcwave::GridMismatch("control CSV needs at least two rows");
    bcwave::Control f;
    f.h = t.rows[1][0] - t.rows[0][0];
    for (const auto& row : t.rows) {
        if (row.size() < 2) throw bcwave::GridMismatch("control CSV needs (t, f) rows");
        f.samples.push_back(row[1]);
    }
    return f;
}

std::vector<double> load_target(const std::string& path) {
    const bcwave::CsvTable t = bcwave::read_csv(path);
    std::vector<double> y;
    for (const auto& row : t.rows) {
        if (row.size() < 2) throw bcwave::GridMismatch("target CSV needs (x, y) rows");
        y.push_back(row[1]);
    }
    return y;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-control wave model of the half-line Sturm-Liouville operator"};
    app.require_subcommand(1);

    double grid_h = 1.0 / 200.0, T = 2.0, X = 10.0, lambda_max = 400.0, r = 0.5;
    std::string out = "out.csv", pot = "const:1", control_path, target_path, set_path,
                measure_path, config_path, pairs_path, bench_name = "all";
    unsigned threads = 1;

    app.add_option("--threads", threads, "thread budget (results are thread-count independent)");

    auto add_common = [&](CLI::App* sub, bool with_pot) {
        sub->add_option("--out", out, "output CSV path");
        if (with_pot)
            sub->add_option("--potential", pot, "named potential (const:c, bump:c,amp,center,width) or CSV path");
        sub->add_option("--grid-h", grid_h, "grid step");
    };

    auto* gauge = app.add_subcommand("gauge", "gauge solution phi and eta = L^-1 phi");
    add_common(gauge, true);
    gauge->add_option("--X", X, "spatial extent");

    auto* forward = app.add_subcommand("forward", "forward wave field by finite differences");
    add_common(forward, true);
    forward->add_option("--T", T, "time horizon");
    forward->add_option("--control", control_path, "control CSV (t, f)")->required();

    auto* kernel = app.add_subcommand("kernel", "transmutation kernel w(x,s)");
    add_common(kernel, true);
    kernel->add_option("--T", T, "kernel horizon");

    auto* control = app.add_subcommand("control", "control steering u(.,T) to a target");
    add_common(control, true);
    control->add_option("--T", T, "time horizon");
    control->add_option("--target", target_path, "target CSV (x, y)")->required();

    auto* lattice = app.add_subcommand("lattice", "neighborhoods and measures of elementary sets");
    add_common(lattice, false);
    lattice->add_option("--set", set_path, "JSON array of [a,b] pairs (\"inf\" allowed)")->required();
    lattice->add_option("--r", r, "dilation radius");

    auto* spectrum = app.add_subcommand("spectrum", "truncated spectral measure");
    add_common(spectrum, true);
    spectrum->add_option("--X", X, "truncation interval length");
    spectrum->add_option("--lambda-max", lambda_max, "eigenvalue cutoff");

    auto* wimage = app.add_subcommand("wave-image", "sigma-space image of a boundary wave");
    add_common(wimage, false);
    wimage->add_option("--T", T, "time horizon");
    wimage->add_option("--measure", measure_path, "measure CSV (lambda, rho)")->required();
    wimage->add_option("--control", control_path, "control CSV (t, f)")->required();

    auto* model = app.add_subcommand("model", "model coefficients from coordinate graph pairs");
    add_common(model, false);
    model->add_option("--pairs", pairs_path, "CSV (tau, y1, g1, y2, g2, ...)")->required();

    auto* invert = app.add_subcommand("invert", "recover q from a spectral measure");
    add_common(invert, false);
    invert->add_option("--measure", measure_path, "measure CSV (lambda, rho)")->required();
    invert->add_option("--config", config_path, "flat key=value reconstruction config")->required();

    auto* bench = app.add_subcommand("bench", "acceptance benchmarks");
    bench->add_option("name", bench_name,
                      "all | 1..9 | cross-validation | controllability | duality | lattice | "
                      "eikonal | spectral | model-coefficients | roundtrip-const | firewall");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    Manifest man;
    man.config["grid_h"] = grid_h;
    man.config["threads"] = threads;

    try {
        if (gauge->parsed()) {
            man.command = "gauge";
            man.config["potential"] = pot;
            man.config["X"] = X;
            const bcwave::Potential q = load_potential(pot, X, grid_h);
            bcwave::GaugeSolution g = bcwave::solve_eta(q, bcwave::solve_phi(q));
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < g.phi.size(); ++i)
                rows.push_back({double(i) * g.h, g.phi[i], g.eta[i]});
            bcwave::write_csv(out, {"x", "phi", "eta"}, rows);
            std::cout << "phi_prime0," << format_double(g.phi_prime0) << "\n"
                      << "eta_prime0," << format_double(g.eta_prime0) << "\n";
            man.diagnostics["phi_prime0"] = g.phi_prime0;
            man.diagnostics["eta_prime0"] = g.eta_prime0;
        } else if (forward->parsed()) {
            man.command = "forward";
            man.config["potential"] = pot;
            man.config["T"] = T;
            man.add_input(control_path);
            const bcwave::Control f = load_control(control_path);
            const bcwave::Potential q = load_potential(pot, std::max(T, X), f.h);
            const bcwave::WaveField u = bcwave::forward_fd(q, f, T);
            bcwave::write_field_csv(out, u.values, u.h);
        } else if (kernel->parsed()) {
            man.command = "kernel";
            man.config["potential"] = pot;
            man.config["T"] = T;
            const bcwave::Potential q = load_potential(pot, T, grid_h);
            const bcwave::GoursatKernel w = bcwave::goursat_kernel(q, T);
            std::vector<std::vector<double>> field(w.levels(),
                                                   std::vector<double>(w.levels(), 0.0));
            for (std::size_t i = 0; i < w.levels(); ++i)
                for (std::size_t j = i; j < w.levels(); ++j) field[j][i] = w.at(i, j);
            bcwave::write_field_csv(out, field, w.h());
        } else if (control->parsed()) {
            man.command = "control";
            man.config["potential"] = pot;
            man.config["T"] = T;
            man.add_input(target_path);
            const std::vector<double> y = load_target(target_path);
            const bcwave::Potential q = load_potential(pot, T, grid_h);
            const bcwave::GoursatKernel w = bcwave::goursat_kernel(q, T);
            const bcwave::Control f = bcwave::solve_control(w, y, T);
            std::vector<std::vector<double>> rows;
            for (std::size_t j = 0; j < f.samples.size(); ++j)
                rows.push_back({double(j) * f.h, f.samples[j]});
            bcwave::write_csv(out, {"t", "f"}, rows);
        } else if (lattice->parsed()) {
            man.command = "lattice";
            man.config["r"] = r;
            man.add_input(set_path);
            std::ifstream in(set_path);
            if (!in) throw bcwave::GridMismatch("cannot open set file: " + set_path);
            const json sets = json::parse(in);
            std::vector<std::vector<double>> rows;
            std::vector<std::pair<double, double>> pairs;
            for (const auto& p : sets) {
                const double a = p.at(0).is_string() ? bcwave::kInf : p.at(0).get<double>();
                const double b = p.at(1).is_string() ? bcwave::kInf : p.at(1).get<double>();
                pairs.emplace_back(a, b);
            }
            const bcwave::ElementarySet E = bcwave::ElementarySet::from_pairs(pairs);
            const bcwave::ElementarySet Er = bcwave::neighborhood(E, r);
            for (const auto& iv : Er.intervals()) rows.push_back({iv.a, iv.b});
            bcwave::write_csv(out, {"a", "b"}, rows);
            man.diagnostics["measure_upto_1e6"] = Er.measure_upto(1e6);
            std::cout << "components," << Er.size() << "\n";
        } else if (spectrum->parsed()) {
            man.command = "spectrum";
            man.config["potential"] = pot;
            man.config["X"] = X;
            man.config["lambda_max"] = lambda_max;
            const bcwave::Potential q = load_potential(pot, X, grid_h);
            const bcwave::SpectralMeasure mu = bcwave::truncated_measure(q, X, lambda_max);
            mu.save_csv(out);
            man.diagnostics["n_nodes"] = mu.size();
        } else if (wimage->parsed()) {
            man.command = "wave-image";
            man.config["T"] = T;
            man.add_input(measure_path);
            man.add_input(control_path);
            const bcwave::SpectralMeasure mu = bcwave::SpectralMeasure::load_csv(measure_path);
            const bcwave::Control f = load_control(control_path);
            const bcwave::SpectralImage img = bcwave::wave_image(f, T, mu);
            std::vector<std::vector<double>> rows;
            for (std::size_t n = 0; n < mu.size(); ++n)
                rows.push_back({mu.nodes[n], img.values[n], 0.0});
            bcwave::write_csv(out, {"lambda", "re", "im"}, rows);
        } else if (model->parsed()) {
            man.command = "model";
            man.add_input(pairs_path);
            const bcwave::CsvTable t = bcwave::read_csv(pairs_path);
            if (t.rows.empty() || t.rows.front().size() < 3 || t.rows.front().size() % 2 == 0)
                throw bcwave::GridMismatch("pairs CSV needs columns tau, y1, g1, ...");
            std::vector<double> tau;
            const std::size_t npairs = (t.rows.front().size() - 1) / 2;
            std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs(npairs);
            for (const auto& row : t.rows) {
                tau.push_back(row[0]);
                for (std::size_t k = 0; k < npairs; ++k) {
                    pairs[k].first.push_back(row[1 + 2 * k]);
                    pairs[k].second.push_back(row[2 + 2 * k]);
                }
            }
            bcwave::ModelCoefficients mc = bcwave::model_coefficients(pairs, tau);
            bcwave::recover_q_from_pQ(mc);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < tau.size(); ++i)
                rows.push_back({tau[i], mc.p[i], mc.Q[i], mc.e[i], mc.q_rec[i],
                                double(mc.mask[i])});
            bcwave::write_csv(out, {"tau", "p", "Q", "e", "q_rec", "mask"}, rows);
        } else if (invert->parsed()) {
            man.command = "invert";
            man.add_input(measure_path);
            man.add_input(config_path);
            const bcwave::SpectralMeasure mu = bcwave::SpectralMeasure::load_csv(measure_path);
            const bcwave::ReconstructionConfig cfg =
                bcwave::ReconstructionConfig::load(config_path);
            log_info("running inverse pipeline");
            const bcwave::InversionResult res = bcwave::recover_potential(mu, cfg);
            std::vector<std::vector<double>> rows;
            const auto& mc = res.mc;
            for (std::size_t i = 0; i < mc.tau_grid.size(); ++i)
                rows.push_back({mc.tau_grid[i], mc.p[i], mc.Q[i], mc.e[i], mc.q_rec[i],
                                double(mc.mask[i])});
            bcwave::write_csv(out, {"tau", "p", "Q", "e", "q_rec", "mask"}, rows);
            man.diagnostics["trusted_lo"] = res.trusted_lo;
            man.diagnostics["trusted_hi"] = res.trusted_hi;
            for (const auto& [k, v] : res.diagnostics) man.diagnostics[k] = v;
        } else if (bench->parsed()) {
            man.command = "bench";
            man.config["name"] = bench_name;
            std::vector<bcwave::CriterionResult> results;
            auto one = [&](int k) { results.push_back(bcwave::run_criterion(k)); };
            if (bench_name == "all") {
                results = bcwave::run_all_criteria();
            } else if (bench_name.size() == 1 && bench_name[0] >= '1' && bench_name[0] <= '9') {
                one(bench_name[0] - '0');
            } else if (bench_name == "cross-validation") {
                one(1);
            } else if (bench_name == "controllability") {
                one(2);
            } else if (bench_name == "duality") {
                one(3);
            } else if (bench_name == "lattice") {
                one(4);
            } else if (bench_name == "eikonal") {
                one(5);
            } else if (bench_name == "spectral") {
                one(6);
            } else if (bench_name == "model-coefficients") {
                one(7);
            } else if (bench_name == "roundtrip-const" || bench_name == "roundtrip" ||
                       bench_name == "end-to-end") {
                one(8);
            } else if (bench_name == "firewall") {
                one(9);
            } else {
                std::cerr << "unknown bench name: " << bench_name << "\n";
                return 2;
            }
            bool all_pass = true;
            for (const auto& cr : results) {
                std::cout << (cr.pass ? "PASS " : "FAIL ") << cr.name << " metric="
                          << format_double(cr.metric) << " : " << cr.detail << "\n";
                man.diagnostics[cr.name] = cr.metric;
                all_pass = all_pass && cr.pass;
            }
            man.write(out);
            return all_pass ? 0 : 1;
        }
        man.output_paths.push_back(out);
        man.write(out);
    } catch (const bcwave::DomainError& e) {
        std::cerr << e.name << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
