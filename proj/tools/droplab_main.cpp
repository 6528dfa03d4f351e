// droplab: desk-scale laboratory for confined droplet energies.
//
// Subcommands: e0, partition, minimize-f, ansatz, sweep.
// Exit codes: 0 success, 2 config/usage error, 3 numerical failure.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "droplab/config.hpp"
#include "droplab/errors.hpp"
#include "droplab/liquid_drop.hpp"

namespace fs = std::filesystem;
using namespace droplab;

namespace {

std::string output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("DROPLAB_OUTDIR")) return env;
    return ".";
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / name;
    std::ofstream out(p);
    if (!out) throw config_error("cannot write output file: " + p.string());
    out << body;
    std::cout << "wrote " << p.string() << "\n";
}

std::string audit_header(const ConfigFile& cfg, const std::string& command) {
    std::ostringstream os;
    os << "# droplab " << command << "\n";
    std::istringstream is(cfg.canonical());
    std::string line;
    while (std::getline(is, line)) os << "# " << line << "\n";
    return os.str();
}

int cmd_e0(double mass, double mass_min, double mass_max, int steps) {
    std::vector<double> ms;
    if (mass > 0.0) {
        ms.push_back(mass);
    } else {
        if (!(mass_min > 0.0) || !(mass_max > mass_min) || steps < 2)
            throw config_error("e0: give --mass M > 0, or --mass-min/--mass-max/--steps");
        for (int i = 0; i < steps; ++i)
            ms.push_back(mass_min + (mass_max - mass_min) * i / (steps - 1));
    }
    const double threshold = concavity_threshold();
    std::printf("mass,e0,e0_prime,e0_second,regime\n");
    for (double m : ms) {
        const double d2 = e0_ball_second_derivative(m);
        const char* regime = std::abs(m - threshold) < 1e-6 * threshold ? "inflection"
                             : d2 < 0.0                                 ? "concave"
                                                                        : "convex";
        std::printf("%.17g,%.17g,%.17g,%.17g,%s\n", m, e0_ball(m), e0_ball_prime(m), d2, regime);
    }
    std::printf("# concavity threshold 2*pi = %.17g\n", threshold);
    return 0;
}

int cmd_partition(double M, int n_max, double cap) {
    const MassPartition p = optimal_partition(M, n_max, cap);
    std::printf("n = %zu\n", p.masses.size());
    std::printf("masses =");
    for (double m : p.masses) std::printf(" %.12g", m);
    std::printf("\nobjective = %.17g\n", p.objective);
    std::printf("kkt_residual = %.3e\n", p.kkt_residual);
    std::printf("single_droplet_objective = %.17g\n", e0_ball(M));
    return 0;
}

int cmd_minimize_f(const std::string& config_path, const std::string& outdir_flag) {
    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    const MinimizeRequest req = minimize_request_from_config(cfg);
    const MinimizeResult res =
        minimize_interaction(req.masses, req.profile, req.restarts, req.seed);
    const VirialReport vir = virial_check(res.config, req.profile);

    std::ostringstream os;
    os << audit_header(cfg, "minimize-f");
    os << "energy = " << res.energy << "\n";
    os << "gradient_norm = " << res.gradient_norm << "\n";
    os << "virial_residual = " << vir.residual << "\n";
    os << "distinct_minima =";
    for (double e : res.distinct_minima) os << " " << e;
    os << "\npositions:\n";
    for (std::size_t i = 0; i < res.config.masses.size(); ++i) {
        const Vec3& x = res.config.positions[i];
        char buf[128];
        std::snprintf(buf, sizeof buf, "  m = %-12.6g x = (%.12g, %.12g, %.12g)\n",
                      res.config.masses[i], x.x, x.y, x.z);
        os << buf;
    }
    std::cout << os.str();
    if (!outdir_flag.empty() || std::getenv("DROPLAB_OUTDIR"))
        write_file(output_dir(outdir_flag), "minimize_f.txt", os.str());
    return 0;
}

int cmd_ansatz(const std::string& config_path, const std::string& outdir_flag) {
    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    const AnsatzSpec spec = ansatz_spec_from_config(cfg);
    const GreenEvaluator green;
    const EnergyBreakdown b = evaluate_ansatz(spec, green);
    const double residual = expansion_residual(spec, b);

    std::ostringstream os;
    os << audit_header(cfg, "ansatz");
    os << EnergyBreakdown::csv_header() << "\n" << b.csv_row(residual) << "\n";
    std::cout << os.str();
    if (!outdir_flag.empty() || std::getenv("DROPLAB_OUTDIR"))
        write_file(output_dir(outdir_flag), "ansatz.csv", os.str());
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& outdir_flag) {
    const ConfigFile cfg = ConfigFile::parse_file(config_path);
    const SweepPlan plan = sweep_plan_from_config(cfg);
    const GreenEvaluator green;
    const SweepResult result = run_sweep(plan, green);
    if (result.rows.empty()) throw numeric_error("sweep: every point was skipped");

    std::ostringstream os;
    os << audit_header(cfg, "sweep") << sweep_csv(plan, result);

    std::ostringstream fits;
    if (result.rows.size() >= 3) {
        std::vector<double> etas, excess, deltas;
        for (const SweepRow& r : result.rows) {
            etas.push_back(r.eta);
            excess.push_back(std::abs(r.energy_excess));
            deltas.push_back(r.delta_star);
        }
        fits << fit_summary("energy_excess", fit_exponent_with_drop(etas, excess));
        fits << fit_summary("delta_star", fit_exponent_with_drop(etas, deltas));
    } else {
        fits << "too few points for a fit\n";
    }
    std::cout << fits.str();

    const std::string tag = plan.hash();
    write_file(output_dir(outdir_flag), "sweep_" + tag + ".csv", os.str());
    write_file(output_dir(outdir_flag), "sweep_" + tag + ".fit.txt", fits.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"droplab: liquid-drop energies, droplet interactions, and scaling sweeps"};
    app.require_subcommand(1);

    double mass = 0.0, mass_min = 0.0, mass_max = 0.0;
    int steps = 0;
    auto* e0 = app.add_subcommand("e0", "ball-model liquid-drop energy and derivatives");
    e0->add_option("--mass", mass, "single mass");
    e0->add_option("--mass-min", mass_min, "range start");
    e0->add_option("--mass-max", mass_max, "range end");
    e0->add_option("--steps", steps, "range steps");

    double total = 0.0, cap = 0.0;
    int n_max = 8;
    auto* part = app.add_subcommand("partition", "optimal mass partition");
    part->add_option("--total", total, "total mass M")->required();
    part->add_option("--nmax", n_max, "maximum droplet count");
    part->add_option("--cap", cap, "admissible mass cap (default 4*pi)");

    std::string config_path, outdir;
    auto* minf = app.add_subcommand("minimize-f", "minimize the droplet interaction energy");
    minf->add_option("--config", config_path, "config file")->required();
    minf->add_option("--out", outdir, "output directory");
    auto* ans = app.add_subcommand("ansatz", "evaluate the spherical-droplet ansatz energy");
    ans->add_option("--config", config_path, "config file")->required();
    ans->add_option("--out", outdir, "output directory");
    auto* swp = app.add_subcommand("sweep", "eta sweep with exponent fits");
    swp->add_option("--config", config_path, "config file")->required();
    swp->add_option("--out", outdir, "output directory");

    try {
        app.parse(argc, argv);
        if (e0->parsed()) return cmd_e0(mass, mass_min, mass_max, steps);
        if (part->parsed())
            return cmd_partition(total, n_max, cap > 0.0 ? cap : 4.0 * 3.14159265358979323846);
        if (minf->parsed()) return cmd_minimize_f(config_path, outdir);
        if (ans->parsed()) return cmd_ansatz(config_path, outdir);
        if (swp->parsed()) return cmd_sweep(config_path, outdir);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
