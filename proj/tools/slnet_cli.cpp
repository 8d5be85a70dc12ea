// Command-line front end for Stuart-Landau network experiments.
//
// Subcommands: simulate, certify, spectrum, critical-values, hopf, scan.
// Experiments are driven by a sectioned key=value config file (see
// include/slnet/experiment.hpp for the schema); any key can be overridden
// on the command line with --set section.key=value.
//
// Exit codes: 0 success, 2 configuration/parameter error, 3 runtime error
// (divergence, I/O failure).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "slnet/certificates.hpp"
#include "slnet/dynamics.hpp"
#include "slnet/experiment.hpp"
#include "slnet/graph.hpp"
#include "slnet/hopf.hpp"
#include "slnet/metrics.hpp"
#include "slnet/scan.hpp"
#include "slnet/spectral.hpp"

namespace fs = std::filesystem;
using namespace slnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;  // overrides output.dir when nonempty
    std::vector<std::string> overrides;
    bool has_seed = false;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required = true) {
    auto* c = cmd->add_option("--config", opts.config_path, "experiment config file");
    if (config_required) c->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--set", opts.overrides, "override a config key: section.key=value")->take_all();
    cmd->add_option("--seed", opts.seed, "override initial.seed")->each([&opts](const std::string&) {
        opts.has_seed = true;
    });
}

ExperimentConfig load(const CommonOpts& opts, bool needs_scan = false) {
    KeyValueFile kv = KeyValueFile::parse_file(opts.config_path);
    for (const auto& ov : opts.overrides) kv.set(ov);
    if (opts.has_seed) kv.set("initial.seed=" + std::to_string(opts.seed));
    ExperimentConfig cfg = load_experiment(kv, needs_scan);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    std::cout << "writing " << p.string() << "\n";
    return out;
}

int cmd_simulate(const CommonOpts& opts) {
    const ExperimentConfig cfg = load(opts);
    const Trajectory traj = integrate(cfg.initial_state(), cfg.params(), cfg.t_end, cfg.scheme, cfg.sample_every);
    {
        auto out = open_output(cfg.out_dir, "trajectory.csv");
        write_trajectory_csv(traj, out, cfg.polar_channels);
    }
    const SyncReport rep = sync_report(traj);
    {
        auto out = open_output(cfg.out_dir, "sync_report.txt");
        write_sync_report(rep, out);
    }
    {
        auto out = open_output(cfg.out_dir, "sync_series.csv");
        write_sync_series_csv(traj, out);
    }
    bool zero_omega = true;
    for (double w : cfg.omega) zero_omega = zero_omega && w == 0.0;
    if (zero_omega) {
        auto out = open_output(cfg.out_dir, "energy.csv");
        write_energy_csv(energy_functional(traj), out);
    }
    write_sync_report(rep, std::cout);
    return kExitOk;
}

int cmd_certify(const CommonOpts& opts, bool validate) {
    const ExperimentConfig cfg = load(opts);
    const SystemParams params = cfg.params();
    const State z0 = cfg.initial_state();

    std::vector<Certificate> certs;
    certs.push_back(check_origin_unstable(params));
    if (params.mu > 0.0) {
        certs.push_back(check_antideath(z0, params));
        certs.push_back(check_sync_general(z0, params));
    } else {
        std::cout << "mu <= 0: amplitude-persistence and synchronization certificates not applicable\n";
    }
    certs.push_back(check_sync_degree(z0, params));

    auto out = open_output(cfg.out_dir, "certificates.txt");
    for (const auto& cert : certs) {
        write_certificate(cert, out);
        write_certificate(cert, std::cout);
    }

    if (validate) {
        const Trajectory traj = integrate(z0, params, cfg.t_end, cfg.scheme, cfg.sample_every);
        const SyncReport rep = sync_report(traj);
        std::cout << "validation run to t = " << cfg.t_end << ":\n";
        write_sync_report(rep, std::cout);
        auto vout = open_output(cfg.out_dir, "validation_sync_report.txt");
        write_sync_report(rep, vout);
    }
    return kExitOk;
}

int cmd_spectrum(const CommonOpts& opts) {
    const ExperimentConfig cfg = load(opts);
    const SpectralReport rep = compute_blocks_M(cfg.params());
    const BlockCirculantJacobian jac = build_jacobian_blocks(cfg.params());
    const double residual = verify_diagonalization(jac, rep);
    {
        auto out = open_output(cfg.out_dir, "spectral_report.csv");
        write_spectral_csv(rep, out);
    }
    write_spectral_csv(rep, std::cout);
    const HopfCriticalityTable table = classify_criticalities(rep.n, rep.s, rep.c);
    write_criticality_table(table, std::cout);
    std::cout << "diagonalization residual = " << residual << "\n";
    return kExitOk;
}

int cmd_critical_values(int n, int s, double c, const std::string& out_dir) {
    const HopfCriticalityTable table = classify_criticalities(n, s, c);
    write_criticality_table(table, std::cout);
    if (!out_dir.empty()) {
        auto out = open_output(out_dir, "critical_values.csv");
        write_markers_csv(table, out);
    }
    return kExitOk;
}

int cmd_hopf(double omega, bool finite_difference) {
    const PartialsTable partials = finite_difference ? partials_finite_difference(0.0, omega) : partials_analytic(0.0, omega);
    const HopfCoefficients coeffs = normal_form(omega, partials);
    write_hopf_coefficients(coeffs, std::cout);
    return kExitOk;
}

int cmd_scan(const CommonOpts& opts) {
    const ExperimentConfig cfg = load(opts, /*needs_scan=*/true);
    const ScanResult result = run_scan(*cfg.scan);
    {
        auto out = open_output(cfg.out_dir, "branch.csv");
        write_branch_csv(result.points, out);
    }
    if (result.markers) {
        auto out = open_output(cfg.out_dir, "markers.csv");
        write_markers_csv(*result.markers, out);
    }
    {
        auto out = open_output(cfg.out_dir, "branch_synchronous.dat");
        write_branch_columns(result.points, BranchPoint::Class::Synchronous, out);
    }
    {
        auto out = open_output(cfg.out_dir, "branch_other.dat");
        write_branch_columns(result.points, BranchPoint::Class::NonSynchronous, out);
    }
    try {
        const double onset = onset_estimate(result.points, cfg.scan->decay_threshold);
        std::cout << "onset estimate: mu = " << onset << "\n";
    } catch (const std::invalid_argument& e) {
        std::cout << "onset estimate unavailable: " << e.what() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stuart-Landau oscillator network toolkit"};
    app.require_subcommand(1);

    CommonOpts sim_opts, cert_opts, spectrum_opts, scan_opts;
    bool validate = false;
    int cv_n = 0, cv_s = 0;
    double cv_c = 0.0;
    std::string cv_out;
    double hopf_omega = 0.0;
    bool hopf_fd = false;

    auto* sim = app.add_subcommand("simulate", "integrate a trajectory and report synchronization diagnostics");
    add_common(sim, sim_opts);

    auto* cert = app.add_subcommand("certify", "evaluate the analytic certificates for a configuration");
    add_common(cert, cert_opts);
    cert->add_flag("--validate", validate, "also run the confirming simulation");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "block-circulant spectral report for a ring configuration");
    add_common(spectrum_cmd, spectrum_opts);

    auto* cv = app.add_subcommand("critical-values", "critical parameter values for ring(N, s) at coupling c");
    cv->add_option("N", cv_n, "number of nodes")->required();
    cv->add_option("s", cv_s, "coupling range")->required();
    cv->add_option("c", cv_c, "coupling strength")->required();
    cv->add_option("--out", cv_out, "also write critical_values.csv here");

    auto* hopf = app.add_subcommand("hopf", "normal-form coefficients of the synchronous bifurcation");
    hopf->add_option("omega", hopf_omega, "natural frequency (nonzero)")->required();
    hopf->add_flag("--finite-difference", hopf_fd, "use the finite-difference partials instead of the analytic table");

    auto* scan = app.add_subcommand("scan", "sweep mu and record branch amplitudes");
    add_common(scan, scan_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_opts);
        if (cert->parsed()) return cmd_certify(cert_opts, validate);
        if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum_opts);
        if (cv->parsed()) return cmd_critical_values(cv_n, cv_s, cv_c, cv_out);
        if (hopf->parsed()) return cmd_hopf(hopf_omega, hopf_fd);
        if (scan->parsed()) return cmd_scan(scan_opts);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
