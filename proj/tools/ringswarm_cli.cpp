// Command-line driver: simulate | spectrum | manifold | sweep.
#include "ringswarm/core.hpp"
#include "ringswarm/integrate.hpp"
#include "ringswarm/io.hpp"
#include "ringswarm/manifold.hpp"
#include "ringswarm/rhs.hpp"
#include "ringswarm/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#ifdef RINGSWARM_HAVE_OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace ringswarm;

namespace {

constexpr const char* kVersion = "ringswarm 1.0.0";

int log_level() {
    const char* env = std::getenv("RINGSWARM_LOG");
    if (!env) return 1;  // warn
    std::string v(env);
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
}

void log_info(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[info] " << msg << '\n';
}

struct GlobalOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 0;
    std::string format = "csv";
};

// Fig-4 style preset: three particles whose center of mass traces a
// nontrivial closed-looking curve.
Scenario fig4_preset() {
    Scenario sc;
    sc.system = SystemKind::swarm;
    sc.n = 3;
    SwarmState st(3);
    st.set_pos(0, {2.04, -1.36});
    st.set_pos(1, {2.49, 0.05});
    st.set_pos(2, {1.0, -0.02});
    st.set_vel(0, {0.34, 1.16});
    st.set_vel(1, {0.77, -0.51});
    st.set_vel(2, {-0.76, -0.34});
    sc.initial = st;
    sc.t_end = 50;
    return sc;
}

struct SimResult {
    Trajectory traj;
    std::vector<std::string> names;
    bool ok = true;
};

SimResult run_scenario(const Scenario& sc, int samples = 2001) {
    StepControl ctrl;
    ctrl.abs_tol = sc.abs_tol;
    ctrl.rel_tol = sc.rel_tol;
    ctrl.dt_init = sc.dt_init;

    RhsId id;
    VectorXd y0;
    SimResult res;
    switch (sc.system) {
        case SystemKind::swarm: {
            id.tag = RhsId::Tag::swarm;
            id.n = sc.n;
            SwarmState st = sc.initial ? *sc.initial : make_ring_state(*sc.ring, 0.0);
            y0 = st.flat();
            res.names = state_names_swarm(sc.n);
            break;
        }
        case SystemKind::decoupled:
            id.tag = RhsId::Tag::decoupled4d;
            y0 = *sc.initial_lowdim;
            res.names = state_names_lowdim(sc.system);
            break;
        case SystemKind::rose_eps:
            id.tag = RhsId::Tag::rose_eps;
            id.epsilon = sc.rose_epsilon;
            y0 = *sc.initial_lowdim;
            res.names = state_names_lowdim(sc.system);
            break;
        case SystemKind::rose_singular:
            id.tag = RhsId::Tag::rose_singular;
            y0 = *sc.initial_lowdim;
            res.names = state_names_lowdim(sc.system);
            break;
        case SystemKind::taylor_example:
            id.tag = RhsId::Tag::taylor3d;
            y0 = *sc.initial_lowdim;
            res.names = state_names_lowdim(sc.system);
            break;
    }
    res.traj = integrate_span(make_rhs(id), y0, 0.0, sc.t_end, samples, ctrl);
    res.ok = res.traj.complete;
    if (!sc.monitors.empty()) {
        TrajectorySystem ts = sc.system == SystemKind::swarm ? TrajectorySystem::swarm
                                                             : TrajectorySystem::decoupled;
        VectorXd theta0;
        if (sc.ring) theta0 = sc.ring->angles;
        attach_monitors(res.traj, sc.monitors, ts, theta0);
    }
    return res;
}

int cmd_simulate(const GlobalOpts& g, const std::string& scenario_path, bool preset_fig4) {
    Scenario sc;
    try {
        sc = preset_fig4 ? fig4_preset() : load_scenario(scenario_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    if (g.seed_set) sc.seed = g.seed;
    auto t0 = std::chrono::steady_clock::now();
    SimResult res;
    try {
        res = run_scenario(sc);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    fs::create_directories(g.out_dir);
    std::string base = (fs::path(g.out_dir) / "trajectory").string();
    std::vector<std::string> outputs;
    if (g.format == "csv" || g.format == "json") {
        write_csv_file(base + ".csv", res.traj, res.names);
        outputs.push_back(base + ".csv");
    }
    if (g.format == "jsonl") {
        write_jsonl_file(base + ".jsonl", res.traj);
        outputs.push_back(base + ".jsonl");
    }
    RunManifest man;
    man.scenario_hash = scenario_hash(sc);
    man.tool_version = kVersion;
    man.seed = sc.seed;
    man.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man.outputs = outputs;
    std::ofstream men((fs::path(g.out_dir) / "manifest.json").string());
    men << manifest_to_json(man).dump(2) << '\n';
    if (!res.ok) {
        std::cerr << "integration failed: " << res.traj.failure_reason
                  << " (partial output kept)\n";
        return 2;
    }
    log_info("wrote " + base + "." + (g.format == "jsonl" ? "jsonl" : "csv"));
    return 0;
}

int cmd_spectrum(const GlobalOpts& g, const std::string& angles_file, int degenerate_n,
                 const std::string& omega_sweep) {
    fs::create_directories(g.out_dir);
    if (!omega_sweep.empty()) {
        // --omega lo:hi:step -> CSV of minors and gap
        double lo, hi, step;
        if (std::sscanf(omega_sweep.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0) {
            std::cerr << "error: --omega expects lo:hi:step\n";
            return 1;
        }
        std::ofstream out((fs::path(g.out_dir) / "omega_sweep.csv").string());
        out << "omega,gap,D1,D2,D3,D4,D5,D6\n";
        for (double w = lo; w <= hi + 1e-12; w += step) {
            auto minors = hurwitz_minors(w);
            auto roots = poly_roots(f_omega(w));
            out << w << ',' << spectral_gap(roots);
            for (double m : minors) out << ',' << m;
            out << '\n';
        }
        return 0;
    }
    SpectralReport rep;
    if (degenerate_n > 0) {
        rep = analyze_degenerate(degenerate_n);
    } else {
        std::ifstream in(angles_file);
        if (!in) {
            std::cerr << "error: cannot open " << angles_file << '\n';
            return 1;
        }
        std::vector<double> vals;
        try {
            json doc;
            in >> doc;
            if (!doc.is_array()) throw std::invalid_argument("angles file must be a JSON array");
            for (const auto& x : doc) vals.push_back(x.get<double>());
        } catch (const std::exception& e) {
            std::cerr << "error: cannot parse " << angles_file << ": " << e.what() << '\n';
            return 1;
        }
        if (vals.size() < 3) {
            std::cerr << "error: need at least 3 angles\n";
            return 1;
        }
        VectorXd theta0 = Eigen::Map<VectorXd>(vals.data(), vals.size());
        RingSpec spec;
        spec.n = static_cast<int>(vals.size());
        spec.angles = theta0;
        if (spec.constraint_residual() > 1e-9) {
            std::cerr << "error: angles violate the zero-sum constraint (residual "
                      << spec.constraint_residual() << ")\n";
            return 1;
        }
        if (is_degenerate(theta0)) {
            std::cerr << "error: degenerate angles (all particles on one line); rerun with "
                         "--degenerate "
                      << spec.n << '\n';
            return 3;
        }
        rep = analyze(theta0);
    }
    std::ofstream out((fs::path(g.out_dir) / "spectrum.json").string());
    out << spectral_report_to_json(rep).dump(2) << '\n';
    std::cout << spectral_report_to_json(rep).dump(2) << '\n';
    return 0;
}

int cmd_manifold_anchor(const GlobalOpts& g, int n, int samples, bool zero_energy) {
    if (n < 4 || n % 2) {
        std::cerr << "error: anchor needs even n >= 4\n";
        return 1;
    }
    BasisPack basis = build_basis(n);
    std::mt19937_64 rng(g.seed);
    std::normal_distribution<double> gauss;
    fs::create_directories(g.out_dir);
    std::ofstream out((fs::path(g.out_dir) / "anchors.csv").string());
    out << "sample,E,residual\n";
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
        VectorXd z(n - 1);
        for (int i = 0; i < n - 1; ++i) z[i] = 0.05 * gauss(rng);
        ZVector Z(n, z);
        try {
            if (zero_energy) Z = project_zero_energy(Z, basis);
            double E = energy(Z, basis).E;
            VectorXd rhs = reduced_rhs(reduced_coords(anchor_QZ(Z, basis)), basis);
            out << s << ',' << E << ',' << rhs.norm() << '\n';
            if (zero_energy) worst = std::max(worst, rhs.norm());
        } catch (const std::domain_error& e) {
            std::cerr << "sample " << s << " outside domain: " << e.what() << '\n';
            --s;  // resample
        }
    }
    std::cout << "max residual " << worst << '\n';
    return 0;
}

int cmd_manifold_psi(const GlobalOpts& g, int grid) {
    AnchoredSystem sys = taylor_anchored_system();
    fs::create_directories(g.out_dir);
    std::ofstream out((fs::path(g.out_dir) / "psi.csv").string());
    out << "x,y,psi,analytic,err\n";
    double max_err = 0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double x = -1.0 + 2.0 * (i + 0.5) / grid;
            double y = -1.0 + 2.0 * (j + 0.5) / grid;
            VectorXd yc(2);
            yc << x, y;
            double psi = anchored_psi(sys, yc)[0];
            double ana = taylor_psi_analytic(x, y);
            max_err = std::max(max_err, std::abs(psi - ana));
            out << x << ',' << y << ',' << psi << ',' << ana << ',' << psi - ana << '\n';
        }
    std::cout << "max |psi - analytic| = " << max_err << '\n';
    return max_err <= 1e-10 ? 0 : 2;
}

int cmd_manifold_monitors(const GlobalOpts& /*g*/, const std::string& /*in_csv*/,
                          const std::string& /*channels*/) {
    // Re-deriving states from an arbitrary CSV needs the originating scenario;
    // supported path: rerun simulate with --monitors. Kept as explicit guidance.
    std::cerr << "monitors: rerun `simulate` with \"monitors\" listed in the scenario to attach "
                 "channels; standalone CSV ingestion is not supported\n";
    return 1;
}

int cmd_sweep(const GlobalOpts& g, const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot open " << config_path << '\n';
        return 1;
    }
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        std::cerr << "error: sweep config parse: " << e.what() << '\n';
        return 1;
    }
    fs::create_directories(g.out_dir);
    std::ofstream out((fs::path(g.out_dir) / "sweep.csv").string());
    out << "cell,delta,n,terminal_ring_dist,sup_ring_dist,E_decay_exponent,failure\n";
    if (!cfg.contains("cells") || cfg["cells"].empty()) return 0;  // header-only CSV

    json cells = cfg["cells"];
    struct Row {
        std::string text;
    };
    std::vector<Row> rows(cells.size());
    std::uint64_t seed = cfg.value("seed", g.seed);
    bool saved_parallel = g_parallel_monitors;
    g_parallel_monitors = false;  // cells themselves run in parallel

#ifdef RINGSWARM_HAVE_OPENMP
    if (g.jobs > 0) omp_set_num_threads(g.jobs);
#pragma omp parallel for schedule(dynamic)
#endif
    for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
        const json& cell = cells[ci];
        std::ostringstream row;
        try {
            int n = cell.value("n", 4);
            double delta = cell.value("delta", 1e-3);
            double t_end = cell.value("t_end", 50.0);
            std::mt19937_64 rng(seed + ci);
            std::normal_distribution<double> gauss;
            VectorXd raw(n);
            for (int k = 0; k < n; ++k) raw[k] = 2 * M_PI * k / n + 0.1 * gauss(rng);
            RingSpec spec;
            spec.n = n;
            spec.angles = project_ring_angles(raw);
            spec.spin = 1;
            SwarmState st = make_ring_state(spec, 0.0);
            for (int i = 0; i < 2 * n; ++i) {
                st.positions[i] += delta * gauss(rng);
                st.velocities[i] += delta * gauss(rng);
            }
            Scenario sc;
            sc.system = SystemKind::swarm;
            sc.n = n;
            sc.initial = st;
            sc.t_end = t_end;
            sc.monitors = {"ring_dist"};
            SimResult res = run_scenario(sc, 201);
            const auto& rd = res.traj.monitors.at("ring_dist");
            double sup = *std::max_element(rd.begin(), rd.end());
            row << ci << ',' << delta << ',' << n << ',' << rd.back() << ',' << sup << ",,"
                << (res.ok ? "" : res.traj.failure_reason);
        } catch (const std::exception& e) {
            row << ci << ",,,,,," << e.what();
        }
        rows[ci].text = row.str();
    }
    g_parallel_monitors = saved_parallel;
    for (const auto& r : rows) out << r.text << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{kVersion};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--out", g.out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--jobs", g.jobs, "Parallel jobs for sweeps");
    app.add_option("--format", g.format, "Output format: csv, jsonl, json")
        ->check(CLI::IsMember({"csv", "jsonl", "json"}));

    auto* sim = app.add_subcommand("simulate", "Run a scenario file");
    std::string scenario_path;
    bool preset_fig4 = false;
    sim->add_option("scenario", scenario_path, "Scenario JSON file");
    sim->add_flag("--fig4", preset_fig4, "Use the built-in three-particle preset");

    auto* spec = app.add_subcommand("spectrum", "Jacobian spectrum report");
    std::string angles_file, omega_sweep;
    int degenerate_n = 0;
    spec->add_option("angles", angles_file, "Whitespace-separated ring angles file");
    spec->add_option("--degenerate", degenerate_n, "Analyze the degenerate configuration of size n");
    spec->add_option("--omega", omega_sweep, "Sweep omega lo:hi:step");

    auto* man = app.add_subcommand("manifold", "Center-manifold tools");
    man->require_subcommand(1);
    auto* anchor = man->add_subcommand("anchor", "Anchor points and residuals");
    int anchor_n = 6, anchor_samples = 50;
    bool zero_energy = false;
    anchor->add_option("--n", anchor_n, "Particle count (even)");
    anchor->add_option("--samples", anchor_samples, "Sample count");
    anchor->add_flag("--zero-energy", zero_energy, "Project samples onto the zero-energy set");
    auto* psi = man->add_subcommand("psi", "Nullcline solve on the 3d example");
    int grid = 50;
    psi->add_option("--grid", grid, "Grid resolution per axis");
    auto* mon = man->add_subcommand("monitors", "Channel extraction");
    std::string mon_in, mon_channels;
    mon->add_option("--in", mon_in, "Trajectory CSV");
    mon->add_option("--channels", mon_channels, "Comma-separated channel list");

    auto* sweep = app.add_subcommand("sweep", "Batch parameter sweep");
    std::string sweep_config;
    sweep->add_option("config", sweep_config, "Sweep config JSON")->required();

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    try {
        if (*sim) return cmd_simulate(g, scenario_path, preset_fig4);
        if (*spec) return cmd_spectrum(g, angles_file, degenerate_n, omega_sweep);
        if (*man) {
            if (*anchor) return cmd_manifold_anchor(g, anchor_n, anchor_samples, zero_energy);
            if (*psi) return cmd_manifold_psi(g, grid);
            if (*mon) return cmd_manifold_monitors(g, mon_in, mon_channels);
        }
        if (*sweep) return cmd_sweep(g, sweep_config);
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
