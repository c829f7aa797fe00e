#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "apc/field_io.hpp"
#include "apc/numeric.hpp"
#include "apc/ode.hpp"
#include "apc/scenario.hpp"
#include "apc/solver.hpp"
#include "apc/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw apc::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

apc::ScenarioConfig load_config(const std::string& source, const std::vector<std::string>& sets,
                                std::vector<std::string>* warnings) {
    if (apc::is_builtin_scenario(source)) {
        return apc::builtin_scenario(source, sets, warnings);
    }
    return apc::parse_config(slurp(source), sets, warnings);
}

std::string resolve_out_dir(const apc::ScenarioConfig& cfg, const std::string& flag,
                            const std::string& name) {
    if (!flag.empty()) return flag;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    const char* root = std::getenv("APC_OUT_DIR");
    return std::string(root ? root : "out") + "/" + name;
}

std::string time_label(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
}

// The reproducibility echo: printed, and stored next to the outputs.
std::uint64_t emit_config(const apc::ScenarioConfig& cfg, const std::string& out_dir) {
    const std::string echo = apc::echo_config(cfg);
    std::cout << "# effective configuration\n" << echo << std::flush;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/config.cfg");
    out << echo;
    return apc::fnv1a64(echo);
}

struct RunArtifacts {
    double final_mass = 0;
    double outflow = 0;
    double peak_exit_panic = 0;
};

RunArtifacts execute_run(const apc::ScenarioConfig& cfg, const std::string& out_dir,
                         std::uint64_t params_hash, bool quiet = false) {
    const apc::RunResult res = apc::run_scenario(cfg);
    apc::write_timeseries(res.series, out_dir + "/timeseries.csv");
    for (const apc::Snapshot& snap : res.snapshots) {
        const std::string label = time_label(snap.requested_time);
        apc::write_snapshot(snap.field, res.grid, snap.requested_time, out_dir, label,
                            params_hash);
        if (cfg.heatmaps) {
            for (int s = 0; s < 5; ++s) {
                apc::render_heatmap(snap.field, s, res.grid,
                                    out_dir + "/heat_" + label + "_rho" + std::to_string(s + 1) +
                                        ".pgm");
            }
        }
    }

    RunArtifacts art;
    art.final_mass = res.ledger.interior_mass;
    art.outflow = res.ledger.exit_outflow_cum();
    art.peak_exit_panic = apc::exit_region_peak(res.final_field, res.grid, apc::kPanic);
    if (!quiet) {
        const double residual = res.ledger.closure_residual(res.stats.initial_mass);
        std::cout << "steps = " << res.stats.steps << ", dt = " << apc::format_shortest(res.stats.dt)
                  << '\n';
        std::cout << "final U = " << apc::format_full(art.final_mass)
                  << ", exit outflow = " << apc::format_full(art.outflow)
                  << ", mortality = " << apc::format_full(res.ledger.mortality_cum()) << '\n';
        std::cout << "ledger residual = " << apc::format_full(residual)
                  << ", min density = " << apc::format_full(res.stats.min_density)
                  << ", max rho_tilde = " << apc::format_full(res.stats.max_rho_tilde) << '\n';
        if (res.stats.max_rho_tilde > 1.0) {
            std::cerr << "warning: total density peaked at "
                      << apc::format_shortest(res.stats.max_rho_tilde)
                      << " (> 1, the jam value); the linear speed closure was clamped\n";
        }
        std::cout << "velocity clamp activations = " << res.stats.clamp_activations
                  << ", undershoot clips = " << res.stats.clip_count
                  << ", wall-facing direction cells = " << res.stats.wall_facing_cells << '\n';
        std::cout << "outputs in " << out_dir << '\n';
    }
    return art;
}

int cmd_run(const std::string& source, const std::vector<std::string>& sets,
            const std::string& out_flag) {
    std::vector<std::string> warnings;
    const apc::ScenarioConfig cfg = load_config(source, sets, &warnings);
    print_warnings(warnings);
    const std::string out_dir = resolve_out_dir(cfg, out_flag, source);
    const std::uint64_t hash = emit_config(cfg, out_dir);
    execute_run(cfg, out_dir, hash);
    return kExitOk;
}

int cmd_ode(const std::string& source, const std::vector<std::string>& sets,
            const std::string& out_flag, double dt, const std::string& method,
            int store_every, const std::vector<double>& initial) {
    std::vector<std::string> warnings;
    apc::ScenarioConfig cfg =
        source.empty() ? apc::builtin_scenario("scenario1", sets, &warnings)
                       : load_config(source, sets, &warnings);
    print_warnings(warnings);
    const std::string out_dir = resolve_out_dir(cfg, out_flag, "ode");
    emit_config(cfg, out_dir);

    apc::OdeRun run;
    run.t1 = cfg.t_end;
    run.dt = dt;
    if (method == "euler") run.method = apc::OdeMethod::Euler;
    else if (method != "rk4") throw apc::ConfigError("--method must be rk4 or euler");
    run.store_every = store_every;
    if (!initial.empty()) {
        if (initial.size() != 6) throw apc::ConfigError("--initial needs 6 values");
        for (int i = 0; i < 6; ++i) run.initial[i] = initial[i];
    }

    apc::OdeTrajectory traj;
    if (cfg.t_end == 0.0) {
        traj.times.push_back(0.0);
        traj.states.push_back(run.initial);
    } else {
        traj = apc::integrate(run, cfg.schedule, cfg.behavior);
    }
    const std::string path = out_dir + "/trajectory.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "'");
    apc::write_trajectory_csv(traj, out);

    std::cout << "stored states = " << traj.times.size() << '\n';
    std::cout << "final state =";
    for (double v : traj.states.back()) std::cout << ' ' << apc::format_full(v);
    std::cout << '\n';
    std::cout << "max conservation drift = " << apc::format_full(apc::conservation_report(traj))
              << '\n';
    std::cout << "trajectory in " << path << '\n';
    return kExitOk;
}

int cmd_validate(double cfl_safety, bool flip_h, std::uint64_t seed) {
    apc::ValidateOptions opt;
    opt.cfl_safety = cfl_safety;
    opt.flip_h_sign = flip_h;
    opt.seed = seed;
    std::cout << "# effective configuration\n"
              << "validate.cfl_safety = " << apc::format_shortest(opt.cfl_safety) << '\n'
              << "validate.flip_h = " << (opt.flip_h_sign ? "true" : "false") << '\n'
              << "validate.seed = " << opt.seed << '\n';
    const auto results = apc::run_validation(opt);
    bool all_pass = true;
    for (const apc::CheckResult& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "validation passed" : "validation FAILED") << '\n';
    return all_pass ? kExitOk : kExitValidation;
}

struct SweepPoint {
    std::vector<std::string> assignments; // section.key=value per swept key
    RunArtifacts art;
    bool ok = false;
    std::string error;
};

int cmd_sweep(const std::string& source, const std::vector<std::string>& sets,
              const std::vector<std::string>& sweeps, const std::string& out_flag, int jobs) {
    // Expand "section.key=v1,v2,..." axes into the cartesian product.
    std::vector<std::string> keys;
    std::vector<std::vector<std::string>> values;
    for (const std::string& sw : sweeps) {
        const auto eq = sw.find('=');
        if (eq == std::string::npos) {
            throw apc::ConfigError("--sweep expects section.key=v1,v2,..., got '" + sw + "'");
        }
        keys.push_back(sw.substr(0, eq));
        std::vector<std::string> vals;
        std::stringstream ss(sw.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) vals.push_back(item);
        }
        if (vals.empty()) {
            throw apc::ConfigError("--sweep axis '" + keys.back() + "' has no values");
        }
        values.push_back(std::move(vals));
    }
    if (keys.empty()) throw apc::ConfigError("sweep needs at least one --sweep axis");

    std::vector<SweepPoint> points;
    std::vector<std::size_t> digit(keys.size(), 0);
    for (;;) {
        SweepPoint p;
        for (std::size_t a = 0; a < keys.size(); ++a) {
            p.assignments.push_back(keys[a] + "=" + values[a][digit[a]]);
        }
        points.push_back(std::move(p));
        std::size_t a = 0;
        while (a < keys.size() && ++digit[a] == values[a].size()) {
            digit[a] = 0;
            ++a;
        }
        if (a == keys.size()) break;
    }

    // Validate the base configuration once, up front.
    std::vector<std::string> warnings;
    const apc::ScenarioConfig base = load_config(source, sets, &warnings);
    print_warnings(warnings);
    const std::string out_root = resolve_out_dir(base, out_flag, source + "_sweep");
    emit_config(base, out_root);
    std::cout << "sweep points = " << points.size() << '\n';

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));

    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= points.size()) return;
            SweepPoint& p = points[idx];
            char tag[32];
            std::snprintf(tag, sizeof(tag), "point_%03zu", idx);
            const std::string dir = out_root + "/" + tag;
            try {
                std::vector<std::string> all_sets = sets;
                all_sets.insert(all_sets.end(), p.assignments.begin(), p.assignments.end());
                const apc::ScenarioConfig cfg = load_config(source, all_sets, nullptr);
                std::filesystem::create_directories(dir);
                std::ofstream echo(dir + "/config.cfg");
                const std::string text = apc::echo_config(cfg);
                echo << text;
                p.art = execute_run(cfg, dir, apc::fnv1a64(text), /*quiet=*/true);
                p.ok = true;
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            std::lock_guard<std::mutex> lock(log_mutex);
            std::cout << tag;
            for (const std::string& a : p.assignments) std::cout << ' ' << a;
            if (p.ok) {
                std::cout << " -> final U = " << apc::format_full(p.art.final_mass)
                          << ", outflow = " << apc::format_full(p.art.outflow)
                          << ", peak exit panic = " << apc::format_full(p.art.peak_exit_panic);
            } else {
                std::cout << " -> FAILED: " << p.error;
            }
            std::cout << '\n';
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();

    const std::string summary_path = out_root + "/summary.csv";
    std::ofstream summary(summary_path);
    summary << "point";
    for (const std::string& k : keys) summary << ',' << k;
    summary << ",final_U,outflow_cum,peak_exit_panic,status\n";
    bool any_failed = false;
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const SweepPoint& p = points[idx];
        summary << idx;
        for (const std::string& a : p.assignments) summary << ',' << a.substr(a.find('=') + 1);
        if (p.ok) {
            summary << ',' << apc::format_full(p.art.final_mass) << ','
                    << apc::format_full(p.art.outflow) << ','
                    << apc::format_full(p.art.peak_exit_panic) << ",ok\n";
        } else {
            summary << ",,,,failed\n";
            any_failed = true;
        }
    }
    std::cout << "summary in " << summary_path << '\n';
    return any_failed ? kExitSolver : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume simulator for alert/panic/control crowd dynamics"};
    app.require_subcommand(1);

    std::string source, out_dir;
    std::vector<std::string> sets;
    std::string grid_flag, snapshots_flag;

    auto add_common = [&](CLI::App* cmd, bool with_source) {
        if (with_source) {
            cmd->add_option("config", source,
                            "config file path or builtin scenario (scenario1|scenario2|scenario3)")
                ->required();
        }
        cmd->add_option("--set", sets, "override: section.key=value (repeatable)");
        cmd->add_option("--out", out_dir, "output directory (default: $APC_OUT_DIR or ./out)");
        cmd->add_option("--grid", grid_flag, "shorthand for geometry.nx,ny, e.g. 100,50");
        cmd->add_option("--snapshots", snapshots_flag, "shorthand for run.snapshots, e.g. 50,100");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario and write fields/series/ledger");
    add_common(run, true);

    CLI::App* ode = app.add_subcommand("ode", "integrate the temporal model only");
    ode->add_option("config", source, "optional config for behavior/schedule/run sections");
    ode->add_option("--set", sets, "override: section.key=value (repeatable)");
    ode->add_option("--out", out_dir, "output directory");
    double ode_dt = 0.01;
    std::string ode_method = "rk4";
    int store_every = 1;
    std::vector<double> ode_initial;
    double ode_t_end = -1.0;
    ode->add_option("--dt", ode_dt, "step size (default 0.01)");
    ode->add_option("--method", ode_method, "rk4|euler");
    ode->add_option("--store-every", store_every, "keep every k-th step");
    ode->add_option("--initial", ode_initial, "six comma-separated densities")->delimiter(',');
    ode->add_option("--t-end", ode_t_end, "integration end (default run.t_end)");

    CLI::App* validate = app.add_subcommand("validate", "run the numerical invariant suite");
    double cfl_safety = 0.5;
    bool flip_h = false;
    std::uint64_t seed = 0x5eed0a9c;
    validate->add_option("--cfl-safety", cfl_safety, "CFL safety factor for the solver check");
    validate->add_flag("--flip-h", flip_h,
                       "inject a sign error into the imitation balance (expected to fail)");
    validate->add_option("--seed", seed, "PRNG seed for the randomized checks");

    CLI::App* sweep = app.add_subcommand("sweep", "cartesian parameter sweep");
    add_common(sweep, true);
    std::vector<std::string> sweeps;
    int jobs = 0;
    sweep->add_option("--sweep", sweeps, "axis: section.key=v1,v2,... (repeatable)");
    sweep->add_option("--jobs", jobs, "parallel sweep points (default: hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!grid_flag.empty()) {
            const auto comma = grid_flag.find(',');
            if (comma == std::string::npos) {
                throw apc::ConfigError("--grid expects NX,NY");
            }
            sets.push_back("geometry.nx=" + grid_flag.substr(0, comma));
            sets.push_back("geometry.ny=" + grid_flag.substr(comma + 1));
        }
        if (!snapshots_flag.empty()) sets.push_back("run.snapshots=" + snapshots_flag);
        if (ode_t_end >= 0.0) sets.push_back("run.t_end=" + apc::format_shortest(ode_t_end));

        if (run->parsed()) return cmd_run(source, sets, out_dir);
        if (ode->parsed()) {
            return cmd_ode(source, sets, out_dir, ode_dt, ode_method, store_every, ode_initial);
        }
        if (validate->parsed()) return cmd_validate(cfl_safety, flip_h, seed);
        if (sweep->parsed()) return cmd_sweep(source, sets, sweeps, out_dir, jobs);
    } catch (const apc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const apc::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}
