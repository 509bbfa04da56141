// lsw: command-line front end for the LSW return-radius / recrystallization
// library. Every command writes a CSV table (or a JSON document with the same
// rows plus a summary); `simulate` writes snapshot, series and report files.
//
// Exit codes: 0 success, 1 other failure, 2 domain error, 3 convergence error.

#include "lsw/lsw.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace
{

using nlohmann::ordered_json;

struct GridOptions {
    std::optional<double> min;
    std::optional<double> max;
    std::size_t count = 0;
    bool log = false;
};

struct CommonOptions {
    std::string regime;
    std::string format = "csv";
    std::string out = "-";
    std::uint64_t seed = 0;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    ordered_json summary = ordered_json::object();
};

std::string g_invocation;

void add_common(CLI::App* cmd, CommonOptions& common)
{
    cmd->add_option("--regime", common.regime, "Kinetic regime: dl (diffusion limited) or al (attachment limited)")
        ->required();
    cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", common.out, "Output file ('-' for stdout)");
    cmd->add_option("--seed", common.seed, "Seed recorded in the output (used by simulate)");
}

void add_grid(CLI::App* cmd, GridOptions& grid)
{
    cmd->add_option("--min", grid.min, "Grid lower end");
    cmd->add_option("--max", grid.max, "Grid upper end");
    cmd->add_option("--count", grid.count, "Number of grid points");
    cmd->add_flag("--log", grid.log, "Logarithmic spacing");
}

/// Explicit values win; otherwise the grid flags (with defaults) are used.
std::vector<double> resolve_grid(const std::vector<double>& explicit_values, const GridOptions& grid,
                                 double default_min, double default_max, std::size_t default_count,
                                 bool default_log)
{
    if (!explicit_values.empty()) {
        return explicit_values;
    }
    const double lo = grid.min.value_or(default_min);
    const double hi = grid.max.value_or(default_max);
    const std::size_t count = grid.count > 0 ? grid.count : default_count;
    const bool log = grid.log || (default_log && !grid.min && !grid.max && grid.count == 0);
    if (!(hi >= lo)) {
        throw lsw::DomainError("grid: --max must be >= --min");
    }
    if (log) {
        return lsw::log_grid(lo, hi, count);
    }
    std::vector<double> out(count, lo);
    for (std::size_t i = 1; i < count; ++i) {
        out[i] = i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

std::string comment_line(std::uint64_t seed)
{
    return g_invocation + " | version " + std::string(lsw::version) + " | seed " + std::to_string(seed);
}

void write_table(const std::string& command, const CommonOptions& common, const Table& table)
{
    std::ostringstream os;
    if (common.format == "json") {
        ordered_json doc;
        doc["command"] = command;
        doc["regime"] = common.regime;
        doc["invocation"] = g_invocation;
        doc["version"] = lsw::version;
        doc["seed"] = common.seed;
        doc["columns"] = table.columns;
        doc["rows"] = table.rows;
        doc["summary"] = table.summary;
        os << doc.dump(2) << '\n';
    }
    else {
        lsw::io::write_csv_header(os, comment_line(common.seed), table.columns);
        for (const auto& row : table.rows) {
            lsw::io::write_csv_row(os, row);
        }
    }
    if (common.out == "-") {
        std::cout << os.str();
        std::cout.flush();
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file " + common.out);
    }
    file << os.str();
}

Table run_tau(const lsw::Regime& regime, const std::vector<double>& z)
{
    Table t;
    t.columns = {"z", "tau", "alpha", "dz_dtau"};
    double best_alpha = -INFINITY;
    double best_z = NAN;
    for (double x : z) {
        const double a = lsw::alpha(regime, x);
        t.rows.push_back({x, lsw::tau_of_z(regime, x), a, lsw::growth_rate_scaled(regime, x)});
        if (a > best_alpha) {
            best_alpha = a;
            best_z = x;
        }
    }
    t.summary["z_max"] = regime.z_max();
    t.summary["alpha_at_critical"] = lsw::alpha(regime, 1.0);
    t.summary["argmax_alpha_on_grid"] = best_z;
    return t;
}

Table run_return(const lsw::Regime& regime, const std::vector<double>& values, bool by_z0)
{
    Table t;
    t.columns = {"z0", "rho", "s"};
    for (double v : values) {
        const lsw::ReturnPoint p = by_z0 ? lsw::make_return_point(regime, v) : lsw::return_point_at(regime, v);
        t.rows.push_back({p.z0, p.z_return, p.s});
    }
    t.summary["gamma"] = regime.gamma();
    t.summary["rho_prime_at_one"] = lsw::rho_prime_at_one(regime);
    t.summary["ds_dz0_at_one"] = 2.0 * regime.gamma();
    return t;
}

Table run_phi(const lsw::Regime& regime, const std::vector<double>& s_grid)
{
    Table t;
    t.columns = {"s", "phi"};
    const lsw::PhiCurve curve = lsw::phi_curve(regime, s_grid);
    for (const auto& sample : curve.samples) {
        t.rows.push_back({sample.s, sample.phi});
    }
    const lsw::SizeDistribution& dist = lsw::standard_distribution(regime);
    t.summary["initial_rate"] = lsw::phi_initial_rate(dist);
    t.summary["third_moment"] = dist.third_moment();
    t.summary["h_at_critical"] = lsw::h(regime, 1.0);
    return t;
}

Table run_dist(const lsw::Regime& regime, const std::vector<double>& z)
{
    const lsw::SizeDistribution& dist = lsw::standard_distribution(regime);
    Table t;
    t.columns = {"z", "h", "cdf"};
    for (double x : z) {
        t.rows.push_back({x, lsw::h(regime, x), dist.cdf(x)});
    }
    std::vector<double> moments;
    for (int k = 0; k <= 3; ++k) {
        moments.push_back(dist.moment(k));
    }
    t.summary["moments"] = moments;
    t.summary["z_max"] = regime.z_max();
    return t;
}

struct SimulateOptions {
    std::size_t n = 20000;
    double critical0 = 1.0;
    double t0 = 0.0;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    double step_cap = 1e-3;
    std::string out_dir;
};

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    file << content;
}

void run_simulate(const lsw::Regime& regime, const CommonOptions& common, SimulateOptions opts)
{
    if (!(opts.t0 >= 0.0) || !(opts.t_end > opts.t0)) {
        throw lsw::DomainError("simulate: requires 0 <= t0 < t_end");
    }
    std::vector<double> times = opts.snapshot_times;
    times.push_back(opts.t0);
    times.push_back(opts.t_end);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (double t : times) {
        if (t < opts.t0 || t > opts.t_end) {
            throw lsw::DomainError("simulate: snapshot time " + lsw::io::format_double(t) + " outside [t0, t_end]");
        }
    }

    lsw::EnsembleOptions eopts;
    eopts.step_cap = opts.step_cap;
    lsw::Ensemble ensemble = lsw::init_ensemble(regime, opts.n, opts.critical0, common.seed, eopts);
    const lsw::RunResult result = ensemble.run(opts.t_end, times);

    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    const std::string comment = comment_line(common.seed);

    ordered_json report;
    report["command"] = "simulate";
    report["regime"] = regime.name();
    report["invocation"] = g_invocation;
    report["version"] = lsw::version;
    report["seed"] = common.seed;
    report["n_initial"] = opts.n;
    report["r_c0"] = opts.critical0;
    report["t0"] = opts.t0;
    report["t_end"] = opts.t_end;
    report["step_cap"] = opts.step_cap;
    report["clock_offset"] = lsw::late_stage_clock(regime, opts.critical0, 0.0);
    report["n_final"] = ensemble.size();
    report["conservation_residual"] = ensemble.conservation_residual();
    report["lost_volume"] = ensemble.lost_volume();
    report["rc_power_slope"] = lsw::fit_rc_power_slope(regime, result.series);
    report["rc_power_slope_expected"] = regime.coarsening_rate();

    ordered_json files = ordered_json::array();
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        std::ostringstream os;
        lsw::io::write_snapshot_csv(os, result.snapshots[k], comment);
        const std::string name = "snapshot_" + std::to_string(k) + ".csv";
        write_file(dir / name, os.str());
        files.push_back({{"file", name}, {"t", result.snapshots[k].t}, {"n", result.snapshots[k].radii.size()}});
    }
    report["snapshots"] = files;
    {
        std::ostringstream os;
        lsw::io::write_series_csv(os, result.series, comment);
        write_file(dir / "series.csv", os.str());
    }

    const lsw::Snapshot& base = result.snapshots.front();
    const double clock0 = lsw::late_stage_clock(regime, opts.critical0, base.t);
    const double rc_at_t0 = lsw::critical_radius(regime, opts.critical0, base.t);
    const lsw::SizeDistribution& dist = lsw::standard_distribution(regime);
    ordered_json comparisons = ordered_json::array();
    for (std::size_t k = 1; k < result.snapshots.size(); ++k) {
        const lsw::Snapshot& snap = result.snapshots[k];
        const double s = lsw::late_stage_clock(regime, opts.critical0, snap.t) / clock0;
        const lsw::NewVolume nv = lsw::measure_new_volume(base, snap);
        const lsw::EmpiricalReturn er = lsw::empirical_return_radius(base, snap);
        const double phi_analytic = lsw::phi(dist, s);
        const double r_analytic = lsw::return_z0(regime, s) * rc_at_t0;
        comparisons.push_back({{"t", snap.t},
                               {"s", s},
                               {"n", snap.radii.size()},
                               {"new_volume", nv.volume},
                               {"phi_empirical", nv.fraction},
                               {"phi_analytic", phi_analytic},
                               {"phi_relative_error", nv.fraction / phi_analytic - 1.0},
                               {"return_radius_empirical", er.radius},
                               {"return_radius_analytic", r_analytic},
                               {"return_radius_relative_error", er.radius / r_analytic - 1.0},
                               {"order_preserved", er.ordered}});
    }
    report["comparisons"] = comparisons;

    std::vector<double> radii;
    for (const auto& [id, r] : result.snapshots.back().radii) {
        radii.push_back(r);
    }
    const double rc_final = lsw::mean_field(regime, radii).critical_radius;
    for (double& r : radii) {
        r /= rc_final;
    }
    report["ks_distance_final"] = lsw::ks_distance(dist, radii);

    write_file(dir / "report.json", report.dump(2) + "\n");
}

std::string join_invocation(int argc, char** argv)
{
    std::string out = "lsw";
    for (int i = 1; i < argc; ++i) {
        out += ' ';
        out += argv[i];
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    g_invocation = join_invocation(argc, argv);

    CLI::App app{"LSW Ostwald ripening: return radius, recrystallized fraction and ensemble simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lsw::version));

    CommonOptions common;
    GridOptions grid;
    std::vector<double> z_values;
    std::vector<double> s_values;
    std::vector<double> z0_values;
    std::string grid_var = "s";
    SimulateOptions sim;

    CLI::App* tau = app.add_subcommand("tau", "tau(z), alpha(z) and dz/dtau on a z grid");
    add_common(tau, common);
    add_grid(tau, grid);
    tau->add_option("--z", z_values, "Explicit z values")->delimiter(',');

    CLI::App* ret = app.add_subcommand("return", "Return map: z0, rho(z0) and s = t/t0");
    add_common(ret, common);
    add_grid(ret, grid);
    ret->add_option("--s", s_values, "Explicit time ratios s >= 1")->delimiter(',');
    ret->add_option("--z0", z0_values, "Explicit initial rescaled radii z0 in [1, z_max)")->delimiter(',');
    ret->add_option("--grid-var", grid_var, "Variable spanned by --min/--max/--count")
        ->check(CLI::IsMember({"s", "z0"}));

    CLI::App* phi = app.add_subcommand("phi", "Recrystallized volume fraction phi(s)");
    add_common(phi, common);
    add_grid(phi, grid);
    phi->add_option("--s", s_values, "Explicit time ratios s >= 1")->delimiter(',');

    CLI::App* dist = app.add_subcommand("dist", "Scaled size distribution h(z), its CDF and moments");
    add_common(dist, common);
    add_grid(dist, grid);
    dist->add_option("--z", z_values, "Explicit z values")->delimiter(',');

    CLI::App* simulate = app.add_subcommand("simulate", "Direct N-particle mean-field simulation");
    add_common(simulate, common);
    simulate->add_option("--n", sim.n, "Number of particles");
    simulate->add_option("--r-c0", sim.critical0, "Initial critical radius");
    simulate->add_option("--t0", sim.t0, "Reference time t0 for the new-volume comparison");
    simulate->add_option("--t-end", sim.t_end, "End time")->required();
    simulate->add_option("--snapshot-times", sim.snapshot_times, "Snapshot times (t0 and t-end always included)")
        ->delimiter(',');
    simulate->add_option("--step-cap", sim.step_cap, "Bound on |dR|/R per step for bulk particles");
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const lsw::Regime regime = lsw::Regime::parse(common.regime);
        if (*tau) {
            const double hi = regime.z_max() - 1e-3;
            write_table("tau", common, run_tau(regime, resolve_grid(z_values, grid, 0.01, hi, 100, false)));
        }
        else if (*ret) {
            if (!z0_values.empty()) {
                write_table("return", common, run_return(regime, z0_values, true));
            }
            else if (!s_values.empty()) {
                write_table("return", common, run_return(regime, s_values, false));
            }
            else if (grid_var == "z0") {
                const double hi = regime.z_max() - 1e-6;
                write_table("return", common, run_return(regime, resolve_grid({}, grid, 1.0, hi, 100, false), true));
            }
            else {
                write_table("return", common, run_return(regime, resolve_grid({}, grid, 1.0, 1000.0, 200, true), false));
            }
        }
        else if (*phi) {
            write_table("phi", common, run_phi(regime, resolve_grid(s_values, grid, 1.0, 1000.0, 200, true)));
        }
        else if (*dist) {
            write_table("dist", common, run_dist(regime, resolve_grid(z_values, grid, 0.0, regime.z_max(), 201, false)));
        }
        else if (*simulate) {
            run_simulate(regime, common, sim);
        }
    }
    catch (const lsw::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    }
    catch (const lsw::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    }
    catch (const lsw::BracketError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    }
    catch (const lsw::IntegrationError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return 3;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
